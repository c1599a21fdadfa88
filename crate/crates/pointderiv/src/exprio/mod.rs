//! Text and JSON forms of series and check reports.

mod encode;
mod parse;
mod print;

pub use encode::{
    decode_reports, decode_series, encode_reports, encode_series, DecodeError, FORMAT_VERSION,
};
pub use parse::{
    format_program, parse_program, parse_program_with_order, ParseError, ParseErrorKind, Program,
    DEFAULT_ORDER,
};
pub use print::{print_full, print_series};
