//! Canonical text form of series.
//!
//! Terms appear in graded-lexicographic order, a unit coefficient is elided on
//! non-empty words, and a finite validity order is written as a trailing
//! `O(deg>n)` term. The output is accepted back by the program grammar.

use alloc::format;
use alloc::string::String;
use core::fmt;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::series::{Order, Series};

impl Series {
    /// Renders every term up to `limit`, which may not exceed the validity order.
    pub fn render(&self, limit: Order) -> Result<String> {
        if limit > self.valid_order() {
            return Err(Error::InsufficientPrecision {
                requested: limit,
                available: self.valid_order(),
            });
        }
        let ctx = self.context();
        let mut out = String::new();
        for (word, c) in self.canonical_terms() {
            if !limit.admits(word.degree()) {
                continue;
            }
            let negative = c.is_negative();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let magnitude = c.abs();
            if word.is_empty() {
                out.push_str(&format!("{magnitude}"));
            } else {
                if !magnitude.is_one() {
                    out.push_str(&format!("{magnitude} "));
                }
                out.push_str(&ctx.format_word(word));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        if let Order::Finite(n) = limit {
            out.push_str(&format!(" + O(deg>{n})"));
        }
        Ok(out)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = self
            .render(self.valid_order())
            .expect("own validity order is always renderable");
        f.write_str(&text)
    }
}
