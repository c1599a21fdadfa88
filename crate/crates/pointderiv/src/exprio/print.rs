use pointderiv_core::{Order, Result, Series};

/// Canonical text of `f` up to `limit`, which may not exceed its validity
/// order. Finite limits end in an `O(deg>n)` term.
pub fn print_series(f: &Series, limit: impl Into<Order>) -> Result<String> {
    f.render(limit.into())
}

/// Canonical text of `f` at its own validity order.
pub fn print_full(f: &Series) -> String {
    f.to_string()
}
