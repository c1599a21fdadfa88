#![allow(dead_code)]

use std::sync::Arc;

use pointderiv_core::{Coeff, Context, Order, Series, SymbolId};
use proptest::prelude::*;

pub fn ctx() -> Arc<Context> {
    Context::standard()
}

pub fn id(name: &str) -> SymbolId {
    ctx().lookup(name).unwrap()
}

fn rational() -> impl Strategy<Value = Coeff> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Coeff::new(n.into(), d.into()))
}

fn word(max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..4, 0..=max_len)
}

/// Exact polynomials over `a b x y` with words of length at most `max_len`.
pub fn poly(max_len: usize) -> impl Strategy<Value = Series> {
    prop::collection::vec((word(max_len), rational()), 0..5).prop_map(|terms| {
        let ctx = ctx();
        let ids: Vec<SymbolId> = ctx.ids().collect();
        let terms = terms
            .into_iter()
            .map(|(w, c)| (ctx.word_from_ids(w.into_iter().map(|i| ids[i]).collect()), c));
        Series::from_terms(&ctx, terms, Order::Infinite).unwrap()
    })
}

/// Polynomials in `x` alone.
pub fn x_poly(max_len: u32) -> impl Strategy<Value = Series> {
    prop::collection::vec((0..=max_len, rational()), 0..4).prop_map(|terms| {
        let ctx = ctx();
        let x = id("x");
        let terms = terms
            .into_iter()
            .map(|(k, c)| (ctx.word_from_ids(vec![x; k as usize]), c));
        Series::from_terms(&ctx, terms, Order::Infinite).unwrap()
    })
}

/// Either an exact polynomial or one truncated at a finite order.
pub fn series(max_len: usize) -> impl Strategy<Value = Series> {
    (poly(max_len), prop::option::of(0u32..=max_len as u32 + 1)).prop_map(|(f, cut)| match cut {
        Some(n) => f.truncate(n),
        None => f,
    })
}

/// Independent reference: every occurrence of `var` in every word replaced by
/// every word of `beta`, computed on symbol names.
pub fn naive_derivative(f: &Series, var: &str, beta: &Series) -> Series {
    let ctx = f.context();
    let mut terms = Vec::new();
    for (w, c) in f.terms() {
        let names: Vec<&str> = w.letters().iter().map(|&l| ctx.name(l)).collect();
        for p in 0..names.len() {
            if names[p] != var {
                continue;
            }
            for (bw, bc) in beta.terms() {
                let mut out: Vec<&str> = names[..p].to_vec();
                out.extend(bw.letters().iter().map(|&l| ctx.name(l)));
                out.extend(&names[p + 1..]);
                terms.push((ctx.word(&out).unwrap(), c * bc));
            }
        }
    }
    Series::from_terms(ctx, terms, Order::Infinite).unwrap()
}
