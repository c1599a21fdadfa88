//! Point-derivatives.
//!
//! The derivative of `f` with respect to the variable `x` at the point `beta`
//! replaces, one occurrence at a time, each `x` in each word of `f` by `beta`
//! and sums the results:
//!
//! ```text
//! D(w) = sum over positions p with w[p] = x of  w[..p] · beta · w[p+1..]
//! ```
//!
//! Every other letter, including other variables, behaves like a constant, so
//! the same operator is the partial derivative in the multivariable algebra.
//!
//! Three algorithms are kept side by side and must agree:
//! the positional insertion above ([`point_derivative`]), the block-wise
//! expansion of `c1 x^i1 c2 x^i2 ... cn x^in c(n+1)` ([`grouped_derivative`]),
//! and the letter-by-letter Leibniz recursion
//! ([`leibniz_oracle_derivative`]).

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::alphabet::{Context, SymbolId, SymbolKind, Word};
use crate::error::{Error, Result};
use crate::series::{Coeff, Order, Series};

/// A variable together with the point of derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeSpec {
    variable: SymbolId,
    beta: Series,
}

impl DerivativeSpec {
    pub fn new(variable: SymbolId, beta: Series) -> Result<Self> {
        beta.context().variable(variable)?;
        Ok(DerivativeSpec { variable, beta })
    }

    /// `beta = 1`, the Hausdorff derivative.
    pub fn hausdorff(ctx: &Arc<Context>, variable: SymbolId) -> Result<Self> {
        Self::new(variable, Series::one(ctx))
    }

    pub fn variable(&self) -> SymbolId {
        self.variable
    }

    pub fn beta(&self) -> &Series {
        &self.beta
    }
}

/// Which implementation of the derivative to run.
///
/// Besides the reference there are three deliberately wrong variants. The
/// checking suites must reject each of them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Engine {
    #[default]
    Reference,
    /// Omits the insertion at the first occurrence of the variable, i.e. the
    /// trailing `beta x^(i-1)` summand of the power expansion. On `x^2` it
    /// yields `x beta` instead of `x beta + beta x`.
    DropLastInsertion,
    /// Inserts `beta · suffix`, losing the prefix.
    ForgetPrefix,
    /// Leibniz recursion computing `w · d(s)` in place of `d(s) · w`.
    SwapLeibnizOperands,
}

impl Engine {
    pub const ALL: [Engine; 4] = [
        Engine::Reference,
        Engine::DropLastInsertion,
        Engine::ForgetPrefix,
        Engine::SwapLeibnizOperands,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Reference => "reference",
            Engine::DropLastInsertion => "drop-last-insertion",
            Engine::ForgetPrefix => "forget-prefix",
            Engine::SwapLeibnizOperands => "swap-leibniz-operands",
        }
    }

    pub fn from_name(name: &str) -> Option<Engine> {
        Engine::ALL.into_iter().find(|e| e.name() == name)
    }

    /// Positional insertion form.
    pub fn point_derivative(self, f: &Series, spec: &DerivativeSpec) -> Result<Series> {
        let (ctx, f, beta) = prepare(f, spec)?;
        let valid = derivative_order(&f, &beta)?;
        let mut terms = BTreeMap::new();
        for (w, c) in f.terms() {
            let first = w.letters().iter().position(|&l| l == spec.variable);
            for (p, _) in w
                .letters()
                .iter()
                .enumerate()
                .filter(|(_, &l)| l == spec.variable)
            {
                let skip = self == Engine::DropLastInsertion && Some(p) == first;
                if skip {
                    continue;
                }
                let prefix = if self == Engine::ForgetPrefix {
                    &[][..]
                } else {
                    &w.letters()[..p]
                };
                insert_products(&mut terms, &ctx, prefix, &beta, &w.letters()[p + 1..], c, valid);
            }
        }
        Ok(Series::from_map(ctx, terms, valid))
    }

    /// Block-wise expansion: for `x^i` inside `c1 x^i1 ... x^in c(n+1)`,
    /// `x^(i-1) beta + x^(i-2) beta x + ... + beta x^(i-1)`.
    pub fn grouped_derivative(self, f: &Series, spec: &DerivativeSpec) -> Result<Series> {
        let (ctx, f, beta) = prepare(f, spec)?;
        let valid = derivative_order(&f, &beta)?;
        let x = spec.variable;
        let mut terms = BTreeMap::new();
        for (w, c) in f.terms() {
            for block in power_blocks(w.letters(), x) {
                let head = &w.letters()[..block.start];
                let tail = &w.letters()[block.start + block.len..];
                for j in 0..block.len {
                    // x^(len-1-j) · beta · x^j
                    let mut left = head.to_vec();
                    left.extend(core::iter::repeat_n(x, block.len - 1 - j));
                    let mut right: Vec<SymbolId> = core::iter::repeat_n(x, j).collect();
                    right.extend_from_slice(tail);
                    insert_products(&mut terms, &ctx, &left, &beta, &right, c, valid);
                }
            }
        }
        Ok(Series::from_map(ctx, terms, valid))
    }

    /// `d(empty) = 0`, `d(s · w) = d(s) · w + s · d(w)` with `d(x) = beta` and
    /// `d(letter) = 0` otherwise, evaluated with series arithmetic.
    pub fn leibniz_derivative(self, f: &Series, spec: &DerivativeSpec) -> Result<Series> {
        let (ctx, f, beta) = prepare(f, spec)?;
        let valid = derivative_order(&f, &beta)?;
        let mut acc = Series::zero(&ctx);
        for (w, c) in f.terms() {
            let d = self.leibniz_word(&ctx, w.letters(), spec.variable, &beta)?;
            acc = acc.add(&d.scale(c))?;
        }
        Ok(acc.with_valid_order(valid))
    }

    fn leibniz_word(self, ctx: &Arc<Context>, letters: &[SymbolId], x: SymbolId, beta: &Series) -> Result<Series> {
        let Some((&s, rest)) = letters.split_first() else {
            return Ok(Series::zero(ctx));
        };
        let head = Series::letter(ctx, s)?;
        let tail = Series::monomial(ctx, ctx.word_from_ids(rest.to_vec()), Coeff::from_integer(1.into()));
        let ds = if s == x { beta.clone() } else { Series::zero(ctx) };
        let left = if self == Engine::SwapLeibnizOperands {
            tail.mul(&ds)?
        } else {
            ds.mul(&tail)?
        };
        let right = head.mul(&self.leibniz_word(ctx, rest, x, beta)?)?;
        left.add(&right)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Block {
    start: usize,
    len: usize,
}

/// Maximal runs of `x` in a word; empty when `x` does not occur.
fn power_blocks(letters: &[SymbolId], x: SymbolId) -> Vec<Block> {
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        if letters[i] != x {
            i += 1;
            continue;
        }
        let start = i;
        while i < letters.len() && letters[i] == x {
            i += 1;
        }
        blocks.push(Block {
            start,
            len: i - start,
        });
    }
    blocks
}

fn insert_products(
    terms: &mut BTreeMap<Word, Coeff>,
    ctx: &Context,
    prefix: &[SymbolId],
    beta: &Series,
    suffix: &[SymbolId],
    c: &Coeff,
    valid: Order,
) {
    let outer = prefix
        .iter()
        .chain(suffix)
        .filter(|&&id| ctx.kind(id) == SymbolKind::Variable)
        .count() as u32;
    for (bw, bc) in beta.terms() {
        if !valid.admits(outer + bw.degree()) {
            continue;
        }
        let word = Word::splice(prefix, bw, suffix, outer);
        *terms.entry(word).or_insert_with(Coeff::zero) += c * bc;
    }
}

fn prepare(f: &Series, spec: &DerivativeSpec) -> Result<(Arc<Context>, Series, Series)> {
    let ctx = Context::unify(f.context(), spec.beta.context())?;
    ctx.variable(spec.variable)?;
    Ok((Arc::clone(&ctx), f.rehome(&ctx)?, spec.beta.rehome(&ctx)?))
}

/// `min(valid(f) - 1 + min_degree_bound(beta), valid(beta))`, infinity absorbing.
fn derivative_order(f: &Series, beta: &Series) -> Result<Order> {
    let shifted = match (f.valid_order(), beta.min_degree_bound()) {
        (Order::Finite(n), Order::Finite(m)) => {
            if n + m == 0 {
                return Err(Error::InsufficientPrecision {
                    requested: Order::Finite(0),
                    available: f.valid_order(),
                });
            }
            Order::Finite(n + m - 1)
        }
        _ => Order::Infinite,
    };
    Ok(shifted.min(beta.valid_order()))
}

pub fn point_derivative(f: &Series, spec: &DerivativeSpec) -> Result<Series> {
    Engine::Reference.point_derivative(f, spec)
}

pub fn grouped_derivative(f: &Series, spec: &DerivativeSpec) -> Result<Series> {
    Engine::Reference.grouped_derivative(f, spec)
}

pub fn leibniz_oracle_derivative(f: &Series, spec: &DerivativeSpec) -> Result<Series> {
    Engine::Reference.leibniz_derivative(f, spec)
}

pub fn hausdorff_derivative(f: &Series, variable: SymbolId) -> Result<Series> {
    point_derivative(f, &DerivativeSpec::hausdorff(f.context(), variable)?)
}

/// `outer(inner(f))`.
pub fn second_partial(f: &Series, outer: &DerivativeSpec, inner: &DerivativeSpec) -> Result<Series> {
    point_derivative(&point_derivative(f, inner)?, outer)
}

/// Derivative with a fresh constant marking each insertion site.
///
/// Substituting the placeholder by `beta` afterwards gives
/// `point_derivative(f, {variable, beta})`.
pub fn placeholder_derivative(f: &Series, variable: SymbolId, placeholder: SymbolId) -> Result<Series> {
    let ctx = f.context();
    let symbol = ctx.symbol(placeholder)?;
    if symbol.is_variable() {
        return Err(Error::NotAConstant(symbol.name().into()));
    }
    if f.contains_letter(placeholder) {
        return Err(Error::PlaceholderCollision(symbol.name().into()));
    }
    let marker = Series::letter(ctx, placeholder)?;
    point_derivative(f, &DerivativeSpec::new(variable, marker)?)
}
