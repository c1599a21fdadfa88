//! Truncated noncommutative power series with exact rational coefficients.
//!
//! Invariants of [`Series`]:
//! - no stored coefficient is zero
//! - every stored word has variable degree `<= valid_order`
//! - coefficients on words of degree `<= valid_order` are exact; words above
//!   it are unknown
//! - an exact polynomial has `valid_order == Order::Infinite`

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::alphabet::{Context, SymbolId, Word};
use crate::error::{Error, Result};

/// Exact coefficient; `Ratio` keeps it reduced with a positive denominator.
pub type Coeff = BigRational;

pub fn coeff(n: i64, d: i64) -> Coeff {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

/// A truncation order: a natural number or infinity.
///
/// Also used for minimum degrees, where the zero series has degree `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn is_finite(self) -> bool {
        matches!(self, Order::Finite(_))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    /// Addition with infinity absorbing.
    pub fn plus(self, other: Order) -> Order {
        match (self, other) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            _ => Order::Infinite,
        }
    }

    pub fn admits(self, degree: u32) -> bool {
        match self {
            Order::Finite(n) => degree <= n,
            Order::Infinite => true,
        }
    }
}

impl From<u32> for Order {
    fn from(n: u32) -> Self {
        Order::Finite(n)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Series {
    ctx: Arc<Context>,
    terms: BTreeMap<Word, Coeff>,
    valid: Order,
}

/// Structural equality: same alphabet, same terms, same validity order.
impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.valid == other.valid && self.terms == other.terms
    }
}

impl Eq for Series {}

impl Series {
    /// The zero series. All of its coefficients are known.
    pub fn zero(ctx: &Arc<Context>) -> Self {
        Series {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
            valid: Order::Infinite,
        }
    }

    pub fn one(ctx: &Arc<Context>) -> Self {
        Self::scalar(ctx, Coeff::one())
    }

    pub fn scalar(ctx: &Arc<Context>, c: Coeff) -> Self {
        Self::monomial(ctx, Word::empty(), c)
    }

    pub fn monomial(ctx: &Arc<Context>, word: Word, c: Coeff) -> Self {
        let mut s = Self::zero(ctx);
        if !c.is_zero() {
            s.terms.insert(word, c);
        }
        s
    }

    /// The series consisting of a single letter.
    pub fn letter(ctx: &Arc<Context>, id: SymbolId) -> Result<Self> {
        ctx.symbol(id)?;
        Ok(Self::monomial(ctx, ctx.word_from_ids(alloc::vec![id]), Coeff::one()))
    }

    /// Collects terms, summing repeated words and dropping zeros and words
    /// above `valid`.
    pub fn from_terms<I>(ctx: &Arc<Context>, terms: I, valid: Order) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Coeff)>,
    {
        let mut map: BTreeMap<Word, Coeff> = BTreeMap::new();
        for (w, c) in terms {
            if let Some(&bad) = w.letters().iter().find(|id| id.index() >= ctx.len()) {
                return Err(Error::UnknownSymbolId(bad.0));
            }
            if valid.admits(w.degree()) {
                *map.entry(w).or_insert_with(Coeff::zero) += c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Series {
            ctx: Arc::clone(ctx),
            terms: map,
            valid,
        })
    }

    pub(crate) fn from_map(ctx: Arc<Context>, mut terms: BTreeMap<Word, Coeff>, valid: Order) -> Self {
        terms.retain(|w, c| !c.is_zero() && valid.admits(w.degree()));
        Series { ctx, terms, valid }
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn valid_order(&self) -> Order {
        self.valid
    }

    pub fn is_exact(&self) -> bool {
        self.valid == Order::Infinite
    }

    /// Empty support. A truncated series may have empty support and still be
    /// unknown above its validity order.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coeff)> {
        self.terms.iter()
    }

    /// Stored coefficient, zero for absent words. Does not check validity.
    pub fn coeff(&self, word: &Word) -> Coeff {
        self.terms.get(word).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Terms in graded-lexicographic order on symbol names.
    pub fn canonical_terms(&self) -> Vec<(&Word, &Coeff)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_cached_key(|(w, _)| self.ctx.canonical_key(w));
        terms
    }

    /// Smallest variable degree in the support, `Infinite` for the zero series.
    pub fn min_degree(&self) -> Order {
        // BTreeMap order is by degree first.
        self.terms
            .keys()
            .next()
            .map_or(Order::Infinite, |w| Order::Finite(w.degree()))
    }

    /// Lower bound on the degree of every word of the series the truncation
    /// stands for: the unknown tail only has words above the validity order.
    pub fn min_degree_bound(&self) -> Order {
        self.min_degree().min(self.valid.plus(Order::Finite(1)))
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|w| w.degree())
    }

    pub fn contains_letter(&self, id: SymbolId) -> bool {
        self.terms.keys().any(|w| w.contains(id))
    }

    /// Same series viewed in a context that extends (or is extended by) the
    /// current one. Fails when a stored letter would fall outside `ctx`.
    pub fn rehome(&self, ctx: &Arc<Context>) -> Result<Series> {
        if Arc::ptr_eq(&self.ctx, ctx) {
            return Ok(self.clone());
        }
        let shorter = if self.ctx.len() <= ctx.len() { &self.ctx } else { ctx };
        let longer = if self.ctx.len() <= ctx.len() { ctx } else { &self.ctx };
        if !shorter.is_prefix_of(longer) {
            return Err(Error::ContextMismatch);
        }
        if let Some(&bad) = self
            .terms
            .keys()
            .flat_map(|w| w.letters())
            .find(|id| id.index() >= ctx.len())
        {
            return Err(Error::UnknownSymbolId(bad.0));
        }
        Ok(Series {
            ctx: Arc::clone(ctx),
            terms: self.terms.clone(),
            valid: self.valid,
        })
    }

    fn unified(&self, other: &Series) -> Result<Arc<Context>> {
        Context::unify(&self.ctx, &other.ctx)
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        let ctx = self.unified(other)?;
        let valid = self.valid.min(other.valid);
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            *terms.entry(w.clone()).or_insert_with(Coeff::zero) += c;
        }
        Ok(Series::from_map(ctx, terms, valid))
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        Series {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
            valid: self.valid,
        }
    }

    pub fn scale(&self, c: &Coeff) -> Series {
        if c.is_zero() {
            return Series {
                ctx: Arc::clone(&self.ctx),
                terms: BTreeMap::new(),
                valid: self.valid,
            };
        }
        Series {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
            valid: self.valid,
        }
    }

    /// Noncommutative product. The result is valid up to
    /// `min(valid(f) + min_degree(g), valid(g) + min_degree(f))`, with the
    /// degree bounds of [`Series::min_degree_bound`].
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.mul_capped(other, Order::Infinite)
    }

    /// Product with every word above `cap` discarded; the result's validity
    /// order is at most `cap`.
    pub(crate) fn mul_capped(&self, other: &Series, cap: Order) -> Result<Series> {
        let ctx = self.unified(other)?;
        let valid = self
            .valid
            .plus(other.min_degree_bound())
            .min(other.valid.plus(self.min_degree_bound()))
            .min(cap);
        let mut terms: BTreeMap<Word, Coeff> = BTreeMap::new();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                if !valid.admits(w1.degree() + w2.degree()) {
                    continue;
                }
                *terms.entry(w1.concat(w2)).or_insert_with(Coeff::zero) += c1 * c2;
            }
        }
        Ok(Series::from_map(ctx, terms, valid))
    }

    pub fn pow(&self, k: u32) -> Result<Series> {
        let mut acc = Series::one(&self.ctx);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Drops every word above degree `n` and lowers the validity order to `n`.
    pub fn truncate(&self, n: u32) -> Series {
        let valid = self.valid.min(Order::Finite(n));
        Series::from_map(Arc::clone(&self.ctx), self.terms.clone(), valid)
    }

    pub(crate) fn with_valid_order(mut self, valid: Order) -> Series {
        self.valid = self.valid.min(valid);
        let v = self.valid;
        self.terms.retain(|w, _| v.admits(w.degree()));
        self
    }

    /// Coefficient agreement on every word of degree `<= n`.
    ///
    /// Errors rather than compare coefficients that are not trusted on both sides.
    pub fn eq_up_to(&self, other: &Series, n: u32) -> Result<bool> {
        Context::unify(&self.ctx, &other.ctx)?;
        let available = self.valid.min(other.valid);
        if !available.admits(n) {
            return Err(Error::InsufficientPrecision {
                requested: Order::Finite(n),
                available,
            });
        }
        let upto = |map: &BTreeMap<Word, Coeff>| {
            map.iter()
                .filter(|(w, _)| w.degree() <= n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect::<BTreeMap<_, _>>()
        };
        Ok(upto(&self.terms) == upto(&other.terms))
    }

    /// The first word (canonical order) of degree within both validity orders
    /// where `self` and `other` differ.
    pub fn first_difference(&self, other: &Series) -> Result<Option<Word>> {
        let diff = self.sub(other)?;
        Ok(diff
            .canonical_terms()
            .into_iter()
            .next()
            .map(|(w, _)| w.clone()))
    }
}

/// `1 + g + g^2 + ...` truncated at degree `n`, i.e. `(1 - g)^{-1}`.
///
/// `g` must have no degree-zero words, otherwise infinitely many words of
/// degree zero would appear.
pub fn geometric_inverse(g: &Series, n: u32) -> Result<Series> {
    if g.min_degree_bound() < Order::Finite(1) {
        return Err(Error::NonconvergentSubstitution(
            "geometric inverse of a series with a degree-zero term".into(),
        ));
    }
    let target = g.valid.min(Order::Finite(n));
    let mut acc = Series::one(&g.ctx);
    let mut power = Series::one(&g.ctx);
    // g^k has minimum degree >= k, so k <= n covers everything below the cap.
    for _ in 0..n {
        power = power.mul_capped(g, target)?;
        if power.is_empty() {
            break;
        }
        acc = acc.add(&power)?;
    }
    Ok(acc.with_valid_order(target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::SymbolKind;

    fn ctx() -> Arc<Context> {
        Context::standard()
    }

    fn var(ctx: &Arc<Context>, name: &str) -> Series {
        Series::letter(ctx, ctx.resolve(name).unwrap()).unwrap()
    }

    fn mono(ctx: &Arc<Context>, names: &[&str], c: i64) -> Series {
        Series::monomial(ctx, ctx.word(names).unwrap(), int(c))
    }

    #[test]
    fn add_examples() {
        let c = ctx();
        let x = var(&c, "x");
        let a = var(&c, "a");
        let zero = x.add(&x.neg()).unwrap();
        assert!(zero.is_zero());
        assert!(zero.is_exact());
        let s = x.add(&a).unwrap().add(&x).unwrap();
        assert_eq!(s, mono(&c, &["x"], 2).add(&a).unwrap());
        let trunc = x.truncate(5);
        assert_eq!(trunc.add(&a).unwrap().valid_order(), Order::Finite(5));
    }

    #[test]
    fn mul_examples() {
        let c = ctx();
        let x = var(&c, "x");
        let a = var(&c, "a");
        let xa = x.mul(&a).unwrap();
        let ax = a.mul(&x).unwrap();
        assert_eq!(xa, mono(&c, &["x", "a"], 1));
        assert_eq!(ax, mono(&c, &["a", "x"], 1));
        assert_ne!(xa, ax);

        let one_x = Series::one(&c).add(&x).unwrap();
        let sq = one_x.mul(&one_x).unwrap();
        let expected = Series::one(&c)
            .add(&mono(&c, &["x"], 2))
            .unwrap()
            .add(&mono(&c, &["x", "x"], 1))
            .unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn mul_propagates_validity() {
        let c = ctx();
        let f = var(&c, "a").add(&var(&c, "x")).unwrap().truncate(3);
        let b = var(&c, "b");
        let p = f.mul(&b).unwrap();
        assert_eq!(p.valid_order(), Order::Finite(3));
        // full product of untruncated representatives agrees up to 3
        let full = var(&c, "a").add(&var(&c, "x")).unwrap().mul(&b).unwrap();
        assert!(p.eq_up_to(&full, 3).unwrap());

        // the x factor lifts the trust of a truncated partner by its degree
        let g = Series::one(&c).add(&var(&c, "x")).unwrap().truncate(2);
        let xg = var(&c, "x").mul(&g).unwrap();
        assert_eq!(xg.valid_order(), Order::Finite(3));
    }

    #[test]
    fn products_of_unknown_tails_stay_truncated() {
        let c = ctx();
        let x = Series::letter(&c, c.lookup("x").unwrap()).unwrap();
        let t = x.truncate(0);
        assert!(t.is_empty());
        assert_eq!(t.min_degree_bound(), Order::Finite(1));
        let p = t.mul(&t).unwrap();
        assert_eq!(p.valid_order(), Order::Finite(1));
        assert!(p.eq_up_to(&x.mul(&x).unwrap(), 1).unwrap());
    }

    #[test]
    fn min_degree_examples() {
        let c = ctx();
        assert_eq!(Series::zero(&c).min_degree(), Order::Infinite);
        let s = var(&c, "a").add(&mono(&c, &["x", "x"], 1)).unwrap();
        assert_eq!(s.min_degree(), Order::Finite(0));
        let s = var(&c, "x").add(&mono(&c, &["x", "y", "x"], 1)).unwrap();
        assert_eq!(s.min_degree(), Order::Finite(1));
    }

    #[test]
    fn geometric_inverse_examples() {
        let c = ctx();
        let x = var(&c, "x");
        let g = geometric_inverse(&x, 3).unwrap();
        let expected = Series::from_terms(
            &c,
            (0..=3).map(|k| (c.word(&alloc::vec!["x"; k]).unwrap(), int(1))),
            Order::Infinite,
        )
        .unwrap();
        assert_eq!(g.valid_order(), Order::Finite(3));
        assert!(g.eq_up_to(&expected, 3).unwrap());
        assert_eq!(g.len(), 4);

        let one = geometric_inverse(&Series::zero(&c), 4).unwrap();
        assert!(one.eq_up_to(&Series::one(&c), 4).unwrap());
        assert_eq!(one.len(), 1);

        let ax = mono(&c, &["a", "x"], 1);
        let g = geometric_inverse(&ax, 2).unwrap();
        let expected = Series::one(&c)
            .add(&ax)
            .unwrap()
            .add(&mono(&c, &["a", "x", "a", "x"], 1))
            .unwrap();
        assert!(g.eq_up_to(&expected, 2).unwrap());
        assert_eq!(g.len(), 3);

        assert!(matches!(
            geometric_inverse(&var(&c, "a"), 3),
            Err(Error::NonconvergentSubstitution(_))
        ));
    }

    #[test]
    fn eq_up_to_examples() {
        let c = ctx();
        let x = var(&c, "x");
        let poly = Series::one(&c)
            .add(&x)
            .unwrap()
            .add(&mono(&c, &["x", "x"], 1))
            .unwrap();
        let g = geometric_inverse(&x, 5).unwrap();
        assert!(poly.eq_up_to(&poly, 9).unwrap());
        assert!(poly.eq_up_to(&g, 2).unwrap());
        assert!(!poly.eq_up_to(&g, 3).unwrap());
        assert_eq!(
            poly.eq_up_to(&g, 6),
            Err(Error::InsufficientPrecision {
                requested: Order::Finite(6),
                available: Order::Finite(5)
            })
        );
    }

    #[test]
    fn mixed_contexts() {
        let c = ctx();
        let other = Context::with_symbols([("q", SymbolKind::Variable)]).unwrap();
        let x = var(&c, "x");
        let q = var(&other, "q");
        assert_eq!(x.add(&q), Err(Error::ContextMismatch));
        assert_eq!(x.mul(&q), Err(Error::ContextMismatch));

        // an extension of the context is compatible
        let (ext, d) = c.with_fresh_placeholder();
        let delta = Series::letter(&ext, d).unwrap();
        let s = x.add(&delta).unwrap();
        assert_eq!(s.context().len(), 5);
    }

    #[test]
    fn truncation_drops_high_words() {
        let c = ctx();
        let s = var(&c, "x").add(&mono(&c, &["x", "x", "x"], 1)).unwrap();
        let t = s.truncate(2);
        assert_eq!(t.len(), 1);
        assert_eq!(t.valid_order(), Order::Finite(2));
    }
}
