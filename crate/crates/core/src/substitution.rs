//! Composition of series and the chain-rule and mixed-partial residuals.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::alphabet::{Context, SymbolId};
use crate::derivation::{second_partial, DerivativeSpec, Engine};
use crate::error::{Error, Result};
use crate::series::{Order, Series};

/// Variables mapped to the series that replace them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    map: BTreeMap<SymbolId, Series>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `variable -> image`; the key must be a variable of the image's context.
    pub fn insert(&mut self, variable: SymbolId, image: Series) -> Result<()> {
        image.context().variable(variable)?;
        self.map.insert(variable, image);
        Ok(())
    }

    pub fn with(mut self, variable: SymbolId, image: Series) -> Result<Self> {
        self.insert(variable, image)?;
        Ok(self)
    }

    pub fn get(&self, variable: SymbolId) -> Option<&Series> {
        self.map.get(&variable)
    }

    pub fn iter(&self) -> impl Iterator<Item = (SymbolId, &Series)> {
        self.map.iter().map(|(k, v)| (*k, v))
    }
}

/// Replaces every assigned variable in `f` by its image.
///
/// Either `f` is an exact polynomial, or every image has no degree-zero word;
/// otherwise the coefficients of the composite are infinite sums.
pub fn substitute(f: &Series, assignment: &Assignment) -> Result<Series> {
    substitute_letters(f, &assignment.map, None)
}

/// `linear` names a letter that occurs at most once per word; it is exempt
/// from the convergence condition.
fn substitute_letters(
    f: &Series,
    images: &BTreeMap<SymbolId, Series>,
    linear: Option<SymbolId>,
) -> Result<Series> {
    let mut ctx = Arc::clone(f.context());
    for image in images.values() {
        ctx = Context::unify(&ctx, image.context())?;
    }
    for &key in images.keys() {
        ctx.symbol(key)?;
    }
    if !f.is_exact() {
        for (&key, image) in images {
            if Some(key) != linear && image.min_degree_bound() < Order::Finite(1) {
                return Err(Error::NonconvergentSubstitution(format!(
                    "`{}` is replaced by a series with a degree-zero term inside a truncated series",
                    ctx.name(key)
                )));
            }
        }
    }
    let target = images
        .values()
        .map(Series::valid_order)
        .fold(f.valid_order(), Order::min);

    let letter_images: Vec<Series> = ctx
        .ids()
        .map(|id| match images.get(&id) {
            Some(image) => image.rehome(&ctx),
            None => Series::letter(&ctx, id),
        })
        .collect::<Result<_>>()?;

    let mut acc = Series::zero(&ctx);
    for (w, c) in f.terms() {
        let mut product = Series::one(&ctx);
        for &letter in w.letters() {
            product = product.mul_capped(&letter_images[letter.index()], target)?;
        }
        acc = acc.add(&product.scale(c))?;
    }
    Ok(acc.with_valid_order(target))
}

/// The composite differentiated "with respect to a slot": `gamma` inserted at
/// each occurrence of `variable` in `f`, with everything else substituted by
/// `assignment`.
///
/// Computed as the placeholder derivative of `f` followed by substitution of
/// the placeholder by `gamma`.
pub fn insertion_partial(
    f: &Series,
    variable: SymbolId,
    gamma: &Series,
    assignment: &Assignment,
) -> Result<Series> {
    insertion_partial_with(Engine::Reference, f, variable, gamma, assignment)
}

fn insertion_partial_with(
    engine: Engine,
    f: &Series,
    variable: SymbolId,
    gamma: &Series,
    assignment: &Assignment,
) -> Result<Series> {
    let mut ctx = Context::unify(f.context(), gamma.context())?;
    for (_, image) in assignment.iter() {
        ctx = Context::unify(&ctx, image.context())?;
    }
    ctx.variable(variable)?;
    let (extended, delta) = ctx.with_fresh_placeholder();
    let marker = Series::letter(&extended, delta)?;
    let marked = engine.point_derivative(
        &f.rehome(&extended)?,
        &DerivativeSpec::new(variable, marker)?,
    )?;
    let mut images = assignment.map.clone();
    images.insert(delta, gamma.rehome(&extended)?);
    substitute_letters(&marked, &images, Some(delta))?.rehome(&ctx)
}

/// Both sides of the chain rule
/// `d/d_beta x f(u, v) = [gamma = du at the x-slots] + [gamma = dv at the y-slots]`.
#[derive(Debug, Clone)]
pub struct ChainRuleSides {
    pub lhs: Series,
    pub rhs: Series,
}

pub fn chain_rule_sides(
    engine: Engine,
    f: &Series,
    u: &Series,
    v: &Series,
    beta: &Series,
    x: SymbolId,
    y: SymbolId,
) -> Result<ChainRuleSides> {
    let assignment = Assignment::new().with(x, u.clone())?.with(y, v.clone())?;
    let spec = DerivativeSpec::new(x, beta.clone())?;
    let lhs = engine.point_derivative(&substitute(f, &assignment)?, &spec)?;
    let du = engine.point_derivative(u, &spec)?;
    let dv = engine.point_derivative(v, &spec)?;
    let rhs = insertion_partial_with(engine, f, x, &du, &assignment)?
        .add(&insertion_partial_with(engine, f, y, &dv, &assignment)?)?;
    Ok(ChainRuleSides { lhs, rhs })
}

/// `lhs - rhs` of the chain rule for `f(x, y)` composed with `x -> u`, `y -> v`,
/// differentiated in `x` at `beta`. Zero up to its validity order.
pub fn chain_rule_residual(
    f: &Series,
    u: &Series,
    v: &Series,
    beta: &Series,
    x: SymbolId,
    y: SymbolId,
) -> Result<Series> {
    let sides = chain_rule_sides(Engine::Reference, f, u, v, beta, x, y)?;
    sides.lhs.sub(&sides.rhs)
}

/// The commutator of mixed second partials and the first-order correction
/// that should equal it.
#[derive(Debug, Clone)]
pub struct MixedPartialSides {
    /// `d_gamma y (d_beta x f)`
    pub yx: Series,
    /// `d_beta x (d_gamma y f)`
    pub xy: Series,
    /// `d_(d_gamma y beta) x f`
    pub beta_correction: Series,
    /// `d_(d_beta x gamma) y f`
    pub gamma_correction: Series,
}

impl MixedPartialSides {
    pub fn commutator(&self) -> Result<Series> {
        self.yx.sub(&self.xy)
    }

    pub fn correction(&self) -> Result<Series> {
        self.beta_correction.sub(&self.gamma_correction)
    }

    pub fn residual(&self) -> Result<Series> {
        self.commutator()?.sub(&self.correction()?)
    }
}

pub fn mixed_partial_sides(
    engine: Engine,
    f: &Series,
    beta: &Series,
    gamma: &Series,
    x: SymbolId,
    y: SymbolId,
) -> Result<MixedPartialSides> {
    let dx = DerivativeSpec::new(x, beta.clone())?;
    let dy = DerivativeSpec::new(y, gamma.clone())?;
    let (yx, xy) = if engine == Engine::Reference {
        (second_partial(f, &dy, &dx)?, second_partial(f, &dx, &dy)?)
    } else {
        (
            engine.point_derivative(&engine.point_derivative(f, &dx)?, &dy)?,
            engine.point_derivative(&engine.point_derivative(f, &dy)?, &dx)?,
        )
    };
    let d_beta = engine.point_derivative(beta, &dy)?;
    let d_gamma = engine.point_derivative(gamma, &dx)?;
    let beta_correction = engine.point_derivative(f, &DerivativeSpec::new(x, d_beta)?)?;
    let gamma_correction = engine.point_derivative(f, &DerivativeSpec::new(y, d_gamma)?)?;
    Ok(MixedPartialSides {
        yx,
        xy,
        beta_correction,
        gamma_correction,
    })
}

/// `(d_gamma y d_beta x f - d_beta x d_gamma y f) - (d_(d_gamma y beta) x f - d_(d_beta x gamma) y f)`.
pub fn mixed_partial_residual(
    f: &Series,
    beta: &Series,
    gamma: &Series,
    x: SymbolId,
    y: SymbolId,
) -> Result<Series> {
    mixed_partial_sides(Engine::Reference, f, beta, gamma, x, y)?.residual()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::{placeholder_derivative, point_derivative};
    use crate::series::{geometric_inverse, int};

    fn ctx() -> Arc<Context> {
        Context::standard()
    }

    fn s(ctx: &Arc<Context>, terms: &[(&[&str], i64)]) -> Series {
        Series::from_terms(
            ctx,
            terms.iter().map(|(w, c)| (ctx.word(w).unwrap(), int(*c))),
            Order::Infinite,
        )
        .unwrap()
    }

    fn ids(ctx: &Arc<Context>) -> (SymbolId, SymbolId) {
        (ctx.resolve("x").unwrap(), ctx.resolve("y").unwrap())
    }

    #[test]
    fn substitute_examples() {
        let c = ctx();
        let (x, y) = ids(&c);
        let u = s(&c, &[(&["a", "y"], 2), (&["x"], 1)]);
        let f = s(&c, &[(&["x"], 1)]);
        assert_eq!(substitute(&f, &Assignment::new().with(x, u.clone()).unwrap()).unwrap(), u);

        let xy = s(&c, &[(&["x", "y"], 1)]);
        let swap = Assignment::new()
            .with(x, s(&c, &[(&["y"], 1)]))
            .unwrap()
            .with(y, s(&c, &[(&["x"], 1)]))
            .unwrap();
        assert_eq!(substitute(&xy, &swap).unwrap(), s(&c, &[(&["y", "x"], 1)]));

        let x2 = s(&c, &[(&["x", "x"], 1)]);
        let sum = s(&c, &[(&["x"], 1), (&["y"], 1)]);
        let expected = s(
            &c,
            &[(&["x", "x"], 1), (&["x", "y"], 1), (&["y", "x"], 1), (&["y", "y"], 1)],
        );
        let got = substitute(&x2, &Assignment::new().with(x, sum.clone()).unwrap()).unwrap();
        assert_eq!(got, expected);
        assert_eq!(got, sum.mul(&sum).unwrap());
    }

    #[test]
    fn identity_assignment_is_identity() {
        let c = ctx();
        let (x, y) = ids(&c);
        let f = s(&c, &[(&["a", "x", "y", "x"], 3), (&["b"], -1), (&["y", "y"], 2)]);
        let id = Assignment::new()
            .with(x, s(&c, &[(&["x"], 1)]))
            .unwrap()
            .with(y, s(&c, &[(&["y"], 1)]))
            .unwrap();
        assert_eq!(substitute(&f, &id).unwrap(), f);
    }

    #[test]
    fn convergence_condition() {
        let c = ctx();
        let (x, _) = ids(&c);
        let xs = Series::letter(&c, x).unwrap();
        let g = geometric_inverse(&xs, 4).unwrap();
        let one_plus_x = s(&c, &[(&[], 1), (&["x"], 1)]);
        let a = Assignment::new().with(x, one_plus_x.clone()).unwrap();
        assert!(matches!(substitute(&g, &a), Err(Error::NonconvergentSubstitution(_))));
        // fine for an exact polynomial
        let x2 = s(&c, &[(&["x", "x"], 1)]);
        assert_eq!(substitute(&x2, &a).unwrap(), one_plus_x.mul(&one_plus_x).unwrap());
        // constants cannot be assigned
        assert!(matches!(
            Assignment::new().with(c.resolve("a").unwrap(), one_plus_x),
            Err(Error::NotAVariable(_))
        ));
    }

    #[test]
    fn substitution_into_series_tracks_order() {
        let c = ctx();
        let (x, y) = ids(&c);
        let xs = Series::letter(&c, x).unwrap();
        // u = g(x) - 1 = x + x^2 + ... (order 5); f = x y
        let u = geometric_inverse(&xs, 5).unwrap().sub(&Series::one(&c)).unwrap();
        let f = s(&c, &[(&["x", "y"], 1)]);
        let a = Assignment::new().with(x, u.clone()).unwrap();
        let r = substitute(&f, &a).unwrap();
        assert_eq!(r.valid_order(), Order::Finite(5));
        let expected = u.mul(&Series::letter(&c, y).unwrap()).unwrap();
        assert!(r.eq_up_to(&expected, 5).unwrap());
    }

    #[test]
    fn insertion_partial_examples() {
        let c = ctx();
        let (x, _) = ids(&c);
        let u = s(&c, &[(&["x", "a"], 1), (&["y"], 2)]);
        let gamma = s(&c, &[(&["b"], 1), (&["x", "y"], -1)]);
        let a = Assignment::new().with(x, u.clone()).unwrap();

        let f = s(&c, &[(&["x"], 1)]);
        assert_eq!(insertion_partial(&f, x, &gamma, &a).unwrap(), gamma);

        let x2 = s(&c, &[(&["x", "x"], 1)]);
        let expected = u.mul(&gamma).unwrap().add(&gamma.mul(&u).unwrap()).unwrap();
        let got = insertion_partial(&x2, x, &gamma, &a).unwrap();
        assert_eq!(got, expected);
        assert_eq!(got.context(), &c);

        assert!(insertion_partial(&s(&c, &[(&["a"], 1)]), x, &gamma, &a).unwrap().is_zero());
    }

    #[test]
    fn placeholder_route_matches_point_derivative() {
        let c = ctx();
        let (x, _) = ids(&c);
        let (ext, delta) = c.with_fresh_placeholder();
        let f = s(&c, &[(&["x", "x"], 1), (&["a", "x", "y", "x"], 2)]).rehome(&ext).unwrap();
        let beta = s(&c, &[(&["b"], 1), (&["y", "x"], 3)]).rehome(&ext).unwrap();
        let marked = placeholder_derivative(&f, x, delta).unwrap();
        let mut images = BTreeMap::new();
        images.insert(delta, beta.clone());
        let got = substitute_letters(&marked, &images, Some(delta)).unwrap();
        assert_eq!(got, point_derivative(&f, &DerivativeSpec::new(x, beta).unwrap()).unwrap());
    }

    #[test]
    fn chain_rule_examples() {
        let c = ctx();
        let (x, y) = ids(&c);
        let u = s(&c, &[(&["x", "x"], 1)]);
        let v = s(&c, &[(&["y"], 1)]);
        let one = Series::one(&c);
        for f in [
            s(&c, &[(&["x"], 1)]),
            s(&c, &[(&["a"], 1)]),
            s(&c, &[(&["x", "y"], 1)]),
        ] {
            let r = chain_rule_residual(&f, &u, &v, &one, x, y).unwrap();
            assert!(r.is_zero(), "{r}");
        }
        // f = x y, u = x^2, v = y, beta = 1: both sides equal 2 x y
        let sides = chain_rule_sides(Engine::Reference, &s(&c, &[(&["x", "y"], 1)]), &u, &v, &one, x, y).unwrap();
        assert_eq!(sides.lhs, s(&c, &[(&["x", "y"], 2)]));
    }

    #[test]
    fn mixed_partial_examples() {
        let c = ctx();
        let (x, y) = ids(&c);
        let one = Series::one(&c);
        let f = s(&c, &[(&["x", "y", "a", "x"], 1), (&["y", "y", "x"], -2)]);
        let sides = mixed_partial_sides(Engine::Reference, &f, &one, &one, x, y).unwrap();
        assert!(sides.commutator().unwrap().is_zero());
        assert!(sides.correction().unwrap().is_zero());

        let b = s(&c, &[(&["b"], 5)]);
        assert!(mixed_partial_residual(&b, &one, &one, x, y).unwrap().is_zero());

        // f = x y, beta = y, gamma = x:
        // d_y(d_x f) = d_y(y y) = x y + y x; d_x(d_y f) = d_x(x x) = y x + x y
        // corrections: d_(d_y y) x f = d_x at x: x y; d_(d_x x) y f = x y
        let xy = s(&c, &[(&["x", "y"], 1)]);
        let beta = s(&c, &[(&["y"], 1)]);
        let gamma = s(&c, &[(&["x"], 1)]);
        let sides = mixed_partial_sides(Engine::Reference, &xy, &beta, &gamma, x, y).unwrap();
        assert!(!sides.yx.is_zero() && !sides.beta_correction.is_zero());
        assert!(sides.residual().unwrap().is_zero());
    }
}
