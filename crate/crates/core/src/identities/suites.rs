use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::alphabet::{SymbolId, Word};
use crate::derivation::{DerivativeSpec, Engine};
use crate::error::{Error, Result};
use crate::series::{geometric_inverse, Coeff, Series};
use crate::substitution::{chain_rule_sides, mixed_partial_sides};

use super::generator::{random_coeff, GenParams};
use super::report::{CheckReport, Failure};

/// Words up to this length are swept exhaustively by the uniqueness suite.
pub const UNIQUENESS_WORD_LENGTH: usize = 6;
/// Number of distinct random points used in the exhaustive sweep.
pub const UNIQUENESS_BETAS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Axioms,
    Uniqueness,
    Chain,
    Clairaut,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Axioms, Suite::Uniqueness, Suite::Chain, Suite::Clairaut];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Uniqueness => "uniqueness",
            Suite::Chain => "chain",
            Suite::Clairaut => "clairaut",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Distinct RNG stream namespace per suite.
    fn stream(self, index: u64) -> u64 {
        let tag = match self {
            Suite::Axioms => 1u64,
            Suite::Uniqueness => 2,
            Suite::Chain => 3,
            Suite::Clairaut => 4,
        };
        (tag << 48) | index
    }
}

/// Runs the suites against one [`Engine`].
#[derive(Debug, Clone)]
pub struct Checker {
    pub params: GenParams,
    pub engine: Engine,
    /// Degree cap for the random polynomials of the chain and mixed-partial
    /// suites, whose compositions grow multiplicatively.
    pub composite_max_degree: u32,
    /// Order up to which the chain rule is checked for the genuine series
    /// `u = (1 - x)^{-1} - 1`.
    pub series_check_order: u32,
}

impl Checker {
    pub fn new(params: GenParams) -> Self {
        Checker {
            params,
            engine: Engine::Reference,
            composite_max_degree: 3,
            series_check_order: 4,
        }
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    pub fn run(&self, suite: Suite, trials: u64) -> Result<CheckReport> {
        match suite {
            Suite::Axioms => self.axioms(trials),
            Suite::Uniqueness => self.uniqueness(trials),
            Suite::Chain => self.chain(trials),
            Suite::Clairaut => self.clairaut(trials),
        }
    }

    fn variables(&self) -> Vec<SymbolId> {
        self.params.alphabet.variables().collect()
    }

    fn pair(&self) -> Result<(SymbolId, SymbolId)> {
        match self.variables()[..] {
            [x, y, ..] => Ok((x, y)),
            _ => Err(Error::MissingVariables(2)),
        }
    }

    fn d(&self, f: &Series, var: SymbolId, beta: &Series) -> Result<Series> {
        self.engine
            .point_derivative(f, &DerivativeSpec::new(var, beta.clone())?)
    }

    /// Leibniz rule, value on the variable, annihilation of constants,
    /// linearity in `f` and in `beta`, the scalar-center axiom, and agreement
    /// with `beta · d/d_1 x` on the one-variable commutative subalgebra.
    pub fn axioms(&self, trials: u64) -> Result<CheckReport> {
        self.params.validate()?;
        let ctx = &self.params.alphabet;
        let all: Vec<SymbolId> = ctx.ids().collect();
        let vars = self.variables();
        if vars.is_empty() {
            return Err(Error::MissingVariables(1));
        }
        let deg = self.params.max_degree;
        let mut report = CheckReport::new(Suite::Axioms.name());
        for t in 0..trials {
            let mut rng = self.params.rng(Suite::Axioms.stream(t));
            let f = self.params.series_over(&mut rng, &all, deg);
            let g = self.params.series_over(&mut rng, &all, deg);
            let beta = self.params.series_over(&mut rng, &all, deg);
            let beta2 = self.params.series_over(&mut rng, &all, deg);
            let c = random_coeff(&mut rng, self.params.coeff_bound);
            for &x in &vars {
                let name = ctx.name(x);
                let inputs = |label: &str, extra: String| {
                    format!("[{label}] trial {t}, variable {name}, f = {f}, beta = {beta}{extra}")
                };
                let d = |s: &Series, b: &Series| self.d(s, x, b);

                let lhs = f.mul(&g).and_then(|fg| d(&fg, &beta));
                let rhs = (|| d(&f, &beta)?.mul(&g)?.add(&f.mul(&d(&g, &beta)?)?))();
                compare(&mut report, || inputs("leibniz", format!(", g = {g}")), lhs, rhs);

                let xs = Series::letter(ctx, x)?;
                compare(&mut report, || inputs("variable", String::new()), d(&xs, &beta), Ok(beta.clone()));

                for a in ctx.constants() {
                    let a_s = Series::letter(ctx, a)?;
                    compare(
                        &mut report,
                        || inputs("constant", format!(", constant {}", ctx.name(a))),
                        d(&a_s, &beta),
                        Ok(Series::zero(ctx)),
                    );
                }

                let lhs = f.add(&g.scale(&c)).and_then(|s| d(&s, &beta));
                let rhs = (|| d(&f, &beta)?.add(&d(&g, &beta)?.scale(&c)))();
                compare(&mut report, || inputs("linear-f", format!(", g = {g}, c = {c}")), lhs, rhs);

                let lhs = beta.add(&beta2).and_then(|b| d(&f, &b));
                let rhs = (|| d(&f, &beta)?.add(&d(&f, &beta2)?))();
                compare(&mut report, || inputs("linear-beta", format!(", beta2 = {beta2}")), lhs, rhs);

                let lhs = d(&f, &Series::scalar(ctx, c.clone()));
                let rhs = d(&f, &Series::one(ctx)).map(|s| s.scale(&c));
                compare(&mut report, || inputs("center", format!(", c = {c}")), lhs, rhs);

                let fx = self.params.series_over(&mut rng, &[x], deg);
                let bx = self.params.series_over(&mut rng, &[x], deg);
                let lhs = d(&fx, &bx);
                let rhs = d(&fx, &Series::one(ctx)).and_then(|h| bx.mul(&h));
                compare(
                    &mut report,
                    || format!("[commutative] trial {t}, variable {name}, f = {fx}, beta = {bx}"),
                    lhs,
                    rhs,
                );
            }
            report.trials += 1;
        }
        Ok(report)
    }

    /// Positional insertion, block expansion and Leibniz recursion agree on
    /// every word up to [`UNIQUENESS_WORD_LENGTH`] for [`UNIQUENESS_BETAS`]
    /// distinct points, then on `trials` random `(f, beta)` pairs.
    pub fn uniqueness(&self, trials: u64) -> Result<CheckReport> {
        self.params.validate()?;
        let ctx = &self.params.alphabet;
        if ctx.len() > 4 {
            return Err(Error::InfeasibleEnumeration(ctx.len()));
        }
        let vars = self.variables();
        if vars.is_empty() {
            return Err(Error::MissingVariables(1));
        }
        let all: Vec<SymbolId> = ctx.ids().collect();
        let deg = self.params.max_degree.max(1);
        let mut rng = self.params.rng(Suite::Uniqueness.stream(0));
        let mut betas: Vec<Series> = Vec::new();
        let mut attempts = 0;
        while betas.len() < UNIQUENESS_BETAS && attempts < 1000 {
            let b = self.params.series_over(&mut rng, &all, deg);
            if !betas.contains(&b) {
                betas.push(b);
            }
            attempts += 1;
        }

        let mut report = CheckReport::new(Suite::Uniqueness.name());
        let words = ctx.enumerate_words(UNIQUENESS_WORD_LENGTH);
        let one = Coeff::from_integer(1.into());
        for beta in &betas {
            for &x in &vars {
                for w in &words {
                    let f = Series::monomial(ctx, w.clone(), one.clone());
                    self.compare_algorithms(&mut report, &f, x, beta, || {
                        format!("word {}", ctx.format_word(w))
                    })?;
                    report.trials += 1;
                }
            }
        }
        for t in 0..trials {
            let mut rng = self.params.rng(Suite::Uniqueness.stream(t + 1));
            let f = self.params.series_over(&mut rng, &all, self.params.max_degree);
            let beta = self.params.series_over(&mut rng, &all, self.params.max_degree);
            for &x in &vars {
                self.compare_algorithms(&mut report, &f, x, &beta, || format!("trial {t}, f = {f}"))?;
            }
            report.trials += 1;
        }
        Ok(report)
    }

    fn compare_algorithms(
        &self,
        report: &mut CheckReport,
        f: &Series,
        x: SymbolId,
        beta: &Series,
        describe: impl Fn() -> String,
    ) -> Result<()> {
        let spec = DerivativeSpec::new(x, beta.clone())?;
        let name = self.params.alphabet.name(x);
        let positional = self.engine.point_derivative(f, &spec);
        let grouped = self.engine.grouped_derivative(f, &spec);
        let leibniz = self.engine.leibniz_derivative(f, &spec);
        compare(
            report,
            || format!("[positional-vs-grouped] {}, variable {name}, beta = {beta}", describe()),
            positional.clone(),
            grouped,
        );
        compare(
            report,
            || format!("[leibniz-vs-positional] {}, variable {name}, beta = {beta}", describe()),
            leibniz,
            positional,
        );
        Ok(())
    }

    /// Chain rule for random polynomial `f(x, y)`, `u`, `v`, `beta`, and once
    /// per trial for `u = (1 - x)^{-1} - 1`, `v = y` up to
    /// `series_check_order`.
    pub fn chain(&self, trials: u64) -> Result<CheckReport> {
        self.params.validate()?;
        let ctx = &self.params.alphabet;
        let (x, y) = self.pair()?;
        let letters = self.composite_letters(x, y);
        let deg = self.params.max_degree.min(self.composite_max_degree);
        let n = self.series_check_order;
        let xs = Series::letter(ctx, x)?;
        let ys = Series::letter(ctx, y)?;
        let series_u = geometric_inverse(&xs, n + 1)?.sub(&Series::one(ctx))?;

        let mut report = CheckReport::new(Suite::Chain.name());
        for t in 0..trials {
            let mut rng = self.params.rng(Suite::Chain.stream(t));
            let f = self.params.series_over(&mut rng, &letters, deg);
            let u = self.params.series_over(&mut rng, &letters, deg);
            let v = self.params.series_over(&mut rng, &letters, deg);
            let beta = self.params.series_over(&mut rng, &letters, deg);

            let sides = chain_rule_sides(self.engine, &f, &u, &v, &beta, x, y);
            compare(
                &mut report,
                || format!("[chain] trial {t}, f = {f}, u = {u}, v = {v}, beta = {beta}"),
                sides.as_ref().map(|s| s.lhs.clone()).map_err(Clone::clone),
                sides.map(|s| s.rhs),
            );

            let sides = chain_rule_sides(self.engine, &f, &series_u, &ys, &beta, x, y);
            let inputs = || format!("[chain-series] trial {t}, f = {f}, u = {series_u}, beta = {beta}");
            match sides {
                Ok(s) => {
                    let available = s.lhs.valid_order().min(s.rhs.valid_order());
                    if !available.admits(n) {
                        report.record(Failure {
                            inputs: inputs(),
                            word: "-".into(),
                            expected: format!("validity order >= {n}"),
                            actual: available.to_string(),
                        });
                    } else {
                        compare(&mut report, inputs, Ok(s.lhs.truncate(n)), Ok(s.rhs.truncate(n)));
                    }
                }
                Err(e) => compare(&mut report, inputs, Err(e), Ok(Series::zero(ctx))),
            }
            report.trials += 1;
        }
        Ok(report)
    }

    /// Mixed partials for random `f`, `beta`, `gamma`; and with
    /// `beta = gamma = 1`, equal mixed partials and vanishing corrections.
    pub fn clairaut(&self, trials: u64) -> Result<CheckReport> {
        self.params.validate()?;
        let ctx = &self.params.alphabet;
        let (x, y) = self.pair()?;
        let letters = self.composite_letters(x, y);
        let deg = self.params.max_degree.min(self.composite_max_degree);
        let one = Series::one(ctx);
        let zero = Series::zero(ctx);

        let mut report = CheckReport::new(Suite::Clairaut.name());
        for t in 0..trials {
            let mut rng = self.params.rng(Suite::Clairaut.stream(t));
            let f = self.params.series_over(&mut rng, &letters, deg);
            let beta = self.params.series_over(&mut rng, &letters, deg);
            let gamma = self.params.series_over(&mut rng, &letters, deg);

            let inputs = || format!("[clairaut] trial {t}, f = {f}, beta = {beta}, gamma = {gamma}");
            match mixed_partial_sides(self.engine, &f, &beta, &gamma, x, y) {
                Ok(s) => compare(&mut report, inputs, s.commutator(), s.correction()),
                Err(e) => compare(&mut report, inputs, Err(e), Ok(zero.clone())),
            }

            let inputs = |label: &str| format!("[{label}] trial {t}, f = {f}, beta = gamma = 1");
            match mixed_partial_sides(self.engine, &f, &one, &one, x, y) {
                Ok(s) => {
                    compare(&mut report, || inputs("classical"), Ok(s.yx.clone()), Ok(s.xy.clone()));
                    compare(&mut report, || inputs("classical-correction-x"), Ok(s.beta_correction), Ok(zero.clone()));
                    compare(&mut report, || inputs("classical-correction-y"), Ok(s.gamma_correction), Ok(zero.clone()));
                }
                Err(e) => compare(&mut report, || inputs("classical"), Err(e), Ok(zero.clone())),
            }
            report.trials += 1;
        }
        Ok(report)
    }

    /// Constants plus the two designated variables.
    fn composite_letters(&self, x: SymbolId, y: SymbolId) -> Vec<SymbolId> {
        let ctx = &self.params.alphabet;
        ctx.constants().chain([x, y]).collect()
    }
}

/// Records a failure unless `actual` and `expected` agree on every word
/// within both validity orders.
fn compare(
    report: &mut CheckReport,
    inputs: impl FnOnce() -> String,
    actual: Result<Series>,
    expected: Result<Series>,
) {
    let (actual, expected) = match (actual, expected) {
        (Ok(a), Ok(e)) => (a, e),
        (a, e) => {
            let describe = |r: &Result<Series>| match r {
                Ok(_) => String::from("ok"),
                Err(e) => format!("error: {e}"),
            };
            report.record(Failure {
                inputs: inputs(),
                word: "-".into(),
                expected: describe(&e),
                actual: describe(&a),
            });
            return;
        }
    };
    let word: Option<Word> = match actual.first_difference(&expected) {
        Ok(w) => w,
        Err(e) => {
            report.record(Failure {
                inputs: inputs(),
                word: "-".into(),
                expected: "comparable series".into(),
                actual: format!("error: {e}"),
            });
            return;
        }
    };
    if let Some(w) = word {
        report.record(Failure {
            inputs: inputs(),
            word: actual.context().format_word(&w),
            expected: expected.coeff(&w).to_string(),
            actual: actual.coeff(&w).to_string(),
        });
    }
}

pub fn run_axiom_suite(params: &GenParams, trials: u64) -> Result<CheckReport> {
    Checker::new(params.clone()).axioms(trials)
}

pub fn run_uniqueness_suite(params: &GenParams, trials: u64) -> Result<CheckReport> {
    Checker::new(params.clone()).uniqueness(trials)
}

pub fn run_chain_rule_suite(params: &GenParams, trials: u64) -> Result<CheckReport> {
    Checker::new(params.clone()).chain(trials)
}

pub fn run_clairaut_suite(params: &GenParams, trials: u64) -> Result<CheckReport> {
    Checker::new(params.clone()).clairaut(trials)
}
