use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Context, SymbolId, SymbolKind};
use crate::error::{Error, Result};
use crate::series::{Coeff, Order, Series};

/// Upper bound on constant letters mixed into one random word.
pub const MAX_CONSTANT_LETTERS: usize = 2;

/// Parameters for random polynomial generation.
///
/// The generator is ChaCha8 seeded with `seed`; each stream index selects an
/// independent ChaCha stream, so series are reproducible one by one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub seed: u64,
    pub max_degree: u32,
    pub max_terms: usize,
    /// Numerators lie in `[-bound, bound]`, denominators in `[1, bound]`.
    pub coeff_bound: u32,
    pub alphabet: Arc<Context>,
}

impl GenParams {
    pub fn new(seed: u64, alphabet: Arc<Context>) -> Self {
        GenParams {
            seed,
            max_degree: 3,
            max_terms: 4,
            coeff_bound: 5,
            alphabet,
        }
    }

    pub fn with_max_degree(mut self, max_degree: u32) -> Self {
        self.max_degree = max_degree;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn with_coeff_bound(mut self, coeff_bound: u32) -> Self {
        self.coeff_bound = coeff_bound;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_terms == 0 {
            return Err(Error::InvalidParams("max_terms must be at least 1"));
        }
        if self.coeff_bound == 0 {
            return Err(Error::InvalidParams("coeff_bound must be at least 1"));
        }
        if self.alphabet.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        Ok(())
    }

    pub(crate) fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// A random exact polynomial over `letters` (a subset of the alphabet).
    ///
    /// Each term picks a degree in `0..=max_degree`, that many variables and up
    /// to [`MAX_CONSTANT_LETTERS`] constants, shuffled. Repeated words are
    /// skipped so no cancellation can occur.
    pub(crate) fn series_over<R: Rng>(&self, rng: &mut R, letters: &[SymbolId], max_degree: u32) -> Series {
        let ctx = &self.alphabet;
        let vars: Vec<SymbolId> = letters
            .iter()
            .copied()
            .filter(|&id| ctx.kind(id) == SymbolKind::Variable)
            .collect();
        let consts: Vec<SymbolId> = letters
            .iter()
            .copied()
            .filter(|&id| ctx.kind(id) == SymbolKind::Constant)
            .collect();
        let n_terms = rng.gen_range(1..=self.max_terms);
        let mut terms = alloc::collections::BTreeMap::new();
        for _ in 0..n_terms {
            let degree = if vars.is_empty() { 0 } else { rng.gen_range(0..=max_degree) };
            let n_consts = if consts.is_empty() {
                0
            } else {
                rng.gen_range(0..=MAX_CONSTANT_LETTERS)
            };
            let mut word: Vec<SymbolId> = Vec::with_capacity(degree as usize + n_consts);
            for _ in 0..degree {
                word.push(*vars.choose(rng).expect("non-empty"));
            }
            for _ in 0..n_consts {
                word.push(*consts.choose(rng).expect("non-empty"));
            }
            word.shuffle(rng);
            let c = random_coeff(rng, self.coeff_bound);
            terms.entry(ctx.word_from_ids(word)).or_insert(c);
        }
        Series::from_terms(ctx, terms, Order::Infinite).expect("letters come from the alphabet")
    }
}

/// A nonzero rational with numerator in `[-bound, bound]` and denominator in `[1, bound]`.
pub fn random_coeff<R: Rng>(rng: &mut R, bound: u32) -> Coeff {
    let bound = i64::from(bound.max(1));
    let mut num = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        num = -num;
    }
    let den = rng.gen_range(1..=bound);
    Coeff::new(BigInt::from(num), BigInt::from(den))
}

/// A random exact polynomial over the whole alphabet, reproducible from
/// `(params, stream_index)`.
pub fn random_series(params: &GenParams, stream_index: u64) -> Result<Series> {
    params.validate()?;
    let mut rng = params.rng(stream_index);
    let letters: Vec<SymbolId> = params.alphabet.ids().collect();
    Ok(params.series_over(&mut rng, &letters, params.max_degree))
}
