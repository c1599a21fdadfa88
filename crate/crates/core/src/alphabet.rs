//! Alphabets and words of the free monoid.
//!
//! A [`Context`] is an ordered list of declared symbols. Words refer to
//! symbols through their [`SymbolId`], which is the declaration index, so a
//! word stays meaningful in any context that extends the one it was built in.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Reserved prefix for internally generated placeholder constants.
pub const RESERVED_PREFIX: &str = "__";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    Constant,
    Variable,
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolKind::Constant => "constant",
            SymbolKind::Variable => "variable",
        })
    }
}

/// One letter of the alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    name: String,
    kind: SymbolKind,
}

impl Symbol {
    /// Creates a symbol, checking the name against `[A-Za-z][A-Za-z0-9_]*`.
    pub fn new(name: &str, kind: SymbolKind) -> Result<Self> {
        if !is_valid_name(name) {
            return Err(Error::InvalidSymbolName(name.into()));
        }
        Ok(Symbol {
            name: name.into(),
            kind,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn is_variable(&self) -> bool {
        self.kind == SymbolKind::Variable
    }
}

pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Index of a symbol inside its [`Context`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub(crate) u32);

impl SymbolId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The declared alphabet.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Context {
    symbols: Vec<Symbol>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a shared context from `(name, kind)` pairs in declaration order.
    pub fn with_symbols<'a, I>(symbols: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = (&'a str, SymbolKind)>,
    {
        let mut ctx = Context::new();
        for (name, kind) in symbols {
            ctx.declare(name, kind)?;
        }
        Ok(Arc::new(ctx))
    }

    /// Two constants `a`, `b` and two variables `x`, `y`.
    pub fn standard() -> Arc<Self> {
        use SymbolKind::*;
        Self::with_symbols([("a", Constant), ("b", Constant), ("x", Variable), ("y", Variable)])
            .expect("standard alphabet is well formed")
    }

    pub fn declare(&mut self, name: &str, kind: SymbolKind) -> Result<SymbolId> {
        let symbol = Symbol::new(name, kind)?;
        self.push(symbol)
    }

    /// Declares a constant in the reserved `__` namespace, as used for
    /// placeholders. Needed to reload contexts that contain one.
    pub fn declare_reserved(&mut self, name: &str) -> Result<SymbolId> {
        let valid = name
            .strip_prefix(RESERVED_PREFIX)
            .is_some_and(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'));
        if !valid {
            return Err(Error::InvalidSymbolName(name.into()));
        }
        self.push(Symbol {
            name: name.into(),
            kind: SymbolKind::Constant,
        })
    }

    fn push(&mut self, symbol: Symbol) -> Result<SymbolId> {
        if self.lookup(&symbol.name).is_some() {
            return Err(Error::DuplicateSymbol(symbol.name));
        }
        let id = SymbolId(self.symbols.len() as u32);
        self.symbols.push(symbol);
        Ok(id)
    }

    /// Returns a copy of this context extended by one declaration.
    pub fn extend(&self, name: &str, kind: SymbolKind) -> Result<(Arc<Self>, SymbolId)> {
        let mut ctx = self.clone();
        let id = ctx.declare(name, kind)?;
        Ok((Arc::new(ctx), id))
    }

    /// Extends the context by the first unused placeholder constant
    /// `__delta0`, `__delta1`, ... Those names are outside the user grammar.
    pub fn with_fresh_placeholder(&self) -> (Arc<Self>, SymbolId) {
        let mut ctx = self.clone();
        let mut k = 0usize;
        let name = loop {
            let candidate = format!("{RESERVED_PREFIX}delta{k}");
            if ctx.lookup(&candidate).is_none() {
                break candidate;
            }
            k += 1;
        };
        let id = ctx
            .push(Symbol {
                name,
                kind: SymbolKind::Constant,
            })
            .expect("placeholder name is unused");
        (Arc::new(ctx), id)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.symbols
            .iter()
            .position(|s| s.name == name)
            .map(|i| SymbolId(i as u32))
    }

    pub fn resolve(&self, name: &str) -> Result<SymbolId> {
        self.lookup(name)
            .ok_or_else(|| Error::UnknownSymbol(name.into()))
    }

    pub fn symbol(&self, id: SymbolId) -> Result<&Symbol> {
        self.symbols
            .get(id.index())
            .ok_or(Error::UnknownSymbolId(id.0))
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.symbols[id.index()].name
    }

    pub fn kind(&self, id: SymbolId) -> SymbolKind {
        self.symbols[id.index()].kind
    }

    /// Resolves `id` and checks that it names a variable.
    pub fn variable(&self, id: SymbolId) -> Result<SymbolId> {
        let symbol = self.symbol(id)?;
        if symbol.is_variable() {
            Ok(id)
        } else {
            Err(Error::NotAVariable(symbol.name.clone()))
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = (SymbolId, &Symbol)> + '_ {
        self.symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (SymbolId(i as u32), s))
    }

    pub fn ids(&self) -> impl Iterator<Item = SymbolId> {
        (0..self.symbols.len() as u32).map(SymbolId)
    }

    pub fn variables(&self) -> impl Iterator<Item = SymbolId> + '_ {
        self.symbols()
            .filter(|(_, s)| s.is_variable())
            .map(|(id, _)| id)
    }

    pub fn constants(&self) -> impl Iterator<Item = SymbolId> + '_ {
        self.symbols()
            .filter(|(_, s)| !s.is_variable())
            .map(|(id, _)| id)
    }

    /// True when every declaration of `self` appears, in order, at the start
    /// of `other`.
    pub fn is_prefix_of(&self, other: &Context) -> bool {
        self.symbols.len() <= other.symbols.len()
            && self.symbols.iter().zip(&other.symbols).all(|(a, b)| a == b)
    }

    /// The larger of two contexts where one extends the other.
    pub fn unify(a: &Arc<Context>, b: &Arc<Context>) -> Result<Arc<Context>> {
        if Arc::ptr_eq(a, b) || a.is_prefix_of(b) {
            Ok(Arc::clone(b))
        } else if b.is_prefix_of(a) {
            Ok(Arc::clone(a))
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn word(&self, names: &[&str]) -> Result<Word> {
        let ids = names
            .iter()
            .map(|n| self.resolve(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.word_from_ids(ids))
    }

    /// Panics if an id is outside this context.
    pub fn word_from_ids(&self, letters: Vec<SymbolId>) -> Word {
        let degree = letters
            .iter()
            .filter(|&&id| self.kind(id) == SymbolKind::Variable)
            .count() as u32;
        Word { degree, letters }
    }

    /// Every word of length at most `max_len` over the whole alphabet, shortest first.
    pub fn enumerate_words(&self, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut layer: Vec<Vec<SymbolId>> = alloc::vec![Vec::new()];
        for len in 0..=max_len {
            out.extend(layer.iter().map(|w| self.word_from_ids(w.clone())));
            if len == max_len {
                break;
            }
            layer = layer
                .iter()
                .flat_map(|w| {
                    self.ids().map(move |id| {
                        let mut next = w.clone();
                        next.push(id);
                        next
                    })
                })
                .collect();
        }
        out
    }

    /// Space-separated rendering with runs collapsed to `x^k`; the empty word is `1`.
    pub fn format_word(&self, word: &Word) -> String {
        if word.is_empty() {
            return "1".into();
        }
        let mut out = String::new();
        let letters = word.letters();
        let mut i = 0;
        while i < letters.len() {
            let mut j = i + 1;
            while j < letters.len() && letters[j] == letters[i] {
                j += 1;
            }
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(self.name(letters[i]));
            if j - i > 1 {
                out.push_str(&format!("^{}", j - i));
            }
            i = j;
        }
        out
    }

    /// Sort key for the canonical graded-lexicographic order: variable
    /// degree first, then the letter names compared lexicographically.
    pub fn canonical_key<'a>(&'a self, word: &Word) -> (u32, Vec<&'a str>) {
        (
            word.degree(),
            word.letters().iter().map(|&id| self.name(id)).collect(),
        )
    }
}

/// An element of the free monoid; the empty word is the identity.
///
/// The number of variable letters is cached at construction, so words order
/// first by degree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    degree: u32,
    letters: Vec<SymbolId>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn letters(&self) -> &[SymbolId] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of variable-kind letters.
    pub fn total_var_degree(&self) -> u32 {
        self.degree
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Occurrences of one particular letter.
    pub fn count(&self, id: SymbolId) -> usize {
        self.letters.iter().filter(|&&l| l == id).count()
    }

    pub fn contains(&self, id: SymbolId) -> bool {
        self.letters.contains(&id)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() + other.letters.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word {
            degree: self.degree + other.degree,
            letters,
        }
    }

    /// `prefix · middle · suffix` in one allocation.
    pub(crate) fn splice(prefix: &[SymbolId], middle: &Word, suffix: &[SymbolId], outer_degree: u32) -> Word {
        let mut letters = Vec::with_capacity(prefix.len() + middle.len() + suffix.len());
        letters.extend_from_slice(prefix);
        letters.extend_from_slice(&middle.letters);
        letters.extend_from_slice(suffix);
        Word {
            degree: outer_degree + middle.degree,
            letters,
        }
    }
}
