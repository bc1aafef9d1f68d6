//! Square-free interaction terms and model supports.
//!
//! A term `x_{i1} x_{i2} ... x_{id}` is stored as a bitmask over the `p`
//! variables. A support is hierarchical when every nonempty sub-term of a
//! member is a member; such a support is exactly a simplicial complex whose
//! vertices are the main effects.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};
use crate::homology::{canonical_cmp, subsets_of_size, BitIter, Simplex, SimplicialComplex};

/// Largest supported variable count.
pub const MAX_VARIABLES: usize = 64;

/// One square-free monomial. Indices are 0-based internally; text forms are
/// 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", try_from = "Vec<usize>")]
pub struct Term(u64);

impl Term {
    pub fn from_mask(mask: u64) -> Option<Self> {
        (mask != 0).then_some(Self(mask))
    }

    /// Builds a term from 0-based variable indices.
    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &i in indices {
            if i >= MAX_VARIABLES {
                return Err(invalid_arg(format!("variable index {} exceeds {MAX_VARIABLES}", i + 1)));
            }
            if mask & (1 << i) != 0 {
                return Err(invalid_arg(format!(
                    "variable x{} repeated; only square-free terms are supported",
                    i + 1
                )));
            }
            mask |= 1 << i;
        }
        Self::from_mask(mask).ok_or_else(|| invalid_arg("the empty term (intercept) is not a model term"))
    }

    /// Builds a term from 1-based variable indices.
    pub fn from_one_based(indices: &[usize]) -> Result<Self> {
        if indices.contains(&0) {
            return Err(invalid_arg("variable indices are 1-based"));
        }
        let zero: Vec<usize> = indices.iter().map(|i| i - 1).collect();
        Self::from_indices(&zero)
    }

    #[inline]
    pub fn mask(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 0-based variable indices in ascending order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        BitIter(self.0)
    }

    pub fn max_index(self) -> usize {
        63 - self.0.leading_zeros() as usize
    }

    pub fn divides(self, other: Term) -> bool {
        self.0 & other.0 == self.0
    }

    pub fn to_simplex(self) -> Simplex {
        Simplex::from_mask(self.0).expect("terms are nonempty")
    }

    pub fn from_simplex(s: Simplex) -> Self {
        Self(s.mask())
    }

    /// `x1x2x5` style label.
    pub fn label(self) -> String {
        self.indices().map(|i| format!("x{}", i + 1)).collect()
    }

    /// Digit-string label (`125`) when every index is below 10, otherwise
    /// indices joined by `.`.
    pub fn compact(self) -> String {
        if self.max_index() < 9 {
            self.indices().map(|i| char::from(b'1' + i as u8)).collect()
        } else {
            self.indices().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(".")
        }
    }

    /// Space-separated 1-based indices, the term-list file format.
    pub fn to_line(self) -> String {
        self.indices().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ")
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        canonical_cmp(self.0, other.0)
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl From<Term> for Vec<usize> {
    fn from(t: Term) -> Self {
        t.indices().map(|i| i + 1).collect()
    }
}

impl TryFrom<Vec<usize>> for Term {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Term::from_one_based(&v)
    }
}

/// An ordered, duplicate-free set of terms over `p` variables.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelSupport {
    p: usize,
    terms: Vec<Term>,
}

impl ModelSupport {
    pub fn empty(p: usize) -> Self {
        Self { p, terms: Vec::new() }
    }

    pub fn from_terms<I: IntoIterator<Item = Term>>(p: usize, terms: I) -> Result<Self> {
        if p > MAX_VARIABLES {
            return Err(invalid_arg(format!("p = {p} exceeds {MAX_VARIABLES}")));
        }
        let set: BTreeSet<Term> = terms.into_iter().collect();
        if let Some(t) = set.iter().find(|t| t.max_index() >= p) {
            return Err(invalid_arg(format!("term {t} uses a variable beyond p = {p}")));
        }
        Ok(Self { p, terms: set.into_iter().collect() })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = Term> + '_ {
        self.terms.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, t: Term) -> bool {
        self.terms.binary_search(&t).is_ok()
    }

    /// Position of `t` in the canonical order, which is also its design column.
    pub fn position(&self, t: Term) -> Option<usize> {
        self.terms.binary_search(&t).ok()
    }

    pub fn max_degree(&self) -> usize {
        self.terms.iter().map(|t| t.degree()).max().unwrap_or(0)
    }

    pub fn is_subset_of(&self, other: &ModelSupport) -> bool {
        self.terms.iter().all(|t| other.contains(*t))
    }

    /// Counts of terms by degree, index `d - 1` holding degree `d`.
    pub fn degree_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.max_degree()];
        for t in &self.terms {
            counts[t.degree() - 1] += 1;
        }
        counts
    }

    /// Subset of terms picked by a mask over positions.
    pub fn select(&self, keep: impl Fn(usize) -> bool) -> ModelSupport {
        let terms = self.terms.iter().enumerate().filter(|(i, _)| keep(*i)).map(|(_, t)| *t).collect();
        Self { p: self.p, terms }
    }

    /// Smallest superset closed under taking nonempty sub-terms.
    pub fn hierarchical_closure(&self) -> ModelSupport {
        let mut set: BTreeSet<Term> = BTreeSet::new();
        let mut frontier: Vec<Term> = Vec::new();
        for &t in &self.terms {
            if set.insert(t) {
                frontier.push(t);
            }
        }
        while let Some(t) = frontier.pop() {
            for v in t.indices() {
                if let Some(sub) = Term::from_mask(t.mask() & !(1 << v)) {
                    if set.insert(sub) {
                        frontier.push(sub);
                    }
                }
            }
        }
        Self { p: self.p, terms: set.into_iter().collect() }
    }

    pub fn is_hierarchical(&self) -> bool {
        self.terms.iter().all(|t| {
            t.indices().all(|v| Term::from_mask(t.mask() & !(1 << v)).map_or(true, |s| self.contains(s)))
        })
    }

    /// Maps a hierarchical support to its simplicial complex: a degree
    /// `d + 1` term becomes a `d`-simplex on its variables.
    pub fn to_simplicial_complex(&self) -> Result<SimplicialComplex> {
        if !self.is_hierarchical() {
            return Err(invalid_arg(
                "support is not hierarchical; take its hierarchical closure first",
            ));
        }
        SimplicialComplex::from_simplices(self.p, self.terms.iter().map(|t| t.to_simplex()))
    }

    /// Reads the faces of a complex back as terms.
    pub fn from_complex(c: &SimplicialComplex) -> ModelSupport {
        let terms = c.iter().map(Term::from_simplex).collect();
        Self { p: c.vertex_universe(), terms }
    }

    /// `{1,3,12,13,123}` style listing.
    pub fn compact(&self) -> String {
        let inner: Vec<String> = self.terms.iter().map(|t| t.compact()).collect();
        format!("{{{}}}", inner.join(","))
    }
}

impl fmt::Debug for ModelSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModelSupport(p={}, {})", self.p, self.compact())
    }
}

/// All square-free terms of degree `1..=k` over `p` variables, canonically
/// ordered.
pub fn enumerate_candidate_terms(p: usize, k: usize) -> Result<ModelSupport> {
    if k < 1 || k > p {
        return Err(invalid_arg(format!("interaction order k = {k} must satisfy 1 <= k <= p = {p}")));
    }
    if p > MAX_VARIABLES {
        return Err(invalid_arg(format!("p = {p} exceeds {MAX_VARIABLES}")));
    }
    let terms = (1..=k)
        .flat_map(|d| subsets_of_size(p, d))
        .map(|m| Term::from_mask(m).expect("nonempty"))
        .collect();
    Ok(ModelSupport { p, terms })
}

/// Parses the term-list text format: one term per line as 1-based variable
/// indices separated by whitespace; blank lines and lines starting with `#`
/// are skipped. When `p` is `None` it is taken from the largest index seen.
pub fn parse_term_list(text: &str, p: Option<usize>) -> Result<ModelSupport> {
    let mut terms = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let indices = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| {
                    Error::InvalidInput(format!("line {}: `{tok}` is not a variable index", lineno + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let term = Term::from_one_based(&indices)
            .map_err(|e| Error::InvalidInput(format!("line {}: {e}", lineno + 1)))?;
        terms.push(term);
    }
    let needed = terms.iter().map(|t| t.max_index() + 1).max().unwrap_or(0);
    let p = match p {
        Some(p) if p < needed => {
            return Err(Error::InvalidInput(format!("terms use x{needed} but p = {p}")));
        }
        Some(p) => p,
        None => needed,
    };
    ModelSupport::from_terms(p, terms)
}
