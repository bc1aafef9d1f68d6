use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Result};

/// Largest vertex universe a vertex-set bitmask can hold.
pub const MAX_VERTICES: usize = 64;

/// An abstract simplex: a nonempty set of vertex indices (0-based) packed in a
/// 64-bit mask. A simplex on `d + 1` vertices has dimension `d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(u64);

impl Simplex {
    pub fn from_mask(mask: u64) -> Option<Self> {
        (mask != 0).then_some(Self(mask))
    }

    pub fn from_vertices(vertices: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &v in vertices {
            if v >= MAX_VERTICES {
                return Err(invalid_arg(format!("vertex index {v} exceeds {MAX_VERTICES}")));
            }
            mask |= 1 << v;
        }
        Self::from_mask(mask).ok_or_else(|| invalid_arg("a simplex needs at least one vertex"))
    }

    #[inline]
    pub fn mask(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn vertex_count(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn dim(self) -> usize {
        self.vertex_count() - 1
    }

    pub fn vertices(self) -> impl Iterator<Item = usize> {
        BitIter(self.0)
    }

    #[inline]
    pub fn is_face_of(self, other: Simplex) -> bool {
        self.0 & other.0 == self.0
    }

    /// Codimension-one faces, obtained by deleting one vertex at a time.
    pub fn boundary_faces(self) -> impl Iterator<Item = Simplex> {
        let mask = self.0;
        BitIter(mask).filter_map(move |v| Simplex::from_mask(mask & !(1 << v)))
    }
}

/// Lexicographic comparison of the ascending index lists of two masks.
#[inline]
pub(crate) fn lex_cmp(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let diff = a ^ b;
    let low = diff & diff.wrapping_neg();
    // The mask holding the lowest differing index lists it earlier.
    if a & low != 0 {
        // `b` may be a proper prefix of `a` only when `b` has no bits above.
        if b & !(low - 1) == 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    } else if a & !(low - 1) == 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Degree-major, then lexicographic on indices.
#[inline]
pub(crate) fn canonical_cmp(a: u64, b: u64) -> Ordering {
    a.count_ones().cmp(&b.count_ones()).then_with(|| lex_cmp(a, b))
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        canonical_cmp(self.0, other.0)
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.vertices()).finish()
    }
}

pub(crate) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let t = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(t)
    }
}

/// A finite abstract simplicial complex, stored by dimension in canonical order.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialComplex {
    vertex_universe: usize,
    by_dim: Vec<Vec<Simplex>>,
}

impl SimplicialComplex {
    /// The complex with no simplices.
    pub fn void(vertex_universe: usize) -> Self {
        Self { vertex_universe, by_dim: Vec::new() }
    }

    /// Builds the smallest complex containing every given simplex.
    pub fn from_maximal_faces<I>(vertex_universe: usize, faces: I) -> Result<Self>
    where
        I: IntoIterator<Item = Simplex>,
    {
        check_universe(vertex_universe)?;
        let mut all = BTreeSet::new();
        let mut frontier: Vec<Simplex> = Vec::new();
        for s in faces {
            check_in_universe(s, vertex_universe)?;
            if all.insert(s) {
                frontier.push(s);
            }
        }
        while let Some(s) = frontier.pop() {
            for f in s.boundary_faces() {
                if all.insert(f) {
                    frontier.push(f);
                }
            }
        }
        Ok(Self::from_sorted(vertex_universe, all))
    }

    /// Wraps a simplex set that must already be closed under nonempty subsets.
    pub fn from_simplices<I>(vertex_universe: usize, simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = Simplex>,
    {
        check_universe(vertex_universe)?;
        let mut all = BTreeSet::new();
        for s in simplices {
            check_in_universe(s, vertex_universe)?;
            all.insert(s);
        }
        for s in &all {
            if let Some(missing) = s.boundary_faces().find(|f| !all.contains(f)) {
                return Err(invalid_arg(format!(
                    "simplex {s:?} is missing its face {missing:?}; the set is not closed"
                )));
            }
        }
        Ok(Self::from_sorted(vertex_universe, all))
    }

    fn from_sorted(vertex_universe: usize, all: BTreeSet<Simplex>) -> Self {
        let mut by_dim: Vec<Vec<Simplex>> = Vec::new();
        for s in all {
            let d = s.dim();
            if by_dim.len() <= d {
                by_dim.resize_with(d + 1, Vec::new);
            }
            by_dim[d].push(s);
        }
        Self { vertex_universe, by_dim }
    }

    pub fn vertex_universe(&self) -> usize {
        self.vertex_universe
    }

    /// Largest simplex dimension; `None` for the void complex.
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn is_void(&self) -> bool {
        self.by_dim.is_empty()
    }

    /// The `d`-simplices in canonical order.
    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.by_dim.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    /// Simplex counts `m_0, m_1, ...` up to the top dimension.
    pub fn face_counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_void()
    }

    pub fn contains(&self, s: Simplex) -> bool {
        self.simplices(s.dim()).binary_search(&s).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Simplex> + '_ {
        self.by_dim.iter().flatten().copied()
    }

    /// True when every face of every member is a member.
    pub fn is_closed(&self) -> bool {
        self.iter().all(|s| s.boundary_faces().all(|f| self.contains(f)))
    }

    /// Adds a simplex together with all of its faces.
    pub fn insert_closed(&mut self, s: Simplex) -> Result<()> {
        check_in_universe(s, self.vertex_universe)?;
        let mut all: BTreeSet<Simplex> = self.iter().collect();
        let mut frontier = vec![s];
        while let Some(t) = frontier.pop() {
            if all.insert(t) {
                frontier.extend(t.boundary_faces());
            }
        }
        *self = Self::from_sorted(self.vertex_universe, all);
        Ok(())
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("vertex_universe", &self.vertex_universe)
            .field("face_counts", &self.face_counts())
            .finish()
    }
}

fn check_universe(n: usize) -> Result<()> {
    if n > MAX_VERTICES {
        return Err(invalid_arg(format!("vertex universe {n} exceeds {MAX_VERTICES}")));
    }
    Ok(())
}

fn check_in_universe(s: Simplex, n: usize) -> Result<()> {
    if n < MAX_VERTICES && s.mask() >> n != 0 {
        return Err(invalid_arg(format!(
            "simplex {s:?} uses a vertex outside the universe of {n}"
        )));
    }
    Ok(())
}
