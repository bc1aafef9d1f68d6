//! Simplicial homology with Z2 coefficients.
//!
//! For a complex with `m_d` simplices of dimension `d`, the boundary map
//! `∂_d` is a `m_{d-1} × m_d` 0/1 matrix whose column for a `d`-simplex marks
//! its `d + 1` codimension-one faces. Writing `r_d` for its rank over Z2,
//!
//! * cycles: `z_0 = m_0`, `z_d = m_d - r_d`
//! * boundaries: `b_d = r_{d+1}`
//! * Betti numbers: `β_d = z_d - b_d`
//!
//! The rank comes from [`z2_reduce`], which brings a copy of the matrix to
//! its diagonal normal form.

mod bitmatrix;
mod complex;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use bitmatrix::BitMatrix;
pub use complex::{Simplex, SimplicialComplex, MAX_VERTICES};
pub(crate) use complex::{canonical_cmp, BitIter};

use crate::error::{invalid_arg, Result};

/// Matrix of `∂_d` with its row and column labels.
#[derive(Clone, Debug)]
pub struct BoundaryMatrix {
    pub dim: usize,
    /// The `(d-1)`-simplices, one per row.
    pub row_labels: Vec<Simplex>,
    /// The `d`-simplices, one per column.
    pub col_labels: Vec<Simplex>,
    pub entries: BitMatrix,
}

impl BoundaryMatrix {
    pub fn rows(&self) -> usize {
        self.entries.rows()
    }

    pub fn cols(&self) -> usize {
        self.entries.cols()
    }
}

/// Builds the matrix of `∂_d` for `d >= 1`.
///
/// Entry `(i, j)` is one iff the `i`-th `(d-1)`-simplex is a face of the
/// `j`-th `d`-simplex. A complex without `d`-simplices yields an
/// `m_{d-1} × 0` matrix.
pub fn boundary_matrix(c: &SimplicialComplex, d: usize) -> Result<BoundaryMatrix> {
    if d < 1 {
        return Err(invalid_arg("boundary matrices start at d = 1; ∂_0 is the zero map"));
    }
    let rows = c.simplices(d - 1).to_vec();
    let cols = c.simplices(d).to_vec();
    let index: HashMap<Simplex, usize> = rows.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut entries = BitMatrix::zeros(rows.len(), cols.len());
    for (j, s) in cols.iter().enumerate() {
        for face in s.boundary_faces() {
            let i = index[&face];
            entries.set(i, j, true);
        }
    }
    Ok(BoundaryMatrix { dim: d, row_labels: rows, col_labels: cols, entries })
}

/// Rank over Z2 of a boundary matrix. The caller's matrix is left untouched.
pub fn z2_reduce(m: &BoundaryMatrix) -> usize {
    m.entries.rank()
}

/// Per-dimension rank bookkeeping behind a Betti vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionSummary {
    pub dim: usize,
    /// Number of `d`-simplices.
    pub simplices: usize,
    /// Rank of the cycle group `Z_d`.
    pub cycles: usize,
    /// Rank of the boundary group `B_d`.
    pub boundaries: usize,
    pub betti: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub max_dim: usize,
    pub dims: Vec<DimensionSummary>,
}

impl HomologySummary {
    /// Checks `m_d = z_d + b_{d-1}` and `β_d = z_d - b_d` in every dimension.
    pub fn satisfies_rank_nullity(&self) -> bool {
        self.dims.iter().enumerate().all(|(d, s)| {
            let prev_b = if d == 0 { 0 } else { self.dims[d - 1].boundaries };
            s.simplices == s.cycles + prev_b
                && s.cycles >= s.boundaries
                && s.betti == s.cycles - s.boundaries
        })
    }
}

/// Betti numbers `β_0..β_D` of one complex; `D` is fixed per analysis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BettiVector(Vec<usize>);

impl BettiVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn from_values(values: Vec<usize>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, d: usize) -> usize {
        self.0.get(d).copied().unwrap_or(0)
    }

    /// Weighted score `Σ_d a_d β_d`; missing weights count as zero.
    pub fn weighted(&self, weights: &[f64]) -> f64 {
        self.0.iter().zip(weights).map(|(&b, &a)| b as f64 * a).sum()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl std::fmt::Display for BettiVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

/// Computes `β_0..β_{max_dim}` together with the rank bookkeeping.
///
/// Only boundary matrices up to the complex's own top dimension are
/// materialised; every entry above it is zero.
pub fn betti_numbers(c: &SimplicialComplex, max_dim: usize) -> (BettiVector, HomologySummary) {
    let top = c.dim();
    // ranks[d] = rank ∂_d, with ∂_0 = 0.
    let needed = top.map_or(0, |t| t.min(max_dim + 1));
    let mut ranks = vec![0usize; max_dim + 2];
    for (d, rank) in ranks.iter_mut().enumerate().take(needed + 1).skip(1) {
        let m = boundary_matrix(c, d).expect("d >= 1");
        *rank = z2_reduce(&m);
    }
    let dims: Vec<DimensionSummary> = (0..=max_dim)
        .map(|d| {
            let simplices = c.count(d);
            let cycles = simplices - ranks[d];
            let boundaries = ranks[d + 1];
            DimensionSummary { dim: d, simplices, cycles, boundaries, betti: cycles - boundaries }
        })
        .collect();
    let betti = BettiVector(dims.iter().map(|s| s.betti).collect());
    (betti, HomologySummary { max_dim, dims })
}

/// The complex on `m` vertices whose maximal faces are all `C(m, k+1)`
/// `k`-simplices.
pub fn d_closed_complex(k: usize, m: usize) -> Result<SimplicialComplex> {
    if m < k + 2 {
        return Err(invalid_arg(format!("need at least k + 2 = {} vertices, got {m}", k + 2)));
    }
    if m > MAX_VERTICES {
        return Err(invalid_arg(format!("at most {MAX_VERTICES} vertices are supported")));
    }
    let faces = subsets_of_size(m, k + 1).map(|mask| Simplex::from_mask(mask).expect("nonempty"));
    SimplicialComplex::from_maximal_faces(m, faces)
}

/// The complete graph on `m` vertices.
pub fn complete_graph(m: usize) -> Result<SimplicialComplex> {
    d_closed_complex(1, m)
}

/// The full simplex on `m` vertices with all of its faces.
pub fn full_simplex(m: usize) -> Result<SimplicialComplex> {
    if m == 0 || m > MAX_VERTICES {
        return Err(invalid_arg(format!("vertex count must be in 1..={MAX_VERTICES}")));
    }
    let all = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    SimplicialComplex::from_maximal_faces(m, Simplex::from_mask(all))
}

/// Closed-form count `C(d+1, k+1)` of independent `k`-cycles in the
/// `k`-skeleton of the simplex on `d + 2` vertices.
pub fn expected_independent_cycles(k: usize, d: usize) -> Result<u64> {
    if k < 1 || d < k {
        return Err(invalid_arg(format!("need 1 <= k <= d, got k = {k}, d = {d}")));
    }
    Ok(binomial(d as u64 + 1, k as u64 + 1))
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// All `size`-subsets of `0..n` as masks, in increasing lexicographic order.
pub(crate) fn subsets_of_size(n: usize, size: usize) -> impl Iterator<Item = u64> {
    let mut current: Option<Vec<usize>> = (size <= n && size > 0).then(|| (0..size).collect());
    std::iter::from_fn(move || {
        let idx = current.as_mut()?;
        let mask = idx.iter().fold(0u64, |m, &i| m | 1 << i);
        // advance to the next combination
        let mut i = size;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if idx[i] < n - size + i {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            current = None;
        }
        Some(mask)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sx(v: &[usize]) -> Simplex {
        Simplex::from_vertices(v).unwrap()
    }

    fn complex(n: usize, faces: &[&[usize]]) -> SimplicialComplex {
        SimplicialComplex::from_maximal_faces(n, faces.iter().map(|f| sx(f))).unwrap()
    }

    #[test]
    fn single_edge_boundary() {
        let c = complex(2, &[&[0, 1]]);
        let m = boundary_matrix(&c, 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 1));
        assert!(m.entries.get(0, 0) && m.entries.get(1, 0));
    }

    #[test]
    fn hollow_triangle_boundary() {
        let c = d_closed_complex(1, 3).unwrap();
        let m = boundary_matrix(&c, 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 3));
        for j in 0..3 {
            assert_eq!(m.entries.col_weight(j), 2);
            assert_eq!(m.entries.row_weight(j), 2);
        }
        assert_eq!(z2_reduce(&m), 2);
    }

    #[test]
    fn filled_triangle_top_boundary() {
        let c = complex(3, &[&[0, 1, 2]]);
        let m = boundary_matrix(&c, 2).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 1));
        assert_eq!(m.entries.col_weight(0), 3);
    }

    #[test]
    fn empty_top_dimension_gives_zero_columns() {
        let c = complex(3, &[&[0, 1]]);
        let m = boundary_matrix(&c, 2).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 0));
        assert!(boundary_matrix(&c, 0).is_err());
    }

    #[test]
    fn columns_have_d_plus_one_ones() {
        let c = full_simplex(5).unwrap();
        for d in 1..=4 {
            let m = boundary_matrix(&c, d).unwrap();
            assert!((0..m.cols()).all(|j| m.entries.col_weight(j) == d + 1));
        }
    }

    #[test]
    fn hollow_tetrahedron() {
        let c = d_closed_complex(2, 4).unwrap();
        assert_eq!(c.face_counts(), vec![4, 6, 4]);
        let (b, s) = betti_numbers(&c, 2);
        assert_eq!(b.values(), &[1, 0, 1]);
        assert!(s.satisfies_rank_nullity());
    }

    #[test]
    fn void_complex_is_all_zero() {
        let (b, s) = betti_numbers(&SimplicialComplex::void(3), 2);
        assert_eq!(b.values(), &[0, 0, 0]);
        assert!(s.satisfies_rank_nullity());
    }

    #[test]
    fn entries_above_top_dimension_are_zero() {
        let c = complex(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        let (b, _) = betti_numbers(&c, 5);
        assert_eq!(b.values(), &[1, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn max_dim_below_top_still_uses_next_boundary() {
        // filled triangle: β_1 must see ∂_2.
        let c = complex(3, &[&[0, 1, 2]]);
        let (b, _) = betti_numbers(&c, 1);
        assert_eq!(b.values(), &[1, 0]);
    }

    #[test]
    fn d_closed_examples() {
        assert_eq!(d_closed_complex(1, 3).unwrap().face_counts(), vec![3, 3]);
        assert_eq!(d_closed_complex(1, 4).unwrap().face_counts(), vec![4, 6]);
        assert!(d_closed_complex(2, 3).is_err());
    }

    #[test]
    fn expected_cycles_examples() {
        assert_eq!(expected_independent_cycles(1, 2).unwrap(), 3);
        assert_eq!(expected_independent_cycles(3, 6).unwrap(), 35);
        for k in 1..6 {
            assert_eq!(expected_independent_cycles(k, k).unwrap(), 1);
        }
        assert!(expected_independent_cycles(3, 2).is_err());
        assert!(expected_independent_cycles(0, 2).is_err());
    }

    #[test]
    fn subsets_enumeration() {
        let v: Vec<u64> = subsets_of_size(4, 2).collect();
        assert_eq!(v, vec![0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]);
        assert_eq!(subsets_of_size(8, 3).count(), 56);
        assert_eq!(subsets_of_size(3, 4).count(), 0);
    }

    #[test]
    fn filling_triangles_of_k4() {
        let mut c = complete_graph(4).unwrap();
        assert_eq!(betti_numbers(&c, 2).0.values(), &[1, 3, 0]);
        let tris = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
        let expected = [[1, 2, 0], [1, 1, 0], [1, 0, 0], [1, 0, 1]];
        for (t, e) in tris.iter().zip(expected) {
            c.insert_closed(sx(t)).unwrap();
            assert_eq!(betti_numbers(&c, 2).0.values(), &e);
        }
    }
}
