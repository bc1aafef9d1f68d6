use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Result};
use crate::homology::BettiVector;
use crate::terms::{ModelSupport, Term};

/// Seed of the frozen U{1..5} coefficient draws; preset `i` uses
/// `COEFFICIENT_SEED + i`.
pub const COEFFICIENT_SEED: u64 = 5_2017;

const P: usize = 8;

/// A true model for the harness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelPreset {
    pub name: String,
    pub description: String,
    pub support: ModelSupport,
    /// Aligned with `support`.
    pub coefficients: Vec<f64>,
    /// Betti vector of the closure, where it is pinned down.
    pub betti_target: Option<BettiVector>,
}

impl ModelPreset {
    pub fn p(&self) -> usize {
        self.support.p()
    }

    /// True coefficients laid out over `candidate`.
    pub fn coefficients_over(&self, candidate: &ModelSupport) -> Result<Vec<f64>> {
        let mut theta = vec![0.0; candidate.len()];
        for (t, c) in self.support.iter().zip(&self.coefficients) {
            let j = candidate
                .position(t)
                .ok_or_else(|| invalid_arg(format!("true term {} is not a candidate", t.label())))?;
            theta[j] = *c;
        }
        Ok(theta)
    }
}

fn t(one_based: &[usize]) -> Term {
    Term::from_one_based(one_based).expect("preset terms are valid")
}

fn mains() -> Vec<Term> {
    (1..=P).map(|i| t(&[i])).collect()
}

/// Lexicographically first `count` triples of `1..=P`.
fn first_triples(count: usize) -> Vec<Term> {
    let mut out = Vec::new();
    for a in 1..=P {
        for b in a + 1..=P {
            for c in b + 1..=P {
                out.push(t(&[a, b, c]));
            }
        }
    }
    out.truncate(count);
    out
}

/// All pairs and triples inside each block.
fn block_terms(blocks: &[std::ops::RangeInclusive<usize>], degree: usize) -> Vec<Term> {
    let mut out = Vec::new();
    for block in blocks {
        let v: Vec<usize> = block.clone().collect();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if degree == 2 {
                    out.push(t(&[v[i], v[j]]));
                    continue;
                }
                for k in j + 1..v.len() {
                    out.push(t(&[v[i], v[j], v[k]]));
                }
            }
        }
    }
    out
}

fn build(index: u64, name: &str, description: &str, terms: Vec<Term>, betti: Option<Vec<usize>>) -> ModelPreset {
    let support = ModelSupport::from_terms(P, terms).expect("preset terms fit p = 8");
    let mut rng = ChaCha8Rng::seed_from_u64(COEFFICIENT_SEED + index);
    let coefficients = (0..support.len()).map(|_| f64::from(rng.gen_range(1u8..=5))).collect();
    ModelPreset {
        name: name.into(),
        description: description.into(),
        support,
        coefficients,
        betti_target: betti.map(BettiVector::from_values),
    }
}

/// The four true models on eight variables.
///
/// * `model1`: all 8 mains and 28 pairs plus the 11 lexicographically first
///   triples (47 terms; the triangles all contain x1, leaving 10 independent
///   1-cycles).
/// * `model2`: blocks {1..4} and {5..8}, each with all pairs and triples
///   (28 terms; two hollow tetrahedra).
/// * `model3`: non-hierarchical, 20 terms: the hollow tetrahedron on {1..4},
///   triples 125 and 135, pairs 12 13 14 23 24 67. Its closure has three
///   components and one 2-cycle.
/// * `model4`: non-hierarchical, model2's 12 pairs plus the 16
///   lexicographically first triples (36 terms).
pub fn model_presets() -> Vec<ModelPreset> {
    let pairs_all = block_terms(&[1..=P], 2);
    let model1 = [mains(), pairs_all, first_triples(11)].concat();

    let blocks = [1..=4, 5..=8];
    let model2 = [mains(), block_terms(&blocks, 2), block_terms(&blocks, 3)].concat();

    let mut model3 = mains();
    model3.extend([[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4], [1, 2, 5], [1, 3, 5]].map(|v| t(&v)));
    model3.extend([[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [6, 7]].map(|v| t(&v)));

    let model4 = [mains(), block_terms(&blocks, 2), first_triples(16)].concat();

    vec![
        build(1, "model1", "8 mains, 28 pairs, 11 triples; connected", model1, Some(vec![1, 10, 0])),
        build(2, "model2", "8 mains, 12 pairs, 8 triples; two components", model2, Some(vec![2, 0, 2])),
        build(3, "model3", "8 mains, 6 pairs, 6 triples; three components", model3, Some(vec![3, 0, 1])),
        build(4, "model4", "8 mains, 12 pairs, 16 triples; non-hierarchical", model4, None),
    ]
}

pub fn preset_by_name(name: &str) -> Result<ModelPreset> {
    model_presets()
        .into_iter()
        .find(|m| m.name == name)
        .ok_or_else(|| invalid_arg(format!("unknown preset `{name}` (expected model1..model4)")))
}
