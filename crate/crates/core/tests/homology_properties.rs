mod common;

use proptest::prelude::*;
use topolasso::homology::{betti_numbers, d_closed_complex, BitMatrix};
use topolasso::terms::{parse_term_list, ModelSupport};

fn betti_of(text: &str, p: usize) -> Vec<usize> {
    let support: ModelSupport = parse_term_list(text, Some(p)).unwrap();
    let complex = support.hierarchical_closure().to_simplicial_complex().unwrap();
    betti_numbers(&complex, 1).0.values().to_vec()
}

#[test]
fn loop_and_two_component_models() {
    assert_eq!(betti_of("1\n2\n3\n4\n5\n1 2\n2 3\n2 4\n3 4\n4 5\n", 5), vec![1, 1]);
    assert_eq!(betti_of("1\n2\n3\n4\n5\n2 3\n2 4\n3 4\n4 5\n2 3 4\n", 5), vec![2, 0]);
}

#[test]
fn example_one_has_three_components() {
    assert_eq!(betti_of("1\n3\n1 2\n5 6\n", 6)[0], 3);
}

#[test]
fn pascal_triangle_of_independent_cycles() {
    // Row r of Pascal's triangle by the additive rule.
    let mut pascal = vec![vec![1u64]];
    for r in 1..=8 {
        let prev = &pascal[r - 1];
        let row = (0..=r).map(|i| if i == 0 || i == r { 1 } else { prev[i - 1] + prev[i] }).collect();
        pascal.push(row);
    }
    for d in 1..=6 {
        for k in 1..=d {
            let omega = d_closed_complex(k, d + 2).unwrap();
            let (betti, _) = betti_numbers(&omega, k);
            assert_eq!(betti.get(k) as u64, pascal[d + 1][k + 1], "k = {k}, d = {d}");
            // Every lower cycle is filled.
            assert!((1..k).all(|i| betti.get(i) == 0));
            assert_eq!(betti.get(0), 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn random_complexes_obey_the_homology_identities(seed in any::<u64>()) {
        prop_assert_eq!(common::check_complex(seed), Ok(()));
    }

    #[test]
    fn normal_form_rank_matches_elimination(rows in 1usize..40, cols in 1usize..40, bits in prop::collection::vec(any::<bool>(), 1600)) {
        let dense: Vec<Vec<bool>> = (0..rows).map(|i| (0..cols).map(|j| bits[i * 40 + j]).collect()).collect();
        let m = BitMatrix::from_fn(rows, cols, |i, j| dense[i][j]);
        prop_assert_eq!(m.rank(), common::z2_rank(&dense));
        let t = BitMatrix::from_fn(cols, rows, |i, j| dense[j][i]);
        prop_assert_eq!(t.rank(), m.rank());
    }
}
