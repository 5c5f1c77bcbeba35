//! Grouping of (near-)unimodular eigenvalues that agree within a tolerance.
//!
//! Values are sorted by phase and only neighbours inside a small phase window
//! are compared, so the cost is `O(K log K)` for `K` values. Pairs closer than
//! `tol` in the complex plane are merged with union-find, which makes the
//! grouping the transitive closure of "within tolerance".

use std::f64::consts::PI;

use num_complex::Complex64;
use petgraph::unionfind::UnionFind;

/// Default absolute tolerance for identifying eigenvalues across blocks.
pub const CLUSTER_TOL: f64 = 1e-9;

/// Indices into the input slice, one `Vec` per group. Groups are ordered by
/// their smallest member index; members are ascending.
pub fn cluster_indices(values: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let k = values.len();
    if k == 0 {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..k).collect();
    let phase = |i: usize| values[i].arg();
    order.sort_by(|&a, &b| phase(a).total_cmp(&phase(b)).then(a.cmp(&b)));

    // chord ≤ arc on the unit circle, and moduli sit within ~1e-12 of one, so
    // a phase window of a few `tol` is enough to catch every close pair
    let window = 4.0 * tol;
    let mut uf = UnionFind::<usize>::new(k);
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if phase(j) - phase(i) > window {
                break;
            }
            if (values[i] - values[j]).norm() < tol {
                uf.union(i, j);
            }
        }
    }
    // phases near +π and −π are neighbours too
    for &i in order.iter().rev() {
        if phase(i) < PI - window {
            break;
        }
        for &j in &order {
            if phase(j) > -PI + window {
                break;
            }
            if (values[i] - values[j]).norm() < tol {
                uf.union(i, j);
            }
        }
    }

    let labels = uf.into_labeling();
    let mut slot = vec![usize::MAX; k];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &root) in labels.iter().enumerate() {
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(i);
    }
    groups
}

/// Mean of the selected values.
pub fn centroid(values: &[Complex64], members: &[usize]) -> Complex64 {
    let sum: Complex64 = members.iter().map(|&i| values[i]).sum();
    sum / members.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn phase(t: f64) -> Complex64 {
        Complex64::from_polar(1.0, t)
    }

    #[test]
    fn merges_close_values() {
        let v = [phase(0.1), phase(2.0), phase(0.1 + 1e-12), phase(2.0 - 3e-13), phase(-1.0)];
        let g = cluster_indices(&v, CLUSTER_TOL);
        assert_eq!(g, vec![vec![0, 2], vec![1, 3], vec![4]]);
    }

    #[test]
    fn merges_across_branch_cut() {
        let v = [Complex64::new(-1.0, 1e-13), Complex64::new(-1.0, -1e-13), Complex64::new(-1.0, 0.0), phase(3.0)];
        let g = cluster_indices(&v, CLUSTER_TOL);
        assert_eq!(g, vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn keeps_separated_values_apart() {
        let v = [phase(1.0), phase(1.0 + 1e-8)];
        assert_eq!(cluster_indices(&v, CLUSTER_TOL).len(), 2);
    }

    #[test]
    fn centroid_of_cluster() {
        let v = [Complex64::new(1.0, 0.0), Complex64::new(3.0, 2.0)];
        assert_eq!(centroid(&v, &[0, 1]), Complex64::new(2.0, 1.0));
    }

    proptest! {
        // Same grouping as the quadratic all-pairs closure.
        #[test]
        fn agrees_with_all_pairs(phases in prop::collection::vec(prop_oneof![
            (-4i32..=4).prop_map(|k| k as f64 * PI / 4.0),
            -PI..PI,
        ], 1..40), jitter in prop::collection::vec(-3e-10..3e-10f64, 40)) {
            let values: Vec<Complex64> = phases.iter().zip(&jitter).map(|(t, j)| phase(t + j)).collect();
            let got = cluster_indices(&values, CLUSTER_TOL);

            let k = values.len();
            let mut uf = UnionFind::<usize>::new(k);
            for i in 0..k {
                for j in i + 1..k {
                    if (values[i] - values[j]).norm() < CLUSTER_TOL {
                        uf.union(i, j);
                    }
                }
            }
            for g in &got {
                for w in g.windows(2) {
                    prop_assert!(uf.equiv(w[0], w[1]));
                }
            }
            let total: usize = got.iter().map(Vec::len).sum();
            prop_assert_eq!(total, k);
            for (a, ga) in got.iter().enumerate() {
                for gb in &got[a + 1..] {
                    prop_assert!(!uf.equiv(ga[0], gb[0]));
                }
            }
        }
    }
}
