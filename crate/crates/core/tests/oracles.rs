//! Independent recomputations of values the library derives.

use std::collections::BTreeSet;

use repcat_core::ar_model::{canonicalize, f_power, quiver_d_op, shift1, DCoord};
use repcat_core::cluster_tilting::{enumerate_tilting_in, OrbitCategory, SearchBudget};
use repcat_core::equivalence::phi_p;
use repcat_core::polygon_model::{rho, PolygonConfig};
use repcat_core::translation_quiver::{hom_dims_from, MeshWindow, ZqVertex};

/// Orbit Hom from the mesh-ideal oracle on a window of `ZD_n`, summing over
/// every translate `F^{pm} Y` inside the window.
fn oracle_table(n: u32, p: u32, shifted: bool) -> Vec<Vec<u64>> {
    let cat = OrbitCategory::new(n, p).unwrap();
    let q = quiver_d_op(n).unwrap();
    let objects = cat.objects().to_vec();
    objects
        .iter()
        .map(|x| {
            let x = x.coord();
            let (lo, hi) = (x.i - 1, x.i + 4 * i64::from(n));
            let w = MeshWindow::new(&q, lo, hi).unwrap();
            let g = w.quiver();
            let xi = g.quiver().index_of(&ZqVertex::new(x.i, x.level)).unwrap();
            let dims = hom_dims_from(g, xi).unwrap();
            objects
                .iter()
                .map(|y| {
                    let y = if shifted {
                        shift1(y.coord(), n)
                    } else {
                        y.coord()
                    };
                    let y = canonicalize(y, n, p).0.coord();
                    (-6..=6)
                        .map(|m| f_power(y, n, m * i64::from(p)))
                        .filter(|t| (lo..=hi).contains(&t.i))
                        .map(|t: DCoord| {
                            dims[g.quiver().index_of(&ZqVertex::new(t.i, t.level)).unwrap()] as u64
                        })
                        .sum()
                })
                .collect()
        })
        .collect()
}

#[test]
fn orbit_tables_match_windowed_oracle() {
    for (n, p) in [(3, 1), (3, 2), (4, 1), (4, 2), (5, 1)] {
        let cat = OrbitCategory::new(n, p).unwrap();
        assert_eq!(
            cat.hom_table(),
            oracle_table(n, p, false).as_slice(),
            "Hom ({n},{p})"
        );
        assert_eq!(
            cat.ext_table(),
            oracle_table(n, p, true).as_slice(),
            "Ext ({n},{p})"
        );
    }
}

#[test]
fn hom_table_3_2_is_18_by_18() {
    let cat = OrbitCategory::new(3, 2).unwrap();
    assert_eq!(cat.hom_table().len(), 18);
    assert!(cat.hom_table().iter().all(|r| r.len() == 18));
}

fn ext_masks(cat: &OrbitCategory) -> (Vec<u64>, Vec<u64>) {
    let k = cat.objects().len();
    let e = cat.ext_table();
    let out = (0..k)
        .map(|t| {
            (0..k)
                .filter(|&x| e[t][x] != 0)
                .fold(0u64, |m, x| m | 1 << x)
        })
        .collect();
    let inc = (0..k)
        .map(|t| {
            (0..k)
                .filter(|&x| e[x][t] != 0)
                .fold(0u64, |m, x| m | 1 << x)
        })
        .collect();
    (out, inc)
}

/// Every subset checked against the two-sided definition.
fn brute_force_tilting(cat: &OrbitCategory) -> BTreeSet<u64> {
    let k = cat.objects().len();
    assert!(k <= 20);
    let (out, inc) = ext_masks(cat);
    let full = (1u64 << k) - 1;
    (1..=full)
        .filter(|&t| {
            let (mut a, mut b) = (0u64, 0u64);
            for i in 0..k {
                if t >> i & 1 == 1 {
                    a |= out[i];
                    b |= inc[i];
                }
            }
            (!a & full) == t && (!b & full) == t
        })
        .collect()
}

fn as_masks(cat: &OrbitCategory) -> BTreeSet<u64> {
    enumerate_tilting_in(cat, &SearchBudget::unlimited())
        .unwrap()
        .iter()
        .map(|t| {
            t.summands
                .iter()
                .fold(0u64, |m, &o| m | 1 << cat.index_of(o))
        })
        .collect()
}

#[test]
fn clique_search_matches_subset_enumeration() {
    for (n, p, count) in [(3, 1, 14), (4, 1, 50), (3, 2, 14)] {
        let cat = OrbitCategory::new(n, p).unwrap();
        let brute = brute_force_tilting(&cat);
        assert_eq!(brute.len(), count, "({n},{p})");
        assert_eq!(as_masks(&cat), brute, "({n},{p})");
    }
}

/// Every pairwise compatible set of the given size, by plain backtracking.
fn compatible_sets_of_size(cat: &OrbitCategory, size: usize) -> Vec<Vec<usize>> {
    let compat = cat.compatibility_matrix();
    let k = compat.len();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn go(
        start: usize,
        size: usize,
        compat: &[Vec<bool>],
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for v in start..compat.len() {
            if compat[v][v] && current.iter().all(|&u| compat[u][v]) {
                current.push(v);
                go(v + 1, size, compat, current, out);
                current.pop();
            }
        }
    }
    go(0, size, &compat, &mut current, &mut out);
    assert!(out.iter().all(|s| s.iter().all(|&v| v < k)));
    out
}

#[test]
fn no_compatible_set_of_size_pn_breaks_rotation_symmetry() {
    for (n, p) in [(3u32, 2u32), (4, 2)] {
        let cat = OrbitCategory::new(n, p).unwrap();
        let cfg = PolygonConfig::new(n, p).unwrap();
        let sets = compatible_sets_of_size(&cat, (n * p) as usize);
        assert!(!sets.is_empty());
        for s in &sets {
            let edges: BTreeSet<_> = s
                .iter()
                .map(|&i| phi_p(cat.objects()[i].coord(), n, p).unwrap())
                .collect();
            let rotated: BTreeSet<_> = edges.iter().map(|&m| rho(m, cfg)).collect();
            assert_eq!(edges, rotated, "({n},{p})");
        }
        assert!(compatible_sets_of_size(&cat, (n * p) as usize + 1).is_empty());
    }
}
