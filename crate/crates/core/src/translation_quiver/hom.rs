//! Hom dimensions in mesh categories of directed translation quivers.
//!
//! Three routes are provided and tested against each other:
//!
//! * [`MeshWindow::hom_dim_hammock`] propagates the additive hammock function
//!   `h(w) = max(0, sum_{u -> w} h(u) - h(tau w))` through a finite window of
//!   `ZQ`.
//! * [`hom_dims_from`] computes the quotient of the path space by the mesh
//!   ideal exactly: `Hom(x, y)` is the cokernel of
//!   `Hom(x, tau y) -> (+)_{u -> y} Hom(x, u)` and every space is carried as
//!   an explicit rational matrix, so no truncation rule is involved.
//! * [`hom_dim_literal`] enumerates every path `x -> y`, every path obtained
//!   by inserting a mesh relation, and takes an exact rank. It is exponential
//!   and only used on small pairs.

use std::collections::HashMap;

use num_traits::One;

use super::{Quiver, TranslationQuiver, VertexId, ZqVertex};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Q};

/// Path-count cap for [`hom_dim_literal`].
pub const LITERAL_PATH_BUDGET: usize = 400;

/// A finite window `[i_min, i_max]` of `ZQ`.
#[derive(Clone, Debug)]
pub struct MeshWindow<V> {
    base: Quiver<V>,
    i_min: i64,
    i_max: i64,
    quiver: TranslationQuiver<ZqVertex<V>>,
    order: Vec<usize>,
}

impl<V: VertexId> MeshWindow<V> {
    pub fn new(base: &Quiver<V>, i_min: i64, i_max: i64) -> Result<Self> {
        let quiver = super::build_zq(base, i_min, i_max)?;
        let order = quiver
            .quiver()
            .topological_order()
            .ok_or_else(|| Error::Verification("ZQ window has an oriented cycle".into()))?;
        Ok(MeshWindow {
            base: base.clone(),
            i_min,
            i_max,
            quiver,
            order,
        })
    }

    pub fn base(&self) -> &Quiver<V> {
        &self.base
    }

    pub fn range(&self) -> (i64, i64) {
        (self.i_min, self.i_max)
    }

    pub fn quiver(&self) -> &TranslationQuiver<ZqVertex<V>> {
        &self.quiver
    }

    /// The hammock `h(x, -)`, indexed like the window's vertices. Fails when
    /// the support reaches the two rightmost columns.
    pub fn hammock(&self, x: &ZqVertex<V>) -> Result<Vec<u64>> {
        let q = self.quiver.quiver();
        let xi = q
            .index_of(x)
            .ok_or_else(|| Error::UnknownVertex(format!("{x:?}")))?;
        let mut h = vec![0u64; q.vertex_count()];
        for &w in &self.order {
            if w == xi {
                h[w] = 1;
                continue;
            }
            let inflow: u64 = q.predecessors(w).map(|u| h[u]).sum();
            let back = self.quiver.tau_index(w).map_or(0, |t| h[t]);
            h[w] = inflow.saturating_sub(back);
        }
        let edge = (self.i_max - 1).max(self.i_min);
        if (0..q.vertex_count()).any(|v| q.vertex(v).i >= edge && h[v] != 0) {
            return Err(Error::WindowTooSmall {
                from: format!("{x:?}"),
            });
        }
        Ok(h)
    }

    pub fn hom_dim_hammock(&self, x: &ZqVertex<V>, y: &ZqVertex<V>) -> Result<u64> {
        let yi = self
            .quiver
            .quiver()
            .index_of(y)
            .ok_or_else(|| Error::UnknownVertex(format!("{y:?}")))?;
        Ok(self.hammock(x)?[yi])
    }

    pub fn hom_dim_oracle(&self, x: &ZqVertex<V>, y: &ZqVertex<V>) -> Result<usize> {
        hom_dim_oracle(&self.quiver, x, y)
    }
}

/// Exact `dim Hom(x, -)` in the mesh category of an acyclic translation
/// quiver, indexed like the quiver's vertices.
pub fn hom_dims_from<V: VertexId>(g: &TranslationQuiver<V>, x: usize) -> Result<Vec<usize>> {
    let q = g.quiver();
    let order = q
        .topological_order()
        .ok_or_else(|| Error::Verification("mesh oracle needs an acyclic quiver".into()))?;
    let mut dims = vec![0usize; q.vertex_count()];
    // matrix of post-composition with each arrow, Hom(x, s) -> Hom(x, t)
    let mut arrow_maps: Vec<Option<Matrix>> = vec![None; q.arrow_count()];
    let mut reached = false;
    for &y in &order {
        if y == x {
            dims[y] = 1;
            reached = true;
            continue;
        }
        if !reached {
            continue;
        }
        let incoming: Vec<usize> = q
            .incoming_arrows(y)
            .iter()
            .copied()
            .filter(|&a| dims[q.arrow_indices()[a].0] > 0)
            .collect();
        let total: usize = incoming.iter().map(|&a| dims[q.arrow_indices()[a].0]).sum();
        if total == 0 {
            continue;
        }
        let projection = match g.tau_index(y).filter(|&t| dims[t] > 0) {
            None => Matrix::identity(total),
            Some(ty) => {
                let d_tau = dims[ty];
                let blocks: Vec<Matrix> = incoming
                    .iter()
                    .map(|&a| {
                        let u = q.arrow_indices()[a].0;
                        match g.sigma(a).and_then(|s| arrow_maps[s].clone()) {
                            Some(m) => m,
                            None => Matrix::zeros(dims[u], d_tau),
                        }
                    })
                    .collect();
                Matrix::vstack(&blocks, d_tau).left_null_space()
            }
        };
        dims[y] = projection.rows();
        let mut offset = 0;
        for &a in &incoming {
            let du = dims[q.arrow_indices()[a].0];
            arrow_maps[a] = Some(projection.column_block(offset, du));
            offset += du;
        }
    }
    Ok(dims)
}

pub fn hom_dim_oracle<V: VertexId>(g: &TranslationQuiver<V>, x: &V, y: &V) -> Result<usize> {
    let q = g.quiver();
    let xi = q
        .index_of(x)
        .ok_or_else(|| Error::UnknownVertex(format!("{x:?}")))?;
    let yi = q
        .index_of(y)
        .ok_or_else(|| Error::UnknownVertex(format!("{y:?}")))?;
    Ok(hom_dims_from(g, xi)?[yi])
}

/// `dim Hom(x, -)` in the mesh category of any translation quiver whose
/// relations are homogeneous, oriented cycles allowed. The quiver is unrolled
/// into its path-length cover, `(v, l)` with arrows raising `l` by one and
/// `tau (v, l) = (tau v, l - 2)`; dimensions are summed over `l`. Fails with
/// [`Error::BudgetExceeded`] if some layer up to `max_length` is still nonzero.
pub fn graded_hom_dims<V: VertexId>(
    g: &TranslationQuiver<V>,
    x: usize,
    max_length: usize,
) -> Result<Vec<usize>> {
    let q = g.quiver();
    let k = q.vertex_count();
    let mut length = 8.min(max_length);
    loop {
        let cover = length_cover(g, length)?;
        let dims = hom_dims_from(&cover, x)?;
        let top_clear = dims[length * k..].iter().all(|&d| d == 0);
        if top_clear {
            let mut out = vec![0usize; k];
            for (idx, d) in dims.iter().enumerate() {
                out[idx % k] += d;
            }
            return Ok(out);
        }
        if length >= max_length {
            return Err(Error::BudgetExceeded);
        }
        length = (2 * length).min(max_length);
    }
}

/// Vertices `(layer, v)` laid out layer-major so that index `l * k + v` is
/// vertex `v` at length `l`.
fn length_cover<V: VertexId>(
    g: &TranslationQuiver<V>,
    length: usize,
) -> Result<TranslationQuiver<(usize, usize)>> {
    let q = g.quiver();
    let k = q.vertex_count();
    let vertices: Vec<(usize, usize)> = (0..=length)
        .flat_map(|l| (0..k).map(move |v| (l, v)))
        .collect();
    let arrows: Vec<((usize, usize), (usize, usize))> = (0..length)
        .flat_map(|l| {
            q.arrow_indices()
                .iter()
                .map(move |&(s, t)| ((l, s), (l + 1, t)))
        })
        .collect();
    let cover = Quiver::new(vertices, arrows)?;
    let tau: Vec<((usize, usize), (usize, usize))> = (2..=length)
        .flat_map(|l| (0..k).filter_map(move |v| g.tau_index(v).map(|t| ((l, v), (l - 2, t)))))
        .collect();
    TranslationQuiver::new(cover, tau)
}

/// Literal quotient of the span of paths `x -> y` by the span of all paths
/// with one mesh relation inserted. `None` when more than `budget` paths
/// exist.
pub fn hom_dim_literal<V: VertexId>(
    g: &TranslationQuiver<V>,
    x: &V,
    y: &V,
    budget: usize,
) -> Result<Option<usize>> {
    let q = g.quiver();
    let xi = q
        .index_of(x)
        .ok_or_else(|| Error::UnknownVertex(format!("{x:?}")))?;
    let yi = q
        .index_of(y)
        .ok_or_else(|| Error::UnknownVertex(format!("{y:?}")))?;

    // vertices from which y is reachable
    let mut reaches = vec![false; q.vertex_count()];
    reaches[yi] = true;
    let mut stack = vec![yi];
    while let Some(v) = stack.pop() {
        for u in q.predecessors(v) {
            if !reaches[u] {
                reaches[u] = true;
                stack.push(u);
            }
        }
    }
    if !reaches[xi] {
        return Ok(Some(0));
    }

    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut current = vec![xi];
    if !collect_paths(q, &reaches, yi, &mut current, &mut paths, budget) {
        return Ok(None);
    }
    let index: HashMap<&[usize], usize> = paths
        .iter()
        .enumerate()
        .map(|(k, p)| (p.as_slice(), k))
        .collect();

    let mut relations: Vec<Vec<usize>> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for path in &paths {
        for k in 0..path.len().saturating_sub(2) {
            let (start, end) = (path[k], path[k + 2]);
            if g.tau_index(end) != Some(start) {
                continue;
            }
            let key = (path[..=k].to_vec(), path[k + 2..].to_vec());
            if !seen.insert(key) {
                continue;
            }
            let mut terms = Vec::new();
            for u in q.predecessors(end) {
                if q.arrow_between(start, u).is_none() {
                    continue;
                }
                let mut p = path[..=k].to_vec();
                p.push(u);
                p.extend_from_slice(&path[k + 2..]);
                terms.push(index[p.as_slice()]);
            }
            relations.push(terms);
        }
    }
    let mut m = Matrix::zeros(relations.len(), paths.len());
    for (r, terms) in relations.iter().enumerate() {
        for &c in terms {
            m[(r, c)] += Q::one();
        }
    }
    Ok(Some(paths.len() - m.rank()))
}

fn collect_paths<V: VertexId>(
    q: &Quiver<V>,
    reaches: &[bool],
    target: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    budget: usize,
) -> bool {
    let v = *current.last().expect("path is never empty");
    if v == target {
        out.push(current.clone());
        return out.len() <= budget;
    }
    let next: Vec<usize> = q.successors(v).filter(|&w| reaches[w]).collect();
    for w in next {
        current.push(w);
        let ok = collect_paths(q, reaches, target, current, out, budget);
        current.pop();
        if !ok {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Quiver<char> {
        Quiver::new(['x', 'y'], [('x', 'y')]).unwrap()
    }

    #[test]
    fn identity_survives() {
        let w = MeshWindow::new(&a2(), 0, 4).unwrap();
        let x = ZqVertex::new(0, 'x');
        assert_eq!(w.hom_dim_hammock(&x, &x).unwrap(), 1);
        assert_eq!(w.hom_dim_oracle(&x, &x).unwrap(), 1);
    }

    #[test]
    fn za2_mesh_kills_composite() {
        let w = MeshWindow::new(&a2(), 0, 4).unwrap();
        let v = ZqVertex::new;
        assert_eq!(w.hom_dim_hammock(&v(0, 'x'), &v(0, 'y')).unwrap(), 1);
        assert_eq!(w.hom_dim_hammock(&v(0, 'x'), &v(1, 'x')).unwrap(), 0);
        assert_eq!(w.hom_dim_oracle(&v(0, 'x'), &v(0, 'y')).unwrap(), 1);
        assert_eq!(w.hom_dim_oracle(&v(0, 'x'), &v(1, 'x')).unwrap(), 0);
        assert_eq!(
            hom_dim_literal(w.quiver(), &v(0, 'x'), &v(1, 'x'), 10).unwrap(),
            Some(0)
        );
    }

    #[test]
    fn single_mesh_with_one_middle() {
        // s -> m -> t with tau t = s
        let q = Quiver::new(['s', 'm', 't'], [('s', 'm'), ('m', 't')]).unwrap();
        let g = TranslationQuiver::new(q, [('t', 's')]).unwrap();
        assert_eq!(hom_dim_oracle(&g, &'s', &'t').unwrap(), 0);
        assert_eq!(hom_dim_literal(&g, &'s', &'t', 10).unwrap(), Some(0));
        assert_eq!(hom_dim_oracle(&g, &'s', &'m').unwrap(), 1);
    }

    #[test]
    fn mesh_with_two_middles_leaves_one_dimension() {
        // two paths s -> a -> t, s -> b -> t related by one mesh
        let q = Quiver::new(
            ['s', 'a', 'b', 't'],
            [('s', 'a'), ('s', 'b'), ('a', 't'), ('b', 't')],
        )
        .unwrap();
        let g = TranslationQuiver::new(q, [('t', 's')]).unwrap();
        assert_eq!(hom_dim_oracle(&g, &'s', &'t').unwrap(), 1);
        assert_eq!(hom_dim_literal(&g, &'s', &'t', 10).unwrap(), Some(1));
    }

    #[test]
    fn small_window_is_reported() {
        let w = MeshWindow::new(&a2(), 0, 1).unwrap();
        assert!(matches!(
            w.hammock(&ZqVertex::new(0, 'x')),
            Err(Error::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn graded_cover_matches_acyclic_oracle() {
        let q = Quiver::new([1, 2, 3], [(1, 2), (2, 3)]).unwrap();
        let w = MeshWindow::new(&q, 0, 8).unwrap();
        let g = w.quiver();
        let x = g.quiver().index_of(&ZqVertex::new(1, 1)).unwrap();
        assert_eq!(
            graded_hom_dims(g, x, 64).unwrap(),
            hom_dims_from(g, x).unwrap()
        );
    }

    #[test]
    fn graded_cover_on_a_loop_with_relation() {
        // one vertex, one loop, tau v = v: the mesh kills the square of the loop
        let q = Quiver::new(['v', 'w'], [('v', 'w'), ('w', 'v')]).unwrap();
        let g = TranslationQuiver::new(q, [('v', 'v'), ('w', 'w')]).unwrap();
        let dims = graded_hom_dims(&g, 0, 32).unwrap();
        assert_eq!(dims, vec![1, 1]);
    }

    #[test]
    fn graded_cover_reports_infinite_hom() {
        let q = Quiver::new(['v', 'w'], [('v', 'w'), ('w', 'v')]).unwrap();
        let g = TranslationQuiver::new(q, []).unwrap();
        assert_eq!(
            graded_hom_dims(&g, 0, 16).unwrap_err(),
            Error::BudgetExceeded
        );
    }

    #[test]
    fn literal_respects_budget() {
        let q = Quiver::new(
            ['s', 'a', 'b', 't'],
            [('s', 'a'), ('s', 'b'), ('a', 't'), ('b', 't')],
        )
        .unwrap();
        let g = TranslationQuiver::new(q, []).unwrap();
        assert_eq!(hom_dim_literal(&g, &'s', &'t', 1).unwrap(), None);
        assert_eq!(hom_dim_literal(&g, &'s', &'t', 2).unwrap(), Some(2));
    }

    #[test]
    fn hammock_is_nonnegative_with_finite_support_in_za3() {
        let q = Quiver::new([1, 2, 3], [(1, 2), (2, 3)]).unwrap();
        let w = MeshWindow::new(&q, 0, 8).unwrap();
        for x in [1, 2, 3] {
            let h = w.hammock(&ZqVertex::new(1, x)).unwrap();
            let support = h.iter().filter(|&&d| d > 0).count();
            assert!(support > 0 && support < h.len());
        }
    }
}
