//! Quivers, translation quivers and their mesh categories.
//!
//! Vertices are opaque ids of any hashable, ordered type. Quivers in this
//! crate never carry multiple arrows between an ordered pair of vertices, so
//! an arrow is identified with its endpoints and the polarization is unique.

mod hom;
mod json;

pub use hom::{
    graded_hom_dims, hom_dim_literal, hom_dim_oracle, hom_dims_from, MeshWindow,
    LITERAL_PATH_BUDGET,
};
pub use json::{ArrowJson, QuiverJson, TauJson};

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bounds shared by every vertex id type.
pub trait VertexId: Clone + Eq + Hash + Ord + fmt::Debug {}

impl<T: Clone + Eq + Hash + Ord + fmt::Debug> VertexId for T {}

#[derive(Clone, Debug)]
pub struct Quiver<V> {
    vertices: Vec<V>,
    index: HashMap<V, usize>,
    arrows: Vec<(usize, usize)>,
    arrow_index: HashMap<(usize, usize), usize>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl<V: VertexId> Quiver<V> {
    /// Builds a quiver. Repeated vertices are merged; a repeated arrow is an
    /// error.
    pub fn new(
        vertices: impl IntoIterator<Item = V>,
        arrows: impl IntoIterator<Item = (V, V)>,
    ) -> Result<Self> {
        let mut q = Quiver {
            vertices: Vec::new(),
            index: HashMap::new(),
            arrows: Vec::new(),
            arrow_index: HashMap::new(),
            out: Vec::new(),
            inc: Vec::new(),
        };
        for v in vertices {
            if !q.index.contains_key(&v) {
                q.index.insert(v.clone(), q.vertices.len());
                q.vertices.push(v);
                q.out.push(Vec::new());
                q.inc.push(Vec::new());
            }
        }
        for (s, t) in arrows {
            let si = q.require(&s)?;
            let ti = q.require(&t)?;
            if q.arrow_index.contains_key(&(si, ti)) {
                return Err(Error::MultipleArrows(format!("{s:?}"), format!("{t:?}")));
            }
            let a = q.arrows.len();
            q.arrows.push((si, ti));
            q.arrow_index.insert((si, ti), a);
            q.out[si].push(a);
            q.inc[ti].push(a);
        }
        Ok(q)
    }

    fn require(&self, v: &V) -> Result<usize> {
        self.index
            .get(v)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(format!("{v:?}")))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[V] {
        &self.vertices
    }

    pub fn vertex(&self, idx: usize) -> &V {
        &self.vertices[idx]
    }

    pub fn index_of(&self, v: &V) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &V) -> bool {
        self.index.contains_key(v)
    }

    /// Arrows as `(source index, target index)`.
    pub fn arrow_indices(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn arrows(&self) -> impl Iterator<Item = (&V, &V)> + '_ {
        self.arrows
            .iter()
            .map(move |&(s, t)| (&self.vertices[s], &self.vertices[t]))
    }

    pub fn arrow_between(&self, s: usize, t: usize) -> Option<usize> {
        self.arrow_index.get(&(s, t)).copied()
    }

    pub fn has_arrow(&self, s: &V, t: &V) -> bool {
        match (self.index_of(s), self.index_of(t)) {
            (Some(s), Some(t)) => self.arrow_index.contains_key(&(s, t)),
            _ => false,
        }
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[v].iter().map(move |&a| self.arrows[a].1)
    }

    pub fn predecessors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.inc[v].iter().map(move |&a| self.arrows[a].0)
    }

    pub fn incoming_arrows(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    /// Kahn's algorithm, ties broken by insertion order. `None` if the quiver
    /// has an oriented cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg: Vec<usize> = self.inc.iter().map(Vec::len).collect();
        let mut ready: std::collections::BTreeSet<usize> = (0..self.vertex_count())
            .filter(|&v| indeg[v] == 0)
            .collect();
        let mut order = Vec::with_capacity(self.vertex_count());
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for w in self.successors(v) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        (order.len() == self.vertex_count()).then_some(order)
    }

    /// Connected components of the underlying undirected graph, each sorted
    /// by vertex index; components ordered by their smallest member.
    pub fn weak_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count()];
        let mut comps = Vec::new();
        for start in 0..self.vertex_count() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in self.successors(v).chain(self.predecessors(v)) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn map_vertices<W: VertexId>(&self, f: impl Fn(&V) -> W) -> Result<Quiver<W>> {
        Quiver::new(
            self.vertices.iter().map(&f),
            self.arrows().map(|(s, t)| (f(s), f(t))),
        )
    }
}

/// A violated condition found by [`TranslationQuiver::check_translation`] or
/// [`TranslationQuiver::check_stable_translation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation<V> {
    TauUndefined {
        vertex: V,
    },
    TauNotSurjective {
        vertex: V,
    },
    ArrowCountMismatch {
        x: V,
        y: V,
        forward: usize,
        backward: usize,
    },
    PolarizationNotBijective,
}

/// One mesh relation `m_x`: the sum over arrows `y -> x` of the path
/// `tau x -> y -> x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeshRelation<V> {
    pub vertex: V,
    pub tau: V,
    pub middles: Vec<V>,
}

impl<V> MeshRelation<V> {
    pub fn summand_count(&self) -> usize {
        self.middles.len()
    }
}

#[derive(Clone, Debug)]
pub struct TranslationQuiver<V> {
    quiver: Quiver<V>,
    tau: Vec<Option<usize>>,
    tau_inv: Vec<Option<usize>>,
}

impl<V: VertexId> TranslationQuiver<V> {
    /// `tau` lists `(x, tau x)` pairs; the map must be injective.
    pub fn new(quiver: Quiver<V>, tau: impl IntoIterator<Item = (V, V)>) -> Result<Self> {
        let n = quiver.vertex_count();
        let mut t = vec![None; n];
        let mut inv = vec![None; n];
        for (x, tx) in tau {
            let xi = quiver.require(&x)?;
            let ti = quiver.require(&tx)?;
            if let Some(prev) = t[xi] {
                if prev != ti {
                    return Err(Error::Verification(format!("tau assigned twice on {x:?}")));
                }
                continue;
            }
            if inv[ti].is_some() {
                return Err(Error::TauNotInjective(format!("{tx:?}")));
            }
            t[xi] = Some(ti);
            inv[ti] = Some(xi);
        }
        Ok(TranslationQuiver {
            quiver,
            tau: t,
            tau_inv: inv,
        })
    }

    pub fn quiver(&self) -> &Quiver<V> {
        &self.quiver
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    pub fn arrow_count(&self) -> usize {
        self.quiver.arrow_count()
    }

    pub fn vertices(&self) -> &[V] {
        self.quiver.vertices()
    }

    pub fn tau_index(&self, v: usize) -> Option<usize> {
        self.tau[v]
    }

    pub fn tau_inverse_index(&self, v: usize) -> Option<usize> {
        self.tau_inv[v]
    }

    pub fn tau(&self, v: &V) -> Option<&V> {
        let i = self.quiver.index_of(v)?;
        self.tau[i].map(|t| self.quiver.vertex(t))
    }

    pub fn tau_pairs(&self) -> impl Iterator<Item = (&V, &V)> + '_ {
        self.tau
            .iter()
            .enumerate()
            .filter_map(move |(x, t)| t.map(|t| (self.quiver.vertex(x), self.quiver.vertex(t))))
    }

    /// Polarization of arrow `alpha: y -> x`, the arrow `tau x -> y`.
    pub fn sigma(&self, alpha: usize) -> Option<usize> {
        let (y, x) = self.quiver.arrows[alpha];
        let tx = self.tau[x]?;
        self.quiver.arrow_between(tx, y)
    }

    fn count(&self, s: usize, t: usize) -> usize {
        usize::from(self.quiver.arrow_between(s, t).is_some())
    }

    /// Conditions of a (not necessarily stable) translation quiver: for
    /// every `y` with `tau y` defined and every `x`, the arrow counts
    /// `x -> y` and `tau y -> x` agree.
    pub fn check_translation(&self) -> Vec<Violation<V>> {
        let mut out = Vec::new();
        for y in 0..self.vertex_count() {
            let Some(ty) = self.tau[y] else { continue };
            // candidates: predecessors of y and successors of tau y
            let mut xs: Vec<usize> = self
                .quiver
                .predecessors(y)
                .chain(self.quiver.successors(ty))
                .collect();
            xs.sort_unstable();
            xs.dedup();
            for x in xs {
                let forward = self.count(x, y);
                let backward = self.count(ty, x);
                if forward != backward {
                    out.push(Violation::ArrowCountMismatch {
                        x: self.quiver.vertex(x).clone(),
                        y: self.quiver.vertex(y).clone(),
                        forward,
                        backward,
                    });
                }
            }
        }
        out
    }

    /// Empty iff this is a stable translation quiver with polarization.
    pub fn check_stable_translation(&self) -> Vec<Violation<V>> {
        let mut out = Vec::new();
        for v in 0..self.vertex_count() {
            if self.tau[v].is_none() {
                out.push(Violation::TauUndefined {
                    vertex: self.quiver.vertex(v).clone(),
                });
            }
            if self.tau_inv[v].is_none() {
                out.push(Violation::TauNotSurjective {
                    vertex: self.quiver.vertex(v).clone(),
                });
            }
        }
        out.extend(self.check_translation());
        if !self.polarization_is_bijective() {
            out.push(Violation::PolarizationNotBijective);
        }
        out
    }

    fn polarization_is_bijective(&self) -> bool {
        let m = self.arrow_count();
        let mut hit = vec![false; m];
        for a in 0..m {
            let Some(s) = self.sigma(a) else { return false };
            if std::mem::replace(&mut hit[s], true) {
                return false;
            }
        }
        true
    }

    pub fn is_stable(&self) -> bool {
        self.check_stable_translation().is_empty()
    }

    /// One relation per vertex with `tau` defined, skipping the rest.
    pub fn mesh_relations(&self) -> Vec<MeshRelation<V>> {
        (0..self.vertex_count())
            .filter_map(|x| self.mesh_relation_at(x))
            .collect()
    }

    pub fn mesh_relation_at(&self, x: usize) -> Option<MeshRelation<V>> {
        let tx = self.tau[x]?;
        let middles = self
            .quiver
            .incoming_arrows(x)
            .iter()
            .filter(|&&a| self.sigma(a).is_some())
            .map(|&a| self.quiver.vertex(self.quiver.arrows[a].0).clone())
            .collect();
        Some(MeshRelation {
            vertex: self.quiver.vertex(x).clone(),
            tau: self.quiver.vertex(tx).clone(),
            middles,
        })
    }

    /// Full subquiver on the vertices satisfying `keep`, with `tau`
    /// restricted to pairs that both survive.
    pub fn full_subquiver(&self, keep: impl Fn(&V) -> bool) -> Result<TranslationQuiver<V>> {
        let kept: Vec<usize> = (0..self.vertex_count())
            .filter(|&v| keep(self.quiver.vertex(v)))
            .collect();
        let mut alive = vec![false; self.vertex_count()];
        for &v in &kept {
            alive[v] = true;
        }
        let q = Quiver::new(
            kept.iter().map(|&v| self.quiver.vertex(v).clone()),
            self.quiver
                .arrows
                .iter()
                .filter(|&&(s, t)| alive[s] && alive[t])
                .map(|&(s, t)| (self.quiver.vertex(s).clone(), self.quiver.vertex(t).clone())),
        )?;
        let tau: Vec<(V, V)> = kept
            .iter()
            .filter_map(|&v| {
                let t = self.tau[v]?;
                alive[t].then(|| (self.quiver.vertex(v).clone(), self.quiver.vertex(t).clone()))
            })
            .collect();
        TranslationQuiver::new(q, tau)
    }

    /// True when `tau` and `tau^{-1}` never leave the vertex set, i.e. every
    /// vertex keeps its translate.
    pub fn is_tau_closed(&self) -> bool {
        self.tau.iter().all(Option::is_some) && self.tau_inv.iter().all(Option::is_some)
    }

    pub fn map_vertices<W: VertexId>(&self, f: impl Fn(&V) -> W) -> Result<TranslationQuiver<W>> {
        let q = self.quiver.map_vertices(&f)?;
        TranslationQuiver::new(
            q,
            self.tau_pairs()
                .map(|(x, t)| (f(x), f(t)))
                .collect::<Vec<_>>(),
        )
    }

    /// Lengths of the `tau`-orbits, one entry per orbit, in order of first
    /// vertex. Only meaningful for stable quivers; partial orbits are
    /// reported with their length too.
    pub fn tau_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count()];
        let mut orbits = Vec::new();
        for start in 0..self.vertex_count() {
            if seen[start] {
                continue;
            }
            // walk back to the beginning of a partial orbit
            let mut first = start;
            while let Some(p) = self.tau_inv[first] {
                if p == start {
                    break;
                }
                first = p;
            }
            let mut orbit = Vec::new();
            let mut v = first;
            loop {
                seen[v] = true;
                orbit.push(v);
                match self.tau[v] {
                    Some(t) if t != first => v = t,
                    _ => break,
                }
            }
            orbits.push(orbit);
        }
        orbits
    }
}

/// Vertex `(i, x)` of `ZQ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZqVertex<V> {
    pub i: i64,
    pub x: V,
}

impl<V> ZqVertex<V> {
    pub fn new(i: i64, x: V) -> Self {
        ZqVertex { i, x }
    }
}

impl<V: fmt::Display> fmt::Display for ZqVertex<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.x)
    }
}

/// The full subquiver of `ZQ` on columns `i_min..=i_max`.
pub fn build_zq<V: VertexId>(
    q: &Quiver<V>,
    i_min: i64,
    i_max: i64,
) -> Result<TranslationQuiver<ZqVertex<V>>> {
    if q.is_empty() {
        return Err(Error::EmptyQuiver);
    }
    if i_min > i_max {
        return Err(Error::InvertedRange {
            min: i_min,
            max: i_max,
        });
    }
    let mut vertices = Vec::new();
    let mut arrows = Vec::new();
    let mut tau = Vec::new();
    for i in i_min..=i_max {
        for x in q.vertices() {
            vertices.push(ZqVertex::new(i, x.clone()));
            if i > i_min {
                tau.push((ZqVertex::new(i, x.clone()), ZqVertex::new(i - 1, x.clone())));
            }
        }
        for (x, y) in q.arrows() {
            arrows.push((ZqVertex::new(i, x.clone()), ZqVertex::new(i, y.clone())));
            if i < i_max {
                arrows.push((ZqVertex::new(i, y.clone()), ZqVertex::new(i + 1, x.clone())));
            }
        }
    }
    TranslationQuiver::new(Quiver::new(vertices, arrows)?, tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Quiver<char> {
        Quiver::new(['x', 'y'], [('x', 'y')]).unwrap()
    }

    fn d4() -> Quiver<&'static str> {
        Quiver::new(
            ["0", "0bar", "1", "2"],
            [("0", "1"), ("0bar", "1"), ("1", "2")],
        )
        .unwrap()
    }

    #[test]
    fn zq_of_single_vertex() {
        let q = Quiver::new(['x'], []).unwrap();
        let g = build_zq(&q, 0, 2).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.arrow_count(), 0);
        assert_eq!(g.tau(&ZqVertex::new(1, 'x')), Some(&ZqVertex::new(0, 'x')));
        assert_eq!(g.tau(&ZqVertex::new(0, 'x')), None);
    }

    #[test]
    fn zq_of_a2_by_hand() {
        let g = build_zq(&a2(), 0, 1).unwrap();
        assert_eq!(g.vertex_count(), 4);
        let mut arrows: Vec<_> = g
            .quiver()
            .arrows()
            .map(|(s, t)| (s.clone(), t.clone()))
            .collect();
        arrows.sort();
        let v = ZqVertex::new;
        assert_eq!(
            arrows,
            vec![
                (v(0, 'x'), v(0, 'y')),
                (v(0, 'y'), v(1, 'x')),
                (v(1, 'x'), v(1, 'y')),
            ]
        );
    }

    #[test]
    fn zq_single_column_is_q() {
        let g = build_zq(&d4(), 0, 0).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.arrow_count(), 3);
        assert!(g
            .quiver()
            .has_arrow(&ZqVertex::new(0, "0bar"), &ZqVertex::new(0, "1")));
    }

    #[test]
    fn zq_errors() {
        let empty: Quiver<char> = Quiver::new([], []).unwrap();
        assert_eq!(build_zq(&empty, 0, 1).unwrap_err(), Error::EmptyQuiver);
        assert!(matches!(
            build_zq(&a2(), 2, 1),
            Err(Error::InvertedRange { min: 2, max: 1 })
        ));
    }

    #[test]
    fn multiple_arrows_rejected() {
        assert!(matches!(
            Quiver::new(['a', 'b'], [('a', 'b'), ('a', 'b')]),
            Err(Error::MultipleArrows(_, _))
        ));
        assert!(matches!(
            Quiver::new(['a'], [('a', 'b')]),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn window_is_translation_quiver_but_not_stable() {
        let g = build_zq(&a2(), 0, 3).unwrap();
        assert!(g.check_translation().is_empty());
        let report = g.check_stable_translation();
        // left column has no translate, right column is not hit
        assert!(report.contains(&Violation::TauUndefined {
            vertex: ZqVertex::new(0, 'x')
        }));
        assert!(report.contains(&Violation::TauNotSurjective {
            vertex: ZqVertex::new(3, 'y')
        }));
    }

    #[test]
    fn deleted_arrow_breaks_mesh_symmetry() {
        let g = build_zq(&a2(), 0, 2).unwrap();
        let v = ZqVertex::new;
        let arrows: Vec<_> = g
            .quiver()
            .arrows()
            .filter(|&(s, t)| !(*s == v(0, 'y') && *t == v(1, 'x')))
            .map(|(s, t)| (s.clone(), t.clone()))
            .collect();
        let q = Quiver::new(g.vertices().to_vec(), arrows).unwrap();
        let broken = TranslationQuiver::new(
            q,
            g.tau_pairs()
                .map(|(a, b)| (a.clone(), b.clone()))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let report = broken.check_translation();
        assert!(report
            .iter()
            .any(|v| matches!(v, Violation::ArrowCountMismatch { .. })));
    }

    #[test]
    fn mesh_relations_in_za2() {
        let g = build_zq(&a2(), 0, 2).unwrap();
        let v = ZqVertex::new;
        let rels = g.mesh_relations();
        let at_1x = rels.iter().find(|r| r.vertex == v(1, 'x')).unwrap();
        assert_eq!(at_1x.tau, v(0, 'x'));
        assert_eq!(at_1x.middles, vec![v(0, 'y')]);
        // the left column emits nothing
        assert!(rels.iter().all(|r| r.vertex.i > 0));
        assert_eq!(rels.len(), 4);
    }

    #[test]
    fn mesh_with_three_middles_in_zd4() {
        // Q^op of D_4: 2 -> 1 -> {0, 0bar}
        let qop = Quiver::new(
            ["0", "0bar", "1", "2"],
            [("2", "1"), ("1", "0"), ("1", "0bar")],
        )
        .unwrap();
        let g = build_zq(&qop, 0, 2).unwrap();
        let rel = g
            .mesh_relation_at(g.quiver().index_of(&ZqVertex::new(1, "1")).unwrap())
            .unwrap();
        assert_eq!(rel.summand_count(), 3);
    }

    #[test]
    fn windows_nest_as_full_subquivers() {
        let qop = Quiver::new(
            ["0", "0bar", "1", "2"],
            [("2", "1"), ("1", "0"), ("1", "0bar")],
        )
        .unwrap();
        let small = build_zq(&qop, 1, 3).unwrap();
        let big = build_zq(&qop, 0, 4).unwrap();
        let restricted = big.full_subquiver(|v| (1..=3).contains(&v.i)).unwrap();
        let mut a: Vec<_> = small.quiver().arrows().collect();
        let mut b: Vec<_> = restricted.quiver().arrows().collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        let mut ta: Vec<_> = small.tau_pairs().collect();
        let mut tb: Vec<_> = restricted.tau_pairs().collect();
        ta.sort();
        tb.sort();
        assert_eq!(ta, tb);
    }

    #[test]
    fn topological_order_respects_arrows() {
        let qop = Quiver::new(
            ["0", "0bar", "1", "2"],
            [("2", "1"), ("1", "0"), ("1", "0bar")],
        )
        .unwrap();
        let g = build_zq(&qop, 0, 3).unwrap();
        let order = g.quiver().topological_order().unwrap();
        let mut pos = vec![0; order.len()];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        for &(s, t) in g.quiver().arrow_indices() {
            assert!(pos[s] < pos[t]);
        }
    }
}
