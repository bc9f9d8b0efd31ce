//! Tagged edges on the punctured polygon `P_{np}`, elementary moves, the
//! geometric translation and the quiver of tagged edges.
//!
//! Vertex labels are 1-based and run counterclockwise; every index
//! computation reduces into `1..=N` with [`PolygonConfig::label`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::translation_quiver::{Quiver, TranslationQuiver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Minus,
    Plus,
}

impl Tag {
    pub fn flip(self) -> Tag {
        match self {
            Tag::Plus => Tag::Minus,
            Tag::Minus => Tag::Plus,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Tag::Plus => 1,
            Tag::Minus => -1,
        }
    }

    pub fn from_sign(s: i64) -> Result<Tag> {
        match s {
            1 => Ok(Tag::Plus),
            -1 => Ok(Tag::Minus),
            _ => Err(Error::Parse(format!("tag must be +1 or -1, got {s}"))),
        }
    }
}

impl Serialize for Tag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.sign())
    }
}

impl<'de> Deserialize<'de> for Tag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Tag::from_sign(i64::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// `M_{a,b}^tag`. Ordered by `(a, b, tag)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TaggedEdge {
    pub a: u32,
    pub b: u32,
    pub tag: Tag,
}

impl TaggedEdge {
    pub const fn arc(a: u32, b: u32) -> Self {
        TaggedEdge {
            a,
            b,
            tag: Tag::Plus,
        }
    }

    pub const fn looped(a: u32, tag: Tag) -> Self {
        TaggedEdge { a, b: a, tag }
    }

    pub fn is_loop(self) -> bool {
        self.a == self.b
    }
}

/// Literal form `a:b:+` / `a:b:-`.
impl fmt::Display for TaggedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = match self.tag {
            Tag::Plus => '+',
            Tag::Minus => '-',
        };
        write!(f, "{}:{}:{}", self.a, self.b, t)
    }
}

impl FromStr for TaggedEdge {
    type Err = Error;

    /// Parses the literal syntax only; domain validity is checked by
    /// [`PolygonConfig::validate`].
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected <a>:<b>:<+|->, got {s:?}"));
        let mut parts = s.split(':');
        let (Some(a), Some(b), Some(t), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        let a: u32 = a.parse().map_err(|_| bad())?;
        let b: u32 = b.parse().map_err(|_| bad())?;
        let tag = match t {
            "+" => Tag::Plus,
            "-" => Tag::Minus,
            _ => return Err(bad()),
        };
        Ok(TaggedEdge { a, b, tag })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolygonConfig {
    n: u32,
    p: u32,
}

impl PolygonConfig {
    pub fn new(n: u32, p: u32) -> Result<Self> {
        crate::ar_model::check_params(n, p)?;
        Ok(PolygonConfig { n, p })
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn p(self) -> u32 {
        self.p
    }

    /// Number of polygon vertices `N = np`.
    pub fn vertex_count(self) -> u32 {
        self.n * self.p
    }

    /// Reduces any integer into the label range `1..=N`.
    pub fn label(self, x: i64) -> u32 {
        let m = i64::from(self.vertex_count());
        ((x - 1).rem_euclid(m) + 1) as u32
    }

    /// Shortest allowed `|delta_{a,b}|`.
    pub fn min_delta(self) -> u32 {
        self.vertex_count() - self.n + 3
    }

    pub fn validate(self, m: TaggedEdge) -> Result<()> {
        let max = self.vertex_count();
        for label in [m.a, m.b] {
            if !(1..=max).contains(&label) {
                return Err(Error::LabelOutOfRange { label, max });
            }
        }
        if m.a != m.b && m.tag != Tag::Plus {
            return Err(Error::InvalidEdge(format!("{m}: only loops carry tag -1")));
        }
        if delta_length(m.a, m.b, max)? < self.min_delta() {
            return Err(Error::InvalidEdge(format!(
                "{m}: |delta| below {}",
                self.min_delta()
            )));
        }
        Ok(())
    }

    pub fn is_valid(self, m: TaggedEdge) -> bool {
        self.validate(m).is_ok()
    }

    fn edge(self, a: i64, b: i64) -> TaggedEdge {
        TaggedEdge::arc(self.label(a), self.label(b))
    }
}

/// Number of polygon vertices on the counterclockwise boundary path from `a`
/// to `b`, both ends included; a full turn when `a == b`.
pub fn delta_length(a: u32, b: u32, vertex_count: u32) -> Result<u32> {
    for label in [a, b] {
        if !(1..=vertex_count).contains(&label) {
            return Err(Error::LabelOutOfRange {
                label,
                max: vertex_count,
            });
        }
    }
    Ok(if a == b {
        vertex_count + 1
    } else {
        (b + vertex_count - a) % vertex_count + 1
    })
}

/// All tagged edges of `P_{np}`, sorted.
pub fn enumerate_edges(cfg: PolygonConfig) -> Vec<TaggedEdge> {
    let big_n = cfg.vertex_count();
    let mut out = Vec::new();
    for a in 1..=big_n {
        out.push(TaggedEdge::looped(a, Tag::Minus));
        out.push(TaggedEdge::looped(a, Tag::Plus));
        for b in 1..=big_n {
            if a != b && cfg.is_valid(TaggedEdge::arc(a, b)) {
                out.push(TaggedEdge::arc(a, b));
            }
        }
    }
    out.sort();
    out
}

/// Targets of the elementary moves out of `m`.
///
/// For `n = 3` the shortest allowed edge already has `|delta| = np`; the
/// three-move case applies and the move `M_{a+1,b}` drops out because it
/// would leave the set of allowed edges.
pub fn elementary_moves(m: TaggedEdge, cfg: PolygonConfig) -> Result<Vec<TaggedEdge>> {
    cfg.validate(m)?;
    let big_n = cfg.vertex_count();
    let d = delta_length(m.a, m.b, big_n)?;
    let (a, b) = (i64::from(m.a), i64::from(m.b));
    let moves = if d == big_n + 1 {
        vec![cfg.edge(a + 1, a)]
    } else if d == big_n {
        let mut v = vec![
            cfg.edge(a + 1, b),
            TaggedEdge::looped(m.a, Tag::Plus),
            TaggedEdge::looped(m.a, Tag::Minus),
        ];
        v.retain(|&e| cfg.is_valid(e));
        v
    } else if d == cfg.min_delta() {
        vec![cfg.edge(a, b + 1)]
    } else {
        vec![cfg.edge(a + 1, b), cfg.edge(a, b + 1)]
    };
    Ok(moves)
}

/// `tau M_{a,b} = M_{a-1,b-1}`; loops also switch their tag.
pub fn tau_geo(m: TaggedEdge, cfg: PolygonConfig) -> TaggedEdge {
    let a = cfg.label(i64::from(m.a) - 1);
    if m.is_loop() {
        TaggedEdge::looped(a, m.tag.flip())
    } else {
        TaggedEdge::arc(a, cfg.label(i64::from(m.b) - 1))
    }
}

pub fn tau_geo_inv(m: TaggedEdge, cfg: PolygonConfig) -> TaggedEdge {
    let a = cfg.label(i64::from(m.a) + 1);
    if m.is_loop() {
        TaggedEdge::looped(a, m.tag.flip())
    } else {
        TaggedEdge::arc(a, cfg.label(i64::from(m.b) + 1))
    }
}

/// Rotation by `2 pi / p`: both endpoints advance by `n`.
pub fn rho(m: TaggedEdge, cfg: PolygonConfig) -> TaggedEdge {
    let n = i64::from(cfg.n());
    TaggedEdge {
        a: cfg.label(i64::from(m.a) + n),
        b: cfg.label(i64::from(m.b) + n),
        tag: m.tag,
    }
}

/// Projection `P_{np} -> P_n`: labels reduce mod `n`, and the counterclockwise
/// offset `b - a` loses the `n(p-1)` boundary vertices that get identified.
pub fn mu_p(m: TaggedEdge, cfg: PolygonConfig) -> Result<TaggedEdge> {
    cfg.validate(m)?;
    let n = i64::from(cfg.n());
    let big_n = i64::from(cfg.vertex_count());
    let small = PolygonConfig::new(cfg.n(), 1)?;
    let a = i64::from(m.a);
    let a_small = (a - 1).rem_euclid(n) + 1;
    let out = if m.is_loop() {
        TaggedEdge::looped(a_small as u32, m.tag)
    } else {
        let d = (i64::from(m.b) - a).rem_euclid(big_n);
        let b_small = (a_small + d - n * (i64::from(cfg.p()) - 1) - 1).rem_euclid(n) + 1;
        TaggedEdge {
            a: a_small as u32,
            b: b_small as u32,
            tag: m.tag,
        }
    };
    small.validate(out).map_err(|e| {
        Error::Verification(format!("mu_p({m}) = {out} is not an edge of P_n: {e}"))
    })?;
    Ok(out)
}

/// The quiver `Gamma_circle` of tagged edges with elementary moves as arrows
/// and `tau_geo` as translation.
pub fn build_gamma_circle(cfg: PolygonConfig) -> Result<TranslationQuiver<TaggedEdge>> {
    let edges = enumerate_edges(cfg);
    let mut arrows = Vec::new();
    for &m in &edges {
        for t in elementary_moves(m, cfg)? {
            arrows.push((m, t));
        }
    }
    let tau: Vec<_> = edges.iter().map(|&m| (m, tau_geo(m, cfg))).collect();
    TranslationQuiver::new(Quiver::new(edges, arrows)?, tau)
}

/// SVG drawing of a set of tagged edges on the punctured polygon.
///
/// Polygon vertex `k` sits at angle `2 pi (k-1) / N` on the unit circle,
/// the puncture at the origin; the viewport is fixed at 512 px. Arcs are
/// quadratic curves bent towards the puncture, loops wrap around it, and tag
/// `-1` adds a short tick across the edge near the puncture.
pub fn render_svg(cfg: PolygonConfig, edges: &[TaggedEdge]) -> String {
    const SIZE: f64 = 512.0;
    const SCALE: f64 = 200.0;
    let big_n = cfg.vertex_count();
    let to_px = |x: f64, y: f64| (SIZE / 2.0 + SCALE * x, SIZE / 2.0 - SCALE * y);
    let corner = |k: u32| {
        let t = std::f64::consts::TAU * f64::from(k - 1) / f64::from(big_n);
        (t.cos(), t.sin())
    };
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    let outline: Vec<String> = (1..=big_n)
        .map(|k| {
            let (x, y) = corner(k);
            let (px, py) = to_px(x, y);
            format!("{px:.3},{py:.3}")
        })
        .collect();
    s.push_str(&format!(
        "  <polygon points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
        outline.join(" ")
    ));
    let (cx, cy) = to_px(0.0, 0.0);
    s.push_str(&format!(
        "  <circle cx=\"{cx:.3}\" cy=\"{cy:.3}\" r=\"4\" fill=\"black\"/>\n"
    ));
    for k in 1..=big_n {
        let (x, y) = corner(k);
        let (px, py) = to_px(1.1 * x, 1.1 * y);
        s.push_str(&format!(
            "  <text x=\"{px:.3}\" y=\"{py:.3}\" font-size=\"14\" text-anchor=\"middle\" dominant-baseline=\"middle\">{k}</text>\n"
        ));
    }
    let mut sorted = edges.to_vec();
    sorted.sort();
    for m in sorted {
        let (ax, ay) = corner(m.a);
        let (tick_x, tick_y, dir_x, dir_y);
        if m.is_loop() {
            // loop from a around the puncture and back
            let (ox, oy) = (-ax * 0.35, -ay * 0.35);
            let (lx, ly) = (-ay * 0.3, ax * 0.3);
            let (p1x, p1y) = to_px(ox + lx, oy + ly);
            let (p2x, p2y) = to_px(ox - lx, oy - ly);
            let (sx, sy) = to_px(ax, ay);
            s.push_str(&format!(
                "  <path d=\"M {sx:.3} {sy:.3} C {p1x:.3} {p1y:.3} {p2x:.3} {p2y:.3} {sx:.3} {sy:.3}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.2\" data-edge=\"{m}\"/>\n"
            ));
            tick_x = ax * 0.3;
            tick_y = ay * 0.3;
            dir_x = ax;
            dir_y = ay;
        } else {
            let (bx, by) = corner(m.b);
            // control point on the far side of the puncture from the chord
            let (mx, my) = ((ax + bx) / 2.0, (ay + by) / 2.0);
            let len = (mx * mx + my * my).sqrt();
            let (kx, ky) = if len < 1e-9 {
                (-ay * 0.6, ax * 0.6)
            } else {
                (-mx / len * 0.6, -my / len * 0.6)
            };
            let (sx, sy) = to_px(ax, ay);
            let (ex, ey) = to_px(bx, by);
            let (qx, qy) = to_px(kx, ky);
            s.push_str(&format!(
                "  <path d=\"M {sx:.3} {sy:.3} Q {qx:.3} {qy:.3} {ex:.3} {ey:.3}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.2\" data-edge=\"{m}\"/>\n"
            ));
            tick_x = 0.0;
            tick_y = 0.0;
            dir_x = 1.0;
            dir_y = 0.0;
        }
        if m.tag == Tag::Minus {
            let (nx, ny) = (-dir_y * 0.05, dir_x * 0.05);
            let (t1x, t1y) = to_px(tick_x + nx, tick_y + ny);
            let (t2x, t2y) = to_px(tick_x - nx, tick_y - ny);
            s.push_str(&format!(
                "  <line x1=\"{t1x:.3}\" y1=\"{t1y:.3}\" x2=\"{t2x:.3}\" y2=\"{t2y:.3}\" stroke=\"crimson\" stroke-width=\"2\"/>\n"
            ));
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: u32, p: u32) -> PolygonConfig {
        PolygonConfig::new(n, p).unwrap()
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_length(1, 8, 8).unwrap(), 8);
        for a in 1..=8 {
            assert_eq!(delta_length(a, a, 8).unwrap(), 9);
        }
        assert_eq!(delta_length(5, 4, 6).unwrap(), 6);
        assert!(matches!(
            delta_length(0, 3, 6),
            Err(Error::LabelOutOfRange { .. })
        ));
        assert!(matches!(
            delta_length(2, 7, 6),
            Err(Error::LabelOutOfRange { .. })
        ));
    }

    #[test]
    fn edge_counts() {
        assert_eq!(enumerate_edges(cfg(3, 1)).len(), 9);
        assert_eq!(enumerate_edges(cfg(3, 2)).len(), 18);
        let e42 = enumerate_edges(cfg(4, 2));
        assert_eq!(e42.len(), 32);
        assert_eq!(e42.iter().filter(|m| m.is_loop()).count(), 16);
    }

    #[test]
    fn moves_by_case() {
        let c = cfg(3, 2);
        // |delta_{5,4}| = 6 = np: two loops (the a+1 move is not an edge at n = 3)
        assert_eq!(
            elementary_moves(TaggedEdge::arc(5, 4), c).unwrap(),
            vec![
                TaggedEdge::looped(5, Tag::Plus),
                TaggedEdge::looped(5, Tag::Minus)
            ]
        );
        assert_eq!(
            elementary_moves(TaggedEdge::looped(2, Tag::Minus), c).unwrap(),
            vec![TaggedEdge::arc(3, 2)]
        );
        let c4 = cfg(4, 2);
        // np = 8: |delta_{1,8}| = 8 has three moves
        assert_eq!(
            elementary_moves(TaggedEdge::arc(1, 8), c4).unwrap(),
            vec![
                TaggedEdge::arc(2, 8),
                TaggedEdge::looped(1, Tag::Plus),
                TaggedEdge::looped(1, Tag::Minus)
            ]
        );
        // |delta_{1,7}| = 7 = np - n + 3: only b + 1
        assert_eq!(
            elementary_moves(TaggedEdge::arc(1, 7), c4).unwrap(),
            vec![TaggedEdge::arc(1, 8)]
        );
        let c5 = cfg(5, 2);
        // middle range at np = 10: |delta_{1,9}| = 9
        assert_eq!(
            elementary_moves(TaggedEdge::arc(1, 9), c5).unwrap(),
            vec![TaggedEdge::arc(2, 9), TaggedEdge::arc(1, 10)]
        );
        // the last loop wraps
        assert_eq!(
            elementary_moves(TaggedEdge::looped(10, Tag::Plus), c5).unwrap(),
            vec![TaggedEdge::arc(1, 10)]
        );
    }

    #[test]
    fn out_degree_by_case() {
        for n in 3..=7 {
            for p in 1..=4 {
                let c = cfg(n, p);
                let big_n = c.vertex_count();
                for m in enumerate_edges(c) {
                    let d = delta_length(m.a, m.b, big_n).unwrap();
                    let k = elementary_moves(m, c).unwrap().len();
                    let expected = if d == big_n + 1 {
                        1
                    } else if d == big_n {
                        if n == 3 {
                            2
                        } else {
                            3
                        }
                    } else if d == c.min_delta() {
                        1
                    } else {
                        2
                    };
                    assert_eq!(k, expected, "{m} in ({n},{p})");
                }
            }
        }
    }

    #[test]
    fn tau_examples() {
        let c = cfg(3, 2);
        assert_eq!(tau_geo(TaggedEdge::arc(2, 5), c), TaggedEdge::arc(1, 4));
        assert_eq!(
            tau_geo(TaggedEdge::looped(1, Tag::Plus), c),
            TaggedEdge::looped(6, Tag::Minus)
        );
        for (n, p) in [(3, 1), (3, 2), (5, 3), (4, 1)] {
            let c = cfg(n, p);
            let m = TaggedEdge::looped(1, Tag::Plus);
            let mut x = m;
            for _ in 0..n * p {
                x = tau_geo(x, c);
            }
            let expected = if (n * p) % 2 == 1 {
                Tag::Minus
            } else {
                Tag::Plus
            };
            assert_eq!(x, TaggedEdge::looped(1, expected));
        }
    }

    #[test]
    fn tau_is_bijective_with_known_inverse() {
        for n in 3..=7 {
            for p in 1..=4 {
                let c = cfg(n, p);
                let edges = enumerate_edges(c);
                let mut image: Vec<_> = edges.iter().map(|&m| tau_geo(m, c)).collect();
                image.sort();
                assert_eq!(image, edges);
                for &m in &edges {
                    assert_eq!(tau_geo_inv(tau_geo(m, c), c), m);
                    let mut x = m;
                    for _ in 0..2 * n * p {
                        x = tau_geo(x, c);
                    }
                    assert_eq!(x, m);
                }
            }
        }
    }

    #[test]
    fn rho_examples() {
        let c = cfg(3, 2);
        assert_eq!(rho(TaggedEdge::arc(1, 6), c), TaggedEdge::arc(4, 3));
        for p in 1..=4 {
            let c = cfg(4, p);
            for m in enumerate_edges(c) {
                let mut x = m;
                for _ in 0..p {
                    x = rho(x, c);
                }
                assert_eq!(x, m);
                let r = rho(m, c);
                assert_eq!(r.tag, m.tag);
                assert_eq!(
                    delta_length(r.a, r.b, c.vertex_count()).unwrap(),
                    delta_length(m.a, m.b, c.vertex_count()).unwrap()
                );
                assert_eq!(rho(tau_geo(m, c), c), tau_geo(r, c));
                let mut moved: Vec<_> = elementary_moves(m, c)
                    .unwrap()
                    .into_iter()
                    .map(|t| rho(t, c))
                    .collect();
                let mut direct = elementary_moves(r, c).unwrap();
                moved.sort();
                direct.sort();
                assert_eq!(moved, direct);
            }
        }
    }

    #[test]
    fn mu_examples() {
        assert_eq!(
            mu_p(TaggedEdge::arc(1, 8), cfg(4, 2)).unwrap(),
            TaggedEdge::arc(1, 4)
        );
        assert_eq!(
            mu_p(TaggedEdge::arc(5, 4), cfg(3, 2)).unwrap(),
            TaggedEdge::arc(2, 1)
        );
        assert_eq!(
            mu_p(TaggedEdge::looped(6, Tag::Minus), cfg(4, 2)).unwrap(),
            TaggedEdge::looped(2, Tag::Minus)
        );
        for n in 3..=6 {
            for p in 1..=3 {
                let c = cfg(n, p);
                for m in enumerate_edges(c) {
                    assert_eq!(mu_p(rho(m, c), c).unwrap(), mu_p(m, c).unwrap());
                }
            }
        }
    }

    #[test]
    fn gamma_circle_is_stable() {
        let g = build_gamma_circle(cfg(3, 2)).unwrap();
        assert_eq!(g.vertex_count(), 18);
        assert!(g.check_stable_translation().is_empty());
        assert_eq!(build_gamma_circle(cfg(3, 1)).unwrap().vertex_count(), 9);
    }

    #[test]
    fn literal_syntax() {
        let m: TaggedEdge = "3:7:+".parse().unwrap();
        assert_eq!(m, TaggedEdge::arc(3, 7));
        assert_eq!(
            "2:2:-".parse::<TaggedEdge>().unwrap(),
            TaggedEdge::looped(2, Tag::Minus)
        );
        for bad in ["1:x:+", "1:2", "1:2:*", "1:2:+:4", ""] {
            assert!(
                matches!(bad.parse::<TaggedEdge>(), Err(Error::Parse(_))),
                "{bad}"
            );
        }
        // non-loops must be tagged +
        assert!(cfg(3, 2).validate("1:6:-".parse().unwrap()).is_err());
    }

    #[test]
    fn validation_rejects_short_edges() {
        let c = cfg(4, 2);
        assert!(c.validate(TaggedEdge::arc(4, 5)).is_err());
        assert!(c.validate(TaggedEdge::arc(9, 1)).is_err());
        assert!(c.validate(TaggedEdge::arc(1, 8)).is_ok());
    }

    #[test]
    fn edge_json_shape() {
        let s = serde_json::to_string(&TaggedEdge::looped(3, Tag::Minus)).unwrap();
        assert_eq!(s, r#"{"a":3,"b":3,"tag":-1}"#);
        let back: TaggedEdge = serde_json::from_str(&s).unwrap();
        assert_eq!(back, TaggedEdge::looped(3, Tag::Minus));
        assert!(serde_json::from_str::<TaggedEdge>(r#"{"a":3,"b":3,"tag":0}"#).is_err());
    }

    #[test]
    fn svg_is_deterministic() {
        let c = cfg(3, 1);
        let edges = enumerate_edges(c);
        let a = render_svg(c, &edges);
        let mut rev = edges.clone();
        rev.reverse();
        assert_eq!(a, render_svg(c, &rev));
        assert_eq!(a.matches("<path").count(), 9);
        assert_eq!(a.matches("<line").count(), 3);
    }
}
