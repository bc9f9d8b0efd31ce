//! The isomorphism `phi_p: Gamma_{n,p} -> Gamma_circle`, the projection
//! `eta_p: C_{n,p} -> C_n` on vertices, and the square
//! `mu_p . phi_p = phi_1 . eta_p`.

use serde::Serialize;

use crate::ar_model::{self, build_gamma_np, canonicalize, certify_iso, DCoord, Level, VertexIso};
use crate::error::{Error, Result};
use crate::polygon_model::{build_gamma_circle, mu_p, PolygonConfig, Tag, TaggedEdge};
use crate::translation_quiver::TranslationQuiver;

pub fn phi_p(v: DCoord, n: u32, p: u32) -> Result<TaggedEdge> {
    let cfg = PolygonConfig::new(n, p)?;
    let np = i64::from(cfg.vertex_count());
    if !(0..np).contains(&v.i) || !v.level.is_valid_for(n) {
        return Err(Error::InvalidLevel {
            level: v.to_string(),
            n,
        });
    }
    let a = cfg.label(v.i + 1);
    let even = v.i % 2 == 0;
    Ok(match v.level {
        Level::K(k) => TaggedEdge::arc(a, cfg.label(v.i + np + 1 - i64::from(k))),
        Level::Zero if even => TaggedEdge::looped(a, Tag::Plus),
        Level::ZeroBar if !even => TaggedEdge::looped(a, Tag::Plus),
        _ => TaggedEdge::looped(a, Tag::Minus),
    })
}

/// Inverse of [`phi_p`].
pub fn phi_p_inverse(m: TaggedEdge, n: u32, p: u32) -> Result<DCoord> {
    let cfg = PolygonConfig::new(n, p)?;
    cfg.validate(m)?;
    let np = i64::from(cfg.vertex_count());
    let i = i64::from(m.a) - 1;
    let level = if m.is_loop() {
        let even = i % 2 == 0;
        match (m.tag, even) {
            (Tag::Plus, true) | (Tag::Minus, false) => Level::Zero,
            _ => Level::ZeroBar,
        }
    } else {
        // b = i + np + 1 - k (mod np)
        let k = (i + np + 1 - i64::from(m.b)).rem_euclid(np);
        Level::K(k as u32)
    };
    Ok(DCoord::new(i, level))
}

/// A certified isomorphism of translation quivers.
#[derive(Clone, Debug)]
pub struct QuiverIso {
    pub n: u32,
    pub p: u32,
    pub forward: Vec<(DCoord, TaggedEdge)>,
    pub source: TranslationQuiver<DCoord>,
    pub target: TranslationQuiver<TaggedEdge>,
}

impl QuiverIso {
    pub fn forward(&self, v: DCoord) -> Option<TaggedEdge> {
        self.forward.iter().find(|(x, _)| *x == v).map(|&(_, m)| m)
    }

    pub fn backward(&self, m: TaggedEdge) -> Option<DCoord> {
        self.forward.iter().find(|(_, y)| *y == m).map(|&(x, _)| x)
    }
}

/// Checks bijectivity, arrows onto elementary moves and
/// `phi_p . tau = tau_geo . phi_p`.
pub fn verify_phi_iso(n: u32, p: u32) -> Result<QuiverIso> {
    let gamma = build_gamma_np(n, p)?;
    let cfg = PolygonConfig::new(n, p)?;
    let circle = build_gamma_circle(cfg)?;
    let VertexIso { pairs } = certify_iso(gamma.quiver(), &circle, |&v| {
        phi_p(v, n, p).expect("vertex of Gamma_{n,p}")
    })?;
    for &(v, m) in &pairs {
        if phi_p_inverse(m, n, p)? != v {
            return Err(Error::Verification(format!("phi_p^-1({m}) != {v}")));
        }
    }
    Ok(QuiverIso {
        n,
        p,
        forward: pairs,
        source: gamma.into_quiver(),
        target: circle,
    })
}

/// Image in `Gamma(D_n, 1)` of a vertex of `Gamma_{n,p}`: reduce `i` mod `n`,
/// swapping `0, 0bar` once per wrap when `n` is odd, which is `F` acting
/// trivially on `C_n`.
pub fn eta_p(v: DCoord, n: u32, p: u32) -> Result<DCoord> {
    ar_model::check_params(n, p)?;
    if !(0..i64::from(n * p)).contains(&v.i) {
        return Err(Error::InvalidLevel {
            level: v.to_string(),
            n,
        });
    }
    Ok(canonicalize(v, n, 1).0.coord())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramMismatch {
    pub vertex: DCoord,
    pub via_polygon: TaggedEdge,
    pub via_projection: TaggedEdge,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramReport {
    pub n: u32,
    pub p: u32,
    pub checked: usize,
    /// The reading checked: `mu_p(phi_p(v)) = phi_1(eta_p(v))`.
    pub reading: &'static str,
    pub mismatches: Vec<DiagramMismatch>,
}

impl DiagramReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn verify_commutative_diagram(n: u32, p: u32) -> Result<DiagramReport> {
    let gamma = build_gamma_np(n, p)?;
    let cfg = PolygonConfig::new(n, p)?;
    let mut mismatches = Vec::new();
    let vertices = gamma.sorted_vertices();
    for &v in &vertices {
        let via_polygon = mu_p(phi_p(v, n, p)?, cfg)?;
        let via_projection = phi_p(eta_p(v, n, p)?, n, 1)?;
        if via_polygon != via_projection {
            mismatches.push(DiagramMismatch {
                vertex: v,
                via_polygon,
                via_projection,
            });
        }
    }
    Ok(DiagramReport {
        n,
        p,
        checked: vertices.len(),
        reading: "mu_p . phi_p = phi_1 . eta_p",
        mismatches,
    })
}
