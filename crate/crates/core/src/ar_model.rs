//! Coordinates on the AR-quiver `ZQ^op` of the derived category of type
//! `D_n`, the functors `tau`, `[1]`, `F = tau^{-1}[1]` and `nu = tau[1]` on
//! them, the quiver `Gamma_{n,p}` of the repetitive cluster category, and its
//! relation to `Gamma(D_{np}, 1)`.
//!
//! Levels follow the `D_n` quiver `0 -> 1`, `0bar -> 1`, `k-1 -> k`
//! (`k = 2..n-2`); `Q^op` reverses those arrows, so inside a column of
//! `ZQ^op` arrows run from level `n-2` down to the two short arms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::translation_quiver::{MeshWindow, Quiver, TranslationQuiver, ZqVertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    ZeroBar,
    Zero,
    K(u32),
}

impl Level {
    pub fn is_short_arm(self) -> bool {
        matches!(self, Level::Zero | Level::ZeroBar)
    }

    /// `0 <-> 0bar`, identity on the long arm.
    pub fn bar(self) -> Level {
        match self {
            Level::Zero => Level::ZeroBar,
            Level::ZeroBar => Level::Zero,
            k => k,
        }
    }

    pub fn is_valid_for(self, n: u32) -> bool {
        match self {
            Level::K(k) => (1..=n.saturating_sub(2)).contains(&k),
            _ => true,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Zero => f.write_str("0"),
            Level::ZeroBar => f.write_str("0bar"),
            Level::K(k) => write!(f, "{k}"),
        }
    }
}

impl FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" => Ok(Level::Zero),
            "0bar" => Ok(Level::ZeroBar),
            _ => match s.parse::<u32>() {
                Ok(k) if k >= 1 => Ok(Level::K(k)),
                _ => Err(Error::Parse(format!("bad level {s:?}"))),
            },
        }
    }
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Level {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Vertex `(i, j)` of `ZQ^op`, the indecomposable `tau^{-i} P_j`. Also used
/// for vertices of `Gamma_{n,p}`, where `i` lies in `0..np`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DCoord {
    pub i: i64,
    pub level: Level,
}

impl DCoord {
    pub const fn new(i: i64, level: Level) -> Self {
        DCoord { i, level }
    }
}

impl fmt::Display for DCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.level)
    }
}

impl From<ZqVertex<Level>> for DCoord {
    fn from(v: ZqVertex<Level>) -> Self {
        DCoord::new(v.i, v.x)
    }
}

impl From<DCoord> for ZqVertex<Level> {
    fn from(v: DCoord) -> Self {
        ZqVertex::new(v.i, v.level)
    }
}

pub fn check_params(n: u32, p: u32) -> Result<()> {
    if n < 3 || p < 1 {
        return Err(Error::InvalidParams { n, p });
    }
    Ok(())
}

/// Levels of `D_n` in the fixed order `0bar, 0, 1, ..., n-2`.
pub fn levels(n: u32) -> Vec<Level> {
    let mut out = vec![Level::ZeroBar, Level::Zero];
    out.extend((1..=n - 2).map(Level::K));
    out
}

/// Arrows of the `D_n` quiver.
pub fn q_arrows(n: u32) -> Vec<(Level, Level)> {
    let mut out = vec![(Level::Zero, Level::K(1)), (Level::ZeroBar, Level::K(1))];
    out.extend((2..=n - 2).map(|k| (Level::K(k - 1), Level::K(k))));
    out
}

pub fn quiver_d(n: u32) -> Result<Quiver<Level>> {
    Quiver::new(levels(n), q_arrows(n))
}

pub fn quiver_d_op(n: u32) -> Result<Quiver<Level>> {
    Quiver::new(levels(n), q_arrows(n).into_iter().map(|(s, t)| (t, s)))
}

pub fn minus_partner(x: DCoord) -> Result<DCoord> {
    if !x.level.is_short_arm() {
        return Err(Error::NotZeroLevel(x.level.to_string()));
    }
    Ok(DCoord::new(x.i, x.level.bar()))
}

pub fn tau_d(x: DCoord) -> DCoord {
    DCoord::new(x.i - 1, x.level)
}

pub fn tau_d_inv(x: DCoord) -> DCoord {
    DCoord::new(x.i + 1, x.level)
}

/// `M[1] = tau^{-n+1} M`, composed with `M -> M^-` on levels `0, 0bar` when
/// `n` is odd.
pub fn shift1(x: DCoord, n: u32) -> DCoord {
    let level = if n % 2 == 1 { x.level.bar() } else { x.level };
    DCoord::new(x.i + i64::from(n) - 1, level)
}

/// `[k]` for any integer `k`.
pub fn shift(x: DCoord, n: u32, k: i64) -> DCoord {
    let level = if n % 2 == 1 && k.rem_euclid(2) == 1 {
        x.level.bar()
    } else {
        x.level
    };
    DCoord::new(x.i + k * (i64::from(n) - 1), level)
}

/// Serre functor `nu = tau [1]`.
pub fn nu(x: DCoord, n: u32) -> DCoord {
    tau_d(shift1(x, n))
}

/// `F^k` with `F = tau^{-1}[1]`; negative `k` applies the inverse.
pub fn f_power(x: DCoord, n: u32, k: i64) -> DCoord {
    let mut y = x;
    if k >= 0 {
        for _ in 0..k {
            y = tau_d_inv(shift1(y, n));
        }
    } else {
        for _ in 0..(-k) {
            y = shift(tau_d(y), n, -1);
        }
    }
    y
}

/// Canonical representative of an `F^p`-orbit: a vertex of `Gamma_{n,p}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrbitObject(DCoord);

impl OrbitObject {
    /// Accepts only coordinates already in canonical range.
    pub fn new(x: DCoord, n: u32, p: u32) -> Result<Self> {
        check_params(n, p)?;
        if !(0..i64::from(n * p)).contains(&x.i) || !x.level.is_valid_for(n) {
            return Err(Error::InvalidLevel {
                level: x.to_string(),
                n,
            });
        }
        Ok(OrbitObject(x))
    }

    pub fn coord(self) -> DCoord {
        self.0
    }
}

impl fmt::Display for OrbitObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The `F^{pk}`-translate of `x` with `i` in `0..np`, and the `k` used.
pub fn canonicalize(x: DCoord, n: u32, p: u32) -> (OrbitObject, i64) {
    let np = i64::from(n * p);
    let k = -x.i.div_euclid(np);
    // F^p moves i by np and swaps the short arm iff n and p are both odd
    let swaps = n % 2 == 1 && p % 2 == 1 && k.rem_euclid(2) == 1;
    let level = if swaps { x.level.bar() } else { x.level };
    (OrbitObject(DCoord::new(x.i + k * np, level)), k)
}

/// Reduction of a column index into `0..m`.
pub fn wrap(i: i64, m: i64) -> i64 {
    i.rem_euclid(m)
}

/// `Gamma_{n,p}` on `Z_{np} x Q_0`.
#[derive(Clone, Debug)]
pub struct GammaNP {
    n: u32,
    p: u32,
    quiver: TranslationQuiver<DCoord>,
}

impl GammaNP {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn columns(&self) -> i64 {
        i64::from(self.n * self.p)
    }

    pub fn quiver(&self) -> &TranslationQuiver<DCoord> {
        &self.quiver
    }

    pub fn into_quiver(self) -> TranslationQuiver<DCoord> {
        self.quiver
    }

    /// Vertices sorted by `(i, level)`.
    pub fn sorted_vertices(&self) -> Vec<DCoord> {
        let mut v = self.quiver.vertices().to_vec();
        v.sort();
        v
    }

    /// The translation exactly as displayed: the short arm is swapped only
    /// when wrapping from column 0 and `np` is odd.
    pub fn tau_rule(x: DCoord, n: u32, p: u32) -> DCoord {
        let np = i64::from(n * p);
        if x.i == 0 && x.level.is_short_arm() && np % 2 == 1 {
            DCoord::new(np - 1, x.level.bar())
        } else {
            DCoord::new(wrap(x.i - 1, np), x.level)
        }
    }
}

pub fn build_gamma_np(n: u32, p: u32) -> Result<GammaNP> {
    check_params(n, p)?;
    let np = i64::from(n * p);
    let lv = levels(n);
    let qop: Vec<(Level, Level)> = q_arrows(n).into_iter().map(|(s, t)| (t, s)).collect();
    let mut vertices = Vec::new();
    let mut arrows = Vec::new();
    for i in 0..np {
        vertices.extend(lv.iter().map(|&l| DCoord::new(i, l)));
        for &(j, k) in &qop {
            arrows.push((DCoord::new(i, j), DCoord::new(i, k)));
            arrows.push((DCoord::new(i, k), DCoord::new(wrap(i + 1, np), j)));
        }
    }
    let tau: Vec<(DCoord, DCoord)> = vertices
        .iter()
        .map(|&x| (x, GammaNP::tau_rule(x, n, p)))
        .collect();
    let quiver = TranslationQuiver::new(Quiver::new(vertices, arrows)?, tau)?;
    Ok(GammaNP { n, p, quiver })
}

/// `Gamma(D_t, 1)`, the AR-quiver of the cluster category of type `D_t`.
pub fn build_gamma_full(t: u32) -> Result<GammaNP> {
    build_gamma_np(t, 1)
}

/// Full subquiver of `Gamma(D_{np}, 1)` on the `n` lowest levels
/// `0, 0bar, 1, ..., n-2`.
pub fn embed_bottom_rows(n: u32, p: u32) -> Result<TranslationQuiver<DCoord>> {
    check_params(n, p)?;
    let full = build_gamma_full(n * p)?;
    let sub = full.quiver().full_subquiver(|v| v.level.is_valid_for(n))?;
    let report = sub.check_stable_translation();
    if !report.is_empty() {
        return Err(Error::Verification(format!(
            "bottom strip is not a stable translation quiver: {report:?}"
        )));
    }
    Ok(sub)
}

/// Vertex bijection between two translation quivers, checked to carry arrows
/// onto arrows (both ways) and to commute with `tau`.
#[derive(Clone, Debug)]
pub struct VertexIso<A, B> {
    pub pairs: Vec<(A, B)>,
}

/// Checks that `f` is an isomorphism of translation quivers `src -> dst`.
pub fn certify_iso<A, B>(
    src: &TranslationQuiver<A>,
    dst: &TranslationQuiver<B>,
    f: impl Fn(&A) -> B,
) -> Result<VertexIso<A, B>>
where
    A: crate::translation_quiver::VertexId + fmt::Display,
    B: crate::translation_quiver::VertexId + fmt::Display,
{
    if src.vertex_count() != dst.vertex_count() {
        return Err(Error::Verification(format!(
            "vertex counts differ: {} vs {}",
            src.vertex_count(),
            dst.vertex_count()
        )));
    }
    let mut image = std::collections::HashSet::new();
    let mut pairs = Vec::with_capacity(src.vertex_count());
    for v in src.vertices() {
        let w = f(v);
        if !dst.quiver().contains(&w) {
            return Err(Error::Verification(format!(
                "{v} maps to {w}, not a vertex"
            )));
        }
        if !image.insert(w.clone()) {
            return Err(Error::Verification(format!("{w} is hit twice")));
        }
        pairs.push((v.clone(), w));
    }
    if src.arrow_count() != dst.arrow_count() {
        return Err(Error::Verification(format!(
            "arrow counts differ: {} vs {}",
            src.arrow_count(),
            dst.arrow_count()
        )));
    }
    for (s, t) in src.quiver().arrows() {
        if !dst.quiver().has_arrow(&f(s), &f(t)) {
            return Err(Error::Verification(format!(
                "arrow {s} -> {t} has no image {} -> {}",
                f(s),
                f(t)
            )));
        }
    }
    for (x, tx) in src.tau_pairs() {
        if dst.tau(&f(x)) != Some(&f(tx)) {
            return Err(Error::Verification(format!(
                "tau does not commute at {x}: tau({}) != {}",
                f(x),
                f(tx)
            )));
        }
    }
    if src.tau_pairs().count() != dst.tau_pairs().count() {
        return Err(Error::Verification("tau domains differ".into()));
    }
    Ok(VertexIso { pairs })
}

/// The identity on coordinates is an isomorphism `Gamma_{n,p} -> ` bottom
/// strip of `Gamma(D_{np}, 1)`.
pub fn check_subquiver_iso(n: u32, p: u32) -> Result<VertexIso<DCoord, DCoord>> {
    let gamma = build_gamma_np(n, p)?;
    let strip = embed_bottom_rows(n, p)?;
    certify_iso(gamma.quiver(), &strip, |&v| v)
}

/// Full subquiver of `Gamma(D_{np}, 1)` on levels `n-1, ..., np-2`; empty for
/// `p = 1`.
pub fn a_component(n: u32, p: u32) -> Result<TranslationQuiver<DCoord>> {
    check_params(n, p)?;
    let full = build_gamma_full(n * p)?;
    let sub = full
        .quiver()
        .full_subquiver(|v| matches!(v.level, Level::K(k) if k >= n - 1))?;
    if sub.vertex_count() == 0 {
        return Ok(sub);
    }
    if sub.quiver().weak_components().len() != 1 {
        return Err(Error::Verification("A-type strip is not connected".into()));
    }
    if !sub.check_stable_translation().is_empty() {
        return Err(Error::Verification(
            "A-type strip is not a stable translation quiver".into(),
        ));
    }
    let np = (n * p) as usize;
    if sub.tau_orbits().iter().any(|o| o.len() != np) {
        return Err(Error::Verification(format!(
            "a row of the A-type strip has length != {np}"
        )));
    }
    Ok(sub)
}

/// Vertex `(i, k)` of `ZA_m / tau^{c}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CylinderVertex {
    pub i: i64,
    pub k: u32,
}

impl fmt::Display for CylinderVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.i, self.k)
    }
}

/// `Z A_m / tau^{c}` for the orientation `m -> m-1 -> ... -> 1`.
pub fn cylinder_za(m: u32, c: u32) -> Result<TranslationQuiver<CylinderVertex>> {
    let c = i64::from(c);
    let v = |i: i64, k: u32| CylinderVertex { i: wrap(i, c), k };
    let mut vertices = Vec::new();
    let mut arrows = Vec::new();
    let mut tau = Vec::new();
    for i in 0..c {
        for k in 1..=m {
            vertices.push(v(i, k));
            tau.push((v(i, k), v(i - 1, k)));
        }
        for k in 1..m {
            arrows.push((v(i, k + 1), v(i, k)));
            arrows.push((v(i, k), v(i + 1, k + 1)));
        }
    }
    TranslationQuiver::new(Quiver::new(vertices, arrows)?, tau)
}

/// Outcome of splitting `Gamma(D_{np}, 1)` into the strip carrying
/// `Gamma_{n,p}` and the A-type strip on the upper levels.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub n: u32,
    pub p: u32,
    /// Connected components of the quiver, as computed.
    pub components: Vec<Vec<DCoord>>,
    pub bottom_strip: usize,
    pub top_strip: usize,
    pub top_rows: usize,
    pub top_row_length: Vec<usize>,
    /// Arrows of `Gamma(D_{np}, 1)` between the two strips.
    pub linking_arrows: Vec<(DCoord, DCoord)>,
}

impl Decomposition {
    pub fn component_sizes(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }

    /// The claimed shape: one component for `p = 1`; for `p >= 2` exactly two,
    /// of sizes `n * np` and `n(p-1) * np`.
    pub fn verify(&self) -> Result<()> {
        let np = (self.n * self.p) as usize;
        let n = self.n as usize;
        let mut sizes = self.component_sizes();
        sizes.sort_unstable();
        let mut expected = if self.p == 1 {
            vec![n * n]
        } else {
            vec![n * np, n * (self.p as usize - 1) * np]
        };
        expected.sort_unstable();
        if sizes != expected {
            return Err(Error::Verification(format!(
                "Gamma(D_{np},1) has components of sizes {sizes:?}, expected {expected:?}; {} arrows join the strips",
                self.linking_arrows.len()
            )));
        }
        Ok(())
    }
}

pub fn decompose(n: u32, p: u32) -> Result<Decomposition> {
    check_params(n, p)?;
    let full = build_gamma_full(n * p)?;
    let q = full.quiver().quiver();
    let components: Vec<Vec<DCoord>> = q
        .weak_components()
        .into_iter()
        .map(|c| {
            let mut vs: Vec<DCoord> = c.into_iter().map(|i| *q.vertex(i)).collect();
            vs.sort();
            vs
        })
        .collect();
    let bottom = embed_bottom_rows(n, p)?;
    let top = a_component(n, p)?;
    if bottom.vertex_count() + top.vertex_count() != q.vertex_count() {
        return Err(Error::Verification(
            "strips do not exhaust the vertices".into(),
        ));
    }
    let in_bottom = |v: &DCoord| v.level.is_valid_for(n);
    let linking_arrows = q
        .arrows()
        .filter(|(s, t)| in_bottom(s) != in_bottom(t))
        .map(|(s, t)| (*s, *t))
        .collect();
    let top_orbits = top.tau_orbits();
    Ok(Decomposition {
        n,
        p,
        components,
        bottom_strip: bottom.vertex_count(),
        top_strip: top.vertex_count(),
        top_rows: top_orbits.len(),
        top_row_length: top_orbits.iter().map(Vec::len).collect(),
        linking_arrows,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FundamentalDomainIndex(u32);

impl FundamentalDomainIndex {
    pub fn new(k: u32, p: u32) -> Result<Self> {
        if !(1..=p).contains(&k) {
            return Err(Error::DomainIndexOutOfRange { k, p });
        }
        Ok(FundamentalDomainIndex(k))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// Indecomposable modules of `k D_n` as coordinates: with `nu = tau[1]` the
/// injectives sit in column `n-2`, so the module category is columns
/// `0..=n-2`.
pub fn module_category(n: u32) -> Vec<DCoord> {
    let injective_column = nu(DCoord::new(0, Level::K(1)), n).i;
    (0..=injective_column)
        .flat_map(|i| levels(n).into_iter().map(move |l| DCoord::new(i, l)))
        .collect()
}

/// `F_k = F^{k-1}(F_1)`, with `F_1` the modules together with the shifted
/// projectives `P_j[1]`, read as vertices of `Gamma_{n,p}`.
pub fn fundamental_domain(n: u32, p: u32, k: FundamentalDomainIndex) -> Result<Vec<OrbitObject>> {
    check_params(n, p)?;
    let mut first = module_category(n);
    first.extend(levels(n).into_iter().map(|l| shift1(DCoord::new(0, l), n)));
    let mut out: Vec<OrbitObject> = first
        .into_iter()
        .map(|x| canonicalize(f_power(x, n, i64::from(k.get()) - 1), n, p).0)
        .collect();
    out.sort();
    out.dedup();
    if out.len() != (n * n) as usize {
        return Err(Error::Verification(format!(
            "fundamental domain has {} objects, expected {}",
            out.len(),
            n * n
        )));
    }
    Ok(out)
}

/// Hom dimensions in the mesh category of `ZQ^op`, i.e. in `ind D`.
///
/// Hammocks are translation invariant, so one hammock per level is computed
/// from column 0 and shifted.
#[derive(Clone, Debug)]
pub struct DerivedHom {
    n: u32,
    width: i64,
    hammocks: Vec<(Level, Vec<(DCoord, u64)>)>,
}

/// Columns to the right of the source kept in a hammock window before the
/// window is grown.
const WINDOW_GROWTH_CAP: u32 = 8;

impl DerivedHom {
    pub fn new(n: u32) -> Result<Self> {
        check_params(n, 1)?;
        let qop = quiver_d_op(n)?;
        let mut width = 2 * i64::from(n) + 2;
        loop {
            match Self::with_width(n, &qop, width) {
                Ok(h) => return Ok(h),
                Err(Error::WindowTooSmall { .. }) if width < i64::from(WINDOW_GROWTH_CAP * n) => {
                    width *= 2;
                }
                Err(e) => return Err(e),
            }
        }
    }

    fn with_width(n: u32, qop: &Quiver<Level>, width: i64) -> Result<Self> {
        let window = MeshWindow::new(qop, -1, width)?;
        let mut hammocks = Vec::new();
        for l in levels(n) {
            let h = window.hammock(&ZqVertex::new(0, l))?;
            let support = window
                .quiver()
                .vertices()
                .iter()
                .zip(h)
                .filter(|(_, d)| *d > 0)
                .map(|(v, d)| (DCoord::from(v.clone()), d))
                .collect();
            hammocks.push((l, support));
        }
        Ok(DerivedHom { n, width, hammocks })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Rightmost column offset at which `Hom(x, -)` can be nonzero.
    pub fn reach(&self) -> i64 {
        self.width
    }

    /// Nonzero values of `dim Hom_D(x, -)`.
    pub fn support(&self, x: DCoord) -> impl Iterator<Item = (DCoord, u64)> + '_ {
        let h = &self
            .hammocks
            .iter()
            .find(|(l, _)| *l == x.level)
            .expect("level of D_n")
            .1;
        h.iter()
            .map(move |&(v, d)| (DCoord::new(v.i + x.i, v.level), d))
    }

    pub fn dim(&self, x: DCoord, y: DCoord) -> u64 {
        self.support(x).find(|(v, _)| *v == y).map_or(0, |(_, d)| d)
    }
}
