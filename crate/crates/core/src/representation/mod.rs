//! Fiber representations of so(n) and the induced holonomy action.

mod clifford;
mod weight;

use serde::{Deserialize, Serialize};

use crate::curvature::CurvatureAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{c, ccommutator, cmax_abs, max_abs, CMatrix, RMatrix};

pub use clifford::{clifford_generators, gamma_antisym, spinor_generators};
pub use weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepKind {
    Scalar,
    Vector,
    Spinor,
    Weight,
    Product,
    Custom,
}

/// Generators G_ab of a representation of so(n), stored as `g[a * n + b]`.
#[derive(Clone, Debug)]
pub struct Representation {
    n: usize,
    dim: usize,
    kind: RepKind,
    generators: Vec<CMatrix>,
    alpha: Option<Weight>,
    abelian: Option<RMatrix>,
    factors: Option<Box<(Representation, Representation)>>,
    label: String,
}

/// (X_ab)^c_d = δ^c_a δ_bd − δ^c_b δ_ad.
pub fn vector_generators(n: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let mut m = CMatrix::zeros(n, n);
            if a != b {
                m[(a, b)] = c(1.0, 0.0);
                m[(b, a)] = c(-1.0, 0.0);
            }
            out.push(m);
        }
    }
    out
}

/// Max residual of [G_ab, G_cd] = −δ_ac G_bd + δ_bc G_ad + δ_ad G_bc − δ_bd G_ac
/// together with antisymmetry G_ab = −G_ba.
pub fn so_relations_residual(n: usize, g: &[CMatrix]) -> f64 {
    let delta = |x: usize, y: usize| if x == y { 1.0 } else { 0.0 };
    let at = |a: usize, b: usize| &g[a * n + b];
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            worst = worst.max(cmax_abs(&(at(a, b) + at(b, a))));
            for cc in 0..n {
                for d in 0..n {
                    let lhs = ccommutator(at(a, b), at(cc, d));
                    let rhs = at(b, d) * c(-delta(a, cc), 0.0)
                        + at(a, d) * c(delta(b, cc), 0.0)
                        + at(b, cc) * c(delta(a, d), 0.0)
                        + at(a, cc) * c(-delta(b, d), 0.0);
                    worst = worst.max(cmax_abs(&(lhs - rhs)));
                }
            }
        }
    }
    worst
}

impl Representation {
    pub fn scalar(n: usize) -> Self {
        Representation {
            n,
            dim: 1,
            kind: RepKind::Scalar,
            generators: vec![CMatrix::zeros(1, 1); n * n],
            alpha: None,
            abelian: None,
            factors: None,
            label: "scalar".into(),
        }
    }

    pub fn vector(n: usize) -> Self {
        Representation {
            n,
            dim: n,
            kind: RepKind::Vector,
            generators: vector_generators(n),
            alpha: None,
            abelian: None,
            factors: None,
            label: "vector".into(),
        }
    }

    pub fn spinor(n: usize) -> Result<Self> {
        let generators = spinor_generators(n)?;
        Ok(Representation {
            n,
            dim: generators[0].nrows(),
            kind: RepKind::Spinor,
            generators,
            alpha: None,
            abelian: None,
            factors: None,
            label: "spinor".into(),
        })
    }

    /// Irreducible SO(2) weight: G_12 = −iα on a one-dimensional fiber.
    pub fn weight(n: usize, alpha: Weight) -> Result<Self> {
        if n != 2 {
            return Err(Error::Unsupported(format!("weight representations need n = 2, got n = {n}")));
        }
        let a = alpha.value();
        let mut generators = vec![CMatrix::zeros(1, 1); 4];
        generators[1][(0, 0)] = c(0.0, -a);
        generators[2][(0, 0)] = c(0.0, a);
        Ok(Representation {
            n,
            dim: 1,
            kind: RepKind::Weight,
            generators,
            alpha: Some(alpha),
            abelian: None,
            factors: None,
            label: format!("weight:{alpha}"),
        })
    }

    /// G_ab = G¹_ab ⊗ 1 + 1 ⊗ G²_ab.
    pub fn product(first: &Representation, second: &Representation) -> Result<Self> {
        if first.n != second.n {
            return Err(Error::BadParams("product of representations of different so(n)".into()));
        }
        let i1 = CMatrix::identity(first.dim, first.dim);
        let i2 = CMatrix::identity(second.dim, second.dim);
        let generators = first
            .generators
            .iter()
            .zip(&second.generators)
            .map(|(g1, g2)| g1.kronecker(&i2) + i1.kronecker(g2))
            .collect();
        Ok(Representation {
            n: first.n,
            dim: first.dim * second.dim,
            kind: RepKind::Product,
            generators,
            alpha: None,
            abelian: None,
            factors: Some(Box::new((first.clone(), second.clone()))),
            label: format!("{}*{}", first.label, second.label),
        })
    }

    /// Raw generators, re-verified against the so(n) relations.
    pub fn custom(n: usize, generators: Vec<CMatrix>, tol: f64) -> Result<Self> {
        if generators.len() != n * n || generators.is_empty() {
            return Err(Error::BadParams(format!("expected {} generators", n * n)));
        }
        let dim = generators[0].nrows();
        if generators.iter().any(|g| g.nrows() != dim || g.ncols() != dim) {
            return Err(Error::BadParams("generators must be square of equal size".into()));
        }
        let residual = so_relations_residual(n, &generators);
        if residual > tol {
            return Err(Error::RepresentationBroken { residual });
        }
        Ok(Representation {
            n,
            dim,
            kind: RepKind::Custom,
            generators,
            alpha: None,
            abelian: None,
            factors: None,
            label: "custom".into(),
        })
    }

    /// Attaches a scalar Abelian field strength B, which must live on the
    /// flat subspace (B h = h B = 0).
    pub fn with_abelian_field(mut self, b: RMatrix, alg: &CurvatureAlgebra, tol: f64) -> Result<Self> {
        check_abelian_field(alg, &b, tol)?;
        self.abelian = if max_abs(&b) == 0.0 { None } else { Some(b) };
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn kind(&self) -> RepKind {
        self.kind
    }
    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }
    pub fn generator(&self, a: usize, b: usize) -> &CMatrix {
        &self.generators[a * self.n + b]
    }
    pub fn alpha(&self) -> Option<Weight> {
        self.alpha
    }
    pub fn abelian_field(&self) -> Option<&RMatrix> {
        self.abelian.as_ref()
    }
    pub fn factors(&self) -> Option<(&Representation, &Representation)> {
        self.factors.as_deref().map(|(a, b)| (a, b))
    }
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Spinor factor and twist of a spinor-based representation.
    pub fn spinor_split(&self) -> Option<(Representation, Option<&Representation>)> {
        match (self.kind, self.factors()) {
            (RepKind::Spinor, _) => Some((self.clone(), None)),
            (RepKind::Product, Some((s, t))) if s.kind == RepKind::Spinor => Some((s.clone(), Some(t))),
            _ => None,
        }
    }

    pub fn so_relations_residual(&self) -> f64 {
        so_relations_residual(self.n, &self.generators)
    }

    /// Conjugates every generator by a unitary U (G → U G U†).
    pub fn conjugated(&self, u: &CMatrix) -> Self {
        let ud = u.adjoint();
        let mut out = self.clone();
        out.generators = self.generators.iter().map(|g| u * g * &ud).collect();
        out.kind = RepKind::Custom;
        out.factors = None;
        out
    }
}

pub fn check_abelian_field(alg: &CurvatureAlgebra, b: &RMatrix, tol: f64) -> Result<()> {
    let n = alg.n();
    if b.nrows() != n || b.ncols() != n {
        return Err(Error::BadParams(format!("B must be {n}x{n}")));
    }
    if max_abs(&(b + b.transpose())) > tol {
        return Err(Error::BadParams("B must be antisymmetric".into()));
    }
    let h = alg.semisimple_projector();
    let residual = max_abs(&(b * h)).max(max_abs(&(h * b)));
    if residual > tol * max_abs(b).max(1.0) {
        return Err(Error::BadAbelianField { residual });
    }
    Ok(())
}

/// Holonomy generators 𝓡_i with their Casimir 𝓡² = β^{ij}𝓡_i𝓡_j.
#[derive(Clone, Debug)]
pub struct HolonomyAction {
    pub generators: Vec<CMatrix>,
    pub casimir: CMatrix,
}

impl HolonomyAction {
    /// 𝓡(ω) = ω^i 𝓡_i.
    pub fn at(&self, omega: &[num_complex::Complex64]) -> CMatrix {
        let dim = self.casimir.nrows();
        self.generators.iter().zip(omega).fold(CMatrix::zeros(dim, dim), |acc, (g, w)| acc + g * *w)
    }
}

/// 𝓡_i = −½ D^a_{ib} G_{ba}, checked against [𝓡_i, 𝓡_k] = F^j_{ik}𝓡_j.
pub fn holonomy_generators(alg: &CurvatureAlgebra, rep: &Representation, tol: f64) -> Result<Vec<CMatrix>> {
    if alg.n() != rep.n() {
        return Err(Error::BadParams(format!(
            "representation of so({}) on a space of dimension {}",
            rep.n(),
            alg.n()
        )));
    }
    let n = alg.n();
    let gens: Vec<CMatrix> = alg
        .generators()
        .iter()
        .map(|d| {
            let mut m = CMatrix::zeros(rep.dim(), rep.dim());
            for a in 0..n {
                for b in 0..n {
                    if d[(a, b)] != 0.0 {
                        m += rep.generator(b, a) * c(-0.5 * d[(a, b)], 0.0);
                    }
                }
            }
            m
        })
        .collect();
    let residual = representation_residual(alg, &gens);
    let s = alg.curvature_scale();
    if residual > tol * s * s {
        return Err(Error::RepresentationBroken { residual });
    }
    Ok(gens)
}

/// max |[T_i, T_k] − F^j_{ik}T_j|.
pub fn representation_residual(alg: &CurvatureAlgebra, gens: &[CMatrix]) -> f64 {
    let p = alg.p();
    let mut worst: f64 = 0.0;
    for i in 0..p {
        for k in 0..p {
            let mut m = ccommutator(&gens[i], &gens[k]);
            for j in 0..p {
                m -= &gens[j] * c(alg.f(j, i, k), 0.0);
            }
            worst = worst.max(cmax_abs(&m));
        }
    }
    worst
}

pub fn casimir(alg: &CurvatureAlgebra, gens: &[CMatrix], dim: usize) -> CMatrix {
    alg.beta()
        .iter()
        .zip(gens)
        .fold(CMatrix::zeros(dim, dim), |acc, (lam, g)| acc + g * g * c(1.0 / lam, 0.0))
}

pub fn holonomy_action(alg: &CurvatureAlgebra, rep: &Representation, tol: f64) -> Result<HolonomyAction> {
    let generators = holonomy_generators(alg, rep, tol)?;
    let casimir = casimir(alg, &generators, rep.dim());
    Ok(HolonomyAction { generators, casimir })
}

/// Residual of 𝓡² = −⅛R·1 ⊗ 1 + 1 ⊗ T² − ½E^j_{ab}γ^{ab} ⊗ T_j on spinors
/// twisted by `twist` (untwisted when `None`).
pub fn spinor_casimir_identity(alg: &CurvatureAlgebra, twist: Option<&Representation>, tol: f64) -> Result<f64> {
    let n = alg.n();
    let spin = Representation::spinor(n)?;
    let twist = match twist {
        Some(t) => t.clone(),
        None => Representation::scalar(n),
    };
    let full = Representation::product(&spin, &twist)?;
    let lhs = holonomy_action(alg, &full, tol)?.casimir;
    let t_action = holonomy_action(alg, &twist, tol)?;
    let gammas = clifford_generators(n)?;
    let ds = spin.dim();
    let is = CMatrix::identity(ds, ds);
    let mut rhs = is.kronecker(&t_action.casimir) - CMatrix::identity(full.dim(), full.dim()) * c(alg.scalar_curvature() / 8.0, 0.0);
    for (e, t) in alg.forms().iter().zip(&t_action.generators) {
        for a in 0..n {
            for b in 0..n {
                if e[(a, b)] != 0.0 {
                    rhs -= gamma_antisym(&gammas, a, b).kronecker(t) * c(0.5 * e[(a, b)], 0.0);
                }
            }
        }
    }
    Ok(cmax_abs(&(lhs - rhs)))
}

/// ℱ_ab = −E^i_{ab}T_i + B_ab·1, laid out as `out[a * n + b]`; verified
/// against [ℱ_cd, ℱ_ab] − R^f_{acd}ℱ_fb − R^f_{bcd}ℱ_af = 0.
pub fn gauge_curvature(
    alg: &CurvatureAlgebra,
    twist_gens: &[CMatrix],
    dim: usize,
    b: Option<&RMatrix>,
    tol: f64,
) -> Result<Vec<CMatrix>> {
    let n = alg.n();
    if let Some(b) = b {
        check_abelian_field(alg, b, tol)?;
    }
    let id = CMatrix::identity(dim, dim);
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        for bb in 0..n {
            let mut m = CMatrix::zeros(dim, dim);
            for (e, t) in alg.forms().iter().zip(twist_gens) {
                m -= t * c(e[(a, bb)], 0.0);
            }
            if let Some(b) = b {
                m += &id * c(b[(a, bb)], 0.0);
            }
            out.push(m);
        }
    }
    let residual = gauge_integrability_residual(alg, &out);
    let s = alg.curvature_scale();
    if residual > tol * s * s {
        return Err(Error::RepresentationBroken { residual });
    }
    Ok(out)
}

pub fn gauge_integrability_residual(alg: &CurvatureAlgebra, f: &[CMatrix]) -> f64 {
    let n = alg.n();
    let r = alg.riemann();
    let at = |a: usize, b: usize| &f[a * n + b];
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                for d in 0..n {
                    let mut m = ccommutator(at(cc, d), at(a, b));
                    for ff in 0..n {
                        m -= at(ff, b) * c(r.get(ff, a, cc, d), 0.0);
                        m -= at(a, ff) * c(r.get(ff, b, cc, d), 0.0);
                    }
                    worst = worst.max(cmax_abs(&m));
                }
            }
        }
    }
    worst
}

/// max |½R^{cd}_{ab}X_cd + E^i_{ab}T_i| for an so(n) representation X with
/// induced T_i.
pub fn two_form_consistency(alg: &CurvatureAlgebra, rep: &Representation, tol: f64) -> Result<f64> {
    let n = alg.n();
    let t = holonomy_generators(alg, rep, tol)?;
    let r = alg.riemann();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let mut m = CMatrix::zeros(rep.dim(), rep.dim());
            for cc in 0..n {
                for d in 0..n {
                    m += rep.generator(cc, d) * c(0.5 * r.get(cc, d, a, b), 0.0);
                }
            }
            for (e, ti) in alg.forms().iter().zip(&t) {
                m += ti * c(e[(a, b)], 0.0);
            }
            worst = worst.max(cmax_abs(&m));
        }
    }
    Ok(worst)
}

/// Serializable form: {"dimV","kind","G_ab","alpha","B"}.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepresentationJson {
    #[serde(rename = "dimV")]
    pub dim_v: usize,
    pub kind: RepKind,
    #[serde(rename = "G_ab")]
    pub g_ab: Vec<Vec<Vec<Vec<[f64; 2]>>>>,
    pub alpha: Option<Weight>,
    #[serde(rename = "B")]
    pub b: Option<Vec<Vec<f64>>>,
}

impl From<&Representation> for RepresentationJson {
    fn from(rep: &Representation) -> Self {
        let n = rep.n;
        let g_ab = (0..n)
            .map(|a| (0..n).map(|b| crate::json::cmatrix_rows(rep.generator(a, b))).collect())
            .collect();
        RepresentationJson {
            dim_v: rep.dim,
            kind: rep.kind,
            g_ab,
            alpha: rep.alpha,
            b: rep.abelian.as_ref().map(crate::json::rmatrix_rows),
        }
    }
}

impl RepresentationJson {
    /// Rebuilds a representation, re-verifying every invariant.
    pub fn into_representation(self, alg: &CurvatureAlgebra, tol: f64) -> Result<Representation> {
        let n = self.g_ab.len();
        let mut gens = Vec::with_capacity(n * n);
        for row in &self.g_ab {
            if row.len() != n {
                return Err(Error::Parse("G_ab must be an n x n array".into()));
            }
            for m in row {
                gens.push(crate::json::cmatrix_from_rows(m)?);
            }
        }
        if gens.first().map(|g| g.nrows()) != Some(self.dim_v) {
            return Err(Error::Parse("dimV does not match the generator size".into()));
        }
        let mut rep = Representation::custom(n, gens, tol)?;
        rep.kind = self.kind;
        rep.alpha = self.alpha;
        rep.label = match self.alpha {
            Some(a) => format!("weight:{a}"),
            None => format!("{:?}", self.kind).to_lowercase(),
        };
        if let Some(b) = self.b {
            rep = rep.with_abelian_field(crate::json::rmatrix_from_rows(&b)?, alg, tol)?;
        }
        holonomy_generators(alg, &rep, tol)?;
        Ok(rep)
    }
}
