use serde::Serialize;

use crate::curvature::{CurvatureAlgebra, RiemannData, Tolerances};
use crate::linalg::{commutator, max_abs, RMatrix};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub family: String,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub tol: f64,
    pub families: Vec<IdentityResidual>,
    pub construction_error: Option<String>,
    pub pass: bool,
}

impl ValidationReport {
    pub fn residual(&self, family: &str) -> Option<f64> {
        self.families.iter().find(|f| f.family == family).map(|f| f.residual)
    }

    pub fn max_residual(&self) -> f64 {
        self.families.iter().fold(0.0, |m, f| m.max(f.residual))
    }

    fn push(&mut self, family: &str, residual: f64) {
        let pass = residual <= self.tol;
        self.families.push(IdentityResidual { family: family.to_string(), residual, pass });
    }

    fn finish(mut self) -> Self {
        self.pass = self.construction_error.is_none() && self.families.iter().all(|f| f.pass);
        self
    }
}

/// Validates a raw tensor: its symmetries and integrability first, then
/// (if construction succeeds) every identity of the assembled algebra.
pub fn validate_riemann(riem: &RiemannData, tol: Tolerances) -> ValidationReport {
    let mut report = ValidationReport { tol: tol.tol_alg, families: vec![], construction_error: None, pass: false };
    let s = riem.scale().max(1.0);
    report.push("symmetries", riem.symmetry_residuals().max() / s);
    report.push("integrability", riem.integrability_residual() / (s * s));
    match CurvatureAlgebra::from_riemann(riem, tol) {
        Ok(alg) => algebra_families(&alg, &mut report),
        Err(e) => report.construction_error = Some(e.to_string()),
    }
    report.finish()
}

pub fn validate(alg: &CurvatureAlgebra, tol: f64) -> ValidationReport {
    let mut report = ValidationReport { tol, families: vec![], construction_error: None, pass: false };
    let s = alg.curvature_scale();
    report.push("symmetries", alg.riemann().symmetry_residuals().max() / s);
    report.push("integrability", alg.riemann().integrability_residual() / (s * s));
    algebra_families(alg, &mut report);
    report.finish()
}

fn algebra_families(alg: &CurvatureAlgebra, report: &mut ValidationReport) {
    let s = alg.curvature_scale();
    let s2 = s * s;
    report.push("reconstruction", reconstruction(alg) / s);
    report.push("symmetric_space", symmetric_space(alg) / s);
    report.push("bianchi", bianchi(alg) / s);
    report.push("holonomy_closure", holonomy_closure(alg) / s2);
    report.push("holonomy_jacobi", holonomy_jacobi(alg) / s2);
    report.push("algebra_commutators", algebra_commutators(alg) / s2);
    report.push("beta_invariance", beta_invariance(alg) / s2);
    report.push("gamma_invariance", gamma_invariance(alg) / s2);
    report.push("killing_derivative", killing_derivative(alg) / s2);
    report.push("killing_form", killing_form(alg) / s);
    report.push("traceless", traceless(alg) / s);
    report.push("projectors", projector_identities(alg));
}

pub fn reconstruction(alg: &CurvatureAlgebra) -> f64 {
    let n = alg.n();
    let r = alg.riemann();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let sum: f64 = alg
                        .beta()
                        .iter()
                        .zip(alg.forms())
                        .map(|(lam, e)| lam * e[(a, b)] * e[(c, d)])
                        .sum();
                    worst = worst.max((sum - r.get(a, b, c, d)).abs());
                }
            }
        }
    }
    worst
}

/// E^i_{ac}D^c_{kb} − E^i_{bc}D^c_{ka} − F^i_{kj}E^j_{ab}.
pub fn symmetric_space(alg: &CurvatureAlgebra) -> f64 {
    let p = alg.p();
    let (e, d) = (alg.forms(), alg.generators());
    let mut worst: f64 = 0.0;
    for i in 0..p {
        for k in 0..p {
            let ed = &e[i] * &d[k];
            let mut m = &ed - ed.transpose();
            for j in 0..p {
                m -= &e[j] * alg.f(i, k, j);
            }
            worst = worst.max(max_abs(&m));
        }
    }
    worst
}

/// Cyclic sum D^a_{jb}E^j_{cd} + D^a_{jc}E^j_{db} + D^a_{jd}E^j_{bc}.
pub fn bianchi(alg: &CurvatureAlgebra) -> f64 {
    let n = alg.n();
    let (e, d) = (alg.forms(), alg.generators());
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for dd in 0..n {
                    let s: f64 = (0..alg.p())
                        .map(|j| {
                            d[j][(a, b)] * e[j][(c, dd)] + d[j][(a, c)] * e[j][(dd, b)] + d[j][(a, dd)] * e[j][(b, c)]
                        })
                        .sum();
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst
}

pub fn holonomy_closure(alg: &CurvatureAlgebra) -> f64 {
    let p = alg.p();
    let d = alg.generators();
    let mut worst: f64 = 0.0;
    for i in 0..p {
        for k in 0..p {
            let mut m = commutator(&d[i], &d[k]);
            for j in 0..p {
                m -= &d[j] * alg.f(j, i, k);
            }
            worst = worst.max(max_abs(&m));
        }
    }
    worst
}

/// F^i_{jk}F^j_{ml} + F^i_{jm}F^j_{lk} + F^i_{jl}F^j_{km}, plus antisymmetry of F.
pub fn holonomy_jacobi(alg: &CurvatureAlgebra) -> f64 {
    let p = alg.p();
    let mut worst: f64 = 0.0;
    for i in 0..p {
        for k in 0..p {
            for l in 0..p {
                worst = worst.max((alg.f(i, k, l) + alg.f(i, l, k)).abs());
                for m in 0..p {
                    let s: f64 = (0..p)
                        .map(|j| {
                            alg.f(i, j, k) * alg.f(j, m, l)
                                + alg.f(i, j, m) * alg.f(j, l, k)
                                + alg.f(i, j, l) * alg.f(j, k, m)
                        })
                        .sum();
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst
}

/// [C_A, C_B] − C^C_{AB} C_C with C^C_{AB} = (C_A)^C_B.
pub fn algebra_commutators(alg: &CurvatureAlgebra) -> f64 {
    let c = alg.c_matrices();
    let big = c.len();
    let mut worst: f64 = 0.0;
    for a in 0..big {
        for b in 0..big {
            let mut m = commutator(&c[a], &c[b]);
            for cc in 0..big {
                let coeff = c[a][(cc, b)];
                if coeff != 0.0 {
                    m -= &c[cc] * coeff;
                }
            }
            worst = worst.max(max_abs(&m));
        }
    }
    worst
}

/// λ_i F^i_{jl} + λ_l F^l_{ji}.
pub fn beta_invariance(alg: &CurvatureAlgebra) -> f64 {
    let p = alg.p();
    let beta = alg.beta();
    let mut worst: f64 = 0.0;
    for i in 0..p {
        for j in 0..p {
            for l in 0..p {
                worst = worst.max((beta[i] * alg.f(i, j, l) + beta[l] * alg.f(l, j, i)).abs());
            }
        }
    }
    worst
}

/// γ_{AB}C^B_{CD} + γ_{DB}C^B_{CA}: antisymmetry of γ C_C.
pub fn gamma_invariance(alg: &CurvatureAlgebra) -> f64 {
    let gamma = alg.gamma();
    alg.c_matrices()
        .iter()
        .map(|c| {
            let gc = &gamma * c;
            max_abs(&(&gc + gc.transpose()))
        })
        .fold(0.0, f64::max)
}

/// D^a_{i[b}R_{c]ade} + D^a_{i[d}R_{e]abc}.
pub fn killing_derivative(alg: &CurvatureAlgebra) -> f64 {
    let n = alg.n();
    let r = alg.riemann();
    let mut worst: f64 = 0.0;
    for d in alg.generators() {
        for b in 0..n {
            for c in 0..n {
                for dd in 0..n {
                    for e in 0..n {
                        let s: f64 = (0..n)
                            .map(|a| {
                                0.5 * (d[(a, b)] * r.get(c, a, dd, e) - d[(a, c)] * r.get(b, a, dd, e))
                                    + 0.5 * (d[(a, dd)] * r.get(e, a, b, c) - d[(a, e)] * r.get(dd, a, b, c))
                            })
                            .sum();
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
    }
    worst
}

/// β^{ik}ρ_{ik} − R.
pub fn killing_form(alg: &CurvatureAlgebra) -> f64 {
    let s: f64 = alg.beta().iter().enumerate().map(|(i, lam)| alg.rho()[(i, i)] / lam).sum();
    (s - alg.scalar_curvature()).abs()
}

pub fn traceless(alg: &CurvatureAlgebra) -> f64 {
    alg.generators()
        .iter()
        .chain(alg.adjoint())
        .chain(alg.c_matrices())
        .map(|m| m.trace().abs())
        .fold(0.0, f64::max)
}

pub fn projector_identities(alg: &CurvatureAlgebra) -> f64 {
    let n = alg.n();
    let (h, q) = (alg.semisimple_projector(), alg.flat_projector());
    let id = RMatrix::identity(n, n);
    let mut worst = max_abs(&(h + q - &id))
        .max(max_abs(&(h * h - h)))
        .max(max_abs(&(q * q - q)))
        .max(max_abs(&(h * q)))
        .max((h.trace() - alg.ns() as f64).abs())
        .max((q.trace() - alg.n0() as f64).abs());
    for (e, d) in alg.forms().iter().zip(alg.generators()) {
        worst = worst.max(max_abs(&(e * q))).max(max_abs(&(d * q)));
    }
    worst
}
