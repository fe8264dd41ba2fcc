use num_complex::Complex64;
use serde::Serialize;

use crate::curvature::CurvatureAlgebra;
use crate::error::{Error, Result};
use crate::gaussian::bernoulli::BernoulliSeries;
use crate::gaussian::polynomial::{OmegaPolynomial, Polynomial};
use crate::gaussian::wick::GaussianMeasure;
use crate::linalg::{c, cmax_abs, ctrace, CMatrix, RMatrix};
use crate::representation::{holonomy_action, Representation};

pub const DEFAULT_ORDER: usize = 3;
pub const MAX_ORDER: usize = 6;

/// Series in s = √t whose s^j coefficient is an ω-polynomial of degree ≤ j.
#[derive(Clone, Debug)]
struct SqrtSeries<C> {
    coeffs: Vec<Option<Polynomial<C>>>,
}

impl<C: crate::gaussian::polynomial::Coefficient> SqrtSeries<C> {
    fn new(len: usize) -> Self {
        SqrtSeries { coeffs: vec![None; len] }
    }

    fn len(&self) -> usize {
        self.coeffs.len()
    }

    fn set(&mut self, j: usize, p: Polynomial<C>) {
        if j < self.len() && !p.is_zero() {
            self.coeffs[j] = Some(p);
        }
    }

    fn mul_with<B, D>(&self, other: &SqrtSeries<B>, f: impl Fn(&Polynomial<C>, &Polynomial<B>, usize) -> Polynomial<D>) -> SqrtSeries<D>
    where
        B: crate::gaussian::polynomial::Coefficient,
        D: crate::gaussian::polynomial::Coefficient,
    {
        let len = self.len();
        let mut out: SqrtSeries<D> = SqrtSeries::new(len);
        for (i, a) in self.coeffs.iter().enumerate() {
            let Some(a) = a else { continue };
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                let Some(b) = b else { continue };
                let prod = f(a, b, len - 1);
                if prod.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = Some(match out.coeffs[i + j].take() {
                    Some(acc) => acc.add(&prod),
                    None => prod,
                });
            }
        }
        out
    }
}

fn scalar_exp(log: &SqrtSeries<f64>) -> SqrtSeries<f64> {
    // log has no constant term, so powers beyond len − 1 vanish.
    let len = log.len();
    let maxdeg = len - 1;
    let mut out = SqrtSeries::new(len);
    out.set(0, Polynomial::constant(1.0, maxdeg));
    let mut power = out.clone();
    for m in 1..len {
        power = power.mul_with(log, |a, b, d| a.mul(b, d));
        if power.coeffs.iter().all(Option::is_none) {
            break;
        }
        for (j, p) in power.coeffs.iter().enumerate() {
            if let Some(p) = p {
                let term = p.scaled(1.0 / factorial(m));
                let merged = match out.coeffs[j].take() {
                    Some(acc) => acc.add(&term),
                    None => term,
                };
                out.set(j, merged);
            }
        }
    }
    out
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|x| x as f64).product()
}

/// Σ_k s^{2k} sign·½c_k tr((X(ω)/2)^{2k}) for X(ω) = ω^i X_i.
fn log_det_series(gens: &[RMatrix], sign: f64, order: usize, bern: &BernoulliSeries) -> SqrtSeries<f64> {
    let len = 2 * order + 1;
    let mut out = SqrtSeries::new(len);
    if gens.is_empty() {
        return out;
    }
    let maxdeg = 2 * order;
    let half: Vec<RMatrix> = gens.iter().map(|g| g * 0.5).collect();
    let x = Polynomial::linear(&half, maxdeg);
    let mut power = x.clone();
    for m in 2..=maxdeg {
        power = power.mul(&x, maxdeg);
        if m % 2 == 0 {
            let k = m / 2;
            out.set(m, power.trace().scaled(sign * 0.5 * bern.coeff(k)));
        }
    }
    out
}

/// Per-t^k coefficients of the generating function before averaging.
#[derive(Clone, Debug)]
pub struct GeneratingSeries {
    pub orders: Vec<OmegaPolynomial>,
}

/// Expands
/// e^{(R/8 + R_H/6)t} e^{−𝓡²t} det(sinh tB/tB)^{−1/2} cosh(√t𝓡(ω))
/// · det_H(sinh(√tF(ω)/2)/(√tF(ω)/2))^{1/2} det_TM(sinh(√tD(ω)/2)/(√tD(ω)/2))^{−1/2}
/// through t^K.
pub fn expand_generating_function(alg: &CurvatureAlgebra, rep: &Representation, order: usize, tol: f64) -> Result<GeneratingSeries> {
    if order > MAX_ORDER {
        return Err(Error::TruncationOverflow(format!("order {order} exceeds the cap {MAX_ORDER}")));
    }
    let action = holonomy_action(alg, rep, tol)?;
    let dim = rep.dim();
    let len = 2 * order + 1;
    let maxdeg = 2 * order;
    let bern = BernoulliSeries::new(order.max(1));
    let id = CMatrix::identity(dim, dim);

    // cosh(s𝓡(ω)) = Σ s^{2m}𝓡(ω)^{2m}/(2m)!
    let mut cosh: SqrtSeries<CMatrix> = SqrtSeries::new(len);
    cosh.set(0, Polynomial::constant(id.clone(), maxdeg));
    if !action.generators.is_empty() {
        let r = Polynomial::linear(&action.generators, maxdeg);
        let mut power = r.clone();
        for m in 2..=maxdeg {
            power = power.mul(&r, maxdeg);
            if m % 2 == 0 {
                cosh.set(m, power.scaled(1.0 / factorial(m)));
            }
        }
    }

    // Scalar log of the determinant factors, including the Abelian one.
    let holonomy = log_det_series(alg.adjoint(), 1.0, order, &bern);
    let tangent = log_det_series(alg.generators(), -1.0, order, &bern);
    let mut log = holonomy;
    for (j, p) in tangent.coeffs.iter().enumerate() {
        if let Some(p) = p {
            let merged = match log.coeffs[j].take() {
                Some(acc) => acc.add(p),
                None => p.clone(),
            };
            log.set(j, merged);
        }
    }
    let scalar_shift = alg.scalar_curvature() / 8.0 + alg.holonomy_curvature() / 6.0;
    add_constant(&mut log, 2, scalar_shift, maxdeg);
    if let Some(b) = rep.abelian_field() {
        // −½ Σ_k c_k t^{2k} tr B^{2k}
        let b2 = b * b;
        let mut power = RMatrix::identity(b.nrows(), b.nrows());
        for k in 1..=order / 2 {
            power = &power * &b2;
            add_constant(&mut log, 4 * k, -0.5 * bern.coeff(k) * power.trace(), maxdeg);
        }
    }
    let scalar = scalar_exp(&log);

    // e^{−𝓡²t}
    let mut casimir_exp: SqrtSeries<CMatrix> = SqrtSeries::new(len);
    let mut power = id.clone();
    casimir_exp.set(0, Polynomial::constant(id.clone(), maxdeg));
    for m in 1..=order {
        power = &power * &action.casimir * c(-1.0 / m as f64, 0.0);
        casimir_exp.set(2 * m, Polynomial::constant(power.clone(), maxdeg));
    }

    let product = casimir_exp
        .mul_with(&cosh, |a, b, d| a.mul(b, d))
        .mul_with(&scalar, |a, b, d| a.mul_scalar_poly(b, d));

    let mut orders = Vec::with_capacity(order + 1);
    for (j, p) in product.coeffs.into_iter().enumerate() {
        let p = p.unwrap_or_else(|| Polynomial::zero(maxdeg));
        if let Some(deg) = p.degree() {
            if deg > j || deg > maxdeg {
                return Err(Error::TruncationOverflow(format!("degree {deg} at s^{j} (limit {maxdeg})")));
            }
        }
        if j % 2 == 1 {
            if !p.is_zero() {
                return Err(Error::ParityViolation { order: j });
            }
            continue;
        }
        orders.push(p);
    }
    Ok(GeneratingSeries { orders })
}

fn add_constant(series: &mut SqrtSeries<f64>, j: usize, value: f64, maxdeg: usize) {
    if j >= series.len() {
        return;
    }
    let term = Polynomial::constant(value, maxdeg);
    let merged = match series.coeffs[j].take() {
        Some(acc) => acc.add(&term),
        None => term,
    };
    series.set(j, merged);
}

/// Heat coefficients a_0..a_K of (4πt)^{−n/2} Σ t^k a_k.
#[derive(Clone, Debug, Serialize)]
pub struct HeatCoefficients {
    #[serde(rename = "K")]
    pub order: usize,
    #[serde(serialize_with = "serialize_matrices")]
    pub a: Vec<CMatrix>,
    pub space_tag: String,
    pub rep_tag: String,
}

fn serialize_matrices<S: serde::Serializer>(a: &[CMatrix], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(a.len()))?;
    for m in a {
        seq.serialize_element(&crate::json::cmatrix_rows(m))?;
    }
    seq.end()
}

impl HeatCoefficients {
    pub fn traces(&self) -> Vec<Complex64> {
        self.a.iter().map(ctrace).collect()
    }

    pub fn dim(&self) -> usize {
        self.a[0].nrows()
    }

    /// max |a_0 − 1|.
    pub fn a0_residual(&self) -> f64 {
        let d = self.dim();
        cmax_abs(&(&self.a[0] - CMatrix::identity(d, d)))
    }

    /// max |a_1 − (R/6)·1|.
    pub fn a1_residual(&self, scalar_curvature: f64) -> Option<f64> {
        let d = self.dim();
        self.a.get(1).map(|a1| cmax_abs(&(a1 - CMatrix::identity(d, d) * c(scalar_curvature / 6.0, 0.0))))
    }

    /// max |[a_k, 𝓡_i]| over k and i.
    pub fn invariance_residual(&self, gens: &[CMatrix]) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.a {
            for g in gens {
                worst = worst.max(cmax_abs(&(a * g - g * a)));
            }
        }
        worst
    }
}

pub fn heat_coefficients(
    alg: &CurvatureAlgebra,
    rep: &Representation,
    order: usize,
    tol: f64,
    space_tag: &str,
) -> Result<HeatCoefficients> {
    let series = expand_generating_function(alg, rep, order, tol)?;
    let dim = rep.dim();
    let a = if alg.p() == 0 {
        series.orders.iter().map(|p| p.coefficient(&[]).cloned().unwrap_or_else(|| CMatrix::zeros(dim, dim))).collect()
    } else {
        let measure = GaussianMeasure::diagonal(alg.beta())?;
        series.orders.iter().map(|p| measure.average(p, CMatrix::zeros(dim, dim))).collect()
    };
    Ok(HeatCoefficients { order, a, space_tag: space_tag.to_string(), rep_tag: rep.label().to_string() })
}

/// A_k = vol · tr a_k (real parts).
pub fn heat_invariants(hc: &HeatCoefficients, vol: f64) -> Vec<f64> {
    hc.traces().iter().map(|t| vol * t.re).collect()
}
