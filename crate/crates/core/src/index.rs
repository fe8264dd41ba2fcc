//! Chirality, the Dirac square and the index from heat coefficients.

use serde::Serialize;

use crate::curvature::CurvatureAlgebra;
use crate::diagonal::{diagonal_general, spectral_sum_s2_auto, QuadOptions};
use crate::error::{Error, Result};
use crate::gaussian::heat_coefficients;
use crate::linalg::{c, cmax_abs, ctrace, CMatrix};
use crate::representation::{
    clifford_generators, gamma_antisym, gauge_curvature, holonomy_generators, Representation, Weight,
};

/// Distance from an integer above which an index is rejected.
pub const INTEGER_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct ChiralityData {
    pub n: usize,
    pub gamma: CMatrix,
}

impl ChiralityData {
    pub fn square_residual(&self) -> f64 {
        let id = CMatrix::identity(self.gamma.nrows(), self.gamma.nrows());
        cmax_abs(&(&self.gamma * &self.gamma - id))
    }

    pub fn anticommutator_residual(&self) -> f64 {
        let gammas = clifford_generators(self.n).expect("validated in chirality");
        gammas.iter().map(|g| cmax_abs(&(&self.gamma * g + g * &self.gamma))).fold(0.0, f64::max)
    }
}

/// Γ = i^{n(n−1)/2} γ_1⋯γ_n.
pub fn chirality(n: usize) -> Result<ChiralityData> {
    let gammas = clifford_generators(n)?;
    let dim = gammas[0].nrows();
    let product = gammas.iter().fold(CMatrix::identity(dim, dim), |acc, g| acc * g);
    let phase = match (n * (n - 1) / 2) % 4 {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    };
    Ok(ChiralityData { n, gamma: product * phase })
}

struct DiracParts {
    spin_dim: usize,
    twist_dim: usize,
    twist_gens: Vec<CMatrix>,
}

fn dirac_parts(alg: &CurvatureAlgebra, rep: &Representation, tol: f64) -> Result<DiracParts> {
    let (spin, twist) = rep
        .spinor_split()
        .ok_or_else(|| Error::BadParams(format!("'{}' is not spinor based", rep.label())))?;
    let twist = twist.cloned().unwrap_or_else(|| Representation::scalar(alg.n()));
    let twist_gens = holonomy_generators(alg, &twist, tol)?;
    Ok(DiracParts { spin_dim: spin.dim(), twist_dim: twist.dim(), twist_gens })
}

/// V = −¼R − ½E^i_{ab}γ^{ab} ⊗ T_i + ½B_{ab}γ^{ab}, so that D² = Δ + V.
pub fn dirac_square_terms(alg: &CurvatureAlgebra, rep: &Representation, tol: f64) -> Result<CMatrix> {
    let n = alg.n();
    let parts = dirac_parts(alg, rep, tol)?;
    let gammas = clifford_generators(n)?;
    let it = CMatrix::identity(parts.twist_dim, parts.twist_dim);
    let dim = parts.spin_dim * parts.twist_dim;
    let mut v = CMatrix::identity(dim, dim) * c(-0.25 * alg.scalar_curvature(), 0.0);
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let gab = gamma_antisym(&gammas, a, b);
            for (e, t) in alg.forms().iter().zip(&parts.twist_gens) {
                if e[(a, b)] != 0.0 {
                    v -= gab.kronecker(t) * c(0.5 * e[(a, b)], 0.0);
                }
            }
            if let Some(bf) = rep.abelian_field() {
                if bf[(a, b)] != 0.0 {
                    v += gab.kronecker(&it) * c(0.5 * bf[(a, b)], 0.0);
                }
            }
        }
    }
    Ok(v)
}

/// max |V − (½ℱ_{ab}γ^{ab} − ¼R)| with ℱ the gauge curvature of the twist.
pub fn dirac_square_consistency(alg: &CurvatureAlgebra, rep: &Representation, tol: f64) -> Result<f64> {
    let n = alg.n();
    let v = dirac_square_terms(alg, rep, tol)?;
    let parts = dirac_parts(alg, rep, tol)?;
    let f = gauge_curvature(alg, &parts.twist_gens, parts.twist_dim, rep.abelian_field(), tol)?;
    let gammas = clifford_generators(n)?;
    let dim = parts.spin_dim * parts.twist_dim;
    let mut other = CMatrix::identity(dim, dim) * c(-0.25 * alg.scalar_curvature(), 0.0);
    for a in 0..n {
        for b in 0..n {
            if a != b {
                other += gamma_antisym(&gammas, a, b).kronecker(&f[a * n + b]) * c(0.5, 0.0);
            }
        }
    }
    Ok(cmax_abs(&(v - other)))
}

fn graded_chirality(alg: &CurvatureAlgebra, rep: &Representation, tol: f64) -> Result<CMatrix> {
    let parts = dirac_parts(alg, rep, tol)?;
    let gamma = chirality(alg.n())?.gamma;
    Ok(gamma.kronecker(&CMatrix::identity(parts.twist_dim, parts.twist_dim)))
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// Heat coefficients of e^{tD²} = e^{tV}e^{tΔ}: a^D_k = Σ_j V^j/j! a_{k−j}.
pub fn dirac_heat_coefficients(alg: &CurvatureAlgebra, rep: &Representation, order: usize, tol: f64) -> Result<Vec<CMatrix>> {
    let v = dirac_square_terms(alg, rep, tol)?;
    let hc = heat_coefficients(alg, rep, order, tol, "")?;
    let dim = rep.dim();
    let mut powers = vec![CMatrix::identity(dim, dim)];
    for j in 1..=order {
        powers.push(&powers[j - 1] * &v);
    }
    Ok((0..=order)
        .map(|k| {
            (0..=k).fold(CMatrix::zeros(dim, dim), |acc, j| acc + &powers[j] * &hc.a[k - j] * c(1.0 / factorial(j), 0.0))
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexResult {
    pub n: usize,
    pub index: f64,
    pub nearest_integer: i64,
}

/// Ind(D) = (4π)^{−n/2} vol tr(Γ a^D_{n/2}).
pub fn index(alg: &CurvatureAlgebra, rep: &Representation, vol: f64, tol: f64) -> Result<IndexResult> {
    let n = alg.n();
    if n % 2 == 1 {
        return Err(Error::Unsupported(format!("index in odd dimension {n}")));
    }
    if !alg.is_compact() {
        return Err(Error::NotCompact);
    }
    let gamma = graded_chirality(alg, rep, tol)?;
    let a = dirac_heat_coefficients(alg, rep, n / 2, tol)?;
    let value = ctrace(&(&gamma * &a[n / 2])).re * vol * (4.0 * std::f64::consts::PI).powf(-(n as f64) / 2.0);
    let nearest = value.round();
    if (value - nearest).abs() > INTEGER_TOL {
        return Err(Error::NotInteger { value });
    }
    Ok(IndexResult { n, index: value, nearest_integer: nearest as i64 })
}

#[derive(Clone, Debug, Serialize)]
pub struct TIndependence {
    pub t: Vec<f64>,
    pub graded_trace: Vec<f64>,
    pub spread: f64,
}

/// vol · tr[Γ e^{tV} U(t)] with U from contour integration, over `ts`.
pub fn t_independence_check(
    alg: &CurvatureAlgebra,
    rep: &Representation,
    vol: f64,
    ts: &[f64],
    opts: &QuadOptions,
    tol: f64,
) -> Result<TIndependence> {
    let gamma = graded_chirality(alg, rep, tol)?;
    let v = dirac_square_terms(alg, rep, tol)?;
    let mut values = Vec::with_capacity(ts.len());
    for &t in ts {
        let u = diagonal_general(alg, rep, t, opts, tol)?.value;
        let m = &gamma * (&v * c(t, 0.0)).exp() * u;
        values.push(ctrace(&m).re * vol);
    }
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = if values.is_empty() { 0.0 } else { hi - lo };
    Ok(TIndependence { t: ts.to_vec(), graded_trace: values, spread })
}

/// One chiral line bundle inside a spinor bundle on S².
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ChiralComponent {
    pub weight: Weight,
    pub chirality: f64,
    pub potential: f64,
}

/// Index on S²(r) from the spectrum: the spinor bundle splits into weight
/// line bundles on which Γ and V are constant, so the graded count of zero
/// modes of D² can be read off the weight-α spectrum.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralIndex {
    pub components: Vec<ChiralComponent>,
    pub zero_mode_index: i64,
    /// Σ_c Γ_c e^{tV_c} vol U_{α_c}(t) at the requested t.
    pub graded_trace: f64,
}

pub fn s2_spectral_index(alg: &CurvatureAlgebra, rep: &Representation, r: f64, t: f64, tol: f64) -> Result<SpectralIndex> {
    if alg.n() != 2 || !alg.is_compact() {
        return Err(Error::Unsupported("spectral index oracle is for S² only".into()));
    }
    let gamma = graded_chirality(alg, rep, tol)?;
    let v = dirac_square_terms(alg, rep, tol)?;
    let weight = rep.generator(0, 1) * c(0.0, 1.0);
    let off = |m: &CMatrix| {
        let mut worst: f64 = 0.0;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if i != j {
                    worst = worst.max(m[(i, j)].norm());
                }
            }
        }
        worst
    };
    if off(&gamma).max(off(&v)).max(off(&weight)) > tol {
        return Err(Error::Unsupported("chirality, potential and weight are not simultaneously diagonal".into()));
    }
    let vol = 4.0 * std::f64::consts::PI * r * r;
    let mut components = Vec::new();
    let mut zero_modes = 0i64;
    let mut graded = 0.0;
    for k in 0..rep.dim() {
        let twice = 2.0 * weight[(k, k)].re;
        if (twice - twice.round()).abs() > tol {
            return Err(Error::NotInteger { value: weight[(k, k)].re });
        }
        let alpha = Weight::from_twice(twice.round() as i64);
        let chir = gamma[(k, k)].re;
        let pot = v[(k, k)].re;
        components.push(ChiralComponent { weight: alpha, chirality: chir, potential: pot });
        // D² = Δ + V vanishes on l where (l(l+1) − α²)/r² = V.
        let a = alpha.value().abs();
        let mut l = a;
        while (l * (l + 1.0) - a * a) / (r * r) <= pot + tol {
            if ((l * (l + 1.0) - a * a) / (r * r) - pot).abs() <= tol {
                zero_modes += (chir.round() as i64) * (2.0 * l + 1.0).round() as i64;
            }
            l += 1.0;
        }
        let u = spectral_sum_s2_auto(r, alpha, t, 1e-15)?.trace().re;
        graded += chir * (pot * t).exp() * vol * u;
    }
    Ok(SpectralIndex { components, zero_mode_index: zero_modes, graded_trace: graded })
}
