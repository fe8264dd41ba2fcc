use nalgebra::{DVector, SymmetricEigen};

use crate::curvature::RiemannData;
use crate::error::{Error, Result};
use crate::linalg::{commutator, max_abs, pairs, RMatrix};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Absolute tolerance for algebraic identities, scaled by curvature size.
    pub tol_alg: f64,
    /// Zero-eigenvalue threshold relative to the largest |eigenvalue|.
    pub tol_rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tol_alg: 1e-10, tol_rank: 1e-8 }
    }
}

/// Nonzero spectrum of the curvature operator re-expanded into two-forms.
#[derive(Clone, Debug)]
pub struct SpectralSplit {
    pub beta: Vec<f64>,
    pub forms: Vec<RMatrix>,
    pub p: usize,
    pub n0: usize,
}

/// Matrix of Riem on two-forms in the lexicographic pair basis.
pub fn curvature_operator(riem: &RiemannData, tol_alg: f64) -> Result<RMatrix> {
    riem.check_symmetries(tol_alg)?;
    let pr = pairs(riem.dim());
    let m = pr.len();
    let op = RMatrix::from_fn(m, m, |i, j| {
        let (a, b) = pr[i];
        let (c, d) = pr[j];
        riem.get(a, b, c, d)
    });
    Ok((&op + op.transpose()) * 0.5)
}

fn two_form(n: usize, v: &DVector<f64>) -> RMatrix {
    let mut e = RMatrix::zeros(n, n);
    for (k, &(a, b)) in pairs(n).iter().enumerate() {
        e[(a, b)] = v[k];
        e[(b, a)] = -v[k];
    }
    e
}

/// Orthonormal basis of the column space of `proj` (a projector), picking at
/// each step the coordinate with the largest remaining weight.
fn pivoted_basis(mut proj: RMatrix, count: usize) -> Vec<DVector<f64>> {
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let diag = proj.diagonal();
        let top = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let j = diag.iter().position(|&x| x >= top - 1e-12).unwrap_or(0);
        let v = proj.column(j).into_owned() / proj[(j, j)].sqrt();
        proj -= &v * v.transpose();
        out.push(v);
    }
    out
}

pub fn spectral_split(op: &RMatrix, n: usize, tol_rank: f64) -> Result<SpectralSplit> {
    let m = op.nrows();
    if m != n * n.saturating_sub(1) / 2 || op.ncols() != m {
        return Err(Error::BadParams(format!("operator size {m} does not match n = {n}")));
    }
    if m == 0 {
        return Ok(SpectralSplit { beta: vec![], forms: vec![], p: 0, n0: n });
    }
    let eig = SymmetricEigen::new(op.clone());
    let scale = eig.eigenvalues.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let threshold = tol_rank * scale;

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let mut kept = Vec::new();
    for &i in &order {
        let lam = eig.eigenvalues[i];
        if scale == 0.0 || lam.abs() <= threshold {
            continue;
        }
        if lam.abs() <= 2.0 * threshold {
            return Err(Error::DegenerateSplit { value: lam, threshold });
        }
        kept.push(i);
    }

    // Cluster (numerically) degenerate eigenvalues and fix a reproducible basis.
    let mut beta = Vec::new();
    let mut forms = Vec::new();
    let mut start = 0;
    while start < kept.len() {
        let mut end = start + 1;
        while end < kept.len()
            && (eig.eigenvalues[kept[end - 1]] - eig.eigenvalues[kept[end]]).abs() <= 1e-9 * scale
        {
            end += 1;
        }
        let mut proj = RMatrix::zeros(m, m);
        for &i in &kept[start..end] {
            let v = eig.eigenvectors.column(i);
            proj += v * v.transpose();
        }
        for v in pivoted_basis(proj, end - start) {
            beta.push((v.transpose() * op * &v)[(0, 0)]);
            forms.push(two_form(n, &v));
        }
        start = end;
    }

    let (h, _) = projectors(n, &forms);
    let ns = h.trace().round() as usize;
    Ok(SpectralSplit { p: beta.len(), beta, forms, n0: n - ns })
}

/// Projectors onto the semisimple (h) and flat (q) subspaces.
pub fn projectors(n: usize, forms: &[RMatrix]) -> (RMatrix, RMatrix) {
    let mut s = RMatrix::zeros(n, n);
    for e in forms {
        s += e * e.transpose();
    }
    let eig = SymmetricEigen::new(s);
    let top = eig.eigenvalues.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let mut h = RMatrix::zeros(n, n);
    for k in 0..n {
        if top > 0.0 && eig.eigenvalues[k] > 1e-8 * top {
            let v = eig.eigenvectors.column(k);
            h += v * v.transpose();
        }
    }
    let q = RMatrix::identity(n, n) - &h;
    (h, q)
}

/// D_i = −λ_i E^i (row a, column b holds D^a_{ib}).
pub fn build_generators(beta: &[f64], forms: &[RMatrix]) -> Vec<RMatrix> {
    beta.iter().zip(forms).map(|(&lam, e)| e * (-lam)).collect()
}

/// Structure constants F^j_{ik} stored at `[(j * p + i) * p + k]`.
pub fn holonomy_structure_constants(d: &[RMatrix], tol_alg: f64) -> Result<Vec<f64>> {
    let p = d.len();
    let mut f = vec![0.0; p * p * p];
    if p == 0 {
        return Ok(f);
    }
    let gram = RMatrix::from_fn(p, p, |j, l| d[j].dot(&d[l]));
    let chol = gram
        .clone()
        .cholesky()
        .ok_or_else(|| Error::BadParams("generators are linearly dependent".into()))?;
    let scale = d.iter().map(max_abs).fold(1.0f64, f64::max);
    let mut worst: f64 = 0.0;
    for i in 0..p {
        for k in 0..p {
            let com = commutator(&d[i], &d[k]);
            let rhs = DVector::from_fn(p, |j, _| d[j].dot(&com));
            let sol = chol.solve(&rhs);
            let mut resid = com.clone();
            for j in 0..p {
                f[(j * p + i) * p + k] = sol[j];
                resid -= &d[j] * sol[j];
            }
            worst = worst.max(max_abs(&resid));
        }
    }
    if worst > tol_alg * scale * scale {
        return Err(Error::NotClosed { residual: worst });
    }
    Ok(f)
}

/// The curvature algebra of a symmetric space and its invariants.
#[derive(Clone, Debug)]
pub struct CurvatureAlgebra {
    riem: RiemannData,
    n: usize,
    n0: usize,
    p: usize,
    beta: Vec<f64>,
    forms: Vec<RMatrix>,
    generators: Vec<RMatrix>,
    structure: Vec<f64>,
    adjoint: Vec<RMatrix>,
    c_matrices: Vec<RMatrix>,
    gamma: Vec<f64>,
    rho: RMatrix,
    h: RMatrix,
    q: RMatrix,
    scalar_curvature: f64,
    holonomy_curvature: f64,
    group_curvature: f64,
}

impl CurvatureAlgebra {
    pub fn from_riemann(riem: &RiemannData, tol: Tolerances) -> Result<Self> {
        let op = curvature_operator(riem, tol.tol_alg)?;
        let split = spectral_split(&op, riem.dim(), tol.tol_rank)?;
        let d = build_generators(&split.beta, &split.forms);
        let f = holonomy_structure_constants(&d, tol.tol_alg)?;
        Ok(assemble(riem.clone(), split, d, f))
    }

    pub fn riemann(&self) -> &RiemannData {
        &self.riem
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn n0(&self) -> usize {
        self.n0
    }
    pub fn ns(&self) -> usize {
        self.n - self.n0
    }
    pub fn p(&self) -> usize {
        self.p
    }
    /// Size of the full curvature algebra, n + p.
    pub fn big_n(&self) -> usize {
        self.n + self.p
    }
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }
    pub fn forms(&self) -> &[RMatrix] {
        &self.forms
    }
    pub fn generators(&self) -> &[RMatrix] {
        &self.generators
    }
    /// F^j_{ik}.
    pub fn f(&self, j: usize, i: usize, k: usize) -> f64 {
        self.structure[(j * self.p + i) * self.p + k]
    }
    pub fn structure_constants(&self) -> &[f64] {
        &self.structure
    }
    /// (F_i)^j_k = F^j_{ik}.
    pub fn adjoint(&self) -> &[RMatrix] {
        &self.adjoint
    }
    /// (C_B)^A_C = C^A_{BC}; frame indices first, then holonomy indices.
    pub fn c_matrices(&self) -> &[RMatrix] {
        &self.c_matrices
    }
    pub fn gamma(&self) -> RMatrix {
        RMatrix::from_diagonal(&DVector::from_vec(self.gamma.clone()))
    }
    pub fn rho(&self) -> &RMatrix {
        &self.rho
    }
    pub fn semisimple_projector(&self) -> &RMatrix {
        &self.h
    }
    pub fn flat_projector(&self) -> &RMatrix {
        &self.q
    }
    pub fn scalar_curvature(&self) -> f64 {
        self.scalar_curvature
    }
    pub fn holonomy_curvature(&self) -> f64 {
        self.holonomy_curvature
    }
    pub fn group_curvature(&self) -> f64 {
        self.group_curvature
    }
    /// max |λ_i|, the natural curvature scale (1 for flat space).
    pub fn curvature_scale(&self) -> f64 {
        self.beta.iter().fold(1.0f64, |m, x| m.max(x.abs()))
    }
    pub fn is_compact(&self) -> bool {
        self.beta.iter().all(|&x| x > 0.0)
    }

    /// Flips the sign of the two-form E^i (and D_i), re-deriving everything else.
    pub fn with_flipped_form(&self, i: usize) -> Self {
        let mut forms = self.forms.clone();
        forms[i] = -&forms[i];
        let split = SpectralSplit { beta: self.beta.clone(), forms, p: self.p, n0: self.n0 };
        let d = build_generators(&split.beta, &split.forms);
        let f = holonomy_structure_constants(&d, f64::INFINITY).expect("closure is sign independent");
        assemble(self.riem.clone(), split, d, f)
    }
}

pub fn assemble(riem: RiemannData, split: SpectralSplit, d: Vec<RMatrix>, f: Vec<f64>) -> CurvatureAlgebra {
    let n = riem.dim();
    let p = split.p;
    let big = n + p;
    let fidx = |j: usize, i: usize, k: usize| f[(j * p + i) * p + k];
    let adjoint: Vec<RMatrix> = (0..p).map(|i| RMatrix::from_fn(p, p, |j, k| fidx(j, i, k))).collect();

    let mut c_matrices = Vec::with_capacity(big);
    for a in 0..n {
        let mut m = RMatrix::zeros(big, big);
        for i in 0..p {
            for b in 0..n {
                m[(n + i, b)] = split.forms[i][(a, b)];
                m[(b, n + i)] = -d[i][(b, a)];
            }
        }
        c_matrices.push(m);
    }
    for i in 0..p {
        let mut m = RMatrix::zeros(big, big);
        m.view_mut((0, 0), (n, n)).copy_from(&d[i]);
        m.view_mut((n, n), (p, p)).copy_from(&adjoint[i]);
        c_matrices.push(m);
    }
    let mut gamma = vec![1.0; n];
    gamma.extend_from_slice(&split.beta);

    let rho = RMatrix::from_fn(p, p, |i, k| -(&d[i] * &d[k]).trace());
    let scalar_curvature = -(0..p).map(|i| (&d[i] * &d[i]).trace() / split.beta[i]).sum::<f64>();
    let holonomy_curvature =
        -0.25 * (0..p).map(|i| (&adjoint[i] * &adjoint[i]).trace() / split.beta[i]).sum::<f64>();
    let group_curvature = -0.25
        * (0..big).map(|a| (&c_matrices[a] * &c_matrices[a]).trace() / gamma[a]).sum::<f64>();
    let (h, q) = projectors(n, &split.forms);

    CurvatureAlgebra {
        riem,
        n,
        n0: split.n0,
        p,
        beta: split.beta,
        forms: split.forms,
        generators: d,
        structure: f,
        adjoint,
        c_matrices,
        gamma,
        rho,
        h,
        q,
        scalar_curvature,
        holonomy_curvature,
        group_curvature,
    }
}
