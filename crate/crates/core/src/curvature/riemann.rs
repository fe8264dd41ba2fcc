use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Riemann tensor R_{abcd} in an orthonormal frame, stored dense row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RiemannJson", into = "RiemannJson")]
pub struct RiemannData {
    n: usize,
    riem: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RiemannJson {
    n: usize,
    riem: Vec<f64>,
}

impl TryFrom<RiemannJson> for RiemannData {
    type Error = Error;

    fn try_from(raw: RiemannJson) -> Result<Self> {
        RiemannData::new(raw.n, raw.riem)
    }
}

impl From<RiemannData> for RiemannJson {
    fn from(r: RiemannData) -> Self {
        RiemannJson { n: r.n, riem: r.riem }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetryResiduals {
    pub antisymmetry: f64,
    pub pair_symmetry: f64,
    pub bianchi: f64,
}

impl SymmetryResiduals {
    pub fn max(&self) -> f64 {
        self.antisymmetry.max(self.pair_symmetry).max(self.bianchi)
    }
}

impl RiemannData {
    pub fn new(n: usize, riem: Vec<f64>) -> Result<Self> {
        if riem.len() != n.pow(4) {
            return Err(Error::BadParams(format!(
                "riem has {} components, expected n^4 = {}",
                riem.len(),
                n.pow(4)
            )));
        }
        if riem.iter().any(|x| !x.is_finite()) {
            return Err(Error::BadParams("riem contains non-finite values".into()));
        }
        Ok(RiemannData { n, riem })
    }

    pub fn zeros(n: usize) -> Self {
        RiemannData { n, riem: vec![0.0; n.pow(4)] }
    }

    /// Constant curvature k: R_{abcd} = k (δ_ac δ_bd − δ_ad δ_bc).
    pub fn constant_curvature(n: usize, k: f64) -> Self {
        let mut r = RiemannData::zeros(n);
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                r.set(a, b, a, b, k);
                r.set(a, b, b, a, -k);
            }
        }
        r
    }

    pub fn sphere(n: usize, radius: f64) -> Result<Self> {
        check_curved(n, radius)?;
        Ok(RiemannData::constant_curvature(n, 1.0 / (radius * radius)))
    }

    pub fn hyperbolic(n: usize, radius: f64) -> Result<Self> {
        check_curved(n, radius)?;
        Ok(RiemannData::constant_curvature(n, -1.0 / (radius * radius)))
    }

    pub fn flat(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadParams("flat factor needs n >= 1".into()));
        }
        Ok(RiemannData::zeros(n))
    }

    /// Block-diagonal direct sum of the factors.
    pub fn direct_sum(factors: &[RiemannData]) -> Self {
        let n: usize = factors.iter().map(|f| f.n).sum();
        let mut out = RiemannData::zeros(n);
        let mut off = 0;
        for f in factors {
            for a in 0..f.n {
                for b in 0..f.n {
                    for c in 0..f.n {
                        for d in 0..f.n {
                            out.set(off + a, off + b, off + c, off + d, f.get(a, b, c, d));
                        }
                    }
                }
            }
            off += f.n;
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[f64] {
        &self.riem
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.n + b) * self.n + c) * self.n + d
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.riem[self.idx(a, b, c, d)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: f64) {
        let i = self.idx(a, b, c, d);
        self.riem[i] = v;
    }

    pub fn scale(&self) -> f64 {
        self.riem.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn symmetry_residuals(&self) -> SymmetryResiduals {
        let n = self.n;
        let mut res = SymmetryResiduals { antisymmetry: 0.0, pair_symmetry: 0.0, bianchi: 0.0 };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let r = self.get(a, b, c, d);
                        res.antisymmetry = res
                            .antisymmetry
                            .max((r + self.get(b, a, c, d)).abs())
                            .max((r + self.get(a, b, d, c)).abs());
                        res.pair_symmetry = res.pair_symmetry.max((r - self.get(c, d, a, b)).abs());
                        let cyc = r + self.get(a, c, d, b) + self.get(a, d, b, c);
                        res.bianchi = res.bianchi.max(cyc.abs());
                    }
                }
            }
        }
        res
    }

    pub fn check_symmetries(&self, tol: f64) -> Result<()> {
        let res = self.symmetry_residuals();
        let bound = tol * self.scale().max(1.0);
        for (identity, residual) in [
            ("antisymmetry", res.antisymmetry),
            ("pair", res.pair_symmetry),
            ("first Bianchi", res.bianchi),
        ] {
            if residual > bound {
                return Err(Error::SymmetryViolation { identity, residual });
            }
        }
        Ok(())
    }

    /// Max residual of the algebraic integrability condition of a
    /// symmetric space, R^{fg}{}_{e[a}R^e{}_{b]cd} + R^{fg}{}_{e[c}R^e{}_{d]ab} = 0.
    pub fn integrability_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for f in 0..n {
            for g in (f + 1)..n {
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            for d in 0..n {
                                let mut s = 0.0;
                                for e in 0..n {
                                    s += self.get(f, g, e, a) * self.get(e, b, c, d)
                                        - self.get(f, g, e, b) * self.get(e, a, c, d)
                                        + self.get(f, g, e, c) * self.get(e, d, a, b)
                                        - self.get(f, g, e, d) * self.get(e, c, a, b);
                                }
                                worst = worst.max(s.abs());
                            }
                        }
                    }
                }
            }
        }
        worst
    }
}

fn check_curved(n: usize, radius: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::BadParams(format!("curved factor needs n >= 2, got {n}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::BadParams(format!("radius must be positive, got {radius}")));
    }
    Ok(())
}
