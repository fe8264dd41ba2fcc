use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::curvature::RiemannData;
use crate::error::{Error, Result};

/// One factor of a product of constant-curvature spaces.
#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    Sphere { n: usize, r: f64 },
    Hyperbolic { n: usize, a: f64 },
    Flat { n: usize },
}

impl Factor {
    pub fn dim(&self) -> usize {
        match *self {
            Factor::Sphere { n, .. } | Factor::Hyperbolic { n, .. } | Factor::Flat { n } => n,
        }
    }

    pub fn riemann(&self) -> Result<RiemannData> {
        match *self {
            Factor::Sphere { n, r } => RiemannData::sphere(n, r),
            Factor::Hyperbolic { n, a } => RiemannData::hyperbolic(n, a),
            Factor::Flat { n } => RiemannData::flat(n),
        }
    }

    pub fn volume(&self) -> Option<f64> {
        match *self {
            Factor::Sphere { n, r } => Some(sphere_volume(n) * r.powi(n as i32)),
            _ => None,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Sphere { n, r } => write!(f, "S{n}:r={r}"),
            Factor::Hyperbolic { n, a } => write!(f, "H{n}:a={a}"),
            Factor::Flat { n } => write!(f, "flat:n={n}"),
        }
    }
}

/// Volume of the unit n-sphere, 2π^{(n+1)/2}/Γ((n+1)/2).
pub fn sphere_volume(n: usize) -> f64 {
    // Γ((n+1)/2) by the half-integer recursion.
    let mut gamma = if n % 2 == 1 { 1.0 } else { PI.sqrt() };
    let mut x = if n % 2 == 1 { 1.0 } else { 0.5 };
    let target = (n as f64 + 1.0) / 2.0;
    while x < target - 0.25 {
        gamma *= x;
        x += 1.0;
    }
    2.0 * PI.powf(target) / gamma
}

/// Product of catalog factors, assembled blockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Space {
    pub factors: Vec<Factor>,
}

impl Space {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::BadParams("space needs at least one factor".into()));
        }
        let space = Space { factors };
        space.riemann()?;
        Ok(space)
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(Factor::dim).sum()
    }

    pub fn riemann(&self) -> Result<RiemannData> {
        let blocks = self.factors.iter().map(Factor::riemann).collect::<Result<Vec<_>>>()?;
        Ok(RiemannData::direct_sum(&blocks))
    }

    /// Riemannian volume when every factor is a sphere.
    pub fn volume(&self) -> Option<f64> {
        self.factors.iter().map(Factor::volume).product()
    }

    /// `Some((compact, radius))` for S² and H².
    pub fn rank_one_surface(&self) -> Option<(bool, f64)> {
        match self.factors.as_slice() {
            [Factor::Sphere { n: 2, r }] => Some((true, *r)),
            [Factor::Hyperbolic { n: 2, a }] => Some((false, *a)),
            _ => None,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

impl FromStr for Space {
    type Err = Error;

    /// Grammar: factors joined by `*`, each `name:key=value[,key=value]`.
    /// Names are `S<n>` (key r), `H<n>` (key a) and `flat` (key n).
    fn from_str(spec: &str) -> Result<Self> {
        let factors = spec.split('*').map(parse_factor).collect::<Result<Vec<_>>>()?;
        Space::new(factors)
    }
}

fn parse_factor(text: &str) -> Result<Factor> {
    let text = text.trim();
    let bad = |msg: &str| Error::Parse(format!("factor '{text}': {msg}"));
    let (name, params) = text.split_once(':').unwrap_or((text, ""));
    let mut kv = Vec::new();
    for item in params.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        let v: f64 = v.trim().parse().map_err(|_| bad(&format!("bad number '{}'", v.trim())))?;
        kv.push((k.trim().to_string(), v));
    }
    let take = |key: &str| -> Result<f64> {
        match kv.as_slice() {
            [(k, v)] if k == key => Ok(*v),
            [] => Err(bad(&format!("missing {key}="))),
            _ => Err(bad(&format!("expected exactly one parameter {key}="))),
        }
    };
    let name = name.trim();
    if name.eq_ignore_ascii_case("flat") {
        let n = take("n")?;
        if n < 1.0 || n.fract() != 0.0 {
            return Err(bad("n must be a positive integer"));
        }
        return Ok(Factor::Flat { n: n as usize });
    }
    let (kind, digits) = name.split_at(name.len().min(1));
    let n: usize = digits.parse().map_err(|_| bad("unknown factor name"))?;
    match kind {
        "S" => Ok(Factor::Sphere { n, r: take("r")? }),
        "H" => Ok(Factor::Hyperbolic { n, a: take("a")? }),
        _ => Err(bad("unknown factor name")),
    }
}
