use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::linalg::{CMatrix, RMatrix};

/// Coefficient ring for ω-polynomials. Multiplication is supplied per call
/// so scalar × matrix products need no extra trait.
pub trait Coefficient: Clone + Send + Sync {
    fn add_assign_ref(&mut self, other: &Self);
    fn scaled(&self, s: f64) -> Self;
    fn is_zero(&self) -> bool;
}

impl Coefficient for f64 {
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn scaled(&self, s: f64) -> Self {
        self * s
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Coefficient for RMatrix {
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn scaled(&self, s: f64) -> Self {
        self * s
    }
    fn is_zero(&self) -> bool {
        self.iter().all(|x| *x == 0.0)
    }
}

impl Coefficient for CMatrix {
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn scaled(&self, s: f64) -> Self {
        self * Complex64::new(s, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.iter().all(|x| x.re == 0.0 && x.im == 0.0)
    }
}

/// Sorted multiset of holonomy indices i₁ ≤ … ≤ i_m.
pub type MultiIndex = Vec<u8>;

/// Polynomial in ω^1..ω^p truncated at total degree `maxdeg`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<C> {
    terms: BTreeMap<MultiIndex, C>,
    maxdeg: usize,
}

pub type OmegaPolynomial = Polynomial<CMatrix>;

fn merge(a: &[u8], b: &[u8]) -> MultiIndex {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl<C: Coefficient> Polynomial<C> {
    pub fn zero(maxdeg: usize) -> Self {
        Polynomial { terms: BTreeMap::new(), maxdeg }
    }

    pub fn constant(c: C, maxdeg: usize) -> Self {
        let mut p = Polynomial::zero(maxdeg);
        p.add_term(vec![], c);
        p
    }

    /// Σ_i ω^i c_i.
    pub fn linear(coeffs: &[C], maxdeg: usize) -> Self {
        let mut p = Polynomial::zero(maxdeg);
        if maxdeg >= 1 {
            for (i, c) in coeffs.iter().enumerate() {
                p.add_term(vec![i as u8], c.clone());
            }
        }
        p
    }

    pub fn maxdeg(&self) -> usize {
        self.maxdeg
    }

    /// Highest degree carrying a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &[u8]) -> Option<&C> {
        self.terms.get(key)
    }

    /// Adds `c` to the monomial `key` (sorted on insertion); dropped beyond maxdeg.
    pub fn add_term(&mut self, mut key: MultiIndex, c: C) {
        if key.len() > self.maxdeg || c.is_zero() {
            return;
        }
        key.sort_unstable();
        match self.terms.get_mut(&key) {
            Some(existing) => {
                existing.add_assign_ref(&c);
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.maxdeg = self.maxdeg.min(other.maxdeg);
        out.terms.retain(|k, _| k.len() <= out.maxdeg);
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = Polynomial::zero(self.maxdeg);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.scaled(s));
        }
        out
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        let mut out = Polynomial::zero(self.maxdeg);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c));
        }
        out
    }

    /// Product with coefficient rule `f(self_coeff, other_coeff)`, keeping
    /// factor order, truncated at `maxdeg`.
    pub fn mul_with<B: Coefficient, D: Coefficient>(
        &self,
        other: &Polynomial<B>,
        maxdeg: usize,
        f: impl Fn(&C, &B) -> D,
    ) -> Polynomial<D> {
        let mut out = Polynomial::zero(maxdeg);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                if ka.len() + kb.len() > maxdeg {
                    continue;
                }
                out.add_term(merge(ka, kb), f(ca, cb));
            }
        }
        out
    }

    /// Evaluates at a point with a caller-supplied scalar action.
    pub fn evaluate<D: Coefficient>(&self, omega: &[Complex64], zero: D, f: impl Fn(&C, Complex64) -> D) -> D {
        let mut acc = zero;
        for (k, c) in &self.terms {
            let w: Complex64 = k.iter().map(|&i| omega[i as usize]).product();
            acc.add_assign_ref(&f(c, w));
        }
        acc
    }
}

impl Polynomial<CMatrix> {
    pub fn mul(&self, other: &Self, maxdeg: usize) -> Self {
        self.mul_with(other, maxdeg, |a, b| a * b)
    }

    pub fn mul_scalar_poly(&self, other: &Polynomial<f64>, maxdeg: usize) -> Self {
        self.mul_with(other, maxdeg, |a, s| a * Complex64::new(*s, 0.0))
    }
}

impl Polynomial<RMatrix> {
    pub fn mul(&self, other: &Self, maxdeg: usize) -> Self {
        self.mul_with(other, maxdeg, |a, b| a * b)
    }

    pub fn trace(&self) -> Polynomial<f64> {
        self.map(|m| m.trace())
    }
}

impl Polynomial<f64> {
    pub fn mul(&self, other: &Self, maxdeg: usize) -> Self {
        self.mul_with(other, maxdeg, |a, b| a * b)
    }
}
