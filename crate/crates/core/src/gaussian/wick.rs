use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::polynomial::{Coefficient, Polynomial};
use crate::linalg::{pairwise_sum, RMatrix};

/// Gaussian measure ∝ exp(−¼⟨ω, βω⟩); pair moments are ⟨ω^iω^j⟩ = 2β^{ij}.
#[derive(Clone, Debug)]
pub struct GaussianMeasure {
    beta_inv: RMatrix,
}

impl GaussianMeasure {
    pub fn new(beta: &RMatrix) -> Result<Self> {
        let beta_inv = beta
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::BadParams("β is singular".into()))?;
        Ok(GaussianMeasure { beta_inv })
    }

    pub fn diagonal(beta: &[f64]) -> Result<Self> {
        if beta.contains(&0.0) {
            return Err(Error::BadParams("β has a zero entry".into()));
        }
        let p = beta.len();
        Ok(GaussianMeasure { beta_inv: RMatrix::from_fn(p, p, |i, j| if i == j { 1.0 / beta[i] } else { 0.0 }) })
    }

    pub fn dim(&self) -> usize {
        self.beta_inv.nrows()
    }

    /// Sum over perfect pairings of ∏ 2β^{i_a i_b}; zero entries prune.
    pub fn moment(&self, indices: &[u8]) -> f64 {
        if indices.len() % 2 == 1 {
            return 0.0;
        }
        let mut rest: Vec<u8> = indices.to_vec();
        self.pairings(&mut rest)
    }

    fn pairings(&self, rest: &mut Vec<u8>) -> f64 {
        if rest.is_empty() {
            return 1.0;
        }
        let first = rest.remove(0);
        let mut total = 0.0;
        for k in 0..rest.len() {
            let w = 2.0 * self.beta_inv[(first as usize, rest[k] as usize)];
            if w == 0.0 {
                continue;
            }
            let partner = rest.remove(k);
            total += w * self.pairings(rest);
            rest.insert(k, partner);
        }
        rest.insert(0, first);
        total
    }

    /// ⟨P(ω)⟩: each monomial replaced by its moment, summed in a fixed tree.
    pub fn average<C: Coefficient + std::ops::Add<Output = C>>(&self, poly: &Polynomial<C>, zero: C) -> C {
        let terms: Vec<(&Vec<u8>, &C)> = poly.terms().filter(|(k, _)| k.len() % 2 == 0).collect();
        let mut cache: HashMap<Vec<u8>, f64> = HashMap::new();
        let moments: Vec<f64> = terms
            .iter()
            .map(|(k, _)| *cache.entry((*k).clone()).or_insert_with(|| self.moment(k)))
            .collect();
        let weighted: Vec<C> = terms
            .par_iter()
            .zip(moments.par_iter())
            .map(|((_, c), m)| c.scaled(*m))
            .collect();
        pairwise_sum(&weighted).unwrap_or(zero)
    }
}

pub fn gaussian_moment(beta: &RMatrix, indices: &[u8]) -> Result<f64> {
    Ok(GaussianMeasure::new(beta)?.moment(indices))
}
