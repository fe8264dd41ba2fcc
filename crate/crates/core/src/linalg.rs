use nalgebra::DMatrix;
use num_complex::Complex64;

pub type RMatrix = DMatrix<f64>;
pub type CMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn commutator(a: &RMatrix, b: &RMatrix) -> RMatrix {
    a * b - b * a
}

pub fn ccommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn max_abs(m: &RMatrix) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn cmax_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.norm()))
}

pub fn ctrace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Enumerates antisymmetric index pairs a < b in lexicographic order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for a in 0..n {
        for b in (a + 1)..n {
            out.push((a, b));
        }
    }
    out
}

/// Sums in a fixed pairwise tree so the result does not depend on how the
/// inputs were produced.
pub fn pairwise_sum<T: Clone + std::ops::Add<Output = T>>(items: &[T]) -> Option<T> {
    match items.len() {
        0 => None,
        1 => Some(items[0].clone()),
        len => {
            let mid = len / 2;
            let left = pairwise_sum(&items[..mid])?;
            let right = pairwise_sum(&items[mid..])?;
            Some(left + right)
        }
    }
}
