use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};

fn pauli() -> [CMatrix; 3] {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        CMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        CMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
    ]
}

/// Euclidean gamma matrices γ_a γ_b + γ_b γ_a = 2δ_ab for even n ≤ 8.
///
/// n = 2: (σx, σy). Each step to n + 2 maps γ_a → γ_a ⊗ σz and appends
/// 1 ⊗ σx, 1 ⊗ σy.
pub fn clifford_generators(n: usize) -> Result<Vec<CMatrix>> {
    if n == 0 || n % 2 == 1 || n > 8 {
        return Err(Error::Unsupported(format!("Clifford algebra for n = {n} (need even 2 <= n <= 8)")));
    }
    let [sx, sy, sz] = pauli();
    let mut gammas = vec![sx.clone(), sy.clone()];
    while gammas.len() < n {
        let dim = gammas[0].nrows();
        let id = CMatrix::identity(dim, dim);
        let mut next: Vec<CMatrix> = gammas.iter().map(|g| g.kronecker(&sz)).collect();
        next.push(id.kronecker(&sx));
        next.push(id.kronecker(&sy));
        gammas = next;
    }
    Ok(gammas)
}

/// γ_{[a}γ_{b]} = ½(γ_aγ_b − γ_bγ_a).
pub fn gamma_antisym(gammas: &[CMatrix], a: usize, b: usize) -> CMatrix {
    (&gammas[a] * &gammas[b] - &gammas[b] * &gammas[a]) * c(0.5, 0.0)
}

/// Spinor generators Σ_ab = ½γ_{[a}γ_{b]}, laid out as `out[a * n + b]`.
pub fn spinor_generators(n: usize) -> Result<Vec<CMatrix>> {
    let gammas = clifford_generators(n)?;
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            out.push(gamma_antisym(&gammas, a, b) * c(0.5, 0.0));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cmax_abs;

    #[test]
    fn anticommutators_for_all_even_dims() {
        for n in [2, 4, 6, 8] {
            let g = clifford_generators(n).unwrap();
            let dim = 1 << (n / 2);
            for a in 0..n {
                for b in 0..n {
                    let mut target = CMatrix::zeros(dim, dim);
                    if a == b {
                        target = CMatrix::identity(dim, dim) * c(2.0, 0.0);
                    }
                    let ac = &g[a] * &g[b] + &g[b] * &g[a];
                    assert_eq!(cmax_abs(&(ac - target)), 0.0, "n={n} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn odd_dimension_rejected() {
        assert!(matches!(clifford_generators(3), Err(Error::Unsupported(_))));
    }
}
