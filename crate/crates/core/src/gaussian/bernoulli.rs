use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Bernoulli numbers B_0..B_m (B_1 = −1/2) by the standard recurrence.
pub fn bernoulli_numbers(m: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(m + 1);
    b.push(BigRational::one());
    for k in 1..=m {
        let mut sum = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            // binom = C(k + 1, j)
            sum += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-sum / BigRational::from_integer(BigInt::from(k + 1)));
    }
    b
}

/// Coefficients of log(sinh x / x) = Σ_k c_k x^{2k},
/// c_k = 2^{2k−1} B_{2k} / (k (2k)!).
#[derive(Clone, Debug, PartialEq)]
pub struct BernoulliSeries {
    coeffs: Vec<BigRational>,
}

impl BernoulliSeries {
    pub fn new(order: usize) -> Self {
        let b = bernoulli_numbers(2 * order);
        let mut coeffs = Vec::with_capacity(order);
        let mut fact = BigInt::one();
        let mut two_k = 0usize;
        for k in 1..=order {
            while two_k < 2 * k {
                two_k += 1;
                fact *= BigInt::from(two_k);
            }
            let num = BigInt::from(2).pow(2 * k as u32 - 1);
            let den = BigInt::from(k) * &fact;
            coeffs.push(&b[2 * k] * BigRational::new(num, den));
        }
        BernoulliSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Exact c_k for k ≥ 1.
    pub fn exact(&self, k: usize) -> &BigRational {
        &self.coeffs[k - 1]
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs[k - 1].to_f64().unwrap_or(f64::NAN)
    }

    /// log(sinh x / x) summed through the stored order.
    pub fn log_sinhc(&self, x: f64) -> f64 {
        (1..=self.order()).map(|k| self.coeff(k) * x.powi(2 * k as i32)).sum()
    }
}
