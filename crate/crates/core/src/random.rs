//! Reproducible pseudo-random inputs for the trial-based checks.
//!
//! Trial `t` under seed `s` always draws from the same stream, whatever the
//! execution policy, so reports do not depend on scheduling.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::poly::{ExponentVector, LaurentPoly, Scalar};

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Nonzero rational with numerator in [-5, 5] and denominator in [1, 3].
pub fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    loop {
        let num: i64 = rng.gen_range(-5..=5);
        if num != 0 {
            let den: i64 = rng.gen_range(1..=3);
            return BigRational::new(BigInt::from(num), BigInt::from(den));
        }
    }
}

/// Draws polynomials whose terms have total absolute degree at most
/// `degree_bound`; variables flagged in `negative` may take negative
/// exponents.
#[derive(Debug, Clone)]
pub struct PolySampler {
    pub negative: Vec<bool>,
    pub degree_bound: u32,
    pub max_terms: usize,
}

impl PolySampler {
    pub fn polynomial(nvars: usize, degree_bound: u32) -> Self {
        PolySampler {
            negative: vec![false; nvars],
            degree_bound,
            max_terms: 4,
        }
    }

    pub fn nvars(&self) -> usize {
        self.negative.len()
    }

    pub fn exponent<R: Rng>(&self, rng: &mut R) -> ExponentVector {
        let n = self.nvars();
        let mut e = vec![0i32; n];
        if n == 0 {
            return ExponentVector::new(e);
        }
        let total = rng.gen_range(0..=self.degree_bound);
        for _ in 0..total {
            e[rng.gen_range(0..n)] += 1;
        }
        for (k, neg) in e.iter_mut().zip(&self.negative) {
            if *neg && rng.gen_bool(0.5) {
                *k = -*k;
            }
        }
        ExponentVector::new(e)
    }

    /// Homogeneous exponent of the given nonnegative degree.
    pub fn exponent_of_degree<R: Rng>(&self, rng: &mut R, degree: u32) -> ExponentVector {
        let n = self.nvars();
        let mut e = vec![0i32; n];
        for _ in 0..degree {
            e[rng.gen_range(0..n)] += 1;
        }
        ExponentVector::new(e)
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> LaurentPoly {
        let count = rng.gen_range(1..=self.max_terms.max(1));
        let terms: Vec<_> = (0..count)
            .map(|_| (self.exponent(rng), Scalar::from(small_rational(rng))))
            .collect();
        LaurentPoly::from_terms(self.nvars(), terms).expect("sampler arity is consistent")
    }

    /// Homogeneous polynomial of the given degree (possibly zero after
    /// cancellation, in which case a single monomial is returned).
    pub fn sample_homogeneous<R: Rng>(&self, rng: &mut R, degree: u32) -> LaurentPoly {
        let count = rng.gen_range(1..=self.max_terms.max(1));
        let terms: Vec<_> = (0..count)
            .map(|_| {
                (
                    self.exponent_of_degree(rng, degree),
                    Scalar::from(small_rational(rng)),
                )
            })
            .collect();
        let p = LaurentPoly::from_terms(self.nvars(), terms).expect("sampler arity is consistent");
        if p.is_zero() {
            LaurentPoly::from_exponent(self.exponent_of_degree(rng, degree))
        } else {
            p
        }
    }
}
