// SPDX-License-Identifier: Apache-2.0

//! Complete elliptic integral of the first kind via the arithmetic-geometric mean.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const MAX_AGM_STEPS: usize = 64;

/// Complete elliptic integral of the first kind, `K(k)`, in modulus form.
///
/// `K(k) = π / (2 · AGM(1, k'))` with `k' = √(1 − k²)`. The complementary
/// modulus is formed as `√((1 − k)(1 + k))` so that `k → 1` keeps its
/// precision and the logarithmic divergence stays finite.
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!(
            "elliptic modulus must satisfy 0 <= k < 1, got {k}"
        )));
    }
    let k_prime = ((1.0 - k) * (1.0 + k)).sqrt();
    Ok(FRAC_PI_2 / agm(1.0, k_prime))
}

/// `K(k') / K(k)`, the conformal-mapping ratio used by CPW formulas.
pub fn elliptic_k_ratio(k: f64) -> Result<f64> {
    let k_prime = ((1.0 - k) * (1.0 + k)).sqrt();
    Ok(elliptic_k(k_prime)? / elliptic_k(k)?)
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..MAX_AGM_STEPS {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn k_at_zero() {
        assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
    }

    #[test]
    fn k_at_inverse_sqrt_two() {
        assert_relative_eq!(
            elliptic_k(std::f64::consts::FRAC_1_SQRT_2).unwrap(),
            1.854_074_677_301_372,
            max_relative = 1e-12
        );
    }

    #[test]
    fn k_near_one_is_large_but_finite() {
        let v = elliptic_k(1.0 - 1e-12).unwrap();
        assert!(v.is_finite() && v > 10.0, "{v}");
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(elliptic_k(-0.1), Err(Error::Domain(_))));
        assert!(matches!(elliptic_k(1.0), Err(Error::Domain(_))));
        assert!(matches!(elliptic_k(f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn monotone_on_a_grid() {
        let mut prev = 0.0;
        for i in 0..1000 {
            let v = elliptic_k(i as f64 / 1000.0).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }
}
