//! Sample size for the elimination algorithm, evaluated in fixed point.
//!
//! τ = ⌈(8/ε²)·ln(I·ln I)⌉ with I = 32/(ε²δ). Logarithms are computed on
//! `BigInt` fixed-point values with 256 fractional bits, far beyond what the
//! ceiling needs.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Rational, Result};

const FRACTION_BITS: u64 = 256;
const GUARD_BITS: u64 = 32;

pub fn compute_tau(eps: &Rational, delta: &Rational) -> Result<u64> {
    if !eps.is_positive() || *eps > Rational::one() {
        return Err(Error::invalid(format!("ε must lie in (0, 1], got {eps}")));
    }
    if !delta.is_positive() || *delta >= Rational::one() {
        return Err(Error::invalid(format!("δ must lie in (0, 1), got {delta}")));
    }
    let eps_sq = eps * eps;
    let inner = Rational::from_integer(BigInt::from(32)) / (&eps_sq * delta);
    let ln_inner = fixed_to_rational(ln_fixed(&inner));
    let ln_outer = fixed_to_rational(ln_fixed(&(&inner * ln_inner)));
    let tau = Rational::from_integer(BigInt::from(8)) / eps_sq * ln_outer;
    tau.ceil()
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::invalid(format!("τ = {} does not fit in 64 bits", tau.ceil())))
}

/// Plain `f64` evaluation of the same formula, for cross-checks.
pub fn tau_f64(eps: f64, delta: f64) -> f64 {
    let inner = 32.0 / (eps * eps * delta);
    8.0 / (eps * eps) * (inner * inner.ln()).ln()
}

fn fixed_to_rational(x: BigInt) -> Rational {
    Rational::new(x, BigInt::one() << FRACTION_BITS)
}

/// `ln x · 2^FRACTION_BITS`, truncated. `x` must be positive.
fn ln_fixed(x: &Rational) -> BigInt {
    debug_assert!(x.is_positive());
    let bits = FRACTION_BITS + GUARD_BITS;
    // Find k with 1 ≤ x / 2^k < 2.
    let mut k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let scaled = |k: i64| {
        if k >= 0 {
            x / Rational::from_integer(BigInt::one() << k as u64)
        } else {
            x * Rational::from_integer(BigInt::one() << (-k) as u64)
        }
    };
    let mut y = scaled(k);
    let two = Rational::from_integer(BigInt::from(2));
    while y >= two {
        k += 1;
        y = scaled(k);
    }
    while y < Rational::one() {
        k -= 1;
        y = scaled(k);
    }
    let z = (&y - Rational::one()) / (&y + Rational::one());
    let z_fixed = (z.numer() << bits) / z.denom();
    let third = (BigInt::one() << bits) / BigInt::from(3);
    let ln2 = atanh_fixed(third, bits) * 2;
    let total = ln2 * k + atanh_fixed(z_fixed, bits) * 2;
    total >> GUARD_BITS
}

/// `atanh(z)` for fixed-point `0 ≤ z < 1/2` by its odd power series.
fn atanh_fixed(z: BigInt, bits: u64) -> BigInt {
    let z2 = (&z * &z) >> bits;
    let mut power = z;
    let mut sum = BigInt::zero();
    let mut j = 1u64;
    while !power.is_zero() {
        sum += &power / BigInt::from(j);
        power = (power * &z2) >> bits;
        j += 2;
    }
    sum
}
