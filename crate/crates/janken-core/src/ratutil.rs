//! Conversions from exact rationals to floating point.
//!
//! `BigRational::to_f64` in `num` divides the converted numerator by the
//! converted denominator, which turns into inf/inf = NaN once either side
//! outgrows f64 range. The DP tables in rational mode routinely hold ratios
//! of multi-thousand-bit integers, so both conversions here normalize by bit
//! length first and scale back with a power of two.

use num::bigint::BigUint;
use num::{BigRational, Signed, ToPrimitive, Zero};

/// Top 53 bits of `x` as f64, plus the shift that was applied.
fn top_bits(x: &BigUint) -> (f64, i64) {
    let bits = x.bits();
    let shift = bits.saturating_sub(53);
    let top = (x >> shift).to_f64().expect("53-bit value fits f64");
    (top, shift as i64)
}

/// Convert an exact rational to the nearest f64, without overflowing on the
/// way. Values outside f64 range come back as 0.0 or +/-inf.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let (ntop, nshift) = top_bits(r.numer().magnitude());
    let (dtop, dshift) = top_bits(r.denom().magnitude());
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let base = sign * ntop / dtop;
    let exp = nshift - dshift;
    if exp > 2048 {
        return sign * f64::INFINITY;
    }
    if exp < -2048 {
        return 0.0;
    }
    base * (2.0f64).powi(exp as i32)
}

/// Natural log of a positive rational, accurate even when numerator and
/// denominator are far outside f64 range.
pub fn rat_ln(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "rat_ln needs a positive rational, got {r}");
    let (ntop, nshift) = top_bits(r.numer().magnitude());
    let (dtop, dshift) = top_bits(r.denom().magnitude());
    ntop.ln() - dtop.ln() + (nshift - dshift) as f64 * std::f64::consts::LN_2
}
