//! Shared helpers for the integration tests.
//!
//! Each test binary compiles this module separately and uses a different
//! slice of it, so unused-item warnings are suppressed here.
#![allow(dead_code)]

pub mod oracle;

use num::{BigInt, BigRational};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
