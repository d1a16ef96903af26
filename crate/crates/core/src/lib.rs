//! Hermitian curve codes from zero-dimensional schemes in the plane.
//!
//! The crate builds evaluation codes on the Hermitian curve
//! `x^{q+1} = y z^q + y^q z` over GF(q^2) and checks the dual minimum
//! distance against the geometry of the defining zero scheme.

pub mod classify;
pub mod code;
pub mod curve;
pub mod field;
pub mod matrix;
pub mod plane;
pub mod poly;
pub mod scheme;
pub mod verify;
pub mod wire;

use rand::SeedableRng;

/// Deterministic generator used for every randomized phase.
pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/curve.md")]
    mod curve {}
    #[doc = include_str!("../../../book/src/schemes.md")]
    mod schemes {}
    #[doc = include_str!("../../../book/src/codes.md")]
    mod codes {}
    #[doc = include_str!("../../../book/src/classify.md")]
    mod classify {}
    #[doc = include_str!("../../../book/src/verify.md")]
    mod verify {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
