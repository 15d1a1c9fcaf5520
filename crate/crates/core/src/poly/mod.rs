//! Sparse multivariate polynomials over `Z` and `F_p`, a polynomial parser,
//! Buchberger Gröbner bases and standard-monomial counting.

mod groebner;
mod monomial;
mod parse;
mod polyp;
mod polyz;
mod staircase;
pub mod zp;

use thiserror::Error;

pub use groebner::{
    buchberger, buchberger_with_order, ideal_membership, normal_form, GroebnerBasis,
};
pub use monomial::{grevlex_cmp, Monomial, MonomialOrder, MAX_VARS};
pub use parse::{parse_poly, parse_poly_list};
pub use polyp::PolyP;
pub use polyz::PolyZ;
pub use staircase::{
    count_standard_monomials, count_standard_monomials_of, is_finite_colength, pure_power_bounds,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier {name:?} at byte {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} is not below 2^62")]
    ModulusTooLarge(u64),
    #[error("monomials with {0} and {1} variables cannot be combined")]
    ArityMismatch(usize, usize),
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("exponent overflows 32 bits")]
    ExponentOverflow,
    #[error("{0} variables exceed the supported maximum")]
    TooManyVariables(usize),
    #[error("{q} is not a power of the characteristic {p}")]
    NotPowerOfCharacteristic { q: u64, p: u64 },
    #[error("ideal does not have finite colength")]
    InfiniteColength,
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("variable index {0} out of range")]
    VariableIndex(usize),
}

/// Checks that `p` is a usable prime modulus.
pub fn check_modulus(p: u64) -> Result<(), PolyError> {
    if p >= zp::MAX_MODULUS {
        return Err(PolyError::ModulusTooLarge(p));
    }
    if !zp::is_prime(p) {
        return Err(PolyError::NotPrime(p));
    }
    Ok(())
}

/// Raises every generator to the `q`-th power, `q` a power of the characteristic.
pub fn frobenius_power(gens: &[PolyP], q: u64) -> Result<Vec<PolyP>, PolyError> {
    gens.iter().map(|g| g.frobenius(q)).collect()
}
