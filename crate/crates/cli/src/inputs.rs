//! Parsers for flag values: integer lists, ranges, classes and matrices.

use hklab_core::lattice::{DivClass, GramLattice, IntMatrix};
use hklab_core::poly::zp;
use num_bigint::BigInt;

fn int<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.trim()
        .parse::<T>()
        .map_err(|_| format!("not an integer: '{}'", s.trim()))
}

/// `"a,b,c"`.
pub fn int_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    if s.trim().is_empty() {
        return Err("empty list".into());
    }
    s.split(',').map(int).collect()
}

/// `"a..b"` (inclusive) or a comma list.
pub fn u32_set(s: &str) -> Result<Vec<u32>, String> {
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b): (u32, u32) = (int(a)?, int(b)?);
            if a > b {
                return Err(format!("empty range {}", s));
            }
            Ok((a..=b).collect())
        }
        None => int_list(s),
    }
}

/// `"a..b"` means every prime in `[a, b]`; a list must contain primes only.
pub fn primes(s: &str) -> Result<Vec<u64>, String> {
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b): (u64, u64) = (int(a)?, int(b)?);
            if a > b {
                return Err(format!("empty range {}", s));
            }
            if b - a > 100_000_000 {
                return Err("prime range too wide".into());
            }
            Ok(zp::primes_in_range(a, b))
        }
        None => {
            let list: Vec<u64> = int_list(s)?;
            match list.iter().find(|&&p| !zp::is_prime(p)) {
                Some(p) => Err(format!("{} is not prime", p)),
                None => Ok(list),
            }
        }
    }
}

pub fn class(s: &str) -> Result<DivClass, String> {
    let coords: Vec<BigInt> = int_list(s)?;
    Ok(DivClass::new(coords))
}

/// Rows separated by `;`, entries by `,`: `"4,2;2,-4"`.
pub fn int_rows(s: &str) -> Result<Vec<Vec<i64>>, String> {
    s.split(';').map(int_list).collect()
}

pub fn gram(s: &str) -> Result<GramLattice, String> {
    GramLattice::from_ints(&int_rows(s)?).map_err(|e| e.to_string())
}

pub fn int_matrix(s: &str) -> Result<IntMatrix, String> {
    let rows = int_rows(s)?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err("matrix must be square".into());
    }
    Ok(hklab_core::lattice::int_matrix(&rows))
}

/// Comma-separated names or polynomials.
pub fn words(s: &str) -> Vec<String> {
    s.split(',')
        .map(|w| w.trim().to_string())
        .filter(|w| !w.is_empty())
        .collect()
}
