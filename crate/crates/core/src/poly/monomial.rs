use std::cmp::Ordering;
use std::fmt;

use super::PolyError;

/// Largest number of ring variables a [`Monomial`] can hold.
pub const MAX_VARS: usize = 12;

/// A power product `x_1^e_1 * ... * x_n^e_n` with its total degree cached.
///
/// Exponents live inline so monomials are `Copy`; unused slots stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u32; MAX_VARS],
    nvars: u8,
    degree: u64,
}

impl Monomial {
    pub fn new(exponents: &[u32]) -> Result<Self, PolyError> {
        if exponents.len() > MAX_VARS {
            return Err(PolyError::TooManyVariables(exponents.len()));
        }
        let mut exps = [0u32; MAX_VARS];
        exps[..exponents.len()].copy_from_slice(exponents);
        Ok(Monomial {
            exps,
            nvars: exponents.len() as u8,
            degree: exponents.iter().map(|&e| e as u64).sum(),
        })
    }

    /// The constant monomial `1` in `nvars` variables.
    pub fn one(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        Monomial {
            exps: [0; MAX_VARS],
            nvars: nvars as u8,
            degree: 0,
        }
    }

    /// The variable with index `var`, to the power `exp`.
    pub fn var_power(nvars: usize, var: usize, exp: u32) -> Self {
        let mut m = Self::one(nvars);
        m.exps[var] = exp;
        m.degree = exp as u64;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps[..self.nvars as usize]
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exps[var]
    }

    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// `Some(i)` when this is a pure power `x_i^e` with `e >= 1`.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.exponents().iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// True when `self` divides `other`.
    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree
            && self.exps[..self.nvars as usize]
                .iter()
                .zip(&other.exps[..self.nvars as usize])
                .all(|(a, b)| a <= b)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial, PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::ArityMismatch(self.nvars(), other.nvars()));
        }
        let mut out = *self;
        for i in 0..self.nvars as usize {
            out.exps[i] = self.exps[i]
                .checked_add(other.exps[i])
                .ok_or(PolyError::ExponentOverflow)?;
        }
        out.degree = self.degree + other.degree;
        Ok(out)
    }

    /// Product for exponents already known to fit; panics on 32-bit overflow.
    #[inline]
    pub(crate) fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for i in 0..self.nvars as usize {
            out.exps[i] = self.exps[i]
                .checked_add(other.exps[i])
                .expect("exponent overflow");
        }
        out.degree = self.degree + other.degree;
        out
    }

    /// `self / other`, assuming `other` divides `self`.
    #[inline]
    pub(crate) fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        let mut out = *self;
        for i in 0..self.nvars as usize {
            out.exps[i] -= other.exps[i];
        }
        out.degree = self.degree - other.degree;
        out
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        let mut degree = 0u64;
        for i in 0..self.nvars as usize {
            out.exps[i] = self.exps[i].max(other.exps[i]);
            degree += out.exps[i] as u64;
        }
        out.degree = degree;
        out
    }

    /// True when no variable occurs in both monomials.
    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exponents()
            .iter()
            .zip(other.exponents())
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Every exponent multiplied by `q`.
    pub fn scale(&self, q: u64) -> Result<Monomial, PolyError> {
        let mut out = *self;
        for i in 0..self.nvars as usize {
            let e = (self.exps[i] as u64)
                .checked_mul(q)
                .filter(|&e| e <= u32::MAX as u64)
                .ok_or(PolyError::ExponentOverflow)?;
            out.exps[i] = e as u32;
        }
        out.degree = out.exponents().iter().map(|&e| e as u64).sum();
        Ok(out)
    }

    /// Appends `extra` variables with exponent zero.
    pub fn extend(&self, extra: usize) -> Result<Monomial, PolyError> {
        let n = self.nvars() + extra;
        if n > MAX_VARS {
            return Err(PolyError::TooManyVariables(n));
        }
        let mut out = *self;
        out.nvars = n as u8;
        Ok(out)
    }

    #[inline]
    fn cmp_grevlex_unchecked(&self, other: &Monomial) -> Ordering {
        match self.degree.cmp(&other.degree) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Equal degree: the monomial whose last nonzero entry of (self - other)
        // is negative is larger.
        for i in (0..self.nvars as usize).rev() {
            match self.exps[i].cmp(&other.exps[i]) {
                Ordering::Equal => continue,
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }

    #[inline]
    fn cmp_lex_unchecked(&self, other: &Monomial) -> Ordering {
        self.exponents().cmp(other.exponents())
    }

    /// Formats with the given variable names, e.g. `X^2*Y`.
    pub fn display_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = names.get(i).cloned().unwrap_or_else(|| format!("x{}", i));
                if e == 1 {
                    name
                } else {
                    format!("{}^{}", name, e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Graded reverse lexicographic comparison.
pub fn grevlex_cmp(m1: &Monomial, m2: &Monomial) -> Result<Ordering, PolyError> {
    if m1.nvars != m2.nvars {
        return Err(PolyError::ArityMismatch(m1.nvars(), m2.nvars()));
    }
    Ok(m1.cmp_grevlex_unchecked(m2))
}

impl Ord for Monomial {
    /// Grevlex; monomials of different arity order by arity first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.nvars
            .cmp(&other.nvars)
            .then_with(|| self.cmp_grevlex_unchecked(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exponents())
    }
}

/// A monomial order usable by the Gröbner engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    #[default]
    Grevlex,
    Lex,
}

impl MonomialOrder {
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Grevlex => a.cmp_grevlex_unchecked(b),
            MonomialOrder::Lex => a.cmp_lex_unchecked(b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e).unwrap()
    }

    #[test]
    fn grevlex_examples() {
        // XY vs ZW: difference (1,1,-1,-1), last nonzero entry negative.
        assert_eq!(
            grevlex_cmp(&m(&[1, 1, 0, 0]), &m(&[0, 0, 1, 1])).unwrap(),
            Ordering::Greater
        );
        // X^2 vs XY: difference (1,-1).
        assert_eq!(
            grevlex_cmp(&m(&[2, 0]), &m(&[1, 1])).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            grevlex_cmp(&m(&[3, 1]), &m(&[3, 1])).unwrap(),
            Ordering::Equal
        );
        // Degree dominates.
        assert_eq!(
            grevlex_cmp(&m(&[0, 0, 3]), &m(&[1, 1, 0])).unwrap(),
            Ordering::Greater
        );
        // Grevlex and lex differ on X*Z^2 vs Y^3 in three variables... and on XZ vs Y^2.
        let (xz, yy) = (m(&[1, 0, 1]), m(&[0, 2, 0]));
        assert_eq!(MonomialOrder::Grevlex.cmp(&xz, &yy), Ordering::Less);
        assert_eq!(MonomialOrder::Lex.cmp(&xz, &yy), Ordering::Greater);
    }

    #[test]
    fn arity_mismatch() {
        assert_eq!(
            grevlex_cmp(&m(&[1]), &m(&[1, 0])),
            Err(PolyError::ArityMismatch(1, 2))
        );
    }

    #[test]
    fn divisibility_and_lcm() {
        let a = m(&[2, 1, 0]);
        let b = m(&[1, 3, 2]);
        assert!(!a.divides(&b));
        assert!(m(&[1, 1, 0]).divides(&b));
        assert_eq!(a.lcm(&b), m(&[2, 3, 2]));
        assert_eq!(a.lcm(&b).degree(), 7);
        assert!(m(&[2, 0, 0]).is_coprime(&m(&[0, 1, 1])));
        assert_eq!(b.div(&m(&[1, 1, 0])), m(&[0, 2, 2]));
    }

    #[test]
    fn overflow_is_checked() {
        let big = m(&[u32::MAX, 0]);
        assert_eq!(
            big.checked_mul(&m(&[1, 0])),
            Err(PolyError::ExponentOverflow)
        );
        assert_eq!(
            m(&[1 << 20, 0]).scale(1 << 20),
            Err(PolyError::ExponentOverflow)
        );
        assert_eq!(m(&[3, 1]).scale(4).unwrap(), m(&[12, 4]));
        assert_eq!(
            Monomial::new(&[0; 13]),
            Err(PolyError::TooManyVariables(13))
        );
    }
}
