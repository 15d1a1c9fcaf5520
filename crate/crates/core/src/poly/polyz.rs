use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{check_modulus, Monomial, PolyError, PolyP};

/// A polynomial with arbitrary-precision integer coefficients.
///
/// Terms are keyed by monomial (grevlex order); zero coefficients are never
/// stored. Arithmetic operators require both sides to use the same variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyZ {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl PolyZ {
    pub fn zero(vars: &[String]) -> Self {
        PolyZ {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial::one(vars.len()), c.into());
        p
    }

    /// The variable with index `var`.
    pub fn var(vars: &[String], var: usize) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial::var_power(vars.len(), var, 1), BigInt::one());
        p
    }

    pub fn from_terms(
        vars: &[String],
        terms: impl IntoIterator<Item = (Monomial, BigInt)>,
    ) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.nvars(), self.vars.len());
        let entry = self.terms.entry(m).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Terms in descending grevlex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_terms(&self.vars, self.terms.iter().map(|(m, a)| (*m, a * c)))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        if self.vars != other.vars {
            return Err(PolyError::RingMismatch);
        }
        let mut out = Self::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.checked_mul(m2)?, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> Result<Self, PolyError> {
        let mut result = Self::constant(&self.vars, 1);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Self, PolyError> {
        if var >= self.nvars() {
            return Err(PolyError::VariableIndex(var));
        }
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[var] -= 1;
            out.add_term(Monomial::new(&exps)?, c * BigInt::from(e));
        }
        Ok(out)
    }

    /// Coefficients reduced into `[0, p)`; vanishing terms dropped.
    pub fn reduce_mod_p(&self, p: u64) -> Result<PolyP, PolyError> {
        check_modulus(p)?;
        let modulus = BigInt::from(p);
        let terms = self.terms.iter().map(|(m, c)| {
            let r = c.mod_floor(&modulus).to_u64().expect("residue fits in u64");
            (*m, r)
        });
        PolyP::from_terms(p, self.nvars(), terms)
    }
}

fn check_same(a: &PolyZ, b: &PolyZ) {
    assert_eq!(a.vars, b.vars, "polynomials over different variables");
}

impl Add for &PolyZ {
    type Output = PolyZ;
    fn add(self, rhs: &PolyZ) -> PolyZ {
        check_same(self, rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &PolyZ {
    type Output = PolyZ;
    fn sub(self, rhs: &PolyZ) -> PolyZ {
        check_same(self, rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Mul for &PolyZ {
    type Output = PolyZ;
    fn mul(self, rhs: &PolyZ) -> PolyZ {
        self.checked_mul(rhs).expect("polynomial product")
    }
}

impl Neg for &PolyZ {
    type Output = PolyZ;
    fn neg(self) -> PolyZ {
        self.scale(&-BigInt::one())
    }
}

/// Writes terms in descending order as `c*X^a*Y^b`, joined by ` + ` / ` - `.
pub(crate) fn write_terms<'a, C: fmt::Display + 'a>(
    f: &mut fmt::Formatter<'_>,
    names: &[String],
    terms: impl Iterator<Item = (&'a Monomial, C, bool)>,
) -> fmt::Result {
    let mut first = true;
    for (m, abs_c, negative) in terms {
        let c = abs_c.to_string();
        if first {
            if negative {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if negative { " - " } else { " + " })?;
        }
        first = false;
        if m.is_one() {
            write!(f, "{}", c)?;
        } else if c == "1" {
            write!(f, "{}", m.display_with(names))?;
        } else {
            write!(f, "{}*{}", c, m.display_with(names))?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            &self.vars,
            self.terms().map(|(m, c)| (m, c.abs(), c.is_negative())),
        )
    }
}
