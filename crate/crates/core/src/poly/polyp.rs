use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use super::polyz::write_terms;
use super::zp;
use super::{check_modulus, Monomial, MonomialOrder, PolyError};

pub(crate) type Term = (Monomial, u64);

/// A polynomial over `F_p`, terms sorted by descending grevlex order.
///
/// Coefficients are residues in `[1, p)`; zero terms are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyP {
    p: u64,
    nvars: usize,
    terms: Vec<Term>,
}

impl PolyP {
    pub fn zero(p: u64, nvars: usize) -> Self {
        PolyP {
            p,
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(p: u64, nvars: usize, c: u64) -> Self {
        Self::monomial(p, Monomial::one(nvars), c)
    }

    pub fn monomial(p: u64, m: Monomial, c: u64) -> Self {
        let c = c % p;
        let terms = if c == 0 { Vec::new() } else { vec![(m, c)] };
        PolyP {
            p,
            nvars: m.nvars(),
            terms,
        }
    }

    /// Collects terms, summing duplicates and reducing coefficients mod `p`.
    pub fn from_terms(
        p: u64,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, u64)>,
    ) -> Result<Self, PolyError> {
        check_modulus(p)?;
        let mut acc: HashMap<Monomial, u64> = HashMap::new();
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(PolyError::ArityMismatch(nvars, m.nvars()));
            }
            let e = acc.entry(m).or_insert(0);
            *e = zp::add(*e, c % p, p);
        }
        Ok(Self::from_unsorted(p, nvars, acc.into_iter().collect()))
    }

    pub(crate) fn from_unsorted(p: u64, nvars: usize, mut terms: Vec<Term>) -> Self {
        terms.retain(|t| t.1 != 0);
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        PolyP { p, nvars, terms }
    }

    pub(crate) fn from_sorted(p: u64, nvars: usize, terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        PolyP { p, nvars, terms }
    }

    /// Re-sorts terms under `order` (descending).
    pub(crate) fn terms_in_order(&self, order: MonomialOrder) -> Vec<Term> {
        let mut t = self.terms.clone();
        if order != MonomialOrder::Grevlex {
            t.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
        }
        t
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in descending grevlex order.
    pub fn terms(&self) -> &[(Monomial, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for nonzero constants.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    fn same_ring(&self, other: &Self) -> Result<(), PolyError> {
        if self.p != other.p || self.nvars != other.nvars {
            Err(PolyError::RingMismatch)
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_ring(other)?;
        let one = Monomial::one(self.nvars);
        let terms = sub_scaled(
            &self.terms,
            zp::neg(1 % self.p, self.p),
            &one,
            &other.terms,
            self.p,
            MonomialOrder::Grevlex,
        );
        Ok(Self::from_sorted(self.p, self.nvars, terms))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_ring(other)?;
        let one = Monomial::one(self.nvars);
        let terms = sub_scaled(
            &self.terms,
            1,
            &one,
            &other.terms,
            self.p,
            MonomialOrder::Grevlex,
        );
        Ok(Self::from_sorted(self.p, self.nvars, terms))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_ring(other)?;
        let mut acc: HashMap<Monomial, u64> = HashMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let e = acc.entry(m1.checked_mul(m2)?).or_insert(0);
                *e = zp::add(*e, zp::mul(*c1, *c2, self.p), self.p);
            }
        }
        Ok(Self::from_unsorted(
            self.p,
            self.nvars,
            acc.into_iter().collect(),
        ))
    }

    pub fn neg(&self) -> Self {
        self.scale(self.p - 1)
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.p;
        if c == 0 {
            return Self::zero(self.p, self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (*m, zp::mul(*a, c, self.p)))
            .collect();
        Self::from_sorted(self.p, self.nvars, terms)
    }

    /// Multiplies by `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: u64) -> Result<Self, PolyError> {
        let c = c % self.p;
        if c == 0 {
            return Ok(Self::zero(self.p, self.nvars));
        }
        let terms = self
            .terms
            .iter()
            .map(|(t, a)| Ok((t.checked_mul(m)?, zp::mul(*a, c, self.p))))
            .collect::<Result<Vec<_>, PolyError>>()?;
        Ok(Self::from_sorted(self.p, self.nvars, terms))
    }

    /// `self^exp` by repeated squaring.
    pub fn pow(&self, exp: u64) -> Result<Self, PolyError> {
        let mut result = Self::constant(self.p, self.nvars, 1);
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

    /// `self^q` for `q` a power of the characteristic.
    ///
    /// Over `F_p` the Frobenius fixes coefficients and is additive, so the
    /// power is computed by scaling every exponent by `q`.
    pub fn frobenius(&self, q: u64) -> Result<Self, PolyError> {
        if zp::log_base(q, self.p).is_none() {
            return Err(PolyError::NotPowerOfCharacteristic { q, p: self.p });
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((m.scale(q)?, *c)))
            .collect::<Result<Vec<_>, PolyError>>()?;
        // Scaling exponents preserves the grevlex order.
        Ok(Self::from_sorted(self.p, self.nvars, terms))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some(&(_, c)) => self.scale(zp::inv(c, self.p)),
        }
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Self, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::VariableIndex(var));
        }
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            let coeff = zp::mul(*c, e as u64 % self.p, self.p);
            if coeff == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[var] -= 1;
            terms.push((Monomial::new(&exps)?, coeff));
        }
        Ok(Self::from_unsorted(self.p, self.nvars, terms))
    }

    /// Embeds into a ring with `extra` further variables.
    pub fn extend_vars(&self, extra: usize) -> Result<Self, PolyError> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((m.extend(extra)?, *c)))
            .collect::<Result<Vec<_>, PolyError>>()?;
        Ok(Self::from_unsorted(self.p, self.nvars + extra, terms))
    }

    /// Formats with variable names; coefficients print as residues.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        struct D<'a>(&'a PolyP, &'a [String]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_terms(f, self.1, self.0.terms.iter().map(|(m, c)| (m, *c, false)))
            }
        }
        D(self, names)
    }
}

impl fmt::Display for PolyP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{}", i)).collect();
        let shown = self.display_with(&names).to_string();
        f.write_str(&shown)
    }
}

/// `f - c * t * g` for term lists sorted descending under `order`.
pub(crate) fn sub_scaled(
    f: &[Term],
    c: u64,
    t: &Monomial,
    g: &[Term],
    p: u64,
    order: MonomialOrder,
) -> Vec<Term> {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let neg_c = zp::neg(c % p, p);
    let mut i = 0;
    let mut j = 0;
    let next_g = |j: usize| -> Term { (g[j].0.mul(t), zp::mul(g[j].1, neg_c, p)) };
    let mut pending = if j < g.len() { Some(next_g(j)) } else { None };
    while i < f.len() {
        let Some(gt) = pending else { break };
        match order.cmp(&f[i].0, &gt.0) {
            Ordering::Greater => {
                out.push(f[i]);
                i += 1;
            }
            Ordering::Less => {
                if gt.1 != 0 {
                    out.push(gt);
                }
                j += 1;
                pending = if j < g.len() { Some(next_g(j)) } else { None };
            }
            Ordering::Equal => {
                let s = zp::add(f[i].1, gt.1, p);
                if s != 0 {
                    out.push((f[i].0, s));
                }
                i += 1;
                j += 1;
                pending = if j < g.len() { Some(next_g(j)) } else { None };
            }
        }
    }
    out.extend_from_slice(&f[i..]);
    while let Some(gt) = pending {
        if gt.1 != 0 {
            out.push(gt);
        }
        j += 1;
        pending = if j < g.len() { Some(next_g(j)) } else { None };
    }
    out
}
