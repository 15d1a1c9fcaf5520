//! Hilbert–Kunz functions measured as colengths of Frobenius powers, exact
//! multiplicities of monomial ideals, and the module-to-ideal reduction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{
    buchberger, check_modulus, count_standard_monomials, frobenius_power, is_finite_colength,
    parse_poly, parse_poly_list, Monomial, PolyError, PolyP,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HkError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("ideal is not primary to the irrelevant ideal (infinite colength)")]
    NotPrimary,
    #[error("need at least two samples, got {0}")]
    TooFewSamples(usize),
    #[error("{0}")]
    InvalidPresentation(String),
    #[error("matrix is not block diagonal: column {0} has several nonzero entries")]
    NotBlockDiagonal(usize),
    #[error("integer overflow computing {0}")]
    Overflow(&'static str),
}

/// `R = F_p[vars] / (relations)` together with its Krull dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    p: u64,
    vars: Vec<String>,
    relations: Vec<PolyP>,
    dim: u32,
}

impl RingPresentation {
    pub fn new(
        p: u64,
        vars: Vec<String>,
        relations: Vec<PolyP>,
        dim: u32,
    ) -> Result<Self, HkError> {
        check_modulus(p)?;
        if let Some(r) = relations
            .iter()
            .find(|r| r.modulus() != p || r.nvars() != vars.len())
        {
            return Err(HkError::InvalidPresentation(format!(
                "relation over F_{} in {} variables, ring is F_{} in {}",
                r.modulus(),
                r.nvars(),
                p,
                vars.len()
            )));
        }
        Ok(RingPresentation {
            p,
            vars,
            relations,
            dim,
        })
    }

    pub fn polynomial_ring(p: u64, vars: &[&str]) -> Result<Self, HkError> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let n = vars.len() as u32;
        Self::new(p, vars, Vec::new(), n)
    }

    /// Parses relations; `dim` defaults to variables minus relations.
    pub fn parse(
        p: u64,
        vars: &[&str],
        relations: &[&str],
        dim: Option<u32>,
    ) -> Result<Self, HkError> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rels = relations
            .iter()
            .map(|r| parse_poly(r, &names)?.reduce_mod_p(p))
            .collect::<Result<Vec<_>, PolyError>>()?;
        let dim = dim.unwrap_or_else(|| names.len().saturating_sub(rels.len()) as u32);
        Self::new(p, names, rels, dim)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn relations(&self) -> &[PolyP] {
        &self.relations
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Parses a comma-separated generator list over this ring.
    pub fn parse_ideal(&self, text: &str) -> Result<Vec<PolyP>, HkError> {
        Ok(parse_poly_list(text, &self.vars)?
            .iter()
            .map(|f| f.reduce_mod_p(self.p))
            .collect::<Result<Vec<_>, _>>()?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HKSample {
    pub e: u32,
    pub q: u64,
    pub length: u64,
}

impl HKSample {
    /// `length / q^dim`.
    pub fn ratio(&self, dim: u32) -> BigRational {
        BigRational::new(BigInt::from(self.length), BigInt::from(self.q).pow(dim))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HKSeries {
    pub dim: u32,
    pub samples: Vec<HKSample>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HKEstimate {
    pub ratio_at_max: BigRational,
    pub difference_estimate: BigRational,
}

fn prime_power(p: u64, e: u32) -> Result<u64, HkError> {
    p.checked_pow(e).ok_or(HkError::Overflow("p^e"))
}

/// `lg(R / I^[q])` for `q = p^e`; the ring relations are not raised.
pub fn hkf_ideal(ring: &RingPresentation, gens: &[PolyP], e: u32) -> Result<HKSample, HkError> {
    let q = prime_power(ring.p, e)?;
    let mut ideal = ring.relations.clone();
    ideal.extend(frobenius_power(gens, q)?);
    let gb = buchberger(&ideal)?;
    if !is_finite_colength(&gb) {
        return Err(HkError::NotPrimary);
    }
    let length = count_standard_monomials(&gb)?;
    Ok(HKSample { e, q, length })
}

/// Samples for `e = 0..=e_max`, computed in parallel.
pub fn hk_series(ring: &RingPresentation, gens: &[PolyP], e_max: u32) -> Result<HKSeries, HkError> {
    let samples = (0..=e_max)
        .into_par_iter()
        .map(|e| hkf_ideal(ring, gens, e))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(HKSeries {
        dim: ring.dim,
        samples,
    })
}

/// Plain ratio at the largest `e` and the first-difference estimator
/// `(l_top - l_prev) / (q_top^dim - q_prev^dim)`.
pub fn hk_estimate(series: &HKSeries) -> Result<HKEstimate, HkError> {
    let n = series.samples.len();
    if n < 2 {
        return Err(HkError::TooFewSamples(n));
    }
    let top = series.samples[n - 1];
    let prev = series.samples[n - 2];
    let d = series.dim;
    let dl = BigInt::from(top.length) - BigInt::from(prev.length);
    let dq = BigInt::from(top.q).pow(d) - BigInt::from(prev.q).pow(d);
    if dq.is_zero() {
        return Err(HkError::InvalidPresentation("repeated q in series".into()));
    }
    Ok(HKEstimate {
        ratio_at_max: top.ratio(d),
        difference_estimate: BigRational::new(dl, dq),
    })
}

/// Exact HK multiplicity of a monomial ideal primary to the maximal ideal:
/// the volume of the region of `R_{>=0}^n` outside every cone `g + R_{>=0}^n`.
pub fn monomial_hk_exact(gens: &[Monomial], n: usize) -> Result<BigRational, HkError> {
    if let Some(g) = gens.iter().find(|g| g.nvars() != n) {
        return Err(PolyError::ArityMismatch(n, g.nvars()).into());
    }
    if gens.iter().any(|g| g.is_one()) {
        return Ok(BigRational::zero());
    }
    let mut bound = vec![None::<u32>; n];
    for g in gens {
        if let Some(v) = g.pure_power_var() {
            let e = g.exponent(v);
            bound[v] = Some(bound[v].map_or(e, |b| b.min(e)));
        }
    }
    let bound: Vec<u32> = bound
        .into_iter()
        .collect::<Option<_>>()
        .ok_or(HkError::NotPrimary)?;

    // Minimal generators only; the rest add nothing but subsets.
    let mut minimal: Vec<Monomial> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let redundant = gens
            .iter()
            .enumerate()
            .any(|(j, h)| j != i && h.divides(g) && (h != g || j < i));
        if !redundant {
            minimal.push(*g);
        }
    }

    let box_volume = |corner: &[u32]| -> BigInt {
        corner
            .iter()
            .zip(&bound)
            .map(|(&c, &b)| BigInt::from(b.saturating_sub(c)))
            .product()
    };
    // Inclusion-exclusion over generator subsets; the cone intersection of a
    // subset sits at the componentwise max. Once a box is empty every
    // superset's box is empty too.
    fn walk(
        gens: &[Monomial],
        start: usize,
        corner: &[u32],
        sign: i32,
        vol: &dyn Fn(&[u32]) -> BigInt,
        acc: &mut BigInt,
    ) {
        for i in start..gens.len() {
            let next: Vec<u32> = corner
                .iter()
                .zip(gens[i].exponents())
                .map(|(&a, &b)| a.max(b))
                .collect();
            let v = vol(&next);
            if v.is_zero() {
                continue;
            }
            if sign > 0 {
                *acc -= &v;
            } else {
                *acc += &v;
            }
            walk(gens, i + 1, &next, -sign, vol, acc);
        }
    }
    let origin = vec![0u32; n];
    let mut acc = box_volume(&origin);
    walk(&minimal, 0, &origin, 1, &box_volume, &mut acc);
    Ok(BigRational::from_integer(acc))
}

/// A presentation `R^n -> R^m -> M -> 0` by an `m x n` matrix, plus
/// generators of `Ann M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<PolyP>>,
    annihilator: Vec<PolyP>,
}

impl PresentationMatrix {
    pub fn new(entries: Vec<Vec<PolyP>>, annihilator: Vec<PolyP>) -> Result<Self, HkError> {
        let rows = entries.len();
        if rows == 0 {
            return Err(HkError::InvalidPresentation(
                "matrix needs at least one row".into(),
            ));
        }
        let cols = entries[0].len();
        if entries.iter().any(|r| r.len() != cols) {
            return Err(HkError::InvalidPresentation("ragged matrix".into()));
        }
        Ok(PresentationMatrix {
            rows,
            cols,
            entries,
            annihilator,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &PolyP {
        &self.entries[i][j]
    }

    pub fn annihilator(&self) -> &[PolyP] {
        &self.annihilator
    }

    /// For a matrix whose columns each have at most one nonzero entry, the
    /// ideals `b_k` with `M = ⊕ R/b_k`.
    pub fn cyclic_blocks(&self) -> Result<Vec<Vec<PolyP>>, HkError> {
        let mut blocks = vec![Vec::new(); self.rows];
        for j in 0..self.cols {
            let nonzero: Vec<usize> = (0..self.rows)
                .filter(|&i| !self.entries[i][j].is_zero())
                .collect();
            match nonzero.as_slice() {
                [] => {}
                [i] => blocks[*i].push(self.entries[*i][j].clone()),
                _ => return Err(HkError::NotBlockDiagonal(j)),
            }
        }
        Ok(blocks)
    }

    fn check_ring(&self, ring: &RingPresentation) -> Result<(), HkError> {
        let n = ring.vars.len();
        let ok = self
            .entries
            .iter()
            .flatten()
            .chain(&self.annihilator)
            .all(|f| f.modulus() == ring.p && f.nvars() == n);
        if ok {
            Ok(())
        } else {
            Err(HkError::InvalidPresentation(
                "matrix entries belong to a different ring".into(),
            ))
        }
    }
}

/// The ring `S = R[T_1..T_m]` and the ideal
/// `Ann M + (sum_i f_ij T_i, j = 1..n) + (T_i T_j, i <= j)` of `S`.
pub fn reduction_ideal(
    ring: &RingPresentation,
    pm: &PresentationMatrix,
) -> Result<(RingPresentation, Vec<PolyP>), HkError> {
    pm.check_ring(ring)?;
    let m = pm.rows;
    let n = ring.vars.len();
    let mut vars = ring.vars.clone();
    for i in 1..=m {
        let name = format!("T{}", i);
        if vars.contains(&name) {
            return Err(HkError::InvalidPresentation(format!(
                "variable name {} already in use",
                name
            )));
        }
        vars.push(name);
    }
    let total = n + m;
    let t = |i: usize| PolyP::monomial(ring.p, Monomial::var_power(total, n + i, 1), 1);

    let relations = ring
        .relations
        .iter()
        .map(|r| r.extend_vars(m))
        .collect::<Result<Vec<_>, _>>()?;
    let extended = RingPresentation::new(ring.p, vars, relations, ring.dim + m as u32)?;

    let mut gens = pm
        .annihilator
        .iter()
        .map(|a| a.extend_vars(m))
        .collect::<Result<Vec<_>, _>>()?;
    for j in 0..pm.cols {
        let mut form = PolyP::zero(ring.p, total);
        for i in 0..m {
            let f = pm.entries[i][j].extend_vars(m)?;
            form = form.checked_add(&f.checked_mul(&t(i))?)?;
        }
        if !form.is_zero() {
            gens.push(form);
        }
    }
    for i in 0..m {
        for j in i..m {
            gens.push(t(i).checked_mul(&t(j))?);
        }
    }
    Ok((extended, gens))
}

/// Both sides of `lg_S(S/I^[q]) = q^m (lg(R/Ann^[q]) + lg(F^e* M))` at one `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionCheck {
    pub e: u32,
    pub q: u64,
    pub lhs: u64,
    pub hkf_annihilator: u64,
    pub hkf_module: u64,
    pub rhs: u128,
    pub equal: bool,
}

/// Checks the reduction identity for a block-diagonal presentation with
/// cyclic blocks, for every `e` in `e_list`.
pub fn verify_reduction(
    ring: &RingPresentation,
    pm: &PresentationMatrix,
    e_list: &[u32],
) -> Result<Vec<ReductionCheck>, HkError> {
    let blocks = pm.cyclic_blocks()?;
    let (ext, ideal) = reduction_ideal(ring, pm)?;
    let m = pm.rows as u32;
    e_list
        .par_iter()
        .map(|&e| {
            let lhs = hkf_ideal(&ext, &ideal, e)?;
            let ann = hkf_ideal(ring, &pm.annihilator, e)?;
            let mut module = 0u64;
            for b in &blocks {
                let len = if b.is_empty() {
                    return Err(HkError::NotPrimary);
                } else {
                    hkf_ideal(ring, b, e)?.length
                };
                module = module
                    .checked_add(len)
                    .ok_or(HkError::Overflow("module length"))?;
            }
            let qm = (lhs.q as u128)
                .checked_pow(m)
                .ok_or(HkError::Overflow("q^m"))?;
            let rhs = qm
                .checked_mul(ann.length as u128 + module as u128)
                .ok_or(HkError::Overflow("right-hand side"))?;
            Ok(ReductionCheck {
                e,
                q: lhs.q,
                lhs: lhs.length,
                hkf_annihilator: ann.length,
                hkf_module: module,
                rhs,
                equal: lhs.length as u128 == rhs,
            })
        })
        .collect()
}

/// JSON experiment descriptor:
/// `{p, variables, relations, ideal, e_max}` with optional `dim`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HkExperiment {
    pub p: u64,
    pub variables: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
    pub ideal: Vec<String>,
    pub e_max: u32,
    #[serde(default)]
    pub dim: Option<u32>,
}

impl HkExperiment {
    pub fn build(&self) -> Result<(RingPresentation, Vec<PolyP>), HkError> {
        let vars: Vec<&str> = self.variables.iter().map(String::as_str).collect();
        let rels: Vec<&str> = self.relations.iter().map(String::as_str).collect();
        let ring = RingPresentation::parse(self.p, &vars, &rels, self.dim)?;
        let gens = self
            .ideal
            .iter()
            .map(|g| Ok(parse_poly(g, &ring.vars)?.reduce_mod_p(self.p)?))
            .collect::<Result<Vec<_>, HkError>>()?;
        Ok((ring, gens))
    }
}

/// `q^dim` as a rational, a convenience for normalizing lengths.
pub fn q_power(q: u64, dim: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(q).pow(dim))
}

/// True when every consecutive pair of samples is nondecreasing in length.
pub fn is_monotone(series: &HKSeries) -> bool {
    series
        .samples
        .windows(2)
        .all(|w| w[0].length <= w[1].length)
}
