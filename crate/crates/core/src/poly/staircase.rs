//! Counting monomials outside a monomial ideal.

use super::{GroebnerBasis, Monomial, PolyError};

/// Smallest `a_i` with `x_i^{a_i}` among the leading monomials, per variable;
/// `None` when some variable has no pure power.
pub fn pure_power_bounds(gb: &GroebnerBasis) -> Option<Vec<u32>> {
    power_bounds(&gb.lead_monomials(), gb.nvars())
}

fn power_bounds(leads: &[Monomial], nvars: usize) -> Option<Vec<u32>> {
    if leads.iter().any(|m| m.is_one()) {
        return Some(vec![0; nvars]);
    }
    let mut bounds = vec![None::<u32>; nvars];
    for m in leads {
        if let Some(v) = m.pure_power_var() {
            let e = m.exponent(v);
            bounds[v] = Some(bounds[v].map_or(e, |b| b.min(e)));
        }
    }
    bounds.into_iter().collect()
}

/// True when the quotient by the ideal is a finite-dimensional vector space.
pub fn is_finite_colength(gb: &GroebnerBasis) -> bool {
    pure_power_bounds(gb).is_some()
}

/// Dimension of `F_p[x]/I`: the number of monomials outside `LT(I)`.
pub fn count_standard_monomials(gb: &GroebnerBasis) -> Result<u64, PolyError> {
    count_standard_monomials_of(&gb.lead_monomials(), gb.nvars())
}

/// Number of monomials in `nvars` variables divisible by none of `leads`.
pub fn count_standard_monomials_of(leads: &[Monomial], nvars: usize) -> Result<u64, PolyError> {
    if let Some(m) = leads.iter().find(|m| m.nvars() != nvars) {
        return Err(PolyError::ArityMismatch(nvars, m.nvars()));
    }
    power_bounds(leads, nvars).ok_or(PolyError::InfiniteColength)?;
    if nvars == 0 {
        return Ok(if leads.is_empty() { 1 } else { 0 });
    }
    if leads.iter().any(|m| m.is_one()) {
        return Ok(0);
    }
    // by_level[k]: generators supported on the first k+1 variables, the only
    // ones that can divide a monomial whose later exponents are zero.
    let by_level: Vec<Vec<Monomial>> = (0..nvars)
        .map(|k| {
            leads
                .iter()
                .filter(|m| m.exponents()[k + 1..].iter().all(|&e| e == 0))
                .copied()
                .collect()
        })
        .collect();
    let mut exps = vec![0u32; nvars];
    Ok(walk(&by_level, &mut exps, 0))
}

fn walk(by_level: &[Vec<Monomial>], exps: &mut [u32], k: usize) -> u64 {
    let n = exps.len();
    if k == n {
        return 1;
    }
    let mut total = 0;
    loop {
        let m = Monomial::new(exps).expect("arity checked");
        if by_level[k].iter().any(|g| g.divides(&m)) {
            break;
        }
        total += walk(by_level, exps, k + 1);
        exps[k] += 1;
    }
    exps[k] = 0;
    total
}
