//! Closed-form asymptotic limits and Hilbert–Kunz formulas, and a finite
//! Riemann–Roch summation that converges to them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exact_arith::{ArithError, QuadNum};
use crate::lattice::{antiample_threshold, restricted_square, DivClass, GramLattice, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsymError {
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("malformed Betti table: {0}")]
    MalformedTable(String),
    #[error("threshold {given} does not match the antiample threshold {actual}")]
    ThresholdMismatch { given: String, actual: String },
    #[error("Chern polynomial identity fails for delta = {0}")]
    IdentityViolation(i64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn binomial(n: u32, k: u32) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// A surface's numerical data: lattice, polarization `H`, canonical class
/// `K` and `chi(O_S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceData {
    pub lattice: GramLattice,
    pub h: DivClass,
    pub k: DivClass,
    pub chi_o: BigInt,
}

impl SurfaceData {
    pub fn new(
        lattice: GramLattice,
        h: DivClass,
        k: DivClass,
        chi_o: impl Into<BigInt>,
    ) -> Result<Self, AsymError> {
        let h2 = lattice.square(&h)?;
        lattice.square(&k)?;
        if !h2.is_positive() {
            return Err(LatticeError::NonPositivePolarization(h2).into());
        }
        Ok(SurfaceData {
            lattice,
            h,
            k,
            chi_o: chi_o.into(),
        })
    }

    /// Quartic K3: gram `[[4,2],[2,-4]]` in the basis `H, D`; `K = 0`, `chi = 2`.
    pub fn k3_quartic() -> Self {
        let lat = GramLattice::from_ints(&[vec![4, 2], vec![2, -4]]).expect("symmetric");
        Self::new(lat, DivClass::from_ints(&[1, 0]), DivClass::zero(2), 2).expect("valid preset")
    }

    /// `P^1 x P^1`: hyperbolic plane, `H = (1,1)`, `K = (-2,-2)`, `chi = 1`.
    pub fn quadric() -> Self {
        let lat = GramLattice::from_ints(&[vec![0, 1], vec![1, 0]]).expect("symmetric");
        Self::new(
            lat,
            DivClass::from_ints(&[1, 1]),
            DivClass::from_ints(&[-2, -2]),
            1,
        )
        .expect("valid preset")
    }

    /// `[L^2, H.L, H^2]`, i.e. `H^i . L^{2-i}` for `i = 0, 1, 2`.
    pub fn mixed(&self, l: &DivClass) -> Result<Vec<BigInt>, AsymError> {
        surface_mixed(&self.lattice, &self.h, l)
    }
}

pub fn surface_mixed(
    lat: &GramLattice,
    h: &DivClass,
    l: &DivClass,
) -> Result<Vec<BigInt>, AsymError> {
    Ok(vec![lat.square(l)?, lat.pair(h, l)?, lat.square(h)?])
}

/// `(b/d!) sum_i 1/(i+1) C(d,i) b^i H^i.L^{d-i}`.
pub fn limit_top(d: u32, b: &QuadNum, mixed: &[BigInt]) -> Result<QuadNum, AsymError> {
    if d == 0 {
        return Err(AsymError::InvalidInput(
            "dimension must be at least 1".into(),
        ));
    }
    if mixed.len() != d as usize + 1 {
        return Err(AsymError::LengthMismatch {
            expected: d as usize + 1,
            got: mixed.len(),
        });
    }
    let mut sum = QuadNum::zero();
    let mut bi = QuadNum::one();
    for (i, hl) in mixed.iter().enumerate() {
        let coeff = BigRational::new(binomial(d, i as u32) * hl, BigInt::from(i + 1));
        sum = sum.checked_add(&bi.scale(&coeff))?;
        bi = bi.checked_mul(b)?;
    }
    let outer = b.scale(&BigRational::new(BigInt::one(), factorial(d)));
    Ok(outer.checked_mul(&sum)?)
}

/// `(b/2) (b^2 H^2 / 3 + b H.L + L^2)`.
pub fn limit_surface(
    b: &QuadNum,
    h2: &BigInt,
    hl: &BigInt,
    l2: &BigInt,
) -> Result<QuadNum, AsymError> {
    let b2 = b.checked_mul(b)?;
    let inner = b2
        .scale(&BigRational::new(h2.clone(), 3.into()))
        .checked_add(&b.scale(&rat(hl.clone())))?
        .add_rational(&rat(l2.clone()));
    Ok(b.scale(&BigRational::new(1.into(), 2.into()))
        .checked_mul(&inner)?)
}

/// Riemann–Roch: `(D^2 - D.K)/2 + chi(O)`.
pub fn chi_rr(surface: &SurfaceData, d: &DivClass) -> Result<BigRational, AsymError> {
    let d2 = surface.lattice.square(d)?;
    let dk = surface.lattice.pair(d, &surface.k)?;
    Ok(BigRational::new(d2 - dk, 2.into()) + rat(surface.chi_o.clone()))
}

/// `sum_{m=0}^{ceil(nb)-1} chi(mH + nL) / n^3`, with `b` required to be the
/// antiample threshold of `L`.
pub fn sum_oracle(
    surface: &SurfaceData,
    l: &DivClass,
    b: &QuadNum,
    n: u64,
) -> Result<BigRational, AsymError> {
    if n == 0 {
        return Err(AsymError::InvalidInput("n must be positive".into()));
    }
    let actual = antiample_threshold(&surface.lattice, &surface.h, l)?;
    if &actual != b {
        return Err(AsymError::ThresholdMismatch {
            given: b.to_string(),
            actual: actual.to_string(),
        });
    }
    let lat = &surface.lattice;
    let (h2, hl, l2) = (
        lat.square(&surface.h)?,
        lat.pair(&surface.h, l)?,
        lat.square(l)?,
    );
    let (hk, lk) = (lat.pair(&surface.h, &surface.k)?, lat.pair(l, &surface.k)?);
    let nn = BigInt::from(n);
    let upper = b.scale(&rat(nn.clone())).ceil();
    // 2 chi(mH + nL) = m^2 H^2 + 2mn H.L + n^2 L^2 - m H.K - n L.K + 2 chi(O)
    //               = a2 m^2 + a1 m + a0
    let a2 = h2;
    let a1 = BigInt::from(2) * &nn * &hl - &hk;
    let a0 = &nn * &nn * &l2 - &nn * &lk + BigInt::from(2) * &surface.chi_o;
    let twice = if upper.is_positive() {
        poly_sum(&a2, &a1, &a0, &upper)
    } else {
        BigInt::zero()
    };
    Ok(BigRational::new(twice, BigInt::from(2) * &nn * &nn * &nn))
}

/// `sum_{m=0}^{k-1} (a2 m^2 + a1 m + a0)` by power-sum formulas.
fn poly_sum(a2: &BigInt, a1: &BigInt, a0: &BigInt, k: &BigInt) -> BigInt {
    let s1 = k * (k - 1) / 2;
    let s2 = (k - 1) * k * (BigInt::from(2) * k - 1) / 6;
    a2 * s2 + a1 * s1 + a0 * k
}

/// True when `|value - limit| < bound`, decided exactly.
pub fn within(value: &BigRational, limit: &QuadNum, bound: &BigRational) -> bool {
    let diff = limit.add_rational(&-value.clone());
    diff.add_rational(&-bound.clone()).sign() < 0 && diff.add_rational(bound).sign() > 0
}

/// One oracle evaluation with its distance to the closed-form limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRow {
    pub n: u64,
    pub value: BigRational,
    /// `limit - value`.
    pub error: QuadNum,
}

/// Oracle values for several `n` in parallel, against `limit_surface`.
pub fn oracle_convergence(
    surface: &SurfaceData,
    l: &DivClass,
    ns: &[u64],
) -> Result<(QuadNum, Vec<OracleRow>), AsymError> {
    let b = antiample_threshold(&surface.lattice, &surface.h, l)?;
    let m = surface.mixed(l)?;
    let limit = limit_surface(&b, &m[2], &m[1], &m[0])?;
    let rows = ns
        .par_iter()
        .map(|&n| {
            let value = sum_oracle(surface, l, &b, n)?;
            let error = limit.add_rational(&-value.clone());
            Ok(OracleRow { n, value, error })
        })
        .collect::<Result<Vec<_>, AsymError>>()?;
    Ok((limit, rows))
}

/// Graded Betti shifts: level `i` lists the `j` with `F_i = ⊕ R(-j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    levels: Vec<Vec<i64>>,
}

impl BettiTable {
    /// Rows `(i, shifts)`; indices must be distinct and cover `0..r`.
    pub fn new(mut rows: Vec<(usize, Vec<i64>)>) -> Result<Self, AsymError> {
        rows.sort_by_key(|r| r.0);
        for (k, (i, shifts)) in rows.iter().enumerate() {
            if *i != k {
                return Err(AsymError::MalformedTable(format!(
                    "levels must be distinct and contiguous from 0, found {}",
                    i
                )));
            }
            if shifts.iter().any(|&s| s < 0) {
                return Err(AsymError::MalformedTable(format!(
                    "negative shift at level {}",
                    i
                )));
            }
        }
        Ok(BettiTable {
            levels: rows.into_iter().map(|r| r.1).collect(),
        })
    }

    pub fn from_levels(levels: Vec<Vec<i64>>) -> Result<Self, AsymError> {
        Self::new(levels.into_iter().enumerate().collect())
    }

    /// The Koszul complex on forms of the given degrees.
    pub fn koszul(degrees: &[i64]) -> Result<Self, AsymError> {
        let r = degrees.len();
        if r > 20 {
            return Err(AsymError::InvalidInput("too many forms".into()));
        }
        let mut levels = vec![Vec::new(); r + 1];
        for mask in 0u32..(1 << r) {
            let s: i64 = (0..r)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| degrees[i])
                .sum();
            levels[mask.count_ones() as usize].push(s);
        }
        for l in &mut levels {
            l.sort_unstable();
        }
        Self::from_levels(levels)
    }

    pub fn levels(&self) -> &[Vec<i64>] {
        &self.levels
    }

    /// Keeps levels `0..=top`.
    pub fn truncate(&self, top: usize) -> Self {
        BettiTable {
            levels: self.levels.iter().take(top + 1).cloned().collect(),
        }
    }
}

fn alternating_power_sum(d: u32, levels: &[Vec<i64>]) -> BigInt {
    let mut s = BigInt::zero();
    for (i, shifts) in levels.iter().enumerate() {
        let level: BigInt = shifts.iter().map(|&b| BigInt::from(b).pow(d + 1)).sum();
        if (d as usize + 1 - i).is_multiple_of(2) {
            s += level;
        } else {
            s -= level;
        }
    }
    s
}

fn check_levels(table: &BettiTable, want: usize) -> Result<(), AsymError> {
    if table.levels.len() != want {
        return Err(AsymError::MalformedTable(format!(
            "expected levels 0..{}, got {} levels",
            want - 1,
            table.levels.len()
        )));
    }
    Ok(())
}

/// `(H^d/(d+1)!) sum_{i=0}^{d} (-1)^{d+1-i} sum_j beta_ij^{d+1}` over levels `0..=d`.
pub fn betti_term(d: u32, hd: &BigInt, table: &BettiTable) -> Result<BigRational, AsymError> {
    check_levels(table, d as usize + 1)?;
    Ok(BigRational::new(
        hd * alternating_power_sum(d, &table.levels),
        factorial(d + 1),
    ))
}

/// The same alternating sum over levels `0..=d+1`, for a module of finite
/// projective dimension.
pub fn finite_pd_hk(d: u32, hd: &BigInt, table: &BettiTable) -> Result<BigRational, AsymError> {
    check_levels(table, d as usize + 2)?;
    Ok(BigRational::new(
        hd * alternating_power_sum(d, &table.levels),
        factorial(d + 1),
    ))
}

/// `H^2 d1 d2 d3`.
pub fn parameter_hk(h2: i64, d1: i64, d2: i64, d3: i64) -> Result<BigRational, AsymError> {
    if d1 <= 0 || d2 <= 0 || d3 <= 0 {
        return Err(AsymError::InvalidInput("degrees must be positive".into()));
    }
    Ok(rat(BigInt::from(h2) * d1 * d2 * d3))
}

/// Line bundle summands `L_j` with their antiample thresholds `b_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitBundle {
    pub summands: Vec<DivClass>,
    pub thresholds: Vec<QuadNum>,
}

impl SplitBundle {
    /// Checks `(b_j H + L_j)^2 = 0` for every summand.
    pub fn new(
        lat: &GramLattice,
        h: &DivClass,
        summands: Vec<DivClass>,
        thresholds: Vec<QuadNum>,
    ) -> Result<Self, AsymError> {
        if summands.len() != thresholds.len() {
            return Err(AsymError::LengthMismatch {
                expected: summands.len(),
                got: thresholds.len(),
            });
        }
        for (l, b) in summands.iter().zip(&thresholds) {
            if !restricted_square(lat, h, l, b)?.is_zero() {
                let actual = antiample_threshold(lat, h, l)?;
                return Err(AsymError::ThresholdMismatch {
                    given: b.to_string(),
                    actual: actual.to_string(),
                });
            }
        }
        Ok(SplitBundle {
            summands,
            thresholds,
        })
    }

    /// Thresholds computed from the lattice.
    pub fn from_lattice(
        lat: &GramLattice,
        h: &DivClass,
        summands: Vec<DivClass>,
    ) -> Result<Self, AsymError> {
        let thresholds = summands
            .iter()
            .map(|l| antiample_threshold(lat, h, l))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SplitBundle {
            summands,
            thresholds,
        })
    }
}

/// `sum_j limit_top(d, b_j, mixed_j) + betti_term(d, H^d, table)`.
pub fn splitting_hk(
    d: u32,
    hd: &BigInt,
    bundle: &SplitBundle,
    intersections: &[Vec<BigInt>],
    table: &BettiTable,
) -> Result<QuadNum, AsymError> {
    if intersections.len() != bundle.thresholds.len() {
        return Err(AsymError::LengthMismatch {
            expected: bundle.thresholds.len(),
            got: intersections.len(),
        });
    }
    let mut total = QuadNum::rational(betti_term(d, hd, table)?);
    for (b, mixed) in bundle.thresholds.iter().zip(intersections) {
        total = total.checked_add(&limit_top(d, b, mixed)?)?;
    }
    Ok(total)
}

/// The two boundary phenomena for a class orthogonal to `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Limit {
    /// `u = sqrt(-D^2 / H^2)`.
    pub u: QuadNum,
    /// Limit of `sum_{m in N} h^1 / n^3`: `-u D^2 / 3`.
    pub natural_sum: QuadNum,
    /// Limit of the sum over `m in Z`, twice the above.
    pub integer_sum: QuadNum,
}

fn orthogonal_data(
    lat: &GramLattice,
    h: &DivClass,
    d: &DivClass,
) -> Result<(BigInt, BigInt), AsymError> {
    let h2 = lat.square(h)?;
    if !h2.is_positive() {
        return Err(LatticeError::NonPositivePolarization(h2).into());
    }
    let hd = lat.pair(h, d)?;
    if !hd.is_zero() {
        return Err(LatticeError::NotOrthogonal(hd).into());
    }
    let d2 = lat.square(d)?;
    if !d2.is_negative() {
        return Err(LatticeError::NotNegative(d2).into());
    }
    Ok((h2, d2))
}

pub fn h1_limit(lat: &GramLattice, h: &DivClass, d_orth: &DivClass) -> Result<H1Limit, AsymError> {
    let (h2, d2) = orthogonal_data(lat, h, d_orth)?;
    let u = QuadNum::sqrt_rational(&BigRational::new(-d2.clone(), h2))?;
    let natural_sum = u.scale(&BigRational::new(-d2, 3.into()));
    let integer_sum = natural_sum.scale(&rat(2));
    Ok(H1Limit {
        u,
        natural_sum,
        integer_sum,
    })
}

/// Finite sums of `f(m) = -(mH + nD)^2 / 2` for `D` orthogonal to `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Sums {
    pub n: u64,
    /// `ceil(n u)`.
    pub bound: BigInt,
    /// `sum_{m=0}^{bound} f(m)`.
    pub natural: BigRational,
    /// `sum_{m=-bound}^{bound} f(m)`.
    pub integer: BigRational,
    /// `f(0)`.
    pub zero_term: BigRational,
}

/// Brute-force sums, term by term.
pub fn h1_sums(
    lat: &GramLattice,
    h: &DivClass,
    d_orth: &DivClass,
    n: u64,
) -> Result<H1Sums, AsymError> {
    orthogonal_data(lat, h, d_orth)?;
    let limit = h1_limit(lat, h, d_orth)?;
    let nn = BigInt::from(n);
    let bound = limit.u.scale(&rat(nn.clone())).ceil();
    let f = |m: &BigInt| -> Result<BigRational, AsymError> {
        let class = h.scale(m).add(&d_orth.scale(&nn));
        Ok(BigRational::new(-lat.square(&class)?, 2.into()))
    };
    let mut natural = BigRational::zero();
    let mut integer = BigRational::zero();
    let mut m = -bound.clone();
    while m <= bound {
        let v = f(&m)?;
        if !m.is_negative() {
            natural += &v;
        }
        integer += v;
        m += 1;
    }
    Ok(H1Sums {
        n,
        bound,
        natural,
        integer,
        zero_term: f(&BigInt::zero())?,
    })
}

/// The primitive class `(H^2 D - (H.D) H) / content`, orthogonal to `H`.
pub fn normalize_orthogonal(
    lat: &GramLattice,
    h: &DivClass,
    d: &DivClass,
) -> Result<DivClass, AsymError> {
    if d.is_proportional(h) {
        return Err(LatticeError::Dependent.into());
    }
    let h2 = lat.square(h)?;
    let hd = lat.pair(h, d)?;
    let v = d.scale(&h2).sub(&h.scale(&hd));
    let g = v.coords().iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    Ok(DivClass::new(v.coords().iter().map(|c| c / &g).collect()))
}

/// Chern data of the kernel bundle for a given `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChernData {
    /// `c_1 = (-4 - delta) H`.
    pub c1: i64,
    /// `deg = (-4 - delta) delta`.
    pub degree: i64,
    /// `c_2 = (2 + 4 delta) H^2`.
    pub c2: i64,
}

fn truncated_product(a: &[i64; 3], b: &[i64; 3]) -> [i64; 3] {
    [
        a[0] * b[0],
        a[0] * b[1] + a[1] * b[0],
        a[0] * b[2] + a[1] * b[1] + a[2] * b[0],
    ]
}

/// Returns `(-4-delta, (-4-delta) delta, 2+4 delta)` after checking
/// `(1 + c_1 t + c_2 t^2)(1 + (delta-4) t + (delta^2-4 delta+6) t^2) = 1 - 8t + 24t^2 mod t^3`.
pub fn chern_resolution(delta: i64) -> Result<ChernData, AsymError> {
    if delta < 1 {
        return Err(AsymError::InvalidInput("delta must be at least 1".into()));
    }
    if delta > 1 << 20 {
        return Err(AsymError::InvalidInput("delta too large".into()));
    }
    let c1 = -4 - delta;
    let data = ChernData {
        c1,
        degree: c1 * delta,
        c2: 2 + 4 * delta,
    };
    let quotient = [1, delta - 4, delta * delta - 4 * delta + 6];
    if truncated_product(&[1, data.c1, data.c2], &quotient) != [1, -8, 24] {
        return Err(AsymError::IdentityViolation(delta));
    }
    Ok(data)
}

/// Decimal rendering for approximation columns.
pub fn rational_decimal(r: &BigRational, digits: usize) -> String {
    QuadNum::rational(r.clone()).to_decimal_string(digits)
}

/// `|error| * n` as a float, for reporting the empirical constant.
pub fn scaled_error(row: &OracleRow) -> f64 {
    row.error.abs().to_f64() * row.n.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(v: &[i64]) -> DivClass {
        DivClass::from_ints(v)
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn q(s: &str) -> QuadNum {
        s.parse().unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn quadric_table() -> BettiTable {
        BettiTable::from_levels(vec![vec![0], vec![1; 4], vec![2; 5]]).unwrap()
    }

    #[test]
    fn surface_limits() {
        let two = QuadNum::from_integer(2);
        assert_eq!(
            limit_surface(&two, &2.into(), &(-6).into(), &16.into()).unwrap(),
            QuadNum::rational(r(20, 3))
        );
        let b = q("3/2 - 1/2*sqrt(5)");
        let v = limit_surface(&b, &4.into(), &(-6).into(), &4.into()).unwrap();
        assert_eq!(v, q("-3/2 + 5/6*sqrt(5)"));
        assert!(!v.sqrt_coefficient().is_zero());
        assert!(
            limit_surface(&QuadNum::zero(), &4.into(), &1.into(), &9.into())
                .unwrap()
                .is_zero()
        );
    }

    #[test]
    fn top_limits() {
        let two = QuadNum::from_integer(2);
        assert_eq!(
            limit_top(2, &two, &ints(&[16, -6, 2])).unwrap(),
            QuadNum::rational(r(20, 3))
        );
        assert!(limit_top(2, &QuadNum::zero(), &ints(&[1, 2, 3]))
            .unwrap()
            .is_zero());
        // d = 1: b (L + b H / 2).
        let b = QuadNum::rational(r(3, 2));
        assert_eq!(
            limit_top(1, &b, &ints(&[-3, 2])).unwrap(),
            QuadNum::rational(r(3, 2) * (r(-3, 1) + r(3, 2)))
        );
        assert_eq!(
            limit_top(2, &two, &ints(&[1, 2])),
            Err(AsymError::LengthMismatch {
                expected: 3,
                got: 2
            })
        );
    }

    #[test]
    fn riemann_roch() {
        let k3 = SurfaceData::k3_quartic();
        // D with D^2 = -4.
        assert_eq!(chi_rr(&k3, &c(&[0, 1])).unwrap(), r(0, 1));
        assert_eq!(chi_rr(&k3, &c(&[0, 0])).unwrap(), r(2, 1));
        let quad = SurfaceData::quadric();
        assert_eq!(chi_rr(&quad, &c(&[1, 1])).unwrap(), r(4, 1));
        // h^0(O(a,b)) = (a+1)(b+1) for a, b >= 0.
        assert_eq!(chi_rr(&quad, &c(&[2, 3])).unwrap(), r(12, 1));
    }

    #[test]
    fn oracle_against_direct_sum() {
        let quad = SurfaceData::quadric();
        let l = c(&[-4, -2]);
        let b = QuadNum::from_integer(2);
        for n in [1u64, 2, 7] {
            let mut direct = BigRational::zero();
            let h = quad.h.clone();
            for m in 0..(2 * n as i64) {
                let class = h.scale(&m.into()).add(&l.scale(&(n as i64).into()));
                direct += chi_rr(&quad, &class).unwrap();
            }
            let n3 = BigInt::from(n).pow(3);
            assert_eq!(sum_oracle(&quad, &l, &b, n).unwrap(), direct / rat(n3));
        }
        assert!(matches!(
            sum_oracle(&quad, &l, &QuadNum::from_integer(3), 10),
            Err(AsymError::ThresholdMismatch { .. })
        ));
    }

    #[test]
    fn oracle_quadric_close_to_limit() {
        let quad = SurfaceData::quadric();
        let v = sum_oracle(&quad, &c(&[-4, -2]), &QuadNum::from_integer(2), 100).unwrap();
        let limit = QuadNum::rational(r(20, 3));
        assert!(within(&v, &limit, &r(1, 3)));
    }

    #[test]
    fn oracle_square_riemann_sum() {
        // L = -H, K = 0, chi = 0: sum_{m<n} (m-n)^2 H^2 / 2 / n^3 -> H^2/6.
        let lat = GramLattice::from_ints(&[vec![6]]).unwrap();
        let s = SurfaceData::new(lat, c(&[1]), c(&[0]), 0).unwrap();
        let v = sum_oracle(&s, &c(&[-1]), &QuadNum::one(), 1000).unwrap();
        assert!(within(&v, &QuadNum::one(), &r(1, 100)));
    }

    #[test]
    fn oracle_quartic_converges() {
        let k3 = SurfaceData::k3_quartic();
        let (limit, rows) = oracle_convergence(&k3, &c(&[-2, 1]), &[16, 64, 256, 1024]).unwrap();
        assert_eq!(limit, q("-3/2 + 5/6*sqrt(5)"));
        for row in &rows {
            assert!(within(&row.value, &limit, &r(4, row.n as i64)));
        }
    }

    #[test]
    fn betti_terms() {
        assert_eq!(
            betti_term(2, &2.into(), &quadric_table()).unwrap(),
            r(-12, 1)
        );
        let empty = BettiTable::from_levels(vec![vec![], vec![], vec![]]).unwrap();
        assert_eq!(betti_term(2, &2.into(), &empty).unwrap(), r(0, 1));
        let kos = BettiTable::koszul(&[1, 1, 1]).unwrap();
        assert_eq!(
            kos.levels(),
            &[vec![0], vec![1, 1, 1], vec![2, 2, 2], vec![3]]
        );
        assert_eq!(
            betti_term(2, &2.into(), &kos.truncate(2)).unwrap(),
            r(-7, 1)
        );
        assert!(matches!(
            betti_term(2, &2.into(), &kos),
            Err(AsymError::MalformedTable(_))
        ));
        assert!(BettiTable::new(vec![(0, vec![0]), (2, vec![1])]).is_err());
        assert!(BettiTable::new(vec![(0, vec![0]), (0, vec![1])]).is_err());
    }

    #[test]
    fn finite_projective_dimension() {
        let kos = BettiTable::koszul(&[1, 1, 1]).unwrap();
        assert_eq!(finite_pd_hk(2, &2.into(), &kos).unwrap(), r(2, 1));
        assert_eq!(
            finite_pd_hk(2, &2.into(), &kos).unwrap(),
            parameter_hk(2, 1, 1, 1).unwrap()
        );
        let zero = BettiTable::from_levels(vec![vec![]; 4]).unwrap();
        assert_eq!(finite_pd_hk(2, &2.into(), &zero).unwrap(), r(0, 1));
        assert_eq!(parameter_hk(4, 1, 1, 1).unwrap(), r(4, 1));
    }

    #[test]
    fn koszul_split_matches_finite_pd() {
        // Levels 0..2 as the Betti term, F_3 = R(-3) as the line bundle -3H.
        let k3 = SurfaceData::quadric();
        let bundle = SplitBundle::from_lattice(&k3.lattice, &k3.h, vec![c(&[-3, -3])]).unwrap();
        assert_eq!(bundle.thresholds[0], QuadNum::from_integer(3));
        let mixed = vec![k3.mixed(&c(&[-3, -3])).unwrap()];
        let kos = BettiTable::koszul(&[1, 1, 1]).unwrap();
        let v = splitting_hk(2, &2.into(), &bundle, &mixed, &kos.truncate(2)).unwrap();
        assert_eq!(v, QuadNum::from_integer(2));
    }

    #[test]
    fn quadric_pipeline() {
        let s = SurfaceData::quadric();
        let summands = vec![c(&[-4, -2]), c(&[-2, -4])];
        let bundle = SplitBundle::from_lattice(&s.lattice, &s.h, summands.clone()).unwrap();
        let mixed: Vec<Vec<BigInt>> = summands.iter().map(|l| s.mixed(l).unwrap()).collect();
        let v = splitting_hk(2, &2.into(), &bundle, &mixed, &quadric_table()).unwrap();
        assert_eq!(v, QuadNum::rational(r(4, 3)));
        let bad = SplitBundle::new(
            &s.lattice,
            &s.h,
            summands,
            vec![QuadNum::from_integer(2), QuadNum::from_integer(3)],
        );
        assert!(matches!(bad, Err(AsymError::ThresholdMismatch { .. })));
    }

    #[test]
    fn irrational_split() {
        let k3 = SurfaceData::k3_quartic();
        let l = c(&[-2, 1]);
        let bundle = SplitBundle::from_lattice(&k3.lattice, &k3.h, vec![l.clone()]).unwrap();
        let empty = BettiTable::from_levels(vec![vec![]; 3]).unwrap();
        let v = splitting_hk(2, &4.into(), &bundle, &[k3.mixed(&l).unwrap()], &empty).unwrap();
        assert_eq!(v, q("-3/2 + 5/6*sqrt(5)"));
        let with_table = splitting_hk(
            2,
            &4.into(),
            &bundle,
            &[k3.mixed(&l).unwrap()],
            &quadric_table(),
        )
        .unwrap();
        assert_eq!(with_table, v.add_rational(&r(-24, 1)));
    }

    #[test]
    fn orthogonal_class_and_h1() {
        let k3 = SurfaceData::k3_quartic();
        let d = normalize_orthogonal(&k3.lattice, &k3.h, &c(&[0, 1])).unwrap();
        assert_eq!(d, c(&[-1, 2]));
        assert_eq!(k3.lattice.pair(&k3.h, &d).unwrap(), 0.into());
        assert_eq!(k3.lattice.square(&d).unwrap(), (-20).into());
        assert_eq!(normalize_orthogonal(&k3.lattice, &k3.h, &d).unwrap(), d);
        assert!(normalize_orthogonal(&k3.lattice, &k3.h, &c(&[3, 0])).is_err());

        let lim = h1_limit(&k3.lattice, &k3.h, &d).unwrap();
        assert_eq!(lim.u, q("0 + 1*sqrt(5)"));
        assert_eq!(lim.natural_sum, q("0 + 20/3*sqrt(5)"));
        assert_eq!(lim.integer_sum, q("0 + 40/3*sqrt(5)"));
        for k in 2..5i64 {
            let scaled = h1_limit(&k3.lattice, &k3.h, &d.scale(&k.into())).unwrap();
            assert_eq!(scaled.natural_sum, lim.natural_sum.scale(&rat(k * k * k)));
        }
        assert!(matches!(
            h1_limit(&k3.lattice, &k3.h, &c(&[0, 1])),
            Err(AsymError::Lattice(LatticeError::NotOrthogonal(_)))
        ));
        // On the quadric the boundary is rational: u = 1, limit 2/3.
        let quad = SurfaceData::quadric();
        let lim = h1_limit(&quad.lattice, &quad.h, &c(&[1, -1])).unwrap();
        assert_eq!(
            (lim.u, lim.natural_sum),
            (QuadNum::one(), QuadNum::rational(r(2, 3)))
        );
        assert!(matches!(
            h1_limit(&quad.lattice, &quad.h, &c(&[0, 0])),
            Err(AsymError::Lattice(LatticeError::NotNegative(_)))
        ));
    }

    #[test]
    fn h1_finite_sums() {
        let k3 = SurfaceData::k3_quartic();
        let d = c(&[-1, 2]);
        let lim = h1_limit(&k3.lattice, &k3.h, &d).unwrap();
        for n in [1u64, 5, 40, 300] {
            let s = h1_sums(&k3.lattice, &k3.h, &d, n).unwrap();
            assert_eq!(s.integer, &s.natural * rat(2) - &s.zero_term);
            let n3 = rat(BigInt::from(n).pow(3));
            if n >= 40 {
                assert!(within(
                    &(s.natural / n3),
                    &lim.natural_sum,
                    &r(60, n as i64)
                ));
            }
        }
    }

    #[test]
    fn chern_values() {
        assert_eq!(
            chern_resolution(2).unwrap(),
            ChernData {
                c1: -6,
                degree: -12,
                c2: 10
            }
        );
        assert_eq!(
            chern_resolution(4).unwrap(),
            ChernData {
                c1: -8,
                degree: -32,
                c2: 18
            }
        );
        for delta in 1..=10 {
            assert!(chern_resolution(delta).is_ok());
        }
        assert!(chern_resolution(0).is_err());
    }

    proptest! {
        #[test]
        fn koszul_gives_product_of_degrees(d1 in 1i64..8, d2 in 1i64..8, d3 in 1i64..8, h2 in 1i64..6) {
            let kos = BettiTable::koszul(&[d1, d2, d3]).unwrap();
            prop_assert_eq!(finite_pd_hk(2, &h2.into(), &kos).unwrap(), parameter_hk(h2, d1, d2, d3).unwrap());
        }

        #[test]
        fn top_matches_surface(bn in -20i64..20, bd in 1i64..6, h2 in 1i64..9, hl in -9i64..9, l2 in -9i64..9) {
            let b = QuadNum::rational(r(bn, bd));
            prop_assert_eq!(
                limit_top(2, &b, &ints(&[l2, hl, h2])).unwrap(),
                limit_surface(&b, &h2.into(), &hl.into(), &l2.into()).unwrap()
            );
        }

        #[test]
        fn h1_sum_symmetry(n in 1u64..200) {
            let k3 = SurfaceData::k3_quartic();
            let s = h1_sums(&k3.lattice, &k3.h, &c(&[-1, 2]), n).unwrap();
            prop_assert_eq!(s.integer, &s.natural * rat(2) - &s.zero_term);
        }
    }
}
