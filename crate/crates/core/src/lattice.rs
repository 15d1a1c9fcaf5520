//! Integral lattices with a symmetric bilinear form: intersection numbers on
//! a surface, cone boundaries, thresholds and isometry orbits.
//!
//! Thresholds are the roots of `(xH + L)^2 = 0`. They agree with the
//! sup/inf over ample classes when the ample cone is the positive cone up to
//! closure; nothing here checks that hypothesis.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_arith::{solve_quadratic, ArithError, QuadNum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("gram matrix must be square and symmetric")]
    NotSymmetric,
    #[error("expected a vector or matrix of rank {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("operation needs a rank-2 lattice, got rank {0}")]
    NotRankTwo(usize),
    #[error("polarization must have positive self-intersection, got {0}")]
    NonPositivePolarization(BigInt),
    #[error("classes are linearly dependent")]
    Dependent,
    #[error("class is not orthogonal to the polarization (pairing {0})")]
    NotOrthogonal(BigInt),
    #[error("class must have negative self-intersection, got {0}")]
    NotNegative(BigInt),
    #[error("matrix is not an isometry of the lattice")]
    NotIsometry,
    #[error("entry does not fit in 64 bits")]
    Overflow,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A divisor class: integer coordinates in the lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivClass(Vec<BigInt>);

impl DivClass {
    pub fn new(coords: Vec<BigInt>) -> Self {
        DivClass(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        DivClass(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        DivClass(vec![BigInt::zero(); rank])
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        DivClass(self.0.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        DivClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        DivClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// True when the two classes span a line (or one is zero).
    pub fn is_proportional(&self, other: &Self) -> bool {
        let n = self.0.len();
        (0..n).all(|i| (0..n).all(|j| &self.0[i] * &other.0[j] == &self.0[j] * &other.0[i]))
    }
}

impl fmt::Display for DivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A lattice `Z^r` with a symmetric integral Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramLattice {
    gram: Vec<Vec<BigInt>>,
}

impl GramLattice {
    pub fn new(gram: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let r = gram.len();
        if r == 0 || gram.iter().any(|row| row.len() != r) {
            return Err(LatticeError::NotSymmetric);
        }
        for i in 0..r {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }
        Ok(GramLattice { gram })
    }

    pub fn from_ints(gram: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::new(
            gram.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    fn check(&self, u: &DivClass) -> Result<(), LatticeError> {
        if u.rank() != self.rank() {
            return Err(LatticeError::RankMismatch {
                expected: self.rank(),
                got: u.rank(),
            });
        }
        Ok(())
    }

    /// `u^T G v`.
    pub fn pair(&self, u: &DivClass, v: &DivClass) -> Result<BigInt, LatticeError> {
        self.check(u)?;
        self.check(v)?;
        let mut s = BigInt::zero();
        for (i, ui) in u.0.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.0.iter().enumerate() {
                s += ui * &self.gram[i][j] * vj;
            }
        }
        Ok(s)
    }

    pub fn square(&self, u: &DivClass) -> Result<BigInt, LatticeError> {
        self.pair(u, u)
    }

    /// `(positive, negative, zero)` eigenvalue counts by congruence
    /// diagonalization over the rationals.
    pub fn signature(&self) -> (usize, usize, usize) {
        let n = self.rank();
        let mut a: Vec<Vec<BigRational>> = self
            .gram
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect()
            })
            .collect();
        let (mut pos, mut neg) = (0, 0);
        let mut k = 0;
        while k < n {
            let pivot = (k..n).find(|&i| !a[i][i].is_zero());
            match pivot {
                Some(i) => {
                    a.swap(k, i);
                    for row in a.iter_mut() {
                        row.swap(k, i);
                    }
                }
                None => {
                    // Zero diagonal: add a row/column with a nonzero
                    // off-diagonal entry, making a[k][k] = 2 a[k][j].
                    let Some((i, j)) = (k..n)
                        .flat_map(|i| (k..n).map(move |j| (i, j)))
                        .find(|&(i, j)| i != j && !a[i][j].is_zero())
                    else {
                        break;
                    };
                    for c in 0..n {
                        let v = a[j][c].clone();
                        a[i][c] += v;
                    }
                    for r in 0..n {
                        let v = a[r][j].clone();
                        a[r][i] += v;
                    }
                    a.swap(k, i);
                    for row in a.iter_mut() {
                        row.swap(k, i);
                    }
                }
            }
            let p = a[k][k].clone();
            if p.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                let f = &a[i][k] / &p;
                if f.is_zero() {
                    continue;
                }
                for c in k..n {
                    let v = &f * &a[k][c];
                    a[i][c] -= v;
                }
                for r in k..n {
                    let v = &f * &a[r][k];
                    a[r][i] -= v;
                }
            }
            k += 1;
        }
        (pos, neg, n - pos - neg)
    }

    /// Signature `(1, r - 1)`, as for a Néron–Severi lattice.
    pub fn is_hyperbolic(&self) -> bool {
        let (p, n, z) = self.signature();
        p == 1 && z == 0 && n + 1 == self.rank()
    }

    fn require_rank_two(&self) -> Result<(), LatticeError> {
        if self.rank() != 2 {
            return Err(LatticeError::NotRankTwo(self.rank()));
        }
        Ok(())
    }

    fn positive_square(&self, h: &DivClass) -> Result<BigInt, LatticeError> {
        let h2 = self.square(h)?;
        if !h2.is_positive() {
            return Err(LatticeError::NonPositivePolarization(h2));
        }
        Ok(h2)
    }
}

fn rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Parameters `t` where `H + tD` meets the boundary of the positive cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeBoundary {
    pub lower: QuadNum,
    pub upper: QuadNum,
}

/// Roots of `(H + tD)^2 = 0`, lower first.
pub fn positive_boundary(
    lat: &GramLattice,
    h: &DivClass,
    d: &DivClass,
) -> Result<ConeBoundary, LatticeError> {
    lat.require_rank_two()?;
    let h2 = lat.positive_square(h)?;
    if d.is_proportional(h) {
        return Err(LatticeError::Dependent);
    }
    let hd = lat.pair(h, d)?;
    let d2 = lat.square(d)?;
    let (lower, upper) = solve_quadratic(&rat(&d2), &rat(&(hd * 2)), &rat(&h2))?;
    Ok(ConeBoundary { lower, upper })
}

fn threshold_roots(
    lat: &GramLattice,
    h: &DivClass,
    l: &DivClass,
) -> Result<(QuadNum, QuadNum), LatticeError> {
    let h2 = lat.positive_square(h)?;
    let hl = lat.pair(h, l)?;
    let l2 = lat.square(l)?;
    Ok(solve_quadratic(&rat(&h2), &rat(&(hl * 2)), &rat(&l2))?)
}

/// `b(L) = (-H.L - sqrt((H.L)^2 - H^2 L^2)) / H^2`, the smaller root of
/// `(xH + L)^2 = 0`; at this root `(xH + L).H <= 0`.
pub fn antiample_threshold(
    lat: &GramLattice,
    h: &DivClass,
    l: &DivClass,
) -> Result<QuadNum, LatticeError> {
    Ok(threshold_roots(lat, h, l)?.0)
}

/// The larger root `a(L)` of `(xH + L)^2 = 0`.
pub fn ample_threshold(
    lat: &GramLattice,
    h: &DivClass,
    l: &DivClass,
) -> Result<QuadNum, LatticeError> {
    Ok(threshold_roots(lat, h, l)?.1)
}

/// `(xH + L)^2` evaluated exactly at a quadratic irrational `x`.
pub fn restricted_square(
    lat: &GramLattice,
    h: &DivClass,
    l: &DivClass,
    x: &QuadNum,
) -> Result<QuadNum, LatticeError> {
    let h2 = rat(&lat.square(h)?);
    let hl = rat(&lat.pair(h, l)?);
    let l2 = rat(&lat.square(l)?);
    let x2 = x.checked_mul(x)?;
    Ok(x2
        .scale(&h2)
        .checked_add(&x.scale(&(hl * BigRational::from_integer(2.into()))))?
        .add_rational(&l2))
}

/// An integer matrix acting on column vectors of coordinates.
pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn check_square(lat: &GramLattice, m: &IntMatrix) -> Result<(), LatticeError> {
    let r = lat.rank();
    if m.len() != r || m.iter().any(|row| row.len() != r) {
        return Err(LatticeError::RankMismatch {
            expected: r,
            got: m.len(),
        });
    }
    Ok(())
}

/// `M v`.
pub fn apply(m: &IntMatrix, v: &DivClass) -> DivClass {
    DivClass(
        m.iter()
            .map(|row| row.iter().zip(&v.0).map(|(a, b)| a * b).sum())
            .collect(),
    )
}

/// True iff `M^T G M = G`.
pub fn is_isometry(lat: &GramLattice, m: &IntMatrix) -> Result<bool, LatticeError> {
    check_square(lat, m)?;
    let r = lat.rank();
    let col = |j: usize| DivClass((0..r).map(|i| m[i][j].clone()).collect());
    for i in 0..r {
        for j in 0..r {
            if lat.pair(&col(i), &col(j))? != lat.gram[i][j] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPoint {
    pub step: usize,
    pub class: DivClass,
    pub self_intersection: BigInt,
    /// `|c_2/c_1 - t_+|` against the upper boundary root `t_+` of
    /// `(e_1 + t e_2)^2 = 0`; only for rank 2 with `c_1 != 0`.
    pub slope_gap: Option<QuadNum>,
}

/// `M^k start` for `k = 0..=n_steps`.
pub fn fibonacci_orbit(
    lat: &GramLattice,
    m: &IntMatrix,
    start: &DivClass,
    n_steps: usize,
) -> Result<Vec<OrbitPoint>, LatticeError> {
    if !is_isometry(lat, m)? {
        return Err(LatticeError::NotIsometry);
    }
    lat.check(start)?;
    let upper = if lat.rank() == 2 {
        positive_boundary(
            lat,
            &DivClass::from_ints(&[1, 0]),
            &DivClass::from_ints(&[0, 1]),
        )
        .ok()
        .map(|b| b.upper)
    } else {
        None
    };
    let mut out = Vec::with_capacity(n_steps + 1);
    let mut v = start.clone();
    for step in 0..=n_steps {
        let gap = match (&upper, v.0.first()) {
            (Some(u), Some(c1)) if !c1.is_zero() => {
                let slope = BigRational::new(v.0[1].clone(), c1.clone());
                Some(u.add_rational(&-slope).abs())
            }
            _ => None,
        };
        out.push(OrbitPoint {
            step,
            class: v.clone(),
            self_intersection: lat.square(&v)?,
            slope_gap: gap,
        });
        v = apply(m, &v);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Representation {
    pub n1: i64,
    pub n2: i64,
    pub m: i64,
}

fn zigzag(k: i64) -> i64 {
    // 0, 1, -1, 2, -2, ...
    if k % 2 == 1 {
        (k + 1) / 2
    } else {
        -(k / 2)
    }
}

/// First `(n1, n2, m)` with `(n1, n2) != 0`, `|n_i| <= n_bound`,
/// `1 <= m <= m_bound` and `Q(n1, n2) = c m^2`.
///
/// Search order: `m` ascending, then the shell `max(|n1|, |n2|)`, then
/// `n1` and `n2` along `0, 1, -1, 2, -2, ...`.
pub fn represents(
    lat: &GramLattice,
    c: i64,
    m_bound: i64,
    n_bound: i64,
) -> Result<Option<Representation>, LatticeError> {
    lat.require_rank_two()?;
    let g = |i: usize, j: usize| lat.gram[i][j].to_i128().ok_or(LatticeError::Overflow);
    let (a, b, d) = (g(0, 0)?, g(0, 1)?, g(1, 1)?);
    for m in 1..=m_bound {
        let target = c as i128 * (m as i128) * (m as i128);
        for r in 1..=n_bound {
            for k1 in 0..=2 * r {
                let n1 = zigzag(k1);
                for k2 in 0..=2 * r {
                    let n2 = zigzag(k2);
                    if n1.abs().max(n2.abs()) != r {
                        continue;
                    }
                    let (x, y) = (n1 as i128, n2 as i128);
                    if a * x * x + 2 * b * x * y + d * y * y == target {
                        return Ok(Some(Representation { n1, n2, m }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// JSON lattice descriptor `{gram, labels}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDescriptor {
    pub gram: Vec<Vec<i64>>,
    #[serde(default)]
    pub labels: Vec<String>,
}

impl LatticeDescriptor {
    pub fn build(&self) -> Result<GramLattice, LatticeError> {
        GramLattice::from_ints(&self.gram)
    }
}
