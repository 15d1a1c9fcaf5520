//! Determinantal quartic surfaces: 4x4 matrices of linear forms, their
//! determinants and curve minors, and smoothness checks modulo primes.

use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::GramLattice;
use crate::poly::{buchberger, is_finite_colength, parse_poly, PolyError, PolyP, PolyZ};

pub const VARIABLES: [&str; 4] = ["X", "Y", "Z", "W"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("matrix must be 4x4")]
    Shape,
    #[error("entry ({0}, {1}) is not a linear form")]
    NotLinear(usize, usize),
    #[error("entries use different variables")]
    MixedVariables,
    #[error("Leibniz and cofactor determinants disagree")]
    Disagreement,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("polynomial vanishes modulo {0}")]
    ZeroModP(u64),
}

fn vars() -> Vec<String> {
    VARIABLES.iter().map(|s| s.to_string()).collect()
}

/// A 4x4 matrix whose entries are linear forms (or zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMatrix4 {
    entries: Vec<Vec<PolyZ>>,
}

impl LinearMatrix4 {
    pub fn new(entries: Vec<Vec<PolyZ>>) -> Result<Self, DetError> {
        if entries.len() != 4 || entries.iter().any(|r| r.len() != 4) {
            return Err(DetError::Shape);
        }
        let names = entries[0][0].vars().to_vec();
        for (i, row) in entries.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                if f.vars() != names.as_slice() {
                    return Err(DetError::MixedVariables);
                }
                if !(f.is_zero() || (f.is_homogeneous() && f.degree() == Some(1))) {
                    return Err(DetError::NotLinear(i, j));
                }
            }
        }
        Ok(LinearMatrix4 { entries })
    }

    /// Parses entries written in `X, Y, Z, W`.
    pub fn parse<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self, DetError> {
        let v = vars();
        let entries = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| parse_poly(s.as_ref(), &v))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(entries)
    }

    pub fn entry(&self, i: usize, j: usize) -> &PolyZ {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<PolyZ>] {
        &self.entries
    }

    fn vars(&self) -> &[String] {
        self.entries[0][0].vars()
    }
}

const PERMS4: usize = 24;

fn permutations4() -> Vec<([usize; 4], bool)> {
    let mut out = Vec::with_capacity(PERMS4);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    if distinct {
                        let inversions = (0..4)
                            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                            .filter(|&(i, j)| p[i] > p[j])
                            .count();
                        out.push((p, inversions % 2 == 1));
                    }
                }
            }
        }
    }
    out
}

fn leibniz(m: &[Vec<PolyZ>], names: &[String]) -> PolyZ {
    let mut acc = PolyZ::zero(names);
    for (perm, odd) in permutations4() {
        let mut term = PolyZ::constant(names, 1);
        for (i, &j) in perm.iter().enumerate() {
            term = &term * &m[i][j];
        }
        acc = if odd { &acc - &term } else { &acc + &term };
    }
    acc
}

/// Cofactor expansion along the first column, recursively.
fn cofactor(m: &[Vec<PolyZ>], names: &[String]) -> PolyZ {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = PolyZ::zero(names);
    for i in 0..n {
        if m[i][0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<PolyZ>> = (0..n)
            .filter(|&r| r != i)
            .map(|r| m[r][1..].to_vec())
            .collect();
        let term = &m[i][0] * &cofactor(&minor, names);
        acc = if i % 2 == 1 {
            &acc - &term
        } else {
            &acc + &term
        };
    }
    acc
}

/// The determinant, computed twice (Leibniz and cofactor) and compared.
pub fn det4(m: &LinearMatrix4) -> Result<PolyZ, DetError> {
    let a = leibniz(&m.entries, m.vars());
    let b = cofactor(&m.entries, m.vars());
    if a != b {
        return Err(DetError::Disagreement);
    }
    Ok(a)
}

/// Signed maximal minors of the last three columns: entry `i` is
/// `(-1)^i` times the minor with row `i` deleted, so that
/// `det = sum_i m[i][0] * minors[i]`.
pub fn curve_minors(m: &LinearMatrix4) -> Vec<PolyZ> {
    (0..4)
        .map(|i| {
            let sub: Vec<Vec<PolyZ>> = (0..4)
                .filter(|&r| r != i)
                .map(|r| m.entries[r][1..].to_vec())
                .collect();
            let minor = cofactor(&sub, m.vars());
            if i % 2 == 1 {
                -&minor
            } else {
                minor
            }
        })
        .collect()
}

/// `(F, dF/dX, dF/dY, dF/dZ, dF/dW)`.
pub fn jacobian_ideal(f: &PolyZ) -> Result<Vec<PolyZ>, DetError> {
    let mut out = vec![f.clone()];
    for i in 0..f.nvars() {
        out.push(f.partial_derivative(i)?);
    }
    Ok(out)
}

/// Smoothness of `V(F)` over the algebraic closure of `F_p`: the Jacobian
/// ideal mod `p` has finite colength iff its zero set is the origin.
pub fn is_smooth_mod_p(f: &PolyZ, p: u64) -> Result<bool, DetError> {
    if !f.is_homogeneous() {
        return Err(DetError::NotHomogeneous);
    }
    let gens = jacobian_ideal(f)?
        .iter()
        .map(|g| g.reduce_mod_p(p))
        .collect::<Result<Vec<PolyP>, _>>()?;
    if gens[0].is_zero() {
        return Err(DetError::ZeroModP(p));
    }
    smooth_from_generators(&gens)
}

fn smooth_from_generators(gens: &[PolyP]) -> Result<bool, DetError> {
    Ok(is_finite_colength(&buchberger(gens)?))
}

/// The primes (in input order) at which `V(F)` is singular.
pub fn singular_prime_scan(f: &PolyZ, primes: &[u64]) -> Result<Vec<u64>, DetError> {
    let smooth = primes
        .par_iter()
        .map(|&p| is_smooth_mod_p(f, p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(primes
        .iter()
        .zip(smooth)
        .filter(|(_, s)| !s)
        .map(|(p, _)| *p)
        .collect())
}

/// `F = det A` together with the rank-2 lattice spanned by `H` and
/// `D = 2H - C`, where `C` is the curve cut out by the minors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticSurfaceModel {
    pub f: PolyZ,
    pub picard_plane: GramLattice,
}

impl QuarticSurfaceModel {
    pub fn from_matrix(m: &LinearMatrix4) -> Result<Self, DetError> {
        let f = det4(m)?;
        if !f.is_homogeneous() {
            return Err(DetError::NotHomogeneous);
        }
        let picard_plane = GramLattice::from_ints(&[vec![4, 2], vec![2, -4]]).expect("symmetric");
        Ok(QuarticSurfaceModel { f, picard_plane })
    }
}

const BRINKMANN: [[&str; 4]; 4] = [
    ["X", "Y", "Z", "0"],
    ["Y", "Z", "0", "W"],
    ["Z", "0", "W", "X"],
    ["W", "W", "X", "Y"],
];

const FGGL: [[&str; 4]; 4] = [
    ["X", "Z", "Y+Z", "Z+W"],
    ["Y", "Z+W", "X+Y+Z+W", "X+W"],
    ["X+Z", "X+Y+Z+W", "X+Y", "Z"],
    ["X+Y+W", "X+Z", "W", "Z"],
];

fn from_table(t: &[[&str; 4]; 4]) -> LinearMatrix4 {
    let rows: Vec<Vec<&str>> = t.iter().map(|r| r.to_vec()).collect();
    LinearMatrix4::parse(&rows).expect("builtin matrix")
}

pub fn brinkmann() -> LinearMatrix4 {
    from_table(&BRINKMANN)
}

pub fn fggl() -> LinearMatrix4 {
    from_table(&FGGL)
}

/// The named built-in matrices.
pub fn builtin_matrices() -> Vec<(&'static str, LinearMatrix4)> {
    vec![("brinkmann", brinkmann()), ("fggl", fggl())]
}

/// Parses matrix JSON: a 4x4 array of polynomial strings.
pub fn matrix_from_json(text: &str) -> Result<LinearMatrix4, String> {
    let rows: Vec<Vec<String>> = serde_json::from_str(text).map_err(|e| e.to_string())?;
    LinearMatrix4::parse(&rows).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{ideal_membership, zp};
    use proptest::prelude::*;

    fn pz(s: &str) -> PolyZ {
        parse_poly(s, &vars()).unwrap()
    }

    const BRINKMANN_F: &str =
        "-X*Y*Z*W - X^3*Z - Y^3*W - X*W^3 - Y*Z^3 + Y*W^3 + X^2*Y^2 + Z^2*W^2 + X*Z^2*W";

    #[test]
    fn brinkmann_determinant() {
        let f = det4(&brinkmann()).unwrap();
        assert_eq!(f, pz(BRINKMANN_F));
        assert_eq!(f.num_terms(), 9);
    }

    #[test]
    fn trivial_determinants() {
        let diag = LinearMatrix4::parse(&[
            vec!["X", "0", "0", "0"],
            vec!["0", "Y", "0", "0"],
            vec!["0", "0", "Z", "0"],
            vec!["0", "0", "0", "W"],
        ])
        .unwrap();
        assert_eq!(det4(&diag).unwrap(), pz("X*Y*Z*W"));
        let minors = curve_minors(&diag);
        assert_eq!(minors, vec![pz("Y*Z*W"), pz("0"), pz("0"), pz("0")]);
        let zero_row = LinearMatrix4::parse(&[
            vec!["X", "Y", "Z", "W"],
            vec!["0", "0", "0", "0"],
            vec!["Z", "0", "W", "X"],
            vec!["W", "W", "X", "Y"],
        ])
        .unwrap();
        assert!(det4(&zero_row).unwrap().is_zero());
    }

    #[test]
    fn entries_are_validated() {
        let bad = [
            vec!["X^2", "0", "0", "0"],
            vec!["0"; 4],
            vec!["0"; 4],
            vec!["0"; 4],
        ];
        assert_eq!(LinearMatrix4::parse(&bad), Err(DetError::NotLinear(0, 0)));
        let affine = [
            vec!["X+1", "0", "0", "0"],
            vec!["0"; 4],
            vec!["0"; 4],
            vec!["0"; 4],
        ];
        assert_eq!(
            LinearMatrix4::parse(&affine),
            Err(DetError::NotLinear(0, 0))
        );
        let short = [vec!["X"; 4], vec!["X"; 4], vec!["X"; 4]];
        assert_eq!(LinearMatrix4::parse(&short), Err(DetError::Shape));
    }

    #[test]
    fn builtin_entries() {
        let b = brinkmann();
        assert_eq!(b.rows()[0], vec![pz("X"), pz("Y"), pz("Z"), pz("0")]);
        let f = fggl();
        assert_eq!(f.rows()[0], vec![pz("X"), pz("Z"), pz("Y+Z"), pz("Z+W")]);
        assert_eq!(f.entry(3, 0), &pz("X+Y+W"));
        assert_eq!(builtin_matrices().len(), 2);
    }

    #[test]
    fn brinkmann_minors_match_up_to_sign() {
        let minors = curve_minors(&brinkmann());
        let listed = [
            pz("-X^2*Z + Y*Z*W - W^3"),
            pz("Y^2*W - X^2*Y + X*Z*W"),
            pz("-X*Y*W - Y*Z^2 + Z*W^2"),
            pz("-Y*W^2 - X*Z^2"),
        ];
        for g in &listed {
            assert!(minors.iter().any(|m| m == g || *m == -g), "missing {}", g);
        }
        for m in &minors {
            assert!(m.is_homogeneous() && m.degree() == Some(3));
        }
    }

    #[test]
    fn laplace_identity() {
        for (_, m) in builtin_matrices() {
            let minors = curve_minors(&m);
            let names = vars();
            let mut acc = PolyZ::zero(&names);
            for i in 0..4 {
                acc = &acc + &(m.entry(i, 0) * &minors[i]);
            }
            assert_eq!(acc, det4(&m).unwrap());
        }
    }

    #[test]
    fn jacobians() {
        let j = jacobian_ideal(&pz("X*Y*Z*W")).unwrap();
        assert_eq!(
            j,
            vec![
                pz("X*Y*Z*W"),
                pz("Y*Z*W"),
                pz("X*Z*W"),
                pz("X*Y*W"),
                pz("X*Y*Z")
            ]
        );
        let j4 = jacobian_ideal(&pz("X^4")).unwrap();
        assert!(j4[1].reduce_mod_p(2).unwrap().is_zero());
        let jb = jacobian_ideal(&det4(&brinkmann()).unwrap()).unwrap();
        let degrees: Vec<u64> = jb.iter().map(|g| g.degree().unwrap()).collect();
        assert_eq!(degrees, vec![4, 3, 3, 3, 3]);
    }

    #[test]
    fn smoothness_examples() {
        let f = det4(&fggl()).unwrap();
        assert!(is_smooth_mod_p(&f, 2).unwrap());
        assert!(!is_smooth_mod_p(&f, 3).unwrap());
        let b = det4(&brinkmann()).unwrap();
        assert!(!is_smooth_mod_p(&b, 37013).unwrap());
        assert!(is_smooth_mod_p(&b, 101).unwrap());
        assert_eq!(
            singular_prime_scan(&pz("X*Y*Z*W"), &[2, 3, 5]).unwrap(),
            vec![2, 3, 5]
        );
        assert_eq!(is_smooth_mod_p(&pz("2*X^4"), 2), Err(DetError::ZeroModP(2)));
        assert_eq!(
            is_smooth_mod_p(&pz("X^4 + Y"), 5),
            Err(DetError::NotHomogeneous)
        );
        assert!(is_smooth_mod_p(&pz("X^4 + Y^4 + Z^4 + W^4"), 5).unwrap());
        assert!(!is_smooth_mod_p(&pz("X^4 + Y^4 + Z^4 + W^4"), 2).unwrap());
    }

    #[test]
    fn fggl_small_primes() {
        let f = det4(&fggl()).unwrap();
        let primes = zp::primes_in_range(2, 50);
        assert_eq!(singular_prime_scan(&f, &primes).unwrap(), vec![3, 5, 7, 13]);
    }

    #[test]
    fn surface_lies_on_minor_ideal() {
        let m = brinkmann();
        let f = det4(&m).unwrap();
        for p in [2u64, 3, 101, 1009] {
            let minors: Vec<PolyP> = curve_minors(&m)
                .iter()
                .map(|g| g.reduce_mod_p(p).unwrap())
                .collect();
            let gb = buchberger(&minors).unwrap();
            assert!(ideal_membership(&gb, &f.reduce_mod_p(p).unwrap()).unwrap());
        }
    }

    #[test]
    fn json_matrix() {
        let text = r#"[["X","Y","Z","0"],["Y","Z","0","W"],["Z","0","W","X"],["W","W","X","Y"]]"#;
        assert_eq!(matrix_from_json(text).unwrap(), brinkmann());
        assert!(matrix_from_json("[[1]]").is_err());
    }

    fn arb_linear() -> impl Strategy<Value = String> {
        prop::collection::vec(-3i64..4, 4).prop_map(|c| {
            let terms: Vec<String> = c
                .iter()
                .zip(VARIABLES)
                .filter(|(k, _)| **k != 0)
                .map(|(k, v)| format!("({})*{}", k, v))
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            }
        })
    }

    fn arb_matrix() -> impl Strategy<Value = LinearMatrix4> {
        prop::collection::vec(prop::collection::vec(arb_linear(), 4), 4)
            .prop_map(|rows| LinearMatrix4::parse(&rows).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn leibniz_equals_cofactor(m in arb_matrix()) {
            prop_assert_eq!(leibniz(&m.entries, m.vars()), cofactor(&m.entries, m.vars()));
            let minors = curve_minors(&m);
            let names = vars();
            let mut acc = PolyZ::zero(&names);
            for i in 0..4 {
                acc = &acc + &(m.entry(i, 0) * &minors[i]);
            }
            prop_assert_eq!(acc, det4(&m).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn smoothness_ignores_generator_order(
            perm in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(),
            p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]),
        ) {
            let f = det4(&fggl()).unwrap();
            let gens: Vec<PolyP> = jacobian_ideal(&f).unwrap().iter().map(|g| g.reduce_mod_p(p).unwrap()).collect();
            let shuffled: Vec<PolyP> = perm.iter().map(|&i| gens[i].clone()).collect();
            prop_assert_eq!(smooth_from_generators(&shuffled).unwrap(), is_smooth_mod_p(&f, p).unwrap());
        }
    }
}
