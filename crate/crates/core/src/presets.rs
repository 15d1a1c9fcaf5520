//! Named data bundles shared by the CLI and the tests.

use num_bigint::BigInt;
use thiserror::Error;

use crate::asymptotics::{BettiTable, SurfaceData};
use crate::determinantal::{brinkmann, fggl, LinearMatrix4};
use crate::hilbert_kunz::{PresentationMatrix, RingPresentation};
use crate::lattice::{int_matrix, DivClass, IntMatrix};
use crate::poly::PolyP;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown preset '{name}' (expected one of: {expected})")]
pub struct UnknownPreset {
    pub name: String,
    pub expected: String,
}

/// `P^1 x P^1` in `P^3` with the kernel of `O^4 -> O(1)` written as
/// line bundles plus a Betti table.
#[derive(Debug, Clone)]
pub struct QuadricPreset {
    pub surface: SurfaceData,
    pub summands: Vec<DivClass>,
    pub betti: BettiTable,
    pub dim: u32,
    pub hd: BigInt,
}

/// The rank-2 quartic lattice with basis `H, D`, the Fibonacci isometry
/// and the line bundle `L = -2H + D`.
#[derive(Debug, Clone)]
pub struct QuarticLatticePreset {
    pub surface: SurfaceData,
    pub d: DivClass,
    pub l: DivClass,
    pub isometry: IntMatrix,
}

#[derive(Debug, Clone)]
pub enum Preset {
    Quadric(QuadricPreset),
    QuarticLattice(QuarticLatticePreset),
    Matrix(&'static str, LinearMatrix4),
}

pub const PRESET_NAMES: [&str; 4] = ["quadric", "quartic-lattice", "brinkmann", "fggl"];

pub fn quadric() -> QuadricPreset {
    QuadricPreset {
        surface: SurfaceData::quadric(),
        summands: vec![
            DivClass::from_ints(&[-4, -2]),
            DivClass::from_ints(&[-2, -4]),
        ],
        betti: BettiTable::from_levels(vec![vec![0], vec![1; 4], vec![2; 5]]).expect("valid table"),
        dim: 2,
        hd: BigInt::from(2),
    }
}

pub fn quartic_lattice() -> QuarticLatticePreset {
    QuarticLatticePreset {
        surface: SurfaceData::k3_quartic(),
        d: DivClass::from_ints(&[0, 1]),
        l: DivClass::from_ints(&[-2, 1]),
        isometry: int_matrix(&[vec![1, 1], vec![1, 2]]),
    }
}

pub fn preset(name: &str) -> Result<Preset, UnknownPreset> {
    match name {
        "quadric" => Ok(Preset::Quadric(quadric())),
        "quartic-lattice" => Ok(Preset::QuarticLattice(quartic_lattice())),
        "brinkmann" => Ok(Preset::Matrix("brinkmann", brinkmann())),
        "fggl" => Ok(Preset::Matrix("fggl", fggl())),
        _ => Err(UnknownPreset {
            name: name.to_string(),
            expected: PRESET_NAMES.join(", "),
        }),
    }
}

/// The quadric cone `F_p[X,Y,Z,W]/(XY - ZW)`.
pub fn quadric_ring(p: u64) -> RingPresentation {
    RingPresentation::parse(p, &["X", "Y", "Z", "W"], &["X*Y - Z*W"], None).expect("valid ring")
}

pub const REDUCTION_FIXTURES: [&str; 2] = ["cyclic", "residue-pair"];

/// Block-diagonal presentations over `F_2[X,Y]`:
/// `cyclic` is `R/(X^2, XY, Y^3)` and `residue-pair` is `k^2`.
pub fn reduction_fixture(
    name: &str,
) -> Result<(RingPresentation, PresentationMatrix), UnknownPreset> {
    let r = RingPresentation::polynomial_ring(2, &["X", "Y"]).expect("valid ring");
    let parse = |s: &str| r.parse_ideal(s).expect("valid ideal");
    let pm = match name {
        "cyclic" => {
            let row = parse("X^2, X*Y, Y^3");
            PresentationMatrix::new(vec![row.clone()], row)
        }
        "residue-pair" => {
            let z = PolyP::zero(2, 2);
            let xy = parse("X, Y");
            let (x, y) = (xy[0].clone(), xy[1].clone());
            PresentationMatrix::new(
                vec![
                    vec![x.clone(), z.clone(), y.clone(), z.clone()],
                    vec![z.clone(), x, z, y],
                ],
                xy,
            )
        }
        _ => {
            return Err(UnknownPreset {
                name: name.to_string(),
                expected: REDUCTION_FIXTURES.join(", "),
            });
        }
    };
    Ok((r, pm.expect("valid presentation")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::QuadNum;
    use crate::lattice::{antiample_threshold, is_isometry, positive_boundary};

    #[test]
    fn quadric_thresholds_are_two() {
        let q = quadric();
        for l in &q.summands {
            let b = antiample_threshold(&q.surface.lattice, &q.surface.h, l).unwrap();
            assert_eq!(b, QuadNum::from_integer(2));
        }
    }

    #[test]
    fn quartic_lattice_boundary() {
        let q = quartic_lattice();
        let b = positive_boundary(&q.surface.lattice, &q.surface.h, &q.d).unwrap();
        assert_eq!(b.lower, "1/2 - 1/2*sqrt(5)".parse().unwrap());
        assert_eq!(b.upper, "1/2 + 1/2*sqrt(5)".parse().unwrap());
        assert!(is_isometry(&q.surface.lattice, &q.isometry).unwrap());
    }

    #[test]
    fn lookup() {
        for name in PRESET_NAMES {
            assert!(preset(name).is_ok());
        }
        let err = preset("cubic").unwrap_err();
        assert!(err.to_string().contains("quartic-lattice"));
        for name in REDUCTION_FIXTURES {
            assert!(reduction_fixture(name).is_ok());
        }
        assert!(reduction_fixture("x").is_err());
    }
}
