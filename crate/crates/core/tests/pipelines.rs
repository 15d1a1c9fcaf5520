use hklab_core::asymptotics::{
    h1_limit, h1_sums, limit_surface, normalize_orthogonal, oracle_convergence, splitting_hk,
    SplitBundle,
};
use hklab_core::determinantal::{brinkmann, fggl, singular_prime_scan, QuarticSurfaceModel};
use hklab_core::exact_arith::QuadNum;
use hklab_core::hilbert_kunz::{hk_series, hkf_ideal, RingPresentation};
use hklab_core::lattice::{antiample_threshold, DivClass};
use hklab_core::poly::{buchberger, count_standard_monomials, frobenius_power, zp};
use hklab_core::presets::{self, quadric_ring};
use num_bigint::BigInt;
use num_rational::BigRational;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn quadric_lengths_in_several_characteristics() {
    for (p, e_max) in [(2u64, 4u32), (3, 3), (5, 2), (7, 2)] {
        let ring = quadric_ring(p);
        let m = ring.parse_ideal("X, Y, Z, W").unwrap();
        for s in hk_series(&ring, &m, e_max).unwrap().samples {
            let q = s.q as u128;
            assert_eq!(
                3 * s.length as u128,
                4 * q * q * q - q,
                "p = {}, q = {}",
                p,
                s.q
            );
        }
    }
}

#[test]
fn hkf_matches_manual_frobenius_and_colength() {
    let ring = quadric_ring(3);
    let gens = ring.parse_ideal("X, Y, Z - W").unwrap();
    for e in 0..3 {
        let q = 3u64.pow(e);
        let mut all = ring.relations().to_vec();
        all.extend(frobenius_power(&gens, q).unwrap());
        let manual = count_standard_monomials(&buchberger(&all).unwrap()).unwrap();
        assert_eq!(hkf_ideal(&ring, &gens, e).unwrap().length, manual);
        assert_eq!(manual as u128, 2 * (q as u128).pow(3));
    }
}

#[test]
fn polynomial_ring_maximal_ideal_is_q_to_the_n() {
    let ring = RingPresentation::polynomial_ring(5, &["A", "B", "C"]).unwrap();
    let m = ring.parse_ideal("A, B, C").unwrap();
    for s in hk_series(&ring, &m, 2).unwrap().samples {
        assert_eq!(s.length, s.q.pow(3));
    }
}

#[test]
fn quartic_chain_from_threshold_to_oracle() {
    let q = presets::quartic_lattice();
    let s = &q.surface;
    let b = antiample_threshold(&s.lattice, &s.h, &q.l).unwrap();
    let m = s.mixed(&q.l).unwrap();
    let limit = limit_surface(&b, &m[2], &m[1], &m[0]).unwrap();
    let (oracle_limit, rows) = oracle_convergence(s, &q.l, &[8, 32, 128, 512]).unwrap();
    assert_eq!(limit, oracle_limit);
    let errs: Vec<QuadNum> = rows.iter().map(|r| r.error.abs()).collect();
    for w in errs.windows(2) {
        assert!(w[1].checked_sub(&w[0]).unwrap().sign() < 0);
    }
}

#[test]
fn h1_sums_approach_their_limits() {
    let q = presets::quartic_lattice();
    let lat = &q.surface.lattice;
    let d = normalize_orthogonal(lat, &q.surface.h, &q.d).unwrap();
    assert_eq!(d, DivClass::from_ints(&[-1, 2]));
    let lim = h1_limit(lat, &q.surface.h, &d).unwrap();
    let mut prev: Option<QuadNum> = None;
    for n in [4u64, 16, 64, 256] {
        let s = h1_sums(lat, &q.surface.h, &d, n).unwrap();
        let n3 = BigRational::from_integer(BigInt::from(n).pow(3));
        assert_eq!(
            s.integer.clone(),
            s.natural.clone() * rat(2, 1) - &s.zero_term
        );
        let err = lim.natural_sum.add_rational(&-(s.natural / &n3)).abs();
        if let Some(p) = prev {
            assert!(err.checked_sub(&p).unwrap().sign() < 0, "n = {}", n);
        }
        prev = Some(err);
    }
}

#[test]
fn quadric_preset_pipeline_equals_four_thirds() {
    let q = presets::quadric();
    let bundle =
        SplitBundle::from_lattice(&q.surface.lattice, &q.surface.h, q.summands.clone()).unwrap();
    let mixed: Vec<_> = q
        .summands
        .iter()
        .map(|l| q.surface.mixed(l).unwrap())
        .collect();
    let v = splitting_hk(q.dim, &q.hd, &bundle, &mixed, &q.betti).unwrap();
    assert_eq!(v, QuadNum::rational(rat(4, 3)));
    // The same value the brute-force series tends to.
    let ring = quadric_ring(2);
    let series = hk_series(&ring, &ring.parse_ideal("X, Y, Z, W").unwrap(), 4).unwrap();
    let last = series.samples.last().unwrap().ratio(3);
    assert!(v.add_rational(&-last).sign() > 0);
}

#[test]
fn determinantal_models_share_the_quartic_lattice() {
    for m in [brinkmann(), fggl()] {
        let model = QuarticSurfaceModel::from_matrix(&m).unwrap();
        assert_eq!(
            model.picard_plane,
            presets::quartic_lattice().surface.lattice
        );
        assert_eq!(model.f.degree(), Some(4));
    }
}

#[test]
fn fggl_scan_between_100_and_500() {
    let f = QuarticSurfaceModel::from_matrix(&fggl()).unwrap().f;
    assert_eq!(
        singular_prime_scan(&f, &zp::primes_in_range(100, 500)).unwrap(),
        vec![443]
    );
}
