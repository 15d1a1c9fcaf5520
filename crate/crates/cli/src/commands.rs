use std::fs;

use hklab_core::asymptotics::{
    betti_term, finite_pd_hk, h1_limit, limit_top, normalize_orthogonal, oracle_convergence,
    parameter_hk, rational_decimal, splitting_hk, BettiTable, SplitBundle, SurfaceData,
};
use hklab_core::determinantal::{
    curve_minors, det4, is_smooth_mod_p, matrix_from_json, LinearMatrix4,
};
use hklab_core::exact_arith::QuadNum;
use hklab_core::hilbert_kunz::{
    hk_estimate, hk_series, is_monotone, verify_reduction, HkExperiment,
};
use hklab_core::lattice::{
    ample_threshold, antiample_threshold, fibonacci_orbit, positive_boundary, represents,
    restricted_square, DivClass, GramLattice, IntMatrix,
};
use hklab_core::poly::{buchberger, ideal_membership, PolyP, PolyZ};
use hklab_core::presets::{self, Preset};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::inputs;
use crate::report::{bigint_list, fraction, join, Report};
use crate::{
    compute, usage, CliError, ConeArgs, HkIdealArgs, HkReduceArgs, LatticeArgs, MatrixArgs,
    MinorsArgs, OracleArgs, OrbitArgs, ScanArgs, SplittingArgs,
};

const DECIMALS: usize = 20;

pub fn hk_ideal(a: &HkIdealArgs) -> Result<Report, CliError> {
    let exp = match &a.experiment {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("{}: {}", path.display(), e)))?;
            serde_json::from_str::<HkExperiment>(&text).map_err(usage)?
        }
        None => HkExperiment {
            p: a.p.ok_or_else(|| usage("--p is required"))?,
            variables: inputs::words(&a.vars),
            relations: inputs::words(&a.ring),
            ideal: inputs::words(
                a.ideal
                    .as_deref()
                    .ok_or_else(|| usage("--ideal is required"))?,
            ),
            e_max: a.emax,
            dim: a.dim,
        },
    };
    let (ring, gens) = exp.build().map_err(usage)?;
    if gens.is_empty() {
        return Err(usage("the ideal needs at least one generator"));
    }
    let mut r = Report::new("hk-ideal");
    r.input("p", exp.p);
    r.input("variables", exp.variables.join(", "));
    r.input(
        "relations",
        if exp.relations.is_empty() {
            "none".into()
        } else {
            exp.relations.join(", ")
        },
    );
    r.input("ideal", exp.ideal.join(", "));
    r.input("emax", exp.e_max);
    r.input("dim", ring.dim());

    let series = hk_series(&ring, &gens, exp.e_max).map_err(compute)?;
    r.columns = vec!["e", "q", "length", "ratio", "ratio_decimal"];
    r.csv_columns = vec!["e", "q", "length", "ratio"];
    for s in &series.samples {
        let ratio = s.ratio(series.dim);
        r.row(vec![
            s.e.to_string(),
            s.q.to_string(),
            s.length.to_string(),
            fraction(&ratio),
            rational_decimal(&ratio, DECIMALS),
        ]);
    }
    r.check(is_monotone(&series), || {
        "lengths decrease along the Frobenius tower".into()
    });
    if series.samples.len() >= 2 {
        let est = hk_estimate(&series).map_err(compute)?;
        r.exact("ratio_at_max", &est.ratio_at_max);
        r.exact("difference_estimate", &est.difference_estimate);
        r.approx(
            "difference_estimate",
            rational_decimal(&est.difference_estimate, DECIMALS),
        );
    }
    Ok(r)
}

pub fn hk_reduce(a: &HkReduceArgs) -> Result<Report, CliError> {
    let (ring, pm) = presets::reduction_fixture(&a.fixture).map_err(usage)?;
    let es = inputs::u32_set(&a.e).map_err(usage)?;
    let mut r = Report::new("hk-reduce");
    r.input("fixture", &a.fixture);
    r.input("p", ring.characteristic());
    r.input("e", join(&es, ", "));
    let checks = verify_reduction(&ring, &pm, &es).map_err(compute)?;
    r.columns = vec![
        "e",
        "q",
        "lhs",
        "hkf_annihilator",
        "hkf_module",
        "rhs",
        "equal",
    ];
    for c in &checks {
        r.row(vec![
            c.e.to_string(),
            c.q.to_string(),
            c.lhs.to_string(),
            c.hkf_annihilator.to_string(),
            c.hkf_module.to_string(),
            c.rhs.to_string(),
            c.equal.to_string(),
        ]);
        r.check(c.equal, || {
            format!("reduction identity fails at e = {}", c.e)
        });
    }
    r.exact(
        "identity",
        if checks.iter().all(|c| c.equal) {
            "holds"
        } else {
            "fails"
        },
    );
    Ok(r)
}

struct LatticeChoice {
    name: String,
    lattice: GramLattice,
    h: DivClass,
    preset: Option<Preset>,
}

fn lattice_choice(a: &LatticeArgs, default: &str) -> Result<LatticeChoice, CliError> {
    if let Some(g) = &a.gram {
        let lattice = inputs::gram(g).map_err(usage)?;
        let h = inputs::class(a.h.as_deref().unwrap_or_default()).map_err(usage)?;
        if h.rank() != lattice.rank() {
            return Err(usage("--h has the wrong rank"));
        }
        return Ok(LatticeChoice {
            name: "custom".into(),
            lattice,
            h,
            preset: None,
        });
    }
    let name = a.preset.as_deref().unwrap_or(default);
    let preset = presets::preset(name).map_err(usage)?;
    let surface = match &preset {
        Preset::Quadric(q) => &q.surface,
        Preset::QuarticLattice(q) => &q.surface,
        Preset::Matrix(..) => return Err(usage(format!("preset {} has no lattice", name))),
    };
    let (lattice, mut h) = (surface.lattice.clone(), surface.h.clone());
    if let Some(text) = &a.h {
        h = inputs::class(text).map_err(usage)?;
    }
    Ok(LatticeChoice {
        name: name.to_string(),
        lattice,
        h,
        preset: Some(preset),
    })
}

/// `(a±b*sqrt(d))/c` when the two boundary roots are conjugate.
fn plus_minus(lower: &QuadNum, upper: &QuadNum) -> String {
    if upper.is_rational() || *lower != upper.conjugate() {
        return format!("{}, {}", lower.to_pretty_string(), upper.to_pretty_string());
    }
    let pretty = upper.to_pretty_string();
    if upper.rational_part() == &BigRational::from_integer(0.into()) {
        format!("±{}", pretty)
    } else {
        pretty.replacen('+', "±", 1)
    }
}

fn check_rank(c: &DivClass, lat: &GramLattice, flag: &str) -> Result<(), CliError> {
    if c.rank() == lat.rank() {
        Ok(())
    } else {
        Err(usage(format!(
            "{} has rank {}, lattice has rank {}",
            flag,
            c.rank(),
            lat.rank()
        )))
    }
}

pub fn cone_threshold(a: &ConeArgs) -> Result<Report, CliError> {
    let choice = lattice_choice(&a.lattice, "quartic-lattice")?;
    let (lat, h) = (&choice.lattice, &choice.h);
    let (default_ls, default_d) = match &choice.preset {
        Some(Preset::Quadric(q)) => (q.summands.clone(), None),
        Some(Preset::QuarticLattice(q)) => (vec![q.l.clone()], Some(q.d.clone())),
        _ => (vec![], None),
    };
    let ls = if a.l.is_empty() {
        default_ls
    } else {
        a.l.iter()
            .map(|s| inputs::class(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(usage)?
    };
    let d = match &a.d {
        Some(s) => Some(inputs::class(s).map_err(usage)?),
        None => default_d,
    };
    for l in &ls {
        check_rank(l, lat, "--l")?;
    }
    if let Some(d) = &d {
        check_rank(d, lat, "--d")?;
    }

    let mut r = Report::new("cone-threshold");
    r.input("lattice", &choice.name);
    r.input(
        "gram",
        join(
            &lat.gram()
                .iter()
                .map(|row| bigint_list(row))
                .collect::<Vec<_>>(),
            " ",
        ),
    );
    r.input("H", h);
    if let Some(d) = &d {
        r.input("D", d);
    }

    r.columns = vec![
        "L",
        "L^2",
        "H.L",
        "antiample",
        "ample",
        "(bH+L)^2",
        "antiample_decimal",
    ];
    let mut thresholds = Vec::new();
    for l in &ls {
        let b = antiample_threshold(lat, h, l).map_err(compute)?;
        let c = ample_threshold(lat, h, l).map_err(compute)?;
        let sq = restricted_square(lat, h, l, &b).map_err(compute)?;
        r.check(sq.is_zero(), || format!("(bH+L)^2 = {} for L = {}", sq, l));
        r.row(vec![
            l.to_string(),
            lat.square(l).map_err(compute)?.to_string(),
            lat.pair(h, l).map_err(compute)?.to_string(),
            b.to_string(),
            c.to_string(),
            sq.to_string(),
            b.to_decimal_string(DECIMALS),
        ]);
        thresholds.push(b.to_pretty_string());
    }
    if !thresholds.is_empty() {
        r.exact("thresholds", thresholds.join(", "));
    }
    if let Some(d) = &d {
        let bd = positive_boundary(lat, h, d).map_err(compute)?;
        r.exact("boundary", plus_minus(&bd.lower, &bd.upper));
        r.exact("boundary_lower", &bd.lower);
        r.exact("boundary_upper", &bd.upper);
        r.approx("boundary_lower", bd.lower.to_decimal_string(DECIMALS));
        r.approx("boundary_upper", bd.upper.to_decimal_string(DECIMALS));
    }
    Ok(r)
}

pub fn cone_orbit(a: &OrbitArgs) -> Result<Report, CliError> {
    let choice = lattice_choice(&a.lattice, "quartic-lattice")?;
    let lat = &choice.lattice;
    let m: IntMatrix = match (&a.matrix, &choice.preset) {
        (Some(s), _) => inputs::int_matrix(s).map_err(usage)?,
        (None, Some(Preset::QuarticLattice(q))) => q.isometry.clone(),
        _ => return Err(usage("--matrix is required for this lattice")),
    };
    if m.len() != lat.rank() {
        return Err(usage("--matrix has the wrong size"));
    }
    let start = match &a.start {
        Some(s) => inputs::class(s).map_err(usage)?,
        None => choice.h.clone(),
    };
    check_rank(&start, lat, "--start")?;

    let mut r = Report::new("cone-orbit");
    r.input("lattice", &choice.name);
    r.input(
        "matrix",
        join(
            &m.iter().map(|row| bigint_list(row)).collect::<Vec<_>>(),
            " ",
        ),
    );
    r.input("start", &start);
    r.input("steps", a.steps);
    if let Some(c) = a.represents {
        r.input("represents", c);
        r.input("bound", a.bound);
    }

    let orbit = fibonacci_orbit(lat, &m, &start, a.steps).map_err(compute)?;
    r.exact("isometry", true);
    r.columns = vec![
        "step",
        "class",
        "self_intersection",
        "slope_gap",
        "slope_gap_decimal",
    ];
    for p in &orbit {
        let (gap, gap_dec) = match &p.slope_gap {
            Some(g) => (g.to_string(), g.to_decimal_string(DECIMALS)),
            None => ("-".into(), "-".into()),
        };
        r.row(vec![
            p.step.to_string(),
            p.class.to_string(),
            p.self_intersection.to_string(),
            gap,
            gap_dec,
        ]);
    }
    let first = &orbit[0].self_intersection;
    r.check(orbit.iter().all(|p| &p.self_intersection == first), || {
        "self-intersection changes along the orbit".into()
    });
    r.exact("self_intersection", first);
    if let Some(c) = a.represents {
        if a.bound < 1 {
            return Err(usage("--bound must be positive"));
        }
        let found = represents(lat, c, a.bound, a.bound).map_err(compute)?;
        let shown = match found {
            Some(w) => format!("({}, {}, {})", w.n1, w.n2, w.m),
            None => "none".into(),
        };
        r.exact(&format!("represents({})", c), shown);
    }
    Ok(r)
}

fn parse_degrees(s: &str) -> Result<[i64; 3], CliError> {
    let v: Vec<i64> = inputs::int_list(s).map_err(usage)?;
    match v.as_slice() {
        [a, b, c] if *a > 0 && *b > 0 && *c > 0 => Ok([*a, *b, *c]),
        _ => Err(usage("--koszul needs three positive degrees")),
    }
}

pub fn limit_splitting(a: &SplittingArgs) -> Result<Report, CliError> {
    let q = match presets::preset(&a.preset).map_err(usage)? {
        Preset::Quadric(q) => q,
        _ => {
            return Err(usage(format!(
                "preset {} has no split bundle data",
                a.preset
            )))
        }
    };
    let (lat, h) = (&q.surface.lattice, &q.surface.h);
    let mut r = Report::new("limit-splitting");
    r.input("preset", &a.preset);
    r.input("dim", q.dim);
    r.input("H^d", &q.hd);
    r.columns = vec!["part", "class", "threshold", "value"];

    if let Some(k) = &a.koszul {
        let d = parse_degrees(k)?;
        r.input("koszul", join(&d, ", "));
        let table = BettiTable::koszul(&d).map_err(compute)?;
        let finite = finite_pd_hk(q.dim, &q.hd, &table).map_err(compute)?;
        let closed = parameter_hk(2, d[0], d[1], d[2]).map_err(compute)?;
        // The top syzygy R(-d1-d2-d3) as a line bundle plus the rest as a Betti term.
        let top = h.scale(&BigInt::from(-(d[0] + d[1] + d[2])));
        let bundle = SplitBundle::from_lattice(lat, h, vec![top.clone()]).map_err(compute)?;
        let mixed = vec![q.surface.mixed(&top).map_err(compute)?];
        let split = splitting_hk(
            q.dim,
            &q.hd,
            &bundle,
            &mixed,
            &table.truncate(q.dim as usize),
        )
        .map_err(compute)?;
        r.row(vec![
            "finite_pd".into(),
            "-".into(),
            "-".into(),
            finite.to_string(),
        ]);
        r.row(vec![
            "split".into(),
            top.to_string(),
            bundle.thresholds[0].to_string(),
            split.to_string(),
        ]);
        r.row(vec![
            "closed_form".into(),
            "-".into(),
            "-".into(),
            closed.to_string(),
        ]);
        let agree = split == QuadNum::rational(finite.clone()) && finite == closed;
        r.check(agree, || "Koszul computations disagree".into());
        r.exact("hk", finite);
        return Ok(r);
    }

    let bundle = SplitBundle::from_lattice(lat, h, q.summands.clone()).map_err(compute)?;
    let mixed = q
        .summands
        .iter()
        .map(|l| q.surface.mixed(l))
        .collect::<Result<Vec<_>, _>>()
        .map_err(compute)?;
    for ((l, b), m) in bundle.summands.iter().zip(&bundle.thresholds).zip(&mixed) {
        let v = limit_top(q.dim, b, m).map_err(compute)?;
        r.row(vec![
            "line_bundle".into(),
            l.to_string(),
            b.to_string(),
            v.to_string(),
        ]);
    }
    let betti = betti_term(q.dim, &q.hd, &q.betti).map_err(compute)?;
    r.row(vec![
        "betti".into(),
        "-".into(),
        "-".into(),
        betti.to_string(),
    ]);
    let total = splitting_hk(q.dim, &q.hd, &bundle, &mixed, &q.betti).map_err(compute)?;
    r.exact("hk", &total);
    r.approx("hk", total.to_decimal_string(DECIMALS));
    Ok(r)
}

pub fn limit_oracle(a: &OracleArgs) -> Result<Report, CliError> {
    let choice = lattice_choice(&a.lattice, "quartic-lattice")?;
    let (surface, default_l, d) = match &choice.preset {
        Some(Preset::QuarticLattice(q)) => {
            (q.surface.clone(), Some(q.l.clone()), Some(q.d.clone()))
        }
        Some(Preset::Quadric(q)) => (q.surface.clone(), Some(q.summands[0].clone()), None),
        _ => {
            let s = SurfaceData::new(
                choice.lattice.clone(),
                choice.h.clone(),
                DivClass::zero(choice.lattice.rank()),
                2,
            )
            .map_err(usage)?;
            (s, None, None)
        }
    };
    let l = match &a.l {
        Some(s) => inputs::class(s).map_err(usage)?,
        None => default_l.ok_or_else(|| usage("--l is required for a custom lattice"))?,
    };
    check_rank(&l, &surface.lattice, "--l")?;
    let ns: Vec<u64> = inputs::int_list(&a.n).map_err(usage)?;
    if ns.contains(&0) {
        return Err(usage("--n entries must be positive"));
    }

    let mut r = Report::new("limit-oracle");
    r.input("lattice", &choice.name);
    r.input("H", &surface.h);
    r.input("K", &surface.k);
    r.input("chi(O)", &surface.chi_o);
    r.input("L", &l);
    r.input("n", join(&ns, ", "));

    let b = antiample_threshold(&surface.lattice, &surface.h, &l).map_err(compute)?;
    let (limit, rows) = oracle_convergence(&surface, &l, &ns).map_err(compute)?;
    let limit_dec = limit.to_decimal_string(50);
    r.columns = vec![
        "n",
        "oracle_value_num",
        "oracle_value_den",
        "limit_decimal_50digits",
        "error_decimal",
        "n_times_error",
    ];
    r.csv_columns = vec![
        "n",
        "oracle_value_num",
        "oracle_value_den",
        "limit_decimal_50digits",
    ];
    for row in &rows {
        let scaled = row
            .error
            .abs()
            .scale(&BigRational::from_integer(row.n.into()));
        r.row(vec![
            row.n.to_string(),
            row.value.numer().to_string(),
            row.value.denom().to_string(),
            limit_dec.clone(),
            row.error.to_decimal_string(DECIMALS),
            scaled.to_decimal_string(12),
        ]);
    }
    r.exact("threshold", &b);
    r.exact("limit", &limit);
    r.exact("limit_pretty", limit.to_pretty_string());
    r.exact("sqrt_component", limit.sqrt_coefficient());
    if let Some(d) = d {
        let orth = normalize_orthogonal(&surface.lattice, &surface.h, &d).map_err(compute)?;
        let h1 = h1_limit(&surface.lattice, &surface.h, &orth).map_err(compute)?;
        r.exact("h1_orthogonal_class", &orth);
        r.exact("h1_natural_sum", h1.natural_sum.to_pretty_string());
        r.exact("h1_integer_sum", h1.integer_sum.to_pretty_string());
    }
    r.approx("limit", limit_dec);
    Ok(r)
}

fn load_matrix(a: &MatrixArgs) -> Result<(String, LinearMatrix4), CliError> {
    match (&a.preset, &a.matrix) {
        (Some(name), _) => match presets::preset(name).map_err(usage)? {
            Preset::Matrix(n, m) => Ok((n.to_string(), m)),
            _ => Err(usage(format!("preset {} is not a matrix", name))),
        },
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("{}: {}", path.display(), e)))?;
            let m = matrix_from_json(&text).map_err(usage)?;
            Ok((path.display().to_string(), m))
        }
        (None, None) => Err(usage("--preset or --matrix is required")),
    }
}

fn matrix_rows(r: &mut Report, m: &LinearMatrix4) {
    r.columns = vec!["row", "c1", "c2", "c3", "c4"];
    for (i, row) in m.rows().iter().enumerate() {
        let mut cells = vec![(i + 1).to_string()];
        cells.extend(row.iter().map(|f| f.to_string()));
        r.row(cells);
    }
}

pub fn quartic_det(a: &MatrixArgs) -> Result<Report, CliError> {
    let (name, m) = load_matrix(a)?;
    let mut r = Report::new("quartic-det");
    r.input("matrix", &name);
    matrix_rows(&mut r, &m);
    let f = det4(&m).map_err(compute)?;
    r.exact("det", &f);
    r.exact("terms", f.num_terms());
    r.exact("degree", f.degree().map_or("-".into(), |d| d.to_string()));
    Ok(r)
}

pub fn quartic_scan(a: &ScanArgs) -> Result<Report, CliError> {
    let (name, m) = load_matrix(&a.source)?;
    let mut primes = inputs::primes(&a.primes).map_err(usage)?;
    let mut r = Report::new("quartic-scan");
    r.input("matrix", &name);
    r.input("primes", &a.primes);
    if let Some(k) = a.sample {
        if k > primes.len() {
            return Err(usage(format!(
                "--sample {} exceeds the {} primes available",
                k,
                primes.len()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let mut idx = rand::seq::index::sample(&mut rng, primes.len(), k).into_vec();
        idx.sort_unstable();
        primes = idx.into_iter().map(|i| primes[i]).collect();
        r.input("sample", k);
        r.input("seed", a.seed);
    }
    r.input("tested", primes.len());
    let f = det4(&m).map_err(compute)?;
    let smooth = primes
        .par_iter()
        .map(|&p| is_smooth_mod_p(&f, p))
        .collect::<Result<Vec<_>, _>>()
        .map_err(compute)?;
    r.columns = vec!["p", "smooth"];
    r.hide_rows = true;
    let mut singular = Vec::new();
    for (p, s) in primes.iter().zip(&smooth) {
        r.row(vec![p.to_string(), s.to_string()]);
        if !s {
            singular.push(*p);
        }
    }
    r.exact(
        "singular",
        if singular.is_empty() {
            "none".into()
        } else {
            join(&singular, " ")
        },
    );
    Ok(r)
}

pub fn quartic_minors(a: &MinorsArgs) -> Result<Report, CliError> {
    let (name, m) = load_matrix(&a.source)?;
    let primes = inputs::primes(&a.primes).map_err(usage)?;
    let mut r = Report::new("quartic-minors");
    r.input("matrix", &name);
    r.input("primes", join(&primes, ", "));
    let f = det4(&m).map_err(compute)?;
    let minors = curve_minors(&m);
    r.columns = vec!["i", "minor"];
    for (i, g) in minors.iter().enumerate() {
        r.row(vec![(i + 1).to_string(), g.to_string()]);
    }
    let names = f.vars().to_vec();
    let laplace = (0..4).fold(PolyZ::zero(&names), |acc, i| {
        &acc + &(m.entry(i, 0) * &minors[i])
    });
    r.check(laplace == f, || {
        "first-column expansion differs from the determinant".into()
    });
    r.exact("laplace", if laplace == f { "holds" } else { "fails" });
    for p in primes {
        let fp = f.reduce_mod_p(p).map_err(compute)?;
        let gens = minors
            .iter()
            .map(|g| g.reduce_mod_p(p))
            .collect::<Result<Vec<PolyP>, _>>()
            .map_err(compute)?;
        let gb = buchberger(&gens).map_err(compute)?;
        let member = ideal_membership(&gb, &fp).map_err(compute)?;
        r.check(member, || {
            format!("det is not in the minor ideal mod {}", p)
        });
        r.exact(&format!("member_mod_{}", p), member);
    }
    Ok(r)
}
