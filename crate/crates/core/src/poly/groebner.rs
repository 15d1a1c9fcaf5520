use std::cmp::Ordering;

use super::polyp::{sub_scaled, Term};
use super::zp;
use super::{Monomial, MonomialOrder, PolyError, PolyP};

/// A reduced Gröbner basis over `F_p`.
///
/// Generators are monic and sorted by ascending leading monomial under the
/// basis order. The zero ideal has no generators; the unit ideal is `{1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    p: u64,
    nvars: usize,
    order: MonomialOrder,
    // Each polynomial's terms sorted descending under `order`.
    polys: Vec<Vec<Term>>,
}

impl GroebnerBasis {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.polys.len() == 1 && self.polys[0][0].0.is_one()
    }

    pub fn generators(&self) -> Vec<PolyP> {
        self.polys
            .iter()
            .map(|t| PolyP::from_unsorted(self.p, self.nvars, t.clone()))
            .collect()
    }

    /// Leading monomials under the basis order, in generator order.
    pub fn lead_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|t| t[0].0).collect()
    }

    fn check_ring(&self, f: &PolyP) -> Result<(), PolyError> {
        if f.modulus() != self.p || f.nvars() != self.nvars {
            Err(PolyError::RingMismatch)
        } else {
            Ok(())
        }
    }
}

/// Fully reduces `f` modulo the monic polynomials `basis[i]` with `active[i]`.
fn reduce(
    f: Vec<Term>,
    basis: &[Vec<Term>],
    active: &[bool],
    p: u64,
    order: MonomialOrder,
) -> Vec<Term> {
    let mut out = Vec::new();
    let mut rest = f;
    let mut pos = 0;
    while pos < rest.len() {
        let (m, c) = rest[pos];
        let divisor = basis
            .iter()
            .zip(active)
            .find(|(g, &a)| a && g[0].0.divides(&m))
            .map(|(g, _)| g);
        match divisor {
            Some(g) => {
                let t = m.div(&g[0].0);
                rest = sub_scaled(&rest[pos..], c, &t, g, p, order);
                pos = 0;
            }
            None => {
                out.push(rest[pos]);
                pos += 1;
            }
        }
    }
    out
}

fn make_monic(mut f: Vec<Term>, p: u64) -> Vec<Term> {
    if let Some(&(_, c)) = f.first() {
        if c != 1 {
            let inv = zp::inv(c, p);
            for t in &mut f {
                t.1 = zp::mul(t.1, inv, p);
            }
        }
    }
    f
}

/// S-polynomial of two monic polynomials.
fn s_poly(f: &[Term], g: &[Term], p: u64, order: MonomialOrder) -> Vec<Term> {
    let l = f[0].0.lcm(&g[0].0);
    let tf = l.div(&f[0].0);
    let tg = l.div(&g[0].0);
    let lifted = sub_scaled(&[], zp::neg(1, p), &tf, &f[1..], p, order);
    sub_scaled(&lifted, 1, &tg, &g[1..], p, order)
}

#[derive(Clone, Copy, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn install(
    h: Vec<Term>,
    basis: &mut Vec<Vec<Term>>,
    active: &mut Vec<bool>,
    pairs: &mut Vec<Pair>,
) {
    basis.push(h);
    active.push(false);
    let k = basis.len() - 1;
    update(basis, active, pairs, k);
}

/// Gebauer–Möller installation of a new basis element `h` (index `k`).
fn update(basis: &[Vec<Term>], active: &mut [bool], pairs: &mut Vec<Pair>, k: usize) {
    let lh = basis[k][0].0;
    let candidates: Vec<Pair> = (0..k)
        .filter(|&g| active[g])
        .map(|g| Pair {
            i: g,
            j: k,
            lcm: lh.lcm(&basis[g][0].0),
        })
        .collect();

    let mut kept: Vec<Pair> = Vec::new();
    for (idx, c) in candidates.iter().enumerate() {
        let coprime = lh.is_coprime(&basis[c.i][0].0);
        let dominated = candidates[idx + 1..]
            .iter()
            .chain(kept.iter())
            .any(|o| o.lcm.divides(&c.lcm));
        if coprime || !dominated {
            kept.push(*c);
        }
    }
    let fresh: Vec<Pair> = kept
        .into_iter()
        .filter(|c| !lh.is_coprime(&basis[c.i][0].0))
        .collect();

    pairs.retain(|pr| {
        if !lh.divides(&pr.lcm) {
            return true;
        }
        let l1 = basis[pr.i][0].0.lcm(&lh);
        let l2 = basis[pr.j][0].0.lcm(&lh);
        l1 == pr.lcm || l2 == pr.lcm
    });
    pairs.extend(fresh);

    for g in 0..k {
        if active[g] && lh.divides(&basis[g][0].0) {
            active[g] = false;
        }
    }
    active[k] = true;
}

fn pair_cmp(a: &Pair, b: &Pair, order: MonomialOrder) -> Ordering {
    a.lcm
        .degree()
        .cmp(&b.lcm.degree())
        .then_with(|| order.cmp(&a.lcm, &b.lcm))
        .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
}

/// Reduced Gröbner basis under grevlex.
pub fn buchberger(generators: &[PolyP]) -> Result<GroebnerBasis, PolyError> {
    buchberger_with_order(generators, MonomialOrder::Grevlex)
}

/// Reduced Gröbner basis under `order`, by Buchberger's algorithm with the
/// Gebauer–Möller criteria and the normal selection strategy.
pub fn buchberger_with_order(
    generators: &[PolyP],
    order: MonomialOrder,
) -> Result<GroebnerBasis, PolyError> {
    let first = generators.first().ok_or(PolyError::EmptyGenerators)?;
    let (p, nvars) = (first.modulus(), first.nvars());
    if generators
        .iter()
        .any(|g| g.modulus() != p || g.nvars() != nvars)
    {
        return Err(PolyError::RingMismatch);
    }
    let unit = |p| GroebnerBasis {
        p,
        nvars,
        order,
        polys: vec![vec![(Monomial::one(nvars), 1)]],
    };

    let mut input: Vec<Vec<Term>> = generators
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| make_monic(g.terms_in_order(order), p))
        .collect();
    if input.iter().any(|g| g[0].0.is_one()) {
        return Ok(unit(p));
    }
    input.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));

    let mut basis: Vec<Vec<Term>> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    for g in input {
        let h = reduce(g, &basis, &active, p, order);
        if h.is_empty() {
            continue;
        }
        if h[0].0.is_one() {
            return Ok(unit(p));
        }
        install(make_monic(h, p), &mut basis, &mut active, &mut pairs);
    }

    while !pairs.is_empty() {
        let (best, _) = pairs
            .iter()
            .enumerate()
            .min_by(|a, b| pair_cmp(a.1, b.1, order))
            .expect("nonempty");
        let pr = pairs.swap_remove(best);
        let s = s_poly(&basis[pr.i], &basis[pr.j], p, order);
        let h = reduce(s, &basis, &active, p, order);
        if h.is_empty() {
            continue;
        }
        if h[0].0.is_one() {
            return Ok(unit(p));
        }
        install(make_monic(h, p), &mut basis, &mut active, &mut pairs);
    }

    // Interreduce the minimal basis.
    let minimal: Vec<Vec<Term>> = basis
        .into_iter()
        .zip(active)
        .filter(|(_, a)| *a)
        .map(|(g, _)| g)
        .collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for (i, g) in minimal.iter().enumerate() {
        let others: Vec<bool> = (0..minimal.len()).map(|j| j != i).collect();
        let head = g[0];
        let tail = reduce(g[1..].to_vec(), &minimal, &others, p, order);
        let mut full = Vec::with_capacity(tail.len() + 1);
        full.push(head);
        full.extend(tail);
        reduced.push(full);
    }
    reduced.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    Ok(GroebnerBasis {
        p,
        nvars,
        order,
        polys: reduced,
    })
}

/// Remainder of `f` on division by the basis; zero exactly on ideal members.
pub fn normal_form(gb: &GroebnerBasis, f: &PolyP) -> Result<PolyP, PolyError> {
    gb.check_ring(f)?;
    let active = vec![true; gb.polys.len()];
    let r = reduce(
        f.terms_in_order(gb.order),
        &gb.polys,
        &active,
        gb.p,
        gb.order,
    );
    Ok(PolyP::from_unsorted(gb.p, gb.nvars, r))
}

pub fn ideal_membership(gb: &GroebnerBasis, f: &PolyP) -> Result<bool, PolyError> {
    Ok(normal_form(gb, f)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::super::{count_standard_monomials, parse_poly, parse_poly_list};
    use super::*;
    use proptest::prelude::*;

    const V: [&str; 4] = ["X", "Y", "Z", "W"];

    fn pp(s: &str, p: u64) -> PolyP {
        parse_poly(s, &V).unwrap().reduce_mod_p(p).unwrap()
    }

    fn ppl(s: &str, p: u64) -> Vec<PolyP> {
        parse_poly_list(s, &V)
            .unwrap()
            .iter()
            .map(|f| f.reduce_mod_p(p).unwrap())
            .collect()
    }

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e).unwrap()
    }

    #[test]
    fn quadric_frobenius_ideal() {
        let gb = buchberger(&ppl("X*Y - Z*W, X^2, Y^2, Z^2, W^2", 2)).unwrap();
        let mut leads = gb.lead_monomials();
        leads.sort();
        let mut expected = vec![
            m(&[1, 1, 0, 0]),
            m(&[2, 0, 0, 0]),
            m(&[0, 2, 0, 0]),
            m(&[0, 0, 2, 0]),
            m(&[0, 0, 0, 2]),
            m(&[1, 0, 1, 1]),
            m(&[0, 1, 1, 1]),
        ];
        expected.sort();
        assert_eq!(leads, expected);
        assert_eq!(count_standard_monomials(&gb).unwrap(), 10);
    }

    #[test]
    fn small_monomial_ideal() {
        let gb = buchberger(&ppl("X^2, X*Y, Y^3", 5)).unwrap();
        assert_eq!(gb.len(), 3);
        let two = ["X", "Y"];
        let g2: Vec<PolyP> = parse_poly_list("X^2, X*Y, Y^3", &two)
            .unwrap()
            .iter()
            .map(|f| f.reduce_mod_p(5).unwrap())
            .collect();
        assert_eq!(
            count_standard_monomials(&buchberger(&g2).unwrap()).unwrap(),
            4
        );
    }

    #[test]
    fn normal_form_example() {
        let gb = buchberger(&ppl("X*Y - Z*W, X^2, Y^2, Z^2, W^2", 2)).unwrap();
        assert!(normal_form(&gb, &pp("Z^3*W", 2)).unwrap().is_zero());
        assert!(!ideal_membership(&gb, &pp("Z*W", 2)).unwrap());
        assert!(ideal_membership(&gb, &pp("X*Z*W", 2)).unwrap());
    }

    #[test]
    fn unit_and_degenerate_inputs() {
        assert!(buchberger(&ppl("X - 1, X", 7)).unwrap().is_unit_ideal());
        assert!(buchberger(&ppl("3", 7)).unwrap().is_unit_ideal());
        assert!(buchberger(&ppl("0", 7)).unwrap().is_empty());
        assert_eq!(buchberger(&[]), Err(PolyError::EmptyGenerators));
        let mixed = vec![pp("X", 3), pp("X", 5)];
        assert_eq!(buchberger(&mixed), Err(PolyError::RingMismatch));
        let gb = buchberger(&ppl("X", 3)).unwrap();
        assert_eq!(normal_form(&gb, &pp("X", 5)), Err(PolyError::RingMismatch));
    }

    #[test]
    fn twisted_cubic() {
        // 2x2 minors of [[X,Y,Z],[Y,Z,W]]: degree 3 curve, three quadric generators.
        let gb = buchberger(&ppl("X*Z - Y^2, X*W - Y*Z, Y*W - Z^2", 101)).unwrap();
        assert_eq!(gb.len(), 3);
        assert!(ideal_membership(&gb, &pp("X*W^2 - Z^3", 101)).unwrap());
        let lex = buchberger_with_order(
            &ppl("X*Z - Y^2, X*W - Y*Z, Y*W - Z^2", 101),
            MonomialOrder::Lex,
        )
        .unwrap();
        assert!(lex.len() >= 3);
        assert!(ideal_membership(&lex, &pp("X*W^2 - Z^3", 101)).unwrap());
    }

    #[test]
    fn reduced_basis_is_monic_and_tail_reduced() {
        let gb = buchberger(&ppl("3*X^2 + Y*Z, 2*Y^2 - X*W, Z^3 + W^3, W^4", 7)).unwrap();
        let leads = gb.lead_monomials();
        for g in gb.generators() {
            let t = g.terms_in_order(gb.order());
            assert_eq!(t[0].1, 1);
            for (mono, _) in &t {
                let hits = leads.iter().filter(|l| l.divides(mono)).count();
                if *mono == t[0].0 {
                    assert_eq!(hits, 1);
                } else {
                    assert_eq!(hits, 0);
                }
            }
        }
    }

    fn arb_poly(p: u64) -> impl Strategy<Value = PolyP> {
        prop::collection::vec((prop::collection::vec(0u32..3, 3), 0u64..p), 1..5).prop_map(
            move |t| PolyP::from_terms(p, 3, t.into_iter().map(|(e, c)| (m(&e), c))).unwrap(),
        )
    }

    fn arb_ideal(p: u64) -> impl Strategy<Value = Vec<PolyP>> {
        // Pure powers keep the colength finite.
        (
            prop::collection::vec(arb_poly(p), 1..4),
            prop::collection::vec(2u32..5, 3),
        )
            .prop_map(move |(mut g, e)| {
                for (i, &k) in e.iter().enumerate() {
                    g.push(PolyP::monomial(p, Monomial::var_power(3, i, k), 1));
                }
                g
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn normal_form_is_idempotent(gens in arb_ideal(5), f in arb_poly(5)) {
            let gb = buchberger(&gens).unwrap();
            let r = normal_form(&gb, &f).unwrap();
            prop_assert_eq!(normal_form(&gb, &r).unwrap(), r.clone());
            let diff = f.checked_sub(&r).unwrap();
            prop_assert!(ideal_membership(&gb, &diff).unwrap());
        }

        #[test]
        fn combinations_are_members(gens in arb_ideal(7), cs in prop::collection::vec(arb_poly(7), 4)) {
            let gb = buchberger(&gens).unwrap();
            let mut acc = PolyP::zero(7, 3);
            for (g, c) in gens.iter().zip(&cs) {
                acc = acc.checked_add(&g.checked_mul(c).unwrap()).unwrap();
            }
            prop_assert!(ideal_membership(&gb, &acc).unwrap());
            for g in &gens {
                prop_assert!(ideal_membership(&gb, g).unwrap());
            }
        }

        #[test]
        fn colength_independent_of_order(gens in arb_ideal(3)) {
            let a = count_standard_monomials(&buchberger(&gens).unwrap()).unwrap();
            let b = count_standard_monomials(&buchberger_with_order(&gens, MonomialOrder::Lex).unwrap()).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn invariant_under_generator_permutation(
            (gens, shuffled) in arb_ideal(11).prop_flat_map(|g| (Just(g.clone()), Just(g).prop_shuffle()))
        ) {
            prop_assert_eq!(buchberger(&gens).unwrap(), buchberger(&shuffled).unwrap());
        }
    }
}
