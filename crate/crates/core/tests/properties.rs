use std::sync::Arc;

use proptest::prelude::*;
use u3rb::catalog::load_catalog;
use u3rb::groebner::buchberger;
use u3rb::rb::scale_operator;
use u3rb::transform::{build_psi, canonicalize_nilpotent, conjugate_operator, theta13, AutoParams};
use u3rb::{
    BasisIndex, Limits, MonomialOrder, MultiPoly, Operator, PolySystem, Rational, UTMatrix,
    VarTable,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..12).prop_map(|(n, d)| Rational::new(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |q| !q.is_zero())
}

fn matrix() -> impl Strategy<Value = UTMatrix<Rational>> {
    prop::collection::vec(rational(), 6).prop_map(|v| UTMatrix::from_vector(3, &v))
}

fn psi_params() -> impl Strategy<Value = AutoParams> {
    (
        nonzero_rational(),
        rational(),
        rational(),
        nonzero_rational(),
        rational(),
    )
        .prop_map(|(a, b, g, d, e)| AutoParams::new(a, b, g, d, e))
}

fn xyz() -> Arc<VarTable> {
    VarTable::new(["x", "y", "z"]).unwrap()
}

/// Sparse polynomial in x, y, z with exponents below 3.
fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((rational(), 0u32..3, 0u32..3, 0u32..3), 0..5).prop_map(|terms| {
        let t = xyz();
        let v = |n| MultiPoly::var(&t, n).unwrap();
        terms
            .into_iter()
            .fold(MultiPoly::zero(&t), |acc, (c, i, j, k)| {
                let m = &(&v("x").pow(i) * &v("y").pow(j)) * &v("z").pow(k);
                &acc + &m.scale(&c)
            })
    })
}

fn order() -> impl Strategy<Value = MonomialOrder> {
    prop_oneof![Just(MonomialOrder::Lex), Just(MonomialOrder::Grevlex)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_axioms(a in rational(), b in rational(), c in nonzero_rational()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a / &c) * &c, a.clone());
        prop_assert_eq!(&a - &a, Rational::zero());
        let back: Rational = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn poly_ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn poly_print_parse_round_trip(p in poly()) {
        let back = MultiPoly::parse(&p.to_string(), &xyz()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn groebner_contains_generators(gens in prop::collection::vec(poly(), 1..3), ord in order()) {
        let sys = PolySystem::new(xyz(), gens.clone(), ord).unwrap();
        let gb = buchberger(&sys, &Limits::unlimited().max_pairs(5_000)).unwrap();
        for g in &gens {
            prop_assert!(gb.contains(g).unwrap());
        }
        prop_assert!(gb.certify().unwrap().ok());
    }

    #[test]
    fn normal_form_is_idempotent_and_respects_ideal(
        gens in prop::collection::vec(poly(), 1..3),
        p in poly(),
        h in poly(),
    ) {
        let sys = PolySystem::new(xyz(), gens.clone(), MonomialOrder::Grevlex).unwrap();
        let gb = buchberger(&sys, &Limits::unlimited().max_pairs(5_000)).unwrap();
        let nf = gb.normal_form(&p).unwrap();
        prop_assert_eq!(gb.normal_form(&nf).unwrap(), nf.clone());
        // p and p + h*g have the same normal form
        let shifted = &p + &(&h * &gens[0]);
        prop_assert_eq!(gb.normal_form(&shifted).unwrap(), nf);
    }

    #[test]
    fn reduced_basis_ignores_generator_order(gens in prop::collection::vec(poly(), 2..4)) {
        let limits = Limits::unlimited().max_pairs(5_000);
        let a = buchberger(&PolySystem::new(xyz(), gens.clone(), MonomialOrder::Grevlex).unwrap(), &limits).unwrap();
        let mut rev = gens;
        rev.reverse();
        let b = buchberger(&PolySystem::new(xyz(), rev, MonomialOrder::Grevlex).unwrap(), &limits).unwrap();
        prop_assert_eq!(a.basis, b.basis);
    }

    #[test]
    fn psi_is_an_automorphism(p in psi_params(), x in matrix(), y in matrix()) {
        let psi = build_psi(&p).unwrap();
        prop_assert_eq!(psi.apply(&x.mul(&y)), psi.apply(&x).mul(&psi.apply(&y)));
        prop_assert_eq!(psi.inverse().apply(&psi.apply(&x)), x);
    }

    #[test]
    fn theta_reverses_products(x in matrix(), y in matrix()) {
        let t = theta13();
        prop_assert_eq!(t.apply(&x.mul(&y)), t.apply(&y).mul(&t.apply(&x)));
        prop_assert_eq!(t.apply(&t.apply(&x)), x);
    }

    #[test]
    fn conjugation_and_scaling_preserve_rb(
        idx in 0usize..40,
        p in psi_params(),
        k in nonzero_rational(),
        values in prop::collection::vec(rational(), 8),
    ) {
        let entry = &load_catalog()[idx];
        prop_assume!(entry.id != "R13");
        let r = entry.operator.evaluate(&values[..entry.params().len()]);
        prop_assert!(r.is_rb());
        let psi = build_psi(&p).unwrap();
        prop_assert!(conjugate_operator(&r, &psi).is_rb());
        prop_assert!(conjugate_operator(&r, &theta13().compose(&psi)).is_rb());
        prop_assert!(scale_operator(&r, &k).unwrap().is_rb());
    }

    #[test]
    fn scaling_changes_weight(m in prop::collection::vec(rational(), 36), k in nonzero_rational()) {
        let rows: Vec<Vec<Rational>> = m.chunks(6).map(<[Rational]>::to_vec).collect();
        let r = Operator::from_matrix(3, &rows).with_weight(Rational::one());
        let s = scale_operator(&r, &k).unwrap();
        prop_assert_eq!(s.weight(), &(&Rational::one() / &k));
        prop_assert_eq!(r.is_rb(), s.is_rb());
    }

    #[test]
    fn nilpotent_witness_replays(a in rational(), b in rational(), c in rational()) {
        let mut n = UTMatrix::zero(3);
        n.set(BasisIndex::new(1, 2), a);
        n.set(BasisIndex::new(1, 3), b);
        n.set(BasisIndex::new(2, 3), c);
        let can = canonicalize_nilpotent(&n).unwrap();
        prop_assert_eq!(can.witness.apply_element(&n).unwrap(), can.form.matrix());
    }

    #[test]
    fn residual_is_bilinear_in_the_pair(values in prop::collection::vec(rational(), 36), x in matrix(), y in matrix()) {
        // residual_at(x, y) equals the combination of basis residuals
        let rows: Vec<Vec<Rational>> = values.chunks(6).map(<[Rational]>::to_vec).collect();
        let r = Operator::from_matrix(3, &rows);
        let res = r.rb_residual();
        let mut sum = UTMatrix::zero(3);
        for (u, cu) in x.entries() {
            for (v, cv) in y.entries() {
                sum = sum.add(&res.get(*u, *v).cloned().unwrap_or_else(|| UTMatrix::zero(3)).scale(&(cu * cv)));
            }
        }
        prop_assert_eq!(r.residual_at(&x, &y), sum);
    }
}
