//! Frozen reference values.

use u3rb::catalog::{
    find_entry, image_dimension, load_catalog, rb_index, run_case, CaseOptions, CaseSpec,
};
use u3rb::groebner::buchberger;
use u3rb::rb::{generate_system, Ansatz, Constraint};
use u3rb::transform::{canonicalize_nilpotent, MapSpec, NilpotentForm};
use u3rb::{
    BasisIndex, Limits, MonomialOrder, MultiPoly, PolySystem, Rational, UTMatrix, VarTable,
};

fn m(s: &str) -> UTMatrix<Rational> {
    UTMatrix::<Rational>::parse(s, 3).unwrap()
}

fn gb_strings(vars: &[&str], gens: &[&str], ord: MonomialOrder) -> Vec<String> {
    let t = VarTable::new(vars.iter().copied()).unwrap();
    let gens: Vec<MultiPoly> = gens
        .iter()
        .map(|g| MultiPoly::parse(g, &t).unwrap())
        .collect();
    let gb = buchberger(
        &PolySystem::new(t, gens, ord).unwrap(),
        &Limits::unlimited(),
    )
    .unwrap();
    gb.basis
        .iter()
        .map(|p| p.to_string_with_order(ord))
        .collect()
}

#[test]
fn lex_basis_of_two_quadrics() {
    assert_eq!(
        gb_strings(&["x", "y"], &["x^2 - 1", "x*y - 1"], MonomialOrder::Lex),
        ["x - y", "y^2 - 1"]
    );
}

#[test]
fn lex_basis_of_symmetric_system() {
    assert_eq!(
        gb_strings(
            &["x", "y", "z"],
            &["x + y + z", "x*y + y*z + z*x", "x*y*z - 1"],
            MonomialOrder::Lex
        ),
        ["x + y + z", "y^2 + y*z + z^2", "z^3 - 1"]
    );
}

#[test]
fn inconsistent_system_gives_unit_ideal() {
    assert_eq!(
        gb_strings(&["x", "y"], &["x*y - 1", "x"], MonomialOrder::Grevlex),
        ["1"]
    );
}

#[test]
fn nilpotency_degrees() {
    let idx = rb_index(&load_catalog());
    let cubic: Vec<&str> = idx
        .degrees
        .iter()
        .filter(|(_, d)| *d == 3)
        .map(|(id, _)| id.as_str())
        .collect();
    assert_eq!(idx.index, 3);
    assert_eq!(
        cubic,
        ["R13", "R25", "R26", "R29", "R31", "R32", "R38", "R39", "R40"]
    );
    assert!(idx.degrees.iter().all(|(_, d)| (2..=3).contains(d)));
}

#[test]
fn image_dimensions() {
    let one_dim = ["R2", "R5", "R6", "R8", "R10", "R11", "R17"];
    for e in &load_catalog() {
        let want = match e.id.as_str() {
            "R13" | "R40" => 3,
            id if one_dim.contains(&id) => 1,
            _ => 2,
        };
        assert_eq!(image_dimension(e, None).unwrap(), want, "{}", e.id);
    }
}

#[test]
fn square_of_r25_and_r26() {
    let cat = load_catalog();
    let e23 = m("e23");
    let r25 = find_entry(&cat, "R25").unwrap().operator.evaluate(&[]);
    assert_eq!(r25.apply(&r25.apply(&e23).unwrap()).unwrap(), m("e12"));
    let r26 = find_entry(&cat, "R26").unwrap().operator.clone();
    for k in [-1i64, 0, 2] {
        let q = r26.evaluate(&[Rational::from_int(k)]);
        let sq = q.apply(&q.apply(&e23).unwrap()).unwrap();
        assert_eq!(sq, m("e12").scale(&Rational::from_int(k + 1)));
    }
}

#[test]
fn r13_residual_fault() {
    let cat = load_catalog();
    let r = &find_entry(&cat, "R13").unwrap().operator;
    let res = r.rb_residual();
    let (u, v, val) = res.first_nonzero().unwrap();
    assert_eq!((u.to_string(), v.to_string()), ("e11".into(), "e11".into()));
    assert_eq!(val.evaluate(&[]), m("-e12"));
}

/// With R(e13) = e12, R(e23) = e11 + e22, R(e12) = R(e33) = 0 and R(1) = 0,
/// the RB identity forces R(e11) = R(e22) = 0 (over a field: the squares of
/// all their coordinates lie in the ideal).
#[test]
fn r13_shape_collapses_to_r14() {
    let mut a = Ansatz::new(3);
    for (x, y) in [
        ("e12", "0"),
        ("e13", "e12"),
        ("e23", "e11 + e22"),
        ("e33", "0"),
    ] {
        a.fixed.insert(BasisIndex::parse(x).unwrap(), m(y));
    }
    a.constraints.push(Constraint::Image {
        x: m("e11 + e22 + e33"),
        y: m("0"),
    });
    let g = generate_system(&a, MonomialOrder::Grevlex).unwrap();
    let gb = buchberger(&g.system, &Limits::unlimited()).unwrap();
    for u in ["e11", "e22"] {
        for k in ["11", "12", "13", "22", "23", "33"] {
            let p = g.parse_input(&format!("b_{}_{k}", &u[1..])).unwrap();
            assert!(
                gb.contains(&p.pow(2)).unwrap(),
                "R({u}) coefficient at e{k}"
            );
        }
    }
}

#[test]
fn r34_and_r35_coincide() {
    let cat = load_catalog();
    let a = find_entry(&cat, "R34").unwrap().operator.matrix();
    let b = find_entry(&cat, "R35").unwrap().operator.matrix();
    assert_eq!(a, b);
}

#[test]
fn canonical_e23_uses_theta() {
    let c = canonicalize_nilpotent(&m("e23")).unwrap();
    assert_eq!(c.form, NilpotentForm::E12);
    assert_eq!(c.witness.maps, [MapSpec::Theta13]);
}

#[test]
fn sec41_full_system_size() {
    let spec = CaseSpec::preset("sec4.1").unwrap();
    let rep = run_case(&spec, &CaseOptions::default()).unwrap();
    assert!(rep.ok());
    let full = &rep.gb_runs[0];
    assert_eq!(
        (full.variables, full.generators, full.basis_size),
        (15, 78, 124)
    );
    assert_eq!(rep.relations.len(), 15);
}
