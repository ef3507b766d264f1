//! Benchmark fixtures.

use u3rb::catalog::CaseSpec;
use u3rb::rb::generate_system;
use u3rb::{MonomialOrder, MultiPoly, PolySystem, VarTable};

/// The full polynomial system of a case preset.
pub fn preset_system(name: &str) -> PolySystem {
    let spec = CaseSpec::preset(name).expect("known preset");
    generate_system(&spec.ansatz, MonomialOrder::Grevlex)
        .expect("preset generates")
        .system
}

/// Cyclic-n roots in `n` variables.
pub fn cyclic(n: usize) -> PolySystem {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let t = VarTable::new(names).unwrap();
    let x: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var_idx(&t, i)).collect();
    let mut gens = Vec::new();
    for len in 1..n {
        let mut p = MultiPoly::zero(&t);
        for start in 0..n {
            let term = (0..len).fold(MultiPoly::one(&t), |acc, k| &acc * &x[(start + k) % n]);
            p = &p + &term;
        }
        gens.push(p);
    }
    let prod = x.iter().fold(MultiPoly::one(&t), |acc, v| &acc * v);
    gens.push(&prod - &MultiPoly::one(&t));
    PolySystem::new(t, gens, MonomialOrder::Grevlex).unwrap()
}
