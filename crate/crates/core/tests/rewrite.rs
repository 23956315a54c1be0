mod support;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use superyang::coeff::{q, Poly};
use superyang::groupoid::reflect_system;
use superyang::presentations::{
    drinfeld, minimalistic, quantum_reflection, resolve_signs, GeneratorMap, GeneratorSymbol, Letters, MapStatus,
};
use superyang::rewrite::{
    expand, rules_from, substitute, Bounds, Expr, FreeElement, RuleOrigin, Verifier, Word, DEFAULT_STEP_CEILING,
};
use superyang::rootspace::{build_system, SimpleRootSystem};

use support::ideal_oracle::{IdealOracle, Truncation};

fn sym(s: &str, sys: &SimpleRootSystem) -> GeneratorSymbol {
    minimalistic(sys, false).unwrap().retag(s.parse().unwrap()).unwrap()
}

fn el(e: &FreeElement) -> String {
    e.to_string()
}

#[test]
fn expansion_examples() {
    let sys = build_system("00011", false).unwrap();
    let l = Letters { sys: &sys };
    let x = l.ex(1, 3, 0);
    assert_eq!(expand(&Expr::bracket(x.clone(), x.clone())), expand(&Expr::Prod(vec![x.clone(), x.clone()])).scale(&Poly::constant(q(2))));
    let h = l.eh(1, 0);
    let y = l.ex(1, 2, 0);
    assert_eq!(
        expand(&Expr::bracket(h.clone(), y.clone())),
        expand(&Expr::Prod(vec![h.clone(), y.clone()])).sub(&expand(&Expr::Prod(vec![y, h])))
    );
    let (p, m) = (l.ex(1, 3, 0), l.ex(-1, 3, 0));
    assert_eq!(
        expand(&Expr::anti(p.clone(), m.clone())),
        expand(&Expr::Prod(vec![p.clone(), m.clone()])).sub(&expand(&Expr::Prod(vec![m.clone(), p.clone()])))
    );
    let once = expand(&Expr::bracket(p.clone(), m.clone()));
    assert_eq!(once.bracket(&FreeElement::one()), FreeElement::zero());
}

#[test]
fn oriented_rules() {
    let sys = build_system("00011", true).unwrap();
    let pres = minimalistic(&sys, false).unwrap();
    let rs = rules_from(&pres, 6, 1);
    let w = |s: &str| -> Word {
        let w: Word = s.parse().unwrap();
        Word::from_slice(&w.0.iter().map(|x| pres.retag(*x).unwrap()).collect::<Vec<_>>())
    };
    // cross-0: x⁺x⁻ → ±x⁻x⁺ + h
    let r = rs.rule_for(&w("x+[3,0] x-[3,0]").0).expect("cross rule");
    assert_eq!(el(&r.rhs), el(&expand(&Expr::sum(vec![
        Expr::neg(Expr::Prod(vec![Letters { sys: &sys }.ex(-1, 3, 0), Letters { sys: &sys }.ex(1, 3, 0)])),
        Letters { sys: &sys }.eh(3, 0),
    ]))));
    // odd-square: x⁺x⁺ → 0 at odd nodes only
    assert!(rs.rule_for(&w("x+[3,0] x+[3,0]").0).unwrap().rhs.is_zero());
    assert!(rs.rule_for(&w("x+[0,0] x+[0,0]").0).unwrap().rhs.is_zero());
    assert!(rs.rule_for(&w("x+[1,0] x+[1,0]").0).is_none());
    // h-action, oriented x h → h x ∓ a x
    let r = rs.rule_for(&w("x+[2,0] h[1,0]").0).expect("h-action rule");
    assert_eq!(el(&r.rhs), "h[1,0] x+[2,0] + x+[2,0]");
    for rule in rs.active_rules() {
        assert!(rule.rhs.terms.keys().all(|t| *t < rule.lhs), "{} not decreasing", rule.label());
        assert!(rule.rhs.terms.keys().all(|t| t.parity() == rule.lhs.parity()));
    }
}

#[test]
fn reduction_examples() {
    let sys = build_system("00011", true).unwrap();
    let id = GeneratorMap::identity(&sys, false);
    let mut v = Verifier::new(&id, Bounds::default()).unwrap();
    let l = Letters { sys: &sys };
    let cross = expand(&Expr::sub(Expr::bracket(l.ex(1, 3, 0), l.ex(-1, 3, 0)), l.eh(3, 0)));
    assert!(v.normal_form(&cross).is_zero());
    assert!(v.normal_form(&expand(&Expr::bracket(l.eh(1, 0), l.eh(2, 0)))).is_zero());
}

// Substituting h~ = h₁ − (ħ/2)h₀² into the tilde-action relation yields the
// Drinfeld h-shift instance at levels (0,0).
#[test]
fn htilde_reproduces_h_shift() {
    let sys = build_system("00011", true).unwrap();
    let d = drinfeld(&sys, 1).unwrap();
    let id = GeneratorMap::identity(&sys, false);
    let mut v = Verifier::new(&id, Bounds::default()).unwrap();
    let mut seen = 0;
    for r in d.relations.iter().filter(|r| r.id.starts_with("h-shift(") && r.id.contains(";0,0;")) {
        assert!(v.normal_form(&r.element).is_zero(), "{}", r.id);
        seen += 1;
    }
    assert_eq!(seen, 2 * 5 * 5);
}

#[test]
fn completion_bounds() {
    let sys = build_system("001", false).unwrap();
    let pres = minimalistic(&sys, false).unwrap();
    let mut rs = rules_from(&pres, 0, 1);
    let before: Vec<_> = rs.active_rules().map(|r| (r.lhs.clone(), r.rhs.clone())).collect();
    rs.complete(0, Some(1));
    let after: Vec<_> = rs.active_rules().map(|r| (r.lhs.clone(), r.rhs.clone())).collect();
    assert_eq!(before, after);

    let mut rs = rules_from(&pres, 4, 1);
    rs.complete(4, Some(1));
    assert!(rs.rules.iter().any(|r| matches!(r.origin, RuleOrigin::Overlap { .. })));
    assert!(rs.log.len() >= rs.stats.added);
}

// The purely even one-node system is already complete, checked against the
// linear-algebra quotient.
#[test]
fn sl2_toy_is_complete() {
    let sys = SimpleRootSystem::from_word("00", false).unwrap();
    let pres = minimalistic(&sys, false).unwrap();
    let rels: Vec<FreeElement> = pres.relations.iter().map(|r| r.element.clone()).collect();
    let oracle = IdealOracle::build(Truncation::new(pres.alphabet.iter().copied().collect(), 4, 1), &rels);
    let rs = rules_from(&pres, 4, 1);
    let mut done = rs.clone();
    done.complete(4, Some(1));
    assert_eq!(done.stats.added, 0);
    let irreducible = oracle
        .trunc
        .monomials()
        .into_iter()
        .filter(|(w, k)| {
            let e = FreeElement::term(w.clone(), Poly::monomial(*k, q(1)));
            rs.reduce(&e).residual == e
        })
        .count();
    assert_eq!(oracle.dim() - oracle.rank(), irreducible);
}

fn odd_map() -> (GeneratorMap, Verifier) {
    let dist = build_system("00011", true).unwrap();
    let src = reflect_system(&dist, 3).unwrap();
    let map = quantum_reflection(&src, 3, false).unwrap();
    let mut v = Verifier::new(&map, Bounds::default()).unwrap();
    let map = resolve_signs(&map, &mut v);
    assert_eq!(map.status, MapStatus::Resolved);
    (map, v)
}

#[test]
fn normal_forms_do_not_depend_on_strategy() {
    let (map, mut v) = odd_map();
    let mut rng = StdRng::seed_from_u64(7);
    let pres = v.target.clone();
    let nodes: BTreeSet<usize> = pres.sys.nodes().collect();
    let rs = v.system_for(&nodes, false, 6).clone();
    let alphabet: Vec<GeneratorSymbol> = pres.alphabet.iter().copied().filter(|s| s.level <= 1).collect();
    let mut inputs: Vec<FreeElement> = (0..6)
        .map(|_| {
            let len = rng.gen_range(2..=4);
            let mut w = Vec::new();
            while w.len() < len {
                let s = alphabet[rng.gen_range(0..alphabet.len())];
                if Word::from_slice(&w).level() + s.level as usize <= 1 {
                    w.push(s);
                }
            }
            FreeElement::term(Word::from_slice(&w), Poly::one())
        })
        .collect();
    for r in v.source.relations.iter().step_by(40) {
        inputs.push(substitute(&map, &r.element).unwrap());
    }
    for e in &inputs {
        let reference = rs.reduce(e).residual;
        for _ in 0..200 {
            let mut choose = |k: usize| rng.gen_range(0..k);
            let nf = rs.reduce_with(e, DEFAULT_STEP_CEILING, Some(&mut choose));
            assert!(!nf.exhausted);
            assert_eq!(nf.residual, reference, "{}", e);
        }
    }
}

fn source_letters() -> Vec<GeneratorSymbol> {
    let sys = reflect_system(&build_system("00011", true).unwrap(), 3).unwrap();
    minimalistic(&sys, false).unwrap().alphabet.iter().copied().filter(|s| s.level <= 1).collect()
}

fn word(letters: Vec<GeneratorSymbol>) -> impl Strategy<Value = FreeElement> {
    (prop::collection::vec(0..letters.len(), 1..=2), -3i64..=3).prop_map(move |(ix, c)| {
        let w: Vec<GeneratorSymbol> = ix.into_iter().map(|i| letters[i]).collect();
        FreeElement::term(Word::from_slice(&w), Poly::constant(q(if c == 0 { 1 } else { c as i128 })))
    })
}

fn sign(a: &FreeElement, b: &FreeElement) -> Poly {
    let odd = |e: &FreeElement| e.parity().is_some_and(|p| p.is_odd());
    Poly::constant(q(if odd(a) && odd(b) { -1 } else { 1 }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn skew_symmetry_and_jacobi(a in word(source_letters()), b in word(source_letters()), c in word(source_letters())) {
        let mut s = a.bracket(&b);
        s.add_scaled(&b.bracket(&a), &sign(&a, &b));
        prop_assert!(s.is_zero());
        let lhs = a.bracket(&b.bracket(&c));
        let mut rhs = a.bracket(&b).bracket(&c);
        rhs.add_scaled(&b.bracket(&a.bracket(&c)), &sign(&a, &b));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn substitution_is_a_homomorphism() {
    let (map, _) = odd_map();
    let letters = source_letters();
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig::with_cases(100));
    runner
        .run(&(word(letters.clone()), word(letters)), |(a, b)| {
            let lhs = substitute(&map, &a.bracket(&b)).unwrap();
            let rhs = substitute(&map, &a).unwrap().bracket(&substitute(&map, &b).unwrap());
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })
        .unwrap();
}

#[test]
fn symbols_parse() {
    let sys = build_system("00011", false).unwrap();
    assert!(sym("x+[3,0]", &sys).parity.is_odd());
    assert!(!sym("x-[2,1]", &sys).parity.is_odd());
    assert!("x*[1,0]".parse::<GeneratorSymbol>().is_err());
    assert!("".parse::<Word>().is_err());
    assert_eq!("1".parse::<Word>().unwrap(), Word::empty());
}
