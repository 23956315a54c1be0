use std::collections::HashMap;

use superyang::coeff::{q, Poly};
use superyang::groupoid::reflect_system;
use superyang::presentations::{
    minimalistic, quantum_reflection, resolve_signs, GeneratorMap, GeneratorSymbol, Letters, MapStatus,
};
use superyang::rewrite::{expand, substitute, substitute_with, Bounds, Expr, FreeElement, Verifier};
use superyang::rootspace::{build_system, cartan_matrix, SimpleRootSystem};

const FAMILIES: [&str; 6] = ["h-commute", "cross-0", "cross-1", "h-action", "level-shift", "odd-square"];

fn dist() -> SimpleRootSystem {
    build_system("00011", true).unwrap()
}

/// The resolved map at `node` whose target is the distinguished affine sl(3|2).
/// Odd reflections start from the reflected system; even ones are self-maps.
fn resolved(node: usize, bounds: Bounds) -> (GeneratorMap, Verifier) {
    let d = dist();
    let src = if d.node_parity(node).is_odd() { reflect_system(&d, node).unwrap() } else { d };
    let map = quantum_reflection(&src, node, false).unwrap();
    let mut v = Verifier::new(&map, bounds).unwrap();
    let map = resolve_signs(&map, &mut v);
    assert_eq!(map.status, MapStatus::Resolved, "{} {:?}", map.id(), map.witnesses);
    (map, v)
}

fn check_all(node: usize) -> usize {
    let (map, mut v) = resolved(node, Bounds::default());
    assert_eq!(map.target.parity_word(), "00011");
    let ids: Vec<String> = v.source.relations.iter().map(|r| r.id.clone()).collect();
    let mut families = 0;
    for id in &ids {
        let c = v.verify(&map, id).unwrap();
        assert!(c.verified(), "{} {}: {}", map.id(), id, c.residual_element);
        assert!(c.overflow.is_none());
        if FAMILIES.iter().any(|f| id.starts_with(&format!("{}(", f))) {
            families += 1;
        }
    }
    families
}

#[test]
fn odd_reflections_preserve_relations() {
    for node in [0, 3] {
        assert!(check_all(node) > 100);
    }
}

#[test]
fn even_reflections_preserve_relations() {
    for node in [1, 2, 4] {
        assert!(check_all(node) > 100);
    }
}

// The image of [x⁺_{2,1}, x⁺_{3,0}] under the odd map at node 3 is +x⁺_{2,1}.
// Expanding the bracket by hand with the cross relation gives
// [x⁺_{2,1}, h_{3,0}] = −a_{32}·x⁺_{2,1} = +x⁺_{2,1}.
#[test]
fn odd_level_one_bracket_normal_form() {
    let (map, mut v) = resolved(3, Bounds::default());
    let sl = Letters { sys: &map.source };
    let tl = Letters { sys: &map.target };
    let img = substitute(&map, &expand(&Expr::bracket(sl.ex(1, 2, 1), sl.ex(1, 3, 0)))).unwrap();
    assert_eq!(v.normal_form(&img), expand(&tl.ex(1, 2, 1)));
    assert_eq!(cartan_matrix(&map.target).entry(3, 2), -1);
}

#[test]
fn level_zero_images() {
    let (map, _) = resolved(3, Bounds::default());
    let sl = Letters { sys: &map.source };
    let tl = Letters { sys: &map.target };
    let h = substitute(&map, &expand(&sl.eh(2, 0))).unwrap();
    assert_eq!(h, expand(&Expr::sum(vec![tl.eh(2, 0), tl.eh(3, 0)])));
    let x = substitute(&map, &expand(&sl.ex(1, 3, 0))).unwrap();
    let target = expand(&tl.ex(-1, 3, 0));
    assert!(x == target || x == target.scale(&Poly::constant(q(-1))), "{}", x);
}

#[test]
fn flipped_quantum_sign_is_inconclusive() {
    let (map, mut v) = resolved(3, Bounds::default());
    let ids: Vec<String> = v.source.relations.iter().map(|r| r.id.clone()).collect();
    for k in 0..map.params.len() {
        let bad = map.with_flipped(k);
        let failing: Vec<_> = ids.iter().map(|id| v.verify(&bad, id).unwrap()).filter(|c| !c.verified()).collect();
        assert!(!failing.is_empty(), "flip {}", map.params[k].name);
        assert!(failing.iter().all(|c| !c.residual_element.is_zero()));
    }
}

#[test]
fn wrong_level_zero_sign_fails_with_twice_h() {
    let d = dist();
    let src = reflect_system(&d, 3).unwrap();
    let map = quantum_reflection(&src, 3, false).unwrap();
    let mut v = Verifier::new(&map, Bounds::default()).unwrap();
    let k = map.params.iter().position(|p| p.level == 0 && p.node == 3).unwrap();
    let out = resolve_signs(&map.with_flipped(k), &mut v);
    assert_eq!(out.status, MapStatus::Failed);
    let (_, w) = out.witnesses.iter().find(|(id, _)| id == "cross-0(3,3)").expect("cross-0 witness");
    let two_h = FreeElement::symbol(GeneratorSymbol::h(3, 0)).scale(&Poly::constant(q(2)));
    assert!(*w == two_h || *w == two_h.scale(&Poly::constant(q(-1))), "{}", w);
}

#[test]
fn identity_map_is_resolved() {
    let sys = dist();
    let id = GeneratorMap::identity(&sys, false);
    let mut v = Verifier::new(&id, Bounds::default()).unwrap();
    let id = resolve_signs(&id, &mut v);
    assert_eq!(id.status, MapStatus::Resolved);
    let pres = minimalistic(&sys, false).unwrap();
    for r in pres.relations.iter().take(40) {
        assert_eq!(substitute(&id, &r.element).unwrap(), r.element);
    }
}

#[test]
fn unresolved_map_is_rejected() {
    let map = quantum_reflection(&dist(), 1, false).unwrap();
    let e = FreeElement::symbol(GeneratorSymbol::h(1, 0));
    assert!(substitute(&map, &e).is_err());
}

#[test]
fn disconnected_node_round_trip_is_identity() {
    let d = dist();
    let (fwd, _) = resolved(1, Bounds::default());
    let mut back = quantum_reflection(&fwd.target, 1, false).unwrap();
    let mut v = Verifier::new(&back, Bounds::default()).unwrap();
    back = resolve_signs(&back, &mut v);
    let back_images = back.expanded();
    let a = cartan_matrix(&d);
    for j in d.nodes().filter(|&j| a.entry(1, j) == 0) {
        let l = Letters { sys: &d };
        for sym in [l.x(1, j, 0), l.x(-1, j, 0), l.x(1, j, 1), l.x(-1, j, 1), GeneratorSymbol::h(j, 0), GeneratorSymbol::h(j, 1)] {
            let there = fwd.image(&sym).unwrap();
            let round = substitute_with(&back_images, &there).unwrap();
            assert_eq!(round, FreeElement::symbol(sym), "{}", sym);
        }
    }
}

#[test]
fn verification_is_monotone_in_the_bounds() {
    let (map, mut v4) = resolved(3, Bounds { degree: 4, level: 1 });
    let ids: Vec<String> = v4.source.relations.iter().map(|r| r.id.clone()).collect();
    let at4: Vec<&String> = ids.iter().filter(|id| v4.verify(&map, id).unwrap().verified()).collect();
    assert!(!at4.is_empty());
    let mut v5 = Verifier::new(&map, Bounds { degree: 5, level: 1 }).unwrap();
    let mut v42 = Verifier::new(&map, Bounds { degree: 4, level: 2 }).unwrap();
    let mut sample: HashMap<&str, bool> = HashMap::new();
    for id in at4.iter().step_by(7) {
        assert!(v5.verify(&map, id).unwrap().verified(), "{} at (5,1)", id);
        assert!(v42.verify(&map, id).unwrap().verified(), "{} at (4,2)", id);
        sample.insert(id, true);
    }
    assert!(sample.len() > 10);
}
