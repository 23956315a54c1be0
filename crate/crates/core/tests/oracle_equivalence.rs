mod support;

use std::time::{Duration, Instant};

use superyang::coeff::{q, Poly};
use superyang::presentations::minimalistic;
use superyang::rewrite::{rules_from, FreeElement};
use superyang::rootspace::build_system;

use support::ideal_oracle::{IdealOracle, Truncation};

// The oracle is built and frozen before any rule exists.
#[test]
fn engine_zero_set_matches_linear_algebra() {
    let t = Instant::now();
    let sys = build_system("001", false).unwrap();
    let pres = minimalistic(&sys, false).unwrap();
    let rels: Vec<FreeElement> = pres.relations.iter().map(|r| r.element.clone()).collect();
    let letters: Vec<_> = pres.alphabet.iter().copied().collect();
    let oracle = IdealOracle::build(Truncation::new(letters, 4, 1), &rels);

    let mut rs = rules_from(&pres, 4, 1);
    rs.complete(4, Some(1));
    rs.interreduce();

    for g in &oracle.generators {
        assert!(rs.reduce(g).residual.is_zero(), "{} survives", g);
    }
    let mut irreducible = 0;
    for (w, k) in oracle.trunc.monomials() {
        let e = FreeElement::term(w.clone(), Poly::monomial(k, q(1)));
        let nf = rs.reduce(&e).residual;
        assert!(nf.terms.keys().all(|w| w.len() <= 4), "{} leaves the truncation", w);
        if nf == e {
            irreducible += 1;
        } else {
            assert!(oracle.contains(&e.sub(&nf)), "{} -> {} not in the ideal span", w, nf);
        }
    }
    // Engine reductions lie in the span and the quotient dimensions agree,
    // so the two zero-sets coincide.
    assert_eq!(oracle.dim() - oracle.rank(), irreducible);
    assert!(t.elapsed() < Duration::from_secs(60));
}
