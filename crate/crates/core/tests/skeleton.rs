use multitype::brauer::cache::Cache;
use multitype::skeleton::*;
use multitype::weights::*;
use std::collections::BTreeSet;

fn ch(v: &[(i64, i64)]) -> Character {
    Character(v.to_vec())
}

fn rs(s: &str, f: usize) -> RootSet {
    RootSet::parse(s, f).unwrap()
}

#[test]
fn graded_examples() {
    let mu = ch(&[(4, 1)]);
    let g = build_skeleton(7, &mu, &rs("", 1)).unwrap();
    assert_eq!(g.length(), 4);
    assert_eq!(g.strata, vec![1, 2, 1]);
    let g = build_skeleton(7, &mu, &rs("+0", 1)).unwrap();
    assert_eq!(g.length(), 2);
    assert_eq!(g.length(), g.expected_length());
    let g = build_skeleton(11, &ch(&[(5, 1), (8, 1)]), &rs("", 2)).unwrap();
    assert_eq!(g.length(), 16);
    assert!(build_skeleton(7, &ch(&[(2, 1)]), &rs("", 1)).is_err());
}

#[test]
fn graded_invariants_f2() {
    let mu = ch(&[(5, 1), (8, 1)]);
    for i in RootSet::all(2) {
        let g = build_skeleton(11, &mu, &i).unwrap();
        assert_eq!(g.length(), g.expected_length(), "{i}");
        assert!(g.strata_match(), "{i}");
        assert!(g.edges_consistent(), "{i}");
        assert!(g.slices_multiplicity_free(), "{i}");
    }
}

#[test]
fn integral_examples() {
    let cache = Cache::new(None);
    let mu = ch(&[(4, 1)]);
    let a = integral_skeleton(&cache, 7, &mu, &rs("", 1)).unwrap();
    assert_eq!(a.rank, 14);
    let a = integral_skeleton(&cache, 7, &mu, &rs("+0", 1)).unwrap();
    assert_eq!((a.rank, a.length_mod_p()), (8, 2));
    let a = integral_skeleton(&cache, 7, &mu, &rs("-0", 1)).unwrap();
    assert_eq!((a.rank, a.length_mod_p()), (6, 2));
}

#[test]
fn reduction_consistency_small() {
    let cache = Cache::new(None);
    for (p, mu) in [(7, ch(&[(4, 1)])), (11, ch(&[(4, 1)])), (7, ch(&[(4, 1), (5, 1)]))] {
        for i in RootSet::all_admissible(mu.f()) {
            let g = build_skeleton(p, &mu, &i).unwrap();
            let a = integral_skeleton(&cache, p, &mu, &i).unwrap();
            assert!(a.reduction_consistent(&g), "p={p} μ={mu} I={i}");
            assert_eq!(a.length_mod_p(), g.length());
        }
    }
}

#[test]
fn gluing_shadow_examples() {
    let cache = Cache::new(None);
    let mu = ch(&[(4, 1)]);
    let g = gluing_shadow(&cache, 7, &mu, &rs("", 1), 0).unwrap();
    assert_eq!(g.ranks, (14, 8, 6));
    assert_eq!(g.lengths_mod_p, (4, 2, 2));
    assert_eq!(g.torsion_length, 1);
    assert!(g.pass);
    let mu2 = ch(&[(4, 1), (5, 1)]);
    let g = gluing_shadow(&cache, 7, &mu2, &rs("+0", 2), 1).unwrap();
    assert_eq!(g.torsion_length, 2);
    assert!(g.pass);
    assert!(gluing_shadow(&cache, 7, &mu2, &rs("+1", 2), 1).is_err());
    for i in RootSet::all_admissible(2) {
        for j in 0..2 {
            if let Ok(g) = gluing_shadow(&cache, 7, &mu2, &i, j) {
                assert!(g.pass, "{i} {j}");
            }
        }
    }
}

#[test]
fn covering_examples() {
    let mu = ch(&[(4, 1)]);
    let irm = rs("+0", 1);
    let params = ResidualParams::simple(7, mu.clone(), irm.clone()).unwrap();
    let w = weight_set(&params).unwrap();
    let r = covering_set_check(7, &mu, &rs("", 1), &irm, &w).unwrap();
    assert!(r.pass && !r.steps.is_empty());
    let mu2 = ch(&[(5, 1), (8, 1)]);
    for (i, irm) in [("+0", "-1"), ("-1", "+0"), ("-0", "+1"), ("+1", "-0")] {
        let (i, irm) = (rs(i, 2), rs(irm, 2));
        let params = ResidualParams::simple(11, mu2.clone(), irm.clone()).unwrap();
        let w = weight_set(&params).unwrap();
        let r = covering_set_check(11, &mu2, &i, &irm, &w).unwrap();
        assert!(r.pass, "{i} {irm}");
    }
    // enlarging W(ρ̄) by a weight outside it breaks the rule
    let mut big: BTreeSet<SerreWeight> = w_of(&mu, &irm);
    big.insert(sigma_j(7, &mu, &rs("-0", 1)).unwrap());
    let r = covering_set_check(7, &mu, &rs("", 1), &irm, &big).unwrap();
    assert!(!r.pass);
    assert!(covering_set_check(7, &mu, &rs("+0", 1), &irm, &big).is_err());
}

fn w_of(mu: &Character, irm: &RootSet) -> BTreeSet<SerreWeight> {
    weight_set(&ResidualParams::simple(7, mu.clone(), irm.clone()).unwrap()).unwrap()
}
