use multitype::brauer::cache::{key_hash, Cache, DecompositionTable, Recompute};
use multitype::brauer::{brauer_character, decompose, dl_character, ordinary_character, ClassData, ClassLabel};
use multitype::weights::*;
use std::collections::BTreeSet;

fn ch(v: &[(i64, i64)]) -> Character {
    Character(v.to_vec())
}

fn generic_mus(p: u64, f: usize) -> Vec<Character> {
    // μ_i = (c_i, 1) with c_i generic; the determinant part is irrelevant up to twist
    let cs: Vec<i64> = (4..p as i64).collect();
    let mut out = vec![vec![]];
    for _ in 0..f {
        out = out
            .into_iter()
            .flat_map(|v: Vec<(i64, i64)>| {
                cs.iter().map(move |&c| {
                    let mut w = v.clone();
                    w.push((c, 1));
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(Character).collect()
}

#[test]
fn genericity_examples() {
    assert!(is_generic(&ch(&[(4, 1)]), 7));
    assert!(!is_generic(&ch(&[(3, 1)]), 7));
    assert!(is_generic(&ch(&[(5, 1), (9, 1)]), 11));
}

#[test]
fn types_for_examples() {
    assert_eq!(types_for(&RootSet::empty(1)).unwrap().len(), 2);
    assert_eq!(types_for(&RootSet::parse("+0", 1).unwrap()).unwrap(), vec![Weyl::id(1)]);
    let t = types_for(&RootSet::parse("-1", 2).unwrap()).unwrap();
    assert_eq!(t, vec![Weyl(vec![false, true]), Weyl(vec![true, true])]);
    assert!(types_for(&RootSet::parse("+0,-0", 1).unwrap()).is_err());
}

#[test]
fn root_set_counts() {
    for f in 1..=3 {
        assert_eq!(RootSet::all(f).len(), 1 << (2 * f));
        for i in RootSet::all_admissible(f) {
            let counts = stratum_counts(f, &i);
            for (k, c) in counts.iter().enumerate() {
                let direct = RootSet::all(f).iter().filter(|j| j.len() == k && j.disjoint(&i)).count();
                assert_eq!(direct as u64, *c);
            }
            assert_eq!(types_for(&i).unwrap().len(), 1 << (f - i.len()));
        }
    }
}

#[test]
fn sigma_examples_f1() {
    let mu = ch(&[(4, 1)]);
    let s0 = sigma_j(7, &mu, &RootSet::empty(1)).unwrap();
    assert_eq!(s0, SerreWeight::from_highest(7, &ch(&[(3, 1)])).unwrap());
    assert_eq!(s0.dim(), 3);
    let pair = sigma_j(7, &mu, &RootSet::parse("+0,-0", 1).unwrap()).unwrap();
    assert_eq!(pair, s0);
    // the principal series factor companion to F(3,1) has dimension 5
    let minus = sigma_j(7, &mu, &RootSet::parse("-0", 1).unwrap()).unwrap();
    assert_eq!((minus.m.clone(), minus.d, minus.dim()), (vec![4], 3, 5));
    let plus = sigma_j(7, &mu, &RootSet::parse("+0", 1).unwrap()).unwrap();
    assert_eq!((plus.m.clone(), plus.d, plus.dim()), (vec![2], 4, 3));
    assert!(sigma_j(7, &ch(&[(3, 1)]), &RootSet::empty(1)).is_err());
}

#[test]
fn oracle_f1_examples() {
    let mu = ch(&[(4, 1)]);
    let ps = decompose(7, &Weyl::id(1), &mu).unwrap();
    let dims: BTreeSet<u64> = ps.iter().map(|w| w.dim()).collect();
    assert_eq!(dims, BTreeSet::from([3, 5]));
    let cusp = decompose(7, &Weyl(vec![true]), &mu).unwrap();
    assert_eq!(cusp.len(), 2);
    assert_eq!(cusp.iter().map(|w| w.dim()).sum::<u64>(), 6);
    let frozen: Vec<(Vec<u32>, u64)> = cusp.iter().map(|w| (w.m.clone(), w.d)).collect();
    assert_eq!(frozen, vec![(vec![2], 1), (vec![2], 4)]);
    let frozen: Vec<(Vec<u32>, u64)> = ps.iter().map(|w| (w.m.clone(), w.d)).collect();
    assert_eq!(frozen, vec![(vec![2], 1), (vec![4], 3)]);
}

#[test]
fn oracle_f2_frozen() {
    let mu = ch(&[(5, 1), (8, 1)]);
    let got: Vec<(Vec<u32>, u64)> =
        decompose(11, &Weyl::id(2), &mu).unwrap().iter().map(|w| (w.m.clone(), w.d)).collect();
    assert_eq!(got, vec![(vec![2, 3], 89), (vec![3, 6], 12), (vec![6, 5], 16), (vec![7, 4], 81)]);
}

#[test]
fn brauer_character_degrees() {
    let w = SerreWeight::from_highest(7, &ch(&[(3, 1)])).unwrap();
    assert_eq!(brauer_character(&w).degree(), 3);
    let triv = SerreWeight::new(7, vec![0], 0);
    let b = brauer_character(&triv);
    assert_eq!(b.split.len(), 1);
    assert_eq!(b.split.get(&(0, 0)), Some(&1));
    let st = SerreWeight::from_highest(7, &ch(&[(6 + 2, 2)])).unwrap();
    assert_eq!(brauer_character(&st).degree(), 7);
}

#[test]
fn jh_sets_match_oracle_small() {
    for (p, f) in [(7u64, 1usize), (11, 1), (13, 1), (7, 2)] {
        let q = p.pow(f as u32) as i64;
        for mu in generic_mus(p, f) {
            if !is_generic(&mu, p) {
                continue;
            }
            for s in Weyl::all(f) {
                let mut predicted: Vec<SerreWeight> =
                    jh_of_type(p, &s, &mu).unwrap().into_iter().map(|(_, w)| w).collect();
                predicted.sort();
                let oracle = decompose(p, &s, &mu).unwrap();
                assert_eq!(predicted, oracle, "p={p} s={s} mu={mu}");
                let total: u64 = oracle.iter().map(|w| w.dim()).sum();
                let expect = if s.swaps() % 2 == 0 { q + 1 } else { q - 1 };
                assert_eq!(total as i64, expect);
                assert_eq!(ordinary_character(p, &s, &mu).unwrap().degree(), expect);
            }
        }
    }
}

#[test]
fn pair_cancellation_multiplicity() {
    let (p, mu) = (11, ch(&[(5, 1), (8, 1)]));
    let base = sigma_j(p, &mu, &RootSet::empty(2)).unwrap();
    let count: usize = types_for(&RootSet::empty(2))
        .unwrap()
        .iter()
        .map(|s| decompose(p, s, &mu).unwrap().iter().filter(|w| **w == base).count())
        .sum();
    assert_eq!(count, 4);
}

#[test]
fn weight_sets() {
    let p = 11;
    let r = ResidualParams::simple(p, ch(&[(5, 1), (8, 1)]), RootSet::parse("+0,-1", 2).unwrap()).unwrap();
    let w = weight_set(&r).unwrap();
    assert_eq!(w.len(), 4);
    // contained in the JH set of the type with s_i = s exactly at +ω^{(i)} ∈ I(ρ̄,μ)
    let s = Weyl(vec![true, false]);
    let jh: BTreeSet<SerreWeight> = decompose(p, &s, &r.mu).unwrap().into_iter().collect();
    assert!(w.is_subset(&jh));
    let r1 = ResidualParams::simple(7, ch(&[(4, 1)]), RootSet::parse("+0", 1).unwrap()).unwrap();
    assert_eq!(weight_set(&r1).unwrap().len(), 2);
    let r0 = ResidualParams::simple(7, ch(&[(4, 1)]), RootSet::empty(1)).unwrap();
    assert_eq!(weight_set(&r0).unwrap().len(), 1);
}

#[test]
fn orientation_equation() {
    for f in 1..=3 {
        for s in Weyl::all(f) {
            let (w, st) = s.orientation();
            assert!(!w.0[0]);
            let lhs = w.frob_inv().mul(&s).mul(&w);
            let mut rhs = vec![false; f];
            rhs[0] = st;
            assert_eq!(lhs.0, rhs);
        }
    }
}

#[test]
fn frobenius_twist_of_types() {
    // R_s(μ - sη) = R_{(s_τ, Id, ...)}(w (μ - sη)) for the orientation (w, s_τ) of s.
    for (p, mu) in [(7u64, ch(&[(4, 1), (5, 1), (4, 1)])), (11, ch(&[(5, 1), (8, 1)]))] {
        let f = mu.f();
        for s in Weyl::all(f) {
            let (w, st) = s.orientation();
            let lam = mu.sub(&s.s_eta());
            let mut t = vec![false; f];
            t[0] = st;
            let a = dl_character(p, &s, &lam).unwrap();
            let b = dl_character(p, &Weyl(t), &lam.act(&w)).unwrap();
            assert_eq!(a.class_fn, b.class_fn);
        }
    }
}

#[test]
fn class_data_and_orthogonality() {
    let (p, f) = (7, 1);
    let cd = ClassData::new(p, f);
    assert_eq!(cd.classes.iter().map(|c| c.1).sum::<u64>(), cd.group_order());
    let n = (cd.q * cd.q - 1) as f64;
    let eval = |v: &multitype::brauer::Cyclo| {
        v.terms.iter().fold((0.0, 0.0), |(re, im), (k, c)| {
            let t = 2.0 * std::f64::consts::PI * (*k as f64) / n;
            (re + *c as f64 * t.cos(), im + *c as f64 * t.sin())
        })
    };
    for mu in [ch(&[(4, 1)]), ch(&[(5, 2)])] {
        for s in Weyl::all(f) {
            let o = ordinary_character(p, &s, &mu).unwrap();
            let norm: f64 = cd
                .classes
                .iter()
                .map(|(l, size)| {
                    let (re, im) = eval(&o.value(l));
                    (re * re + im * im) * *size as f64
                })
                .sum::<f64>()
                / cd.group_order() as f64;
            assert!((norm - 1.0).abs() < 1e-9, "{norm}");
            let (re, _) = eval(&o.value(&ClassLabel::Central(0)));
            assert!((re - o.degree() as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn decomposition_invariant_under_twist_class() {
    // μ and μ + (p - π) applied to an element of X^0(T) give the same type
    let p = 7i64;
    let mu = ch(&[(4, 1), (5, 1)]);
    let shift = Character(vec![(p, p), (-1, -1)]);
    let a = decompose(p as u64, &Weyl::id(2), &mu).unwrap();
    let b = decompose(p as u64, &Weyl::id(2), &mu.add(&shift)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn cache_roundtrip() {
    let dir = std::env::temp_dir().join(format!("mt-cache-test-{}", std::process::id()));
    let cache = Cache::new(Some(dir.clone()));
    let mu = ch(&[(4, 1)]);
    let a = cache.decompose(7, &Weyl::id(1), &mu).unwrap();
    let b = cache.decompose(7, &Weyl::id(1), &mu).unwrap();
    assert_eq!(a, b);
    assert_eq!(cache.list().unwrap().len(), 1);
    let rep = cache.verify(Recompute::All).unwrap();
    assert_eq!((rep.checked, rep.recomputed.len(), rep.bad.len()), (1, 1, 0));
    let t = DecompositionTable::build(&cache, 7, 1, &[(Weyl::id(1), mu.clone()), (Weyl(vec![true]), mu)]).unwrap();
    assert_eq!(t.entries.iter().map(|r| r.iter().sum::<u32>()).sum::<u32>(), 4);
    assert!(t.entries.iter().flatten().all(|&e| e <= 1));
    assert_eq!(cache.purge().unwrap(), 2);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn tampered_column_is_reported() {
    let dir = std::env::temp_dir().join(format!("mt-cache-tamper-{}", std::process::id()));
    let cache = Cache::new(Some(dir.clone()));
    let mu = ch(&[(5, 1)]);
    cache.decompose(7, &Weyl::id(1), &mu).unwrap();
    let path = dir.join(format!("{}.json", key_hash(7, &Weyl::id(1), &mu)));
    let mut col: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    col["weights"].as_array_mut().unwrap().pop();
    std::fs::write(&path, col.to_string()).unwrap();
    let rep = Cache::new(Some(dir.clone())).verify(Recompute::One(3)).unwrap();
    assert_eq!(rep.bad.len(), 1);
    assert!(rep.bad[0].starts_with(&key_hash(7, &Weyl::id(1), &mu)));
    std::fs::remove_dir_all(dir).ok();
}
