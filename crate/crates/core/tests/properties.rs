use multitype::algebra::ideal::{Ambient, IdealNF};
use multitype::algebra::laurent::{Laurent, Lops, Mat2};
use multitype::algebra::series::{Mono, Ps, SeriesRing};
use multitype::algebra::witt::{WittRing, Wv};
use multitype::brauer::cache::Cache;
use multitype::phi::PhiFamily;
use multitype::weights::*;
use proptest::prelude::*;

const PRIMES: [u64; 4] = [5, 7, 11, 13];

fn witt() -> impl Strategy<Value = WittRing> {
    (prop::sample::select(&PRIMES[..]), 1usize..=3, 1u32..=4).prop_map(|(p, f, n)| WittRing::new(p, f, n).unwrap())
}

fn elt(w: &WittRing, cs: &[i64]) -> Wv {
    w.from_coeffs(cs)
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-100_000i64..100_000, 3)
}

fn series(r: &SeriesRing, terms: &[(u32, u32, i64)]) -> Ps {
    let mut a = r.int(0);
    for &(i, j, c) in terms {
        a = r.add_ps(&a, &r.term(Mono::from_exps(&[i, j]), r.witt.from_int(c)));
    }
    a
}

fn terms() -> impl Strategy<Value = Vec<(u32, u32, i64)>> {
    prop::collection::vec((0u32..4, 0u32..4, -50i64..50), 0..6)
}

fn generic_mu(p: u64, f: usize) -> impl Strategy<Value = Character> {
    prop::collection::vec((4..p as i64, -3i64..3), f)
        .prop_map(move |v| Character(v.into_iter().map(|(c, b)| (c + b, b)).collect()))
        .prop_filter("generic", move |mu| is_generic(mu, p))
}

fn laurent(w: &WittRing, ts: &[(i64, i64)]) -> Laurent<Wv> {
    Lops(w).from_terms(ts.iter().map(|&(k, c)| (k, w.from_int(c))))
}

fn mat(w: &WittRing, e: &[Vec<(i64, i64)>; 4]) -> Mat2<Wv> {
    [[laurent(w, &e[0]), laurent(w, &e[1])], [laurent(w, &e[2]), laurent(w, &e[3])]]
}

fn laurent_terms() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-2i64..3, -20i64..20), 0..3)
}

/// Upper or lower unitriangular times a unit scalar times v^k: invertible exactly.
fn gauge(w: &WittRing, lower: bool, off: &[(i64, i64)], unit: i64, k: i64) -> Mat2<Wv> {
    let l = Lops(w);
    let u = l.mono(w.from_int(unit), k);
    let z = l.zero();
    let o = laurent(w, off);
    if lower {
        [[u.clone(), z], [l.mul(&o, &u), u]]
    } else {
        [[u.clone(), l.mul(&o, &u)], [z, u]]
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witt_ring_axioms(w in witt(), a in coeffs(), b in coeffs(), c in coeffs()) {
        let (a, b, c) = (elt(&w, &a), elt(&w, &b), elt(&w, &c));
        prop_assert_eq!(w.add(&a, &b), w.add(&b, &a));
        prop_assert_eq!(w.mul(&a, &b), w.mul(&b, &a));
        prop_assert_eq!(w.mul(&w.mul(&a, &b), &c), w.mul(&a, &w.mul(&b, &c)));
        prop_assert_eq!(w.add(&w.add(&a, &b), &c), w.add(&a, &w.add(&b, &c)));
        prop_assert_eq!(w.mul(&a, &w.add(&b, &c)), w.add(&w.mul(&a, &b), &w.mul(&a, &c)));
        prop_assert_eq!(w.mul(&a, &w.one()), a.clone());
        prop_assert!(w.is_zero(&w.add(&a, &w.neg(&a))));
        if w.is_unit(&a) {
            prop_assert_eq!(w.mul(&a, &w.inv(&a).unwrap()), w.one());
        }
    }

    #[test]
    fn teichmuller_is_multiplicative(w in witt(), a in coeffs(), b in coeffs()) {
        let (a, b) = (elt(&w, &a), elt(&w, &b));
        let ta = w.teichmuller(&a);
        let tb = w.teichmuller(&b);
        prop_assert_eq!(w.mul(&ta, &tb), w.teichmuller(&w.mul(&a, &b)));
        prop_assert_eq!(w.truncate(&ta, 1), w.truncate(&a, 1));
    }

    #[test]
    fn series_ring_axioms(p in prop::sample::select(&PRIMES[..]), n in 1u32..=3, a in terms(), b in terms(), c in terms()) {
        let r = SeriesRing::new(WittRing::new(p, 1, n).unwrap(), &["X", "Y"], 5).unwrap();
        let (a, b, c) = (series(&r, &a), series(&r, &b), series(&r, &c));
        prop_assert_eq!(r.mul_ps(&a, &b), r.mul_ps(&b, &a));
        prop_assert_eq!(r.mul_ps(&r.mul_ps(&a, &b), &c), r.mul_ps(&a, &r.mul_ps(&b, &c)));
        prop_assert_eq!(r.mul_ps(&a, &r.add_ps(&b, &c)), r.add_ps(&r.mul_ps(&a, &b), &r.mul_ps(&a, &c)));
        prop_assert_eq!(r.add_ps(&a, &b), r.add_ps(&b, &a));
        let u = r.add_ps(&r.int(1), &r.mul_ps(&r.var(0), &a));
        prop_assert_eq!(r.mul_ps(&u, &r.inv_ps(&u).unwrap()), r.int(1));
    }

    #[test]
    fn base_change_is_a_group_action(
        p in prop::sample::select(&[5u64, 7][..]),
        ms in prop::collection::vec([laurent_terms(), laurent_terms(), laurent_terms(), laurent_terms()], 2),
        offs in prop::collection::vec((any::<bool>(), laurent_terms(), 1i64..5, -1i64..2), 4),
    ) {
        let w = WittRing::new(p, 1, 2).unwrap();
        let l = Lops(&w);
        let fam = PhiFamily::new(p, ms.iter().map(|e| mat(&w, e)).collect());
        let d: Vec<Mat2<Wv>> = offs[..2].iter().map(|(lo, o, u, k)| gauge(&w, *lo, o, *u, *k)).collect();
        let e: Vec<Mat2<Wv>> = offs[2..].iter().map(|(lo, o, u, k)| gauge(&w, *lo, o, *u, *k)).collect();
        let ed: Vec<Mat2<Wv>> = e.iter().zip(&d).map(|(a, b)| l.mat_mul(a, b)).collect();
        let twice = fam.base_change(&w, &d).unwrap().base_change(&w, &e).unwrap();
        prop_assert!(twice.equals(&w, &fam.base_change(&w, &ed).unwrap()));
        let d_inv: Vec<Mat2<Wv>> = d.iter().map(|m| l.mat_inv_exact(m).unwrap()).collect();
        let back = fam.base_change(&w, &d).unwrap().base_change(&w, &d_inv).unwrap();
        prop_assert!(back.equals(&w, &fam));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Modular law on monomial ideals with p-power coefficients.
    #[test]
    fn modular_law(
        gens in prop::collection::vec(prop::collection::vec((0u32..3, 0u32..3, 0u32..3), 1..3), 3),
    ) {
        let p = 5;
        let r = SeriesRing::new(WittRing::new(p, 1, 3).unwrap(), &["X", "Y"], 4).unwrap();
        let amb = Ambient::new(&r);
        let ideal = |g: &[(u32, u32, u32)]| {
            let ps: Vec<Ps> = g.iter().map(|&(i, j, e)| r.term(Mono::from_exps(&[i, j]), r.witt.p_pow(e))).collect();
            IdealNF::new(&amb, &ps).unwrap()
        };
        let (i, j, k) = (ideal(&gens[0]), ideal(&gens[1]), ideal(&gens[2]));
        let ik = i.intersection(&k).unwrap();
        let lhs = i.intersection(&j.sum(&ik).unwrap()).unwrap();
        let rhs = i.intersection(&j).unwrap().sum(&ik).unwrap();
        prop_assert!(lhs.equals(&rhs), "{} vs {}", lhs.fmt_gens(), rhs.fmt_gens());
    }

    #[test]
    fn root_set_strata_counts(f in 1usize..=3, code in 0u32..64) {
        let i = RootSet::all(f).into_iter().filter(|s| s.is_admissible()).nth(code as usize % RootSet::all_admissible(f).len()).unwrap();
        prop_assert_eq!(RootSet::all(f).len(), 1 << (2 * f));
        let mut counts = vec![0u64; 2 * f + 1];
        for j in RootSet::all(f).into_iter().filter(|j| j.disjoint(&i)) {
            counts[j.multidegree().iter().map(|&k| k as usize).sum::<usize>()] += 1;
        }
        // ∏_{i ∉ supp I}(1+t)² · ∏_{i ∈ supp I}(1+t)
        let mut poly = vec![1u64];
        for t in 0..f {
            let factor: &[u64] = if i.plus[t] || i.minus[t] { &[1, 1] } else { &[1, 2, 1] };
            let mut next = vec![0u64; poly.len() + factor.len() - 1];
            for (a, x) in poly.iter().enumerate() {
                for (b, y) in factor.iter().enumerate() {
                    next[a + b] += x * y;
                }
            }
            poly = next;
        }
        poly.resize(2 * f + 1, 0);
        prop_assert_eq!(counts, poly);
    }

    #[test]
    fn frobenius_orientation_is_unique(f in 1usize..=3, bits in 0u32..8) {
        let s = Weyl((0..f).map(|i| bits >> i & 1 == 1).collect());
        let (w, st) = s.orientation();
        prop_assert!(!w.0[0]);
        let mut lhs = w.frob_inv().mul(&s).mul(&w);
        lhs.0[0] ^= st;
        prop_assert!(lhs.0.iter().all(|b| !b));
        let sols = Weyl::all(f)
            .into_iter()
            .filter(|w| !w.0[0])
            .flat_map(|w| [false, true].map(|t| (w.clone(), t)))
            .filter(|(w, t)| {
                let mut x = w.frob_inv().mul(&s).mul(w);
                x.0[0] ^= t;
                x.0.iter().all(|b| !b)
            })
            .count();
        prop_assert_eq!(sols, 1);
    }
}

fn jh_props(p: u64, f: usize) -> impl Strategy<Value = (Character, Weyl)> {
    (generic_mu(p, f), 0u32..8).prop_map(move |(mu, bits)| (mu, Weyl((0..f).map(|i| bits >> i & 1 == 1).collect())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn jh_dimension_bookkeeping_f2((mu, s) in jh_props(7, 2)) {
        let p = 7;
        let jh = jh_of_type(p, &s, &mu).unwrap();
        let q = 49i64;
        let total: i64 = jh.iter().map(|(_, w)| w.dim() as i64).sum();
        let expected = if s.swaps() % 2 == 0 { q + 1 } else { q - 1 };
        prop_assert_eq!(jh.len(), 4);
        prop_assert_eq!(total, expected);
        let cache = Cache::new(None);
        let mut oracle = cache.decompose(p, &s, &mu).unwrap();
        let mut mine: Vec<_> = jh.into_iter().map(|(_, w)| w).collect();
        oracle.sort();
        mine.sort();
        prop_assert_eq!(oracle, mine);
    }

    #[test]
    fn decomposition_invariant_in_twist_class((mu, s) in jh_props(11, 2), i in 0usize..2) {
        let p = 11i64;
        let cache = Cache::new(None);
        // (p - π) applied to the i-th basis character: +p at i, -1 at the Frobenius-shifted slot.
        let mut shifted = mu.clone();
        shifted.0[i].0 += p;
        shifted.0[i].1 += p;
        let j = (i + 1) % 2;
        shifted.0[j].0 -= 1;
        shifted.0[j].1 -= 1;
        let mut a = cache.decompose(11, &s, &mu).unwrap();
        let mut b = cache.decompose(11, &s, &shifted).unwrap();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }
}
