use multitype::algebra::hilbert::hilbert_samuel;
use multitype::algebra::ideal::{Ambient, IdealNF};
use multitype::algebra::laurent::Lops;
use multitype::algebra::nakayama::{LocalModulePresentation, NakayamaVerdict};
use multitype::algebra::series::{Ps, SeriesRing};
use multitype::algebra::witt::WittRing;
use multitype::algebra::Ring;

fn ring(p: u64, vars: &[&str], n: u32, m: u32) -> SeriesRing {
    SeriesRing::new(WittRing::new(p, 1, n).unwrap(), vars, m).unwrap()
}

fn poly(r: &SeriesRing, terms: &[(i64, &[u32])]) -> Ps {
    let mut out = Ps::default();
    for (c, e) in terms {
        let mut t = r.int(*c);
        for (i, k) in e.iter().enumerate() {
            for _ in 0..*k {
                t = r.mul_ps(&t, &r.var(i));
            }
        }
        out = r.add_ps(&out, &t);
    }
    out
}

#[test]
fn teichmuller_examples() {
    let w = WittRing::new(7, 1, 2).unwrap();
    assert_eq!(w.teichmuller(&w.from_int(3)), w.from_int(31));
    assert_eq!(w.teichmuller(&w.zero()), w.zero());
    assert_eq!(w.teichmuller(&w.one()), w.one());
    let w = WittRing::new(5, 2, 3).unwrap();
    for r in w.residue_field().field_elements() {
        let t = w.teichmuller(&w.lift_from(&w.residue_field(), &r));
        assert_eq!(w.pow(&t, 25), t);
        assert_eq!(w.truncate(&t, 1), w.truncate(&w.lift_from(&w.residue_field(), &r), 1));
    }
}

#[test]
fn sum_of_y_and_y_minus_p() {
    let r = ring(5, &["Y"], 4, 8);
    let a = Ambient::new(&r);
    let y = IdealNF::new(&a, &[r.var(0)]).unwrap();
    let ym = IdealNF::new(&a, &[poly(&r, &[(1, &[1]), (-5, &[0])])]).unwrap();
    let s = y.sum(&ym).unwrap();
    let expect = IdealNF::new(&a, &[r.var(0), r.int(5)]).unwrap();
    assert!(s.equals(&expect));
    assert!(s.contains_ideal(&y) && s.contains_ideal(&ym));
    assert_eq!(s.colength(), 1);
    let yy = IdealNF::new(&a, &[poly(&r, &[(1, &[2]), (-5, &[1])])]).unwrap();
    assert!(yy.sum(&y).unwrap().equals(&y));
    assert!(IdealNF::zero(&a).sum(&y).unwrap().equals(&y));
}

#[test]
fn intersection_of_y_and_y_minus_p() {
    let r = ring(5, &["Y"], 4, 8);
    let a = Ambient::new(&r);
    let y = IdealNF::new(&a, &[r.var(0)]).unwrap();
    let ym = IdealNF::new(&a, &[poly(&r, &[(1, &[1]), (-5, &[0])])]).unwrap();
    let i = y.intersection(&ym).unwrap();
    let expect = IdealNF::new(&a, &[poly(&r, &[(1, &[2]), (-5, &[1])])]).unwrap();
    assert!(i.equals(&expect), "{}", i.fmt_gens());
    assert_eq!(i.gens.len(), 1);
    assert!(y.intersection(&y).unwrap().equals(&y));
}

#[test]
fn intersection_of_x_and_y() {
    let r = ring(3, &["X", "Y"], 3, 6);
    let a = Ambient::new(&r);
    let x = IdealNF::new(&a, &[r.var(0)]).unwrap();
    let y = IdealNF::new(&a, &[r.var(1)]).unwrap();
    let i = x.intersection(&y).unwrap();
    let xy = IdealNF::new(&a, &[r.mul_ps(&r.var(0), &r.var(1))]).unwrap();
    assert!(i.equals(&xy), "{}", i.fmt_gens());
}

#[test]
fn intersection_stable_in_slack() {
    let r = ring(3, &["X", "Y"], 3, 5);
    let a = Ambient::new(&r);
    let i = IdealNF::new(&a, &[poly(&r, &[(1, &[1, 1]), (-3, &[0, 0])])]).unwrap();
    let j = IdealNF::new(&a, &[r.var(1)]).unwrap();
    let c = multitype::algebra::Cancel::default();
    let s2 = i.intersection_with(&j, 2, &c).unwrap();
    let s3 = i.intersection_with(&j, 3, &c).unwrap();
    assert!(s2.equals(&s3));
}

#[test]
fn hilbert_samuel_examples() {
    let r = ring(3, &["X", "Y"], 2, 10);
    let a = Ambient::new(&r);
    let h = hilbert_samuel(&IdealNF::new(&a, &[r.var(1)]).unwrap()).unwrap();
    assert_eq!((h.e, h.d), (1, 1));
    let h = hilbert_samuel(&IdealNF::new(&a, &[r.mul_ps(&r.var(0), &r.var(1))]).unwrap()).unwrap();
    assert_eq!((h.e, h.d), (2, 1));
    let r4 = ring(3, &["X0", "Y0", "X1", "Y1"], 1, 8);
    let a4 = Ambient::new(&r4);
    let g = [r4.mul_ps(&r4.var(0), &r4.var(1)), r4.mul_ps(&r4.var(2), &r4.var(3))];
    let h = hilbert_samuel(&IdealNF::new(&a4, &g).unwrap()).unwrap();
    assert_eq!((h.e, h.d), (4, 2));
}

#[test]
fn hilbert_samuel_cap_invariance() {
    for cap in [8, 10, 12] {
        let r = ring(3, &["X", "Y"], 1, cap);
        let a = Ambient::new(&r);
        let h = hilbert_samuel(&IdealNF::new(&a, &[r.mul_ps(&r.var(0), &r.var(1))]).unwrap()).unwrap();
        assert_eq!((h.e, h.d), (2, 1));
    }
}

#[test]
fn lemma_sequence_lengths() {
    // 0 -> R/(I∩J) -> R/I ⊕ R/J -> R/(I+J) -> 0 for I=(Y), J=(Y-p), lengths mod m^k.
    let r = ring(5, &["Y"], 6, 6);
    let a = Ambient::new(&r);
    let y = IdealNF::new(&a, &[r.var(0)]).unwrap();
    let ym = IdealNF::new(&a, &[poly(&r, &[(1, &[1]), (-5, &[0])])]).unwrap();
    let s = y.sum(&ym).unwrap();
    let i = y.intersection(&ym).unwrap();
    assert_eq!(s.colength(), 1);
    for k in 1..=6u32 {
        let rk = r.with_precision(k.min(6), k - 1);
        let ak = Ambient::new(&rk);
        let len = |id: &IdealNF| {
            let g: Vec<Ps> = id.gens.iter().map(|g| r.convert(g, &rk)).collect();
            IdealNF::new(&ak, &g).unwrap().colength() as i64
        };
        assert_eq!(len(&i) - len(&y) - len(&ym) + len(&s), 0, "k={k}");
    }
}

#[test]
fn nakayama_examples() {
    let r = ring(3, &["x"], 1, 4);
    let x = r.var(0);
    let x2 = r.mul_ps(&x, &x);
    let x3 = r.mul_ps(&x2, &x);
    let m = LocalModulePresentation::new(&r, &[x3.clone()], 1, vec![]).unwrap();
    let rep = m.nakayama_check(&vec![vec![x.clone()]], &vec![vec![x2.clone()]]).unwrap();
    assert_eq!((rep.mingen_m1, rep.mingen_m1_mod_m2), (1, 1));
    assert_eq!(rep.verdict, NakayamaVerdict::Pass);
    let rep = m.nakayama_check(&vec![vec![x.clone()]], &vec![]).unwrap();
    assert_eq!(rep.verdict, NakayamaVerdict::Pass);
    assert_eq!(rep.mingen_m_mod_m2, rep.mingen_m);

    let m2 = LocalModulePresentation::new(&r, &[x2], 2, vec![]).unwrap();
    let z = Ps::default();
    let mm = vec![vec![x.clone(), z.clone()], vec![z.clone(), x.clone()]];
    let rep = m2.nakayama_check(&mm, &mm).unwrap();
    assert_eq!(rep.mingen_m1, 2);
    assert_eq!(rep.mingen_m1_mod_m2, 0);
    assert_eq!(rep.verdict, NakayamaVerdict::HypothesisNotMet);
    assert!(m2.nakayama_check(&vec![vec![r.int(1), z.clone()]], &mm).is_err());
}

#[test]
fn laurent_inverse_and_frobenius() {
    let w = WittRing::new(7, 1, 3).unwrap();
    let l = Lops(&w);
    let a = l.from_terms([(1, w.one()), (2, w.from_int(7))]);
    let ai = l.inv(&a, 10).unwrap();
    let prod = l.mul(&a, &ai);
    assert_eq!(prod.prec, Some(11));
    assert_eq!(prod.terms, l.one().terms);

    let f = l.frob(&a, 7);
    assert_eq!(l.valuation(&l.sub(&f, &l.v(7))), Some(14));
    let m = l.mat([[l.v(1), l.one()], [l.zero(), l.one()]]);
    let mi = l.mat_inv(&m, 12).unwrap();
    let id = l.mat_mul(&m, &mi);
    assert!(l.mat_eq(&l.mat_truncate(&id, 5), &l.mat_truncate(&l.mat_id(), 5)));
    assert!(!w.is_zero(&Ring::one(&w)));
}
