use multitype::algebra::witt::{WittRing, Wv};
use multitype::phi::residual::build_residual;
use multitype::phi::tangent::{apply_operator, tangent_obstruction, TangentVerdict};
use multitype::phi::universal::expand_universal;
use multitype::weights::*;
use std::collections::BTreeMap;

fn ch(v: &[(i64, i64)]) -> Character {
    Character(v.to_vec())
}

fn all_params(p: u64, mu: &Character) -> Vec<ResidualParams> {
    RootSet::all_admissible(mu.f())
        .into_iter()
        .map(|i| ResidualParams::simple(p, mu.clone(), i).unwrap())
        .collect()
}

#[test]
fn expansion_matches_display_and_residual() {
    for (p, mu) in [(7u64, ch(&[(4, 1)])), (11, ch(&[(5, 1), (8, 1)]))] {
        for params in all_params(p, &mu) {
            let res = build_residual(&params).unwrap();
            let field = WittRing::new(p, mu.f(), 1).unwrap();
            for s in Weyl::all(mu.f()) {
                let (u, fam) = expand_universal(&s, &params, 4, 4).unwrap();
                assert!(fam.matches_display, "s={s} I={}", params.irm);
                assert!(u.specialize(&fam.family).equals(&field, &res), "s={s} I={}", params.irm);
            }
            let u = multitype::phi::universal::Universal::new(&params, 4, 4).unwrap();
            assert!(u.specialize(&u.display_joint().unwrap()).equals(&field, &res));
        }
    }
}

#[test]
fn tangent_witnesses_solve_the_system() {
    for (p, mu) in [(7u64, ch(&[(4, 1)])), (11, ch(&[(5, 1), (8, 1)]))] {
        let field = WittRing::new(p, mu.f(), 1).unwrap();
        for params in all_params(p, &mu) {
            let u = multitype::phi::universal::Universal::new(&params, 1, 2).unwrap();
            for name in &u.ring.vars {
                let t: BTreeMap<String, Wv> = [(name.clone(), field.one())].into();
                let rep = tangent_obstruction(&params, &t, None).unwrap();
                if let TangentVerdict::Solvable { witness } = &rep.verdict {
                    let got = apply_operator(&field, &rep.base, witness);
                    let l = multitype::algebra::laurent::Lops(&field);
                    for m in 0..mu.f() {
                        assert!(l.mat_eq(&got[m], &rep.first_order.mats[m]));
                    }
                }
            }
        }
    }
}

#[test]
fn tangent_truth_table() {
    use multitype::checks::{tangent_table, Precision};
    // solvable 0/1 directions, by I(ρ̄,μ); "" is t = 0
    let want: [(u64, &str, &[&str]); 12] = [
        (7, "", &["", "X_0"]),
        (7, "+0", &[""]),
        (7, "-0", &[""]),
        (11, "", &["", "X_0+X_1"]),
        (11, "+0", &["", "X_0"]),
        (11, "-0", &[""]),
        (11, "+1", &["", "X_1"]),
        (11, "+0,+1", &[""]),
        (11, "-0,+1", &[""]),
        (11, "-1", &[""]),
        (11, "+0,-1", &[""]),
        (11, "-0,-1", &[""]),
    ];
    for (p, irm, sol) in want {
        let mu = if p == 7 { ch(&[(4, 1)]) } else { ch(&[(5, 1), (8, 1)]) };
        let irm = RootSet::parse(irm, mu.f()).unwrap();
        let params = ResidualParams::simple(p, mu.clone(), irm.clone()).unwrap();
        let rows = tangent_table(&params, &Precision::default()).unwrap();
        assert_eq!(rows.len(), 1 << (2 * mu.f() + 2));
        let got: Vec<String> = rows.iter().filter(|r| r.solvable).map(|r| r.direction.join("+")).collect();
        assert_eq!(got, sol, "p={p} {irm}");
        for r in &rows {
            assert!(r.witness_ok);
            assert!(!(r.solvable && r.predicted_obstructed));
        }
    }
}

mod roundtrip {
    use super::*;
    use multitype::algebra::laurent::{Lops, Mat2};
    use multitype::algebra::quotient::QuotientRing;
    use multitype::algebra::series::Ps;
    use multitype::algebra::Ring;
    use multitype::phi::normalize::{normalize_eigenbasis, random_gauge, round_trip, NormalizeOptions, Template};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn perturbation(r: &QuotientRing, f: usize, pin: bool, rng: &mut ChaCha8Rng) -> Vec<Mat2<Ps>> {
        random_gauge(r, f, pin, rng)
    }

    pub fn setup(params: &ResidualParams, s: &Weyl, n: u32, cap: u32) -> (Template, QuotientRing, Vec<Ps>) {
        let tpl = Template::new(params, s, n, cap).unwrap();
        let r = QuotientRing::new(&tpl.u.ring, &tpl.u.type_relations(s)).unwrap();
        let theta: Vec<Ps> = tpl.params.iter().map(|&i| r.nf(&tpl.u.ring.var(i))).collect();
        (tpl, r, theta)
    }

    #[test]
    fn normal_form_round_trip_f1() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for params in all_params(7, &ch(&[(4, 1)])) {
            for s in Weyl::all(1) {
                let (tpl, r, theta) = setup(&params, &s, 3, 3);
                let fam0 = tpl.at(&r, &theta);
                let g = perturbation(&r, 1, true, &mut rng);
                let fam = fam0.base_change(&r, &g).unwrap();
                assert!(!fam.equals(&r, &fam0));
                let nf = normalize_eigenbasis(&r, &fam, &params, &s, &NormalizeOptions::default()).unwrap();
                for (a, b) in nf.values.iter().zip(&theta) {
                    assert!(r.is_zero(&r.sub(a, b)), "{} vs {}", r.base().fmt_ps(a), r.base().fmt_ps(b));
                }
            }
        }
    }

    #[test]
    fn normal_form_round_trip_f2() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mu = ch(&[(5, 1), (8, 1)]);
        for params in all_params(11, &mu) {
            for s in Weyl::all(2) {
                let (tpl, r, theta) = setup(&params, &s, 3, 3);
                let fam0 = tpl.at(&r, &theta);
                let g = perturbation(&r, 2, true, &mut rng);
                let fam = fam0.base_change(&r, &g).unwrap();
                let nf = normalize_eigenbasis(&r, &fam, &params, &s, &NormalizeOptions::default()).unwrap();
                for (a, b) in nf.values.iter().zip(&theta) {
                    assert!(r.is_zero(&r.sub(a, b)));
                }
            }
        }
    }

    #[test]
    fn unpinned_normalizations_differ_by_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mu = ch(&[(5, 1), (8, 1)]);
        for params in all_params(11, &mu).into_iter().take(4) {
            let s = Weyl(vec![true, false]);
            let (tpl, r, theta) = setup(&params, &s, 3, 3);
            let fam0 = tpl.at(&r, &theta);
            let g = perturbation(&r, 2, false, &mut rng);
            let fam = fam0.base_change(&r, &g).unwrap();
            let nf = normalize_eigenbasis(&r, &fam, &params, &s, &NormalizeOptions::default()).unwrap();
            let l = Lops(&r);
            for m in 0..2 {
                let pg = l.mat_mul(&nf.gauge[m], &g[m]);
                assert!(l.is_zero(&pg[0][1]) && l.is_zero(&pg[1][0]));
                for i in 0..2 {
                    assert!(pg[i][i].terms.keys().all(|&k| k == 0), "I={} m={m}", params.irm);
                }
            }
        }
    }

    #[test]
    fn round_trip_n4() {
        let mu = ch(&[(5, 1), (8, 1)]);
        for params in all_params(11, &mu).into_iter().step_by(4) {
            for s in Weyl::all(2) {
                let rt = round_trip(&params, &s, 4, 4, 5).unwrap();
                assert!(rt.pass());
            }
        }
    }
}
