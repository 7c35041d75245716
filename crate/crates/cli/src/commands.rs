use crate::{CacheOp, Fail, Global, Outcome};
use multitype::algebra::laurent::Mat2;
use multitype::algebra::witt::{WittRing, Wv};
use multitype::brauer::cache::{Cache, DecompositionTable, Recompute};
use multitype::brauer::ordinary_character;
use multitype::checks::{self, Scope};
use multitype::defring::{type_roots, DefRing};
use multitype::phi::normalize::round_trip;
use multitype::phi::residual::build_residual;
use multitype::phi::tangent::{tangent_obstruction, TangentVerdict};
use multitype::phi::universal::{expand_universal, Universal};
use multitype::phi::{family_json, PhiFamily};
use multitype::skeleton::{build_skeleton, covering_set_check, gluing_shadow, integral_skeleton, Multiset};
use multitype::weights::*;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};

fn open_cache(g: &Global) -> Cache {
    Cache::new(g.cache_dir.clone())
}

fn multiset_json(m: &Multiset) -> Value {
    json!(m.iter().map(|(w, k)| json!({ "weight": w.to_json(), "multiplicity": k })).collect::<Vec<_>>())
}

fn residual_params(p: u64, mu: &Character, irm: &RootSet) -> Result<ResidualParams, Fail> {
    Ok(ResidualParams::simple(p, mu.clone(), irm.clone())?)
}

fn wv_family(field: &WittRing, fam: &PhiFamily<Wv>) -> Value {
    family_json(fam, |c| json!(field.to_canonical(c)))
}

fn mats_json(field: &WittRing, mats: &[Mat2<Wv>]) -> Value {
    json!(mats
        .iter()
        .map(|m| {
            json!((0..2)
                .map(|i| (0..2)
                    .map(|j| m[i][j].terms.iter().map(|(k, c)| json!([k, field.to_canonical(c)])).collect::<Vec<_>>())
                    .collect::<Vec<_>>())
                .collect::<Vec<_>>())
        })
        .collect::<Vec<_>>())
}

pub fn weights(g: &Global) -> Result<Outcome, Fail> {
    let pt = g.point(true)?;
    let (p, mu) = (pt.p, pt.mu.unwrap());
    if !is_generic(&mu, p) {
        return Err(Fail::core(multitype::error::Error::NonGeneric(format!("{mu} at p={p}"))));
    }
    let cache = open_cache(g);
    let sigma: Vec<Value> = RootSet::all(pt.f)
        .iter()
        .map(|j| {
            let w = sigma_j(p, &mu, j)?;
            Ok(json!({ "J": j.to_string(), "k": j.multidegree(), "weight": w.to_json(), "dim": w.dim() }))
        })
        .collect::<Result<_, multitype::error::Error>>()?;
    let mut pass = true;
    let mut types = vec![];
    for s in Weyl::all(pt.f) {
        let o = ordinary_character(p, &s, &mu)?;
        let jh = jh_of_type(p, &s, &mu)?;
        let oracle = cache.decompose(p, &s, &mu)?;
        let mine: BTreeSet<_> = jh.iter().map(|(_, w)| w.clone()).collect();
        let agrees = mine.len() == oracle.len() && oracle.iter().all(|w| mine.contains(w));
        pass &= agrees;
        types.push(json!({
            "s": s.to_string(),
            "principal_series": o.principal,
            "dim": o.degree(),
            "jh": jh.iter().map(|(j, w)| json!({ "J": j.to_string(), "weight": w.to_json(), "dim": w.dim() })).collect::<Vec<_>>(),
            "jh_dims": jh.iter().map(|(_, w)| w.dim()).collect::<Vec<_>>(),
            "oracle_agrees": agrees,
        }));
    }
    let mut result = json!({ "generic": true, "mu": mu.to_string(), "sigma": sigma, "types": types });
    if g.irhomu.is_some() {
        let params = residual_params(p, &mu, &pt.irm)?;
        let w: Vec<Value> = weight_set(&params)?.iter().map(|w| w.to_json()).collect();
        result["W_rho"] = json!(w);
    }
    Ok(Outcome::new(result, pass))
}

pub fn skeleton(g: &Global) -> Result<Outcome, Fail> {
    let pt = g.point(true)?;
    let (p, mu) = (pt.p, pt.mu.unwrap());
    let i = pt.i.unwrap_or_else(|| RootSet::empty(pt.f));
    let cache = open_cache(g);
    let sk = build_skeleton(p, &mu, &i)?;
    let graded_ok = sk.length() == sk.expected_length() && sk.strata_match() && sk.edges_consistent() && sk.slices_multiplicity_free();
    let int = integral_skeleton(&cache, p, &mu, &i)?;
    let reduction = int.reduction_consistent(&sk);
    let mut pass = graded_ok && reduction && int.length_mod_p() == sk.expected_length();
    let mut shadows = vec![];
    if i.is_admissible() {
        for j in (0..pt.f).filter(|&j| !i.plus[j] && !i.minus[j]) {
            let s = gluing_shadow(&cache, p, &mu, &i, j)?;
            pass &= s.pass;
            shadows.push(serde_json::to_value(&s).expect("serialises"));
        }
    }
    let mut result = json!({
        "graded": sk.to_json(),
        "checks": {
            "length": sk.length(),
            "expected_length": sk.expected_length(),
            "strata_match": sk.strata_match(),
            "edges_consistent": sk.edges_consistent(),
            "slices_multiplicity_free": sk.slices_multiplicity_free(),
            "reduction_consistent": reduction,
        },
        "integral": {
            "types": int.types.iter().map(|t| json!({ "s": t.s.to_string(), "dim": t.dim, "jh": t.jh.iter().map(|w| w.to_json()).collect::<Vec<_>>() })).collect::<Vec<_>>(),
            "rank": int.rank,
            "length_mod_p": int.length_mod_p(),
            "jh": multiset_json(&int.jh),
        },
        "gluing_shadows": shadows,
    });
    let fits = (0..pt.f).all(|t| [i.plus[t], i.minus[t], pt.irm.plus[t], pt.irm.minus[t]].iter().filter(|&&b| b).count() == 1);
    if g.irhomu.is_some() && fits {
        let params = residual_params(p, &mu, &pt.irm)?;
        let w = weight_set(&params)?;
        let rep = covering_set_check(p, &mu, &i, &pt.irm, &w)?;
        pass &= rep.pass;
        result["covering"] = json!({
            "steps": rep.steps.len(),
            "pass": rep.pass,
            "counterexamples": rep.counterexamples.iter().map(|c| json!({ "J'": c.j_prime.to_string(), "index": c.index, "J": c.j.to_string() })).collect::<Vec<_>>(),
        });
    }
    Ok(Outcome::new(result, pass))
}

pub fn defring(g: &Global) -> Result<Outcome, Fail> {
    let pt = g.point(false)?;
    let prec = g.precision();
    let d = DefRing::new(pt.p, &pt.irm, prec.n, prec.m)?;
    let f = pt.f;
    let base = d.base_ring()?;
    let mut pass = base.is_flat()?;
    let sets: Vec<RootSet> = match &pt.i {
        Some(i) => vec![i.clone()],
        None => RootSet::all_admissible(f),
    };
    let quotients: Vec<Value> = sets.par_iter().map(|i| d.quotient(i)?.report()).collect::<Result<_, _>>()?;
    pass &= quotients.iter().all(|q| q["flat"] == true);
    let mut trans = vec![];
    for s1 in Weyl::all(f) {
        for s2 in Weyl::all(f).into_iter().filter(|s2| *s2 > s1) {
            let t = d.transversality(&s1, &s2)?;
            pass &= t.pass;
            trans.push(serde_json::to_value(&t).expect("serialises"));
        }
    }
    let mut jobs = vec![];
    for i in &sets {
        let u = i.union(&pt.irm);
        for j in (0..f).filter(|&j| !u.plus[j] && !u.minus[j]) {
            jobs.push((i.clone(), j));
        }
    }
    let hs_cap = if f == 1 { prec.m } else { 3 * prec.m / 4 };
    let hs = DefRing::new(pt.p, &pt.irm, 2, hs_cap)?;
    let glue: Vec<(Value, Value, bool)> = jobs
        .par_iter()
        .map(|(i, j)| {
            let gl = d.glue_sequence_check(i, *j)?;
            let m = hs.multiplicity_compare(i, *j)?;
            let ok = gl.pass && m.pass;
            Ok((serde_json::to_value(&gl).expect("serialises"), serde_json::to_value(&m).expect("serialises"), ok))
        })
        .collect::<Result<_, multitype::error::Error>>()?;
    pass &= glue.iter().all(|x| x.2);
    let singles: Vec<Value> = Weyl::all(f)
        .iter()
        .map(|s| json!({ "s": s.to_string(), "roots": type_roots(s).to_string() }))
        .collect();
    Ok(Outcome::new(
        json!({
            "I_rho_mu": pt.irm.to_string(),
            "presentation": base.presentation(),
            "base": base.report()?,
            "single_types": singles,
            "quotients": quotients,
            "transversality": trans,
            "glue": glue.iter().map(|x| x.0.clone()).collect::<Vec<_>>(),
            "multiplicity": glue.iter().map(|x| x.1.clone()).collect::<Vec<_>>(),
            "multiplicity_precision": { "N": 2, "M": hs_cap },
        }),
        pass,
    ))
}

pub fn phi(g: &Global) -> Result<Outcome, Fail> {
    let pt = g.point(true)?;
    let mu = pt.mu.unwrap();
    let params = residual_params(pt.p, &mu, &pt.irm)?;
    let n = g.precision().n;
    let field = WittRing::new(pt.p, pt.f, 1)?;
    let res = build_residual(&params)?;
    let seed = g.seed.unwrap_or(0);
    let per_type: Vec<(Value, bool)> = Weyl::all(pt.f)
        .par_iter()
        .enumerate()
        .map(|(k, s)| {
            let (u, fam) = expand_universal(s, &params, n, n)?;
            let specialises = u.specialize(&fam.family).equals(&field, &res);
            let rt = if pt.f <= 2 { Some(round_trip(&params, s, n, n, seed.wrapping_add(k as u64))?) } else { None };
            let ok = fam.matches_display && specialises && rt.as_ref().map_or(true, |r| r.pass());
            Ok((
                json!({
                    "s": s.to_string(),
                    "shapes": fam.shapes,
                    "matches_display": fam.matches_display,
                    "specialises_to_residual": specialises,
                    "round_trip": rt,
                }),
                ok,
            ))
        })
        .collect::<Result<_, multitype::error::Error>>()?;
    let u = Universal::new(&params, n, n)?;
    let joint = u.specialize(&u.display_joint()?).equals(&field, &res);
    let pass = joint && per_type.iter().all(|x| x.1);
    Ok(Outcome::new(
        json!({
            "residual": wv_family(&field, &res),
            "types": per_type.into_iter().map(|x| x.0).collect::<Vec<_>>(),
            "joint_display_specialises": joint,
        }),
        pass,
    ))
}

pub fn tangent(g: &Global, t: Option<&str>) -> Result<Outcome, Fail> {
    let pt = g.point(true)?;
    let mu = pt.mu.unwrap();
    if pt.f > 2 {
        return Err(Fail::param("tangent problems are supported for f ≤ 2"));
    }
    let params = residual_params(pt.p, &mu, &pt.irm)?;
    let prec = g.precision();
    let field = WittRing::new(pt.p, pt.f, 1)?;
    match t {
        Some(dir) => {
            let t: BTreeMap<String, Wv> =
                dir.split(',').map(str::trim).filter(|x| !x.is_empty()).map(|v| (v.to_string(), field.one())).collect();
            let w = prec.window.unwrap_or(pt.p as i64 + 2);
            let rep = tangent_obstruction(&params, &t, Some((-w, 2 * w)))?;
            let verdict = match &rep.verdict {
                TangentVerdict::Solvable { witness } => json!({ "solvable": true, "witness": mats_json(&field, witness) }),
                TangentVerdict::Obstructed { certificate } => json!({
                    "solvable": false,
                    "certificate": certificate.iter().map(|c| json!({
                        "index": c.index, "row": c.row, "col": c.col, "degree": c.degree, "coeff": field.to_canonical(&c.coeff),
                    })).collect::<Vec<_>>(),
                }),
            };
            Ok(Outcome::new(
                json!({
                    "direction": t.keys().collect::<Vec<_>>(),
                    "window": [rep.window.0, rep.window.1],
                    "verdict": verdict,
                    "poles_in_kernel": rep.poles_in_kernel,
                    "first_order": wv_family(&field, &rep.first_order),
                }),
                true,
            ))
        }
        None => {
            let rows = checks::tangent_table(&params, &prec)?;
            let implication = rows.iter().all(|r| !(r.solvable && r.predicted_obstructed));
            let literal = rows.iter().all(|r| r.solvable != r.predicted_obstructed);
            let verified = rows.iter().all(|r| r.witness_ok);
            Ok(Outcome::new(
                json!({
                    "rows": rows,
                    "solvable_implies_free_Y_vanish": implication,
                    "obstructed_iff_free_Y_nonzero": literal,
                    "witnesses_and_certificates_verified": verified,
                }),
                implication && verified,
            ))
        }
    }
}

fn scope(g: &Global) -> Result<Scope, Fail> {
    let d = Scope::default();
    let ps = if g.p.is_empty() { d.ps } else { g.p.clone() };
    let fs = if g.f.is_empty() { d.fs } else { g.f.clone() };
    if let Some(p) = ps.iter().find(|&&p| !(5..=97).contains(&p) || !(2..p).take_while(|k| k * k <= p).all(|k| p % k != 0)) {
        return Err(Fail::param(format!("p = {p} must be a prime between 5 and 97")));
    }
    if let Some(f) = fs.iter().find(|&&f| !(1..=3).contains(&f)) {
        return Err(Fail::param(format!("f = {f} is outside 1..=3")));
    }
    Ok(Scope { ps, fs, mus: g.mus()?, seed: g.seed.unwrap_or(0), prec: g.precision() })
}

pub fn oracle(g: &Global) -> Result<Outcome, Fail> {
    if g.cache_dir.is_none() {
        return Err(Fail::param("oracle needs --cache-dir or MULTITYPE_CACHE_DIR"));
    }
    let sc = scope(g)?;
    let cache = open_cache(g);
    let mut tables = vec![];
    for &p in &sc.ps {
        for &f in &sc.fs {
            let types: Vec<(Weyl, Character)> =
                sc.mus_for(p, f).into_iter().flat_map(|mu| Weyl::all(f).into_iter().map(move |s| (s, mu.clone()))).collect();
            types.par_iter().map(|(s, mu)| cache.decompose(p, s, mu).map(|_| ())).collect::<Result<Vec<_>, _>>()?;
            let t = DecompositionTable::build(&cache, p, f, &types)?;
            let generic_ok = t.entries.iter().flatten().all(|&e| e <= 1);
            tables.push(json!({
                "p": p,
                "f": f,
                "columns": t.columns.iter().map(|(s, mu)| format!("{s} {mu}")).collect::<Vec<_>>(),
                "rows": t.rows.iter().map(|w| w.to_json()).collect::<Vec<_>>(),
                "entries": t.entries,
                "multiplicity_free": generic_ok,
            }));
        }
    }
    let pass = tables.iter().all(|t| t["multiplicity_free"] == true);
    Ok(Outcome::new(json!({ "tables": tables }), pass))
}

pub fn cache(g: &Global, op: CacheOp) -> Result<Outcome, Fail> {
    let c = open_cache(g);
    if c.dir().is_none() {
        return Err(Fail::param("cache commands need --cache-dir or MULTITYPE_CACHE_DIR"));
    }
    match op {
        CacheOp::List => {
            let cols = c.list()?;
            let rows: Vec<Value> = cols
                .iter()
                .map(|col| json!({ "p": col.p, "f": col.f, "s": col.s.to_string(), "mu": col.mu.to_string(), "factors": col.weights.len() }))
                .collect();
            Ok(Outcome::new(json!({ "columns": rows }), true))
        }
        CacheOp::Verify { all } => {
            let mode = if all { Recompute::All } else { Recompute::One(g.seed.unwrap_or(0)) };
            let rep = c.verify(mode)?;
            let pass = rep.bad.is_empty();
            Ok(Outcome::new(serde_json::to_value(&rep).expect("serialises"), pass))
        }
        CacheOp::Purge => Ok(Outcome::new(json!({ "removed": c.purge()? }), true)),
    }
}

pub fn check_all(g: &Global, stability: bool) -> Result<Outcome, Fail> {
    let sc = scope(g)?;
    let cache = open_cache(g);
    let mut cs = checks::run_checks(&cache, &sc);
    if stability {
        let max = rayon::current_num_threads();
        let c9 = checks::check_stability(&cache, &sc, &cs, max, true);
        cs.push(c9);
    }
    let pass = cs.iter().all(|c| c.pass);
    let timings = json!(cs.iter().map(|c| (c.id.to_string(), c.elapsed.as_secs_f64())).collect::<BTreeMap<_, _>>());
    let mut o = Outcome::new(checks::report_json(&cs), pass);
    o.timings = Some(json!({ "criteria_seconds": timings }));
    Ok(o)
}
