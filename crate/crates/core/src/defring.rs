//! Multitype potentially Barsotti-Tate deformation rings as quotients of
//! O[[X_m, Y_m]]/(Y_m g_m), and the ideal calculus around them.
//!
//! Variable index m refers to ω^{(f-1-m)}, as in the φ-module charts. The framing variables
//! X_alpha, X_alpha' of the universal family are inert and are left out of the core ring.

use crate::algebra::hilbert::{hilbert_function, hilbert_samuel, HilbertSamuel};
use crate::algebra::ideal::{Ambient, IdealNF};
use crate::algebra::series::{Ps, SeriesRing};
use crate::algebra::witt::WittRing;
use crate::error::{Error, Result};
use crate::phi::omega_index;
use crate::phi::universal::{local_case, Shape, shape_of_case, Universal};
use crate::weights::ResidualParams;
use crate::weights::{types_for, RootSet, Weyl};
use serde::Serialize;
use std::sync::Arc;

pub const FRAMING_VARS: [&str; 2] = ["X_alpha", "X_alpha'"];

fn named(ring: &SeriesRing, v: &str, m: usize) -> Result<Ps> {
    ring.named(&format!("{v}_{m}"))
}

/// g_m: Y_m - p when I(ρ̄,μ) misses the index, X_m Y_m - p otherwise.
pub fn g_rel(ring: &SeriesRing, p: u64, irm: &RootSet, m: usize) -> Result<Ps> {
    let j = omega_index(irm.f(), m);
    let (x, y) = (named(ring, "X", m)?, named(ring, "Y", m)?);
    let pp = ring.int(p as i64);
    Ok(if irm.plus[j] || irm.minus[j] {
        ring.sub_ps(&ring.mul_ps(&x, &y), &pp)
    } else {
        ring.sub_ps(&y, &pp)
    })
}

/// f_m(I), or None when I misses the index.
///
/// At an index met by I(ρ̄,μ): X_m Y_m - p if both signs occur in I ∪ I(ρ̄,μ), else Y_m.
/// At a free index: Y_m for +ω, Y_m - p for -ω.
pub fn f_rel(ring: &SeriesRing, p: u64, irm: &RootSet, i: &RootSet, m: usize) -> Result<Option<Ps>> {
    let j = omega_index(irm.f(), m);
    let (ip, im) = (i.plus[j], i.minus[j]);
    if ip && im {
        return Err(Error::Precondition(format!("I contains both signs at index {j}")));
    }
    if !ip && !im {
        return Ok(None);
    }
    let (x, y) = (named(ring, "X", m)?, named(ring, "Y", m)?);
    let pp = ring.int(p as i64);
    let met = irm.plus[j] || irm.minus[j];
    let both = (ip || irm.plus[j]) && (im || irm.minus[j]);
    Ok(Some(if both {
        ring.sub_ps(&ring.mul_ps(&x, &y), &pp)
    } else if met || ip {
        y
    } else {
        ring.sub_ps(&y, &pp)
    }))
}

/// The root set cut out by a single type: +ω^{(j)} where s_j = Id, -ω^{(j)} where s_j = s,
/// so that `types_for(type_roots(s)) == [s]`.
pub fn type_roots(s: &Weyl) -> RootSet {
    let f = s.0.len();
    let mut r = RootSet::empty(f);
    for j in 0..f {
        r = r.with(j, !s.0[j]);
    }
    r
}

/// O[[X_m, Y_m]] truncated at (n, cap) over Z_p, with the residual datum I(ρ̄,μ).
#[derive(Clone, Debug)]
pub struct DefRing {
    pub p: u64,
    pub irm: RootSet,
    pub ring: SeriesRing,
    pub amb: Arc<Ambient>,
}

#[derive(Clone, Debug)]
pub struct MultitypeRing {
    pub irm: RootSet,
    pub i: RootSet,
    pub ideal: IdealNF,
}

impl MultitypeRing {
    pub fn ring(&self) -> &SeriesRing {
        &self.ideal.amb.ring
    }

    /// Every index is pinned: the ring of a single type.
    pub fn is_single_type(&self) -> bool {
        self.i.support().len() == self.irm.f()
    }

    pub fn presentation(&self) -> String {
        let r = self.ring();
        let vars = r.vars.join(",");
        format!("O[[{vars}]]/{}", self.ideal.fmt_gens())
    }

    pub fn dimension_table(&self) -> Result<Vec<u64>> {
        hilbert_function(&self.ideal)
    }

    pub fn hilbert_samuel(&self) -> Result<HilbertSamuel> {
        hilbert_samuel(&self.ideal)
    }

    /// Multiplication by p is injective on the presented ring, checked two steps of
    /// precision above the ring and projected back.
    pub fn is_flat(&self) -> Result<bool> {
        p_torsion_free(&self.ideal)
    }

    pub fn report(&self) -> Result<serde_json::Value> {
        let hs = self.hilbert_samuel().ok();
        Ok(serde_json::json!({
            "I_rho_mu": self.irm.to_string(),
            "I": self.i.to_string(),
            "presentation": self.presentation(),
            "ideal": self.ideal.to_json(),
            "framing": FRAMING_VARS,
            "dimension_table": self.dimension_table()?,
            "multiplicity": hs.as_ref().map(|h| h.e),
            "dimension_mod_p": hs.as_ref().map(|h| h.d),
            "flat": self.is_flat()?,
        }))
    }
}

pub fn p_torsion_free(ideal: &IdealNF) -> Result<bool> {
    let ring = &ideal.amb.ring;
    let hi = ring.with_precision(ring.witt.n + 2, ring.cap + 2);
    let big = Ambient::new(&hi);
    let gens: Vec<Ps> = ideal.gens.iter().map(|g| ring.convert(g, &hi)).collect();
    let colon = IdealNF::new(&big, &gens)?.colon_p()?;
    Ok(colon.gens.iter().all(|g| ideal.contains(&hi.convert(g, ring))))
}

#[derive(Clone, Debug, Serialize)]
pub struct TransversalityReport {
    pub types: (String, String),
    pub sum: String,
    pub p_in_sum: bool,
    pub nonzero: bool,
    pub colength: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GlueLevel {
    pub k: u32,
    pub a: u64,
    pub b_plus: u64,
    pub b_minus: u64,
    pub c: u64,
    /// a + c - b_plus - b_minus: the part of Tor_1(C, A/m^k) surviving in the truncation
    pub defect: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GlueReport {
    pub i: String,
    pub j: usize,
    pub plus: String,
    pub minus: String,
    /// ideal of R^{T_I} equals the intersection of the two halves (injective, exact in the middle)
    pub kernel_ok: bool,
    /// the sum of the two halves equals (half, p) (cokernel is R^{T_{I∪ω}}/p)
    pub cokernel_ok: bool,
    pub levels: Vec<GlueLevel>,
    /// every truncation level has zero defect (the truncated sequence is short exact)
    pub truncations_exact: bool,
    /// the truncated sequences are right exact, so no defect is negative
    pub right_exact: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityReport {
    pub i: String,
    pub j: usize,
    pub e_plus: i64,
    pub e_minus: i64,
    pub e_both: i64,
    pub e_whole: i64,
    pub pass: bool,
}

impl DefRing {
    pub fn new(p: u64, irm: &RootSet, n: u32, cap: u32) -> Result<DefRing> {
        if !irm.is_admissible() {
            return Err(Error::Param("I(ρ̄,μ) has a full pair".into()));
        }
        let f = irm.f();
        let mut names: Vec<String> = (0..f).map(|m| format!("X_{m}")).collect();
        names.extend((0..f).map(|m| format!("Y_{m}")));
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let ring = SeriesRing::new(WittRing::new(p, 1, n)?, &refs, cap)?;
        let amb = Ambient::new(&ring);
        Ok(DefRing { p, irm: irm.clone(), ring, amb })
    }

    pub fn f(&self) -> usize {
        self.irm.f()
    }

    fn base_gens(&self) -> Result<Vec<Ps>> {
        (0..self.f())
            .map(|m| Ok(self.ring.mul_ps(&named(&self.ring, "Y", m)?, &g_rel(&self.ring, self.p, &self.irm, m)?)))
            .collect()
    }

    pub fn base_ring(&self) -> Result<MultitypeRing> {
        self.quotient(&RootSet::empty(self.f()))
    }

    pub fn quotient(&self, i: &RootSet) -> Result<MultitypeRing> {
        if i.f() != self.f() {
            return Err(Error::Param("I and I(ρ̄,μ) have different f".into()));
        }
        let mut gens = self.base_gens()?;
        for m in 0..self.f() {
            if let Some(g) = f_rel(&self.ring, self.p, &self.irm, i, m)? {
                gens.push(g);
            }
        }
        Ok(MultitypeRing { irm: self.irm.clone(), i: i.clone(), ideal: IdealNF::new(&self.amb, &gens)? })
    }

    pub fn single_type(&self, s: &Weyl) -> Result<MultitypeRing> {
        self.quotient(&type_roots(s))
    }

    pub fn transversality(&self, s1: &Weyl, s2: &Weyl) -> Result<TransversalityReport> {
        if s1 == s2 {
            return Err(Error::Precondition("the same type was given twice".into()));
        }
        let (a, b) = (self.single_type(s1)?, self.single_type(s2)?);
        let sum = a.ideal.sum(&b.ideal)?;
        let p_in_sum = sum.contains(&self.ring.int(self.p as i64));
        let nonzero = !sum.contains(&self.ring.int(1));
        Ok(TransversalityReport {
            types: (s1.to_string(), s2.to_string()),
            sum: IdealNF::new(&self.amb, &sum.gens)?.fmt_gens(),
            p_in_sum,
            nonzero,
            colength: sum.colength(),
            pass: p_in_sum && nonzero,
        })
    }

    fn check_glue_pre(&self, i: &RootSet, j: usize) -> Result<()> {
        let u = i.union(&self.irm);
        if j >= self.f() || u.plus[j] || u.minus[j] || !i.is_admissible() {
            return Err(Error::Precondition(format!("index {j} must be free in I ∪ I(ρ̄,μ) = {u}")));
        }
        Ok(())
    }

    /// 0 → R^{T_I} → R^{T_{I∪ω}} ⊕ R^{T_{I∪-ω}} → R^{T_{I∪ω}}/p → 0 at ω = ω^{(j)}.
    pub fn glue_sequence_check(&self, i: &RootSet, j: usize) -> Result<GlueReport> {
        self.check_glue_pre(i, j)?;
        let a = self.quotient(i)?.ideal;
        let bp = self.quotient(&i.with(j, true))?.ideal;
        let bm = self.quotient(&i.with(j, false))?.ideal;
        let pid = IdealNF::new(&self.amb, &[self.ring.int(self.p as i64)])?;
        let c = bp.sum(&pid)?;
        let kernel_ok = a.equals(&bp.intersection(&bm)?);
        let cokernel_ok = bp.sum(&bm)?.equals(&c);
        let r = &self.ring;
        let mut levels = vec![];
        for k in 1..=r.cap.min(r.witt.n) {
            let rk = r.with_precision(k, k - 1);
            let ak = Ambient::new(&rk);
            let len = |id: &IdealNF| -> Result<u64> {
                let g: Vec<Ps> = id.gens.iter().map(|g| r.convert(g, &rk)).collect();
                Ok(IdealNF::new(&ak, &g)?.colength())
            };
            let (la, lp, lm, lc) = (len(&a)?, len(&bp)?, len(&bm)?, len(&c)?);
            let defect = (la + lc) as i64 - (lp + lm) as i64;
            levels.push(GlueLevel { k, a: la, b_plus: lp, b_minus: lm, c: lc, defect });
        }
        let truncations_exact = levels.iter().all(|l| l.defect == 0);
        let right_exact = levels.iter().all(|l| l.defect >= 0);
        Ok(GlueReport {
            i: i.to_string(),
            j,
            plus: bp.fmt_gens(),
            minus: bm.fmt_gens(),
            kernel_ok,
            cokernel_ok,
            levels,
            truncations_exact,
            right_exact,
            pass: kernel_ok && cokernel_ok && right_exact,
        })
    }

    /// Hilbert-Samuel multiplicities of the mod p fibres around index j.
    pub fn multiplicity_compare(&self, i: &RootSet, j: usize) -> Result<MultiplicityReport> {
        self.check_glue_pre(i, j)?;
        let a = self.quotient(i)?.ideal;
        let bp = self.quotient(&i.with(j, true))?.ideal;
        let bm = self.quotient(&i.with(j, false))?.ideal;
        let e = |id: &IdealNF| hilbert_samuel(id).map(|h| h.e);
        let (e_plus, e_minus) = (e(&bp)?, e(&bm)?);
        let e_both = e(&bp.sum(&bm)?)?;
        let e_whole = e(&a)?;
        Ok(MultiplicityReport {
            i: i.to_string(),
            j,
            e_plus,
            e_minus,
            e_both,
            e_whole,
            pass: e_plus == e_both && e_minus == e_both && e_whole == e_plus + e_minus,
        })
    }

    /// The ideal of R^{T_I} equals the intersection of its single-type ideals. The
    /// intersections are taken two steps of precision higher and projected back once, since
    /// nested truncated intersections pick up elements such as p^{N-1} Y.
    pub fn intersection_property(&self, i: &RootSet) -> Result<bool> {
        let whole = self.quotient(i)?.ideal;
        let r = &self.ring;
        let hi = DefRing::new(self.p, &self.irm, r.witt.n + 2, r.cap + 2)?;
        let mut acc: Option<IdealNF> = None;
        for s in types_for(i)? {
            let t = hi.single_type(&s)?.ideal;
            acc = Some(match acc {
                None => t,
                Some(x) => x.intersection(&t)?,
            });
        }
        let Some(acc) = acc else { return Ok(false) };
        let gens: Vec<Ps> = acc.gens.iter().map(|g| hi.ring.convert(g, r)).collect();
        Ok(IdealNF::new(&self.amb, &gens)?.equals(&whole))
    }
}

/// The global chart modulo f(I_s) against the single-type expansion for s. The single-type
/// coordinate Y_m on a swapped free branch corresponds to Y_m - p in the global chart.
pub fn chart_agreement(params: &ResidualParams, s: &Weyl, n: u32, cap: u32) -> Result<bool> {
    let u = Universal::new(params, n, cap)?;
    let r = &u.ring;
    let f = params.f;
    let roots = type_roots(s);
    let mut rels = vec![];
    for m in 0..f {
        rels.push(r.mul_ps(&u.y(m), &g_rel(r, params.p, &params.irm, m)?));
        rels.extend(f_rel(r, params.p, &params.irm, &roots, m)?);
    }
    let amb = Ambient::new(r);
    let global = IdealNF::new(&amb, &rels)?;
    let pp = r.int(params.p as i64);
    let images: Vec<Ps> = (0..r.nvars())
        .map(|i| {
            if i >= f && i < 2 * f {
                let m = i - f;
                if shape_of_case(local_case(params, s, omega_index(f, m))) == Shape::A3 {
                    return r.sub_ps(&r.var(i), &pp);
                }
            }
            r.var(i)
        })
        .collect();
    let moved: Vec<Ps> = u.type_relations(s).iter().map(|g| r.substitute(g, r, &images)).collect();
    if !global.equals(&IdealNF::new(&amb, &moved)?) {
        return Ok(false);
    }
    let (fam, _) = u.expand(s)?;
    let fam = fam.map(|c| r.substitute(c, r, &images));
    let joint = u.display_joint()?;
    let q = crate::algebra::quotient::QuotientRing::from_ideal(global);
    let a = fam.map(|c| q.nf(c));
    let b = joint.map(|c| q.nf(c));
    Ok(a.equals(r, &b))
}
