//! Grothendieck-group models of R_{μ,I} (graded by J) and of its integral lift (by types),
//! with the numerical consequences of the gluing sequence and the covering argument.

use crate::brauer::cache::Cache;
use crate::brauer::ordinary_character;
use crate::error::{Error, Result};
use crate::weights::{is_generic, sigma_j, stratum_counts, types_for, Character, RootSet, SerreWeight, Weyl};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

pub type Multiset = BTreeMap<SerreWeight, u32>;

fn multiset<'a>(it: impl IntoIterator<Item = &'a SerreWeight>) -> Multiset {
    let mut m = Multiset::new();
    for w in it {
        *m.entry(w.clone()).or_default() += 1;
    }
    m
}

fn total(m: &Multiset) -> u64 {
    m.values().map(|&k| k as u64).sum()
}

fn union(a: &Multiset, b: &Multiset) -> Multiset {
    let mut out = a.clone();
    for (w, k) in b {
        *out.entry(w.clone()).or_default() += k;
    }
    out
}

fn dominates(a: &Multiset, b: &Multiset) -> bool {
    b.iter().all(|(w, k)| a.get(w).copied().unwrap_or(0) >= *k)
}

#[derive(Clone, Debug, Serialize)]
pub struct Slot {
    pub j: RootSet,
    pub k: Vec<u8>,
    pub weight: SerreWeight,
}

#[derive(Clone, Debug, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// ω-index of the added element and its sign
    pub index: usize,
    pub plus: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedSkeleton {
    pub p: u64,
    pub mu: Character,
    pub i: RootSet,
    pub slots: Vec<Slot>,
    pub edges: Vec<Edge>,
    /// number of slots with |𝐤(J)| = k
    pub strata: Vec<u64>,
}

pub fn build_skeleton(p: u64, mu: &Character, i: &RootSet) -> Result<GradedSkeleton> {
    if !is_generic(mu, p) {
        return Err(Error::NonGeneric(format!("{mu} at p={p}")));
    }
    if i.f() != mu.f() {
        return Err(Error::Param("I and μ disagree on f".into()));
    }
    let f = mu.f();
    let js: Vec<RootSet> = RootSet::all(f).into_iter().filter(|j| j.disjoint(i)).collect();
    let mut slots = vec![];
    for j in &js {
        slots.push(Slot { j: j.clone(), k: j.multidegree(), weight: sigma_j(p, mu, j)? });
    }
    let pos: BTreeMap<RootSet, usize> = js.iter().cloned().enumerate().map(|(a, b)| (b, a)).collect();
    let mut edges = vec![];
    for (from, j) in js.iter().enumerate() {
        for idx in 0..f {
            for plus in [true, false] {
                if !j.contains(idx, plus) && !i.contains(idx, plus) {
                    edges.push(Edge { from, to: pos[&j.with(idx, plus)], index: idx, plus });
                }
            }
        }
    }
    let mut strata = vec![0u64; 2 * f + 1];
    for j in &js {
        strata[j.len()] += 1;
    }
    while strata.len() > 1 && strata.last() == Some(&0) {
        strata.pop();
    }
    Ok(GradedSkeleton { p, mu: mu.clone(), i: i.clone(), slots, edges, strata })
}

impl GradedSkeleton {
    pub fn length(&self) -> u64 {
        self.slots.len() as u64
    }

    pub fn expected_length(&self) -> u64 {
        1 << (2 * self.mu.f() - self.i.len())
    }

    pub fn weights(&self) -> Multiset {
        multiset(self.slots.iter().map(|s| &s.weight))
    }

    pub fn strata_match(&self) -> bool {
        self.strata == stratum_counts(self.mu.f(), &self.i)
    }

    /// Every edge raises 𝐤 by one at its index, and every slot has one outgoing edge per
    /// element of S outside J ∪ I.
    pub fn edges_consistent(&self) -> bool {
        let f = self.mu.f();
        let graded = self.edges.iter().all(|e| {
            let (a, b) = (&self.slots[e.from].k, &self.slots[e.to].k);
            (0..f).all(|t| b[t] == a[t] + (t == e.index) as u8)
        });
        let mut out = vec![0usize; self.slots.len()];
        for e in &self.edges {
            out[e.from] += 1;
        }
        let degrees = self.slots.iter().zip(&out).all(|(s, &d)| d == 2 * f - s.j.len() - self.i.len());
        graded && degrees
    }

    /// For every 𝐤, the weights of the slots with 𝐤(J) = 𝐤 or 𝐤 + e_t (the slice W_{𝐤,𝐤+1,I})
    /// form a set.
    pub fn slices_multiplicity_free(&self) -> bool {
        let f = self.mu.f();
        let ks: BTreeSet<&Vec<u8>> = self.slots.iter().map(|s| &s.k).collect();
        ks.into_iter().all(|k| {
            let ws: Vec<&SerreWeight> = self
                .slots
                .iter()
                .filter(|s| {
                    let d: Vec<i32> = (0..f).map(|t| s.k[t] as i32 - k[t] as i32).collect();
                    d.iter().all(|&x| x == 0 || x == 1) && d.iter().sum::<i32>() <= 1
                })
                .map(|s| &s.weight)
                .collect();
            ws.iter().collect::<BTreeSet<_>>().len() == ws.len()
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "mu": self.mu.to_string(),
            "I": self.i.to_string(),
            "slots": self.slots.iter().map(|s| serde_json::json!({
                "J": s.j.to_string(),
                "k": s.k,
                "weight": s.weight.to_json(),
            })).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| serde_json::json!([e.from, e.to])).collect::<Vec<_>>(),
            "strata": self.strata,
            "length": self.length(),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TypeEntry {
    pub s: Weyl,
    pub dim: u64,
    pub jh: Vec<SerreWeight>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralSkeleton {
    pub p: u64,
    pub mu: Character,
    pub i: RootSet,
    pub types: Vec<TypeEntry>,
    pub rank: u64,
    pub jh: Multiset,
}

pub fn integral_skeleton(cache: &Cache, p: u64, mu: &Character, i: &RootSet) -> Result<IntegralSkeleton> {
    let mut types = vec![];
    for s in types_for(i)? {
        let dim = ordinary_character(p, &s, mu)?.degree() as u64;
        let jh = cache.decompose(p, &s, mu)?;
        types.push(TypeEntry { s, dim, jh });
    }
    let rank = types.iter().map(|t| t.dim).sum();
    let jh = multiset(types.iter().flat_map(|t| t.jh.iter()));
    Ok(IntegralSkeleton { p, mu: mu.clone(), i: i.clone(), types, rank, jh })
}

impl IntegralSkeleton {
    pub fn length_mod_p(&self) -> u64 {
        total(&self.jh)
    }

    /// The reduction mod p has the graded skeleton's weights.
    pub fn reduction_consistent(&self, g: &GradedSkeleton) -> bool {
        self.jh == g.weights()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GluingShadow {
    pub i: String,
    pub j: usize,
    pub ranks: (u64, u64, u64),
    pub lengths_mod_p: (u64, u64, u64),
    pub torsion_length: u64,
    pub expected_torsion_length: u64,
    pub rank_additive: bool,
    /// JH(A/p) = JH(B₁/p) ⊔ JH(B₂/p): the Tor_1 term C cancels against the cokernel
    pub jh_additive: bool,
    /// C is a common quotient of B₁/p and B₂/p
    pub torsion_in_both: bool,
    pub pass: bool,
}

/// Numerical shadow of 0 → R̃_{μ,I} → R̃_{μ,I∪{ω}} ⊕ R̃_{μ,I∪{-ω}} → R_{μ,I∪{±ω}} → 0, ω = ω^{(j)}.
pub fn gluing_shadow(cache: &Cache, p: u64, mu: &Character, i: &RootSet, j: usize) -> Result<GluingShadow> {
    if !i.is_admissible() || j >= mu.f() || i.plus[j] || i.minus[j] {
        return Err(Error::Precondition(format!("index {j} must be free in the admissible set {i}")));
    }
    let a = integral_skeleton(cache, p, mu, i)?;
    let b1 = integral_skeleton(cache, p, mu, &i.with(j, true))?;
    let b2 = integral_skeleton(cache, p, mu, &i.with(j, false))?;
    let c = build_skeleton(p, mu, &i.with(j, true).with(j, false))?;
    let cw = c.weights();
    let rank_additive = a.rank == b1.rank + b2.rank;
    let jh_additive = a.jh == union(&b1.jh, &b2.jh);
    let torsion_in_both = dominates(&b1.jh, &cw) && dominates(&b2.jh, &cw);
    let expected = 1u64 << (2 * mu.f() - i.len() - 2);
    let torsion_length = c.length();
    Ok(GluingShadow {
        i: i.to_string(),
        j,
        ranks: (a.rank, b1.rank, b2.rank),
        lengths_mod_p: (a.length_mod_p(), b1.length_mod_p(), b2.length_mod_p()),
        torsion_length,
        expected_torsion_length: expected,
        rank_additive,
        jh_additive,
        torsion_in_both,
        pass: rank_additive && jh_additive && torsion_in_both && torsion_length == expected,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverStep {
    pub j_prime: RootSet,
    pub index: usize,
    pub j: RootSet,
    pub covered: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoveringReport {
    pub steps: Vec<CoverStep>,
    pub counterexamples: Vec<CoverStep>,
    pub pass: bool,
}

/// Replay of the neighbour rule: for each slot J' with σ_{J'} in `w_set` and each index t
/// met by J', the slot one level down prescribed by the rule must have its weight in
/// `w_set` too. At t the distinguished element is the one in I(ρ̄,μ), or the one outside I.
pub fn covering_set_check(
    p: u64,
    mu: &Character,
    i: &RootSet,
    irm: &RootSet,
    w_set: &BTreeSet<SerreWeight>,
) -> Result<CoveringReport> {
    let f = mu.f();
    if (0..f).any(|t| i.plus[t] as u8 + i.minus[t] as u8 + irm.plus[t] as u8 + irm.minus[t] as u8 != 1) {
        return Err(Error::Precondition("each index must be met exactly once by I or I(ρ̄,μ)".into()));
    }
    let sk = build_skeleton(p, mu, i)?;
    // sign of w_t ω^{(t)}
    let w_plus: Vec<bool> = (0..f).map(|t| if irm.plus[t] || irm.minus[t] { irm.plus[t] } else { !i.plus[t] }).collect();
    let mut steps = vec![];
    for slot in &sk.slots {
        if !w_set.contains(&slot.weight) {
            continue;
        }
        for t in 0..f {
            let (jp, covered) = match slot.k[t] {
                0 => continue,
                2 => {
                    let jj = slot.j.without(t, !w_plus[t]);
                    let ok = w_set.contains(&sigma_j(p, mu, &jj)?);
                    (jj, ok)
                }
                _ => {
                    let premise = slot.j.contains(t, w_plus[t]);
                    let jj = slot.j.without(t, w_plus[t]).without(t, !w_plus[t]);
                    let ok = premise && w_set.contains(&sigma_j(p, mu, &jj)?);
                    (jj, ok)
                }
            };
            steps.push(CoverStep { j_prime: slot.j.clone(), index: t, j: jp, covered });
        }
    }
    let counterexamples: Vec<CoverStep> = steps.iter().filter(|s| !s.covered).cloned().collect();
    Ok(CoveringReport { pass: counterexamples.is_empty(), steps, counterexamples })
}
