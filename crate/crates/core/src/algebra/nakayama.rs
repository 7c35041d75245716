//! Finitely presented modules over a truncated local F-algebra, and the
//! minimal-generator bookkeeping behind Nakayama-style inclusions M'' ⊂ mM.

use super::chain::{Echelon, Row};
use super::ideal::{Ambient, IdealNF};
use super::series::{Mono, Ps, SeriesRing};
use crate::error::{Error, Result};
use serde::Serialize;
use std::sync::Arc;

/// M = R^k / (relations), R = F[[x]]/I truncated at the ring's degree cap.
#[derive(Clone, Debug)]
pub struct LocalModulePresentation {
    pub amb: Arc<Ambient>,
    pub ring_ideal: IdealNF,
    pub k: usize,
    pub relations: Vec<Vec<Ps>>,
}

/// A submodule of R^k given by generating vectors.
pub type Gens = Vec<Vec<Ps>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum NakayamaVerdict {
    Pass,
    Fail,
    HypothesisNotMet,
}

#[derive(Clone, Debug, Serialize)]
pub struct NakayamaReport {
    pub mingen_m: usize,
    pub mingen_m1: usize,
    pub mingen_m1_mod_m2: usize,
    pub mingen_m_mod_m2: usize,
    pub m2_in_mm: bool,
    pub verdict: NakayamaVerdict,
}

impl LocalModulePresentation {
    /// `ring` is reduced to its residue field; `ring_rels` generate I.
    pub fn new(ring: &SeriesRing, ring_rels: &[Ps], k: usize, relations: Vec<Vec<Ps>>) -> Result<Self> {
        let modp = ring.with_precision(1, ring.cap);
        let amb = Ambient::new(&modp);
        let rels: Vec<Ps> = ring_rels.iter().map(|g| ring.convert(g, &modp)).collect();
        let ring_ideal = IdealNF::new(&amb, &rels)?;
        if relations.iter().any(|r| r.len() != k) {
            return Err(Error::Param("relation vector of wrong length".into()));
        }
        let relations = relations.iter().map(|v| v.iter().map(|x| ring.convert(x, &modp)).collect()).collect();
        Ok(LocalModulePresentation { amb, ring_ideal, k, relations })
    }

    fn vec_row(&self, v: &[Ps]) -> Row {
        let nc = self.amb.ncols();
        let mut r = Row::new();
        for (i, x) in v.iter().enumerate() {
            r.extend(self.amb.to_row(x, i * nc));
        }
        r
    }

    /// F-rows spanning R * v for each v (monomial multiples), optionally times m.
    fn span_rows(&self, gens: &[Vec<Ps>], times_m: bool) -> Vec<Row> {
        let ring = &self.amb.ring;
        let mut out = vec![];
        for v in gens {
            for m in &self.amb.monos {
                if times_m && m.degree() == 0 {
                    continue;
                }
                let mv: Vec<Ps> = v.iter().map(|x| ring.mono_mul(x, *m)).collect();
                let r = self.vec_row(&mv);
                if !r.is_empty() {
                    out.push(r);
                }
            }
        }
        out
    }

    /// Rows of Z = relations + I R^k.
    fn zero_rows(&self) -> Vec<Row> {
        let nc = self.amb.ncols();
        let mut out = self.span_rows(&self.relations, false);
        for i in 0..self.k {
            for (_, (_, r)) in self.ring_ideal.ech.rows.iter() {
                out.push(r.iter().map(|(c, x)| (c + i * nc, *x)).collect());
            }
        }
        out
    }

    fn dim(&self, parts: &[&[Row]]) -> usize {
        let mut e = Echelon::new(&self.amb.ring.witt);
        for p in parts {
            for r in p.iter() {
                e.insert(r.clone());
            }
        }
        e.rows.len()
    }

    fn unit_gens(&self) -> Gens {
        (0..self.k)
            .map(|i| (0..self.k).map(|j| if i == j { self.amb.ring.int(1) } else { Ps::default() }).collect())
            .collect()
    }

    /// Minimal number of generators of (N + Z)/(N'' + Z), where N = span(gens).
    pub fn mingen(&self, gens: &Gens, modulo: &Gens) -> usize {
        let z = self.zero_rows();
        let n = self.span_rows(gens, false);
        let mn = self.span_rows(gens, true);
        let sub = self.span_rows(modulo, false);
        self.dim(&[&z, &n, &sub]) - self.dim(&[&z, &mn, &sub])
    }

    fn contained(&self, a: &Gens, b: &Gens) -> bool {
        let z = self.zero_rows();
        let rb = self.span_rows(b, false);
        let ra = self.span_rows(a, false);
        self.dim(&[&z, &rb]) == self.dim(&[&z, &rb, &ra])
    }

    /// Check the chain M'' ⊂ M' ⊂ M = R^k/relations.
    pub fn nakayama_check(&self, m1: &Gens, m2: &Gens) -> Result<NakayamaReport> {
        let m = self.unit_gens();
        if !self.contained(m2, m1) || !self.contained(m1, &m) {
            return Err(Error::Precondition("submodules do not form a chain".into()));
        }
        let none: Gens = vec![];
        let mingen_m = self.mingen(&m, &none);
        let mingen_m1 = self.mingen(m1, &none);
        let mingen_m1_mod_m2 = self.mingen(m1, m2);
        let mingen_m_mod_m2 = self.mingen(&m, m2);
        let z = self.zero_rows();
        let mm = self.span_rows(&m, true);
        let r2 = self.span_rows(m2, false);
        let m2_in_mm = self.dim(&[&z, &mm]) == self.dim(&[&z, &mm, &r2]);
        let verdict = if mingen_m1_mod_m2 != mingen_m1 {
            NakayamaVerdict::HypothesisNotMet
        } else if m2_in_mm && mingen_m_mod_m2 == mingen_m {
            NakayamaVerdict::Pass
        } else {
            NakayamaVerdict::Fail
        };
        Ok(NakayamaReport { mingen_m, mingen_m1, mingen_m1_mod_m2, mingen_m_mod_m2, m2_in_mm, verdict })
    }

    pub fn mono(&self, exps: &[u32]) -> Ps {
        self.amb.ring.term(Mono::from_exps(exps), self.amb.ring.witt.one())
    }
}
