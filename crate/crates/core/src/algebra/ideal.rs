//! Ideals of A = W[[x_1..x_n]]/(p^N, m^{M+1}) as W-submodules of the finite free module
//! spanned by monomials of degree <= M, in Howell echelon form.

use super::chain::{Echelon, Row};
use super::series::{monomials_upto, Mono, Ps, SeriesRing};
use super::Cancel;
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::Arc;

/// Column bookkeeping for a series ring: monomials in local order (low degree first).
#[derive(Debug)]
pub struct Ambient {
    pub ring: SeriesRing,
    pub monos: Vec<Mono>,
    pub index: HashMap<Mono, usize>,
}

impl Ambient {
    pub fn new(ring: &SeriesRing) -> Arc<Ambient> {
        let monos = monomials_upto(ring.nvars(), ring.cap);
        let index = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        Arc::new(Ambient { ring: ring.clone(), monos, index })
    }

    pub fn ncols(&self) -> usize {
        self.monos.len()
    }

    pub fn to_row(&self, a: &Ps, offset: usize) -> Row {
        a.terms.iter().filter_map(|(m, c)| self.index.get(m).map(|&i| (i + offset, *c))).collect()
    }

    pub fn from_row(&self, r: &Row, offset: usize) -> Ps {
        let mut out = Ps::default();
        for (&k, c) in r.range(offset..offset + self.ncols()) {
            out.terms.insert(self.monos[k - offset], *c);
        }
        self.ring.normalize(&out)
    }

    /// Rows p^{e_c} e_c for columns whose p-adic cap is below N.
    pub fn cap_rows(&self, offset: usize) -> Vec<Row> {
        let w = &self.ring.witt;
        self.monos
            .iter()
            .enumerate()
            .filter_map(|(i, m)| {
                let e = self.ring.coeff_cap(m.degree());
                (e < w.n).then(|| Row::from([(i + offset, w.p_pow(e))]))
            })
            .collect()
    }

    /// W-module generators of the ideal generated by `g`: all monomial multiples.
    pub fn multiples(&self, g: &Ps, offset: usize) -> Vec<Row> {
        let Some(lo) = g.terms.keys().map(|m| m.degree()).min() else { return vec![] };
        self.monos
            .iter()
            .take_while(|m| m.degree() + lo <= self.ring.cap)
            .map(|m| self.to_row(&self.ring.mono_mul(g, *m), offset))
            .filter(|r| !r.is_empty())
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct IdealNF {
    pub amb: Arc<Ambient>,
    pub gens: Vec<Ps>,
    pub ech: Arc<Echelon>,
}

impl IdealNF {
    pub fn new(amb: &Arc<Ambient>, gens: &[Ps]) -> Result<IdealNF> {
        Self::new_with(amb, gens, &Cancel::default())
    }

    pub fn new_with(amb: &Arc<Ambient>, gens: &[Ps], cancel: &Cancel) -> Result<IdealNF> {
        let gens: Vec<Ps> = gens.iter().map(|g| amb.ring.normalize(g)).filter(|g| !g.terms.is_empty()).collect();
        let mut rows = amb.cap_rows(0);
        for g in &gens {
            rows.extend(amb.multiples(g, 0));
        }
        let mut ech = Echelon::build(&amb.ring.witt, rows, cancel)?;
        ech.canonicalize();
        Ok(IdealNF { amb: amb.clone(), gens, ech: Arc::new(ech) })
    }

    pub fn zero(amb: &Arc<Ambient>) -> IdealNF {
        Self::new(amb, &[]).expect("zero ideal")
    }

    fn same_ambient(&self, o: &IdealNF) -> Result<()> {
        if Arc::ptr_eq(&self.amb, &o.amb) || self.amb.ring == o.amb.ring {
            Ok(())
        } else {
            Err(Error::AmbientMismatch(format!("{:?} vs {:?}", self.amb.ring.vars, o.amb.ring.vars)))
        }
    }

    /// Canonical representative of `a` modulo the ideal.
    pub fn normal_form(&self, a: &Ps) -> Ps {
        self.amb.from_row(&self.ech.reduce(&self.amb.to_row(&self.amb.ring.normalize(a), 0)), 0)
    }

    pub fn contains(&self, a: &Ps) -> bool {
        self.normal_form(a).terms.is_empty()
    }

    pub fn contains_ideal(&self, o: &IdealNF) -> bool {
        o.gens.iter().all(|g| self.contains(g))
    }

    pub fn equals(&self, o: &IdealNF) -> bool {
        self.same_ambient(o).is_ok() && self.contains_ideal(o) && o.contains_ideal(self)
    }

    pub fn sum(&self, o: &IdealNF) -> Result<IdealNF> {
        self.same_ambient(o)?;
        let mut g = self.gens.clone();
        g.extend(o.gens.iter().cloned());
        IdealNF::new(&self.amb, &g)
    }

    pub fn product(&self, o: &IdealNF) -> Result<IdealNF> {
        self.same_ambient(o)?;
        let r = &self.amb.ring;
        let g: Vec<Ps> = self.gens.iter().flat_map(|a| o.gens.iter().map(move |b| r.mul_ps(a, b))).collect();
        IdealNF::new(&self.amb, &g)
    }

    /// Intersection, computed at precision raised by `slack` in both p and degree and
    /// projected back; the truncated ring alone has spurious common elements.
    pub fn intersection(&self, o: &IdealNF) -> Result<IdealNF> {
        self.intersection_with(o, 2, &Cancel::default())
    }

    pub fn intersection_with(&self, o: &IdealNF, slack: u32, cancel: &Cancel) -> Result<IdealNF> {
        self.same_ambient(o)?;
        let ring = &self.amb.ring;
        let hi = ring.with_precision(ring.witt.n + slack, ring.cap + slack);
        let big = Ambient::new(&hi);
        let nc = big.ncols();
        let mut rows = big.cap_rows(0);
        rows.extend(big.cap_rows(nc));
        for g in &self.gens {
            let g = ring.convert(g, &hi);
            for r in big.multiples(&g, 0) {
                let mut both = r.clone();
                both.extend(r.iter().map(|(k, c)| (k + nc, *c)));
                rows.push(both);
            }
        }
        for h in &o.gens {
            rows.extend(big.multiples(&ring.convert(h, &hi), 0));
        }
        let ech = Echelon::build(&hi.witt, rows, cancel)?;
        let rows: Vec<Row> = ech
            .rows_from(nc)
            .map(|r| self.amb.to_row(&hi.convert(&big.from_row(r, nc), ring), 0))
            .filter(|r| !r.is_empty())
            .collect();
        self.from_module_rows(rows, cancel)
    }

    /// Ideal whose underlying W-module is spanned by `rows` (already closed under
    /// multiplication); generators are extracted minimally.
    fn from_module_rows(&self, rows: Vec<Row>, cancel: &Cancel) -> Result<IdealNF> {
        let amb = &self.amb;
        let mut all = amb.cap_rows(0);
        all.extend(rows);
        let mut ech = Echelon::build(&amb.ring.witt, all, cancel)?;
        ech.canonicalize();
        let mut out = IdealNF { amb: amb.clone(), gens: vec![], ech: Arc::new(ech) };
        out.gens = out.minimal_generators();
        Ok(out)
    }

    /// The maximal ideal times this ideal, as a W-module echelon.
    fn m_times(&self) -> Echelon {
        let amb = &self.amb;
        let w = &amb.ring.witt;
        let mut rows = amb.cap_rows(0);
        for (_, (_, r)) in self.ech.rows.iter() {
            let g = amb.from_row(r, 0);
            rows.push(super::chain::row_scale(w, r, &w.p_pow(1)));
            for i in 0..amb.ring.nvars() {
                rows.push(amb.to_row(&amb.ring.mono_mul(&g, Mono::var(i)), 0));
            }
        }
        let mut e = Echelon::new(w);
        for r in rows {
            e.insert(r);
        }
        e
    }

    /// A minimal generating set: echelon rows chosen greedily modulo m*I.
    pub fn minimal_generators(&self) -> Vec<Ps> {
        let amb = &self.amb;
        let mut span = self.m_times();
        let mut out = vec![];
        for (_, (_, r)) in self.ech.rows.iter() {
            if !span.contains(r) {
                let g = amb.from_row(r, 0);
                for m in amb.multiples(&g, 0) {
                    span.insert(m);
                }
                out.push(g);
            }
        }
        out
    }

    /// (I : p) = { a : p a in I }.
    pub fn colon_p(&self) -> Result<IdealNF> {
        let amb = &self.amb;
        let w = &amb.ring.witt;
        let nc = amb.ncols();
        let mut rows = amb.cap_rows(0);
        rows.extend(amb.cap_rows(nc));
        for (_, (_, r)) in self.ech.rows.iter() {
            rows.push(r.clone());
        }
        for i in 0..nc {
            let pe = amb.to_row(&amb.ring.term(amb.monos[i], w.p_pow(1)), 0);
            let mut both = pe;
            both.insert(i + nc, w.one());
            rows.push(both);
        }
        let ech = Echelon::build(w, rows, &Cancel::default())?;
        let rows: Vec<Row> = ech
            .rows_from(nc)
            .map(|r| r.iter().map(|(k, c)| (k - nc, *c)).collect())
            .collect();
        self.from_module_rows(rows, &Cancel::default())
    }

    /// Length over W of A/I (for W = W(F_q), counted in F_q-dimensions).
    pub fn colength(&self) -> u64 {
        self.ech.colength(0..self.amb.ncols())
    }

    /// Canonical JSON: generators and the reduced echelon rows.
    pub fn to_json(&self) -> serde_json::Value {
        let r = &self.amb.ring;
        let basis: Vec<serde_json::Value> = self
            .ech
            .rows
            .values()
            .map(|(_, row)| r.to_json(&self.amb.from_row(row, 0)))
            .collect();
        serde_json::json!({
            "vars": r.vars,
            "p": r.witt.p.to_string(),
            "f": r.witt.f,
            "N": r.witt.n,
            "M": r.cap,
            "generators": self.gens.iter().map(|g| r.to_json(g)).collect::<Vec<_>>(),
            "normal_form": basis,
        })
    }

    pub fn fmt_gens(&self) -> String {
        let r = &self.amb.ring;
        format!("({})", self.gens.iter().map(|g| r.fmt_ps(g)).collect::<Vec<_>>().join(", "))
    }
}
