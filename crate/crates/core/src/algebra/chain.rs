//! Howell echelon forms for submodules of (W/p^N)^n, W the Witt vectors of F_q.
//!
//! Rows are sparse. The pivot of a row is its first nonzero column and pivot entries are
//! normalised to powers of p. Inserting a row also inserts its annihilated shift
//! p^{N-v} row, which gives the Howell property: the rows with pivot >= k span
//! every vector of the module that vanishes before column k.

use super::witt::{WittRing, Wv};
use crate::algebra::Cancel;
use crate::error::Result;
use std::collections::BTreeMap;

pub type Row = BTreeMap<usize, Wv>;

#[derive(Clone, Debug)]
pub struct Echelon {
    pub witt: WittRing,
    /// pivot column -> (pivot valuation, row)
    pub rows: BTreeMap<usize, (u32, Row)>,
}

pub fn row_clean(w: &WittRing, r: &mut Row) {
    r.retain(|_, c| !w.is_zero(c));
}

/// a - c * b
pub fn row_axpy(w: &WittRing, a: &Row, c: &Wv, b: &Row) -> Row {
    let mut out = a.clone();
    for (k, x) in b {
        let t = w.mul(c, x);
        let e = out.entry(*k).or_insert(Wv::ZERO);
        *e = w.sub(e, &t);
    }
    row_clean(w, &mut out);
    out
}

pub fn row_scale(w: &WittRing, a: &Row, c: &Wv) -> Row {
    let mut out: Row = a.iter().map(|(k, x)| (*k, w.mul(x, c))).collect();
    row_clean(w, &mut out);
    out
}

impl Echelon {
    pub fn new(witt: &WittRing) -> Self {
        Echelon { witt: witt.clone(), rows: BTreeMap::new() }
    }

    /// Length over W of the quotient of the ambient module restricted to `cols`.
    pub fn colength(&self, cols: impl Iterator<Item = usize>) -> u64 {
        cols.map(|c| match self.rows.get(&c) {
            Some((v, _)) => *v as u64,
            None => self.witt.n as u64,
        })
        .sum()
    }

    pub fn insert(&mut self, row: Row) {
        let w = self.witt.clone();
        let mut stack = vec![row];
        while let Some(mut r) = stack.pop() {
            row_clean(&w, &mut r);
            loop {
                let Some((&c, &lead)) = r.iter().next() else { break };
                let v = w.valuation(&lead);
                match self.rows.get(&c) {
                    Some(&(pv, ref prow)) if v >= pv => {
                        let u = w.div_p_pow(&lead, pv);
                        r = row_axpy(&w, &r, &u, prow);
                    }
                    _ => {
                        // New or stronger pivot; normalise so the lead is p^v.
                        let unit = w.div_p_pow(&lead, v);
                        let ui = w.inv(&unit).expect("unit");
                        let nr = row_scale(&w, &r, &ui);
                        let shifted = row_scale(&w, &nr, &w.p_pow(w.n - v));
                        if !shifted.is_empty() {
                            stack.push(shifted);
                        }
                        if let Some((pv, old)) = self.rows.insert(c, (v, nr.clone())) {
                            // old pivot p^pv with pv > v: reduce it by the new row
                            let red = row_scale(&w, &nr, &w.p_pow(pv - v));
                            let mut o = old;
                            for (k, x) in &red {
                                let e = o.entry(*k).or_insert(Wv::ZERO);
                                *e = w.sub(e, x);
                            }
                            stack.push(o);
                        }
                        break;
                    }
                }
            }
        }
    }

    /// Canonical remainder of `r` modulo the module; zero iff `r` is in the module.
    pub fn reduce(&self, r: &Row) -> Row {
        let w = &self.witt;
        let mut r = r.clone();
        row_clean(w, &mut r);
        let mut done = Row::new();
        while let Some((&c, &lead)) = r.iter().next() {
            if let Some((pv, prow)) = self.rows.get(&c) {
                let m = w.p.pow(*pv);
                let mut rem = Wv::ZERO;
                let mut quo = Wv::ZERO;
                for i in 0..w.f {
                    rem.0[i] = lead.0[i] % m;
                    quo.0[i] = lead.0[i] / m;
                }
                if !w.is_zero(&quo) {
                    r = row_axpy(w, &r, &quo, prow);
                }
                if !w.is_zero(&rem) {
                    done.insert(c, rem);
                }
            } else {
                done.insert(c, lead);
            }
            r.remove(&c);
        }
        done
    }

    /// Reduce every row's tail so the echelon form is unique.
    pub fn canonicalize(&mut self) {
        let keys: Vec<usize> = self.rows.keys().rev().copied().collect();
        for c in keys {
            let (v, row) = self.rows[&c].clone();
            let mut tail = row.clone();
            let lead = tail.remove(&c).unwrap();
            let mut red = self.reduce(&tail);
            red.insert(c, lead);
            self.rows.insert(c, (v, red));
        }
    }

    pub fn contains(&self, r: &Row) -> bool {
        self.reduce(r).is_empty()
    }

    /// Rows whose pivot lies in `[from, ..)`; spans the submodule vanishing before `from`.
    pub fn rows_from(&self, from: usize) -> impl Iterator<Item = &Row> {
        self.rows.range(from..).map(|(_, (_, r))| r)
    }

    pub fn build(witt: &WittRing, rows: impl IntoIterator<Item = Row>, cancel: &Cancel) -> Result<Echelon> {
        let mut e = Echelon::new(witt);
        for (i, r) in rows.into_iter().enumerate() {
            if i % 64 == 0 {
                cancel.check()?;
            }
            e.insert(r);
        }
        Ok(e)
    }
}
