//! Truncated multivariate power series over W(F_q)/p^N, exact modulo (p^N, m^{M+1})
//! where m = (p, variables) and p counts with degree one.

use super::witt::{WittRing, Wv};
use super::Ring;
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

pub const MAX_VARS: usize = 8;

/// Exponent vector packed eight bits per variable, variable 0 in the low byte.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono(pub u64);

impl Mono {
    pub const ONE: Mono = Mono(0);

    pub fn var(i: usize) -> Mono {
        Mono(1u64 << (8 * i))
    }

    pub fn from_exps(e: &[u32]) -> Mono {
        let mut m = 0u64;
        for (i, &x) in e.iter().enumerate() {
            assert!(x < 256 && i < MAX_VARS);
            m |= (x as u64) << (8 * i);
        }
        Mono(m)
    }

    pub fn exp(self, i: usize) -> u32 {
        ((self.0 >> (8 * i)) & 0xff) as u32
    }

    pub fn exps(self, n: usize) -> Vec<u32> {
        (0..n).map(|i| self.exp(i)).collect()
    }

    pub fn degree(self) -> u32 {
        (0..MAX_VARS).map(|i| self.exp(i)).sum()
    }

    pub fn mul(self, o: Mono) -> Mono {
        Mono(self.0 + o.0)
    }

    pub fn divides(self, o: Mono) -> bool {
        (0..MAX_VARS).all(|i| self.exp(i) <= o.exp(i))
    }

    pub fn div(self, o: Mono) -> Mono {
        debug_assert!(o.divides(self));
        Mono(self.0 - o.0)
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps(MAX_VARS))
    }
}

/// All monomials in `n` variables of degree at most `cap`, ordered by degree then
/// reverse-lexicographically on the packed exponent.
pub fn monomials_upto(n: usize, cap: u32) -> Vec<Mono> {
    let mut out = vec![];
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
        if i == cur.len() {
            out.push(Mono::from_exps(cur));
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, cap, &mut cur, &mut out);
    out.sort_by_key(|m| (m.degree(), std::cmp::Reverse(m.0)));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesRing {
    pub witt: WittRing,
    pub vars: Vec<String>,
    pub cap: u32,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Ps {
    pub terms: BTreeMap<Mono, Wv>,
}

impl SeriesRing {
    pub fn new(witt: WittRing, vars: &[&str], cap: u32) -> Result<Self> {
        if vars.len() > MAX_VARS {
            return Err(Error::Param(format!("at most {MAX_VARS} variables")));
        }
        if cap > 60 {
            return Err(Error::Param("degree cap too large".into()));
        }
        Ok(SeriesRing { witt, vars: vars.iter().map(|s| s.to_string()).collect(), cap })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Param(format!("unknown variable {name}")))
    }

    /// Same variables and coefficient field at a different precision.
    pub fn with_precision(&self, n: u32, cap: u32) -> SeriesRing {
        SeriesRing { witt: self.witt.with_precision(n), vars: self.vars.clone(), cap }
    }

    /// p-adic cap for a coefficient sitting on a monomial of degree d.
    pub fn coeff_cap(&self, d: u32) -> u32 {
        if d > self.cap {
            0
        } else {
            self.witt.n.min(self.cap + 1 - d)
        }
    }

    fn put(&self, out: &mut BTreeMap<Mono, Wv>, m: Mono, c: Wv) {
        let k = self.coeff_cap(m.degree());
        if k == 0 {
            return;
        }
        let c = self.witt.truncate(&c, k);
        if !self.witt.is_zero(&c) {
            out.insert(m, c);
        } else {
            out.remove(&m);
        }
    }

    pub fn term(&self, m: Mono, c: Wv) -> Ps {
        let mut t = BTreeMap::new();
        self.put(&mut t, m, c);
        Ps { terms: t }
    }

    pub fn constant(&self, c: Wv) -> Ps {
        self.term(Mono::ONE, c)
    }

    pub fn int(&self, k: i64) -> Ps {
        self.constant(self.witt.from_int(k))
    }

    pub fn var(&self, i: usize) -> Ps {
        self.term(Mono::var(i), self.witt.one())
    }

    pub fn named(&self, name: &str) -> Result<Ps> {
        Ok(self.var(self.var_index(name)?))
    }

    pub fn normalize(&self, a: &Ps) -> Ps {
        let mut t = BTreeMap::new();
        for (&m, c) in &a.terms {
            self.put(&mut t, m, *c);
        }
        Ps { terms: t }
    }

    pub fn add_ps(&self, a: &Ps, b: &Ps) -> Ps {
        let mut t = a.terms.clone();
        for (&m, c) in &b.terms {
            let s = match t.get(&m) {
                Some(x) => self.witt.add(x, c),
                None => *c,
            };
            self.put(&mut t, m, s);
        }
        Ps { terms: t }
    }

    pub fn neg_ps(&self, a: &Ps) -> Ps {
        Ps { terms: a.terms.iter().map(|(&m, c)| (m, self.witt.neg(c))).collect() }
    }

    pub fn sub_ps(&self, a: &Ps, b: &Ps) -> Ps {
        self.add_ps(a, &self.neg_ps(b))
    }

    pub fn mul_ps(&self, a: &Ps, b: &Ps) -> Ps {
        let mut acc: BTreeMap<Mono, Wv> = BTreeMap::new();
        for (&ma, ca) in &a.terms {
            let da = ma.degree() + self.witt.valuation(ca);
            for (&mb, cb) in &b.terms {
                let m = ma.mul(mb);
                if m.degree() > self.cap || da + mb.degree() > self.cap + self.witt.n {
                    continue;
                }
                let prod = self.witt.mul(ca, cb);
                let e = acc.entry(m).or_insert(Wv::ZERO);
                *e = self.witt.add(e, &prod);
            }
        }
        let mut t = BTreeMap::new();
        for (m, c) in acc {
            self.put(&mut t, m, c);
        }
        Ps { terms: t }
    }

    pub fn scale_ps(&self, a: &Ps, c: &Wv) -> Ps {
        let mut t = BTreeMap::new();
        for (&m, x) in &a.terms {
            self.put(&mut t, m, self.witt.mul(x, c));
        }
        Ps { terms: t }
    }

    pub fn mono_mul(&self, a: &Ps, m: Mono) -> Ps {
        let mut t = BTreeMap::new();
        for (&k, x) in &a.terms {
            self.put(&mut t, k.mul(m), *x);
        }
        Ps { terms: t }
    }

    pub fn constant_term(&self, a: &Ps) -> Wv {
        a.terms.get(&Mono::ONE).copied().unwrap_or(Wv::ZERO)
    }

    /// Order in the m-adic filtration where p has degree one.
    pub fn order(&self, a: &Ps) -> Option<u32> {
        a.terms.iter().map(|(m, c)| m.degree() + self.witt.valuation(c)).min()
    }

    pub fn is_unit_ps(&self, a: &Ps) -> bool {
        self.witt.is_unit(&self.constant_term(a))
    }

    pub fn inv_ps(&self, a: &Ps) -> Result<Ps> {
        let c0 = self.constant_term(a);
        let c0i = self.witt.inv(&c0)?;
        // a = c0 (1 + n) with n in m; sum the geometric series, which terminates.
        let n = self.sub_ps(&self.scale_ps(a, &c0i), &self.one());
        let mneg = self.neg_ps(&n);
        let mut term = self.one();
        let mut sum = self.one();
        for _ in 0..=(self.cap + self.witt.n) {
            term = self.mul_ps(&term, &mneg);
            if term.terms.is_empty() {
                break;
            }
            sum = self.add_ps(&sum, &term);
        }
        Ok(self.scale_ps(&sum, &c0i))
    }

    pub fn pow_ps(&self, a: &Ps, e: u32) -> Ps {
        let mut r = self.one();
        for _ in 0..e {
            r = self.mul_ps(&r, a);
        }
        r
    }

    /// Substitute ring elements for the variables (a ring homomorphism into `target`).
    pub fn substitute(&self, a: &Ps, target: &SeriesRing, images: &[Ps]) -> Ps {
        let mut out = Ps::default();
        for (&m, c) in &a.terms {
            let mut t = target.constant(target.witt.truncate(c, target.witt.n));
            for (i, img) in images.iter().enumerate() {
                for _ in 0..m.exp(i) {
                    t = target.mul_ps(&t, img);
                }
            }
            out = target.add_ps(&out, &t);
        }
        out
    }

    /// Move an element into a ring with the same variables and other precisions.
    pub fn convert(&self, a: &Ps, target: &SeriesRing) -> Ps {
        let mut t = BTreeMap::new();
        for (&m, c) in &a.terms {
            target.put(&mut t, m, target.witt.truncate(c, target.witt.n));
        }
        Ps { terms: t }
    }

    /// Specialise all variables to zero and reduce modulo p.
    pub fn residue(&self, a: &Ps) -> Wv {
        self.witt.truncate(&self.constant_term(a), 1)
    }

    pub fn fmt_ps(&self, a: &Ps) -> String {
        if a.terms.is_empty() {
            return "0".into();
        }
        let mut parts = vec![];
        for (m, c) in &a.terms {
            let mut s = self.witt.to_signed(c);
            for i in 0..self.nvars() {
                match m.exp(i) {
                    0 => {}
                    1 => s.push_str(&format!("*{}", self.vars[i])),
                    e => s.push_str(&format!("*{}^{}", self.vars[i], e)),
                }
            }
            let s = match (s.strip_prefix("1*"), s.strip_prefix("-1*")) {
                (Some(t), _) => t.to_string(),
                (_, Some(t)) => format!("-{t}"),
                _ => s,
            };
            parts.push(s);
        }
        parts.join(" + ").replace("+ -", "- ")
    }

    /// Canonical JSON: list of [exponents, coefficient string] sorted by exponent vector.
    pub fn to_json(&self, a: &Ps) -> serde_json::Value {
        let mut rows: Vec<(Vec<u32>, String)> = a
            .terms
            .iter()
            .map(|(m, c)| (m.exps(self.nvars()), self.witt.to_canonical(c)))
            .collect();
        rows.sort();
        serde_json::json!(rows)
    }
}

impl Ring for SeriesRing {
    type E = Ps;
    fn zero(&self) -> Ps {
        Ps::default()
    }
    fn one(&self) -> Ps {
        self.int(1)
    }
    fn add(&self, a: &Ps, b: &Ps) -> Ps {
        self.add_ps(a, b)
    }
    fn sub(&self, a: &Ps, b: &Ps) -> Ps {
        self.sub_ps(a, b)
    }
    fn neg(&self, a: &Ps) -> Ps {
        self.neg_ps(a)
    }
    fn mul(&self, a: &Ps, b: &Ps) -> Ps {
        self.mul_ps(a, b)
    }
    fn is_zero(&self, a: &Ps) -> bool {
        a.terms.is_empty()
    }
    fn from_int(&self, k: i64) -> Ps {
        self.int(k)
    }
    fn inv(&self, a: &Ps) -> Result<Ps> {
        self.inv_ps(a)
    }
    fn is_unit(&self, a: &Ps) -> bool {
        self.is_unit_ps(a)
    }
}
