//! Characters of GL2(F_q) on p-regular elements, and decomposition of reductions of
//! Deligne-Lusztig representations into Serre weights.
//!
//! A class function on p-regular classes is stored by its restrictions to the split torus
//! F_q^× × F_q^× and to the nonsplit torus F_{q^2}^×, each as a multiset of torus
//! characters (exponents with respect to fixed generators). Every p-regular element is
//! conjugate into one of the two tori, so the pair of multisets determines the function.

pub mod cache;

use crate::error::{Error, Result};
use crate::weights::{is_generic, Character, SerreWeight, Weyl};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassFn {
    pub split: BTreeMap<(u64, u64), i64>,
    pub nonsplit: BTreeMap<u64, i64>,
}

impl ClassFn {
    fn bump_split(&mut self, k: (u64, u64), by: i64) {
        let e = self.split.entry(k).or_insert(0);
        *e += by;
        if *e == 0 {
            self.split.remove(&k);
        }
    }

    fn bump_nonsplit(&mut self, k: u64, by: i64) {
        let e = self.nonsplit.entry(k).or_insert(0);
        *e += by;
        if *e == 0 {
            self.nonsplit.remove(&k);
        }
    }

    /// Value at the identity.
    pub fn degree(&self) -> i64 {
        self.split.values().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.split.values().all(|&v| v >= 0) && self.nonsplit.values().all(|&v| v >= 0)
    }

    pub fn add(&self, o: &ClassFn) -> ClassFn {
        let mut r = self.clone();
        for (k, v) in &o.split {
            r.bump_split(*k, *v);
        }
        for (k, v) in &o.nonsplit {
            r.bump_nonsplit(*k, *v);
        }
        r
    }

    pub fn sub(&self, o: &ClassFn) -> ClassFn {
        let mut r = self.clone();
        for (k, v) in &o.split {
            r.bump_split(*k, -*v);
        }
        for (k, v) in &o.nonsplit {
            r.bump_nonsplit(*k, -*v);
        }
        r
    }

    /// Pointwise `self >= o` as multisets.
    pub fn dominates(&self, o: &ClassFn) -> bool {
        o.split.iter().all(|(k, v)| self.split.get(k).copied().unwrap_or(0) >= *v)
            && o.nonsplit.iter().all(|(k, v)| self.nonsplit.get(k).copied().unwrap_or(0) >= *v)
    }

    pub fn is_zero(&self) -> bool {
        self.split.is_empty() && self.nonsplit.is_empty()
    }
}

/// Conjugacy classes of GL2(F_q), labelled by exponents of fixed generators g of F_q^×
/// and h of F_{q^2}^×.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ClassLabel {
    Central(u64),
    NonSemisimple(u64),
    SplitRegular(u64, u64),
    NonsplitRegular(u64),
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassData {
    pub q: u64,
    pub classes: Vec<(ClassLabel, u64)>,
}

impl ClassData {
    pub fn new(p: u64, f: usize) -> ClassData {
        let q = p.pow(f as u32);
        let mut classes = vec![];
        for a in 0..q - 1 {
            classes.push((ClassLabel::Central(a), 1));
        }
        for a in 0..q - 1 {
            classes.push((ClassLabel::NonSemisimple(a), q * q - 1));
        }
        for a in 0..q - 1 {
            for b in a + 1..q - 1 {
                classes.push((ClassLabel::SplitRegular(a, b), q * (q + 1)));
            }
        }
        // x and x^q are conjugate; x regular iff x ∉ F_q^× iff (q+1) ∤ exponent
        for k in 0..q * q - 1 {
            let kq = (k * q) % (q * q - 1);
            if k % (q + 1) != 0 && k < kq {
                classes.push((ClassLabel::NonsplitRegular(k), q * (q - 1)));
            }
        }
        ClassData { q, classes }
    }

    pub fn group_order(&self) -> u64 {
        let q = self.q;
        (q * q - 1) * (q * q - q)
    }

    /// Whether the class consists of p-regular elements.
    pub fn is_p_regular(l: &ClassLabel) -> bool {
        !matches!(l, ClassLabel::NonSemisimple(_))
    }
}

/// An exact value Σ c_k ζ_n^k in the group ring of μ_n.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct Cyclo {
    pub n: u64,
    pub terms: BTreeMap<u64, i64>,
}

impl Cyclo {
    fn push(&mut self, k: u64, c: i64) {
        let e = self.terms.entry(k % self.n).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&(k % self.n));
        }
    }
}

/// Deligne-Lusztig data: the ordinary character of R_s(λ) on p-regular classes, its
/// degree, and its value on the non-semisimple classes.
#[derive(Clone, Debug, Serialize)]
pub struct Ordinary {
    pub class_fn: ClassFn,
    pub principal: bool,
    /// exponents (A, B) for a principal series, or c mod q^2-1 for a cuspidal one
    pub params: (u64, u64),
    pub q: u64,
}

impl Ordinary {
    pub fn degree(&self) -> i64 {
        self.class_fn.degree()
    }

    /// Exact value on a class, in Z[ζ_{q^2-1}] (split exponents are scaled by q+1).
    pub fn value(&self, l: &ClassLabel) -> Cyclo {
        let q = self.q;
        let n = q * q - 1;
        let mut v = Cyclo { n, terms: BTreeMap::new() };
        let up = q + 1;
        match *l {
            ClassLabel::Central(a) => {
                for ((e1, e2), c) in &self.class_fn.split {
                    v.push((e1 + e2) * a * up, *c);
                }
            }
            ClassLabel::NonSemisimple(a) => {
                if self.principal {
                    v.push((self.params.0 + self.params.1) * a * up, 1);
                } else {
                    v.push(self.params.0 * a * up, -1);
                }
            }
            ClassLabel::SplitRegular(a, b) => {
                for ((e1, e2), c) in &self.class_fn.split {
                    v.push((e1 * a + e2 * b) * up, *c);
                }
            }
            ClassLabel::NonsplitRegular(k) => {
                for (e, c) in &self.class_fn.nonsplit {
                    v.push(e * k, *c);
                }
            }
        }
        v
    }
}

/// Brauer character of F(λ) = ⊗_i (Sym^{m_i} ⊗ det^{y_i})^{Frob^i}.
pub fn brauer_character(w: &SerreWeight) -> ClassFn {
    let p = w.p;
    let f = w.f();
    let q = w.q();
    let mut out = ClassFn::default();
    let mut j = vec![0u32; f];
    loop {
        let (mut e1, mut e2, mut ns) = (w.d, w.d, w.d * (1 + q));
        let mut pw = 1u64;
        for i in 0..f {
            e1 += pw * (w.m[i] - j[i]) as u64;
            e2 += pw * j[i] as u64;
            ns += pw * ((w.m[i] - j[i]) as u64 + q * j[i] as u64);
            pw *= p;
        }
        out.bump_split((e1 % (q - 1), e2 % (q - 1)), 1);
        out.bump_nonsplit(ns % (q * q - 1), 1);
        let mut i = 0;
        loop {
            if i == f {
                return out;
            }
            if j[i] < w.m[i] {
                j[i] += 1;
                break;
            }
            j[i] = 0;
            i += 1;
        }
    }
}

/// Character of R_s(λ) restricted to p-regular classes.
pub fn dl_character(p: u64, s: &Weyl, lam: &Character) -> Result<Ordinary> {
    let f = lam.f();
    let q = p.pow(f as u32);
    let (q1, q2) = ((q - 1) as i64, (q * q - 1) as i64);
    let (mut a, mut b) = (0i64, 0i64);
    let mut sig = false;
    let mut pw = 1i64;
    for i in 0..f {
        if i >= 1 {
            sig ^= s.0[i];
        }
        let (x, y) = lam.0[i];
        let (x, y) = if sig { (y, x) } else { (x, y) };
        a += pw * x;
        b += pw * y;
        pw *= p as i64;
    }
    let principal = !(sig ^ s.0[0]);
    let mut cf = ClassFn::default();
    let m1 = |x: i64| x.rem_euclid(q1) as u64;
    let m2 = |x: i64| x.rem_euclid(q2) as u64;
    if principal {
        if m1(a) == m1(b) {
            return Err(Error::NonGeneric("principal series with equal characters".into()));
        }
        cf.bump_split((m1(a), m1(b)), 1);
        cf.bump_split((m1(b), m1(a)), 1);
        for k in 0..q1 {
            cf.bump_split((m1(a + b + k), m1(-k)), 1);
        }
        for k in 0..=q1 + 1 {
            cf.bump_nonsplit(m2(a + b + k * q1), 1);
        }
        Ok(Ordinary { class_fn: cf, principal, params: (m1(a), m1(b)), q })
    } else {
        let c = a + (q as i64) * b;
        if m2(c) == m2(c * q as i64) {
            return Err(Error::NonGeneric("cuspidal character fixed by Frobenius".into()));
        }
        for k in 0..q1 {
            cf.bump_split((m1(c + k), m1(-k)), 1);
        }
        for k in 0..=q1 + 1 {
            cf.bump_nonsplit(m2(c + k * q1), 1);
        }
        cf.bump_nonsplit(m2(c), -1);
        cf.bump_nonsplit(m2(c * q as i64), -1);
        Ok(Ordinary { class_fn: cf, principal, params: (m2(c), 0), q })
    }
}

/// The ordinary character of the tame type R_s(μ - sη).
pub fn ordinary_character(p: u64, s: &Weyl, mu: &Character) -> Result<Ordinary> {
    if !is_generic(mu, p) {
        return Err(Error::NonGeneric(format!("{mu} at p={p}")));
    }
    dl_character(p, s, &mu.sub(&s.s_eta()))
}

fn digits(mut n: u64, p: u64, f: usize) -> Vec<u32> {
    (0..f)
        .map(|_| {
            let d = (n % p) as u32;
            n /= p;
            d
        })
        .collect()
}

/// Serre weights whose Brauer character could occur in `cf`: the highest split exponent
/// pair (d + Σ p^i m_i, d) of every weight is one of the split exponents of `cf`.
fn candidates(p: u64, f: usize, cf: &ClassFn) -> Vec<(SerreWeight, ClassFn)> {
    let q = p.pow(f as u32);
    let mut seen = std::collections::BTreeSet::new();
    for &(e1, e2) in cf.split.keys() {
        let diff = (e1 + (q - 1) - e2) % (q - 1);
        seen.insert(SerreWeight::new(p, digits(diff, p, f), e2 as i64));
        if diff == 0 {
            seen.insert(SerreWeight::new(p, vec![p as u32 - 1; f], e2 as i64));
        }
    }
    seen.into_iter()
        .map(|w| {
            let b = brauer_character(&w);
            (w, b)
        })
        .filter(|(_, b)| cf.dominates(b))
        .collect()
}

/// Express an effective class function as a sum of Brauer characters of Serre weights.
/// Errors with `Singular` if the decomposition is not unique or does not exist.
pub fn decompose_class_fn(p: u64, f: usize, cf: &ClassFn) -> Result<Vec<SerreWeight>> {
    let cands = candidates(p, f, cf);
    // Dense coordinates: split keys of `cf` first, then its nonsplit keys. Candidates are
    // dominated by `cf`, so their supports lie inside.
    let split_ix: HashMap<(u64, u64), usize> = cf.split.keys().enumerate().map(|(i, k)| (*k, i)).collect();
    let ns0 = split_ix.len();
    let ns_ix: HashMap<u64, usize> = cf.nonsplit.keys().enumerate().map(|(i, k)| (*k, ns0 + i)).collect();
    let vecs: Vec<Vec<(usize, i32)>> = cands
        .iter()
        .map(|(_, b)| {
            b.split
                .iter()
                .map(|(k, v)| (split_ix[k], *v as i32))
                .chain(b.nonsplit.iter().map(|(k, v)| (ns_ix[k], *v as i32)))
                .collect()
        })
        .collect();
    let mut cover: Vec<Vec<usize>> = vec![vec![]; ns0];
    for (g, v) in vecs.iter().enumerate() {
        for &(i, _) in v {
            if i < ns0 {
                cover[i].push(g);
            }
        }
    }
    let rest: Vec<i32> = cf.split.values().chain(cf.nonsplit.values()).map(|&v| v as i32).collect();
    let mut st = Search { vecs: &vecs, cover: &cover, ns0, chosen: vec![], sols: vec![], seen: HashSet::new(), limit: 2 };
    st.run(rest);
    match st.sols.len() {
        1 => {
            let mut out: Vec<SerreWeight> = st.sols[0].iter().map(|&g| cands[g].0.clone()).collect();
            out.sort();
            Ok(out)
        }
        0 => Err(Error::Singular("no decomposition into Brauer characters".into())),
        _ => Err(Error::Singular("decomposition is not unique".into())),
    }
}

struct Search<'a> {
    vecs: &'a [Vec<(usize, i32)>],
    cover: &'a [Vec<usize>],
    ns0: usize,
    chosen: Vec<usize>,
    sols: Vec<Vec<usize>>,
    seen: HashSet<Vec<i32>>,
    limit: usize,
}

impl Search<'_> {
    fn fits(&self, rest: &[i32], g: usize) -> bool {
        self.vecs[g].iter().all(|&(i, v)| rest[i] >= v)
    }

    fn run(&mut self, rest: Vec<i32>) {
        // Brauer characters of Serre weights are independent, so a remainder determines the
        // multiset chosen so far.
        if self.sols.len() >= self.limit || !self.seen.insert(rest.clone()) {
            return;
        }
        if rest[..self.ns0].iter().all(|&v| v == 0) {
            if rest.iter().all(|&v| v == 0) {
                let mut c = self.chosen.clone();
                c.sort();
                if !self.sols.contains(&c) {
                    self.sols.push(c);
                }
            }
            return;
        }
        let alive: Vec<bool> = (0..self.vecs.len()).map(|g| self.fits(&rest, g)).collect();
        // Branch on the split exponent with the fewest fitting candidates.
        let mut best: Option<Vec<usize>> = None;
        for k in (0..self.ns0).filter(|&k| rest[k] > 0) {
            let opts: Vec<usize> = self.cover[k].iter().copied().filter(|&g| alive[g]).collect();
            if best.as_ref().map_or(true, |b| opts.len() < b.len()) {
                let stop = opts.len() <= 1;
                best = Some(opts);
                if stop {
                    break;
                }
            }
        }
        for g in best.unwrap_or_default() {
            let mut next = rest.clone();
            for &(i, v) in &self.vecs[g] {
                next[i] -= v;
            }
            self.chosen.push(g);
            self.run(next);
            self.chosen.pop();
        }
    }
}

/// Jordan-Hölder factors (with multiplicity) of the reduction of R_s(μ - sη).
pub fn decompose(p: u64, s: &Weyl, mu: &Character) -> Result<Vec<SerreWeight>> {
    let o = ordinary_character(p, s, mu)?;
    decompose_class_fn(p, mu.f(), &o.class_fn)
}
