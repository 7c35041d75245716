//! Normal forms of families over a truncated local ring R: find Iwahori gauge matrices
//! P_m ≡ Id mod 𝔪 and parameters θ with P_{m+1} M_m φ(P_m)^{-1} = A^{(m)}(θ) s^{-1} v^λ (D(θ)).
//!
//! The error is killed order by order in the 𝔪-adic filtration of R. At order k each basis
//! monomial b of 𝔪^k/𝔪^{k+1} gives an F-linear system
//!   Δ_{m+1} M̄_m - M̄_m φ(Δ_m) - J̄_m δθ = -E_b
//! over the residual family M̄; all b share the matrix and are solved together.

use super::universal::{Shape, Universal};
use super::{linearize, omega_index, PhiFamily};
use crate::algebra::chain::{Echelon, Row};
use crate::algebra::laurent::{Laurent, Lops, Mat2};
use crate::algebra::quotient::QuotientRing;
use crate::algebra::series::{Mono, Ps};
use crate::algebra::witt::{WittRing, Wv};
use crate::algebra::{Cancel, Ring};
use crate::error::{Error, Result};
use crate::weights::{ResidualParams, Weyl};
use std::collections::BTreeMap;

/// The normal-form family A^{(m)}(θ) s^{-1} v^λ as a function of its parameters.
#[derive(Clone, Debug)]
pub struct Template {
    pub u: Universal,
    pub s: Weyl,
    pub shapes: Vec<Shape>,
    pub family: PhiFamily<Ps>,
    /// universal variable index of each parameter
    pub params: Vec<usize>,
}

impl Template {
    pub fn new(res: &ResidualParams, s: &Weyl, n: u32, cap: u32) -> Result<Template> {
        let u = Universal::new(res, n, cap)?;
        let (family, shapes) = u.expand(s)?;
        let f = res.f;
        let mut params = vec![];
        for m in 0..f {
            params.push(m);
            if shapes[m] == Shape::A2 {
                params.push(f + m);
            }
        }
        params.push(2 * f);
        params.push(2 * f + 1);
        Ok(Template { u, s: s.clone(), shapes, family, params })
    }

    pub fn names(&self) -> Vec<String> {
        self.params.iter().map(|&i| self.u.ring.vars[i].clone()).collect()
    }

    /// Specialise the parameters to θ in R; the remaining variables go to 0.
    pub fn at(&self, r: &QuotientRing, theta: &[Ps]) -> PhiFamily<Ps> {
        let mut images = vec![Ps::default(); self.u.ring.nvars()];
        for (k, &i) in self.params.iter().enumerate() {
            images[i] = theta[k].clone();
        }
        self.family.map(|c| r.nf(&self.u.ring.substitute(c, r.base(), &images)))
    }

    /// Residual family and the derivative along each parameter, over F.
    pub fn jacobian(&self) -> Result<(PhiFamily<Wv>, Vec<PhiFamily<Wv>>)> {
        let n = self.u.ring.nvars();
        let mut base = None;
        let mut jac = vec![];
        for &i in &self.params {
            let mut t = vec![Wv::ZERO; n];
            t[i] = self.u.ring.witt.one();
            let (b, d) = linearize(&self.u.ring, &self.family, &t)?;
            base = Some(b);
            jac.push(d);
        }
        Ok((base.unwrap(), jac))
    }
}

#[derive(Clone, Debug)]
pub struct NormalizeOptions {
    pub max_iter: usize,
    /// fix the constant diagonal of the gauge at index 0 to the identity, which removes the
    /// scaling freedom
    pub pin_scaling: bool,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions { max_iter: 64, pin_scaling: true }
    }
}

#[derive(Clone, Debug)]
pub struct NormalForm {
    pub shapes: Vec<Shape>,
    pub names: Vec<String>,
    pub values: Vec<Ps>,
    /// P_m with normal form = P_{m+1} M_m φ(P_m)^{-1}
    pub gauge: Vec<Mat2<Ps>>,
    pub family: PhiFamily<Ps>,
    pub iterations: usize,
}

impl NormalForm {
    pub fn value(&self, name: &str) -> Option<&Ps> {
        self.names.iter().position(|n| n == name).map(|i| &self.values[i])
    }
}

fn residue_family(r: &QuotientRing, fam: &PhiFamily<Ps>) -> PhiFamily<Wv> {
    let field = r.base().witt.residue_field();
    super::drop_zeros(&field, fam.map(|c| r.base().residue(c)))
}

fn max_degree<E>(fam: &[Mat2<E>]) -> i64 {
    fam.iter()
        .flat_map(|m| m.iter().flatten())
        .filter_map(|e| e.terms.keys().next_back().copied())
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Unknown {
    Gauge { m: usize, r: usize, c: usize, e: i64 },
    Param(usize),
}

struct System<'a> {
    field: &'a WittRing,
    p: i64,
    base: &'a PhiFamily<Wv>,
    jac: &'a [PhiFamily<Wv>],
    /// entries (m, row, col) dropped from the equations
    skip: Vec<(usize, usize, usize)>,
    pin: bool,
}

impl System<'_> {
    fn unknowns(&self, h: i64) -> Vec<Unknown> {
        let f = self.base.f();
        let mut out = vec![];
        for m in 0..f {
            for r in 0..2 {
                for c in 0..2 {
                    for e in 0..=h {
                        if e == 0 && (r, c) == (1, 0) {
                            continue;
                        }
                        if e == 0 && m == 0 && r == c && self.pin {
                            continue;
                        }
                        out.push(Unknown::Gauge { m, r, c, e });
                    }
                }
            }
        }
        out.extend((0..self.jac.len()).map(Unknown::Param));
        out
    }

    /// Solve for every right-hand side; None if some system is inconsistent.
    fn solve(&self, h: i64, rhs: &[Vec<Mat2<Wv>>]) -> Result<Option<Vec<(Vec<Mat2<Wv>>, Vec<Wv>)>>> {
        let (field, p, f) = (self.field, self.p, self.base.f());
        let unk = self.unknowns(h);
        let index: BTreeMap<Unknown, usize> = unk.iter().enumerate().map(|(i, u)| (*u, i)).collect();
        let nu = unk.len();
        let deg_m = max_degree(&self.base.mats);
        let deg_j = self.jac.iter().map(|j| max_degree(&j.mats)).max().unwrap_or(0);
        let deg_r = rhs.iter().map(|x| max_degree(x)).max().unwrap_or(0);
        let dmax = (p * h + deg_m).max(deg_r).max(deg_j);
        let mut rows = vec![];
        for m in 0..f {
            let mm = &self.base.mats[m];
            let n = (m + 1) % f;
            for r in 0..2 {
                for c in 0..2 {
                    if self.skip.contains(&(m, r, c)) {
                        continue;
                    }
                    for d in 0..=dmax {
                        let mut row = Row::new();
                        let mut add = |col: usize, x: Wv| {
                            let e = row.entry(col).or_insert(Wv::ZERO);
                            *e = field.add(e, &x);
                        };
                        for k in 0..2 {
                            for (&deg, x) in &mm[k][c].terms {
                                if let Some(&i) = index.get(&Unknown::Gauge { m: n, r, c: k, e: d - deg }) {
                                    add(i, *x);
                                }
                            }
                            for (&deg, x) in &mm[r][k].terms {
                                let rem = d - deg;
                                if rem >= 0 && rem % p == 0 {
                                    if let Some(&i) = index.get(&Unknown::Gauge { m, r: k, c, e: rem / p }) {
                                        add(i, field.neg(x));
                                    }
                                }
                            }
                        }
                        for (q, j) in self.jac.iter().enumerate() {
                            if let Some(x) = j.mats[m][r][c].terms.get(&d) {
                                add(index[&Unknown::Param(q)], field.neg(x));
                            }
                        }
                        for (b, e) in rhs.iter().enumerate() {
                            if let Some(x) = e[m][r][c].terms.get(&d) {
                                add(nu + b, field.neg(x));
                            }
                        }
                        row.retain(|_, x| !field.is_zero(x));
                        if !row.is_empty() {
                            rows.push(row);
                        }
                    }
                }
            }
        }
        let mut ech = Echelon::build(field, rows, &Cancel::default())?;
        if ech.rows.range(nu..).next().is_some() {
            return Ok(None);
        }
        ech.canonicalize();
        let l = Lops(field);
        let mut out = vec![];
        for b in 0..rhs.len() {
            let mut gauge: Vec<Mat2<Wv>> = (0..f).map(|_| l.mat_zero()).collect();
            let mut theta = vec![Wv::ZERO; self.jac.len()];
            for (col, (_, row)) in ech.rows.iter() {
                let Some(x) = row.get(&(nu + b)) else { continue };
                match unk[*col] {
                    Unknown::Gauge { m, r, c, e } => {
                        let cur: &mut Laurent<Wv> = &mut gauge[m][r][c];
                        cur.terms.insert(e, *x);
                    }
                    Unknown::Param(q) => theta[q] = *x,
                }
            }
            out.push((gauge, theta));
        }
        Ok(Some(out))
    }
}

pub fn normalize_eigenbasis(
    r: &QuotientRing,
    fam: &PhiFamily<Ps>,
    res: &ResidualParams,
    s: &Weyl,
    opts: &NormalizeOptions,
) -> Result<NormalForm> {
    let base_ring = r.base();
    let witt = &base_ring.witt;
    if witt.p != res.p || witt.f != res.f || fam.f() != res.f {
        return Err(Error::Param("family, ring and residual data disagree on p or f".into()));
    }
    let tpl = Template::new(res, s, witt.n, base_ring.cap)?;
    let (mbar, jac) = tpl.jacobian()?;
    let field = witt.residue_field();
    if !residue_family(r, fam).equals(&field, &mbar) {
        return Err(Error::ShapeMismatch("residual family is not the reduction of the normal form".into()));
    }
    let f = res.f;
    let skip = (0..f)
        .filter(|&m| tpl.shapes[m] == Shape::A3)
        .map(|m| (m, 0, if s.0[omega_index(f, m)] { 1 } else { 0 }))
        .collect();
    let sys = System { field: &field, p: res.p as i64, base: &mbar, jac: &jac, skip, pin: opts.pin_scaling };
    let l = Lops(r);
    let cmax = (0..f).map(|j| res.c(j)).max().unwrap_or(0);
    let mut theta = vec![r.zero(); tpl.params.len()];
    let mut gauge: Vec<Mat2<Ps>> = (0..f).map(|_| l.mat_id()).collect();
    let mut cur = fam.clone();
    for it in 0..opts.max_iter {
        let target = tpl.at(r, &theta);
        let err: Vec<Mat2<Ps>> = (0..f).map(|m| l.mat_sub(&cur.mats[m], &target.mats[m])).collect();
        let comps = lowest_order_part(r, &err);
        if comps.is_empty() {
            for m in 0..f {
                if tpl.shapes[m] == Shape::A2 {
                    let (x, y) = (&theta[tpl.params.iter().position(|&i| i == m).unwrap()], &theta[tpl.params.iter().position(|&i| i == f + m).unwrap()]);
                    if !r.is_zero(&r.sub(&r.mul(x, y), &r.from_int(res.p as i64))) {
                        return Err(Error::Precondition(format!("X_{m} Y_{m} != p at an A2 index")));
                    }
                }
            }
            return Ok(NormalForm {
                shapes: tpl.shapes.clone(),
                names: tpl.names(),
                values: theta,
                gauge,
                family: cur,
                iterations: it,
            });
        }
        let keys: Vec<(u32, Mono)> = comps.keys().copied().collect();
        let rhs: Vec<Vec<Mat2<Wv>>> = comps.into_values().collect();
        let dr = rhs.iter().map(|x| max_degree(x)).max().unwrap_or(0);
        let mut h = (cmax + 2).max(dr);
        let sol = loop {
            if let Some(sol) = sys.solve(h, &rhs)? {
                break sol;
            }
            if h > 4 * (dr + cmax + 2) {
                return Err(Error::NonConvergence(format!("linear step unsolvable at v-window {h}")));
            }
            h *= 2;
        };
        let mut d: Vec<Mat2<Ps>> = (0..f).map(|_| l.mat_id()).collect();
        for ((e, mono), (dg, dt)) in keys.iter().zip(sol) {
            let lift = |x: &Wv| r.nf(&base_ring.term(*mono, witt.mul(&witt.p_pow(*e), x)));
            for m in 0..f {
                let lifted: Mat2<Ps> = std::array::from_fn(|i| {
                    std::array::from_fn(|j| Laurent {
                        terms: dg[m][i][j].terms.iter().map(|(k, x)| (*k, lift(x))).filter(|(_, x)| !x.terms.is_empty()).collect(),
                        prec: None,
                    })
                });
                d[m] = l.mat_add(&d[m], &lifted);
            }
            for (q, x) in dt.iter().enumerate() {
                theta[q] = r.add(&theta[q], &lift(x));
            }
        }
        cur = cur.base_change(r, &d)?;
        gauge = (0..f).map(|m| l.mat_mul(&d[m], &gauge[m])).collect();
    }
    Err(Error::NonConvergence(format!("no normal form after {} steps", opts.max_iter)))
}

/// Lowest 𝔪-adic order part of a matrix list over R, split by basis monomial p^e x^α.
fn lowest_order_part(r: &QuotientRing, err: &[Mat2<Ps>]) -> BTreeMap<(u32, Mono), Vec<Mat2<Wv>>> {
    let base = r.base();
    let witt = &base.witt;
    let mut k = u32::MAX;
    for mat in err {
        for e in mat.iter().flatten() {
            for c in e.terms.values() {
                if let Some(o) = base.order(c) {
                    k = k.min(o);
                }
            }
        }
    }
    let mut out: BTreeMap<(u32, Mono), Vec<Mat2<Wv>>> = BTreeMap::new();
    if k == u32::MAX {
        return out;
    }
    let f = err.len();
    let blank = || -> Vec<Mat2<Wv>> { (0..f).map(|_| Default::default()).collect() };
    for (m, mat) in err.iter().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                for (deg, c) in &mat[i][j].terms {
                    for (mono, x) in &c.terms {
                        let Some((e, digit)) = witt.leading_digit(x) else { continue };
                        if mono.degree() + e != k {
                            continue;
                        }
                        let slot = out.entry((e, *mono)).or_insert_with(blank);
                        slot[m][i][j].terms.insert(*deg, digit);
                    }
                }
            }
        }
    }
    out
}

fn random_small(r: &QuotientRing, rng: &mut impl rand::Rng) -> Ps {
    let b = r.base();
    let n = b.nvars();
    let mut out = r.zero();
    for _ in 0..2 {
        let c = b.witt.from_int(rng.gen_range(1..b.witt.p as i64));
        let t = if rng.gen_bool(0.2) { b.int(b.witt.p as i64) } else { b.var(rng.gen_range(0..n)) };
        out = r.add(&out, &r.nf(&b.scale_ps(&t, &c)));
    }
    out
}

/// Random Iwahori gauge congruent to the identity mod 𝔪, with entries in degrees 0 and 1.
/// With `pin`, the constant diagonal at index 0 is left alone.
pub fn random_gauge(r: &QuotientRing, f: usize, pin: bool, rng: &mut impl rand::Rng) -> Vec<Mat2<Ps>> {
    let l = Lops(r);
    (0..f)
        .map(|m| {
            let mut g = l.mat_id();
            for i in 0..2 {
                for j in 0..2 {
                    for e in 0..2i64 {
                        if e == 0 && (i, j) == (1, 0) || e == 0 && m == 0 && i == j && pin {
                            continue;
                        }
                        let add: Laurent<Ps> = l.mono(random_small(r, rng), e);
                        g[i][j] = l.add(&g[i][j], &add);
                    }
                }
            }
            g
        })
        .collect()
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct RoundTrip {
    pub names: Vec<String>,
    /// pinned normalisation of a random perturbation returns the original parameters
    pub recovered: bool,
    /// X_m Y_m = p at every A2 index of the recovered normal form
    pub xy_relation: bool,
    /// unpinned normalisations of two perturbations undo them up to a constant diagonal
    pub scaling_only: bool,
    pub iterations: usize,
}

impl RoundTrip {
    pub fn pass(&self) -> bool {
        self.recovered && self.xy_relation && self.scaling_only
    }
}

/// Perturb the normal form at the variables of the single-type ring by random gauges and
/// normalise again.
pub fn round_trip(res: &ResidualParams, s: &Weyl, n: u32, cap: u32, seed: u64) -> Result<RoundTrip> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let tpl = Template::new(res, s, n, cap)?;
    let r = QuotientRing::new(&tpl.u.ring, &tpl.u.type_relations(s))?;
    let theta: Vec<Ps> = tpl.params.iter().map(|&i| r.nf(&tpl.u.ring.var(i))).collect();
    let fam0 = tpl.at(&r, &theta);
    let f = res.f;
    let l = Lops(&r);
    let g = random_gauge(&r, f, true, &mut rng);
    let nf = normalize_eigenbasis(&r, &fam0.base_change(&r, &g)?, res, s, &NormalizeOptions::default())?;
    let recovered = nf.values.iter().zip(&theta).all(|(a, b)| r.is_zero(&r.sub(a, b)));
    let xy_relation = (0..f).filter(|&m| nf.shapes[m] == Shape::A2).all(|m| {
        let (x, y) = (nf.value(&format!("X_{m}")), nf.value(&format!("Y_{m}")));
        matches!((x, y), (Some(x), Some(y)) if r.is_zero(&r.sub(&r.mul(x, y), &r.from_int(res.p as i64))))
    });
    let unpinned = NormalizeOptions { pin_scaling: false, ..Default::default() };
    let mut scaling_only = true;
    for _ in 0..2 {
        let g = random_gauge(&r, f, false, &mut rng);
        let nf = normalize_eigenbasis(&r, &fam0.base_change(&r, &g)?, res, s, &unpinned)?;
        for m in 0..f {
            let pg = l.mat_mul(&nf.gauge[m], &g[m]);
            let diag = l.is_zero(&pg[0][1]) && l.is_zero(&pg[1][0]);
            let constant = (0..2).all(|i| pg[i][i].terms.keys().all(|&k| k == 0));
            scaling_only &= diag && constant;
        }
    }
    Ok(RoundTrip { names: nf.names, recovered, xy_relation, scaling_only, iterations: nf.iterations })
}
