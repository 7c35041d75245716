//! First-order deformations: given t ∈ Hom(𝔪/𝔪², F), decide whether the family over F[ε]
//! is isomorphic to the trivial deformation, i.e. whether
//!   D_{m+1} M_m - M_m φ(D_m) = N_m
//! has a solution D_m ∈ M_2(F((v))).

use super::universal::Universal;
use super::{linearize, PhiFamily};
use crate::algebra::chain::{Echelon, Row};
use crate::algebra::laurent::{Laurent, Lops, Mat2};
use crate::algebra::witt::{WittRing, Wv};
use crate::algebra::Cancel;
use crate::error::{Error, Result};
use crate::weights::ResidualParams;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateTerm {
    pub index: usize,
    pub row: usize,
    pub col: usize,
    pub degree: i64,
    pub coeff: Wv,
}

#[derive(Clone, Debug)]
pub enum TangentVerdict {
    Solvable { witness: Vec<Mat2<Wv>> },
    /// A combination of the coefficient equations whose left side vanishes identically.
    Obstructed { certificate: Vec<CertificateTerm> },
}

#[derive(Clone, Debug)]
pub struct TangentReport {
    pub verdict: TangentVerdict,
    pub window: (i64, i64),
    /// residual matrices M_m and first-order parts N_m
    pub base: PhiFamily<Wv>,
    pub first_order: PhiFamily<Wv>,
    /// some solution of the homogeneous system has a pole
    pub poles_in_kernel: bool,
}

impl TangentReport {
    pub fn is_solvable(&self) -> bool {
        matches!(self.verdict, TangentVerdict::Solvable { .. })
    }
}

pub fn default_window(p: u64) -> (i64, i64) {
    let w = p as i64 + 2;
    (-w, 2 * w)
}

/// The residual family and its first-order variation along t (values indexed by the
/// variables of the universal ring).
pub fn first_order(params: &ResidualParams, t: &BTreeMap<String, Wv>) -> Result<(PhiFamily<Wv>, PhiFamily<Wv>)> {
    let u = Universal::new(params, 1, 2)?;
    for k in t.keys() {
        u.ring.var_index(k)?;
    }
    let dir: Vec<Wv> = u.ring.vars.iter().map(|n| t.get(n).copied().unwrap_or(Wv::ZERO)).collect();
    linearize(&u.ring, &u.display_joint()?, &dir)
}

struct Layout {
    f: usize,
    lo: i64,
    hi: i64,
}

impl Layout {
    fn width(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }
    fn unknowns(&self) -> usize {
        4 * self.f * self.width()
    }
    /// Non-negative degrees come first, so that pole coefficients are the last pivots.
    fn col(&self, m: usize, r: usize, c: usize, e: i64) -> usize {
        let slot = (m * 4 + r * 2 + c) * self.width();
        let pos = self.hi + 1;
        let off = if e >= 0 { e as usize } else { (pos + (-e - 1)) as usize };
        slot + off
    }
    fn decode(&self, col: usize) -> (usize, usize, usize, i64) {
        let w = self.width();
        let slot = col / w;
        let off = (col % w) as i64;
        let e = if off <= self.hi { off } else { -(off - self.hi - 1) - 1 };
        (slot / 4, (slot % 4) / 2, slot % 2, e)
    }
}

pub fn tangent_obstruction(
    params: &ResidualParams,
    t: &BTreeMap<String, Wv>,
    window: Option<(i64, i64)>,
) -> Result<TangentReport> {
    let (lo, hi) = window.unwrap_or_else(|| default_window(params.p));
    let f = params.f;
    let p = params.p as i64;
    let (base, first) = first_order(params, t)?;
    let maxdeg = base
        .mats
        .iter()
        .chain(first.mats.iter())
        .flat_map(|m| m.iter().flatten())
        .filter_map(|e| e.terms.keys().next_back().copied())
        .max()
        .unwrap_or(0);
    if lo > 0 || hi < maxdeg + 1 {
        return Err(Error::WindowTooSmall(format!("window [{lo},{hi}] must contain [0,{}]", maxdeg + 1)));
    }
    let field = WittRing::new(params.p, f, 1)?;
    let lay = Layout { f, lo, hi };
    let nu = lay.unknowns();
    let rhs_col = nu;
    let dmin = p * lo;
    let mut eqs: Vec<(usize, usize, usize, i64)> = vec![];
    let mut rows: Vec<Row> = vec![];
    for m in 0..f {
        let mm = &base.mats[m];
        let n = (m + 1) % f;
        for r in 0..2 {
            for c in 0..2 {
                for d in dmin..=hi {
                    let mut row = Row::new();
                    let mut add = |col: usize, x: Wv| {
                        let e = row.entry(col).or_insert(Wv::ZERO);
                        *e = field.add(e, &x);
                    };
                    // (D_{m+1} M_m)_{rc}
                    for k in 0..2 {
                        for (&deg, x) in &mm[k][c].terms {
                            let e = d - deg;
                            if (lo..=hi).contains(&e) {
                                add(lay.col(n, r, k, e), *x);
                            }
                        }
                    }
                    // -(M_m φ(D_m))_{rc}
                    for k in 0..2 {
                        for (&deg, x) in &mm[r][k].terms {
                            let rem = d - deg;
                            if rem.rem_euclid(p) == 0 && (lo..=hi).contains(&(rem / p)) {
                                add(lay.col(m, k, c, rem / p), field.neg(x));
                            }
                        }
                    }
                    let rhs = first.mats[m][r][c].terms.get(&d).copied().unwrap_or(Wv::ZERO);
                    if !field.is_zero(&rhs) {
                        add(rhs_col, rhs);
                    }
                    row.retain(|_, x| !field.is_zero(x));
                    let idx = eqs.len();
                    row.insert(rhs_col + 1 + idx, field.one());
                    eqs.push((m, r, c, d));
                    rows.push(row);
                }
            }
        }
    }
    let mut ech = Echelon::build(&field, rows, &Cancel::default())?;
    ech.canonicalize();
    let l = Lops(&field);
    if let Some((_, (_, row))) = ech.rows.range(rhs_col..=rhs_col).next() {
        let certificate = row
            .range(rhs_col + 1..)
            .map(|(&col, x)| {
                let (index, r, c, degree) = eqs[col - rhs_col - 1];
                CertificateTerm { index, row: r, col: c, degree, coeff: *x }
            })
            .collect();
        return Ok(TangentReport {
            verdict: TangentVerdict::Obstructed { certificate },
            window: (lo, hi),
            base,
            first_order: first,
            poles_in_kernel: false,
        });
    }
    let pivots: Vec<usize> = ech.rows.range(..rhs_col).map(|(c, _)| *c).collect();
    let mut witness: Vec<Mat2<Wv>> = (0..f).map(|_| l.mat_zero()).collect();
    let mut poles_in_kernel = false;
    for col in 0..nu {
        let (m, r, c, e) = lay.decode(col);
        match ech.rows.get(&col) {
            Some((_, row)) => {
                if let Some(x) = row.get(&rhs_col) {
                    let cur: &mut Laurent<Wv> = &mut witness[m][r][c];
                    cur.terms.insert(e, *x);
                }
                if e < 0 && row.range(col + 1..rhs_col).any(|(k, _)| !pivots.contains(k)) {
                    poles_in_kernel = true;
                }
            }
            None => {
                if e < 0 {
                    poles_in_kernel = true;
                }
            }
        }
    }
    Ok(TangentReport {
        verdict: TangentVerdict::Solvable { witness },
        window: (lo, hi),
        base,
        first_order: first,
        poles_in_kernel,
    })
}

/// D_{m+1} M_m - M_m φ(D_m) for a candidate solution.
pub fn apply_operator(field: &WittRing, base: &PhiFamily<Wv>, d: &[Mat2<Wv>]) -> Vec<Mat2<Wv>> {
    let l = Lops(field);
    let f = base.f();
    (0..f)
        .map(|m| {
            let a = l.mat_mul(&d[(m + 1) % f], &base.mats[m]);
            let b = l.mat_mul(&base.mats[m], &l.mat_frob(&d[m], base.p as i64));
            l.mat_sub(&a, &b)
        })
        .collect()
}
