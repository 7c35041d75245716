//! Rank-2 φ-modules over ∏_{m ∈ Z/f} R((v)), one 2×2 matrix per embedding index.
//!
//! Storage is column-wise: φ(e_m, f_m) = (e_{m+1}, f_{m+1}) · M_m, so the first column of
//! M_m lists the coefficients of φ(e_m). A displayed line "φ(𝔈) = x𝔈 + y𝔉" is a column
//! of M, i.e. a row of M^T. Frobenius is linear on coefficients and sends v to v^p.
//! Matrix index m carries the data of ω-index j = f-1-m.

pub mod normalize;
pub mod residual;
pub mod tangent;
pub mod universal;

use crate::algebra::laurent::{Laurent, Lops, Mat2};
use crate::algebra::series::{Mono, Ps, SeriesRing};
use crate::algebra::witt::{WittRing, Wv};
use crate::algebra::Ring;
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Convention {
    /// φ(e_m, f_m) = (e_{m+1}, f_{m+1}) M_m
    Column,
}

#[derive(Clone, Debug)]
pub struct PhiFamily<E> {
    pub p: u64,
    pub mats: Vec<Mat2<E>>,
    pub convention: Convention,
}

/// ω-index attached to matrix index m.
pub fn omega_index(f: usize, m: usize) -> usize {
    f - 1 - m
}

impl<E: Clone + PartialEq + std::fmt::Debug> PhiFamily<E> {
    pub fn f(&self) -> usize {
        self.mats.len()
    }

    pub fn new(p: u64, mats: Vec<Mat2<E>>) -> Self {
        PhiFamily { p, mats, convention: Convention::Column }
    }

    /// M_m ↦ D_{m+1} M_m φ(D_m)^{-1}, i.e. the basis change e'_m = e_m D_m^{-1}.
    /// Inverses are taken exactly, so each D_m must have a determinant that is a unit
    /// times a power of v up to nilpotents.
    pub fn base_change<R: Ring<E = E>>(&self, r: &R, d: &[Mat2<E>]) -> Result<PhiFamily<E>> {
        let l = Lops(r);
        let f = self.f();
        if d.len() != f {
            return Err(Error::Param("one change-of-basis matrix per index".into()));
        }
        let mut out = vec![];
        for m in 0..f {
            let phi_inv = l.mat_inv_exact(&l.mat_frob(&d[m], self.p as i64))?;
            out.push(l.mat_mul(&l.mat_mul(&d[(m + 1) % f], &self.mats[m]), &phi_inv));
        }
        Ok(PhiFamily { p: self.p, mats: out, convention: self.convention })
    }

    pub fn equals<R: Ring<E = E>>(&self, r: &R, o: &PhiFamily<E>) -> bool {
        let l = Lops(r);
        self.f() == o.f() && self.mats.iter().zip(&o.mats).all(|(a, b)| l.mat_eq(a, b))
    }

    pub fn dets<R: Ring<E = E>>(&self, r: &R) -> Vec<Laurent<E>> {
        let l = Lops(r);
        self.mats.iter().map(|m| l.det(m)).collect()
    }

    /// Apply a coefficient map entrywise.
    pub fn map<F, T: Clone>(&self, mut g: F) -> PhiFamily<T>
    where
        F: FnMut(&E) -> T,
    {
        let mut mp = |a: &Laurent<E>| Laurent { terms: a.terms.iter().map(|(k, c)| (*k, g(c))).collect(), prec: a.prec };
        PhiFamily {
            p: self.p,
            mats: self
                .mats
                .iter()
                .map(|m| [[mp(&m[0][0]), mp(&m[0][1])], [mp(&m[1][0]), mp(&m[1][1])]])
                .collect(),
            convention: self.convention,
        }
    }
}

/// JSON for a family: per index, per entry (row, col), sparse list of [exponent, coefficient].
pub fn family_json<E>(fam: &PhiFamily<E>, coeff: impl Fn(&E) -> serde_json::Value) -> serde_json::Value {
    let mats: Vec<serde_json::Value> = fam
        .mats
        .iter()
        .enumerate()
        .map(|(m, mat)| {
            let mut entries = vec![];
            for i in 0..2 {
                for j in 0..2 {
                    let terms: Vec<serde_json::Value> =
                        mat[i][j].terms.iter().map(|(k, c)| serde_json::json!([k, coeff(c)])).collect();
                    entries.push(serde_json::json!({"row": i, "col": j, "terms": terms}));
                }
            }
            serde_json::json!({"index": m, "entries": entries})
        })
        .collect();
    serde_json::json!({"p": fam.p, "f": fam.mats.len(), "convention": "column", "matrices": mats})
}

/// Residual family and first-order part along a direction: substitute x_i ↦ t_i ε into
/// F[ε]/(ε²) and split by powers of ε.
pub fn linearize(ring: &SeriesRing, fam: &PhiFamily<Ps>, t: &[Wv]) -> Result<(PhiFamily<Wv>, PhiFamily<Wv>)> {
    let field = ring.witt.residue_field();
    let eps = SeriesRing::new(field.clone(), &["eps"], 1)?;
    let images: Vec<Ps> = (0..ring.nvars())
        .map(|i| match t.get(i) {
            Some(c) => eps.scale_ps(&eps.var(0), c),
            None => eps.zero(),
        })
        .collect();
    let sub = fam.map(|c| ring.substitute(c, &eps, &images));
    let part = |k: Mono| drop_zeros(&field, sub.map(|c| c.terms.get(&k).copied().unwrap_or(Wv::ZERO)));
    Ok((part(Mono::ONE), part(Mono::var(0))))
}

pub(crate) fn drop_zeros(field: &WittRing, mut fam: PhiFamily<Wv>) -> PhiFamily<Wv> {
    for mat in fam.mats.iter_mut() {
        for row in mat.iter_mut() {
            for e in row.iter_mut() {
                e.terms.retain(|_, c| !field.is_zero(c));
            }
        }
    }
    fam
}
