//! The residual φ-module of ρ̄|_{G_{K_∞}} over F((v)).

use super::{omega_index, PhiFamily};
use crate::algebra::laurent::Lops;
use crate::algebra::witt::{WittRing, Wv};
use crate::error::Result;
use crate::weights::ResidualParams;

pub fn build_residual(params: &ResidualParams) -> Result<PhiFamily<Wv>> {
    let field = WittRing::new(params.p, params.f, 1)?;
    let l = Lops(&field);
    let f = params.f;
    let mut mats = vec![];
    for m in 0..f {
        let j = omega_index(f, m);
        let c = params.c(j);
        let (mut x, mut y) = if params.irm.minus[j] {
            ([l.zero(), l.v(c)], [l.v(1), l.zero()])
        } else {
            ([l.v(c), l.mono(params.a[j], c)], [l.zero(), l.v(1)])
        };
        if m == f - 1 {
            x = [l.scale(&x[0], &params.alpha), l.scale(&x[1], &params.alpha)];
            y = [l.scale(&y[0], &params.alpha2), l.scale(&y[1], &params.alpha2)];
        }
        // rows are φ(𝔈), φ(𝔉); columns of M
        mats.push([[x[0].clone(), y[0].clone()], [x[1].clone(), y[1].clone()]]);
    }
    Ok(PhiFamily::new(params.p, mats))
}
