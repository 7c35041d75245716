//! Universal families over the multitype coordinate ring: the shape-by-shape product
//! A^{(m)} s_j^{-1} v^{μ_j - s_j η} (times D at the last index), and the explicit displays
//! it is compared against.

use super::{omega_index, PhiFamily};
use crate::algebra::laurent::{Laurent, Lops, Mat2};
use crate::algebra::series::{Ps, SeriesRing};
use crate::algebra::witt::{WittRing, Wv};
use crate::algebra::Ring;
use crate::error::{Error, Result};
use crate::weights::{ResidualParams, Weyl};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Shape {
    A1,
    A2,
    A3,
}

/// Which of the five local cases applies at ω-index j.
pub fn local_case(params: &ResidualParams, s: &Weyl, j: usize) -> u8 {
    let (plus, minus) = (params.irm.plus[j], params.irm.minus[j]);
    match (s.0[j], plus, minus) {
        (false, _, false) => 1,
        (false, _, true) => 2,
        (true, false, false) => 3,
        (true, true, _) => 4,
        (true, false, true) => 5,
    }
}

pub fn shape_of_case(c: u8) -> Shape {
    match c {
        1 | 5 => Shape::A1,
        2 | 4 => Shape::A2,
        _ => Shape::A3,
    }
}

/// Coefficient ring O[[X_m, Y_m, X_α, X_α']] truncated at (n, cap), with the residual data.
#[derive(Clone, Debug)]
pub struct Universal {
    pub params: ResidualParams,
    pub ring: SeriesRing,
}

impl Universal {
    pub fn new(params: &ResidualParams, n: u32, cap: u32) -> Result<Self> {
        let f = params.f;
        let mut names: Vec<String> = (0..f).map(|m| format!("X_{m}")).collect();
        names.extend((0..f).map(|m| format!("Y_{m}")));
        names.push("X_alpha".into());
        names.push("X_alpha'".into());
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let ring = SeriesRing::new(WittRing::new(params.p, f, n)?, &refs, cap)?;
        Ok(Universal { params: params.clone(), ring })
    }

    pub fn f(&self) -> usize {
        self.params.f
    }

    pub fn x(&self, m: usize) -> Ps {
        self.ring.var(m)
    }

    pub fn y(&self, m: usize) -> Ps {
        self.ring.var(self.f() + m)
    }

    pub fn x_alpha(&self) -> Ps {
        self.ring.var(2 * self.f())
    }

    pub fn x_alpha2(&self) -> Ps {
        self.ring.var(2 * self.f() + 1)
    }

    pub fn teich(&self, a: &Wv) -> Ps {
        self.ring.constant(self.ring.witt.teichmuller(a))
    }

    /// [a_j] when -ω^{(j)} is outside I(ρ̄,μ), else 0.
    fn shift(&self, j: usize) -> Ps {
        if self.params.irm.minus[j] {
            self.ring.zero()
        } else {
            self.teich(&self.params.a[j])
        }
    }

    fn l(&self) -> Lops<'_, SeriesRing> {
        Lops(&self.ring)
    }

    fn c(&self, j: usize) -> i64 {
        self.params.c(j)
    }

    fn k(&self, a: Ps) -> Laurent<Ps> {
        self.l().constant(a)
    }

    fn cv(&self, a: Ps, k: i64) -> Laurent<Ps> {
        self.l().mono(a, k)
    }

    /// v + p
    fn v_plus_p(&self) -> Laurent<Ps> {
        self.l().add(&self.l().v(1), &self.k(self.ring.int(self.params.p as i64)))
    }

    /// D([α] + X_α, [α'] + X_α')
    pub fn twist(&self) -> Mat2<Ps> {
        let r = &self.ring;
        let a = r.add_ps(&self.teich(&self.params.alpha), &self.x_alpha());
        let b = r.add_ps(&self.teich(&self.params.alpha2), &self.x_alpha2());
        self.l().mat_diag(self.k(a), self.k(b))
    }

    pub fn a_matrix(&self, s: &Weyl, m: usize) -> Result<(Shape, Mat2<Ps>)> {
        let (r, l) = (&self.ring, self.l());
        let j = omega_index(self.f(), m);
        let shape = shape_of_case(local_case(&self.params, s, j));
        let xa = r.add_ps(&self.x(m), &self.shift(j));
        let mat = match shape {
            Shape::A1 => [[self.v_plus_p(), l.zero()], [self.cv(xa, 1), l.one()]],
            Shape::A2 => [[self.k(r.neg_ps(&self.y(m))), l.one()], [l.v(1), self.k(self.x(m))]],
            Shape::A3 => {
                let inv = r.inv_ps(&xa)?;
                let e = r.neg_ps(&r.mul_ps(&r.int(self.params.p as i64), &inv));
                [[self.k(e), l.one()], [l.v(1), self.k(xa)]]
            }
        };
        Ok((shape, mat))
    }

    /// s_j^{-1} v^{μ_j - s_j η}
    fn weyl_part(&self, s: &Weyl, j: usize) -> Mat2<Ps> {
        let l = self.l();
        let c = self.c(j);
        if s.0[j] {
            l.mat_mul(&l.mat_swap(), &l.mat_diag(l.v(c), l.one()))
        } else {
            l.mat_diag(l.v(c - 1), l.v(1))
        }
    }

    /// M_m = A^{(m)} s_j^{-1} v^{μ_j - s_j η}, with D on the right at m = f-1.
    pub fn expand(&self, s: &Weyl) -> Result<(PhiFamily<Ps>, Vec<Shape>)> {
        if s.0.len() != self.f() {
            return Err(Error::Param("type and residual data have different f".into()));
        }
        let l = self.l();
        let f = self.f();
        let mut mats = vec![];
        let mut shapes = vec![];
        for m in 0..f {
            let (sh, a) = self.a_matrix(s, m)?;
            let mut mm = l.mat_mul(&a, &self.weyl_part(s, omega_index(f, m)));
            if m == f - 1 {
                mm = l.mat_mul(&mm, &self.twist());
            }
            mats.push(mm);
            shapes.push(sh);
        }
        Ok((PhiFamily::new(self.params.p, mats), shapes))
    }

    /// Rows (φ(𝔈), φ(𝔉)) as displayed, turned into a column-convention matrix, with the
    /// last index twisted by D.
    fn from_rows(&self, rows: Vec<[[Laurent<Ps>; 2]; 2]>) -> PhiFamily<Ps> {
        let l = self.l();
        let f = self.f();
        let mats = rows
            .into_iter()
            .enumerate()
            .map(|(m, r)| {
                let t = l.transpose(&r);
                if m == f - 1 {
                    l.mat_mul(&t, &self.twist())
                } else {
                    t
                }
            })
            .collect();
        PhiFamily::new(self.params.p, mats)
    }

    /// The five-case display, transcribed line by line.
    pub fn display_cases(&self, s: &Weyl) -> PhiFamily<Ps> {
        let (r, l) = (&self.ring, self.l());
        let f = self.f();
        let rows = (0..f)
            .map(|m| {
                let j = omega_index(f, m);
                let c = self.c(j);
                let (x, y) = (self.x(m), self.y(m));
                let xa = r.add_ps(&x, &self.shift(j));
                match local_case(&self.params, s, j) {
                    1 => [
                        [l.mul(&l.v(c - 1), &self.v_plus_p()), self.cv(xa, c)],
                        [l.zero(), l.v(1)],
                    ],
                    2 => [[self.cv(r.neg_ps(&y), c - 1), l.v(c)], [l.v(1), self.cv(x, 1)]],
                    3 => {
                        let inv = r.inv_ps(&xa).expect("a_j is a unit in this case");
                        let e = r.neg_ps(&r.mul_ps(&r.int(self.params.p as i64), &inv));
                        [[l.v(c), self.cv(xa, c)], [self.k(e), l.v(1)]]
                    }
                    4 => [[l.v(c), self.cv(x, c)], [self.k(r.neg_ps(&y)), l.v(1)]],
                    _ => [[l.zero(), l.v(c)], [self.v_plus_p(), self.cv(x, 1)]],
                }
            })
            .collect();
        self.from_rows(rows)
    }

    /// The family over O[[X_m, Y_m, X_α, X_α']]/(Y_m g_m) covering every type at once.
    pub fn display_joint(&self) -> Result<PhiFamily<Ps>> {
        let (r, l) = (&self.ring, self.l());
        let f = self.f();
        let mut rows = vec![];
        for m in 0..f {
            let j = omega_index(f, m);
            let c = self.c(j);
            let (x, y) = (self.x(m), self.y(m));
            let (plus, minus) = (self.params.irm.plus[j], self.params.irm.minus[j]);
            let vp = self.v_plus_p();
            let row = if !plus && !minus {
                let xa = r.add_ps(&x, &self.shift(j));
                let inv = r.inv_ps(&xa)?;
                [
                    [l.mul(&l.v(c - 1), &l.sub(&vp, &self.k(y.clone()))), self.cv(xa, c)],
                    [self.k(r.neg_ps(&r.mul_ps(&y, &inv))), l.v(1)],
                ]
            } else {
                let xy = self.k(r.mul_ps(&x, &y));
                if plus {
                    [[l.mul(&l.v(c - 1), &l.sub(&vp, &xy)), self.cv(x, c)], [self.k(r.neg_ps(&y)), l.v(1)]]
                } else {
                    [[self.cv(r.neg_ps(&y), c - 1), l.v(c)], [l.sub(&vp, &xy), self.cv(x, 1)]]
                }
            };
            rows.push(row);
        }
        Ok(self.from_rows(rows))
    }

    /// Relations f_m of the single-type ring: X_m Y_m - p at A2 indices, Y_m elsewhere.
    pub fn type_relations(&self, s: &Weyl) -> Vec<Ps> {
        let r = &self.ring;
        (0..self.f())
            .map(|m| match shape_of_case(local_case(&self.params, s, omega_index(self.f(), m))) {
                Shape::A2 => r.sub_ps(&r.mul_ps(&self.x(m), &self.y(m)), &r.int(self.params.p as i64)),
                _ => self.y(m),
            })
            .collect()
    }

    /// g_m: Y_m - p at a free index, X_m Y_m - p otherwise.
    pub fn g(&self, m: usize) -> Ps {
        let r = &self.ring;
        let j = omega_index(self.f(), m);
        let p = r.int(self.params.p as i64);
        if self.params.irm.plus[j] || self.params.irm.minus[j] {
            r.sub_ps(&r.mul_ps(&self.x(m), &self.y(m)), &p)
        } else {
            r.sub_ps(&self.y(m), &p)
        }
    }

    /// Reduce every coefficient to F by sending all variables to 0.
    pub fn specialize(&self, fam: &PhiFamily<Ps>) -> PhiFamily<Wv> {
        let field = self.ring.witt.residue_field();
        let mut out = fam.map(|c| self.ring.residue(c));
        for mat in out.mats.iter_mut() {
            for row in mat.iter_mut() {
                for e in row.iter_mut() {
                    e.terms.retain(|_, c| !field.is_zero(c));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct UniversalFamily {
    pub family: PhiFamily<Ps>,
    pub shapes: Vec<Shape>,
    /// entrywise equality with the transcribed five-case display
    pub matches_display: bool,
}

pub fn expand_universal(s: &Weyl, params: &ResidualParams, n: u32, cap: u32) -> Result<(Universal, UniversalFamily)> {
    let u = Universal::new(params, n, cap)?;
    let (family, shapes) = u.expand(s)?;
    let matches_display = family.equals(&u.ring, &u.display_cases(s));
    Ok((u, UniversalFamily { family, shapes, matches_display }))
}
