//! Laurent series in v over a coefficient ring, with an optional upper precision bound:
//! coefficients of v^k for k >= `prec` are unknown. `prec = None` means exact.

use super::Ring;
use crate::error::{Error, Result};
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Debug)]
pub struct Laurent<E> {
    pub terms: BTreeMap<i64, E>,
    pub prec: Option<i64>,
}

impl<E> Default for Laurent<E> {
    fn default() -> Self {
        Laurent { terms: BTreeMap::new(), prec: None }
    }
}

pub type Mat2<E> = [[Laurent<E>; 2]; 2];

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

/// Ring operations on `Laurent<R::E>` for a fixed coefficient ring.
pub struct Lops<'a, R: Ring>(pub &'a R);

impl<'a, R: Ring> Lops<'a, R> {
    pub fn zero(&self) -> Laurent<R::E> {
        Laurent::default()
    }

    pub fn mono(&self, c: R::E, k: i64) -> Laurent<R::E> {
        let mut t = BTreeMap::new();
        if !self.0.is_zero(&c) {
            t.insert(k, c);
        }
        Laurent { terms: t, prec: None }
    }

    pub fn constant(&self, c: R::E) -> Laurent<R::E> {
        self.mono(c, 0)
    }

    pub fn one(&self) -> Laurent<R::E> {
        self.mono(self.0.one(), 0)
    }

    /// v^k
    pub fn v(&self, k: i64) -> Laurent<R::E> {
        self.mono(self.0.one(), k)
    }

    pub fn from_terms(&self, terms: impl IntoIterator<Item = (i64, R::E)>) -> Laurent<R::E> {
        let mut out = self.zero();
        for (k, c) in terms {
            out = self.add(&out, &self.mono(c, k));
        }
        out
    }

    fn clip(&self, mut a: Laurent<R::E>) -> Laurent<R::E> {
        if let Some(p) = a.prec {
            a.terms = a.terms.split_off(&i64::MIN).into_iter().filter(|(k, _)| *k < p).collect();
        }
        a.terms.retain(|_, c| !self.0.is_zero(c));
        a
    }

    pub fn truncate(&self, a: &Laurent<R::E>, prec: i64) -> Laurent<R::E> {
        let mut b = a.clone();
        b.prec = min_prec(b.prec, Some(prec));
        self.clip(b)
    }

    pub fn add(&self, a: &Laurent<R::E>, b: &Laurent<R::E>) -> Laurent<R::E> {
        let mut t = a.terms.clone();
        for (k, c) in &b.terms {
            let s = match t.get(k) {
                Some(x) => self.0.add(x, c),
                None => c.clone(),
            };
            t.insert(*k, s);
        }
        self.clip(Laurent { terms: t, prec: min_prec(a.prec, b.prec) })
    }

    pub fn neg(&self, a: &Laurent<R::E>) -> Laurent<R::E> {
        Laurent { terms: a.terms.iter().map(|(k, c)| (*k, self.0.neg(c))).collect(), prec: a.prec }
    }

    pub fn sub(&self, a: &Laurent<R::E>, b: &Laurent<R::E>) -> Laurent<R::E> {
        self.add(a, &self.neg(b))
    }

    /// Lowest exponent with a nonzero coefficient; `None` for zero.
    pub fn valuation(&self, a: &Laurent<R::E>) -> Option<i64> {
        a.terms.keys().next().copied()
    }

    pub fn is_zero(&self, a: &Laurent<R::E>) -> bool {
        a.terms.is_empty()
    }

    pub fn mul(&self, a: &Laurent<R::E>, b: &Laurent<R::E>) -> Laurent<R::E> {
        // Window rule: exact below min(val(a) + prec(b), val(b) + prec(a)).
        let prec = match (self.valuation(a), self.valuation(b)) {
            (Some(va), Some(vb)) => min_prec(a.prec.map(|p| p + vb), b.prec.map(|p| p + va)),
            (None, Some(vb)) => a.prec.map(|p| p + vb),
            (Some(va), None) => b.prec.map(|p| p + va),
            (None, None) => match (a.prec, b.prec) {
                (Some(x), Some(y)) => Some(x + y),
                _ => None,
            },
        };
        let mut t: BTreeMap<i64, R::E> = BTreeMap::new();
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                let k = ka + kb;
                if let Some(p) = prec {
                    if k >= p {
                        break;
                    }
                }
                let pr = self.0.mul(ca, cb);
                let e = t.entry(k).or_insert_with(|| self.0.zero());
                *e = self.0.add(e, &pr);
            }
        }
        self.clip(Laurent { terms: t, prec })
    }

    pub fn scale(&self, a: &Laurent<R::E>, c: &R::E) -> Laurent<R::E> {
        self.clip(Laurent { terms: a.terms.iter().map(|(k, x)| (*k, self.0.mul(x, c))).collect(), prec: a.prec })
    }

    pub fn shift(&self, a: &Laurent<R::E>, s: i64) -> Laurent<R::E> {
        Laurent { terms: a.terms.iter().map(|(k, x)| (k + s, x.clone())).collect(), prec: a.prec.map(|p| p + s) }
    }

    /// v -> v^p, coefficients fixed.
    pub fn frob(&self, a: &Laurent<R::E>, p: i64) -> Laurent<R::E> {
        Laurent { terms: a.terms.iter().map(|(k, x)| (k * p, x.clone())).collect(), prec: a.prec.map(|q| q * p) }
    }

    pub fn coeff(&self, a: &Laurent<R::E>, k: i64) -> R::E {
        a.terms.get(&k).cloned().unwrap_or_else(|| self.0.zero())
    }

    /// Inverse of a series whose lowest coefficient is a unit; the result is computed
    /// up to (but excluding) v^{prec}.
    pub fn inv(&self, a: &Laurent<R::E>, prec: i64) -> Result<Laurent<R::E>> {
        let v0 = self.valuation(a).ok_or_else(|| Error::NotInvertible("zero series".into()))?;
        let c0 = a.terms[&v0].clone();
        if !self.0.is_unit(&c0) {
            return Err(Error::NotInvertible("leading coefficient is not a unit".into()));
        }
        let c0i = self.0.inv(&c0)?;
        // a = c0 v^{v0} (1 + h), h has positive valuation; b = (1+h)^{-1} by recursion.
        let u = self.scale(&self.shift(a, -v0), &c0i);
        let rel = prec + v0;
        if let Some(ap) = u.prec {
            if ap < rel {
                return Err(Error::WindowTooSmall("input precision below requested inverse precision".into()));
            }
        }
        let mut b: BTreeMap<i64, R::E> = BTreeMap::new();
        b.insert(0, self.0.one());
        for k in 1..rel.max(0) {
            let mut s = self.0.zero();
            for (j, uj) in u.terms.range(1..=k) {
                if let Some(bk) = b.get(&(k - j)) {
                    s = self.0.add(&s, &self.0.mul(uj, bk));
                }
            }
            let s = self.0.neg(&s);
            if !self.0.is_zero(&s) {
                b.insert(k, s);
            }
        }
        let binv = self.clip(Laurent { terms: b, prec: Some(rel) });
        Ok(self.scale(&self.shift(&binv, -v0), &c0i))
    }

    /// Inverse when the non-leading part is nilpotent (exact, finite).
    pub fn inv_nilpotent(&self, a: &Laurent<R::E>, max_terms: usize) -> Result<Laurent<R::E>> {
        let v0 = self.valuation(a).ok_or_else(|| Error::NotInvertible("zero series".into()))?;
        let c0 = a.terms[&v0].clone();
        let c0i = self.0.inv(&c0)?;
        let u = self.scale(&self.shift(a, -v0), &c0i);
        let h = self.sub(&u, &self.one());
        let mh = self.neg(&h);
        let mut term = self.one();
        let mut sum = self.one();
        for _ in 0..max_terms {
            term = self.mul(&term, &mh);
            if term.terms.is_empty() {
                return Ok(self.scale(&self.shift(&sum, -v0), &c0i));
            }
            sum = self.add(&sum, &term);
        }
        Err(Error::NonConvergence("series inverse did not terminate".into()))
    }

    // ---- 2x2 matrices ----

    pub fn mat(&self, rows: [[Laurent<R::E>; 2]; 2]) -> Mat2<R::E> {
        rows
    }

    pub fn mat_zero(&self) -> Mat2<R::E> {
        [[self.zero(), self.zero()], [self.zero(), self.zero()]]
    }

    pub fn mat_id(&self) -> Mat2<R::E> {
        [[self.one(), self.zero()], [self.zero(), self.one()]]
    }

    pub fn mat_diag(&self, a: Laurent<R::E>, d: Laurent<R::E>) -> Mat2<R::E> {
        [[a, self.zero()], [self.zero(), d]]
    }

    pub fn mat_swap(&self) -> Mat2<R::E> {
        [[self.zero(), self.one()], [self.one(), self.zero()]]
    }

    pub fn mat_mul(&self, a: &Mat2<R::E>, b: &Mat2<R::E>) -> Mat2<R::E> {
        let e = |i: usize, j: usize| self.add(&self.mul(&a[i][0], &b[0][j]), &self.mul(&a[i][1], &b[1][j]));
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }

    pub fn mat_add(&self, a: &Mat2<R::E>, b: &Mat2<R::E>) -> Mat2<R::E> {
        let e = |i: usize, j: usize| self.add(&a[i][j], &b[i][j]);
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }

    pub fn mat_sub(&self, a: &Mat2<R::E>, b: &Mat2<R::E>) -> Mat2<R::E> {
        let e = |i: usize, j: usize| self.sub(&a[i][j], &b[i][j]);
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }

    pub fn mat_scale(&self, a: &Mat2<R::E>, c: &R::E) -> Mat2<R::E> {
        let e = |i: usize, j: usize| self.scale(&a[i][j], c);
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }

    pub fn mat_frob(&self, a: &Mat2<R::E>, p: i64) -> Mat2<R::E> {
        let e = |i: usize, j: usize| self.frob(&a[i][j], p);
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }

    pub fn mat_truncate(&self, a: &Mat2<R::E>, prec: i64) -> Mat2<R::E> {
        let e = |i: usize, j: usize| self.truncate(&a[i][j], prec);
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }

    pub fn transpose(&self, a: &Mat2<R::E>) -> Mat2<R::E> {
        [[a[0][0].clone(), a[1][0].clone()], [a[0][1].clone(), a[1][1].clone()]]
    }

    pub fn det(&self, a: &Mat2<R::E>) -> Laurent<R::E> {
        self.sub(&self.mul(&a[0][0], &a[1][1]), &self.mul(&a[0][1], &a[1][0]))
    }

    pub fn adjugate(&self, a: &Mat2<R::E>) -> Mat2<R::E> {
        [[a[1][1].clone(), self.neg(&a[0][1])], [self.neg(&a[1][0]), a[0][0].clone()]]
    }

    /// Inverse via the adjugate; the determinant is inverted to precision `prec`.
    pub fn mat_inv(&self, a: &Mat2<R::E>, prec: i64) -> Result<Mat2<R::E>> {
        let d = self.det(a);
        let di = self.inv(&d, prec)?;
        let adj = self.adjugate(a);
        let e = |i: usize, j: usize| self.mul(&adj[i][j], &di);
        Ok([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    /// Inverse when det is a unit times v^k with nilpotent correction (exact).
    pub fn mat_inv_exact(&self, a: &Mat2<R::E>) -> Result<Mat2<R::E>> {
        let d = self.det(a);
        let di = self.inv_nilpotent(&d, 256)?;
        let adj = self.adjugate(a);
        let e = |i: usize, j: usize| self.mul(&adj[i][j], &di);
        Ok([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn mat_eq(&self, a: &Mat2<R::E>, b: &Mat2<R::E>) -> bool {
        (0..2).all(|i| (0..2).all(|j| self.is_zero(&self.sub(&a[i][j], &b[i][j]))))
    }
}
