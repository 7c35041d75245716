//! Quotient rings A/I with elements kept in normal form.

use super::ideal::{Ambient, IdealNF};
use super::series::{Ps, SeriesRing};
use super::Ring;
use crate::error::{Error, Result};
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct QuotientRing {
    pub ideal: IdealNF,
}

impl QuotientRing {
    pub fn new(ring: &SeriesRing, rels: &[Ps]) -> Result<Self> {
        let amb = Ambient::new(ring);
        Ok(QuotientRing { ideal: IdealNF::new(&amb, rels)? })
    }

    pub fn from_ideal(ideal: IdealNF) -> Self {
        QuotientRing { ideal }
    }

    pub fn base(&self) -> &SeriesRing {
        &self.ideal.amb.ring
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ideal.amb
    }

    pub fn nf(&self, a: &Ps) -> Ps {
        self.ideal.normal_form(a)
    }

    pub fn var(&self, name: &str) -> Result<Ps> {
        Ok(self.nf(&self.base().named(name)?))
    }
}

impl Ring for QuotientRing {
    type E = Ps;
    fn zero(&self) -> Ps {
        Ps::default()
    }
    fn one(&self) -> Ps {
        self.nf(&self.base().int(1))
    }
    fn add(&self, a: &Ps, b: &Ps) -> Ps {
        self.nf(&self.base().add_ps(a, b))
    }
    fn sub(&self, a: &Ps, b: &Ps) -> Ps {
        self.nf(&self.base().sub_ps(a, b))
    }
    fn neg(&self, a: &Ps) -> Ps {
        self.nf(&self.base().neg_ps(a))
    }
    fn mul(&self, a: &Ps, b: &Ps) -> Ps {
        self.nf(&self.base().mul_ps(a, b))
    }
    fn is_zero(&self, a: &Ps) -> bool {
        self.nf(a).terms.is_empty()
    }
    fn from_int(&self, k: i64) -> Ps {
        self.nf(&self.base().int(k))
    }
    fn inv(&self, a: &Ps) -> Result<Ps> {
        if !self.is_unit(a) {
            return Err(Error::NotInvertible("element of the maximal ideal".into()));
        }
        Ok(self.nf(&self.base().inv_ps(a)?))
    }
    fn is_unit(&self, a: &Ps) -> bool {
        self.base().is_unit_ps(a)
    }
}
