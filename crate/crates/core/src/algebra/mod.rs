pub mod chain;
pub mod hilbert;
pub mod ideal;
pub mod laurent;
pub mod nakayama;
pub mod quotient;
pub mod series;
pub mod witt;

use crate::error::Result;
use std::fmt::Debug;

/// Commutative ring with an explicit context object carrying the precision data.
pub trait Ring {
    type E: Clone + PartialEq + Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn from_int(&self, k: i64) -> Self::E;
    fn inv(&self, a: &Self::E) -> Result<Self::E>;
    fn is_unit(&self, a: &Self::E) -> bool;
}

impl Ring for witt::WittRing {
    type E = witt::Wv;
    fn zero(&self) -> witt::Wv {
        witt::Wv::ZERO
    }
    fn one(&self) -> witt::Wv {
        self.from_int(1)
    }
    fn add(&self, a: &witt::Wv, b: &witt::Wv) -> witt::Wv {
        witt::WittRing::add(self, a, b)
    }
    fn sub(&self, a: &witt::Wv, b: &witt::Wv) -> witt::Wv {
        witt::WittRing::sub(self, a, b)
    }
    fn neg(&self, a: &witt::Wv) -> witt::Wv {
        witt::WittRing::neg(self, a)
    }
    fn mul(&self, a: &witt::Wv, b: &witt::Wv) -> witt::Wv {
        witt::WittRing::mul(self, a, b)
    }
    fn is_zero(&self, a: &witt::Wv) -> bool {
        witt::WittRing::is_zero(self, a)
    }
    fn from_int(&self, k: i64) -> witt::Wv {
        witt::WittRing::from_int(self, k)
    }
    fn inv(&self, a: &witt::Wv) -> Result<witt::Wv> {
        witt::WittRing::inv(self, a)
    }
    fn is_unit(&self, a: &witt::Wv) -> bool {
        witt::WittRing::is_unit(self, a)
    }
}

/// Cooperative cancellation for long computations.
#[derive(Clone, Default, Debug)]
pub struct Cancel(std::sync::Arc<std::sync::atomic::AtomicBool>);

impl Cancel {
    pub fn cancel(&self) {
        self.0.store(true, std::sync::atomic::Ordering::Relaxed);
    }

    pub fn check(&self) -> Result<()> {
        if self.0.load(std::sync::atomic::Ordering::Relaxed) {
            Err(crate::error::Error::Cancelled)
        } else {
            Ok(())
        }
    }
}
