//! Hilbert-Samuel function of R/p for R = A/I, and the multiplicity read off from it.

use super::ideal::{Ambient, IdealNF};
use super::series::Ps;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct HilbertSamuel {
    /// multiplicity e
    pub e: i64,
    /// Krull dimension d
    pub d: u32,
    /// dim_F R/(p, m^k) for k = 1..=M+1
    pub values: Vec<u64>,
}

/// dim_F of (A/(p, I)) / m^k for k = 1..=M+1, where M is the degree cap of the ring.
pub fn hilbert_function(ideal: &IdealNF) -> Result<Vec<u64>> {
    let ring = &ideal.amb.ring;
    let modp = ring.with_precision(1, ring.cap);
    let amb = Ambient::new(&modp);
    let gens: Vec<Ps> = ideal.gens.iter().map(|g| ring.convert(g, &modp)).collect();
    let i = IdealNF::new(&amb, &gens)?;
    let mut out = vec![];
    for k in 1..=ring.cap + 1 {
        let monos = amb.monos.iter().filter(|m| m.degree() < k).count() as u64;
        let piv = i.ech.rows.keys().filter(|&&c| amb.monos[c].degree() < k).count() as u64;
        out.push(monos - piv);
    }
    Ok(out)
}

/// Fit H(k) = e k^d / d! + lower order on the tail of the sampled window.
pub fn fit(values: &[u64]) -> Result<(i64, u32)> {
    let mut diff: Vec<i64> = values.iter().map(|&x| x as i64).collect();
    for d in 0..values.len() as u32 {
        // Stable: constant on at least three trailing points (two consecutive equal steps).
        let n = diff.len();
        if n >= 3 && diff[n - 1] == diff[n - 2] && diff[n - 2] == diff[n - 3] {
            return Ok((diff[n - 1], d));
        }
        diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Err(Error::WindowTooSmall("Hilbert function has no stable polynomial fit; raise the degree cap".into()))
}

pub fn hilbert_samuel(ideal: &IdealNF) -> Result<HilbertSamuel> {
    let values = hilbert_function(ideal)?;
    let (e, d) = fit(&values)?;
    Ok(HilbertSamuel { e, d, values })
}
