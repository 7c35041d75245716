//! Truncated Witt vectors W(F_q)/p^N, q = p^f, as (Z/p^N)[x]/(P) for a monic lift P of
//! an irreducible polynomial over F_p. With N = 1 this is the residue field F_q.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const MAX_F: usize = 4;

/// Coefficient vector of length `MAX_F`; only the first `f` slots are used.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct Wv(pub [u64; MAX_F]);

impl Wv {
    pub const ZERO: Wv = Wv([0; MAX_F]);
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittRing {
    pub p: u64,
    pub f: usize,
    pub n: u32,
    pub modulus: u64,
    /// x^f = -(poly[0] + poly[1] x + ... ) modulo p^N
    pub poly: Vec<u64>,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

// --- small polynomial helpers over F_p, used only to pick the defining polynomial ---

fn fp_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_mod(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let inv = fp_pow(m[dm], p - 2, p);
    while r.len() > dm {
        let lead = r[r.len() - 1] * inv % p;
        let shift = r.len() - 1 - dm;
        for (k, &c) in m.iter().enumerate() {
            r[shift + k] = (r[shift + k] + p * p - lead * c % p) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    fp_mod(&r, m, p)
}

fn fp_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        let r = fp_mod(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or test: g of degree d is irreducible iff gcd(x^{p^k} - x, g) = 1 for k <= d/2.
fn fp_irreducible(g: &[u64], p: u64) -> bool {
    let d = g.len() - 1;
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 0..d / 2 {
        let mut acc = vec![1u64];
        let mut base = xp.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_mulmod(&acc, &base, g, p);
            }
            base = fp_mulmod(&base, &base, g, p);
            e >>= 1;
        }
        xp = acc;
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        fp_trim(&mut diff);
        if diff.is_empty() {
            return false;
        }
        if fp_gcd(g, &diff, p).len() > 1 {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree f over F_p
/// (coefficients c_0..c_{f-1}, constant term first).
fn conway_like(p: u64, f: usize) -> Vec<u64> {
    if f == 1 {
        return vec![0];
    }
    let total = p.pow(f as u32);
    for code in 0..total {
        let mut c = vec![0u64; f];
        let mut t = code;
        for slot in c.iter_mut().rev() {
            *slot = t % p;
            t /= p;
        }
        let mut g = c.clone();
        g.push(1);
        if g[0] != 0 && fp_irreducible(&g, p) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl WittRing {
    pub fn new(p: u64, f: usize, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Param(format!("{p} is not prime")));
        }
        if f == 0 || f > MAX_F {
            return Err(Error::Param(format!("f = {f} outside 1..={MAX_F}")));
        }
        if n == 0 {
            return Err(Error::Param("precision N must be at least 1".into()));
        }
        let modulus = p
            .checked_pow(n)
            .filter(|m| *m < (1u64 << 31))
            .ok_or_else(|| Error::Param(format!("p^N too large for p={p}, N={n}")))?;
        Ok(WittRing { p, f, n, modulus, poly: conway_like(p, f) })
    }

    /// The residue field F_q sharing the defining polynomial.
    pub fn residue_field(&self) -> WittRing {
        self.with_precision(1)
    }

    pub fn with_precision(&self, n: u32) -> WittRing {
        WittRing { p: self.p, f: self.f, n, modulus: self.p.pow(n), poly: self.poly.clone() }
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.f as u32)
    }

    pub fn zero(&self) -> Wv {
        Wv::ZERO
    }

    pub fn one(&self) -> Wv {
        self.from_int(1)
    }

    pub fn from_int(&self, k: i64) -> Wv {
        let m = self.modulus as i64;
        let mut w = Wv::ZERO;
        w.0[0] = k.rem_euclid(m) as u64;
        w
    }

    /// Element with the given coefficients in the power basis 1, x, .., x^{f-1}.
    pub fn from_coeffs(&self, cs: &[i64]) -> Wv {
        let m = self.modulus as i64;
        let mut w = Wv::ZERO;
        for (i, &c) in cs.iter().take(self.f).enumerate() {
            w.0[i] = c.rem_euclid(m) as u64;
        }
        w
    }

    pub fn is_zero(&self, a: &Wv) -> bool {
        a.0[..self.f].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Wv, b: &Wv) -> Wv {
        let mut r = Wv::ZERO;
        for i in 0..self.f {
            r.0[i] = (a.0[i] + b.0[i]) % self.modulus;
        }
        r
    }

    pub fn sub(&self, a: &Wv, b: &Wv) -> Wv {
        let mut r = Wv::ZERO;
        for i in 0..self.f {
            r.0[i] = (a.0[i] + self.modulus - b.0[i]) % self.modulus;
        }
        r
    }

    pub fn neg(&self, a: &Wv) -> Wv {
        self.sub(&Wv::ZERO, a)
    }

    pub fn mul(&self, a: &Wv, b: &Wv) -> Wv {
        let m = self.modulus as u128;
        let f = self.f;
        let mut t = [0u128; 2 * MAX_F];
        for i in 0..f {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..f {
                t[i + j] = (t[i + j] + a.0[i] as u128 * b.0[j] as u128) % m;
            }
        }
        for k in (f..2 * f - 1).rev() {
            let c = t[k];
            if c == 0 {
                continue;
            }
            t[k] = 0;
            for (j, &pj) in self.poly.iter().enumerate() {
                t[k - f + j] = (t[k - f + j] + m * m - c * pj as u128 % m) % m;
            }
        }
        let mut r = Wv::ZERO;
        for i in 0..f {
            r.0[i] = t[i] as u64;
        }
        r
    }

    pub fn scale(&self, a: &Wv, k: i64) -> Wv {
        self.mul(a, &self.from_int(k))
    }

    pub fn pow(&self, a: &Wv, mut e: u64) -> Wv {
        let mut r = self.one();
        let mut b = *a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    /// p-adic valuation, `n` for zero.
    pub fn valuation(&self, a: &Wv) -> u32 {
        let mut v = self.n;
        for &c in &a.0[..self.f] {
            if c != 0 {
                let mut k = 0;
                let mut c = c;
                while c % self.p == 0 {
                    c /= self.p;
                    k += 1;
                }
                v = v.min(k);
            }
        }
        v
    }

    pub fn is_unit(&self, a: &Wv) -> bool {
        self.valuation(a) == 0
    }

    /// Reduce each coefficient modulo p^k (k <= N).
    pub fn truncate(&self, a: &Wv, k: u32) -> Wv {
        let m = self.p.pow(k.min(self.n));
        let mut r = Wv::ZERO;
        for i in 0..self.f {
            r.0[i] = a.0[i] % m;
        }
        r
    }

    /// Exact division by p^k; the caller guarantees divisibility.
    pub fn div_p_pow(&self, a: &Wv, k: u32) -> Wv {
        let d = self.p.pow(k);
        let mut r = Wv::ZERO;
        for i in 0..self.f {
            debug_assert_eq!(a.0[i] % d, 0);
            r.0[i] = a.0[i] / d;
        }
        r
    }

    pub fn p_pow(&self, k: u32) -> Wv {
        if k >= self.n {
            Wv::ZERO
        } else {
            self.from_int(self.p.pow(k) as i64)
        }
    }

    /// Inverse of a unit: invert the residue by exponentiation, then Newton-lift.
    pub fn inv(&self, a: &Wv) -> Result<Wv> {
        if !self.is_unit(a) {
            return Err(Error::NotInvertible("Witt element is not a unit".into()));
        }
        let k = self.residue_field();
        let abar = k.reduce_from(self, a);
        let y0 = k.pow(&abar, k.q() - 2);
        let mut y = self.lift_from(&k, &y0);
        let two = self.from_int(2);
        for _ in 0..(32 - self.n.leading_zeros()) + 1 {
            y = self.mul(&y, &self.sub(&two, &self.mul(a, &y)));
        }
        debug_assert_eq!(self.mul(a, &y), self.one());
        Ok(y)
    }

    /// Reduce an element of another precision level of the same ring into this one.
    pub fn reduce_from(&self, _other: &WittRing, a: &Wv) -> Wv {
        self.truncate(a, self.n)
    }

    /// Coefficient-wise lift (not the Teichmüller lift).
    pub fn lift_from(&self, _other: &WittRing, a: &Wv) -> Wv {
        *a
    }

    /// Teichmüller lift of a residue class, by iterating t -> t^q from the naive lift.
    pub fn teichmuller(&self, r: &Wv) -> Wv {
        let mut t = self.truncate(r, 1);
        loop {
            let next = self.pow(&t, self.q());
            if next == t {
                return t;
            }
            t = next;
        }
    }

    /// Leading p-adic digit: for a of valuation e < N returns (e, residue of a/p^e).
    pub fn leading_digit(&self, a: &Wv) -> Option<(u32, Wv)> {
        let e = self.valuation(a);
        if e >= self.n {
            return None;
        }
        let u = self.div_p_pow(a, e);
        Some((e, self.truncate(&u, 1)))
    }

    /// All elements of the residue field, in a fixed order.
    pub fn field_elements(&self) -> Vec<Wv> {
        let q = self.q();
        (0..q)
            .map(|mut code| {
                let mut w = Wv::ZERO;
                for i in 0..self.f {
                    w.0[i] = code % self.p;
                    code /= self.p;
                }
                w
            })
            .collect()
    }

    /// A generator of the multiplicative group of the residue field.
    pub fn primitive_element(&self) -> Wv {
        let k = self.residue_field();
        let q = k.q();
        let mut primes = vec![];
        let mut m = q - 1;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                primes.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        k.field_elements()
            .into_iter()
            .skip(1)
            .find(|g| primes.iter().all(|&r| k.pow(g, (q - 1) / r) != k.one()))
            .expect("finite fields have cyclic unit groups")
    }

    /// Canonical string form: integers, comma-separated when f > 1.
    pub fn to_canonical(&self, a: &Wv) -> String {
        if self.f == 1 {
            a.0[0].to_string()
        } else {
            let parts: Vec<String> = a.0[..self.f].iter().map(|c| c.to_string()).collect();
            format!("[{}]", parts.join(","))
        }
    }

    /// Like `to_canonical` but with residues in (-p^N/2, p^N/2], for display.
    pub fn to_signed(&self, a: &Wv) -> String {
        let sg = |c: u64| if c > self.modulus / 2 { format!("-{}", self.modulus - c) } else { c.to_string() };
        if self.f == 1 {
            sg(a.0[0])
        } else {
            let parts: Vec<String> = a.0[..self.f].iter().map(|&c| sg(c)).collect();
            format!("[{}]", parts.join(","))
        }
    }
}
