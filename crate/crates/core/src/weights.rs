//! Characters of the diagonal torus, Weyl elements, signed-root subsets J ⊆ S and the
//! Serre weights σ_J of GL2(F_q).

use crate::algebra::witt::{WittRing, Wv};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Element of X*(T) = (Z^2)^{Z/f}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character(pub Vec<(i64, i64)>);

impl Character {
    pub fn f(&self) -> usize {
        self.0.len()
    }

    pub fn eta(f: usize) -> Character {
        Character(vec![(1, 0); f])
    }

    pub fn alpha(i: usize, f: usize) -> Character {
        let mut c = vec![(0, 0); f];
        c[i] = (1, -1);
        Character(c)
    }

    /// ⟨μ, α^{(i)}⟩
    pub fn pair_alpha(&self, i: usize) -> i64 {
        self.0[i].0 - self.0[i].1
    }

    pub fn add(&self, o: &Character) -> Character {
        Character(self.0.iter().zip(&o.0).map(|(a, b)| (a.0 + b.0, a.1 + b.1)).collect())
    }

    pub fn sub(&self, o: &Character) -> Character {
        Character(self.0.iter().zip(&o.0).map(|(a, b)| (a.0 - b.0, a.1 - b.1)).collect())
    }

    pub fn act(&self, w: &Weyl) -> Character {
        Character(self.0.iter().zip(&w.0).map(|(&(a, b), &s)| if s { (b, a) } else { (a, b) }).collect())
    }

    /// (F μ)_i = p μ_{i+1}
    pub fn frob(&self, p: i64) -> Character {
        let f = self.f();
        Character((0..f).map(|i| (p * self.0[(i + 1) % f].0, p * self.0[(i + 1) % f].1)).collect())
    }

    pub fn parse(s: &str) -> Result<Character> {
        let v: Vec<(i64, i64)> = serde_json::from_str(s).map_err(|e| Error::Param(format!("bad character {s}: {e}")))?;
        if v.is_empty() {
            return Err(Error::Param("empty character".into()));
        }
        Ok(Character(v))
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Element of S_2^{Z/f}; `true` is the nontrivial element s.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weyl(pub Vec<bool>);

impl Weyl {
    pub fn id(f: usize) -> Weyl {
        Weyl(vec![false; f])
    }

    pub fn all(f: usize) -> Vec<Weyl> {
        (0..1usize << f).map(|m| Weyl((0..f).map(|i| m >> i & 1 == 1).collect())).collect()
    }

    pub fn mul(&self, o: &Weyl) -> Weyl {
        Weyl(self.0.iter().zip(&o.0).map(|(a, b)| a ^ b).collect())
    }

    /// (F w)_i = w_{i+1}
    pub fn frob(&self) -> Weyl {
        let f = self.0.len();
        Weyl((0..f).map(|i| self.0[(i + 1) % f]).collect())
    }

    pub fn frob_inv(&self) -> Weyl {
        let f = self.0.len();
        Weyl((0..f).map(|i| self.0[(i + f - 1) % f]).collect())
    }

    pub fn swaps(&self) -> usize {
        self.0.iter().filter(|x| **x).count()
    }

    /// The unique (w, s_τ) with w_0 = Id and F^{-1}(w) s w^{-1} = (s_τ, Id, ..., Id).
    pub fn orientation(&self) -> (Weyl, bool) {
        let f = self.0.len();
        let mut w = vec![false; f];
        for i in 1..f {
            w[i] = w[i - 1] ^ self.0[i];
        }
        let st = w[f - 1] ^ self.0[0];
        (Weyl(w), st)
    }

    /// s η: (0,1) at swapped indices and (1,0) elsewhere.
    pub fn s_eta(&self) -> Character {
        Character(self.0.iter().map(|&s| if s { (0, 1) } else { (1, 0) }).collect())
    }

    /// Parse "0110" style strings (index 0 first) or "Id"/"s" lists separated by commas.
    pub fn parse(s: &str, f: usize) -> Result<Weyl> {
        let s = s.trim();
        let v: Vec<bool> = if s.contains(',') {
            s.split(',')
                .map(|t| match t.trim() {
                    "Id" | "id" | "0" => Ok(false),
                    "s" | "1" => Ok(true),
                    o => Err(Error::Param(format!("bad Weyl component {o}"))),
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    o => Err(Error::Param(format!("bad Weyl component {o}"))),
                })
                .collect::<Result<_>>()?
        };
        if v.len() != f {
            return Err(Error::Param(format!("Weyl element needs {f} components")));
        }
        Ok(Weyl(v))
    }
}

impl fmt::Display for Weyl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.0.iter().map(|&s| if s { "s" } else { "Id" }).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A subset of S = {±ω^{(i)}}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootSet {
    pub plus: Vec<bool>,
    pub minus: Vec<bool>,
}

impl RootSet {
    pub fn empty(f: usize) -> RootSet {
        RootSet { plus: vec![false; f], minus: vec![false; f] }
    }

    pub fn f(&self) -> usize {
        self.plus.len()
    }

    pub fn contains(&self, i: usize, plus: bool) -> bool {
        if plus {
            self.plus[i]
        } else {
            self.minus[i]
        }
    }

    pub fn with(&self, i: usize, plus: bool) -> RootSet {
        let mut r = self.clone();
        if plus {
            r.plus[i] = true;
        } else {
            r.minus[i] = true;
        }
        r
    }

    pub fn without(&self, i: usize, plus: bool) -> RootSet {
        let mut r = self.clone();
        if plus {
            r.plus[i] = false;
        } else {
            r.minus[i] = false;
        }
        r
    }

    /// 𝐤(J)_i = #(J ∩ {±ω^{(i)}})
    pub fn multidegree(&self) -> Vec<u8> {
        (0..self.f()).map(|i| self.plus[i] as u8 + self.minus[i] as u8).collect()
    }

    pub fn len(&self) -> usize {
        self.multidegree().iter().map(|&k| k as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, o: &RootSet) -> bool {
        (0..self.f()).all(|i| (!self.plus[i] || o.plus[i]) && (!self.minus[i] || o.minus[i]))
    }

    pub fn disjoint(&self, o: &RootSet) -> bool {
        (0..self.f()).all(|i| !(self.plus[i] && o.plus[i]) && !(self.minus[i] && o.minus[i]))
    }

    pub fn union(&self, o: &RootSet) -> RootSet {
        RootSet {
            plus: self.plus.iter().zip(&o.plus).map(|(a, b)| a | b).collect(),
            minus: self.minus.iter().zip(&o.minus).map(|(a, b)| a | b).collect(),
        }
    }

    /// At most one element per index.
    pub fn is_admissible(&self) -> bool {
        self.multidegree().iter().all(|&k| k <= 1)
    }

    /// Indices met by the set.
    pub fn support(&self) -> Vec<usize> {
        (0..self.f()).filter(|&i| self.plus[i] || self.minus[i]).collect()
    }

    /// All 4^f subsets of S.
    pub fn all(f: usize) -> Vec<RootSet> {
        (0..1usize << (2 * f))
            .map(|m| RootSet {
                plus: (0..f).map(|i| m >> (2 * i) & 1 == 1).collect(),
                minus: (0..f).map(|i| m >> (2 * i + 1) & 1 == 1).collect(),
            })
            .collect()
    }

    /// All subsets of this set.
    pub fn subsets(&self) -> Vec<RootSet> {
        RootSet::all(self.f()).into_iter().filter(|j| j.is_subset(self)).collect()
    }

    /// All admissible subsets (at most one element per index): 3^f of them.
    pub fn all_admissible(f: usize) -> Vec<RootSet> {
        RootSet::all(f).into_iter().filter(|j| j.is_admissible()).collect()
    }

    /// Parse "{+0,-1}" or "+0,-1" or "" (empty).
    pub fn parse(s: &str, f: usize) -> Result<RootSet> {
        let mut r = RootSet::empty(f);
        let t = s.trim().trim_start_matches('{').trim_end_matches('}');
        for tok in t.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            // +i, -i, or ω^{(i)} written w<i> with an optional sign
            let (plus, rest) = match tok.as_bytes()[0] {
                b'+' => (true, &tok[1..]),
                b'-' => (false, &tok[1..]),
                b'w' => (true, tok),
                _ => return Err(Error::Param(format!("bad signed root {tok}; use +i, -i or w<i>"))),
            };
            let rest = rest.strip_prefix('w').unwrap_or(rest);
            let i: usize = rest.parse().map_err(|_| Error::Param(format!("bad index in {tok}")))?;
            if i >= f {
                return Err(Error::Param(format!("index {i} out of range for f={f}")));
            }
            r = r.with(i, plus);
        }
        Ok(r)
    }
}

impl fmt::Display for RootSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        for i in 0..self.f() {
            if self.plus[i] {
                parts.push(format!("+{i}"));
            }
            if self.minus[i] {
                parts.push(format!("-{i}"));
            }
        }
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Serre weight F(λ), stored as digits m_i = x_i - y_i and d = Σ p^i y_i mod q-1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SerreWeight {
    pub p: u64,
    pub m: Vec<u32>,
    pub d: u64,
}

impl SerreWeight {
    pub fn new(p: u64, m: Vec<u32>, d: i64) -> SerreWeight {
        let q1 = p.pow(m.len() as u32) as i64 - 1;
        SerreWeight { p, m, d: d.rem_euclid(q1) as u64 }
    }

    /// F(λ) for p-restricted λ.
    pub fn from_highest(p: u64, lam: &Character) -> Result<SerreWeight> {
        let mut m = vec![];
        let mut d = 0i64;
        let mut pw = 1i64;
        for &(x, y) in &lam.0 {
            if x - y < 0 || x - y > p as i64 - 1 {
                return Err(Error::Param(format!("{lam} is not p-restricted")));
            }
            m.push((x - y) as u32);
            d += pw * y;
            pw *= p as i64;
        }
        Ok(SerreWeight::new(p, m, d))
    }

    pub fn f(&self) -> usize {
        self.m.len()
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.f() as u32)
    }

    pub fn dim(&self) -> u64 {
        self.m.iter().map(|&x| x as u64 + 1).product()
    }

    /// Canonical highest weight: y given by the base-p digits of d.
    pub fn highest(&self) -> Character {
        let mut d = self.d;
        Character(
            self.m
                .iter()
                .map(|&mi| {
                    let y = (d % self.p) as i64;
                    d /= self.p;
                    (mi as i64 + y, y)
                })
                .collect(),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "components": self.highest().0,
            "m": self.m,
            "d": self.d,
            "dim": self.dim(),
        })
    }
}

impl fmt::Display for SerreWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.highest())
    }
}

/// 1 < ⟨μ-η, α^{(i)}⟩ < p-2 for all i.
pub fn is_generic(mu: &Character, p: u64) -> bool {
    let p = p as i64;
    (0..mu.f()).all(|i| {
        let x = mu.pair_alpha(i) - 1;
        1 < x && x < p - 2
    })
}

fn require_generic(mu: &Character, p: u64) -> Result<()> {
    if is_generic(mu, p) {
        Ok(())
    } else {
        Err(Error::NonGeneric(format!("{mu} at p={p}")))
    }
}

/// σ_J. Full pairs cancel; otherwise each element at index i reflects index i-1 and
/// carries one unit into index i (sign deciding which coordinate), starting from μ-η.
pub fn sigma_j(p: u64, mu: &Character, j: &RootSet) -> Result<SerreWeight> {
    require_generic(mu, p)?;
    let f = mu.f();
    if j.f() != f {
        return Err(Error::Param("root set and character disagree on f".into()));
    }
    let mut lam: Vec<(i64, i64)> = mu.sub(&Character::eta(f)).0;
    let mut refl = vec![false; f];
    for i in 0..f {
        let sign = match (j.plus[i], j.minus[i]) {
            (true, false) => 1,
            (false, true) => -1,
            _ => continue,
        };
        let k = (i + f - 1) % f;
        refl[k] = true;
        if sign < 0 {
            lam[i].0 -= 1;
        } else {
            lam[i].1 -= 1;
        }
    }
    let p = p as i64;
    let out: Vec<(i64, i64)> =
        lam.iter().zip(&refl).map(|(&(a, b), &r)| if r { (b + p - 1, a + 1) } else { (a, b) }).collect();
    SerreWeight::from_highest(p as u64, &Character(out))
}

/// Subsets J' with J' ∩ {±ω^{(i)}} ⊆ {-s_i ω^{(i)}} (with s ω = -ω).
pub fn jh_index_sets(s: &Weyl) -> Vec<RootSet> {
    let f = s.0.len();
    (0..1usize << f)
        .map(|m| {
            let mut r = RootSet::empty(f);
            for i in 0..f {
                if m >> i & 1 == 1 {
                    // -s_i ω: -ω for s_i = Id, +ω for s_i = s
                    r = r.with(i, s.0[i]);
                }
            }
            r
        })
        .collect()
}

/// Jordan-Hölder factors of the reduction of R_s(μ - sη), indexed by J'.
pub fn jh_of_type(p: u64, s: &Weyl, mu: &Character) -> Result<Vec<(RootSet, SerreWeight)>> {
    require_generic(mu, p)?;
    jh_index_sets(s).into_iter().map(|j| Ok((j.clone(), sigma_j(p, mu, &j)?))).collect()
}

/// T_{σ,I}: w_i = Id if ω^{(i)} ∈ I, w_i = s if -ω^{(i)} ∈ I, free otherwise.
pub fn types_for(i: &RootSet) -> Result<Vec<Weyl>> {
    if !i.is_admissible() {
        return Err(Error::Param(format!("{i} contains a full pair")));
    }
    let f = i.f();
    Ok(Weyl::all(f)
        .into_iter()
        .filter(|w| (0..f).all(|k| !(i.plus[k] && w.0[k]) && !(i.minus[k] && !w.0[k])))
        .collect())
}

/// Data of the residual representation: μ_i = (c_i, 1), I(ρ̄,μ), a_i, α, α'.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualParams {
    pub p: u64,
    pub f: usize,
    pub mu: Character,
    pub irm: RootSet,
    pub a: Vec<Wv>,
    pub alpha: Wv,
    pub alpha2: Wv,
}

impl ResidualParams {
    pub fn new(p: u64, mu: Character, irm: RootSet, a: Vec<Wv>, alpha: Wv, alpha2: Wv) -> Result<Self> {
        let f = mu.f();
        let field = WittRing::new(p, f, 1)?;
        let r = ResidualParams { p, f, mu, irm, a, alpha, alpha2 };
        if r.irm.f() != f || r.a.len() != f {
            return Err(Error::Param("inconsistent embedding counts".into()));
        }
        for (i, &(c, one)) in r.mu.0.iter().enumerate() {
            if one != 1 || !(2 < c && c < p as i64 - 1) {
                return Err(Error::Param(format!("μ_{i} = ({c},{one}) must be (c,1) with 2 < c < p-1")));
            }
        }
        if !r.irm.is_admissible() {
            return Err(Error::Param("I(ρ̄,μ) has a full pair".into()));
        }
        for i in 0..f {
            if field.is_zero(&r.a[i]) != r.irm.plus[i] {
                return Err(Error::Param(format!("a_{i} must vanish exactly when +ω^({i}) ∈ I(ρ̄,μ)")));
            }
        }
        if field.is_zero(&r.alpha) || field.is_zero(&r.alpha2) {
            return Err(Error::Param("α and α' must be nonzero".into()));
        }
        Ok(r)
    }

    /// Default residual data: a_i = 1 off I(ρ̄,μ), α = α' = 1.
    pub fn simple(p: u64, mu: Character, irm: RootSet) -> Result<Self> {
        let f = mu.f();
        let field = WittRing::new(p, f, 1)?;
        let a = (0..f).map(|i| if irm.plus[i] { field.zero() } else { field.one() }).collect();
        Self::new(p, mu, irm, a, field.one(), field.one())
    }

    pub fn c(&self, i: usize) -> i64 {
        self.mu.0[i].0
    }
}

/// W(ρ̄) = {σ_J : J ⊆ I(ρ̄,μ)}.
pub fn weight_set(params: &ResidualParams) -> Result<BTreeSet<SerreWeight>> {
    params.irm.subsets().iter().map(|j| sigma_j(params.p, &params.mu, j)).collect()
}

/// Coefficient list of ∏_i (1+t)^{2-#(I∩{±ω^{(i)}})}: the number of J with |𝐤(J)| = k and
/// J ∩ I = ∅.
pub fn stratum_counts(f: usize, i: &RootSet) -> Vec<u64> {
    let mut poly = vec![1u64];
    for k in 0..f {
        let fac: &[u64] = match i.plus[k] as u8 + i.minus[k] as u8 {
            0 => &[1, 2, 1],
            1 => &[1, 1],
            _ => &[1],
        };
        let mut out = vec![0u64; poly.len() + fac.len() - 1];
        for (a, x) in poly.iter().enumerate() {
            for (b, y) in fac.iter().enumerate() {
                out[a + b] += x * y;
            }
        }
        poly = out;
    }
    poly
}
