//! Mùi coordinates on the iterated Singer construction `R_1^{∘s} X`.
//!
//! With `u_1` outermost and `u_s` innermost, put
//! `V_j = Π_{w ∈ ⟨u_1, …, u_{j-1}⟩}(u_j + w)`, of degree `2^{j-1}`. Then
//! `R_1^{∘s} X` is free over `F[V_1, …, V_s]` on the classes `St_s(x)`, so a
//! basis is `V^a St_s(x)` of degree `Σ a_j 2^{j-1} + 2^s |x|`. In these
//! coordinates
//!
//! * `Sq^k(u^a St_1 y) = Σ_j C(a + |y| - j, k - 2j) u^{a+k-2j} St_1(Sq^j y)`,
//!   applied with `u = V_1` and `y = W^{a'} St_{s-1} x`, using
//!   `St_1(W^{a'} St_{s-1} x) = V^{(0, a')} St_s x`;
//! * the residue differential is
//!   `d(V^a St_s x) = V^{(a_1, …, a_{s-1})} St_{s-1}(σ^{-1} Sq^{a_s + |x| + 1} x)`.
//!
//! Everything is exact for the finite module carried by `X`.

use parking_lot::Mutex;
use std::collections::{BTreeSet, HashMap};

use crate::error::Result;
use crate::gf2::BitVec;
use crate::module::RealizedModule;
use crate::poly::Poly;
use crate::steenrod::binom_mod2;

use super::dickson;
use super::laurent::{st1_element, LaurentElement};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MuiBasis {
    /// Exponents of `V_1, …, V_s`.
    pub a: Vec<u32>,
    pub x_deg: i32,
    pub x: usize,
}

impl MuiBasis {
    pub fn level(&self) -> usize {
        self.a.len()
    }

    pub fn degree(&self) -> i64 {
        let s = self.a.len();
        self.a.iter().enumerate().map(|(j, &e)| (e as i64) << j).sum::<i64>() + ((self.x_deg as i64) << s)
    }

    /// `a_j ≤ t - j` for all `j` (one-based), i.e. outside `(V_1^t, V_2^{t-1}, …)`.
    pub fn in_box(&self, t: usize) -> bool {
        self.a.iter().enumerate().all(|(j, &e)| (e as i64) < t as i64 - j as i64)
    }
}

#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct MuiElement {
    terms: BTreeSet<MuiBasis>,
}

impl MuiElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_basis(b: MuiBasis) -> Self {
        let mut e = Self::zero();
        e.toggle(b);
        e
    }

    pub fn toggle(&mut self, b: MuiBasis) {
        if !self.terms.remove(&b) {
            self.terms.insert(b);
        }
    }

    pub fn add_assign(&mut self, other: &MuiElement) {
        for b in &other.terms {
            self.toggle(b.clone());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = &MuiBasis> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Orders a degree-`n` basis by `(x_deg, x, a)`.
fn sort_basis(v: &mut [MuiBasis]) {
    v.sort_by(|p, q| (p.x_deg, p.x, &p.a).cmp(&(q.x_deg, q.x, &q.a)));
}

pub struct MuiAmbient {
    x: RealizedModule,
    memo: Mutex<HashMap<(u32, MuiBasis), MuiElement>>,
}

impl MuiAmbient {
    pub fn new(x: RealizedModule) -> Self {
        MuiAmbient { x, memo: Mutex::new(HashMap::new()) }
    }

    pub fn base(&self) -> &RealizedModule {
        &self.x
    }

    pub fn sq(&self, k: u32, b: &MuiBasis) -> MuiElement {
        if k == 0 {
            return MuiElement::from_basis(b.clone());
        }
        if b.a.is_empty() {
            let img = self.x.act(k, b.x_deg, &BitVec::unit(self.x.dim(b.x_deg), b.x));
            let mut out = MuiElement::zero();
            for i in img.iter_ones() {
                out.toggle(MuiBasis { a: Vec::new(), x_deg: b.x_deg + k as i32, x: i });
            }
            return out;
        }
        let key = (k, b.clone());
        if let Some(hit) = self.memo.lock().get(&key).cloned() {
            return hit;
        }
        let a1 = b.a[0] as i64;
        let y = MuiBasis { a: b.a[1..].to_vec(), x_deg: b.x_deg, x: b.x };
        let dy = y.degree();
        let mut out = MuiElement::zero();
        for j in 0..=k / 2 {
            if !binom_mod2(a1 + dy - j as i64, (k - 2 * j) as i64) {
                continue;
            }
            let e = b.a[0] + k - 2 * j;
            for z in self.sq(j, &y).terms() {
                let mut a = Vec::with_capacity(b.a.len());
                a.push(e);
                a.extend_from_slice(&z.a);
                out.toggle(MuiBasis { a, x_deg: z.x_deg, x: z.x });
            }
        }
        self.memo.lock().insert(key, out.clone());
        out
    }

    pub fn sq_element(&self, k: u32, e: &MuiElement) -> MuiElement {
        let mut out = MuiElement::zero();
        for b in e.terms() {
            out.add_assign(&self.sq(k, b));
        }
        out
    }

    /// The residue differential into `R_1^{∘(s-1)}(Σ^{-1} X)`; basis indices
    /// of `Σ^{-1} X` agree with those of `X`, degrees drop by one.
    pub fn differential(&self, b: &MuiBasis) -> MuiElement {
        let s = b.level();
        assert!(s >= 1, "the differential starts at level one");
        let k = b.a[s - 1] as i64 + b.x_deg as i64 + 1;
        let mut out = MuiElement::zero();
        if k < 0 {
            return out;
        }
        let img = self.x.act(k as u32, b.x_deg, &BitVec::unit(self.x.dim(b.x_deg), b.x));
        for i in img.iter_ones() {
            out.toggle(MuiBasis { a: b.a[..s - 1].to_vec(), x_deg: b.x_deg + k as i32 - 1, x: i });
        }
        out
    }

    pub fn differential_element(&self, e: &MuiElement) -> MuiElement {
        let mut out = MuiElement::zero();
        for b in e.terms() {
            out.add_assign(&self.differential(b));
        }
        out
    }

    /// Basis of `R_1^{∘s} X` in degree `n`, restricted to the box for `t`.
    pub fn basis(&self, s: usize, n: i64, t: Option<usize>) -> Vec<MuiBasis> {
        let mut out = Vec::new();
        for d in self.x.degrees() {
            let rem = n - ((d as i64) << s);
            if rem < 0 || self.x.dim(d) == 0 {
                continue;
            }
            let mut exps = Vec::new();
            weighted(s, rem as u64, t, &mut vec![0; s], &mut exps);
            for x in 0..self.x.dim(d) {
                for a in &exps {
                    out.push(MuiBasis { a: a.clone(), x_deg: d, x });
                }
            }
        }
        sort_basis(&mut out);
        out
    }

    /// `ω^e St_s(x)` for a Dickson exponent vector `e`.
    pub fn dickson_st(&self, s: usize, e: &[u32], x_deg: i32, x: usize) -> MuiElement {
        let p = dickson::monomial_v(s, e);
        let mut out = MuiElement::zero();
        for m in p.terms() {
            out.toggle(MuiBasis { a: m.clone(), x_deg, x });
        }
        out
    }

    /// The element written out in `F[u_1^{±1}, …, u_s^{±1}] ⊗ X`. Requires the
    /// total operations to be finite sums, e.g. `X` bounded.
    pub fn to_laurent(&self, e: &MuiElement) -> Result<LaurentElement> {
        let s = match e.terms().next() {
            None => return Ok(LaurentElement::zero(0)),
            Some(b) => b.level(),
        };
        let v = dickson::mui_in_u(s);
        let mut out = LaurentElement::zero(s);
        let mut st_cache: HashMap<(i32, usize), LaurentElement> = HashMap::new();
        for b in e.terms() {
            let st = match st_cache.get(&(b.x_deg, b.x)) {
                Some(z) => z.clone(),
                None => {
                    let mut z = LaurentElement::basis(b.x_deg, b.x);
                    for _ in 0..s {
                        z = st1_element(&self.x, &z)?;
                    }
                    st_cache.insert((b.x_deg, b.x), z.clone());
                    z
                }
            };
            let mut mono = Poly::one(s);
            for (j, &k) in b.a.iter().enumerate() {
                if k > 0 {
                    mono = mono.mul(&v[j].pow(k));
                }
            }
            for m in mono.terms() {
                let shift: Vec<i32> = m.iter().map(|&k| k as i32).collect();
                out.add_assign(&st.shift(&shift));
            }
        }
        Ok(out)
    }
}

/// Exponent vectors `a` with `Σ a_j 2^j = rem` (zero-based), inside the box.
fn weighted(s: usize, rem: u64, t: Option<usize>, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    fn rec(j: usize, rem: u64, t: Option<usize>, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if j == 0 {
            let cap = t.map_or(u64::MAX, |t| t as u64 - 1);
            if rem <= cap {
                cur[0] = rem as u32;
                out.push(cur.clone());
                cur[0] = 0;
            }
            return;
        }
        let w = 1u64 << j;
        let mut max = rem / w;
        if let Some(t) = t {
            if t <= j {
                return;
            }
            max = max.min((t - j - 1) as u64);
        }
        for e in 0..=max {
            cur[j] = e as u32;
            rec(j - 1, rem - e * w, t, cur, out);
        }
        cur[j] = 0;
    }
    if s == 0 {
        if rem == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if let Some(t) = t {
        if t < s {
            return;
        }
    }
    rec(s - 1, rem, t, cur, out);
}
