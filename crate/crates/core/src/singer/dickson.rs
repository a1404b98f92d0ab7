//! Dickson invariants `D(s) = F[u_1, …, u_s]^{GL_s}`.
//!
//! Generators are produced in two coordinate systems. In Mùi coordinates
//! `V_j = Π_{w ∈ ⟨u_1, …, u_{j-1}⟩} (u_j + w)` they satisfy
//! `ω_{s,i} = ω_{s-1,i-1}^2 + V_s ω_{s-1,i}` (with `ω_{s-1,s-1} = 1`,
//! `ω_{s-1,-1} = 0`), read off from `f_s(X) = f_{s-1}(X)^2 + V_s f_{s-1}(X)`
//! for `f_s(X) = Π_{v ∈ ⟨u_1, …, u_s⟩} (X + v)`. Substituting `V_j` gives the
//! generators as polynomials in the `u_j`.

use std::collections::HashMap;

use once_cell::sync::Lazy;
use parking_lot::RwLock;

use crate::poly::Poly;

/// `ω_{s,i}` for `i = 0..s`, as polynomials in `V_1, …, V_s`.
pub fn generators_v(s: usize) -> Vec<Poly> {
    if s == 0 {
        return Vec::new();
    }
    let prev = generators_v(s - 1);
    let lift = |p: &Poly| -> Poly {
        let mut out = Poly::zero(s);
        for e in p.terms() {
            let mut e = e.clone();
            e.push(0);
            out.toggle(e);
        }
        out
    };
    let vs = Poly::var(s, s - 1);
    let coef = |i: isize| -> Poly {
        if i < 0 {
            Poly::zero(s)
        } else if i as usize == s - 1 {
            Poly::one(s)
        } else {
            lift(&prev[i as usize])
        }
    };
    (0..s as isize).map(|i| coef(i - 1).square().add(&vs.mul(&coef(i)))).collect()
}

/// `V_1, …, V_s` as polynomials in `u_1, …, u_s`.
pub fn mui_in_u(s: usize) -> Vec<Poly> {
    (0..s)
        .map(|j| {
            let mut p = Poly::one(s);
            for mask in 0u32..(1 << j) {
                let mut f = Poly::var(s, j);
                for b in 0..j {
                    if mask >> b & 1 == 1 {
                        f.add_assign(&Poly::var(s, b));
                    }
                }
                p = p.mul(&f);
            }
            p
        })
        .collect()
}

/// `ω_{s,i}` for `i = 0..s`, as polynomials in `u_1, …, u_s`; `|ω_{s,i}| = 2^s - 2^i`.
pub fn dickson_generators(s: usize) -> Vec<Poly> {
    let v = mui_in_u(s);
    generators_v(s).iter().map(|w| w.substitute(&v)).collect()
}

pub fn generator_degree(s: usize, i: usize) -> u32 {
    (1u32 << s) - (1u32 << i)
}

/// Exponent vectors `e` with `Σ e_i (2^s - 2^i) = n`.
pub fn monomials_of_degree(s: usize, n: i64) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if n < 0 {
        return out;
    }
    if s == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0u32; s];
    fn rec(s: usize, i: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == s {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let g = generator_degree(s, i);
        for e in 0..=rem / g {
            cur[i] = e;
            rec(s, i + 1, rem - e * g, cur, out);
        }
        cur[i] = 0;
    }
    rec(s, 0, n as u32, &mut cur, &mut out);
    out
}

type Memo = RwLock<HashMap<(usize, Vec<u32>), Poly>>;

static MONOMIAL_V: Lazy<Memo> = Lazy::new(|| RwLock::new(HashMap::new()));

/// `Π_i ω_{s,i}^{e_i}` in Mùi coordinates.
pub fn monomial_v(s: usize, e: &[u32]) -> Poly {
    let key = (s, e.to_vec());
    if let Some(p) = MONOMIAL_V.read().get(&key) {
        return p.clone();
    }
    let gens = generators_v(s);
    let mut p = Poly::one(s);
    for (g, &k) in gens.iter().zip(e) {
        if k > 0 {
            p = p.mul(&g.pow(k));
        }
    }
    MONOMIAL_V.write().insert(key, p.clone());
    p
}

/// `dim D(s)^n`.
pub fn dim(s: usize, n: i64) -> usize {
    monomials_of_degree(s, n).len()
}

/// Restriction along `u_s ↦ 0`.
pub fn restrict_last(p: &Poly) -> Poly {
    let n = p.nvars();
    let mut out = Poly::zero(n - 1);
    for e in p.terms().filter(|e| e[n - 1] == 0) {
        out.toggle(e[..n - 1].to_vec());
    }
    out
}
