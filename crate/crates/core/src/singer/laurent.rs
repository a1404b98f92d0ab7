//! Finite sums in `F[u_1^{±1}, …, u_s^{±1}] ⊗ M` with the diagonal action.
//!
//! This is the ambient in which the total operation `St_1(x) = Σ_i u^{|x|-i} ⊗ Sq^i x`
//! and its residues are written directly. It is used as an independent
//! reference for the closed formulas in [`super::mui`].

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::module::RealizedModule;
use crate::steenrod::binom_mod2;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LaurentTerm {
    pub exps: Vec<i32>,
    pub x_deg: i32,
    pub x: usize,
}

impl LaurentTerm {
    pub fn degree(&self) -> i32 {
        self.exps.iter().sum::<i32>() + self.x_deg
    }
}

#[derive(Clone, Debug, Default)]
pub struct LaurentElement {
    nvars: usize,
    terms: BTreeSet<LaurentTerm>,
}

/// Zero elements compare equal regardless of variable count.
impl PartialEq for LaurentElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for LaurentElement {}

impl LaurentElement {
    pub fn zero(nvars: usize) -> Self {
        LaurentElement { nvars, terms: BTreeSet::new() }
    }

    /// `1 ⊗ x` with no variables.
    pub fn basis(x_deg: i32, x: usize) -> Self {
        let mut z = Self::zero(0);
        z.toggle(LaurentTerm { exps: Vec::new(), x_deg, x });
        z
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = &LaurentTerm> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn toggle(&mut self, t: LaurentTerm) {
        debug_assert_eq!(t.exps.len(), self.nvars);
        if !self.terms.remove(&t) {
            self.terms.insert(t);
        }
    }

    pub fn add_assign(&mut self, other: &LaurentElement) {
        for t in &other.terms {
            self.toggle(t.clone());
        }
    }

    /// Multiplies by `u^e`.
    pub fn shift(&self, e: &[i32]) -> LaurentElement {
        let mut out = Self::zero(self.nvars);
        for t in &self.terms {
            out.toggle(LaurentTerm { exps: t.exps.iter().zip(e).map(|(a, b)| a + b).collect(), ..t.clone() });
        }
        out
    }

    /// Inserts a new variable with exponent `k` at position 0.
    pub fn prepend_var(&self, k: i32) -> LaurentElement {
        let mut out = Self::zero(self.nvars + 1);
        for t in &self.terms {
            let mut exps = vec![k];
            exps.extend_from_slice(&t.exps);
            out.toggle(LaurentTerm { exps, ..t.clone() });
        }
        out
    }

    pub fn degree(&self) -> Option<i32> {
        let mut it = self.terms.iter().map(LaurentTerm::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn display(&self, m: &RealizedModule) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|t| {
                let vars: Vec<String> = t
                    .exps
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e != 0)
                    .map(|(i, e)| if *e == 1 { format!("u{}", i + 1) } else { format!("u{}^{e}", i + 1) })
                    .collect();
                let label = m.labels(t.x_deg).get(t.x).cloned().unwrap_or_else(|| format!("?{}", t.x));
                if vars.is_empty() {
                    format!("1 | {label}")
                } else {
                    format!("{} | {label}", vars.join(" "))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

fn overflow(m: &RealizedModule, step: &str, degree: i32) -> Error {
    Error::ValidityOverflow { step: step.into(), degree: degree as i64, valid_hi: m.valid_hi() as i64 }
}

/// `Sq^k z` by the Cartan formula.
pub fn sq_on_laurent(m: &RealizedModule, k: u32, z: &LaurentElement) -> Result<LaurentElement> {
    let mut out = LaurentElement::zero(z.nvars);
    let unstable = !m.bounded() && m.is_unstable();
    for t in &z.terms {
        for kx in 0..=k {
            let xd = t.x_deg + kx as i32;
            if !m.bounded() && xd > m.valid_hi() && !(unstable && kx as i32 > t.x_deg) {
                return Err(overflow(m, "sq_on_laurent", xd));
            }
            let img = m.act(kx, t.x_deg, &BitVec::unit(m.dim(t.x_deg), t.x));
            if img.is_zero() {
                continue;
            }
            let mut cur = t.exps.clone();
            distribute(&t.exps, 0, k - kx, &mut cur, &mut |e| {
                for x in img.iter_ones() {
                    out.toggle(LaurentTerm { exps: e.to_vec(), x_deg: xd, x });
                }
            });
        }
    }
    Ok(out)
}

fn distribute(e: &[i32], i: usize, k: u32, cur: &mut Vec<i32>, f: &mut impl FnMut(&[i32])) {
    if i == e.len() {
        if k == 0 {
            f(cur);
        }
        return;
    }
    for ki in 0..=k {
        if binom_mod2(e[i] as i64, ki as i64) {
            cur[i] = e[i] + ki as i32;
            distribute(e, i + 1, k - ki, cur, f);
        }
    }
    cur[i] = e[i];
}

/// `St_1(x) = Σ_i u^{|x|-i} ⊗ Sq^i x`. The sum is finite when `M` is
/// bounded, or unstable and valid through `2|x|`.
pub fn st1(m: &RealizedModule, x_deg: i32, x: usize) -> Result<LaurentElement> {
    st1_element(m, &LaurentElement::basis(x_deg, x))
}

/// `St_1` of an element with non-negative exponents; the new variable
/// becomes `u_1` and the existing ones shift up.
pub fn st1_element(m: &RealizedModule, z: &LaurentElement) -> Result<LaurentElement> {
    let d = z.degree().ok_or_else(|| Error::Invalid("St_1 needs a homogeneous element".into()))?;
    if z.terms.iter().any(|t| t.exps.iter().any(|&e| e < 0)) {
        return Err(Error::Invalid("St_1 is only summed here on polynomial elements".into()));
    }
    let top = if m.bounded() {
        m.hi() - z.terms.iter().map(|t| t.x_deg).min().unwrap_or(0) + z.terms.iter().map(|t| t.exps.iter().sum::<i32>()).max().unwrap_or(0)
    } else if m.is_unstable() {
        let need = z.terms.iter().map(|t| 2 * t.x_deg).max().unwrap_or(0);
        if need > m.valid_hi() {
            return Err(overflow(m, "st1", need));
        }
        d
    } else {
        return Err(overflow(m, "st1", m.valid_hi() + 1));
    };
    let mut out = LaurentElement::zero(z.nvars + 1);
    for i in 0..=top.max(0) as u32 {
        let s = sq_on_laurent(m, i, z)?;
        out.add_assign(&s.prepend_var(d - i as i32));
    }
    Ok(out)
}

/// Coefficient of `u_{var+1}^{-1}`, with that variable removed.
pub fn residue(z: &LaurentElement, var: usize) -> LaurentElement {
    let mut out = LaurentElement::zero(z.nvars - 1);
    for t in z.terms.iter().filter(|t| t.exps[var] == -1) {
        let mut exps = t.exps.clone();
        exps.remove(var);
        out.toggle(LaurentTerm { exps, ..t.clone() });
    }
    out
}

impl fmt::Display for LaurentTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} | x{}_{}", self.exps, self.x_deg, self.x)
    }
}
