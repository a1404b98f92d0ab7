//! Sparse polynomials over F_2 in finitely many degree-one generators
//! `u_1, …, u_n`, with the Steenrod action given by the Cartan formula and
//! `Sq^k(u^e) = C(e, k) u^{e+k}`.

use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    nvars: usize,
    terms: BTreeSet<Vec<u32>>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeSet::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars])
    }

    pub fn monomial(exps: Vec<u32>) -> Self {
        let mut terms = BTreeSet::new();
        let nvars = exps.len();
        terms.insert(exps);
        Poly { nvars, terms }
    }

    /// `u_{i+1}` in zero-based indexing.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.iter().map(|e| e.iter().sum::<u32>());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn toggle(&mut self, e: Vec<u32>) {
        debug_assert_eq!(e.len(), self.nvars);
        if !self.terms.remove(&e) {
            self.terms.insert(e);
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for e in &other.terms {
            self.toggle(e.clone());
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        p.add_assign(other);
        p
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            k >>= 1;
        }
        acc
    }

    /// Frobenius: squaring is additive in characteristic two.
    pub fn square(&self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|e| e.iter().map(|x| 2 * x).collect()).collect() }
    }

    /// Ring homomorphism `u_i ↦ images[i]`.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let n = images.first().map_or(0, Poly::nvars);
        let mut out = Poly::zero(n);
        for e in &self.terms {
            let mut m = Poly::one(n);
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    m = m.mul(&img.pow(k));
                }
            }
            out.add_assign(&m);
        }
        out
    }

    pub fn sq(&self, k: u32) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for e in &self.terms {
            let mut cur = e.clone();
            sq_monomial(e, 0, k, &mut cur, &mut out);
        }
        out
    }

    pub fn sq_word(&self, word: &[u32]) -> Poly {
        word.iter().rev().fold(self.clone(), |p, &a| p.sq(a))
    }
}

fn sq_monomial(e: &[u32], i: usize, k: u32, cur: &mut Vec<u32>, out: &mut Poly) {
    if i == e.len() {
        if k == 0 {
            out.toggle(cur.clone());
        }
        return;
    }
    let rest_max: u32 = e[i + 1..].iter().sum();
    // k_i ranges over the binary submasks of e_i that leave a feasible remainder
    let ei = e[i];
    let mut sub = ei;
    loop {
        if sub <= k && k - sub <= rest_max {
            cur[i] = ei + sub;
            sq_monomial(e, i + 1, k - sub, cur, out);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & ei;
    }
    cur[i] = ei;
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (t, e) in self.terms.iter().rev().enumerate() {
            if t > 0 {
                write!(f, " + ")?;
            }
            let mut first = true;
            for (i, &k) in e.iter().enumerate().filter(|(_, k)| **k > 0) {
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                match k {
                    1 => write!(f, "u{}", i + 1)?,
                    _ => write!(f, "u{}^{k}", i + 1)?,
                }
            }
            if first {
                write!(f, "1")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartan_on_products() {
        let u = Poly::var(2, 0);
        let v = Poly::var(2, 1);
        let uv = u.mul(&v);
        assert_eq!(uv.sq(1), u.square().mul(&v).add(&u.mul(&v.square())));
        assert_eq!(uv.sq(2), uv.square());
        assert!(uv.sq(3).is_zero());
        assert_eq!(u.pow(3).sq(2), Poly::monomial(vec![5, 0]));
    }

    #[test]
    fn adem_on_one_variable() {
        let u = Poly::var(1, 0);
        for e in 0..12 {
            let p = u.pow(e);
            assert_eq!(p.sq_word(&[2, 2]), p.sq_word(&[3, 1]));
            assert!(p.sq_word(&[1, 1]).is_zero());
        }
    }
}
