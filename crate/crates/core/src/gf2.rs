//! Dense linear algebra over the field with two elements.
//!
//! Matrices follow the row convention used throughout the crate: row `i` of a
//! matrix is the image of source basis vector `i`, and vectors act on the
//! left (`v · A`). Composition `a.then(&b)` is "first `a`, then `b`".

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    /// Bits at the given positions, in order.
    pub fn select(&self, positions: &[usize]) -> BitVec {
        BitVec::from_indices(positions.len(), positions.iter().enumerate().filter(|(_, p)| self.get(**p)).map(|(i, _)| i))
    }

    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(self.words.len() * 16);
        for w in &self.words {
            s.push_str(&format!("{w:016x}"));
        }
        s
    }

    pub fn from_hex(len: usize, s: &str) -> Option<Self> {
        let n = len.div_ceil(64);
        if s.len() != n * 16 {
            return None;
        }
        let mut words = Vec::with_capacity(n);
        for k in 0..n {
            words.push(u64::from_str_radix(&s[16 * k..16 * k + 16], 16).ok()?);
        }
        let v = BitVec { len, words };
        // stray bits beyond `len` are rejected
        if !len.is_multiple_of(64) && n > 0 && v.words[n - 1] >> (len % 64) != 0 {
            return None;
        }
        Some(v)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl Matrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        Matrix { cols: ncols, rows: vec![BitVec::zeros(ncols); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix { cols: n, rows: (0..n).map(|i| BitVec::unit(n, i)).collect() }
    }

    pub fn from_rows(ncols: usize, rows: Vec<BitVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "row length mismatch");
        Matrix { cols: ncols, rows }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn row_mut(&mut self, i: usize) -> &mut BitVec {
        &mut self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    /// `v · A`.
    pub fn apply(&self, v: &BitVec) -> BitVec {
        debug_assert_eq!(v.len(), self.nrows());
        let mut out = BitVec::zeros(self.cols);
        for i in v.iter_ones() {
            out.xor_assign(&self.rows[i]);
        }
        out
    }

    /// First `self`, then `next`.
    pub fn then(&self, next: &Matrix) -> Matrix {
        assert_eq!(self.cols, next.nrows(), "composition shape mismatch");
        Matrix { cols: next.cols, rows: self.rows.iter().map(|r| next.apply(r)).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.nrows(), self.cols), (other.nrows(), other.cols));
        let mut m = self.clone();
        for (a, b) in m.rows.iter_mut().zip(&other.rows) {
            a.xor_assign(b);
        }
        m
    }

    pub fn rank(&self) -> usize {
        Subspace::spanned_by(self.cols, self.rows.iter().cloned()).dim()
    }

    /// Image of `v ↦ v · A` as a subspace of the target.
    pub fn image(&self) -> Subspace {
        Subspace::spanned_by(self.cols, self.rows.iter().cloned())
    }

    /// Basis of `{v : v · A = 0}`, reduced so the pivots are in increasing order.
    pub fn kernel(&self) -> Subspace {
        let e = Echelon::new(self);
        Subspace::spanned_by(self.nrows(), e.kernel)
    }

    /// Some `v` with `v · A = w`, if one exists.
    pub fn preimage(&self, w: &BitVec) -> Option<BitVec> {
        Echelon::new(self).solve(w)
    }
}

/// Row-reduced echelon form of a matrix's row space, remembering how each
/// reduced row is combined from the original rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    nrows: usize,
    pivots: Vec<usize>,
    reduced: Vec<BitVec>,
    combos: Vec<BitVec>,
    /// Vectors `v` with `v · A = 0`.
    pub kernel: Vec<BitVec>,
}

impl Echelon {
    pub fn new(a: &Matrix) -> Self {
        let n = a.nrows();
        let mut e = Echelon { nrows: n, pivots: Vec::new(), reduced: Vec::new(), combos: Vec::new(), kernel: Vec::new() };
        for (i, r) in a.rows().iter().enumerate() {
            let mut r = r.clone();
            let mut c = BitVec::unit(n, i);
            for (k, &p) in e.pivots.iter().enumerate() {
                if r.get(p) {
                    r.xor_assign(&e.reduced[k]);
                    c.xor_assign(&e.combos[k]);
                }
            }
            match r.first_one() {
                None => e.kernel.push(c),
                Some(p) => {
                    for k in 0..e.reduced.len() {
                        if e.reduced[k].get(p) {
                            let (rk, ck) = (&mut e.reduced[k], &mut e.combos[k]);
                            rk.xor_assign(&r);
                            ck.xor_assign(&c);
                        }
                    }
                    e.pivots.push(p);
                    e.reduced.push(r);
                    e.combos.push(c);
                }
            }
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, w: &BitVec) -> Option<BitVec> {
        let mut r = w.clone();
        let mut c = BitVec::zeros(self.nrows);
        for (k, &p) in self.pivots.iter().enumerate() {
            if r.get(p) {
                r.xor_assign(&self.reduced[k]);
                c.xor_assign(&self.combos[k]);
            }
        }
        r.is_zero().then_some(c)
    }
}

/// A subspace held in reduced row echelon form. Pivots are the leading
/// (lowest-index) entries, so the complement basis prefers later labels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    pivots: Vec<usize>,
    rows: Vec<BitVec>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, pivots: Vec::new(), rows: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, pivots: (0..ambient).collect(), rows: (0..ambient).map(|i| BitVec::unit(ambient, i)).collect() }
    }

    pub fn spanned_by(ambient: usize, vs: impl IntoIterator<Item = BitVec>) -> Self {
        let mut s = Self::zero(ambient);
        for v in vs {
            s.insert(v);
        }
        s.sort();
        s
    }

    fn sort(&mut self) {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_by_key(|&k| self.pivots[k]);
        self.rows = idx.iter().map(|&k| self.rows[k].clone()).collect();
        self.pivots = idx.iter().map(|&k| self.pivots[k]).collect();
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut r = v.clone();
        for (k, &p) in self.pivots.iter().enumerate() {
            if r.get(p) {
                r.xor_assign(&self.rows[k]);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: BitVec) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        let r = self.reduce(&v);
        let Some(p) = r.first_one() else { return false };
        for row in self.rows.iter_mut() {
            if row.get(p) {
                row.xor_assign(&r);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, r);
        true
    }

    /// Coefficients of `v` in the echelon basis.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        let c = v.select(&self.pivots);
        let mut back = BitVec::zeros(self.ambient);
        for k in c.iter_ones() {
            back.xor_assign(&self.rows[k]);
        }
        (back == *v).then_some(c)
    }

    /// Non-pivot coordinates, which index a basis of the quotient.
    pub fn complement(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.ambient - self.dim());
        let mut it = self.pivots.iter().peekable();
        for i in 0..self.ambient {
            if it.peek() == Some(&&i) {
                it.next();
            } else {
                out.push(i);
            }
        }
        out
    }

    /// Image of `v` in the quotient, in the basis indexed by [`Self::complement`].
    pub fn quotient_coords(&self, v: &BitVec, complement: &[usize]) -> BitVec {
        self.reduce(v).select(complement)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // kernel of [self; other] -> ambient, projected onto the self part
        let mut m = Matrix::zero(0, self.ambient);
        for r in self.rows.iter().chain(other.rows.iter()) {
            m.rows.push(r.clone());
        }
        let e = Echelon::new(&m);
        let k = self.dim();
        let vs = e.kernel.iter().map(|c| {
            let mut v = BitVec::zeros(self.ambient);
            for i in c.iter_ones().filter(|&i| i < k) {
                v.xor_assign(&self.rows[i]);
            }
            v
        });
        Subspace::spanned_by(self.ambient, vs)
    }
}
