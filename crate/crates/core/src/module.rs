//! Finite windows of graded modules over the Steenrod algebra.
//!
//! A [`RealizedModule`] stores a basis in every degree of a window `[lo, hi]`
//! and the matrix of every `Sq^i` between degrees of the window. It is read as
//! the finite module `M / M^{>hi}`: operations landing above `hi` are zero.
//! `valid_hi ≤ hi` records how far this finite model agrees with the module it
//! approximates, and `bounded` records that the approximated module itself
//! vanishes above `hi`, so the model is the module.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gf2::{BitVec, Matrix, Subspace};
use crate::steenrod::{binom_mod2, conjugate_sq, SteenrodElement};

/// Degree-wise linear maps; `map[&d]` has one row per source basis vector.
pub type GradedMap = BTreeMap<i32, Matrix>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DegreeWindow {
    pub lo: i32,
    pub hi: i32,
    pub valid_hi: i32,
}

impl DegreeWindow {
    pub fn new(lo: i32, hi: i32) -> Self {
        DegreeWindow { lo, hi, valid_hi: hi }
    }

    pub fn contains(&self, d: i32) -> bool {
        self.lo <= d && d <= self.hi
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Connectivity {
    /// Lowest nonzero degree minus one.
    Exactly(i32),
    /// Zero throughout the valid range ending at the given degree.
    AtLeast(i32),
    Infinite,
}

impl Connectivity {
    /// A lower bound usable in inequalities.
    pub fn lower_bound(&self) -> i64 {
        match *self {
            Connectivity::Exactly(c) | Connectivity::AtLeast(c) => c as i64,
            Connectivity::Infinite => i64::MAX / 4,
        }
    }
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Connectivity::Exactly(c) => write!(f, "{c}"),
            Connectivity::AtLeast(c) => write!(f, ">= {c}"),
            Connectivity::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RealizedModule {
    name: String,
    window: DegreeWindow,
    bounded: bool,
    labels: Vec<Vec<String>>,
    /// `action[d - lo][i - 1]` is `Sq^i : M^d → M^{d+i}` for `d + i ≤ hi`.
    action: Vec<Vec<Matrix>>,
    unstable_declared: bool,
}

impl RealizedModule {
    /// Builds a module from labels and a rule giving `Sq^i` of basis vector
    /// `k` in degree `d`, for `1 ≤ i` and `d + i ≤ hi`.
    pub fn from_fn(
        name: impl Into<String>,
        window: DegreeWindow,
        bounded: bool,
        labels: Vec<Vec<String>>,
        mut sq: impl FnMut(u32, i32, usize) -> BitVec,
    ) -> Self {
        let span = (window.hi - window.lo + 1).max(0) as usize;
        assert_eq!(labels.len(), span, "one label list per degree of the window");
        let mut action = Vec::with_capacity(span);
        for d in window.degrees() {
            let src = labels[(d - window.lo) as usize].len();
            let mut row = Vec::new();
            for i in 1..=(window.hi - d) as u32 {
                let tgt = labels[(d + i as i32 - window.lo) as usize].len();
                let rows = (0..src).map(|k| sq(i, d, k)).collect::<Vec<_>>();
                row.push(Matrix::from_rows(tgt, rows));
            }
            action.push(row);
        }
        RealizedModule { name: name.into(), window, bounded, labels, action, unstable_declared: false }
    }

    pub fn from_matrices(
        name: impl Into<String>,
        window: DegreeWindow,
        bounded: bool,
        labels: Vec<Vec<String>>,
        action: Vec<Vec<Matrix>>,
    ) -> Self {
        RealizedModule { name: name.into(), window, bounded, labels, action, unstable_declared: false }
    }

    pub fn zero_module(name: impl Into<String>, lo: i32) -> Self {
        Self::from_matrices(name, DegreeWindow::new(lo, lo - 1), true, Vec::new(), Vec::new())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn window(&self) -> DegreeWindow {
        self.window
    }

    pub fn lo(&self) -> i32 {
        self.window.lo
    }

    pub fn hi(&self) -> i32 {
        self.window.hi
    }

    pub fn valid_hi(&self) -> i32 {
        self.window.valid_hi
    }

    pub fn bounded(&self) -> bool {
        self.bounded
    }

    pub fn set_valid_hi(&mut self, v: i32) {
        self.window.valid_hi = v.min(self.window.hi);
    }

    pub fn set_bounded(&mut self, b: bool) {
        self.bounded = b;
    }

    pub fn unstable_declared(&self) -> bool {
        self.unstable_declared
    }

    pub fn declare_unstable(&mut self, v: bool) {
        self.unstable_declared = v;
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.window.degrees()
    }

    pub fn dim(&self, d: i32) -> usize {
        if self.window.contains(d) {
            self.labels[(d - self.window.lo) as usize].len()
        } else {
            0
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees().map(|d| self.dim(d)).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.labels.iter().map(Vec::len).sum()
    }

    pub fn labels(&self, d: i32) -> &[String] {
        if self.window.contains(d) {
            &self.labels[(d - self.window.lo) as usize]
        } else {
            &[]
        }
    }

    /// `Sq^i : M^d → M^{d+i}`; zero when either degree leaves the window.
    pub fn sq(&self, i: u32, d: i32) -> Matrix {
        let t = d + i as i32;
        if i == 0 {
            return Matrix::identity(self.dim(d));
        }
        if !self.window.contains(d) || !self.window.contains(t) {
            return Matrix::zero(self.dim(d), self.dim(t));
        }
        self.action[(d - self.window.lo) as usize][i as usize - 1].clone()
    }

    pub fn sq_ref(&self, i: u32, d: i32) -> Option<&Matrix> {
        let t = d + i as i32;
        if i == 0 || !self.window.contains(d) || !self.window.contains(t) {
            return None;
        }
        Some(&self.action[(d - self.window.lo) as usize][i as usize - 1])
    }

    pub fn act(&self, i: u32, d: i32, v: &BitVec) -> BitVec {
        match (i, self.sq_ref(i, d)) {
            (0, _) => v.clone(),
            (_, Some(m)) => m.apply(v),
            (_, None) => BitVec::zeros(self.dim(d + i as i32)),
        }
    }

    /// `Sq^{w_1} ⋯ Sq^{w_k} v`.
    pub fn act_word(&self, word: &[u32], d: i32, v: &BitVec) -> BitVec {
        let mut cur = v.clone();
        let mut deg = d;
        for &a in word.iter().rev() {
            cur = self.act(a, deg, &cur);
            deg += a as i32;
        }
        cur
    }

    /// `θ v` for homogeneous `θ`.
    pub fn act_element(&self, theta: &SteenrodElement, d: i32, v: &BitVec) -> BitVec {
        let k = theta.degree().unwrap_or(0) as i32;
        let mut out = BitVec::zeros(self.dim(d + k));
        for m in theta.terms() {
            out.xor_assign(&self.act_word(&m.0, d, v));
        }
        out
    }

    /// Matrix of `θ : M^d → M^{d+|θ|}`.
    pub fn element_matrix(&self, theta: &SteenrodElement, d: i32) -> Matrix {
        let k = theta.degree().unwrap_or(0) as i32;
        let rows = (0..self.dim(d)).map(|j| self.act_element(theta, d, &BitVec::unit(self.dim(d), j))).collect();
        Matrix::from_rows(self.dim(d + k), rows)
    }

    /// Checks every Adem relation `Sq^a Sq^b` with `a < 2b` on every basis
    /// vector, within the window.
    pub fn check_adem(&self) -> Result<()> {
        for d in self.degrees() {
            for b in 1..=(self.hi() - d) as u32 {
                for a in 1..2 * b {
                    if d + (a + b) as i32 > self.hi() {
                        break;
                    }
                    let lhs = self.sq(b, d).then(&self.sq(a, d + b as i32));
                    let mut rhs = Matrix::zero(self.dim(d), self.dim(d + (a + b) as i32));
                    for j in 0..=a / 2 {
                        if binom_mod2((b - j - 1) as i64, (a - 2 * j) as i64) {
                            let t = self.sq(j, d).then(&self.sq(a + b - j, d + j as i32));
                            rhs = rhs.add(&t);
                        }
                    }
                    if lhs != rhs {
                        return Err(Error::Invalid(format!(
                            "{}: Adem relation Sq{a} Sq{b} fails in degree {d}",
                            self.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `Sq^i x = 0` whenever `i > |x|`, within the window.
    pub fn is_unstable(&self) -> bool {
        self.degrees().filter(|&d| d < 0).all(|d| self.dim(d) == 0)
            && self.degrees().all(|d| ((d.max(0) + 1) as u32..=(self.hi() - d).max(0) as u32).all(|i| i == 0 || self.sq(i, d).is_zero()))
    }

    pub fn connectivity(&self) -> Connectivity {
        match self.degrees().find(|&d| self.dim(d) > 0) {
            Some(d) if d <= self.valid_hi() || self.bounded => Connectivity::Exactly(d - 1),
            _ if self.bounded => Connectivity::Infinite,
            _ => Connectivity::AtLeast(self.valid_hi()),
        }
    }

    /// Highest degree carrying a nonzero basis vector.
    pub fn top_degree(&self) -> Option<i32> {
        self.degrees().rev().find(|&d| self.dim(d) > 0)
    }

    /// SHA-256 over the dimensions and action matrices.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{} {} {}\n", self.window.lo, self.window.hi, self.bounded));
        for d in self.degrees() {
            h.update(format!("{d}:{}\n", self.dim(d)));
        }
        for (k, row) in self.action.iter().enumerate() {
            for (i, m) in row.iter().enumerate() {
                h.update(format!("{k}/{i}:"));
                for r in m.rows() {
                    h.update(r.to_hex());
                    h.update(",");
                }
            }
        }
        hex::encode(h.finalize())
    }

    /// Human-readable `Sq^i` table: one line per nonzero action on a basis vector.
    pub fn describe(&self) -> String {
        let mut s = format!("module {} window [{}, {}] valid through {}{}\n", self.name, self.lo(), self.hi(), self.valid_hi(), if self.bounded { " (bounded)" } else { "" });
        for d in self.degrees() {
            if self.dim(d) == 0 {
                continue;
            }
            s.push_str(&format!("degree {d}: {}\n", self.labels(d).join(", ")));
        }
        for d in self.degrees() {
            for (k, lab) in self.labels(d).iter().enumerate() {
                for i in 1..=(self.hi() - d).max(0) as u32 {
                    let img = self.act(i, d, &BitVec::unit(self.dim(d), k));
                    if !img.is_zero() {
                        s.push_str(&format!("  Sq{i} {lab} = {}\n", self.format_vector(d + i as i32, &img)));
                    }
                }
            }
        }
        s
    }

    pub fn format_vector(&self, d: i32, v: &BitVec) -> String {
        if v.is_zero() {
            return "0".into();
        }
        let labels = self.labels(d);
        v.iter_ones().map(|k| labels[k].clone()).collect::<Vec<_>>().join(" + ")
    }
}

/// Quotient by degree-wise subspaces that are assumed closed under the
/// action. Returns the quotient and the projection.
pub fn quotient(m: &RealizedModule, sub: &BTreeMap<i32, Subspace>, name: impl Into<String>) -> (RealizedModule, GradedMap) {
    let w = m.window();
    let empty = |d: i32| Subspace::zero(m.dim(d));
    let subs: BTreeMap<i32, Subspace> = w.degrees().map(|d| (d, sub.get(&d).cloned().unwrap_or_else(|| empty(d)))).collect();
    let comps: BTreeMap<i32, Vec<usize>> = subs.iter().map(|(&d, s)| (d, s.complement())).collect();
    let labels = w.degrees().map(|d| comps[&d].iter().map(|&k| m.labels(d)[k].clone()).collect()).collect();
    let q = RealizedModule::from_fn(name, w, m.bounded(), labels, |i, d, k| {
        let t = d + i as i32;
        let v = m.act(i, d, &BitVec::unit(m.dim(d), comps[&d][k]));
        subs[&t].quotient_coords(&v, &comps[&t])
    });
    let proj = w
        .degrees()
        .map(|d| {
            let rows = (0..m.dim(d)).map(|k| subs[&d].quotient_coords(&BitVec::unit(m.dim(d), k), &comps[&d])).collect();
            (d, Matrix::from_rows(comps[&d].len(), rows))
        })
        .collect();
    let mut q = q;
    q.declare_unstable(m.unstable_declared());
    q.window = m.window;
    (q, proj)
}

/// Submodule on degree-wise subspaces; fails if they are not closed under
/// the action. Returns the submodule and the inclusion.
pub fn submodule(m: &RealizedModule, sub: &BTreeMap<i32, Subspace>, name: impl Into<String>) -> Result<(RealizedModule, GradedMap)> {
    let w = m.window();
    let subs: BTreeMap<i32, Subspace> = w.degrees().map(|d| (d, sub.get(&d).cloned().unwrap_or_else(|| Subspace::zero(m.dim(d))))).collect();
    let labels: Vec<Vec<String>> = w
        .degrees()
        .map(|d| subs[&d].basis().iter().map(|v| m.format_vector(d, v)).collect())
        .collect();
    let mut failure = None;
    let s = RealizedModule::from_fn(name, w, m.bounded(), labels, |i, d, k| {
        let t = d + i as i32;
        let v = m.act(i, d, &subs[&d].basis()[k]);
        match subs[&t].coordinates(&v) {
            Some(c) => c,
            None => {
                failure.get_or_insert((i, d));
                BitVec::zeros(subs[&t].dim())
            }
        }
    });
    if let Some((i, d)) = failure {
        return Err(Error::Membership(format!("subspace of {} is not closed under Sq{i} in degree {d}", m.name())));
    }
    let incl = w.degrees().map(|d| (d, Matrix::from_rows(m.dim(d), subs[&d].basis().to_vec()))).collect();
    Ok((s, incl))
}

/// Subquotient `Z / B` with `B ⊂ Z` degree-wise, both closed under the action.
pub fn subquotient(
    m: &RealizedModule,
    z: &BTreeMap<i32, Subspace>,
    b: &BTreeMap<i32, Subspace>,
    name: impl Into<String>,
) -> Result<RealizedModule> {
    let name = name.into();
    let (zm, incl) = submodule(m, z, format!("{name}.cycles"))?;
    let bz: BTreeMap<i32, Subspace> = zm
        .degrees()
        .map(|d| {
            let zs = &z[&d];
            let vs = b.get(&d).map(|s| s.basis().to_vec()).unwrap_or_default();
            let coords = vs.iter().map(|v| zs.coordinates(v).expect("boundaries lie in cycles"));
            (d, Subspace::spanned_by(zm.dim(d), coords))
        })
        .collect();
    let _ = incl;
    Ok(quotient(&zm, &bz, name).0)
}

pub fn suspend(m: &RealizedModule, n: i32) -> RealizedModule {
    let w = m.window();
    let window = DegreeWindow { lo: w.lo + n, hi: w.hi + n, valid_hi: w.valid_hi + n };
    let prefix = match n {
        0 => String::new(),
        1 => "σ".to_string(),
        _ => format!("σ^{n} "),
    };
    let labels = w.degrees().map(|d| m.labels(d).iter().map(|l| format!("{prefix}{l}")).collect()).collect();
    let action = w.degrees().map(|d| (1..=(w.hi - d) as u32).map(|i| m.sq(i, d)).collect()).collect();
    let name = if n == 0 { m.name().to_string() } else { format!("Σ^{n} {}", m.name()) };
    let mut s = RealizedModule::from_matrices(name, window, m.bounded(), labels, action);
    s.declare_unstable(m.unstable_declared() && n >= 0);
    s
}

/// `M ⊗ N` with the Cartan diagonal.
pub fn tensor(m: &RealizedModule, n: &RealizedModule) -> RealizedModule {
    let lo = m.lo() + n.lo();
    let (hi, valid_hi, bounded) = match (m.bounded(), n.bounded()) {
        (true, true) => (m.hi() + n.hi(), m.hi() + n.hi(), true),
        _ => {
            let hi = if m.bounded() {
                (m.hi() + n.hi()).min(m.lo() + n.hi())
            } else if n.bounded() {
                (m.hi() + n.lo()).min(m.hi() + n.hi())
            } else {
                (m.hi() + n.lo()).min(m.lo() + n.hi())
            };
            let vm = if m.bounded() { i32::MAX / 4 } else { m.valid_hi() + n.lo() };
            let vn = if n.bounded() { i32::MAX / 4 } else { n.valid_hi() + m.lo() };
            (hi, vm.min(vn).min(hi), false)
        }
    };
    // degree d: blocks (a, d - a) for a ascending
    let blocks = |d: i32| -> Vec<(i32, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for a in m.degrees() {
            let b = d - a;
            let sz = m.dim(a) * n.dim(b);
            if sz > 0 {
                out.push((a, off));
                off += sz;
            }
        }
        out
    };
    let window = DegreeWindow { lo, hi, valid_hi };
    let labels: Vec<Vec<String>> = window
        .degrees()
        .map(|d| {
            let mut l = Vec::new();
            for (a, _) in blocks(d) {
                for x in m.labels(a) {
                    for y in n.labels(d - a) {
                        l.push(format!("{x}⊗{y}"));
                    }
                }
            }
            l
        })
        .collect();
    let dims: Vec<usize> = labels.iter().map(Vec::len).collect();
    let dim_at = |d: i32| dims.get((d - lo) as usize).copied().unwrap_or(0);
    let mut out = RealizedModule::from_fn(format!("{}⊗{}", m.name(), n.name()), window, bounded, labels, |i, d, k| {
        let t = d + i as i32;
        let mut v = BitVec::zeros(dim_at(t));
        let bl = blocks(d);
        let (a, off) = *bl.iter().rev().find(|(_, o)| *o <= k).expect("block");
        let k = k - off;
        let nb = n.dim(d - a);
        let (x, y) = (k / nb, k % nb);
        let tb = blocks(t);
        for j in 0..=i {
            let xa = m.act(j, a, &BitVec::unit(m.dim(a), x));
            if xa.is_zero() {
                continue;
            }
            let yb = n.act(i - j, d - a, &BitVec::unit(nb, y));
            if yb.is_zero() {
                continue;
            }
            let a2 = a + j as i32;
            let Some(&(_, toff)) = tb.iter().find(|(aa, _)| *aa == a2) else { continue };
            let nb2 = n.dim(t - a2);
            for p in xa.iter_ones() {
                for q in yb.iter_ones() {
                    v.flip(toff + p * nb2 + q);
                }
            }
        }
        v
    });
    out.declare_unstable(m.unstable_declared() && n.unstable_declared());
    out
}

/// The Frobenius double `ΦM`: `(ΦM)^{2d} = M^d`, `Sq^{2i} Φx = Φ Sq^i x`,
/// odd squares act trivially.
pub fn phi(m: &RealizedModule) -> RealizedModule {
    let w = m.window();
    let window = DegreeWindow { lo: 2 * w.lo, hi: 2 * w.hi + 1, valid_hi: 2 * w.valid_hi + 1 };
    let labels = window
        .degrees()
        .map(|e| if e % 2 == 0 { m.labels(e / 2).iter().map(|l| format!("Φ{l}")).collect() } else { Vec::new() })
        .collect();
    let mut p = RealizedModule::from_fn(format!("Φ{}", m.name()), window, m.bounded(), labels, |i, e, k| {
        let t = e + i as i32;
        if e % 2 != 0 || i % 2 != 0 {
            return BitVec::zeros(if t % 2 == 0 { m.dim(t / 2) } else { 0 });
        }
        m.act(i / 2, e / 2, &BitVec::unit(m.dim(e / 2), k))
    });
    p.declare_unstable(m.unstable_declared());
    p
}

/// `λ : ΦM → M`, `Φx ↦ Sq^{|x|} x`, in degrees `2k ≤ hi`, and in every
/// degree when `M` is bounded.
pub fn lambda_map(m: &RealizedModule) -> Result<GradedMap> {
    if !m.is_unstable() {
        return Err(Error::NotUnstable(format!("{} has no λ", m.name())));
    }
    let mut out = GradedMap::new();
    for k in m.degrees() {
        let e = 2 * k;
        if e > m.hi() && !m.bounded() {
            break;
        }
        let mat = if k >= 0 { m.sq(k as u32, k) } else { Matrix::zero(m.dim(k), m.dim(e)) };
        out.insert(e, mat);
    }
    Ok(out)
}

/// Linear dual with `(Sq^i f)(x) = f(χ(Sq^i) x)`; degrees are negated.
pub fn dualize(m: &RealizedModule) -> Result<RealizedModule> {
    if !m.bounded() {
        return Err(Error::InfiniteSupport(format!("{} is not known to vanish above degree {}", m.name(), m.hi())));
    }
    let window = DegreeWindow::new(-m.hi(), -m.lo());
    let labels = window.degrees().map(|e| m.labels(-e).iter().map(|l| format!("{l}*")).collect()).collect();
    let chi: Vec<SteenrodElement> = (0..=(m.hi() - m.lo()).max(0) as u32).map(conjugate_sq).collect();
    let mut cache: BTreeMap<(u32, i32), Matrix> = BTreeMap::new();
    let d = RealizedModule::from_fn(format!("D{}", m.name()), window, true, labels, |i, e, k| {
        // degree e of the dual is (M^{-e})^*; the target degree e+i is (M^{-e-i})^*
        let src = -e - i as i32;
        let mat = cache.entry((i, src)).or_insert_with(|| m.element_matrix(&chi[i as usize], src).transpose());
        mat.row(k).clone()
    });
    Ok(d)
}

/// The submodule `M^{>c}`.
pub fn truncate_above(m: &RealizedModule, c: i32) -> RealizedModule {
    let sub = m
        .degrees()
        .filter(|&d| d > c)
        .map(|d| (d, Subspace::full(m.dim(d))))
        .collect();
    let (s, _) = submodule(m, &sub, format!("{}^>{c}", m.name())).expect("degree truncation is a submodule");
    let mut s = relabel_like(s, m);
    s.declare_unstable(m.unstable_declared());
    s
}

/// The quotient `M / M^{>c}`, which vanishes above `c`.
pub fn truncate_below(m: &RealizedModule, c: i32) -> RealizedModule {
    let hi = c.min(m.hi());
    let window = DegreeWindow { lo: m.lo(), hi: hi.max(m.lo() - 1), valid_hi: m.valid_hi().min(hi).max(m.lo() - 1) };
    let labels = window.degrees().map(|d| m.labels(d).to_vec()).collect();
    let action = window.degrees().map(|d| (1..=(window.hi - d) as u32).map(|i| m.sq(i, d)).collect()).collect();
    let bounded = m.valid_hi() >= c || m.bounded();
    let mut t = RealizedModule::from_matrices(format!("{}^≤{c}", m.name()), window, bounded, labels, action);
    if bounded {
        t.window.valid_hi = t.window.hi;
    }
    t.declare_unstable(m.unstable_declared());
    t
}

fn relabel_like(mut s: RealizedModule, m: &RealizedModule) -> RealizedModule {
    for d in s.degrees() {
        if s.dim(d) == m.dim(d) {
            let k = (d - s.lo()) as usize;
            s.labels[k] = m.labels(d).to_vec();
        }
    }
    s
}

/// Restricts the window to `[lo, hi]` without changing the module.
pub fn restrict_window(m: &RealizedModule, lo: i32, hi: i32) -> RealizedModule {
    let lo = lo.min(m.lo());
    let hi = hi.min(m.hi());
    let window = DegreeWindow { lo, hi, valid_hi: m.valid_hi().min(hi) };
    let labels = window.degrees().map(|d| m.labels(d).to_vec()).collect();
    let action = window.degrees().map(|d| (1..=(hi - d) as u32).map(|i| m.sq(i, d)).collect()).collect();
    let mut r = RealizedModule::from_matrices(m.name(), window, m.bounded() && m.top_degree().is_none_or(|t| t <= hi), labels, action);
    r.declare_unstable(m.unstable_declared());
    r
}

/// Extends the window upward by zeros; only meaningful for bounded modules.
pub fn extend_window(m: &RealizedModule, hi: i32) -> RealizedModule {
    if hi <= m.hi() {
        return m.clone();
    }
    let window = DegreeWindow { lo: m.lo(), hi, valid_hi: if m.bounded() { hi } else { m.valid_hi() } };
    let labels = window.degrees().map(|d| m.labels(d).to_vec()).collect();
    let action = window.degrees().map(|d| (1..=(hi - d) as u32).map(|i| m.sq(i, d)).collect()).collect();
    let mut r = RealizedModule::from_matrices(m.name(), window, m.bounded(), labels, action);
    r.declare_unstable(m.unstable_declared());
    r
}

/// Checks that `f : M → N` commutes with every `Sq^i` inside both windows.
pub fn is_module_map(m: &RealizedModule, n: &RealizedModule, f: &GradedMap) -> bool {
    let get = |d: i32| f.get(&d).cloned().unwrap_or_else(|| Matrix::zero(m.dim(d), n.dim(d)));
    for d in m.degrees() {
        for i in 1..=(m.hi() - d).max(0) as u32 {
            let t = d + i as i32;
            if t > n.hi() {
                break;
            }
            if m.sq(i, d).then(&get(t)) != get(d).then(&n.sq(i, d)) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn phi_doubles_and_lambda_squares() {
        let fu = library::fu(8);
        let p = phi(&fu);
        assert_eq!(p.dim(6), 1);
        assert_eq!(p.dim(7), 0);
        // Sq^2 Φu = Φ u^2, Sq^1 Φu = 0
        assert_eq!(p.sq(2, 2).rows()[0].count_ones(), 1);
        assert!(p.sq(1, 2).is_zero());
        let lam = lambda_map(&fu).unwrap();
        assert!(lam[&6].get(0, 0)); // Sq^3 u^3 = u^6
        assert_eq!(p.connectivity(), Connectivity::Exactly(-1));
        p.check_adem().unwrap();
    }

    #[test]
    fn tensor_of_points_and_cartan() {
        let fu = library::fu(10);
        let t = tensor(&fu, &fu);
        assert_eq!(t.hi(), 10);
        assert_eq!(t.dim(3), 4);
        t.check_adem().unwrap();
        assert!(t.is_unstable());
        let f = library::f();
        let ff = tensor(&f, &library::sigma_f(2));
        assert_eq!((ff.lo(), ff.hi(), ff.dim(2)), (2, 2, 1));
    }

    #[test]
    fn dual_of_truncated_polynomial() {
        let t = truncate_below(&library::fu(12), 2);
        assert!(t.bounded());
        let d = dualize(&t).unwrap();
        assert_eq!((d.lo(), d.hi()), (-2, 0));
        // Sq^1 (u^2)^* = (u)^* since χ(Sq^1) = Sq^1 and Sq^1 u = u^2
        assert!(d.sq(1, -2).get(0, 0));
        d.check_adem().unwrap();
        assert!(dualize(&library::fu(6)).is_err());
    }

    #[test]
    fn truncations() {
        let fu = library::fu(10);
        assert_eq!(truncate_above(&fu, -1).dims(), fu.dims());
        let b = truncate_below(&fu, 0);
        assert_eq!((b.total_dim(), b.bounded()), (1, true));
        assert_eq!(truncate_above(&fu, 3).connectivity(), Connectivity::Exactly(3));
        assert_eq!(library::f().connectivity(), Connectivity::Exactly(-1));
        assert_eq!(library::sigma_f(3).connectivity(), Connectivity::Exactly(2));
    }
}
