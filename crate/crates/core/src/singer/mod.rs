//! Singer functors `R_s`, their truncations `R_{s/t}`, and the residue
//! differentials between them.
//!
//! A [`SingerModule`] is realized inside the Mùi-coordinate ambient of
//! [`mui`]: degree by degree it is the span of `ω^e St_s(x)` over Dickson
//! monomials `ω^e` and basis elements `x`. For `R_s` this family is a basis
//! (the span is free over `D(s)`, checked by rank); for `R_{s/t}` the family is
//! projected into the box `a_j < t - j + 1` and a maximal independent subset is
//! kept.

pub mod dickson;
pub mod laurent;
pub mod mui;

use std::cell::Cell;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gf2::{BitVec, Echelon, Matrix, Subspace};
use crate::module::{phi, suspend, DegreeWindow, GradedMap, RealizedModule};

use mui::{MuiAmbient, MuiBasis, MuiElement};

struct Degree {
    ambient: Vec<MuiBasis>,
    index: HashMap<MuiBasis, usize>,
    /// Spanning elements kept as basis, in ambient coordinates.
    vectors: Vec<BitVec>,
    /// The Dickson exponent and generator behind each basis vector.
    gens: Vec<(Vec<u32>, i32, usize)>,
    solver: Echelon,
}

pub struct SingerModule {
    s: usize,
    t: Option<usize>,
    ambient: MuiAmbient,
    lo: i32,
    degrees: Vec<Degree>,
    module: RealizedModule,
}

fn dickson_label(s: usize, e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { format!("ω{s}{i}") } else { format!("ω{s}{i}^{k}") })
        .collect();
    parts.join(" ")
}

/// Top degree of `R_{s/t} X` for bounded `X`.
fn truncated_top(s: usize, t: usize, x_hi: i32) -> i64 {
    (1..=s).map(|j| ((t - j) as i64) << (j - 1)).sum::<i64>() + ((x_hi as i64) << s)
}

impl SingerModule {
    /// `R_s X` in degrees `2^s lo(X) ..= hi`.
    pub fn rs(x: &RealizedModule, s: usize, hi: i32) -> Result<Self> {
        Self::build(x, s, None, hi)
    }

    /// `R_{s/t} X`, through degree `hi` or its top degree if smaller.
    pub fn rs_trunc(x: &RealizedModule, s: usize, t: usize, hi: i32) -> Result<Self> {
        Self::build(x, s, Some(t), hi)
    }

    fn build(x: &RealizedModule, s: usize, t: Option<usize>, hi: i32) -> Result<Self> {
        let ambient = MuiAmbient::new(x.clone());
        let lo = (x.lo() as i64) << s;
        let lo = lo.clamp(i32::MIN as i64 / 2, hi as i64 + 1) as i32;
        let empty = x.total_dim() == 0 || t.is_some_and(|t| s > t);
        let mut top = hi;
        let mut bounded = empty;
        if let Some(t) = t {
            if !empty && x.bounded() {
                let nat = truncated_top(s, t, x.hi());
                if nat <= hi as i64 {
                    top = nat as i32;
                    bounded = true;
                }
            }
        }
        if empty {
            top = lo - 1;
        }
        let mut degrees = Vec::new();
        let mut labels = Vec::new();
        for n in lo..=top {
            let basis = ambient.basis(s, n as i64, t);
            let index: HashMap<MuiBasis, usize> = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
            let mut vectors = Vec::new();
            let mut gens = Vec::new();
            let mut span = Subspace::zero(basis.len());
            for d in x.degrees() {
                let rest = n as i64 - ((d as i64) << s);
                if x.dim(d) == 0 || rest < 0 {
                    continue;
                }
                for e in dickson::monomials_of_degree(s, rest) {
                    for k in 0..x.dim(d) {
                        let el = ambient.dickson_st(s, &e, d, k);
                        let v = to_vector(&index, basis.len(), &el);
                        if span.insert(v.clone()) {
                            vectors.push(v);
                            gens.push((e.clone(), d, k));
                        } else if t.is_none() {
                            return Err(Error::Membership(format!(
                                "R_{s} of {} is not free on St_{s} in degree {n}",
                                x.name()
                            )));
                        }
                    }
                }
            }
            labels.push(
                gens.iter()
                    .map(|(e, d, k)| {
                        let xl = x.labels(*d)[*k].clone();
                        let st = if s == 0 { xl } else { format!("St{s}({xl})") };
                        let w = dickson_label(s, e);
                        if w.is_empty() {
                            st
                        } else {
                            format!("{w} {st}")
                        }
                    })
                    .collect(),
            );
            let solver = Echelon::new(&Matrix::from_rows(basis.len(), vectors.clone()));
            degrees.push(Degree { ambient: basis, index, vectors, gens, solver });
        }
        let name = match t {
            None => format!("R{s}({})", x.name()),
            Some(t) => format!("R{s}/{t}({})", x.name()),
        };
        let window = DegreeWindow::new(lo, top);
        let failure: Cell<Option<(u32, i32, usize)>> = Cell::new(None);
        let module = RealizedModule::from_fn(name, window, bounded, labels, |i, n, k| {
            let src = &degrees[(n - lo) as usize];
            let tgt = &degrees[(n + i as i32 - lo) as usize];
            let mut img = MuiElement::zero();
            for p in src.vectors[k].iter_ones() {
                img.add_assign(&ambient.sq(i, &src.ambient[p]));
            }
            let v = to_vector(&tgt.index, tgt.ambient.len(), &img);
            match tgt.solver.solve(&v) {
                Some(c) => c,
                None => {
                    failure.set(Some((i, n, k)));
                    BitVec::zeros(tgt.vectors.len())
                }
            }
        });
        if let Some((i, n, k)) = failure.get() {
            return Err(Error::Membership(format!(
                "Sq{i} of basis element {k} in degree {n} leaves {}",
                module.name()
            )));
        }
        Ok(SingerModule { s, t, ambient, lo, degrees, module })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn truncation(&self) -> Option<usize> {
        self.t
    }

    pub fn base(&self) -> &RealizedModule {
        self.ambient.base()
    }

    pub fn module(&self) -> &RealizedModule {
        &self.module
    }

    pub fn into_module(self) -> RealizedModule {
        self.module
    }

    pub fn ambient(&self) -> &MuiAmbient {
        &self.ambient
    }

    fn degree(&self, n: i32) -> Option<&Degree> {
        if n < self.lo || n > self.module.hi() {
            return None;
        }
        self.degrees.get((n - self.lo) as usize)
    }

    /// Basis element `k` of degree `n` as an ambient element.
    pub fn basis_element(&self, n: i32, k: usize) -> MuiElement {
        let d = self.degree(n).expect("degree in window");
        let mut e = MuiElement::zero();
        for p in d.vectors[k].iter_ones() {
            e.toggle(d.ambient[p].clone());
        }
        e
    }

    /// `(ω exponents, x degree, x index)` behind basis element `k` of degree `n`.
    pub fn generator(&self, n: i32, k: usize) -> &(Vec<u32>, i32, usize) {
        &self.degree(n).expect("degree in window").gens[k]
    }

    /// Coordinates of an ambient element of degree `n`; terms outside the
    /// truncation box are dropped. `None` if it is not in the span.
    pub fn coordinates(&self, n: i32, e: &MuiElement) -> Option<BitVec> {
        match self.degree(n) {
            None => e.is_zero().then(|| BitVec::zeros(0)),
            Some(d) => d.solver.solve(&to_vector(&d.index, d.ambient.len(), e)),
        }
    }

    fn map_to(&self, tgt: &SingerModule, shift: i32, what: &str, f: impl Fn(&MuiBasis) -> MuiElement) -> Result<GradedMap> {
        let mut out = GradedMap::new();
        for n in self.module.degrees() {
            let m = n + shift;
            let tdim = tgt.module.dim(m);
            let mut rows = Vec::new();
            for k in 0..self.module.dim(n) {
                let mut img = MuiElement::zero();
                for b in self.basis_element(n, k).terms() {
                    img.add_assign(&f(b));
                }
                if tgt.degree(m).is_none() {
                    rows.push(BitVec::zeros(tdim));
                    continue;
                }
                let c = tgt.coordinates(m, &img).ok_or_else(|| {
                    Error::Membership(format!("{what}: image of basis element {k} in degree {n} not in {}", tgt.module.name()))
                })?;
                rows.push(c);
            }
            out.insert(n, Matrix::from_rows(tdim, rows));
        }
        Ok(out)
    }

    /// The residue differential `R_s X → R_{s-1}(Σ^{-1} X)`, or its truncated
    /// form `R_{s/t} X → R_{s-1/t}(Σ^{-1} X)`. `tgt` must be built over
    /// `Σ^{-1} X` with the same truncation.
    pub fn differential(&self, tgt: &SingerModule) -> Result<GradedMap> {
        assert!(self.s >= 1 && tgt.s + 1 == self.s && tgt.t == self.t);
        if let Some(t) = self.t {
            self.check_well_defined(t)?;
        }
        self.map_to(tgt, 0, "differential", |b| self.ambient.differential(b))
    }

    /// The truncated differential is induced from the untruncated one exactly
    /// when `Sq^k x = 0` for `k ≥ |x| + t - s + 2`.
    fn check_well_defined(&self, t: usize) -> Result<()> {
        let x = self.ambient.base();
        let off = t as i64 - self.s as i64 + 2;
        for d in x.degrees() {
            for k in 0..x.dim(d) {
                let v = BitVec::unit(x.dim(d), k);
                let from = (d as i64 + off).max(1);
                for i in from..=(x.hi() - d) as i64 {
                    if !x.act(i as u32, d, &v).is_zero() {
                        return Err(Error::WellDefinedness(format!(
                            "Sq{i} {} ≠ 0 in {}: the truncated differential does not descend",
                            x.labels(d)[k],
                            x.name()
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The projection `R_s X → R_{s/t} X`.
    pub fn project_to(&self, tgt: &SingerModule) -> Result<GradedMap> {
        assert!(self.t.is_none() && tgt.t.is_some() && self.s == tgt.s);
        self.map_to(tgt, 0, "projection", |b| MuiElement::from_basis(b.clone()))
    }

    /// `ρ_s : R_s X → Φ R_{s-1} X`, keeping terms with `a_1 = 0`. Returns the
    /// map into `phi(tgt.module())`.
    pub fn rho(&self, tgt: &SingerModule) -> Result<GradedMap> {
        assert!(self.s >= 1 && tgt.s + 1 == self.s && self.t.is_none() && tgt.t.is_none());
        let p = phi(tgt.module());
        let mut out = GradedMap::new();
        for n in self.module.degrees() {
            let tdim = p.dim(n);
            let mut rows = Vec::new();
            for k in 0..self.module.dim(n) {
                if n % 2 != 0 || tdim == 0 {
                    rows.push(BitVec::zeros(tdim));
                    continue;
                }
                let mut img = MuiElement::zero();
                for b in self.basis_element(n, k).terms().filter(|b| b.a[0] == 0) {
                    img.toggle(MuiBasis { a: b.a[1..].to_vec(), x_deg: b.x_deg, x: b.x });
                }
                let c = tgt.coordinates(n / 2, &img).ok_or_else(|| {
                    Error::Membership(format!("ρ: image of basis element {k} in degree {n} not in {}", tgt.module.name()))
                })?;
                rows.push(c);
            }
            out.insert(n, Matrix::from_rows(tdim, rows));
        }
        Ok(out)
    }

    /// `Σ^{-1} R_s(ΣX) → R_s X`, multiplication by `ω_{s,0}` after
    /// identifying `St_s(σx)` with `ω_{s,0} St_s(x)`. `self` is built over
    /// `ΣX` and `tgt` over `X`; degree `n` of `self` goes to degree `n - 1`.
    pub fn omega_inclusion(&self, tgt: &SingerModule) -> Result<GradedMap> {
        assert!(self.s == tgt.s && self.t.is_none() && tgt.t.is_none());
        self.map_to(tgt, -1, "ω-inclusion", |b| {
            MuiElement::from_basis(MuiBasis { a: b.a.iter().map(|e| e + 1).collect(), x_deg: b.x_deg - 1, x: b.x })
        })
    }
}

fn to_vector(index: &HashMap<MuiBasis, usize>, len: usize, e: &MuiElement) -> BitVec {
    let mut v = BitVec::zeros(len);
    for b in e.terms() {
        if let Some(&i) = index.get(b) {
            v.flip(i);
        }
    }
    v
}

/// `R_s X` realized as a plain module.
pub fn rs(x: &RealizedModule, s: usize, hi: i32) -> Result<RealizedModule> {
    Ok(SingerModule::rs(x, s, hi)?.into_module())
}

/// The residue differential `R_s X → R_{s-1}(Σ^{-1} X)` with both modules.
pub fn d_singer(x: &RealizedModule, s: usize, hi: i32) -> Result<(SingerModule, SingerModule, GradedMap)> {
    let src = SingerModule::rs(x, s, hi)?;
    let tgt = SingerModule::rs(&suspend(x, -1), s - 1, hi)?;
    let d = src.differential(&tgt)?;
    Ok((src, tgt, d))
}
