//! Derived functors from resolutions, independent of the Singer complexes.
//!
//! `D_s M` is the homology of `D(P_•)` for a minimal free resolution
//! `P_• → M` in `𝓜`, and `Ω^t_s N` that of `Ω^t(P_•)` for a resolution of
//! `N` by free unstable modules. On free objects both functors are explicit:
//! `D(Σ^d A) = F(d)` and `Ω^t F(d) = F(d - t)`, each the quotient keeping
//! the admissible `Sq^I g` of excess at most `|g|` (resp. `|g| - t`).

pub mod cache;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::complexes::{c_validity, d_validity, Cell, ChainComplex};
use crate::error::{Error, Result};
use crate::gf2::{BitVec, Matrix, Subspace};
use crate::module::{DegreeWindow, GradedMap, RealizedModule};
use crate::par_map;
use crate::steenrod::{basis_of_degree, sq_times, Monomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    /// Free modules `Σ^d A`.
    Free,
    /// Free unstable modules `F(d)`.
    Unstable,
}

/// A direct sum of cyclic free (or free unstable) modules, windowed.
#[derive(Clone, Debug)]
pub struct FreeModule {
    pub kind: Kind,
    pub gens: Vec<i32>,
    pub module: RealizedModule,
    basis: Vec<Vec<(usize, Monomial)>>,
    index: Vec<HashMap<(usize, Monomial), usize>>,
}

fn keeps(kind: Kind, g: i32, m: &Monomial, shift: Option<i32>) -> bool {
    match (kind, shift) {
        (Kind::Free, None) => true,
        (Kind::Unstable, None) => m.excess() <= g as i64,
        (_, Some(t)) => m.excess() <= (g - t) as i64,
    }
}

impl FreeModule {
    /// Generators in degrees `gens`; for `excess_shift = Some(t)` only the
    /// `Sq^I g` with `excess(I) ≤ |g| - t` are kept (a quotient).
    fn build(kind: Kind, gens: Vec<i32>, lo: i32, hi: i32, excess_shift: Option<i32>, name: String) -> Result<Self> {
        let lo = gens.iter().copied().min().map_or(lo, |g| g.min(lo));
        let window = DegreeWindow::new(lo, hi);
        let mut basis = Vec::new();
        let mut index = Vec::new();
        let mut labels = Vec::new();
        for d in window.degrees() {
            let mut b = Vec::new();
            for (k, &g) in gens.iter().enumerate() {
                if g > d {
                    continue;
                }
                for m in basis_of_degree((d - g) as u32)? {
                    if keeps(kind, g, &m, excess_shift) {
                        b.push((k, m));
                    }
                }
            }
            index.push(b.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect::<HashMap<_, _>>());
            labels.push(b.iter().map(|(k, m)| if m.is_unit() { format!("g{k}") } else { format!("{m} g{k}") }).collect());
            basis.push(b);
        }
        let module = RealizedModule::from_fn(name, window, false, labels, |i, d, j| {
            let t = (d + i as i32 - lo) as usize;
            let (k, m) = &basis[(d - lo) as usize][j];
            let mut v = BitVec::zeros(basis[t].len());
            for r in sq_times(i, m).terms() {
                if let Some(&p) = index[t].get(&(*k, r.clone())) {
                    v.flip(p);
                }
            }
            v
        });
        Ok(FreeModule { kind, gens, module, basis, index })
    }

    pub fn new(kind: Kind, gens: Vec<i32>, lo: i32, hi: i32) -> Result<Self> {
        let name = format!("{}{:?}", if kind == Kind::Free { "A" } else { "F" }, gens);
        Self::build(kind, gens, lo, hi, None, name)
    }

    /// The map sending generator `k` to `images[k]` in `target`.
    fn map_to(&self, target: &RealizedModule, images: &[BitVec]) -> GradedMap {
        let lo = self.module.lo();
        self.module
            .degrees()
            .map(|d| {
                let rows = self.basis[(d - lo) as usize]
                    .iter()
                    .map(|(k, m)| target.act_word(&m.0, self.gens[*k], &images[*k]))
                    .collect();
                (d, Matrix::from_rows(target.dim(d), rows))
            })
            .collect()
    }

    /// `D(Σ^{-t} P)` with `t = 0` for `Kind::Free`, or `Ω^t P` for
    /// `Kind::Unstable`, as a coordinate quotient.
    fn apply_functor(&self, t: i32) -> Result<(FreeModule, GradedMap)> {
        let q = Self::build(self.kind, self.gens.clone(), self.module.lo(), self.module.hi(), Some(t), format!("Q({})", self.module.name()))?;
        let lo = self.module.lo();
        let proj = self
            .module
            .degrees()
            .map(|d| {
                let qi = &q.index[(d - lo) as usize];
                let rows = self.basis[(d - lo) as usize]
                    .iter()
                    .map(|x| {
                        let mut v = BitVec::zeros(qi.len());
                        if let Some(&p) = qi.get(x) {
                            v.flip(p);
                        }
                        v
                    })
                    .collect();
                (d, Matrix::from_rows(qi.len(), rows))
            })
            .collect();
        Ok((q, proj))
    }

    /// The matrix in degree `d` of the map induced by `f` from the quotient
    /// `q` of this module, given the target's projection `tgt_proj`.
    fn induced(&self, q: &FreeModule, f: &Matrix, tgt_proj: &Matrix, d: i32) -> Matrix {
        let lo = self.module.lo();
        let own = &self.index[(d - lo) as usize];
        let rows = q.basis[(d - q.module.lo()) as usize]
            .iter()
            .map(|x| tgt_proj.apply(&f.apply(&BitVec::unit(own.len(), own[x]))))
            .collect();
        Matrix::from_rows(tgt_proj.ncols(), rows)
    }
}

/// Minimal generators of the submodule `z` of `c`: a basis, degree by
/// degree, of a complement to the decomposables `Σ_i Sq^i z` in `z`.
fn minimal_generators(c: &RealizedModule, z: &BTreeMap<i32, Subspace>, hi: i32) -> Vec<(i32, BitVec)> {
    let degrees: Vec<i32> = c.degrees().filter(|&n| n <= hi).collect();
    let per = par_map(degrees, |n| {
        let zn = match z.get(&n) {
            Some(s) if s.dim() > 0 => s,
            _ => return Vec::new(),
        };
        let mut dec = Subspace::zero(c.dim(n));
        for d in c.lo()..n {
            let Some(zd) = z.get(&d) else { continue };
            if zd.dim() == 0 {
                continue;
            }
            let m = c.sq((n - d) as u32, d);
            for b in zd.basis() {
                dec.insert(m.apply(b));
            }
        }
        zn.basis().iter().filter(|v| dec.insert((*v).clone())).map(|v| (n, v.clone())).collect()
    });
    per.into_iter().flatten().collect()
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub kind: Kind,
    pub terms: Vec<FreeModule>,
    /// `maps[0] : P_0 → M`, `maps[k] : P_k → P_{k-1}`.
    pub maps: Vec<GradedMap>,
    pub hi: i32,
}

/// A minimal resolution with `P_0, …, P_len-1`, exact in degrees `≤ hi`.
pub fn resolve(m: &RealizedModule, kind: Kind, len: usize, hi: i32) -> Result<Resolution> {
    if kind == Kind::Unstable && !m.is_unstable() {
        return Err(Error::NotUnstable(m.name().to_string()));
    }
    let mut terms: Vec<FreeModule> = Vec::new();
    let mut maps = Vec::new();
    let mut target = m.clone();
    let mut z: BTreeMap<i32, Subspace> = m.degrees().map(|d| (d, Subspace::full(m.dim(d)))).collect();
    for _ in 0..len {
        let gens = minimal_generators(&target, &z, hi);
        let p = FreeModule::new(kind, gens.iter().map(|g| g.0).collect(), target.lo(), hi)?;
        let images: Vec<BitVec> = gens.into_iter().map(|g| g.1).collect();
        let f = p.map_to(&target, &images);
        z = f.iter().map(|(&d, mat)| (d, mat.kernel())).collect();
        target = p.module.clone();
        terms.push(p);
        maps.push(f);
    }
    Ok(Resolution { kind, terms, maps, hi })
}

impl Resolution {
    pub fn generator_degrees(&self) -> Vec<Vec<i32>> {
        self.terms.iter().map(|p| p.gens.clone()).collect()
    }

    /// The complex `D(Σ^{-t} P_•)` (free) or `Ω^t P_•` (unstable).
    pub fn apply_functor(&self, t: i32, valid: Vec<i32>) -> Result<ChainComplex> {
        let qs: Vec<(FreeModule, GradedMap)> = self.terms.iter().map(|p| p.apply_functor(t)).collect::<Result<_>>()?;
        let mut diffs = Vec::new();
        for k in 1..self.terms.len() {
            let p = &self.terms[k];
            let (q, _) = &qs[k];
            let (qt, proj_t) = &qs[k - 1];
            let map: GradedMap = q
                .module
                .degrees()
                .map(|d| {
                    let f = &self.maps[k][&d];
                    let pr = proj_t.get(&d).cloned().unwrap_or_else(|| Matrix::zero(f.ncols(), qt.module.dim(d)));
                    (d - t, p.induced(q, f, &pr, d))
                })
                .collect();
            diffs.push(map);
        }
        let terms = qs.into_iter().map(|(q, _)| crate::module::suspend(&q.module, -t)).collect();
        Ok(ChainComplex::new("oracle", terms, diffs, false, self.hi - t, valid))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleTable {
    /// `"destab"` or `"loops"`.
    pub functor: String,
    pub module: String,
    pub fingerprint: String,
    pub t: usize,
    pub s_max: usize,
    pub lo: i32,
    pub hi: i32,
    /// `dims[s][n - lo]`.
    pub dims: Vec<Vec<usize>>,
    pub valid_hi: Vec<i32>,
    /// Generator degrees of each resolution term.
    pub generators: Vec<Vec<i32>>,
    /// Resolution differentials, as hex rows per degree.
    pub matrices: Vec<BTreeMap<i32, Vec<String>>>,
}

impl OracleTable {
    pub fn dim(&self, s: usize, n: i32) -> usize {
        if n < self.lo || n > self.hi {
            return 0;
        }
        self.dims.get(s).map_or(0, |row| row[(n - self.lo) as usize])
    }

    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for s in 0..=self.s_max {
            for n in self.lo..=self.hi {
                out.push(Cell { s, degree: n, dim: self.dim(s, n), valid: n <= self.valid_hi[s] });
            }
        }
        out
    }
}

fn encode(maps: &[GradedMap]) -> Vec<BTreeMap<i32, Vec<String>>> {
    maps.iter().map(|m| m.iter().map(|(&d, mat)| (d, mat.rows().iter().map(BitVec::to_hex).collect())).collect()).collect()
}

fn table(functor: &str, m: &RealizedModule, t: usize, s_max: usize, res: &Resolution, c: &ChainComplex) -> OracleTable {
    let (lo, hi) = (c.lo(), c.hi());
    OracleTable {
        functor: functor.into(),
        module: m.name().to_string(),
        fingerprint: m.fingerprint(),
        t,
        s_max,
        lo,
        hi,
        dims: (0..=s_max).map(|s| (lo..=hi).map(|n| c.homology_dim(s, n)).collect()).collect(),
        valid_hi: (0..=s_max).map(|s| c.valid_hi(s)).collect(),
        generators: res.generator_degrees(),
        matrices: encode(&res.maps),
    }
}

fn clamp(v: i64, hi: i32) -> i32 {
    v.clamp(i32::MIN as i64, hi as i64) as i32
}

/// `D_s M` for `s ≤ s_max`, in degrees `≤ hi`.
pub fn derived_destab_oracle(m: &RealizedModule, s_max: usize, hi: i32) -> Result<OracleTable> {
    let res = resolve(m, Kind::Free, s_max + 2, hi)?;
    let valid = (0..=s_max).map(|s| if m.bounded() { hi } else { clamp(d_validity(s, m.valid_hi()), hi) }).collect();
    let c = res.apply_functor(0, valid)?;
    Ok(table("destab", m, 0, s_max, &res, &c))
}

/// `Ω^t_s N` for unstable `N`, `s ≤ s_max`, in degrees `≤ hi - t`.
pub fn derived_loops_oracle(n: &RealizedModule, t: usize, s_max: usize, hi: i32) -> Result<OracleTable> {
    let res = resolve(n, Kind::Unstable, s_max + 2, hi)?;
    let valid = (0..=s_max)
        .map(|s| if n.bounded() { hi } else { clamp(c_validity(s, t, n.valid_hi()), hi) })
        .collect();
    let c = res.apply_functor(t as i32, valid)?;
    Ok(table("loops", n, t, s_max, &res, &c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;
    use crate::module::suspend;
    use crate::unstable::{destabilize, free_unstable, omega_iter};

    #[test]
    fn resolution_is_exact() {
        for m in [library::f(), library::a_mod_sq1(12).unwrap(), library::sigma_f(-1)] {
            let res = resolve(&m, Kind::Free, 4, 12).unwrap();
            // ε surjective, then ker = im at every stage
            for d in m.degrees().filter(|&d| d <= 12) {
                assert_eq!(res.maps[0][&d].rank(), m.dim(d));
                for k in 1..res.maps.len() {
                    let ker = res.maps[k - 1][&d].kernel();
                    let im = res.maps[k][&d].image();
                    assert!(ker == im, "{} stage {k} degree {d}", m.name());
                }
            }
        }
        // F has minimal generators h_i in P_1 and h_i h_j in P_2
        let res = resolve(&library::f(), Kind::Free, 3, 16).unwrap();
        assert_eq!(res.terms[0].gens, vec![0]);
        assert_eq!(res.terms[1].gens, vec![1, 2, 4, 8, 16]);
        assert_eq!(res.terms[2].gens, vec![2, 4, 5, 8, 9, 10, 16]);
    }

    #[test]
    fn a_mod_sq1_first_syzygy() {
        let res = resolve(&library::a_mod_sq1(4).unwrap(), Kind::Free, 2, 4).unwrap();
        // the kernel A Sq1 is cyclic on Sq1
        assert_eq!(res.terms[1].gens, vec![1]);
    }

    #[test]
    fn functors_on_free_objects_match_generic_constructions() {
        for g in [-1, 0, 2, 3] {
            let p = FreeModule::new(Kind::Free, vec![g], g.min(0), 14).unwrap();
            let (q, _) = p.apply_functor(0).unwrap();
            let (d, _) = destabilize(&p.module);
            assert_eq!(q.module.dims(), d.dims(), "D(Σ^{g} A)");
        }
        for (g, t) in [(3, 1), (4, 2), (2, 3)] {
            let p = FreeModule::new(Kind::Unstable, vec![g], 0, 16).unwrap();
            let f = free_unstable(g, 16).unwrap();
            assert!((0..=16).all(|d| p.module.dim(d) == f.dim(d)), "F({g})");
            let (q, _) = p.apply_functor(t).unwrap();
            let o = omega_iter(&p.module, t as u32).unwrap();
            for d in o.degrees().filter(|&d| d + t <= 16) {
                assert_eq!(suspend(&q.module, -t).dim(d), o.dim(d), "Ω^{t} F({g}) degree {d}");
            }
        }
    }

    #[test]
    fn destab_oracle_low_values() {
        let o = derived_destab_oracle(&library::sigma_f(-1), 1, 10).unwrap();
        assert!((-1..=10).all(|n| o.dim(0, n) == 0));
        assert!((0..=10).all(|n| o.dim(1, n) == 1));
        let o = derived_loops_oracle(&library::sigma_f(3), 1, 2, 12).unwrap();
        assert_eq!(o.dim(0, 2), 1);
        assert_eq!(o.dim(1, 5), 1);
        assert!((o.lo..=o.hi).all(|n| o.dim(2, n) == 0));
    }
}
