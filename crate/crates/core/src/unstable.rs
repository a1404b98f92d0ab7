//! Destabilization and the loop functors on unstable modules.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::gf2::{BitVec, Subspace};
use crate::module::{lambda_map, phi, quotient, submodule, suspend, DegreeWindow, GradedMap, RealizedModule};
use crate::steenrod::{basis_of_degree_excess, sq_times, Monomial};

/// Span of `Sq^i x` with `i > |x|`, degree by degree.
pub fn instability_submodule(m: &RealizedModule) -> BTreeMap<i32, Subspace> {
    let mut out = BTreeMap::new();
    for n in m.degrees() {
        // Sq^0 x = x with 0 > |x| puts every negative degree in BM
        if n < 0 {
            out.insert(n, Subspace::full(m.dim(n)));
            continue;
        }
        let mut s = Subspace::zero(m.dim(n));
        for d in m.lo()..n {
            let i = (n - d) as u32;
            if (i as i32) <= d {
                continue;
            }
            for r in m.sq(i, d).rows() {
                s.insert(r.clone());
            }
        }
        out.insert(n, s);
    }
    out
}

/// `DM = M / BM`, the largest unstable quotient, with the projection.
pub fn destabilize(m: &RealizedModule) -> (RealizedModule, GradedMap) {
    let b = instability_submodule(m);
    let (mut q, p) = quotient(m, &b, format!("D({})", m.name()));
    q.declare_unstable(true);
    (q, p)
}

/// `F(n)`: basis `Sq^I ι_n` over admissible `I` of excess at most `n`.
pub fn free_unstable(n: i32, hi: i32) -> Result<RealizedModule> {
    let window = DegreeWindow::new(n, hi.max(n - 1));
    let mut bases: Vec<Vec<Monomial>> = Vec::new();
    for d in window.degrees() {
        bases.push(basis_of_degree_excess((d - n) as u32, n as i64)?);
    }
    let index: Vec<HashMap<Monomial, usize>> =
        bases.iter().map(|b| b.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect()).collect();
    let labels = bases
        .iter()
        .map(|b| b.iter().map(|m| if m.is_unit() { format!("ι{n}") } else { format!("{m} ι{n}") }).collect())
        .collect();
    let mut f = RealizedModule::from_fn(format!("F({n})"), window, false, labels, |i, d, k| {
        let t = (d + i as i32 - n) as usize;
        let mut v = BitVec::zeros(bases[t].len());
        for r in sq_times(i, &bases[(d - n) as usize][k]).terms() {
            if let Some(&j) = index[t].get(r) {
                v.flip(j);
            }
        }
        v
    });
    f.declare_unstable(true);
    Ok(f)
}

fn require_unstable(n: &RealizedModule) -> Result<()> {
    if n.is_unstable() {
        Ok(())
    } else {
        Err(Error::NotUnstable(n.name().to_string()))
    }
}

/// `ΩN = D Σ^{-1} N`.
pub fn omega(n: &RealizedModule) -> Result<RealizedModule> {
    require_unstable(n)?;
    let (o, _) = destabilize(&suspend(n, -1));
    Ok(o.with_name(format!("Ω({})", n.name())))
}

/// `Ω^t N`.
pub fn omega_iter(n: &RealizedModule, t: u32) -> Result<RealizedModule> {
    let mut cur = n.clone();
    for _ in 0..t {
        cur = omega(&cur)?;
    }
    Ok(cur)
}

/// `Ω_1 N = Σ^{-1} ker(λ : ΦN → N)`.
pub fn omega1(n: &RealizedModule) -> Result<RealizedModule> {
    require_unstable(n)?;
    let lam = lambda_map(n)?;
    let p = phi(n);
    // λ is known on (ΦN)^{2k} for 2k ≤ hi; for bounded N it vanishes above.
    let top = if n.bounded() { p.hi() } else { n.hi() };
    let mut ker = BTreeMap::new();
    for e in p.degrees().filter(|&e| e <= top) {
        let s = match lam.get(&e) {
            Some(m) => m.kernel(),
            None => Subspace::full(p.dim(e)),
        };
        ker.insert(e, s);
    }
    let p = crate::module::restrict_window(&p, p.lo(), top);
    let (k, _) = submodule(&p, &ker, "ker λ")?;
    let mut o = suspend(&k, -1).with_name(format!("Ω1({})", n.name()));
    if !n.bounded() {
        o.set_valid_hi(n.valid_hi() - 1);
    }
    o.declare_unstable(true);
    Ok(o)
}

/// `Sq_0` is injective within the window.
pub fn is_reduced(m: &RealizedModule) -> bool {
    match lambda_map(m) {
        Ok(l) => l.values().all(|mat| mat.kernel().dim() == 0),
        Err(_) => false,
    }
}

/// Whether every class is killed by an iterate of `Sq_0`. `None` when some
/// iterate leaves the window of an unbounded module before vanishing.
pub fn is_nilpotent(m: &RealizedModule) -> Option<bool> {
    if m.dim(0) > 0 {
        return Some(false);
    }
    for d in m.degrees().filter(|&d| d > 0) {
        for k in 0..m.dim(d) {
            let mut v = BitVec::unit(m.dim(d), k);
            let mut deg = d;
            loop {
                if v.is_zero() {
                    break;
                }
                if 2 * deg > m.hi() {
                    if m.bounded() {
                        break;
                    }
                    return None;
                }
                v = m.act(deg as u32, deg, &v);
                deg *= 2;
            }
        }
    }
    Some(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn free_unstable_agrees_with_destabilized_free() {
        for n in 0..4 {
            let f = free_unstable(n, 14).unwrap();
            let (d, _) = destabilize(&library::free_a(n, 14).unwrap());
            assert_eq!(f.dims(), d.dims(), "F({n})");
            f.check_adem().unwrap();
            assert!(f.is_unstable());
        }
        // F(1) has classes exactly in degrees 2^k
        let f1 = free_unstable(1, 16).unwrap();
        let ones: Vec<i32> = f1.degrees().filter(|&d| f1.dim(d) > 0).collect();
        assert_eq!(ones, vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn destabilization_of_samples() {
        let (d, _) = destabilize(&library::sigma_f(-1));
        assert_eq!(d.total_dim(), 0);
        let (d, _) = destabilize(&library::phat(10));
        assert_eq!(d.total_dim(), 0);
        let (d, _) = destabilize(&library::a_mod_sq1(10).unwrap());
        assert_eq!(d.total_dim(), 1);
    }

    #[test]
    fn loops_of_spheres() {
        for k in 1..=4 {
            let o = omega(&library::sigma_f(k)).unwrap();
            assert_eq!((o.total_dim(), o.top_degree()), (1, Some(k - 1)));
            let o1 = omega1(&library::sigma_f(k)).unwrap();
            assert_eq!((o1.total_dim(), o1.top_degree()), (1, Some(2 * k - 1)));
        }
        // Ω F = 0 and Ω_1 F = 0 (λ is the identity in degree 0)
        assert_eq!(omega(&library::f()).unwrap().total_dim(), 0);
        assert_eq!(omega1(&library::f()).unwrap().total_dim(), 0);
        assert!(omega(&library::phat(6)).is_err());
    }

    #[test]
    fn reduced_and_nilpotent() {
        assert!(is_reduced(&library::fu(12)));
        assert!(!is_reduced(&library::sigma_f(1)));
        assert_eq!(is_nilpotent(&library::sigma_f(2)), Some(true));
        assert_eq!(is_nilpotent(&library::fu(12)), Some(false));
        assert_eq!(is_nilpotent(&library::fu_truncated(3)), Some(false));
        assert_eq!(is_nilpotent(&crate::module::truncate_above(&library::fu_truncated(6), 0)), Some(true));
    }
}
