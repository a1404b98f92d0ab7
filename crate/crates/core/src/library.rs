//! Built-in sample modules, addressable as `@Name [arg]`.

use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::module::{truncate_below, DegreeWindow, RealizedModule};
use crate::presentation::{parse_presentation, realize, ModulePresentation};
use crate::steenrod::binom_mod2;
use crate::unstable::free_unstable;

/// The field, concentrated in degree 0.
pub fn f() -> RealizedModule {
    sigma_f(0).with_name("F")
}

/// `Σ^n F`.
pub fn sigma_f(n: i32) -> RealizedModule {
    let mut m = RealizedModule::from_fn(format!("Σ^{n} F"), DegreeWindow::new(n, n), true, vec![vec![format!("ι{n}")]], |_, _, _| unreachable!());
    m.declare_unstable(n >= 0);
    m
}

/// Power series module `u^k` for `k ≥ lo` with `Sq^i u^k = C(k, i) u^{k+i}`.
fn laurent_tail(name: &str, lo: i32, hi: i32) -> RealizedModule {
    let window = DegreeWindow::new(lo, hi);
    let labels = window.degrees().map(|k| vec![format!("u^{k}")]).collect();
    RealizedModule::from_fn(name, window, false, labels, |i, k, _| BitVec::from_bools(&[binom_mod2(k as i64, i as i64)]))
}

/// `F[u] = H^*(RP^∞)`.
pub fn fu(hi: i32) -> RealizedModule {
    let mut m = laurent_tail("F[u]", 0, hi);
    m.declare_unstable(true);
    m
}

/// `F[u] ⊕ F u^{-1}` with `Sq^{n+1} u^{-1} = u^n`.
pub fn phat(hi: i32) -> RealizedModule {
    laurent_tail("P^", -1, hi)
}

/// `F[u] / (u^{c+1})`.
pub fn fu_truncated(c: i32) -> RealizedModule {
    truncate_below(&fu(c), c).with_name(format!("F[u]/u^{}", c + 1))
}

/// `Σ^n A`.
pub fn free_a(n: i32, hi: i32) -> Result<RealizedModule> {
    realize(&ModulePresentation::free(format!("Σ^{n} A"), vec![(format!("ι{n}"), n)]), n, hi)
}

pub fn a_mod_sq1(hi: i32) -> Result<RealizedModule> {
    let p = parse_presentation("module A/ASq1\ngenerator ι 0\nrelation Sq1 ι\n")?;
    realize(&p, 0, hi)
}

pub const BUILTINS: &[(&str, &str)] = &[
    ("@F", "the field in degree 0"),
    ("@SigmaF n", "the field in degree n"),
    ("@A n", "the free module on one generator of degree n"),
    ("@Fu", "F[u], |u| = 1"),
    ("@FuTrunc c", "F[u]/(u^{c+1})"),
    ("@Phat", "F[u] with u^-1 adjoined, Sq^{n+1} u^-1 = u^n"),
    ("@AmodSq1", "A/A Sq1"),
    ("@Funst n", "the free unstable module on a class of degree n"),
];

/// Resolves `@Name [arg]`; `hi` bounds the window of infinite modules.
pub fn builtin(spec: &str, hi: i32) -> Result<RealizedModule> {
    let mut toks = spec.split_whitespace();
    let name = toks.next().unwrap_or("");
    let arg = toks.next();
    if toks.next().is_some() {
        return Err(Error::Invalid(format!("too many arguments in `{spec}`")));
    }
    let int = |what: &str| -> Result<i32> {
        arg.ok_or_else(|| Error::Invalid(format!("`{name}` needs {what}")))?
            .parse()
            .map_err(|_| Error::Invalid(format!("bad {what} in `{spec}`")))
    };
    let none = || -> Result<()> {
        match arg {
            Some(a) => Err(Error::Invalid(format!("`{name}` takes no argument, got `{a}`"))),
            None => Ok(()),
        }
    };
    match name {
        "@F" => none().map(|_| f()),
        "@SigmaF" => Ok(sigma_f(int("a degree")?)),
        "@A" => free_a(int("a degree")?, hi),
        "@Fu" => none().map(|_| fu(hi)),
        "@FuTrunc" => Ok(fu_truncated(int("a top degree")?)),
        "@Phat" => none().map(|_| phat(hi)),
        "@AmodSq1" => none().and_then(|_| a_mod_sq1(hi)),
        "@Funst" => {
            let n = int("a degree")?;
            if n < 0 {
                return Err(Error::Invalid("free unstable modules need n ≥ 0".into()));
            }
            free_unstable(n, hi)
        }
        _ => Err(Error::Invalid(format!("unknown built-in `{name}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_satisfy_adem() {
        for m in [f(), sigma_f(-1), fu(14), phat(14), fu_truncated(5), a_mod_sq1(12).unwrap(), free_a(2, 12).unwrap()] {
            m.check_adem().unwrap();
        }
    }

    #[test]
    fn phat_is_not_unstable_but_fu_is() {
        assert!(fu(10).is_unstable());
        let p = phat(10);
        assert!(!p.is_unstable());
        // Sq^{n+1} u^{-1} = u^n
        for n in 0..=10 {
            assert!(p.sq(n as u32 + 1, -1).get(0, 0));
        }
    }

    #[test]
    fn builtin_names_resolve() {
        assert_eq!(builtin("@SigmaF -1", 5).unwrap().lo(), -1);
        assert_eq!(builtin("@A 1", 6).unwrap().dim(4), 2);
        assert!(builtin("@F 3", 5).is_err());
        assert!(builtin("@Nope", 5).is_err());
    }
}
