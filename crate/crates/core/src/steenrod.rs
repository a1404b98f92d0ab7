//! The mod 2 Steenrod algebra in the admissible (Serre–Cartan) basis.
//!
//! Elements are finite sums of admissible monomials `Sq^{a_1} ⋯ Sq^{a_k}`
//! with `a_i ≥ 2 a_{i+1}` and `a_k ≥ 1`; the empty monomial is the unit.
//! Products are normalised with the Adem relations. Left multiplication of
//! an admissible monomial by a single `Sq^a` is memoised process-wide.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, Ordering};

use once_cell::sync::Lazy;
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

static DEGREE_CAP: AtomicU32 = AtomicU32::new(96);

/// Largest degree for which bases are enumerated and products memoised.
pub fn degree_cap() -> u32 {
    DEGREE_CAP.load(Ordering::Relaxed)
}

pub fn set_degree_cap(cap: u32) {
    DEGREE_CAP.store(cap, Ordering::Relaxed);
}

/// `C(n, k) mod 2`, extended to negative `n` by `C(n, k) = (-1)^k C(k - n - 1, k)`.
pub fn binom_mod2(n: i64, k: i64) -> bool {
    if k < 0 {
        return false;
    }
    if n >= 0 {
        k <= n && (n & k) == k
    } else {
        let m = k - n - 1;
        (m & k) == k
    }
}

/// A sequence of positive exponents. Admissibility is not enforced by the
/// type; elements of [`SteenrodElement`] are always admissible.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn sq(a: u32) -> Self {
        if a == 0 {
            Self::unit()
        } else {
            Monomial(vec![a])
        }
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_admissible(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= 2 * w[1]) && self.0.iter().all(|&a| a > 0)
    }

    /// `a_1 - (a_2 + ⋯ + a_k)`; zero for the unit.
    pub fn excess(&self) -> i64 {
        match self.0.split_first() {
            None => 0,
            Some((a, rest)) => *a as i64 - rest.iter().map(|&x| x as i64).sum::<i64>(),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "Sq{a}")?;
        }
        Ok(())
    }
}

/// A sum of distinct admissible monomials.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SteenrodElement {
    terms: BTreeSet<Monomial>,
}

impl SteenrodElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_monomial(Monomial::unit())
    }

    pub fn sq(a: u32) -> Self {
        Self::from_monomial(Monomial::sq(a))
    }

    /// Panics unless `m` is admissible; use [`adem_normalize`] otherwise.
    pub fn from_monomial(m: Monomial) -> Self {
        assert!(m.is_admissible(), "{m} is not admissible");
        let mut terms = BTreeSet::new();
        terms.insert(m);
        SteenrodElement { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
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

    /// Degree of a nonzero homogeneous element.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.iter().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &SteenrodElement) {
        for m in &other.terms {
            self.toggle(m.clone());
        }
    }

    pub fn add(&self, other: &SteenrodElement) -> SteenrodElement {
        let mut s = self.clone();
        s.add_assign(other);
        s
    }

    pub fn mul(&self, other: &SteenrodElement) -> SteenrodElement {
        multiply(self, other)
    }
}

impl fmt::Display for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, m) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

type Memo = HashMap<(u32, Monomial), SteenrodElement>;

static SQ_TIMES: Lazy<RwLock<Memo>> = Lazy::new(|| RwLock::new(HashMap::new()));
static CHI_SQ: Lazy<RwLock<HashMap<u32, SteenrodElement>>> = Lazy::new(|| RwLock::new(HashMap::new()));

/// `Sq^a · m` for admissible `m`.
pub fn sq_times(a: u32, m: &Monomial) -> SteenrodElement {
    if a == 0 {
        return SteenrodElement::from_monomial(m.clone());
    }
    let b = match m.0.first() {
        None => return SteenrodElement::sq(a),
        Some(&b) if a >= 2 * b => {
            let mut v = Vec::with_capacity(m.0.len() + 1);
            v.push(a);
            v.extend_from_slice(&m.0);
            return SteenrodElement::from_monomial(Monomial(v));
        }
        Some(&b) => b,
    };
    let memoise = a + m.degree() <= degree_cap();
    let key = (a, m.clone());
    if memoise {
        if let Some(hit) = SQ_TIMES.read().get(&key) {
            return hit.clone();
        }
    }
    let rest = Monomial(m.0[1..].to_vec());
    let mut out = SteenrodElement::zero();
    for j in 0..=a / 2 {
        if !binom_mod2((b - j - 1) as i64, (a - 2 * j) as i64) {
            continue;
        }
        // Sq^{a+b-j} Sq^j · rest
        for t in sq_times(j, &rest).terms() {
            out.add_assign(&sq_times(a + b - j, t));
        }
    }
    if memoise {
        SQ_TIMES.write().insert(key, out.clone());
    }
    out
}

/// `Sq^a · x`.
pub fn sq_times_element(a: u32, x: &SteenrodElement) -> SteenrodElement {
    let mut out = SteenrodElement::zero();
    for m in x.terms() {
        out.add_assign(&sq_times(a, m));
    }
    out
}

/// Normal form of the (possibly inadmissible) word `Sq^{w_1} ⋯ Sq^{w_k}`.
/// Zero exponents are `Sq^0 = 1` and are dropped.
pub fn adem_normalize(word: &[u32]) -> SteenrodElement {
    let mut acc = SteenrodElement::one();
    for &a in word.iter().rev() {
        acc = sq_times_element(a, &acc);
    }
    acc
}

pub fn multiply(x: &SteenrodElement, y: &SteenrodElement) -> SteenrodElement {
    let mut out = SteenrodElement::zero();
    for m in x.terms() {
        let mut acc = y.clone();
        for &a in m.0.iter().rev() {
            acc = sq_times_element(a, &acc);
        }
        out.add_assign(&acc);
    }
    out
}

/// `χ(Sq^n)`, from `Σ_{i+j=n} Sq^i χ(Sq^j) = 0` for `n > 0`.
pub fn conjugate_sq(n: u32) -> SteenrodElement {
    if n == 0 {
        return SteenrodElement::one();
    }
    if let Some(hit) = CHI_SQ.read().get(&n) {
        return hit.clone();
    }
    let mut out = SteenrodElement::zero();
    for i in 1..=n {
        out.add_assign(&sq_times_element(i, &conjugate_sq(n - i)));
    }
    CHI_SQ.write().insert(n, out.clone());
    out
}

/// The canonical anti-automorphism.
pub fn conjugate(x: &SteenrodElement) -> SteenrodElement {
    let mut out = SteenrodElement::zero();
    for m in x.terms() {
        let mut acc = SteenrodElement::one();
        for &a in &m.0 {
            acc = multiply(&conjugate_sq(a), &acc);
        }
        out.add_assign(&acc);
    }
    out
}

/// Admissible monomials of degree `n` with first exponent at most `max_first`.
fn admissibles(n: u32, max_first: u32, out: &mut Vec<Monomial>, prefix: &mut Vec<u32>) {
    if n == 0 {
        out.push(Monomial(prefix.clone()));
        return;
    }
    for a in 1..=n.min(max_first) {
        let rest = n - a;
        // an admissible tail with first exponent b has degree < 2b
        if rest > 0 && rest >= 2 * (a / 2) {
            continue;
        }
        prefix.push(a);
        admissibles(rest, a / 2, out, prefix);
        prefix.pop();
    }
}

/// Admissible basis of `A^n`, in increasing lexicographic order.
pub fn basis_of_degree(n: u32) -> Result<Vec<Monomial>> {
    if n > degree_cap() {
        return Err(Error::DegreeCap { degree: n as i64, cap: degree_cap() });
    }
    let mut out = Vec::new();
    admissibles(n, n, &mut out, &mut Vec::new());
    out.sort();
    Ok(out)
}

/// Admissible monomials of degree `n` and excess at most `e`.
pub fn basis_of_degree_excess(n: u32, e: i64) -> Result<Vec<Monomial>> {
    Ok(basis_of_degree(n)?.into_iter().filter(|m| m.excess() <= e).collect())
}

impl FromStr for SteenrodElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_element(s, 1, 1)
    }
}

/// Parses `Sq3 Sq1 + Sq4`, `1` or `0`. `line`/`col` locate `s` in a larger
/// document for error reporting; factors need not be admissible.
pub fn parse_element(s: &str, line: usize, col: usize) -> Result<SteenrodElement> {
    let err = |offset: usize, msg: String| Error::Parse { line, col: col + offset, msg };
    let mut out = SteenrodElement::zero();
    let mut offset = 0;
    let mut saw_term = false;
    for term in s.split('+') {
        let lead = term.len() - term.trim_start().len();
        let t = term.trim();
        if t.is_empty() {
            return Err(err(offset + lead, "empty term".into()));
        }
        saw_term = true;
        let mut word = Vec::new();
        let mut zero = false;
        let mut pos = offset + lead;
        for factor in t.split_whitespace() {
            let at = term[pos - offset..].find(factor).map_or(pos, |k| pos + k);
            pos = at + factor.len();
            match factor {
                "1" => {}
                "0" => zero = true,
                f => {
                    let digits = f
                        .strip_prefix("Sq^")
                        .or_else(|| f.strip_prefix("Sq"))
                        .ok_or_else(|| err(at, format!("expected `SqN`, `1` or `0`, found `{f}`")))?;
                    let a: u32 = digits.parse().map_err(|_| err(at, format!("bad exponent in `{f}`")))?;
                    word.push(a);
                }
            }
        }
        if !zero {
            out.add_assign(&adem_normalize(&word));
        }
        offset += term.len() + 1;
    }
    if !saw_term {
        return Err(err(0, "empty element".into()));
    }
    Ok(out)
}
