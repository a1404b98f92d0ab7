//! Finite presentations and their realization in a degree window.
//!
//! One declaration per line; `#` starts a comment.
//!
//! ```text
//! module AmodSq1
//! generator i 0
//! relation Sq1 i
//! unstable
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{BitVec, Subspace};
use crate::module::{quotient, DegreeWindow, RealizedModule};
use crate::steenrod::{basis_of_degree, parse_element, sq_times, Monomial, SteenrodElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    /// `(θ, generator index)` pairs with distinct generators and nonzero `θ`.
    pub terms: Vec<(SteenrodElement, usize)>,
    pub degree: i32,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    pub name: String,
    pub generators: Vec<(String, i32)>,
    pub relations: Vec<Relation>,
    pub unstable: bool,
}

impl ModulePresentation {
    pub fn free(name: impl Into<String>, generators: Vec<(String, i32)>) -> Self {
        ModulePresentation { name: name.into(), generators, relations: Vec::new(), unstable: false }
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.generators.iter().map(|g| g.1).min()
    }
}

pub fn parse_presentation(text: &str) -> Result<ModulePresentation> {
    let mut name = None;
    let mut generators: Vec<(String, i32)> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut relations = Vec::new();
    let mut unstable = false;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = body.len() - trimmed.len();
        let (kw, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed.trim_end(), ""));
        let rest_col = indent + kw.len() + 2 + (rest.len() - rest.trim_start().len());
        let err = |col: usize, msg: String| Error::Parse { line, col, msg };
        match kw {
            "module" => {
                if name.is_some() {
                    return Err(err(indent + 1, "duplicate `module` declaration".into()));
                }
                let n = rest.trim();
                if n.is_empty() || n.contains(char::is_whitespace) {
                    return Err(err(rest_col, "expected a single module name".into()));
                }
                name = Some(n.to_string());
            }
            "generator" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 2 {
                    return Err(err(rest_col, "expected `generator LABEL DEGREE`".into()));
                }
                let label = toks[0];
                if label.starts_with("Sq") || label == "1" || label == "0" || label.contains('+') {
                    return Err(err(rest_col, format!("`{label}` is not a usable generator label")));
                }
                let deg: i32 = toks[1].parse().map_err(|_| err(rest_col + rest.trim_start().find(toks[1]).unwrap_or(0), format!("bad degree `{}`", toks[1])))?;
                if index.contains_key(label) {
                    return Err(err(rest_col, format!("duplicate generator label `{label}`")));
                }
                index.insert(label.to_string(), generators.len());
                generators.push((label.to_string(), deg));
            }
            "relation" => {
                let r = parse_relation(rest, line, rest_col, &index, &generators)?;
                // relations that normalise to zero impose nothing
                if !r.terms.is_empty() {
                    relations.push(r);
                }
            }
            "unstable" => {
                if !rest.trim().is_empty() {
                    return Err(err(rest_col, "`unstable` takes no arguments".into()));
                }
                unstable = true;
            }
            other => return Err(err(indent + 1, format!("unknown declaration `{other}`"))),
        }
    }
    let name = name.ok_or(Error::Parse { line: 1, col: 1, msg: "missing `module` declaration".into() })?;
    Ok(ModulePresentation { name, generators, relations, unstable })
}

fn parse_relation(
    text: &str,
    line: usize,
    col: usize,
    index: &HashMap<String, usize>,
    generators: &[(String, i32)],
) -> Result<Relation> {
    let text = text.trim();
    let mut acc: BTreeMap<usize, SteenrodElement> = BTreeMap::new();
    let mut degree: Option<i32> = None;
    let mut offset = 0;
    for term in text.split('+') {
        let here = col + offset + (term.len() - term.trim_start().len());
        let t = term.trim();
        let Some((ops, gen)) = t.rsplit_once(char::is_whitespace).map(|(a, b)| (a.trim(), b)).or(Some(("", t))).filter(|(_, g)| !g.is_empty()) else {
            return Err(Error::Parse { line, col: here, msg: "empty term".into() });
        };
        let gen_col = here + t.len() - gen.len();
        let &g = index.get(gen).ok_or_else(|| Error::Parse { line, col: gen_col, msg: format!("unknown generator `{gen}`") })?;
        let word_degree: i32 = if ops.is_empty() {
            0
        } else {
            ops.split_whitespace()
                .map(|f| f.trim_start_matches("Sq^").trim_start_matches("Sq").parse::<i32>().unwrap_or(0))
                .sum()
        };
        let theta = if ops.is_empty() { SteenrodElement::one() } else { parse_element(ops, line, here)? };
        let d = word_degree + generators[g].1;
        match degree {
            None => degree = Some(d),
            Some(e) if e != d => {
                return Err(Error::NonHomogeneous { line, msg: format!("term `{t}` has degree {d}, expected {e}") });
            }
            _ => {}
        }
        acc.entry(g).or_default().add_assign(&theta);
        offset += term.len() + 1;
    }
    let degree = degree.ok_or(Error::Parse { line, col, msg: "empty relation".into() })?;
    let terms = acc.into_iter().filter(|(_, t)| !t.is_zero()).map(|(g, t)| (t, g)).collect();
    Ok(Relation { terms, degree, line })
}

impl fmt::Display for ModulePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "module {}", self.name)?;
        for (l, d) in &self.generators {
            writeln!(f, "generator {l} {d}")?;
        }
        for r in &self.relations {
            let mut parts = Vec::new();
            for (theta, g) in &r.terms {
                for m in theta.terms() {
                    let label = &self.generators[*g].0;
                    parts.push(if m.is_unit() { label.clone() } else { format!("{m} {label}") });
                }
            }
            writeln!(f, "relation {}", parts.join(" + "))?;
        }
        if self.unstable {
            writeln!(f, "unstable")?;
        }
        Ok(())
    }
}

/// Free module on the presentation's generators, with basis
/// `Sq^I g` ordered by generator and then by admissible monomial.
/// Per degree, the basis index of each `(generator, admissible)` pair.
pub type FreeBasisIndex = Vec<HashMap<(usize, Monomial), usize>>;

pub fn realize_free(p: &ModulePresentation, lo: i32, hi: i32) -> Result<(RealizedModule, FreeBasisIndex)> {
    if let Some(m) = p.min_degree() {
        if m < lo {
            return Err(Error::OutOfWindow { degree: m as i64, lo: lo as i64, hi: hi as i64 });
        }
    }
    let window = DegreeWindow::new(lo, hi);
    let mut labels = Vec::new();
    let mut index = Vec::new();
    for d in window.degrees() {
        let mut l = Vec::new();
        let mut idx = HashMap::new();
        for (g, (name, gd)) in p.generators.iter().enumerate() {
            if *gd > d {
                continue;
            }
            for m in basis_of_degree((d - gd) as u32)? {
                idx.insert((g, m.clone()), l.len());
                l.push(if m.is_unit() { name.clone() } else { format!("{m} {name}") });
            }
        }
        labels.push(l);
        index.push(idx);
    }
    let inverse: Vec<Vec<(usize, Monomial)>> = index
        .iter()
        .map(|idx| {
            let mut v: Vec<_> = idx.iter().map(|(k, &i)| (i, k.clone())).collect();
            v.sort_by_key(|x| x.0);
            v.into_iter().map(|x| x.1).collect()
        })
        .collect();
    let m = RealizedModule::from_fn(p.name.clone(), window, false, labels, |i, d, k| {
        let t = d + i as i32;
        let (g, mono) = &inverse[(d - lo) as usize][k];
        let tidx = &index[(t - lo) as usize];
        let mut v = BitVec::zeros(tidx.len());
        for r in sq_times(i, mono).terms() {
            v.flip(tidx[&(*g, r.clone())]);
        }
        v
    });
    Ok((m, index))
}

pub fn realize(p: &ModulePresentation, lo: i32, hi: i32) -> Result<RealizedModule> {
    let (free, index) = realize_free(p, lo, hi)?;
    let mut rel: BTreeMap<i32, Subspace> = free.degrees().map(|d| (d, Subspace::zero(free.dim(d)))).collect();
    for d in free.degrees() {
        let mut s = Subspace::zero(free.dim(d));
        for r in p.relations.iter().filter(|r| r.degree == d) {
            let idx = &index[(d - lo) as usize];
            let mut v = BitVec::zeros(free.dim(d));
            for (theta, g) in &r.terms {
                for m in theta.terms() {
                    v.flip(idx[&(*g, m.clone())]);
                }
            }
            s.insert(v);
        }
        for e in lo..d {
            let i = (d - e) as u32;
            let m = free.sq(i, e);
            for b in rel[&e].basis() {
                s.insert(m.apply(b));
            }
        }
        rel.insert(d, s);
    }
    let (mut q, _) = quotient(&free, &rel, p.name.clone());
    if p.unstable {
        if !q.is_unstable() {
            return Err(Error::NotUnstable(format!("{} is declared unstable but has Sq^i x ≠ 0 with i > |x|", p.name)));
        }
        q.declare_unstable(true);
    }
    Ok(q)
}
