//! Self-describing run reports and the complex-versus-oracle crosscheck.
//!
//! A report is one JSON document per run: tool version, job parameters, the
//! input module, and tables whose cells all carry `(s, degree, dim, valid)`.
//! The text rendering prints one row per `s`; a `?` replaces dimensions
//! beyond the validity bound.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::complexes::{build_c_complex, build_d_complex, Cell, ChainComplex};
use crate::error::Result;
use crate::module::RealizedModule;
use crate::oracle::cache::{OracleCache, Query};
use crate::oracle::{derived_destab_oracle, derived_loops_oracle, OracleTable};

pub const TOOL: &str = "destab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct ModuleSummary {
    pub name: String,
    pub fingerprint: String,
    pub lo: i32,
    pub hi: i32,
    pub valid_hi: i32,
    pub bounded: bool,
    pub unstable: bool,
    /// `dims[n - lo]`.
    pub dims: Vec<usize>,
}

impl ModuleSummary {
    pub fn of(m: &RealizedModule) -> Self {
        ModuleSummary {
            name: m.name().to_string(),
            fingerprint: m.fingerprint(),
            lo: m.lo(),
            hi: m.hi(),
            valid_hi: m.valid_hi(),
            bounded: m.bounded(),
            unstable: m.is_unstable(),
            dims: m.dims(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub title: String,
    /// Row prefix in the text rendering, e.g. `H` or `D`.
    pub row: String,
    pub cells: Vec<Cell>,
}

impl Table {
    pub fn new(title: impl Into<String>, row: impl Into<String>, cells: Vec<Cell>) -> Self {
        Table { title: title.into(), row: row.into(), cells }
    }

    pub fn of_complex(c: &ChainComplex, s_max: usize, title: impl Into<String>) -> Self {
        Table::new(title, "H", c.table(s_max))
    }

    pub fn shortfall(&self) -> bool {
        self.cells.iter().any(|c| !c.valid)
    }

    pub fn render(&self) -> String {
        let rows: BTreeMap<usize, Vec<String>> = self.cells.iter().fold(BTreeMap::new(), |mut acc, c| {
            acc.entry(c.s).or_insert_with(Vec::new).push(if c.valid { c.dim.to_string() } else { "?".into() });
            acc
        });
        let degrees: Vec<i32> = {
            let s0 = self.cells.first().map_or(0, |c| c.s);
            self.cells.iter().filter(|c| c.s == s0).map(|c| c.degree).collect()
        };
        grid(&self.title, &self.row, &degrees, &rows)
    }
}

fn grid(title: &str, row: &str, degrees: &[i32], rows: &BTreeMap<usize, Vec<String>>) -> String {
    let labels: Vec<String> = rows.keys().map(|s| format!("{row}{s}")).collect();
    let lw = labels.iter().map(|l| l.chars().count()).max().unwrap_or(1).max(1);
    let w = degrees
        .iter()
        .map(|d| d.to_string().len())
        .chain(rows.values().flatten().map(|v| v.chars().count()))
        .max()
        .unwrap_or(1);
    let mut out = format!("{title}\n{:>lw$}", "n");
    for d in degrees {
        out.push_str(&format!(" {d:>w$}"));
    }
    out.push('\n');
    for (label, vals) in labels.iter().zip(rows.values()) {
        out.push_str(&format!("{label:>lw$}"));
        for v in vals {
            out.push_str(&format!(" {v:>w$}"));
        }
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckCell {
    pub s: usize,
    pub degree: i32,
    pub complex: usize,
    pub oracle: usize,
    /// Both sides are within validity, so the cell is compared.
    pub valid: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckTable {
    pub title: String,
    pub functor: String,
    pub t: usize,
    pub cache_hit: bool,
    pub cells: Vec<CheckCell>,
}

impl CheckTable {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }

    pub fn compared(&self) -> usize {
        self.cells.iter().filter(|c| c.valid).count()
    }

    /// `+` agreement, `X` disagreement, `.` outside joint validity.
    pub fn render(&self) -> String {
        let mut rows: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        let mut degrees = Vec::new();
        for c in &self.cells {
            if c.s == 0 {
                degrees.push(c.degree);
            }
            let mark = match (c.valid, c.pass) {
                (false, _) => ".",
                (true, true) => "+",
                (true, false) => "X",
            };
            rows.entry(c.s).or_default().push(mark.into());
        }
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        let title = format!("{}: {verdict} ({} cells compared)", self.title, self.compared());
        grid(&title, "s", &degrees, &rows)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub params: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleSummary>,
    pub tables: Vec<Table>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckTable>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            tool: TOOL,
            version: VERSION,
            command: command.into(),
            params: BTreeMap::new(),
            module: None,
            tables: Vec::new(),
            checks: Vec::new(),
            lines: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, v: impl Serialize) -> Self {
        self.params.insert(key.into(), serde_json::to_value(v).unwrap_or(Value::Null));
        self
    }

    pub fn with_module(mut self, m: &RealizedModule) -> Self {
        self.module = Some(ModuleSummary::of(m));
        self
    }

    /// Some table cell lies beyond its validity bound.
    pub fn shortfall(&self) -> bool {
        self.tables.iter().any(Table::shortfall)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckTable::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(m) = &self.module {
            out.push_str(&format!(
                "module {} window [{}, {}] valid through {}{}\n",
                m.name,
                m.lo,
                m.hi,
                m.valid_hi,
                if m.bounded { " (bounded)" } else { "" }
            ));
        }
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        for t in &self.tables {
            out.push('\n');
            out.push_str(&t.render());
        }
        for c in &self.checks {
            out.push('\n');
            out.push_str(&c.render());
        }
        out
    }
}

fn compare(title: String, c: &ChainComplex, o: &OracleTable, s_max: usize, hit: bool) -> CheckTable {
    let mut cells = Vec::new();
    for s in 0..=s_max {
        let v = c.valid_hi(s).min(o.valid_hi[s]);
        for n in c.lo().min(o.lo)..=c.hi().min(o.hi) {
            let (a, b) = (c.homology_dim(s, n), o.dim(s, n));
            let valid = n <= v;
            cells.push(CheckCell { s, degree: n, complex: a, oracle: b, valid, pass: !valid || a == b });
        }
    }
    CheckTable { title, functor: o.functor.clone(), t: o.t, cache_hit: hit, cells }
}

fn oracle_table(cache: Option<&OracleCache>, q: Query, f: impl FnOnce() -> Result<OracleTable>) -> Result<(OracleTable, bool)> {
    match cache {
        Some(c) => c.get_or_compute(&q, f),
        None => f().map(|t| (t, false)),
    }
}

/// `H_s(𝔇 M)` against the resolution oracle for `D_s M`, `s ≤ s_max`.
pub fn crosscheck_destab(m: &RealizedModule, s_max: usize, hi: i32, cache: Option<&OracleCache>) -> Result<CheckTable> {
    let d = build_d_complex(m, s_max, hi)?;
    let q = Query { functor: "destab", fingerprint: m.fingerprint(), t: 0, s_max, hi };
    let (o, hit) = oracle_table(cache, q, || derived_destab_oracle(m, s_max, hi))?;
    Ok(compare(format!("D_s({})", m.name()), &d.complex, &o, s_max, hit))
}

/// `H_s(𝔠^t N)` against the resolution oracle for `Ω^t_s N`, `s ≤ s_max`.
pub fn crosscheck_loops(n: &RealizedModule, t: usize, s_max: usize, hi: i32, cache: Option<&OracleCache>) -> Result<CheckTable> {
    let c = build_c_complex(n, t, hi)?;
    let q = Query { functor: "loops", fingerprint: n.fingerprint(), t, s_max, hi };
    let (o, hit) = oracle_table(cache, q, || derived_loops_oracle(n, t, s_max, hi))?;
    Ok(compare(format!("Ω^{t}_s({})", n.name()), &c.complex, &o, s_max, hit))
}

/// Destabilization crosscheck plus, for unstable modules, loops for every
/// `t ≤ t_max`. Returns the tables and the elapsed seconds.
pub fn crosscheck(m: &RealizedModule, s_max: usize, t_max: Option<usize>, hi: i32, cache: Option<&OracleCache>) -> Result<(Vec<CheckTable>, f64)> {
    let start = Instant::now();
    let mut out = vec![crosscheck_destab(m, s_max, hi, cache)?];
    if let Some(t_max) = t_max {
        if m.is_unstable() {
            for t in 0..=t_max {
                out.push(crosscheck_loops(m, t, s_max, hi, cache)?);
            }
        }
    }
    Ok((out, start.elapsed().as_secs_f64()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn crosscheck_of_field_passes_and_renders() {
        let (checks, _) = crosscheck(&library::f(), 2, Some(1), 10, None).unwrap();
        assert_eq!(checks.len(), 3);
        assert!(checks.iter().all(CheckTable::passed));
        let text = checks[0].render();
        assert!(text.contains("pass") && !text.contains('X'), "{text}");
    }

    #[test]
    fn table_marks_invalid_cells() {
        let cells = vec![
            Cell { s: 0, degree: 0, dim: 1, valid: true },
            Cell { s: 0, degree: 1, dim: 0, valid: false },
            Cell { s: 1, degree: 0, dim: 0, valid: true },
            Cell { s: 1, degree: 1, dim: 2, valid: true },
        ];
        let t = Table::new("demo", "H", cells);
        assert!(t.shortfall());
        assert_eq!(t.render(), "demo\n n 0 1\nH0 1 ?\nH1 0 2\n");
    }
}
