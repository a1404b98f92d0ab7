//! Browser front end: Adem normal forms, Singer-complex homology tables and
//! Dickson invariants. Each export returns text for a `<pre>` block.

use wasm_bindgen::prelude::*;

use destab::complexes::build_d_complex;
use destab::library;
use destab::module::RealizedModule;
use destab::presentation::{parse_presentation, realize};
use destab::report::{Report, Table};
use destab::singer::dickson;
use destab::steenrod::parse_element;

/// Largest internal degree the page will compute; keeps a click under a second.
const MAX_HI: i32 = 24;
const MAX_S: usize = 4;

fn module(input: &str, hi: i32) -> Result<RealizedModule, String> {
    let input = input.trim();
    if input.starts_with('@') {
        return library::builtin(input, hi).map_err(|e| e.to_string());
    }
    let p = parse_presentation(input).map_err(|e| e.to_string())?;
    let lo = p.min_degree().unwrap_or(0);
    let mut m = realize(&p, lo, hi).map_err(|e| e.to_string())?;
    if p.unstable {
        m.declare_unstable(true);
    }
    Ok(m)
}

pub fn adem_text(expr: &str) -> Result<String, String> {
    parse_element(expr, 1, 1).map(|e| e.to_string()).map_err(|e| e.to_string())
}

/// `H_s(𝔇 M)` for `s ≤ s_max`; `json` selects the structured report.
pub fn dcomplex_text(input: &str, s_max: usize, hi: i32, json: bool) -> Result<String, String> {
    if s_max > MAX_S || hi > MAX_HI {
        return Err(format!("the demo stops at s ≤ {MAX_S} and degree ≤ {MAX_HI}"));
    }
    let m = module(input, hi)?;
    let d = build_d_complex(&m, s_max, hi).map_err(|e| e.to_string())?;
    let mut r = Report::new("dcomplex").param("input", input).param("smax", s_max).param("window", [m.lo(), hi]).with_module(&m);
    r.tables.push(Table::of_complex(&d.complex, s_max, format!("D_s({})", m.name())));
    Ok(if json { r.to_json() } else { r.to_text() })
}

pub fn dickson_text(s: usize, hi: i32) -> Result<String, String> {
    if s == 0 || s > 4 {
        return Err("rank must be between 1 and 4".into());
    }
    let mut out = String::new();
    for (i, g) in dickson::dickson_generators(s).iter().enumerate() {
        out.push_str(&format!("ω{s},{i} (degree {}) = {g}\n", dickson::generator_degree(s, i)));
    }
    let cells = (0..=hi.clamp(0, 64)).map(|n| destab::complexes::Cell { s, degree: n, dim: dickson::dim(s, n as i64), valid: true }).collect();
    out.push('\n');
    out.push_str(&Table::new(format!("dim D({s})^n"), "D", cells).render());
    Ok(out)
}

#[wasm_bindgen]
pub fn adem(expr: &str) -> Result<String, JsValue> {
    adem_text(expr).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn dcomplex(input: &str, s_max: usize, hi: i32, json: bool) -> Result<String, JsValue> {
    dcomplex_text(input, s_max, hi, json).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn dickson(s: usize, hi: i32) -> Result<String, JsValue> {
    dickson_text(s, hi).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exports_answer_on_native() {
        assert_eq!(adem_text("Sq2 Sq2").unwrap(), "Sq3 Sq1");
        let t = dcomplex_text("@SigmaF -1", 1, 8, false).unwrap();
        assert!(t.lines().any(|l| l.split_whitespace().eq(["H1", "0", "1", "1", "1", "1", "1", "1", "1", "1", "1"])), "{t}");
        let j = dcomplex_text("module M\ngenerator x 0\nrelation Sq1 x\n", 1, 6, true).unwrap();
        assert!(j.contains("\"command\": \"dcomplex\""));
        assert!(dickson_text(2, 6).unwrap().starts_with("ω2,0 (degree 3)"));
        assert!(dcomplex_text("@F", 9, 8, false).is_err());
    }
}
