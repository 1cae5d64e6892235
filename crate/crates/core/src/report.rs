//! Deterministic structured reports: one self-describing JSON tree per
//! command, with canonical string forms for every polynomial, form and
//! matrix.  The human-readable rendering is derived from the same tree, so
//! the two outputs cannot disagree on content.  Wall-clock timing is never
//! recorded; byte-identical inputs yield byte-identical reports.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;
use serde_json::Value;

use crate::classify::{ClassificationVerdict, Evidence, Outcome};
use crate::exterior::KForm;
use crate::g2::{NinthRoot, Obstruction};
use crate::liealg::{LieAlgebra, UnimodularityReport};
use crate::notation::{render_kform_compact, render_matrix, render_structure_equations};
use crate::ring::{LinearSystem, Matrix, Poly, Rat, Scalar};
use crate::verify::CriterionOutcome;

/// Envelope common to every command.
#[derive(Serialize)]
pub struct Report<R: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Echoed inputs in canonical form.
    pub inputs: BTreeMap<String, String>,
    pub results: R,
    /// Always null: timing would break report determinism.
    pub timing: Option<u64>,
}

impl<R: Serialize> Report<R> {
    pub fn new(command: &str, inputs: BTreeMap<String, String>, results: R) -> Report<R> {
        Report {
            tool: "lieg2",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            inputs,
            results,
            timing: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("reports serialize");
        out.push('\n');
        out
    }

    /// Indented key/value rendering of the same tree.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        let mut out = String::new();
        render_value(&value, 0, &mut out);
        out
    }
}

fn is_scalar(v: &Value) -> bool {
    matches!(v, Value::Null | Value::Bool(_) | Value::Number(_) | Value::String(_))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => "none".to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => unreachable!("not a scalar"),
    }
}

fn render_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (key, val) in map {
                if is_scalar(val) {
                    out.push_str(&format!("{pad}{key}: {}\n", scalar_text(val)));
                } else if val.as_array().is_some_and(|a| a.iter().all(is_scalar)) {
                    let items: Vec<String> =
                        val.as_array().unwrap().iter().map(scalar_text).collect();
                    out.push_str(&format!("{pad}{key}: [{}]\n", items.join(", ")));
                } else {
                    out.push_str(&format!("{pad}{key}:\n"));
                    render_value(val, indent + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if is_scalar(item) {
                    out.push_str(&format!("{pad}- {}\n", scalar_text(item)));
                } else if item.as_array().is_some_and(|a| a.iter().all(is_scalar)) {
                    let cells: Vec<String> =
                        item.as_array().unwrap().iter().map(scalar_text).collect();
                    out.push_str(&format!("{pad}- [{}]\n", cells.join(", ")));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render_value(item, indent + 1, out);
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar_text(v))),
    }
}

/// Rows of a matrix as canonical cell strings.
pub fn matrix_rows<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<String>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)].to_string()).collect())
        .collect()
}

/// The equations of a linear system as canonical `= 0` left-hand sides.
pub fn system_strings(sys: &LinearSystem) -> Vec<String> {
    sys.equations().iter().map(|p| p.to_string()).collect()
}

/// Exact decimal rendering of a rational whose denominator divides
/// 10^digits (the shape produced by truncated roots).
pub fn decimal_string(value: &Rat, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = value * Rat::from_integer(scale.clone());
    assert!(scaled.is_integer(), "not a {digits}-digit decimal");
    let mag = scaled.to_integer().abs();
    let digits_str = format!("{:0>width$}", mag.to_string(), width = digits + 1);
    let split = digits_str.len() - digits;
    let sign = if value.is_negative() { "-" } else { "" };
    format!("{sign}{}.{}", &digits_str[..split], &digits_str[split..])
}

#[derive(Serialize)]
pub struct BettiResult {
    pub betti: Vec<usize>,
}

#[derive(Serialize)]
pub struct CohomologyResult {
    pub degree: usize,
    pub dim: usize,
    pub representatives: Vec<String>,
}

#[derive(Serialize)]
pub struct SeriesLevel {
    pub index: usize,
    pub dim: usize,
    pub basis: Vec<Vec<String>>,
}

#[derive(Serialize)]
pub struct SeriesResult {
    pub levels: Vec<SeriesLevel>,
}

#[derive(Serialize)]
pub struct TraceWitness {
    pub basis_index: usize,
    /// Central-series level for strong-unimodularity failures.
    pub level: Option<usize>,
    pub trace: String,
}

#[derive(Serialize)]
pub struct UnimodularResult {
    pub unimodular: bool,
    pub strongly_unimodular: bool,
    pub nonunimodular_witness: Option<TraceWitness>,
    pub strong_witness: Option<TraceWitness>,
}

pub fn unimodular_result(rep: &UnimodularityReport) -> UnimodularResult {
    UnimodularResult {
        unimodular: rep.unimodular,
        strongly_unimodular: rep.strongly_unimodular,
        nonunimodular_witness: rep.nonunimodular_witness.as_ref().map(|(i, t)| TraceWitness {
            basis_index: *i,
            level: None,
            trace: t.to_string(),
        }),
        strong_witness: rep.strong_witness.as_ref().map(|w| TraceWitness {
            basis_index: w.basis_index,
            level: Some(w.level),
            trace: w.trace.to_string(),
        }),
    }
}

#[derive(Serialize)]
pub struct DerivationsResult {
    pub dim: usize,
    pub parameters: Vec<String>,
    pub generic: Vec<Vec<String>>,
}

#[derive(Serialize)]
pub struct ExtendResult {
    pub differentials: Vec<String>,
    pub tuple: String,
    pub strongly_unimodular: bool,
    pub betti: Vec<usize>,
}

#[derive(Serialize)]
pub struct SymbolicExtendResult {
    pub parameters: Vec<String>,
    pub differentials: Vec<String>,
}

#[derive(Serialize)]
pub struct DegreeSummary {
    pub degree: usize,
    pub matrix_size: usize,
    pub determinant: Option<String>,
    pub vanishes: bool,
    pub evidence: String,
}

#[derive(Serialize)]
pub struct ClassifyResult {
    pub id: Option<usize>,
    pub tuple: String,
    pub constraints: Vec<String>,
    pub betti: Vec<usize>,
    pub degrees: Vec<DegreeSummary>,
    pub verdict: String,
    pub excluded_at: Option<usize>,
    pub sample_derivation: Option<Vec<Vec<String>>>,
    pub sample_determinants: Option<Vec<String>>,
}

fn evidence_string(e: &Evidence) -> String {
    match e {
        Evidence::Vacuous => "vacuous: the cohomology degree is zero-dimensional".to_string(),
        Evidence::SamplePoint { point, value } => {
            let coords: Vec<String> = point.iter().map(|r| r.to_string()).collect();
            format!("sample point ({}) with determinant {}", coords.join(","), value)
        }
        Evidence::ConstantKernel { vector, transposed } => {
            let coords: Vec<String> = vector.iter().map(|r| r.to_string()).collect();
            let side = if *transposed { "left" } else { "right" };
            format!("constant {side} kernel vector ({})", coords.join(","))
        }
        Evidence::SymbolicZero => "substituted determinant is the zero polynomial".to_string(),
        Evidence::SymbolicNonzero => {
            "substituted determinant is a nonzero polynomial".to_string()
        }
    }
}

pub fn classify_result(v: &ClassificationVerdict, tuple: String) -> ClassifyResult {
    let degrees = v
        .degrees
        .iter()
        .map(|d| DegreeSummary {
            degree: d.degree,
            matrix_size: d.size,
            determinant: d
                .substituted_det
                .as_ref()
                .or(d.raw_det.as_ref())
                .map(|p| p.to_string()),
            vanishes: d.vanishes,
            evidence: evidence_string(&d.evidence),
        })
        .collect();
    let (verdict, excluded_at, sample_derivation, sample_determinants) = match &v.outcome {
        Outcome::Excluded { degree } => {
            (format!("excluded at degree {degree}"), Some(*degree), None, None)
        }
        Outcome::Admits { derivation, det_values, .. } => (
            "admits".to_string(),
            None,
            Some(matrix_rows(derivation)),
            Some(det_values.iter().map(|r| r.to_string()).collect()),
        ),
    };
    ClassifyResult {
        id: v.id,
        tuple,
        constraints: system_strings(&v.su),
        betti: v.betti.to_vec(),
        degrees,
        verdict,
        excluded_at,
        sample_derivation,
        sample_determinants,
    }
}

#[derive(Serialize)]
pub struct SweepRecord {
    pub id: usize,
    pub tuple: String,
    pub verdict: String,
    pub excluded_at: Option<usize>,
}

#[derive(Serialize)]
pub struct SweepResult {
    pub total: usize,
    pub admitting: Vec<usize>,
    pub excluded_by_degree: BTreeMap<String, usize>,
    pub records: Vec<SweepRecord>,
}

pub fn sweep_result(verdicts: &[ClassificationVerdict], tuples: &[String]) -> SweepResult {
    let mut admitting = Vec::new();
    let mut by_degree: BTreeMap<String, usize> = BTreeMap::new();
    let mut records = Vec::new();
    for (v, tuple) in verdicts.iter().zip(tuples) {
        let id = v.id.expect("sweep verdicts carry ids");
        match &v.outcome {
            Outcome::Excluded { degree } => {
                *by_degree.entry(format!("degree {degree}")).or_insert(0) += 1;
                records.push(SweepRecord {
                    id,
                    tuple: tuple.clone(),
                    verdict: format!("excluded at degree {degree}"),
                    excluded_at: Some(*degree),
                });
            }
            Outcome::Admits { .. } => {
                admitting.push(id);
                records.push(SweepRecord {
                    id,
                    tuple: tuple.clone(),
                    verdict: "admits".to_string(),
                    excluded_at: None,
                });
            }
        }
    }
    SweepResult { total: verdicts.len(), admitting, excluded_by_degree: by_degree, records }
}

#[derive(Serialize)]
pub struct MetricReport {
    /// b = B/6, the quadratic form relative to the reference volume.
    pub b: Vec<Vec<String>>,
    pub det_b: String,
    pub ninth_root: String,
    pub exact: bool,
    pub metric: Option<Vec<Vec<String>>>,
}

#[derive(Serialize)]
pub struct G2CheckResult {
    pub closed: bool,
    pub bilinear: Vec<Vec<String>>,
    pub bilinear_det: String,
    pub is_g2: bool,
    pub sign: Option<i8>,
    pub witness: Option<Vec<String>>,
    pub metric_volume: Option<MetricReport>,
}

pub fn ninth_root_strings(root: &NinthRoot) -> (String, bool) {
    match root {
        NinthRoot::Exact(r) => (r.to_string(), true),
        NinthRoot::Approx { value, digits } => (decimal_string(value, *digits), false),
    }
}

#[derive(Serialize)]
pub struct G2PrimitiveResult {
    pub closed: bool,
    pub exact: bool,
    pub primitive: Option<String>,
    pub class_residue: Option<String>,
    pub class_coordinates: Option<Vec<String>>,
}

#[derive(Serialize)]
pub struct WitnessReport {
    pub vector: String,
    pub polynomial: String,
    pub identically_zero: bool,
}

#[derive(Serialize)]
pub struct ObstructResult {
    pub family: String,
    pub constraints: Vec<String>,
    pub verdict: String,
    /// Orientation convention fixing the overall sign of each polynomial.
    pub sign_convention: &'static str,
    pub witnesses: Vec<WitnessReport>,
    pub remainders: Option<Vec<WitnessReport>>,
}

pub const SIGN_CONVENTION: &str = "coefficients are read against e^{1...7} with \
ascending-index wedge ordering; P_v is the top coefficient of i_v(da)^i_v(da)^da";

pub fn obstruct_result(
    family: String,
    constraints: &LinearSystem,
    obstruction: &Obstruction,
) -> ObstructResult {
    match obstruction {
        Obstruction::Certificate(c) => ObstructResult {
            family,
            constraints: system_strings(constraints),
            verdict: "certificate".to_string(),
            sign_convention: SIGN_CONVENTION,
            witnesses: c
                .witnesses
                .iter()
                .map(|w| WitnessReport {
                    vector: format!("e{}", w.vector),
                    polynomial: w.raw.to_string(),
                    identically_zero: w.identically_zero,
                })
                .collect(),
            remainders: None,
        },
        Obstruction::Refuted { remainders } => ObstructResult {
            family,
            constraints: system_strings(constraints),
            verdict: "refuted".to_string(),
            sign_convention: SIGN_CONVENTION,
            witnesses: Vec::new(),
            remainders: Some(
                remainders
                    .iter()
                    .map(|(v, p)| WitnessReport {
                        vector: format!("e{v}"),
                        polynomial: p.to_string(),
                        identically_zero: false,
                    })
                    .collect(),
            ),
        },
    }
}

#[derive(Serialize)]
pub struct ReproduceResult {
    pub total: usize,
    pub passed: usize,
    pub all_pass: bool,
    pub criteria: Vec<CriterionOutcome>,
}

pub fn reproduce_result(criteria: Vec<CriterionOutcome>) -> ReproduceResult {
    let passed = criteria.iter().filter(|c| c.pass).count();
    ReproduceResult { total: criteria.len(), passed, all_pass: passed == criteria.len(), criteria }
}

/// Canonical inputs echo for an algebra argument.
pub fn algebra_inputs(key: Option<&str>, la: &LieAlgebra) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    if let Some(k) = key {
        map.insert("catalog-id".to_string(), k.to_string());
    }
    map.insert("algebra".to_string(), render_structure_equations(la));
    map
}

/// Canonical rendering of a rational form (alias kept close to the report
/// types so command code reads uniformly).
pub fn form_string(f: &KForm<Rat>) -> String {
    render_kform_compact(f)
}

/// Canonical rendering of a rational matrix literal.
pub fn matrix_string(m: &Matrix<Rat>) -> String {
    render_matrix(m)
}

/// Rendering for forms with polynomial coefficients, one parenthesized
/// coefficient per basis monomial.
pub fn poly_form_string(f: &KForm<Poly>) -> String {
    let terms: Vec<String> = f
        .terms()
        .map(|(m, c)| {
            let digits: String = m.indices().iter().map(|i| i.to_string()).collect();
            format!("({c})*e{digits}")
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;
    use num_traits::Zero;

    #[test]
    fn reports_render_deterministically() {
        let mut inputs = BTreeMap::new();
        inputs.insert("algebra".to_string(), "(0,0,0,0,e12,e34)".to_string());
        let report = Report::new("betti", inputs, BettiResult { betti: vec![1, 2, 3] });
        let a = report.to_json();
        let b = report.to_json();
        assert_eq!(a, b);
        assert!(a.ends_with('\n'));
        assert!(a.contains("\"timing\": null"));
        let text = report.to_text();
        assert!(text.contains("command: betti"));
        assert!(text.contains("betti: [1, 2, 3]"));
    }

    #[test]
    fn decimal_rendering_is_exact() {
        assert_eq!(decimal_string(&rat(5, 4), 2), "1.25");
        assert_eq!(decimal_string(&rat(-1, 8), 3), "-0.125");
        assert_eq!(decimal_string(&rat(7, 1), 2), "7.00");
        assert_eq!(decimal_string(&Rat::zero(), 4), "0.0000");
    }

    #[test]
    fn scaled_decimals_reject_unrepresentable_values() {
        let caught = std::panic::catch_unwind(|| decimal_string(&rat(1, 3), 5));
        assert!(caught.is_err());
    }
}
