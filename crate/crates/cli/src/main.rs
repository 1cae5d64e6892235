//! Command-line front end: per-algebra queries, the classification sweep,
//! G2-structure checks, and the one-shot acceptance run.  Every verdict is
//! the corresponding library call's result; this binary only parses
//! arguments and renders reports.
//!
//! Exit codes distinguish three situations so scripts can branch: 0 means
//! the command ran and any checked property holds; 2 means the command ran
//! and the checked property fails (not strongly unimodular, excluded by the
//! classification, not a G2-form, no primitive, certificate refuted, a
//! failing acceptance criterion); 1 means the computation could not be set
//! up at all (usage, parse, or data errors).

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lieg2::catalog::{fixtures, load_catalog, resolve_entry};
use lieg2::classify::{classify_nilpotent, symbolic_extension_differentials, sweep_catalog, Outcome};
use lieg2::derivations::derivation_space;
use lieg2::error::Error;
use lieg2::g2::{
    exactness_obstruction, g2_bilinear, g2_nondegenerate, metric_volume, primitive_or_class,
    G2Candidate, Obstruction, PrimitiveOutcome, DEFAULT_ROOT_DIGITS,
};
use lieg2::liealg::LieAlgebra;
use lieg2::notation::{parse_kform, parse_matrix_rat, parse_structure_equations};
use lieg2::report::{
    self, algebra_inputs, classify_result, form_string, matrix_rows, matrix_string,
    obstruct_result, poly_form_string, reproduce_result, sweep_result, system_strings,
    unimodular_result, BettiResult, CohomologyResult, DerivationsResult, ExtendResult,
    G2CheckResult, G2PrimitiveResult, MetricReport, Report, SeriesLevel, SeriesResult,
    SymbolicExtendResult,
};
use lieg2::ring::{LinearSystem, Rat};
use lieg2::verify;

#[derive(Parser)]
#[command(
    name = "lieg2",
    version,
    about = "Exact cohomology, classification, and G2-structure checks for \
             low-dimensional Lie algebras"
)]
struct Cli {
    /// Output format for the report.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct AlgebraArgs {
    /// Structure-equation tuple, e.g. "(0,0,e12,e13,e14+e23,e15+e24)".
    #[arg(long, conflicts_with = "catalog_id")]
    tuple: Option<String>,
    /// Catalog id (1..34), an alias (worked, abelian, n1, n2), or a fixture
    /// name (s-example, h-example).
    #[arg(long)]
    catalog_id: Option<String>,
}

#[derive(Copy, Clone, ValueEnum)]
enum ConstraintChoice {
    /// Impose the strong-unimodularity trace constraints.
    Su,
    /// Leave the derivation parameters unconstrained.
    None,
}

#[derive(Subcommand)]
enum Cmd {
    /// Betti numbers b_0..b_n.
    Betti(AlgebraArgs),
    /// Canonical cohomology representatives in one degree.
    Cohomology {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        degree: usize,
    },
    /// Lower central series of the designated nilpotent ideal.
    Series(AlgebraArgs),
    /// Unimodularity and strong unimodularity, with trace witnesses.
    Unimodular(AlgebraArgs),
    /// The derivation space: dimension, parameters, generic matrix.
    Derivations(AlgebraArgs),
    /// Structure equations of the rank-one extension by a derivation.
    Extend {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Matrix literal like "[[1,0],[0,2]]", or "generic" for the
        /// symbolic extension over the full derivation space.
        #[arg(long)]
        derivation: String,
    },
    /// Test one nilpotent algebra for extensions with b2 = b3 = 0.
    Classify(AlgebraArgs),
    /// Run the classification over the whole embedded catalog.
    Sweep,
    /// Nondegeneracy, orientation, and metric data of a 3-form.
    #[command(name = "g2-check")]
    G2Check {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// The 3-form to test, e.g. "e127+e347+e567+e135-e146-e236-e245".
        #[arg(long)]
        phi: String,
        /// Decimal digits for inexact ninth roots of the volume ratio.
        #[arg(long, default_value_t = DEFAULT_ROOT_DIGITS)]
        precision: usize,
    },
    /// Solve d(alpha) = form, or report the obstructing cohomology class.
    #[command(name = "g2-primitive")]
    G2Primitive {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// The target form.
        #[arg(long)]
        form: String,
        /// Degree of the target form.
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// Exactness obstruction certificate for a nilradical's extensions.
    #[command(name = "g2-obstruct")]
    G2Obstruct {
        /// Catalog id or alias of the six-dimensional nilradical.
        #[arg(long)]
        nilradical: String,
        /// Parameter constraints to impose on the derivation family.
        #[arg(long, value_enum, default_value_t = ConstraintChoice::Su)]
        constraints: ConstraintChoice,
    },
    /// Run the acceptance checklist and report per-criterion outcomes.
    Reproduce {
        /// Run only the criterion with this tag or 1-based index.
        #[arg(long)]
        only: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let format = cli.format;
    match run(cli.command, format) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn err_str<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Resolves the algebra argument pair; `key` comes back for input echoing.
fn resolve_algebra(args: &AlgebraArgs) -> Result<(Option<String>, LieAlgebra), String> {
    match (&args.tuple, &args.catalog_id) {
        (Some(text), None) => Ok((None, err_str(parse_structure_equations(text))?)),
        (None, Some(key)) => {
            let la = match key.as_str() {
                "s-example" => err_str(fixtures())?.s_example.clone(),
                "h-example" => err_str(fixtures())?.h_example.clone(),
                _ => {
                    let entries = err_str(load_catalog())?;
                    err_str(resolve_entry(&entries, key))?.algebra.clone()
                }
            };
            Ok((Some(key.clone()), la))
        }
        _ => Err("provide exactly one of --tuple or --catalog-id".to_string()),
    }
}

fn emit<R: Serialize>(report: &Report<R>, format: Format) {
    match format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
}

fn pass_fail(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn run(cmd: Cmd, format: Format) -> Result<ExitCode, String> {
    match cmd {
        Cmd::Betti(args) => {
            let (key, la) = resolve_algebra(&args)?;
            let inputs = algebra_inputs(key.as_deref(), &la);
            let results = BettiResult { betti: la.betti_vector() };
            emit(&Report::new("betti", inputs, results), format);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Cohomology { algebra, degree } => {
            let (key, la) = resolve_algebra(&algebra)?;
            if degree > la.dim() {
                return Err(format!(
                    "degree {degree} out of range for a {}-dimensional algebra",
                    la.dim()
                ));
            }
            let mut inputs = algebra_inputs(key.as_deref(), &la);
            inputs.insert("degree".to_string(), degree.to_string());
            let h = la.cohomology(degree);
            let results = CohomologyResult {
                degree,
                dim: h.dim(),
                representatives: h.representatives().iter().map(form_string).collect(),
            };
            emit(&Report::new("cohomology", inputs, results), format);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Series(args) => {
            let (key, la) = resolve_algebra(&args)?;
            let inputs = algebra_inputs(key.as_deref(), &la);
            let levels = la
                .central_series()
                .iter()
                .enumerate()
                .map(|(i, sub)| SeriesLevel {
                    index: i,
                    dim: sub.dim(),
                    basis: sub
                        .basis_rows()
                        .iter()
                        .map(|row| row.iter().map(Rat::to_string).collect())
                        .collect(),
                })
                .collect();
            emit(&Report::new("series", inputs, SeriesResult { levels }), format);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Unimodular(args) => {
            let (key, la) = resolve_algebra(&args)?;
            let inputs = algebra_inputs(key.as_deref(), &la);
            let rep = la.unimodularity();
            let pass = rep.strongly_unimodular;
            emit(&Report::new("unimodular", inputs, unimodular_result(&rep)), format);
            Ok(pass_fail(pass))
        }
        Cmd::Derivations(args) => {
            let (key, la) = resolve_algebra(&args)?;
            let inputs = algebra_inputs(key.as_deref(), &la);
            let ds = derivation_space(&la);
            let results = DerivationsResult {
                dim: ds.vars().len(),
                parameters: ds.vars().names().to_vec(),
                generic: matrix_rows(ds.generic()),
            };
            emit(&Report::new("derivations", inputs, results), format);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Extend { algebra, derivation } => {
            let (key, la) = resolve_algebra(&algebra)?;
            let mut inputs = algebra_inputs(key.as_deref(), &la);
            if derivation == "generic" {
                inputs.insert("derivation".to_string(), "generic".to_string());
                let ds = derivation_space(&la);
                let diffs = symbolic_extension_differentials(&la, ds.generic());
                let results = SymbolicExtendResult {
                    parameters: ds.vars().names().to_vec(),
                    differentials: diffs.iter().map(poly_form_string).collect(),
                };
                emit(&Report::new("extend", inputs, results), format);
                return Ok(ExitCode::SUCCESS);
            }
            let d = err_str(parse_matrix_rat(&derivation))?;
            inputs.insert("derivation".to_string(), matrix_string(&d));
            let ext = err_str(la.extend_by_derivation(&d))?;
            let results = ExtendResult {
                differentials: ext.differentials().iter().map(form_string).collect(),
                tuple: lieg2::notation::render_structure_equations(&ext),
                strongly_unimodular: ext.unimodularity().strongly_unimodular,
                betti: ext.betti_vector(),
            };
            emit(&Report::new("extend", inputs, results), format);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Classify(args) => {
            let (key, la) = resolve_algebra(&args)?;
            let inputs = algebra_inputs(key.as_deref(), &la);
            let verdict = err_str(classify_nilpotent(&la))?;
            let admits = matches!(verdict.outcome, Outcome::Admits { .. });
            let tuple = lieg2::notation::render_structure_equations(&la);
            emit(&Report::new("classify", inputs, classify_result(&verdict, tuple)), format);
            Ok(pass_fail(admits))
        }
        Cmd::Sweep => {
            let entries = err_str(load_catalog())?;
            let verdicts = err_str(sweep_catalog())?;
            let tuples: Vec<String> = entries.iter().map(|e| e.tuple.clone()).collect();
            let inputs = BTreeMap::from([(
                "catalog".to_string(),
                format!("{} entries", entries.len()),
            )]);
            emit(&Report::new("sweep", inputs, sweep_result(&verdicts, &tuples)), format);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::G2Check { algebra, phi, precision } => {
            let (key, la) = resolve_algebra(&algebra)?;
            let form = err_str(parse_kform(&phi, la.dim(), 3))?;
            let mut inputs = algebra_inputs(key.as_deref(), &la);
            inputs.insert("phi".to_string(), form_string(&form));
            inputs.insert("precision".to_string(), precision.to_string());
            let cand = err_str(G2Candidate::on_algebra(&la, form))?;
            let closed = cand.is_closed();
            let data = g2_bilinear(&cand);
            let nd = g2_nondegenerate(&cand);
            let metric = if nd.is_g2 {
                let mv = err_str(metric_volume(&cand, precision))?;
                let (root, exact) = report::ninth_root_strings(&mv.root);
                Some(MetricReport {
                    b: matrix_rows(&mv.b),
                    det_b: mv.det_b.to_string(),
                    ninth_root: root,
                    exact,
                    metric: mv.metric.as_ref().map(matrix_rows),
                })
            } else {
                None
            };
            let results = G2CheckResult {
                closed,
                bilinear: matrix_rows(&data.matrix),
                bilinear_det: data.det.to_string(),
                is_g2: nd.is_g2,
                sign: nd.sign,
                witness: nd
                    .witness
                    .map(|w| w.iter().map(Rat::to_string).collect()),
                metric_volume: metric,
            };
            emit(&Report::new("g2-check", inputs, results), format);
            Ok(pass_fail(closed && nd.is_g2))
        }
        Cmd::G2Primitive { algebra, form, degree } => {
            let (key, la) = resolve_algebra(&algebra)?;
            let target = err_str(parse_kform(&form, la.dim(), degree))?;
            let mut inputs = algebra_inputs(key.as_deref(), &la);
            inputs.insert("form".to_string(), form_string(&target));
            inputs.insert("degree".to_string(), degree.to_string());
            let (results, pass) = match primitive_or_class(la.differentials(), &target) {
                Ok(PrimitiveOutcome::Primitive(alpha)) => (
                    G2PrimitiveResult {
                        closed: true,
                        exact: true,
                        primitive: Some(form_string(&alpha)),
                        class_residue: None,
                        class_coordinates: None,
                    },
                    true,
                ),
                Ok(PrimitiveOutcome::NonExact { residue }) => {
                    let coords = la
                        .cohomology(degree)
                        .coords(&residue)
                        .map(|c| c.iter().map(Rat::to_string).collect());
                    (
                        G2PrimitiveResult {
                            closed: true,
                            exact: false,
                            primitive: None,
                            class_residue: Some(form_string(&residue)),
                            class_coordinates: coords,
                        },
                        false,
                    )
                }
                Err(Error::NotClosed(_)) => (
                    G2PrimitiveResult {
                        closed: false,
                        exact: false,
                        primitive: None,
                        class_residue: None,
                        class_coordinates: None,
                    },
                    false,
                ),
                Err(e) => return Err(e.to_string()),
            };
            emit(&Report::new("g2-primitive", inputs, results), format);
            Ok(pass_fail(pass))
        }
        Cmd::G2Obstruct { nilradical, constraints } => {
            let entries = err_str(load_catalog())?;
            let entry = err_str(resolve_entry(&entries, &nilradical))?;
            let la = entry.algebra.clone();
            let ds = derivation_space(&la);
            let sys = match constraints {
                ConstraintChoice::Su => err_str(lieg2::classify::su_constraints(&la, ds.generic()))?,
                ConstraintChoice::None => LinearSystem::new(ds.vars().clone()),
            };
            let obstruction = err_str(exactness_obstruction(&la, ds.generic(), &sys))?;
            let certified = matches!(obstruction, Obstruction::Certificate(_));
            let mut inputs = algebra_inputs(Some(&nilradical), &la);
            inputs.insert(
                "constraints".to_string(),
                match constraints {
                    ConstraintChoice::Su => format!("su: {}", system_strings(&sys).join("; ")),
                    ConstraintChoice::None => "none".to_string(),
                },
            );
            let results = obstruct_result(nilradical.clone(), &sys, &obstruction);
            emit(&Report::new("g2-obstruct", inputs, results), format);
            Ok(pass_fail(certified))
        }
        Cmd::Reproduce { only } => {
            let outcomes = verify::run_matching(only.as_deref());
            if outcomes.is_empty() {
                return Err(format!(
                    "no criterion matches `{}`; valid tags: {}",
                    only.unwrap_or_default(),
                    verify::criterion_tags().join(", ")
                ));
            }
            let mut inputs = BTreeMap::new();
            inputs.insert(
                "only".to_string(),
                only.unwrap_or_else(|| "all".to_string()),
            );
            let results = reproduce_result(outcomes);
            let pass = results.all_pass;
            emit(&Report::new("reproduce", inputs, results), format);
            Ok(pass_fail(pass))
        }
    }
}
