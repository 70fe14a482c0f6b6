//! Command-line surface for exact computations with Nijenhuis operator
//! families over semigroup-indexed associative algebras.
//!
//! Exit codes: 0 success, 1 mathematical verdict failure, 2 parse error,
//! 3 semantic error.

use omega_nij_cli::format;
use omega_nij_cli::report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use omega_nij_core::algebra::{Context, OperatorFamily};
use omega_nij_core::cochain::{Cochain, ComplexKind, Complexes, ConeCochain};
use omega_nij_core::cohomology::{
    coboundary_primitive_cone, coboundary_primitive_plain, cohomology, is_cocycle_cone,
    is_cocycle_plain, les_check, BasisVariant, CohomologyError, EngineOptions,
};
use omega_nij_core::deformation::{
    check_deformation, gauge_transform, infinitesimal, trivialization_step,
};
use omega_nij_core::extension::{
    build_extension, classes_equal, extension_class, extract_cocycle, induced_module_from_section,
    iso_from_coboundary, verify_extension_iso, IsoVerdict, Section,
};
use omega_nij_core::scalar::{PrimeField, Rational};
use omega_nij_core::validate::{
    rb_relation_check, validate_bimodule, validate_nf_bimodule, validate_nijenhuis_family,
    validate_omega_associativity,
};

use format::{
    field_of, parse_cochain, parse_context, parse_deformation, parse_extension_block, parse_gauge,
    read_doc, serialize_cone_cochain, serialize_context, serialize_deformation,
    serialize_extension, write_doc, Backend, FieldSpec, InstanceDoc, IoError,
};
use report::{add_validation, violation_lines, Report};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ComplexArg {
    Alg,
    Nf,
    Nfa,
}

impl From<ComplexArg> for ComplexKind {
    fn from(value: ComplexArg) -> Self {
        match value {
            ComplexArg::Alg => ComplexKind::Alg,
            ComplexArg::Nf => ComplexKind::Nf,
            ComplexArg::Nfa => ComplexKind::Nfa,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "omega-nij",
    about = "Exact validators, cohomology, deformations and abelian extensions \
             for Nijenhuis operator families on semigroup-indexed algebras"
)]
struct Cli {
    /// Override the scalar backend of the input files: `rational` or `prime:<p>`
    #[arg(long, global = true)]
    field: Option<String>,
    /// Report rendering
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Turn warnings (such as skipped degree-0 work without a unit) into failures
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every applicable validator on an instance file
    Validate { file: PathBuf },
    /// Emit the deformed-product instance
    Star {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Exact cohomology table of one of the three complexes
    Cohomology {
        file: PathBuf,
        #[arg(long, value_enum)]
        complex: ComplexArg,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        representatives: bool,
    },
    /// Cocycle and coboundary verdicts for a stored cochain
    Cocycle {
        file: PathBuf,
        /// File holding the cochain (may be the instance file itself)
        #[arg(long)]
        cochain: PathBuf,
        /// Name inside the `cochains` block
        #[arg(long, default_value = "main")]
        name: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum)]
        complex: ComplexArg,
    },
    /// Abelian extension pipelines
    #[command(subcommand)]
    Extension(ExtensionCmd),
    /// Formal deformation pipelines
    #[command(subcommand)]
    Deform(DeformCmd),
    /// Square-pattern and Rota-Baxter style relation report
    Relate { file: PathBuf },
    /// Verify exactness of the long exact sequence
    Les {
        file: PathBuf,
        #[arg(long)]
        max_degree: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ExtensionCmd {
    /// Build the extension of the instance by its module from the file's
    /// `extension` block
    Build {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Extract the cocycle determined by a section (canonical by default)
    Extract {
        file: PathBuf,
        /// JSON file with per-index twist matrices `A -> M`
        #[arg(long)]
        section: Option<PathBuf>,
    },
    /// Decide whether two extensions represent the same cohomology class
    Compare { first: PathBuf, second: PathBuf },
    /// Construct and verify an isomorphism between cohomologous extensions
    Iso { first: PathBuf, second: PathBuf },
}

#[derive(Subcommand, Debug)]
enum DeformCmd {
    /// Check the deformation equations order by order
    Check { file: PathBuf },
    /// Report the infinitesimal and its cocycle verdict
    Infinitesimal { file: PathBuf },
    /// Apply the file's gauge block and emit the transformed deformation
    Gauge {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Gauge away the order-one part when its class vanishes
    TrivializeStep {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(true) => 0u8,
        Ok(false) => 1,
        Err(IoError::Parse(msg)) => {
            eprintln!("parse error: {msg}");
            2
        }
        Err(IoError::Semantic(msg)) => {
            eprintln!("semantic error: {msg}");
            3
        }
    };
    ExitCode::from(code)
}

fn primary_file(cmd: &Command) -> &Path {
    match cmd {
        Command::Validate { file }
        | Command::Star { file, .. }
        | Command::Cohomology { file, .. }
        | Command::Cocycle { file, .. }
        | Command::Relate { file }
        | Command::Les { file, .. } => file,
        Command::Extension(e) => match e {
            ExtensionCmd::Build { file, .. } | ExtensionCmd::Extract { file, .. } => file,
            ExtensionCmd::Compare { first, .. } | ExtensionCmd::Iso { first, .. } => first,
        },
        Command::Deform(d) => match d {
            DeformCmd::Check { file }
            | DeformCmd::Infinitesimal { file }
            | DeformCmd::Gauge { file, .. }
            | DeformCmd::TrivializeStep { file, .. } => file,
        },
    }
}

fn run(cli: &Cli) -> Result<bool, IoError> {
    let doc = read_doc(primary_file(&cli.command))?;
    let spec = match &cli.field {
        Some(s) => FieldSpec::parse(s).map_err(IoError::Parse)?,
        None => field_of(&doc)?,
    };
    let (report, ok) = match spec {
        FieldSpec::Rational => execute::<Rational>(cli, &doc, &spec)?,
        FieldSpec::Prime(_) => execute::<PrimeField>(cli, &doc, &spec)?,
    };
    match cli.format {
        Format::Text => print!("{}", report.render_text()),
        Format::Json => print!("{}", report.render_json()),
    }
    Ok(ok)
}

/// Makes a validated complex context or reports the failure as a math
/// verdict (exit 1), never as a crash.
fn complexes_or_report<S: Backend>(
    ctx: &Context<S>,
    report: &mut Report,
) -> Result<Option<Complexes<S>>, IoError> {
    match Complexes::new(ctx.clone()) {
        Ok(cx) => Ok(Some(cx)),
        Err(e) => {
            report.ok = false;
            report
                .section("instance validity")
                .lines
                .push(format!("FAIL: {e}"));
            Ok(None)
        }
    }
}

fn cohomology_error(report: &mut Report, err: CohomologyError) {
    report.ok = false;
    report.section("engine").lines.push(format!("FAIL: {err}"));
}

fn execute<S: Backend>(
    cli: &Cli,
    doc: &InstanceDoc,
    spec: &FieldSpec,
) -> Result<(Report, bool), IoError> {
    let ctx: Context<S> = parse_context(doc, spec)?;
    match &cli.command {
        Command::Validate { .. } => {
            let mut report = Report::new("validate");
            let sg = &ctx.semigroup;
            let assoc = validate_omega_associativity(&ctx.algebra, sg)
                .map_err(|e| IoError::Semantic(e.to_string()))?;
            add_validation(&mut report, sg, "omega associativity", &assoc);
            let nij = validate_nijenhuis_family(&ctx.algebra, sg, &ctx.nijenhuis)
                .map_err(|e| IoError::Semantic(e.to_string()))?;
            add_validation(&mut report, sg, "nijenhuis family", &nij);
            let bim = validate_bimodule(&ctx.algebra, sg, &ctx.module)
                .map_err(|e| IoError::Semantic(e.to_string()))?;
            add_validation(&mut report, sg, "bimodule axioms", &bim);
            if bim.verdict() {
                let nf = validate_nf_bimodule(&ctx.algebra, sg, &ctx.nijenhuis, &ctx.module)
                    .map_err(|e| IoError::Semantic(e.to_string()))?;
                add_validation(&mut report, sg, "nijenhuis bimodule", &nf);
            }
            let ok = report.ok;
            Ok((report, ok))
        }

        Command::Star { output, .. } => {
            let mut report = Report::new("star");
            let Some(cx) = complexes_or_report(&ctx, &mut report)? else {
                return Ok((report, false));
            };
            let star = cx.star().clone();
            let star_ctx =
                Context::with_regular_module(ctx.semigroup.clone(), star, ctx.nijenhuis.clone());
            let assoc = validate_omega_associativity(&star_ctx.algebra, &ctx.semigroup)
                .map_err(|e| IoError::Semantic(e.to_string()))?;
            add_validation(
                &mut report,
                &ctx.semigroup,
                "deformed product associativity",
                &assoc,
            );
            let nij = validate_nijenhuis_family(&star_ctx.algebra, &ctx.semigroup, &ctx.nijenhuis)
                .map_err(|e| IoError::Semantic(e.to_string()))?;
            add_validation(&mut report, &ctx.semigroup, "family still Nijenhuis", &nij);
            write_doc(output, &serialize_context(&star_ctx, spec))?;
            report
                .section("output")
                .lines
                .push(format!("wrote {}", output.display()));
            let ok = report.ok;
            Ok((report, ok))
        }

        Command::Cohomology {
            complex,
            max_degree,
            representatives,
            ..
        } => {
            let mut report = Report::new("cohomology");
            let Some(cx) = complexes_or_report(&ctx, &mut report)? else {
                return Ok((report, false));
            };
            let opts = EngineOptions {
                representatives: *representatives,
                ..EngineOptions::default()
            };
            let kind: ComplexKind = (*complex).into();
            match cohomology(&cx, kind, *max_degree, &opts) {
                Err(e) => {
                    cohomology_error(&mut report, e);
                    let ok = report.ok;
                    Ok((report, ok))
                }
                Ok(table) => {
                    let strict_fail = cli.strict && !table.notices.is_empty();
                    report.notices.extend(table.notices.clone());
                    let section = report.section(format!("complex {}", kind.name()));
                    section.table = Some(report::Table {
                        header: vec![
                            "degree".into(),
                            "dim C".into(),
                            "rank d".into(),
                            "dim ker".into(),
                            "dim H".into(),
                        ],
                        rows: table
                            .rows
                            .iter()
                            .map(|r| {
                                vec![
                                    r.degree.to_string(),
                                    r.dim_space.to_string(),
                                    r.rank_out.to_string(),
                                    r.dim_kernel.to_string(),
                                    r.dim_h.to_string(),
                                ]
                            })
                            .collect(),
                    });
                    if let Some(reps) = &table.representatives {
                        let sg = ctx.semigroup.clone();
                        let dims = cx.dims();
                        for (row, degree_reps) in table.rows.iter().zip(reps) {
                            let section =
                                report.section(format!("representatives degree {}", row.degree));
                            for (i, coords) in degree_reps.iter().enumerate() {
                                if kind == ComplexKind::Nfa {
                                    let cone = omega_nij_core::cohomology::cone_from_coords(
                                        &cx, row.degree, coords,
                                    );
                                    section.lines.push(format!(
                                        "class {i}: {}",
                                        serde_json::to_string(&serialize_cone_cochain(
                                            "rep", &cone, &sg
                                        ))
                                        .unwrap()
                                    ));
                                } else {
                                    let c = Cochain::from_data(row.degree, dims, coords.clone());
                                    section.lines.push(format!(
                                        "class {i}: {}",
                                        serde_json::to_string(&format::render_cochain_entries(
                                            &c, &sg
                                        ))
                                        .unwrap()
                                    ));
                                }
                            }
                        }
                    }
                    if strict_fail {
                        report.ok = false;
                    }
                    let ok = report.ok;
                    Ok((report, ok))
                }
            }
        }

        Command::Cocycle {
            cochain,
            name,
            degree,
            complex,
            ..
        } => {
            let mut report = Report::new("cocycle");
            let Some(cx) = complexes_or_report(&ctx, &mut report)? else {
                return Ok((report, false));
            };
            let cochain_doc = if cochain == primary_file(&cli.command) {
                doc.clone()
            } else {
                read_doc(cochain)?
            };
            let kind: ComplexKind = (*complex).into();
            let (alg, nf) = parse_cochain(&cochain_doc, name, &ctx, spec, true)?;
            if alg.degree() != *degree {
                return Err(IoError::Semantic(format!(
                    "cochain {name:?} has degree {}, command expects {degree}",
                    alg.degree()
                )));
            }
            match kind {
                ComplexKind::Nfa => {
                    let cone = ConeCochain { alg, nf };
                    let cocycle = is_cocycle_cone(&cx, &cone)
                        .map_err(|e| IoError::Semantic(e.to_string()))?;
                    report.verdict_line("cocycle", cocycle);
                    if cocycle {
                        match coboundary_primitive_cone(&cx, &cone)
                            .map_err(|e| IoError::Semantic(e.to_string()))?
                        {
                            Some(primitive) if primitive.degree() == cone.degree() => {
                                // starting-degree sentinel: the zero cochain
                                let section = report.section("coboundary");
                                section
                                    .lines
                                    .push("yes (zero cochain at the lowest degree)".into());
                            }
                            Some(primitive) => {
                                let back = cx
                                    .cone_differential(&primitive)
                                    .map_err(|e| IoError::Semantic(e.to_string()))?;
                                let verified = back == cone;
                                let section = report.section("coboundary");
                                section.lines.push("yes".into());
                                section.lines.push(format!(
                                    "primitive re-verified by the differential: {verified}"
                                ));
                                section.lines.push(
                                    serde_json::to_string(&serialize_cone_cochain(
                                        "primitive",
                                        &primitive,
                                        &ctx.semigroup,
                                    ))
                                    .unwrap(),
                                );
                                report.ok &= verified;
                            }
                            None => {
                                report.section("coboundary").lines.push("no".into());
                            }
                        }
                    }
                    let ok = report.ok;
                    Ok((report, ok))
                }
                plain => {
                    if nf.is_some() {
                        return Err(IoError::Semantic(
                            "plain complexes take single-part cochains".into(),
                        ));
                    }
                    let cocycle = is_cocycle_plain(&cx, plain, &alg)
                        .map_err(|e| IoError::Semantic(e.to_string()))?;
                    report.verdict_line("cocycle", cocycle);
                    if cocycle {
                        match coboundary_primitive_plain(&cx, plain, &alg)
                            .map_err(|e| IoError::Semantic(e.to_string()))?
                        {
                            Some(primitive) if primitive.degree() == alg.degree() => {
                                let section = report.section("coboundary");
                                section
                                    .lines
                                    .push("yes (zero cochain at the lowest degree)".into());
                            }
                            Some(primitive) => {
                                let image = match plain {
                                    ComplexKind::Alg => cx.delta(&primitive),
                                    _ => cx.nf_partial(&primitive),
                                }
                                .map_err(|e| IoError::Semantic(e.to_string()))?;
                                let verified = image == alg;
                                let section = report.section("coboundary");
                                section.lines.push("yes".into());
                                section.lines.push(format!(
                                    "primitive re-verified by the differential: {verified}"
                                ));
                                section.lines.push(
                                    serde_json::to_string(&format::render_cochain_entries(
                                        &primitive,
                                        &ctx.semigroup,
                                    ))
                                    .unwrap(),
                                );
                                report.ok &= verified;
                            }
                            None => {
                                report.section("coboundary").lines.push("no".into());
                            }
                        }
                    }
                    let ok = report.ok;
                    Ok((report, ok))
                }
            }
        }

        Command::Extension(cmd) => execute_extension(cli, cmd, doc, &ctx, spec),
        Command::Deform(cmd) => execute_deform(cmd, doc, &ctx, spec),

        Command::Relate { .. } => {
            let mut report = Report::new("relate");
            let rel = rb_relation_check(&ctx.algebra, &ctx.semigroup, &ctx.nijenhuis)
                .map_err(|e| IoError::Semantic(e.to_string()))?;
            let section = report.section("square patterns");
            section
                .lines
                .push(format!("nijenhuis family: {}", rel.nijenhuis));
            section.lines.push(format!("N^2 = 0: {}", rel.square_zero));
            section
                .lines
                .push(format!("N^2 = N: {}", rel.square_idempotent));
            section
                .lines
                .push(format!("N^2 = id: {}", rel.square_identity));
            let section = report.section("equivalences");
            let nij_verdict = rel.nijenhuis;
            let fmt = |case: &str, v: Option<bool>| match v {
                None => format!("{case}: case does not apply"),
                Some(b) => format!(
                    "{case}: {b} (agrees with nijenhuis verdict: {})",
                    b == nij_verdict
                ),
            };
            section
                .lines
                .push(fmt("rota-baxter weight 0", rel.rota_baxter_weight0));
            section
                .lines
                .push(fmt("rota-baxter weight -1", rel.rota_baxter_weight_minus1));
            section
                .lines
                .push(fmt("modified weight -1", rel.modified_weight_minus1));
            if rel.rota_baxter_weight0.is_none()
                && rel.rota_baxter_weight_minus1.is_none()
                && rel.modified_weight_minus1.is_none()
            {
                section.lines.push("no case applies".into());
            }
            Ok((report, true))
        }

        Command::Les { max_degree, .. } => {
            let mut report = Report::new("les");
            let Some(cx) = complexes_or_report(&ctx, &mut report)? else {
                return Ok((report, false));
            };
            match les_check(&cx, *max_degree, BasisVariant::Canonical) {
                Err(CohomologyError::NoUnit) => {
                    report
                        .notices
                        .push("semigroup has no unit: long exact sequence not defined".into());
                    if cli.strict {
                        report.ok = false;
                    }
                    let ok = report.ok;
                    Ok((report, ok))
                }
                Err(e) => {
                    cohomology_error(&mut report, e);
                    let ok = report.ok;
                    Ok((report, ok))
                }
                Ok(les) => {
                    let section = report.section("exactness");
                    section.table = Some(report::Table {
                        header: vec![
                            "slot".into(),
                            "dim H".into(),
                            "rank in".into(),
                            "rank out".into(),
                            "exact".into(),
                        ],
                        rows: les
                            .slots
                            .iter()
                            .map(|s| {
                                vec![
                                    s.at.clone(),
                                    s.dim_h.to_string(),
                                    s.rank_in.to_string(),
                                    s.rank_out.to_string(),
                                    s.exact.to_string(),
                                ]
                            })
                            .collect(),
                    });
                    report.ok &= les.all_exact;
                    let ok = report.ok;
                    Ok((report, ok))
                }
            }
        }
    }
}

fn execute_extension<S: Backend>(
    cli: &Cli,
    cmd: &ExtensionCmd,
    doc: &InstanceDoc,
    ctx: &Context<S>,
    spec: &FieldSpec,
) -> Result<(Report, bool), IoError> {
    match cmd {
        ExtensionCmd::Build { output, .. } => {
            let mut report = Report::new("extension build");
            let Some(cx) = complexes_or_report(ctx, &mut report)? else {
                return Ok((report, false));
            };
            let (psi, chi) = parse_extension_block(doc, ctx, spec)?;
            match build_extension(&cx, &psi, &chi) {
                Ok(ext) => {
                    report.verdict_line("pair is a 2-cocycle", true);
                    report.verdict_line("short exact sequence valid", ext.validate_sequence());
                    write_doc(output, &serialize_extension(ctx, &psi, &chi, spec))?;
                    report
                        .section("output")
                        .lines
                        .push(format!("wrote {}", output.display()));
                }
                Err((err, witness)) => {
                    report.verdict_line("pair is a 2-cocycle", false);
                    let section = report.section("failure");
                    section.lines.push(err.to_string());
                    if let Some(w) = witness {
                        section.lines.push(format!(
                            "total space fails validation with {} violation(s):",
                            w.total_violations
                        ));
                        section
                            .lines
                            .extend(violation_lines(&ctx.semigroup, &w.violations));
                    }
                }
            }
            let ok = report.ok;
            Ok((report, ok))
        }

        ExtensionCmd::Extract { section, .. } => {
            let mut report = Report::new("extension extract");
            let Some(cx) = complexes_or_report(ctx, &mut report)? else {
                return Ok((report, false));
            };
            let (psi, chi) = parse_extension_block(doc, ctx, spec)?;
            let ext = match build_extension(&cx, &psi, &chi) {
                Ok(e) => e,
                Err((err, _)) => {
                    report.ok = false;
                    report.section("failure").lines.push(err.to_string());
                    return Ok((report, false));
                }
            };
            let (nw, d, m) = cx.dims();
            let sec = match section {
                None => Section::canonical(nw, d, m),
                Some(path) => parse_section_file::<S>(path, &ctx.semigroup, d, m, spec)?,
            };
            let (psi2, chi2) =
                extract_cocycle(&ext, &sec).map_err(|e| IoError::Semantic(e.to_string()))?;
            let cone = ConeCochain {
                alg: psi2.clone(),
                nf: Some(chi2.clone()),
            };
            let cocycle =
                is_cocycle_cone(&cx, &cone).map_err(|e| IoError::Semantic(e.to_string()))?;
            report.verdict_line("extracted pair is a 2-cocycle", cocycle);
            let module = induced_module_from_section(&ext, &sec)
                .map_err(|e| IoError::Semantic(e.to_string()))?;
            report.verdict_line(
                "section-induced module equals the declared module",
                module == ctx.module,
            );
            report.section("cocycle").lines.push(
                serde_json::to_string(&serialize_cone_cochain("extracted", &cone, &ctx.semigroup))
                    .unwrap(),
            );
            let ok = report.ok;
            Ok((report, ok))
        }

        ExtensionCmd::Compare { second, .. } | ExtensionCmd::Iso { second, .. } => {
            let want_iso = matches!(cmd, ExtensionCmd::Iso { .. });
            let mut report = Report::new(if want_iso {
                "extension iso"
            } else {
                "extension compare"
            });
            let Some(cx) = complexes_or_report(ctx, &mut report)? else {
                return Ok((report, false));
            };
            let doc2 = read_doc(second)?;
            let spec2 = match &cli.field {
                Some(_) => *spec,
                None => field_of(&doc2)?,
            };
            if spec2 != *spec {
                return Err(IoError::Semantic(
                    "the two extension files use different scalar backends".into(),
                ));
            }
            let ctx2: Context<S> = parse_context(&doc2, spec)?;
            let (psi1, chi1) = parse_extension_block(doc, ctx, spec)?;
            let (psi2, chi2) = parse_extension_block(&doc2, &ctx2, spec)?;
            let e1 = build_extension(&cx, &psi1, &chi1)
                .map_err(|(e, _)| IoError::Semantic(e.to_string()))?;
            let cx2 =
                Complexes::new(ctx2.clone()).map_err(|e| IoError::Semantic(e.to_string()))?;
            let e2 = build_extension(&cx2, &psi2, &chi2)
                .map_err(|(e, _)| IoError::Semantic(e.to_string()))?;
            let equal =
                classes_equal(&cx, &e1, &e2).map_err(|e| IoError::Semantic(e.to_string()))?;
            report.verdict_line("classes equal", equal);
            if want_iso && equal {
                // reduce a primitive of the difference to a pure twist
                let diff = extension_class(&e2).sub(&extension_class(&e1));
                let primitive = coboundary_primitive_cone(&cx, &diff)
                    .map_err(|e| IoError::Semantic(e.to_string()))?
                    .expect("classes are equal");
                let mut gamma = primitive.alg.clone();
                if let Some(g0) = &primitive.nf {
                    gamma =
                        gamma.add(&cx.delta(g0).map_err(|e| IoError::Semantic(e.to_string()))?);
                }
                let zeta =
                    iso_from_coboundary(&gamma).map_err(|e| IoError::Semantic(e.to_string()))?;
                let verdict = verify_extension_iso(&zeta, &e1, &e2)
                    .map_err(|e| IoError::Semantic(e.to_string()))?;
                report.verdict_line("isomorphism verified", verdict == IsoVerdict::Ok);
                if verdict != IsoVerdict::Ok {
                    report
                        .section("diagram failure")
                        .lines
                        .push(format!("{verdict:?}"));
                }
            }
            let ok = report.ok;
            Ok((report, ok))
        }
    }
}

fn parse_section_file<S: Backend>(
    path: &Path,
    sg: &omega_nij_core::semigroup::Semigroup,
    d: usize,
    m: usize,
    spec: &FieldSpec,
) -> Result<Section<S>, IoError> {
    #[derive(serde::Deserialize)]
    struct SectionDoc {
        maps: BTreeMap<String, Vec<Vec<String>>>,
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| IoError::Parse(format!("cannot read {}: {e}", path.display())))?;
    let doc: SectionDoc = serde_json::from_str(&text).map_err(|e| IoError::Parse(e.to_string()))?;
    let mut maps = vec![None; sg.len()];
    for (label, rows) in &doc.maps {
        let w = sg.index_of(label).ok_or_else(|| {
            IoError::Semantic(format!("section references undeclared {label:?}"))
        })?;
        if rows.len() != m || rows.iter().any(|r| r.len() != d) {
            return Err(IoError::Semantic(format!(
                "section twist for {label:?} must be {m}x{d}"
            )));
        }
        let mut mat = omega_nij_core::algebra::OperatorMatrix::zeros(m, d);
        for (r, row) in rows.iter().enumerate() {
            for (c, text) in row.iter().enumerate() {
                let v = S::parse_coeff(text, spec).map_err(IoError::Parse)?;
                if !v.is_zero() {
                    mat.set(r, c, v);
                }
            }
        }
        maps[w] = Some(mat);
    }
    let maps = maps
        .into_iter()
        .enumerate()
        .map(|(w, m)| {
            m.ok_or_else(|| IoError::Semantic(format!("section misses element {:?}", sg.label(w))))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Section::from_twist(&OperatorFamily::new(maps), d))
}

fn execute_deform<S: Backend>(
    cmd: &DeformCmd,
    doc: &InstanceDoc,
    ctx: &Context<S>,
    spec: &FieldSpec,
) -> Result<(Report, bool), IoError> {
    let mut report = Report::new(match cmd {
        DeformCmd::Check { .. } => "deform check",
        DeformCmd::Infinitesimal { .. } => "deform infinitesimal",
        DeformCmd::Gauge { .. } => "deform gauge",
        DeformCmd::TrivializeStep { .. } => "deform trivialize-step",
    });
    let Some(cx) = complexes_or_report(ctx, &mut report)? else {
        return Ok((report, false));
    };
    let def = parse_deformation(doc, &cx, spec)?;
    match cmd {
        DeformCmd::Check { .. } => {
            let res =
                check_deformation(&cx, &def).map_err(|e| IoError::Semantic(e.to_string()))?;
            let section = report.section("orders");
            section.table = Some(report::Table {
                header: vec!["order".into(), "verdict".into()],
                rows: res
                    .order_ok
                    .iter()
                    .enumerate()
                    .map(|(k, ok)| vec![k.to_string(), if *ok { "pass" } else { "FAIL" }.into()])
                    .collect(),
            });
            if let Some(v) = res.violations.first() {
                report.section("first witness").lines.push(format!(
                    "{} at order {} indices {:?} basis {:?}",
                    v.equation, v.order, v.indices, v.basis
                ));
            }
            report.ok &= res.order_ok.iter().all(|&b| b);
        }
        DeformCmd::Infinitesimal { .. } => {
            let inf = infinitesimal(&cx, &def).map_err(|e| IoError::Semantic(e.to_string()))?;
            let cocycle =
                is_cocycle_cone(&cx, &inf).map_err(|e| IoError::Semantic(e.to_string()))?;
            report.verdict_line("infinitesimal is a 2-cocycle", cocycle);
            report.section("infinitesimal").lines.push(
                serde_json::to_string(&serialize_cone_cochain(
                    "infinitesimal",
                    &inf,
                    &ctx.semigroup,
                ))
                .unwrap(),
            );
        }
        DeformCmd::Gauge { output, .. } => {
            let gauge = parse_gauge(doc, &cx, spec)?;
            let gauged =
                gauge_transform(&cx, &def, &gauge).map_err(|e| IoError::Semantic(e.to_string()))?;
            write_doc(output, &serialize_deformation(ctx, &gauged, spec))?;
            report
                .section("output")
                .lines
                .push(format!("wrote {}", output.display()));
        }
        DeformCmd::TrivializeStep { output, .. } => match trivialization_step(&cx, &def) {
            Ok(step) => {
                report.verdict_line("order-one class vanishes", true);
                report.verdict_line(
                    "gauged order-one coefficients are zero",
                    step.gauged.mu_coeff(1).is_zero() && step.gauged.n_coeff(1).is_zero(),
                );
                if let Some(path) = output {
                    write_doc(path, &serialize_deformation(ctx, &step.gauged, spec))?;
                    report
                        .section("output")
                        .lines
                        .push(format!("wrote {}", path.display()));
                }
            }
            Err(omega_nij_core::deformation::DeformError::NotCoboundary) => {
                report.verdict_line("order-one class vanishes", false);
                report
                    .section("obstruction")
                    .lines
                    .push("the infinitesimal class is nonzero".into());
            }
            Err(e) => return Err(IoError::Semantic(e.to_string())),
        },
    }
    let ok = report.ok;
    Ok((report, ok))
}
