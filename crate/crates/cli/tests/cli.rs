//! End-to-end command-line tests over the shipped corpus: exit-code
//! contract, serialization round trips, report determinism, and the full
//! deformation and extension pipelines through files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use omega_nij_cli::format::{
    field_of, parse_context, read_doc, serialize_context, FieldSpec,
};
use omega_nij_core::builders::{
    triangular_rmult, truncated_poly, two_monoid_mixed, unit_line, zero_algebra,
};
use omega_nij_core::scalar::Rational;
use omega_nij_core::semigroup::Semigroup;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus(name: &str) -> PathBuf {
    corpus_dir().join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_omega-nij"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("omega-nij-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn corpus_files_match_the_builders() {
    let trivial = Semigroup::trivial();
    let cases: Vec<(&str, omega_nij_core::algebra::Context<Rational>)> = vec![
        ("trivial_k.json", unit_line(&trivial)),
        ("trunc_poly_D4_k1.json", truncated_poly(4, 1, &trivial)),
        ("trunc_poly_D3_k2.json", truncated_poly(3, 2, &trivial)),
        ("m2_mixed.json", two_monoid_mixed()),
        ("zero_algebra.json", zero_algebra(2, &trivial)),
        ("ut2_rmult.json", triangular_rmult()),
    ];
    for (file, expected) in cases {
        let doc = read_doc(&corpus(file)).unwrap();
        let spec = field_of(&doc).unwrap();
        let ctx: omega_nij_core::algebra::Context<Rational> =
            parse_context(&doc, &spec).unwrap();
        assert_eq!(ctx.semigroup, expected.semigroup, "{file}");
        assert_eq!(ctx.algebra, expected.algebra, "{file}");
        assert_eq!(ctx.nijenhuis, expected.nijenhuis, "{file}");
        assert_eq!(ctx.module, expected.module, "{file}");
    }
}

#[test]
fn validate_passes_on_every_corpus_file() {
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let out = run(&["validate", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}: {}", path.display(), String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn exit_codes_follow_the_contract() {
    // parse error: malformed json
    let bad = tmp("malformed.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&run(&["validate", bad.to_str().unwrap()])), 2);

    // semantic error: non-associative table, witness named on stderr
    let nonassoc = tmp("nonassoc.json");
    std::fs::write(
        &nonassoc,
        r#"{
          "semigroup": { "labels": ["x", "y"], "table": [["y", "x"], ["y", "x"]] },
          "algebra": { "dim": 1, "mu": [] },
          "nijenhuis": { "x": [["0"]], "y": [["0"]] }
        }"#,
    )
    .unwrap();
    let out = run(&["validate", nonassoc.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not associative"), "stderr: {err}");

    // math verdict failure: a broken Nijenhuis family
    let invalid = tmp("invalid_family.json");
    std::fs::write(
        &invalid,
        r#"{
          "semigroup": { "labels": ["1"], "table": [["1"]], "unit": "1" },
          "algebra": { "dim": 2, "mu": [
            { "a": "1", "b": "1", "i": 0, "j": 0, "k": 0, "c": "1" },
            { "a": "1", "b": "1", "i": 0, "j": 1, "k": 1, "c": "1" },
            { "a": "1", "b": "1", "i": 1, "j": 0, "k": 1, "c": "1" }
          ] },
          "nijenhuis": { "1": [["0", "1"], ["1", "0"]] }
        }"#,
    )
    .unwrap();
    let out = run(&["validate", invalid.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn machine_reports_are_byte_identical_across_runs() {
    let path = corpus("m2_mixed.json");
    let args = [
        "--format",
        "json",
        "cohomology",
        path.to_str().unwrap(),
        "--complex",
        "nfa",
        "--max-degree",
        "2",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    // and the machine rendering parses back as json
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["command"], "cohomology");
}

#[test]
fn serialization_round_trip_is_identity_on_the_corpus() {
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let doc = read_doc(&path).unwrap();
        let spec = field_of(&doc).unwrap();
        let ctx: omega_nij_core::algebra::Context<Rational> =
            parse_context(&doc, &spec).unwrap();
        let doc2 = serialize_context(&ctx, &spec);
        let ctx2: omega_nij_core::algebra::Context<Rational> =
            parse_context(&doc2, &spec).unwrap();
        assert_eq!(ctx.semigroup, ctx2.semigroup, "{}", path.display());
        assert_eq!(ctx.algebra, ctx2.algebra, "{}", path.display());
        assert_eq!(ctx.nijenhuis, ctx2.nijenhuis, "{}", path.display());
        assert_eq!(ctx.module, ctx2.module, "{}", path.display());
    }
}

#[test]
fn star_output_validates_and_has_the_expected_square() {
    let out_path = tmp("star_d4.json");
    let out = run(&[
        "star",
        corpus("trunc_poly_D4_k1.json").to_str().unwrap(),
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&["validate", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    // a * a = a^3 in the deformed product
    let doc = read_doc(&out_path).unwrap();
    let ctx: omega_nij_core::algebra::Context<Rational> =
        parse_context(&doc, &FieldSpec::Rational).unwrap();
    assert_eq!(
        ctx.algebra.mu(0, 0, 1, 1, 3),
        &omega_nij_core::scalar::Rational::new(1, 1)
    );
}

#[test]
fn cocycle_command_reports_verdicts_and_primitives() {
    // a coboundary in the algebra complex of the two-monoid instance:
    // delta of the basis 1-cochain stored alongside the instance
    let base = std::fs::read_to_string(corpus("m2_mixed.json")).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&base).unwrap();
    // delta of f = (w=1, in=0 -> out=1): computed through the library
    let instance = read_doc(&corpus("m2_mixed.json")).unwrap();
    let ctx: omega_nij_core::algebra::Context<Rational> =
        parse_context(&instance, &FieldSpec::Rational).unwrap();
    let cx = omega_nij_core::cochain::Complexes::new(ctx.clone()).unwrap();
    let f = omega_nij_core::cochain::Cochain::unit(1, cx.dims(), 1);
    let df = cx.delta(&f).unwrap();
    let entries = omega_nij_cli::format::render_cochain_entries(&df, &ctx.semigroup);
    doc["cochains"] = serde_json::json!({
        "main": { "degree": 2, "alg": entries, "nf": [] }
    });
    let path = tmp("cocycle_case.json");
    std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let out = run(&[
        "cocycle",
        path.to_str().unwrap(),
        "--cochain",
        path.to_str().unwrap(),
        "--degree",
        "2",
        "--complex",
        "alg",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("cocycle"));
    assert!(text.contains("re-verified by the differential: true"));
}

#[test]
fn extension_pipeline_from_files() {
    // semidirect extension (zero twists) on the D3 instance
    let base = read_doc(&corpus("trunc_poly_D3_k2.json")).unwrap();
    let mut doc = serde_json::to_value(&base).unwrap();
    doc["extension"] = serde_json::json!({ "psi": [], "chi": [] });
    let e1 = tmp("ext_zero.json");
    std::fs::write(&e1, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let built = tmp("ext_zero_built.json");
    let out = run(&[
        "extension",
        "build",
        e1.to_str().unwrap(),
        "-o",
        built.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));

    // a cohomologous twin: shift the zero pair by d^1(gamma, 0)
    let instance = read_doc(&e1).unwrap();
    let ctx: omega_nij_core::algebra::Context<Rational> =
        parse_context(&instance, &FieldSpec::Rational).unwrap();
    let cx = omega_nij_core::cochain::Complexes::new(ctx.clone()).unwrap();
    let mut rng = omega_nij_core::rng::Rng::new(5);
    let gamma: omega_nij_core::cochain::Cochain<Rational> = rng.cochain(1, cx.dims(), 2);
    let psi2 = cx.delta(&gamma).unwrap();
    let chi2 = cx.phi(&gamma).unwrap().neg();
    let mut doc2 = serde_json::to_value(&base).unwrap();
    doc2["extension"] = serde_json::json!({
        "psi": omega_nij_cli::format::render_cochain_entries(&psi2, &ctx.semigroup),
        "chi": omega_nij_cli::format::render_cochain_entries(&chi2, &ctx.semigroup),
    });
    let e2 = tmp("ext_shifted.json");
    std::fs::write(&e2, serde_json::to_string_pretty(&doc2).unwrap()).unwrap();

    let out = run(&[
        "extension",
        "compare",
        e1.to_str().unwrap(),
        e2.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let out = run(&[
        "extension",
        "iso",
        e1.to_str().unwrap(),
        e2.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("isomorphism verified"));

    // extract with the canonical section reproduces the stored pair
    let out = run(&["extension", "extract", e2.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout)
        .contains("section-induced module equals the declared module"));

    // a user-supplied section (nonzero twist) still extracts a cocycle
    // cohomologous to the stored one
    let section_file = tmp("section_twist.json");
    std::fs::write(
        &section_file,
        r#"{ "maps": { "1": [["1", "0", "2"], ["0", "-1", "0"], ["0", "0", "1"]] } }"#,
    )
    .unwrap();
    let out = run(&[
        "extension",
        "extract",
        e2.to_str().unwrap(),
        "--section",
        section_file.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("extracted pair is a 2-cocycle"));

    // a genuinely non-cohomologous pair: nonzero class on the zero algebra
    let zbase = read_doc(&corpus("zero_algebra.json")).unwrap();
    let mut zdoc1 = serde_json::to_value(&zbase).unwrap();
    zdoc1["extension"] = serde_json::json!({ "psi": [], "chi": [] });
    let mut zdoc2 = serde_json::to_value(&zbase).unwrap();
    zdoc2["extension"] = serde_json::json!({
        "psi": [ { "w": ["1","1"], "in": [0,0], "out": 1, "c": "1" } ],
        "chi": []
    });
    let z1 = tmp("ext_z1.json");
    let z2 = tmp("ext_z2.json");
    std::fs::write(&z1, serde_json::to_string_pretty(&zdoc1).unwrap()).unwrap();
    std::fs::write(&z2, serde_json::to_string_pretty(&zdoc2).unwrap()).unwrap();
    let out = run(&["extension", "compare", z1.to_str().unwrap(), z2.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn deformation_pipeline_from_files() {
    // trivial deformation of the D3 instance, gauged through the file surface
    let base = read_doc(&corpus("trunc_poly_D3_k2.json")).unwrap();
    let mut doc = serde_json::to_value(&base).unwrap();
    doc["deformation"] = serde_json::json!({ "order": 2, "mu": [], "n": [] });
    doc["gauge"] = serde_json::json!({
        "order": 2,
        "psi": [
            { "order": 1, "maps": { "1": [["0","1","0"],["0","0","2"],["1","0","0"]] } }
        ]
    });
    let f = tmp("deform_trivial.json");
    std::fs::write(&f, serde_json::to_string_pretty(&doc).unwrap()).unwrap();

    let out = run(&["deform", "check", f.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));

    let gauged = tmp("deform_gauged.json");
    let out = run(&[
        "deform",
        "gauge",
        f.to_str().unwrap(),
        "-o",
        gauged.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);

    let out = run(&["deform", "check", gauged.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));

    let out = run(&["deform", "infinitesimal", gauged.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("infinitesimal is a 2-cocycle"));

    let trivialized = tmp("deform_trivialized.json");
    let out = run(&[
        "deform",
        "trivialize-step",
        gauged.to_str().unwrap(),
        "-o",
        trivialized.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout)
        .contains("gauged order-one coefficients are zero"));

    // an obstructed step exits with the math-verdict code
    let zbase = read_doc(&corpus("zero_algebra.json")).unwrap();
    let mut zdoc = serde_json::to_value(&zbase).unwrap();
    zdoc["deformation"] = serde_json::json!({
        "order": 1,
        "mu": [ { "order": 1, "entries": [ { "w": ["1","1"], "in": [0,0], "out": 1, "c": "1" } ] } ],
        "n": []
    });
    let z = tmp("deform_obstructed.json");
    std::fs::write(&z, serde_json::to_string_pretty(&zdoc).unwrap()).unwrap();
    let out = run(&["deform", "trivialize-step", z.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn les_and_strict_flag_on_the_non_unital_instance() {
    let path = corpus("nounital_band.json");
    let out = run(&["les", path.to_str().unwrap(), "--max-degree", "1"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("no unit"));
    let out = run(&["--strict", "les", path.to_str().unwrap(), "--max-degree", "1"]);
    assert_eq!(code(&out), 1);
    // cohomology starts at degree 1 with a notice
    let out = run(&[
        "cohomology",
        path.to_str().unwrap(),
        "--complex",
        "alg",
        "--max-degree",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("starts at degree 1"));
}

#[test]
fn thread_cap_does_not_change_machine_reports() {
    let path = corpus("trunc_poly_D4_k1.json");
    let args = [
        "--format",
        "json",
        "cohomology",
        path.to_str().unwrap(),
        "--complex",
        "nfa",
        "--max-degree",
        "2",
    ];
    let serial = bin()
        .env("OMEGA_NIJ_THREADS", "1")
        .args(args)
        .output()
        .unwrap();
    let parallel = bin()
        .env("OMEGA_NIJ_THREADS", "4")
        .args(args)
        .output()
        .unwrap();
    assert_eq!(code(&serial), 0);
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn prime_backend_runs_the_same_corpus() {
    for name in ["trivial_k.json", "m2_mixed.json", "ut2_rmult.json"] {
        let path = corpus(name);
        let out = run(&[
            "--field",
            "prime:2147483647",
            "cohomology",
            path.to_str().unwrap(),
            "--complex",
            "nfa",
            "--max-degree",
            "2",
        ]);
        assert_eq!(code(&out), 0, "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
