//! The instance file format: structured JSON with exact coefficient strings.
//!
//! Fixed top-level blocks: `field`, `semigroup`, `algebra`, `nijenhuis`,
//! `module` (optional; the regular module when absent), and the optional
//! payload blocks `cochains`, `deformation`, `gauge`, `extension`.
//! Coefficients are strings, never floats: `"3"`, `"-2/5"`, and for prime
//! backends also `"5 mod 2147483647"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use omega_nij_core::algebra::{Context, NfBimodule, OmegaAlgebra, OperatorFamily, OperatorMatrix};
use omega_nij_core::cochain::{Cochain, Complexes, ConeCochain};
use omega_nij_core::deformation::{GaugeFamily, TruncatedDeformation};
use omega_nij_core::scalar::{PrimeField, Rational, Scalar};
use omega_nij_core::semigroup::Semigroup;

/// Which exact backend coefficients parse into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    pub fn parse(s: &str) -> Result<Self, String> {
        if s == "rational" {
            return Ok(FieldSpec::Rational);
        }
        if let Some(p) = s.strip_prefix("prime:") {
            let p: u64 = p
                .parse()
                .map_err(|_| format!("bad prime modulus in field spec {s:?}"))?;
            if p < 2 {
                return Err(format!("modulus {p} is too small"));
            }
            return Ok(FieldSpec::Prime(p));
        }
        Err(format!(
            "unknown field {s:?}; expected \"rational\" or \"prime:<p>\""
        ))
    }

    pub fn render(&self) -> String {
        match self {
            FieldSpec::Rational => "rational".into(),
            FieldSpec::Prime(p) => format!("prime:{p}"),
        }
    }
}

/// A scalar backend the I/O layer can parse coefficients into.
pub trait Backend: Scalar {
    fn parse_coeff(text: &str, spec: &FieldSpec) -> Result<Self, String>;
}

fn split_fraction(text: &str) -> Result<(i64, i64), String> {
    let parse_int = |t: &str| -> Result<i64, String> {
        t.trim()
            .parse::<i64>()
            .map_err(|_| format!("bad integer {t:?}"))
    };
    match text.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d == 0 {
                return Err("zero denominator".into());
            }
            Ok((parse_int(n)?, d))
        }
        None => Ok((parse_int(text)?, 1)),
    }
}

impl Backend for Rational {
    fn parse_coeff(text: &str, _spec: &FieldSpec) -> Result<Self, String> {
        let (n, d) = split_fraction(text.trim())?;
        Ok(Rational::new(n, d))
    }
}

impl Backend for PrimeField {
    fn parse_coeff(text: &str, spec: &FieldSpec) -> Result<Self, String> {
        let FieldSpec::Prime(p) = spec else {
            return Err("prime backend needs a prime field spec".into());
        };
        let body = match text.split_once(" mod ") {
            Some((v, m)) => {
                let m: u64 = m
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad modulus in {text:?}"))?;
                if m != *p {
                    return Err(format!("coefficient modulus {m} differs from field {p}"));
                }
                v
            }
            None => text,
        };
        let (n, d) = split_fraction(body.trim())?;
        let num = PrimeField::new(n, *p);
        let den = PrimeField::new(d, *p);
        num.div(&den)
            .ok_or_else(|| format!("denominator of {text:?} vanishes mod {p}"))
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct SemigroupDoc {
    pub labels: Vec<String>,
    pub table: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct MuEntry {
    pub a: String,
    pub b: String,
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct AlgebraDoc {
    pub dim: usize,
    pub mu: Vec<MuEntry>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ActionEntry {
    pub a: String,
    pub b: String,
    /// algebra basis index
    pub i: usize,
    /// module basis index acted on
    pub x: usize,
    /// module basis index produced
    pub y: usize,
    pub c: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ModuleDoc {
    pub dim: usize,
    #[serde(default)]
    pub left: Vec<ActionEntry>,
    #[serde(default)]
    pub right: Vec<ActionEntry>,
    pub nm: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CochainEntry {
    #[serde(default)]
    pub w: Vec<String>,
    #[serde(default, rename = "in")]
    pub inputs: Vec<usize>,
    pub out: usize,
    pub c: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CochainDoc {
    pub degree: usize,
    #[serde(default)]
    pub alg: Vec<CochainEntry>,
    #[serde(default)]
    pub nf: Vec<CochainEntry>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct OrderedCochain {
    pub order: usize,
    pub entries: Vec<CochainEntry>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct OrderedFamily {
    pub order: usize,
    pub maps: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct DeformationDoc {
    pub order: usize,
    #[serde(default)]
    pub mu: Vec<OrderedCochain>,
    #[serde(default)]
    pub n: Vec<OrderedFamily>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct GaugeDoc {
    pub order: usize,
    #[serde(default)]
    pub psi: Vec<OrderedFamily>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ExtensionDoc {
    #[serde(default)]
    pub psi: Vec<CochainEntry>,
    #[serde(default)]
    pub chi: Vec<CochainEntry>,
}

/// Whole instance file.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct InstanceDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub semigroup: SemigroupDoc,
    pub algebra: AlgebraDoc,
    pub nijenhuis: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cochains: Option<BTreeMap<String, CochainDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deformation: Option<DeformationDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionDoc>,
}

/// Errors split by exit class: `Parse` = malformed file (exit 2),
/// `Semantic` = well-formed but inconsistent content (exit 3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IoError {
    Parse(String),
    Semantic(String),
}

impl std::fmt::Display for IoError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IoError::Parse(m) => write!(f, "parse error: {m}"),
            IoError::Semantic(m) => write!(f, "semantic error: {m}"),
        }
    }
}

pub fn read_doc(path: &std::path::Path) -> Result<InstanceDoc, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IoError::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| IoError::Parse(format!("{}: {e}", path.display())))
}

pub fn field_of(doc: &InstanceDoc) -> Result<FieldSpec, IoError> {
    match &doc.field {
        None => Ok(FieldSpec::Rational),
        Some(s) => FieldSpec::parse(s).map_err(IoError::Parse),
    }
}

fn label_index(sg: &Semigroup, label: &str, what: &str) -> Result<usize, IoError> {
    sg.index_of(label)
        .ok_or_else(|| IoError::Semantic(format!("{what} references undeclared label {label:?}")))
}

fn parse_matrix<S: Backend>(
    rows: &[Vec<String>],
    want_rows: usize,
    want_cols: usize,
    spec: &FieldSpec,
    what: &str,
) -> Result<OperatorMatrix<S>, IoError> {
    if rows.len() != want_rows || rows.iter().any(|r| r.len() != want_cols) {
        return Err(IoError::Semantic(format!(
            "{what}: expected a {want_rows}x{want_cols} matrix"
        )));
    }
    let mut m = OperatorMatrix::zeros(want_rows, want_cols);
    for (r, row) in rows.iter().enumerate() {
        for (c, text) in row.iter().enumerate() {
            let v = S::parse_coeff(text, spec).map_err(IoError::Parse)?;
            if !v.is_zero() {
                m.set(r, c, v);
            }
        }
    }
    Ok(m)
}

fn parse_family<S: Backend>(
    maps: &BTreeMap<String, Vec<Vec<String>>>,
    sg: &Semigroup,
    rows: usize,
    cols: usize,
    spec: &FieldSpec,
    what: &str,
) -> Result<OperatorFamily<S>, IoError> {
    let mut out = vec![None; sg.len()];
    for (label, rows_doc) in maps {
        let w = label_index(sg, label, what)?;
        out[w] = Some(parse_matrix(rows_doc, rows, cols, spec, what)?);
    }
    let maps = out
        .into_iter()
        .enumerate()
        .map(|(w, m)| {
            m.ok_or_else(|| {
                IoError::Semantic(format!("{what}: no map for element {:?}", sg.label(w)))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OperatorFamily::new(maps))
}

/// Parses the context blocks of an instance file into a full context; the
/// semigroup table is validated here (closure, associativity, unit law).
pub fn parse_context<S: Backend>(
    doc: &InstanceDoc,
    spec: &FieldSpec,
) -> Result<Context<S>, IoError> {
    let labels = doc.semigroup.labels.clone();
    let mut table = Vec::with_capacity(labels.len());
    for row in &doc.semigroup.table {
        let mut out_row = Vec::with_capacity(row.len());
        for cell in row {
            let idx = labels
                .iter()
                .position(|l| l == cell)
                .ok_or_else(|| IoError::Semantic(format!("table references undeclared {cell:?}")))?;
            out_row.push(idx);
        }
        table.push(out_row);
    }
    let unit = match &doc.semigroup.unit {
        None => None,
        Some(u) => Some(
            labels
                .iter()
                .position(|l| l == u)
                .ok_or_else(|| IoError::Semantic(format!("unit {u:?} is not declared")))?,
        ),
    };
    let sg = Semigroup::new(labels, table, unit).map_err(|e| IoError::Semantic(e.to_string()))?;

    let d = doc.algebra.dim;
    let mut entries = Vec::with_capacity(doc.algebra.mu.len());
    for e in &doc.algebra.mu {
        if e.i >= d || e.j >= d || e.k >= d {
            return Err(IoError::Semantic(format!(
                "mu entry ({},{},{}) out of range for dimension {d}",
                e.i, e.j, e.k
            )));
        }
        let a = label_index(&sg, &e.a, "algebra")?;
        let b = label_index(&sg, &e.b, "algebra")?;
        let c = S::parse_coeff(&e.c, spec).map_err(IoError::Parse)?;
        entries.push((a, b, e.i, e.j, e.k, c));
    }
    let algebra = OmegaAlgebra::from_entries(d, sg.len(), entries);

    let nijenhuis = parse_family(&doc.nijenhuis, &sg, d, d, spec, "nijenhuis")?;

    let module = match &doc.module {
        None => NfBimodule::regular(&algebra, nijenhuis.clone()),
        Some(mdoc) => {
            let m = mdoc.dim;
            let nm = parse_family(&mdoc.nm, &sg, m, m, spec, "module.nm")?;
            let mut module = NfBimodule::zero_actions(d, m, sg.len(), nm);
            for e in &mdoc.left {
                if e.i >= d || e.x >= m || e.y >= m {
                    return Err(IoError::Semantic("left action entry out of range".into()));
                }
                let a = label_index(&sg, &e.a, "module.left")?;
                let b = label_index(&sg, &e.b, "module.left")?;
                let c = S::parse_coeff(&e.c, spec).map_err(IoError::Parse)?;
                module.set_left(a, b, e.i, e.x, e.y, c);
            }
            for e in &mdoc.right {
                if e.i >= d || e.x >= m || e.y >= m {
                    return Err(IoError::Semantic("right action entry out of range".into()));
                }
                let a = label_index(&sg, &e.a, "module.right")?;
                let b = label_index(&sg, &e.b, "module.right")?;
                let c = S::parse_coeff(&e.c, spec).map_err(IoError::Parse)?;
                module.set_right(a, b, e.x, e.i, e.y, c);
            }
            module
        }
    };

    Ok(Context {
        semigroup: sg,
        algebra,
        nijenhuis,
        module,
    })
}

fn parse_entries<S: Backend>(
    entries: &[CochainEntry],
    degree: usize,
    sg: &Semigroup,
    d: usize,
    m: usize,
    spec: &FieldSpec,
    what: &str,
) -> Result<Cochain<S>, IoError> {
    let mut c: Cochain<S> = Cochain::zero(degree, (sg.len(), d, m));
    for e in entries {
        if e.w.len() != degree || e.inputs.len() != degree {
            return Err(IoError::Semantic(format!(
                "{what}: entry tuple lengths do not match degree {degree}"
            )));
        }
        let ws = e
            .w
            .iter()
            .map(|l| label_index(sg, l, what))
            .collect::<Result<Vec<_>, _>>()?;
        if e.inputs.iter().any(|&i| i >= d) || e.out >= m {
            return Err(IoError::Semantic(format!("{what}: index out of range")));
        }
        let v = S::parse_coeff(&e.c, spec).map_err(IoError::Parse)?;
        let old = c.at(&ws, &e.inputs, e.out).clone();
        c.set(&ws, &e.inputs, e.out, old.add(&v));
    }
    Ok(c)
}

/// A named cochain from the `cochains` block, as a cone pair (the `nf` part
/// must be empty for plain complexes).
pub fn parse_cochain<S: Backend>(
    doc: &InstanceDoc,
    name: &str,
    ctx: &Context<S>,
    spec: &FieldSpec,
    module_valued: bool,
) -> Result<(Cochain<S>, Option<Cochain<S>>), IoError> {
    let block = doc
        .cochains
        .as_ref()
        .and_then(|m| m.get(name))
        .ok_or_else(|| IoError::Semantic(format!("no cochain named {name:?} in the file")))?;
    let d = ctx.algebra.dim();
    let m = if module_valued { ctx.module.dim() } else { d };
    let alg = parse_entries(
        &block.alg,
        block.degree,
        &ctx.semigroup,
        d,
        m,
        spec,
        "cochain",
    )?;
    let nf = if block.nf.is_empty() {
        None
    } else {
        if block.degree == 0 {
            return Err(IoError::Semantic(
                "degree-0 cone cochains have no operator part".into(),
            ));
        }
        Some(parse_entries(
            &block.nf,
            block.degree - 1,
            &ctx.semigroup,
            d,
            m,
            spec,
            "cochain",
        )?)
    };
    Ok((alg, nf))
}

pub fn parse_deformation<S: Backend>(
    doc: &InstanceDoc,
    cx: &Complexes<S>,
    spec: &FieldSpec,
) -> Result<TruncatedDeformation<S>, IoError> {
    let block = doc
        .deformation
        .as_ref()
        .ok_or_else(|| IoError::Semantic("file has no deformation block".into()))?;
    let ctx = cx.context();
    let (nw, d, _) = cx.dims();
    let mut mu = vec![Cochain::zero(2, (nw, d, d)); block.order];
    for oc in &block.mu {
        if oc.order == 0 || oc.order > block.order {
            return Err(IoError::Semantic(format!(
                "deformation mu coefficient at order {} out of range 1..={}",
                oc.order, block.order
            )));
        }
        mu[oc.order - 1] =
            parse_entries(&oc.entries, 2, &ctx.semigroup, d, d, spec, "deformation.mu")?;
    }
    let mut n = vec![OperatorFamily::zero(nw, d, d); block.order];
    for of in &block.n {
        if of.order == 0 || of.order > block.order {
            return Err(IoError::Semantic(format!(
                "deformation n coefficient at order {} out of range 1..={}",
                of.order, block.order
            )));
        }
        n[of.order - 1] = parse_family(&of.maps, &ctx.semigroup, d, d, spec, "deformation.n")?;
    }
    TruncatedDeformation::from_higher(cx, mu, n).map_err(|e| IoError::Semantic(e.to_string()))
}

pub fn parse_gauge<S: Backend>(
    doc: &InstanceDoc,
    cx: &Complexes<S>,
    spec: &FieldSpec,
) -> Result<GaugeFamily<S>, IoError> {
    let block = doc
        .gauge
        .as_ref()
        .ok_or_else(|| IoError::Semantic("file has no gauge block".into()))?;
    let ctx = cx.context();
    let (nw, d, _) = cx.dims();
    let mut higher = vec![OperatorFamily::zero(nw, d, d); block.order];
    for of in &block.psi {
        if of.order == 0 || of.order > block.order {
            return Err(IoError::Semantic(format!(
                "gauge coefficient at order {} out of range 1..={}",
                of.order, block.order
            )));
        }
        higher[of.order - 1] = parse_family(&of.maps, &ctx.semigroup, d, d, spec, "gauge.psi")?;
    }
    GaugeFamily::new(nw, d, higher).map_err(|e| IoError::Semantic(e.to_string()))
}

pub fn parse_extension_block<S: Backend>(
    doc: &InstanceDoc,
    ctx: &Context<S>,
    spec: &FieldSpec,
) -> Result<(Cochain<S>, Cochain<S>), IoError> {
    let block = doc
        .extension
        .as_ref()
        .ok_or_else(|| IoError::Semantic("file has no extension block".into()))?;
    let d = ctx.algebra.dim();
    let m = ctx.module.dim();
    let psi = parse_entries(&block.psi, 2, &ctx.semigroup, d, m, spec, "extension.psi")?;
    let chi = parse_entries(&block.chi, 1, &ctx.semigroup, d, m, spec, "extension.chi")?;
    Ok((psi, chi))
}

// --- serialization ---

fn render_matrix<S: Scalar>(m: &OperatorMatrix<S>) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.at(r, c).render()).collect())
        .collect()
}

fn render_family<S: Scalar>(fam: &OperatorFamily<S>, sg: &Semigroup) -> BTreeMap<String, Vec<Vec<String>>> {
    (0..sg.len())
        .map(|w| (sg.label(w).to_string(), render_matrix(fam.map(w))))
        .collect()
}

pub fn render_cochain_entries<S: Scalar>(c: &Cochain<S>, sg: &Semigroup) -> Vec<CochainEntry> {
    c.entries()
        .into_iter()
        .map(|(ws, inputs, out, v)| CochainEntry {
            w: ws.into_iter().map(|w| sg.label(w).to_string()).collect(),
            inputs,
            out,
            c: v.render(),
        })
        .collect()
}

/// Serializes a context back into the file model; parsing the result yields
/// the same context.
pub fn serialize_context<S: Scalar>(ctx: &Context<S>, spec: &FieldSpec) -> InstanceDoc {
    let sg = &ctx.semigroup;
    let table = sg
        .table_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|v| sg.label(v).to_string()).collect())
        .collect();
    let mu = ctx
        .algebra
        .entries()
        .into_iter()
        .map(|(a, b, i, j, k, c)| MuEntry {
            a: sg.label(a).to_string(),
            b: sg.label(b).to_string(),
            i,
            j,
            k,
            c: c.render(),
        })
        .collect();
    let regular = NfBimodule::regular(&ctx.algebra, ctx.nijenhuis.clone());
    let module = if ctx.module == regular {
        None
    } else {
        Some(ModuleDoc {
            dim: ctx.module.dim(),
            left: ctx
                .module
                .left_entries()
                .into_iter()
                .map(|(a, b, i, x, y, c)| ActionEntry {
                    a: sg.label(a).to_string(),
                    b: sg.label(b).to_string(),
                    i,
                    x,
                    y,
                    c: c.render(),
                })
                .collect(),
            right: ctx
                .module
                .right_entries()
                .into_iter()
                .map(|(a, b, x, i, y, c)| ActionEntry {
                    a: sg.label(a).to_string(),
                    b: sg.label(b).to_string(),
                    i,
                    x,
                    y,
                    c: c.render(),
                })
                .collect(),
            nm: render_family(ctx.module.nm(), sg),
        })
    };
    InstanceDoc {
        field: Some(spec.render()),
        semigroup: SemigroupDoc {
            labels: sg.labels().to_vec(),
            table,
            unit: sg.unit().map(|u| sg.label(u).to_string()),
        },
        algebra: AlgebraDoc {
            dim: ctx.algebra.dim(),
            mu,
        },
        nijenhuis: render_family(&ctx.nijenhuis, sg),
        module,
        cochains: None,
        deformation: None,
        gauge: None,
        extension: None,
    }
}

pub fn serialize_deformation<S: Scalar>(
    base: &Context<S>,
    def: &TruncatedDeformation<S>,
    spec: &FieldSpec,
) -> InstanceDoc {
    let mut doc = serialize_context(base, spec);
    let sg = &base.semigroup;
    let order = def.order();
    let mu = (1..=order)
        .map(|k| OrderedCochain {
            order: k,
            entries: render_cochain_entries(def.mu_coeff(k), sg),
        })
        .collect();
    let n = (1..=order)
        .map(|k| OrderedFamily {
            order: k,
            maps: render_family(def.n_coeff(k), sg),
        })
        .collect();
    doc.deformation = Some(DeformationDoc { order, mu, n });
    doc
}

pub fn serialize_extension<S: Scalar>(
    base: &Context<S>,
    psi: &Cochain<S>,
    chi: &Cochain<S>,
    spec: &FieldSpec,
) -> InstanceDoc {
    let mut doc = serialize_context(base, spec);
    doc.extension = Some(ExtensionDoc {
        psi: render_cochain_entries(psi, &base.semigroup),
        chi: render_cochain_entries(chi, &base.semigroup),
    });
    doc
}

pub fn serialize_cone_cochain<S: Scalar>(
    name: &str,
    c: &ConeCochain<S>,
    sg: &Semigroup,
) -> BTreeMap<String, CochainDoc> {
    let mut m = BTreeMap::new();
    m.insert(
        name.to_string(),
        CochainDoc {
            degree: c.alg.degree(),
            alg: render_cochain_entries(&c.alg, sg),
            nf: c
                .nf
                .as_ref()
                .map(|g| render_cochain_entries(g, sg))
                .unwrap_or_default(),
        },
    );
    m
}

pub fn write_doc(path: &std::path::Path, doc: &InstanceDoc) -> Result<(), IoError> {
    let text = serde_json::to_string_pretty(doc)
        .map_err(|e| IoError::Parse(format!("serialization failed: {e}")))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| IoError::Parse(format!("cannot write {}: {e}", path.display())))
}
