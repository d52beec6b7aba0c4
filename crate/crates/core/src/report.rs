//! Report documents and their renderers.
//!
//! JSON encoding: rationals are strings `"a/b"` (integers as `"a"`), a power
//! `q^{k/N}` is `{"num": k, "den": N}`, a q-polynomial is a list of
//! `{"coeff", "num", "den"}` terms in increasing exponent, and an ħ-Laurent
//! polynomial maps each ħ-exponent (as a string) to its q-polynomial.

use std::fmt::Write as _;

use serde_json::{json, Map, Value as Json};

use crate::arith::{HLaurent, Mat, QPoly, Rat};
use crate::birkhoff::{check_irreducible, HypersurfaceResult};
use crate::error::{Error, Result};
use crate::pipeline::{Output, WpsOutput};
use crate::ring::QuantumRing;
use crate::weights::{factorization_string, Label};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SectionId {
    Data,
    Matrix,
    Table,
    Classical,
    Grading,
    Pairing,
    Gauge,
}

impl SectionId {
    pub const ALL: [SectionId; 7] = [
        SectionId::Data,
        SectionId::Matrix,
        SectionId::Table,
        SectionId::Classical,
        SectionId::Grading,
        SectionId::Pairing,
        SectionId::Gauge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SectionId::Data => "data",
            SectionId::Matrix => "matrix",
            SectionId::Table => "table",
            SectionId::Classical => "classical",
            SectionId::Grading => "grading",
            SectionId::Pairing => "pairing",
            SectionId::Gauge => "gauge",
        }
    }

    pub fn parse(s: &str) -> Result<SectionId> {
        SectionId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown section {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Text(String),
    Int(i64),
    Bool(bool),
    Rat(Rat),
    Q(QPoly),
    H(HLaurent),
    List(Vec<Value>),
    Matrix(Vec<Vec<Value>>),
    Record(Vec<(String, Value)>),
    /// A labelled table of display strings, e.g. a multiplication table.
    Grid {
        columns: Vec<String>,
        rows: Vec<(String, Vec<String>)>,
    },
}

impl Value {
    fn text(s: impl Into<String>) -> Value {
        Value::Text(s.into())
    }

    fn rats(v: &[Rat]) -> Value {
        Value::List(v.iter().cloned().map(Value::Rat).collect())
    }

    fn qpolys(v: &[QPoly]) -> Value {
        Value::List(v.iter().cloned().map(Value::Q).collect())
    }

    fn ints(v: impl IntoIterator<Item = i64>) -> Value {
        Value::List(v.into_iter().map(Value::Int).collect())
    }

    fn qmat(m: &Mat<QPoly>) -> Value {
        Value::Matrix(m.to_rows().into_iter().map(|r| r.into_iter().map(Value::Q).collect()).collect())
    }

    fn hmat(m: &Mat<HLaurent>) -> Value {
        Value::Matrix(m.to_rows().into_iter().map(|r| r.into_iter().map(Value::H).collect()).collect())
    }

    fn rmat(m: &Mat<Rat>) -> Value {
        Value::Matrix(m.to_rows().into_iter().map(|r| r.into_iter().map(Value::Rat).collect()).collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    pub id: SectionId,
    pub entries: Vec<(String, Value)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub title: String,
    pub header: Vec<(String, Value)>,
    pub sections: Vec<Section>,
}

// ---------------------------------------------------------------- encoding

pub fn encode_rat(r: &Rat) -> Json {
    Json::String(r.to_string())
}

pub fn decode_rat(v: &Json) -> Result<Rat> {
    v.as_str()
        .ok_or_else(|| Error::Parse(format!("expected a rational string, got {v}")))?
        .parse()
}

pub fn encode_qpoly(p: &QPoly) -> Json {
    Json::Array(
        p.terms()
            .map(|(e, c)| {
                json!({
                    "coeff": c.to_string(),
                    "num": e.numer().to_string().parse::<i64>().unwrap_or(i64::MAX),
                    "den": e.denom().to_string().parse::<i64>().unwrap_or(i64::MAX),
                })
            })
            .collect(),
    )
}

pub fn decode_qpoly(v: &Json) -> Result<QPoly> {
    let terms = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected a term list, got {v}")))?;
    let mut out = QPoly::zero();
    for t in terms {
        let field = |k: &str| t.get(k).ok_or_else(|| Error::Parse(format!("term without {k:?}: {t}")));
        let c = decode_rat(field("coeff")?)?;
        let num = field("num")?.as_i64().ok_or_else(|| Error::Parse(format!("bad num in {t}")))?;
        let den = field("den")?.as_i64().filter(|d| *d > 0).ok_or_else(|| Error::Parse(format!("bad den in {t}")))?;
        out = &out + &QPoly::monomial(c, &Rat::new(num, den));
    }
    Ok(out)
}

pub fn encode_hlaurent(h: &HLaurent) -> Json {
    Json::Object(h.terms().map(|(m, c)| (m.to_string(), encode_qpoly(c))).collect())
}

pub fn decode_hlaurent(v: &Json) -> Result<HLaurent> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse(format!("expected an exponent map, got {v}")))?;
    let mut terms = Vec::with_capacity(obj.len());
    for (k, c) in obj {
        let m: i32 = k.parse().map_err(|_| Error::Parse(format!("bad ħ exponent {k:?}")))?;
        terms.push((m, decode_qpoly(c)?));
    }
    Ok(HLaurent::from_terms(terms))
}

pub fn value_to_json(v: &Value) -> Json {
    match v {
        Value::Text(s) => Json::String(s.clone()),
        Value::Int(n) => json!(n),
        Value::Bool(b) => json!(b),
        Value::Rat(r) => encode_rat(r),
        Value::Q(p) => encode_qpoly(p),
        Value::H(h) => encode_hlaurent(h),
        Value::List(xs) => Json::Array(xs.iter().map(value_to_json).collect()),
        Value::Matrix(rows) => Json::Array(
            rows.iter()
                .map(|r| Json::Array(r.iter().map(value_to_json).collect()))
                .collect(),
        ),
        Value::Record(fields) => record_json(fields),
        Value::Grid { columns, rows } => json!({
            "columns": columns,
            "rows": rows.iter().map(|(l, cells)| json!({"label": l, "cells": cells})).collect::<Vec<_>>(),
        }),
    }
}

fn record_json(fields: &[(String, Value)]) -> Json {
    Json::Object(fields.iter().map(|(k, v)| (k.clone(), value_to_json(v))).collect::<Map<_, _>>())
}

pub fn document_to_json(doc: &Document) -> Json {
    let mut obj = Map::new();
    obj.insert("schema".into(), json!(SCHEMA_VERSION));
    obj.insert("title".into(), json!(doc.title));
    for (k, v) in &doc.header {
        obj.insert(k.clone(), value_to_json(v));
    }
    let sections: Map<String, Json> = doc
        .sections
        .iter()
        .map(|s| (s.id.name().to_string(), record_json(&s.entries)))
        .collect();
    obj.insert("sections".into(), Json::Object(sections));
    Json::Object(obj)
}

// ---------------------------------------------------------------- building

fn label_names(labels: &[Label]) -> Vec<String> {
    labels.iter().map(Label::name).collect()
}

fn ring_entries(ring: &QuantumRing, id: SectionId) -> Vec<(String, Value)> {
    let names = label_names(&ring.labels);
    let n = ring.rank();
    match id {
        SectionId::Matrix => vec![
            ("basis".into(), Value::List(names.iter().map(Value::text).collect())),
            ("p".into(), Value::qmat(&ring.mult_matrix)),
        ],
        SectionId::Table => {
            let mut products = Vec::new();
            for i in 0..n {
                for j in i..n {
                    products.push(Value::Record(vec![
                        ("i".into(), Value::Int(i as i64)),
                        ("j".into(), Value::Int(j as i64)),
                        ("left".into(), Value::text(&names[i])),
                        ("right".into(), Value::text(&names[j])),
                        ("coords".into(), Value::qpolys(ring.product(i, j))),
                        ("display".into(), Value::text(ring.format_element(ring.product(i, j)))),
                    ]));
                }
            }
            vec![
                ("basis".into(), Value::List(names.iter().map(Value::text).collect())),
                ("products".into(), Value::List(products)),
                ("grid".into(), product_grid(ring, &names)),
            ]
        }
        SectionId::Classical => {
            let classical = ring.classical_limit();
            let mut products = Vec::new();
            for (i, row) in classical.iter().enumerate() {
                for (j, v) in row.iter().enumerate().skip(i) {
                    products.push(Value::Record(vec![
                        ("i".into(), Value::Int(i as i64)),
                        ("j".into(), Value::Int(j as i64)),
                        ("coords".into(), Value::rats(v)),
                    ]));
                }
            }
            let span = ring.classical_p_span();
            vec![
                ("products".into(), Value::List(products)),
                ("powers_of_p_span".into(), Value::Int(span as i64)),
                ("p_generates".into(), Value::Bool(span == n)),
            ]
        }
        SectionId::Grading => vec![
            ("q_weight".into(), Value::Rat(ring.q_weight.clone())),
            (
                "degrees".into(),
                Value::Record(
                    ring.labels
                        .iter()
                        .map(|l| (l.name(), Value::Rat(l.degree.clone())))
                        .collect(),
                ),
            ),
        ],
        SectionId::Pairing => vec![("pairing".into(), Value::qmat(&ring.pairing))],
        SectionId::Data | SectionId::Gauge => Vec::new(),
    }
}

fn product_grid(ring: &QuantumRing, names: &[String]) -> Value {
    let n = ring.rank();
    Value::Grid {
        columns: names.to_vec(),
        rows: (0..n)
            .map(|i| {
                let cells = (0..n)
                    .map(|j| {
                        if j < i {
                            String::new()
                        } else {
                            ring.format_element(ring.product(i, j))
                        }
                    })
                    .collect();
                (names[i].clone(), cells)
            })
            .collect(),
    }
}

fn wps_entries(o: &WpsOutput, id: SectionId) -> Vec<(String, Value)> {
    let wd = &o.data;
    match id {
        SectionId::Data => vec![
            ("weights".into(), Value::ints(wd.weights.iter().map(|w| *w as i64))),
            ("sigma".into(), Value::Int(wd.sigma as i64)),
            ("w_pow_w".into(), Value::text(wd.w_pow_w.to_string())),
            ("fractions".into(), Value::rats(&wd.fractions)),
            ("multiplicities".into(), Value::ints(wd.multiplicities.iter().map(|u| *u as i64))),
            (
                "index_sets".into(),
                Value::List(
                    wd.index_sets
                        .iter()
                        .map(|s| Value::ints(s.iter().map(|i| *i as i64)))
                        .collect(),
                ),
            ),
            ("deltas".into(), Value::rats(&wd.deltas)),
            ("r".into(), Value::qpolys(&wd.r_seq)),
            ("factorization".into(), Value::text(factorization_string(wd))),
        ],
        SectionId::Grading => {
            let mut e = ring_entries(&o.ring, id);
            e.push(("ages".into(), Value::rats(&wd.ages)));
            e
        }
        SectionId::Gauge => vec![
            ("connection".into(), Value::hmat(&o.presentation.connection)),
            ("note".into(), Value::text("the connection is already ħ-free; no gauge is needed")),
        ],
        _ => ring_entries(&o.ring, id),
    }
}

fn hyp_entries(h: &HypersurfaceResult, id: SectionId) -> Vec<(String, Value)> {
    let spec = &h.spec;
    match id {
        SectionId::Data => vec![
            ("weights".into(), Value::ints(spec.weights.iter().map(|w| *w as i64))),
            ("degree".into(), Value::Int(spec.degree as i64)),
            ("sigma".into(), Value::Int(spec.sigma as i64)),
            ("fano_index".into(), Value::Int(spec.fano_index() as i64)),
            ("truncated_weights".into(), Value::ints(spec.truncated.weights.iter().map(|w| *w as i64))),
            ("fractions".into(), Value::rats(&spec.truncated.fractions)),
            ("multiplicities".into(), Value::ints(spec.truncated.multiplicities.iter().map(|u| *u as i64))),
            ("operator".into(), Value::text(h.operator.to_string())),
            ("irreducible".into(), Value::Bool(check_irreducible(spec))),
        ],
        SectionId::Table => {
            let mut e = ring_entries(&h.ring, id);
            e.push((
                "free_constants".into(),
                Value::List(
                    h.free_constants
                        .iter()
                        .map(|(i, j, k)| Value::ints([*i as i64, *j as i64, *k as i64]))
                        .collect(),
                ),
            ));
            e
        }
        SectionId::Grading => {
            let mut e = ring_entries(&h.ring, id);
            e.push(("ages".into(), Value::rats(&h.ages())));
            e
        }
        SectionId::Pairing => {
            let mut e = ring_entries(&h.ring, id);
            e.push(("gram_hat".into(), Value::hmat(&h.gram_hat)));
            e
        }
        SectionId::Gauge => {
            let s1 = &h.step1;
            let s2 = &h.step2;
            let g = &h.gamma;
            vec![
                ("omega".into(), Value::hmat(h.omega())),
                ("l_plus".into(), Value::hmat(&s1.l_plus)),
                ("q_factors".into(), Value::List(s1.q_factors.iter().map(Value::qmat).collect())),
                ("omega_hat".into(), Value::qmat(&s1.omega_hat)),
                ("hat_degrees".into(), Value::rats(&s1.degrees)),
                ("gamma".into(), Value::ints(g.exponents.iter().map(|a| i64::from(*a)))),
                ("gamma_candidates".into(), Value::Int(g.candidates as i64)),
                ("gamma_unique".into(), Value::Bool(g.unique)),
                (
                    "gamma_closed_formula".into(),
                    Value::List(
                        g.closed_formula
                            .iter()
                            .map(|c| {
                                Value::Record(vec![
                                    ("reading".into(), Value::text(&c.reading)),
                                    ("values".into(), Value::rats(&c.values)),
                                    ("exact".into(), Value::Bool(c.exact)),
                                    ("up_to_shift".into(), Value::Bool(c.up_to_shift)),
                                ])
                            })
                            .collect(),
                    ),
                ),
                ("z".into(), Value::hmat(&s2.z)),
                ("z_at_q0".into(), Value::hmat(&s2.z_at_q0)),
                ("block_scalars".into(), Value::rats(&s2.block_scalars)),
                ("e_inv".into(), Value::hmat(&s2.e_inv)),
                ("lf_inv".into(), Value::hmat(&s2.lf_inv)),
                ("omega_tilde".into(), Value::qmat(&s2.omega_tilde)),
                ("s".into(), Value::rmat(&s2.s)),
            ]
        }
        _ => ring_entries(&h.ring, id),
    }
}

pub fn build_document(output: &Output, sections: &[SectionId]) -> Document {
    let (title, header) = match output {
        Output::Wps(o) => (
            format!("P({})", join(&o.data.weights)),
            vec![("weights".to_string(), Value::ints(o.data.weights.iter().map(|w| *w as i64)))],
        ),
        Output::Hypersurface(h) => (
            format!("X_{} in P({})", h.spec.degree, join(&h.spec.weights)),
            vec![
                ("weights".to_string(), Value::ints(h.spec.weights.iter().map(|w| *w as i64))),
                ("degree".to_string(), Value::Int(h.spec.degree as i64)),
            ],
        ),
    };
    let mut header = header;
    header.insert(0, ("pipeline".into(), Value::text(output.pipeline())));
    let mut ids = sections.to_vec();
    ids.sort();
    ids.dedup();
    let sections = ids
        .into_iter()
        .map(|id| Section {
            id,
            entries: match output {
                Output::Wps(o) => wps_entries(o, id),
                Output::Hypersurface(h) => hyp_entries(h, id),
            },
        })
        .collect();
    Document {
        title,
        header,
        sections,
    }
}

fn join(w: &[u64]) -> String {
    w.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

// ---------------------------------------------------------------- renderers

pub trait Renderer: Send + Sync {
    fn id(&self) -> &'static str;
    fn render(&self, doc: &Document) -> String;
}

pub struct JsonRenderer;
pub struct MarkdownRenderer;
pub struct LatexRenderer;

impl Renderer for JsonRenderer {
    fn id(&self) -> &'static str {
        "json"
    }

    fn render(&self, doc: &Document) -> String {
        let mut s = serde_json::to_string_pretty(&document_to_json(doc)).expect("serializable");
        s.push('\n');
        s
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::Text(s) => s.clone(),
        Value::Int(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Rat(r) => r.to_string(),
        Value::Q(p) => p.to_string(),
        Value::H(h) => h.to_string(),
        Value::List(xs) => format!("[{}]", xs.iter().map(plain).collect::<Vec<_>>().join(", ")),
        Value::Record(fs) => format!(
            "{{{}}}",
            fs.iter().map(|(k, v)| format!("{k}: {}", plain(v))).collect::<Vec<_>>().join(", ")
        ),
        Value::Matrix(_) | Value::Grid { .. } => String::new(),
    }
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

impl MarkdownRenderer {
    fn value(out: &mut String, key: &str, v: &Value) {
        match v {
            Value::Matrix(rows) => {
                let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(plain).collect()).collect();
                let ncols = cells.first().map_or(0, Vec::len);
                let widths: Vec<usize> = (0..ncols)
                    .map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(1))
                    .collect();
                let _ = writeln!(out, "\n**{key}**\n\n```");
                for r in &cells {
                    let line: Vec<String> = r
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:>w$}", w = *w))
                        .collect();
                    let _ = writeln!(out, "[ {} ]", line.join("  "));
                }
                let _ = writeln!(out, "```\n");
            }
            Value::Grid { columns, rows } => {
                let _ = writeln!(out, "\n**{key}**\n");
                let _ = writeln!(out, "| ∘ | {} |", columns.iter().map(|c| md_cell(c)).collect::<Vec<_>>().join(" | "));
                let _ = writeln!(out, "|---|{}", "---|".repeat(columns.len()));
                for (label, cells) in rows {
                    let _ = writeln!(
                        out,
                        "| {} | {} |",
                        md_cell(label),
                        cells.iter().map(|c| md_cell(c)).collect::<Vec<_>>().join(" | ")
                    );
                }
                out.push('\n');
            }
            Value::List(xs) if xs.iter().any(|x| matches!(x, Value::Matrix(_) | Value::Record(_))) => {
                let _ = writeln!(out, "\n**{key}**\n");
                for (i, x) in xs.iter().enumerate() {
                    match x {
                        Value::Matrix(_) => Self::value(out, &format!("{key}[{i}]"), x),
                        _ => {
                            let _ = writeln!(out, "- {}", plain(x));
                        }
                    }
                }
                out.push('\n');
            }
            _ => {
                let _ = writeln!(out, "- **{key}**: {}", plain(v));
            }
        }
    }
}

impl Renderer for MarkdownRenderer {
    fn id(&self) -> &'static str {
        "markdown"
    }

    fn render(&self, doc: &Document) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}\n", doc.title);
        for (k, v) in &doc.header {
            Self::value(&mut out, k, v);
        }
        for s in &doc.sections {
            let _ = writeln!(out, "\n## {}\n", s.id.name());
            for (k, v) in &s.entries {
                // The product grid already shows what the record list spells out.
                if s.id == SectionId::Table && k == "products" {
                    continue;
                }
                Self::value(&mut out, k, v);
            }
        }
        out
    }
}

pub fn latex_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{sign}\\tfrac{{{}}}{{{}}}", r.numer().magnitude(), r.denom())
    }
}

pub fn latex_qpoly(p: &QPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (e, c)) in p.terms().enumerate() {
        let a = c.abs();
        if i > 0 {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        } else if c.is_negative() {
            out.push('-');
        }
        if e.is_zero() {
            out.push_str(&latex_rat(&a));
            continue;
        }
        if !a.is_one() {
            out.push_str(&latex_rat(&a));
            out.push(' ');
        }
        if e.is_one() {
            out.push('q');
        } else if e.is_integer() {
            let _ = write!(out, "q^{{{e}}}");
        } else {
            let _ = write!(out, "q^{{{}}}", latex_rat(&e));
        }
    }
    out
}

pub fn latex_hlaurent(h: &HLaurent) -> String {
    if h.is_zero() {
        return "0".into();
    }
    let terms: Vec<(i32, &QPoly)> = h.terms().collect();
    let parts: Vec<String> = terms
        .iter()
        .rev()
        .map(|(m, c)| {
            let hb = match m {
                0 => String::new(),
                1 => "\\hbar".into(),
                _ => format!("\\hbar^{{{m}}}"),
            };
            if hb.is_empty() {
                latex_qpoly(c)
            } else if c.is_one() {
                hb
            } else if c.len() == 1 {
                format!("{} {hb}", latex_qpoly(c))
            } else {
                format!("({}) {hb}", latex_qpoly(c))
            }
        })
        .collect();
    parts.join(" + ")
}

fn latex_label(name: &str) -> String {
    name.replace("1_{", "\\mathbf{1}_{")
}

fn latex_value(v: &Value) -> String {
    match v {
        Value::Text(s) => format!("\\text{{{}}}", s.replace('_', "\\_")),
        Value::Int(n) => n.to_string(),
        Value::Bool(b) => format!("\\text{{{b}}}"),
        Value::Rat(r) => latex_rat(r),
        Value::Q(p) => latex_qpoly(p),
        Value::H(h) => latex_hlaurent(h),
        Value::List(xs) => format!("({})", xs.iter().map(latex_value).collect::<Vec<_>>().join(", ")),
        Value::Matrix(rows) => {
            let body: Vec<String> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| match x {
                            Value::Q(p) if p.is_zero() => String::new(),
                            Value::H(h) if h.is_zero() => String::new(),
                            Value::Rat(r) if r.is_zero() => String::new(),
                            _ => latex_value(x),
                        })
                        .collect::<Vec<_>>()
                        .join(" & ")
                })
                .collect();
            format!("\\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}", body.join(" \\\\\n"))
        }
        Value::Record(fs) => fs
            .iter()
            .map(|(k, v)| format!("\\text{{{}}}: {}", k.replace('_', "\\_"), latex_value(v)))
            .collect::<Vec<_>>()
            .join(",\\ "),
        Value::Grid { columns, rows } => {
            let mut s = format!("\\begin{{array}}{{c|{}}}\n", "c".repeat(columns.len()));
            let _ = writeln!(
                s,
                " & {} \\\\\n\\hline",
                columns.iter().map(|c| latex_label(c)).collect::<Vec<_>>().join(" & ")
            );
            for (label, cells) in rows {
                let _ = writeln!(
                    s,
                    "{} & {} \\\\",
                    latex_label(label),
                    cells.iter().map(|c| latex_cell(c)).collect::<Vec<_>>().join(" & ")
                );
            }
            s.push_str("\\end{array}");
            s
        }
    }
}

/// Display strings from `format_element` use `q^(a/b)`, `q^k`, `1_{f}` and `p^k`.
fn latex_cell(s: &str) -> String {
    let mut out = String::new();
    let mut rest = s;
    while let Some(i) = rest.find("q^") {
        out.push_str(&rest[..i]);
        let tail = &rest[i + 2..];
        let (e, used) = if let Some(inner) = tail.strip_prefix('(') {
            let j = inner.find(')').unwrap_or(inner.len());
            (&inner[..j], (j + 2).min(tail.len()))
        } else {
            let j = tail.find(|c: char| !c.is_ascii_digit()).unwrap_or(tail.len());
            (&tail[..j], j)
        };
        let e = match e.split_once('/') {
            Some((a, b)) => format!("\\frac{{{a}}}{{{b}}}"),
            None => e.to_string(),
        };
        let _ = write!(out, "q^{{{e}}}");
        rest = &tail[used..];
    }
    out.push_str(rest);
    latex_label(&out)
}

impl Renderer for LatexRenderer {
    fn id(&self) -> &'static str {
        "latex"
    }

    fn render(&self, doc: &Document) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "% {}", doc.title);
        for s in &doc.sections {
            let _ = writeln!(out, "\\paragraph{{{}}}", s.id.name());
            for (k, v) in &s.entries {
                if s.id == SectionId::Table && k == "products" {
                    continue;
                }
                let _ = writeln!(out, "\\[\n\\text{{{}}} = {}\n\\]", k.replace('_', "\\_"), latex_value(v));
            }
        }
        out
    }
}

static RENDERERS: [&dyn Renderer; 3] = [&JsonRenderer, &MarkdownRenderer, &LatexRenderer];

pub fn renderers() -> &'static [&'static dyn Renderer] {
    &RENDERERS
}

pub fn renderer(id: &str) -> Result<&'static dyn Renderer> {
    renderers()
        .iter()
        .copied()
        .find(|r| r.id() == id)
        .ok_or_else(|| Error::InvalidInput(format!("unknown format {id:?}")))
}
