//! Canonical text formats.
//!
//! A REP file stores a [`CoefficientFamily`] as JSON with sparse 1-based
//! `[row, col, "value"]` triples per exponent; a LIE file stores layer
//! triples as dense matrices of value strings. Writers emit one fixed
//! layout, so equal objects give byte-identical files. Readers accept only
//! that canonical content (any whitespace): exponents strictly increasing,
//! entries strictly increasing in row-major order, no zero values.

use std::fmt::Write as _;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::poly::GroupKind;
use crate::rep::{CoefficientFamily, FrobeniusLayers, LayerTriple};
use crate::scalars::{FieldSpec, Prime, Scalar};
use crate::structure::LieLayerData;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawField {
    Prime { p: u64 },
    Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoefficient {
    exponent: Vec<u32>,
    entries: Vec<(usize, usize, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRep {
    format_version: u32,
    group: String,
    field: RawField,
    dimension: usize,
    coefficients: Vec<RawCoefficient>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLayer {
    #[serde(rename = "X")]
    x: Vec<Vec<String>>,
    #[serde(rename = "Y")]
    y: Vec<Vec<String>>,
    #[serde(rename = "Z")]
    z: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLie {
    format_version: u32,
    p: u64,
    dimension: usize,
    layers: Vec<RawLayer>,
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
}

fn at(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(at("format_version", format!("unsupported version {v}")));
    }
    Ok(())
}

fn field_json(field: FieldSpec) -> String {
    match field {
        FieldSpec::Prime(p) => format!("{{\"kind\": \"prime\", \"p\": {p}}}"),
        FieldSpec::Rational => "{\"kind\": \"rational\"}".to_string(),
    }
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Canonical REP text for a family.
pub fn write_rep(f: &CoefficientFamily) -> String {
    let mut s = String::new();
    s.push_str("{\n");
    let _ = writeln!(s, "  \"format_version\": {FORMAT_VERSION},");
    let _ = writeln!(s, "  \"group\": \"{}\",", f.group());
    let _ = writeln!(s, "  \"field\": {},", field_json(f.field()));
    let _ = writeln!(s, "  \"dimension\": {},", f.dim());
    if f.is_empty() {
        s.push_str("  \"coefficients\": []\n}\n");
        return s;
    }
    s.push_str("  \"coefficients\": [\n");
    let n = f.len();
    for (k, (e, m)) in f.iter().enumerate() {
        let _ = writeln!(s, "    {{\n      \"exponent\": [{}],\n      \"entries\": [", join(e));
        let entries: Vec<String> = m
            .nonzero_entries()
            .map(|(i, j, v)| format!("        [{}, {}, \"{v}\"]", i + 1, j + 1))
            .collect();
        s.push_str(&entries.join(",\n"));
        let _ = write!(s, "\n      ]\n    }}{}\n", if k + 1 < n { "," } else { "" });
    }
    s.push_str("  ]\n}\n");
    s
}

/// Parses REP text, rejecting anything non-canonical.
pub fn read_rep(text: &str) -> Result<CoefficientFamily> {
    let raw: RawRep = parse_json(text)?;
    check_version(raw.format_version)?;
    let group = GroupKind::parse(&raw.group).map_err(|e| at("group", e))?;
    let field = match raw.field {
        RawField::Prime { p } => FieldSpec::prime(p).map_err(|e| at("field.p", e))?,
        RawField::Rational => FieldSpec::Rational,
    };
    let d = raw.dimension;
    if d == 0 {
        return Err(at("dimension", "must be positive"));
    }
    let mut family = CoefficientFamily::empty(group, field, d)?;
    let mut prev_exp: Option<Vec<u32>> = None;
    for (k, c) in raw.coefficients.into_iter().enumerate() {
        let path = format!("coefficients[{k}]");
        if c.exponent.len() != group.arity() {
            return Err(at(
                &format!("{path}.exponent"),
                format!("expected {} components for {group}, found {}", group.arity(), c.exponent.len()),
            ));
        }
        if prev_exp.as_ref().is_some_and(|p| *p >= c.exponent) {
            return Err(at(&format!("{path}.exponent"), "exponents must be strictly increasing"));
        }
        if c.entries.is_empty() {
            return Err(at(&format!("{path}.entries"), "zero matrices are omitted in canonical form"));
        }
        let mut m = ExactMatrix::zero(field, d);
        let mut prev: Option<(usize, usize)> = None;
        for (t, (i, j, v)) in c.entries.into_iter().enumerate() {
            let epath = format!("{path}.entries[{t}]");
            if !(1..=d).contains(&i) || !(1..=d).contains(&j) {
                return Err(at(&epath, format!("index ({i},{j}) outside 1..={d}")));
            }
            if prev.is_some_and(|p| p >= (i, j)) {
                return Err(at(&epath, "entries must be strictly increasing in row-major order"));
            }
            prev = Some((i, j));
            let value = field.parse(&v).map_err(|e| at(&epath, e))?;
            if value.is_zero() {
                return Err(at(&epath, "zero entries are omitted in canonical form"));
            }
            m.set(i - 1, j - 1, value);
        }
        family.insert(c.exponent.clone(), m)?;
        prev_exp = Some(c.exponent);
    }
    Ok(family)
}

/// Contents of a LIE file: layer triples over `F_p`, not necessarily
/// satisfying the construction hypotheses (extracted layers of arbitrary
/// representations are stored the same way).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieFile {
    pub p: Prime,
    pub dim: usize,
    pub layers: Vec<LayerTriple>,
}

impl LieFile {
    pub fn from_lie(lie: &LieLayerData) -> Self {
        LieFile { p: lie.p(), dim: lie.dim(), layers: lie.triples().to_vec() }
    }

    pub fn from_layers(layers: &FrobeniusLayers) -> Self {
        LieFile { p: layers.p, dim: layers.dim, layers: layers.layers.clone() }
    }

    /// Validates the construction hypotheses.
    pub fn to_lie(&self) -> Result<LieLayerData> {
        LieLayerData::new(self.p, self.dim, self.layers.clone())
    }
}

fn write_matrix(s: &mut String, name: &str, m: &ExactMatrix, last: bool) {
    let _ = writeln!(s, "      \"{name}\": [");
    let rows: Vec<String> = m
        .rows()
        .map(|r| format!("        [{}]", join(r.iter().map(|v| format!("\"{v}\"")))))
        .collect();
    s.push_str(&rows.join(",\n"));
    let _ = writeln!(s, "\n      ]{}", if last { "" } else { "," });
}

pub fn write_lie(lie: &LieFile) -> String {
    let mut s = String::new();
    s.push_str("{\n");
    let _ = writeln!(s, "  \"format_version\": {FORMAT_VERSION},");
    let _ = writeln!(s, "  \"p\": {},", lie.p);
    let _ = writeln!(s, "  \"dimension\": {},", lie.dim);
    if lie.layers.is_empty() {
        s.push_str("  \"layers\": []\n}\n");
        return s;
    }
    s.push_str("  \"layers\": [\n");
    for (k, t) in lie.layers.iter().enumerate() {
        s.push_str("    {\n");
        write_matrix(&mut s, "X", &t.x, false);
        write_matrix(&mut s, "Y", &t.y, false);
        write_matrix(&mut s, "Z", &t.z, true);
        let _ = writeln!(s, "    }}{}", if k + 1 < lie.layers.len() { "," } else { "" });
    }
    s.push_str("  ]\n}\n");
    s
}

fn read_matrix(path: &str, field: FieldSpec, d: usize, rows: Vec<Vec<String>>) -> Result<ExactMatrix> {
    if rows.len() != d {
        return Err(at(path, format!("expected {d} rows, found {}", rows.len())));
    }
    let mut out: Vec<Vec<Scalar>> = Vec::with_capacity(d);
    for (i, row) in rows.into_iter().enumerate() {
        if row.len() != d {
            return Err(at(&format!("{path}[{i}]"), format!("expected {d} columns, found {}", row.len())));
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, v)| field.parse(v).map_err(|e| at(&format!("{path}[{i}][{j}]"), e)))
            .collect::<Result<Vec<_>>>()?;
        out.push(parsed);
    }
    ExactMatrix::from_rows(field, out)
}

pub fn read_lie(text: &str) -> Result<LieFile> {
    let raw: RawLie = parse_json(text)?;
    check_version(raw.format_version)?;
    let p = Prime::new(raw.p).map_err(|e| at("p", e))?;
    let field = FieldSpec::Prime(p);
    let d = raw.dimension;
    if d == 0 {
        return Err(at("dimension", "must be positive"));
    }
    let mut layers = Vec::with_capacity(raw.layers.len());
    for (k, l) in raw.layers.into_iter().enumerate() {
        layers.push(LayerTriple {
            x: read_matrix(&format!("layers[{k}].X"), field, d, l.x)?,
            y: read_matrix(&format!("layers[{k}].Y"), field, d, l.y)?,
            z: read_matrix(&format!("layers[{k}].Z"), field, d, l.z)?,
        });
    }
    Ok(LieFile { p, dim: d, layers })
}
