//! JSON and text file formats for models.
//!
//! Floats are written in shortest round-trip form and parsed with exact
//! round-trip, so `load(save(x)) == x` bit for bit. Schema violations are
//! reported with the JSON path of the offending field.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, MarkovDensity};
use crate::hidden::{HiddenStateSpace, InformationFunction, MarkovState};
use crate::linalg::{ComplexMatrix, RealMatrix};
use crate::measurement::{KrausMeasurement, MarkovMeasurement};
use crate::oom::ObservableOperatorModel;
use crate::operator::{check_kraus, MarkovOperator, Superoperator};
use crate::walk::DirectedGraph;
use crate::words::Scale;

/// Basis tag carried by operator files.
pub const OPERATOR_BASIS: &str = "canonical-hermitian-v1";

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn parse<D: DeserializeOwned>(text: &str) -> Result<D> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(
            if path.is_empty() {
                "$".into()
            } else {
                format!("$.{path}")
            },
            e.into_inner().to_string(),
        )
    })
}

fn render<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Re-labels errors raised while validating a field.
fn at<T>(path: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Schema { .. } => e,
        other => schema(path, other.to_string()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Hermitian,
    Density,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<MatrixKind>,
}

impl MatrixDoc {
    fn from_matrix(m: &ComplexMatrix<f64>, kind: Option<MatrixKind>) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
            kind,
        }
    }

    fn to_matrix(&self, path: &str) -> Result<ComplexMatrix<f64>> {
        let data = self
            .entries
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        at(path, ComplexMatrix::from_vec(self.rows, self.cols, data))
    }
}

/// A matrix file together with its declared kind.
#[derive(Clone, Debug, PartialEq)]
pub enum MatrixFile {
    Plain(ComplexMatrix<f64>),
    Hermitian(HermitianMatrix<f64>),
    Density(MarkovDensity<f64>),
}

pub fn matrix_from_json(text: &str) -> Result<MatrixFile> {
    let doc: MatrixDoc = parse(text)?;
    let m = doc.to_matrix("$.entries")?;
    Ok(match doc.kind {
        None => MatrixFile::Plain(m),
        Some(MatrixKind::Hermitian) => MatrixFile::Hermitian(at("$", HermitianMatrix::new(m))?),
        Some(MatrixKind::Density) => MatrixFile::Density(at("$", MarkovDensity::from_complex(m))?),
    })
}

pub fn matrix_to_json(m: &ComplexMatrix<f64>) -> String {
    render(&MatrixDoc::from_matrix(m, None))
}

pub fn hermitian_to_json(h: &HermitianMatrix<f64>) -> String {
    render(&MatrixDoc::from_matrix(
        h.as_complex(),
        Some(MatrixKind::Hermitian),
    ))
}

pub fn density_to_json(d: &MarkovDensity<f64>) -> String {
    render(&MatrixDoc::from_matrix(
        d.matrix().as_complex(),
        Some(MatrixKind::Density),
    ))
}

/// Reads any matrix file as a Markov density, validating Hermiticity and
/// unit trace regardless of the declared kind.
pub fn density_from_json(text: &str) -> Result<MarkovDensity<f64>> {
    match matrix_from_json(text)? {
        MatrixFile::Density(d) => Ok(d),
        MatrixFile::Hermitian(h) => at("$", MarkovDensity::new(h)),
        MatrixFile::Plain(m) => at("$", MarkovDensity::from_complex(m)),
    }
}

pub fn hermitian_from_json(text: &str) -> Result<HermitianMatrix<f64>> {
    match matrix_from_json(text)? {
        MatrixFile::Density(d) => Ok(d.into_matrix()),
        MatrixFile::Hermitian(h) => Ok(h),
        MatrixFile::Plain(m) => at("$", HermitianMatrix::new(m)),
    }
}

fn real_rows(rows: &[Vec<f64>], path: &str) -> Result<RealMatrix<f64>> {
    let m = at(path, RealMatrix::from_rows(rows))?;
    if let Some(i) = m.as_slice().iter().position(|x| !x.is_finite()) {
        return Err(schema(
            format!("{path}[{}][{}]", i / m.cols(), i % m.cols()),
            "non-finite entry",
        ));
    }
    Ok(m)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorDoc {
    n: usize,
    basis: String,
    matrix: Vec<Vec<f64>>,
}

fn superoperator_from_doc(doc: &OperatorDoc) -> Result<Superoperator<f64>> {
    if doc.basis != OPERATOR_BASIS {
        return Err(schema(
            "$.basis",
            format!(
                "unsupported basis {:?}, expected {OPERATOR_BASIS:?}",
                doc.basis
            ),
        ));
    }
    let m = real_rows(&doc.matrix, "$.matrix")?;
    at("$.matrix", Superoperator::from_matrix(doc.n, m))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KrausDoc {
    n: usize,
    kraus: Vec<MatrixDoc>,
}

fn kraus_from_docs(n: usize, docs: &[MatrixDoc], path: &str) -> Result<Vec<ComplexMatrix<f64>>> {
    let family = docs
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let p = format!("{path}[{i}]");
            let m = d.to_matrix(&format!("{p}.entries"))?;
            if m.shape() != (n, n) {
                return Err(schema(
                    p,
                    format!("expected {n}x{n}, found {}x{}", m.rows(), m.cols()),
                ));
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    at(path, check_kraus(&family).map(|_| ()))?;
    Ok(family)
}

pub fn kraus_from_json(text: &str) -> Result<Vec<ComplexMatrix<f64>>> {
    let doc: KrausDoc = parse(text)?;
    kraus_from_docs(doc.n, &doc.kraus, "$.kraus")
}

pub fn kraus_to_json(family: &[ComplexMatrix<f64>]) -> String {
    render(&KrausDoc {
        n: family.first().map_or(0, |k| k.rows()),
        kraus: family
            .iter()
            .map(|k| MatrixDoc::from_matrix(k, None))
            .collect(),
    })
}

pub fn superoperator_from_json(text: &str) -> Result<Superoperator<f64>> {
    superoperator_from_doc(&parse(text)?)
}

pub fn superoperator_to_json(op: &Superoperator<f64>) -> String {
    render(&OperatorDoc {
        n: op.dim(),
        basis: OPERATOR_BASIS.into(),
        matrix: op.matrix().to_rows(),
    })
}

/// Accepts an operator file or a Kraus file (the channel `Q ↦ Σ M Q M*`).
pub fn markov_operator_from_json(text: &str) -> Result<MarkovOperator<f64>> {
    let v: Value = parse(text)?;
    if v.get("kraus").is_some() {
        return MarkovOperator::from_kraus(&kraus_from_json(text)?);
    }
    at(
        "$.matrix",
        MarkovOperator::new(superoperator_from_json(text)?),
    )
}

pub fn markov_operator_to_json(op: &MarkovOperator<f64>) -> String {
    superoperator_to_json(op.as_superoperator())
}

#[derive(Clone, Debug)]
pub enum MeasurementFile {
    Kraus(KrausMeasurement<f64>),
    Markov(MarkovMeasurement<f64>),
}

impl MeasurementFile {
    pub fn scale(&self) -> &Scale {
        match self {
            Self::Kraus(k) => k.scale(),
            Self::Markov(m) => m.scale(),
        }
    }

    pub fn into_markov(self) -> MarkovMeasurement<f64> {
        match self {
            Self::Kraus(k) => k.as_markov_measurement(),
            Self::Markov(m) => m,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct MeasurementDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    scale: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kraus: Option<Map<String, Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    operators: Option<Map<String, Value>>,
}

fn field<D: DeserializeOwned>(value: &Value, path: &str) -> Result<D> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let full = if inner.is_empty() || inner == "." {
            path.to_string()
        } else {
            format!("{path}.{inner}")
        };
        schema(full, e.into_inner().to_string())
    })
}

fn per_symbol<'a>(
    scale: &Scale,
    map: &'a Map<String, Value>,
    path: &str,
) -> Result<Vec<(&'a Value, String)>> {
    if let Some(extra) = map.keys().find(|k| scale.index_of(k).is_err()) {
        return Err(schema(
            format!("{path}.{extra}"),
            "symbol is not in the scale",
        ));
    }
    scale
        .symbols()
        .iter()
        .map(|s| {
            let p = format!("{path}.{s}");
            map.get(s)
                .map(|v| (v, p.clone()))
                .ok_or_else(|| schema(p, "missing entry for scale symbol"))
        })
        .collect()
}

pub fn measurement_from_json(text: &str) -> Result<MeasurementFile> {
    let doc: MeasurementDoc = parse(text)?;
    let scale = at("$.scale", Scale::new(doc.scale.clone()))?;
    match (&doc.kraus, &doc.operators) {
        (Some(kraus), None) => {
            let n = doc
                .n
                .ok_or_else(|| schema("$.n", "required with \"kraus\""))?;
            let docs = per_symbol(&scale, kraus, "$.kraus")?
                .into_iter()
                .map(|(v, p)| field::<MatrixDoc>(v, &p))
                .collect::<Result<Vec<_>>>()?;
            let family = kraus_from_docs(n, &docs, "$.kraus")?;
            Ok(MeasurementFile::Kraus(at(
                "$.kraus",
                KrausMeasurement::new(scale, family),
            )?))
        }
        (None, Some(ops)) => {
            let mut out = Vec::new();
            for (v, p) in per_symbol(&scale, ops, "$.operators")? {
                let rows: Vec<Vec<f64>> = field(v, &p)?;
                let m = real_rows(&rows, &p)?;
                let n = (m.rows() as f64).sqrt().round() as usize;
                if let Some(declared) = doc.n {
                    if declared != n {
                        return Err(schema(
                            p,
                            format!(
                                "expected {0}x{0}, found {1}x{2}",
                                declared * declared,
                                m.rows(),
                                m.cols()
                            ),
                        ));
                    }
                }
                out.push(at(&p, Superoperator::from_matrix(n, m))?);
            }
            Ok(MeasurementFile::Markov(at(
                "$.operators",
                MarkovMeasurement::new(scale, out),
            )?))
        }
        _ => Err(schema(
            "$",
            "exactly one of \"kraus\" or \"operators\" is required",
        )),
    }
}

pub fn kraus_measurement_to_json(m: &KrausMeasurement<f64>) -> String {
    let kraus = m
        .scale()
        .symbols()
        .iter()
        .zip(m.kraus())
        .map(|(s, k)| {
            (
                s.clone(),
                serde_json::to_value(MatrixDoc::from_matrix(k, None)).expect("serializable"),
            )
        })
        .collect();
    render(&MeasurementDoc {
        n: Some(m.dim()),
        scale: m.scale().symbols().to_vec(),
        kraus: Some(kraus),
        operators: None,
    })
}

pub fn markov_measurement_to_json(m: &MarkovMeasurement<f64>) -> String {
    let ops = m
        .scale()
        .symbols()
        .iter()
        .zip(m.operators())
        .map(|(s, op)| {
            (
                s.clone(),
                serde_json::to_value(op.matrix().to_rows()).expect("serializable"),
            )
        })
        .collect();
    render(&MeasurementDoc {
        n: Some(m.dim()),
        scale: m.scale().symbols().to_vec(),
        kraus: None,
        operators: Some(ops),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    nodes: usize,
    edges: Vec<[usize; 2]>,
}

/// Parses either the JSON form or the plain `u v` edge list.
pub fn graph_from_str(text: &str) -> Result<DirectedGraph> {
    if text.trim_start().starts_with('{') {
        let doc: GraphDoc = parse(text)?;
        at(
            "$.edges",
            DirectedGraph::new(doc.nodes, doc.edges.iter().map(|&[u, v]| (u, v)).collect()),
        )
    } else {
        DirectedGraph::parse_edge_list(text)
    }
}

pub fn graph_to_json(g: &DirectedGraph) -> String {
    render(&GraphDoc {
        nodes: g.node_count(),
        edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OomDoc {
    dim: usize,
    scale: Vec<String>,
    operators: Map<String, Value>,
    pi: Vec<f64>,
}

pub fn oom_from_json(text: &str) -> Result<ObservableOperatorModel<f64>> {
    let doc: OomDoc = parse(text)?;
    let scale = at("$.scale", Scale::new(doc.scale.clone()))?;
    if doc.pi.len() != doc.dim {
        return Err(schema(
            "$.pi",
            format!("expected {} entries, found {}", doc.dim, doc.pi.len()),
        ));
    }
    let ops = per_symbol(&scale, &doc.operators, "$.operators")?
        .into_iter()
        .map(|(v, p)| {
            let rows: Vec<Vec<f64>> = field(v, &p)?;
            let m = real_rows(&rows, &p)?;
            if m.shape() != (doc.dim, doc.dim) {
                return Err(schema(
                    p,
                    format!(
                        "expected {0}x{0}, found {1}x{2}",
                        doc.dim,
                        m.rows(),
                        m.cols()
                    ),
                ));
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    at("$", ObservableOperatorModel::new(scale, ops, doc.pi))
}

pub fn oom_to_json(o: &ObservableOperatorModel<f64>) -> String {
    render(&OomDoc {
        dim: o.dim(),
        scale: o.scale().symbols().to_vec(),
        operators: o
            .scale()
            .symbols()
            .iter()
            .zip(o.operators())
            .map(|(s, m)| {
                (
                    s.clone(),
                    serde_json::to_value(m.to_rows()).expect("serializable"),
                )
            })
            .collect(),
        pi: o.pi().to_vec(),
    })
}

/// Hidden-state table: named information functions and a Markov state.
#[derive(Clone, Debug)]
pub struct HiddenTable {
    pub space: HiddenStateSpace,
    pub functions: Vec<(String, InformationFunction)>,
    pub q: MarkovState<f64>,
}

impl HiddenTable {
    pub fn function(&self, name: &str) -> Result<&InformationFunction> {
        self.functions
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, f)| f)
            .ok_or_else(|| schema(format!("$.functions.{name}"), "no such function"))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDoc {
    states: Vec<String>,
    functions: Map<String, Value>,
    q: Vec<f64>,
}

fn token(v: &Value, path: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() && n.as_i64() > Some(0) => Ok(format!("+{n}")),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(schema(path, "expected a string or number")),
    }
}

/// Scale of a function: its distinct values in order of first appearance,
/// with `{-1, +1}` used whenever every value is ±1.
fn table_scale(values: &[String]) -> Result<Scale> {
    let mut seen: Vec<String> = Vec::new();
    for v in values {
        if !seen.contains(v) {
            seen.push(v.clone());
        }
    }
    if seen.iter().all(|s| s == "-1" || s == "+1") {
        return Scale::new(["-1", "+1"]);
    }
    Scale::new(seen)
}

pub fn table_from_json(text: &str) -> Result<HiddenTable> {
    let doc: TableDoc = parse(text)?;
    let space = at("$.states", HiddenStateSpace::new(doc.states.clone()))?;
    if doc.q.len() != space.len() {
        return Err(schema(
            "$.q",
            format!("expected {} entries, found {}", space.len(), doc.q.len()),
        ));
    }
    let mut functions = Vec::new();
    for (name, value) in &doc.functions {
        let path = format!("$.functions.{name}");
        let items = value
            .as_array()
            .ok_or_else(|| schema(&path, "expected an array"))?;
        let values = items
            .iter()
            .enumerate()
            .map(|(i, v)| token(v, &format!("{path}[{i}]")).map(|t| t.replace('−', "-")))
            .collect::<Result<Vec<_>>>()?;
        let scale = at(&path, table_scale(&values))?;
        functions.push((
            name.clone(),
            at(
                &path,
                InformationFunction::new(space.clone(), scale, &values),
            )?,
        ));
    }
    let q = at("$.q", MarkovState::new(doc.q))?;
    Ok(HiddenTable {
        space,
        functions,
        q,
    })
}

pub fn table_to_json(t: &HiddenTable) -> String {
    render(&TableDoc {
        states: t.space.states().to_vec(),
        functions: t
            .functions
            .iter()
            .map(|(n, f)| {
                let vals: Vec<Value> = (0..t.space.len())
                    .map(|w| Value::String(f.value(w).to_string()))
                    .collect();
                (n.clone(), Value::Array(vals))
            })
            .collect(),
        q: t.q.components().to_vec(),
    })
}
