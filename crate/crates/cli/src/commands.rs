use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use qmarkov::hermitian::pure_state;
use qmarkov::hidden::{self, bell_check, feynman_state, five_state_example, parse_numeric};
use qmarkov::io::{self, MeasurementFile};
use qmarkov::oom::step_distribution;
use qmarkov::walk::{self, shift_unitary};
use qmarkov::words::DEFAULT_ENUM_CAP;
use qmarkov::{MarkovChain, MarkovDensity, MarkovOperator, Oom64, Rational, Scalar};

use crate::output::{field, num, Document};
use crate::{Builtin, CesaroArgs, Command, Failure, Format};

/// Environment variable overriding the word-enumeration cap.
pub const ENUM_CAP_VAR: &str = "QMARKOV_ENUM_CAP";

type Outcome = Result<Document, Failure>;

fn enum_cap() -> Result<u64, Failure> {
    match std::env::var(ENUM_CAP_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::validation(format!(
                "{ENUM_CAP_VAR}={v:?} is not a non-negative integer"
            ))
        }),
        Err(_) => Ok(DEFAULT_ENUM_CAP),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))
}

/// Loads and validates a file, prefixing errors with its path.
fn load<T>(path: &Path, parse: impl Fn(&str) -> qmarkov::Result<T>) -> Result<T, Failure> {
    let text = read(path)?;
    parse(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn check_tol(name: &str, tol: f64) -> Result<(), Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Failure::validation(format!(
            "--{name} must be positive, got {tol}"
        )))
    }
}

fn density_value(d: &MarkovDensity<f64>) -> Value {
    serde_json::from_str(&io::density_to_json(d)).expect("valid JSON")
}

pub fn run(command: &Command) -> Outcome {
    match command {
        Command::Measure {
            measurement,
            density,
            depth,
            tol,
        } => measure(measurement, density, *depth, *tol),
        Command::ChainEvolve {
            operator,
            density,
            steps,
        } => chain_evolve(operator, density, *steps),
        Command::ChainCesaro {
            operator,
            density,
            cesaro,
        } => chain_cesaro(operator, density, cesaro),
        Command::Walk {
            graph,
            operator,
            density,
            start_edge,
            steps,
            limit,
            cesaro,
        } => walk_cmd(
            graph,
            operator.as_deref(),
            density.as_deref(),
            *start_edge,
            *steps,
            *limit,
            cesaro,
        ),
        Command::Bell {
            builtin,
            table,
            functions,
            tol,
        } => bell(*builtin, table.as_deref(), functions, *tol),
        Command::Feynman { sx, sy, sz } => feynman(sx, sy, sz),
        Command::OomProb { oom, words, length } => oom_prob(oom, words, *length),
        Command::OomRank { oom, max_len, tol } => oom_rank(oom, *max_len, *tol),
        Command::OomLift { oom, steps } => oom_lift(oom, *steps),
        Command::OomEntropy { oom, t_max } => oom_entropy(oom, *t_max),
    }
}

fn measure(mpath: &Path, dpath: &Path, depth: usize, tol: f64) -> Outcome {
    check_tol("tol", tol)?;
    let m = load(mpath, io::measurement_from_json)?;
    let q = load(dpath, io::density_from_json)?;
    let scale = m.scale().clone();
    let (words, values): (Vec<String>, Vec<f64>) = match (m, depth) {
        (MeasurementFile::Kraus(k), 1) => {
            let d = k.outcome_distribution(&q)?;
            (scale.symbols().to_vec(), d.values)
        }
        (m, _) => {
            let d = m.into_markov().word_distribution(&q, depth, enum_cap()?)?;
            (
                d.words.iter().map(|w| scale.format_word(w)).collect(),
                d.values,
            )
        }
    };
    let observable = values.iter().all(|&v| v >= -tol);
    let total: f64 = values.iter().sum();
    Ok(Document {
        default_format: Format::Csv,
        header: "word,probability",
        rows: words
            .iter()
            .zip(&values)
            .map(|(w, &v)| vec![field(w), num(v)])
            .collect(),
        json: json!({
            "depth": depth,
            "words": words,
            "probabilities": values,
            "total": total,
            "observable": observable,
        }),
    })
}

fn chain_from(opath: &Path, dpath: &Path) -> Result<MarkovChain<f64>, Failure> {
    let op = load(opath, io::markov_operator_from_json)?;
    let p = load(dpath, io::density_from_json)?;
    Ok(MarkovChain::new(op, p)?)
}

fn chain_evolve(opath: &Path, dpath: &Path, steps: usize) -> Outcome {
    let chain = chain_from(opath, dpath)?;
    let iterates = chain.evolve(steps);
    let mut rows = Vec::new();
    let mut json_steps = Vec::with_capacity(iterates.len());
    for (t, d) in iterates.iter().enumerate() {
        let coords = d.matrix().coords();
        for (i, &c) in coords.iter().enumerate() {
            rows.push(vec![t.to_string(), i.to_string(), num(c)]);
        }
        json_steps.push(json!({ "t": t, "coords": coords }));
    }
    Ok(Document {
        default_format: Format::Csv,
        header: "t,coordinate_index,value",
        rows,
        json: json!({ "n": chain.dim(), "basis": io::OPERATOR_BASIS, "steps": json_steps }),
    })
}

fn chain_cesaro(opath: &Path, dpath: &Path, args: &CesaroArgs) -> Outcome {
    check_tol("tol", args.tol)?;
    let chain = chain_from(opath, dpath)?;
    let r = chain.cesaro_average(args.tol, args.max_doublings)?;
    let coords = r.average.matrix().coords();
    Ok(Document {
        default_format: Format::Json,
        header: "coordinate_index,value",
        rows: coords
            .iter()
            .enumerate()
            .map(|(i, &c)| vec![i.to_string(), num(c)])
            .collect(),
        json: json!({
            "average": density_value(&r.average),
            "iterations": r.iterations,
            "residual": r.residual,
        }),
    })
}

fn walk_cmd(
    gpath: &Path,
    opath: Option<&Path>,
    dpath: Option<&Path>,
    start_edge: Option<usize>,
    steps: usize,
    limit: bool,
    cesaro: &CesaroArgs,
) -> Outcome {
    check_tol("tol", cesaro.tol)?;
    let g = load(gpath, io::graph_from_str)?;
    for v in g.sinks() {
        eprintln!("warning: node {v} has no outgoing edges and never carries probability");
    }
    let op = match opath {
        Some(p) => load(p, io::markov_operator_from_json)?,
        None => MarkovOperator::from_unitary(&shift_unitary::<f64>(&g)?)?,
    };
    let start = match dpath {
        Some(p) => load(p, io::density_from_json)?,
        None => {
            let e = start_edge.unwrap_or(0);
            if e >= g.edge_count() {
                return Err(Failure::validation(format!(
                    "--start-edge {e} is out of range for {} edges",
                    g.edge_count()
                )));
            }
            let mut v = vec![Complex64::new(0.0, 0.0); g.edge_count()];
            v[e] = Complex64::new(1.0, 0.0);
            pure_state(&v)?
        }
    };
    let trace = walk::walk(&g, &op, &start, steps)?;
    let mut rows = Vec::new();
    for (t, s) in trace.steps.iter().enumerate() {
        for (v, &p) in s.node_probs.iter().enumerate() {
            rows.push(vec![t.to_string(), v.to_string(), num(p)]);
        }
    }
    let mut doc = json!({
        "nodes": g.node_count(),
        "edges": g.edges().iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>(),
        "steps": trace.steps.iter().enumerate().map(|(t, s)| json!({ "t": t, "node_probs": s.node_probs })).collect::<Vec<_>>(),
    });
    if limit {
        let lim =
            walk::limiting_node_distribution(&g, &op, &start, cesaro.tol, cesaro.max_doublings)?;
        for (v, &p) in lim.iter().enumerate() {
            rows.push(vec!["limit".into(), v.to_string(), num(p)]);
        }
        doc["limit"] = json!(lim);
    }
    Ok(Document {
        default_format: Format::Csv,
        header: "t,node,probability",
        rows,
        json: doc,
    })
}

fn bell_document(fields: Vec<(&str, Value)>, csv: Vec<(&str, String)>) -> Document {
    let mut map = Map::new();
    for (k, v) in fields {
        map.insert(k.to_string(), v);
    }
    Document {
        default_format: Format::Json,
        header: "field,value",
        rows: csv
            .into_iter()
            .map(|(k, v)| vec![k.to_string(), v])
            .collect(),
        json: Value::Object(map),
    }
}

fn bell(builtin: Option<Builtin>, table: Option<&Path>, functions: &str, tol: f64) -> Outcome {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Failure::validation(format!(
            "--tol must be non-negative, got {tol}"
        )));
    }
    let (r, exact) = match (builtin, table) {
        (Some(Builtin::FiveState), _) => {
            let ex = five_state_example::<Rational>();
            let zero = Rational::from_integer(0);
            let r = bell_check(&ex.x, &ex.y, &ex.z, &ex.q, zero)?;
            let f = |x: Rational| x.as_f64();
            let exact = json!({
                "e_xy": r.e_xy.to_string(),
                "e_yz": r.e_yz.to_string(),
                "e_xz": r.e_xz.to_string(),
                "lhs": r.lhs.to_string(),
                "rhs": r.rhs.to_string(),
            });
            let r = hidden::BellReport {
                e_xy: f(r.e_xy),
                e_yz: f(r.e_yz),
                e_xz: f(r.e_xz),
                lhs: f(r.lhs),
                rhs: f(r.rhs),
                satisfied: r.satisfied,
                pairwise_observable: r.pairwise_observable,
                jointly_observable: r.jointly_observable,
            };
            (r, Some(exact))
        }
        (None, Some(path)) => {
            let t = load(path, io::table_from_json)?;
            let names: Vec<&str> = functions.split(',').map(str::trim).collect();
            if names.len() != 3 {
                return Err(Failure::validation(format!(
                    "--functions needs three names, got {functions:?}"
                )));
            }
            let x = t.function(names[0])?;
            let y = t.function(names[1])?;
            let z = t.function(names[2])?;
            (bell_check(x, y, z, &t.q, tol)?, None)
        }
        (None, None) => {
            return Err(Failure::validation(
                "either --builtin or --table is required",
            ))
        }
    };
    let mut fields = vec![
        ("lhs", json!(r.lhs)),
        ("rhs", json!(r.rhs)),
        ("satisfied", json!(r.satisfied)),
        ("pairwise_observable", json!(r.pairwise_observable)),
        ("jointly_observable", json!(r.jointly_observable)),
        ("e_xy", json!(r.e_xy)),
        ("e_yz", json!(r.e_yz)),
        ("e_xz", json!(r.e_xz)),
    ];
    if let Some(e) = exact {
        fields.push(("exact", e));
    }
    let csv = vec![
        ("lhs", num(r.lhs)),
        ("rhs", num(r.rhs)),
        ("satisfied", r.satisfied.to_string()),
        ("pairwise_observable", r.pairwise_observable.to_string()),
        ("jointly_observable", r.jointly_observable.to_string()),
        ("e_xy", num(r.e_xy)),
        ("e_yz", num(r.e_yz)),
        ("e_xz", num(r.e_xz)),
    ];
    Ok(bell_document(fields, csv))
}

fn feynman(sx: &str, sy: &str, sz: &str) -> Outcome {
    let parse = |name: &str, s: &str| {
        parse_numeric::<f64>(s)
            .map_err(|_| Failure::validation(format!("--{name} {s:?} is not a number")))
    };
    let q = feynman_state(parse("sx", sx)?, parse("sy", sy)?, parse("sz", sz)?)?;
    let space = hidden::feynman_space();
    let (x, z) = hidden::feynman_functions();
    let tol = 1e-12;
    let components = q.components().to_vec();
    Ok(Document {
        default_format: Format::Json,
        header: "state,value",
        rows: space
            .states()
            .iter()
            .zip(&components)
            .map(|(s, &v)| vec![s.clone(), num(v)])
            .collect(),
        json: json!({
            "states": space.states(),
            "state": components,
            "x_observable": hidden::is_observable(&x, &q, tol)?,
            "z_observable": hidden::is_observable(&z, &q, tol)?,
            "jointly_observable": hidden::is_jointly_observable(&[&x, &z], &q, tol)?,
        }),
    })
}

fn oom_prob(path: &Path, words: &[String], length: Option<usize>) -> Outcome {
    let o: Oom64 = load(path, io::oom_from_json)?;
    let mut labels = Vec::new();
    let mut values = Vec::new();
    for w in words {
        let word = o.scale().parse_word(w)?;
        labels.push(o.scale().format_word(&word));
        values.push(o.word_probability(&word)?);
    }
    if let Some(t) = length {
        o.for_each_word_probability(t, enum_cap()?, |w, p| {
            labels.push(o.scale().format_word(w));
            values.push(p);
        })?;
    }
    if words.is_empty() && length.is_none() {
        return Err(Failure::validation(
            "give at least one --word or a --length",
        ));
    }
    Ok(Document {
        default_format: Format::Csv,
        header: "word,probability",
        rows: labels
            .iter()
            .zip(&values)
            .map(|(w, &p)| vec![field(w), num(p)])
            .collect(),
        json: json!({ "words": labels, "probabilities": values }),
    })
}

fn oom_rank(path: &Path, max_len: usize, tol: f64) -> Outcome {
    check_tol("tol", tol)?;
    let o: Oom64 = load(path, io::oom_from_json)?;
    let (p, rank) = o.prediction_matrix(max_len, tol, enum_cap()?)?;
    let fmt = |ws: &[Vec<usize>]| {
        ws.iter()
            .map(|w| o.scale().format_word(w))
            .collect::<Vec<_>>()
    };
    Ok(Document {
        default_format: Format::Json,
        header: "rank,rows,cols,dim",
        rows: vec![vec![
            rank.to_string(),
            p.values.rows().to_string(),
            p.values.cols().to_string(),
            o.dim().to_string(),
        ]],
        json: json!({
            "rank": rank,
            "dim": o.dim(),
            "row_words": fmt(&p.row_words),
            "col_words": fmt(&p.col_words),
            "matrix": p.values.to_rows(),
        }),
    })
}

fn oom_lift(path: &Path, steps: usize) -> Outcome {
    let o: Oom64 = load(path, io::oom_from_json)?;
    let lift = o.lift_hidden_states();
    let mut rows = Vec::new();
    let mut json_steps = Vec::new();
    for t in 1..=steps {
        let d = step_distribution(&lift, t)?;
        for (s, &v) in d.scale.symbols().iter().zip(&d.values) {
            rows.push(vec![t.to_string(), field(s), num(v)]);
        }
        json_steps.push(json!({ "t": t, "distribution": d.values }));
    }
    let ops: Map<String, Value> = o
        .scale()
        .symbols()
        .iter()
        .zip(&lift.lifted_ops)
        .map(|(s, m)| (s.clone(), json!(m.to_rows())))
        .collect();
    Ok(Document {
        default_format: Format::Csv,
        header: "t,symbol,value",
        rows,
        json: json!({
            "states": lift.space.states(),
            "scale": o.scale().symbols(),
            "operators": ops,
            "pi": lift.lifted_pi,
            "steps": json_steps,
        }),
    })
}

fn oom_entropy(path: &Path, t_max: usize) -> Outcome {
    let o: Oom64 = load(path, io::oom_from_json)?;
    let rows = o.entropy_rate(t_max, enum_cap()?)?;
    Ok(Document {
        default_format: Format::Csv,
        header: "t,entropy_rate,conditional_entropy",
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    r.t.to_string(),
                    num(r.entropy_rate),
                    num(r.conditional_entropy),
                ]
            })
            .collect(),
        json: json!({
            "t": rows.iter().map(|r| r.t).collect::<Vec<_>>(),
            "entropy_rate": rows.iter().map(|r| r.entropy_rate).collect::<Vec<_>>(),
            "conditional_entropy": rows.iter().map(|r| r.conditional_entropy).collect::<Vec<_>>(),
        }),
    })
}
