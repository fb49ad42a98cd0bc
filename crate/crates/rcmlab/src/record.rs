//! Experiment output rows and their CSV / JSON forms.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateRecord {
    pub experiment: String,
    pub q: f64,
    /// Named parameters, in column order.
    pub params: Vec<(String, String)>,
    pub estimate: f64,
    pub std_err: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub wall_ms: u64,
}

impl EstimateRecord {
    pub fn new(experiment: &str, q: f64) -> EstimateRecord {
        EstimateRecord {
            experiment: experiment.to_string(),
            q,
            params: Vec::new(),
            estimate: f64::NAN,
            std_err: f64::NAN,
            n_samples: 0,
            seed: 0,
            wall_ms: 0,
        }
    }

    pub fn param(mut self, name: &str, value: impl ToString) -> Self {
        self.params.push((name.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str())
    }
}

fn escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `experiment,q,<params>,estimate,std_err,n_samples,seed,wall_ms`. The
/// parameter columns are the union of all records' names in first-seen
/// order; missing values are left empty.
pub fn to_csv(records: &[EstimateRecord]) -> String {
    let mut names: Vec<&str> = Vec::new();
    for r in records {
        for (k, _) in &r.params {
            if !names.contains(&k.as_str()) {
                names.push(k);
            }
        }
    }
    let mut s = String::from("experiment,q");
    for n in &names {
        write!(s, ",{}", escape(n)).unwrap();
    }
    s.push_str(",estimate,std_err,n_samples,seed,wall_ms\n");
    for r in records {
        write!(s, "{},{}", escape(&r.experiment), r.q).unwrap();
        for n in &names {
            write!(s, ",{}", r.get(n).map(escape).unwrap_or_default()).unwrap();
        }
        writeln!(s, ",{},{},{},{},{}", num(r.estimate), num(r.std_err), r.n_samples, r.seed, r.wall_ms).unwrap();
    }
    s
}

/// Shortest round-trip decimal, switching to exponent form for tiny or huge
/// magnitudes.
fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

pub fn to_json(records: &[EstimateRecord]) -> String {
    let rows: Vec<serde_json::Value> = records
        .iter()
        .map(|r| {
            let mut m = serde_json::Map::new();
            m.insert("experiment".into(), r.experiment.clone().into());
            m.insert("q".into(), r.q.into());
            for (k, v) in &r.params {
                m.insert(k.clone(), v.clone().into());
            }
            m.insert("estimate".into(), json_number(r.estimate));
            m.insert("std_err".into(), json_number(r.std_err));
            m.insert("n_samples".into(), r.n_samples.into());
            m.insert("seed".into(), r.seed.into());
            m.insert("wall_ms".into(), r.wall_ms.into());
            serde_json::Value::Object(m)
        })
        .collect();
    serde_json::to_string_pretty(&rows).unwrap() + "\n"
}

/// JSON has no NaN; non-finite values become null.
fn json_number(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x).map(serde_json::Value::Number).unwrap_or(serde_json::Value::Null)
}
