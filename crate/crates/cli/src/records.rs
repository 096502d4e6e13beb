//! Output records. `text` renders `key=value` pairs; `records` renders one
//! JSON object per line.

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct QueryRecord {
    pub u: u32,
    pub v: u32,
    pub answer: bool,
    pub k: usize,
    pub f: u64,
    pub f_per_phase: Vec<u64>,
    pub calls: u64,
    pub max_relevant: usize,
    pub elapsed_us: u128,
}

#[derive(Debug, Serialize)]
pub struct EdgeRecord {
    pub u: u32,
    pub v: u32,
}

#[derive(Debug, Serialize)]
pub struct MaterializeSummary {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub size: usize,
    pub valid: bool,
    /// Longest augmenting path length searched for.
    pub certificate_len: usize,
    pub no_short_augmenting_path: bool,
    pub shortest_augmenting_path: Option<usize>,
    pub max_f: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub trial: usize,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub edges: usize,
    pub queries: usize,
    pub mean_f: f64,
    pub max_f: u64,
    pub mean_relevant: f64,
    pub max_relevant: usize,
    pub valid: Option<bool>,
    pub matching_size: Option<usize>,
    pub no_short_augmenting_path: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct FitRecord {
    /// Exponent `b` of `max_f ≈ a·(ln n)^b`.
    pub polylog_exponent: f64,
    pub polylog_scale: f64,
    pub r_squared: f64,
}

/// `key=value` rendering of any record, in field order.
pub fn to_text<T: Serialize>(record: &T) -> String {
    let value = serde_json::to_value(record).expect("records serialize");
    let serde_json::Value::Object(map) = value else {
        return value.to_string();
    };
    map.iter()
        .map(|(k, v)| match v {
            serde_json::Value::Null => format!("{k}=none"),
            serde_json::Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn to_json<T: Serialize>(record: &T) -> String {
    serde_json::to_string(record).expect("records serialize")
}
