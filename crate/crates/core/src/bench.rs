//! Query verbosity metrics and the input-size scaling harness.

use crate::error::{Error, Result};
use crate::query::{execute_query, ExecutionContext, QueryResult};
use serde_json::{Map, Value};
use std::collections::HashSet;
use std::io::Write;
use std::time::Instant;

pub const TOKEN_DELIMITERS: [char; 11] = ['"', '(', ')', '{', '}', ',', ';', '\n', '\t', '\r', ' '];

pub fn tokenize(text: &str) -> Vec<&str> {
    text.split(TOKEN_DELIMITERS).filter(|t| !t.is_empty()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FileTokens {
    pub name: String,
    pub total: usize,
    pub distinct: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TokenStats {
    pub per_file: Vec<FileTokens>,
    pub average_total: f64,
    pub average_distinct: f64,
}

impl FileTokens {
    pub fn of(name: impl Into<String>, text: &str) -> Self {
        let tokens = tokenize(text);
        let distinct = tokens.iter().collect::<HashSet<_>>().len();
        FileTokens {
            name: name.into(),
            total: tokens.len(),
            distinct,
        }
    }
}

/// Per-file token counts of `(name, text)` pairs and their means.
pub fn token_stats<N: AsRef<str>, T: AsRef<str>>(files: &[(N, T)]) -> Result<TokenStats> {
    if files.is_empty() {
        return Err(Error::Config("token statistics need at least one file".into()));
    }
    let per_file: Vec<_> = files
        .iter()
        .map(|(n, t)| FileTokens::of(n.as_ref(), t.as_ref()))
        .collect();
    let n = per_file.len() as f64;
    let average_total = per_file.iter().map(|f| f.total as f64).sum::<f64>() / n;
    let average_distinct = per_file.iter().map(|f| f.distinct as f64).sum::<f64>() / n;
    Ok(TokenStats {
        per_file,
        average_total,
        average_distinct,
    })
}

pub fn write_token_stats(stats: &TokenStats, mut w: impl Write) -> Result<()> {
    writeln!(w, "file,total,distinct")?;
    for f in &stats.per_file {
        writeln!(w, "{},{},{}", csv_field(&f.name), f.total, f.distinct)?;
    }
    writeln!(
        w,
        "average,{},{}",
        stats.average_total, stats.average_distinct
    )?;
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// An artwork record like the collection metadata the default query reads.
pub fn default_template() -> Map<String, Value> {
    let Value::Object(map) = serde_json::json!({
        "id": "A00001",
        "title": "A Figure Bowing before a Seated Old Man",
        "artist": "Blake, Robert",
        "year": "1785",
        "medium": "Watercolour, ink, chalk and graphite on paper",
    }) else {
        unreachable!()
    };
    map
}

/// File name the harness writes each generated array to.
pub const SCALE_DATA_FILE: &str = "data.json";

/// CONSTRUCT one blank node per array member carrying its fields.
pub const DEFAULT_SCALE_QUERY: &str = r#"PREFIX xyz: <http://sparql.xyz/facade-x/data/>
PREFIX fx: <http://sparql.xyz/facade-x/ns/>
PREFIX ex: <http://example.org/artwork/>
CONSTRUCT {
  _:artwork ex:id ?id ; ex:title ?title ; ex:artist ?artist ; ex:year ?year ; ex:medium ?medium .
} WHERE {
  SERVICE <x-sparql-anything:location=data.json> {
    ?root a fx:Root ; ?slot ?item .
    ?item xyz:id ?id ; xyz:title ?title ; xyz:artist ?artist ; xyz:year ?year ; xyz:medium ?medium .
  }
}"#;

pub const DEFAULT_SCALE_SIZES: [usize; 5] = [10, 100, 1_000, 10_000, 100_000];
pub const DEFAULT_BYTE_BUDGET: usize = 512 << 20;

#[derive(Debug, Clone)]
pub struct ScaleConfig {
    pub template: Map<String, Value>,
    pub sizes: Vec<usize>,
    /// Query run against each array, which it reads as `data.json`.
    pub query: String,
    pub runs: usize,
    pub byte_budget: usize,
}

impl Default for ScaleConfig {
    fn default() -> Self {
        ScaleConfig {
            template: default_template(),
            sizes: DEFAULT_SCALE_SIZES.to_vec(),
            query: DEFAULT_SCALE_QUERY.to_owned(),
            runs: 1,
            byte_budget: DEFAULT_BYTE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleRow {
    pub size: usize,
    pub run: usize,
    pub elapsed_ms: f64,
}

fn stamp(value: &Value, index: usize) -> Value {
    match value {
        Value::String(s) => Value::String(format!("{s}-{index}")),
        Value::Array(items) => Value::Array(items.iter().map(|v| stamp(v, index)).collect()),
        Value::Object(map) => Value::Object(
            map.iter()
                .map(|(k, v)| (k.clone(), stamp(v, index)))
                .collect(),
        ),
        other => other.clone(),
    }
}

/// JSON array of `n` copies of `template`, string values suffixed with the
/// 1-based copy index.
pub fn generate_array(template: &Map<String, Value>, n: usize, byte_budget: usize) -> Result<Vec<u8>> {
    let template = Value::Object(template.clone());
    let mut out = Vec::with_capacity(2 + n.min(1 << 16) * 64);
    out.push(b'[');
    for i in 1..=n {
        if i > 1 {
            out.push(b',');
        }
        serde_json::to_writer(&mut out, &stamp(&template, i))
            .map_err(|e| Error::Serialization(e.to_string()))?;
        if out.len() > byte_budget {
            return Err(Error::ResourceLimit(format!(
                "an array of {n} copies exceeds the {byte_budget} byte budget"
            )));
        }
    }
    out.push(b']');
    Ok(out)
}

/// Times the query over arrays of each size, `runs` times per size.
/// Triplification is part of the measured time; generation is not.
pub fn scale_harness(config: &ScaleConfig) -> Result<Vec<ScaleRow>> {
    if config.sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Config("sizes must be ascending".into()));
    }
    if config.runs == 0 {
        return Err(Error::Config("at least one run per size is needed".into()));
    }
    let dir = tempfile::Builder::new()
        .prefix("sparql-anything-scale")
        .tempdir()?;
    let mut rows = Vec::with_capacity(config.sizes.len() * config.runs);
    for &size in &config.sizes {
        let data = generate_array(&config.template, size, config.byte_budget)?;
        std::fs::write(dir.path().join(SCALE_DATA_FILE), &data)?;
        drop(data);
        for run in 1..=config.runs {
            let ctx = ExecutionContext::new(dir.path());
            let start = Instant::now();
            let result = execute_query(&config.query, &ctx)?;
            let elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;
            drop(result);
            log::info!("size {size} run {run}: {elapsed_ms:.1} ms");
            rows.push(ScaleRow {
                size,
                run,
                elapsed_ms,
            });
        }
    }
    Ok(rows)
}

pub fn write_scale_csv(rows: &[ScaleRow], mut w: impl Write) -> Result<()> {
    writeln!(w, "size,run,elapsed_ms")?;
    for r in rows {
        writeln!(w, "{},{},{:.3}", r.size, r.run, r.elapsed_ms)?;
    }
    Ok(())
}

fn summarize(rows: &[ScaleRow], f: impl Fn(&mut Vec<f64>) -> f64) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, Vec<f64>)> = Vec::new();
    for r in rows {
        match out.last_mut() {
            Some((size, times)) if *size == r.size => times.push(r.elapsed_ms),
            _ => out.push((r.size, vec![r.elapsed_ms])),
        }
    }
    out.into_iter().map(|(s, mut t)| (s, f(&mut t))).collect()
}

/// Median elapsed time per size, sizes in input order.
pub fn medians(rows: &[ScaleRow]) -> Vec<(usize, f64)> {
    summarize(rows, |t| {
        t.sort_by(f64::total_cmp);
        let mid = t.len() / 2;
        if t.len() % 2 == 1 {
            t[mid]
        } else {
            (t[mid - 1] + t[mid]) / 2.0
        }
    })
}

pub fn means(rows: &[ScaleRow]) -> Vec<(usize, f64)> {
    summarize(rows, |t| t.iter().sum::<f64>() / t.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares of `y` on `x`.
pub fn linear_fit(points: &[(f64, f64)]) -> Option<LinearFit> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Number of triples or solutions a result carries.
pub fn result_size(result: &QueryResult) -> usize {
    match result {
        QueryResult::Graph(g) => g.len(),
        QueryResult::Solutions { solutions, .. } => solutions.len(),
        QueryResult::Boolean(_) => 1,
    }
}
