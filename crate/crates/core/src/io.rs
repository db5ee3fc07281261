//! File formats: CSV tables and JSON documents read and written by the
//! command line front end.
//!
//! Floating point columns are written with 17 significant digits so a value
//! read back is bit-identical to the one written.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::density::{Density, Grid};
use crate::error::Error;
use crate::hedged::ProfileFn;
use crate::index::{DynamicsSpec, IndexSeries, KellyRow};
use crate::market::{PricingTerms, VolCurve, WingExtrapolation};
use crate::model_risk::BucketGrid;
use crate::scalar::Scalar;
use crate::views::ViewSpec;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("parse: {0}")]
    Parse(String),
    #[error(transparent)]
    Lib(#[from] Error),
}

impl FormatError {
    pub fn category(&self) -> &'static str {
        match self {
            FormatError::Io { .. } => "io",
            FormatError::Csv(_) | FormatError::Json(_) | FormatError::Parse(_) => "parse",
            FormatError::Lib(e) => e.category(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            FormatError::Io { .. } => 3,
            FormatError::Csv(_) | FormatError::Json(_) | FormatError::Parse(_) => 4,
            FormatError::Lib(e) => e.exit_code(),
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        FormatError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub type FormatResult<T> = std::result::Result<T, FormatError>;

/// Round-trip formatting of one value.
pub fn fmt_num<T: Scalar>(v: T) -> String {
    format!("{:.16e}", v.as_f64())
}

pub fn read_to_string(path: &Path) -> FormatResult<String> {
    let mut s = String::new();
    File::open(path)
        .and_then(|f| BufReader::new(f).read_to_string(&mut s))
        .map_err(|e| FormatError::io(path, e))?;
    Ok(s)
}

pub fn write_file(path: &Path, contents: &str) -> FormatResult<()> {
    std::fs::write(path, contents).map_err(|e| FormatError::io(path, e))
}

/// Reads a numeric CSV whose header must be exactly `columns`.
pub fn read_columns<R: Read>(reader: R, columns: &[&str]) -> FormatResult<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header.len() != columns.len() || header.iter().zip(columns).any(|(h, c)| h != c) {
        return Err(FormatError::Parse(format!(
            "expected header `{}`, got `{}`",
            columns.join(","),
            header.join(",")
        )));
    }
    let mut out = vec![Vec::new(); columns.len()];
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        for (j, field) in rec.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                FormatError::Parse(format!("row {}: `{field}` in column {} is not a number", row + 1, columns[j]))
            })?;
            out[j].push(v);
        }
    }
    Ok(out)
}

fn csv_table(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

fn lift<T: Scalar>(v: Vec<f64>) -> Vec<T> {
    v.into_iter().map(T::lit).collect()
}

// Densities: `x,mass`.

pub fn density_to_csv<T: Scalar>(d: &Density<T>) -> String {
    csv_table(&["x", "mass"], d.iter().map(|(x, p)| vec![fmt_num(x), fmt_num(p)]))
}

pub fn density_from_csv<T: Scalar, R: Read>(reader: R) -> FormatResult<Density<T>> {
    let mut cols = read_columns(reader, &["x", "mass"])?;
    let mass = lift(cols.pop().expect("two columns"));
    let x = lift(cols.pop().expect("two columns"));
    Ok(Density::new(Grid::from_points(x)?, mass)?)
}

pub fn load_density<T: Scalar>(path: &Path) -> FormatResult<Density<T>> {
    density_from_csv(read_to_string(path)?.as_bytes())
}

// Vol curves: `strike,vol` plus a JSON sidecar.

/// Curve parameters not carried by the quote table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveMeta {
    pub forward: f64,
    pub maturity: f64,
    #[serde(default = "unit")]
    pub discount_factor: f64,
}

fn unit() -> f64 {
    1.0
}

pub fn curve_from_csv<T: Scalar, R: Read>(
    reader: R,
    meta: &CurveMeta,
    wings: WingExtrapolation,
) -> FormatResult<VolCurve<T>> {
    let cols = read_columns(reader, &["strike", "vol"])?;
    let quotes = cols[0].iter().zip(&cols[1]).map(|(&k, &v)| (T::lit(k), T::lit(v))).collect();
    Ok(VolCurve::with_wings(
        T::lit(meta.maturity),
        T::lit(meta.forward),
        quotes,
        wings,
    )?)
}

pub fn curve_to_csv<T: Scalar>(curve: &VolCurve<T>) -> String {
    csv_table(&["strike", "vol"], curve.quotes().map(|(k, v)| vec![fmt_num(k), fmt_num(v)]))
}

pub fn load_curve<T: Scalar>(path: &Path, meta: &CurveMeta, wings: WingExtrapolation) -> FormatResult<VolCurve<T>> {
    curve_from_csv(read_to_string(path)?.as_bytes(), meta, wings)
}

/// `<curve>.json` next to `<curve>.csv`.
pub fn sidecar_path(curve: &Path) -> PathBuf {
    curve.with_extension("json")
}

pub fn load_json<D: serde::de::DeserializeOwned>(path: &Path) -> FormatResult<D> {
    Ok(serde_json::from_str(&read_to_string(path)?)?)
}

// Views: one object or a list.

#[derive(Deserialize)]
#[serde(untagged, bound = "T: Scalar")]
enum OneOrMany<T> {
    One(ViewSpec<T>),
    Many(Vec<ViewSpec<T>>),
}

pub fn views_from_json<T: Scalar>(text: &str) -> FormatResult<Vec<ViewSpec<T>>> {
    let views = match serde_json::from_str(text)? {
        OneOrMany::One(v) => vec![v],
        OneOrMany::Many(v) => v,
    };
    for v in &views {
        v.validate()?;
    }
    Ok(views)
}

pub fn terms_from_json<T: Scalar>(text: &str) -> FormatResult<PricingTerms<T>> {
    let t: PricingTerms<T> = serde_json::from_str(text)?;
    t.validate()?;
    Ok(t)
}

/// `{"edges":[..]}` or a bare array of edges.
pub fn buckets_from_json<T: Scalar>(text: &str) -> FormatResult<BucketGrid<T>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Edges {
        Wrapped { edges: Vec<f64> },
        Bare(Vec<f64>),
    }
    let edges = match serde_json::from_str(text)? {
        Edges::Wrapped { edges } | Edges::Bare(edges) => edges,
    };
    Ok(BucketGrid::new(lift(edges))?)
}

pub fn dynamics_from_json<T: Scalar>(text: &str) -> FormatResult<DynamicsSpec<T>> {
    Ok(serde_json::from_str(text)?)
}

// Profiles: `x,value`.

pub fn profile_from_csv<T: Scalar, R: Read>(reader: R) -> FormatResult<ProfileFn<T>> {
    let mut cols = read_columns(reader, &["x", "value"])?;
    let values = lift(cols.pop().expect("two columns"));
    let x = lift(cols.pop().expect("two columns"));
    Ok(ProfileFn::new(Grid::from_points(x)?, values)?)
}

pub fn profile_to_csv<T: Scalar>(p: &ProfileFn<T>) -> String {
    csv_table(
        &["x", "value"],
        p.grid().points().iter().zip(p.values()).map(|(&x, &v)| vec![fmt_num(x), fmt_num(v)]),
    )
}

// Simulation outputs.

/// `step,exact,first_order`; the first-order column is empty after a wipeout.
pub fn index_series_to_csv<T: Scalar>(s: &IndexSeries<T>) -> String {
    csv_table(
        &["step", "exact", "first_order"],
        s.exact.iter().enumerate().map(|(i, &f)| {
            let fo = s.first_order.get(i).map(|&v| fmt_num(v)).unwrap_or_default();
            vec![i.to_string(), fmt_num(f), fo]
        }),
    )
}

pub fn kelly_to_csv(rows: &[KellyRow]) -> String {
    csv_table(
        &["leverage", "mean_log_growth", "std_error", "wipeouts"],
        rows.iter().map(|r| {
            vec![
                fmt_num(r.leverage),
                fmt_num(r.mean_log_growth),
                fmt_num(r.std_error),
                r.wipeouts.to_string(),
            ]
        }),
    )
}

/// Pretty JSON followed by a newline.
pub fn to_json_line<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, contents: &str) -> FormatResult<()> {
    match path {
        Some(p) => write_file(p, contents),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| FormatError::io(Path::new("<stdout>"), e))
        }
    }
}
