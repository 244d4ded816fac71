//! Reading catalogs and count files, writing results, and the run-config
//! file.
//!
//! Times are days. Numeric time columns are read as days directly; ISO-8601
//! datetimes become days since the Unix epoch and are then shifted so the
//! observation window starts at 0.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use chrono::{DateTime, NaiveDate, NaiveDateTime};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::EventCatalog;
use crate::error::{Error, Result};
use crate::model::ProductivityEstimate;
use crate::simulate::rng_from_seed;
use crate::stabilize::MarkCurve;

const SECONDS_PER_DAY: f64 = 86_400.0;

/// Comment line carrying the window length in files written by
/// [`write_catalog_csv`].
const WINDOW_COMMENT: &str = "# window_end=";

/// Parses a time cell: a float (days) or an ISO-8601 datetime/date (days
/// since 1970-01-01T00:00:00Z). Returns the value and whether it was numeric.
pub fn parse_time(cell: &str) -> Option<(f64, bool)> {
    let s = cell.trim();
    if let Ok(v) = s.parse::<f64>() {
        return v.is_finite().then_some((v, true));
    }
    let to_days = |secs: i64, nanos: u32| secs as f64 / SECONDS_PER_DAY + nanos as f64 / 1e9 / SECONDS_PER_DAY;
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some((to_days(dt.timestamp(), dt.timestamp_subsec_nanos()), false));
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f", "%Y/%m/%d %H:%M:%S%.f", "%Y-%m-%dT%H:%M"] {
        if let Ok(dt) = NaiveDateTime::parse_from_str(s, fmt) {
            let utc = dt.and_utc();
            return Some((to_days(utc.timestamp(), utc.timestamp_subsec_nanos()), false));
        }
    }
    for fmt in ["%Y-%m-%d", "%Y/%m/%d"] {
        if let Ok(d) = NaiveDate::parse_from_str(s, fmt) {
            let utc = d.and_hms_opt(0, 0, 0)?.and_utc();
            return Some((to_days(utc.timestamp(), 0), false));
        }
    }
    None
}

fn parse_time_arg(s: &str) -> Result<f64> {
    parse_time(s)
        .map(|(v, _)| v)
        .ok_or_else(|| Error::InvalidParameter(format!("cannot parse time '{s}'")))
}

/// Closed interval, stored low to high whichever order it was given in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    pub fn new(a: f64, b: f64) -> Self {
        Self {
            min: a.min(b),
            max: a.max(b),
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.min && v <= self.max
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CatalogFilter {
    pub min_magnitude: Option<f64>,
    pub max_depth: Option<f64>,
    pub latitude: Option<Range>,
    pub longitude: Option<Range>,
    /// Absolute times in the file's unit (days, or days since the epoch
    /// for datetime columns).
    pub time: Option<Range>,
}

impl CatalogFilter {
    /// Sets the time range from two time strings (floats or ISO-8601).
    pub fn with_dates(mut self, start: &str, end: &str) -> Result<Self> {
        self.time = Some(Range::new(parse_time_arg(start)?, parse_time_arg(end)?));
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogFileSpec {
    pub delimiter: u8,
    /// Header names are matched case-insensitively.
    pub time_column: String,
    pub magnitude_column: Option<String>,
    pub latitude_column: Option<String>,
    pub longitude_column: Option<String>,
    pub depth_column: Option<String>,
    pub filter: CatalogFilter,
    /// Window end after the origin shift. Defaults to the window recorded
    /// in the file, else the filter's end, else the last event.
    pub window_end: Option<f64>,
    pub jitter_seed: u64,
}

impl Default for CatalogFileSpec {
    fn default() -> Self {
        Self {
            delimiter: b',',
            time_column: "time".into(),
            magnitude_column: Some("magnitude".into()),
            latitude_column: Some("latitude".into()),
            longitude_column: Some("longitude".into()),
            depth_column: Some("depth".into()),
            filter: CatalogFilter::default(),
            window_end: None,
            jitter_seed: 0,
        }
    }
}

fn aliases(name: &str) -> Vec<String> {
    let name = name.to_ascii_lowercase();
    let extra: &[&str] = match name.as_str() {
        "time" => &["datetime", "date", "origin_time", "t"],
        "magnitude" => &["mag", "m"],
        "latitude" => &["lat"],
        "longitude" => &["lon", "long", "lng"],
        _ => &[],
    };
    std::iter::once(name.clone()).chain(extra.iter().map(|s| s.to_string())).collect()
}

fn find_column(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    let wanted = aliases(name);
    headers
        .iter()
        .position(|h| wanted.iter().any(|w| h.trim().eq_ignore_ascii_case(w)))
}

fn recorded_window(path: &Path) -> Result<Option<f64>> {
    let reader = BufReader::new(File::open(path)?);
    for line in reader.lines() {
        let line = line?;
        let t = line.trim();
        if let Some(v) = t.strip_prefix(WINDOW_COMMENT) {
            return v.trim().parse().map(Some).map_err(|_| Error::Parse {
                line: 1,
                msg: format!("bad window comment '{t}'"),
            });
        }
        if !t.starts_with('#') && !t.is_empty() {
            break;
        }
    }
    Ok(None)
}

fn cell_f64(record: &csv::StringRecord, idx: usize, line: u64, what: &str) -> Result<Option<f64>> {
    let cell = record.get(idx).unwrap_or("").trim();
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse::<f64>().map(Some).map_err(|_| Error::Parse {
        line: line as usize,
        msg: format!("{what} '{cell}' is not a number"),
    })
}

struct Row {
    time: f64,
    mag: Option<f64>,
    coord: Option<(f64, f64)>,
}

/// Reads a delimiter-separated catalog, applies the filters, shifts the
/// origin to the window start and breaks duplicate times by a seeded
/// jitter of at most half the smallest nonzero gap.
pub fn read_catalog(path: impl AsRef<Path>, spec: &CatalogFileSpec) -> Result<EventCatalog> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)?;
    let headers = reader.headers()?.clone();
    let time_idx = find_column(&headers, &spec.time_column).ok_or_else(|| Error::Parse {
        line: 1,
        msg: format!("no '{}' column in header", spec.time_column),
    })?;
    let opt_col = |c: &Option<String>| c.as_deref().and_then(|n| find_column(&headers, n));
    let mag_idx = opt_col(&spec.magnitude_column);
    let lat_idx = opt_col(&spec.latitude_column);
    let lon_idx = opt_col(&spec.longitude_column);
    let depth_idx = opt_col(&spec.depth_column);
    let f = &spec.filter;

    let mut rows = Vec::new();
    let mut numeric_times = true;
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let cell = record.get(time_idx).unwrap_or("");
        let (time, numeric) = parse_time(cell).ok_or_else(|| Error::Parse {
            line: line as usize,
            msg: format!("cannot parse time '{cell}'"),
        })?;
        numeric_times &= numeric;
        let mag = match mag_idx {
            Some(i) => cell_f64(&record, i, line, "magnitude")?,
            None => None,
        };
        let lat = match lat_idx {
            Some(i) => cell_f64(&record, i, line, "latitude")?,
            None => None,
        };
        let lon = match lon_idx {
            Some(i) => cell_f64(&record, i, line, "longitude")?,
            None => None,
        };
        let depth = match depth_idx {
            Some(i) => cell_f64(&record, i, line, "depth")?,
            None => None,
        };
        // rows missing a filtered field are dropped
        let keep = f.min_magnitude.is_none_or(|m| mag.is_some_and(|v| v >= m))
            && f.max_depth.is_none_or(|d| depth.is_some_and(|v| v <= d))
            && f.latitude.is_none_or(|r| lat.is_some_and(|v| r.contains(v)))
            && f.longitude.is_none_or(|r| lon.is_some_and(|v| r.contains(v)))
            && f.time.is_none_or(|r| r.contains(time));
        if keep {
            rows.push(Row {
                time,
                mag,
                coord: lat.zip(lon),
            });
        }
    }
    rows.sort_by(|a, b| a.time.total_cmp(&b.time));

    let origin = match f.time {
        Some(r) => r.min,
        None if numeric_times => 0.0,
        None => rows.first().map_or(0.0, |r| r.time),
    };
    let last = rows.last().map_or(0.0, |r| r.time - origin);
    let window_end = match spec.window_end {
        Some(w) => w,
        None => match recorded_window(path)? {
            Some(w) => w,
            None => f.time.map_or(last, |r| r.max - origin),
        },
    };
    let window_end = if window_end > 0.0 { window_end } else { last.max(1.0) };
    if rows.is_empty() {
        log::warn!("no events left in {} after filtering", path.display());
    }

    let mut times: Vec<f64> = rows.iter().map(|r| r.time - origin).collect();
    break_ties(&mut times, window_end, spec.jitter_seed);
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| times[a].total_cmp(&times[b]));
    let times: Vec<f64> = order.iter().map(|&i| times[i]).collect();
    let marks = if mag_idx.is_some() && rows.iter().all(|r| r.mag.is_some()) {
        Some(order.iter().map(|&i| rows[i].mag.unwrap_or(f64::NAN)).collect())
    } else {
        None
    };
    let coords = if rows.iter().all(|r| r.coord.is_some()) && lat_idx.is_some() && lon_idx.is_some() {
        Some(order.iter().map(|&i| rows[i].coord.unwrap_or((f64::NAN, f64::NAN))).collect())
    } else {
        None
    };
    EventCatalog::with_marks(times, marks, coords, window_end)
}

/// Moves every repeat of an earlier time by a uniform amount of at most
/// half the smallest nonzero gap, upward unless that would leave
/// `[0, window_end]`. Input must be sorted; output may need re-sorting.
pub fn break_ties(times: &mut [f64], window_end: f64, seed: u64) {
    let min_gap = times
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| *d > 0.0)
        .fold(f64::INFINITY, f64::min);
    let half = if min_gap.is_finite() {
        min_gap / 2.0
    } else {
        window_end.max(1.0) * 1e-9
    };
    let mut rng = rng_from_seed(seed);
    let mut i = 1;
    while i < times.len() {
        if times[i] == times[i - 1] {
            let base = times[i];
            let mut j = i;
            while j < times.len() && times[j] == base {
                let shift = half * (1.0 - rng.random::<f64>());
                times[j] = if base + shift <= window_end {
                    base + shift
                } else {
                    base - shift
                };
                j += 1;
            }
            i = j;
        } else {
            i += 1;
        }
    }
}

/// Writes times, and marks and coordinates when present, with the window
/// length in a leading comment so [`read_catalog`] restores it.
pub fn write_catalog_csv(path: impl AsRef<Path>, catalog: &EventCatalog) -> Result<()> {
    let mut file = File::create(path)?;
    writeln!(file, "{WINDOW_COMMENT}{}", catalog.window_end())?;
    let mut w = csv::Writer::from_writer(file);
    let mut header = vec!["time"];
    if catalog.marks().is_some() {
        header.push("magnitude");
    }
    if catalog.coords().is_some() {
        header.extend(["latitude", "longitude"]);
    }
    w.write_record(&header)?;
    for (i, t) in catalog.times().iter().enumerate() {
        let mut rec = vec![t.to_string()];
        if let Some(m) = catalog.marks() {
            rec.push(m[i].to_string());
        }
        if let Some(c) = catalog.coords() {
            rec.push(c[i].0.to_string());
            rec.push(c[i].1.to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    /// Each row holds the running total up to the end of its period.
    Cumulative,
    /// Each row holds the count within its period.
    #[default]
    Incremental,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CumulativeCountSpec {
    pub delimiter: u8,
    pub start_column: String,
    pub end_column: String,
    pub count_column: String,
    pub mode: CountMode,
}

impl Default for CumulativeCountSpec {
    fn default() -> Self {
        Self {
            delimiter: b',',
            start_column: "start".into(),
            end_column: "end".into(),
            count_column: "count".into(),
            mode: CountMode::Incremental,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountPeriod {
    pub start: f64,
    pub end: f64,
    pub count: u64,
}

/// Reads count rows, converting cumulative totals to per-period counts.
/// Times are shifted so the first period starts at 0.
pub fn read_count_periods(path: impl AsRef<Path>, spec: &CumulativeCountSpec) -> Result<Vec<CountPeriod>> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        find_column(&headers, name).ok_or_else(|| Error::Parse {
            line: 1,
            msg: format!("no '{name}' column in header"),
        })
    };
    let (si, ei, ci) = (col(&spec.start_column)?, col(&spec.end_column)?, col(&spec.count_column)?);
    let mut periods = Vec::new();
    let mut previous_total = 0u64;
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line()) as usize;
        let time = |i: usize| {
            let cell = record.get(i).unwrap_or("");
            parse_time(cell).map(|(v, _)| v).ok_or_else(|| Error::Parse {
                line,
                msg: format!("cannot parse time '{cell}'"),
            })
        };
        let (start, end) = (time(si)?, time(ei)?);
        let cell = record.get(ci).unwrap_or("").trim();
        let raw: u64 = cell.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("count '{cell}' is not a nonnegative integer"),
        })?;
        if end <= start {
            return Err(Error::Parse {
                line,
                msg: format!("period end {end} is not after its start {start}"),
            });
        }
        if let Some(prev) = periods.last().map(|p: &CountPeriod| p.end) {
            if start < prev {
                return Err(Error::OverlappingPeriods { row: row + 1 });
            }
        }
        let count = match spec.mode {
            CountMode::Incremental => raw,
            CountMode::Cumulative => {
                let c = raw.checked_sub(previous_total).ok_or_else(|| Error::Parse {
                    line,
                    msg: format!("cumulative count {raw} decreased from {previous_total}"),
                })?;
                previous_total = raw;
                c
            }
        };
        periods.push(CountPeriod { start, end, count });
    }
    if let Some(origin) = periods.first().map(|p| p.start) {
        for p in &mut periods {
            p.start -= origin;
            p.end -= origin;
        }
    }
    Ok(periods)
}

/// Places each period's cases uniformly at random within the period.
pub fn disaggregate_periods(periods: &[CountPeriod], seed: u64) -> Result<EventCatalog> {
    for (i, w) in periods.windows(2).enumerate() {
        if w[1].start < w[0].end {
            return Err(Error::OverlappingPeriods { row: i + 2 });
        }
    }
    let window_end = periods.last().map_or(0.0, |p| p.end);
    if !(window_end > 0.0) {
        return Err(Error::EmptyInput);
    }
    let mut rng = rng_from_seed(seed);
    let mut times = Vec::with_capacity(periods.iter().map(|p| p.count as usize).sum());
    for p in periods {
        for _ in 0..p.count {
            times.push(rng.random_range(p.start..p.end));
        }
    }
    times.sort_by(f64::total_cmp);
    break_ties(&mut times, window_end, seed ^ 0x9e37_79b9_7f4a_7c15);
    times.sort_by(f64::total_cmp);
    EventCatalog::new(times, window_end)
}

pub fn disaggregate_counts(
    path: impl AsRef<Path>,
    spec: &CumulativeCountSpec,
    seed: u64,
) -> Result<EventCatalog> {
    disaggregate_periods(&read_count_periods(path, spec)?, seed)
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut file = File::create(path)?;
    serde_json::to_writer_pretty(&mut file, value)?;
    writeln!(file)?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: impl AsRef<Path>) -> Result<T> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

/// Columns `index,time,k`.
pub fn write_productivity_csv(
    path: impl AsRef<Path>,
    catalog: &EventCatalog,
    est: &ProductivityEstimate,
) -> Result<()> {
    if est.len() != catalog.len() {
        return Err(Error::LengthMismatch {
            expected: catalog.len(),
            got: est.len(),
        });
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["index", "time", "k"])?;
    for (i, (t, k)) in catalog.times().iter().zip(&est.values).enumerate() {
        w.write_record([i.to_string(), t.to_string(), k.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `magnitude,k,density`.
pub fn write_mark_curve_csv(path: impl AsRef<Path>, curve: &MarkCurve) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["magnitude", "k", "density"])?;
    for ((m, k), f) in curve.grid.iter().zip(&curve.values).zip(&curve.density) {
        w.write_record([m.to_string(), k.to_string(), f.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub t_k: f64,
    pub u_k: f64,
    pub cumsum: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Columns `t_k,u_k,cumsum,lower,upper`.
pub fn write_residuals_csv(path: impl AsRef<Path>, rows: &[ResidualRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Key-value settings shared by the CLI subcommands. Every field is
/// optional; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub ridge: Option<f64>,
    pub pivot_tolerance: Option<f64>,
    pub bandwidth: Option<f64>,
    pub silverman_exponent: Option<f64>,
    pub delta: Option<f64>,
    pub b_rate: Option<f64>,
    pub mu: Option<f64>,
    pub k: Option<f64>,
    pub beta: Option<f64>,
    pub window_end: Option<f64>,
    pub replicates: Option<usize>,
    pub min_magnitude: Option<f64>,
    pub max_depth: Option<f64>,
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Parse {
            line: e.span().map_or(0, |sp| s[..sp.start].lines().count().max(1)),
            msg: e.message().to_string(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }
}
