//! Binned samples: the data model, validation, census-style count rounding,
//! eligibility filtering, and delimited-file ingestion.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use thiserror::Error;

/// One half-open income bin [lower, upper) with its count. The last bin of
/// a sample may be unbounded (`upper = +inf`).
#[derive(Debug, Clone, PartialEq)]
pub struct Bin {
    pub lower: f64,
    pub upper: f64,
    pub count: u64,
}

impl Bin {
    pub fn new(lower: f64, upper: f64, count: u64) -> Bin {
        Bin { lower, upper, count }
    }

    pub fn is_unbounded(&self) -> bool {
        self.upper.is_infinite()
    }

    /// Midpoint, with the unbounded top bin represented at
    /// `top_bin_factor` times its lower bound.
    pub fn midpoint(&self, top_bin_factor: f64) -> f64 {
        if self.is_unbounded() {
            self.lower * top_bin_factor
        } else {
            0.5 * (self.lower + self.upper)
        }
    }
}

/// A set of contiguous bins with counts for one unit (district).
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedSample {
    pub id: String,
    pub bins: Vec<Bin>,
    /// Cached sum of counts.
    pub total: u64,
}

/// Structural violations found by [`BinnedSample::validate`], each naming
/// the offending bin index (after sorting by lower bound).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("bin {0} overlaps its predecessor")]
    OverlappingBins(usize),
    #[error("bin {0} leaves a gap after its predecessor")]
    NonContiguousBins(usize),
    #[error("bin {0} has invalid bounds (need 0 <= lower < upper)")]
    InvalidBounds(usize),
    #[error("bin {0} is unbounded but not last")]
    UnboundedInteriorBin(usize),
    #[error("sample has no bins")]
    Empty,
}

impl BinnedSample {
    /// Builds a sample and caches the count total.
    pub fn new(id: impl Into<String>, bins: Vec<Bin>) -> BinnedSample {
        let total = bins.iter().map(|b| b.count).sum();
        BinnedSample { id: id.into(), bins, total }
    }

    /// Sorts bins by lower bound and checks every structural invariant:
    /// bounds are ordered, bins are contiguous and non-overlapping, and
    /// only the last bin may be unbounded. Samples with gaps are rejected
    /// rather than repaired, since the likelihood assumes the bins exhaust
    /// the data. Idempotent on already-valid samples.
    pub fn validate(mut self) -> Result<BinnedSample, ValidationError> {
        if self.bins.is_empty() {
            return Err(ValidationError::Empty);
        }
        self.bins
            .sort_by(|a, b| a.lower.total_cmp(&b.lower).then(a.upper.total_cmp(&b.upper)));
        for (i, bin) in self.bins.iter().enumerate() {
            if !(bin.lower >= 0.0 && bin.lower.is_finite() && bin.lower < bin.upper) {
                return Err(ValidationError::InvalidBounds(i));
            }
            if bin.upper.is_infinite() && i + 1 != self.bins.len() {
                return Err(ValidationError::UnboundedInteriorBin(i));
            }
            if i > 0 {
                let prev_upper = self.bins[i - 1].upper;
                if bin.lower < prev_upper {
                    return Err(ValidationError::OverlappingBins(i));
                }
                if bin.lower > prev_upper {
                    return Err(ValidationError::NonContiguousBins(i));
                }
            }
        }
        self.total = self.bins.iter().map(|b| b.count).sum();
        Ok(self)
    }

    /// Number of bins with a nonzero count.
    pub fn nonzero_bins(&self) -> usize {
        self.bins.iter().filter(|b| b.count > 0).count()
    }

    /// Applies [`census_round`] to every count.
    pub fn census_rounded(&self) -> BinnedSample {
        let bins = self
            .bins
            .iter()
            .map(|b| Bin::new(b.lower, b.upper, census_round(b.count)))
            .collect();
        BinnedSample::new(self.id.clone(), bins)
    }

    /// Same bins with every edge multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> BinnedSample {
        let bins = self
            .bins
            .iter()
            .map(|b| Bin::new(b.lower * c, b.upper * c, b.count))
            .collect();
        BinnedSample::new(self.id.clone(), bins)
    }
}

/// Census disclosure rounding: 0 stays 0, counts 1-4 report as 4, and
/// larger counts round to the nearest multiple of 5 (integers cannot tie).
pub fn census_round(count: u64) -> u64 {
    match count {
        0 => 0,
        1..=4 => 4,
        n => {
            let rem = n % 5;
            if rem <= 2 {
                n - rem
            } else {
                n + (5 - rem)
            }
        }
    }
}

/// Minimum totals a unit needs before a 3+-parameter fit is attempted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EligibilityRule {
    pub min_total: u64,
    pub min_nonzero_bins: usize,
}

impl Default for EligibilityRule {
    fn default() -> Self {
        EligibilityRule { min_total: 40, min_nonzero_bins: 4 }
    }
}

impl EligibilityRule {
    pub fn is_eligible(&self, sample: &BinnedSample) -> bool {
        sample.total >= self.min_total && sample.nonzero_bins() >= self.min_nonzero_bins
    }
}

/// Maps file columns to the fields of a bin row. `id` is optional: a file
/// holding a single unit needs no id column.
#[derive(Debug, Clone)]
pub struct ColumnMap {
    pub id: Option<String>,
    pub min: String,
    pub max: String,
    pub n: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            id: Some("id".into()),
            min: "min".into(),
            max: "max".into(),
            n: "n".into(),
        }
    }
}

/// Errors from reading or writing delimited bin files.
#[derive(Debug, Error)]
pub enum ReadError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("missing column '{0}' in header")]
    MissingColumn(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Reads comma-separated bin rows into one sample per distinct id,
/// preserving first-appearance order; bins are sorted per sample but not
/// otherwise validated. An empty max field or the literal `inf`
/// (case-insensitive) marks the unbounded top bin.
pub fn read_samples(path: impl AsRef<Path>, columns: &ColumnMap) -> Result<Vec<BinnedSample>, ReadError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path.as_ref())?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| -> Result<usize, ReadError> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| ReadError::MissingColumn(name.to_string()))
    };
    let id_idx = match &columns.id {
        Some(name) => Some(col(name)?),
        None => None,
    };
    let min_idx = col(&columns.min)?;
    let max_idx = col(&columns.max)?;
    let n_idx = col(&columns.n)?;

    let mut order: Vec<String> = Vec::new();
    let mut by_id: std::collections::HashMap<String, Vec<Bin>> = std::collections::HashMap::new();

    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let parse_err = |message: String| ReadError::Parse { line, message };
        let field = |idx: usize| -> Result<&str, ReadError> {
            record
                .get(idx)
                .ok_or_else(|| parse_err(format!("row has only {} fields", record.len())))
        };
        let id = match id_idx {
            Some(i) => field(i)?.to_string(),
            None => String::new(),
        };
        let min_raw = field(min_idx)?;
        let lower: f64 = min_raw
            .parse()
            .map_err(|_| parse_err(format!("cannot parse min value '{min_raw}'")))?;
        let max_raw = field(max_idx)?;
        let upper = parse_upper(max_raw).ok_or_else(|| parse_err(format!("cannot parse max value '{max_raw}'")))?;
        let n_raw = field(n_idx)?;
        let count: u64 = n_raw
            .parse()
            .map_err(|_| parse_err(format!("cannot parse count '{n_raw}' as a nonnegative integer")))?;
        if !lower.is_finite() || lower < 0.0 {
            return Err(parse_err(format!("min value '{min_raw}' must be a nonnegative number")));
        }
        if !by_id.contains_key(&id) {
            order.push(id.clone());
        }
        by_id.entry(id).or_default().push(Bin::new(lower, upper, count));
    }

    Ok(order
        .into_iter()
        .map(|id| {
            let mut bins = by_id.remove(&id).expect("id recorded on first sight");
            bins.sort_by(|a, b| a.lower.total_cmp(&b.lower));
            BinnedSample::new(id, bins)
        })
        .collect())
}

fn parse_upper(raw: &str) -> Option<f64> {
    if raw.is_empty() || raw.eq_ignore_ascii_case("inf") || raw.eq_ignore_ascii_case("infinity") {
        return Some(f64::INFINITY);
    }
    raw.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Writes samples in the canonical form [`read_samples`] accepts, so a
/// read-back reproduces the bin structure exactly.
pub fn write_samples(path: impl AsRef<Path>, samples: &[BinnedSample]) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "id,min,max,n")?;
    for sample in samples {
        for bin in &sample.bins {
            let mut row = String::new();
            write!(row, "{},{}", sample.id, bin.lower).expect("write to string");
            if bin.is_unbounded() {
                row.push_str(",inf");
            } else {
                write!(row, ",{}", bin.upper).expect("write to string");
            }
            write!(row, ",{}", bin.count).expect("write to string");
            writeln!(out, "{row}")?;
        }
    }
    out.flush()
}
