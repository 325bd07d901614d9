//! Trade-record files.
//!
//! Comma-delimited UTF-8 with the header `year,reporter,partner,flow,value_usd`;
//! a `.gz` extension selects gzip decompression. Rows are validated one by one
//! and bad rows are collected with their line numbers instead of aborting.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use flate2::read::GzDecoder;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{FlowRecord, NetworkError, TradeNetwork};

pub const HEADER: [&str; 5] = ["year", "reporter", "partner", "flow", "value_usd"];
pub const YEAR_RANGE: std::ops::RangeInclusive<i32> = 1900..=2100;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("missing or malformed header: expected `{}`, found `{found}`", HEADER.join(","))]
    BadHeader { found: String },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("year {year}: {source}")]
    Network {
        year: i32,
        #[source]
        source: NetworkError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flow {
    Import,
    Export,
}

impl FromStr for Flow {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "import" | "m" => Ok(Flow::Import),
            "export" | "x" => Ok(Flow::Export),
            other => Err(format!("unknown flow `{other}` (expected import|export)")),
        }
    }
}

impl Flow {
    pub fn name(self) -> &'static str {
        match self {
            Flow::Import => "import",
            Flow::Export => "export",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradeRecord {
    pub year: i32,
    pub reporter: String,
    pub partner: String,
    pub flow: Flow,
    pub value: f64,
}

impl TradeRecord {
    /// Exporter -> importer orientation of the reported flow.
    pub fn as_flow(&self) -> FlowRecord {
        match self.flow {
            Flow::Import => FlowRecord::new(&self.partner, &self.reporter, self.value),
            Flow::Export => FlowRecord::new(&self.reporter, &self.partner, self.value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    /// 1-based line number in the file (the header is line 1).
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParseReport {
    pub records: Vec<TradeRecord>,
    pub errors: Vec<RowError>,
    pub zero_value_dropped: usize,
    /// Every year that appeared on a well-formed row, including dropped ones.
    pub years_seen: BTreeSet<i32>,
}

impl ParseReport {
    pub fn is_clean(&self) -> bool {
        self.errors.is_empty()
    }
}

pub fn parse_trade_file(path: impl AsRef<Path>) -> Result<ParseReport, IngestError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let reader: Box<dyn Read> = if path.extension().is_some_and(|e| e == "gz") {
        Box::new(GzDecoder::new(BufReader::new(file)))
    } else {
        Box::new(BufReader::new(file))
    };
    parse_trade_records(reader)
}

pub fn parse_trade_records<R: Read>(reader: R) -> Result<ParseReport, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = match rdr.headers() {
        Ok(h) => h.clone(),
        Err(e) if matches!(e.kind(), csv::ErrorKind::Utf8 { .. }) => {
            return Err(IngestError::BadHeader {
                found: "<invalid utf-8>".into(),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let found: Vec<String> = headers.iter().map(|h| h.to_ascii_lowercase()).collect();
    if found != HEADER {
        return Err(IngestError::BadHeader {
            found: headers.iter().collect::<Vec<_>>().join(","),
        });
    }

    let mut report = ParseReport::default();
    for row in rdr.records() {
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                report.errors.push(RowError {
                    line,
                    message: e.to_string(),
                });
                continue;
            }
        };
        let line = row.position().map_or(0, |p| p.line());
        match parse_row(&row) {
            Ok(rec) => {
                report.years_seen.insert(rec.year);
                if rec.value == 0.0 {
                    report.zero_value_dropped += 1;
                } else {
                    report.records.push(rec);
                }
            }
            Err(message) => report.errors.push(RowError { line, message }),
        }
    }
    Ok(report)
}

fn parse_row(row: &csv::StringRecord) -> Result<TradeRecord, String> {
    if row.len() != HEADER.len() {
        return Err(format!("expected {} fields, found {}", HEADER.len(), row.len()));
    }
    let year: i32 = row[0]
        .parse()
        .map_err(|_| format!("invalid year `{}`", &row[0]))?;
    if !YEAR_RANGE.contains(&year) {
        return Err(format!("year {year} outside {}..={}", YEAR_RANGE.start(), YEAR_RANGE.end()));
    }
    let reporter = row[1].to_string();
    let partner = row[2].to_string();
    if reporter.is_empty() || partner.is_empty() {
        return Err("empty economy code".into());
    }
    let flow: Flow = row[3].parse()?;
    let value: f64 = row[4]
        .parse()
        .map_err(|_| format!("invalid value `{}`", &row[4]))?;
    if !value.is_finite() {
        return Err(format!("non-finite value `{}`", &row[4]));
    }
    if value < 0.0 {
        return Err(format!("negative value {value}"));
    }
    Ok(TradeRecord {
        year,
        reporter,
        partner,
        flow,
        value,
    })
}

/// One network per distinct year, using only rows whose flow matches `policy`.
///
/// Years whose rows are all filtered out still get an (empty) network.
pub fn build_yearly_networks(
    records: &[TradeRecord],
    policy: Flow,
) -> Result<BTreeMap<i32, TradeNetwork>, IngestError> {
    let mut by_year: BTreeMap<i32, Vec<FlowRecord>> = BTreeMap::new();
    for rec in records {
        let bucket = by_year.entry(rec.year).or_default();
        if rec.flow == policy {
            bucket.push(rec.as_flow());
        }
    }
    by_year
        .into_iter()
        .map(|(year, flows)| {
            TradeNetwork::build(year, flows)
                .map(|net| (year, net))
                .map_err(|source| IngestError::Network { year, source })
        })
        .collect()
}

/// Writes the active edges of a network back out as import records
/// (reporter = importer, partner = exporter).
pub fn write_network_records<W: Write>(net: &TradeNetwork, out: W) -> Result<(), IngestError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for (_, e) in net.active_edges() {
        w.write_record([
            net.year().to_string(),
            net.code(e.target).to_string(),
            net.code(e.source).to_string(),
            Flow::Import.name().to_string(),
            e.weight.to_string(),
        ])?;
    }
    w.flush().map_err(|source| IngestError::Io {
        path: "<writer>".into(),
        source,
    })?;
    Ok(())
}
