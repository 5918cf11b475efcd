use std::io::{BufRead, BufReader, Read};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{TemporalDatabase, Transaction, TransactionEntry};
use crate::error::{Error, Result};

/// Supported on-disk transaction formats.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputFormat {
    /// One transaction per line, whitespace-separated decimal item ids.
    #[default]
    Fimi,
    /// FIMI where a token may also be `id:qty` with `qty` a positive integer.
    FimiQuantified,
    /// CSV with header `unit,items`; `items` is a `;`-separated token list.
    CsvTimestamped,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fimi" => Ok(InputFormat::Fimi),
            "fimi_quantified" | "fimi-quantified" => Ok(InputFormat::FimiQuantified),
            "csv_timestamped" | "csv-timestamped" => Ok(InputFormat::CsvTimestamped),
            other => Err(Error::arg("format", format!("unknown format `{other}`"))),
        }
    }
}

/// Parses a transaction database.
///
/// For the FIMI formats, line `i` (0-based) becomes transaction `i` in time
/// unit `i / units_per_group`; blank lines are empty transactions. For
/// `csv_timestamped`, the `unit` column is divided by `units_per_group`.
/// Duplicate items within a transaction are merged with summed quantities.
pub fn parse_transactions<R: Read>(
    reader: R,
    format: InputFormat,
    units_per_group: u32,
) -> Result<TemporalDatabase> {
    if units_per_group == 0 {
        return Err(Error::arg("units-per-group", "must be positive"));
    }
    let transactions = match format {
        InputFormat::Fimi => parse_fimi(reader, false, units_per_group)?,
        InputFormat::FimiQuantified => parse_fimi(reader, true, units_per_group)?,
        InputFormat::CsvTimestamped => parse_csv(reader, units_per_group)?,
    };
    if transactions.is_empty() || transactions.iter().all(|t| t.items().is_empty()) {
        return Err(Error::EmptyInput);
    }
    TemporalDatabase::new(transactions, None, None)
}

fn parse_fimi<R: Read>(reader: R, quantified: bool, per_group: u32) -> Result<Vec<Transaction>> {
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => Error::parse(idx + 1, "invalid UTF-8"),
            _ => Error::Io(e),
        })?;
        let entries = line
            .split_whitespace()
            .map(|tok| parse_token(tok, quantified, idx + 1))
            .collect::<Result<Vec<_>>>()?;
        let unit = u32::try_from(idx as u64 / per_group as u64)
            .map_err(|_| Error::parse(idx + 1, "too many time units"))?;
        out.push(Transaction::new(idx as u64, unit, entries).map_err(|e| reline(e, idx + 1))?);
    }
    Ok(out)
}

fn parse_csv<R: Read>(reader: R, per_group: u32) -> Result<Vec<Transaction>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "unit" || &headers[1] != "items" {
        return Err(Error::parse(1, "expected header `unit,items`"));
    }
    let mut out = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(idx + 2, |p| p.line() as usize);
        if record.len() != 2 {
            return Err(Error::parse(line, "expected 2 fields"));
        }
        let unit: u32 = record[0]
            .parse()
            .map_err(|_| Error::parse(line, format!("bad unit `{}`", &record[0])))?;
        let entries = record[1]
            .split(';')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|tok| parse_token(tok, true, line))
            .collect::<Result<Vec<_>>>()?;
        out.push(
            Transaction::new(idx as u64, unit / per_group, entries).map_err(|e| reline(e, line))?,
        );
    }
    Ok(out)
}

fn parse_token(tok: &str, quantified: bool, line: usize) -> Result<TransactionEntry> {
    let (id, qty) = match tok.split_once(':') {
        Some((id, qty)) if quantified => (id, Some(qty)),
        Some(_) => {
            return Err(Error::parse(
                line,
                format!("quantity token `{tok}` not allowed in plain fimi"),
            ))
        }
        None => (tok, None),
    };
    let item = id
        .parse::<u32>()
        .map_err(|_| Error::parse(line, format!("malformed item id `{tok}`")))?;
    let quantity = match qty {
        None => 1,
        Some(q) => q
            .parse::<u64>()
            .map_err(|_| Error::parse(line, format!("malformed quantity `{tok}`")))?,
    };
    if quantity == 0 {
        return Err(Error::parse(line, format!("zero quantity in `{tok}`")));
    }
    Ok(TransactionEntry { item, quantity })
}

fn reline(e: Error, line: usize) -> Error {
    match e {
        Error::InvalidArgument { message, .. } => Error::parse(line, message),
        other => other,
    }
}
