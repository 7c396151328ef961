use std::io::Read;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{certify, Certificate, CertificationRequest, CertifyError, Verdict};

const COLUMNS: [&str; 7] = ["a1", "a2", "a3", "a4", "a6", "disc", "prime"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BatchOutcome {
    Certificate { verdict: Verdict, route: String, failed: Vec<String> },
    ParseError { message: String },
    Error { message: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchEntry {
    /// 1-based data row, header excluded.
    pub row: usize,
    pub label: String,
    pub outcome: BatchOutcome,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub rows: usize,
    pub certified: usize,
    pub partially_certified: usize,
    pub not_certified: usize,
    pub parse_errors: usize,
    pub errors: usize,
    pub entries: Vec<BatchEntry>,
}

#[derive(Clone, Debug, Default)]
pub struct BatchReport {
    pub summary: BatchSummary,
    /// `(row, certificate)` in row order.
    pub certificates: Vec<(usize, Certificate)>,
}

impl BatchReport {
    /// `0` for an empty batch or all rows certified, `2` if any row is not, `3` on row errors.
    pub fn exit_code(&self) -> i32 {
        let s = &self.summary;
        if s.parse_errors + s.errors > 0 {
            3
        } else if s.not_certified > 0 {
            2
        } else {
            0
        }
    }
}

fn parse_row(rec: &csv::StringRecord, idx: &[usize; 7], label: Option<usize>, base: &CertificationRequest) -> Result<CertificationRequest, String> {
    let field = |i: usize| rec.get(idx[i]).map(str::trim).ok_or_else(|| format!("missing column {}", COLUMNS[i]));
    let mut curve = Vec::with_capacity(5);
    for i in 0..5 {
        let v = field(i)?;
        curve.push(v.parse::<BigInt>().map_err(|_| format!("{} = {v:?} is not an integer", COLUMNS[i]))?);
    }
    let disc = field(5)?.parse::<i64>().map_err(|_| format!("disc = {:?} is not an integer", field(5).unwrap_or("")))?;
    let prime = field(6)?.parse::<u64>().map_err(|_| format!("prime = {:?} is not a positive integer", field(6).unwrap_or("")))?;
    let label = label.and_then(|i| rec.get(i)).map(str::trim).filter(|s| !s.is_empty()).map(String::from);
    Ok(CertificationRequest { label, curve, disc, prime, ..base.clone() })
}

/// Certifies each CSV row independently. Columns: `label` (optional), `a1..a6`,
/// `disc`, `prime`. Precision, bounds and depth come from `base`.
pub fn batch_certify<R: Read>(input: R, base: &CertificationRequest) -> Result<BatchReport, CertifyError> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(input);
    let headers = match reader.headers() {
        Ok(h) if h.is_empty() || h.iter().all(str::is_empty) => return Ok(BatchReport::default()),
        Ok(h) => h.clone(),
        Err(err) => return Err(CertifyError::Parse { row: 0, message: err.to_string() }),
    };
    let find = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let mut idx = [0usize; 7];
    for (slot, name) in idx.iter_mut().zip(COLUMNS) {
        *slot = find(name).ok_or_else(|| CertifyError::Parse { row: 0, message: format!("missing column {name}") })?;
    }
    let label_col = find("label");

    let rows: Vec<(usize, Result<csv::StringRecord, String>)> =
        reader.records().enumerate().map(|(i, r)| (i + 1, r.map_err(|e| e.to_string()))).collect();
    let results: Vec<(BatchEntry, Option<Certificate>)> = rows
        .par_iter()
        .map(|(row, rec)| {
            let default_label = format!("row-{row}");
            let parsed = rec.as_ref().map_err(Clone::clone).and_then(|r| parse_row(r, &idx, label_col, base));
            let req = match parsed {
                Ok(req) => req,
                Err(message) => {
                    let outcome = BatchOutcome::ParseError { message };
                    return (BatchEntry { row: *row, label: default_label, outcome }, None);
                }
            };
            let label = req.label.clone().unwrap_or(default_label);
            match certify(&req) {
                Ok(cert) => {
                    let outcome = BatchOutcome::Certificate {
                        verdict: cert.verdict,
                        route: cert.route.tag().into(),
                        failed: cert.failed().into_iter().map(String::from).collect(),
                    };
                    (BatchEntry { row: *row, label, outcome }, Some(cert))
                }
                Err(err) => (BatchEntry { row: *row, label, outcome: BatchOutcome::Error { message: err.to_string() } }, None),
            }
        })
        .collect();

    let mut report = BatchReport::default();
    report.summary.rows = results.len();
    for (entry, cert) in results {
        match &entry.outcome {
            BatchOutcome::Certificate { verdict: Verdict::Certified, .. } => report.summary.certified += 1,
            BatchOutcome::Certificate { verdict: Verdict::PartiallyCertified, .. } => report.summary.partially_certified += 1,
            BatchOutcome::Certificate { verdict: Verdict::NotCertified, .. } => report.summary.not_certified += 1,
            BatchOutcome::ParseError { .. } => report.summary.parse_errors += 1,
            BatchOutcome::Error { .. } => report.summary.errors += 1,
        }
        if let Some(c) = cert {
            report.certificates.push((entry.row, c));
        }
        report.summary.entries.push(entry);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> CertificationRequest {
        CertificationRequest::new([0; 5], -7, 5)
    }

    #[test]
    fn empty_input_gives_empty_summary() {
        let r = batch_certify("".as_bytes(), &base()).unwrap();
        assert_eq!(r.summary.rows, 0);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn malformed_row_is_isolated() {
        let csv = "label,a1,a2,a3,a4,a6,disc,prime\n\
                   37a1,0,0,1,-1,0,-7,5\n\
                   broken,0,0,x,-1,0,-7,5\n\
                   37a1,0,0,1,-1,0,-7,5\n";
        let r = batch_certify(csv.as_bytes(), &base()).unwrap();
        assert_eq!(r.summary.rows, 3);
        assert_eq!(r.summary.parse_errors, 1);
        assert_eq!(r.certificates.len(), 2);
        assert!(matches!(r.summary.entries[1].outcome, BatchOutcome::ParseError { .. }));
        assert_eq!(r.summary.entries[1].row, 2);
        // identical rows give identical certificates
        assert_eq!(r.certificates[0].1.to_json(), r.certificates[1].1.to_json());
    }

    #[test]
    fn missing_column_is_a_parse_error() {
        let err = batch_certify("a1,a2,a3,a4,a6,disc\n0,0,1,-1,0,-7\n".as_bytes(), &base()).unwrap_err();
        assert!(matches!(err, CertifyError::Parse { row: 0, .. }));
    }
}
