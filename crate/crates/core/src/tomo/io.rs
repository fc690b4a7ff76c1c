use std::io::{Read, Write};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::CountRecord;
use crate::qubit::{outcome_label, parse_outcome, DensityMatrix, MeasurementSetting, DIM};
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct CountRow {
    setting: String,
    outcome: String,
    count: u64,
}

/// Writes `setting,outcome,count` rows, 16 per record.
pub fn write_counts_csv(out: impl Write, records: &[CountRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for r in records {
        for (o, &count) in r.counts.iter().enumerate() {
            w.serialize(CountRow {
                setting: r.setting.to_string(),
                outcome: outcome_label(o),
                count,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads rows written by [`write_counts_csv`]; outcomes missing for a
/// setting count as zero. `expected_total` is set to the observed total.
pub fn read_counts_csv(input: impl Read) -> Result<Vec<CountRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut records: Vec<CountRecord> = Vec::new();
    for row in rdr.deserialize() {
        let row: CountRow = row?;
        let setting: MeasurementSetting = row.setting.parse()?;
        let o = parse_outcome(&row.outcome)?;
        let idx = match records.iter().position(|r| r.setting == setting) {
            Some(i) => i,
            None => {
                records.push(CountRecord {
                    setting,
                    counts: [0; DIM],
                    expected_total: 0.0,
                });
                records.len() - 1
            }
        };
        records[idx].counts[o] += row.count;
        records[idx].expected_total += row.count as f64;
    }
    Ok(records)
}

#[derive(Serialize, Deserialize)]
struct DensityJson {
    real: Vec<Vec<f64>>,
    imag: Vec<Vec<f64>>,
}

/// `{"real": [[..]], "imag": [[..]]}`, row-major.
pub fn density_to_json(rho: &DensityMatrix) -> Result<String> {
    let m = rho.matrix();
    let rows = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
        (0..m.nrows())
            .map(|r| (0..m.ncols()).map(|c| f(&m[(r, c)])).collect())
            .collect()
    };
    Ok(serde_json::to_string(&DensityJson {
        real: rows(|z| z.re),
        imag: rows(|z| z.im),
    })?)
}

pub fn density_from_json(text: &str) -> Result<DensityMatrix> {
    let j: DensityJson = serde_json::from_str(text)?;
    let n = j.real.len();
    let square = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
    if !square(&j.real) || !square(&j.imag) {
        return Err(Error::Parse("real and imag must be square arrays of equal size".into()));
    }
    DensityMatrix::new(DMatrix::from_fn(n, n, |r, c| C64::new(j.real[r][c], j.imag[r][c])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::state_at;
    use crate::tomo::simulate_counts;

    #[test]
    fn csv_round_trip() {
        let s = state_at(0.2).unwrap().state;
        let records = simulate_counts(&s, 50, 4).unwrap();
        let mut buf = Vec::new();
        write_counts_csv(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("setting,outcome,count\nxxxx,++++,"));
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().count(), 1 + 81 * 16);
        let back = read_counts_csv(buf.as_slice()).unwrap();
        for (a, b) in records.iter().zip(&back) {
            assert_eq!((a.setting, a.counts), (b.setting, b.counts));
        }
    }

    #[test]
    fn csv_rejects_bad_setting() {
        let text = "setting,outcome,count\nxxqx,++++,3\n";
        assert!(matches!(read_counts_csv(text.as_bytes()), Err(Error::Parse(_))));
    }

    #[test]
    fn json_round_trip() {
        let rho = state_at(0.4).unwrap().state.to_density();
        let text = density_to_json(&rho).unwrap();
        let back = density_from_json(&text).unwrap();
        assert!((back.matrix() - rho.matrix()).norm() < 1e-15);
        assert!(density_from_json(r#"{"real": [[1.0]], "imag": [[0.0, 0.0]]}"#).is_err());
    }
}
