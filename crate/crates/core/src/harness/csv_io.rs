use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::sweep::{SweepResult, SweepRow};

pub const CSV_HEADER: [&str; 8] = [
    "scheme",
    "estimator",
    "sweep_name",
    "sweep_value",
    "metric",
    "mean",
    "std_error",
    "trials",
];

/// Metadata as leading `# key: value` lines, then the header and one row per
/// aggregate in the result's (deterministic) order.
pub fn write_csv<W: Write>(result: &SweepResult, mut writer: W) -> std::io::Result<()> {
    for (k, v) in &result.metadata {
        writeln!(writer, "# {k}: {v}")?;
    }
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for r in &result.rows {
        w.write_record([
            r.scheme.clone(),
            r.estimator.clone(),
            r.sweep_name.clone(),
            r.sweep_value.to_string(),
            r.metric.clone(),
            r.mean.to_string(),
            r.std_error.to_string(),
            r.trials.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(result: &SweepResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut buf = BufWriter::new(file);
    write_csv(result, &mut buf).map_err(io_err)?;
    buf.flush().map_err(io_err)
}

pub fn parse_csv<R: Read>(reader: R, origin: &Path) -> Result<SweepResult> {
    let csv_err = |source| Error::Csv {
        path: origin.to_path_buf(),
        source,
    };
    let mut metadata = Vec::new();
    let mut body = String::new();
    for line in BufReader::new(reader).lines() {
        let line = line.map_err(|source| Error::Io {
            path: origin.to_path_buf(),
            source,
        })?;
        match line.strip_prefix("# ") {
            Some(meta) => {
                let (k, v) = meta.split_once(": ").unwrap_or((meta, ""));
                metadata.push((k.to_string(), v.to_string()));
            }
            None => {
                body.push_str(&line);
                body.push('\n');
            }
        }
    }
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let header = rdr.headers().map_err(csv_err)?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Config(format!(
            "{}: unexpected CSV header '{}'",
            origin.display(),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let num = |i: usize| -> Result<f64> {
            rec[i].parse().map_err(|_| {
                Error::Config(format!(
                    "{}: bad number '{}' in column {}",
                    origin.display(),
                    &rec[i],
                    CSV_HEADER[i]
                ))
            })
        };
        rows.push(SweepRow {
            scheme: rec[0].to_string(),
            estimator: rec[1].to_string(),
            sweep_name: rec[2].to_string(),
            sweep_value: num(3)?,
            metric: rec[4].to_string(),
            mean: num(5)?,
            std_error: num(6)?,
            trials: num(7)? as usize,
        });
    }
    Ok(SweepResult { metadata, rows })
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<SweepResult> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(file, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SweepResult {
        SweepResult {
            metadata: vec![("seed".into(), "1".into()), ("note".into(), "a: b".into())],
            rows: vec![SweepRow {
                scheme: "lahp".into(),
                estimator: "perfect".into(),
                sweep_name: "snr_db".into(),
                sweep_value: 12.5,
                metric: "sum_rate".into(),
                mean: std::f64::consts::PI * 1e3,
                std_error: 1.0 / 3.0,
                trials: 200,
            }],
        }
    }

    #[test]
    fn empty_result_is_header_and_metadata() {
        let r = SweepResult {
            metadata: vec![("seed".into(), "5".into())],
            rows: vec![],
        };
        let mut out = Vec::new();
        write_csv(&r, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "# seed: 5\nscheme,estimator,sweep_name,sweep_value,metric,mean,std_error,trials\n"
        );
    }

    #[test]
    fn round_trip_is_exact() {
        let r = sample();
        let mut out = Vec::new();
        write_csv(&r, &mut out).unwrap();
        let back = parse_csv(out.as_slice(), Path::new("mem")).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn header_drift_is_rejected() {
        let text = "scheme,estimator,sweep,sweep_value,metric,mean,std_error,trials\n";
        assert!(parse_csv(text.as_bytes(), Path::new("mem")).is_err());
    }

    #[test]
    fn io_error_names_path() {
        let err = emit_csv(&sample(), "/nonexistent-dir/x.csv").unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.csv"));
    }
}
