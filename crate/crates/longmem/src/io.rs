//! File formats for series, transforms, periodograms, and sweep bundles.
//!
//! Everything numeric is written through `f64`'s `Display`, which emits the
//! shortest decimal string that parses back to the identical bits — so every
//! round trip through these files is exact, and artifact files can be diffed
//! byte-for-byte across runs.
//!
//! Formats:
//! * series CSV: header `t,value`, `t = 1..n`;
//! * coefficient CSV: header `q,w`, `q = 0..n−1`;
//! * periodogram CSV: header `k,lambda,ordinate,converged`;
//! * sweep bundle (one directory): `aggregate.csv`, `raw.csv`, `config.json`,
//!   and a gnuplot-ready `curves.dat` with one indexed block per method.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::{SweepConfig, SweepResult};
use crate::series::TimeSeries;
use crate::spectra::Periodogram;
use crate::wavelet::WaveletCoefficients;

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).map_err(|e| Error::io(path, e))?,
    ))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).map_err(|e| Error::io(path, e))?,
    ))
}

fn parse_err(path: &Path, line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        reason: reason.into(),
    }
}

/// Read all lines, checking the header (line 1) matches exactly.
fn read_rows(path: &Path, header: &str) -> Result<Vec<String>> {
    let reader = open(path)?;
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if i == 0 {
            if line.trim_end() != header {
                return Err(parse_err(
                    path,
                    1,
                    format!("expected header `{header}`, found `{line}`"),
                ));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        rows.push(line);
    }
    Ok(rows)
}

fn parse_field<T: std::str::FromStr>(path: &Path, line: usize, name: &str, raw: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| parse_err(path, line, format!("cannot parse {name} from `{raw}`")))
}

/// Write a series as `t,value` rows, `t` starting at 1.
pub fn write_series_csv(path: impl AsRef<Path>, series: &TimeSeries) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "t,value").map_err(io)?;
    for (t, v) in series.values().iter().enumerate() {
        writeln!(w, "{},{v}", t + 1).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Read a `t,value` series; the label is taken from the file stem.
pub fn read_series_csv(path: impl AsRef<Path>) -> Result<TimeSeries> {
    let path = path.as_ref();
    let rows = read_rows(path, "t,value")?;
    let mut values = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let line = i + 2; // 1-based, after the header
        let (t_raw, v_raw) = row
            .split_once(',')
            .ok_or_else(|| parse_err(path, line, "expected two comma-separated fields"))?;
        let t: usize = parse_field(path, line, "t", t_raw)?;
        if t != i + 1 {
            return Err(parse_err(
                path,
                line,
                format!("expected t={}, found t={t}", i + 1),
            ));
        }
        values.push(parse_field(path, line, "value", v_raw)?);
    }
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".to_string());
    TimeSeries::new(label, values)
}

/// Write wavelet coefficients as `q,w` rows, `q` starting at 0.
pub fn write_coeffs_csv(path: impl AsRef<Path>, coeffs: &WaveletCoefficients) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "q,w").map_err(io)?;
    for (q, v) in coeffs.coeffs().iter().enumerate() {
        writeln!(w, "{q},{v}").map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Read back the `w` column of a `q,w` file.
pub fn read_coeffs_csv(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let rows = read_rows(path, "q,w")?;
    let mut values = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let line = i + 2;
        let (q_raw, w_raw) = row
            .split_once(',')
            .ok_or_else(|| parse_err(path, line, "expected two comma-separated fields"))?;
        let q: usize = parse_field(path, line, "q", q_raw)?;
        if q != i {
            return Err(parse_err(
                path,
                line,
                format!("expected q={i}, found q={q}"),
            ));
        }
        values.push(parse_field(path, line, "w", w_raw)?);
    }
    Ok(values)
}

/// Write a periodogram as `k,lambda,ordinate,converged` rows, `k` from 1.
pub fn write_periodogram_csv(path: impl AsRef<Path>, p: &Periodogram) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "k,lambda,ordinate,converged").map_err(io)?;
    for k in 0..p.m() {
        writeln!(
            w,
            "{},{},{},{}",
            k + 1,
            p.freqs()[k],
            p.ordinates()[k],
            p.converged()[k]
        )
        .map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Serialize any value as pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| parse_err(path, 0, format!("serialization failed: {e}")))?;
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    w.write_all(text.as_bytes()).map_err(io)?;
    w.write_all(b"\n").map_err(io)?;
    w.flush().map_err(io)
}

/// One parsed row of `aggregate.csv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateRow {
    pub method: crate::estimators::Method,
    pub m: usize,
    pub mse: f64,
    pub bias: f64,
    pub variance: f64,
    pub mean_d_hat: f64,
    pub reps_used: usize,
}

/// Everything `config.json` records about a sweep: the configuration plus the
/// derived grid and per-replication seeds, so a bundle is auditable and
/// re-runnable from the file alone (worker count deliberately absent — it
/// never changes the numbers).
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct SweepManifest {
    pub config: SweepConfig,
    pub grid: Vec<usize>,
    pub seeds: Vec<u64>,
}

const AGGREGATE_HEADER: &str = "method,m,mse,bias,variance,mean_d_hat,reps_used";

/// Write the four-file sweep bundle into `dir` (created if absent):
/// `aggregate.csv`, `raw.csv`, `config.json`, `curves.dat`.
pub fn export_sweep(res: &SweepResult, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let aggregate_path = dir.join("aggregate.csv");
    {
        let mut w = create(&aggregate_path)?;
        let io = |e| Error::io(&aggregate_path, e);
        writeln!(w, "{AGGREGATE_HEADER}").map_err(io)?;
        for cell in &res.cells {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                cell.method,
                cell.m,
                cell.mse,
                cell.bias,
                cell.variance,
                cell.mean_d_hat,
                cell.reps_used
            )
            .map_err(io)?;
        }
        w.flush().map_err(io)?;
    }

    let raw_path = dir.join("raw.csv");
    {
        let mut w = create(&raw_path)?;
        let io = |e| Error::io(&raw_path, e);
        writeln!(w, "method,m,rep,d_hat").map_err(io)?;
        for (mi, &method) in res.methods.iter().enumerate() {
            for (gi, &m) in res.grid.iter().enumerate() {
                for (r, d_hat) in res.raw[mi][gi].iter().enumerate() {
                    writeln!(w, "{method},{m},{r},{d_hat}").map_err(io)?;
                }
            }
        }
        w.flush().map_err(io)?;
    }

    let config_path = dir.join("config.json");
    write_json(
        &config_path,
        &SweepManifest {
            config: res.config.clone(),
            grid: res.grid.clone(),
            seeds: res.seeds.clone(),
        },
    )?;

    // gnuplot convention: one block per method, blocks separated by two
    // blank lines so `plot ... index k` selects a method.
    let curves_path = dir.join("curves.dat");
    {
        let mut w = create(&curves_path)?;
        let io = |e| Error::io(&curves_path, e);
        writeln!(w, "# columns: m mse bias variance").map_err(io)?;
        for (mi, &method) in res.methods.iter().enumerate() {
            if mi > 0 {
                writeln!(w).map_err(io)?;
                writeln!(w).map_err(io)?;
            }
            writeln!(w, "# {method}").map_err(io)?;
            for (gi, &m) in res.grid.iter().enumerate() {
                let cell = &res.cells[mi * res.grid.len() + gi];
                writeln!(w, "{m} {} {} {}", cell.mse, cell.bias, cell.variance).map_err(io)?;
            }
        }
        w.flush().map_err(io)?;
    }

    Ok(vec![aggregate_path, raw_path, config_path, curves_path])
}

/// Parse `aggregate.csv` back into rows (for audits and round-trip checks).
pub fn read_aggregate_csv(path: impl AsRef<Path>) -> Result<Vec<AggregateRow>> {
    let path = path.as_ref();
    let rows = read_rows(path, AGGREGATE_HEADER)?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let line = i + 2;
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 7 {
            return Err(parse_err(
                path,
                line,
                format!("expected 7 fields, found {}", fields.len()),
            ));
        }
        out.push(AggregateRow {
            method: parse_field(path, line, "method", fields[0])?,
            m: parse_field(path, line, "m", fields[1])?,
            mse: parse_field(path, line, "mse", fields[2])?,
            bias: parse_field(path, line, "bias", fields[3])?,
            variance: parse_field(path, line, "variance", fields[4])?,
            mean_d_hat: parse_field(path, line, "mean_d_hat", fields[5])?,
            reps_used: parse_field(path, line, "reps_used", fields[6])?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::Method;
    use crate::experiments::run_sweep;
    use crate::spectra::ordinary_periodogram;
    use crate::wavelet::haar_dwt_finest;

    fn scratch_dir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("longmem-io-{tag}-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn series_round_trip_is_bit_exact() {
        let dir = scratch_dir("series");
        let path = dir.join("x.csv");
        let x = crate::datagen::fractional_noise(0.3, 64, 9);
        write_series_csv(&path, &x).unwrap();
        let back = read_series_csv(&path).unwrap();
        assert_eq!(back.label(), "x");
        assert_eq!(back.n(), 64);
        for (a, b) in x.values().iter().zip(back.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn series_reader_rejects_malformed_input() {
        let dir = scratch_dir("badseries");
        let path = dir.join("bad.csv");

        fs::write(&path, "time,value\n1,0.5\n").unwrap();
        match read_series_csv(&path).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other}"),
        }

        fs::write(&path, "t,value\n1,0.5\n3,0.2\n").unwrap();
        match read_series_csv(&path).unwrap_err() {
            Error::Parse { line, reason, .. } => {
                assert_eq!(line, 3);
                assert!(reason.contains("t=2"));
            }
            other => panic!("unexpected error {other}"),
        }

        fs::write(&path, "t,value\n1,not-a-number\n").unwrap();
        assert!(matches!(
            read_series_csv(&path).unwrap_err(),
            Error::Parse { line: 2, .. }
        ));

        assert!(matches!(
            read_series_csv(dir.join("missing.csv")).unwrap_err(),
            Error::Io { .. }
        ));
    }

    #[test]
    fn coeffs_round_trip_is_bit_exact() {
        let dir = scratch_dir("coeffs");
        let path = dir.join("w.csv");
        let y = crate::datagen::fractional_noise(0.2, 32, 4);
        let w = haar_dwt_finest(&y).unwrap();
        write_coeffs_csv(&path, &w).unwrap();
        let back = read_coeffs_csv(&path).unwrap();
        assert_eq!(back.len(), 32);
        for (a, b) in w.coeffs().iter().zip(&back) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn periodogram_csv_layout() {
        let dir = scratch_dir("pgram");
        let path = dir.join("p.csv");
        let x = crate::datagen::fractional_noise(0.0, 32, 5);
        let p = ordinary_periodogram(&x, 6).unwrap();
        write_periodogram_csv(&path, &p).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k,lambda,ordinate,converged");
        assert_eq!(lines.len(), 7);
        assert!(lines[1].starts_with("1,"));
        assert!(lines[1].ends_with(",true"));
        // lambda column round-trips to the exact frequency
        let lambda: f64 = lines[3].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(lambda.to_bits(), p.freqs()[2].to_bits());
    }

    #[test]
    fn sweep_bundle_round_trips() {
        let dir = scratch_dir("bundle");
        let cfg = SweepConfig {
            n: 128,
            d: 0.25,
            reps: 4,
            lo_exp: 0.45,
            hi_exp: 0.72,
            base_seed: 5,
            methods: vec![Method::Gph, Method::Wblp],
            ..SweepConfig::default()
        };
        let res = run_sweep(&cfg, 1).unwrap();
        let files = export_sweep(&res, &dir).unwrap();
        assert_eq!(files.len(), 4);
        for f in &files {
            assert!(f.exists(), "{} missing", f.display());
        }

        // aggregate.csv parses back to the exact cell values.
        let rows = read_aggregate_csv(dir.join("aggregate.csv")).unwrap();
        assert_eq!(rows.len(), res.cells.len());
        for (row, cell) in rows.iter().zip(&res.cells) {
            assert_eq!(row.method, cell.method);
            assert_eq!(row.m, cell.m);
            assert_eq!(row.mse.to_bits(), cell.mse.to_bits());
            assert_eq!(row.bias.to_bits(), cell.bias.to_bits());
            assert_eq!(row.variance.to_bits(), cell.variance.to_bits());
            assert_eq!(row.mean_d_hat.to_bits(), cell.mean_d_hat.to_bits());
            assert_eq!(row.reps_used, cell.reps_used);
        }

        // raw.csv has header + methods×grid×reps rows in method-major order.
        let raw = fs::read_to_string(dir.join("raw.csv")).unwrap();
        let lines: Vec<&str> = raw.lines().collect();
        assert_eq!(lines[0], "method,m,rep,d_hat");
        assert_eq!(lines.len(), 1 + 2 * res.grid.len() * 4);
        assert!(lines[1].starts_with(&format!("gph,{},0,", res.grid[0])));
        let wblp_start = 1 + res.grid.len() * 4;
        assert!(lines[wblp_start].starts_with("wblp,"));

        // config.json parses back to the same manifest.
        let text = fs::read_to_string(dir.join("config.json")).unwrap();
        let manifest: SweepManifest = serde_json::from_str(&text).unwrap();
        assert_eq!(manifest.config, res.config);
        assert_eq!(manifest.grid, res.grid);
        assert_eq!(manifest.seeds, res.seeds);
        assert!(!text.contains("workers"));

        // curves.dat has one block per method, separated by two blank lines.
        let curves = fs::read_to_string(dir.join("curves.dat")).unwrap();
        assert!(curves.contains("# gph"));
        assert!(curves.contains("\n\n\n# wblp"));
        let data_lines = curves
            .lines()
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .count();
        assert_eq!(data_lines, 2 * res.grid.len());
    }

    #[test]
    fn nan_estimates_survive_the_raw_csv() {
        let dir = scratch_dir("nan");
        let path = dir.join("raw.csv");
        fs::write(&path, format!("x {}\n", f64::NAN)).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.contains("NaN"));
        let parsed: f64 = text.trim().split(' ').nth(1).unwrap().parse().unwrap();
        assert!(parsed.is_nan());
    }
}
