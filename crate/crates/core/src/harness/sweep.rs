use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use super::{fmt_float, run_trial, TrialConfig, TrialRecord};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "n,lambda1,lambda2,seed,largest,second_largest,count_size1,count_size2,\
count_mid,tadpole_core,size_core,br_fraction,beta_predicted,gen_ms,decomp_ms";

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

impl TrialRecord {
    /// One CSV row in [`CSV_HEADER`] order. Timing columns are left empty
    /// unless `timings` is set, keeping the row a pure function of the
    /// configuration.
    pub fn csv_row(&self, timings: bool) -> String {
        let ms = |x: f64| if timings { fmt_float(x) } else { String::new() };
        [
            self.n.to_string(),
            fmt_float(self.lambda1),
            fmt_float(self.lambda2),
            self.seed.to_string(),
            self.largest.to_string(),
            self.second_largest.to_string(),
            self.count_size1.to_string(),
            self.count_size2.to_string(),
            self.count_mid.to_string(),
            opt(self.tadpole_core, |v| v.to_string()),
            opt(self.size_core, |v| v.to_string()),
            opt(self.br_fraction, fmt_float),
            fmt_float(self.beta_predicted),
            ms(self.gen_ms),
            ms(self.decomp_ms),
        ]
        .join(",")
    }

    /// JSON object keyed like the CSV columns.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "seed": self.seed,
            "largest": self.largest,
            "second_largest": self.second_largest,
            "count_size1": self.count_size1,
            "count_size2": self.count_size2,
            "count_mid": self.count_mid,
            "tadpole_core": self.tadpole_core,
            "size_core": self.size_core,
            "br_fraction": self.br_fraction,
            "beta_predicted": self.beta_predicted,
            "gen_ms": self.gen_ms,
            "decomp_ms": self.decomp_ms,
        })
    }
}

/// Runs every configuration on a pool of `threads` workers and writes one
/// row per trial in grid order. If a trial fails, the rows before it are
/// written, followed by a `# ERROR` marker line, and the error is returned.
pub fn sweep_to_writer<W: Write>(grid: &[TrialConfig], threads: usize, timings: bool, mut out: W) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::param("sweep grid is empty"));
    }
    if threads == 0 {
        return Err(Error::param("thread count must be positive"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::param(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<TrialRecord>> = pool.install(|| grid.par_iter().map(run_trial).collect());

    writeln!(out, "{CSV_HEADER}")?;
    for (i, result) in results.into_iter().enumerate() {
        match result {
            Ok(record) => writeln!(out, "{}", record.csv_row(timings))?,
            Err(e) => {
                writeln!(out, "# ERROR trial {i}: {e}")?;
                out.flush()?;
                return Err(e);
            }
        }
    }
    out.flush()?;
    Ok(())
}

pub fn sweep(grid: &[TrialConfig], threads: usize, timings: bool, out: &Path) -> Result<()> {
    let file = File::create(out)?;
    sweep_to_writer(grid, threads, timings, BufWriter::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_trivial_config() {
        let mut buf = Vec::new();
        sweep_to_writer(&[TrialConfig::new(1, 1.0, 1.0, 0)], 1, false, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "1,1,1,0,1,0,1,0,0,,,,0,,");
    }

    #[test]
    fn failing_trial_leaves_marker() {
        let grid = [TrialConfig::new(5, 1.0, 1.0, 0), TrialConfig::new(5, 9.0, 1.0, 0)];
        let mut buf = Vec::new();
        assert!(sweep_to_writer(&grid, 2, false, &mut buf).is_err());
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[2].starts_with("# ERROR trial 1"));
    }

    #[test]
    fn empty_grid_rejected() {
        assert!(sweep_to_writer(&[], 1, false, Vec::new()).is_err());
    }

    #[test]
    fn unwritable_path() {
        let err = sweep(&[TrialConfig::new(1, 1.0, 1.0, 0)], 1, false, Path::new("/nonexistent/dir/x.csv"));
        assert!(matches!(err, Err(Error::Io(_))));
    }
}
