//! CSV trajectories: a `t` column followed by one column per state label.
//! Values are written with 17 significant digits so they read back
//! bit-identically.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryTable {
    pub labels: Vec<String>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl TrajectoryTable {
    pub fn first_state(&self) -> &[f64] {
        &self.states[0]
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("table holds at least one row")
    }

    pub fn write_to<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["t".to_string()];
        header.extend(self.labels.iter().cloned());
        w.write_record(&header)?;
        for (t, s) in self.times.iter().zip(&self.states) {
            let row = std::iter::once(t).chain(s).map(|v| format!("{v:.16e}"));
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let write_err = |source| CliError::Write {
            path: path.to_path_buf(),
            source,
        };
        let file = std::fs::File::create(path).map_err(write_err)?;
        self.write_to(std::io::BufWriter::new(file)).map_err(|e| write_err(e.into()))
    }

    pub fn read_from<R: Read>(input: R) -> Result<Self> {
        let bad = |msg: String| CliError::Trajectory(msg);
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers().map_err(|e| bad(e.to_string()))?.clone();
        if header.get(0) != Some("t") {
            return Err(bad("first column must be t".into()));
        }
        let labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut times = Vec::new();
        let mut states = Vec::new();
        for (k, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            let values = rec
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| bad(format!("row {}: {e}", k + 1)))?;
            times.push(values[0]);
            states.push(values[1..].to_vec());
        }
        if times.is_empty() {
            return Err(bad("no data rows".into()));
        }
        Ok(Self { labels, times, states })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::read_from(std::io::BufReader::new(file))
    }
}
