use std::io::Write;

use super::simulate::NormRecord;
use crate::{Result, Scalar};

/// Writes `t,mass,linf,besov_critical,gevrey_norm,tail_fraction`.
pub fn write_trajectory_csv<T: Scalar, W: Write>(records: &[NormRecord<T>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "mass", "linf", "besov_critical", "gevrey_norm", "tail_fraction"])?;
    for r in records {
        w.write_record([
            r.t.to_string(),
            r.mass.to_string(),
            r.linf.to_string(),
            r.besov_critical.to_string(),
            r.gevrey_norm.to_string(),
            r.tail_fraction.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Version string recorded in run metadata.
pub fn version_string() -> String {
    format!("fracks {}", env!("CARGO_PKG_VERSION"))
}

/// Sidecar text describing how a run was produced.
#[derive(Clone, Debug, PartialEq)]
pub struct RunMetadata {
    pub study: String,
    pub seed: u64,
    pub version: String,
    /// The resolved configuration, verbatim.
    pub config_echo: String,
    /// Free-form `key = value` notes such as the outcome status.
    pub notes: Vec<(String, String)>,
}

impl RunMetadata {
    pub fn new(study: &str, seed: u64, config_echo: &str) -> Self {
        Self {
            study: study.to_string(),
            seed,
            version: version_string(),
            config_echo: config_echo.to_string(),
            notes: Vec::new(),
        }
    }

    pub fn note(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.notes.push((key.to_string(), value.to_string()));
        self
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("study: {}\nseed: {}\nversion: {}\n", self.study, self.seed, self.version));
        for (k, v) in &self.notes {
            s.push_str(&format!("{k}: {v}\n"));
        }
        s.push_str("--- resolved config ---\n");
        s.push_str(&self.config_echo);
        if !self.config_echo.ends_with('\n') {
            s.push('\n');
        }
        s
    }

    pub fn write(&self, out: &mut impl Write) -> Result<()> {
        out.write_all(self.to_text().as_bytes())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trajectory_header() {
        let rec = NormRecord { t: 0.5, mass: 1.0, linf: 2.0, besov_critical: 3.0, gevrey_norm: 4.0, tail_fraction: 0.25 };
        let mut buf = Vec::new();
        write_trajectory_csv(&[rec], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "t,mass,linf,besov_critical,gevrey_norm,tail_fraction\n0.5,1,2,3,4,0.25\n"
        );
    }

    #[test]
    fn metadata_lists_seed_and_config() {
        let mut m = RunMetadata::new("simulate", 42, "[grid]\nn = 64");
        m.note("status", "completed");
        let text = m.to_text();
        assert!(text.contains("seed: 42\n"));
        assert!(text.contains("status: completed\n"));
        assert!(text.ends_with("[grid]\nn = 64\n"));
    }
}
