//! CSV rendering and atomic bundle output.
//!
//! Floats are written with Rust's shortest round-trip formatting, so identical
//! inputs give byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{FreqGrid, SpectrumGrid, TimeGrid};
use crate::temporal::InterferencePattern;

/// Plain decimal for moderate magnitudes, exponent form for tiny or huge ones.
fn push_f64(out: &mut String, v: f64) {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        let _ = write!(out, "{v}");
    } else {
        let _ = write!(out, "{v:e}");
    }
}

/// Header line plus one row per record.
pub fn table_csv(headers: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = headers.join(",");
    out.push('\n');
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                out.push(',');
            }
            first = false;
            push_f64(&mut out, v);
        }
        out.push('\n');
    }
    out
}

pub fn time_grid_csv(grid: &TimeGrid) -> String {
    let rows = (0..grid.t_plus.len).flat_map(|i| {
        (0..grid.t_minus.len).map(move |j| {
            let v = grid.values[[i, j]];
            vec![grid.t_plus.value(i), grid.t_minus.value(j), v.re, v.im]
        })
    });
    table_csv(&["t_plus_fs", "t_minus_fs", "re", "im"], rows)
}

pub fn freq_grid_csv(grid: &FreqGrid) -> String {
    let rows = (0..grid.omega_e.len).flat_map(|i| {
        (0..grid.omega_o.len).map(move |j| {
            let v = grid.values[[i, j]];
            vec![grid.omega_e.value(i), grid.omega_o.value(j), v.re, v.im]
        })
    });
    table_csv(&["omega_e", "omega_o", "re", "im"], rows)
}

pub fn spectrum_csv(grid: &SpectrumGrid) -> String {
    let rows = (0..grid.omega_e.len).flat_map(|i| {
        (0..grid.omega_o.len).map(move |j| vec![grid.omega_e.value(i), grid.omega_o.value(j), grid.values[[i, j]]])
    });
    table_csv(&["omega_e", "omega_o", "s"], rows)
}

pub fn pattern_csv(pattern: &InterferencePattern) -> String {
    let rows = pattern.taus.iter().zip(&pattern.rates).map(|(t, r)| vec![*t, *r]);
    table_csv(&["tau_fs", "rate"], rows)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Named files written together: all of them appear, or none do.
#[derive(Debug, Default, Clone)]
pub struct Bundle {
    files: Vec<(String, String)>,
}

impl Bundle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: impl Into<String>, contents: impl Into<String>) -> &mut Self {
        self.files.push((name.into(), contents.into()));
        self
    }

    pub fn add_json<T: Serialize>(&mut self, name: impl Into<String>, value: &T) -> Result<&mut Self> {
        let text = to_json(value)?;
        Ok(self.add(name, text))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(n, _)| n.as_str())
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_str())
    }

    /// Writes into a sibling temporary directory, then renames it over `dir`.
    pub fn write_atomic(&self, dir: &Path) -> Result<()> {
        let parent = match dir.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let leaf = dir
            .file_name()
            .ok_or_else(|| Error::InvalidParameter(format!("output path {} has no final component", dir.display())))?
            .to_string_lossy()
            .into_owned();
        fs::create_dir_all(&parent)?;
        let tmp = parent.join(format!(".{leaf}.tmp-{}", std::process::id()));
        if tmp.exists() {
            fs::remove_dir_all(&tmp)?;
        }
        let staged = (|| -> Result<()> {
            fs::create_dir(&tmp)?;
            for (name, contents) in &self.files {
                fs::write(tmp.join(name), contents)?;
            }
            if dir.exists() {
                fs::remove_dir_all(dir)?;
            }
            fs::rename(&tmp, dir)?;
            Ok(())
        })();
        if staged.is_err() {
            let _ = fs::remove_dir_all(&tmp);
        }
        staged
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_formatting_is_shortest_roundtrip() {
        let s = table_csv(&["a", "b"], vec![vec![0.1, -2.0], vec![1e-20, 3.5]]);
        assert_eq!(s, "a,b\n0.1,-2\n1e-20,3.5\n");
    }

    #[test]
    fn bundle_replaces_directory_atomically() {
        let root = tempfile::tempdir().unwrap();
        let dir = root.path().join("run");
        let mut b = Bundle::new();
        b.add("grid.csv", "x\n1\n").add("meta.json", "{}\n");
        b.write_atomic(&dir).unwrap();
        assert_eq!(fs::read_to_string(dir.join("grid.csv")).unwrap(), "x\n1\n");
        let mut b2 = Bundle::new();
        b2.add("report.json", "{}\n");
        b2.write_atomic(&dir).unwrap();
        assert!(!dir.join("grid.csv").exists());
        assert!(dir.join("report.json").exists());
        let leftovers: Vec<_> = fs::read_dir(root.path()).unwrap().collect();
        assert_eq!(leftovers.len(), 1);
    }
}
