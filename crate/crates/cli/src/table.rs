//! Deterministic sweep tables: CSV with `#`-prefixed metadata, 17 significant
//! digits per value, and atomic file writes.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;

/// Full-precision rendering: 17 significant digits reproduce any f64 exactly.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Rendered as `# key: value` lines ahead of the header.
    pub metadata: Vec<(String, String)>,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.metadata {
            out.push_str(&format!("# {key}: {value}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.columns.len());
            let mut first = true;
            for &value in row {
                if !first {
                    out.push(',');
                }
                out.push_str(&fmt_f64(value));
                first = false;
            }
            out.push('\n');
        }
        out
    }

    pub fn write_atomic(&self, path: &Path) -> anyhow::Result<()> {
        write_atomic(path, self.to_csv().as_bytes())
    }
}

/// Writes through a sibling temp file and renames, so a failed run never
/// leaves a partial file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let tmp = path.with_extension(match path.extension() {
        Some(ext) => format!("{}.tmp", ext.to_string_lossy()),
        None => "tmp".to_string(),
    });
    {
        let mut file =
            fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        file.write_all(bytes)
            .with_context(|| format!("writing {}", tmp.display()))?;
        file.sync_all().ok();
    }
    fs::rename(&tmp, path)
        .with_context(|| format!("renaming {} to {}", tmp.display(), path.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_is_lossless_and_fixed_width() {
        for value in [0.1, 1.0 / 3.0, 5.5e-11, 1e300, -0.25] {
            let text = fmt_f64(value);
            assert_eq!(text.parse::<f64>().unwrap(), value);
        }
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_layout() {
        let table = SweepTable {
            columns: vec!["a".into(), "b".into()],
            rows: vec![vec![1.0, 2.0]],
            metadata: vec![("figure".into(), "demo".into())],
        };
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("# figure: demo"));
        assert_eq!(lines.next(), Some("a,b"));
        assert_eq!(
            lines.next(),
            Some("1.0000000000000000e0,2.0000000000000000e0")
        );
    }
}
