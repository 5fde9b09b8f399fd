use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::ExperimentError;

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Bumped whenever a CSV column changes.
pub const MANIFEST_SCHEMA: u32 = 1;

/// Wall-clock information; the only part of a manifest that varies
/// between identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub started_at_unix_s: u64,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub experiment: String,
    pub code_version: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub outputs: Vec<String>,
    pub rows: usize,
    pub timing: Timing,
}

pub fn write_csv<T: Serialize, W: Write>(out: W, rows: &[T]) -> Result<(), ExperimentError> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes `<name>.csv` and `<name>.manifest.json` into `dir`, returning
/// the manifest path. `extra_outputs` lists other files the caller wrote
/// alongside.
pub fn write_experiment<T: Serialize, C: Serialize>(
    dir: &Path,
    name: &str,
    rows: &[T],
    config: &C,
    seed: u64,
    started: (SystemTime, Instant),
    extra_outputs: &[&str],
) -> Result<PathBuf, ExperimentError> {
    fs::create_dir_all(dir)?;
    let csv_name = format!("{name}.csv");
    let mut file = BufWriter::new(File::create(dir.join(&csv_name))?);
    write_csv(&mut file, rows)?;
    file.flush()?;

    let manifest = Manifest {
        schema_version: MANIFEST_SCHEMA,
        experiment: name.to_string(),
        code_version: CODE_VERSION.to_string(),
        seed,
        config: serde_json::to_value(config)?,
        outputs: std::iter::once(csv_name).chain(extra_outputs.iter().map(|s| s.to_string())).collect(),
        rows: rows.len(),
        timing: Timing {
            started_at_unix_s: started.0.duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            wall_time_s: started.1.elapsed().as_secs_f64(),
        },
    };
    let path = dir.join(format!("{name}.manifest.json"));
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        r: u64,
        value: Option<f64>,
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        let rows = [Row { r: 2, value: Some(0.5) }, Row { r: 4, value: None }];
        write_csv(&mut buf, &rows).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "r,value\n2,0.5\n4,\n");
    }
}
