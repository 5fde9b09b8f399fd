//! Flat run configuration shared by every subcommand.
//!
//! A config file is TOML with top-level keys only:
//!
//! ```toml
//! N = 18923            # or a list for success-rate: N = [143, 323]
//! a = [5, 7]           # explicit bases
//! r = [36, 1036]       # one random base per order
//! t = 31               # step count override (plateau: largest t)
//! t_min = 2            # plateau sweep floor
//! reps = 2000
//! samples_per_r = 10
//! coprimes_per_r = 100
//! seed = 7
//! out = "results"
//! trace = true
//! exact_sre = true
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(u64),
    Many(Vec<u64>),
}

fn one_or_many<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<u64>, D::Error> {
    Ok(match Option::<OneOrMany>::deserialize(d)? {
        None => Vec::new(),
        Some(OneOrMany::One(v)) => vec![v],
        Some(OneOrMany::Many(v)) => v,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(rename = "N", default, deserialize_with = "one_or_many")]
    pub moduli: Vec<u64>,
    #[serde(default, deserialize_with = "one_or_many")]
    pub a: Vec<u64>,
    #[serde(default, deserialize_with = "one_or_many")]
    pub r: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_min: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reps: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples_per_r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coprimes_per_r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_sre: Option<bool>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    /// Fields set in `flags` replace those of `self`.
    pub fn overridden_by(mut self, flags: RunConfig) -> Self {
        macro_rules! take {
            ($($field:ident),*) => {$(
                if flags.$field.is_some() {
                    self.$field = flags.$field;
                }
            )*};
        }
        macro_rules! take_list {
            ($($field:ident),*) => {$(
                if !flags.$field.is_empty() {
                    self.$field = flags.$field;
                }
            )*};
        }
        take!(command, t, t_min, reps, samples_per_r, coprimes_per_r, seed, out, trace, exact_sre);
        take_list!(moduli, a, r);
        self
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("results"))
    }

    pub fn single_modulus(&self) -> Result<u64, String> {
        match self.moduli.as_slice() {
            [n] => Ok(*n),
            [] => Err("N is required".into()),
            _ => Err("this command takes a single N".into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_or_list() {
        let c: RunConfig = toml::from_str("N = 15\nr = [2, 4]\nseed = 3").unwrap();
        assert_eq!(c.moduli, vec![15]);
        assert_eq!(c.r, vec![2, 4]);
        let c: RunConfig = toml::from_str("N = [143, 323]").unwrap();
        assert_eq!(c.moduli, vec![143, 323]);
        assert!(toml::from_str::<RunConfig>("bogus = 1").is_err());
    }

    #[test]
    fn flags_win() {
        let file: RunConfig = toml::from_str("N = 15\nreps = 10\nseed = 1").unwrap();
        let flags = RunConfig { seed: Some(9), ..Default::default() };
        let merged = file.overridden_by(flags);
        assert_eq!((merged.seed(), merged.reps, merged.moduli.clone()), (9, Some(10), vec![15]));
    }

    #[test]
    fn json_round_trip() {
        let c = RunConfig {
            command: Some("plateau".into()),
            moduli: vec![18923],
            r: vec![36],
            reps: Some(20),
            trace: Some(false),
            ..Default::default()
        };
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(serde_json::from_value::<RunConfig>(json).unwrap(), c);
    }
}
