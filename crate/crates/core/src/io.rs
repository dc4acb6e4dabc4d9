//! Chain files.
//!
//! JSON: `{"states": ["s1", ...], "P": [[...], ...], "r": [...]}` where
//! `states` and `r` are optional.
//!
//! CSV: `N` rows of `N` comma-separated probabilities. A first line
//! `# rewards` declares an extra last column holding the reward of each row.
//! Other `#` lines are comments.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Chain, Error, Mrp, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<String>>,
    #[serde(rename = "P")]
    pub p: Vec<Vec<f64>>,
    #[serde(default, rename = "r", skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<f64>>,
}

/// A validated chain with its optional reward.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub chain: Chain,
    pub reward: Option<Vec<f64>>,
}

impl Loaded {
    /// Reward process using the file's reward, or `default` if it has none.
    pub fn mrp_or(&self, default: impl FnOnce(usize) -> Vec<f64>) -> Result<Mrp> {
        let r = self
            .reward
            .clone()
            .unwrap_or_else(|| default(self.chain.n()));
        Mrp::new(self.chain.clone(), r)
    }
}

impl ChainFile {
    pub fn into_loaded(self) -> Result<Loaded> {
        let mut chain = Chain::new(self.p)?;
        if let Some(labels) = self.states {
            chain = chain.with_labels(labels)?;
        }
        if let Some(r) = &self.r {
            if r.len() != chain.n() {
                return Err(Error::DimensionMismatch {
                    expected: chain.n(),
                    found: r.len(),
                });
            }
        }
        Ok(Loaded {
            chain,
            reward: self.r,
        })
    }

    pub fn from_chain(chain: &Chain, reward: Option<&[f64]>) -> Self {
        Self {
            states: chain.labels().map(<[String]>::to_vec),
            p: chain.transition().to_rows(),
            r: reward.map(<[f64]>::to_vec),
        }
    }
}

pub fn parse_json(text: &str) -> Result<Loaded> {
    serde_json::from_str::<ChainFile>(text)
        .map_err(|e| Error::Parse(e.to_string()))?
        .into_loaded()
}

pub fn parse_csv(text: &str) -> Result<Loaded> {
    let with_rewards = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .and_then(|l| l.trim().strip_prefix('#'))
        .is_some_and(|flags| {
            flags
                .split(|c: char| c.is_whitespace() || c == ',')
                .any(|f| f == "rewards")
        });

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: {f:?}: {e}", line + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    let reward = if with_rewards {
        let mut r = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter_mut().enumerate() {
            r.push(
                row.pop()
                    .ok_or_else(|| Error::Parse(format!("row {} is empty", i + 1)))?,
            );
        }
        Some(r)
    } else {
        None
    };
    Ok(Loaded {
        chain: Chain::new(rows)?,
        reward,
    })
}

/// Loads by extension (`.json`, `.csv`); other files are sniffed.
pub fn load(path: impl AsRef<Path>) -> Result<Loaded> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(e.to_string()))?;
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .as_deref()
    {
        Some("json") => parse_json(&text),
        Some("csv") => parse_csv(&text),
        _ if text.trim_start().starts_with('{') => parse_json(&text),
        _ => parse_csv(&text),
    }
}
