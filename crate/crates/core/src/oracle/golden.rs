//! Versioned golden records produced by the finite-difference oracle.
//!
//! Regenerate with `cargo run --release -p ptsusy-core --example regenerate_goldens`;
//! never edit the JSON by hand.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const GOLDEN_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenFile {
    pub version: u32,
    pub records: Vec<GoldenRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GoldenKind {
    /// Eigenvalues of `V^(+)`.
    VplusSpectrum,
    /// Eigenvalues of `V^(-) - D_0`.
    VminusSpectrum,
    /// Coupling at which the lowest pair leaves the real axis.
    CriticalCoupling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenRecord {
    pub kind: GoldenKind,
    #[serde(rename = "L")]
    pub box_half_width: f64,
    #[serde(rename = "l")]
    pub well_half_width: f64,
    #[serde(rename = "g", default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<f64>,
    /// Grid sizes used, coarse first.
    #[serde(rename = "N")]
    pub grid_points: Vec<usize>,
    pub extrapolated: bool,
    /// `[re, im]` pairs, sorted by real part.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eigenvalues: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub error_estimates: Vec<f64>,
    #[serde(rename = "g_c", default, skip_serializing_if = "Option::is_none")]
    pub critical_coupling: Option<f64>,
    /// Per-grid critical couplings, same order as `N`.
    #[serde(rename = "g_c_per_grid", default, skip_serializing_if = "Vec::is_empty")]
    pub critical_coupling_per_grid: Vec<f64>,
}

impl GoldenRecord {
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.eigenvalues.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
    }

    fn matches(&self, kind: GoldenKind, big_l: f64, l: f64, g: Option<f64>) -> bool {
        self.kind == kind && self.box_half_width == big_l && self.well_half_width == l && self.coupling == g
    }
}

impl GoldenFile {
    pub fn new(records: Vec<GoldenRecord>) -> Self {
        GoldenFile {
            version: GOLDEN_VERSION,
            records,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: GoldenFile = serde_json::from_str(text).map_err(|e| Error::Golden(e.to_string()))?;
        if file.version != GOLDEN_VERSION {
            return Err(Error::Golden(format!(
                "unsupported version {} (expected {GOLDEN_VERSION})",
                file.version
            )));
        }
        Ok(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("golden records serialize");
        s.push('\n');
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn find(&self, kind: GoldenKind, big_l: f64, l: f64, g: Option<f64>) -> Option<&GoldenRecord> {
        self.records.iter().find(|r| r.matches(kind, big_l, l, g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_lookup() {
        let rec = GoldenRecord {
            kind: GoldenKind::CriticalCoupling,
            box_half_width: 1.0,
            well_half_width: 0.5,
            coupling: None,
            grid_points: vec![1000, 2000],
            extrapolated: true,
            eigenvalues: vec![],
            error_estimates: vec![],
            critical_coupling: Some(6.4),
            critical_coupling_per_grid: vec![6.39, 6.399],
        };
        let file = GoldenFile::new(vec![rec.clone()]);
        let back = GoldenFile::parse(&file.to_json()).unwrap();
        assert_eq!(back, file);
        assert!(back.find(GoldenKind::CriticalCoupling, 1.0, 0.5, None).is_some());
        assert!(back.find(GoldenKind::VplusSpectrum, 1.0, 0.5, None).is_none());
        let bad = file.to_json().replace("\"version\": 1", "\"version\": 99");
        assert!(GoldenFile::parse(&bad).is_err());
    }
}
