//! On-disk JSON schemas: channel inputs, region outputs, network-coding
//! reports. All exact values; rationals travel as `"a/b"` strings.

use serde::{Deserialize, Serialize};

use detic::region::{Inequality, RateRegion};
use detic::{ChannelQuadruple, FieldSpec, Matrix, MinCuts, Scalar};

use crate::CliError;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FieldRepr {
    Prime { p: u64 },
    Rational,
}

impl FieldRepr {
    pub fn to_field(self) -> Result<FieldSpec, CliError> {
        match self {
            FieldRepr::Rational => Ok(FieldSpec::Rational),
            FieldRepr::Prime { p } => {
                FieldSpec::prime(p).map_err(|e| CliError::input(format!("bad field: {e}")))
            }
        }
    }
}

/// A matrix entry: a plain integer or an `"a/b"` string.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryRepr {
    Int(i64),
    Text(String),
}

impl EntryRepr {
    fn to_scalar(&self, field: FieldSpec) -> Result<Scalar, CliError> {
        let res = match self {
            EntryRepr::Int(v) => Ok(field.from_i64(*v)),
            EntryRepr::Text(s) => field.parse_scalar(s),
        };
        res.map_err(|e| CliError::input(format!("bad entry: {e}")))
    }
}

/// The channel input file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelFile {
    pub field: FieldRepr,
    pub m1: usize,
    pub m2: usize,
    pub n1: usize,
    pub n2: usize,
    #[serde(rename = "H11")]
    pub h11: Vec<Vec<EntryRepr>>,
    #[serde(rename = "H12")]
    pub h12: Vec<Vec<EntryRepr>>,
    #[serde(rename = "H21")]
    pub h21: Vec<Vec<EntryRepr>>,
    #[serde(rename = "H22")]
    pub h22: Vec<Vec<EntryRepr>>,
}

impl ChannelFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::input(format!("malformed channel file: {e}")))
    }

    fn block(
        &self,
        rows: &[Vec<EntryRepr>],
        want_rows: usize,
        want_cols: usize,
        name: &str,
        field: FieldSpec,
    ) -> Result<Matrix, CliError> {
        if rows.len() != want_rows || rows.iter().any(|r| r.len() != want_cols) {
            return Err(CliError::input(format!(
                "{name} must be {want_rows}x{want_cols}"
            )));
        }
        let mut data = Vec::with_capacity(want_rows * want_cols);
        for row in rows {
            for e in row {
                data.push(e.to_scalar(field)?);
            }
        }
        Matrix::new(field, want_rows, want_cols, data)
            .map_err(|e| CliError::input(e.to_string()))
    }

    pub fn to_channel(&self) -> Result<ChannelQuadruple, CliError> {
        let field = self.field.to_field()?;
        let h11 = self.block(&self.h11, self.n1, self.m1, "H11", field)?;
        let h12 = self.block(&self.h12, self.n1, self.m2, "H12", field)?;
        let h21 = self.block(&self.h21, self.n2, self.m1, "H21", field)?;
        let h22 = self.block(&self.h22, self.n2, self.m2, "H22", field)?;
        ChannelQuadruple::new(h11, h12, h21, h22).map_err(|e| CliError::input(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InequalityRepr {
    pub a1: i64,
    pub a2: i64,
    pub b: i64,
}

impl From<&Inequality> for InequalityRepr {
    fn from(i: &Inequality) -> Self {
        InequalityRepr {
            a1: i.a1,
            a2: i.a2,
            b: i.b,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Provenance {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub input_hash: String,
}

/// Region output: the minimal inequality listing plus exact vertices,
/// counterclockwise from the origin.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegionFile {
    pub inequalities: Vec<InequalityRepr>,
    pub vertices: Vec<[String; 2]>,
    pub provenance: Provenance,
}

pub fn vertices_repr(region: &RateRegion) -> Vec<[String; 2]> {
    region
        .vertices()
        .into_iter()
        .map(|v| [v.r1.to_string(), v.r2.to_string()])
        .collect()
}

impl RegionFile {
    pub fn from_region(region: &RateRegion, provenance: Provenance) -> Self {
        RegionFile {
            inequalities: region.inequalities().iter().map(Into::into).collect(),
            vertices: vertices_repr(region),
            provenance,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CutsRepr {
    pub s1_t1: usize,
    pub s1_t2: usize,
    pub s2_t1: usize,
    pub s2_t2: usize,
    pub s1_both: usize,
    pub s2_both: usize,
    pub both_t1: usize,
    pub both_t2: usize,
}

impl From<&MinCuts> for CutsRepr {
    fn from(c: &MinCuts) -> Self {
        CutsRepr {
            s1_t1: c.s1_t1,
            s1_t2: c.s1_t2,
            s2_t1: c.s2_t1,
            s2_t2: c.s2_t2,
            s1_both: c.s1_both,
            s2_both: c.s2_both,
            both_t1: c.both_t1,
            both_t2: c.both_t2,
        }
    }
}

/// Baseline comparison block of the netcode report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparisonRepr {
    pub baselines_contained: bool,
    pub precoding_hull: Vec<InequalityRepr>,
    pub rate_exchange_hull: Vec<InequalityRepr>,
    /// A vertex of the realized region outside the respective hull, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict_beyond_precoding: Option<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict_beyond_rate_exchange: Option<[String; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NetcodeFile {
    pub cuts: CutsRepr,
    pub attempts: u32,
    pub inequalities: Vec<InequalityRepr>,
    pub vertices: Vec<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ComparisonRepr>,
    pub provenance: Provenance,
}
