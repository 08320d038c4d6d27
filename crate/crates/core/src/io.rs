//! File formats: operator JSON and script JSON.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Octo, DIM};
use crate::maps::{steps_from_json, steps_to_json, MapError, ScriptStep, StepJson};
use crate::operator::LinMap;
use crate::scalar::{FieldSpec, Prime, Scalar, ScalarError};

pub const CONVENTION: &str = "columns-are-images";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported convention {0:?}, expected \"{CONVENTION}\"")]
    Convention(String),
    #[error("unknown field {0:?}, expected \"Q\" or {{\"p\": prime}}")]
    UnknownField(String),
    #[error("matrix must be 8x8, got {0}")]
    Shape(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// `"Q"` or `{"p": 5}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldJson {
    Name(String),
    Prime { p: u64 },
}

impl FieldJson {
    pub fn from_field(f: FieldSpec) -> Self {
        match f {
            FieldSpec::Rationals => FieldJson::Name("Q".into()),
            FieldSpec::Prime(p) => FieldJson::Prime { p: p.get() as u64 },
        }
    }

    pub fn to_field(&self) -> Result<FieldSpec, IoError> {
        match self {
            FieldJson::Name(s) if s == "Q" => Ok(FieldSpec::Rationals),
            FieldJson::Name(s) => Err(IoError::UnknownField(s.clone())),
            FieldJson::Prime { p } => Ok(FieldSpec::Prime(Prime::new(*p)?)),
        }
    }
}

/// On-disk operator. `matrix[r][j]` is the coefficient of `e_r` in `R(e_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub field: FieldJson,
    pub matrix: Vec<Vec<String>>,
    pub convention: String,
}

impl OperatorFile {
    pub fn from_linmap(r: &LinMap) -> Self {
        let matrix = (0..DIM)
            .map(|row| (0..DIM).map(|col| r.entry(row, col).to_string()).collect())
            .collect();
        OperatorFile {
            field: FieldJson::from_field(r.field()),
            matrix,
            convention: CONVENTION.into(),
        }
    }

    pub fn to_linmap(&self) -> Result<LinMap, IoError> {
        if self.convention != CONVENTION {
            return Err(IoError::Convention(self.convention.clone()));
        }
        let field = self.field.to_field()?;
        if self.matrix.len() != DIM || self.matrix.iter().any(|r| r.len() != DIM) {
            let shape: Vec<usize> = self.matrix.iter().map(Vec::len).collect();
            return Err(IoError::Shape(format!("{} rows {:?}", self.matrix.len(), shape)));
        }
        let mut cols = Vec::with_capacity(DIM);
        for j in 0..DIM {
            let coords = (0..DIM)
                .map(|i| Scalar::parse(field, self.matrix[i][j].trim()))
                .collect::<Result<Vec<_>, _>>()?;
            cols.push(Octo::from_coords(field, coords).expect("eight coordinates"));
        }
        Ok(LinMap::from_columns(field, cols).expect("eight columns"))
    }
}

pub fn operator_to_json(r: &LinMap) -> String {
    serde_json::to_string_pretty(&OperatorFile::from_linmap(r)).expect("serializable")
}

pub fn operator_from_json(text: &str) -> Result<LinMap, IoError> {
    serde_json::from_str::<OperatorFile>(text)?.to_linmap()
}

pub fn script_to_json(steps: &[ScriptStep]) -> String {
    serde_json::to_string_pretty(&steps_to_json(steps)).expect("serializable")
}

pub fn script_from_json(field: FieldSpec, text: &str) -> Result<Vec<ScriptStep>, IoError> {
    let raw: Vec<StepJson> = serde_json::from_str(text)?;
    Ok(steps_from_json(field, &raw)?)
}
