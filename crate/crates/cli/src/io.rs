//! Matrix and vector files.
//!
//! Matrices are `{"n": 2, "rows": [[1, 0], [0, 2]]}`; vectors are either a
//! bare array or `{"components": [...]}`. Vectors are normalized on load.

use std::fs;
use std::path::Path;

use kaudit_core::{Error, HermitianMatrix, UnitVector};
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub enum LoadError {
    Io(std::io::Error),
    Json(serde_json::Error),
    Invalid(Error),
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Io(e) => write!(f, "{e}"),
            LoadError::Json(e) => write!(f, "malformed JSON: {e}"),
            LoadError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LoadError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub rows: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(a: &HermitianMatrix) -> Self {
        Self { n: a.order(), rows: a.to_rows() }
    }

    pub fn into_matrix(self) -> Result<HermitianMatrix, Error> {
        if self.rows.len() != self.n {
            return Err(Error::Dimension(format!("declared n = {} but {} rows given", self.n, self.rows.len())));
        }
        HermitianMatrix::from_rows(&self.rows)
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum VectorFile {
    Bare(Vec<f64>),
    Wrapped { components: Vec<f64> },
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(LoadError::Io)
}

pub fn parse_matrix(text: &str) -> Result<HermitianMatrix, LoadError> {
    let file: MatrixFile = serde_json::from_str(text).map_err(LoadError::Json)?;
    file.into_matrix().map_err(LoadError::Invalid)
}

pub fn parse_vector(text: &str) -> Result<UnitVector, LoadError> {
    let components = match serde_json::from_str(text).map_err(LoadError::Json)? {
        VectorFile::Bare(v) => v,
        VectorFile::Wrapped { components } => components,
    };
    UnitVector::normalize(components).map_err(LoadError::Invalid)
}

pub fn load_matrix(path: &Path) -> Result<HermitianMatrix, LoadError> {
    parse_matrix(&read(path)?)
}

pub fn load_vector(path: &Path) -> Result<UnitVector, LoadError> {
    parse_vector(&read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrices() {
        let a = parse_matrix(r#"{"n": 2, "rows": [[1, 0.5], [0.5, 2]]}"#).unwrap();
        assert_eq!(a.get(0, 1), 0.5);
        assert!(matches!(parse_matrix(r#"{"n": 3, "rows": [[1, 0], [0, 2]]}"#), Err(LoadError::Invalid(_))));
        assert!(matches!(parse_matrix(r#"{"n": 2, "rows": [[1, 1], [0, 2]]}"#), Err(LoadError::Invalid(_))));
        assert!(matches!(parse_matrix("[1, 2"), Err(LoadError::Json(_))));
        let round = MatrixFile::from_matrix(&a);
        assert_eq!(round.into_matrix().unwrap(), a);
    }

    #[test]
    fn vectors() {
        let x = parse_vector("[3, 4]").unwrap();
        assert!((x.as_slice()[0] - 0.6).abs() < 1e-15 && (x.as_slice()[1] - 0.8).abs() < 1e-15);
        let y = parse_vector(r#"{"components": [0, 2]}"#).unwrap();
        assert_eq!(y.as_slice(), &[0.0, 1.0]);
        assert!(parse_vector("[0, 0]").is_err());
    }
}
