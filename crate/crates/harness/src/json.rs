//! JSON forms of algebra data.
//!
//! A complex matrix is `{"re": [[...]], "im": [[...]]}` with `im` optional.
//! An algebra element is either a list of such matrices (one per block), a
//! real number `t` (meaning `t·1`), or `{"re": t, "im": s}` (meaning `(t+is)·1`).

use cstar_frames::{AlgebraElement, AlgebraShape, CMatrix, ModuleOperator, ModuleVector, C64};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementJson {
    Real(f64),
    Complex { re: f64, im: f64 },
    Blocks(Vec<MatrixJson>),
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let rows = |f: fn(&C64) -> f64| {
            (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| f(&m[(r, c)])).collect())
                .collect()
        };
        Self {
            re: rows(|z| z.re),
            im: Some(rows(|z| z.im)),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix, String> {
        let n = self.re.len();
        let cols = self.re.first().map_or(0, Vec::len);
        if self.re.iter().any(|r| r.len() != cols) {
            return Err("ragged `re` rows".into());
        }
        if let Some(im) = &self.im {
            if im.len() != n || im.iter().any(|r| r.len() != cols) {
                return Err("`im` shape differs from `re`".into());
            }
        }
        Ok(CMatrix::from_fn(n, cols, |r, c| {
            C64::new(
                self.re[r][c],
                self.im.as_ref().map_or(0.0, |im| im[r][c]),
            )
        }))
    }
}

impl ElementJson {
    pub fn from_element(a: &AlgebraElement) -> Self {
        ElementJson::Blocks(a.blocks().iter().map(MatrixJson::from_matrix).collect())
    }

    pub fn to_element(&self, shape: &AlgebraShape) -> Result<AlgebraElement, String> {
        match self {
            ElementJson::Real(t) => Ok(AlgebraElement::scalar(shape, C64::new(*t, 0.0))),
            ElementJson::Complex { re, im } => Ok(AlgebraElement::scalar(shape, C64::new(*re, *im))),
            ElementJson::Blocks(blocks) => {
                let mats = blocks
                    .iter()
                    .map(MatrixJson::to_matrix)
                    .collect::<Result<Vec<_>, _>>()?;
                AlgebraElement::from_blocks(shape, mats).map_err(|e| e.to_string())
            }
        }
    }
}

pub fn vector_to_json(v: &ModuleVector) -> Vec<ElementJson> {
    v.coords().iter().map(ElementJson::from_element).collect()
}

pub fn vector_from_json(shape: &AlgebraShape, coords: &[ElementJson]) -> Result<ModuleVector, String> {
    let coords = coords
        .iter()
        .map(|c| c.to_element(shape))
        .collect::<Result<Vec<_>, _>>()?;
    ModuleVector::new(shape, coords).map_err(|e| e.to_string())
}

/// Rows indexed by the codomain coordinate `j`, columns by the domain coordinate `i`.
pub fn operator_to_json(t: &ModuleOperator) -> Vec<Vec<ElementJson>> {
    (0..t.codomain_rank())
        .map(|j| {
            (0..t.domain_rank())
                .map(|i| ElementJson::from_element(t.entry(j, i)))
                .collect()
        })
        .collect()
}

pub fn operator_from_json(shape: &AlgebraShape, rows: &[Vec<ElementJson>]) -> Result<ModuleOperator, String> {
    let codomain = rows.len();
    let domain = rows.first().map_or(0, Vec::len);
    if codomain == 0 || domain == 0 {
        return Err("operator needs at least one entry".into());
    }
    if rows.iter().any(|r| r.len() != domain) {
        return Err("ragged operator rows".into());
    }
    let entries = rows
        .iter()
        .flatten()
        .map(|e| e.to_element(shape))
        .collect::<Result<Vec<_>, _>>()?;
    ModuleOperator::from_entries(shape, domain, codomain, entries).map_err(|e| e.to_string())
}
