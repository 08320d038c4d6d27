//! Linear endomorphisms of `O` and the weight-zero Rota-Baxter identity.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{self, pretty, rows_of, Octo, BASIS_NAMES, DIM};
use crate::linalg;
use crate::scalar::{FieldSpec, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("map is singular")]
    Singular,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("column {0} has the wrong field or length")]
    BadColumn(usize),
}

/// An 8x8 matrix over one field. Column `j` is the image of basis element `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinMap {
    field: FieldSpec,
    cols: Vec<Octo>,
}

/// A failing pair for the Rota-Baxter identity `R(x)R(y) = R(R(x)y + xR(y))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RbWitness {
    pub i: usize,
    pub j: usize,
    pub lhs: Octo,
    pub rhs: Octo,
}

impl fmt::Display for RbWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pair ({}, {}): R(x)R(y) = {}, R(R(x)y + xR(y)) = {}",
            BASIS_NAMES[self.i],
            BASIS_NAMES[self.j],
            pretty(&self.lhs),
            pretty(&self.rhs)
        )
    }
}

/// Rank, canonical kernel basis and canonical image basis of a map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelImage {
    pub rank: usize,
    pub kernel: Vec<Octo>,
    pub image: Vec<Octo>,
}

/// Invariants of an operator under conjugation by (anti)automorphisms and
/// nonzero scaling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    /// dim Im R
    pub d1: usize,
    /// dim Im R^2
    pub d2: usize,
    /// dim Im R^3
    pub d3: usize,
    /// dim (Im R ∩ Ker R)
    pub k: usize,
    /// dim span((Im R)(Im R))
    pub img_square: usize,
    /// whether 1 ∈ Im R
    pub img_unital: bool,
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(d1={}, d2={}, d3={}, k={}, img_square={}, img_unital={})",
            self.d1, self.d2, self.d3, self.k, self.img_square, self.img_unital
        )
    }
}

impl LinMap {
    pub fn zero(field: FieldSpec) -> Self {
        LinMap {
            field,
            cols: vec![Octo::zero(field); DIM],
        }
    }

    pub fn identity(field: FieldSpec) -> Self {
        LinMap {
            field,
            cols: (0..DIM).map(|j| Octo::basis(field, j)).collect(),
        }
    }

    /// Build from the eight basis images.
    pub fn from_columns(field: FieldSpec, cols: Vec<Octo>) -> Result<Self, OperatorError> {
        if cols.len() != DIM {
            return Err(OperatorError::BadColumn(cols.len()));
        }
        if let Some(j) = cols.iter().position(|c| c.field() != field) {
            return Err(OperatorError::BadColumn(j));
        }
        Ok(LinMap { field, cols })
    }

    /// Zero map except for the listed basis images.
    pub fn from_images(field: FieldSpec, images: &[(usize, Octo)]) -> Self {
        let mut m = Self::zero(field);
        for (j, x) in images {
            m.cols[*j] = x.clone();
        }
        m
    }

    /// Entry `(row, col)`: coefficient of `e_row` in `R(e_col)`.
    pub fn entry(&self, row: usize, col: usize) -> &Scalar {
        self.cols[col].coord(row)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn column(&self, j: usize) -> &Octo {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[Octo] {
        &self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Octo::is_zero)
    }

    pub fn apply(&self, x: &Octo) -> Octo {
        let mut out = Octo::zero(self.field);
        for (j, c) in x.coords().iter().enumerate() {
            if !c.is_zero() {
                out = &out + &self.cols[j].scale(c);
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinMap) -> LinMap {
        LinMap {
            field: self.field,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn power(&self, k: u32) -> LinMap {
        (0..k).fold(LinMap::identity(self.field), |acc, _| acc.compose(self))
    }

    pub fn scale(&self, lam: &Scalar) -> LinMap {
        LinMap {
            field: self.field,
            cols: self.cols.iter().map(|c| c.scale(lam)).collect(),
        }
    }

    pub fn add(&self, other: &LinMap) -> LinMap {
        LinMap {
            field: self.field,
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a + b).collect(),
        }
    }

    /// Rows of the matrix (row `i` lists the `e_i` coefficients of all images).
    fn matrix_rows(&self) -> Vec<Vec<Scalar>> {
        (0..DIM)
            .map(|i| (0..DIM).map(|j| self.entry(i, j).clone()).collect())
            .collect()
    }

    fn from_matrix_rows(field: FieldSpec, rows: &[Vec<Scalar>]) -> LinMap {
        let cols = (0..DIM)
            .map(|j| {
                Octo::from_coords(field, (0..DIM).map(|i| rows[i][j].clone()).collect())
                    .expect("square matrix over one field")
            })
            .collect();
        LinMap { field, cols }
    }

    pub fn inverse(&self) -> Result<LinMap, OperatorError> {
        let inv = linalg::inverse(self.field, &self.matrix_rows()).ok_or(OperatorError::Singular)?;
        Ok(Self::from_matrix_rows(self.field, &inv))
    }

    pub fn rank(&self) -> usize {
        linalg::rank(rows_of(&self.cols), DIM)
    }

    /// Rank plus reduced-echelon bases of kernel and image.
    pub fn rank_kernel_image(&self) -> KernelImage {
        let (img_rows, _) = linalg::rref(rows_of(&self.cols), DIM);
        let kernel_rows = linalg::nullspace(self.field, self.matrix_rows(), DIM);
        let to_octo = |rows: Vec<Vec<Scalar>>| {
            rows.into_iter()
                .map(|r| Octo::from_coords(self.field, r).expect("coordinates share the field"))
                .collect::<Vec<_>>()
        };
        KernelImage {
            rank: img_rows.len(),
            kernel: to_octo(kernel_rows),
            image: to_octo(img_rows),
        }
    }

    /// Checks `R(e_i)R(e_j) = R(R(e_i)e_j + e_iR(e_j))` on all 64 basis pairs in
    /// row-major order and returns the first failure.
    pub fn check_rb(&self) -> Result<(), RbWitness> {
        let basis: Vec<Octo> = (0..DIM).map(|i| Octo::basis(self.field, i)).collect();
        for i in 0..DIM {
            for j in 0..DIM {
                let (ri, rj) = (&self.cols[i], &self.cols[j]);
                let lhs = ri.mul(rj);
                let rhs = self.apply(&(&ri.mul(&basis[j]) + &basis[i].mul(rj)));
                if lhs != rhs {
                    return Err(RbWitness { i, j, lhs, rhs });
                }
            }
        }
        Ok(())
    }

    pub fn is_rb(&self) -> bool {
        self.check_rb().is_ok()
    }

    /// `Im(R)·Ker(R) ⊆ Ker(R)` and `Ker(R)·Im(R) ⊆ Ker(R)`.
    pub fn bimodule_check(&self) -> bool {
        let ki = self.rank_kernel_image();
        ki.image.iter().all(|a| {
            ki.kernel.iter().all(|k| {
                self.apply(&a.mul(k)).is_zero() && self.apply(&k.mul(a)).is_zero()
            })
        })
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let ki = self.rank_kernel_image();
        let r2 = self.compose(self);
        let r3 = r2.compose(self);
        let img = rows_of(&ki.image);
        let ker = rows_of(&ki.kernel);
        let products: Vec<Vec<Scalar>> = ki
            .image
            .iter()
            .flat_map(|a| ki.image.iter().map(move |b| a.mul(b).coords().to_vec()))
            .collect();
        Fingerprint {
            d1: ki.rank,
            d2: r2.rank(),
            d3: r3.rank(),
            k: linalg::intersection_dim(&img, &ker, DIM),
            img_square: linalg::rank(products, DIM),
            img_unital: linalg::in_span(&img, Octo::one(self.field).coords(), DIM),
        }
    }

    /// Entries in column-major order (the canonical scan order).
    pub fn entries_column_major(&self) -> impl Iterator<Item = &Scalar> {
        self.cols.iter().flat_map(|c| c.coords().iter())
    }

    /// Multi-line listing of the nonzero images, e.g. `R(e21) = e12`.
    pub fn describe(&self) -> String {
        let lines: Vec<String> = (0..DIM)
            .filter(|&j| !self.cols[j].is_zero())
            .map(|j| format!("R({}) = {}", BASIS_NAMES[j], pretty(&self.cols[j])))
            .collect();
        if lines.is_empty() {
            "R = 0".into()
        } else {
            lines.join("; ")
        }
    }
}

/// Conjugate an operator by an invertible map: returns `φ ∘ R ∘ φ⁻¹`.
///
/// Under this convention `R'(φ(x)) = φ(R(x))`, i.e. the operator is transported
/// along `φ`. An (anti)automorphism carries Rota-Baxter operators to
/// Rota-Baxter operators either way.
pub fn conjugate(r: &LinMap, phi: &LinMap) -> Result<LinMap, OperatorError> {
    let inv = phi.inverse()?;
    Ok(phi.compose(&r.compose(&inv)))
}

/// Test helper: whether the span of an operator's image is closed under the product.
pub fn image_is_subalgebra(r: &LinMap) -> bool {
    let ki = r.rank_kernel_image();
    ki.image.is_empty()
        || algebra::subalgebra_check(&ki.image)
            .map(|rep| rep.closed)
            .unwrap_or(false)
}
