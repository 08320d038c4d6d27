//! The split Cayley-Dickson algebra `O = M2(F) + v M2(F)`.
//!
//! Basis order is fixed everywhere: `e11, e12, e21, e22, ve11, ve12, ve21, ve22`.
//! Indices below 4 are the matrix part.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use thiserror::Error;

use crate::linalg;
use crate::scalar::{FieldSpec, Scalar, ScalarError};

pub const DIM: usize = 8;

pub const BASIS_NAMES: [&str; DIM] = ["e11", "e12", "e21", "e22", "ve11", "ve12", "ve21", "ve22"];

pub const E11: usize = 0;
pub const E12: usize = 1;
pub const E21: usize = 2;
pub const E22: usize = 3;
pub const VE11: usize = 4;
pub const VE12: usize = 5;
pub const VE21: usize = 6;
pub const VE22: usize = 7;

/// Index of a basis element by name (`"ve12"` -> 5).
pub fn basis_index(name: &str) -> Option<usize> {
    BASIS_NAMES.iter().position(|n| *n == name)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("element has a nonzero v-part; the symplectic involution acts on M2 only")]
    NotInM2,
    #[error("structure table is inconsistent: {0}")]
    InternalInconsistency(String),
    #[error("expected 8 coordinates, found {0}")]
    WrongLength(usize),
    #[error("empty list of elements")]
    Empty,
}

// ---------------------------------------------------------------------------
// Structure constants

/// `e_i * e_j = sign * e_k`, or zero. Every product of basis elements in this
/// algebra is a signed basis element, so this sparse form is the whole table.
pub type Product = Option<(usize, i8)>;

/// Integer structure table, built once from the defining rules
/// `a*b = ab`, `a*vb = v(bar(a) b)`, `va*b = v(ba)`, `va*vb = b bar(a)`.
pub fn sign_table() -> &'static [[Product; DIM]; DIM] {
    static TABLE: OnceLock<[[Product; DIM]; DIM]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [[None; DIM]; DIM];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let v = rule_product(&unit_vec(i), &unit_vec(j));
                let nz: Vec<usize> = (0..DIM).filter(|&k| v[k] != 0).collect();
                *cell = match nz.as_slice() {
                    [] => None,
                    [k] if v[*k].abs() == 1 => Some((*k, v[*k] as i8)),
                    _ => panic!("basis product e{i}*e{j} is not a signed basis element"),
                };
            }
        }
        t
    })
}

fn unit_vec(i: usize) -> [i64; DIM] {
    let mut v = [0; DIM];
    v[i] = 1;
    v
}

type M2 = [i64; 4];

fn m2_mul(a: &M2, b: &M2) -> M2 {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

fn m2_bar(a: &M2) -> M2 {
    [a[3], -a[1], -a[2], a[0]]
}

/// Direct evaluation of the Cayley-Dickson rules on integer coordinates.
fn rule_product(x: &[i64; DIM], y: &[i64; DIM]) -> [i64; DIM] {
    let (a, va): (M2, M2) = ([x[0], x[1], x[2], x[3]], [x[4], x[5], x[6], x[7]]);
    let (b, vb): (M2, M2) = ([y[0], y[1], y[2], y[3]], [y[4], y[5], y[6], y[7]]);
    let ab = m2_mul(&a, &b);
    let vv = m2_mul(&vb, &m2_bar(&va));
    let left = m2_mul(&m2_bar(&a), &vb);
    let right = m2_mul(&b, &va);
    let mut out = [0; DIM];
    for k in 0..4 {
        out[k] = ab[k] + vv[k];
        out[k + 4] = left[k] + right[k];
    }
    out
}

/// Structure constants materialized over a field: `c[i][j][k]` is the
/// coefficient of `e_k` in `e_i * e_j`.
#[derive(Debug, Clone)]
pub struct StructureTable {
    pub field: FieldSpec,
    pub c: Vec<Vec<Vec<Scalar>>>,
}

impl StructureTable {
    pub fn new(field: FieldSpec) -> Self {
        let t = sign_table();
        let c = (0..DIM)
            .map(|i| {
                (0..DIM)
                    .map(|j| {
                        let mut v = vec![Scalar::zero(field); DIM];
                        if let Some((k, s)) = t[i][j] {
                            v[k] = Scalar::from_int(field, s as i64);
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        StructureTable { field, c }
    }
}

// ---------------------------------------------------------------------------
// Elements

/// An element of `O`: eight coordinates over one field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Octo {
    field: FieldSpec,
    coords: Vec<Scalar>,
}

impl Octo {
    pub fn zero(field: FieldSpec) -> Self {
        Octo {
            field,
            coords: vec![Scalar::zero(field); DIM],
        }
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::from_ints(field, &[1, 0, 0, 1, 0, 0, 0, 0])
    }

    pub fn basis(field: FieldSpec, i: usize) -> Self {
        let mut x = Self::zero(field);
        x.coords[i] = Scalar::one(field);
        x
    }

    pub fn from_ints(field: FieldSpec, xs: &[i64; DIM]) -> Self {
        Octo {
            field,
            coords: xs.iter().map(|&x| Scalar::from_int(field, x)).collect(),
        }
    }

    /// Build from coordinates; all must lie in `field`.
    pub fn from_coords(field: FieldSpec, coords: Vec<Scalar>) -> Result<Self, AlgebraError> {
        if coords.len() != DIM {
            return Err(AlgebraError::WrongLength(coords.len()));
        }
        if let Some(bad) = coords.iter().find(|c| c.field() != field) {
            return Err(ScalarError::FieldMismatch(field, bad.field()).into());
        }
        Ok(Octo { field, coords })
    }

    /// Parse the text form: eight comma-separated scalars.
    pub fn parse(field: FieldSpec, text: &str) -> Result<Self, AlgebraError> {
        let coords = text
            .split(',')
            .map(|t| Scalar::parse(field, t))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_coords(field, coords)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Scalar {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, s: &Scalar) -> Octo {
        Octo {
            field: self.field,
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    fn check_field(&self, other: &Octo) -> Result<(), AlgebraError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(ScalarError::FieldMismatch(self.field, other.field).into())
        }
    }

    /// The algebra product, through the structure table.
    pub fn checked_mul(&self, other: &Octo) -> Result<Octo, AlgebraError> {
        self.check_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Product assuming equal fields (panics otherwise).
    pub fn mul(&self, other: &Octo) -> Octo {
        self.checked_mul(other).expect("octonion field mismatch")
    }

    fn mul_unchecked(&self, other: &Octo) -> Octo {
        let t = sign_table();
        let mut out = Octo::zero(self.field);
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                if let Some((k, s)) = t[i][j] {
                    let ab = a * b;
                    out.coords[k] = if s > 0 {
                        &out.coords[k] + &ab
                    } else {
                        &out.coords[k] - &ab
                    };
                }
            }
        }
        out
    }

    /// The symplectic involution on the `M2` part:
    /// `(a11, a12, a21, a22) -> (a22, -a12, -a21, a11)`.
    pub fn symplectic_bar(&self) -> Result<Octo, AlgebraError> {
        if self.coords[4..].iter().any(|c| !c.is_zero()) {
            return Err(AlgebraError::NotInM2);
        }
        Ok(self.classical_bar())
    }

    /// The classical involution `a + vb -> bar(a) - vb`.
    pub fn classical_bar(&self) -> Octo {
        let c = &self.coords;
        Octo {
            field: self.field,
            coords: vec![
                c[3].clone(),
                -&c[1],
                -&c[2],
                c[0].clone(),
                -&c[4],
                -&c[5],
                -&c[6],
                -&c[7],
            ],
        }
    }

    /// If this element is `s * 1`, return `s`.
    pub fn as_scalar_multiple_of_one(&self) -> Option<Scalar> {
        let c = &self.coords;
        let off_diag_zero = [1, 2, 4, 5, 6, 7].iter().all(|&i| c[i].is_zero());
        (off_diag_zero && c[0] == c[3]).then(|| c[0].clone())
    }

    /// Trace and norm: `x + bar(x) = t*1` and `x * bar(x) = n*1`.
    pub fn trace_norm(&self) -> Result<(Scalar, Scalar), AlgebraError> {
        let bar = self.classical_bar();
        let t = (self + &bar).as_scalar_multiple_of_one().ok_or_else(|| {
            AlgebraError::InternalInconsistency(format!("x + bar(x) is not scalar for {self}"))
        })?;
        let n = self.mul(&bar).as_scalar_multiple_of_one().ok_or_else(|| {
            AlgebraError::InternalInconsistency(format!("x * bar(x) is not scalar for {self}"))
        })?;
        Ok((t, n))
    }
}

impl Add for &Octo {
    type Output = Octo;
    fn add(self, rhs: &Octo) -> Octo {
        self.check_field(rhs).expect("octonion field mismatch");
        Octo {
            field: self.field,
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Octo {
    type Output = Octo;
    fn sub(self, rhs: &Octo) -> Octo {
        self + &(-rhs)
    }
}

impl Neg for &Octo {
    type Output = Octo;
    fn neg(self) -> Octo {
        Octo {
            field: self.field,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Octo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Human-readable linear combination, e.g. `e11 - 2*ve12`.
pub fn pretty(x: &Octo) -> String {
    let mut s = String::new();
    for (i, c) in x.coords().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = matches!(c, Scalar::Rational(r) if r < &num_rational::BigRational::from_integer(0.into()));
        let mag = if neg { (-c).to_string() } else { c.to_string() };
        let term = if mag == "1" {
            BASIS_NAMES[i].to_string()
        } else {
            format!("{mag}*{}", BASIS_NAMES[i])
        };
        match (s.is_empty(), neg) {
            (true, true) => s.push_str(&format!("-{term}")),
            (true, false) => s.push_str(&term),
            (false, true) => s.push_str(&format!(" - {term}")),
            (false, false) => s.push_str(&format!(" + {term}")),
        }
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

// ---------------------------------------------------------------------------
// Subalgebras

/// The seven non-zero non-unital subalgebras that occur as images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubalgebraSpec {
    /// `F e12`
    N1,
    /// `F e11`
    I1,
    /// `F e11 + F e12`
    I2,
    /// `F ve12 + F ve22`
    N2,
    /// `F e12 + F ve12 + F ve22`
    N3,
    /// `F e11 + F ve12 + F ve22`
    I3,
    /// `F e11 + F e12 + F ve11 + F ve12`
    S4,
}

impl SubalgebraSpec {
    pub const ALL: [SubalgebraSpec; 7] = [
        SubalgebraSpec::N1,
        SubalgebraSpec::I1,
        SubalgebraSpec::I2,
        SubalgebraSpec::N2,
        SubalgebraSpec::N3,
        SubalgebraSpec::I3,
        SubalgebraSpec::S4,
    ];

    pub fn basis_indices(self) -> &'static [usize] {
        match self {
            SubalgebraSpec::N1 => &[E12],
            SubalgebraSpec::I1 => &[E11],
            SubalgebraSpec::I2 => &[E11, E12],
            SubalgebraSpec::N2 => &[VE12, VE22],
            SubalgebraSpec::N3 => &[E12, VE12, VE22],
            SubalgebraSpec::I3 => &[E11, VE12, VE22],
            SubalgebraSpec::S4 => &[E11, E12, VE11, VE12],
        }
    }

    pub fn basis(self, field: FieldSpec) -> Vec<Octo> {
        self.basis_indices()
            .iter()
            .map(|&i| Octo::basis(field, i))
            .collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            SubalgebraSpec::N1 => "N1",
            SubalgebraSpec::I1 => "I1",
            SubalgebraSpec::I2 => "I2",
            SubalgebraSpec::N2 => "N2",
            SubalgebraSpec::N3 => "N3",
            SubalgebraSpec::I3 => "I3",
            SubalgebraSpec::S4 => "S4",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|s| s.name().eq_ignore_ascii_case(name))
    }
}

/// Outcome of [`subalgebra_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubalgebraReport {
    pub independent: bool,
    pub closed: bool,
    pub unital: bool,
    pub square_zero: bool,
}

pub(crate) fn rows_of(xs: &[Octo]) -> Vec<Vec<Scalar>> {
    xs.iter().map(|x| x.coords().to_vec()).collect()
}

/// Closure, unitality and square-zero tests for the span of `s`.
pub fn subalgebra_check(s: &[Octo]) -> Result<SubalgebraReport, AlgebraError> {
    let first = s.first().ok_or(AlgebraError::Empty)?;
    for x in s {
        first.check_field(x)?;
    }
    let field = first.field();
    let rows = rows_of(s);
    let independent = linalg::rank(rows.clone(), DIM) == s.len();
    let mut closed = true;
    let mut square_zero = true;
    for x in s {
        for y in s {
            let xy = x.mul(y);
            square_zero &= xy.is_zero();
            closed &= linalg::in_span(&rows, xy.coords(), DIM);
        }
    }
    let unital = linalg::in_span(&rows, Octo::one(field).coords(), DIM);
    Ok(SubalgebraReport {
        independent,
        closed,
        unital,
        square_zero,
    })
}
