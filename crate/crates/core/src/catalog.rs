//! Canonical Rota-Baxter operators of weight zero on `O`, as parameterized
//! families with their admissibility constraints.
//!
//! Families are written in a small text form, one `source: image` clause per
//! nonzero basis image, e.g. `"e21: e11 - a ve11; ve22: a e12 + ve12"`. The
//! letters `a` and `b` stand for the parameters alpha and beta.

use std::collections::BTreeSet;
use std::fmt;

use log::debug;
use thiserror::Error;

use crate::algebra::{basis_index, Octo, SubalgebraSpec};
use crate::operator::{Fingerprint, LinMap, RbWitness};
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("{0} has no case {1}")]
    UnknownCase(Source, u8),
    #[error("{0} case {1}: constraint {2} violated")]
    ConstraintViolation(Source, u8, Constraint),
    #[error("{0} case {1} needs parameter {2}")]
    MissingParam(Source, u8, char),
    #[error("{0} case {1}: parameter lives in the wrong field")]
    FieldMismatch(Source, u8),
    #[error("{0} case {1} fails the Rota-Baxter identity: {2}")]
    RbSelfCheckFailed(Source, u8, Box<RbWitness>),
    #[error("cannot parse family text {0:?}")]
    Parse(String),
    #[error("nilpotency predictions exist only for the quadratically closed list")]
    NoPrediction,
}

/// Where a family comes from. Case numbers are local to the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    /// The four forms on `M2(F)`, extended by zero on `v M2(F)`.
    Prop18,
    Lemma(u8),
    Corollary(u8),
    Theorem1,
}

impl Source {
    pub fn all() -> Vec<Source> {
        let mut v = vec![Source::Prop18];
        v.extend((1..=7).map(Source::Lemma));
        v.extend((1..=6).map(Source::Corollary));
        v.push(Source::Theorem1);
        v
    }

    /// Lower-case identifier used in file names and on the command line.
    pub fn slug(self) -> String {
        match self {
            Source::Prop18 => "prop18".into(),
            Source::Lemma(n) => format!("lemma{n}"),
            Source::Corollary(n) => format!("corollary{n}"),
            Source::Theorem1 => "theorem1".into(),
        }
    }

    pub fn parse(s: &str) -> Option<Source> {
        Source::all().into_iter().find(|x| x.slug() == s.to_ascii_lowercase())
    }

    /// The image subalgebra shared by every case of a per-image source.
    pub fn image(self) -> Option<SubalgebraSpec> {
        use SubalgebraSpec::*;
        match self {
            Source::Lemma(1) => Some(N1),
            Source::Lemma(2) => Some(I1),
            Source::Lemma(3) | Source::Corollary(1) => Some(I2),
            Source::Lemma(4) | Source::Corollary(2) => Some(N2),
            Source::Lemma(5) | Source::Corollary(3) => Some(N3),
            Source::Lemma(6) | Source::Corollary(4) => Some(I3),
            Source::Lemma(7) | Source::Corollary(5) => Some(S4),
            _ => None,
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.slug())
    }
}

/// Admissibility predicates on the parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    AlphaNonzero,
    BetaNonzero,
    AlphaNotMinusOne,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Constraint::AlphaNonzero => "alpha != 0",
            Constraint::BetaNonzero => "beta != 0",
            Constraint::AlphaNotMinusOne => "alpha != -1",
        })
    }
}

/// A family definition.
#[derive(Debug, Clone, Copy)]
pub struct CaseDef {
    pub source: Source,
    pub case_no: u8,
    pub text: &'static str,
    pub constraints: &'static [Constraint],
}

impl CaseDef {
    pub fn uses_alpha(&self) -> bool {
        self.text.split(|c: char| !c.is_ascii_alphanumeric()).any(|t| t == "a")
    }

    pub fn uses_beta(&self) -> bool {
        self.text.split(|c: char| !c.is_ascii_alphanumeric()).any(|t| t == "b")
    }

    /// The image subalgebra this case is classified under.
    pub fn image(&self) -> Option<SubalgebraSpec> {
        use SubalgebraSpec::*;
        let n = self.case_no;
        match self.source {
            Source::Theorem1 => Some(match n {
                1 | 2 => N1,
                3 => I1,
                4..=9 => I2,
                10..=15 => N2,
                16..=19 => N3,
                20..=22 => I3,
                _ => S4,
            }),
            Source::Corollary(6) => Some(match n {
                1 | 2 => N1,
                3 => I1,
                4..=9 => I2,
                10..=13 => N2,
                14..=17 => N3,
                18..=20 => I3,
                _ => S4,
            }),
            Source::Prop18 => Some(match n {
                1 => I1,
                2 => N1,
                _ => I2,
            }),
            s => s.image(),
        }
    }
}

/// A concrete instance: family plus parameter values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseSpec {
    pub source: Source,
    pub case_no: u8,
    pub alpha: Option<Scalar>,
    pub beta: Option<Scalar>,
}

impl CaseSpec {
    pub fn new(source: Source, case_no: u8) -> Self {
        CaseSpec {
            source,
            case_no,
            alpha: None,
            beta: None,
        }
    }

    pub fn with_alpha(mut self, a: Scalar) -> Self {
        self.alpha = Some(a);
        self
    }

    pub fn with_beta(mut self, b: Scalar) -> Self {
        self.beta = Some(b);
        self
    }
}

impl fmt::Display for CaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} case {}", self.source, self.case_no)?;
        if let Some(a) = &self.alpha {
            write!(f, " alpha={a}")?;
        }
        if let Some(b) = &self.beta {
            write!(f, " beta={b}")?;
        }
        Ok(())
    }
}

use Constraint::*;
const NONE: &[Constraint] = &[];
const A0: &[Constraint] = &[AlphaNonzero];
const AB0: &[Constraint] = &[AlphaNonzero, BetaNonzero];
const AM1: &[Constraint] = &[AlphaNotMinusOne];

// Frequently repeated families.
const L1_1: &str = "e21: e12";
const L1_2: &str = "ve22: e12";
const L2_1: &str = "e21: e11";
const L3_1: &str = "e21: e11; e22: e12";
const L3_2: &str = "e21: -e11; e11: e12";
const L3_3: &str = "e21: e11; ve21: e12";
const L3_4: &str = "ve11: a e11; ve21: e12";
const L3_5: &str = "ve11: e12; ve21: e11";
const L3_6: &str = "ve21: a e11; ve22: e12";
const C1_4: &str = "ve11: e11; ve21: e12";
const C1_6: &str = "ve21: e11; ve22: e12";
const L4_1: &str = "ve11: ve22; ve21: ve22 + a ve12";
const L4_2: &str = "e21: ve12; ve21: ve22";
const L4_3: &str =
    "e11: ve22 + ve12; e12: ve22 + ve12; e21: -ve22 - ve12; e22: -ve22 - ve12; ve11: -ve12; ve21: ve12";
const L4_4: &str = "ve11: ve12; ve21: ve22 + ve12";
const L4_5: &str = "ve11: ve12; ve21: a ve22";
const L4_6: &str = "ve11: ve22; ve21: a ve12";
const L5_1: &str = "e21: a e12; ve11: ve12; ve21: ve22 + ve12";
const L5_2: &str = "e21: a e12; ve11: ve12; ve21: ve22";
const L5_3: &str = "e21: e12; ve11: ve12; ve21: ve22 + e12";
const L5_4: &str = "e21: a e12; ve11: ve12; ve21: ve22 + ve12 + e12";
const C3_1: &str = "e21: e12; ve11: ve12; ve21: ve22 + ve12";
const C3_2: &str = "e21: e12; ve11: ve12; ve21: ve22";
const L6_1: &str = "e21: ve12; ve11: e11; ve21: ve22";
const L6_2: &str = "e21: a e11; ve11: b ve12; ve21: ve22";
const L6_3: &str = "e21: -ve22; ve11: ve12; ve21: e11";
const C4_2: &str = "e21: e11; ve11: a ve12; ve21: ve22";
const L7_1: &str = "e11: e12; e21: -e11; ve21: -ve11; ve22: -ve12";
const L7_2: &str = "e11: e12; e21: -e11 - ve11; ve21: -ve11; ve22: e12 - ve12";
const L7_3: &str = "e11: ve12; e21: -a ve11; ve21: e11; ve22: a e12";
const L7_4: &str = "e11: -e12 + ve12; e21: e11 - a ve11; ve21: e11 + ve11; ve22: a e12 + ve12";
const L7_5: &str = "e22: ve12; e21: -a ve11; ve21: -e11; ve22: a e12";
const C5_2: &str = "e11: e12; e21: -e11 + ve12; ve21: e12 - ve11; ve22: -ve12";
const C5_3: &str = "e11: ve12; e21: -ve11; ve21: e11; ve22: e12";
const C5_5: &str = "e22: ve12; e21: -ve11; ve21: -e11; ve22: e12";

/// Every family definition, in source order.
pub fn all_cases() -> Vec<CaseDef> {
    let mut v = Vec::new();
    v.extend(numbered(
        Source::Prop18,
        &[(L2_1, NONE), (L1_1, NONE), (L3_1, NONE), (L3_2, NONE)],
    ));
    v.extend(numbered(Source::Lemma(1), &[(L1_1, NONE), (L1_2, NONE)]));
    v.extend(numbered(Source::Lemma(2), &[(L2_1, NONE)]));
    v.extend(numbered(
        Source::Lemma(3),
        &[(L3_1, NONE), (L3_2, NONE), (L3_3, NONE), (L3_4, A0), (L3_5, NONE), (L3_6, A0)],
    ));
    v.extend(numbered(
        Source::Corollary(1),
        &[(L3_1, NONE), (L3_2, NONE), (L3_3, NONE), (C1_4, NONE), (L3_5, NONE), (C1_6, NONE)],
    ));
    v.extend(numbered(
        Source::Lemma(4),
        &[(L4_1, A0), (L4_2, NONE), (L4_3, NONE), (L4_4, NONE), (L4_5, A0), (L4_6, A0)],
    ));
    v.extend(numbered(
        Source::Corollary(2),
        &[(L4_2, NONE), (L4_3, NONE), (L4_4, NONE), (L4_5, A0)],
    ));
    v.extend(numbered(
        Source::Lemma(5),
        &[(L5_1, A0), (L5_2, A0), (L5_3, NONE), (L5_4, A0)],
    ));
    v.extend(numbered(
        Source::Corollary(3),
        &[(C3_1, NONE), (C3_2, NONE), (L5_3, NONE), (L5_4, A0)],
    ));
    v.extend(numbered(Source::Lemma(6), &[(L6_1, NONE), (L6_2, AB0), (L6_3, NONE)]));
    v.extend(numbered(Source::Corollary(4), &[(L6_1, NONE), (C4_2, A0), (L6_3, NONE)]));
    v.extend(numbered(
        Source::Lemma(7),
        &[(L7_1, NONE), (L7_2, NONE), (L7_3, A0), (L7_4, AM1), (L7_5, A0)],
    ));
    v.extend(numbered(
        Source::Corollary(5),
        &[(L7_1, NONE), (C5_2, NONE), (C5_3, NONE), (L7_4, AM1), (C5_5, NONE)],
    ));
    v.extend(theorem1());
    v.extend(corollary6());
    v
}

fn theorem1() -> Vec<CaseDef> {
    let list: [(&'static str, &'static [Constraint]); 27] = [
        (L1_1, NONE),
        (L1_2, NONE),
        (L2_1, NONE),
        (L3_1, NONE),
        (L3_2, NONE),
        (L3_3, NONE),
        (L3_4, A0),
        (L3_5, NONE),
        (L3_6, A0),
        (L4_1, A0),
        (L4_2, NONE),
        (L4_3, NONE),
        (L4_4, NONE),
        (L4_5, A0),
        (L4_6, A0),
        (L5_1, A0),
        (L5_2, A0),
        (L5_3, NONE),
        (L5_4, A0),
        (L6_1, NONE),
        (L6_2, AB0),
        (L6_3, NONE),
        (L7_1, NONE),
        (L7_2, NONE),
        // Printed without a constraint; the source family requires alpha != 0,
        // and alpha = 0 drops the image dimension.
        (L7_3, A0),
        (L7_4, AM1),
        (L7_5, A0),
    ];
    numbered(Source::Theorem1, &list)
}

fn corollary6() -> Vec<CaseDef> {
    let list: [(&'static str, &'static [Constraint]); 25] = [
        (L1_1, NONE),
        (L1_2, NONE),
        (L2_1, NONE),
        (L3_1, NONE),
        (L3_2, NONE),
        (L3_3, NONE),
        (C1_4, NONE),
        (L3_5, NONE),
        (C1_6, NONE),
        (L4_2, NONE),
        (L4_3, NONE),
        (L4_4, NONE),
        (L4_5, A0),
        (C3_1, NONE),
        (C3_2, NONE),
        (L5_3, NONE),
        (L5_4, A0),
        (L6_1, NONE),
        (C4_2, A0),
        (L6_3, NONE),
        (L7_1, NONE),
        (L7_2, NONE),
        (C5_3, NONE),
        (L7_4, AM1),
        (C5_5, NONE),
    ];
    numbered(Source::Corollary(6), &list)
}

fn numbered(source: Source, list: &[(&'static str, &'static [Constraint])]) -> Vec<CaseDef> {
    list.iter()
        .enumerate()
        .map(|(i, (text, constraints))| CaseDef {
            source,
            case_no: i as u8 + 1,
            text,
            constraints,
        })
        .collect()
}

pub fn cases_of(source: Source) -> Vec<CaseDef> {
    all_cases().into_iter().filter(|c| c.source == source).collect()
}

pub fn find_case(source: Source, case_no: u8) -> Result<CaseDef, CatalogError> {
    all_cases()
        .into_iter()
        .find(|c| c.source == source && c.case_no == case_no)
        .ok_or(CatalogError::UnknownCase(source, case_no))
}

/// Evaluate a family text at concrete parameters.
pub fn parse_family(
    field: FieldSpec,
    text: &str,
    alpha: &Scalar,
    beta: &Scalar,
) -> Result<LinMap, CatalogError> {
    let err = || CatalogError::Parse(text.to_string());
    let mut images = Vec::new();
    for clause in text.split(';') {
        let (src, expr) = clause.split_once(':').ok_or_else(err)?;
        let src = basis_index(src.trim()).ok_or_else(err)?;
        images.push((src, parse_expr(field, expr, alpha, beta).ok_or_else(err)?));
    }
    Ok(LinMap::from_images(field, &images))
}

/// `expr := term (('+'|'-') term)*`, `term := ['-'] [int] ['a'|'b'] basis`.
fn parse_expr(field: FieldSpec, expr: &str, alpha: &Scalar, beta: &Scalar) -> Option<Octo> {
    let spaced = expr.replace('-', " - ").replace('+', " + ");
    let mut out = Octo::zero(field);
    let mut coef = Scalar::one(field);
    let mut saw_term = false;
    for tok in spaced.split_whitespace() {
        match tok {
            "+" => {}
            "-" => coef = -coef,
            "a" => coef = &coef * alpha,
            "b" => coef = &coef * beta,
            t if t.chars().all(|c| c.is_ascii_digit()) => {
                coef = &coef * &Scalar::from_int(field, t.parse().ok()?)
            }
            t => {
                let i = basis_index(t)?;
                out = &out + &Octo::basis(field, i).scale(&coef);
                coef = Scalar::one(field);
                saw_term = true;
            }
        }
    }
    saw_term.then_some(out)
}

/// Parse an integer combination of basis names, e.g. `e11 + 2 ve22 - e12`.
pub fn parse_combination(field: FieldSpec, text: &str) -> Option<Octo> {
    let spaced = text.replace('-', " - ").replace('+', " + ");
    if spaced.split_whitespace().any(|t| t == "a" || t == "b") {
        return None;
    }
    let zero = Scalar::zero(field);
    parse_expr(field, text, &zero, &zero)
}

/// Whether the parameters satisfy the family's constraints.
pub fn admissible(def: &CaseDef, alpha: Option<&Scalar>, beta: Option<&Scalar>) -> Result<(), Constraint> {
    for c in def.constraints {
        let ok = match c {
            AlphaNonzero => alpha.is_none_or(|a| !a.is_zero()),
            BetaNonzero => beta.is_none_or(|b| !b.is_zero()),
            AlphaNotMinusOne => alpha.is_none_or(|a| !(a + &Scalar::one(a.field())).is_zero()),
        };
        if !ok {
            return Err(*c);
        }
    }
    Ok(())
}

/// Construct the operator for a case. The result is checked against the
/// Rota-Baxter identity before it is returned.
pub fn build_case(spec: &CaseSpec, field: FieldSpec) -> Result<LinMap, CatalogError> {
    let def = find_case(spec.source, spec.case_no)?;
    let (src, no) = (spec.source, spec.case_no);
    let pick = |used: bool, v: &Option<Scalar>, name: char| -> Result<Scalar, CatalogError> {
        match (used, v) {
            (false, _) => Ok(Scalar::zero(field)),
            (true, None) => Err(CatalogError::MissingParam(src, no, name)),
            (true, Some(x)) if x.field() != field => Err(CatalogError::FieldMismatch(src, no)),
            (true, Some(x)) => Ok(x.clone()),
        }
    };
    let a = pick(def.uses_alpha(), &spec.alpha, 'a')?;
    let b = pick(def.uses_beta(), &spec.beta, 'b')?;
    admissible(&def, Some(&a), Some(&b))
        .map_err(|c| CatalogError::ConstraintViolation(src, no, c))?;
    let r = parse_family(field, def.text, &a, &b)?;
    r.check_rb()
        .map_err(|w| CatalogError::RbSelfCheckFailed(src, no, Box::new(w)))?;
    Ok(r)
}

/// One operator per case and admissible assignment of parameters drawn from
/// `samples`. Parameter-free cases appear once regardless of the samples.
pub fn enumerate_catalog(
    field: FieldSpec,
    sources: &[Source],
    samples: &[Scalar],
) -> Vec<(CaseSpec, LinMap)> {
    let mut out = Vec::new();
    for def in all_cases().into_iter().filter(|d| sources.contains(&d.source)) {
        let alphas: Vec<Option<Scalar>> = if def.uses_alpha() {
            samples.iter().cloned().map(Some).collect()
        } else {
            vec![None]
        };
        let betas: Vec<Option<Scalar>> = if def.uses_beta() {
            samples.iter().cloned().map(Some).collect()
        } else {
            vec![None]
        };
        for a in &alphas {
            for b in &betas {
                let spec = CaseSpec {
                    source: def.source,
                    case_no: def.case_no,
                    alpha: a.clone(),
                    beta: b.clone(),
                };
                match build_case(&spec, field) {
                    Ok(r) => out.push((spec, r)),
                    Err(e) => debug!("skipping {spec}: {e}"),
                }
            }
        }
    }
    out
}

/// Every admissible instance over a prime field (all parameter values).
pub fn enumerate_all_admissible(field: FieldSpec, sources: &[Source]) -> Vec<(CaseSpec, LinMap)> {
    let samples = field.elements().expect("prime field");
    enumerate_catalog(field, sources, &samples)
}

/// Nilpotency behaviour predicted for the quadratically closed list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NilpotencyPrediction {
    SquareZero,
    CubeZeroSquareNonzero,
    Unstated,
}

pub fn expected_fingerprint(spec: &CaseSpec) -> Result<NilpotencyPrediction, CatalogError> {
    if spec.source != Source::Corollary(6) {
        return Err(CatalogError::NoPrediction);
    }
    Ok(match spec.case_no {
        5 | 21..=24 => NilpotencyPrediction::CubeZeroSquareNonzero,
        1..=20 => NilpotencyPrediction::SquareZero,
        25 => NilpotencyPrediction::Unstated,
        n => return Err(CatalogError::UnknownCase(spec.source, n)),
    })
}

/// Fingerprints of every admissible instance of the given sources over a prime
/// field.
pub fn fingerprint_set(field: FieldSpec, sources: &[Source]) -> BTreeSet<Fingerprint> {
    enumerate_all_admissible(field, sources)
        .iter()
        .map(|(_, r)| r.fingerprint())
        .collect()
}

/// The classification source for operators with a given image.
pub fn classifying_source(image: SubalgebraSpec) -> Source {
    use SubalgebraSpec::*;
    Source::Lemma(match image {
        N1 => 1,
        I1 => 2,
        I2 => 3,
        N2 => 4,
        N3 => 5,
        I3 => 6,
        S4 => 7,
    })
}
