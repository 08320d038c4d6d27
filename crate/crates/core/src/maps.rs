//! The parameterized automorphisms, antiautomorphisms and involutions of `O`
//! used to normalize operators, and replayable chains of such conjugations.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{sign_table, Octo, DIM, E11, E12, E21, E22, VE11, VE12, VE21, VE22};
use crate::operator::{conjugate, LinMap, OperatorError};
use crate::scalar::{FieldSpec, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("proposition {0} needs a parameter")]
    MissingParam(u8),
    #[error("proposition {0} takes no parameter")]
    UnexpectedParam(u8),
    #[error("proposition {0} requires a nonzero parameter")]
    ZeroParamForbidden(u8),
    #[error("no proposition {0}; valid numbers are 1 to 17")]
    UnknownProp(u8),
    #[error("the stated images do not determine an involution (unresolved basis elements: {0:?})")]
    NoCompletion(Vec<usize>),
    #[error("parameter lives in {got}, expected {expected}")]
    FieldMismatch { expected: FieldSpec, got: FieldSpec },
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Which family a map belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MapKind {
    /// One of the seventeen numbered maps.
    Prop(u8),
    /// The classical involution `a + vb -> bar(a) - vb`.
    Classical,
}

/// What a map is claimed to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapClass {
    Automorphism,
    Antiautomorphism,
    Involution,
}

impl MapKind {
    pub fn all() -> Vec<MapKind> {
        (1..=17).map(MapKind::Prop).chain([MapKind::Classical]).collect()
    }

    pub fn claimed(self) -> MapClass {
        match self {
            MapKind::Prop(1) | MapKind::Prop(5) | MapKind::Classical => MapClass::Involution,
            MapKind::Prop(12) => MapClass::Antiautomorphism,
            MapKind::Prop(_) => MapClass::Automorphism,
        }
    }

    pub fn takes_param(self) -> bool {
        !matches!(
            self,
            MapKind::Classical | MapKind::Prop(1) | MapKind::Prop(4) | MapKind::Prop(5) | MapKind::Prop(12)
        )
    }

    /// Scaling maps: the parameter must be invertible.
    pub fn needs_nonzero(self) -> bool {
        matches!(self, MapKind::Prop(6) | MapKind::Prop(7) | MapKind::Prop(8))
    }

    /// The parameter value at which the map is the identity, if any.
    pub fn neutral_param(self, field: FieldSpec) -> Option<Scalar> {
        if !self.takes_param() {
            None
        } else if self.needs_nonzero() {
            Some(Scalar::one(field))
        } else {
            Some(Scalar::zero(field))
        }
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapKind::Prop(n) => write!(f, "prop{n}"),
            MapKind::Classical => write!(f, "classical"),
        }
    }
}

/// A map descriptor: family plus optional parameter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MapSpec {
    pub kind: MapKind,
    pub param: Option<Scalar>,
}

impl MapSpec {
    pub fn prop(n: u8, alpha: Scalar) -> Self {
        MapSpec {
            kind: MapKind::Prop(n),
            param: Some(alpha),
        }
    }

    pub fn bare(kind: MapKind) -> Self {
        MapSpec { kind, param: None }
    }

    pub fn claimed(&self) -> MapClass {
        self.kind.claimed()
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.param {
            Some(a) => write!(f, "{}(alpha={a})", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

/// Build the matrix of a map over `field`.
pub fn build_map(spec: &MapSpec, field: FieldSpec) -> Result<LinMap, MapError> {
    let kind = spec.kind;
    let n = match kind {
        MapKind::Classical => 0,
        MapKind::Prop(n) if (1..=17).contains(&n) => n,
        MapKind::Prop(n) => return Err(MapError::UnknownProp(n)),
    };
    let a = match (&spec.param, kind.takes_param()) {
        (None, true) => return Err(MapError::MissingParam(n)),
        (Some(_), false) => return Err(MapError::UnexpectedParam(n)),
        (Some(a), true) => {
            if a.field() != field {
                return Err(MapError::FieldMismatch {
                    expected: field,
                    got: a.field(),
                });
            }
            if kind.needs_nonzero() && a.is_zero() {
                return Err(MapError::ZeroParamForbidden(n));
            }
            a.clone()
        }
        (None, false) => Scalar::zero(field),
    };
    let one = Scalar::one(field);
    let ai = if a.is_zero() { one.clone() } else { a.inv()? };
    let a2 = &a * &a;
    let neg = |s: &Scalar| -s;
    let lc = |terms: &[(usize, &Scalar)]| {
        let mut x = Octo::zero(field);
        for (i, c) in terms {
            x = &x + &Octo::basis(field, *i).scale(c);
        }
        x
    };
    let id = |i: usize| Octo::basis(field, i);
    let mut img: Vec<Octo> = (0..DIM).map(id).collect();
    match n {
        0 => {
            img = (0..DIM).map(|i| id(i).classical_bar()).collect();
        }
        1 => {
            let known = [
                (VE12, lc(&[(VE21, &neg(&one))])),
                (VE11, id(VE22)),
                (E11, id(E11)),
                (E12, id(E21)),
                (E22, id(E22)),
            ];
            return complete_involution(field, &known);
        }
        2 => {
            img[VE11] = lc(&[(VE11, &one), (VE12, &a)]);
            img[VE21] = lc(&[(VE21, &one), (VE22, &a)]);
        }
        3 => {
            img[VE12] = lc(&[(VE12, &one), (VE11, &a)]);
            img[VE22] = lc(&[(VE22, &one), (VE21, &a)]);
        }
        4 => {
            img[VE12] = lc(&[(VE11, &neg(&one))]);
            img[VE11] = id(VE12);
            img[VE21] = id(VE22);
            img[VE22] = lc(&[(VE21, &neg(&one))]);
        }
        5 => {
            let known = [(E11, id(E22)), (E12, id(VE22)), (E21, id(VE11)), (E22, id(E11))];
            return complete_involution(field, &known);
        }
        6 => {
            img[E12] = lc(&[(E12, &a)]);
            img[VE12] = lc(&[(VE12, &a)]);
            img[E21] = lc(&[(E21, &ai)]);
            img[VE21] = lc(&[(VE21, &ai)]);
        }
        7 => {
            img[E12] = lc(&[(E12, &a)]);
            img[VE11] = lc(&[(VE11, &a)]);
            img[E21] = lc(&[(E21, &ai)]);
            img[VE22] = lc(&[(VE22, &ai)]);
        }
        8 => {
            img[VE11] = lc(&[(VE11, &a)]);
            img[VE21] = lc(&[(VE21, &a)]);
            img[VE22] = lc(&[(VE22, &ai)]);
            img[VE12] = lc(&[(VE12, &ai)]);
        }
        9 => {
            img[E11] = lc(&[(E11, &one), (VE22, &a)]);
            img[E12] = lc(&[(E12, &one), (VE12, &a)]);
            img[E22] = lc(&[(E22, &one), (VE22, &neg(&a))]);
            img[VE11] = lc(&[(VE11, &one), (E11, &neg(&a)), (E22, &a), (VE22, &neg(&a2))]);
            img[VE21] = lc(&[(VE21, &one), (E21, &a)]);
        }
        10 => {
            img[E21] = lc(&[(E21, &one), (VE12, &a)]);
            img[VE21] = lc(&[(VE21, &one), (E12, &a)]);
        }
        11 => {
            img[E12] = lc(&[(E12, &one), (VE21, &a)]);
            img[VE12] = lc(&[(VE12, &one), (E21, &a)]);
        }
        12 => {
            img[E12] = id(E21);
            img[E21] = id(E12);
            img[VE11] = lc(&[(VE21, &neg(&one))]);
            img[VE12] = lc(&[(VE22, &neg(&one))]);
            img[VE21] = id(VE11);
            img[VE22] = id(VE12);
        }
        13 => {
            img[E12] = lc(&[(E12, &one), (VE22, &neg(&a))]);
            img[VE11] = lc(&[(VE11, &one), (E21, &a)]);
        }
        14 => {
            img[E21] = lc(&[(E21, &one), (VE11, &a)]);
            img[VE22] = lc(&[(VE22, &one), (E12, &neg(&a))]);
        }
        15 => {
            img[E11] = lc(&[(E11, &one), (VE12, &neg(&a))]);
            img[E21] = lc(&[(E21, &one), (VE22, &a)]);
            img[E22] = lc(&[(E22, &one), (VE12, &a)]);
            img[VE11] = lc(&[(VE11, &one), (E12, &neg(&a))]);
            img[VE21] = lc(&[(VE21, &one), (E11, &neg(&a)), (E22, &a), (VE12, &a2)]);
        }
        16 => {
            img[E11] = lc(&[(E11, &one), (E12, &a)]);
            img[E21] = lc(&[(E21, &one), (E11, &neg(&a)), (E22, &a), (E12, &neg(&a2))]);
            img[E22] = lc(&[(E22, &one), (E12, &neg(&a))]);
            img[VE21] = lc(&[(VE21, &one), (VE11, &neg(&a))]);
            img[VE22] = lc(&[(VE22, &one), (VE12, &neg(&a))]);
        }
        17 => {
            img[E11] = lc(&[(E11, &one), (E21, &a)]);
            img[E12] = lc(&[(E12, &one), (E11, &neg(&a)), (E22, &a), (E21, &neg(&a2))]);
            img[E22] = lc(&[(E22, &one), (E21, &neg(&a))]);
            img[VE11] = lc(&[(VE11, &one), (VE21, &a)]);
            img[VE12] = lc(&[(VE12, &one), (VE22, &a)]);
        }
        _ => unreachable!(),
    }
    Ok(LinMap::from_columns(field, img)?)
}

/// Fill in the unstated images of an involution from `φ² = id` and the
/// antiautomorphism law `φ(e_i e_j) = φ(e_j) φ(e_i)`, then confirm the result.
fn complete_involution(field: FieldSpec, known: &[(usize, Octo)]) -> Result<LinMap, MapError> {
    let mut img: Vec<Option<Octo>> = vec![None; DIM];
    for (i, x) in known {
        img[*i] = Some(x.clone());
    }
    let table = sign_table();
    loop {
        let mut progress = false;
        // φ(φ(e_i)) = e_i: when φ(e_i) = c·e_k, we learn φ(e_k) = c⁻¹·e_i.
        for i in 0..DIM {
            let Some(x) = img[i].clone() else { continue };
            let support: Vec<usize> = (0..DIM).filter(|&k| !x.coord(k).is_zero()).collect();
            if let [k] = support.as_slice() {
                if img[*k].is_none() {
                    let c = x.coord(*k).inv()?;
                    img[*k] = Some(Octo::basis(field, i).scale(&c));
                    progress = true;
                }
            }
        }
        // e_i e_j = s·e_k with φ(e_i), φ(e_j) known gives φ(e_k) = s·φ(e_j)φ(e_i).
        for i in 0..DIM {
            for j in 0..DIM {
                let Some((k, s)) = table[i][j] else { continue };
                if img[k].is_some() {
                    continue;
                }
                if let (Some(x), Some(y)) = (&img[i], &img[j]) {
                    img[k] = Some(y.mul(x).scale(&Scalar::from_int(field, s as i64)));
                    progress = true;
                }
            }
        }
        if !progress {
            break;
        }
    }
    let missing: Vec<usize> = (0..DIM).filter(|&k| img[k].is_none()).collect();
    if !missing.is_empty() {
        return Err(MapError::NoCompletion(missing));
    }
    let m = LinMap::from_columns(field, img.into_iter().map(Option::unwrap).collect())?;
    if !verify_map(&m, MapClass::Involution) {
        return Err(MapError::NoCompletion(vec![]));
    }
    Ok(m)
}

/// Whether `m` is an invertible map of the claimed class, checked on all basis pairs.
pub fn verify_map(m: &LinMap, claimed: MapClass) -> bool {
    let field = m.field();
    if m.inverse().is_err() {
        return false;
    }
    let basis: Vec<Octo> = (0..DIM).map(|i| Octo::basis(field, i)).collect();
    let anti = matches!(claimed, MapClass::Antiautomorphism | MapClass::Involution);
    for i in 0..DIM {
        for j in 0..DIM {
            let lhs = m.apply(&basis[i].mul(&basis[j]));
            let rhs = if anti {
                m.column(j).mul(m.column(i))
            } else {
                m.column(i).mul(m.column(j))
            };
            if lhs != rhs {
                return false;
            }
        }
    }
    claimed != MapClass::Involution || m.compose(m) == LinMap::identity(field)
}

// ---------------------------------------------------------------------------
// Reduction scripts

/// One step of a reduction: conjugate by a map, or multiply by a scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptStep {
    Apply(MapSpec),
    Scale(Scalar),
}

impl fmt::Display for ScriptStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScriptStep::Apply(m) => write!(f, "conjugate by {m}"),
            ScriptStep::Scale(s) => write!(f, "scale by {s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("step {step} ({desc}): {source}")]
    Step {
        step: usize,
        desc: String,
        #[source]
        source: MapError,
    },
    #[error("step {step} ({desc}) broke the Rota-Baxter identity")]
    RbBroken { step: usize, desc: String },
    #[error("scaling by zero at step {0}")]
    ZeroScale(usize),
}

/// Apply the steps in order. Each intermediate operator must stay Rota-Baxter
/// whenever the input is.
pub fn run_script(steps: &[ScriptStep], r: &LinMap) -> Result<LinMap, ScriptError> {
    replay_trace(steps, r).map(|mut t| t.pop().expect("trace holds the input"))
}

/// Like [`run_script`] but returns every intermediate operator, input first.
pub fn replay_trace(steps: &[ScriptStep], r: &LinMap) -> Result<Vec<LinMap>, ScriptError> {
    let field = r.field();
    let input_rb = r.is_rb();
    let mut trace = vec![r.clone()];
    for (k, step) in steps.iter().enumerate() {
        let cur = trace.last().expect("nonempty");
        let wrap = |source: MapError| ScriptError::Step {
            step: k,
            desc: step.to_string(),
            source,
        };
        let next = match step {
            ScriptStep::Apply(spec) => {
                let phi = build_map(spec, field).map_err(wrap)?;
                conjugate(cur, &phi).map_err(|e| wrap(e.into()))?
            }
            ScriptStep::Scale(s) => {
                if s.field() != field {
                    return Err(wrap(MapError::FieldMismatch {
                        expected: field,
                        got: s.field(),
                    }));
                }
                if s.is_zero() {
                    return Err(ScriptError::ZeroScale(k));
                }
                cur.scale(s)
            }
        };
        if input_rb && !next.is_rb() {
            return Err(ScriptError::RbBroken {
                step: k,
                desc: step.to_string(),
            });
        }
        trace.push(next);
    }
    Ok(trace)
}

/// JSON form of a step: `{"prop": 6, "alpha": "1/2"}`, `{"prop": 4}`,
/// `{"scale": "2"}` or `{"map": "classical"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StepJson {
    Prop {
        prop: u8,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<String>,
    },
    Scale {
        scale: String,
    },
    Named {
        map: String,
    },
}

impl StepJson {
    pub fn from_step(step: &ScriptStep) -> Self {
        match step {
            ScriptStep::Apply(MapSpec {
                kind: MapKind::Classical,
                ..
            }) => StepJson::Named {
                map: "classical".into(),
            },
            ScriptStep::Apply(MapSpec {
                kind: MapKind::Prop(n),
                param,
            }) => StepJson::Prop {
                prop: *n,
                alpha: param.as_ref().map(ToString::to_string),
            },
            ScriptStep::Scale(s) => StepJson::Scale { scale: s.to_string() },
        }
    }

    pub fn to_step(&self, field: FieldSpec) -> Result<ScriptStep, MapError> {
        Ok(match self {
            StepJson::Prop { prop, alpha } => ScriptStep::Apply(MapSpec {
                kind: MapKind::Prop(*prop),
                param: alpha
                    .as_deref()
                    .map(|t| Scalar::parse(field, t))
                    .transpose()?,
            }),
            StepJson::Scale { scale } => ScriptStep::Scale(Scalar::parse(field, scale)?),
            StepJson::Named { map } if map == "classical" => {
                ScriptStep::Apply(MapSpec::bare(MapKind::Classical))
            }
            StepJson::Named { map } => {
                return Err(MapError::Scalar(ScalarError::Parse {
                    text: map.clone(),
                    field,
                    reason: "unknown named map".into(),
                }))
            }
        })
    }
}

pub fn steps_from_json(field: FieldSpec, json: &[StepJson]) -> Result<Vec<ScriptStep>, MapError> {
    json.iter().map(|s| s.to_step(field)).collect()
}

pub fn steps_to_json(steps: &[ScriptStep]) -> Vec<StepJson> {
    steps.iter().map(StepJson::from_step).collect()
}

/// A named reduction with a declared input and the output it must produce.
#[derive(Debug, Clone)]
pub struct ReductionScript {
    pub name: &'static str,
    pub description: &'static str,
    pub input: LinMap,
    pub steps: Vec<ScriptStep>,
    pub output: LinMap,
}

impl ReductionScript {
    /// Replay and compare with the declared output.
    pub fn replay(&self) -> Result<bool, ScriptError> {
        Ok(run_script(&self.steps, &self.input)? == self.output)
    }
}

/// Small DSL for operators used by scripts: `&[(source, &[(target, n, d)])]`.
fn op(field: FieldSpec, images: &[(usize, &[(usize, Scalar)])]) -> LinMap {
    let imgs: Vec<(usize, Octo)> = images
        .iter()
        .map(|(src, terms)| {
            let mut x = Octo::zero(field);
            for (t, c) in terms.iter() {
                x = &x + &Octo::basis(field, *t).scale(c);
            }
            (*src, x)
        })
        .collect();
    LinMap::from_images(field, &imgs)
}

/// The reduction steps performed in the classification proofs, as fixtures over
/// the rationals with concrete parameter values.
pub fn shipped_scripts() -> Vec<ReductionScript> {
    let f = FieldSpec::Rationals;
    let s = |n: i64| Scalar::from_int(f, n);
    let fr = |n: i64, d: i64| Scalar::from_frac(f, n, d).expect("nonzero denominator");
    let p = |n: u8, a: Scalar| ScriptStep::Apply(MapSpec::prop(n, a));
    let bare = |k: MapKind| ScriptStep::Apply(MapSpec::bare(k));
    let sc = ScriptStep::Scale;

    vec![
        ReductionScript {
            name: "nilpotent-line-drop-e21",
            description: "Im R = F e12: the map of proposition 15 with alpha = 1 removes R(e21) when R(ve22) = R(e21) = e12",
            input: op(f, &[(VE22, &[(E12, s(1))]), (E21, &[(E12, s(1))])]),
            steps: vec![p(15, s(1))],
            output: op(f, &[(VE22, &[(E12, s(1))])]),
        },
        ReductionScript {
            name: "nilpotent-line-merge",
            description: "Im R = F e12 with R(ve22) = e12, R(e21) = 2 e12: rescale e21 by proposition 6, renormalize, then proposition 15",
            input: op(f, &[(VE22, &[(E12, s(1))]), (E21, &[(E12, s(2))])]),
            steps: vec![p(6, fr(1, 2)), sc(s(2)), p(15, s(1))],
            output: op(f, &[(VE22, &[(E12, s(1))])]),
        },
        ReductionScript {
            name: "idempotent-line-involutions",
            description: "Im R = F e11: the classical involution composed with proposition 5 exchanges R(ve11) = e11 and R(e21) = e11",
            input: op(f, &[(VE11, &[(E11, s(1))])]),
            steps: vec![bare(MapKind::Classical), bare(MapKind::Prop(5)), sc(s(-1))],
            output: op(f, &[(E21, &[(E11, s(1))])]),
        },
        ReductionScript {
            name: "idempotent-line-prop13",
            description: "Im R = F e11: proposition 13 with alpha = 1 clears R(ve11) when R(e21) = R(ve11) = e11",
            input: op(f, &[(E21, &[(E11, s(1))]), (VE11, &[(E11, s(1))])]),
            steps: vec![p(13, s(1))],
            output: op(f, &[(E21, &[(E11, s(1))])]),
        },
        ReductionScript {
            name: "idempotent-plane-normalize-ve21",
            description: "Im R = F e11 + F e12 with R(e21) = e11, R(ve21) = 3 e12: proposition 6 with 1/3 and scaling by 3",
            input: op(f, &[(E21, &[(E11, s(1))]), (VE21, &[(E12, s(3))])]),
            steps: vec![p(6, fr(1, 3)), sc(s(3))],
            output: op(f, &[(E21, &[(E11, s(1))]), (VE21, &[(E12, s(1))])]),
        },
        ReductionScript {
            name: "idempotent-plane-clear-e21",
            description: "Im R = F e11 + F e12 with R(e21) = e12, R(ve11) = 2 e12, R(ve21) = 2 e11 + 3 e12: propositions 6, 14, 16 and a scaling",
            input: op(
                f,
                &[
                    (E21, &[(E12, s(1))]),
                    (VE11, &[(E12, s(2))]),
                    (VE21, &[(E11, s(2)), (E12, s(3))]),
                ],
            ),
            steps: vec![p(6, s(2)), sc(fr(1, 4)), p(14, s(1)), p(16, fr(-3, 2))],
            output: op(f, &[(VE11, &[(E12, s(1))]), (VE21, &[(E11, s(1))])]),
        },
        ReductionScript {
            name: "square-zero-plane-chain",
            description: "Im R = F ve12 + F ve22 with R(e21) = ve12, R(ve11) = 2 ve12, R(ve21) = 3 ve22 + 5 ve12: propositions 8, 6, 9, 13 with scalings",
            input: op(
                f,
                &[
                    (E21, &[(VE12, s(1))]),
                    (VE11, &[(VE12, s(2))]),
                    (VE21, &[(VE22, s(3)), (VE12, s(5))]),
                ],
            ),
            steps: vec![
                p(8, s(2)),
                sc(s(2)),
                p(6, fr(2, 5)),
                p(8, fr(5, 2)),
                sc(fr(125, 8)),
                p(9, s(1)),
                p(13, s(1)),
                p(8, fr(3, 2)),
                sc(fr(3, 2)),
            ],
            output: op(f, &[(E21, &[(VE12, s(1))]), (VE21, &[(VE22, s(1))])]),
        },
        ReductionScript {
            name: "nilpotent-space-normalize-e21",
            description: "Im R = F e12 + F ve12 + F ve22 with R(e21) = 3 e12: propositions 8 and 7 with a scaling set the coefficient to 1",
            input: op(
                f,
                &[
                    (E21, &[(E12, s(3))]),
                    (VE11, &[(VE12, s(1))]),
                    (VE21, &[(VE22, s(1)), (E12, s(1))]),
                ],
            ),
            steps: vec![p(8, fr(1, 9)), p(7, s(3)), sc(fr(1, 27))],
            output: op(
                f,
                &[
                    (E21, &[(E12, s(1))]),
                    (VE11, &[(VE12, s(1))]),
                    (VE21, &[(VE22, s(1)), (E12, s(1))]),
                ],
            ),
        },
        ReductionScript {
            name: "idempotent-plane-sqrt-ve11",
            description: "Im R = F e11 + F e12 with R(ve11) = 4 e11, R(ve21) = e12: proposition 7 with sqrt(4) = 2, then scaling by 1/2",
            input: op(f, &[(VE11, &[(E11, s(4))]), (VE21, &[(E12, s(1))])]),
            steps: vec![p(7, s(2)), sc(fr(1, 2))],
            output: op(f, &[(VE11, &[(E11, s(1))]), (VE21, &[(E12, s(1))])]),
        },
        ReductionScript {
            name: "idempotent-plane-sqrt-ve21",
            description: "Im R = F e11 + F e12 with R(ve21) = 4 e11, R(ve22) = e12: proposition 7 with sqrt(4) = 2, then scaling by 1/4",
            input: op(f, &[(VE21, &[(E11, s(4))]), (VE22, &[(E12, s(1))])]),
            steps: vec![p(7, s(2)), sc(fr(1, 4))],
            output: op(f, &[(VE21, &[(E11, s(1))]), (VE22, &[(E12, s(1))])]),
        },
    ]
}

/// Conjugation steps that need `sqrt(alpha)` (available when `alpha` is a square
/// in the field). Each entry is `(name, steps)`; see the catalog for the
/// operator families they connect.
pub fn sqrt_steps(field: FieldSpec, alpha: &Scalar) -> Option<Vec<(&'static str, Vec<ScriptStep>)>> {
    let r = alpha.sqrt()?;
    if r.is_zero() {
        return None;
    }
    let ri = r.inv().ok()?;
    let ai = alpha.inv().ok()?;
    let p = |n: u8, a: Scalar| ScriptStep::Apply(MapSpec::prop(n, a));
    let half = Scalar::from_frac(field, -1, 2).ok()?;
    Some(vec![
        ("prop7-sqrt-then-inv-sqrt", vec![p(7, r.clone()), ScriptStep::Scale(ri.clone())]),
        ("prop7-sqrt-then-inv-alpha", vec![p(7, r.clone()), ScriptStep::Scale(ai.clone())]),
        (
            "prop6-inv-sqrt-prop17-prop16",
            vec![p(6, ri.clone()), p(17, -Scalar::one(field)), p(16, half)],
        ),
        ("prop8-inv-sqrt-then-inv-alpha", vec![p(8, ri.clone()), ScriptStep::Scale(ai)]),
        ("prop7-inv-sqrt-then-inv-sqrt", vec![p(7, ri.clone()), ScriptStep::Scale(ri.clone())]),
        ("prop7-inv-sqrt", vec![p(7, ri)]),
    ])
}
