#![allow(dead_code)]

use octorb::algebra::DIM;
use octorb::{FieldSpec, Octo, Scalar};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q() -> FieldSpec {
    FieldSpec::Rationals
}

pub fn fp(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

pub fn s(f: FieldSpec, n: i64) -> Scalar {
    Scalar::from_int(f, n)
}

/// Small rationals n/d with |n| <= 5, 1 <= d <= 3; uniform residues over F_p.
pub fn random_scalar(rng: &mut ChaCha8Rng, f: FieldSpec) -> Scalar {
    match f {
        FieldSpec::Rationals => {
            Scalar::from_frac(f, rng.gen_range(-5..=5), rng.gen_range(1..=3)).unwrap()
        }
        FieldSpec::Prime(p) => Scalar::from_int(f, rng.gen_range(0..p.get() as i64)),
    }
}

pub fn random_octo(rng: &mut ChaCha8Rng, f: FieldSpec) -> Octo {
    let coords = (0..DIM).map(|_| random_scalar(rng, f)).collect();
    Octo::from_coords(f, coords).unwrap()
}

pub fn sample_params(f: FieldSpec) -> Vec<Scalar> {
    match f {
        FieldSpec::Rationals => ["-2", "-1", "1/2", "1", "2", "3"]
            .iter()
            .map(|t| Scalar::parse(f, t).unwrap())
            .collect(),
        _ => f.elements().unwrap(),
    }
}
