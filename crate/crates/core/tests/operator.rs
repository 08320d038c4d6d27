mod common;

use std::sync::OnceLock;

use common::{fp, q, random_octo, sample_params};
use octorb::algebra::{Octo, DIM, E11};
use octorb::catalog::{enumerate_all_admissible, enumerate_catalog, Source};
use octorb::maps::{build_map, MapKind, MapSpec};
use octorb::operator::{conjugate, LinMap, RbWitness};
use octorb::search::generator_specs;
use octorb::{FieldSpec, Scalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f5() -> FieldSpec {
    fp(5)
}

fn catalog_f5() -> &'static [LinMap] {
    static OPS: OnceLock<Vec<LinMap>> = OnceLock::new();
    OPS.get_or_init(|| {
        enumerate_all_admissible(f5(), &Source::all())
            .into_iter()
            .map(|(_, r)| r)
            .collect()
    })
}

fn catalog_q() -> Vec<LinMap> {
    enumerate_catalog(q(), &Source::all(), &sample_params(q()))
        .into_iter()
        .map(|(_, r)| r)
        .collect()
}

fn random_map(rng: &mut ChaCha8Rng, f: FieldSpec) -> LinMap {
    LinMap::from_columns(f, (0..DIM).map(|_| random_octo(rng, f)).collect()).unwrap()
}

fn rb_on_pairs(r: &LinMap, rng: &mut ChaCha8Rng, n: usize) -> bool {
    (0..n).all(|_| {
        let x = random_octo(rng, r.field());
        let y = random_octo(rng, r.field());
        let (rx, ry) = (r.apply(&x), r.apply(&y));
        rx.mul(&ry) == r.apply(&(&rx.mul(&y) + &x.mul(&ry)))
    })
}

#[test]
fn basis_check_agrees_with_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for f in [q(), f5()] {
        let ops = if f == q() { catalog_q() } else { catalog_f5().to_vec() };
        for r in ops.iter().step_by(7) {
            assert!(rb_on_pairs(r, &mut rng, 500));
        }
        for _ in 0..20 {
            let r = random_map(&mut rng, f);
            assert_eq!(r.is_rb(), rb_on_pairs(&r, &mut rng, 500));
        }
    }
}

#[test]
fn identity_witness_is_first_pair() {
    let f = q();
    let err = LinMap::identity(f).check_rb().unwrap_err();
    let RbWitness { i, j, lhs, rhs } = err;
    assert_eq!((i, j), (E11, E11));
    assert_eq!(lhs, Octo::basis(f, E11));
    assert_eq!(rhs, Octo::basis(f, E11).scale(&Scalar::from_int(f, 2)));
}

fn strategy() -> impl Strategy<Value = (usize, usize, u8)> {
    let n_ops = catalog_f5().len();
    let n_gens = generator_specs(f5()).len();
    (0..n_ops, 0..n_gens, 1u8..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conjugation_and_scaling_keep_fingerprint((oi, gi, lam) in strategy()) {
        let f = f5();
        let r = &catalog_f5()[oi];
        let phi = build_map(&generator_specs(f)[gi], f).unwrap();
        let c = conjugate(r, &phi).unwrap().scale(&Scalar::from_int(f, lam as i64));
        prop_assert_eq!(c.fingerprint(), r.fingerprint());
        prop_assert!(c.is_rb());
        prop_assert!(c.bimodule_check());
    }

    #[test]
    fn conjugation_round_trip((oi, gi, _l) in strategy()) {
        let f = f5();
        let r = &catalog_f5()[oi];
        let phi = build_map(&generator_specs(f)[gi], f).unwrap();
        let back = conjugate(&conjugate(r, &phi).unwrap(), &phi.inverse().unwrap()).unwrap();
        prop_assert_eq!(&back, r);
    }

    #[test]
    fn scaling_keeps_rb_status(seed in any::<u64>(), lam in 1i64..5) {
        let f = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_map(&mut rng, f);
        let l = Scalar::from_int(f, lam);
        prop_assert_eq!(r.scale(&l).is_rb(), r.is_rb());
        prop_assert_eq!(r.scale(&l).fingerprint(), r.fingerprint());
    }

    #[test]
    fn rank_nullity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for f in [q(), f5()] {
            let r = random_map(&mut rng, f);
            let ki = r.rank_kernel_image();
            prop_assert_eq!(ki.rank + ki.kernel.len(), DIM);
            prop_assert!(ki.kernel.iter().all(|k| r.apply(k).is_zero()));
        }
    }
}

#[test]
fn classical_conjugation_of_catalog() {
    let f = f5();
    let phi = build_map(&MapSpec::bare(MapKind::Classical), f).unwrap();
    for r in catalog_f5() {
        assert!(conjugate(r, &phi).unwrap().is_rb());
    }
}
