//! Random cross-checks of the reduction engine against the brute-force
//! oracle, at a smaller scale than the acceptance suite.

use novikov_core::exponent::Exponent;
use novikov_core::field::{Field, PrimeField};
use novikov_core::generate::{ApproxInstance, InstanceGenerator};
use novikov_core::oracle::{oracle_best_approx, window_start, OracleConfig, OracleError, OracleOutcome};
use novikov_core::period::ValueGroup;
use novikov_core::reduction::{best_approx, ApproxResult, ApproxStatus};
use novikov_core::series::Valuation;

fn check_one<F: Field>(instance: &ApproxInstance<F>) -> Result<(ApproxResult<F>, OracleOutcome), OracleError> {
    let r = best_approx(
        &instance.matrix,
        &instance.weights,
        &instance.target,
        &instance.precision,
    )
    .expect("positive precision");
    let x_lo = window_start(
        instance
            .target
            .weighted_valuation(&instance.weights)
            .lower_bound(),
        &r.gamma,
        &instance.group,
    );
    let cfg = OracleConfig::new(instance.group.clone(), x_lo, instance.precision.clone());
    let oracle = oracle_best_approx(&instance.matrix, &instance.weights, &instance.target, &cfg)?;
    Ok((r, oracle))
}

fn agreement<F: Field>(r: &ApproxResult<F>, oracle: &OracleOutcome, precision: &Exponent) -> bool {
    match (&r.distance, oracle) {
        (Valuation::Known(d), OracleOutcome::Finite(o)) => d == o && d < precision,
        (Valuation::Known(d), OracleOutcome::AtLeastCap) => d >= precision,
        (Valuation::AtLeast(b), OracleOutcome::AtLeastCap) => b >= precision,
        (Valuation::Infinite, OracleOutcome::AtLeastCap) => true,
        _ => false,
    }
}

#[test]
fn reduction_agrees_with_oracle_on_random_instances() {
    let gen = InstanceGenerator::new(2024);
    let mut checked = 0usize;
    let mut skipped = 0usize;
    let mut index = 0u64;
    while checked < 200 && index < 1000 {
        index += 1;
        let group = if index % 2 == 0 {
            ValueGroup::from_step(Exponent::one())
        } else {
            ValueGroup::from_step(Exponent::from_ratio(1, 2))
        };
        let outcome = if index % 3 == 0 {
            let inst = gen.approx_instance(PrimeField::new(3), index, group);
            check_one(&inst).map(|(r, o)| {
                (agreement(&r, &o, &inst.precision), r.certificate.holds,
                 format!("{:?}", r.distance), format!("{o:?}"))
            })
        } else {
            let inst = gen.approx_instance(PrimeField::new(2), index, group);
            check_one(&inst).map(|(r, o)| {
                (agreement(&r, &o, &inst.precision), r.certificate.holds,
                 format!("{:?}", r.distance), format!("{o:?}"))
            })
        };
        match outcome {
            Err(OracleError::SearchSpaceTooLarge { .. }) => skipped += 1,
            Err(e) => panic!("index {index}: unexpected oracle error {e}"),
            Ok((agree, cert_holds, dist, oracle)) => {
                assert!(
                    agree,
                    "index {index}: reduction said {dist}, oracle said {oracle}"
                );
                assert!(cert_holds, "index {index}: gamma certificate failed");
                checked += 1;
            }
        }
    }
    assert!(checked >= 200, "only {checked} instances checked ({skipped} skipped)");
}
