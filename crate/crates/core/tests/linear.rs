mod common;

use common::{brute_force_growth, jordan_by_multiplication, random_family, OracleVerdict};
use limitlab_core::limits::{classify_boundedness, Boundedness, EstimatorConfig};
use limitlab_core::linear::{classify_growth, jordan_block_power, omega_nonempty_linear, GrowthVerdict};

#[test]
fn jordan_power_matches_repeated_multiplication() {
    for lambda in [0.5, 1.0, 2.0] {
        for m in 1..=4 {
            for k in 0..=50u32 {
                let closed = jordan_block_power(lambda, m, k);
                let brute = jordan_by_multiplication(lambda, m, k);
                for (c, b) in closed.iter().zip(brute.iter()) {
                    assert!((c - b).abs() <= 1e-9 * b.abs().max(1.0), "lambda={lambda} m={m} k={k}");
                }
            }
        }
    }
}

#[test]
fn growth_agrees_with_brute_force_on_random_family() {
    let mut determined = 0;
    for (i, (sys, xi)) in random_family(7, 100).iter().enumerate() {
        let g = classify_growth(sys, xi, 1e-8).unwrap();
        let expected = match brute_force_growth(sys, xi) {
            OracleVerdict::Vanishes => GrowthVerdict::Vanishes,
            OracleVerdict::Bounded => GrowthVerdict::BoundedNonvanishing,
            OracleVerdict::Unbounded => GrowthVerdict::Unbounded,
            OracleVerdict::Undetermined => continue,
        };
        determined += 1;
        assert_eq!(g.verdict, expected, "system {i}: {:?}", sys.matrix());
    }
    assert!(determined >= 50, "only {determined} determined cases");
}

#[test]
fn omega_nonempty_matches_simulated_boundedness() {
    let cfg = EstimatorConfig::default();
    for (i, (sys, xi)) in random_family(11, 100).iter().enumerate() {
        let verdict = classify_boundedness(&sys.to_map("family"), xi, &cfg).verdict;
        if verdict == Boundedness::Undetermined {
            continue;
        }
        assert_eq!(omega_nonempty_linear(sys, xi).unwrap(), verdict == Boundedness::Bounded, "system {i}");
    }
}

#[test]
fn oracle_fixture_values() {
    let o = common::oracle();
    let j = jordan_block_power(0.5, 2, 3);
    assert_eq!(o["jordan_0.5_2_3"][0][1].as_f64().unwrap(), j[(0, 1)]);
}
