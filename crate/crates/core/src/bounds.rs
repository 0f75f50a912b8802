//! Lower bounds on communication cost and reducer count.
//!
//! Achieved quantities are integers, so fractional bounds are reported
//! with their ceilings; the raw rationals are kept alongside for
//! reporting. All arithmetic is exact.

use num_rational::Ratio;

use crate::error::{Error, Result};

/// A cost bound and a reducer-count bound, with the raw (pre-ceiling)
/// rationals they were derived from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundPair {
    pub cost_bound: u128,
    pub reducer_bound: u128,
    pub raw_cost: Ratio<u128>,
    pub raw_reducers: Ratio<u128>,
}

impl BoundPair {
    fn from_ratios(raw_cost: Ratio<u128>, raw_reducers: Ratio<u128>) -> Self {
        BoundPair {
            cost_bound: raw_cost.ceil().to_integer(),
            reducer_bound: raw_reducers.ceil().to_integer(),
            raw_cost,
            raw_reducers,
        }
    }
}

/// Lower bounds for A2A with arbitrary sizes: cost at least `s^2/q`,
/// reducers at least `s^2/q^2`, where `s` is the total input size.
pub fn lb_a2a(s: u64, q: u64) -> Result<BoundPair> {
    if q == 0 {
        return Err(Error::Domain("capacity q must be positive".into()));
    }
    let (s, q) = (u128::from(s), u128::from(q));
    Ok(BoundPair::from_ratios(
        Ratio::new(s * s, q),
        Ratio::new(s * s, q * q),
    ))
}

/// Cost lower bound for A2A under a bin-size-`q/k` strategy:
/// `s * floor((sk/q - 1) / (k - 1))`, evaluated with exact rationals.
/// Requires `k >= 2` and `k | q`. Clamped at zero when the floor goes
/// negative (everything fits a single bin).
pub fn lb_a2a_binned(s: u64, q: u64, k: u64) -> Result<u128> {
    if k < 2 {
        return Err(Error::Domain(format!(
            "bin divisor k={k} must be at least 2"
        )));
    }
    if q == 0 || !q.is_multiple_of(k) {
        return Err(Error::Domain(format!(
            "k={k} must divide the capacity q={q} evenly"
        )));
    }
    let (s, q, k) = (i128::from(s), i128::from(q), i128::from(k));
    // floor((sk/q - 1)/(k-1)) = floor((sk - q) / (q(k-1))), exact in integers.
    let copies = (s * k - q).div_euclid(q * (k - 1));
    if copies <= 0 {
        return Ok(0);
    }
    Ok((s * copies) as u128)
}

/// Lower bounds for A2A with unit-size inputs: cost at least
/// `m * floor((m-1)/(q-1))`, reducers at least
/// `floor(m/q) * floor((m-1)/(q-1))`. Requires `q >= 2`.
pub fn lb_a2a_unit(m: u64, q: u64) -> Result<BoundPair> {
    if q < 2 {
        return Err(Error::Domain(format!(
            "unit-input bound needs q >= 2, got {q}"
        )));
    }
    if m == 0 {
        return Ok(BoundPair::from_ratios(
            Ratio::from_integer(0),
            Ratio::from_integer(0),
        ));
    }
    let (m, q) = (u128::from(m), u128::from(q));
    let per_input = (m - 1) / (q - 1);
    Ok(BoundPair::from_ratios(
        Ratio::from_integer(m * per_input),
        Ratio::from_integer((m / q) * per_input),
    ))
}

/// Lower bounds for X2Y: cost at least `2 * sum_x * sum_y / q`, reducers
/// at least `2 * sum_x * sum_y / q^2`.
pub fn lb_x2y(sum_x: u64, sum_y: u64, q: u64) -> Result<BoundPair> {
    if q == 0 {
        return Err(Error::Domain("capacity q must be positive".into()));
    }
    let (sx, sy, q) = (u128::from(sum_x), u128::from(sum_y), u128::from(q));
    Ok(BoundPair::from_ratios(
        Ratio::new(2 * sx * sy, q),
        Ratio::new(2 * sx * sy, q * q),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lb_a2a_all_data_in_one_reducer() {
        let q = 1000;
        let pair = lb_a2a(q, q).unwrap();
        assert_eq!(pair.cost_bound, u128::from(q));
        assert_eq!(pair.reducer_bound, 1);
    }

    #[test]
    fn lb_a2a_rounds_up() {
        let pair = lb_a2a(1340, 1000).unwrap();
        assert_eq!(pair.cost_bound, 1796); // raw 1795.6
        assert_eq!(pair.raw_cost, Ratio::new(1340u128 * 1340, 1000));
    }

    #[test]
    fn lb_a2a_empty() {
        let pair = lb_a2a(0, 5).unwrap();
        assert_eq!((pair.cost_bound, pair.reducer_bound), (0, 0));
    }

    #[test]
    fn lb_a2a_zero_capacity_is_domain_error() {
        assert!(lb_a2a(3, 0).is_err());
    }

    #[test]
    fn lb_binned_examples() {
        let q = 1000;
        assert_eq!(lb_a2a_binned(q, q, 2).unwrap(), u128::from(q));
        assert_eq!(lb_a2a_binned(3 * q, q, 2).unwrap(), u128::from(3 * q) * 5);
        assert_eq!(lb_a2a_binned(2 * q, q, 2).unwrap(), u128::from(6 * q));
        // s=3q, k=3 -> 3q * floor((9-1)/2) = 12q
        let q = 999;
        assert_eq!(lb_a2a_binned(3 * q, q, 3).unwrap(), u128::from(12 * q));
    }

    #[test]
    fn lb_binned_rejects_bad_k() {
        assert!(lb_a2a_binned(10, 10, 1).is_err());
        assert!(lb_a2a_binned(10, 10, 3).is_err()); // 3 does not divide 10
    }

    #[test]
    fn lb_binned_clamps_below_one_bin() {
        assert_eq!(lb_a2a_binned(1, 100, 2).unwrap(), 0);
    }

    #[test]
    fn lb_unit_examples() {
        let pair = lb_a2a_unit(9, 3).unwrap();
        assert_eq!((pair.cost_bound, pair.reducer_bound), (36, 12));
        let pair = lb_a2a_unit(15, 3).unwrap();
        assert_eq!((pair.cost_bound, pair.reducer_bound), (105, 35));
        let pair = lb_a2a_unit(4, 4).unwrap();
        assert_eq!((pair.cost_bound, pair.reducer_bound), (4, 1));
        assert!(lb_a2a_unit(4, 1).is_err());
    }

    #[test]
    fn lb_x2y_examples() {
        let q = 10;
        let pair = lb_x2y(q / 2, q / 2, q).unwrap();
        assert_eq!(pair.cost_bound, u128::from(q / 2)); // ceil(2 (q/2)^2 / q)
        let pair = lb_x2y(0, 7, q).unwrap();
        assert_eq!((pair.cost_bound, pair.reducer_bound), (0, 0));
        let pair = lb_x2y(q, q, q).unwrap();
        assert_eq!(
            (pair.cost_bound, pair.reducer_bound),
            (2 * u128::from(q), 2)
        );
    }

    proptest! {
        #[test]
        fn lb_a2a_monotone_in_s(s in 0u64..10_000, delta in 1u64..1000, q in 1u64..500) {
            let lo = lb_a2a(s, q).unwrap();
            let hi = lb_a2a(s + delta, q).unwrap();
            prop_assert!(hi.cost_bound >= lo.cost_bound);
            prop_assert!(hi.reducer_bound >= lo.reducer_bound);
        }

        #[test]
        fn lb_a2a_antitone_in_q(s in 0u64..10_000, q in 1u64..500, delta in 1u64..100) {
            let big_q = lb_a2a(s, q + delta).unwrap();
            let small_q = lb_a2a(s, q).unwrap();
            prop_assert!(big_q.cost_bound <= small_q.cost_bound);
        }

        #[test]
        fn lb_unit_dominates_general_when_floors_align(j in 1u64..300, q in 2u64..64) {
            // At m = jq the floors introduce no loss and integrality only
            // sharpens. (For general m the floor in (m-1)/(q-1) can drop the
            // unit bound below s^2/q; see `unit_bound_can_lose_to_general`.)
            let m = j * q;
            let unit = lb_a2a_unit(m, q).unwrap();
            let general = lb_a2a(m, q).unwrap();
            prop_assert!(unit.cost_bound >= general.cost_bound,
                "unit {} < general {} at m={}, q={}", unit.cost_bound, general.cost_bound, m, q);
        }
    }

    #[test]
    fn unit_bound_can_lose_to_general() {
        // m=4, q=3: unit gives 4*floor(3/2)=4, general gives ceil(16/3)=6.
        // Reporting therefore takes the componentwise max of the two.
        assert_eq!(lb_a2a_unit(4, 3).unwrap().cost_bound, 4);
        assert_eq!(lb_a2a(4, 3).unwrap().cost_bound, 6);
    }
}
