//! Search efficiency: the rate of trades.
//!
//! The efficiency of the search is the mean reciprocal trade duration, where
//! a trade duration is the gap between consecutive transactions. Two trades
//! printed at one timestamp would make a reciprocal blow up, so durations are
//! floored at one microsecond.

use crate::book::Trade;

/// Floor applied to trade durations before taking reciprocals, in seconds.
pub const DURATION_FLOOR: f64 = 1e-6;

/// Summary of one trial's trading activity.
#[derive(Clone, Debug, PartialEq)]
pub struct EfficiencyReport {
    pub n_trades: usize,
    /// Gaps between consecutive trade timestamps; empty when fewer than two
    /// trades printed.
    pub trade_durations: Vec<f64>,
    /// Mean of 1/duration (durations floored at [`DURATION_FLOOR`]).
    pub efficiency: f64,
    /// Trades per event consumed by the trial.
    pub trades_per_event: f64,
    pub noise_fraction_realized: f64,
    /// Set when the tape held fewer than two trades and the efficiency is
    /// reported as zero by convention.
    pub degenerate: bool,
}

/// Compute the efficiency report for a tape. `n_events` is the number of
/// events the trial consumed and `noise_fraction` the realized trader mix;
/// pass zero/zero when analysing a bare tape.
pub fn efficiency(trades: &[Trade], n_events: u64, noise_fraction: f64) -> EfficiencyReport {
    debug_assert!(
        trades.windows(2).all(|w| w[0].time <= w[1].time),
        "tape timestamps must be nondecreasing"
    );
    let n_trades = trades.len();
    let trade_durations: Vec<f64> = trades.windows(2).map(|w| w[1].time - w[0].time).collect();
    let degenerate = n_trades < 2;
    let efficiency = if degenerate {
        0.0
    } else {
        let sum: f64 = trade_durations
            .iter()
            .map(|&d| 1.0 / d.max(DURATION_FLOOR))
            .sum();
        sum / trade_durations.len() as f64
    };
    let trades_per_event = if n_events == 0 {
        0.0
    } else {
        n_trades as f64 / n_events as f64
    };
    EfficiencyReport {
        n_trades,
        trade_durations,
        efficiency,
        trades_per_event,
        noise_fraction_realized: noise_fraction,
        degenerate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::book::{Side, Trade};
    use crate::price::Price;

    fn tape(times: &[f64]) -> Vec<Trade> {
        times
            .iter()
            .map(|&t| Trade {
                time: t,
                price: Price::from_currency(100.0),
                quantity: 1,
                buyer_trader_id: 1,
                seller_trader_id: 2,
                buyer_order_id: 0,
                seller_order_id: 0,
                aggressor_side: Side::Buy,
            })
            .collect()
    }

    #[test]
    fn definition_arithmetic() {
        let report = efficiency(&tape(&[1.0, 2.0, 4.0]), 10, 0.5);
        assert_eq!(report.trade_durations, vec![1.0, 2.0]);
        assert!((report.efficiency - 0.75).abs() < 1e-15);
        assert!((report.trades_per_event - 0.3).abs() < 1e-15);
        assert!(!report.degenerate);
    }

    #[test]
    fn single_trade_is_degenerate() {
        let report = efficiency(&tape(&[1.0]), 5, 0.0);
        assert!(report.degenerate);
        assert_eq!(report.efficiency, 0.0);
        assert!(report.trade_durations.is_empty());
    }

    #[test]
    fn zero_durations_are_floored() {
        let report = efficiency(&tape(&[1.0, 1.0]), 5, 0.0);
        assert!((report.efficiency - 1.0 / DURATION_FLOOR).abs() < 1e-3);
    }

    #[test]
    fn matches_independent_recomputation() {
        // Independent oracle: recompute from scratch with a different code
        // path over a pseudo-random tape.
        let mut times = Vec::new();
        let mut t = 0.0f64;
        let mut state = 0x2545f4914f6cdd1du64;
        for _ in 0..1000 {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            t += (state % 1000) as f64 / 997.0 + 1e-4;
            times.push(t);
        }
        let report = efficiency(&tape(&times), 1000, 0.0);
        let mut oracle = 0.0;
        for i in 1..times.len() {
            oracle += 1.0 / (times[i] - times[i - 1]).max(DURATION_FLOOR);
        }
        oracle /= (times.len() - 1) as f64;
        let rel = (report.efficiency - oracle).abs() / oracle;
        assert!(rel < 1e-12, "relative error {rel}");
    }

    #[test]
    fn invariant_under_time_translation() {
        let base = efficiency(&tape(&[1.0, 2.5, 7.0, 7.2]), 4, 0.0);
        let shifted_times: Vec<f64> = [1.0, 2.5, 7.0, 7.2].iter().map(|t| t + 1000.0).collect();
        let shifted = efficiency(&tape(&shifted_times), 4, 0.0);
        assert!((base.efficiency - shifted.efficiency).abs() < 1e-9);
    }
}
