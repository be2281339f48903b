//! The experiment grid: event rates x flight exponents x bias sets, with a
//! fixed number of independently seeded trials per cell.

use rayon::prelude::*;

use super::config::{Bias, SimConfig};
use super::engine::run_trial;

/// A sweep over {event_rates} x {gammas} x {biases} with `trials` trials per
/// cell. All trials share the template's remaining parameters.
#[derive(Clone, Debug)]
pub struct SweepGrid {
    pub event_rates: Vec<f64>,
    pub gammas: Vec<f64>,
    pub biases: Vec<Bias>,
    pub trials: u32,
    pub template: SimConfig,
}

impl SweepGrid {
    pub fn n_cells(&self) -> usize {
        self.event_rates.len() * self.gammas.len() * self.biases.len()
    }

    pub fn n_trials_total(&self) -> usize {
        self.n_cells() * self.trials as usize
    }
}

/// One row of the per-trial summary CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRow {
    pub event_rate: f64,
    pub gamma: f64,
    pub bias: Bias,
    pub trial: u32,
    pub seed: u64,
    pub n_trades: usize,
    pub efficiency: f64,
    pub trades_per_event: f64,
    pub noise_fraction: f64,
}

/// Per-cell mean/stddev aggregate.
#[derive(Clone, Debug, PartialEq)]
pub struct CellAggregate {
    pub event_rate: f64,
    pub gamma: f64,
    pub bias: Bias,
    pub n_trials: usize,
    pub mean_efficiency: f64,
    pub std_efficiency: f64,
    pub mean_trades_per_event: f64,
    pub std_trades_per_event: f64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Seed for one (cell, trial) pair. Mixing the cell coordinates keeps the
/// per-trial streams of distinct cells disjoint regardless of grid shape or
/// worker scheduling.
pub fn derive_trial_seed(base: u64, event_rate: f64, gamma: f64, bias: Bias, trial: u32) -> u64 {
    let mut h = splitmix64(base ^ 0x6c65_7679_6175_6374);
    h = splitmix64(h ^ event_rate.to_bits());
    h = splitmix64(h ^ gamma.to_bits());
    h = splitmix64(h ^ (bias == Bias::QuantityBias) as u64);
    splitmix64(h ^ trial as u64)
}

#[derive(thiserror::Error, Debug, PartialEq)]
pub enum SweepError {
    #[error("sweep grid is empty")]
    EmptyGrid,
    #[error("template config invalid: {0}")]
    BadTemplate(#[from] super::config::ConfigError),
}

/// Run every trial of the grid, in parallel, and return the per-trial rows in
/// deterministic (rate, gamma, bias, trial) order. Individual trial failures
/// are skipped; the rows carry only completed trials.
pub fn run_sweep(grid: &SweepGrid) -> Result<Vec<TrialRow>, SweepError> {
    if grid.n_trials_total() == 0 {
        return Err(SweepError::EmptyGrid);
    }
    grid.template.validate()?;

    let mut jobs = Vec::with_capacity(grid.n_trials_total());
    for &event_rate in &grid.event_rates {
        for &gamma in &grid.gammas {
            for &bias in &grid.biases {
                for trial in 0..grid.trials {
                    let seed =
                        derive_trial_seed(grid.template.seed, event_rate, gamma, bias, trial);
                    let config = SimConfig {
                        event_rate,
                        gamma,
                        bias,
                        seed,
                        record_events: false,
                        ..grid.template.clone()
                    };
                    jobs.push((event_rate, gamma, bias, trial, seed, config));
                }
            }
        }
    }

    let rows: Vec<Option<TrialRow>> = jobs
        .par_iter()
        .map(|(event_rate, gamma, bias, trial, seed, config)| {
            run_trial(config).ok().map(|out| TrialRow {
                event_rate: *event_rate,
                gamma: *gamma,
                bias: *bias,
                trial: *trial,
                seed: *seed,
                n_trades: out.report.n_trades,
                efficiency: out.report.efficiency,
                trades_per_event: out.report.trades_per_event,
                noise_fraction: out.noise_fraction_realized,
            })
        })
        .collect();

    Ok(rows.into_iter().flatten().collect())
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    (mean, var.sqrt())
}

/// Collapse trial rows into per-cell aggregates, keyed and ordered by the
/// cell coordinates as they first appear.
pub fn aggregate_cells(rows: &[TrialRow]) -> Vec<CellAggregate> {
    let mut cells: Vec<(f64, f64, Bias)> = Vec::new();
    for row in rows {
        let key = (row.event_rate, row.gamma, row.bias);
        if !cells.contains(&key) {
            cells.push(key);
        }
    }
    cells
        .into_iter()
        .map(|(event_rate, gamma, bias)| {
            let eff: Vec<f64> = rows
                .iter()
                .filter(|r| r.event_rate == event_rate && r.gamma == gamma && r.bias == bias)
                .map(|r| r.efficiency)
                .collect();
            let tpe: Vec<f64> = rows
                .iter()
                .filter(|r| r.event_rate == event_rate && r.gamma == gamma && r.bias == bias)
                .map(|r| r.trades_per_event)
                .collect();
            let (mean_efficiency, std_efficiency) = mean_std(&eff);
            let (mean_trades_per_event, std_trades_per_event) = mean_std(&tpe);
            CellAggregate {
                event_rate,
                gamma,
                bias,
                n_trials: eff.len(),
                mean_efficiency,
                std_efficiency,
                mean_trades_per_event,
                std_trades_per_event,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_template() -> SimConfig {
        SimConfig {
            n_traders: 20,
            seed: 11,
            ..SimConfig::default()
        }
    }

    #[test]
    fn one_cell_one_trial_gives_one_row() {
        let grid = SweepGrid {
            event_rates: vec![10.0],
            gammas: vec![1.5],
            biases: vec![Bias::NoBias],
            trials: 1,
            template: small_template(),
        };
        let rows = run_sweep(&grid).unwrap();
        assert_eq!(rows.len(), 1);
        let aggregates = aggregate_cells(&rows);
        assert_eq!(aggregates.len(), 1);
        assert_eq!(aggregates[0].n_trials, 1);
    }

    #[test]
    fn empty_grid_is_an_error() {
        let grid = SweepGrid {
            event_rates: vec![],
            gammas: vec![1.5],
            biases: vec![Bias::NoBias],
            trials: 1,
            template: small_template(),
        };
        assert_eq!(run_sweep(&grid).unwrap_err(), SweepError::EmptyGrid);
    }

    #[test]
    fn distinct_cells_use_disjoint_seed_sets() {
        let seeds_a: Vec<u64> = (0..30)
            .map(|t| derive_trial_seed(1, 10.0, 1.5, Bias::NoBias, t))
            .collect();
        let seeds_b: Vec<u64> = (0..30)
            .map(|t| derive_trial_seed(1, 10.0, 2.5, Bias::NoBias, t))
            .collect();
        assert!(seeds_a.iter().all(|s| !seeds_b.contains(s)));
    }

    #[test]
    fn rows_are_ordered_and_reproducible() {
        let grid = SweepGrid {
            event_rates: vec![10.0, 100.0],
            gammas: vec![0.5, 1.5],
            biases: vec![Bias::NoBias, Bias::QuantityBias],
            trials: 2,
            template: small_template(),
        };
        let rows_a = run_sweep(&grid).unwrap();
        let rows_b = run_sweep(&grid).unwrap();
        assert_eq!(rows_a, rows_b);
        assert_eq!(rows_a.len(), 16);
    }
}
