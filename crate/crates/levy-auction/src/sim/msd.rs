//! Mean-squared-displacement analysis of quote walks.
//!
//! The displacement variance of an ensemble of walkers classifies the
//! transport regime: its growth exponent alpha is 1 for Brownian motion
//! (gamma > 2), 3 - gamma in the superdiffusive band (1 < gamma < 2) and 2
//! in the ballistic regime (gamma < 1). The estimator runs a log-log
//! regression of the ensemble MSD against time over the central decade of
//! the observation window.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::agents::{sample_flight_time, FlightTimeDist};

/// Positions of an ensemble of walkers sampled on a shared time grid.
#[derive(Clone, Debug)]
pub struct WalkLog {
    pub times: Vec<f64>,
    /// One row per walker, aligned with `times`.
    pub positions: Vec<Vec<f64>>,
}

#[derive(thiserror::Error, Debug, PartialEq)]
pub enum MsdError {
    #[error("need at least {needed} samples in the fit window, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("msd values must be positive for a log-log fit")]
    NonPositiveMsd,
}

/// Exponent estimate from the log-log fit.
#[derive(Clone, Copy, Debug)]
pub struct MsdEstimate {
    pub alpha: f64,
    pub std_error: f64,
    pub n_points: usize,
    /// Time window the regression used.
    pub window: (f64, f64),
}

/// Log-spaced observation grid.
pub fn log_spaced_times(t_min: f64, t_max: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && t_min > 0.0 && t_max > t_min);
    let (a, b) = (t_min.ln(), t_max.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Simulate constant-speed walkers with power-tail flight times: each flight
/// picks a fresh random direction and lasts `tau ~ gamma/(1+tau)^(1+gamma)`.
pub fn levy_walk_ensemble(
    gamma: f64,
    speed: f64,
    n_walkers: usize,
    times: &[f64],
    seed: u64,
) -> WalkLog {
    let dist = FlightTimeDist::new(gamma);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions = Vec::with_capacity(n_walkers);
    for _ in 0..n_walkers {
        let mut row = Vec::with_capacity(times.len());
        let mut x = 0.0f64;
        let mut t_state = 0.0f64;
        let mut direction = if rng.random::<f64>() < 0.5 { 1.0 } else { -1.0 };
        let mut flight_end = draw_flight(&mut rng, dist);
        for &t_obs in times {
            while flight_end < t_obs {
                x += direction * speed * (flight_end - t_state);
                t_state = flight_end;
                direction = if rng.random::<f64>() < 0.5 { 1.0 } else { -1.0 };
                flight_end += draw_flight(&mut rng, dist);
            }
            row.push(x + direction * speed * (t_obs - t_state));
        }
        positions.push(row);
    }
    WalkLog {
        times: times.to_vec(),
        positions,
    }
}

fn draw_flight<R: Rng>(rng: &mut R, dist: FlightTimeDist) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return sample_flight_time(dist, u).expect("draw in range");
        }
    }
}

/// Ensemble MSD at each observation time: the variance of walker positions.
pub fn ensemble_msd(log: &WalkLog) -> Vec<(f64, f64)> {
    let n = log.positions.len() as f64;
    log.times
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let mean: f64 = log.positions.iter().map(|row| row[j]).sum::<f64>() / n;
            let var: f64 = log
                .positions
                .iter()
                .map(|row| (row[j] - mean).powi(2))
                .sum::<f64>()
                / n;
            (t, var)
        })
        .collect()
}

/// Fit `msd ~ t^alpha` by ordinary least squares on log-log axes, restricted
/// to the central decade of the time grid.
pub fn fit_msd_exponent(msd: &[(f64, f64)]) -> Result<MsdEstimate, MsdError> {
    let positive: Vec<(f64, f64)> = msd.iter().copied().filter(|&(t, _)| t > 0.0).collect();
    if positive.len() < 3 {
        return Err(MsdError::TooFewSamples {
            needed: 3,
            got: positive.len(),
        });
    }
    let t_lo = positive.first().unwrap().0;
    let t_hi = positive.last().unwrap().0;
    let centre = 0.5 * (t_lo.log10() + t_hi.log10());
    let span = t_hi.log10() - t_lo.log10();
    // Central decade, or the whole grid when it spans less than one decade.
    let (w_lo, w_hi) = if span <= 1.0 {
        (t_lo, t_hi)
    } else {
        (10f64.powf(centre - 0.5), 10f64.powf(centre + 0.5))
    };

    let window: Vec<(f64, f64)> = positive
        .iter()
        .copied()
        .filter(|&(t, _)| t >= w_lo && t <= w_hi)
        .collect();
    if window.len() < 3 {
        return Err(MsdError::TooFewSamples {
            needed: 3,
            got: window.len(),
        });
    }
    if window.iter().any(|&(_, m)| m <= 0.0) {
        return Err(MsdError::NonPositiveMsd);
    }

    let xs: Vec<f64> = window.iter().map(|&(t, _)| t.ln()).collect();
    let ys: Vec<f64> = window.iter().map(|&(_, m)| m.ln()).collect();
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let dof = (xs.len().max(3) - 2) as f64;
    let std_error = (rss / dof / sxx).sqrt();

    Ok(MsdEstimate {
        alpha: slope,
        std_error,
        n_points: window.len(),
        window: (w_lo, w_hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_recovers_its_exponent() {
        let msd: Vec<(f64, f64)> = log_spaced_times(1.0, 1000.0, 30)
            .into_iter()
            .map(|t| (t, 3.0 * t.powf(1.7)))
            .collect();
        let fit = fit_msd_exponent(&msd).unwrap();
        assert!((fit.alpha - 1.7).abs() < 1e-9);
        assert!(fit.std_error < 1e-9);
    }

    #[test]
    fn too_few_samples_is_flagged() {
        let msd = vec![(1.0, 1.0), (2.0, 2.0)];
        assert!(matches!(
            fit_msd_exponent(&msd),
            Err(MsdError::TooFewSamples { .. })
        ));
    }

    #[test]
    fn ballistic_walkers_spread_quadratically() {
        let times = log_spaced_times(1.0, 100.0, 15);
        let log = levy_walk_ensemble(0.5, 1.0, 2000, &times, 9);
        let fit = fit_msd_exponent(&ensemble_msd(&log)).unwrap();
        assert!(
            (fit.alpha - 2.0).abs() < 0.2,
            "ballistic exponent came out {}",
            fit.alpha
        );
    }
}
