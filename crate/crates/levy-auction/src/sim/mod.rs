//! The discrete-event engine.
//!
//! Events arrive as a Poisson process. Each event first processes flight
//! expiries, then hands one agent action to the market: either a trader that
//! has not yet arrived enters and submits its opening quote, or an active
//! noise trader takes the next step of its market/limit cycle. Matching runs
//! immediately; transactions discovered through latent-order activation are
//! posted with the timestamp of the subsequent event arrival.
//!
//! A trial ends when every trader has terminated or the event cap is hit.
//! Given a seed, a trial is fully deterministic; sweeps fan trials out across
//! threads with per-trial derived seeds so assembly order never matters.

mod config;
mod efficiency;
mod engine;
pub mod msd;
mod sweep;

pub use config::{Bias, Horizon, NoiseFraction, SimConfig};
pub use efficiency::{efficiency, EfficiencyReport, DURATION_FLOOR};
pub use engine::{run_trial, EventRecord, TradeTape, TrialOutput};
pub use msd::{ensemble_msd, fit_msd_exponent, levy_walk_ensemble, MsdError, MsdEstimate, WalkLog};
pub use sweep::{aggregate_cells, derive_trial_seed, run_sweep, CellAggregate, SweepGrid, TrialRow};
