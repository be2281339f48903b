//! Trial configuration.

use crate::price::Price;

/// Order-quantity regime. Unit quantities keep supply and demand balanced;
/// the biased set draws each trader's quantity uniformly from 1..=5.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Bias {
    NoBias,
    QuantityBias,
}

impl Bias {
    pub fn as_str(self) -> &'static str {
        match self {
            Bias::NoBias => "none",
            Bias::QuantityBias => "quantity",
        }
    }
}

impl std::str::FromStr for Bias {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" | "no-bias" => Ok(Bias::NoBias),
            "quantity" | "bias" => Ok(Bias::QuantityBias),
            other => Err(format!("unknown bias {other:?} (expected none|quantity)")),
        }
    }
}

/// Share of noise traders: either drawn uniformly per trial or fixed.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum NoiseFraction {
    RandomUniform,
    Fixed(f64),
}

impl std::str::FromStr for NoiseFraction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "random-uniform" {
            return Ok(NoiseFraction::RandomUniform);
        }
        let value: f64 = s
            .parse()
            .map_err(|_| format!("bad noise_fraction {s:?} (expected a number or random-uniform)"))?;
        if !(0.0..=1.0).contains(&value) {
            return Err(format!("noise_fraction {value} outside [0, 1]"));
        }
        Ok(NoiseFraction::Fixed(value))
    }
}

/// Stopping rule for a trial, applied on top of "all traders terminated".
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Horizon {
    /// Hard cap on the number of events.
    pub max_events: u64,
    /// Optional cap on the simulated clock, in seconds.
    pub max_seconds: Option<f64>,
}

impl Default for Horizon {
    fn default() -> Self {
        Horizon {
            max_events: 1_000_000,
            max_seconds: None,
        }
    }
}

#[derive(thiserror::Error, Debug, PartialEq)]
pub enum ConfigError {
    #[error("n_traders must be at least 1")]
    NoTraders,
    #[error("event_rate must be positive, got {0}")]
    BadEventRate(f64),
    #[error("gamma must be positive, got {0}")]
    BadGamma(f64),
    #[error("u0 must be positive, got {0}")]
    BadU0(f64),
    #[error("initial_price must be positive, got {0}")]
    BadInitialPrice(f64),
    #[error("noise_fraction {0} outside [0, 1]")]
    BadNoiseFraction(f64),
    #[error("horizon must allow at least one event")]
    EmptyHorizon,
}

/// Everything a trial needs; one seed pins the whole run.
#[derive(Clone, PartialEq, Debug)]
pub struct SimConfig {
    pub n_traders: u32,
    /// Poisson event arrival rate, events per second.
    pub event_rate: f64,
    /// Flight-time tail exponent.
    pub gamma: f64,
    /// Cauchy velocity scale.
    pub u0: f64,
    pub bias: Bias,
    pub noise_fraction: NoiseFraction,
    pub initial_price: f64,
    pub horizon: Horizon,
    pub seed: u64,
    /// Noise-trader budget as a multiple of the initial price.
    pub noise_budget_multiple: f64,
    /// Probability that a strategic trader quotes a limit order.
    pub strategic_limit_prob: f64,
    /// Latent price-trigger tolerance, in currency.
    pub activation_tolerance: f64,
    /// Keep a full event log in the trial output.
    pub record_events: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n_traders: 1000,
            event_rate: 10.0,
            gamma: 1.5,
            u0: 1.0,
            bias: Bias::NoBias,
            noise_fraction: NoiseFraction::RandomUniform,
            initial_price: 100.0,
            horizon: Horizon::default(),
            seed: 0,
            noise_budget_multiple: 10.0,
            strategic_limit_prob: 0.5,
            activation_tolerance: 0.01,
            record_events: false,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_traders < 1 {
            return Err(ConfigError::NoTraders);
        }
        if !(self.event_rate > 0.0) {
            return Err(ConfigError::BadEventRate(self.event_rate));
        }
        if !(self.gamma > 0.0) {
            return Err(ConfigError::BadGamma(self.gamma));
        }
        if !(self.u0 > 0.0) {
            return Err(ConfigError::BadU0(self.u0));
        }
        if !(self.initial_price > 0.0) {
            return Err(ConfigError::BadInitialPrice(self.initial_price));
        }
        if let NoiseFraction::Fixed(f) = self.noise_fraction {
            if !(0.0..=1.0).contains(&f) {
                return Err(ConfigError::BadNoiseFraction(f));
            }
        }
        if self.horizon.max_events == 0 {
            return Err(ConfigError::EmptyHorizon);
        }
        Ok(())
    }

    pub fn initial_price_ticks(&self) -> Price {
        Price::from_currency(self.initial_price)
    }

    pub fn activation_tolerance_ticks(&self) -> Price {
        Price::from_currency(self.activation_tolerance)
    }
}
