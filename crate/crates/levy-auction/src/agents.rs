//! Zero-intelligence trader behaviours.
//!
//! Two populations drive the auction. Noise traders open with a market order
//! at the last trade price and, after every fill, flip to a limit order one
//! 0.10-currency step away, cycling until their flight time ends or a buy
//! exceeds their budget. Strategic traders quote a single order displaced
//! from the last trade price by the velocity-flight coupling `v * tau` and
//! leave after one fill or expiry.
//!
//! All randomness enters through explicit uniform draws so the behaviours are
//! pure functions of their inputs; the event engine owns the generator.

use crate::book::{Order, OrderId, OrderKind, Side, TraderId};
use crate::price::Price;

/// Offset, in ticks, of a noise trader's limit quote from its last fill.
pub const NOISE_LIMIT_OFFSET_TICKS: i64 = 10;

#[derive(thiserror::Error, Debug, PartialEq)]
pub enum SampleError {
    #[error("uniform draw {0} outside the open interval (0, 1)")]
    DrawOutOfRange(f64),
    #[error("flight-time exponent gamma must be positive, got {0}")]
    NonPositiveGamma(f64),
}

/// Lorentzian (Cauchy) velocity distribution with half-width `u0`. Symmetric,
/// so buys and sells are equally likely; the scale bounds the ballistic cone.
#[derive(Clone, Copy, Debug)]
pub struct VelocityDist {
    pub u0: f64,
}

impl VelocityDist {
    pub fn new(u0: f64) -> Self {
        assert!(u0 > 0.0, "velocity scale must be positive");
        VelocityDist { u0 }
    }

    /// Probability density at `v`.
    pub fn pdf(&self, v: f64) -> f64 {
        1.0 / (self.u0 * std::f64::consts::PI * (1.0 + (v / self.u0).powi(2)))
    }
}

/// Power-tail flight-time distribution `f(tau) = gamma / (1 + tau)^(1 + gamma)`.
/// The exponent selects the transport regime: Brownian above 2,
/// superdiffusive between 1 and 2, ballistic below 1.
#[derive(Clone, Copy, Debug)]
pub struct FlightTimeDist {
    pub gamma: f64,
}

impl FlightTimeDist {
    pub fn new(gamma: f64) -> Self {
        assert!(gamma > 0.0, "flight exponent must be positive");
        FlightTimeDist { gamma }
    }

    pub fn pdf(&self, tau: f64) -> f64 {
        if tau < 0.0 {
            0.0
        } else {
            self.gamma / (1.0 + tau).powf(1.0 + self.gamma)
        }
    }

    /// Survival function `P(tau > t)`.
    pub fn tail(&self, t: f64) -> f64 {
        (1.0 + t).powf(-self.gamma)
    }
}

/// Inverse-CDF sample of the Cauchy velocity: `u0 * tan(pi * (u - 1/2))`.
/// The sign encodes direction — positive buys, negative sells.
pub fn sample_velocity(dist: VelocityDist, u: f64) -> Result<f64, SampleError> {
    if !(u > 0.0 && u < 1.0) {
        return Err(SampleError::DrawOutOfRange(u));
    }
    Ok(dist.u0 * (std::f64::consts::PI * (u - 0.5)).tan())
}

/// Inverse-CDF sample of the flight time: `(1 - u)^(-1/gamma) - 1`.
pub fn sample_flight_time(dist: FlightTimeDist, u: f64) -> Result<f64, SampleError> {
    if !(u > 0.0 && u < 1.0) {
        return Err(SampleError::DrawOutOfRange(u));
    }
    if dist.gamma <= 0.0 {
        return Err(SampleError::NonPositiveGamma(dist.gamma));
    }
    Ok((1.0 - u).powf(-1.0 / dist.gamma) - 1.0)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TraderKind {
    Noise,
    Strategic,
}

/// Lifecycle phase of a trader.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Phase {
    Idle,
    AwaitingMarketFill,
    AwaitingLimitFill,
    Done,
}

/// Why a trader left the market.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExitReason {
    Filled,
    FlightExpired,
    BudgetDefault,
}

/// Per-trader state owned by the simulation loop.
#[derive(Clone, Debug)]
pub struct TraderState {
    pub trader_id: TraderId,
    pub kind: TraderKind,
    /// Sign of the sampled velocity: +1 buys, -1 sells.
    pub side_sign: i8,
    pub velocity: f64,
    pub flight_time: f64,
    /// Remaining funds; consulted only for noise traders' purchases.
    pub budget: f64,
    pub phase: Phase,
    /// First transaction price of the session, kept for return accounting.
    pub reference_price: Price,
    /// Price of the trader's most recent fill.
    pub last_fill_price: Option<Price>,
    /// Order quantity carried by each of this trader's quotes.
    pub quantity: u32,
}

impl TraderState {
    pub fn side(&self) -> Side {
        if self.side_sign >= 0 {
            Side::Buy
        } else {
            Side::Sell
        }
    }
}

/// What a trader decides to do when the engine hands it an event.
#[derive(Clone, Debug, PartialEq)]
pub enum AgentAction {
    /// Submit to the visible book for immediate matching.
    Submit(Order),
    /// Park in the latent book with a price trigger (strategic market
    /// orders arrive only when the traded price reaches their target).
    SubmitLatent(Order, Price),
    /// Leave the market.
    Exit(ExitReason),
}

/// Quote a strategic trader's single order. The price deviates from the last
/// trade price by `velocity * flight_time`, quantized to the tick grid and
/// clamped at one tick; the kind was assigned at initialisation.
pub fn strategic_quote(
    trader: &mut TraderState,
    kind: OrderKind,
    last_trade_price: Price,
    now: f64,
    order_id: OrderId,
) -> AgentAction {
    debug_assert_eq!(trader.kind, TraderKind::Strategic);
    debug_assert_eq!(trader.phase, Phase::Idle);
    let target =
        Price::quote_from_currency(last_trade_price.to_currency() + trader.velocity * trader.flight_time);
    let side = trader.side();
    let deadline = now + trader.flight_time;
    trader.phase = match kind {
        OrderKind::Limit => Phase::AwaitingLimitFill,
        OrderKind::Market => Phase::AwaitingMarketFill,
    };
    let order = Order {
        id: order_id,
        side,
        kind,
        price: match kind {
            OrderKind::Limit => Some(target),
            OrderKind::Market => Some(target), // trigger price while latent
        },
        quantity: trader.quantity,
        trader_id: trader.trader_id,
        entry_time: now,
        flight_deadline: deadline,
    };
    match kind {
        OrderKind::Limit => AgentAction::Submit(order),
        OrderKind::Market => AgentAction::SubmitLatent(order, target),
    }
}

/// A fill notification delivered to a noise trader.
#[derive(Clone, Copy, Debug)]
pub struct FillEvent {
    pub kind: OrderKind,
    pub side: Side,
    pub price: Price,
}

/// Advance a noise trader's market/limit cycle.
///
/// Idle traders open with a market order; a market fill at price `p` flips to
/// a limit quote at `p ± 0.10` (sell after a buy, buy after a sell); a limit
/// fill flips back to a market order. A buy whose cost exceeds the remaining
/// budget is a default and removes the trader. `deadline` is the trader's
/// flight deadline, fixed at entry.
pub fn noise_step(
    trader: &mut TraderState,
    fill: Option<FillEvent>,
    last_trade_price: Price,
    now: f64,
    deadline: f64,
    order_id: OrderId,
) -> AgentAction {
    debug_assert_eq!(trader.kind, TraderKind::Noise);
    if now >= deadline {
        trader.phase = Phase::Done;
        return AgentAction::Exit(ExitReason::FlightExpired);
    }

    let (side, kind, price) = match fill {
        None => {
            debug_assert_eq!(trader.phase, Phase::Idle);
            (trader.side(), OrderKind::Market, None)
        }
        Some(f) => match f.kind {
            // After a market buy comes a limit sell a step above the fill,
            // and symmetrically for a market sell.
            OrderKind::Market => {
                let (side, offset) = match f.side {
                    Side::Buy => (Side::Sell, NOISE_LIMIT_OFFSET_TICKS),
                    Side::Sell => (Side::Buy, -NOISE_LIMIT_OFFSET_TICKS),
                };
                let quote = f.price.offset_ticks(offset);
                let quote = if quote < Price::MIN_QUOTE {
                    Price::MIN_QUOTE
                } else {
                    quote
                };
                (side, OrderKind::Limit, Some(quote))
            }
            // After a limit fill the cycle restarts with a market order on
            // the trader's original side.
            OrderKind::Limit => (trader.side(), OrderKind::Market, None),
        },
    };

    if side == Side::Buy {
        let unit_cost = price.unwrap_or(last_trade_price).to_currency();
        let required = unit_cost * trader.quantity as f64;
        if trader.budget < required {
            trader.phase = Phase::Done;
            return AgentAction::Exit(ExitReason::BudgetDefault);
        }
    }

    trader.phase = match kind {
        OrderKind::Market => Phase::AwaitingMarketFill,
        OrderKind::Limit => Phase::AwaitingLimitFill,
    };
    AgentAction::Submit(Order {
        id: order_id,
        side,
        kind,
        price,
        quantity: trader.quantity,
        trader_id: trader.trader_id,
        entry_time: now,
        flight_deadline: deadline,
    })
}
