//! Tick-quantized prices.
//!
//! Prices are stored as a signed count of 0.01-currency ticks so that
//! matching, latent-order triggers and serialization are exact. Conversion
//! from floating currency rounds half away from zero.

use std::fmt;

/// Size of one price tick in currency units.
pub const TICK: f64 = 0.01;

/// Number of ticks per currency unit.
const TICKS_PER_UNIT: f64 = 100.0;

/// Largest representable quote, in ticks. Quotes produced by the
/// velocity-flight coupling can be astronomically large; anything beyond this
/// bound behaves identically (it never trades), so saturation is harmless.
const MAX_TICKS: i64 = 100_000_000_000;

/// A price on the one-dimensional grid, in integer ticks of 0.01.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Price(i64);

impl Price {
    /// One tick above zero: the floor for clamped quotes.
    pub const MIN_QUOTE: Price = Price(1);

    pub const fn from_ticks(ticks: i64) -> Price {
        Price(ticks)
    }

    /// Quantize a currency value to the tick grid, rounding half away from
    /// zero and saturating at the representable range.
    pub fn from_currency(value: f64) -> Price {
        let scaled = value * TICKS_PER_UNIT;
        if scaled >= MAX_TICKS as f64 {
            return Price(MAX_TICKS);
        }
        if scaled <= -(MAX_TICKS as f64) {
            return Price(-MAX_TICKS);
        }
        // `f64::round` rounds half away from zero.
        Price(scaled.round() as i64)
    }

    /// Quantize and clamp to the minimum quotable price of one tick.
    pub fn quote_from_currency(value: f64) -> Price {
        let p = Self::from_currency(value);
        if p.0 < 1 {
            Price::MIN_QUOTE
        } else {
            p
        }
    }

    pub const fn ticks(self) -> i64 {
        self.0
    }

    pub fn to_currency(self) -> f64 {
        self.0 as f64 * TICK
    }

    pub fn offset_ticks(self, delta: i64) -> Price {
        Price(self.0 + delta)
    }

    /// Absolute distance in ticks.
    pub fn distance(self, other: Price) -> i64 {
        (self.0 - other.0).abs()
    }
}

impl fmt::Display for Price {
    /// Renders with exactly two decimals, e.g. `100.10`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(f, "{}{}.{:02}", sign, abs / 100, abs % 100)
    }
}
