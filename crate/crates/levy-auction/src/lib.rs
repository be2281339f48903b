//! Market tatonnement as a random search: a discrete-event continuous double
//! auction driven by zero-intelligence traders whose quoting behaviour follows
//! a Levy walk, together with the numerical analytics for the walk propagators
//! and the drift-diffusion-reaction density of market order particles.
//!
//! The crate is organised around four pillars:
//!
//! - [`book`] — the total order book: a one-dimensional price structure with
//!   price-time-priority matching, resting market orders and a latent book of
//!   orders waiting for a price or time trigger.
//! - [`agents`] — noise and strategic trader behaviours plus the velocity and
//!   flight-time samplers that drive them.
//! - [`sim`] — the Poisson-paced event engine, search-efficiency metrics,
//!   parameter sweeps and the mean-squared-displacement estimator.
//! - [`search`] and [`density`] — numerical evaluation of the search
//!   propagators (Fourier-Laplace domain, ballistic scaling inversion) and of
//!   the closed-form density solutions with their special-case reductions.
//!
//! A narrative guide with runnable examples lives in the `book/` directory of
//! the repository and is mirrored into [`guide`] so the snippets compile as
//! doc-tests.

pub mod agents;
pub mod book;
pub mod density;
pub mod guide;
pub mod io;
pub mod price;
pub mod search;
pub mod sim;

pub use book::{MatchOutcome, Order, OrderKind, Side, TotalOrderBook, Trade};
pub use price::Price;
