//! The total order book.
//!
//! One price grid holds three populations of orders:
//!
//! - visible limit orders, queued FIFO at their price level;
//! - resting market orders, queued FIFO per side, waiting for any
//!   counterparty;
//! - latent orders, invisible until a time trigger or a price trigger fires.
//!
//! Matching is price-time priority with one extension: a resting market order
//! accepts any price, so it always has priority over limit orders on its own
//! side. Market-against-market executions print at the last trade price,
//! market-against-limit at the resting limit's price, and limit-against-
//! resting-market at the incoming limit's price.
//!
//! Co-located buy and sell interest reacts immediately into trades; after
//! matching completes the book is never crossed.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap, VecDeque};

use crate::price::Price;

pub type OrderId = u64;
pub type TraderId = u64;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Side {
    Buy,
    Sell,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Buy => Side::Sell,
            Side::Sell => Side::Buy,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Buy => "buy",
            Side::Sell => "sell",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrderKind {
    Limit,
    Market,
}

/// A quote. Limit orders always carry a price; for latent market orders the
/// price field is the activation trigger; immediate market orders carry none.
#[derive(Clone, PartialEq, Debug)]
pub struct Order {
    pub id: OrderId,
    pub side: Side,
    pub kind: OrderKind,
    pub price: Option<Price>,
    pub quantity: u32,
    pub trader_id: TraderId,
    pub entry_time: f64,
    pub flight_deadline: f64,
}

/// Activation rule for a latent order.
#[derive(Clone, Copy, Debug)]
pub enum Activation {
    /// Enter the visible book once the clock reaches this time.
    AtTime(f64),
    /// Enter once the last trade price is within the book's activation
    /// tolerance of this trigger price.
    NearPrice(Price),
}

/// An executed transaction. The price is the resting limit order's price,
/// except where a market order is involved (see module docs).
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Trade {
    pub time: f64,
    pub price: Price,
    pub quantity: u32,
    pub buyer_trader_id: TraderId,
    pub seller_trader_id: TraderId,
    pub buyer_order_id: OrderId,
    pub seller_order_id: OrderId,
    pub aggressor_side: Side,
}

/// Result of submitting one order: the trades it reacted into, and whether a
/// remainder rested in the book.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct MatchOutcome {
    pub trades: Vec<Trade>,
    pub rested: bool,
}

/// Latent orders moved into the visible book by one activation pass.
#[derive(Clone, Debug, Default)]
pub struct ActivationOutcome {
    pub activated: Vec<OrderId>,
    pub trades: Vec<Trade>,
}

#[derive(thiserror::Error, Debug, PartialEq, Eq)]
pub enum BookError {
    #[error("order quantity must be at least 1")]
    ZeroQuantity,
    #[error("duplicate order id {0}")]
    DuplicateId(OrderId),
    #[error("limit order without a price")]
    MissingPrice,
}

/// Where a live order currently sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Bid(Price),
    Ask(Price),
    RestingMarket(Side),
    Latent,
}

/// Heap key ordering expired orders by (deadline, id).
#[derive(PartialEq, Debug)]
struct DeadlineKey(f64, OrderId);

impl Eq for DeadlineKey {}

impl Ord for DeadlineKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .total_cmp(&other.0)
            .then_with(|| self.1.cmp(&other.1))
    }
}

impl PartialOrd for DeadlineKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// The total order book: visible limit order book, resting market orders and
/// the latent book, plus the last trade price that anchors market-to-market
/// executions and price triggers.
pub struct TotalOrderBook {
    bids: BTreeMap<Price, VecDeque<Order>>,
    asks: BTreeMap<Price, VecDeque<Order>>,
    resting_market_buys: VecDeque<Order>,
    resting_market_sells: VecDeque<Order>,
    latent: Vec<(Order, Activation)>,
    slots: HashMap<OrderId, Slot>,
    deadlines: BinaryHeap<Reverse<DeadlineKey>>,
    last_trade_price: Price,
    activation_tolerance: Price,
}

impl TotalOrderBook {
    /// An empty book anchored at an initial reference price. The activation
    /// tolerance for price-triggered latent orders defaults to one tick.
    pub fn new(initial_price: Price) -> Self {
        TotalOrderBook {
            bids: BTreeMap::new(),
            asks: BTreeMap::new(),
            resting_market_buys: VecDeque::new(),
            resting_market_sells: VecDeque::new(),
            latent: Vec::new(),
            slots: HashMap::new(),
            deadlines: BinaryHeap::new(),
            last_trade_price: initial_price,
            activation_tolerance: Price::from_ticks(1),
        }
    }

    pub fn with_activation_tolerance(mut self, tolerance: Price) -> Self {
        self.activation_tolerance = tolerance;
        self
    }

    pub fn last_trade_price(&self) -> Price {
        self.last_trade_price
    }

    pub fn best_bid(&self) -> Option<Price> {
        self.bids.keys().next_back().copied()
    }

    pub fn best_offer(&self) -> Option<Price> {
        self.asks.keys().next().copied()
    }

    pub fn resting_market_count(&self, side: Side) -> usize {
        match side {
            Side::Buy => self.resting_market_buys.len(),
            Side::Sell => self.resting_market_sells.len(),
        }
    }

    pub fn latent_count(&self) -> usize {
        self.latent.len()
    }

    pub fn live_order_count(&self) -> usize {
        self.slots.len()
    }

    pub fn contains(&self, id: OrderId) -> bool {
        self.slots.contains_key(&id)
    }

    /// Submit an order for immediate matching. Market orders walk the best
    /// opposite levels; crossing limit orders execute likewise; any remainder
    /// rests (limit orders at their price, market orders in the per-side
    /// FIFO).
    pub fn insert_order(&mut self, order: Order, now: f64) -> Result<MatchOutcome, BookError> {
        self.validate(&order)?;
        Ok(self.match_incoming(order, now))
    }

    /// Park an order in the latent book until its activation rule fires.
    pub fn insert_latent(&mut self, order: Order, rule: Activation) -> Result<(), BookError> {
        self.validate(&order)?;
        self.slots.insert(order.id, Slot::Latent);
        self.deadlines
            .push(Reverse(DeadlineKey(order.flight_deadline, order.id)));
        self.latent.push((order, rule));
        Ok(())
    }

    fn validate(&self, order: &Order) -> Result<(), BookError> {
        if order.quantity < 1 {
            return Err(BookError::ZeroQuantity);
        }
        if self.slots.contains_key(&order.id) {
            return Err(BookError::DuplicateId(order.id));
        }
        if order.kind == OrderKind::Limit && order.price.is_none() {
            return Err(BookError::MissingPrice);
        }
        Ok(())
    }

    /// Remove an order by id from whichever structure holds it. Returns
    /// `None` when the id is not live (already filled, expired or cancelled);
    /// callers treat that as a no-op.
    pub fn cancel_order(&mut self, id: OrderId) -> Option<Order> {
        let slot = self.slots.remove(&id)?;
        match slot {
            Slot::Bid(price) => Self::take_from_level(&mut self.bids, price, id),
            Slot::Ask(price) => Self::take_from_level(&mut self.asks, price, id),
            Slot::RestingMarket(Side::Buy) => Self::take_from_queue(&mut self.resting_market_buys, id),
            Slot::RestingMarket(Side::Sell) => {
                Self::take_from_queue(&mut self.resting_market_sells, id)
            }
            Slot::Latent => {
                let pos = self.latent.iter().position(|(o, _)| o.id == id)?;
                Some(self.latent.remove(pos).0)
            }
        }
    }

    fn take_from_level(
        side: &mut BTreeMap<Price, VecDeque<Order>>,
        price: Price,
        id: OrderId,
    ) -> Option<Order> {
        let queue = side.get_mut(&price)?;
        let pos = queue.iter().position(|o| o.id == id)?;
        let order = queue.remove(pos);
        if queue.is_empty() {
            side.remove(&price);
        }
        order
    }

    fn take_from_queue(queue: &mut VecDeque<Order>, id: OrderId) -> Option<Order> {
        let pos = queue.iter().position(|o| o.id == id)?;
        queue.remove(pos)
    }

    /// Cancel every order — visible, resting market or latent — whose flight
    /// deadline has passed (inclusive). Returns the cancelled ids in
    /// (deadline, id) order.
    pub fn expire_flights(&mut self, now: f64) -> Vec<OrderId> {
        let mut expired = Vec::new();
        while let Some(Reverse(DeadlineKey(deadline, id))) = self.deadlines.peek() {
            if *deadline > now {
                break;
            }
            let id = *id;
            self.deadlines.pop();
            // Stale heap entries for filled or cancelled orders are skipped.
            if self.cancel_order(id).is_some() {
                expired.push(id);
            }
        }
        expired
    }

    /// Activate the single due latent order with the earliest entry time
    /// (ties by id), if any. The event engine uses this so each activated
    /// order consumes one event as an order arrival of its own.
    pub fn activate_next_latent(&mut self, now: f64, stamp: f64) -> Option<(OrderId, MatchOutcome)> {
        let last = self.last_trade_price;
        let tolerance = self.activation_tolerance.ticks();
        let due = self
            .latent
            .iter()
            .enumerate()
            .filter(|(_, (order, rule))| {
                let _ = order;
                match *rule {
                    Activation::AtTime(t) => t <= now,
                    Activation::NearPrice(trigger) => trigger.distance(last) <= tolerance,
                }
            })
            .min_by(|(_, (a, _)), (_, (b, _))| {
                a.entry_time.total_cmp(&b.entry_time).then(a.id.cmp(&b.id))
            })
            .map(|(i, _)| i)?;
        let (mut order, _) = self.latent.remove(due);
        self.slots.remove(&order.id);
        if order.kind == OrderKind::Market {
            order.price = None;
        }
        let id = order.id;
        Some((id, self.match_incoming(order, stamp)))
    }

    /// One activation pass: every latent order whose time trigger has been
    /// reached, or whose price trigger is within the activation tolerance of
    /// the last trade price, is submitted to the visible book in entry-time
    /// order (ties by id). Trades produced by the activations are stamped
    /// with `stamp`, which the event engine sets to the next event arrival.
    pub fn activate_latent(&mut self, now: f64, stamp: f64) -> ActivationOutcome {
        let last = self.last_trade_price;
        let tolerance = self.activation_tolerance.ticks();
        let mut pulled: Vec<Order> = Vec::new();
        self.latent.retain(|(order, rule)| {
            let fire = match *rule {
                Activation::AtTime(t) => t <= now,
                Activation::NearPrice(trigger) => trigger.distance(last) <= tolerance,
            };
            if fire {
                pulled.push(order.clone());
            }
            !fire
        });
        pulled.sort_by(|a, b| a.entry_time.total_cmp(&b.entry_time).then(a.id.cmp(&b.id)));

        let mut outcome = ActivationOutcome::default();

        for mut order in pulled {
            self.slots.remove(&order.id);
            // An activated market order becomes an immediate market order;
            // the trigger price has served its purpose.
            if order.kind == OrderKind::Market {
                order.price = None;
            }
            outcome.activated.push(order.id);
            let result = self.match_incoming(order, stamp);
            outcome.trades.extend(result.trades);
        }
        outcome
    }

    fn match_incoming(&mut self, mut order: Order, now: f64) -> MatchOutcome {
        let mut trades = Vec::new();
        let aggressor = order.side;

        while order.quantity > 0 {
            // Resting market orders accept any price, so they outrank every
            // limit level on their side.
            let opposite_market = match aggressor {
                Side::Buy => &mut self.resting_market_sells,
                Side::Sell => &mut self.resting_market_buys,
            };
            if let Some(resting) = opposite_market.front_mut() {
                let price = match (order.kind, order.price) {
                    (OrderKind::Limit, Some(p)) => p,
                    _ => self.last_trade_price,
                };
                let quantity = order.quantity.min(resting.quantity);
                let resting_trader = resting.trader_id;
                let resting_id = resting.id;
                resting.quantity -= quantity;
                if resting.quantity == 0 {
                    opposite_market.pop_front();
                    self.slots.remove(&resting_id);
                }
                order.quantity -= quantity;
                trades.push(self.record_trade(
                    &order,
                    resting_trader,
                    resting_id,
                    price,
                    quantity,
                    now,
                ));
                continue;
            }

            let crossing_level = match aggressor {
                Side::Buy => self.asks.keys().next().copied().filter(|best| {
                    order.kind == OrderKind::Market
                        || order.price.is_some_and(|limit| *best <= limit)
                }),
                Side::Sell => self.bids.keys().next_back().copied().filter(|best| {
                    order.kind == OrderKind::Market
                        || order.price.is_some_and(|limit| *best >= limit)
                }),
            };
            let Some(level_price) = crossing_level else {
                break;
            };

            let level = match aggressor {
                Side::Buy => self.asks.get_mut(&level_price),
                Side::Sell => self.bids.get_mut(&level_price),
            }
            .expect("crossing level exists");
            let resting = level.front_mut().expect("levels are never empty");
            let quantity = order.quantity.min(resting.quantity);
            let resting_trader = resting.trader_id;
            let resting_id = resting.id;
            resting.quantity -= quantity;
            if resting.quantity == 0 {
                level.pop_front();
                if level.is_empty() {
                    match aggressor {
                        Side::Buy => self.asks.remove(&level_price),
                        Side::Sell => self.bids.remove(&level_price),
                    };
                }
                self.slots.remove(&resting_id);
            }
            order.quantity -= quantity;
            trades.push(self.record_trade(
                &order,
                resting_trader,
                resting_id,
                level_price,
                quantity,
                now,
            ));
        }

        let mut rested = false;
        if order.quantity > 0 {
            rested = true;
            self.rest(order);
        }
        MatchOutcome { trades, rested }
    }

    fn record_trade(
        &mut self,
        incoming: &Order,
        resting_trader: TraderId,
        resting_order: OrderId,
        price: Price,
        quantity: u32,
        now: f64,
    ) -> Trade {
        self.last_trade_price = price;
        let (buyer, seller, buyer_order, seller_order) = match incoming.side {
            Side::Buy => (incoming.trader_id, resting_trader, incoming.id, resting_order),
            Side::Sell => (resting_trader, incoming.trader_id, resting_order, incoming.id),
        };
        Trade {
            time: now,
            price,
            quantity,
            buyer_trader_id: buyer,
            seller_trader_id: seller,
            buyer_order_id: buyer_order,
            seller_order_id: seller_order,
            aggressor_side: incoming.side,
        }
    }

    fn rest(&mut self, order: Order) {
        let slot = match (order.kind, order.side) {
            (OrderKind::Limit, Side::Buy) => Slot::Bid(order.price.expect("validated")),
            (OrderKind::Limit, Side::Sell) => Slot::Ask(order.price.expect("validated")),
            (OrderKind::Market, side) => Slot::RestingMarket(side),
        };
        self.slots.insert(order.id, slot);
        self.deadlines
            .push(Reverse(DeadlineKey(order.flight_deadline, order.id)));
        match slot {
            Slot::Bid(price) => self.bids.entry(price).or_default().push_back(order),
            Slot::Ask(price) => self.asks.entry(price).or_default().push_back(order),
            Slot::RestingMarket(Side::Buy) => self.resting_market_buys.push_back(order),
            Slot::RestingMarket(Side::Sell) => self.resting_market_sells.push_back(order),
            Slot::Latent => unreachable!(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limit(id: OrderId, side: Side, price: f64, qty: u32, t: f64) -> Order {
        Order {
            id,
            side,
            kind: OrderKind::Limit,
            price: Some(Price::from_currency(price)),
            quantity: qty,
            trader_id: 100 + id,
            entry_time: t,
            flight_deadline: t + 1000.0,
        }
    }

    fn market(id: OrderId, side: Side, qty: u32, t: f64) -> Order {
        Order {
            id,
            side,
            kind: OrderKind::Market,
            price: None,
            quantity: qty,
            trader_id: 100 + id,
            entry_time: t,
            flight_deadline: t + 1000.0,
        }
    }

    fn book() -> TotalOrderBook {
        TotalOrderBook::new(Price::from_currency(100.0))
    }

    #[test]
    fn market_order_on_empty_book_rests() {
        let mut b = book();
        let out = b.insert_order(market(1, Side::Buy, 1, 0.0), 0.0).unwrap();
        assert!(out.trades.is_empty());
        assert!(out.rested);
        assert_eq!(b.resting_market_count(Side::Buy), 1);
    }

    #[test]
    fn fifo_within_level_fills_earliest() {
        // Frozen from the brute-force matching oracle: two asks at one price,
        // the t=1 entrant fills first.
        let mut b = book();
        b.insert_order(limit(1, Side::Sell, 100.1, 1, 1.0), 1.0).unwrap();
        b.insert_order(limit(2, Side::Sell, 100.1, 1, 2.0), 2.0).unwrap();
        let out = b.insert_order(market(3, Side::Buy, 1, 3.0), 3.0).unwrap();
        assert_eq!(out.trades.len(), 1);
        let trade = out.trades[0];
        assert_eq!(trade.price, Price::from_currency(100.1));
        assert_eq!(trade.quantity, 1);
        assert_eq!(trade.seller_trader_id, 101);
        assert_eq!(trade.aggressor_side, Side::Buy);
        assert!(b.contains(2));
        assert!(!b.contains(1));
    }

    #[test]
    fn crossing_limit_executes_then_rests_remainder() {
        // Frozen from the brute-force matching oracle.
        let mut b = book();
        b.insert_order(limit(1, Side::Sell, 100.1, 2, 0.0), 0.0).unwrap();
        let out = b
            .insert_order(limit(2, Side::Buy, 100.2, 3, 1.0), 1.0)
            .unwrap();
        assert_eq!(out.trades.len(), 1);
        assert_eq!(out.trades[0].price, Price::from_currency(100.1));
        assert_eq!(out.trades[0].quantity, 2);
        assert!(out.rested);
        assert_eq!(b.best_bid(), Some(Price::from_currency(100.2)));
        assert_eq!(b.best_offer(), None);
        assert_eq!(b.last_trade_price(), Price::from_currency(100.1));
    }

    #[test]
    fn market_orders_cross_at_last_trade_price() {
        let mut b = book();
        b.insert_order(market(1, Side::Sell, 1, 0.0), 0.0).unwrap();
        let out = b.insert_order(market(2, Side::Buy, 1, 1.0), 1.0).unwrap();
        assert_eq!(out.trades.len(), 1);
        assert_eq!(out.trades[0].price, Price::from_currency(100.0));
        assert_eq!(b.resting_market_count(Side::Sell), 0);
        assert_eq!(b.resting_market_count(Side::Buy), 0);
    }

    #[test]
    fn resting_market_order_outranks_limit_levels() {
        // The resting market sell fills at the incoming limit's price even
        // though a better-priced ask exists.
        let mut b = book();
        b.insert_order(market(1, Side::Sell, 1, 0.0), 0.0).unwrap();
        b.insert_order(limit(2, Side::Sell, 99.5, 1, 1.0), 1.0).unwrap();
        let out = b
            .insert_order(limit(3, Side::Buy, 100.0, 2, 2.0), 2.0)
            .unwrap();
        assert_eq!(out.trades.len(), 2);
        assert_eq!(out.trades[0].price, Price::from_currency(100.0));
        assert_eq!(out.trades[0].seller_trader_id, 101);
        assert_eq!(out.trades[1].price, Price::from_currency(99.5));
    }

    #[test]
    fn rejects_zero_quantity_and_duplicate_id() {
        let mut b = book();
        assert_eq!(
            b.insert_order(market(1, Side::Buy, 0, 0.0), 0.0),
            Err(BookError::ZeroQuantity)
        );
        b.insert_order(limit(2, Side::Buy, 99.0, 1, 0.0), 0.0).unwrap();
        assert_eq!(
            b.insert_order(limit(2, Side::Sell, 101.0, 1, 1.0), 1.0),
            Err(BookError::DuplicateId(2))
        );
    }

    #[test]
    fn cancel_only_ask_empties_side() {
        let mut b = book();
        b.insert_order(limit(1, Side::Sell, 100.1, 1, 0.0), 0.0).unwrap();
        let removed = b.cancel_order(1).unwrap();
        assert_eq!(removed.id, 1);
        assert_eq!(b.best_offer(), None);
    }

    #[test]
    fn cancel_unknown_id_is_none() {
        let mut b = book();
        assert!(b.cancel_order(42).is_none());
    }

    #[test]
    fn cancel_middle_preserves_fifo() {
        // Frozen from the brute-force matching oracle: cancel the middle of
        // three same-price asks, the earliest still fills first.
        let mut b = book();
        for (id, t) in [(1u64, 1.0), (2, 2.0), (3, 3.0)] {
            b.insert_order(limit(id, Side::Sell, 100.1, 1, t), t).unwrap();
        }
        assert!(b.cancel_order(2).is_some());
        let out = b.insert_order(market(4, Side::Buy, 2, 4.0), 4.0).unwrap();
        assert_eq!(out.trades.len(), 2);
        assert_eq!(out.trades[0].seller_trader_id, 101);
        assert_eq!(out.trades[1].seller_trader_id, 103);
    }

    #[test]
    fn expiry_is_inclusive_at_the_deadline() {
        let mut b = book();
        let mut o = limit(1, Side::Sell, 100.1, 1, 0.0);
        o.flight_deadline = 10.0;
        b.insert_order(o, 0.0).unwrap();
        assert_eq!(b.expire_flights(9.999), Vec::<OrderId>::new());
        assert_eq!(b.expire_flights(10.0), vec![1]);
        assert_eq!(b.best_offer(), None);
    }

    #[test]
    fn expiry_picks_exactly_the_due_orders() {
        // Frozen from the oracle scan: 3 of 5 orders past deadline.
        let mut b = book();
        for (id, deadline) in [(1u64, 5.0), (2, 15.0), (3, 7.0), (4, 20.0), (5, 9.0)] {
            let mut o = limit(id, Side::Sell, 100.0 + id as f64, 1, 0.0);
            o.flight_deadline = deadline;
            b.insert_order(o, 0.0).unwrap();
        }
        assert_eq!(b.expire_flights(10.0), vec![1, 3, 5]);
        assert!(b.contains(2) && b.contains(4));
    }

    #[test]
    fn price_triggered_latent_activates_on_exact_hit() {
        let mut b = book();
        let o = market(1, Side::Buy, 1, 0.0);
        b.insert_latent(o, Activation::NearPrice(Price::from_currency(100.1)))
            .unwrap();
        // Last trade price is 100.0: one tick tolerance, trigger 100.1 is 10
        // ticks away — no activation.
        let out = b.activate_latent(0.5, 0.6);
        assert!(out.activated.is_empty());

        // Trade at 100.1 pulls the trigger within tolerance.
        b.insert_order(limit(2, Side::Sell, 100.1, 1, 1.0), 1.0).unwrap();
        b.insert_order(market(3, Side::Buy, 1, 2.0), 2.0).unwrap();
        let out = b.activate_latent(2.0, 2.5);
        assert_eq!(out.activated, vec![1]);
        // Activated market buy found no counterparty: it rests.
        assert_eq!(b.resting_market_count(Side::Buy), 1);
    }

    #[test]
    fn time_triggered_latent_waits_for_its_time() {
        let mut b = book();
        b.insert_latent(
            limit(1, Side::Buy, 99.0, 1, 0.0),
            Activation::AtTime(5.0),
        )
        .unwrap();
        assert!(b.activate_latent(4.9, 4.95).activated.is_empty());
        let out = b.activate_latent(5.0, 5.1);
        assert_eq!(out.activated, vec![1]);
        assert_eq!(b.best_bid(), Some(Price::from_currency(99.0)));
    }

    #[test]
    fn simultaneous_activations_run_in_entry_time_order() {
        // Frozen from the matching oracle: both latent market buys activate,
        // the earlier entrant fills the single resting ask.
        let mut b = book();
        b.insert_order(limit(10, Side::Sell, 100.0, 1, 0.0), 0.0).unwrap();
        b.insert_latent(market(2, Side::Buy, 1, 2.0), Activation::AtTime(4.0))
            .unwrap();
        b.insert_latent(market(1, Side::Buy, 1, 1.0), Activation::AtTime(4.0))
            .unwrap();
        let out = b.activate_latent(4.0, 4.5);
        assert_eq!(out.activated, vec![1, 2]);
        assert_eq!(out.trades.len(), 1);
        assert_eq!(out.trades[0].buyer_trader_id, 101);
        assert_eq!(out.trades[0].time, 4.5);
        assert_eq!(b.resting_market_count(Side::Buy), 1);
    }

    #[test]
    fn latent_orders_expire_too() {
        let mut b = book();
        let mut o = market(1, Side::Buy, 1, 0.0);
        o.flight_deadline = 3.0;
        b.insert_latent(o, Activation::NearPrice(Price::from_currency(50.0)))
            .unwrap();
        assert_eq!(b.expire_flights(3.0), vec![1]);
        assert_eq!(b.latent_count(), 0);
    }

    #[test]
    fn book_never_crossed_after_matching() {
        let mut b = book();
        b.insert_order(limit(1, Side::Sell, 100.1, 5, 0.0), 0.0).unwrap();
        b.insert_order(limit(2, Side::Sell, 100.3, 5, 0.0), 0.0).unwrap();
        b.insert_order(limit(3, Side::Buy, 100.2, 7, 1.0), 1.0).unwrap();
        let (bid, ask) = (b.best_bid().unwrap(), b.best_offer().unwrap());
        assert!(bid < ask, "crossed book: {bid} >= {ask}");
    }
}
