//! Plot-ready CSV serialization.
//!
//! Everything the tools emit is CSV with purely numeric fields, so writers
//! and readers are hand-rolled. Floating-point values are fixed at nine
//! significant digits to keep golden files stable; trade times carry nine
//! decimal places and prices two, matching the tape format.

use std::io::{self, BufRead, Write};

use crate::book::{Side, Trade};
use crate::price::Price;

/// Header of the trade tape CSV.
pub const TAPE_HEADER: &str = "trade_id,time,price,qty,buyer_id,seller_id,aggressor";

/// Format a float with nine significant digits.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let formatted = format!("{:.8e}", x);
    // Rust renders exponents without a fixed width ("1.00000000e2"); keep as is.
    formatted
}

/// Format a time in seconds with nine decimal places (nanosecond grid).
pub fn fmt_time(t: f64) -> String {
    format!("{:.9}", t)
}

pub fn write_trade_tape<W: Write>(trades: &[Trade], out: &mut W) -> io::Result<()> {
    writeln!(out, "{}", TAPE_HEADER)?;
    for (i, t) in trades.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            i,
            fmt_time(t.time),
            t.price,
            t.quantity,
            t.buyer_trader_id,
            t.seller_trader_id,
            t.aggressor_side.as_str()
        )?;
    }
    Ok(())
}

pub fn trade_tape_to_string(trades: &[Trade]) -> String {
    let mut buf = Vec::new();
    write_trade_tape(trades, &mut buf).expect("in-memory write");
    String::from_utf8(buf).expect("csv is ascii")
}

#[derive(thiserror::Error, Debug)]
pub enum CsvError {
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T, CsvError> {
    s.trim().parse().map_err(|_| CsvError::Parse {
        line,
        message: format!("bad {what}: {s:?}"),
    })
}

/// Read a trade tape written by [`write_trade_tape`]. Values round-trip
/// exactly: times are on the nanosecond grid and prices on the tick grid.
pub fn read_trade_tape<R: BufRead>(input: R) -> Result<Vec<Trade>, CsvError> {
    let mut trades = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if i == 0 {
            if line.trim() != TAPE_HEADER {
                return Err(CsvError::Parse {
                    line: 1,
                    message: format!("unexpected header {line:?}"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(CsvError::Parse {
                line: i + 1,
                message: format!("expected 7 fields, got {}", fields.len()),
            });
        }
        let time: f64 = parse_field(fields[1], i + 1, "time")?;
        let price: f64 = parse_field(fields[2], i + 1, "price")?;
        let quantity: u32 = parse_field(fields[3], i + 1, "qty")?;
        let buyer: u64 = parse_field(fields[4], i + 1, "buyer_id")?;
        let seller: u64 = parse_field(fields[5], i + 1, "seller_id")?;
        let aggressor = match fields[6].trim() {
            "buy" => Side::Buy,
            "sell" => Side::Sell,
            other => {
                return Err(CsvError::Parse {
                    line: i + 1,
                    message: format!("bad aggressor {other:?}"),
                })
            }
        };
        trades.push(Trade {
            time,
            price: Price::from_currency(price),
            quantity,
            buyer_trader_id: buyer,
            seller_trader_id: seller,
            // Order ids are engine-internal and not part of the tape format.
            buyer_order_id: 0,
            seller_order_id: 0,
            aggressor_side: aggressor,
        });
    }
    Ok(trades)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tape_round_trips() {
        let trades = vec![
            Trade {
                time: 1.25,
                price: Price::from_currency(100.10),
                quantity: 2,
                buyer_trader_id: 5,
                seller_trader_id: 9,
                buyer_order_id: 0,
                seller_order_id: 0,
                aggressor_side: Side::Buy,
            },
            Trade {
                time: 2.000000001,
                price: Price::from_currency(99.90),
                quantity: 1,
                buyer_trader_id: 9,
                seller_trader_id: 5,
                buyer_order_id: 0,
                seller_order_id: 0,
                aggressor_side: Side::Sell,
            },
        ];
        let text = trade_tape_to_string(&trades);
        let back = read_trade_tape(text.as_bytes()).unwrap();
        assert_eq!(trades, back);
    }

    #[test]
    fn sig9_is_stable() {
        assert_eq!(fmt_sig9(0.75), "7.50000000e-1");
        assert_eq!(fmt_sig9(0.0), "0");
        assert_eq!(fmt_sig9(1234.5678901), "1.23456789e3");
    }
}
