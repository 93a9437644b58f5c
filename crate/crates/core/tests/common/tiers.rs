//! Tiered rates priced in whole tenths of a cent, and a unit-by-unit walk.

use cloudcost_core::pricing::{Pricing, Tier};
use cloudcost_core::{Dimension, Money, Quantity, RateEntry};

pub fn entry(tiers: Vec<Tier>) -> RateEntry {
    RateEntry {
        provider: "p".into(),
        region: "r".into(),
        dimension: Dimension::DataOutGb,
        sku: None,
        scope: None,
        pricing: Pricing::Tiered { tiers },
    }
}

/// Walks whole units, pricing each at the tier it falls in, then the
/// fractional remainder at the tier of the last partial unit. Bounds are
/// whole units and prices are whole tenths of a cent so every step is exact.
pub fn unit_walk(bounds: &[u64], prices_tenth_cents: &[i128], whole: u64, thousandths: u64) -> i128 {
    let tier_of = |unit: u64| bounds.iter().position(|&b| unit < b).unwrap_or(bounds.len());
    // a tenth of a cent is 1000 micros
    let micros = |tier: usize| prices_tenth_cents[tier] * 1000;
    let mut total = 0i128;
    for unit in 0..whole {
        total += micros(tier_of(unit));
    }
    total + micros(tier_of(whole)) * thousandths as i128 / 1000
}

pub fn build(bounds: &[u64], prices: &[i128]) -> RateEntry {
    let mut tiers: Vec<Tier> = bounds
        .iter()
        .zip(prices)
        .map(|(&b, &p)| Tier {
            upper_bound: Some(Quantity::from_units(b as i64)),
            unit_price: Money::from_micros(p * 1000),
        })
        .collect();
    tiers.push(Tier {
        upper_bound: None,
        unit_price: Money::from_micros(prices[bounds.len()] * 1000),
    });
    entry(tiers)
}

