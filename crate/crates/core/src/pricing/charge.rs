use serde::Serialize;

use super::{Pricing, PurchaseOption, RateEntry};
use crate::calendar::YearMonth;
use crate::money::{Money, Quantity};

/// The part of a quantity billed inside one tier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TierCharge {
    pub quantity: Quantity,
    pub unit_price: Money,
    pub cost: Money,
}

/// Cost of `quantity` under `entry`: flat rates multiply, tiered rates
/// charge each tier's slice at that tier's price.
pub fn price_quantity(entry: &RateEntry, quantity: Quantity) -> Money {
    match &entry.pricing {
        Pricing::Flat { unit_price } => unit_price.times(quantity),
        Pricing::Tiered { .. } => price_breakdown(entry, quantity).iter().map(|c| c.cost).sum(),
    }
}

/// Per-tier slices of a tiered charge; a single slice for flat rates.
/// Tiers the quantity does not reach are omitted.
pub fn price_breakdown(entry: &RateEntry, quantity: Quantity) -> Vec<TierCharge> {
    match &entry.pricing {
        Pricing::Flat { unit_price } => vec![TierCharge {
            quantity,
            unit_price: *unit_price,
            cost: unit_price.times(quantity),
        }],
        Pricing::Tiered { tiers } => {
            let mut out = Vec::new();
            let mut lower = Quantity::ZERO;
            let mut remaining = quantity;
            for tier in tiers {
                if remaining == Quantity::ZERO {
                    break;
                }
                let slice = match tier.upper_bound {
                    Some(upper) => remaining.min(upper.saturating_sub(lower)),
                    None => remaining,
                };
                out.push(TierCharge {
                    quantity: slice,
                    unit_price: tier.unit_price,
                    cost: tier.unit_price.times(slice),
                });
                remaining = remaining.saturating_sub(slice);
                if let Some(upper) = tier.upper_bound {
                    lower = upper;
                }
            }
            out
        }
    }
}

/// Upfront fees of a reserved option over `start..=end`, with the term
/// anchored at `start`.
pub fn reservation_charges(option: &PurchaseOption, start: YearMonth, end: YearMonth) -> Vec<(YearMonth, Money)> {
    reservation_charges_from(option, start, start, end)
}

/// Upfront fees charged at `anchor` and at every term renewal after it,
/// restricted to months in `start..=end`. On-demand options and zero fees
/// produce nothing.
pub fn reservation_charges_from(
    option: &PurchaseOption,
    anchor: YearMonth,
    start: YearMonth,
    end: YearMonth,
) -> Vec<(YearMonth, Money)> {
    let PurchaseOption::Reserved {
        term_months,
        upfront_fee,
        ..
    } = option
    else {
        return Vec::new();
    };
    if upfront_fee.is_zero() || *term_months == 0 || end < start {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut month = anchor;
    while month <= end {
        if month >= start {
            out.push((month, *upfront_fee));
        }
        month = month.plus_months(*term_months);
    }
    out
}
