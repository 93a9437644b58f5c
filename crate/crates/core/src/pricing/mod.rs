//! Provider price catalogs and the conversion of usage into money.
//!
//! A catalog is a JSON document holding per-unit rates keyed by
//! `(provider, region, dimension, sku, scope)` plus the server types each
//! provider sells with their purchase options. Prices are decimal strings.

mod charge;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::money::{Money, Quantity};

pub use charge::{price_breakdown, price_quantity, reservation_charges, reservation_charges_from, TierCharge};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    VmHours,
    StorageGbMonth,
    IoInRequests,
    IoOutRequests,
    IoGb,
    DataInGb,
    DataOutGb,
}

impl Dimension {
    pub fn as_str(self) -> &'static str {
        match self {
            Dimension::VmHours => "vm_hours",
            Dimension::StorageGbMonth => "storage_gb_month",
            Dimension::IoInRequests => "io_in_requests",
            Dimension::IoOutRequests => "io_out_requests",
            Dimension::IoGb => "io_gb",
            Dimension::DataInGb => "data_in_gb",
            Dimension::DataOutGb => "data_out_gb",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Dimension::VmHours => "hours",
            Dimension::StorageGbMonth => "GB-month",
            Dimension::IoInRequests | Dimension::IoOutRequests => "requests",
            Dimension::IoGb | Dimension::DataInGb | Dimension::DataOutGb => "GB",
        }
    }

    /// Network transfer dimensions carry a [`TransferScope`].
    pub fn is_transfer(self) -> bool {
        matches!(self, Dimension::DataInGb | Dimension::DataOutGb)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferScope {
    Internet,
    IntraRegion,
    InterRegion,
}

impl TransferScope {
    pub fn as_str(self) -> &'static str {
        match self {
            TransferScope::Internet => "internet",
            TransferScope::IntraRegion => "intra_region",
            TransferScope::InterRegion => "inter_region",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tier {
    /// `None` marks the final, unbounded tier.
    pub upper_bound: Option<Quantity>,
    pub unit_price: Money,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Pricing {
    Flat { unit_price: Money },
    /// Graduated: each tier charges only the part of the quantity inside it.
    Tiered { tiers: Vec<Tier> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateEntry {
    pub provider: String,
    pub region: String,
    pub dimension: Dimension,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sku: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scope: Option<TransferScope>,
    pub pricing: Pricing,
}

impl RateEntry {
    pub fn key(&self) -> RateKey {
        RateKey {
            provider: self.provider.clone(),
            region: self.region.clone(),
            dimension: self.dimension,
            sku: self.sku.clone(),
            scope: self.scope,
        }
    }
}

/// Identifies a rate; renders as `provider/region/dimension[/sku][/scope]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RateKey {
    pub provider: String,
    pub region: String,
    pub dimension: Dimension,
    pub sku: Option<String>,
    pub scope: Option<TransferScope>,
}

impl fmt::Display for RateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.provider, self.region, self.dimension)?;
        if let Some(sku) = &self.sku {
            write!(f, "/{sku}")?;
        }
        if let Some(scope) = self.scope {
            write!(f, "/{}", scope.as_str())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PurchaseOption {
    OnDemand {
        hourly_rate: Money,
    },
    Reserved {
        hourly_rate: Money,
        term_months: u32,
        upfront_fee: Money,
    },
}

impl PurchaseOption {
    pub fn hourly_rate(&self) -> Money {
        match self {
            PurchaseOption::OnDemand { hourly_rate } | PurchaseOption::Reserved { hourly_rate, .. } => *hourly_rate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSku {
    pub provider: String,
    pub region: String,
    pub name: String,
    /// Optional sizing, used to resolve raw server specifications.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cpu_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ram_gb: Option<f64>,
    pub purchase_options: Vec<PurchaseOption>,
}

impl InstanceSku {
    pub fn on_demand(&self) -> Option<&PurchaseOption> {
        self.purchase_options
            .iter()
            .find(|o| matches!(o, PurchaseOption::OnDemand { .. }))
    }

    pub fn reserved(&self) -> impl Iterator<Item = &PurchaseOption> {
        self.purchase_options
            .iter()
            .filter(|o| matches!(o, PurchaseOption::Reserved { .. }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriceCatalog {
    pub currency: String,
    #[serde(default)]
    pub entries: Vec<RateEntry>,
    #[serde(default)]
    pub skus: Vec<InstanceSku>,
    /// Non-fatal findings from loading, e.g. reserved rates above on-demand.
    #[serde(skip)]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violation at line {line}, column {column}: {message}")]
    Schema {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("catalog has no currency")]
    MissingCurrency,
    #[error("duplicate rate {0}")]
    DuplicateKey(String),
    #[error("rate {key}: {reason}")]
    InvalidTiers { key: String, reason: String },
    #[error("negative price in {0}")]
    NegativePrice(String),
    #[error("rate {key}: {reason}")]
    InvalidScope { key: String, reason: String },
    #[error("duplicate sku {0}")]
    DuplicateSku(String),
    #[error("sku {key}: {reason}")]
    InvalidSku { key: String, reason: String },
}

/// No rate exists for a priced resource.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("missing rate {key}")]
pub struct MissingRate {
    pub key: RateKey,
}

/// Parses and validates a catalog document.
pub fn load_catalog(document: &str) -> Result<PriceCatalog, CatalogError> {
    let mut catalog: PriceCatalog = serde_json::from_str(document).map_err(|e| {
        let (line, column, message) = (e.line(), e.column(), e.to_string());
        match e.classify() {
            serde_json::error::Category::Data => CatalogError::Schema { line, column, message },
            _ => CatalogError::Syntax { line, column, message },
        }
    })?;
    catalog.warnings = catalog.check()?;
    Ok(catalog)
}

impl PriceCatalog {
    /// Validates invariants, returning warnings on success.
    pub fn check(&self) -> Result<Vec<String>, CatalogError> {
        if self.currency.trim().is_empty() {
            return Err(CatalogError::MissingCurrency);
        }
        let mut keys = HashSet::new();
        for entry in &self.entries {
            let key = entry.key();
            let shown = key.to_string();
            match (entry.dimension.is_transfer(), entry.scope) {
                (true, None) => {
                    return Err(CatalogError::InvalidScope {
                        key: shown,
                        reason: "transfer rates need a scope".into(),
                    })
                }
                (false, Some(_)) => {
                    return Err(CatalogError::InvalidScope {
                        key: shown,
                        reason: "only transfer rates take a scope".into(),
                    })
                }
                _ => {}
            }
            match &entry.pricing {
                Pricing::Flat { unit_price } => {
                    if unit_price.is_negative() {
                        return Err(CatalogError::NegativePrice(shown));
                    }
                }
                Pricing::Tiered { tiers } => check_tiers(tiers, &shown)?,
            }
            if !keys.insert(key) {
                return Err(CatalogError::DuplicateKey(shown));
            }
        }

        let mut warnings = Vec::new();
        let mut names = HashSet::new();
        for sku in &self.skus {
            let shown = format!("{}/{}/{}", sku.provider, sku.region, sku.name);
            if !names.insert((&sku.provider, &sku.region, &sku.name)) {
                return Err(CatalogError::DuplicateSku(shown));
            }
            let invalid = |reason: &str| CatalogError::InvalidSku {
                key: shown.clone(),
                reason: reason.into(),
            };
            let Some(on_demand) = sku.on_demand() else {
                return Err(invalid("needs an on_demand purchase option"));
            };
            for option in &sku.purchase_options {
                if option.hourly_rate().is_negative() {
                    return Err(CatalogError::NegativePrice(shown));
                }
                if let PurchaseOption::Reserved {
                    hourly_rate,
                    term_months,
                    upfront_fee,
                } = option
                {
                    if *term_months == 0 {
                        return Err(invalid("reserved term must be at least one month"));
                    }
                    if upfront_fee.is_negative() {
                        return Err(CatalogError::NegativePrice(shown));
                    }
                    if *hourly_rate > on_demand.hourly_rate() {
                        warnings.push(format!(
                            "sku {shown}: reserved hourly rate {hourly_rate} exceeds on-demand {}",
                            on_demand.hourly_rate()
                        ));
                    }
                }
            }
            for (field, value) in [("cpu_ghz", sku.cpu_ghz), ("ram_gb", sku.ram_gb)] {
                if value.is_some_and(|v| !(v.is_finite() && v > 0.0)) {
                    return Err(invalid(&format!("`{field}` must be positive")));
                }
            }
        }
        Ok(warnings)
    }

    /// The unique rate for a key, or a [`MissingRate`] naming it. There is
    /// no fallback between SKU-specific and generic rates.
    pub fn lookup_rate(
        &self,
        provider: &str,
        region: &str,
        dimension: Dimension,
        sku: Option<&str>,
        scope: Option<TransferScope>,
    ) -> Result<&RateEntry, MissingRate> {
        self.entries
            .iter()
            .find(|e| {
                e.provider == provider
                    && e.region == region
                    && e.dimension == dimension
                    && e.sku.as_deref() == sku
                    && e.scope == scope
            })
            .ok_or_else(|| MissingRate {
                key: RateKey {
                    provider: provider.to_string(),
                    region: region.to_string(),
                    dimension,
                    sku: sku.map(str::to_string),
                    scope,
                },
            })
    }

    pub fn sku(&self, provider: &str, region: &str, name: &str) -> Option<&InstanceSku> {
        self.skus
            .iter()
            .find(|s| s.provider == provider && s.region == region && s.name == name)
    }

    /// The cheapest on-demand server type meeting both minimums; ties go to
    /// the lexicographically first name. SKUs without sizing are ignored.
    pub fn resolve_sku(&self, provider: &str, region: &str, cpu_ghz: f64, ram_gb: f64) -> Option<&InstanceSku> {
        self.skus
            .iter()
            .filter(|s| s.provider == provider && s.region == region)
            .filter(|s| matches!((s.cpu_ghz, s.ram_gb), (Some(c), Some(r)) if c >= cpu_ghz && r >= ram_gb))
            .filter_map(|s| s.on_demand().map(|o| (o.hourly_rate(), s)))
            .min_by(|(ra, a), (rb, b)| ra.cmp(rb).then_with(|| a.name.cmp(&b.name)))
            .map(|(_, s)| s)
    }

    pub fn providers(&self) -> Vec<(&str, &str)> {
        let mut out: Vec<(&str, &str)> = self
            .entries
            .iter()
            .map(|e| (e.provider.as_str(), e.region.as_str()))
            .chain(self.skus.iter().map(|s| (s.provider.as_str(), s.region.as_str())))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn check_tiers(tiers: &[Tier], key: &str) -> Result<(), CatalogError> {
    let invalid = |reason: &str| CatalogError::InvalidTiers {
        key: key.to_string(),
        reason: reason.to_string(),
    };
    if tiers.is_empty() {
        return Err(invalid("tiered rate has no tiers"));
    }
    let mut previous = Quantity::ZERO;
    for (i, tier) in tiers.iter().enumerate() {
        if tier.unit_price.is_negative() {
            return Err(CatalogError::NegativePrice(key.to_string()));
        }
        let last = i + 1 == tiers.len();
        match (tier.upper_bound, last) {
            (None, true) => {}
            (None, false) => return Err(invalid("only the last tier may be unbounded")),
            (Some(_), true) => return Err(invalid("the last tier must be unbounded")),
            (Some(bound), false) => {
                if bound <= previous {
                    return Err(invalid("tier bounds must be positive and strictly increasing"));
                }
                previous = bound;
            }
        }
    }
    Ok(())
}
