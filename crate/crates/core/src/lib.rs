//! Cloud infrastructure cost modelling and migration assessment.
//!
//! A [`DeploymentModel`] describes nodes, the data paths between them and
//! each resource's baseline usage plus elasticity patterns. [`simulate`]
//! turns a model, a [`PriceCatalog`] and a window of months into a
//! [`CostReport`], which the [`report`] module renders as CSV or HTML.
//! The [`assess`] module scores benefit and risk ratings per category.

pub mod assess;
pub mod calendar;
pub mod diagnostics;
pub mod elasticity;
pub mod engine;
pub mod money;
pub mod model;
pub mod pricing;
pub mod report;

pub use assess::{AssessmentItem, Category, CategoryAverage, ItemKind, RadarData, RatingSheet};
pub use calendar::YearMonth;
pub use diagnostics::{Diagnostic, Severity};
pub use elasticity::{parse_pattern, PatternSpec, ResourceClass, UsageSchedule};
pub use engine::{
    compare, simulate, summarize, ComparisonTable, CostLine, CostReport, PlanChoice, PurchasePlan, SimulationError,
    SimulationWindow, SummaryRow,
};
pub use model::{parse_model, validate, DeploymentModel, ModelError, Node, NodeKind};
pub use money::{Money, Quantity};
pub use pricing::{load_catalog, CatalogError, Dimension, PriceCatalog, RateEntry};
