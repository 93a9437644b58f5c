//! Benefit/risk items, Likert rating sheets and per-category averages.

mod sheet;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{sorted, Diagnostic};

pub use sheet::{parse_ratings, RatingSheet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemKind {
    Benefit,
    Risk,
}

impl ItemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ItemKind::Benefit => "benefit",
            ItemKind::Risk => "risk",
        }
    }
}

impl fmt::Display for ItemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Declaration order is the radar axis order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Organizational,
    Legal,
    Security,
    Technical,
    Financial,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::Organizational,
        Category::Legal,
        Category::Security,
        Category::Technical,
        Category::Financial,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Organizational => "organizational",
            Category::Legal => "legal",
            Category::Security => "security",
            Category::Technical => "technical",
            Category::Financial => "financial",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssessmentItem {
    pub id: String,
    pub kind: ItemKind,
    pub category: Category,
    pub statement: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mitigation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indicators: Option<String>,
    #[serde(default)]
    pub references: Vec<String>,
    #[serde(default)]
    pub applies_to_private_cloud: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AssessError {
    #[error("items file: {0}")]
    Syntax(String),
    #[error("duplicate item id `{0}`")]
    DuplicateId(String),
    #[error("benefit `{0}` carries mitigation or indicators")]
    BenefitMitigation(String),
    #[error("ratings line {line}: {message}")]
    Ratings { line: usize, message: String },
    #[error("no rated {kind} items in category {category}")]
    EmptyCategory { kind: ItemKind, category: Category },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ItemsFile {
    items: Vec<AssessmentItem>,
}

/// Parses an items file, `{"items": [...]}`.
pub fn load_items(document: &str) -> Result<Vec<AssessmentItem>, AssessError> {
    let file: ItemsFile = serde_json::from_str(document).map_err(|e| AssessError::Syntax(e.to_string()))?;
    let mut seen = BTreeSet::new();
    for item in &file.items {
        if !seen.insert(item.id.as_str()) {
            return Err(AssessError::DuplicateId(item.id.clone()));
        }
        if item.kind == ItemKind::Benefit && (item.mitigation.is_some() || item.indicators.is_some()) {
            return Err(AssessError::BenefitMitigation(item.id.clone()));
        }
    }
    Ok(file.items)
}

pub const SEED_ITEMS: &str = include_str!("../../data/seed_items.json");

/// The ten benefits and twenty risks of the published tables.
pub fn seed_items() -> Vec<AssessmentItem> {
    load_items(SEED_ITEMS).expect("bundled items are valid")
}

pub const DEFAULT_THRESHOLD: i64 = 4;

/// Out-of-range ratings and unknown ids are errors; unrated items are a
/// single warning.
pub fn validate_sheet(sheet: &RatingSheet, items: &[AssessmentItem]) -> Vec<Diagnostic> {
    let known: BTreeSet<&str> = items.iter().map(|i| i.id.as_str()).collect();
    let mut out = Vec::new();
    for (id, &rating) in &sheet.ratings {
        let location = format!("/ratings/{id}");
        if !known.contains(id.as_str()) {
            out.push(Diagnostic::error(&location, format!("unknown item id `{id}`")));
        }
        if !(1..=5).contains(&rating) {
            out.push(Diagnostic::error(&location, format!("rating {rating} is outside 1..5")));
        }
    }
    let unrated: Vec<&str> = items
        .iter()
        .map(|i| i.id.as_str())
        .filter(|id| !sheet.ratings.contains_key(*id))
        .collect();
    if !unrated.is_empty() {
        out.push(Diagnostic::warning(
            "/ratings",
            format!("{} of {} items unrated: {}", unrated.len(), items.len(), unrated.join(", ")),
        ));
    }
    sorted(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryAverage {
    pub kind: ItemKind,
    pub category: Category,
    pub average: f64,
    pub item_count: usize,
}

/// Valid ratings of items with this kind and category.
fn ratings_in<'a>(
    sheet: &'a RatingSheet,
    items: &'a [AssessmentItem],
    kind: ItemKind,
    category: Category,
) -> impl Iterator<Item = i64> + 'a {
    items
        .iter()
        .filter(move |i| i.kind == kind && i.category == category)
        .filter_map(|i| sheet.ratings.get(&i.id).copied())
        .filter(|r| (1..=5).contains(r))
}

/// Mean rating over the rated items of one kind and category.
pub fn category_average(
    sheet: &RatingSheet,
    items: &[AssessmentItem],
    kind: ItemKind,
    category: Category,
) -> Result<CategoryAverage, AssessError> {
    let (sum, count) = ratings_in(sheet, items, kind, category).fold((0i64, 0usize), |(s, c), r| (s + r, c + 1));
    if count == 0 {
        return Err(AssessError::EmptyCategory { kind, category });
    }
    Ok(CategoryAverage {
        kind,
        category,
        average: sum as f64 / count as f64,
        item_count: count,
    })
}

/// Category averages for every populated (kind, category), benefits first,
/// categories in axis order. Serializes as a flat array.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct RadarData {
    pub entries: Vec<CategoryAverage>,
}

impl RadarData {
    pub fn of_kind(&self, kind: ItemKind) -> impl Iterator<Item = &CategoryAverage> {
        self.entries.iter().filter(move |e| e.kind == kind)
    }
}

pub fn radar(sheet: &RatingSheet, items: &[AssessmentItem]) -> RadarData {
    let entries = [ItemKind::Benefit, ItemKind::Risk]
        .into_iter()
        .flat_map(|kind| Category::ALL.into_iter().map(move |c| (kind, c)))
        .filter_map(|(kind, category)| category_average(sheet, items, kind, category).ok())
        .collect();
    RadarData { entries }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ImportantItems {
    pub benefits: Vec<String>,
    pub risks: Vec<String>,
}

/// `B2` before `B11`.
fn id_order(id: &str) -> (String, u64, String) {
    let split = id.find(|c: char| c.is_ascii_digit()).unwrap_or(id.len());
    let (prefix, rest) = id.split_at(split);
    let digits: String = rest.chars().take_while(char::is_ascii_digit).collect();
    (prefix.to_string(), digits.parse().unwrap_or(0), id.to_string())
}

/// Ids of items rated at least `threshold`, per kind, in natural id order.
pub fn important_items(sheet: &RatingSheet, items: &[AssessmentItem], threshold: i64) -> ImportantItems {
    let kinds: BTreeMap<&str, ItemKind> = items.iter().map(|i| (i.id.as_str(), i.kind)).collect();
    let mut out = ImportantItems::default();
    for (id, &rating) in &sheet.ratings {
        if rating < threshold || !(1..=5).contains(&rating) {
            continue;
        }
        match kinds.get(id.as_str()) {
            Some(ItemKind::Benefit) => out.benefits.push(id.clone()),
            Some(ItemKind::Risk) => out.risks.push(id.clone()),
            None => {}
        }
    }
    out.benefits.sort_by_cached_key(|id| id_order(id));
    out.risks.sort_by_cached_key(|id| id_order(id));
    out
}
