use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::AssessError;

/// One respondent's ratings. Values are kept as written so that
/// out-of-range ratings can be reported by `validate_sheet`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatingSheet {
    pub respondent: String,
    pub role_view: String,
    pub ratings: BTreeMap<String, i64>,
}

/// Reads a ratings CSV: an `item_id,rating` header, one row per item, and
/// optional `# respondent: …` and `# view: …` lines anywhere.
pub fn parse_ratings(text: &str) -> Result<RatingSheet, AssessError> {
    let mut sheet = RatingSheet::default();
    let mut body = String::with_capacity(text.len());
    for line in text.lines() {
        let trimmed = line.trim();
        if let Some(meta) = trimmed.strip_prefix('#') {
            if let Some((key, value)) = meta.split_once(':') {
                match key.trim().to_ascii_lowercase().as_str() {
                    "respondent" => sheet.respondent = value.trim().to_string(),
                    "view" => sheet.role_view = value.trim().to_string(),
                    _ => {}
                }
            }
        } else {
            body.push_str(line);
        }
        // comment lines stay as blank lines so csv positions match the file
        body.push('\n');
    }

    let err = |line: u64, message: String| AssessError::Ratings {
        line: line as usize,
        message,
    };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(body.as_bytes());
    let headers = reader.headers().map_err(|e| err(1, e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["item_id", "rating"] {
        return Err(err(
            headers.position().map_or(1, |p| p.line()),
            "header must be `item_id,rating`".into(),
        ));
    }
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let id = record[0].to_string();
        let rating: i64 = record[1]
            .parse()
            .map_err(|_| err(line, format!("rating `{}` is not an integer", &record[1])))?;
        if sheet.ratings.insert(id.clone(), rating).is_some() {
            return Err(err(line, format!("item `{id}` rated twice")));
        }
    }
    Ok(sheet)
}
