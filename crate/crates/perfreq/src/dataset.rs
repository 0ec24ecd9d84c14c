//! Labeled requirement CSV files: `id,text,left,right,v_beta,direction`.

use std::collections::HashSet;

use perfreq_core::model::{ClassLabel, FragmentKind, MetricDirection};
use perfreq_core::text::parse_number;
use thiserror::Error;

const HEADER: [&str; 6] = ["id", "text", "left", "right", "v_beta", "direction"];

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledRequirement {
    pub id: String,
    pub text: String,
    pub gold: ClassLabel,
    pub gold_v_beta: Option<f64>,
    pub direction: Option<MetricDirection>,
}

/// Rows are numbered from 1, not counting the header.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatasetError {
    #[error("header must be `{}`", HEADER.join(","))]
    Header,
    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error("row {row}: duplicate id `{id}`")]
    DuplicateId { row: usize, id: String },
}

pub fn parse_dataset(text: &str) -> Result<Vec<LabeledRequirement>, DatasetError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|_| DatasetError::Header)?;
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(DatasetError::Header);
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let parse_err = |message: String| DatasetError::Parse { row, message };
        let record = record.map_err(|e| parse_err(e.to_string()))?;
        let field = |k: usize| record.get(k).unwrap_or("");
        let id = field(0).to_string();
        if id.is_empty() {
            return Err(parse_err("empty id".into()));
        }
        let kind = |k: usize| {
            FragmentKind::from_code(field(k)).ok_or_else(|| parse_err(format!("invalid {} code `{}`", HEADER[k], field(k))))
        };
        let gold = ClassLabel::new(kind(2)?, kind(3)?);
        let gold_v_beta = match field(4) {
            "" => None,
            s => Some(parse_number(s).ok_or_else(|| parse_err(format!("invalid v_beta `{s}`")))?),
        };
        let direction = match field(5) {
            "" => None,
            s => Some(s.parse().map_err(|_| parse_err(format!("invalid direction `{s}`")))?),
        };
        if !seen.insert(id.clone()) {
            return Err(DatasetError::DuplicateId { row, id });
        }
        out.push(LabeledRequirement { id, text: field(1).to_string(), gold, gold_v_beta, direction });
    }
    Ok(out)
}

pub use crate::io::load_dataset;

#[cfg(test)]
mod tests {
    use super::*;

    const HEAD: &str = "id,text,left,right,v_beta,direction\n";

    #[test]
    fn three_rows() {
        let text = format!(
            "{HEAD}a,The system should response in 2 seconds.,E,S,2,min\n\
             b,\"Shall support 1,000 users, or more\",G,E,\"1,000\",max\n\
             c,The system shall be fast.,S,S,,\n"
        );
        let rows = parse_dataset(&text).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1].text, "Shall support 1,000 users, or more");
        assert_eq!(rows[1].gold_v_beta, Some(1000.0));
        assert_eq!(rows[2].gold_v_beta, None);
        assert_eq!(rows[0].direction, Some(MetricDirection::Minimize));
    }

    #[test]
    fn bad_code_names_the_row() {
        let text = format!("{HEAD}a,x,E,S,,\nb,y,X,S,,\n");
        assert!(matches!(parse_dataset(&text), Err(DatasetError::Parse { row: 2, .. })));
    }

    #[test]
    fn duplicate_ids() {
        let text = format!("{HEAD}a,x,E,S,,\na,y,E,S,,\n");
        assert_eq!(parse_dataset(&text), Err(DatasetError::DuplicateId { row: 2, id: "a".into() }));
    }

    #[test]
    fn header_and_empty() {
        assert_eq!(parse_dataset(HEAD).unwrap(), vec![]);
        assert_eq!(parse_dataset("id,text\n"), Err(DatasetError::Header));
    }
}
