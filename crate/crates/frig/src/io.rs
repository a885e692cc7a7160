//! File formats: FRIG JSON, preference-matrix CSV, selection vectors.
//!
//! FRIG JSON carries a catalog plus an explicit dependency list; ids are
//! 1-based on disk to match the usual `r1..rn` numbering, 0-based in
//! memory. Omitted pairs mean strength 0. Saving and loading round-trips
//! a graph exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Frig, Requirement, StrengthMatrix, ValidationReport};
use crate::mining::{MiningError, PreferenceMatrix};
use crate::valuation::Selection;

#[derive(Debug, Error)]
pub enum FrigFileError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("file declares no requirements")]
    EmptyCatalog,
    #[error("requirement ids must be 1..={n} with no gaps; id {id} is out of range")]
    IdOutOfRange { id: u64, n: usize },
    #[error("requirement id {id} appears more than once")]
    DuplicateId { id: u64 },
    #[error("requirement {id} has negative value {value}")]
    NegativeValue { id: u64, value: f64 },
    #[error("dependency ({from}, {to}) references an unknown requirement id")]
    UnknownEdgeId { from: u64, to: u64 },
    #[error("dependency ({from}, {to}) appears more than once")]
    DuplicateEdge { from: u64, to: u64 },
    #[error("dependency ({from}, {to}) has strength {strength}, outside [0, 1]")]
    StrengthOutOfRange { from: u64, to: u64, strength: f64 },
    #[error("dependency ({from}, {to}) is a self-dependency")]
    SelfEdge { from: u64, to: u64 },
    #[error("invalid graph: {0}")]
    Invalid(ValidationReport),
}

#[derive(Debug, Serialize, Deserialize)]
struct FrigDoc {
    requirements: Vec<RequirementDoc>,
    #[serde(default)]
    dependencies: Vec<DependencyDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RequirementDoc {
    id: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    value: f64,
    cost: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct DependencyDoc {
    from: u64,
    to: u64,
    strength: f64,
}

/// Parses FRIG JSON text.
pub fn parse_frig_json(text: &str) -> Result<Frig, FrigFileError> {
    let doc: FrigDoc = serde_json::from_str(text)?;
    let n = doc.requirements.len();
    if n == 0 {
        return Err(FrigFileError::EmptyCatalog);
    }

    let mut catalog: Vec<Option<Requirement>> = vec![None; n];
    for entry in &doc.requirements {
        if entry.id == 0 || entry.id > n as u64 {
            return Err(FrigFileError::IdOutOfRange { id: entry.id, n });
        }
        let index = (entry.id - 1) as usize;
        if catalog[index].is_some() {
            return Err(FrigFileError::DuplicateId { id: entry.id });
        }
        if !(entry.value >= 0.0 && entry.value.is_finite()) {
            return Err(FrigFileError::NegativeValue {
                id: entry.id,
                value: entry.value,
            });
        }
        catalog[index] = Some(Requirement {
            id: index,
            label: entry.label.clone(),
            value: entry.value,
            cost: entry.cost,
        });
    }
    let catalog: Vec<Requirement> = catalog
        .into_iter()
        .map(|r| r.expect("each id 1..=n seen exactly once"))
        .collect();

    let mut rho = StrengthMatrix::zeros(n);
    let mut seen = vec![false; n * n];
    for edge in &doc.dependencies {
        let check = |id: u64| -> Result<usize, FrigFileError> {
            if id == 0 || id > n as u64 {
                Err(FrigFileError::UnknownEdgeId {
                    from: edge.from,
                    to: edge.to,
                })
            } else {
                Ok((id - 1) as usize)
            }
        };
        let (from, to) = (check(edge.from)?, check(edge.to)?);
        if from == to {
            return Err(FrigFileError::SelfEdge {
                from: edge.from,
                to: edge.to,
            });
        }
        if seen[from * n + to] {
            return Err(FrigFileError::DuplicateEdge {
                from: edge.from,
                to: edge.to,
            });
        }
        seen[from * n + to] = true;
        if !(0.0..=1.0).contains(&edge.strength) || edge.strength.is_nan() {
            return Err(FrigFileError::StrengthOutOfRange {
                from: edge.from,
                to: edge.to,
                strength: edge.strength,
            });
        }
        rho[(from, to)] = edge.strength;
    }

    Frig::new(catalog, rho).map_err(FrigFileError::Invalid)
}

/// Loads a FRIG from a JSON file.
pub fn load_frig(path: impl AsRef<Path>) -> Result<Frig, FrigFileError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| FrigFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_frig_json(&text)
}

/// Serializes a FRIG to JSON text: requirements in id order, dependencies
/// in (from, to) order, 1-based ids.
pub fn frig_to_json(frig: &Frig) -> String {
    let doc = FrigDoc {
        requirements: frig
            .requirements()
            .iter()
            .map(|r| RequirementDoc {
                id: (r.id + 1) as u64,
                label: r.label.clone(),
                value: r.value,
                cost: r.cost,
            })
            .collect(),
        dependencies: frig
            .edges()
            .map(|(from, to, strength)| DependencyDoc {
                from: (from + 1) as u64,
                to: (to + 1) as u64,
                strength,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("FRIG documents always serialize");
    text.push('\n');
    text
}

/// Saves a FRIG as a JSON file.
pub fn save_frig(frig: &Frig, path: impl AsRef<Path>) -> Result<(), FrigFileError> {
    let path = path.as_ref();
    let mut file = fs::File::create(path).map_err(|source| FrigFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    file.write_all(frig_to_json(frig).as_bytes())
        .map_err(|source| FrigFileError::Io {
            path: path.display().to_string(),
            source,
        })
}

#[derive(Debug, Error)]
pub enum PrefsFileError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Shape(#[from] MiningError),
}

/// Parses a preference matrix from CSV text: a header row of user ids,
/// then one row per requirement, `req_id,0/1,0/1,...`, ids 1-based and in
/// order.
pub fn parse_preferences_csv(text: &str) -> Result<PreferenceMatrix, PrefsFileError> {
    let mut rows: Vec<Vec<bool>> = Vec::new();
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .ok_or_else(|| PrefsFileError::Parse {
            line: 1,
            message: "missing header row".into(),
        })?
        .1;
    let user_count = header.split(',').count().saturating_sub(1);

    for (index, line) in lines {
        let line_no = index + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let id_field = fields.next().unwrap_or_default().trim();
        let id: usize = id_field.parse().map_err(|_| PrefsFileError::Parse {
            line: line_no,
            message: format!("requirement id {id_field:?} is not an integer"),
        })?;
        if id != rows.len() + 1 {
            return Err(PrefsFileError::Parse {
                line: line_no,
                message: format!("expected requirement id {}, got {id}", rows.len() + 1),
            });
        }
        let mut row = Vec::with_capacity(user_count);
        for field in fields {
            match field.trim() {
                "0" => row.push(false),
                "1" => row.push(true),
                other => {
                    return Err(PrefsFileError::Parse {
                        line: line_no,
                        message: format!("preference cell {other:?} is not 0 or 1"),
                    })
                }
            }
        }
        if row.len() != user_count {
            return Err(PrefsFileError::Parse {
                line: line_no,
                message: format!("expected {user_count} preference cells, got {}", row.len()),
            });
        }
        rows.push(row);
    }
    Ok(PreferenceMatrix::new(rows)?)
}

/// Loads a preference matrix from a CSV file.
pub fn load_preferences(path: impl AsRef<Path>) -> Result<PreferenceMatrix, PrefsFileError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| PrefsFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_preferences_csv(&text)
}

#[derive(Debug, Error, PartialEq)]
pub enum SelectionParseError {
    #[error("selection vector has {got} entries, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("selection entry {0:?} is not 0 or 1")]
    BadEntry(String),
}

/// Parses an indicator vector for `n` requirements. Accepts the
/// solution-table form `{1,0,1,0}`, a bare comma list `1,0,1,0`, or
/// compact digits `1010`.
pub fn parse_selection(text: &str, n: usize) -> Result<Selection, SelectionParseError> {
    let trimmed = text
        .trim()
        .trim_start_matches('{')
        .trim_end_matches('}')
        .trim();
    let entries: Vec<String> = if trimmed.contains(',') {
        trimmed.split(',').map(|f| f.trim().to_string()).collect()
    } else {
        trimmed.chars().map(|c| c.to_string()).collect()
    };
    let mut flags = Vec::with_capacity(entries.len());
    for entry in &entries {
        match entry.as_str() {
            "0" => flags.push(false),
            "1" => flags.push(true),
            other => return Err(SelectionParseError::BadEntry(other.to_string())),
        }
    }
    if flags.len() != n {
        return Err(SelectionParseError::WrongLength {
            expected: n,
            got: flags.len(),
        });
    }
    Ok(Selection::from_flags(flags))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::loi;

    fn sample() -> Frig {
        let catalog = vec![
            Requirement::with_label(0, "login", 20.0, 10),
            Requirement::new(1, 10.0, 10),
            Requirement::new(2, 50.0, 15),
        ];
        Frig::from_edges(catalog, &[(0, 1, 0.4), (2, 0, 0.8)]).unwrap()
    }

    #[test]
    fn json_round_trip_is_identity() {
        let frig = sample();
        let text = frig_to_json(&frig);
        let back = parse_frig_json(&text).unwrap();
        assert_eq!(frig, back);
    }

    #[test]
    fn file_round_trip_is_identity() {
        let dir = std::env::temp_dir().join("frig-io-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("sample.json");
        let frig = sample();
        save_frig(&frig, &path).unwrap();
        assert_eq!(load_frig(&path).unwrap(), frig);
        fs::remove_file(&path).ok();
    }

    #[test]
    fn out_of_range_strength_names_the_edge() {
        let text = r#"{
            "requirements": [
                {"id": 1, "value": 1, "cost": 1},
                {"id": 2, "value": 1, "cost": 1}
            ],
            "dependencies": [{"from": 1, "to": 2, "strength": 1.5}]
        }"#;
        let err = parse_frig_json(text).unwrap_err();
        assert!(matches!(
            err,
            FrigFileError::StrengthOutOfRange { from: 1, to: 2, strength } if strength == 1.5
        ));
    }

    #[test]
    fn structural_errors_are_descriptive() {
        let dup_edge = r#"{
            "requirements": [
                {"id": 1, "value": 1, "cost": 1},
                {"id": 2, "value": 1, "cost": 1}
            ],
            "dependencies": [
                {"from": 1, "to": 2, "strength": 0.5},
                {"from": 1, "to": 2, "strength": 0.7}
            ]
        }"#;
        assert!(matches!(
            parse_frig_json(dup_edge).unwrap_err(),
            FrigFileError::DuplicateEdge { from: 1, to: 2 }
        ));

        let unknown = r#"{
            "requirements": [{"id": 1, "value": 1, "cost": 1}],
            "dependencies": [{"from": 1, "to": 9, "strength": 0.5}]
        }"#;
        assert!(matches!(
            parse_frig_json(unknown).unwrap_err(),
            FrigFileError::UnknownEdgeId { .. }
        ));

        let gap = r#"{"requirements": [
            {"id": 1, "value": 1, "cost": 1},
            {"id": 3, "value": 1, "cost": 1}
        ]}"#;
        assert!(matches!(
            parse_frig_json(gap).unwrap_err(),
            FrigFileError::IdOutOfRange { id: 3, n: 2 }
        ));

        assert!(matches!(
            parse_frig_json("{not json").unwrap_err(),
            FrigFileError::Json(_)
        ));
    }

    #[test]
    fn embedded_case_study_loads_with_its_reference_level() {
        let frig = crate::datasets::Dataset::Pms.frig();
        assert_eq!(frig.len(), 23);
        assert_eq!(frig.edge_count(), 113);
        assert!((loi(&frig).unwrap() - 113.0 / 506.0).abs() < 1e-12);
    }

    #[test]
    fn preference_csv_round_trips_the_fixture_shape() {
        let text = "req_id,u1,u2,u3\n1,1,0,1\n2,0,0,1\n";
        let prefs = parse_preferences_csv(text).unwrap();
        assert_eq!(prefs.n_requirements(), 2);
        assert_eq!(prefs.n_users(), 3);
        assert!(prefs.prefers(0, 0));
        assert!(!prefs.prefers(1, 1));
    }

    #[test]
    fn preference_csv_rejects_bad_cells_with_line_numbers() {
        let text = "req_id,u1\n1,2\n";
        match parse_preferences_csv(text).unwrap_err() {
            PrefsFileError::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains('2'));
            }
            other => panic!("unexpected error {other:?}"),
        }
        let text = "req_id,u1\n5,1\n";
        assert!(matches!(
            parse_preferences_csv(text).unwrap_err(),
            PrefsFileError::Parse { line: 2, .. }
        ));
    }

    #[test]
    fn selection_vectors_parse_in_all_three_forms() {
        let expected = Selection::from_indices(4, &[0, 2]);
        for text in ["{1,0,1,0}", "1,0,1,0", "1010", " {1, 0, 1, 0} "] {
            assert_eq!(parse_selection(text, 4).unwrap(), expected, "{text:?}");
        }
        assert_eq!(
            parse_selection("10", 4).unwrap_err(),
            SelectionParseError::WrongLength {
                expected: 4,
                got: 2
            }
        );
        assert_eq!(
            parse_selection("10x0", 4).unwrap_err(),
            SelectionParseError::BadEntry("x".into())
        );
    }

    #[test]
    fn catalogs_without_dependencies_parse_and_sum() {
        let ran = crate::datasets::Dataset::Ran.frig();
        assert_eq!(ran.len(), 14);
        assert_eq!(crate::graph::total_cost(ran.requirements()), 99);
        assert_eq!(ran.edge_count(), 0);
        let pmr = crate::datasets::Dataset::Pmr.frig();
        assert_eq!(pmr.len(), 11);
        assert_eq!(crate::graph::total_cost(pmr.requirements()), 101);
    }
}
