//! Deterministic JSON verification reports.
//!
//! Reports are byte-identical for identical inputs and seed: sections keep
//! insertion order, all maps are ordered, and rationals are rendered as
//! `num/den` strings.

use crate::conformal::ResidualEntry;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub pass: bool,
    pub sections: Vec<Section>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Section {
    pub name: String,
    pub pass: bool,
    /// Number of individual identities or facts scanned.
    pub checked: u64,
    pub failures: Vec<ResidualEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

impl Section {
    pub fn from_failures(name: &str, checked: u64, failures: Vec<ResidualEntry>) -> Self {
        Section {
            name: name.to_string(),
            pass: failures.is_empty(),
            checked,
            failures,
            detail: None,
        }
    }

    pub fn fact(name: &str, pass: bool, detail: Option<serde_json::Value>) -> Self {
        Section {
            name: name.to_string(),
            pass,
            checked: 1,
            failures: Vec::new(),
            detail,
        }
    }
}

impl Report {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            seed,
            pass: true,
            sections: Vec::new(),
        }
    }

    pub fn push(&mut self, section: Section) {
        self.pass &= section.pass;
        self.sections.push(section);
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}
