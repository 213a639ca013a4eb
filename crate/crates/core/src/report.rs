use serde::{Deserialize, Serialize};

use crate::syntax::AgentId;

/// Structured counterexample attached to a failing [`CheckReport`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub states: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub agents: Vec<AgentId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sets: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Witness {
    pub fn detail(detail: impl Into<String>) -> Self {
        Witness {
            detail: detail.into(),
            ..Witness::default()
        }
    }
}

/// Verdict of a property check. `holds == false` exactly when a witness is present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub label: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn pass(label: impl Into<String>) -> Self {
        CheckReport {
            label: label.into(),
            holds: true,
            witness: None,
            notes: Vec::new(),
        }
    }

    pub fn fail(label: impl Into<String>, witness: Witness) -> Self {
        CheckReport {
            label: label.into(),
            holds: false,
            witness: Some(witness),
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Conjunction of sub-reports: the first failing one decides the witness.
    pub fn all(label: impl Into<String>, parts: impl IntoIterator<Item = CheckReport>) -> Self {
        let label = label.into();
        let mut notes = Vec::new();
        for part in parts {
            if !part.holds {
                let mut report = CheckReport::fail(label, part.witness.unwrap_or_default());
                report.notes = notes;
                report.notes.push(format!("failed sub-check: {}", part.label));
                return report;
            }
            notes.push(format!("{}: holds", part.label));
        }
        CheckReport {
            label,
            holds: true,
            witness: None,
            notes,
        }
    }
}
