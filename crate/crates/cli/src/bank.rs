//! Exercise banks: TOML files listing exercises for the web front end.

use std::collections::BTreeSet;
use std::path::Path;

use cnlcheck_core::{check_source, scan_document};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    NumberTheory,
    SetTheory,
    Propositional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Write a proof of the statement.
    Prove,
    /// Predict the checker's label for each sentence of the attachment.
    PredictFeedback,
    /// Repair the faulty proof given as attachment.
    FixTheProof,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Exercise {
    pub id: String,
    /// Header of the exercise: declarations, premises and the goal.
    pub statement: String,
    pub domain: Domain,
    pub mode: Mode,
    /// A complete proof text shown with the exercise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attachment: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bank {
    #[serde(default, rename = "exercise")]
    pub exercises: Vec<Exercise>,
}

#[derive(Debug, thiserror::Error)]
pub enum BankError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed bank: {0}")]
    Syntax(String),
    #[error("exercise '{id}': {reason}")]
    BankParseError { id: String, reason: String },
}

fn invalid(id: &str, reason: impl Into<String>) -> BankError {
    BankError::BankParseError { id: id.to_string(), reason: reason.into() }
}

impl Bank {
    pub fn load(path: &Path) -> Result<Bank, BankError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| BankError::Io { path: path.display().to_string(), source })?;
        Bank::parse(&text)
    }

    /// Parse and validate a bank.
    pub fn parse(text: &str) -> Result<Bank, BankError> {
        let bank: Bank = toml::from_str(text).map_err(|e| BankError::Syntax(e.to_string()))?;
        let mut seen = BTreeSet::new();
        for ex in &bank.exercises {
            if ex.id.trim().is_empty() {
                return Err(invalid(&ex.id, "empty id"));
            }
            if !seen.insert(ex.id.as_str()) {
                return Err(invalid(&ex.id, "duplicate id"));
            }
            if scan_document(&ex.statement).goal.is_none() {
                return Err(invalid(&ex.id, "the statement announces no readable goal"));
            }
            match (ex.mode, &ex.attachment) {
                (Mode::Prove, _) => {}
                (_, None) => return Err(invalid(&ex.id, "this mode needs an attachment")),
                (Mode::PredictFeedback, Some(_)) => {}
                (Mode::FixTheProof, Some(proof)) => {
                    if check_source(proof).accepted() {
                        return Err(invalid(&ex.id, "the proof to be fixed is already accepted"));
                    }
                }
            }
        }
        Ok(bank)
    }

    pub fn get(&self, id: &str) -> Option<&Exercise> {
        self.exercises.iter().find(|e| e.id == id)
    }
}
