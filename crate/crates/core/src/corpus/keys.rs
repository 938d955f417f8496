//! Key files: `instance_id key [key ...]`, one instance per line.
//!
//! Gold standards may list several acceptable keys; system answer files use
//! the same layout with exactly one key per instance.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::error::{read_input, write_output, Error, Result};

use super::GoldKeys;

pub fn parse_gold_keys(path: &Path) -> Result<GoldKeys> {
    let text = read_input(path)?;
    let mut keys = GoldKeys::default();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let id = fields.next().expect("non-blank line has a first field");
        let set: BTreeSet<String> = fields.map(str::to_string).collect();
        keys.insert(id, set).map_err(|e| match e {
            Error::Data(msg) => {
                Error::data(format!("{}:{}: {}", path.display(), lineno + 1, msg))
            }
            other => other,
        })?;
    }
    Ok(keys)
}

/// Writes keys sorted by instance id, keys in ascending order within a line.
pub fn write_gold_keys(keys: &GoldKeys, path: &Path) -> Result<()> {
    let mut out = String::new();
    for (id, set) in keys.iter() {
        out.push_str(id);
        for key in set {
            out.push(' ');
            out.push_str(key);
        }
        out.push('\n');
    }
    write_output(path, out.as_bytes())
}

/// Parses a system answer file: the gold-key layout restricted to exactly one
/// key per instance.
pub fn parse_answer_keys(path: &Path) -> Result<BTreeMap<String, Option<String>>> {
    let gold = parse_gold_keys(path)?;
    let mut answers = BTreeMap::new();
    for (id, set) in gold.iter() {
        if set.len() != 1 {
            return Err(Error::data(format!(
                "{}: answer for {} lists {} keys; answers carry exactly one",
                path.display(),
                id,
                set.len()
            )));
        }
        answers.insert(id.clone(), set.iter().next().cloned());
    }
    Ok(answers)
}

/// Renders answers in the key-file layout, skipping unanswered instances.
pub fn render_answer_keys(answers: &BTreeMap<String, Option<String>>) -> String {
    let mut out = String::new();
    for (id, key) in answers {
        if let Some(key) = key {
            out.push_str(id);
            out.push(' ');
            out.push_str(key);
            out.push('\n');
        }
    }
    out
}

pub fn write_answer_keys(
    answers: &BTreeMap<String, Option<String>>,
    path: &Path,
) -> Result<()> {
    write_output(path, render_answer_keys(answers).as_bytes())
}
