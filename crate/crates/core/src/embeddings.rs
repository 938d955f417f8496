//! Word vector tables and the exponential-decay context mixture used to
//! build dense context representations around a target token.

use std::collections::HashMap;
use std::path::Path;

use crate::corpus::{Sentence, Token};
use crate::error::{read_input, Error, Result};

/// Dense vectors keyed by lowercase word form.
#[derive(Debug, Clone)]
pub struct VectorTable {
    dim: usize,
    map: HashMap<String, Vec<f64>>,
}

impl VectorTable {
    pub fn new(dim: usize, entries: Vec<(String, Vec<f64>)>) -> Result<VectorTable> {
        let mut map = HashMap::with_capacity(entries.len());
        for (word, vector) in entries {
            if vector.len() != dim {
                return Err(Error::data(format!(
                    "vector for {:?} has {} components, expected {}",
                    word,
                    vector.len(),
                    dim
                )));
            }
            map.insert(word.to_lowercase(), vector);
        }
        Ok(VectorTable { dim, map })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.map.get(word).map(Vec::as_slice)
    }

    /// Looks a token up by lowercased surface form, then by lemma.
    pub fn lookup_token(&self, token: &Token) -> Option<&[f64]> {
        if let Some(v) = self.get(&token.surface.to_lowercase()) {
            return Some(v);
        }
        token.lemma.as_deref().and_then(|lemma| self.get(lemma))
    }
}

/// Loads a whitespace-separated text vector file.
///
/// An optional first line holding exactly two integers is treated as a
/// `count dim` header. Every other line is `word v1 v2 ... vdim`. Repeated
/// words keep the last occurrence.
pub fn load_vectors(path: &Path) -> Result<VectorTable> {
    let text = read_input(path)?;
    let mut dim: Option<usize> = None;
    let mut map: HashMap<String, Vec<f64>> = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let word = fields.next().expect("non-empty line has a first field");
        let rest: Vec<&str> = fields.collect();
        if lineno == 0 && rest.len() == 1 {
            if let (Ok(_count), Ok(width)) = (word.parse::<usize>(), rest[0].parse::<usize>()) {
                dim = Some(width);
                continue;
            }
        }
        let mut vector = Vec::with_capacity(rest.len());
        for field in &rest {
            let value: f64 = field.parse().map_err(|_| {
                Error::data(format!(
                    "{}:{}: non-numeric vector component {:?}",
                    path.display(),
                    lineno + 1,
                    field
                ))
            })?;
            if !value.is_finite() {
                return Err(Error::data(format!(
                    "{}:{}: vector component {:?} is not finite",
                    path.display(),
                    lineno + 1,
                    field
                )));
            }
            vector.push(value);
        }
        match dim {
            None => dim = Some(vector.len()),
            Some(d) if d != vector.len() => {
                return Err(Error::data(format!(
                    "{}:{}: expected {} components, found {}",
                    path.display(),
                    lineno + 1,
                    d,
                    vector.len()
                )));
            }
            Some(_) => {}
        }
        map.insert(word.to_lowercase(), vector);
    }
    let dim = dim.ok_or_else(|| {
        Error::data(format!("{}: vector file is empty", path.display()))
    })?;
    Ok(VectorTable { dim, map })
}

/// Precomputed per-instance context vectors keyed by instance id.
#[derive(Debug, Clone)]
pub struct ContextVectorTable {
    dim: usize,
    map: HashMap<String, Vec<f64>>,
}

impl ContextVectorTable {
    pub fn new(dim: usize, entries: Vec<(String, Vec<f64>)>) -> Result<ContextVectorTable> {
        let mut map = HashMap::with_capacity(entries.len());
        for (id, vector) in entries {
            if vector.len() != dim {
                return Err(Error::data(format!(
                    "context vector for {} has {} components, expected {}",
                    id,
                    vector.len(),
                    dim
                )));
            }
            if map.insert(id.clone(), vector).is_some() {
                return Err(Error::data(format!("duplicate context vector for {}", id)));
            }
        }
        Ok(ContextVectorTable { dim, map })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, instance_id: &str) -> Option<&[f64]> {
        self.map.get(instance_id).map(Vec::as_slice)
    }
}

/// Loads per-instance context vectors, one `instance_id v1 ... vdim` line each.
pub fn load_context_vector_file(path: &Path) -> Result<ContextVectorTable> {
    let text = read_input(path)?;
    let mut dim: Option<usize> = None;
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let id = fields.next().expect("non-empty line has a first field");
        let mut vector = Vec::new();
        for field in fields {
            let value: f64 = field.parse().map_err(|_| {
                Error::data(format!(
                    "{}:{}: non-numeric vector component {:?}",
                    path.display(),
                    lineno + 1,
                    field
                ))
            })?;
            if !value.is_finite() {
                return Err(Error::data(format!(
                    "{}:{}: vector component {:?} is not finite",
                    path.display(),
                    lineno + 1,
                    field
                )));
            }
            vector.push(value);
        }
        if let Some(d) = dim {
            if vector.len() != d {
                return Err(Error::data(format!(
                    "{}:{}: expected {} components, found {}",
                    path.display(),
                    lineno + 1,
                    d,
                    vector.len()
                )));
            }
        } else {
            dim = Some(vector.len());
        }
        entries.push((id.to_string(), vector));
    }
    let dim = dim.ok_or_else(|| {
        Error::data(format!("{}: context vector file is empty", path.display()))
    })?;
    ContextVectorTable::new(dim, entries).map_err(|e| match e {
        Error::Data(msg) => Error::data(format!("{}: {}", path.display(), msg)),
        other => other,
    })
}

/// Options for [`context_mixture`].
#[derive(Debug, Clone)]
pub struct MixtureOptions {
    /// Decay factor between adjacent distances; `None` picks the factor that
    /// makes the weight at the window edge exactly 0.1.
    pub gamma: Option<f64>,
    /// Divide by the total weight of contributing positions.
    pub normalize: bool,
    /// Add the target token itself at weight 1.
    pub include_target: bool,
}

impl Default for MixtureOptions {
    fn default() -> MixtureOptions {
        MixtureOptions {
            gamma: None,
            normalize: true,
            include_target: false,
        }
    }
}

/// Per-distance weights `1, gamma, gamma^2, ...` for distances `1..=radius`,
/// computed as a running product so each weight is exactly `gamma` times the
/// previous one.
pub fn mixture_weights(radius: usize, gamma: Option<f64>) -> Vec<f64> {
    let gamma = gamma.unwrap_or_else(|| default_gamma(radius));
    let mut weights = Vec::with_capacity(radius);
    let mut w = 1.0;
    for _ in 0..radius {
        weights.push(w);
        w *= gamma;
    }
    weights
}

fn default_gamma(radius: usize) -> f64 {
    if radius <= 1 {
        1.0
    } else {
        0.1_f64.powf(1.0 / (radius as f64 - 1.0))
    }
}

/// Weighted mixture of the word vectors around `target_index`.
///
/// Tokens at distance `d` on either side contribute with weight
/// `gamma^(d-1)`. Positions whose token has no vector contribute nothing.
/// With `normalize` the result is a convex combination of the contributing
/// vectors; a lone contributor comes back unchanged. Left and right vectors
/// at the same distance are summed before scaling, so mirrored contexts
/// produce identical output. No contributors yields the zero vector.
pub fn context_mixture(
    sentence: &Sentence,
    target_index: usize,
    table: &VectorTable,
    radius: usize,
    opts: &MixtureOptions,
) -> Vec<f64> {
    let dim = table.dim();
    let tokens = &sentence.tokens;
    let weights = mixture_weights(radius, opts.gamma);

    let mut found: Vec<(f64, Option<&[f64]>, Option<&[f64]>)> = Vec::new();
    if opts.include_target {
        let target = tokens.get(target_index).and_then(|t| table.lookup_token(t));
        if target.is_some() {
            found.push((1.0, target, None));
        }
    }
    for (d, &weight) in weights.iter().enumerate() {
        let distance = d + 1;
        let left = target_index
            .checked_sub(distance)
            .and_then(|i| tokens.get(i))
            .and_then(|t| table.lookup_token(t));
        let right = tokens
            .get(target_index + distance)
            .and_then(|t| table.lookup_token(t));
        if left.is_some() || right.is_some() {
            found.push((weight, left, right));
        }
    }

    let mut acc = vec![0.0; dim];
    if found.is_empty() {
        return acc;
    }
    let denom: f64 = if opts.normalize {
        found
            .iter()
            .map(|(w, l, r)| w * (l.is_some() as u8 + r.is_some() as u8) as f64)
            .sum()
    } else {
        1.0
    };
    for (weight, left, right) in found {
        let scale = weight / denom;
        match (left, right) {
            (Some(l), Some(r)) => {
                for i in 0..dim {
                    acc[i] += scale * (l[i] + r[i]);
                }
            }
            (Some(v), None) | (None, Some(v)) => {
                for i in 0..dim {
                    acc[i] += scale * v[i];
                }
            }
            (None, None) => {}
        }
    }
    acc
}
