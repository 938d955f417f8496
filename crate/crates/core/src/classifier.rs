//! Per-word-type linear SVM training: one-vs-rest over sense labels, each
//! binary subproblem solved by dual coordinate descent on the L1-hinge,
//! L2-regularized objective.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::features::{FeatureSpace, InstanceVector};
use crate::lexicon::{Lexicon, WordType};

/// FNV-1a hash of the word type's rendered form; the per-classifier shuffle
/// seed, stable across runs and platforms.
pub fn stable_word_type_seed(word_type: &WordType) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in word_type.to_string().bytes() {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Solver settings for one classifier.
#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub c: f64,
    /// Stop once the largest projected-gradient violation in an epoch falls
    /// below this.
    pub tolerance: f64,
    pub max_epochs: u32,
    pub seed: u64,
    /// Record primal and dual objectives after every epoch.
    pub record_objectives: bool,
}

impl Default for TrainConfig {
    fn default() -> TrainConfig {
        TrainConfig {
            c: 1.0,
            tolerance: 0.1,
            max_epochs: 1000,
            seed: 0,
            record_objectives: false,
        }
    }
}

impl TrainConfig {
    /// The same settings with the seed fixed by the word type.
    pub fn with_word_type_seed(&self, word_type: &WordType) -> TrainConfig {
        TrainConfig {
            seed: stable_word_type_seed(word_type),
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.c > 0.0) || !(self.tolerance > 0.0) || self.max_epochs == 0 {
            return Err(Error::usage(
                "training requires positive C, positive tolerance, and at least one epoch",
            ));
        }
        Ok(())
    }
}

/// Outcome of one binary dual solve.
#[derive(Debug, Clone)]
pub struct DualSolution {
    pub weights: Vec<f64>,
    pub alphas: Vec<f64>,
    pub epochs: u32,
    pub converged: bool,
    pub primal_by_epoch: Vec<f64>,
    pub dual_by_epoch: Vec<f64>,
}

fn dot(weights: &[f64], vector: &InstanceVector, sparse_dim: usize) -> f64 {
    let mut sum = 0.0;
    for &column in &vector.sparse {
        sum += weights[column as usize];
    }
    for (j, &x) in vector.dense.iter().enumerate() {
        sum += weights[sparse_dim + j] * x;
    }
    sum
}

fn add_scaled(weights: &mut [f64], scale: f64, vector: &InstanceVector, sparse_dim: usize) {
    for &column in &vector.sparse {
        weights[column as usize] += scale;
    }
    for (j, &x) in vector.dense.iter().enumerate() {
        weights[sparse_dim + j] += scale * x;
    }
}

/// ½‖w‖² + C·Σ hinge(yᵢ, w·xᵢ) over the training set.
pub fn primal_objective(
    vectors: &[InstanceVector],
    labels: &[f64],
    weights: &[f64],
    c: f64,
    sparse_dim: usize,
) -> f64 {
    let norm: f64 = weights.iter().map(|w| w * w).sum();
    let hinge: f64 = vectors
        .iter()
        .zip(labels)
        .map(|(v, y)| (1.0 - y * dot(weights, v, sparse_dim)).max(0.0))
        .sum();
    0.5 * norm + c * hinge
}

/// Σαᵢ − ½‖w‖² for the dual iterate behind `weights`.
pub fn dual_objective(alphas: &[f64], weights: &[f64]) -> f64 {
    let norm: f64 = weights.iter().map(|w| w * w).sum();
    alphas.iter().sum::<f64>() - 0.5 * norm
}

/// Dual coordinate descent on a set of ±1-labeled vectors. Index order is
/// reshuffled every epoch from a stream seeded by `config.seed`, so the
/// result depends only on the inputs and the seed.
pub fn solve_binary_dual(
    vectors: &[InstanceVector],
    labels: &[f64],
    sparse_dim: usize,
    dense_dim: usize,
    config: &TrainConfig,
) -> Result<DualSolution> {
    config.validate()?;
    if vectors.len() != labels.len() {
        return Err(Error::usage(format!(
            "{} vectors paired with {} labels",
            vectors.len(),
            labels.len()
        )));
    }
    for (vector, label) in vectors.iter().zip(labels) {
        if *label != 1.0 && *label != -1.0 {
            return Err(Error::usage(format!("label {} is not +1 or -1", label)));
        }
        if vector.sparse.iter().any(|&i| i as usize >= sparse_dim) {
            return Err(Error::usage(format!(
                "instance {} references a column outside the feature space",
                vector.meta.instance_id
            )));
        }
        if vector.dense.len() != dense_dim {
            return Err(Error::usage(format!(
                "instance {} has dense length {}, expected {}",
                vector.meta.instance_id,
                vector.dense.len(),
                dense_dim
            )));
        }
    }

    let n = vectors.len();
    let qii: Vec<f64> = vectors
        .iter()
        .map(|v| v.sparse.len() as f64 + v.dense.iter().map(|x| x * x).sum::<f64>())
        .collect();
    let mut alphas = vec![0.0; n];
    let mut weights = vec![0.0; sparse_dim + dense_dim];
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut primal_by_epoch = Vec::new();
    let mut dual_by_epoch = Vec::new();
    let mut epochs = 0;
    let mut converged = false;

    for _ in 0..config.max_epochs {
        order.shuffle(&mut rng);
        let mut max_violation = 0.0_f64;
        for &i in &order {
            let y = labels[i];
            let g = y * dot(&weights, &vectors[i], sparse_dim) - 1.0;
            let pg = if alphas[i] == 0.0 {
                g.min(0.0)
            } else if alphas[i] == config.c {
                g.max(0.0)
            } else {
                g
            };
            max_violation = max_violation.max(pg.abs());
            if pg.abs() <= 1e-12 {
                continue;
            }
            let updated = if qii[i] > 0.0 {
                (alphas[i] - g / qii[i]).clamp(0.0, config.c)
            } else if g < 0.0 {
                config.c
            } else {
                0.0
            };
            let delta = updated - alphas[i];
            if delta != 0.0 {
                add_scaled(&mut weights, delta * y, &vectors[i], sparse_dim);
                alphas[i] = updated;
            }
        }
        epochs += 1;
        if config.record_objectives {
            primal_by_epoch.push(primal_objective(vectors, labels, &weights, config.c, sparse_dim));
            dual_by_epoch.push(dual_objective(&alphas, &weights));
        }
        if max_violation < config.tolerance {
            converged = true;
            break;
        }
    }

    Ok(DualSolution {
        weights,
        alphas,
        epochs,
        converged,
        primal_by_epoch,
        dual_by_epoch,
    })
}

/// Trains one binary separator; requires at least one example of each sign.
pub fn train_binary_svm(
    vectors: &[InstanceVector],
    labels: &[f64],
    sparse_dim: usize,
    dense_dim: usize,
    config: &TrainConfig,
) -> Result<Vec<f64>> {
    let positives = labels.iter().filter(|y| **y > 0.0).count();
    if positives == 0 || positives == labels.len() {
        return Err(Error::usage(
            "binary training requires at least one example of each sign",
        ));
    }
    Ok(solve_binary_dual(vectors, labels, sparse_dim, dense_dim, config)?.weights)
}

/// One training example: an assembled vector and its gold sense key.
#[derive(Debug, Clone)]
pub struct TrainingExample {
    pub vector: InstanceVector,
    pub sense_key: String,
}

/// A trained one-vs-rest sense classifier for a single word type.
#[derive(Debug, Clone)]
pub struct SenseClassifier {
    word_type: WordType,
    labels: Vec<String>,
    space: FeatureSpace,
    weights: Vec<Vec<f64>>,
}

impl SenseClassifier {
    /// Reassembles a classifier from stored parts, checking shape.
    pub fn from_parts(
        word_type: WordType,
        labels: Vec<String>,
        space: FeatureSpace,
        weights: Vec<Vec<f64>>,
    ) -> Result<SenseClassifier> {
        if labels.len() < 2 {
            return Err(Error::data(format!(
                "classifier for {} has fewer than two labels",
                word_type
            )));
        }
        if weights.len() != labels.len() {
            return Err(Error::data(format!(
                "classifier for {} has {} weight rows for {} labels",
                word_type,
                weights.len(),
                labels.len()
            )));
        }
        let width = space.total_dim();
        for row in &weights {
            if row.len() != width {
                return Err(Error::data(format!(
                    "classifier for {} has a weight row of length {}, expected {}",
                    word_type,
                    row.len(),
                    width
                )));
            }
            if row.iter().any(|w| !w.is_finite()) {
                return Err(Error::data(format!(
                    "classifier for {} contains non-finite weights",
                    word_type
                )));
            }
        }
        Ok(SenseClassifier {
            word_type,
            labels,
            space,
            weights,
        })
    }

    pub fn word_type(&self) -> &WordType {
        &self.word_type
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn space(&self) -> &FeatureSpace {
        &self.space
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    /// `w_k · x` for every label row.
    pub fn decision_scores(&self, vector: &InstanceVector) -> Result<Vec<f64>> {
        let sparse_dim = self.space.sparse_dim();
        if vector.dense.len() != self.space.dense_dim() {
            return Err(Error::usage(format!(
                "instance {} has dense length {}, expected {}",
                vector.meta.instance_id,
                vector.dense.len(),
                self.space.dense_dim()
            )));
        }
        if vector.sparse.iter().any(|&i| (i as usize) >= sparse_dim) {
            return Err(Error::usage(format!(
                "instance {} references a column outside the feature space",
                vector.meta.instance_id
            )));
        }
        Ok(self
            .weights
            .iter()
            .map(|row| dot(row, vector, sparse_dim))
            .collect())
    }

    /// The label with the highest score; ties go to the earlier label row.
    pub fn predict(&self, vector: &InstanceVector) -> Result<&str> {
        let scores = self.decision_scores(vector)?;
        let mut best = 0;
        for (k, score) in scores.iter().enumerate().skip(1) {
            if *score > scores[best] {
                best = k;
            }
        }
        Ok(&self.labels[best])
    }
}

/// Sense keys ordered for label rows: lexicon senses ascending by sense
/// number, then any keys outside the lexicon in string order.
fn ordered_labels(keys: impl IntoIterator<Item = String>, lexicon: &Lexicon) -> Vec<String> {
    let mut labels: Vec<String> = keys.into_iter().collect();
    labels.sort_by(|a, b| {
        let rank = |key: &String| match lexicon.sense(key) {
            Some(sense) => (0, sense.sense_number),
            None => (1, 0),
        };
        rank(a).cmp(&rank(b)).then_with(|| a.cmp(b))
    });
    labels
}

/// Trains one binary row per distinct sense label. Examples are sorted by
/// (instance id, sense key) first, so the input order never matters.
pub fn train_one_vs_rest(
    word_type: &WordType,
    space: &FeatureSpace,
    examples: &[TrainingExample],
    lexicon: &Lexicon,
    config: &TrainConfig,
) -> Result<SenseClassifier> {
    let mut examples: Vec<&TrainingExample> = examples.iter().collect();
    examples.sort_by(|a, b| {
        (&a.vector.meta.instance_id, &a.sense_key).cmp(&(&b.vector.meta.instance_id, &b.sense_key))
    });
    let distinct: std::collections::BTreeSet<String> =
        examples.iter().map(|e| e.sense_key.clone()).collect();
    if distinct.len() < 2 {
        return Err(Error::usage(format!(
            "word type {} has fewer than two distinct sense labels",
            word_type
        )));
    }
    let labels = ordered_labels(distinct, lexicon);
    let vectors: Vec<InstanceVector> = examples.iter().map(|e| e.vector.clone()).collect();
    let mut weights = Vec::with_capacity(labels.len());
    for label in &labels {
        let signs: Vec<f64> = examples
            .iter()
            .map(|e| if e.sense_key == *label { 1.0 } else { -1.0 })
            .collect();
        weights.push(train_binary_svm(
            &vectors,
            &signs,
            space.sparse_dim(),
            space.dense_dim(),
            config,
        )?);
    }
    SenseClassifier::from_parts(word_type.clone(), labels, space.clone(), weights)
}
