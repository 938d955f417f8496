//! End-to-end orchestration: first-sense hypotheses, per-word-type layer
//! training with gating and fallback, training-data augmentation, layer-wise
//! multi-layer models, and single-pass or iterated disambiguation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::classifier::{train_one_vs_rest, SenseClassifier, TrainConfig, TrainingExample};
use crate::corpus::{Corpus, GoldKeys, InstanceLocation, Sentence};
use crate::embeddings::{
    context_mixture, load_context_vector_file, load_vectors, ContextVectorTable, MixtureOptions,
    VectorTable,
};
use crate::error::{Error, Result};
use crate::features::{
    assemble_instance_vector, build_feature_space, collocation_features, dom_features,
    pos_features, prior_key, ssyn_features, surrounding_word_features, FeatureKey, Hypotheses,
    HypothesisSource, InstanceMeta,
};
use crate::lexicon::{Lexicon, WordType};

mod archive;
mod augment;

pub use archive::{load_model, model_to_bytes, save_model};
pub use augment::{augment_sli, harvest_examples, merge_training_sources, training_groups};

/// The context representation a layer trains on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseSystem {
    /// Sparse features only.
    Ims,
    /// Sparse features plus a decayed mixture of context word vectors.
    ImsWe,
    /// Sparse features plus a precomputed per-instance context vector.
    ImsC2v,
}

impl fmt::Display for BaseSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseSystem::Ims => "IMS",
            BaseSystem::ImsWe => "IMSWE",
            BaseSystem::ImsC2v => "IMSC2V",
        })
    }
}

impl FromStr for BaseSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<BaseSystem> {
        match s {
            "IMS" => Ok(BaseSystem::Ims),
            "IMSWE" => Ok(BaseSystem::ImsWe),
            "IMSC2V" => Ok(BaseSystem::ImsC2v),
            other => Err(Error::usage(format!("unknown base system {:?}", other))),
        }
    }
}

/// One block of the semantic feature group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SemanticFlag {
    Ssyn,
    Pr,
    Dom,
}

impl fmt::Display for SemanticFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SemanticFlag::Ssyn => "sSyn",
            SemanticFlag::Pr => "PR",
            SemanticFlag::Dom => "Dom",
        })
    }
}

impl FromStr for SemanticFlag {
    type Err = Error;

    fn from_str(s: &str) -> Result<SemanticFlag> {
        match s {
            "sSyn" => Ok(SemanticFlag::Ssyn),
            "PR" => Ok(SemanticFlag::Pr),
            "Dom" => Ok(SemanticFlag::Dom),
            other => Err(Error::usage(format!("unknown semantic flag {:?}", other))),
        }
    }
}

/// Renders a semantic flag subset the way report rows are labeled, e.g.
/// `+sSyn+PR+Dom`; the empty set renders as the empty string.
pub fn variant_label(flags: &BTreeSet<SemanticFlag>) -> String {
    flags.iter().map(|f| format!("+{}", f)).collect()
}

/// Everything one layer needs to turn a target token into a vector.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerConfig {
    pub base: BaseSystem,
    pub semantic: BTreeSet<SemanticFlag>,
    pub drop_surrounding_words: bool,
    /// Context-mixture window radius on each side of the target.
    pub window_radius: usize,
    pub vectors_path: Option<PathBuf>,
    pub context_vectors_path: Option<PathBuf>,
    pub mixture_gamma: Option<f64>,
    pub mixture_normalize: bool,
    pub mixture_include_target: bool,
}

impl Default for LayerConfig {
    fn default() -> LayerConfig {
        LayerConfig {
            base: BaseSystem::Ims,
            semantic: BTreeSet::new(),
            drop_surrounding_words: false,
            window_radius: 5,
            vectors_path: None,
            context_vectors_path: None,
            mixture_gamma: None,
            mixture_normalize: true,
            mixture_include_target: false,
        }
    }
}

impl LayerConfig {
    pub fn mixture_options(&self) -> MixtureOptions {
        MixtureOptions {
            gamma: self.mixture_gamma,
            normalize: self.mixture_normalize,
            include_target: self.mixture_include_target,
        }
    }
}

/// Preloaded embedding tables, keyed by the path a layer names.
#[derive(Default)]
pub struct Resources {
    vectors: HashMap<PathBuf, VectorTable>,
    context_vectors: HashMap<PathBuf, ContextVectorTable>,
}

enum DenseSource<'r> {
    None,
    Mixture(&'r VectorTable),
    PerInstance(&'r ContextVectorTable),
}

impl DenseSource<'_> {
    fn dim(&self) -> usize {
        match self {
            DenseSource::None => 0,
            DenseSource::Mixture(table) => table.dim(),
            DenseSource::PerInstance(table) => table.dim(),
        }
    }
}

impl Resources {
    /// Loads every embedding file the given layers name, once per path.
    pub fn prepare(configs: &[LayerConfig]) -> Result<Resources> {
        let mut resources = Resources::default();
        for config in configs {
            if let Some(path) = &config.vectors_path {
                if !resources.vectors.contains_key(path) {
                    resources.vectors.insert(path.clone(), load_vectors(path)?);
                }
            }
            if let Some(path) = &config.context_vectors_path {
                if !resources.context_vectors.contains_key(path) {
                    resources
                        .context_vectors
                        .insert(path.clone(), load_context_vector_file(path)?);
                }
            }
        }
        Ok(resources)
    }

    pub fn insert_vectors(&mut self, key: impl Into<PathBuf>, table: VectorTable) {
        self.vectors.insert(key.into(), table);
    }

    pub fn insert_context_vectors(&mut self, key: impl Into<PathBuf>, table: ContextVectorTable) {
        self.context_vectors.insert(key.into(), table);
    }

    fn dense_source(&self, config: &LayerConfig) -> Result<DenseSource<'_>> {
        match config.base {
            BaseSystem::Ims => Ok(DenseSource::None),
            BaseSystem::ImsWe => {
                let path = config.vectors_path.as_ref().ok_or_else(|| {
                    Error::usage("IMSWE layers require a word vector file")
                })?;
                self.vectors
                    .get(path)
                    .map(DenseSource::Mixture)
                    .ok_or_else(|| {
                        Error::usage(format!("word vectors {} are not loaded", path.display()))
                    })
            }
            BaseSystem::ImsC2v => {
                let path = config.context_vectors_path.as_ref().ok_or_else(|| {
                    Error::usage("IMSC2V layers require a context vector file")
                })?;
                self.context_vectors
                    .get(path)
                    .map(DenseSource::PerInstance)
                    .ok_or_else(|| {
                        Error::usage(format!(
                            "context vectors {} are not loaded",
                            path.display()
                        ))
                    })
            }
        }
    }
}

/// An annotated corpus paired with its gold keys.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    pub corpus: Corpus,
    pub keys: GoldKeys,
}

/// One (instance, gold sense) pair assigned to a word type's group.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingInstance {
    pub instance_id: String,
    pub location: InstanceLocation,
    pub word_type: WordType,
    pub sense_key: String,
}

/// Training instances grouped by the word type whose classifier they feed.
pub type TrainingGroups = BTreeMap<WordType, Vec<TrainingInstance>>;

/// First-sense hypotheses for every token with a lexicon entry.
pub fn wfs_hypotheses(lexicon: &Lexicon, corpus: &Corpus) -> Hypotheses {
    let mut hypotheses = Hypotheses::new(HypothesisSource::WordNetFirstSense);
    for sentence in corpus.sentences() {
        for (i, token) in sentence.tokens.iter().enumerate() {
            let first = token
                .word_type()
                .and_then(|wt| lexicon.first_sense(&wt).map(|s| s.key.clone()));
            if let Some(key) = first {
                hypotheses.insert(&sentence.id, i, key);
            }
        }
    }
    hypotheses
}

/// `PR` key for the target's hypothesis, mapping a hypothesis from outside
/// `wt`'s inventory (an inherited donor context) through its synset.
fn donor_aware_prior(
    lexicon: &Lexicon,
    wt: &WordType,
    hypotheses: &Hypotheses,
    sentence: &Sentence,
    target: usize,
) -> Option<FeatureKey> {
    let hypothesis = hypotheses.get(&sentence.id, target)?;
    if let Some(key) = prior_key(lexicon, wt, hypothesis) {
        return Some(key);
    }
    let sense = lexicon.sense(hypothesis)?;
    let synset = lexicon.synset(&sense.synset_id)?;
    synset
        .member_senses
        .iter()
        .find_map(|member| prior_key(lexicon, wt, member))
}

fn raw_keys(
    lexicon: &Lexicon,
    wt: &WordType,
    sentence: &Sentence,
    target: usize,
    hypotheses: &Hypotheses,
    config: &LayerConfig,
) -> BTreeSet<FeatureKey> {
    let mut keys = pos_features(sentence, target);
    keys.extend(collocation_features(sentence, target));
    if !config.drop_surrounding_words {
        keys.extend(surrounding_word_features(sentence, target));
    }
    if config.semantic.contains(&SemanticFlag::Pr) {
        keys.extend(donor_aware_prior(lexicon, wt, hypotheses, sentence, target));
    }
    if config.semantic.contains(&SemanticFlag::Ssyn) {
        keys.extend(ssyn_features(lexicon, sentence, target, hypotheses));
    }
    if config.semantic.contains(&SemanticFlag::Dom) {
        keys.extend(dom_features(lexicon, sentence, target, hypotheses));
    }
    keys
}

fn dense_block(
    source: &DenseSource<'_>,
    config: &LayerConfig,
    sentence: &Sentence,
    target: usize,
    instance_id: &str,
    misses: &mut usize,
) -> Vec<f64> {
    match source {
        DenseSource::None => Vec::new(),
        DenseSource::Mixture(table) => context_mixture(
            sentence,
            target,
            table,
            config.window_radius,
            &config.mixture_options(),
        ),
        DenseSource::PerInstance(table) => match table.get(instance_id) {
            Some(vector) => vector.to_vec(),
            None => {
                *misses += 1;
                vec![0.0; table.dim()]
            }
        },
    }
}

/// Classifiers trained for one layer, plus how many per-instance context
/// vector lookups came back empty.
pub struct LayerOutcome {
    pub classifiers: BTreeMap<WordType, SenseClassifier>,
    pub context_vector_misses: usize,
}

/// Trains one classifier per word type with at least two distinct gold
/// senses, using the supplied hypotheses for the semantic block.
pub fn train_layer(
    lexicon: &Lexicon,
    corpus: &Corpus,
    groups: &TrainingGroups,
    hypotheses: &Hypotheses,
    config: &LayerConfig,
    train: &TrainConfig,
    resources: &Resources,
) -> Result<LayerOutcome> {
    let source = resources.dense_source(config)?;
    let sem_layer = hypotheses.source().layer_index();
    let eligible: Vec<(&WordType, &Vec<TrainingInstance>)> = groups
        .iter()
        .filter(|(_, instances)| {
            let distinct: BTreeSet<&str> =
                instances.iter().map(|i| i.sense_key.as_str()).collect();
            distinct.len() >= 2
        })
        .collect();

    let trained: Vec<(WordType, SenseClassifier, usize)> = eligible
        .par_iter()
        .map(|(wt, instances)| -> Result<(WordType, SenseClassifier, usize)> {
            let mut misses = 0;
            let mut key_sets = Vec::with_capacity(instances.len());
            let mut dense_blocks = Vec::with_capacity(instances.len());
            for instance in instances.iter() {
                let sentence = corpus.sentence_at(instance.location);
                key_sets.push(raw_keys(
                    lexicon,
                    wt,
                    sentence,
                    instance.location.token,
                    hypotheses,
                    config,
                ));
                dense_blocks.push(dense_block(
                    &source,
                    config,
                    sentence,
                    instance.location.token,
                    &instance.instance_id,
                    &mut misses,
                ));
            }
            let space = build_feature_space(wt, &key_sets, source.dim());
            let mut examples = Vec::with_capacity(instances.len());
            for ((instance, keys), dense) in
                instances.iter().zip(&key_sets).zip(dense_blocks)
            {
                let vector = assemble_instance_vector(
                    &space,
                    keys,
                    dense,
                    InstanceMeta {
                        instance_id: instance.instance_id.clone(),
                        word_type: (*wt).clone(),
                        sem_layer,
                    },
                )?;
                examples.push(TrainingExample {
                    vector,
                    sense_key: instance.sense_key.clone(),
                });
            }
            let classifier = train_one_vs_rest(
                wt,
                &space,
                &examples,
                lexicon,
                &train.with_word_type_seed(wt),
            )?;
            Ok(((*wt).clone(), classifier, misses))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut classifiers = BTreeMap::new();
    let mut context_vector_misses = 0;
    for (wt, classifier, misses) in trained {
        classifiers.insert(wt, classifier);
        context_vector_misses += misses;
    }
    Ok(LayerOutcome {
        classifiers,
        context_vector_misses,
    })
}

/// One trained layer of a model.
#[derive(Debug, Clone)]
pub struct ModelLayer {
    pub config: LayerConfig,
    pub classifiers: BTreeMap<WordType, SenseClassifier>,
}

/// Training-data augmentation switches.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentationOptions {
    /// Inherit training instances across synset siblings.
    pub use_sli: bool,
    /// Harvest the lexicon's example sentences.
    pub use_examples: bool,
    /// Extra annotated corpora as (corpus path, key path) pairs.
    pub gloss_corpora: Vec<(PathBuf, PathBuf)>,
    /// Drop harvested/extra instances whose (word type, sense) never occurs
    /// in the base training data.
    pub restrict_to_inventory: bool,
}

impl Default for AugmentationOptions {
    fn default() -> AugmentationOptions {
        AugmentationOptions {
            use_sli: false,
            use_examples: false,
            gloss_corpora: Vec::new(),
            restrict_to_inventory: true,
        }
    }
}

/// A trained multi-layer disambiguation model.
#[derive(Debug, Clone)]
pub struct WsdModel {
    pub layers: Vec<ModelLayer>,
    pub augmentation: AugmentationOptions,
    /// Content digests of the inputs the model was trained from, by name.
    pub corpus_digests: BTreeMap<String, String>,
    /// Observed single-sense answers used before the first-sense fallback,
    /// when enabled at training time.
    pub single_sense_answers: BTreeMap<WordType, String>,
}

/// Training orchestration settings.
#[derive(Debug, Clone)]
pub struct TrainOptions {
    pub train: TrainConfig,
    pub augmentation: AugmentationOptions,
    pub max_layers: u32,
    /// Answer the one observed sense for word types seen with a single
    /// sense, instead of falling back to the first sense.
    pub predict_seen_single_sense: bool,
    pub corpus_digests: BTreeMap<String, String>,
}

impl Default for TrainOptions {
    fn default() -> TrainOptions {
        TrainOptions {
            train: TrainConfig::default(),
            augmentation: AugmentationOptions::default(),
            max_layers: 4,
            predict_seen_single_sense: false,
            corpus_digests: BTreeMap::new(),
        }
    }
}

/// Applies the configured augmentations to a base training set.
pub fn prepare_training_set(
    lexicon: &Lexicon,
    base: TrainingSet,
    augmentation: &AugmentationOptions,
) -> Result<TrainingSet> {
    let mut extras = Vec::new();
    if augmentation.use_examples {
        extras.push(("wnex".to_string(), harvest_examples(lexicon)?));
    }
    for (i, (corpus_path, keys_path)) in augmentation.gloss_corpora.iter().enumerate() {
        extras.push((
            format!("gloss{}", i),
            TrainingSet {
                corpus: crate::corpus::parse_unified_corpus(corpus_path)?,
                keys: crate::corpus::parse_gold_keys(keys_path)?,
            },
        ));
    }
    merge_training_sources(base, extras, augmentation.restrict_to_inventory)
}

/// Counters reported after training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TrainStats {
    pub context_vector_misses: usize,
}

/// Trains layer 1 from first-sense hypotheses, then each further layer from
/// the previous layers' in-sample disambiguation of the training corpus.
pub fn train_multilayer(
    lexicon: &Lexicon,
    base: TrainingSet,
    layer_configs: &[LayerConfig],
    options: &TrainOptions,
    resources: &Resources,
) -> Result<(WsdModel, TrainStats)> {
    if layer_configs.is_empty() {
        return Err(Error::usage("a model needs at least one layer"));
    }
    if layer_configs.len() as u32 > options.max_layers {
        return Err(Error::usage(format!(
            "{} layers exceed the maximum of {}",
            layer_configs.len(),
            options.max_layers
        )));
    }
    let prepared = prepare_training_set(lexicon, base, &options.augmentation)?;
    let mut groups = training_groups(&prepared.corpus, &prepared.keys)?;
    if options.augmentation.use_sli {
        groups = augment_sli(groups, lexicon)?;
    }
    let single_sense_answers = if options.predict_seen_single_sense {
        groups
            .iter()
            .filter_map(|(wt, instances)| {
                let distinct: BTreeSet<&str> =
                    instances.iter().map(|i| i.sense_key.as_str()).collect();
                match distinct.len() {
                    1 => Some((wt.clone(), (*distinct.iter().next().unwrap()).to_string())),
                    _ => None,
                }
            })
            .collect()
    } else {
        BTreeMap::new()
    };

    let mut layers: Vec<ModelLayer> = Vec::new();
    let mut stats = TrainStats::default();
    for config in layer_configs {
        let hypotheses = if layers.is_empty() {
            wfs_hypotheses(lexicon, &prepared.corpus)
        } else {
            let in_sample = run_layers(
                &layers,
                lexicon,
                &prepared.corpus,
                DisambiguationMode::SinglePass,
                &single_sense_answers,
                resources,
            )?;
            stats.context_vector_misses += in_sample.context_vector_misses;
            in_sample.hypotheses
        };
        let outcome = train_layer(
            lexicon,
            &prepared.corpus,
            &groups,
            &hypotheses,
            config,
            &options.train,
            resources,
        )?;
        stats.context_vector_misses += outcome.context_vector_misses;
        layers.push(ModelLayer {
            config: config.clone(),
            classifiers: outcome.classifiers,
        });
    }

    Ok((
        WsdModel {
            layers,
            augmentation: options.augmentation.clone(),
            corpus_digests: options.corpus_digests.clone(),
            single_sense_answers,
        },
        stats,
    ))
}

/// How a corpus is disambiguated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisambiguationMode {
    /// Apply every layer once, in order.
    SinglePass,
    /// Apply the first layer repeatedly, up to the given number of passes,
    /// stopping early at a fixed point.
    Iterate(u32),
}

/// How one instance was answered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Classifier(String),
    SingleSense(String),
    Wfs(String),
    Unanswered,
}

impl Answer {
    pub fn key(&self) -> Option<&str> {
        match self {
            Answer::Classifier(key) | Answer::SingleSense(key) | Answer::Wfs(key) => Some(key),
            Answer::Unanswered => None,
        }
    }
}

/// The outcome of disambiguating a corpus.
#[derive(Debug)]
pub struct Disambiguation {
    pub answers: BTreeMap<String, Answer>,
    /// Hypotheses after the final pass, covering all tokens.
    pub hypotheses: Hypotheses,
    pub passes: u32,
    pub context_vector_misses: usize,
}

impl Disambiguation {
    /// Instance id to predicted key, `None` where unanswered.
    pub fn to_answer_map(&self) -> BTreeMap<String, Option<String>> {
        self.answers
            .iter()
            .map(|(id, answer)| (id.clone(), answer.key().map(str::to_string)))
            .collect()
    }
}

struct PassOutcome {
    answers: BTreeMap<String, Answer>,
    hypotheses: Hypotheses,
    misses: usize,
}

fn apply_layer(
    layer: &ModelLayer,
    lexicon: &Lexicon,
    corpus: &Corpus,
    previous: &Hypotheses,
    pass_number: u32,
    single_sense: &BTreeMap<WordType, String>,
    resources: &Resources,
) -> Result<PassOutcome> {
    let source = resources.dense_source(&layer.config)?;
    let sem_layer = previous.source().layer_index();
    let sentences: Vec<&Sentence> = corpus.sentences().collect();
    let per_sentence: Vec<(Vec<(usize, String, Answer)>, usize)> = sentences
        .par_iter()
        .map(|sentence| -> Result<(Vec<(usize, String, Answer)>, usize)> {
            let mut out = Vec::new();
            let mut misses = 0;
            for (t, token) in sentence.tokens.iter().enumerate() {
                let Some(instance_id) = &token.instance_id else {
                    continue;
                };
                let answer = match token.word_type() {
                    None => Answer::Unanswered,
                    Some(wt) => match layer.classifiers.get(&wt) {
                        Some(classifier) => {
                            let keys =
                                raw_keys(lexicon, &wt, sentence, t, previous, &layer.config);
                            let dense = dense_block(
                                &source,
                                &layer.config,
                                sentence,
                                t,
                                instance_id,
                                &mut misses,
                            );
                            let vector = assemble_instance_vector(
                                classifier.space(),
                                &keys,
                                dense,
                                InstanceMeta {
                                    instance_id: instance_id.clone(),
                                    word_type: wt.clone(),
                                    sem_layer,
                                },
                            )?;
                            Answer::Classifier(classifier.predict(&vector)?.to_string())
                        }
                        None => match single_sense.get(&wt) {
                            Some(key) => Answer::SingleSense(key.clone()),
                            None => match lexicon.first_sense(&wt) {
                                Some(sense) => Answer::Wfs(sense.key.clone()),
                                None => Answer::Unanswered,
                            },
                        },
                    },
                };
                out.push((t, instance_id.clone(), answer));
            }
            Ok((out, misses))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut answers = BTreeMap::new();
    let mut hypotheses = previous.clone_with_source(HypothesisSource::Layer(pass_number));
    let mut misses = 0;
    for (sentence, (results, sentence_misses)) in sentences.iter().zip(per_sentence) {
        misses += sentence_misses;
        for (t, instance_id, answer) in results {
            if let Some(key) = answer.key() {
                hypotheses.insert(&sentence.id, t, key.to_string());
            }
            answers.insert(instance_id, answer);
        }
    }
    Ok(PassOutcome {
        answers,
        hypotheses,
        misses,
    })
}

fn run_layers(
    layers: &[ModelLayer],
    lexicon: &Lexicon,
    corpus: &Corpus,
    mode: DisambiguationMode,
    single_sense: &BTreeMap<WordType, String>,
    resources: &Resources,
) -> Result<Disambiguation> {
    if layers.is_empty() {
        return Err(Error::usage("the model has no layers"));
    }
    let initial = wfs_hypotheses(lexicon, corpus);
    match mode {
        DisambiguationMode::SinglePass => {
            let mut hypotheses = initial;
            let mut answers = BTreeMap::new();
            let mut misses = 0;
            let mut passes = 0;
            for (i, layer) in layers.iter().enumerate() {
                let pass = apply_layer(
                    layer,
                    lexicon,
                    corpus,
                    &hypotheses,
                    i as u32 + 1,
                    single_sense,
                    resources,
                )?;
                hypotheses = pass.hypotheses;
                answers = pass.answers;
                misses += pass.misses;
                passes += 1;
            }
            Ok(Disambiguation {
                answers,
                hypotheses,
                passes,
                context_vector_misses: misses,
            })
        }
        DisambiguationMode::Iterate(limit) => {
            if limit == 0 {
                return Err(Error::usage("iterated disambiguation needs at least one pass"));
            }
            let mut hypotheses = initial;
            let mut answers: Option<BTreeMap<String, Answer>> = None;
            let mut misses = 0;
            let mut passes = 0;
            for pass_number in 1..=limit {
                let pass = apply_layer(
                    &layers[0],
                    lexicon,
                    corpus,
                    &hypotheses,
                    pass_number,
                    single_sense,
                    resources,
                )?;
                hypotheses = pass.hypotheses;
                misses += pass.misses;
                passes = pass_number;
                let fixed_point = answers.as_ref() == Some(&pass.answers);
                answers = Some(pass.answers);
                if fixed_point {
                    break;
                }
            }
            Ok(Disambiguation {
                answers: answers.expect("at least one pass ran"),
                hypotheses,
                passes,
                context_vector_misses: misses,
            })
        }
    }
}

/// Disambiguates every instance of a corpus with a trained model.
pub fn disambiguate_corpus(
    model: &WsdModel,
    lexicon: &Lexicon,
    corpus: &Corpus,
    mode: DisambiguationMode,
    resources: &Resources,
) -> Result<Disambiguation> {
    run_layers(
        &model.layers,
        lexicon,
        corpus,
        mode,
        &model.single_sense_answers,
        resources,
    )
}
