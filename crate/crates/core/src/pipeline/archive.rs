//! Model persistence: a text manifest describing the layer stack followed by
//! length-prefixed binary classifier records and a SHA-256 trailer.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::classifier::SenseClassifier;
use crate::error::{Error, Result};
use crate::features::{FeatureKey, FeatureSpace};
use crate::lexicon::{Pos, WordType};

use super::{
    variant_label, AugmentationOptions, BaseSystem, LayerConfig, ModelLayer, SemanticFlag,
    WsdModel,
};

const MAGIC: &[u8] = b"senseforge-model/1\n";
const NONE_FIELD: &str = "-";

fn push_u32(out: &mut Vec<u8>, value: u32) {
    out.extend_from_slice(&value.to_le_bytes());
}

fn push_u64(out: &mut Vec<u8>, value: u64) {
    out.extend_from_slice(&value.to_le_bytes());
}

fn push_string(out: &mut Vec<u8>, value: &str) {
    push_u32(out, value.len() as u32);
    out.extend_from_slice(value.as_bytes());
}

fn path_field(path: &Option<PathBuf>) -> String {
    match path {
        Some(p) => p.display().to_string(),
        None => NONE_FIELD.to_string(),
    }
}

fn manifest_text(model: &WsdModel) -> String {
    let mut lines = Vec::new();
    lines.push(format!("layers = {}", model.layers.len()));
    for (i, layer) in model.layers.iter().enumerate() {
        let n = i + 1;
        let c = &layer.config;
        let semantic = match variant_label(&c.semantic) {
            ref s if s.is_empty() => NONE_FIELD.to_string(),
            s => s,
        };
        lines.push(format!("layer{}.base = {}", n, c.base));
        lines.push(format!("layer{}.semantic = {}", n, semantic));
        lines.push(format!(
            "layer{}.drop_surrounding_words = {}",
            n, c.drop_surrounding_words
        ));
        lines.push(format!("layer{}.window = {}", n, c.window_radius));
        lines.push(format!("layer{}.vectors = {}", n, path_field(&c.vectors_path)));
        lines.push(format!(
            "layer{}.context_vectors = {}",
            n,
            path_field(&c.context_vectors_path)
        ));
        let gamma = match c.mixture_gamma {
            Some(g) => format!("{:?}", g),
            None => NONE_FIELD.to_string(),
        };
        lines.push(format!("layer{}.mixture_gamma = {}", n, gamma));
        lines.push(format!("layer{}.mixture_normalize = {}", n, c.mixture_normalize));
        lines.push(format!(
            "layer{}.mixture_include_target = {}",
            n, c.mixture_include_target
        ));
    }
    let aug = &model.augmentation;
    lines.push(format!("augment.sli = {}", aug.use_sli));
    lines.push(format!("augment.examples = {}", aug.use_examples));
    let gloss = if aug.gloss_corpora.is_empty() {
        NONE_FIELD.to_string()
    } else {
        aug.gloss_corpora
            .iter()
            .map(|(c, k)| format!("{},{}", c.display(), k.display()))
            .collect::<Vec<_>>()
            .join(";")
    };
    lines.push(format!("augment.gloss_corpora = {}", gloss));
    lines.push(format!(
        "augment.restrict_to_inventory = {}",
        aug.restrict_to_inventory
    ));
    for (name, digest) in &model.corpus_digests {
        lines.push(format!("digest.{} = {}", name, digest));
    }
    let mut text = lines.join("\n");
    text.push('\n');
    text
}

fn classifier_record(classifier: &SenseClassifier) -> Vec<u8> {
    let mut record = Vec::new();
    let wt = classifier.word_type();
    push_string(&mut record, &wt.lemma);
    record.push(wt.pos.symbol() as u8);
    push_u32(&mut record, classifier.labels().len() as u32);
    for label in classifier.labels() {
        push_string(&mut record, label);
    }
    let space = classifier.space();
    push_u32(&mut record, space.sparse_dim() as u32);
    for column in space.columns() {
        push_string(&mut record, &column.to_string());
    }
    push_u32(&mut record, space.dense_dim() as u32);
    for row in classifier.weights() {
        for value in row {
            record.extend_from_slice(&value.to_le_bytes());
        }
    }
    record
}

/// Serializes a model to bytes in the archive format.
pub fn model_to_bytes(model: &WsdModel) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    let manifest = manifest_text(model);
    push_u64(&mut out, manifest.len() as u64);
    out.extend_from_slice(manifest.as_bytes());
    push_u32(&mut out, model.layers.len() as u32);
    for layer in &model.layers {
        push_u32(&mut out, layer.classifiers.len() as u32);
        for classifier in layer.classifiers.values() {
            let record = classifier_record(classifier);
            push_u64(&mut out, record.len() as u64);
            out.extend_from_slice(&record);
        }
    }
    push_u32(&mut out, model.single_sense_answers.len() as u32);
    for (wt, key) in &model.single_sense_answers {
        push_string(&mut out, &wt.lemma);
        out.push(wt.pos.symbol() as u8);
        push_string(&mut out, key);
    }
    let checksum = Sha256::digest(&out);
    out.extend_from_slice(&checksum);
    out
}

/// Writes a model archive to disk.
pub fn save_model(model: &WsdModel, path: &Path) -> Result<()> {
    crate::error::write_output(path, &model_to_bytes(model))
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(data: &'a [u8]) -> Cursor<'a> {
        Cursor { data, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.data.len() - self.pos < n {
            return Err(Error::data("model archive is truncated"));
        }
        let slice = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn string(&mut self) -> Result<String> {
        let len = self.u32()? as usize;
        let bytes = self.take(len)?;
        String::from_utf8(bytes.to_vec())
            .map_err(|_| Error::data("model archive holds invalid UTF-8"))
    }

    fn pos_tag(&mut self) -> Result<Pos> {
        let byte = self.take(1)?[0];
        Pos::from_symbol(byte as char)
            .ok_or_else(|| Error::data(format!("model archive holds unknown pos byte {}", byte)))
    }
}

fn parse_bool(field: &str, value: &str) -> Result<bool> {
    value
        .parse()
        .map_err(|_| Error::data(format!("manifest field {} is not a boolean: {:?}", field, value)))
}

struct Manifest {
    entries: BTreeMap<String, String>,
}

impl Manifest {
    fn parse(text: &str) -> Result<Manifest> {
        let mut entries = BTreeMap::new();
        for line in text.lines() {
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(" = ")
                .ok_or_else(|| Error::data(format!("malformed manifest line {:?}", line)))?;
            entries.insert(key.to_string(), value.to_string());
        }
        Ok(Manifest { entries })
    }

    fn get(&self, key: &str) -> Result<&str> {
        self.entries
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::data(format!("manifest is missing {}", key)))
    }

    fn optional_path(&self, key: &str) -> Result<Option<PathBuf>> {
        let value = self.get(key)?;
        Ok(match value {
            NONE_FIELD => None,
            other => Some(PathBuf::from(other)),
        })
    }

    fn layer_config(&self, n: usize) -> Result<LayerConfig> {
        let base: BaseSystem = self.get(&format!("layer{}.base", n))?.parse()?;
        let semantic_field = self.get(&format!("layer{}.semantic", n))?;
        let mut semantic = std::collections::BTreeSet::new();
        if semantic_field != NONE_FIELD {
            for part in semantic_field.split('+').filter(|p| !p.is_empty()) {
                semantic.insert(SemanticFlag::from_str(part).map_err(|_| {
                    Error::data(format!("manifest names unknown semantic flag {:?}", part))
                })?);
            }
        }
        let window_field = format!("layer{}.window", n);
        let window_radius: usize = self.get(&window_field)?.parse().map_err(|_| {
            Error::data(format!("manifest field {} is not an integer", window_field))
        })?;
        let gamma_field = format!("layer{}.mixture_gamma", n);
        let mixture_gamma = match self.get(&gamma_field)? {
            NONE_FIELD => None,
            other => Some(other.parse().map_err(|_| {
                Error::data(format!("manifest field {} is not a number", gamma_field))
            })?),
        };
        Ok(LayerConfig {
            base,
            semantic,
            drop_surrounding_words: parse_bool(
                "drop_surrounding_words",
                self.get(&format!("layer{}.drop_surrounding_words", n))?,
            )?,
            window_radius,
            vectors_path: self.optional_path(&format!("layer{}.vectors", n))?,
            context_vectors_path: self.optional_path(&format!("layer{}.context_vectors", n))?,
            mixture_gamma,
            mixture_normalize: parse_bool(
                "mixture_normalize",
                self.get(&format!("layer{}.mixture_normalize", n))?,
            )?,
            mixture_include_target: parse_bool(
                "mixture_include_target",
                self.get(&format!("layer{}.mixture_include_target", n))?,
            )?,
        })
    }

    fn augmentation(&self) -> Result<AugmentationOptions> {
        let gloss_field = self.get("augment.gloss_corpora")?;
        let mut gloss_corpora = Vec::new();
        if gloss_field != NONE_FIELD {
            for pair in gloss_field.split(';') {
                let (corpus, keys) = pair.split_once(',').ok_or_else(|| {
                    Error::data(format!("malformed gloss corpus pair {:?}", pair))
                })?;
                gloss_corpora.push((PathBuf::from(corpus), PathBuf::from(keys)));
            }
        }
        Ok(AugmentationOptions {
            use_sli: parse_bool("augment.sli", self.get("augment.sli")?)?,
            use_examples: parse_bool("augment.examples", self.get("augment.examples")?)?,
            gloss_corpora,
            restrict_to_inventory: parse_bool(
                "augment.restrict_to_inventory",
                self.get("augment.restrict_to_inventory")?,
            )?,
        })
    }

    fn digests(&self) -> BTreeMap<String, String> {
        self.entries
            .iter()
            .filter_map(|(key, value)| {
                key.strip_prefix("digest.")
                    .map(|name| (name.to_string(), value.clone()))
            })
            .collect()
    }
}

fn read_classifier(cursor: &mut Cursor<'_>) -> Result<SenseClassifier> {
    let record_len = cursor.u64()? as usize;
    let start = cursor.pos;
    let lemma = cursor.string()?;
    let pos = cursor.pos_tag()?;
    let word_type = WordType::new(lemma, pos);
    let named = |e: Error| match e {
        Error::Data(message) => {
            Error::data(format!("classifier record for {}: {}", word_type, message))
        }
        other => other,
    };
    let label_count = cursor.u32().map_err(named)? as usize;
    let mut labels = Vec::with_capacity(label_count);
    for _ in 0..label_count {
        labels.push(cursor.string().map_err(named)?);
    }
    let column_count = cursor.u32().map_err(named)? as usize;
    let mut columns = Vec::with_capacity(column_count);
    for _ in 0..column_count {
        let rendered = cursor.string().map_err(named)?;
        columns.push(FeatureKey::from_str(&rendered).map_err(named)?);
    }
    let dense_dim = cursor.u32().map_err(named)? as usize;
    let space = FeatureSpace::from_columns(word_type.clone(), columns, dense_dim)?;
    let total_dim = space.total_dim();
    let mut weights = Vec::with_capacity(label_count);
    for _ in 0..label_count {
        let mut row = Vec::with_capacity(total_dim);
        for _ in 0..total_dim {
            row.push(cursor.f64().map_err(named)?);
        }
        weights.push(row);
    }
    if cursor.pos - start != record_len {
        return Err(Error::data(format!(
            "classifier record for {} does not match its declared length",
            word_type
        )));
    }
    SenseClassifier::from_parts(word_type, labels, space, weights)
}

/// Parses a model archive from bytes.
pub fn model_from_bytes(data: &[u8]) -> Result<WsdModel> {
    let family = MAGIC.len() - 2;
    if data.len() < MAGIC.len() || data[..family] != MAGIC[..family] {
        return Err(Error::data("not a model archive"));
    }
    if data[..MAGIC.len()] != *MAGIC {
        return Err(Error::data("unsupported model archive version"));
    }
    let mut cursor = Cursor::new(data);
    cursor.pos = MAGIC.len();

    let manifest_len = cursor.u64()? as usize;
    let manifest_bytes = cursor.take(manifest_len)?;
    let manifest_text = std::str::from_utf8(manifest_bytes)
        .map_err(|_| Error::data("model manifest holds invalid UTF-8"))?;
    let manifest = Manifest::parse(manifest_text)?;
    let layer_total: usize = manifest
        .get("layers")?
        .parse()
        .map_err(|_| Error::data("manifest field layers is not an integer"))?;

    let declared_layers = cursor.u32()? as usize;
    if declared_layers != layer_total {
        return Err(Error::data(format!(
            "manifest declares {} layers but the archive holds {}",
            layer_total, declared_layers
        )));
    }
    let mut layers = Vec::with_capacity(layer_total);
    for n in 1..=layer_total {
        let config = manifest.layer_config(n)?;
        let classifier_count = cursor.u32()? as usize;
        let mut classifiers = BTreeMap::new();
        for _ in 0..classifier_count {
            let classifier = read_classifier(&mut cursor)?;
            classifiers.insert(classifier.word_type().clone(), classifier);
        }
        layers.push(ModelLayer {
            config,
            classifiers,
        });
    }

    let single_count = cursor.u32()? as usize;
    let mut single_sense_answers = BTreeMap::new();
    for _ in 0..single_count {
        let lemma = cursor.string()?;
        let pos = cursor.pos_tag()?;
        let key = cursor.string()?;
        single_sense_answers.insert(WordType::new(lemma, pos), key);
    }

    let trailer = cursor.take(32)?;
    if cursor.pos != data.len() {
        return Err(Error::data("model archive holds trailing bytes"));
    }
    let expected = Sha256::digest(&data[..data.len() - 32]);
    if trailer != expected.as_slice() {
        return Err(Error::data("model archive checksum mismatch"));
    }

    Ok(WsdModel {
        layers,
        augmentation: manifest.augmentation()?,
        corpus_digests: manifest.digests(),
        single_sense_answers,
    })
}

/// Reads a model archive from disk.
pub fn load_model(path: &Path) -> Result<WsdModel> {
    let data = crate::error::read_input_bytes(path)?;
    model_from_bytes(&data).map_err(|e| match e {
        Error::Data(message) => Error::data(format!("{}: {}", path.display(), message)),
        other => other,
    })
}
