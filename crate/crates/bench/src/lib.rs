//! Synthetic lexicons, corpora, and embedding tables sized for benchmarks.
//! Generation is seeded, so repeated runs measure identical inputs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use senseforge_core::corpus::{Corpus, Document, GoldKeys, Sentence, Token};
use senseforge_core::embeddings::VectorTable;
use senseforge_core::lexicon::{parse_compact_lexicon, Lexicon};
use senseforge_core::pipeline::TrainingSet;

const FILLERS: [&str; 8] = [
    "table", "window", "garden", "music", "paper", "stone", "light", "road",
];

/// A lexicon of `word_types` nouns with `senses_per_type` synsets each.
/// Sense keys follow the pattern `word{w}%n%W{w}S{s}`.
pub fn synthetic_lexicon(word_types: usize, senses_per_type: usize) -> Lexicon {
    let mut text = String::new();
    for w in 0..word_types {
        for s in 0..senses_per_type {
            writeln!(
                text,
                "W{w}S{s}\tn\tword{w}:{}\tdomain{}\tsense {s} of word{w}\t-",
                s + 1,
                (w + s) % 7
            )
            .unwrap();
        }
    }
    for (i, filler) in FILLERS.iter().enumerate() {
        writeln!(text, "F{i}\tn\t{filler}:1\tdomain{}\ta {filler}\t-", i % 7).unwrap();
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("synthetic.clf");
    std::fs::write(&path, text).unwrap();
    parse_compact_lexicon(&path).unwrap()
}

/// A corpus of one sentence per instance where each target's sense is
/// signaled by a cue word, so classifiers have signal to learn.
pub fn synthetic_training(
    word_types: usize,
    instances_per_type: usize,
    senses_per_type: usize,
    seed: u64,
) -> TrainingSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sentences = Vec::with_capacity(word_types * instances_per_type);
    let mut keys = GoldKeys::default();
    for w in 0..word_types {
        for i in 0..instances_per_type {
            let sense = i % senses_per_type;
            let sentence_id = format!("bench.s{w}x{i}");
            let instance_id = format!("{sentence_id}.t1");
            let mut target = Token::annotated(format!("word{w}"), format!("word{w}"), "NOUN");
            target.instance_id = Some(instance_id.clone());
            let filler = *FILLERS.choose(&mut rng).unwrap();
            sentences.push(Sentence {
                id: sentence_id,
                tokens: vec![
                    Token::annotated("The", "the", "DET"),
                    target,
                    Token::annotated(format!("cue{w}x{sense}"), format!("cue{w}x{sense}"), "VERB"),
                    Token::annotated("the", "the", "DET"),
                    Token::annotated(filler, filler, "NOUN"),
                    Token::annotated(".", ".", "PUNCT"),
                ],
            });
            keys.insert(
                instance_id,
                BTreeSet::from([format!("word{w}%n%W{w}S{sense}")]),
            )
            .unwrap();
        }
    }
    let corpus = Corpus::from_documents(vec![Document {
        id: "bench".into(),
        sentences,
    }])
    .unwrap();
    TrainingSet { corpus, keys }
}

/// A dense table over `words` synthetic entries plus the filler vocabulary.
pub fn synthetic_vectors(words: usize, dim: usize, seed: u64) -> VectorTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(words + FILLERS.len());
    let vector = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..dim)
            .map(|_| rand::Rng::gen_range(rng, -1.0..1.0))
            .collect()
    };
    for w in 0..words {
        entries.push((format!("vocab{w}"), vector(&mut rng)));
    }
    for filler in FILLERS {
        entries.push((filler.to_string(), vector(&mut rng)));
    }
    VectorTable::new(dim, entries).unwrap()
}
