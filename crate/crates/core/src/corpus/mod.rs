//! Annotated corpora: documents of sentences of tokens, plus gold sense keys.
//!
//! Corpora are read from and written to the unified evaluation XML layout
//! (`corpus`/`text`/`sentence`/`wf`/`instance`). Gold keys live in companion
//! `instance_id key [key ...]` files.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::lexicon::{Pos, WordType};

mod keys;
mod xml;

pub use keys::{parse_answer_keys, parse_gold_keys, render_answer_keys, write_answer_keys,
    write_gold_keys};
pub use xml::{parse_unified_corpus, parse_unified_corpus_str, unified_corpus_to_string,
    write_unified_corpus};

/// One token: a surface form with optional lemma/pos annotation, and an
/// instance id when the token is a disambiguation target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub lemma: Option<String>,
    pub pos: Option<String>,
    pub instance_id: Option<String>,
}

impl Token {
    pub fn word(surface: impl Into<String>) -> Token {
        Token { surface: surface.into(), lemma: None, pos: None, instance_id: None }
    }

    pub fn annotated(
        surface: impl Into<String>,
        lemma: impl Into<String>,
        pos: impl Into<String>,
    ) -> Token {
        Token {
            surface: surface.into(),
            lemma: Some(lemma.into()),
            pos: Some(pos.into()),
            instance_id: None,
        }
    }

    /// The token's word type, when its lemma and coarse tag map to one.
    pub fn word_type(&self) -> Option<WordType> {
        let lemma = self.lemma.as_deref()?;
        let pos = Pos::from_coarse_tag(self.pos.as_deref()?)?;
        Some(WordType::new(lemma, pos))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    pub id: String,
    pub tokens: Vec<Token>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub sentences: Vec<Sentence>,
}

/// Position of an instance token inside a corpus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InstanceLocation {
    pub document: usize,
    pub sentence: usize,
    pub token: usize,
}

/// An immutable corpus with an index from instance id to token location.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Corpus {
    documents: Vec<Document>,
    instance_index: HashMap<String, InstanceLocation>,
}

impl Corpus {
    /// Builds a corpus, validating that sentences are non-empty, sentence and
    /// instance ids are unique corpus-wide, and instance tokens carry both a
    /// lemma and a part of speech.
    pub fn from_documents(documents: Vec<Document>) -> Result<Corpus> {
        let mut instance_index = HashMap::new();
        let mut sentence_ids = HashSet::new();
        for (d, doc) in documents.iter().enumerate() {
            for (s, sentence) in doc.sentences.iter().enumerate() {
                if sentence.tokens.is_empty() {
                    return Err(Error::data(format!("sentence {} has no tokens", sentence.id)));
                }
                if !sentence_ids.insert(sentence.id.clone()) {
                    return Err(Error::data(format!("duplicate sentence id {}", sentence.id)));
                }
                for (t, token) in sentence.tokens.iter().enumerate() {
                    let Some(id) = &token.instance_id else { continue };
                    if token.lemma.is_none() || token.pos.is_none() {
                        return Err(Error::data(format!(
                            "instance {} is missing a lemma or part of speech",
                            id
                        )));
                    }
                    let loc = InstanceLocation { document: d, sentence: s, token: t };
                    if instance_index.insert(id.clone(), loc).is_some() {
                        return Err(Error::data(format!("duplicate instance id {}", id)));
                    }
                }
            }
        }
        Ok(Corpus { documents, instance_index })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn instance_location(&self, id: &str) -> Option<InstanceLocation> {
        self.instance_index.get(id).copied()
    }

    pub fn sentence_at(&self, loc: InstanceLocation) -> &Sentence {
        &self.documents[loc.document].sentences[loc.sentence]
    }

    pub fn token_at(&self, loc: InstanceLocation) -> &Token {
        &self.sentence_at(loc).tokens[loc.token]
    }

    /// Instance ids with their locations, in document order.
    pub fn instances(&self) -> Vec<(&str, InstanceLocation)> {
        let mut out = Vec::with_capacity(self.instance_index.len());
        for (d, doc) in self.documents.iter().enumerate() {
            for (s, sentence) in doc.sentences.iter().enumerate() {
                for (t, token) in sentence.tokens.iter().enumerate() {
                    if let Some(id) = &token.instance_id {
                        out.push((
                            id.as_str(),
                            InstanceLocation { document: d, sentence: s, token: t },
                        ));
                    }
                }
            }
        }
        out
    }

    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> {
        self.documents.iter().flat_map(|d| d.sentences.iter())
    }

    pub fn document_count(&self) -> usize {
        self.documents.len()
    }

    pub fn sentence_count(&self) -> usize {
        self.documents.iter().map(|d| d.sentences.len()).sum()
    }

    pub fn token_count(&self) -> usize {
        self.sentences().map(|s| s.tokens.len()).sum()
    }

    pub fn instance_count(&self) -> usize {
        self.instance_index.len()
    }
}

/// Gold (or system) sense keys per instance id.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GoldKeys {
    map: BTreeMap<String, BTreeSet<String>>,
}

impl GoldKeys {
    pub fn get(&self, id: &str) -> Option<&BTreeSet<String>> {
        self.map.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.map.contains_key(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &BTreeSet<String>)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Adds keys for an instance; it is an error to insert the same id twice.
    pub fn insert(&mut self, id: impl Into<String>, keys: BTreeSet<String>) -> Result<()> {
        let id = id.into();
        if keys.is_empty() {
            return Err(Error::data(format!("instance {} listed with no keys", id)));
        }
        match self.map.entry(id) {
            Entry::Vacant(e) => {
                e.insert(keys);
                Ok(())
            }
            Entry::Occupied(e) => {
                Err(Error::data(format!("instance {} listed twice", e.key())))
            }
        }
    }
}
