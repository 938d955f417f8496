//! Sense inventory: synsets, senses, and the word-type index over them.
//!
//! Two loaders build the same `Lexicon`: a WordNet database directory and a
//! compact one-line-per-synset test format. Domain labels can be replaced
//! wholesale from a synset-to-domain map file.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use crate::error::{read_input, Error, Result};

mod clf;
mod wordnet;

pub use clf::{parse_compact_lexicon, write_compact_lexicon};
pub use wordnet::parse_wordnet_db;

/// Coarse part of speech. Adjective satellites are folded into `Adj`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Adv,
}

impl Pos {
    /// Single-letter symbol used in sense keys and synset ids.
    pub fn symbol(self) -> char {
        match self {
            Pos::Noun => 'n',
            Pos::Verb => 'v',
            Pos::Adj => 'a',
            Pos::Adv => 'r',
        }
    }

    /// Parses `n`/`v`/`a`/`r`, folding the satellite symbol `s` into `a`.
    pub fn from_symbol(c: char) -> Option<Pos> {
        match c {
            'n' => Some(Pos::Noun),
            'v' => Some(Pos::Verb),
            'a' | 's' => Some(Pos::Adj),
            'r' => Some(Pos::Adv),
            _ => None,
        }
    }

    /// Maps a coarse corpus tag to a lexicon part of speech.
    pub fn from_coarse_tag(tag: &str) -> Option<Pos> {
        match tag {
            "NOUN" => Some(Pos::Noun),
            "VERB" => Some(Pos::Verb),
            "ADJ" => Some(Pos::Adj),
            "ADV" => Some(Pos::Adv),
            _ => None,
        }
    }

    pub fn coarse_tag(self) -> &'static str {
        match self {
            Pos::Noun => "NOUN",
            Pos::Verb => "VERB",
            Pos::Adj => "ADJ",
            Pos::Adv => "ADV",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A lemma plus part of speech; the unit a classifier is trained for.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordType {
    pub lemma: String,
    pub pos: Pos,
}

impl WordType {
    /// Builds a word type, lowercasing the lemma. Multiword lemmas keep
    /// their underscores.
    pub fn new(lemma: impl AsRef<str>, pos: Pos) -> WordType {
        WordType { lemma: lemma.as_ref().to_lowercase(), pos }
    }
}

impl fmt::Display for WordType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.lemma, self.pos)
    }
}

/// Synset identifier: source offset or tag plus a part-of-speech suffix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SynsetId(String);

impl SynsetId {
    /// Forms an id from a raw offset/tag and a part of speech, e.g. `S1-n`.
    pub fn new(raw: &str, pos: Pos) -> SynsetId {
        SynsetId(format!("{}-{}", raw, pos.symbol()))
    }

    /// Wraps an id that already carries its `-pos` suffix.
    pub fn from_full(id: impl Into<String>) -> SynsetId {
        SynsetId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The id without its part-of-speech suffix.
    pub(crate) fn raw(&self, pos: Pos) -> &str {
        let suffix_len = 2;
        let s = self.0.as_str();
        match s.strip_suffix(pos.symbol()).and_then(|s| s.strip_suffix('-')) {
            Some(raw) => raw,
            None => &s[..s.len().saturating_sub(suffix_len)],
        }
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One sense of a word type, tied to the synset that carries its meaning.
#[derive(Clone, Debug, PartialEq)]
pub struct Sense {
    pub key: String,
    pub word_type: WordType,
    pub synset_id: SynsetId,
    /// 1-based rank; 1 is the WordNet first sense.
    pub sense_number: u32,
}

/// A set of synonymous senses with gloss, examples, and domain labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Synset {
    pub id: SynsetId,
    pub pos: Pos,
    /// Sense keys in synset member order.
    pub member_senses: Vec<String>,
    pub gloss: String,
    pub examples: Vec<String>,
    pub domains: BTreeSet<String>,
}

/// Immutable sense inventory with synset, sense-key, and word-type indexes.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Lexicon {
    synsets: HashMap<SynsetId, Synset>,
    senses: HashMap<String, Sense>,
    by_word_type: HashMap<WordType, Vec<String>>,
}

impl Lexicon {
    pub fn synset(&self, id: &SynsetId) -> Option<&Synset> {
        self.synsets.get(id)
    }

    pub fn sense(&self, key: &str) -> Option<&Sense> {
        self.senses.get(key)
    }

    /// All senses of a word type in ascending sense-number order; empty when
    /// the word type is unknown.
    pub fn senses_of(&self, wt: &WordType) -> Vec<&Sense> {
        match self.by_word_type.get(wt) {
            Some(keys) => keys.iter().map(|k| &self.senses[k]).collect(),
            None => Vec::new(),
        }
    }

    /// The first sense of a word type, if the word type is known.
    pub fn first_sense(&self, wt: &WordType) -> Option<&Sense> {
        self.by_word_type.get(wt).map(|keys| &self.senses[&keys[0]])
    }

    /// Co-members of the sense's synset, excluding the sense itself.
    pub fn synset_siblings(&self, sense: &Sense) -> Result<Vec<&Sense>> {
        let synset = self.synsets.get(&sense.synset_id).ok_or_else(|| {
            Error::data(format!(
                "sense {} references missing synset {}",
                sense.key, sense.synset_id
            ))
        })?;
        Ok(synset
            .member_senses
            .iter()
            .filter(|k| *k != &sense.key)
            .map(|k| &self.senses[k])
            .collect())
    }

    pub fn synset_count(&self) -> usize {
        self.synsets.len()
    }

    pub fn sense_count(&self) -> usize {
        self.senses.len()
    }

    pub fn word_type_count(&self) -> usize {
        self.by_word_type.len()
    }

    /// Largest number of senses carried by any single word type.
    pub fn max_polysemy(&self) -> usize {
        self.by_word_type.values().map(Vec::len).max().unwrap_or(0)
    }

    pub fn synsets(&self) -> impl Iterator<Item = &Synset> {
        self.synsets.values()
    }

    pub fn word_types(&self) -> impl Iterator<Item = &WordType> {
        self.by_word_type.keys()
    }
}

/// Replaces every synset's domain labels from a map file of
/// `synset_id<TAB>domain [domain ...]` lines. Synsets absent from the map get
/// `factotum`. Returns the lexicon and the count of map ids that matched no
/// synset.
pub fn attach_domain_map(mut lexicon: Lexicon, path: &Path) -> Result<(Lexicon, usize)> {
    let text = read_input(path)?;
    let mut mapped: HashMap<SynsetId, BTreeSet<String>> = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (id, rest) = line.split_once('\t').ok_or_else(|| {
            Error::data(format!("{}:{}: expected TAB after synset id", path.display(), lineno + 1))
        })?;
        let domains: BTreeSet<String> =
            rest.split_whitespace().map(str::to_string).collect();
        if domains.is_empty() {
            return Err(Error::data(format!(
                "{}:{}: no domains listed for {}",
                path.display(),
                lineno + 1,
                id
            )));
        }
        mapped.insert(SynsetId::from_full(id), domains);
    }

    let mut unresolved = mapped.len();
    for synset in lexicon.synsets.values_mut() {
        match mapped.get(&synset.id) {
            Some(domains) => {
                synset.domains = domains.clone();
                unresolved -= 1;
            }
            None => {
                synset.domains = BTreeSet::from(["factotum".to_string()]);
            }
        }
    }
    Ok((lexicon, unresolved))
}

/// Accumulates synsets and senses, then validates the whole inventory.
#[derive(Default)]
pub(crate) struct LexiconBuilder {
    synsets: Vec<SynsetDraft>,
    senses: Vec<Sense>,
}

pub(crate) struct SynsetDraft {
    pub id: SynsetId,
    pub pos: Pos,
    pub gloss: String,
    pub examples: Vec<String>,
    pub domains: BTreeSet<String>,
    /// Lemmas in synset member order, used to order `member_senses`.
    pub word_order: Vec<String>,
}

impl LexiconBuilder {
    pub fn add_synset(&mut self, draft: SynsetDraft) {
        self.synsets.push(draft);
    }

    pub fn add_sense(&mut self, sense: Sense) {
        self.senses.push(sense);
    }

    pub fn finalize(self) -> Result<Lexicon> {
        let mut synsets: HashMap<SynsetId, Synset> = HashMap::new();
        let mut word_orders: HashMap<SynsetId, Vec<String>> = HashMap::new();
        for draft in self.synsets {
            if synsets.contains_key(&draft.id) {
                return Err(Error::data(format!("duplicate synset id {}", draft.id)));
            }
            let mut domains = draft.domains;
            if domains.is_empty() {
                domains.insert("factotum".to_string());
            }
            word_orders.insert(draft.id.clone(), draft.word_order);
            synsets.insert(
                draft.id.clone(),
                Synset {
                    id: draft.id,
                    pos: draft.pos,
                    member_senses: Vec::new(),
                    gloss: draft.gloss,
                    examples: draft.examples,
                    domains,
                },
            );
        }

        let mut senses: HashMap<String, Sense> = HashMap::new();
        for sense in self.senses {
            if !synsets.contains_key(&sense.synset_id) {
                return Err(Error::data(format!(
                    "sense {} references missing synset {}",
                    sense.key, sense.synset_id
                )));
            }
            if senses.insert(sense.key.clone(), sense.clone()).is_some() {
                return Err(Error::data(format!("duplicate sense key {}", sense.key)));
            }
        }

        let mut members: HashMap<SynsetId, Vec<(usize, String)>> = HashMap::new();
        for sense in senses.values() {
            let order = &word_orders[&sense.synset_id];
            let position = order
                .iter()
                .position(|lemma| lemma == &sense.word_type.lemma)
                .unwrap_or(usize::MAX);
            members
                .entry(sense.synset_id.clone())
                .or_default()
                .push((position, sense.key.clone()));
        }
        for (id, synset) in synsets.iter_mut() {
            let mut list = members.remove(id).unwrap_or_default();
            if list.is_empty() {
                return Err(Error::data(format!("synset {} has no member senses", id)));
            }
            list.sort();
            synset.member_senses = list.into_iter().map(|(_, key)| key).collect();
        }

        let mut by_word_type: HashMap<WordType, Vec<(u32, String)>> = HashMap::new();
        for sense in senses.values() {
            by_word_type
                .entry(sense.word_type.clone())
                .or_default()
                .push((sense.sense_number, sense.key.clone()));
        }
        let mut indexed: HashMap<WordType, Vec<String>> = HashMap::new();
        for (wt, mut numbered) in by_word_type {
            numbered.sort();
            for (expected, (number, _)) in numbered.iter().enumerate() {
                let expected = expected as u32 + 1;
                if *number < expected {
                    return Err(Error::data(format!(
                        "word type {} has duplicate sense number {}",
                        wt, number
                    )));
                }
                if *number > expected {
                    return Err(Error::data(format!(
                        "word type {} is missing sense number {}",
                        wt, expected
                    )));
                }
            }
            indexed.insert(wt, numbered.into_iter().map(|(_, key)| key).collect());
        }

        Ok(Lexicon { synsets, senses, by_word_type: indexed })
    }
}
