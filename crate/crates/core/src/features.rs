//! Named sparse features over sentences (part-of-speech window, local
//! collocations, surrounding words, and the semantic block built from
//! disambiguation hypotheses), plus the per-classifier feature space and
//! instance vector assembly.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::corpus::Sentence;
use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, SynsetId, WordType};

/// Relative offsets of the seven-slot part-of-speech window.
pub const POS_WINDOW: [i8; 7] = [-3, -2, -1, 0, 1, 2, 3];

/// The eleven local collocation spans, as (from, to) offsets around the
/// target.
pub const COLLOCATION_SPANS: [(i8, i8); 11] = [
    (-2, -2),
    (-1, -1),
    (1, 1),
    (2, 2),
    (-2, -1),
    (-1, 1),
    (1, 2),
    (-3, -1),
    (-2, 1),
    (-1, 2),
    (1, 3),
];

/// One named binary feature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureKey {
    Bias,
    Pos { offset: i8, tag: String },
    Collocation { from: i8, to: i8, text: String },
    SurroundingWord(String),
    SurroundingSynset(SynsetId),
    Domain(String),
    Prior(u32),
}

impl fmt::Display for FeatureKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureKey::Bias => write!(f, "BIAS"),
            FeatureKey::Pos { offset, tag } => write!(f, "POS[{}]={}", offset, tag),
            FeatureKey::Collocation { from, to, text } => {
                write!(f, "COL[{},{}]={}", from, to, text)
            }
            FeatureKey::SurroundingWord(lemma) => write!(f, "SW={}", lemma),
            FeatureKey::SurroundingSynset(id) => write!(f, "SSYN={}", id.as_str()),
            FeatureKey::Domain(domain) => write!(f, "DOM={}", domain),
            FeatureKey::Prior(rank) => write!(f, "PR={}", rank),
        }
    }
}

impl FromStr for FeatureKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<FeatureKey> {
        if s == "BIAS" {
            return Ok(FeatureKey::Bias);
        }
        if let Some(rest) = s.strip_prefix("POS[") {
            let (offset, tag) = rest
                .split_once("]=")
                .ok_or_else(|| Error::data(format!("malformed feature key {:?}", s)))?;
            let offset: i8 = offset
                .parse()
                .map_err(|_| Error::data(format!("malformed feature key {:?}", s)))?;
            if !(-3..=3).contains(&offset) {
                return Err(Error::data(format!("feature key {:?} offset out of range", s)));
            }
            return Ok(FeatureKey::Pos {
                offset,
                tag: tag.to_string(),
            });
        }
        if let Some(rest) = s.strip_prefix("COL[") {
            let (span, text) = rest
                .split_once("]=")
                .ok_or_else(|| Error::data(format!("malformed feature key {:?}", s)))?;
            let (from, to) = span
                .split_once(',')
                .ok_or_else(|| Error::data(format!("malformed feature key {:?}", s)))?;
            let from: i8 = from
                .parse()
                .map_err(|_| Error::data(format!("malformed feature key {:?}", s)))?;
            let to: i8 = to
                .parse()
                .map_err(|_| Error::data(format!("malformed feature key {:?}", s)))?;
            return Ok(FeatureKey::Collocation {
                from,
                to,
                text: text.to_string(),
            });
        }
        if let Some(lemma) = s.strip_prefix("SW=") {
            return Ok(FeatureKey::SurroundingWord(lemma.to_string()));
        }
        if let Some(id) = s.strip_prefix("SSYN=") {
            return Ok(FeatureKey::SurroundingSynset(SynsetId::from_full(id)));
        }
        if let Some(domain) = s.strip_prefix("DOM=") {
            return Ok(FeatureKey::Domain(domain.to_string()));
        }
        if let Some(rank) = s.strip_prefix("PR=") {
            let rank: u32 = rank
                .parse()
                .map_err(|_| Error::data(format!("malformed feature key {:?}", s)))?;
            return Ok(FeatureKey::Prior(rank));
        }
        Err(Error::data(format!("malformed feature key {:?}", s)))
    }
}

/// Where a set of hypotheses came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypothesisSource {
    WordNetFirstSense,
    Layer(u32),
}

impl HypothesisSource {
    pub fn layer_index(&self) -> u32 {
        match self {
            HypothesisSource::WordNetFirstSense => 0,
            HypothesisSource::Layer(layer) => *layer,
        }
    }
}

/// Per-token sense hypotheses, keyed by (sentence id, token position).
#[derive(Debug, Clone)]
pub struct Hypotheses {
    map: HashMap<(String, usize), String>,
    source: HypothesisSource,
}

impl Hypotheses {
    pub fn new(source: HypothesisSource) -> Hypotheses {
        Hypotheses {
            map: HashMap::new(),
            source,
        }
    }

    pub fn source(&self) -> HypothesisSource {
        self.source
    }

    pub fn insert(&mut self, sentence_id: &str, token: usize, sense_key: String) {
        self.map.insert((sentence_id.to_string(), token), sense_key);
    }

    pub fn get(&self, sentence_id: &str, token: usize) -> Option<&str> {
        self.map
            .get(&(sentence_id.to_string(), token))
            .map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// The same map relabeled as coming from a different source.
    pub fn clone_with_source(&self, source: HypothesisSource) -> Hypotheses {
        Hypotheses {
            map: self.map.clone(),
            source,
        }
    }

    /// Mapped (sentence id, token position) pairs in sorted order.
    pub fn positions(&self) -> Vec<(&str, usize)> {
        let mut positions: Vec<(&str, usize)> = self
            .map
            .keys()
            .map(|(sid, token)| (sid.as_str(), *token))
            .collect();
        positions.sort_unstable();
        positions
    }
}

/// Seven `POS[i]=tag` keys for the window centered on the target; positions
/// outside the sentence and tokens without a pos read `NIL`.
pub fn pos_features(sentence: &Sentence, target: usize) -> BTreeSet<FeatureKey> {
    POS_WINDOW
        .iter()
        .map(|&offset| {
            let tag = position_index(sentence, target, offset)
                .and_then(|i| sentence.tokens[i].pos.clone())
                .unwrap_or_else(|| "NIL".to_string());
            FeatureKey::Pos { offset, tag }
        })
        .collect()
}

/// Eleven `COL[a,b]=...` keys; covered surfaces are lowercased and joined by
/// `_`, with `^`/`$` padding outside the sentence and `_T_` at the target.
pub fn collocation_features(sentence: &Sentence, target: usize) -> BTreeSet<FeatureKey> {
    COLLOCATION_SPANS
        .iter()
        .map(|&(from, to)| {
            let text = (from..=to)
                .map(|offset| {
                    if offset == 0 {
                        return "_T_".to_string();
                    }
                    match position_index(sentence, target, offset) {
                        Some(i) => sentence.tokens[i].surface.to_lowercase(),
                        None if offset < 0 => "^".to_string(),
                        None => "$".to_string(),
                    }
                })
                .collect::<Vec<_>>()
                .join("_");
            FeatureKey::Collocation { from, to, text }
        })
        .collect()
}

fn position_index(sentence: &Sentence, target: usize, offset: i8) -> Option<usize> {
    let position = target as isize + offset as isize;
    if position < 0 || position as usize >= sentence.tokens.len() {
        None
    } else {
        Some(position as usize)
    }
}

/// `SW=lemma` keys for distinct content-word lemmas around the target.
pub fn surrounding_word_features(sentence: &Sentence, target: usize) -> BTreeSet<FeatureKey> {
    sentence
        .tokens
        .iter()
        .enumerate()
        .filter(|(i, token)| {
            *i != target
                && matches!(token.pos.as_deref(), Some("NOUN" | "VERB" | "ADJ" | "ADV"))
        })
        .filter_map(|(_, token)| token.lemma.as_deref())
        .map(|lemma| FeatureKey::SurroundingWord(lemma.to_lowercase()))
        .collect()
}

/// `PR=k` when `sense_key` is one of `wt`'s senses, by its sense number.
pub(crate) fn prior_key(lexicon: &Lexicon, wt: &WordType, sense_key: &str) -> Option<FeatureKey> {
    let sense = lexicon.sense(sense_key)?;
    if sense.word_type == *wt {
        Some(FeatureKey::Prior(sense.sense_number))
    } else {
        None
    }
}

/// At most one `PR=k` key: the sense number of the target's hypothesis,
/// or nothing when the hypothesis is missing or outside `wt`'s inventory.
pub fn pr_feature(
    lexicon: &Lexicon,
    wt: &WordType,
    hypotheses: &Hypotheses,
    sentence: &Sentence,
    target: usize,
) -> BTreeSet<FeatureKey> {
    hypotheses
        .get(&sentence.id, target)
        .and_then(|key| prior_key(lexicon, wt, key))
        .into_iter()
        .collect()
}

/// `SSYN=id` keys for the distinct synsets of hypothesized context tokens.
pub fn ssyn_features(
    lexicon: &Lexicon,
    sentence: &Sentence,
    target: usize,
    hypotheses: &Hypotheses,
) -> BTreeSet<FeatureKey> {
    context_synsets(lexicon, sentence, target, hypotheses)
        .into_iter()
        .map(|(id, _)| FeatureKey::SurroundingSynset(id))
        .collect()
}

/// `DOM=d` keys for the three most frequent non-factotum domains of the
/// hypothesized context synsets; ties break toward the lexicographically
/// smaller name.
pub fn dom_features(
    lexicon: &Lexicon,
    sentence: &Sentence,
    target: usize,
    hypotheses: &Hypotheses,
) -> BTreeSet<FeatureKey> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for (id, occurrences) in context_synsets(lexicon, sentence, target, hypotheses) {
        let synset = match lexicon.synset(&id) {
            Some(s) => s,
            None => continue,
        };
        for domain in &synset.domains {
            if domain != "factotum" {
                *counts.entry(domain).or_insert(0) += occurrences;
            }
        }
    }
    let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked
        .into_iter()
        .take(3)
        .map(|(domain, _)| FeatureKey::Domain(domain.to_string()))
        .collect()
}

/// Synsets hypothesized for non-target tokens, with occurrence counts.
fn context_synsets(
    lexicon: &Lexicon,
    sentence: &Sentence,
    target: usize,
    hypotheses: &Hypotheses,
) -> BTreeMap<SynsetId, usize> {
    let mut synsets = BTreeMap::new();
    for i in 0..sentence.tokens.len() {
        if i == target {
            continue;
        }
        let sense = hypotheses
            .get(&sentence.id, i)
            .and_then(|key| lexicon.sense(key));
        if let Some(sense) = sense {
            *synsets.entry(sense.synset_id.clone()).or_insert(0) += 1;
        }
    }
    synsets
}

/// Per-classifier feature vocabulary: BIAS at column 0, every other key at a
/// column fixed by the sorted order of its rendered form.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpace {
    word_type: WordType,
    columns: Vec<FeatureKey>,
    index: HashMap<FeatureKey, u32>,
    dense_dim: usize,
}

impl FeatureSpace {
    pub fn word_type(&self) -> &WordType {
        &self.word_type
    }

    pub fn sparse_dim(&self) -> usize {
        self.columns.len()
    }

    pub fn dense_dim(&self) -> usize {
        self.dense_dim
    }

    pub fn total_dim(&self) -> usize {
        self.columns.len() + self.dense_dim
    }

    pub fn columns(&self) -> &[FeatureKey] {
        &self.columns
    }

    pub fn index_of(&self, key: &FeatureKey) -> Option<u32> {
        self.index.get(key).copied()
    }

    /// Rebuilds a space from columns already in their stored order.
    pub fn from_columns(
        word_type: WordType,
        columns: Vec<FeatureKey>,
        dense_dim: usize,
    ) -> Result<FeatureSpace> {
        if columns.first() != Some(&FeatureKey::Bias) {
            return Err(Error::data(format!(
                "feature space for {} does not start with BIAS",
                word_type
            )));
        }
        let mut index = HashMap::with_capacity(columns.len());
        for (i, key) in columns.iter().enumerate() {
            if index.insert(key.clone(), i as u32).is_some() {
                return Err(Error::data(format!(
                    "feature space for {} repeats column {}",
                    word_type, key
                )));
            }
        }
        Ok(FeatureSpace {
            word_type,
            columns,
            index,
            dense_dim,
        })
    }
}

/// Builds the vocabulary over the union of the given per-instance key sets.
pub fn build_feature_space(
    word_type: &WordType,
    key_sets: &[BTreeSet<FeatureKey>],
    dense_dim: usize,
) -> FeatureSpace {
    let mut rendered: BTreeMap<String, FeatureKey> = BTreeMap::new();
    for keys in key_sets {
        for key in keys {
            if *key != FeatureKey::Bias {
                rendered.entry(key.to_string()).or_insert_with(|| key.clone());
            }
        }
    }
    let mut columns = Vec::with_capacity(rendered.len() + 1);
    columns.push(FeatureKey::Bias);
    columns.extend(rendered.into_values());
    let index = columns
        .iter()
        .enumerate()
        .map(|(i, key)| (key.clone(), i as u32))
        .collect();
    FeatureSpace {
        word_type: word_type.clone(),
        columns,
        index,
        dense_dim,
    }
}

/// Instance provenance carried alongside its vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceMeta {
    pub instance_id: String,
    pub word_type: WordType,
    /// Layer index of the hypotheses behind the semantic block (0 for the
    /// first-sense baseline).
    pub sem_layer: u32,
}

/// One classifier-ready example: binary sparse columns plus a dense block.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceVector {
    /// Strictly increasing column indices whose value is 1.
    pub sparse: Vec<u32>,
    pub dense: Vec<f64>,
    pub meta: InstanceMeta,
}

/// Projects raw keys onto a space. Keys outside the space are dropped, BIAS
/// is always present, and an empty dense vector stands for all zeros.
pub fn assemble_instance_vector(
    space: &FeatureSpace,
    keys: &BTreeSet<FeatureKey>,
    dense: Vec<f64>,
    meta: InstanceMeta,
) -> Result<InstanceVector> {
    let dense = if dense.is_empty() && space.dense_dim() > 0 {
        vec![0.0; space.dense_dim()]
    } else {
        dense
    };
    if dense.len() != space.dense_dim() {
        return Err(Error::data(format!(
            "instance {} carries a dense block of length {}, expected {}",
            meta.instance_id,
            dense.len(),
            space.dense_dim()
        )));
    }
    if let Some(bad) = dense.iter().find(|v| !v.is_finite()) {
        return Err(Error::data(format!(
            "instance {} carries a non-finite dense value {}",
            meta.instance_id, bad
        )));
    }
    let mut sparse: Vec<u32> = keys.iter().filter_map(|key| space.index_of(key)).collect();
    if !sparse.contains(&0) {
        sparse.push(0);
    }
    sparse.sort_unstable();
    sparse.dedup();
    Ok(InstanceVector {
        sparse,
        dense,
        meta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Token;
    use crate::lexicon::parse_compact_lexicon;
    use proptest::prelude::*;
    use std::path::Path;

    fn sentence(words: &[(&str, &str, &str)]) -> Sentence {
        Sentence {
            id: "s0".to_string(),
            tokens: words
                .iter()
                .map(|(surface, lemma, pos)| Token::annotated(*surface, *lemma, *pos))
                .collect(),
        }
    }

    fn fox_sentence() -> Sentence {
        sentence(&[
            ("The", "the", "DET"),
            ("quick", "quick", "ADJ"),
            ("brown", "brown", "ADJ"),
            ("fox", "fox", "NOUN"),
            ("jumps", "jump", "VERB"),
        ])
    }

    fn toy_lexicon() -> Lexicon {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
        parse_compact_lexicon(&dir.join("toy.clf")).unwrap()
    }

    #[test]
    fn pos_window_pads_with_nil() {
        let s = fox_sentence();
        let keys = pos_features(&s, 2);
        assert_eq!(keys.len(), 7);
        let rendered: BTreeSet<String> = keys.iter().map(|k| k.to_string()).collect();
        let expected: BTreeSet<String> = [
            "POS[-3]=NIL",
            "POS[-2]=DET",
            "POS[-1]=ADJ",
            "POS[0]=ADJ",
            "POS[1]=NOUN",
            "POS[2]=VERB",
            "POS[3]=NIL",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(rendered, expected);
    }

    #[test]
    fn collocations_cover_all_spans_with_padding() {
        let s = fox_sentence();
        let keys = collocation_features(&s, 2);
        assert_eq!(keys.len(), 11);
        let rendered: BTreeSet<String> = keys.iter().map(|k| k.to_string()).collect();
        for expected in [
            "COL[-2,-1]=the_quick",
            "COL[1,2]=fox_jumps",
            "COL[-1,1]=quick__T__fox",
            "COL[-3,-1]=^_the_quick",
            "COL[1,3]=fox_jumps_$",
            "COL[-2,1]=the_quick__T__fox",
            "COL[-1,2]=quick__T__fox_jumps",
        ] {
            assert!(rendered.contains(expected), "missing {expected}: {rendered:?}");
        }
    }

    #[test]
    fn collocation_at_sentence_start_is_all_padding() {
        let s = fox_sentence();
        let keys = collocation_features(&s, 0);
        let rendered: BTreeSet<String> = keys.iter().map(|k| k.to_string()).collect();
        assert!(rendered.contains("COL[-1,-1]=^"), "{rendered:?}");
        assert!(rendered.contains("COL[-2,-1]=^_^"), "{rendered:?}");
    }

    #[test]
    fn surrounding_words_filter_by_pos_and_position() {
        let s = fox_sentence();
        let keys = surrounding_word_features(&s, 2);
        let rendered: BTreeSet<String> = keys.iter().map(|k| k.to_string()).collect();
        let expected: BTreeSet<String> = ["SW=quick", "SW=fox", "SW=jump"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(rendered, expected);
    }

    #[test]
    fn semantic_features_follow_hypotheses() {
        let lexicon = toy_lexicon();
        let s = sentence(&[
            ("He", "he", "PRON"),
            ("robbed", "rob", "VERB"),
            ("the", "the", "DET"),
            ("bank", "bank", "NOUN"),
            ("near", "near", "ADP"),
            ("the", "the", "DET"),
            ("river", "river", "NOUN"),
        ]);
        let mut hypotheses = Hypotheses::new(HypothesisSource::WordNetFirstSense);
        hypotheses.insert("s0", 3, "bank%n%S1".to_string());
        hypotheses.insert("s0", 6, "river%n%S5".to_string());

        let wt = WordType::new("bank", crate::lexicon::Pos::Noun);
        let pr = pr_feature(&lexicon, &wt, &hypotheses, &s, 3);
        assert_eq!(pr.len(), 1);
        assert!(pr.contains(&FeatureKey::Prior(1)));

        let ssyn = ssyn_features(&lexicon, &s, 3, &hypotheses);
        let rendered: BTreeSet<String> = ssyn.iter().map(|k| k.to_string()).collect();
        assert_eq!(rendered.len(), 1);
        assert!(rendered.contains("SSYN=S5-n"), "{rendered:?}");

        let dom = dom_features(&lexicon, &s, 3, &hypotheses);
        let rendered: BTreeSet<String> = dom.iter().map(|k| k.to_string()).collect();
        assert_eq!(rendered.len(), 1);
        assert!(rendered.contains("DOM=geography"), "{rendered:?}");
    }

    #[test]
    fn pr_is_empty_outside_the_inventory() {
        let lexicon = toy_lexicon();
        let s = sentence(&[("bank", "bank", "NOUN")]);
        let mut hypotheses = Hypotheses::new(HypothesisSource::WordNetFirstSense);
        hypotheses.insert("s0", 0, "river%n%S5".to_string());
        let wt = WordType::new("bank", crate::lexicon::Pos::Noun);
        assert!(pr_feature(&lexicon, &wt, &hypotheses, &s, 0).is_empty());
    }

    #[test]
    fn synonyms_collapse_to_one_synset_key() {
        let lexicon = toy_lexicon();
        let s = sentence(&[
            ("The", "the", "DET"),
            ("car", "car", "NOUN"),
            ("and", "and", "CCONJ"),
            ("the", "the", "DET"),
            ("auto", "auto", "NOUN"),
            ("arrived", "arrive", "VERB"),
        ]);
        let mut hypotheses = Hypotheses::new(HypothesisSource::WordNetFirstSense);
        hypotheses.insert("s0", 1, "car%n%S3".to_string());
        hypotheses.insert("s0", 4, "auto%n%S3".to_string());
        let ssyn = ssyn_features(&lexicon, &s, 5, &hypotheses);
        assert_eq!(ssyn.len(), 1);
        let dom = dom_features(&lexicon, &s, 5, &hypotheses);
        let rendered: BTreeSet<String> = dom.iter().map(|k| k.to_string()).collect();
        assert!(rendered.contains("DOM=transport"), "{rendered:?}");
    }

    #[test]
    fn domains_drop_factotum_and_break_ties_lexicographically() {
        let lexicon = toy_lexicon();
        let s = sentence(&[
            ("money", "money", "NOUN"),
            ("flows", "flow", "VERB"),
            ("past", "past", "ADP"),
            ("the", "the", "DET"),
            ("river", "river", "NOUN"),
            ("by", "by", "ADP"),
            ("a", "a", "DET"),
            ("bright", "bright", "ADJ"),
            ("tree", "tree", "NOUN"),
            ("star", "star", "NOUN"),
        ]);
        let mut hypotheses = Hypotheses::new(HypothesisSource::WordNetFirstSense);
        hypotheses.insert("s0", 0, "money%n%S4".to_string());
        hypotheses.insert("s0", 4, "river%n%S5".to_string());
        hypotheses.insert("s0", 7, "bright%a%S9".to_string());
        hypotheses.insert("s0", 8, "tree%n%S11".to_string());
        hypotheses.insert("s0", 9, "star%n%S7".to_string());
        let dom = dom_features(&lexicon, &s, 1, &hypotheses);
        let rendered: Vec<String> = dom.iter().map(|k| k.to_string()).collect();
        let mut sorted = rendered.clone();
        sorted.sort();
        assert_eq!(
            sorted,
            vec!["DOM=astronomy", "DOM=botany", "DOM=economy"],
            "geography loses the four-way tie on name order"
        );
    }

    #[test]
    fn only_factotum_context_yields_no_domains() {
        let lexicon = toy_lexicon();
        let s = sentence(&[
            ("A", "a", "DET"),
            ("bright", "bright", "ADJ"),
            ("thing", "thing", "NOUN"),
            ("glows", "glow", "VERB"),
        ]);
        let mut hypotheses = Hypotheses::new(HypothesisSource::WordNetFirstSense);
        hypotheses.insert("s0", 1, "bright%a%S9".to_string());
        assert!(dom_features(&lexicon, &s, 2, &hypotheses).is_empty());
    }

    #[test]
    fn space_places_bias_first_and_sorts_the_rest() {
        let wt = WordType::new("bank", crate::lexicon::Pos::Noun);
        let a: BTreeSet<FeatureKey> = [
            FeatureKey::SurroundingWord("b".into()),
            FeatureKey::Prior(1),
        ]
        .into_iter()
        .collect();
        let b: BTreeSet<FeatureKey> = [
            FeatureKey::SurroundingWord("a".into()),
            FeatureKey::SurroundingWord("b".into()),
        ]
        .into_iter()
        .collect();
        let space = build_feature_space(&wt, &[a, b], 2);
        let rendered: Vec<String> = space.columns().iter().map(|k| k.to_string()).collect();
        assert_eq!(rendered, vec!["BIAS", "PR=1", "SW=a", "SW=b"]);
        assert_eq!(space.sparse_dim(), 4);
        assert_eq!(space.dense_dim(), 2);
        assert_eq!(space.index_of(&FeatureKey::Bias), Some(0));
    }

    #[test]
    fn assembly_drops_unseen_keys_and_pads_dense() {
        let wt = WordType::new("bank", crate::lexicon::Pos::Noun);
        let seen: BTreeSet<FeatureKey> = [FeatureKey::SurroundingWord("a".into())]
            .into_iter()
            .collect();
        let space = build_feature_space(&wt, &[seen], 3);
        let keys: BTreeSet<FeatureKey> = [
            FeatureKey::SurroundingWord("a".into()),
            FeatureKey::SurroundingWord("unseen".into()),
        ]
        .into_iter()
        .collect();
        let meta = InstanceMeta {
            instance_id: "i0".to_string(),
            word_type: wt.clone(),
            sem_layer: 0,
        };
        let vector = assemble_instance_vector(&space, &keys, Vec::new(), meta.clone()).unwrap();
        assert_eq!(vector.sparse, vec![0, 1]);
        assert_eq!(vector.dense, vec![0.0, 0.0, 0.0]);

        let err = assemble_instance_vector(&space, &keys, vec![1.0], meta).unwrap_err();
        assert!(err.to_string().contains("dense block"), "{err}");
    }

    #[test]
    fn wfs_hypotheses_make_pr_constant_across_instances() {
        let lexicon = toy_lexicon();
        let wt = WordType::new("bank", crate::lexicon::Pos::Noun);
        let mut hypotheses = Hypotheses::new(HypothesisSource::WordNetFirstSense);
        let mut sentences = Vec::new();
        for i in 0..3 {
            let mut s = sentence(&[("bank", "bank", "NOUN")]);
            s.id = format!("s{i}");
            hypotheses.insert(&s.id, 0, "bank%n%S1".to_string());
            sentences.push(s);
        }
        let sets: Vec<BTreeSet<FeatureKey>> = sentences
            .iter()
            .map(|s| pr_feature(&lexicon, &wt, &hypotheses, s, 0))
            .collect();
        assert!(sets.iter().all(|set| *set == sets[0]));
        assert!(sets[0].contains(&FeatureKey::Prior(1)));
    }

    fn arbitrary_key() -> impl Strategy<Value = FeatureKey> {
        let text = "[a-z_^$]{1,12}";
        prop_oneof![
            Just(FeatureKey::Bias),
            ((-3i8..=3), "[A-Z]{1,5}").prop_map(|(offset, tag)| FeatureKey::Pos { offset, tag }),
            ((-3i8..=3), (1i8..=3), text).prop_map(|(from, len, text)| {
                FeatureKey::Collocation {
                    from,
                    to: from + len - 1,
                    text,
                }
            }),
            "[a-z]{1,10}".prop_map(FeatureKey::SurroundingWord),
            ("[a-z0-9]{1,8}", prop_oneof![Just('n'), Just('v'), Just('a'), Just('r')])
                .prop_map(|(raw, pos)| {
                    FeatureKey::SurroundingSynset(SynsetId::from_full(format!("{raw}-{pos}")))
                }),
            "[a-z_]{1,12}".prop_map(FeatureKey::Domain),
            (1u32..60).prop_map(FeatureKey::Prior),
        ]
    }

    proptest! {
        #[test]
        fn feature_keys_round_trip_through_their_grammar(key in arbitrary_key()) {
            let rendered = key.to_string();
            let parsed: FeatureKey = rendered.parse().unwrap();
            prop_assert_eq!(parsed, key);
        }

        #[test]
        fn assembly_is_monotone_in_keys(
            extra in prop::collection::btree_set(arbitrary_key(), 0..6),
            base in prop::collection::btree_set(arbitrary_key(), 0..6),
        ) {
            let wt = WordType::new("w", crate::lexicon::Pos::Noun);
            let mut all = base.clone();
            all.extend(extra.iter().cloned());
            let space = build_feature_space(&wt, std::slice::from_ref(&all), 0);
            let meta = InstanceMeta {
                instance_id: "i".to_string(),
                word_type: wt,
                sem_layer: 0,
            };
            let small = assemble_instance_vector(&space, &base, Vec::new(), meta.clone()).unwrap();
            let large = assemble_instance_vector(&space, &all, Vec::new(), meta).unwrap();
            for column in &small.sparse {
                prop_assert!(large.sparse.contains(column));
            }
        }
    }
}
