//! Training-set construction: grouping gold-annotated instances by word
//! type, inheriting examples across synset siblings, harvesting lexicon
//! example sentences, and merging auxiliary annotated corpora.

use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{Corpus, Document, GoldKeys, Sentence, Token};
use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, WordType};

use super::{TrainingGroups, TrainingInstance, TrainingSet};

/// Groups annotated instances by word type, one training instance per
/// (instance, gold key) pair. Instances whose pos has no lexicon mapping are
/// skipped; gold entries for unknown instance ids fail.
pub fn training_groups(corpus: &Corpus, keys: &GoldKeys) -> Result<TrainingGroups> {
    let mut groups: TrainingGroups = BTreeMap::new();
    for (id, gold) in keys.iter() {
        let location = corpus
            .instance_location(id)
            .ok_or_else(|| Error::data(format!("gold key for unknown instance {}", id)))?;
        let Some(word_type) = corpus.token_at(location).word_type() else {
            continue;
        };
        for key in gold {
            groups
                .entry(word_type.clone())
                .or_default()
                .push(TrainingInstance {
                    instance_id: id.clone(),
                    location,
                    word_type: word_type.clone(),
                    sense_key: key.clone(),
                });
        }
    }
    for instances in groups.values_mut() {
        instances.sort_by(|a, b| {
            (&a.instance_id, &a.sense_key).cmp(&(&b.instance_id, &b.sense_key))
        });
    }
    Ok(groups)
}

/// For every sense of every grouped word type, copies the training instances
/// of its synset siblings into the group, relabeled to that sense. Donations
/// are deduplicated by (donor instance id, target sense).
pub fn augment_sli(groups: TrainingGroups, lexicon: &Lexicon) -> Result<TrainingGroups> {
    let mut by_sense: BTreeMap<&str, Vec<&TrainingInstance>> = BTreeMap::new();
    for instances in groups.values() {
        for instance in instances {
            by_sense.entry(&instance.sense_key).or_default().push(instance);
        }
    }

    let mut augmented = groups.clone();
    for (word_type, instances) in augmented.iter_mut() {
        let mut present: BTreeSet<(String, String)> = instances
            .iter()
            .map(|i| (i.instance_id.clone(), i.sense_key.clone()))
            .collect();
        for sense in lexicon.senses_of(word_type) {
            for sibling in lexicon.synset_siblings(sense)? {
                let Some(donors) = by_sense.get(sibling.key.as_str()) else {
                    continue;
                };
                for donor in donors {
                    let stamp = (donor.instance_id.clone(), sense.key.clone());
                    if present.contains(&stamp) {
                        continue;
                    }
                    present.insert(stamp);
                    instances.push(TrainingInstance {
                        instance_id: donor.instance_id.clone(),
                        location: donor.location,
                        word_type: word_type.clone(),
                        sense_key: sense.key.clone(),
                    });
                }
            }
        }
    }
    Ok(augmented)
}

/// Extracts one annotated sentence per (synset example, member lemma whose
/// tokens appear in it). The matched span becomes a single instance token;
/// every other token gets its lowercased surface as lemma and pos `X`.
pub fn harvest_examples(lexicon: &Lexicon) -> Result<TrainingSet> {
    let mut synsets: Vec<_> = lexicon.synsets().collect();
    synsets.sort_by(|a, b| a.id.cmp(&b.id));

    let mut sentences = Vec::new();
    let mut keys = GoldKeys::default();
    for synset in synsets {
        for (e, example) in synset.examples.iter().enumerate() {
            let words: Vec<&str> = example.split_whitespace().collect();
            if words.is_empty() {
                continue;
            }
            for (m, member_key) in synset.member_senses.iter().enumerate() {
                let sense = lexicon.sense(member_key).expect("member keys are senses");
                let parts: Vec<&str> = sense.word_type.lemma.split('_').collect();
                let Some(start) = find_span(&words, &parts) else {
                    continue;
                };
                let sentence_id = format!("{}.e{}.m{}", synset.id, e, m);
                let instance_id = format!("{}.t{}", sentence_id, start);
                let mut tokens = Vec::with_capacity(words.len() - parts.len() + 1);
                for word in &words[..start] {
                    tokens.push(plain_token(word));
                }
                tokens.push(Token {
                    surface: words[start..start + parts.len()].join(" "),
                    lemma: Some(sense.word_type.lemma.clone()),
                    pos: Some(synset.pos.coarse_tag().to_string()),
                    instance_id: Some(instance_id.clone()),
                });
                for word in &words[start + parts.len()..] {
                    tokens.push(plain_token(word));
                }
                sentences.push(Sentence {
                    id: sentence_id,
                    tokens,
                });
                keys.insert(instance_id, BTreeSet::from([member_key.clone()]))?;
            }
        }
    }
    let corpus = Corpus::from_documents(vec![Document {
        id: "examples".to_string(),
        sentences,
    }])?;
    Ok(TrainingSet { corpus, keys })
}

fn plain_token(word: &str) -> Token {
    Token {
        surface: word.to_string(),
        lemma: Some(word.to_lowercase()),
        pos: Some("X".to_string()),
        instance_id: None,
    }
}

fn find_span(words: &[&str], parts: &[&str]) -> Option<usize> {
    if parts.is_empty() || parts.len() > words.len() {
        return None;
    }
    (0..=words.len() - parts.len()).find(|&start| {
        words[start..start + parts.len()]
            .iter()
            .zip(parts)
            .all(|(word, part)| word.to_lowercase() == *part)
    })
}

/// Appends extra annotated corpora to a base training set, prefixing every
/// document, sentence, and instance id with the source tag. With
/// `restrict_to_inventory`, extra gold keys whose (word type, sense) never
/// occurs in the base set are discarded and instances left with no keys are
/// demoted to plain tokens.
pub fn merge_training_sources(
    base: TrainingSet,
    extras: Vec<(String, TrainingSet)>,
    restrict_to_inventory: bool,
) -> Result<TrainingSet> {
    if extras.is_empty() {
        return Ok(base);
    }
    let inventory: BTreeSet<(WordType, String)> = training_groups(&base.corpus, &base.keys)?
        .into_iter()
        .flat_map(|(wt, instances)| {
            instances
                .into_iter()
                .map(move |i| (wt.clone(), i.sense_key))
        })
        .collect();

    let TrainingSet {
        corpus: base_corpus,
        keys: mut merged_keys,
    } = base;
    let mut documents = base_corpus.documents().to_vec();
    for (tag, extra) in extras {
        for document in extra.corpus.documents() {
            let mut sentences = Vec::with_capacity(document.sentences.len());
            for sentence in &document.sentences {
                let mut tokens = Vec::with_capacity(sentence.tokens.len());
                for token in &sentence.tokens {
                    tokens.push(retag_token(
                        token,
                        &tag,
                        &extra.keys,
                        restrict_to_inventory,
                        &inventory,
                        &mut merged_keys,
                    )?);
                }
                sentences.push(Sentence {
                    id: format!("{}:{}", tag, sentence.id),
                    tokens,
                });
            }
            documents.push(Document {
                id: format!("{}:{}", tag, document.id),
                sentences,
            });
        }
    }
    let corpus = Corpus::from_documents(documents)?;
    for (id, _) in merged_keys.iter() {
        if corpus.instance_location(id).is_none() {
            return Err(Error::data(format!("gold key for unknown instance {}", id)));
        }
    }
    Ok(TrainingSet {
        corpus,
        keys: merged_keys,
    })
}

fn retag_token(
    token: &Token,
    tag: &str,
    source_keys: &GoldKeys,
    restrict_to_inventory: bool,
    inventory: &BTreeSet<(WordType, String)>,
    merged_keys: &mut GoldKeys,
) -> Result<Token> {
    let Some(id) = &token.instance_id else {
        return Ok(token.clone());
    };
    let gold = source_keys
        .get(id)
        .ok_or_else(|| Error::data(format!("instance {} has no gold keys", id)))?;
    let kept: BTreeSet<String> = match (restrict_to_inventory, token.word_type()) {
        (false, _) => gold.clone(),
        (true, None) => BTreeSet::new(),
        (true, Some(wt)) => gold
            .iter()
            .filter(|key| inventory.contains(&(wt.clone(), (*key).clone())))
            .cloned()
            .collect(),
    };
    if kept.is_empty() && restrict_to_inventory {
        return Ok(Token {
            instance_id: None,
            ..token.clone()
        });
    }
    let prefixed = format!("{}:{}", tag, id);
    merged_keys.insert(prefixed.clone(), kept)?;
    Ok(Token {
        instance_id: Some(prefixed),
        ..token.clone()
    })
}
