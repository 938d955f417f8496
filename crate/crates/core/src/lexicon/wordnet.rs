//! WordNet database directory loader: `index.sense` plus the four data files.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{read_input, Error, Result};

use super::{Lexicon, LexiconBuilder, Pos, Sense, SynsetDraft, SynsetId, WordType};

/// Parses a WordNet database directory containing `index.sense` and
/// `data.{noun,verb,adj,adv}`. Adjective satellites are folded into `a`.
pub fn parse_wordnet_db(dir: &Path) -> Result<Lexicon> {
    let mut builder = LexiconBuilder::default();
    for (file, pos) in [
        ("data.noun", Pos::Noun),
        ("data.verb", Pos::Verb),
        ("data.adj", Pos::Adj),
        ("data.adv", Pos::Adv),
    ] {
        let path = dir.join(file);
        let text = read_input(&path)?;
        for (lineno, line) in text.lines().enumerate() {
            // License headers in shipped data files start with a space.
            if line.starts_with(' ') || line.is_empty() {
                continue;
            }
            parse_data_line(line, pos, &mut builder).map_err(|e| {
                Error::data(format!("{}:{}: {}", path.display(), lineno + 1, e))
            })?;
        }
    }

    let index_path = dir.join("index.sense");
    let text = read_input(&index_path)?;
    for (lineno, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        parse_index_line(line, &mut builder).map_err(|e| {
            Error::data(format!("{}:{}: {}", index_path.display(), lineno + 1, e))
        })?;
    }

    builder.finalize()
}

fn parse_data_line(
    line: &str,
    file_pos: Pos,
    builder: &mut LexiconBuilder,
) -> std::result::Result<(), String> {
    let (head, gloss_text) = line
        .split_once(" | ")
        .ok_or_else(|| "missing ' | ' gloss separator".to_string())?;
    let fields: Vec<&str> = head.split_whitespace().collect();
    if fields.len() < 4 {
        return Err("truncated synset header".to_string());
    }
    let offset = fields[0];
    let ss_type = fields[2];
    let pos = ss_type
        .chars()
        .next()
        .and_then(Pos::from_symbol)
        .ok_or_else(|| format!("unknown synset type {:?}", ss_type))?;
    if pos != file_pos {
        return Err(format!("synset type {:?} does not belong in this file", ss_type));
    }
    let word_count = usize::from_str_radix(fields[3], 16)
        .map_err(|_| format!("word count {:?} is not hexadecimal", fields[3]))?;
    if word_count == 0 || fields.len() < 4 + 2 * word_count {
        return Err("word list shorter than its declared count".to_string());
    }
    let word_order: Vec<String> = (0..word_count)
        .map(|i| normalize_word(fields[4 + 2 * i]))
        .collect();

    let (gloss, examples) = split_gloss(gloss_text);
    builder.add_synset(SynsetDraft {
        id: SynsetId::new(offset, pos),
        pos,
        gloss,
        examples,
        domains: BTreeSet::new(),
        word_order,
    });
    Ok(())
}

/// Lowercases a data-file word and strips adjective position markers such as
/// `(p)` so it matches the lemma spelling used in sense keys.
fn normalize_word(word: &str) -> String {
    let word = match word.find('(') {
        Some(i) if word.ends_with(')') => &word[..i],
        _ => word,
    };
    word.to_lowercase()
}

/// Splits a gloss into the definition and its quoted example sentences. The
/// first `; "` marks where examples begin; each quoted segment is one example.
fn split_gloss(text: &str) -> (String, Vec<String>) {
    match text.find("; \"") {
        None => (text.trim().to_string(), Vec::new()),
        Some(i) => {
            let gloss = text[..i].trim().to_string();
            let examples = text[i + 2..]
                .split('"')
                .skip(1)
                .step_by(2)
                .map(str::to_string)
                .collect();
            (gloss, examples)
        }
    }
}

fn parse_index_line(line: &str, builder: &mut LexiconBuilder) -> std::result::Result<(), String> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 4 {
        return Err(format!("expected 4 fields, found {}", fields.len()));
    }
    let key = fields[0];
    let (lemma, rest) = key
        .split_once('%')
        .ok_or_else(|| format!("sense key {:?} has no '%' separator", key))?;
    if lemma.is_empty() {
        return Err(format!("sense key {:?} has an empty lemma", key));
    }
    let pos = rest
        .chars()
        .next()
        .and_then(|c| match c {
            '1' => Some(Pos::Noun),
            '2' => Some(Pos::Verb),
            '3' | '5' => Some(Pos::Adj),
            '4' => Some(Pos::Adv),
            _ => None,
        })
        .ok_or_else(|| format!("sense key {:?} has an unknown synset type", key))?;
    let offset = fields[1];
    let sense_number: u32 = fields[2]
        .parse()
        .map_err(|_| format!("sense number {:?} is not an integer", fields[2]))?;
    builder.add_sense(Sense {
        key: key.to_string(),
        word_type: WordType::new(lemma, pos),
        synset_id: SynsetId::new(offset, pos),
        sense_number,
    });
    Ok(())
}
