//! Compact lexicon format: one TAB-separated synset per line.
//!
//! Fields: `synset_id pos lemma:rank[,lemma:rank]* domain[;domain]* gloss
//! example[|example]*`. A `-` stands for an empty example list or unmapped
//! domains, and `#` starts a comment line. Sense keys are synthesized as
//! `lemma%pos%synset_id`.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{read_input, write_output, Error, Result};

use super::{Lexicon, LexiconBuilder, Pos, Sense, Synset, SynsetDraft, SynsetId, WordType};

pub fn parse_compact_lexicon(path: &Path) -> Result<Lexicon> {
    let text = read_input(path)?;
    let mut builder = LexiconBuilder::default();
    for (lineno, line) in text.lines().enumerate() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        parse_line(line, &mut builder).map_err(|e| {
            Error::data(format!("{}:{}: {}", path.display(), lineno + 1, e))
        })?;
    }
    builder.finalize()
}

fn parse_line(line: &str, builder: &mut LexiconBuilder) -> std::result::Result<(), String> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 6 {
        return Err(format!("expected 6 TAB-separated fields, found {}", fields.len()));
    }
    let raw_id = fields[0];
    if raw_id.is_empty() {
        return Err("empty synset id".to_string());
    }
    let pos = parse_pos(fields[1])?;
    let id = SynsetId::new(raw_id, pos);

    let mut word_order = Vec::new();
    for member in fields[2].split(',') {
        let (lemma, rank) = member
            .split_once(':')
            .ok_or_else(|| format!("member {:?} is not lemma:rank", member))?;
        if lemma.is_empty() {
            return Err("empty lemma in member list".to_string());
        }
        let rank: u32 = rank
            .parse()
            .map_err(|_| format!("member {:?} has a non-numeric rank", member))?;
        if rank == 0 {
            return Err(format!("member {:?} has rank 0; ranks start at 1", member));
        }
        word_order.push(lemma.to_lowercase());
        builder.add_sense(Sense {
            key: format!("{}%{}%{}", lemma.to_lowercase(), pos.symbol(), raw_id),
            word_type: WordType::new(lemma, pos),
            synset_id: id.clone(),
            sense_number: rank,
        });
    }

    let domains: BTreeSet<String> = if fields[3] == "-" {
        BTreeSet::new()
    } else {
        let parts: Vec<&str> = fields[3].split(';').collect();
        if parts.iter().any(|d| d.is_empty()) {
            return Err("empty domain label".to_string());
        }
        parts.into_iter().map(str::to_string).collect()
    };

    let examples: Vec<String> = if fields[5] == "-" {
        Vec::new()
    } else {
        fields[5].split('|').map(str::to_string).collect()
    };

    builder.add_synset(SynsetDraft {
        id,
        pos,
        gloss: fields[4].to_string(),
        examples,
        domains,
        word_order,
    });
    Ok(())
}

fn parse_pos(field: &str) -> std::result::Result<Pos, String> {
    let mut chars = field.chars();
    match (chars.next(), chars.next()) {
        (Some(c @ ('n' | 'v' | 'a' | 'r')), None) => Ok(Pos::from_symbol(c).unwrap()),
        _ => Err(format!("part of speech {:?} is not one of n/v/a/r", field)),
    }
}

/// Serializes the lexicon back to the compact format, one synset per line in
/// ascending synset-id order. Parsing the output reproduces the lexicon.
pub fn write_compact_lexicon(lexicon: &Lexicon, path: &Path) -> Result<()> {
    let mut synsets: Vec<&Synset> = lexicon.synsets().collect();
    synsets.sort_by(|a, b| a.id.cmp(&b.id));
    let mut out = String::new();
    for synset in synsets {
        out.push_str(&render_line(lexicon, synset)?);
        out.push('\n');
    }
    write_output(path, out.as_bytes())
}

fn render_line(lexicon: &Lexicon, synset: &Synset) -> Result<String> {
    let members = synset
        .member_senses
        .iter()
        .map(|key| {
            let sense = lexicon.sense(key).expect("member sense resolves");
            format!("{}:{}", sense.word_type.lemma, sense.sense_number)
        })
        .collect::<Vec<_>>()
        .join(",");
    let domains = synset.domains.iter().cloned().collect::<Vec<_>>().join(";");
    let examples = if synset.examples.is_empty() {
        "-".to_string()
    } else {
        synset.examples.join("|")
    };
    let line = format!(
        "{}\t{}\t{}\t{}\t{}\t{}",
        synset.id.raw(synset.pos),
        synset.pos,
        members,
        domains,
        synset.gloss,
        examples
    );
    let body_has_tab = [synset.gloss.as_str(), domains.as_str()]
        .iter()
        .any(|f| f.contains('\t'))
        || synset.examples.iter().any(|e| e.contains('\t') || e.contains('|'));
    if body_has_tab {
        return Err(Error::data(format!(
            "synset {} contains TAB or '|' in a field; not representable",
            synset.id
        )));
    }
    Ok(line)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::attach_domain_map;

    fn write_fixture(content: &str) -> tempfile::NamedTempFile {
        use std::io::Write;
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    const BASIC: &str = "# comment\n\
S1\tn\tbank:1,side:2\teconomy\ta money institution\the robbed the bank\n\
S2\tn\tbank:2,side:1\tgeography\tsloping land\t-\n";

    #[test]
    fn parses_synsets_members_and_keys() {
        let f = write_fixture(BASIC);
        let lex = parse_compact_lexicon(f.path()).unwrap();
        assert_eq!(lex.synset_count(), 2);
        let s1 = lex.synset(&SynsetId::from_full("S1-n")).unwrap();
        assert_eq!(s1.member_senses, vec!["bank%n%S1", "side%n%S1"]);
        assert_eq!(s1.gloss, "a money institution");
        assert_eq!(s1.examples, vec!["he robbed the bank"]);
        assert_eq!(s1.domains, BTreeSet::from(["economy".to_string()]));

        let banks = lex.senses_of(&WordType::new("bank", Pos::Noun));
        assert_eq!(banks.len(), 2);
        assert_eq!(banks[0].synset_id, SynsetId::from_full("S1-n"));
        assert_eq!(banks[1].synset_id, SynsetId::from_full("S2-n"));
    }

    #[test]
    fn duplicate_rank_is_a_data_error() {
        let f = write_fixture(
            "S1\tn\tbank:1\t-\tgloss\t-\nS2\tn\tbank:1\t-\tgloss\t-\n",
        );
        let err = parse_compact_lexicon(f.path()).unwrap_err();
        assert!(err.to_string().contains("duplicate sense number"), "{err}");
    }

    #[test]
    fn rank_gap_is_a_data_error() {
        let f = write_fixture("S1\tn\tbank:1\t-\tgloss\t-\nS2\tn\tbank:3\t-\tgloss\t-\n");
        let err = parse_compact_lexicon(f.path()).unwrap_err();
        assert!(err.to_string().contains("missing sense number 2"), "{err}");
    }

    #[test]
    fn unmapped_domains_default_to_factotum() {
        let f = write_fixture("S1\tn\tbank:1\t-\tgloss\t-\n");
        let lex = parse_compact_lexicon(f.path()).unwrap();
        let s1 = lex.synset(&SynsetId::from_full("S1-n")).unwrap();
        assert_eq!(s1.domains, BTreeSet::from(["factotum".to_string()]));
    }

    #[test]
    fn multiple_examples_split_on_pipe() {
        let f = write_fixture("S1\tn\tbank:1\t-\tgloss\tfirst one|second one\n");
        let lex = parse_compact_lexicon(f.path()).unwrap();
        let s1 = lex.synset(&SynsetId::from_full("S1-n")).unwrap();
        assert_eq!(s1.examples, vec!["first one", "second one"]);
    }

    #[test]
    fn malformed_field_count_names_the_line() {
        let f = write_fixture("S1\tn\tbank:1\tgloss\t-\n");
        let err = parse_compact_lexicon(f.path()).unwrap_err();
        assert!(err.to_string().contains(":1:"), "{err}");
    }

    #[test]
    fn round_trip_is_idempotent() {
        let f = write_fixture(BASIC);
        let lex = parse_compact_lexicon(f.path()).unwrap();
        let out = tempfile::NamedTempFile::new().unwrap();
        write_compact_lexicon(&lex, out.path()).unwrap();
        let reparsed = parse_compact_lexicon(out.path()).unwrap();
        assert_eq!(lex, reparsed);
        let second = tempfile::NamedTempFile::new().unwrap();
        write_compact_lexicon(&reparsed, second.path()).unwrap();
        assert_eq!(
            std::fs::read(out.path()).unwrap(),
            std::fs::read(second.path()).unwrap()
        );
    }

    #[test]
    fn domain_map_replaces_and_counts_unknown_ids() {
        let f = write_fixture(BASIC);
        let lex = parse_compact_lexicon(f.path()).unwrap();
        let map = write_fixture("S1-n\tsport economy\nZZ-n\tnowhere\n");
        let (lex, unresolved) = attach_domain_map(lex, map.path()).unwrap();
        assert_eq!(unresolved, 1);
        let s1 = lex.synset(&SynsetId::from_full("S1-n")).unwrap();
        assert_eq!(
            s1.domains,
            BTreeSet::from(["economy".to_string(), "sport".to_string()])
        );
        let s2 = lex.synset(&SynsetId::from_full("S2-n")).unwrap();
        assert_eq!(s2.domains, BTreeSet::from(["factotum".to_string()]));
    }
}
