//! Scoring and reporting: precision/recall/F1 against gold keys, per-pos
//! breakdowns, the non-first-sense rate, and the base-by-variant ablation
//! grid.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::corpus::{Corpus, Document, GoldKeys, Sentence, Token};
use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, Pos};
use crate::pipeline::{
    disambiguate_corpus, train_multilayer, variant_label, BaseSystem, DisambiguationMode,
    LayerConfig, Resources, SemanticFlag, TrainOptions, TrainingSet,
};

/// Instance id to predicted key; `None` marks an unanswered instance.
pub type Answers = BTreeMap<String, Option<String>>;

/// Counts and derived rates for one scored answer set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreSummary {
    pub attempted: usize,
    pub correct: usize,
    pub total: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl ScoreSummary {
    fn from_counts(attempted: usize, correct: usize, total: usize) -> ScoreSummary {
        let precision = match attempted {
            0 => 0.0,
            n => correct as f64 / n as f64,
        };
        let recall = match total {
            0 => 0.0,
            n => correct as f64 / n as f64,
        };
        let f1 = match precision + recall {
            sum if sum == 0.0 => 0.0,
            sum => 2.0 * precision * recall / sum,
        };
        ScoreSummary {
            attempted,
            correct,
            total,
            precision,
            recall,
            f1,
        }
    }
}

/// Scores answers against gold keys. An answer counts as correct when its
/// key is one of the instance's gold keys; answering an instance the gold
/// standard does not list is a data error.
pub fn score(answers: &Answers, gold: &GoldKeys) -> Result<ScoreSummary> {
    let mut attempted = 0;
    let mut correct = 0;
    for (id, answer) in answers {
        let Some(key) = answer else {
            continue;
        };
        let accepted = gold
            .get(id)
            .ok_or_else(|| Error::data(format!("answer for unknown instance {}", id)))?;
        attempted += 1;
        if accepted.contains(key) {
            correct += 1;
        }
    }
    Ok(ScoreSummary::from_counts(attempted, correct, gold.len()))
}

/// Scores each part of speech separately, bucketing gold instances by their
/// token's coarse tag.
pub fn per_pos_breakdown(
    answers: &Answers,
    gold: &GoldKeys,
    corpus: &Corpus,
) -> Result<BTreeMap<Pos, ScoreSummary>> {
    let mut counts: BTreeMap<Pos, (usize, usize, usize)> = BTreeMap::new();
    for (id, accepted) in gold.iter() {
        let location = corpus
            .instance_location(id)
            .ok_or_else(|| Error::data(format!("gold instance {} is not in the corpus", id)))?;
        let token = corpus.token_at(location);
        let pos = token
            .pos
            .as_deref()
            .and_then(Pos::from_coarse_tag)
            .ok_or_else(|| {
                Error::data(format!(
                    "instance {} has pos {:?} outside the scored classes",
                    id, token.pos
                ))
            })?;
        let entry = counts.entry(pos).or_default();
        entry.2 += 1;
        if let Some(Some(key)) = answers.get(id) {
            entry.0 += 1;
            if accepted.contains(key) {
                entry.1 += 1;
            }
        }
    }
    Ok(counts
        .into_iter()
        .map(|(pos, (attempted, correct, total))| {
            (pos, ScoreSummary::from_counts(attempted, correct, total))
        })
        .collect())
}

/// The population the non-first-sense rate is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonWfsDenominator {
    /// Correct answers only, the default.
    CorrectAnswers,
    /// Every gold instance.
    AllInstances,
}

/// Share of answers that picked something other than the first sense.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonWfsRate {
    pub rate: f64,
    pub denominator: NonWfsDenominator,
    /// True when the denominator was zero and the rate defaulted to 0.0.
    pub undefined: bool,
}

/// Measures how often correct answers departed from the first sense. Keys
/// the lexicon does not know are skipped in the numerator.
pub fn non_wfs_rate(
    answers: &Answers,
    gold: &GoldKeys,
    lexicon: &Lexicon,
    denominator: NonWfsDenominator,
) -> Result<NonWfsRate> {
    let mut correct = 0;
    let mut non_first = 0;
    for (id, answer) in answers {
        let Some(key) = answer else {
            continue;
        };
        let accepted = gold
            .get(id)
            .ok_or_else(|| Error::data(format!("answer for unknown instance {}", id)))?;
        if !accepted.contains(key) {
            continue;
        }
        correct += 1;
        if let Some(sense) = lexicon.sense(key) {
            if sense.sense_number != 1 {
                non_first += 1;
            }
        }
    }
    let population = match denominator {
        NonWfsDenominator::CorrectAnswers => correct,
        NonWfsDenominator::AllInstances => gold.len(),
    };
    Ok(match population {
        0 => NonWfsRate {
            rate: 0.0,
            denominator,
            undefined: true,
        },
        n => NonWfsRate {
            rate: non_first as f64 / n as f64,
            denominator,
            undefined: false,
        },
    })
}

/// A full evaluation: overall counts, per-pos buckets, and the
/// non-first-sense rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub summary: ScoreSummary,
    pub per_pos: BTreeMap<Pos, ScoreSummary>,
    pub non_wfs: NonWfsRate,
}

pub fn full_report(
    answers: &Answers,
    gold: &GoldKeys,
    corpus: &Corpus,
    lexicon: &Lexicon,
    denominator: NonWfsDenominator,
) -> Result<ScoreReport> {
    Ok(ScoreReport {
        summary: score(answers, gold)?,
        per_pos: per_pos_breakdown(answers, gold, corpus)?,
        non_wfs: non_wfs_rate(answers, gold, lexicon, denominator)?,
    })
}

/// Renders a proportion as a percentage with one decimal, e.g. `57.1`.
pub fn format_percent(value: f64) -> String {
    format!("{:.1}", 100.0 * value)
}

/// Renders the global counts and rates of a summary as report lines.
pub fn render_score_summary(s: &ScoreSummary) -> String {
    let mut out = String::new();
    out.push_str(&format!("attempted: {}\n", s.attempted));
    out.push_str(&format!("correct: {}\n", s.correct));
    out.push_str(&format!("total: {}\n", s.total));
    out.push_str(&format!("precision: {}\n", format_percent(s.precision)));
    out.push_str(&format!("recall: {}\n", format_percent(s.recall)));
    out.push_str(&format!("F1: {}\n", format_percent(s.f1)));
    out
}

/// Renders one line per part of speech.
pub fn render_pos_breakdown(per_pos: &BTreeMap<Pos, ScoreSummary>) -> String {
    let mut out = String::new();
    for (pos, bucket) in per_pos {
        out.push_str(&format!(
            "pos {}: attempted {} correct {} total {} F1 {}\n",
            pos.coarse_tag(),
            bucket.attempted,
            bucket.correct,
            bucket.total,
            format_percent(bucket.f1)
        ));
    }
    out
}

/// Renders the non-first-sense rate line, labeled with its denominator.
pub fn render_non_wfs_rate(rate: &NonWfsRate) -> String {
    let label = match rate.denominator {
        NonWfsDenominator::CorrectAnswers => "of correct answers",
        NonWfsDenominator::AllInstances => "of all instances",
    };
    if rate.undefined {
        format!("non-first-sense rate: undefined ({})\n", label)
    } else {
        format!(
            "non-first-sense rate: {} ({})\n",
            format_percent(rate.rate),
            label
        )
    }
}

/// Renders a score report as human-readable text.
pub fn render_score_report(report: &ScoreReport) -> String {
    let mut out = render_score_summary(&report.summary);
    out.push_str(&render_pos_breakdown(&report.per_pos));
    out.push_str(&render_non_wfs_rate(&report.non_wfs));
    out
}

/// An evaluation corpus with its gold keys, named for report columns.
#[derive(Debug, Clone)]
pub struct Benchmark {
    pub name: String,
    pub corpus: Corpus,
    pub keys: GoldKeys,
}

/// One trained configuration scored on every benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct AblationRow {
    pub base: BaseSystem,
    pub label: String,
    /// F1 per benchmark, in table column order.
    pub scores: Vec<f64>,
    /// F1 over the concatenation of every benchmark.
    pub all: f64,
}

/// The base-by-variant grid of F1 scores.
#[derive(Debug, Clone, PartialEq)]
pub struct AblationTable {
    pub benchmarks: Vec<String>,
    pub rows: Vec<AblationRow>,
}

/// Every subset of the semantic flags, in report row order.
pub fn full_grid_subsets() -> Vec<BTreeSet<SemanticFlag>> {
    use SemanticFlag::{Dom, Pr, Ssyn};
    vec![
        BTreeSet::new(),
        BTreeSet::from([Pr]),
        BTreeSet::from([Ssyn]),
        BTreeSet::from([Ssyn, Pr]),
        BTreeSet::from([Dom]),
        BTreeSet::from([Pr, Dom]),
        BTreeSet::from([Ssyn, Dom]),
        BTreeSet::from([Ssyn, Pr, Dom]),
    ]
}

fn concatenate_benchmarks(benchmarks: &[Benchmark]) -> Result<(Corpus, GoldKeys)> {
    let mut documents = Vec::new();
    let mut keys = GoldKeys::default();
    for benchmark in benchmarks {
        for document in benchmark.corpus.documents() {
            documents.push(Document {
                id: format!("{}:{}", benchmark.name, document.id),
                sentences: document
                    .sentences
                    .iter()
                    .map(|sentence| Sentence {
                        id: format!("{}:{}", benchmark.name, sentence.id),
                        tokens: sentence
                            .tokens
                            .iter()
                            .map(|token| Token {
                                instance_id: token
                                    .instance_id
                                    .as_ref()
                                    .map(|id| format!("{}:{}", benchmark.name, id)),
                                ..token.clone()
                            })
                            .collect(),
                    })
                    .collect(),
            });
        }
        for (id, accepted) in benchmark.keys.iter() {
            keys.insert(format!("{}:{}", benchmark.name, id), accepted.clone())?;
        }
    }
    Ok((Corpus::from_documents(documents)?, keys))
}

/// Trains one single-layer model per (base, variant) cell and scores it on
/// every benchmark plus their concatenation.
pub fn ablation_grid(
    lexicon: &Lexicon,
    training: &TrainingSet,
    benchmarks: &[Benchmark],
    bases: &[BaseSystem],
    subsets: &[BTreeSet<SemanticFlag>],
    layer_template: &LayerConfig,
    options: &TrainOptions,
    resources: &Resources,
) -> Result<AblationTable> {
    let (combined_corpus, combined_keys) = concatenate_benchmarks(benchmarks)?;
    let mut rows = Vec::with_capacity(bases.len() * subsets.len());
    for &base in bases {
        for subset in subsets {
            let config = LayerConfig {
                base,
                semantic: subset.clone(),
                ..layer_template.clone()
            };
            let (model, _) = train_multilayer(
                lexicon,
                training.clone(),
                std::slice::from_ref(&config),
                options,
                resources,
            )?;
            let mut scores = Vec::with_capacity(benchmarks.len());
            for benchmark in benchmarks {
                let result = disambiguate_corpus(
                    &model,
                    lexicon,
                    &benchmark.corpus,
                    DisambiguationMode::SinglePass,
                    resources,
                )?;
                scores.push(score(&result.to_answer_map(), &benchmark.keys)?.f1);
            }
            let combined = disambiguate_corpus(
                &model,
                lexicon,
                &combined_corpus,
                DisambiguationMode::SinglePass,
                resources,
            )?;
            let all = score(&combined.to_answer_map(), &combined_keys)?.f1;
            rows.push(AblationRow {
                base,
                label: variant_label(subset),
                scores,
                all,
            });
        }
    }
    Ok(AblationTable {
        benchmarks: benchmarks.iter().map(|b| b.name.clone()).collect(),
        rows,
    })
}

/// Renders the grid as tab-separated values with a header row.
pub fn render_ablation_tsv(table: &AblationTable) -> String {
    let mut out = String::from("base\tvariant");
    for name in &table.benchmarks {
        out.push('\t');
        out.push_str(name);
    }
    out.push_str("\tALL\n");
    for row in &table.rows {
        out.push_str(&row.base.to_string());
        out.push('\t');
        out.push_str(&row.label);
        for value in &row.scores {
            out.push('\t');
            out.push_str(&format_percent(*value));
        }
        out.push('\t');
        out.push_str(&format_percent(row.all));
        out.push('\n');
    }
    out
}

/// Renders the grid as aligned text, one block per base system.
pub fn render_ablation_text(table: &AblationTable) -> String {
    let mut columns = vec!["variant".to_string()];
    columns.extend(table.benchmarks.iter().cloned());
    columns.push("ALL".to_string());
    let mut widths: Vec<usize> = columns.iter().map(String::len).collect();
    let mut blocks: Vec<(BaseSystem, Vec<Vec<String>>)> = Vec::new();
    for row in &table.rows {
        let mut cells = vec![match row.label.as_str() {
            "" => row.base.to_string(),
            label => format!("{}{}", row.base, label),
        }];
        cells.extend(row.scores.iter().map(|v| format_percent(*v)));
        cells.push(format_percent(row.all));
        for (width, cell) in widths.iter_mut().zip(&cells) {
            *width = (*width).max(cell.len());
        }
        match blocks.last_mut() {
            Some((base, rows)) if *base == row.base => rows.push(cells),
            _ => blocks.push((row.base, vec![cells])),
        }
    }

    let render_line = |cells: &[String], widths: &[usize]| {
        let mut line = String::new();
        for (i, (cell, width)) in cells.iter().zip(widths).enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{:<width$}", cell, width = width));
        }
        line.trim_end().to_string()
    };

    let mut out = render_line(&columns, &widths);
    out.push('\n');
    for (i, (_, rows)) in blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for cells in rows {
            out.push_str(&render_line(cells, &widths));
            out.push('\n');
        }
    }
    out
}

/// Writes rendered report text to a file.
pub fn emit_report(text: &str, path: &Path) -> Result<()> {
    crate::error::write_output(path, text.as_bytes())
}
