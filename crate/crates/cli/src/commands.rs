//! The six subcommand bodies. Every command resolves its settings, logs the
//! resolved configuration and a content digest of each input, then runs the
//! corresponding library operations.

use std::collections::BTreeMap;
use std::path::Path;

use senseforge_core::corpus::{
    parse_answer_keys, parse_gold_keys, parse_unified_corpus, write_answer_keys, write_gold_keys,
    write_unified_corpus,
};
use senseforge_core::digest::file_digest;
use senseforge_core::evaluation::{
    ablation_grid, emit_report, full_grid_subsets, non_wfs_rate, per_pos_breakdown,
    render_ablation_text, render_ablation_tsv, render_non_wfs_rate, render_pos_breakdown,
    render_score_summary, score as score_answers, Benchmark,
};
use senseforge_core::lexicon::{
    attach_domain_map, parse_compact_lexicon, parse_wordnet_db, Lexicon,
};
use senseforge_core::pipeline::{
    disambiguate_corpus, harvest_examples, load_model, prepare_training_set, save_model,
    train_multilayer, variant_label, LayerConfig, Resources, TrainingSet,
};
use senseforge_core::{Error, Result};

use crate::settings::Settings;

/// One run's resolved settings plus the digests of every input consumed.
struct Run {
    settings: Settings,
    digests: BTreeMap<String, String>,
}

impl Run {
    fn start(config_file: Option<&Path>, overrides: &[String]) -> Result<Run> {
        let settings = Settings::resolve(config_file, overrides)?;
        settings.log_resolved();
        let workers = settings.unsigned("workers")?;
        if workers > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers as usize)
                .build_global()
                .map_err(|e| {
                    Error::usage(format!("could not configure {workers} workers: {e}"))
                })?;
        }
        Ok(Run {
            settings,
            digests: BTreeMap::new(),
        })
    }

    /// Digests one input file, logs it, and records it under `name`.
    fn digest(&mut self, name: &str, path: &Path) -> Result<()> {
        let hex = file_digest(path)?;
        eprintln!("digest: {} = {}", path.display(), hex);
        self.digests.insert(name.to_string(), hex);
        Ok(())
    }
}

const WORDNET_FILES: [&str; 5] = [
    "data.noun",
    "data.verb",
    "data.adj",
    "data.adv",
    "index.sense",
];

/// Loads the sense inventory named by `lexicon`: a directory is read as a
/// dictionary database, anything else as a compact lexicon file. A `domains`
/// map, when configured, replaces the synsets' domain labels.
fn load_lexicon(run: &mut Run) -> Result<Lexicon> {
    let path = run.settings.require_path("lexicon")?;
    let lexicon = if path.is_dir() {
        for file in WORDNET_FILES {
            run.digest(&format!("lexicon/{file}"), &path.join(file))?;
        }
        parse_wordnet_db(&path)?
    } else {
        run.digest("lexicon", &path)?;
        parse_compact_lexicon(&path)?
    };
    match run.settings.path("domains") {
        Some(domains) => {
            run.digest("domains", &domains)?;
            let (lexicon, mapped) = attach_domain_map(lexicon, &domains)?;
            eprintln!("domains: {mapped} synsets mapped");
            Ok(lexicon)
        }
        None => Ok(lexicon),
    }
}

fn load_training_set(run: &mut Run) -> Result<TrainingSet> {
    let corpus_path = run.settings.require_path("train.corpus")?;
    let keys_path = run.settings.require_path("train.keys")?;
    run.digest("train.corpus", &corpus_path)?;
    run.digest("train.keys", &keys_path)?;
    Ok(TrainingSet {
        corpus: parse_unified_corpus(&corpus_path)?,
        keys: parse_gold_keys(&keys_path)?,
    })
}

fn digest_layer_inputs(run: &mut Run, configs: &[LayerConfig]) -> Result<()> {
    for (i, config) in configs.iter().enumerate() {
        if let Some(path) = &config.vectors_path {
            run.digest(&format!("layer{}.vectors", i + 1), path)?;
        }
        if let Some(path) = &config.context_vectors_path {
            run.digest(&format!("layer{}.context_vectors", i + 1), path)?;
        }
    }
    Ok(())
}

fn digest_gloss_corpora(run: &mut Run) -> Result<()> {
    for (i, (corpus, keys)) in run
        .settings
        .corpus_key_pairs("augment.gloss_corpora")?
        .into_iter()
        .enumerate()
    {
        run.digest(&format!("gloss{i}.corpus"), &corpus)?;
        run.digest(&format!("gloss{i}.keys"), &keys)?;
    }
    Ok(())
}

pub fn train(config_file: Option<&Path>, overrides: &[String]) -> Result<()> {
    let mut run = Run::start(config_file, overrides)?;
    let output = run.settings.require_path("output")?;
    let lexicon = load_lexicon(&mut run)?;
    let training = load_training_set(&mut run)?;
    let configs = run.settings.layer_configs()?;
    digest_layer_inputs(&mut run, &configs)?;
    digest_gloss_corpora(&mut run)?;

    let resources = Resources::prepare(&configs)?;
    let options = run.settings.train_options(run.digests.clone())?;
    let (model, stats) = train_multilayer(&lexicon, training, &configs, &options, &resources)?;
    save_model(&model, &output)?;

    let classifiers: usize = model.layers.iter().map(|l| l.classifiers.len()).sum();
    eprintln!(
        "trained {} layer(s), {} classifiers; context vector misses: {}",
        model.layers.len(),
        classifiers,
        stats.context_vector_misses
    );
    eprintln!("wrote model {}", output.display());
    Ok(())
}

pub fn disambiguate(config_file: Option<&Path>, overrides: &[String]) -> Result<()> {
    let mut run = Run::start(config_file, overrides)?;
    let output = run.settings.require_path("output")?;
    let model_path = run.settings.require_path("model")?;
    let corpus_path = run.settings.require_path("eval.corpus")?;
    run.digest("model", &model_path)?;
    run.digest("eval.corpus", &corpus_path)?;
    let lexicon = load_lexicon(&mut run)?;
    let model = load_model(&model_path)?;
    let corpus = parse_unified_corpus(&corpus_path)?;

    let configs: Vec<LayerConfig> = model.layers.iter().map(|l| l.config.clone()).collect();
    digest_layer_inputs(&mut run, &configs)?;
    let resources = Resources::prepare(&configs)?;
    let mode = run.settings.disambiguation_mode()?;
    let result = disambiguate_corpus(&model, &lexicon, &corpus, mode, &resources)?;
    let answers = result.to_answer_map();
    write_answer_keys(&answers, &output)?;

    let answered = answers.values().filter(|a| a.is_some()).count();
    eprintln!(
        "answered {} of {} instances in {} pass(es); context vector misses: {}",
        answered,
        answers.len(),
        result.passes,
        result.context_vector_misses
    );
    eprintln!("wrote answers {}", output.display());
    Ok(())
}

pub fn score(config_file: Option<&Path>, overrides: &[String]) -> Result<()> {
    let mut run = Run::start(config_file, overrides)?;
    let answers_path = run.settings.require_path("answers")?;
    let gold_path = run.settings.require_path("eval.keys")?;
    run.digest("answers", &answers_path)?;
    run.digest("eval.keys", &gold_path)?;
    let answers = parse_answer_keys(&answers_path)?;
    let gold = parse_gold_keys(&gold_path)?;

    let mut text = render_score_summary(&score_answers(&answers, &gold)?);
    if let Some(corpus_path) = run.settings.path("eval.corpus") {
        run.digest("eval.corpus", &corpus_path)?;
        let corpus = parse_unified_corpus(&corpus_path)?;
        text.push_str(&render_pos_breakdown(&per_pos_breakdown(
            &answers, &gold, &corpus,
        )?));
    }
    if run.settings.path("lexicon").is_some() {
        let lexicon = load_lexicon(&mut run)?;
        let denominator = run.settings.denominator()?;
        text.push_str(&render_non_wfs_rate(&non_wfs_rate(
            &answers,
            &gold,
            &lexicon,
            denominator,
        )?));
    }
    print!("{text}");
    if let Some(report) = run.settings.path("report") {
        emit_report(&text, &report)?;
        eprintln!("wrote report {}", report.display());
    }
    Ok(())
}

pub fn ablate(config_file: Option<&Path>, overrides: &[String]) -> Result<()> {
    let mut run = Run::start(config_file, overrides)?;
    let named = run.settings.benchmarks()?;
    if named.is_empty() {
        return Err(Error::usage(
            "ablate needs benchmarks; set benchmarks = name=corpus,keys[;...] \
             or pass --benchmark",
        ));
    }
    let lexicon = load_lexicon(&mut run)?;
    let training = load_training_set(&mut run)?;
    let mut benchmarks = Vec::with_capacity(named.len());
    for (name, corpus_path, keys_path) in named {
        run.digest(&format!("benchmark.{name}.corpus"), &corpus_path)?;
        run.digest(&format!("benchmark.{name}.keys"), &keys_path)?;
        benchmarks.push(Benchmark {
            name,
            corpus: parse_unified_corpus(&corpus_path)?,
            keys: parse_gold_keys(&keys_path)?,
        });
    }

    let configs = run.settings.layer_configs()?;
    let template = match configs.as_slice() {
        [single] => single.clone(),
        _ => return Err(Error::usage("ablate uses a single layer; set layers = 1")),
    };
    digest_layer_inputs(&mut run, std::slice::from_ref(&template))?;
    digest_gloss_corpora(&mut run)?;
    let bases = run.settings.base_systems("ablate.bases")?;
    let resources = Resources::prepare(std::slice::from_ref(&template))?;
    let options = run.settings.train_options(run.digests.clone())?;
    let table = ablation_grid(
        &lexicon,
        &training,
        &benchmarks,
        &bases,
        &full_grid_subsets(),
        &template,
        &options,
        &resources,
    )?;
    print!("{}", render_ablation_text(&table));
    if let Some(report) = run.settings.path("report") {
        emit_report(&render_ablation_tsv(&table), &report)?;
        eprintln!("wrote report {}", report.display());
    }
    Ok(())
}

pub fn augment(config_file: Option<&Path>, overrides: &[String]) -> Result<()> {
    let mut run = Run::start(config_file, overrides)?;
    let out_corpus = run.settings.require_path("output.corpus")?;
    let out_keys = run.settings.require_path("output.keys")?;
    let lexicon = load_lexicon(&mut run)?;
    let augmentation = run.settings.augmentation()?;
    if augmentation.use_sli {
        eprintln!("note: augment.sli applies at training time; written corpora are unaffected");
    }
    digest_gloss_corpora(&mut run)?;

    let merged = match run.settings.path("train.corpus") {
        Some(_) => {
            let base = load_training_set(&mut run)?;
            prepare_training_set(&lexicon, base, &augmentation)?
        }
        None => {
            if !augmentation.gloss_corpora.is_empty() {
                return Err(Error::usage(
                    "merging extra corpora requires train.corpus and train.keys",
                ));
            }
            if !augmentation.use_examples {
                return Err(Error::usage(
                    "augment needs augment.examples = true or a base corpus",
                ));
            }
            harvest_examples(&lexicon)?
        }
    };
    write_unified_corpus(&merged.corpus, &out_corpus)?;
    write_gold_keys(&merged.keys, &out_keys)?;
    eprintln!(
        "wrote {} documents with {} instances to {} and {}",
        merged.corpus.document_count(),
        merged.corpus.instance_count(),
        out_corpus.display(),
        out_keys.display()
    );
    Ok(())
}

pub fn inspect(config_file: Option<&Path>, overrides: &[String]) -> Result<()> {
    let mut run = Run::start(config_file, overrides)?;
    let mut printed = false;

    if run.settings.path("lexicon").is_some() {
        let lexicon = load_lexicon(&mut run)?;
        println!(
            "lexicon: synsets {} senses {} word types {} max polysemy {}",
            lexicon.synset_count(),
            lexicon.sense_count(),
            lexicon.word_type_count(),
            lexicon.max_polysemy()
        );
        printed = true;
    }

    if let Some(corpus_path) = run.settings.path("eval.corpus") {
        run.digest("eval.corpus", &corpus_path)?;
        let corpus = parse_unified_corpus(&corpus_path)?;
        let sentences = corpus.sentences().count();
        let tokens: usize = corpus.sentences().map(|s| s.tokens.len()).sum();
        println!(
            "corpus: documents {} sentences {} tokens {} instances {}",
            corpus.document_count(),
            sentences,
            tokens,
            corpus.instance_count()
        );
        printed = true;
    }

    if let Some(keys_path) = run.settings.path("eval.keys") {
        run.digest("eval.keys", &keys_path)?;
        let keys = parse_gold_keys(&keys_path)?;
        let multi = keys.iter().filter(|(_, set)| set.len() > 1).count();
        println!("keys: instances {} multi-key {}", keys.len(), multi);
        printed = true;
    }

    if let Some(model_path) = run.settings.path("model") {
        run.digest("model", &model_path)?;
        let model = load_model(&model_path)?;
        println!("model: layers {}", model.layers.len());
        for (i, layer) in model.layers.iter().enumerate() {
            let label = variant_label(&layer.config.semantic);
            println!(
                "layer {}: base {} semantic {} classifiers {}",
                i + 1,
                layer.config.base,
                if label.is_empty() { "-" } else { &label },
                layer.classifiers.len()
            );
        }
        let a = &model.augmentation;
        println!(
            "model augmentation: sli {} examples {} extra corpora {} restrict {}",
            a.use_sli,
            a.use_examples,
            a.gloss_corpora.len(),
            a.restrict_to_inventory
        );
        for (name, hex) in &model.corpus_digests {
            println!("model input {}: {}", name, hex);
        }
        printed = true;
    }

    if !printed {
        return Err(Error::usage(
            "inspect needs at least one of --lexicon, --corpus, --keys, --model",
        ));
    }
    Ok(())
}
