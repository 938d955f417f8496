//! Acceptance checks, one test per criterion. Each prints a `[PASS]` line on
//! success; a failing assertion marks the criterion failed. The ninth check
//! is informational and gated on externally supplied resources.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Instant;

use senseforge_core::classifier::{
    dual_objective, primal_objective, solve_binary_dual, train_binary_svm, TrainConfig,
};
use senseforge_core::corpus::{
    parse_gold_keys, parse_unified_corpus, render_answer_keys, Corpus, Document, GoldKeys,
    Sentence, Token,
};
use senseforge_core::embeddings::load_vectors;
use senseforge_core::evaluation::{
    ablation_grid, full_grid_subsets, non_wfs_rate, score, Answers, Benchmark,
    NonWfsDenominator,
};
use senseforge_core::features::{
    collocation_features, dom_features, pos_features, pr_feature, ssyn_features,
    surrounding_word_features, FeatureKey, InstanceVector, InstanceMeta,
};
use senseforge_core::lexicon::{parse_compact_lexicon, Lexicon, Pos, WordType};
use senseforge_core::pipeline::{
    disambiguate_corpus, model_to_bytes, train_multilayer, training_groups, variant_label,
    wfs_hypotheses, AugmentationOptions, BaseSystem, DisambiguationMode, LayerConfig, Resources,
    SemanticFlag, TrainOptions, TrainingSet,
};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn toy_lexicon() -> Lexicon {
    parse_compact_lexicon(&fixture("toy.clf")).unwrap()
}

fn load_set(corpus: &str, keys: &str) -> TrainingSet {
    TrainingSet {
        corpus: parse_unified_corpus(&fixture(corpus)).unwrap(),
        keys: parse_gold_keys(&fixture(keys)).unwrap(),
    }
}

fn token(surface: &str, lemma: &str, pos: &str) -> Token {
    Token::annotated(surface, lemma, pos)
}

fn rendered(keys: &BTreeSet<FeatureKey>) -> BTreeSet<String> {
    keys.iter().map(|k| k.to_string()).collect()
}

fn expect(strings: &[&str]) -> BTreeSet<String> {
    strings.iter().map(|s| s.to_string()).collect()
}

/// Criterion 1: every feature block reproduces hand-derived key sets on a
/// five-sentence corpus, by string equality, in under a second.
#[test]
fn criterion_01_feature_blocks_match_hand_derived_keys() {
    let started = Instant::now();
    let lexicon = toy_lexicon();

    let sentences = vec![
        Sentence {
            id: "a0.s0".into(),
            tokens: vec![
                token("The", "the", "DET"),
                token("quick", "quick", "ADJ"),
                token("fox", "fox", "NOUN"),
                token("jumps", "jump", "VERB"),
                token("over", "over", "ADP"),
                token("a", "a", "DET"),
                token("lazy", "lazy", "ADJ"),
                token("dog", "dog", "NOUN"),
                token(".", ".", "PUNCT"),
            ],
        },
        Sentence {
            id: "a0.s1".into(),
            tokens: vec![
                token("The", "the", "DET"),
                token("bank", "bank", "NOUN"),
                token("held", "hold", "VERB"),
                token("the", "the", "DET"),
                token("money", "money", "NOUN"),
                token(".", ".", "PUNCT"),
            ],
        },
        Sentence {
            id: "a0.s2".into(),
            tokens: vec![
                token("Bank", "bank", "NOUN"),
                token("rates", "rate", "NOUN"),
                token("rose", "rise", "VERB"),
                token(".", ".", "PUNCT"),
            ],
        },
        Sentence {
            id: "a0.s3".into(),
            tokens: vec![
                token("We", "we", "PRON"),
                token("like", "like", "VERB"),
                token("the", "the", "DET"),
                token("bank", "bank", "NOUN"),
            ],
        },
        Sentence {
            id: "a0.s4".into(),
            tokens: vec![
                token("the", "the", "DET"),
                token("star", "star", "NOUN"),
                token("flows", "flow", "VERB"),
                token("near", "near", "ADP"),
                token("a", "a", "DET"),
                token("river", "river", "NOUN"),
                token("and", "and", "CONJ"),
                token("a", "a", "DET"),
                token("tree", "tree", "NOUN"),
                token(".", ".", "PUNCT"),
            ],
        },
    ];
    let corpus = Corpus::from_documents(vec![Document {
        id: "a0".into(),
        sentences,
    }])
    .unwrap();
    let by_id: BTreeMap<&str, &Sentence> =
        corpus.sentences().map(|s| (s.id.as_str(), s)).collect();
    let hypotheses = wfs_hypotheses(&lexicon, &corpus);

    let mid = by_id["a0.s0"];
    assert_eq!(
        rendered(&pos_features(mid, 2)),
        expect(&[
            "POS[-3]=NIL",
            "POS[-2]=DET",
            "POS[-1]=ADJ",
            "POS[0]=NOUN",
            "POS[1]=VERB",
            "POS[2]=ADP",
            "POS[3]=DET",
        ])
    );
    assert_eq!(
        rendered(&collocation_features(mid, 2)),
        expect(&[
            "COL[-2,-2]=the",
            "COL[-1,-1]=quick",
            "COL[1,1]=jumps",
            "COL[2,2]=over",
            "COL[-2,-1]=the_quick",
            "COL[-1,1]=quick__T__jumps",
            "COL[1,2]=jumps_over",
            "COL[-3,-1]=^_the_quick",
            "COL[-2,1]=the_quick__T__jumps",
            "COL[-1,2]=quick__T__jumps_over",
            "COL[1,3]=jumps_over_a",
        ])
    );
    assert_eq!(
        rendered(&surrounding_word_features(mid, 2)),
        expect(&["SW=quick", "SW=jump", "SW=lazy", "SW=dog"])
    );

    let left = by_id["a0.s2"];
    assert_eq!(
        rendered(&pos_features(left, 0)),
        expect(&[
            "POS[-3]=NIL",
            "POS[-2]=NIL",
            "POS[-1]=NIL",
            "POS[0]=NOUN",
            "POS[1]=NOUN",
            "POS[2]=VERB",
            "POS[3]=PUNCT",
        ])
    );
    assert_eq!(
        rendered(&collocation_features(left, 0)),
        expect(&[
            "COL[-2,-2]=^",
            "COL[-1,-1]=^",
            "COL[1,1]=rates",
            "COL[2,2]=rose",
            "COL[-2,-1]=^_^",
            "COL[-1,1]=^__T__rates",
            "COL[1,2]=rates_rose",
            "COL[-3,-1]=^_^_^",
            "COL[-2,1]=^_^__T__rates",
            "COL[-1,2]=^__T__rates_rose",
            "COL[1,3]=rates_rose_.",
        ])
    );
    assert_eq!(
        rendered(&surrounding_word_features(left, 0)),
        expect(&["SW=rate", "SW=rise"])
    );

    let right = by_id["a0.s3"];
    assert_eq!(
        rendered(&pos_features(right, 3)),
        expect(&[
            "POS[-3]=PRON",
            "POS[-2]=VERB",
            "POS[-1]=DET",
            "POS[0]=NOUN",
            "POS[1]=NIL",
            "POS[2]=NIL",
            "POS[3]=NIL",
        ])
    );
    assert_eq!(
        rendered(&collocation_features(right, 3)),
        expect(&[
            "COL[-2,-2]=like",
            "COL[-1,-1]=the",
            "COL[1,1]=$",
            "COL[2,2]=$",
            "COL[-2,-1]=like_the",
            "COL[-1,1]=the__T__$",
            "COL[1,2]=$_$",
            "COL[-3,-1]=we_like_the",
            "COL[-2,1]=like_the__T__$",
            "COL[-1,2]=the__T__$_$",
            "COL[1,3]=$_$_$",
        ])
    );
    assert_eq!(rendered(&surrounding_word_features(right, 3)), expect(&["SW=like"]));

    let bank = WordType::new("bank", Pos::Noun);
    let semantic = by_id["a0.s1"];
    assert_eq!(
        rendered(&pr_feature(&lexicon, &bank, &hypotheses, semantic, 1)),
        expect(&["PR=1"])
    );
    assert_eq!(
        rendered(&ssyn_features(&lexicon, semantic, 1, &hypotheses)),
        expect(&["SSYN=S4-n"])
    );
    assert_eq!(
        rendered(&dom_features(&lexicon, semantic, 1, &hypotheses)),
        expect(&["DOM=economy"])
    );

    let star = WordType::new("star", Pos::Noun);
    let crowded = by_id["a0.s4"];
    assert_eq!(
        rendered(&pr_feature(&lexicon, &star, &hypotheses, crowded, 1)),
        expect(&["PR=1"])
    );
    assert_eq!(
        rendered(&ssyn_features(&lexicon, crowded, 1, &hypotheses)),
        expect(&["SSYN=S5-n", "SSYN=S6-v", "SSYN=S11-n"])
    );
    assert_eq!(
        rendered(&dom_features(&lexicon, crowded, 1, &hypotheses)),
        expect(&["DOM=geography", "DOM=botany", "DOM=nature"]),
        "geography counts twice; botany and nature tie and sort by name"
    );
    assert_eq!(
        rendered(&pr_feature(&lexicon, &star, &hypotheses, semantic, 1)),
        expect(&[]),
        "a hypothesis outside the word type's inventory yields no prior"
    );

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {:?}", elapsed);
    println!("[PASS] criterion 1: feature blocks match hand-derived keys ({:?})", elapsed);
}

fn dense_vector(id: &str, values: &[f64]) -> InstanceVector {
    InstanceVector {
        sparse: Vec::new(),
        dense: values.to_vec(),
        meta: InstanceMeta {
            instance_id: id.to_string(),
            word_type: WordType::new("w", Pos::Noun),
            sem_layer: 0,
        },
    }
}

/// Criterion 2: the one-dimensional fixture recovers the closed-form weight
/// for both regularization strengths, dual variables respect their box, and
/// the relative primal-dual gap closes, all in under five seconds.
#[test]
fn criterion_02_svm_matches_analytic_solutions() {
    let started = Instant::now();

    let vectors = vec![dense_vector("p", &[1.0]), dense_vector("n", &[-1.0])];
    let labels = vec![1.0, -1.0];
    for (c, expected) in [(0.25, 0.5), (1.0, 1.0)] {
        let config = TrainConfig {
            c,
            tolerance: 1e-6,
            ..TrainConfig::default()
        };
        let w = train_binary_svm(&vectors, &labels, 0, 1, &config).unwrap();
        assert!(
            (w[0] - expected).abs() <= 1e-4,
            "C={c}: w={} expected {expected}",
            w[0]
        );
    }

    use rand::{Rng, SeedableRng};
    for seed in [5, 17, 23] {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut vectors = Vec::new();
        let mut labels = Vec::new();
        for i in 0..50 {
            let dense: Vec<f64> = (0..20).map(|_| rng.gen_range(-1.0..1.0)).collect();
            vectors.push(dense_vector(&format!("i{i:03}"), &dense));
            labels.push(if i % 2 == 0 { 1.0 } else { -1.0 });
        }
        let config = TrainConfig {
            tolerance: 1e-3,
            max_epochs: 100_000,
            seed,
            ..TrainConfig::default()
        };
        let solution = solve_binary_dual(&vectors, &labels, 0, 20, &config).unwrap();
        assert!(solution.converged, "seed {seed} did not converge");
        assert!(
            solution.alphas.iter().all(|a| (0.0..=config.c).contains(a)),
            "seed {seed}: dual variable escaped the box"
        );
        let primal = primal_objective(&vectors, &labels, &solution.weights, config.c, 0);
        let dual = dual_objective(&solution.alphas, &solution.weights);
        let gap = (primal - dual) / primal;
        assert!(gap <= 1e-3, "seed {seed}: relative gap {gap}");
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {:?}", elapsed);
    println!("[PASS] criterion 2: SVM analytic, box, and gap checks ({:?})", elapsed);
}

fn representative_options() -> TrainOptions {
    TrainOptions {
        augmentation: AugmentationOptions {
            use_examples: true,
            ..AugmentationOptions::default()
        },
        ..TrainOptions::default()
    }
}

fn representative_layer() -> LayerConfig {
    LayerConfig {
        semantic: [SemanticFlag::Ssyn, SemanticFlag::Pr, SemanticFlag::Dom]
            .into_iter()
            .collect(),
        ..LayerConfig::default()
    }
}

fn train_and_answer() -> (Vec<u8>, String) {
    let lexicon = toy_lexicon();
    let resources = Resources::default();
    let (model, _) = train_multilayer(
        &lexicon,
        load_set("train.xml", "train.key"),
        &[representative_layer()],
        &representative_options(),
        &resources,
    )
    .unwrap();
    let test = load_set("test.xml", "test.key");
    let result = disambiguate_corpus(
        &model,
        &lexicon,
        &test.corpus,
        DisambiguationMode::SinglePass,
        &resources,
    )
    .unwrap();
    (model_to_bytes(&model), render_answer_keys(&result.to_answer_map()))
}

/// Criterion 3: training plus disambiguation is byte-identical across three
/// runs and across worker counts one and four.
#[test]
fn criterion_03_outputs_are_deterministic_across_runs_and_workers() {
    let mut outputs = Vec::new();
    for workers in [1usize, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .unwrap();
        for _ in 0..3 {
            outputs.push(pool.install(train_and_answer));
        }
    }
    let (first_model, first_answers) = &outputs[0];
    for (i, (model, answers)) in outputs.iter().enumerate().skip(1) {
        assert_eq!(model, first_model, "model bytes diverged on run {i}");
        assert_eq!(answers, first_answers, "answers diverged on run {i}");
    }
    println!(
        "[PASS] criterion 3: byte-identical outputs over 3 runs x workers {{1, 4}} ({} model bytes)",
        first_model.len()
    );
}

/// Criterion 4: the four-instance scoring case is exact, full fallback makes
/// the three rates equal, and any-of gold membership is honored.
#[test]
fn criterion_04_scorer_is_exact_on_the_hand_case() {
    let mut gold = GoldKeys::default();
    for (id, accepted) in [
        ("a", vec!["k1"]),
        ("b", vec!["k1"]),
        ("c", vec!["k1", "k2"]),
        ("d", vec!["k1"]),
    ] {
        gold.insert(id, accepted.into_iter().map(String::from).collect())
            .unwrap();
    }
    let answers: Answers = [
        ("a", Some("k1")),
        ("b", Some("k9")),
        ("c", Some("k2")),
        ("d", None),
    ]
    .into_iter()
    .map(|(id, key)| (id.to_string(), key.map(String::from)))
    .collect();

    let summary = score(&answers, &gold).unwrap();
    assert!((summary.precision - 2.0 / 3.0).abs() <= 1e-12);
    assert!((summary.recall - 1.0 / 2.0).abs() <= 1e-12);
    assert!((summary.f1 - 4.0 / 7.0).abs() <= 1e-12);
    assert_eq!(summary.correct, 2, "the multi-gold instance counts as correct");

    let full: Answers = [("a", "k1"), ("b", "k9"), ("c", "k2"), ("d", "k1")]
        .into_iter()
        .map(|(id, key)| (id.to_string(), Some(key.to_string())))
        .collect();
    let full_summary = score(&full, &gold).unwrap();
    assert_eq!(full_summary.precision, full_summary.recall);
    assert_eq!(full_summary.precision, full_summary.f1);
    println!("[PASS] criterion 4: scorer exact (P=2/3, R=1/2, F1=4/7; fallback P=R=F1)");
}

/// Criterion 5: the trained toy model scores 100% on the held-out set while
/// the first-sense baseline scores exactly the brute-forced majority rate.
#[test]
fn criterion_05_toy_model_beats_the_first_sense_baseline() {
    let lexicon = toy_lexicon();
    let resources = Resources::default();
    let (model, _) = train_multilayer(
        &lexicon,
        load_set("train.xml", "train.key"),
        &[LayerConfig::default()],
        &TrainOptions::default(),
        &resources,
    )
    .unwrap();
    let test = load_set("test.xml", "test.key");
    let result = disambiguate_corpus(
        &model,
        &lexicon,
        &test.corpus,
        DisambiguationMode::SinglePass,
        &resources,
    )
    .unwrap();
    let trained = score(&result.to_answer_map(), &test.keys).unwrap();
    assert_eq!(trained.f1, 1.0, "the trained model misses on the toy split");

    let mut baseline = Answers::new();
    let mut by_key: BTreeMap<&str, usize> = BTreeMap::new();
    for (id, accepted) in test.keys.iter() {
        let location = test.corpus.instance_location(id).unwrap();
        let wt = test.corpus.token_at(location).word_type().unwrap();
        baseline.insert(id.clone(), lexicon.first_sense(&wt).map(|s| s.key.clone()));
        for key in accepted {
            *by_key.entry(key).or_default() += 1;
        }
    }
    let majority = *by_key.values().max().unwrap() as f64 / test.keys.len() as f64;
    let wfs = score(&baseline, &test.keys).unwrap();
    assert_eq!(wfs.precision, wfs.recall, "the baseline answers everything");
    assert!(
        (wfs.f1 - majority).abs() <= 1e-12,
        "baseline f1 {} vs majority rate {}",
        wfs.f1,
        majority
    );
    assert!(trained.f1 > wfs.f1);
    println!(
        "[PASS] criterion 5: toy model 100.0 vs first-sense baseline {}",
        senseforge_core::evaluation::format_percent(wfs.f1)
    );
}

/// Criterion 6: synset-level inheritance grows the car group by exactly the
/// donor count found by brute-force sibling enumeration.
#[test]
fn criterion_06_sli_matches_brute_force_sibling_enumeration() {
    let lexicon = toy_lexicon();
    let set = load_set("sli.xml", "sli.key");
    let groups = training_groups(&set.corpus, &set.keys).unwrap();
    let augmented = senseforge_core::pipeline::augment_sli(groups.clone(), &lexicon).unwrap();

    let car = WordType::new("car", Pos::Noun);
    let mut donor_ids = BTreeSet::new();
    for sense in lexicon.senses_of(&car) {
        let siblings: BTreeSet<&str> = lexicon
            .synset_siblings(sense)
            .unwrap()
            .into_iter()
            .map(|s| s.key.as_str())
            .collect();
        for (id, accepted) in set.keys.iter() {
            if accepted.iter().any(|k| siblings.contains(k.as_str())) {
                donor_ids.insert(id.clone());
            }
        }
    }
    assert_eq!(donor_ids.len(), 5, "the fixture carries five sibling donors");
    assert_eq!(
        augmented[&car].len(),
        groups[&car].len() + donor_ids.len(),
        "the car group grows by exactly the donor count"
    );
    let donated: BTreeSet<String> = augmented[&car]
        .iter()
        .filter(|i| !groups[&car].iter().any(|b| b.instance_id == i.instance_id))
        .map(|i| i.instance_id.clone())
        .collect();
    assert_eq!(donated, donor_ids, "donated ids equal the brute-force enumeration");
    println!("[PASS] criterion 6: sibling inheritance adds exactly {} donors", donor_ids.len());
}

/// Criterion 7: when a layer reproduces the first-sense hypotheses, the next
/// layer sees identical semantic keys, and iteration halts after two passes.
#[test]
fn criterion_07_fixed_point_stabilizes_semantic_keys_and_halts() {
    let lexicon = toy_lexicon();
    let resources = Resources::default();

    let mut sentences = Vec::new();
    let mut keys = GoldKeys::default();
    for i in 0..5 {
        let sid = format!("m0.s{}", i);
        let star_id = format!("{}.t1", sid);
        let mut star = Token::annotated("star", "star", "NOUN");
        star.instance_id = Some(star_id.clone());
        sentences.push(Sentence {
            id: sid,
            tokens: vec![
                token("the", "the", "DET"),
                star,
                token("neared", "near", "VERB"),
                token("the", "the", "DET"),
                token("tree", "tree", "NOUN"),
                token(".", ".", "PUNCT"),
            ],
        });
        let gold = if i < 4 { "star%n%S7" } else { "star%n%S8" };
        keys.insert(star_id, BTreeSet::from([gold.to_string()])).unwrap();
    }
    let corpus = Corpus::from_documents(vec![Document {
        id: "m0".into(),
        sentences,
    }])
    .unwrap();
    let training = TrainingSet {
        corpus: corpus.clone(),
        keys,
    };
    let config = LayerConfig {
        semantic: [SemanticFlag::Ssyn, SemanticFlag::Pr, SemanticFlag::Dom]
            .into_iter()
            .collect(),
        ..LayerConfig::default()
    };
    let (model, _) = train_multilayer(
        &lexicon,
        training,
        std::slice::from_ref(&config),
        &TrainOptions::default(),
        &resources,
    )
    .unwrap();

    let single = disambiguate_corpus(
        &model,
        &lexicon,
        &corpus,
        DisambiguationMode::SinglePass,
        &resources,
    )
    .unwrap();
    let wfs = wfs_hypotheses(&lexicon, &corpus);
    let star = WordType::new("star", Pos::Noun);
    for sentence in corpus.sentences() {
        assert_eq!(
            single.hypotheses.get(&sentence.id, 1),
            wfs.get(&sentence.id, 1),
            "layer one reproduces the first-sense hypothesis"
        );
        let before: BTreeSet<String> = pr_feature(&lexicon, &star, &wfs, sentence, 1)
            .iter()
            .chain(&ssyn_features(&lexicon, sentence, 1, &wfs))
            .chain(&dom_features(&lexicon, sentence, 1, &wfs))
            .map(|k| k.to_string())
            .collect();
        let after: BTreeSet<String> =
            pr_feature(&lexicon, &star, &single.hypotheses, sentence, 1)
                .iter()
                .chain(&ssyn_features(&lexicon, sentence, 1, &single.hypotheses))
                .chain(&dom_features(&lexicon, sentence, 1, &single.hypotheses))
                .map(|k| k.to_string())
                .collect();
        assert_eq!(before, after, "semantic keys are stable at the fixed point");
    }

    let iterated = disambiguate_corpus(
        &model,
        &lexicon,
        &corpus,
        DisambiguationMode::Iterate(4),
        &resources,
    )
    .unwrap();
    assert_eq!(iterated.passes, 2, "pass two repeats pass one and halts");
    assert_eq!(iterated.answers, single.answers);
    println!("[PASS] criterion 7: fixed point holds and iterate(4) halts after 2 passes");
}

/// Criterion 8: the full grid emits eight labeled rows per base system and
/// every cell is bit-for-bit equal to a standalone run.
#[test]
fn criterion_08_ablation_grid_matches_standalone_runs() {
    let lexicon = toy_lexicon();
    let training = load_set("train.xml", "train.key");
    let test = load_set("test.xml", "test.key");
    let benchmark = Benchmark {
        name: "toy".into(),
        corpus: test.corpus.clone(),
        keys: test.keys.clone(),
    };
    let mut resources = Resources::default();
    resources.insert_vectors("toy.vec", load_vectors(&fixture("toy.vec")).unwrap());
    let template = LayerConfig {
        vectors_path: Some(PathBuf::from("toy.vec")),
        ..LayerConfig::default()
    };
    let bases = [BaseSystem::Ims, BaseSystem::ImsWe];
    let table = ablation_grid(
        &lexicon,
        &training,
        std::slice::from_ref(&benchmark),
        &bases,
        &full_grid_subsets(),
        &template,
        &TrainOptions::default(),
        &resources,
    )
    .unwrap();

    assert_eq!(table.rows.len(), 16);
    let expected_labels =
        ["", "+PR", "+sSyn", "+sSyn+PR", "+Dom", "+PR+Dom", "+sSyn+Dom", "+sSyn+PR+Dom"];
    for (b, &base) in bases.iter().enumerate() {
        let rows = &table.rows[b * 8..(b + 1) * 8];
        assert!(rows.iter().all(|r| r.base == base), "rows grouped by base");
        let labels: Vec<&str> = rows.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, expected_labels);
    }

    for row in &table.rows {
        let config = LayerConfig {
            base: row.base,
            semantic: full_grid_subsets()
                .into_iter()
                .find(|s| variant_label(s) == row.label)
                .unwrap(),
            ..template.clone()
        };
        let (model, _) = train_multilayer(
            &lexicon,
            training.clone(),
            std::slice::from_ref(&config),
            &TrainOptions::default(),
            &resources,
        )
        .unwrap();
        let result = disambiguate_corpus(
            &model,
            &lexicon,
            &benchmark.corpus,
            DisambiguationMode::SinglePass,
            &resources,
        )
        .unwrap();
        let standalone = score(&result.to_answer_map(), &benchmark.keys).unwrap().f1;
        assert_eq!(
            row.scores[0].to_bits(),
            standalone.to_bits(),
            "{}{} cell differs from its standalone run",
            row.base,
            row.label
        );
    }
    println!("[PASS] criterion 8: 8 labeled rows per base, cells bit-equal to standalone runs");
}

/// Criterion 9: paper-scale numbers need externally supplied resources, so
/// this check is informational. Set SENSEFORGE_WORDNET_DIR (a directory with
/// index.sense and the data.pos files), SENSEFORGE_TRAIN_XML and
/// SENSEFORGE_TRAIN_KEY (a sense-tagged training corpus), and
/// SENSEFORGE_EVAL_XML and SENSEFORGE_EVAL_KEY (the combined evaluation set)
/// to run it; otherwise it reports a skip and passes.
#[test]
fn criterion_09_paper_scale_numbers_are_resource_gated() {
    let vars = [
        "SENSEFORGE_WORDNET_DIR",
        "SENSEFORGE_TRAIN_XML",
        "SENSEFORGE_TRAIN_KEY",
        "SENSEFORGE_EVAL_XML",
        "SENSEFORGE_EVAL_KEY",
    ];
    let values: Vec<Option<String>> = vars.iter().map(|v| std::env::var(v).ok()).collect();
    if values.iter().any(Option::is_none) {
        let missing: Vec<&str> = vars
            .iter()
            .zip(&values)
            .filter(|(_, v)| v.is_none())
            .map(|(name, _)| *name)
            .collect();
        println!(
            "[SKIP] criterion 9: full-scale resources not supplied (missing {}); \
             informational only, not a gate",
            missing.join(", ")
        );
        return;
    }
    let [wordnet, train_xml, train_key, eval_xml, eval_key] =
        [&values[0], &values[1], &values[2], &values[3], &values[4]]
            .map(|v| PathBuf::from(v.as_ref().unwrap()));

    let lexicon = senseforge_core::lexicon::parse_wordnet_db(&wordnet).unwrap();
    let training = TrainingSet {
        corpus: parse_unified_corpus(&train_xml).unwrap(),
        keys: parse_gold_keys(&train_key).unwrap(),
    };
    let resources = Resources::default();
    let (model, _) = train_multilayer(
        &lexicon,
        training,
        &[LayerConfig::default()],
        &TrainOptions::default(),
        &resources,
    )
    .unwrap();
    let eval_corpus = parse_unified_corpus(&eval_xml).unwrap();
    let eval_keys = parse_gold_keys(&eval_key).unwrap();
    let result = disambiguate_corpus(
        &model,
        &lexicon,
        &eval_corpus,
        DisambiguationMode::SinglePass,
        &resources,
    )
    .unwrap();
    let summary = score(&result.to_answer_map(), &eval_keys).unwrap();
    let f1 = 100.0 * summary.f1;
    let delta = f1 - 68.1;
    let verdict = if delta.abs() <= 1.5 {
        "within"
    } else {
        "OUTSIDE (triage against the decisions ledger)"
    };
    println!(
        "[INFO] criterion 9: full-scale F1 {:.1}, delta {:+.1} vs 68.1, {} the +/-1.5 band",
        f1, delta, verdict
    );
    println!("[PASS] criterion 9: informational full-scale run completed");
}

/// Criterion 10: on ten correct answers of which three are non-first senses,
/// the default rate is 0.30 exactly and the all-instances variant 0.25.
#[test]
fn criterion_10_non_first_sense_rates_are_exact() {
    let lexicon = toy_lexicon();
    let mut gold = GoldKeys::default();
    let mut answers = Answers::new();
    for i in 0..12 {
        let id = format!("i{:02}", i);
        let (gold_key, answer) = match i {
            0..=6 => ("bank%n%S1", Some("bank%n%S1")),
            7..=9 => ("bank%n%S2", Some("bank%n%S2")),
            10 => ("bank%n%S1", Some("bank%n%S2")),
            _ => ("bank%n%S1", None),
        };
        gold.insert(id.clone(), BTreeSet::from([gold_key.to_string()]))
            .unwrap();
        answers.insert(id, answer.map(String::from));
    }

    let default = non_wfs_rate(&answers, &gold, &lexicon, NonWfsDenominator::CorrectAnswers)
        .unwrap();
    assert_eq!(default.rate, 0.30, "3 of 10 correct answers are non-first senses");
    assert!(!default.undefined);
    let all = non_wfs_rate(&answers, &gold, &lexicon, NonWfsDenominator::AllInstances).unwrap();
    assert_eq!(all.rate, 0.25, "3 of 12 instances are correct non-first senses");
    println!("[PASS] criterion 10: non-first-sense rates 0.30 (correct) and 0.25 (all)");
}
