//! Acceptance checks: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::time::Instant;

use hdc_core::encode::{encode_record, encode_sequence, extract_field, extract_first, release, SymbolSequence};
use hdc_core::learn::{
    compress_model, evaluate, project, retrain_adapthd, retrain_adapthd_observed, train_single_pass, Labeled,
    ModelKind, QuantTarget, RetrainConfig, RetrainEvent,
};
use hdc_core::memory::{HadamardKeySet, ItemMemory};
use hdc_core::{bundle, BinaryHv, HvSpace, TiePolicy};
use hdc_harness::bench::{bench_character, bench_language, pixel_fraction_sweep, CharBenchSpec};
use hdc_harness::data::builtin_font;
use hdc_harness::encoding::{EncoderSpec, RawData, DEFAULT_LEVELS};
use hdc_harness::modelfile::{decode_model, encode_model, SavedModel};
use hdc_harness::stats::{run_stats, ExperimentSpec, BIND, BUNDLE3, PERMUTE, RANDOM_PAIRS};
use hdc_harness::synth::{gaussian_clusters, synthetic_languages, ClusterSpec, LanguageSpec};

const SEED: u64 = 42;
const POLICY: TiePolicy = TiePolicy::RandomExtraVector { seed: 0x5eed };

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    format!("error: {e}")
}

fn encoded_clusters(spec: &ClusterSpec, dim: usize, seed: u64) -> Result<Vec<Labeled>, String> {
    let ds = gaussian_clusters(spec);
    let enc = EncoderSpec::record_for(&ds, dim, DEFAULT_LEVELS, seed + 1);
    enc.build(HvSpace::new(dim, seed).map_err(fail)?, POLICY)
        .map_err(fail)?
        .encode_all(&RawData::Features(ds))
        .map_err(fail)
}

/// Four overlapping Gaussian classes: hard enough that single-pass training misses.
fn hard_task(dim: usize) -> Result<Vec<Labeled>, String> {
    encoded_clusters(&ClusterSpec::new(4, 60, 8, 0.3, 11), dim, SEED)
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let report = run_stats(&ExperimentSpec::new(10_000, 3000, SEED, POLICY)).map_err(fail)?;
    let secs = start.elapsed().as_secs_f64();
    let big = report.get(RANDOM_PAIRS, 10_000).ok_or("missing d=10000 panel")?;
    let small = report.get(RANDOM_PAIRS, 100).ok_or("missing d=100 panel")?;
    ensure(
        (0.497..=0.503).contains(&big.mean)
            && (0.004..=0.006).contains(&big.std)
            && (0.04..=0.06).contains(&small.std)
            && secs < 5.0,
        format!(
            "d=10000 mean {:.4} std {:.4}; d=100 std {:.4}; {secs:.2} s",
            big.mean, big.std, small.std
        ),
    )
}

fn criterion_2() -> Check {
    let report = run_stats(&ExperimentSpec::new(10_000, 3000, SEED, POLICY)).map_err(fail)?;
    let b3 = report.get(BUNDLE3, 10_000).ok_or("missing bundle3 panel")?;
    let space = HvSpace::new(10_000, SEED).map_err(fail)?;
    let mut exact = 0;
    for i in 0..100u64 {
        let (a, b) = (space.random_hv(2 * i), space.random_hv(2 * i + 1));
        let zero = bundle([&a, &b], TiePolicy::FavorZero).map_err(fail)?;
        let one = bundle([&a, &b], TiePolicy::FavorOne).map_err(fail)?;
        let ok = (0..10_000).all(|k| {
            if a.get(k) == b.get(k) {
                zero.get(k) == a.get(k) && one.get(k) == a.get(k)
            } else {
                !zero.get(k) && one.get(k)
            }
        });
        exact += usize::from(ok);
    }
    ensure(
        (0.24..=0.26).contains(&b3.mean) && exact == 100,
        format!("bundle3 mean {:.4}; tie-only differences {exact}/100", b3.mean),
    )
}

fn criterion_3() -> Check {
    let report = run_stats(&ExperimentSpec::new(10_000, 3000, SEED, POLICY)).map_err(fail)?;
    let bind = report.get(BIND, 10_000).ok_or("missing bind panel")?.mean;
    let perm = report.get(PERMUTE, 10_000).ok_or("missing permute panel")?.mean;
    ensure(
        (0.48..=0.52).contains(&bind) && (0.48..=0.52).contains(&perm),
        format!("bind {bind:.4}; permute {perm:.4}"),
    )
}

fn criterion_4() -> Check {
    let a = BinaryHv::from_bit_str("0000110011").map_err(fail)?;
    let b = BinaryHv::from_bit_str("1011000101").map_err(fail)?;
    let c = BinaryHv::from_bit_str("0010101101").map_err(fail)?;
    let sum = bundle([&a, &b, &c], POLICY).map_err(fail)?.to_bit_string();
    let xor = a.bind(&b).map_err(fail)?.to_bit_string();
    let rot = a.permute(1);
    let ham = a.hamming(&rot).map_err(fail)?.value;
    ensure(
        sum == "0010100101" && xor == "1011110110" && rot.to_bit_string() == "1000011001" && ham == 0.4,
        format!("bundle {sum}; bind {xor}; rotation {} at Ham {ham}", rot.to_bit_string()),
    )
}

fn criterion_5() -> Check {
    let space = HvSpace::new(10_000, SEED).map_err(fail)?;
    let im = ItemMemory::new(space);
    let mut released = 0;
    let mut extracted = 0;
    let mut cleaned = 0;
    for t in 0..1000u64 {
        let base = 100 * t;
        let (x, v) = (space.random_hv(base), space.random_hv(base + 1));
        released += usize::from(release(&x.bind(&v).map_err(fail)?, &x).map_err(fail)? == v);

        let s = [format!("a{t}"), format!("b{t}"), format!("c{t}")];
        let seq = encode_sequence(&SymbolSequence::new(&s).map_err(fail)?, &im).map_err(fail)?;
        let suffix = encode_sequence(&SymbolSequence::new(&s[1..]).map_err(fail)?, &im).map_err(fail)?;
        extracted += usize::from(extract_first(&seq, &suffix, 3).map_err(fail)? == im.get(&s[0]));

        let fields: Vec<BinaryHv> = (0..3).map(|j| space.random_hv(base + 10 + j)).collect();
        let values: Vec<BinaryHv> = (0..3).map(|j| space.random_hv(base + 20 + j)).collect();
        // field j holds value (j + t) mod 3
        let pairs: Vec<(&BinaryHv, &BinaryHv)> = (0..3).map(|j| (&fields[j], &values[(j + t as usize) % 3])).collect();
        let record = encode_record(&pairs, POLICY).map_err(fail)?;
        let j = (t % 3) as usize;
        let noisy = extract_field(&record, &fields[j]).map_err(fail)?;
        let best = (0..3)
            .min_by_key(|&i| noisy.hamming_count(&values[i]).unwrap_or(usize::MAX))
            .unwrap_or(0);
        cleaned += usize::from(best == (j + t as usize) % 3);
    }
    ensure(
        released == 1000 && extracted == 1000 && cleaned >= 999,
        format!("release {released}/1000; extract_first {extracted}/1000; cleanup {cleaned}/1000"),
    )
}

fn criterion_6() -> Check {
    let font = builtin_font();
    let spec = CharBenchSpec {
        dims: vec![4000, 10_000, 12_000],
        flip_probabilities: pixel_fraction_sweep(font[0].1.len(), 7),
        trials: 100,
        seed: SEED,
        policy: POLICY,
    };
    let rows = bench_character(&font, &spec).map_err(fail)?;
    let clean = rows.iter().filter(|r| r.flip_probability == 0.0).all(|r| r.accuracy == 1.0);
    let monotone = spec.dims.iter().all(|&d| {
        let accs: Vec<f64> = rows.iter().filter(|r| r.dim == d).map(|r| r.accuracy).collect();
        accs.windows(2).all(|w| w[1] <= w[0])
    });
    let at5 = rows
        .iter()
        .find(|r| r.dim == 10_000 && (r.flip_probability - 5.0 / 35.0).abs() < 1e-12)
        .ok_or("missing 5/35 row")?;
    ensure(
        clean && monotone && at5.accuracy >= 0.80,
        format!(
            "clean accuracy 1.0: {clean}; monotone: {monotone}; d=10000 at 5/35: {:.4} ± {:.4}",
            at5.accuracy, at5.ci95
        ),
    )
}

fn criterion_7() -> Check {
    let spec = LanguageSpec {
        seed: SEED,
        ..LanguageSpec::default()
    };
    let (train, test) = synthetic_languages(&spec);
    let r = bench_language(&train, &test, 3, 10_000, SEED, POLICY).map_err(fail)?;
    let base = r.baseline_accuracy.ok_or("baseline not built")?;
    ensure(
        r.hd_accuracy >= 0.95 && (r.hd_accuracy - base).abs() <= 0.03 && r.baseline_slots == 19_683,
        format!(
            "{} test sentences; HD {:.4}; count baseline {base:.4}; agreement {:.4}",
            r.test_count,
            r.hd_accuracy,
            r.agreement.unwrap_or(f64::NAN)
        ),
    )
}

fn class_sum(am: &hdc_core::learn::AssociativeMemory) -> Vec<i64> {
    let vs = am.integer_vectors().expect("integer model");
    (0..am.dim()).map(|k| vs.iter().map(|v| i64::from(v[k])).sum()).collect()
}

fn criterion_8() -> Check {
    let data = hard_task(10_000)?;
    let am = train_single_pass(&data, ModelKind::IntegerCentroid, POLICY).map_err(fail)?;
    let before = class_sum(&am);
    let mut updates = 0usize;
    let mut conserved = true;
    let cfg = RetrainConfig {
        shuffle_seed: SEED,
        ..RetrainConfig::default()
    };
    let (model, report) = retrain_adapthd_observed(&am, &data, &cfg, &mut |e| {
        if let RetrainEvent::Update { model, .. } = e {
            updates += 1;
            conserved &= class_sum(model) == before;
        }
    })
    .map_err(fail)?;
    let after = evaluate(&model, &data).map_err(fail)?.accuracy;
    ensure(
        report.initial_accuracy < 1.0
            && after > report.initial_accuracy
            && report.converged
            && report.iterations <= 50
            && updates > 0
            && conserved,
        format!(
            "single-pass {:.4} -> {after:.4} in {} epochs (converged: {}); {updates} updates, sums conserved: {conserved}",
            report.initial_accuracy, report.iterations, report.converged
        ),
    )
}

fn criterion_9() -> Check {
    let dim = 10_240;
    let data = hard_task(dim)?;
    let am = train_single_pass(&data, ModelKind::IntegerCentroid, POLICY).map_err(fail)?;
    let mut idempotent = true;
    for target in [QuantTarget::Binary, QuantTarget::Bipolar, QuantTarget::Ternary { tau: 0.5 }] {
        let once = project(&am, target).map_err(fail)?;
        idempotent &= project(&once, target).map_err(fail)? == once;
    }

    let one = compress_model(&am, &HadamardKeySet::for_dimension(dim, 1).map_err(fail)?).map_err(fail)?;
    let mut identical = true;
    for e in &data {
        identical &= am.predict_hv(&e.hv).map_err(fail)?.scores == one.predict_hv(&e.hv).map_err(fail)?.scores;
    }

    let keys = HadamardKeySet::for_dimension(dim, 20).map_err(fail)?;
    let small = compress_model(&am, &keys).map_err(fail)?;
    let mut agree = 0;
    for e in &data {
        agree += usize::from(am.predict_hv(&e.hv).map_err(fail)?.index == small.predict_hv(&e.hv).map_err(fail)?.index);
    }
    let rate = agree as f64 / data.len() as f64;
    ensure(
        idempotent && identical && rate >= 0.90 && keys.segment_dim() == 512,
        format!(
            "projection idempotent: {idempotent}; s=1 scores identical: {identical}; s=20 (D={}) agreement {rate:.4}",
            keys.segment_dim()
        ),
    )
}

fn criterion_10() -> Check {
    let dim = 10_240;
    let space = HvSpace::new(dim, SEED).map_err(fail)?;
    let data = hard_task(dim)?;
    let queries = encoded_clusters(&ClusterSpec::new(4, 25, 8, 0.3, 99), dim, SEED)?;
    let integer = train_single_pass(&data, ModelKind::IntegerCentroid, POLICY).map_err(fail)?;
    let models = vec![
        integer.clone(),
        train_single_pass(&data, ModelKind::Binary, POLICY).map_err(fail)?,
        project(&integer, QuantTarget::Bipolar).map_err(fail)?,
        project(&integer, QuantTarget::Ternary { tau: 0.5 }).map_err(fail)?,
        compress_model(&integer, &HadamardKeySet::for_dimension(dim, 20).map_err(fail)?).map_err(fail)?,
    ];
    let ds = gaussian_clusters(&ClusterSpec::new(4, 60, 8, 0.3, 11));
    let encoder = EncoderSpec::record_for(&ds, dim, DEFAULT_LEVELS, SEED + 1);
    let mut kinds = Vec::new();
    for memory in models {
        let saved = SavedModel {
            space,
            policy: POLICY,
            encoder: encoder.clone(),
            training: serde_json::json!({}),
            memory,
        };
        let loaded = decode_model(&encode_model(&saved).map_err(fail)?).map_err(fail)?;
        for q in &queries {
            let (x, y) = (
                saved.memory.predict_hv(&q.hv).map_err(fail)?,
                loaded.memory.predict_hv(&q.hv).map_err(fail)?,
            );
            let same = x.label == y.label
                && x.scores.iter().map(|s| s.to_bits()).eq(y.scores.iter().map(|s| s.to_bits()));
            if !same {
                return Err(format!("{} model changed after reload", saved.memory.kind()));
            }
        }
        kinds.push(saved.memory.kind().name());
        if saved.memory.kind() == ModelKind::IntegerCentroid {
            let cfg = RetrainConfig::default();
            let before = retrain_adapthd(&saved.memory, &data, &cfg).map_err(fail)?;
            let after = retrain_adapthd(&loaded.memory, &data, &cfg).map_err(fail)?;
            if before != after {
                return Err("retraining after reload diverged".into());
            }
        }
    }
    Ok(format!("{} queries bit-identical for {}; retraining after reload identical", queries.len(), kinds.join(", ")))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("orthogonality concentration", criterion_1),
        ("bundle statistics", criterion_2),
        ("bind/permute orthogonality", criterion_3),
        ("worked micro-examples", criterion_4),
        ("symbolic algebra", criterion_5),
        ("character benchmark", criterion_6),
        ("language benchmark", criterion_7),
        ("retraining", criterion_8),
        ("quantization/compression", criterion_9),
        ("persistence", criterion_10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let (status, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{status} {:>2} {name}: {detail} [{:.1} s]", i + 1, start.elapsed().as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
