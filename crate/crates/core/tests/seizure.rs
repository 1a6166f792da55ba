//! Signal windows through training, prediction and the alarm rule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hdc_core::encode::{signal_windows, SignalEncoder, LBP_SPAN};
use hdc_core::learn::{
    seizure_alarm_postprocess, train_single_pass, AlarmConfig, Labeled, ModelKind, WindowState,
};
use hdc_core::memory::ItemMemory;
use hdc_core::{HvSpace, TiePolicy};

const CHANNELS: usize = 4;
const WINDOW: usize = 128;
const HOP: usize = 64;

/// Noise for interictal activity, a fast oscillation for ictal activity.
fn recording(rng: &mut ChaCha8Rng, samples: usize, ictal: bool) -> Vec<Vec<f64>> {
    (0..CHANNELS)
        .map(|c| {
            (0..samples)
                .map(|t| {
                    let noise: f64 = rng.gen_range(-1.0..1.0);
                    if ictal {
                        (t as f64 * std::f64::consts::TAU / (6.0 + c as f64)).sin() * 4.0 + 0.1 * noise
                    } else {
                        noise
                    }
                })
                .collect()
        })
        .collect()
}

fn encode(enc: &SignalEncoder, channels: &[Vec<f64>], label: &str) -> Vec<Labeled> {
    signal_windows(channels, WINDOW, HOP)
        .unwrap()
        .iter()
        .map(|w| Labeled::new(label, enc.encode(w).unwrap()))
        .collect()
}

#[test]
fn alarm_fires_after_ten_ictal_windows() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let im = ItemMemory::new(HvSpace::new(4000, 21).unwrap());
    let enc = SignalEncoder::new(&im, CHANNELS, TiePolicy::FavorZero);
    let mut train = encode(&enc, &recording(&mut rng, 1024, false), "interictal");
    train.extend(encode(&enc, &recording(&mut rng, 1024, true), "ictal"));
    let am = train_single_pass(&train, ModelKind::Binary, TiePolicy::FavorZero).unwrap();

    // 15 interictal windows, then 15 ictal ones; each code needs LBP_SPAN samples
    let span = WINDOW + 14 * HOP + LBP_SPAN - 1;
    let mut stream = encode(&enc, &recording(&mut rng, span, false), "interictal");
    stream.extend(encode(&enc, &recording(&mut rng, span, true), "ictal"));
    assert_eq!(stream.len(), 30);

    let mut states = Vec::new();
    let mut margins = Vec::new();
    for e in &stream {
        let p = am.predict_hv(&e.hv).unwrap();
        assert_eq!(p.label, e.label);
        states.push(if p.label == "ictal" { WindowState::Ictal } else { WindowState::Interictal });
        margins.push(p.margin());
    }
    let alarms = seizure_alarm_postprocess(&states, &margins, &AlarmConfig::default()).unwrap();
    assert_eq!(alarms.len(), 1);
    assert_eq!(alarms[0].step, 25);
    assert!(alarms[0].margin > 0.0);
}
