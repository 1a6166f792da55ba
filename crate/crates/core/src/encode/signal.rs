//! Local-binary-pattern encoding of multichannel sampled signals.
//!
//! Each sample window of [`LBP_SPAN`] points yields a 6-bit code whose bit `k`
//! is set iff `x[t+k+1] > x[t+k]` (equal samples give 0). Per time step, the
//! code vector of every channel is bound to that channel's electrode vector
//! and the results are bundled; a window vector bundles those per-step
//! composites over [`WINDOW_SAMPLES`] steps. Windows advance by
//! [`WINDOW_HOP`], i.e. one second with half-second overlap at 512 Hz.

use crate::error::{Error, Result};
use crate::hv::{Accumulator, BinaryHv, TiePolicy};
use crate::memory::ItemMemory;

/// Samples consumed by one LBP code.
pub const LBP_SPAN: usize = 7;
pub const WINDOW_SAMPLES: usize = 512;
pub const WINDOW_HOP: usize = 256;

pub fn lbp_codes(samples: &[f64]) -> Result<Vec<u8>> {
    if samples.len() < LBP_SPAN {
        return Err(Error::InputTooShort {
            needed: LBP_SPAN,
            found: samples.len(),
        });
    }
    Ok(samples
        .windows(LBP_SPAN)
        .map(|w| {
            (0..6).fold(0u8, |code, k| if w[k + 1] > w[k] { code | (1 << k) } else { code })
        })
        .collect())
}

/// LBP codes for one window, one row per channel, all rows the same length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignalWindow {
    channels: Vec<Vec<u8>>,
}

impl SignalWindow {
    pub fn new(channels: Vec<Vec<u8>>) -> Result<Self> {
        let first = channels.first().ok_or(Error::EmptyInput("channel list"))?;
        let expected = first.len();
        if expected == 0 {
            return Err(Error::EmptyInput("signal window"));
        }
        for (channel, codes) in channels.iter().enumerate() {
            if codes.len() != expected {
                return Err(Error::ChannelMismatch {
                    channel,
                    expected,
                    found: codes.len(),
                });
            }
            if let Some(step) = codes.iter().position(|&c| c > 63) {
                return Err(Error::InvalidLbpCode {
                    channel,
                    step,
                    code: codes[step],
                });
            }
        }
        Ok(Self { channels })
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn samples_per_window(&self) -> usize {
        self.channels[0].len()
    }

    pub fn channels(&self) -> &[Vec<u8>] {
        &self.channels
    }
}

/// Cuts raw channel samples into coded windows of `window` steps every `hop` steps.
/// A trailing partial window is dropped.
pub fn signal_windows(channels: &[Vec<f64>], window: usize, hop: usize) -> Result<Vec<SignalWindow>> {
    if window == 0 || hop == 0 {
        return Err(Error::InvalidParameter("window and hop must be positive".into()));
    }
    let first = channels.first().ok_or(Error::EmptyInput("channel list"))?;
    for (channel, c) in channels.iter().enumerate() {
        if c.len() != first.len() {
            return Err(Error::ChannelMismatch {
                channel,
                expected: first.len(),
                found: c.len(),
            });
        }
    }
    let codes = channels.iter().map(|c| lbp_codes(c)).collect::<Result<Vec<_>>>()?;
    let steps = codes[0].len();
    if steps < window {
        return Err(Error::InputTooShort {
            needed: window + LBP_SPAN - 1,
            found: first.len(),
        });
    }
    (0..=(steps - window))
        .step_by(hop)
        .map(|start| SignalWindow::new(codes.iter().map(|c| c[start..start + window].to_vec()).collect()))
        .collect()
}

pub fn code_symbol(code: u8) -> String {
    format!("lbp_{code}")
}

pub fn electrode_symbol(channel: usize) -> String {
    format!("E_{}", channel + 1)
}

/// `H = [S^1 + … + S^T]` with `S^t = [C_1 ⊕ E_1 + … + C_n ⊕ E_n]`.
pub fn encode_signal_window(window: &SignalWindow, im: &ItemMemory, policy: TiePolicy) -> Result<BinaryHv> {
    SignalEncoder::new(im, window.channel_count(), policy).encode(window)
}

/// Window encoder with the 64 code vectors and electrode vectors cached.
#[derive(Debug, Clone)]
pub struct SignalEncoder {
    dim: usize,
    codes: Vec<BinaryHv>,
    electrodes: Vec<BinaryHv>,
    policy: TiePolicy,
}

impl SignalEncoder {
    pub fn new(im: &ItemMemory, channels: usize, policy: TiePolicy) -> Self {
        Self {
            dim: im.dim(),
            codes: (0..64).map(|c| im.get(&code_symbol(c))).collect(),
            electrodes: (0..channels).map(|c| im.get(&electrode_symbol(c))).collect(),
            policy,
        }
    }

    pub fn encode(&self, window: &SignalWindow) -> Result<BinaryHv> {
        if window.channel_count() != self.electrodes.len() {
            return Err(Error::ChannelMismatch {
                channel: window.channel_count(),
                expected: self.electrodes.len(),
                found: window.channel_count(),
            });
        }
        let mut window_acc = Accumulator::new(self.dim);
        let mut step_acc = Accumulator::new(self.dim);
        for t in 0..window.samples_per_window() {
            step_acc.clear();
            for (c, codes) in window.channels().iter().enumerate() {
                let code = &self.codes[codes[t] as usize];
                step_acc.add(&code.bind(&self.electrodes[c])?)?;
            }
            window_acc.add(&step_acc.threshold(self.policy)?)?;
        }
        window_acc.threshold(self.policy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hv::HvSpace;

    fn im() -> ItemMemory {
        ItemMemory::new(HvSpace::new(10_000, 13).unwrap())
    }

    #[test]
    fn lbp_extremes() {
        let inc: Vec<f64> = (0..7).map(f64::from).collect();
        assert_eq!(lbp_codes(&inc).unwrap(), vec![63]);
        assert_eq!(lbp_codes(&[2.0; 9]).unwrap(), vec![0, 0, 0]);
        // bit k compares samples k and k+1
        assert_eq!(lbp_codes(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap(), vec![1]);
        assert!(lbp_codes(&[1.0; 6]).is_err());
    }

    #[test]
    fn window_validation() {
        assert!(SignalWindow::new(vec![]).is_err());
        assert!(matches!(
            SignalWindow::new(vec![vec![1, 2], vec![3]]),
            Err(Error::ChannelMismatch { channel: 1, .. })
        ));
        assert!(matches!(
            SignalWindow::new(vec![vec![1, 64]]),
            Err(Error::InvalidLbpCode { step: 1, code: 64, .. })
        ));
    }

    #[test]
    fn single_channel_constant_code_is_one_binding() {
        let im = im();
        let w = SignalWindow::new(vec![vec![17; WINDOW_SAMPLES]]).unwrap();
        let h = encode_signal_window(&w, &im, TiePolicy::default()).unwrap();
        assert_eq!(h, im.get(&code_symbol(17)).bind(&im.get(&electrode_symbol(0))).unwrap());
    }

    #[test]
    fn windows_advance_by_hop() {
        let samples: Vec<f64> = (0..(1024 + 6)).map(|i| ((i * 7919) % 101) as f64).collect();
        let ws = signal_windows(&[samples.clone(), samples], WINDOW_SAMPLES, WINDOW_HOP).unwrap();
        // 1024 codes → windows starting at 0, 256, 512
        assert_eq!(ws.len(), 3);
        assert_eq!(ws[1].channels()[0][0], ws[0].channels()[0][WINDOW_HOP]);
        assert!(signal_windows(&[vec![0.0; 100]], WINDOW_SAMPLES, WINDOW_HOP).is_err());
        assert!(signal_windows(&[vec![0.0; 600], vec![0.0; 599]], WINDOW_SAMPLES, WINDOW_HOP).is_err());
    }

    #[test]
    fn encoder_rejects_wrong_channel_count() {
        let im = im();
        let enc = SignalEncoder::new(&im, 2, TiePolicy::default());
        let w = SignalWindow::new(vec![vec![1; 8]]).unwrap();
        assert!(enc.encode(&w).is_err());
    }

    #[test]
    fn similar_windows_encode_closer_than_different_ones() {
        let im = im();
        let enc = SignalEncoder::new(&im, 2, TiePolicy::default());
        let a: Vec<u8> = (0..64).map(|i| (i % 8) as u8).collect();
        let mut b = a.clone();
        b[5] = 40;
        let c: Vec<u8> = (0..64).map(|i| (8 + i % 50) as u8).collect();
        let ha = enc.encode(&SignalWindow::new(vec![a.clone(), a.clone()]).unwrap()).unwrap();
        let hb = enc.encode(&SignalWindow::new(vec![b.clone(), b]).unwrap()).unwrap();
        let hc = enc.encode(&SignalWindow::new(vec![c.clone(), c]).unwrap()).unwrap();
        assert!(ha.hamming(&hb).unwrap().value < ha.hamming(&hc).unwrap().value);
    }
}
