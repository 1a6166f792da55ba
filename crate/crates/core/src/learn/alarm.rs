//! Alarm post-processing over a stream of per-window seizure decisions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_CONSECUTIVE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WindowState {
    Interictal,
    Ictal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlarmConfig {
    /// Consecutive ictal decisions required, `t_c`.
    pub consecutive: usize,
    /// The distance margin must exceed this, `t_r`.
    pub margin_threshold: f64,
}

impl Default for AlarmConfig {
    fn default() -> Self {
        Self {
            consecutive: DEFAULT_CONSECUTIVE,
            margin_threshold: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlarmEvent {
    /// 1-based position in the decision stream.
    pub step: usize,
    pub margin: f64,
}

/// Raises an alarm at the first step whose trailing `consecutive` decisions are
/// all ictal and whose margin exceeds the threshold; no further alarm until an
/// interictal decision is seen.
pub fn seizure_alarm_postprocess(states: &[WindowState], margins: &[f64], cfg: &AlarmConfig) -> Result<Vec<AlarmEvent>> {
    if states.len() != margins.len() {
        return Err(Error::InvalidParameter(format!(
            "{} decisions but {} margins",
            states.len(),
            margins.len()
        )));
    }
    if cfg.consecutive == 0 {
        return Err(Error::InvalidParameter("consecutive count must be positive".into()));
    }
    let mut alarms = Vec::new();
    let (mut run, mut armed) = (0usize, true);
    for (i, (&state, &margin)) in states.iter().zip(margins).enumerate() {
        if state == WindowState::Interictal {
            run = 0;
            armed = true;
            continue;
        }
        run += 1;
        if armed && run >= cfg.consecutive && margin > cfg.margin_threshold {
            alarms.push(AlarmEvent { step: i + 1, margin });
            armed = false;
        }
    }
    Ok(alarms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use WindowState::{Ictal, Interictal};

    fn run(states: &[WindowState], margin: f64) -> Vec<usize> {
        let margins = vec![margin; states.len()];
        seizure_alarm_postprocess(states, &margins, &AlarmConfig::default())
            .unwrap()
            .iter()
            .map(|a| a.step)
            .collect()
    }

    #[test]
    fn nine_ictal_windows_are_not_enough() {
        let mut s = vec![Ictal; 9];
        s.push(Interictal);
        assert!(run(&s, 1.0).is_empty());
    }

    #[test]
    fn ten_ictal_windows_alarm_at_the_tenth() {
        assert_eq!(run(&[Ictal; 10], 0.2), vec![10]);
        assert!(run(&[Ictal; 10], 0.0).is_empty());
    }

    #[test]
    fn refractory_until_an_interictal_window() {
        let mut s = vec![Ictal; 25];
        assert_eq!(run(&s, 1.0), vec![10]);
        s[15] = Interictal;
        assert_eq!(run(&s, 1.0), vec![10]);
        s.extend([Ictal; 10]);
        // run restarts at 17 and reaches ten at 26
        assert_eq!(run(&s, 1.0), vec![10, 26]);
    }

    #[test]
    fn late_margin_still_alarms_within_the_run() {
        let states = [Ictal; 12];
        let mut margins = [0.0; 12];
        margins[11] = 0.5;
        let a = seizure_alarm_postprocess(&states, &margins, &AlarmConfig::default()).unwrap();
        assert_eq!(a, vec![AlarmEvent { step: 12, margin: 0.5 }]);
        assert!(seizure_alarm_postprocess(&states, &margins[..3], &AlarmConfig::default()).is_err());
    }
}
