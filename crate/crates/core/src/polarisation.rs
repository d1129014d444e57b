//! Comparison of dimension estimates across time windows.
//!
//! A strict decrease of the embedding dimension between consecutive windows
//! is read as polarisation. Entropy deltas are carried along as supporting
//! evidence only; they never decide the verdict.

use serde::{Deserialize, Serialize};

use crate::dimension::DimensionEstimate;
use crate::entropy::EntropyReport;
use crate::error::{Error, Result};

/// Per-window summary fed to [`compare_windows`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowMetrics {
    pub label: String,
    pub d_hat: usize,
    #[serde(default)]
    pub entropy: Option<f64>,
    pub k_used: usize,
}

impl WindowMetrics {
    pub fn from_estimates(
        label: impl Into<String>,
        dim: &DimensionEstimate,
        entropy: &EntropyReport,
    ) -> Result<Self> {
        let label = label.into();
        if dim.k_used != entropy.k_used {
            return Err(Error::NotComparable(format!(
                "window `{label}`: dimension used K={} but entropy used K={}",
                dim.k_used, entropy.k_used
            )));
        }
        Ok(WindowMetrics {
            label,
            d_hat: dim.d_hat,
            entropy: Some(entropy.entropy),
            k_used: dim.k_used,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Polarising,
    Stable,
    Depolarising,
}

impl Trend {
    fn of(delta_d: i64) -> Self {
        match delta_d.signum() {
            -1 => Trend::Polarising,
            0 => Trend::Stable,
            _ => Trend::Depolarising,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowDelta {
    pub from: String,
    pub to: String,
    pub delta_d: i64,
    pub delta_entropy: Option<f64>,
    pub trend: Trend,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarisationVerdict {
    /// Trend of the net change from the first to the last window.
    pub verdict: Trend,
    pub net_delta_d: i64,
    /// Whether every consecutive step moves the same way (or not at all).
    pub monotone: bool,
    pub k_used: usize,
    pub steps: Vec<WindowDelta>,
}

/// Compares time-ordered windows pairwise.
pub fn compare_windows(windows: &[WindowMetrics]) -> Result<PolarisationVerdict> {
    if windows.len() < 2 {
        return Err(Error::param(
            "windows",
            format!("need at least 2 windows, got {}", windows.len()),
        ));
    }
    let k_used = windows[0].k_used;
    if let Some(w) = windows.iter().find(|w| w.k_used != k_used) {
        return Err(Error::NotComparable(format!(
            "window `{}` used K={} but `{}` used K={k_used}",
            w.label, w.k_used, windows[0].label
        )));
    }
    let steps: Vec<WindowDelta> = windows
        .windows(2)
        .map(|pair| {
            let delta_d = pair[1].d_hat as i64 - pair[0].d_hat as i64;
            WindowDelta {
                from: pair[0].label.clone(),
                to: pair[1].label.clone(),
                delta_d,
                delta_entropy: pair[0].entropy.zip(pair[1].entropy).map(|(a, b)| b - a),
                trend: Trend::of(delta_d),
            }
        })
        .collect();
    let net_delta_d = windows.last().unwrap().d_hat as i64 - windows[0].d_hat as i64;
    let monotone = steps.iter().all(|s| s.delta_d <= 0) || steps.iter().all(|s| s.delta_d >= 0);
    Ok(PolarisationVerdict {
        verdict: Trend::of(net_delta_d),
        net_delta_d,
        monotone,
        k_used,
        steps,
    })
}
