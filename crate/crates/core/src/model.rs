//! Channel instances, input distributions and tagged bound values.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::compensated_sum;

/// Tolerance on `|Σ p_j - 1|` for a valid input distribution.
pub const DISTRIBUTION_SUM_TOL: f64 = 1e-12;

/// A finite instance of the vector adder channel: `q` frequencies shared by
/// `s` users, each user hitting exactly one frequency per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ChannelConfig {
    q: usize,
    s: usize,
}

impl ChannelConfig {
    pub fn new(q: usize, s: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidConfig("frequency count Q must be at least 1".into()));
        }
        if s == 0 {
            return Err(Error::InvalidConfig("user count S must be at least 1".into()));
        }
        Ok(ChannelConfig { q, s })
    }

    /// Frequency (subchannel) count Q.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Active user count S.
    pub fn s(&self) -> usize {
        self.s
    }

    /// Load S / Q.
    pub fn gamma(&self) -> f64 {
        self.s as f64 / self.q as f64
    }
}

/// Validates an asymptotic load.
pub fn check_gamma(gamma: f64) -> Result<f64> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(gamma)
    } else {
        Err(Error::InvalidGamma(gamma))
    }
}

/// Common per-user input law over the Q frequencies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputDistribution {
    p: Vec<f64>,
}

impl InputDistribution {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidDistribution("distribution must have at least one entry".into()));
        }
        for (j, &pj) in p.iter().enumerate() {
            if !pj.is_finite() {
                return Err(Error::InvalidDistribution(format!(
                    "entry {} is not a finite number ({pj})",
                    j + 1
                )));
            }
            if pj < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "entry {} is negative ({pj}); every p_j must be >= 0",
                    j + 1
                )));
            }
        }
        let total = compensated_sum(p.iter().copied());
        if (total - 1.0).abs() > DISTRIBUTION_SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, expected 1 within {DISTRIBUTION_SUM_TOL:e}"
            )));
        }
        Ok(InputDistribution { p })
    }

    pub fn uniform(q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidDistribution("distribution must have at least one entry".into()));
        }
        Ok(InputDistribution { p: vec![1.0 / q as f64; q] })
    }

    /// All mass on frequency `j` (zero-based).
    pub fn point_mass(q: usize, j: usize) -> Result<Self> {
        if j >= q {
            return Err(Error::InvalidDistribution(format!("point mass index {j} out of range for Q={q}")));
        }
        let mut p = vec![0.0; q];
        p[j] = 1.0;
        Ok(InputDistribution { p })
    }

    /// Parses the plain-text format: one probability per line. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut p = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: f64 = line.parse().map_err(|_| {
                Error::InvalidDistribution(format!("line {}: '{line}' is not a number", lineno + 1))
            })?;
            p.push(v);
        }
        Self::new(p)
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Checks that this distribution has one entry per frequency of `cfg`.
    pub fn check_against(&self, cfg: &ChannelConfig) -> Result<()> {
        if self.p.len() != cfg.q() {
            return Err(Error::InvalidDistribution(format!(
                "length {} does not match Q = {}",
                self.p.len(),
                cfg.q()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Coordinated,
    Uncoordinated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Total bits per channel use of a (Q, S) instance.
    Finite,
    /// Bits per subchannel in the limit Q → ∞ with S = γQ.
    Asymptotic,
}

/// A capacity bound in bits, tagged with what it bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundValue {
    pub bits: f64,
    pub side: Side,
    pub mode: Mode,
    pub regime: Regime,
}

impl BoundValue {
    pub(crate) fn new(bits: f64, side: Side, mode: Mode, regime: Regime) -> Self {
        // Rounding can push a true zero a few ulps negative.
        let bits = if bits < 0.0 && bits > -1e-12 { 0.0 } else { bits };
        BoundValue { bits, side, mode, regime }
    }
}
