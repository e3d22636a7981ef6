use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Maximum edit cost allowed for a token, as a step function of its length.
///
/// Bands are `(max_len, allowed)` pairs with strictly increasing `max_len`
/// and non-decreasing `allowed`. Lengths past the last band use the last
/// band's allowance, so the schedule is total.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ThresholdSchedule {
    bands: Vec<(usize, f64)>,
}

impl Default for ThresholdSchedule {
    /// `<=3 -> 0`, `4..=6 -> 1`, `7..=10 -> 2`, `>=11 -> 3`.
    fn default() -> Self {
        ThresholdSchedule {
            bands: vec![(3, 0.0), (6, 1.0), (10, 2.0), (usize::MAX, 3.0)],
        }
    }
}

impl ThresholdSchedule {
    pub fn new(bands: Vec<(usize, f64)>) -> Result<Self> {
        if bands.is_empty() {
            return Err(Error::Schedule("no bands".into()));
        }
        for (len, allowed) in &bands {
            if *len == 0 {
                return Err(Error::Schedule("band length must be at least 1".into()));
            }
            if !allowed.is_finite() || *allowed < 0.0 {
                return Err(Error::Schedule(format!("bad allowance {allowed}")));
            }
        }
        for w in bands.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Schedule("band lengths must increase".into()));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::Schedule("allowances must not decrease".into()));
            }
        }
        Ok(ThresholdSchedule { bands })
    }

    /// Same allowance for every length.
    pub fn constant(allowed: f64) -> Result<Self> {
        Self::new(vec![(usize::MAX, allowed)])
    }

    pub fn bands(&self) -> &[(usize, f64)] {
        &self.bands
    }

    /// Allowed edit cost for a token of length `len`.
    pub fn allowed(&self, len: usize) -> f64 {
        self.bands
            .iter()
            .find(|(max, _)| len <= *max)
            .unwrap_or(self.bands.last().expect("schedule has bands"))
            .1
    }

    /// `allowed(len)` for `len` in `0..=max_len`.
    pub(crate) fn table(&self, max_len: usize) -> Vec<f64> {
        (0..=max_len).map(|l| self.allowed(l)).collect()
    }
}

impl FromStr for ThresholdSchedule {
    type Err = Error;

    /// Parses `maxlen:allowed` pairs separated by commas, e.g.
    /// `3:0,6:1,10:2,999:3`. `*` as the last length means unbounded.
    fn from_str(s: &str) -> Result<Self> {
        let bands = s
            .split(',')
            .map(|part| {
                let (len, allowed) = part
                    .trim()
                    .split_once(':')
                    .ok_or_else(|| Error::Schedule(format!("expected maxlen:dist, got {part:?}")))?;
                let len = match len.trim() {
                    "*" => usize::MAX,
                    l => l
                        .parse()
                        .map_err(|_| Error::Schedule(format!("bad length {l:?}")))?,
                };
                let allowed = allowed
                    .trim()
                    .parse()
                    .map_err(|_| Error::Schedule(format!("bad distance {allowed:?}")))?;
                Ok((len, allowed))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bands)
    }
}

impl fmt::Display for ThresholdSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (len, allowed)) in self.bands.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if *len == usize::MAX {
                write!(f, "*:{allowed}")?;
            } else {
                write!(f, "{len}:{allowed}")?;
            }
        }
        Ok(())
    }
}

impl TryFrom<String> for ThresholdSchedule {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ThresholdSchedule> for String {
    fn from(s: ThresholdSchedule) -> String {
        s.to_string()
    }
}
