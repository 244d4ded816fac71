//! Event catalogs: strictly increasing times on `[0, T]` with optional
//! magnitudes and passive spatial coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventCatalog {
    times: Vec<f64>,
    marks: Option<Vec<f64>>,
    coords: Option<Vec<(f64, f64)>>,
    window_end: f64,
}

impl EventCatalog {
    /// Builds a catalog of bare times observed on `[0, window_end]`.
    pub fn new(times: Vec<f64>, window_end: f64) -> Result<Self> {
        Self::with_marks(times, None, None, window_end)
    }

    pub fn with_marks(
        times: Vec<f64>,
        marks: Option<Vec<f64>>,
        coords: Option<Vec<(f64, f64)>>,
        window_end: f64,
    ) -> Result<Self> {
        if !(window_end.is_finite() && window_end > 0.0) {
            return Err(Error::InvalidCatalog(format!(
                "window end must be finite and positive, got {window_end}"
            )));
        }
        for (i, &t) in times.iter().enumerate() {
            if !t.is_finite() || t < 0.0 || t > window_end {
                return Err(Error::InvalidCatalog(format!(
                    "time {t} at index {i} outside [0, {window_end}]"
                )));
            }
        }
        if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::NonIncreasingTimes { index: i + 1 });
        }
        if let Some(m) = &marks {
            if m.len() != times.len() {
                return Err(Error::LengthMismatch {
                    expected: times.len(),
                    got: m.len(),
                });
            }
        }
        if let Some(c) = &coords {
            if c.len() != times.len() {
                return Err(Error::LengthMismatch {
                    expected: times.len(),
                    got: c.len(),
                });
            }
        }
        Ok(Self {
            times,
            marks,
            coords,
            window_end,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn marks(&self) -> Option<&[f64]> {
        self.marks.as_deref()
    }

    pub fn coords(&self) -> Option<&[(f64, f64)]> {
        self.coords.as_deref()
    }

    /// Length of the observation window, `T`.
    pub fn window_end(&self) -> f64 {
        self.window_end
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Average event rate `n / T`.
    pub fn mean_rate(&self) -> f64 {
        self.times.len() as f64 / self.window_end
    }

    /// Events strictly before `t`, preserving marks and coordinates.
    pub fn truncated_before(&self, t: f64) -> Self {
        let k = self.times.partition_point(|&s| s < t);
        Self {
            times: self.times[..k].to_vec(),
            marks: self.marks.as_ref().map(|m| m[..k].to_vec()),
            coords: self.coords.as_ref().map(|c| c[..k].to_vec()),
            window_end: self.window_end,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ties_and_out_of_window() {
        assert!(matches!(
            EventCatalog::new(vec![1.0, 1.0], 5.0),
            Err(Error::NonIncreasingTimes { index: 1 })
        ));
        assert!(EventCatalog::new(vec![1.0, 6.0], 5.0).is_err());
        assert!(EventCatalog::new(vec![-0.1], 5.0).is_err());
        assert!(EventCatalog::new(vec![], 0.0).is_err());
    }

    #[test]
    fn mark_length_checked() {
        let r = EventCatalog::with_marks(vec![1.0, 2.0], Some(vec![3.0]), None, 5.0);
        assert!(matches!(r, Err(Error::LengthMismatch { expected: 2, got: 1 })));
    }

    #[test]
    fn empty_catalog_is_valid() {
        let c = EventCatalog::new(vec![], 10.0).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.mean_rate(), 0.0);
    }

    #[test]
    fn truncation_keeps_marks_aligned() {
        let c = EventCatalog::with_marks(vec![1.0, 2.0, 3.0], Some(vec![4.0, 5.0, 6.0]), None, 5.0)
            .unwrap();
        let t = c.truncated_before(2.5);
        assert_eq!(t.times(), &[1.0, 2.0]);
        assert_eq!(t.marks().unwrap(), &[4.0, 5.0]);
    }
}
