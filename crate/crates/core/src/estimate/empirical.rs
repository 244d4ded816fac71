use crate::catalog::EventCatalog;
use crate::error::{Error, Result};
use crate::model::ProductivityEstimate;

/// Default counting window, in days.
pub const DEFAULT_DELTA: f64 = 7.0;

/// Windowed estimator: the number of events in `(τᵢ, τᵢ + Δ)` minus `Δμ`.
///
/// Windows that run past the end of the catalog are not edge-corrected.
pub fn empirical_productivities(
    catalog: &EventCatalog,
    delta: f64,
    mu: f64,
) -> Result<ProductivityEstimate> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "window must be positive, got {delta}"
        )));
    }
    let t = catalog.times();
    let offset = delta * mu;
    let mut hi = 0;
    let values = t
        .iter()
        .enumerate()
        .map(|(i, &ti)| {
            hi = hi.max(i + 1);
            while hi < t.len() && t[hi] < ti + delta {
                hi += 1;
            }
            (hi - i - 1) as f64 - offset
        })
        .collect();
    Ok(ProductivityEstimate::raw(values))
}
