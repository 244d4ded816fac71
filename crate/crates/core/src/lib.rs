//! Nonparametric per-event productivity estimation for Hawkes processes.
//!
//! The crate covers the full loop: simulate variable-productivity and ETAS
//! processes ([`simulate`]), estimate each event's productivity by the
//! closed-form maximum-likelihood solve or a windowed count ([`estimate`]),
//! stabilize the noisy estimates by truncation, smoothing and rescaling
//! ([`stabilize`]), and check the fit with super-thinned residuals
//! ([`diagnostics`]). [`experiments`] scripts the simulation studies and
//! [`io`] reads catalogs and count files.

pub mod catalog;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod estimate;
pub mod experiments;
pub mod io;
pub mod kernel;
pub mod model;
pub mod optim;
pub mod simulate;
pub mod stabilize;
pub mod stats;

pub use catalog::EventCatalog;
pub use error::{Error, Result};
pub use kernel::TriggeringKernel;
pub use model::{conditional_intensity, HawkesParams, Intensity, PipelineFlags, ProductivityEstimate};
