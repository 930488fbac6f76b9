//! Capacity bounds for the Q-frequency, S-user vector adder channel.
//!
//! Each of S users puts a single unit on one of Q frequencies and the receiver
//! sees the per-frequency counts. The crate computes the finite and
//! asymptotic (Q → ∞, S = γQ) bounds for coordinated and uncoordinated
//! transmission, and checks them three ways: closed-form reductions, exact
//! enumeration of small instances, and seeded Monte Carlo.
//!
//! ```
//! use adder_capacity::{coordinated, uncoordinated, ChannelConfig, SeriesControl};
//!
//! let cfg = ChannelConfig::new(2, 2).unwrap();
//! assert!((coordinated::coord_lower_finite(&cfg).bits - 1.5).abs() < 1e-12);
//!
//! let star = uncoordinated::find_gamma_star(1e-6, &SeriesControl::default()).unwrap();
//! assert!((star.gamma_star - 1.3382).abs() < 1e-3);
//! ```

pub mod cli;
pub mod coordinated;
pub mod error;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod simulator;
pub mod uncoordinated;
pub mod verify;

pub use error::{Error, Result};
pub use model::{BoundValue, ChannelConfig, InputDistribution, Mode, Regime, Side};
pub use numerics::SeriesControl;
