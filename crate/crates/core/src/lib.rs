//! Exact analysis of collective Parrondo games.
//!
//! N players each hold a winner/loser flag; one plays per round, choosing
//! game A (a plain coin flip) with probability gamma and otherwise game B,
//! whose win probability depends on how many players are currently flagged
//! as winners. The winner count is a birth-death Markov chain, so the
//! stationary state and the per-round current J = 2 p_win - 1 are exact.
//!
//! Besides the classic paradox (two individually fair games mixing into a
//! winning one), these games can invert the sign of J as the mixing
//! probability varies. The crate provides:
//!
//! - [`chain`]: the exact chain solver (transition rows, time evolution,
//!   product-form stationary distribution, current);
//! - [`fairness`]: the p_B2 making game B fair, in closed form for
//!   N = 2..=5 and numerically for any N;
//! - [`scan`]: gamma sweeps with inversion roots, region maps, fair-surface
//!   curves, fixed-gamma inversion curves and per-site diagnostics;
//! - [`original`]: the classic single-player capital-mod-3 games, which
//!   show the paradox but admit no inversion;
//! - [`montecarlo`]: a seeded, reproducible game simulator used as an
//!   independent cross-check of the exact results.
//!
//! Everything is a pure function of its inputs and safe to call from many
//! threads.

pub mod chain;
pub mod error;
pub mod fairness;
pub mod montecarlo;
pub mod original;
pub mod params;
pub mod scan;

mod numeric;

pub use chain::{Distribution, TransitionRow};
pub use error::{ChainError, FairnessError, ScanError, SimConfigError};
pub use params::{GameParams, ThresholdMode};
