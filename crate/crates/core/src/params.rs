//! Game parameterization for the collective games.

use serde::{Deserialize, Serialize};

use crate::error::ChainError;

/// How the three winner-count bands of game B are delimited.
///
/// The band thresholds sit at N/3 and 2N/3. `RawFraction` compares the
/// winner count against the exact fractions (3i < N, 3i > 2N), so the middle
/// band shrinks to a single state when N = 3k+1. `NearestInteger` first
/// rounds both thresholds to the nearest integer, which widens the middle
/// band for those N. The two modes agree whenever N mod 3 != 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ThresholdMode {
    #[default]
    RawFraction,
    NearestInteger,
}

/// Which of the three game-B probabilities a state uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    /// Winner count above the upper threshold: p_B1.
    Upper,
    /// Winner count between the thresholds: p_B2.
    Middle,
    /// Winner count below the lower threshold: p_B3.
    Lower,
}

/// Full parameterization of the collective games.
///
/// N players each carry a winner/loser flag. Each round one player is
/// selected uniformly; with probability `gamma` they play game A (win with
/// probability `p_a`), otherwise game B, whose win probability is one of
/// `p_b = [p_B1, p_B2, p_B3]` selected by the current number of winners.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameParams {
    n_players: usize,
    p_a: f64,
    p_b: [f64; 3],
    gamma: f64,
    threshold_mode: ThresholdMode,
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<(), ChainError> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(ChainError::InvalidProbability { name, value })
    }
}

impl GameParams {
    /// Validating constructor with the default `RawFraction` threshold mode.
    ///
    /// `n_players` must be at least 2: with a single player the middle band
    /// of game B is degenerate.
    pub fn new(n_players: usize, p_a: f64, p_b: [f64; 3], gamma: f64) -> Result<Self, ChainError> {
        Self::with_mode(n_players, p_a, p_b, gamma, ThresholdMode::default())
    }

    /// Validating constructor with an explicit threshold mode.
    pub fn with_mode(
        n_players: usize,
        p_a: f64,
        p_b: [f64; 3],
        gamma: f64,
        threshold_mode: ThresholdMode,
    ) -> Result<Self, ChainError> {
        if n_players < 2 {
            return Err(ChainError::TooFewPlayers(n_players));
        }
        check_probability("p_a", p_a)?;
        check_probability("p_b1", p_b[0])?;
        check_probability("p_b2", p_b[1])?;
        check_probability("p_b3", p_b[2])?;
        check_probability("gamma", gamma)?;
        Ok(GameParams {
            n_players,
            p_a,
            p_b,
            gamma,
            threshold_mode,
        })
    }

    /// Same parameters with a different mixing probability.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self, ChainError> {
        check_probability("gamma", gamma)?;
        Ok(GameParams { gamma, ..*self })
    }

    /// Same parameters with a different middle-band probability p_B2.
    pub fn with_pb2(&self, p_b2: f64) -> Result<Self, ChainError> {
        check_probability("p_b2", p_b2)?;
        Ok(GameParams {
            p_b: [self.p_b[0], p_b2, self.p_b[2]],
            ..*self
        })
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    /// Number of collective states (winner counts 0..=N).
    pub fn n_states(&self) -> usize {
        self.n_players + 1
    }

    pub fn p_a(&self) -> f64 {
        self.p_a
    }

    /// The triple `[p_B1, p_B2, p_B3]`.
    pub fn p_b(&self) -> [f64; 3] {
        self.p_b
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn threshold_mode(&self) -> ThresholdMode {
        self.threshold_mode
    }

    /// Band of the state with `i` winners, per the active threshold mode.
    pub(crate) fn band(&self, i: usize) -> Band {
        let n = self.n_players as u64;
        let i = i as u64;
        match self.threshold_mode {
            ThresholdMode::RawFraction => {
                if 3 * i > 2 * n {
                    Band::Upper
                } else if 3 * i < n {
                    Band::Lower
                } else {
                    Band::Middle
                }
            }
            ThresholdMode::NearestInteger => {
                // N/3 and 2N/3 have fractional part 0, 1/3 or 2/3, so
                // half-way ties cannot occur.
                let lower = (n as f64 / 3.0).round() as u64;
                let upper = (2.0 * n as f64 / 3.0).round() as u64;
                if i > upper {
                    Band::Upper
                } else if i < lower {
                    Band::Lower
                } else {
                    Band::Middle
                }
            }
        }
    }
}
