//! The winner-count Markov chain: transition structure, exact stationary
//! solution and per-round current.
//!
//! With N players the collective state is the number of winners i in 0..=N.
//! One player plays per round, so i moves by at most one step: the chain is
//! a birth-death chain on 0..=N and its stationary distribution has the
//! product form
//!
//! ```text
//! P_i  ∝  p_0 p_1 ... p_{i-1} · q_{i+1} q_{i+2} ... q_N
//! ```
//!
//! where p_i / q_i are the forward / backward transition probabilities out
//! of state i. Products are accumulated with power-of-two rescaling so the
//! solve does not underflow even for thousands of players.

use serde::{Deserialize, Serialize};

use crate::error::{BlockedDirection, ChainError};
use crate::params::{Band, GameParams};

/// Componentwise tolerance on |sum - 1| for a normalized distribution.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Forward / stay / backward transition probabilities out of one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionRow {
    /// Probability of i -> i+1 (the selected loser wins).
    pub forward: f64,
    /// Probability of staying in state i.
    pub stay: f64,
    /// Probability of i -> i-1 (the selected winner loses).
    pub backward: f64,
}

/// A probability vector over the N+1 winner-count states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates nonnegativity and normalization (tolerance 1e-12).
    pub fn new(probs: Vec<f64>) -> Result<Self, ChainError> {
        for (index, &value) in probs.iter().enumerate() {
            if !(value >= 0.0) {
                return Err(ChainError::NegativeEntry { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(ChainError::NotNormalized { sum });
        }
        Ok(Distribution { probs })
    }

    /// Point mass on state `i` of a chain with `n_states` states.
    pub fn point(n_states: usize, i: usize) -> Result<Self, ChainError> {
        if i >= n_states {
            return Err(ChainError::StateOutOfRange {
                index: i,
                max: n_states.saturating_sub(1),
            });
        }
        let mut probs = vec![0.0; n_states];
        probs[i] = 1.0;
        Ok(Distribution { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// L1 distance to another distribution of the same length.
    pub fn l1_distance(&self, other: &Distribution) -> f64 {
        self.probs
            .iter()
            .zip(other.probs.iter())
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

impl std::ops::Index<usize> for Distribution {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.probs[i]
    }
}

/// A nonnegative product kept as mantissa * 2^exp2 to dodge underflow.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    mantissa: f64,
    exp2: i64,
}

const RESCALE_BITS: i64 = 500;

impl Scaled {
    const ONE: Scaled = Scaled {
        mantissa: 1.0,
        exp2: 0,
    };

    /// Multiply by a factor in (0, 1]; rescaling by 2^500 is exact.
    fn mul(self, factor: f64) -> Scaled {
        let mut mantissa = self.mantissa * factor;
        let mut exp2 = self.exp2;
        if mantissa != 0.0 && mantissa < 2f64.powi(-(RESCALE_BITS as i32)) {
            mantissa *= 2f64.powi(RESCALE_BITS as i32);
            exp2 -= RESCALE_BITS;
        }
        Scaled { mantissa, exp2 }
    }

    fn product_with(self, other: Scaled) -> Scaled {
        Scaled {
            mantissa: self.mantissa * other.mantissa,
            exp2: self.exp2 + other.exp2,
        }
    }

    /// Value as f64 after shifting the exponent by `-base`.
    fn to_f64_shifted(self, base: i64) -> f64 {
        let shift = self.exp2 - base;
        if shift < -1100 {
            return 0.0;
        }
        self.mantissa * 2f64.powi(shift as i32)
    }
}

impl GameParams {
    /// Win probability of game B in the state with `i` winners.
    ///
    /// Returns p_B1 above the upper threshold, p_B3 below the lower one and
    /// p_B2 in between; see [`crate::ThresholdMode`] for how the thresholds
    /// are interpreted.
    pub fn win_prob_b(&self, i: usize) -> Result<f64, ChainError> {
        self.check_state(i)?;
        let [pb1, pb2, pb3] = self.p_b();
        Ok(match self.band(i) {
            Band::Upper => pb1,
            Band::Middle => pb2,
            Band::Lower => pb3,
        })
    }

    /// Mixed win probability gamma*p_A + (1-gamma)*p_B_i for state `i`.
    pub fn win_prob_mixed(&self, i: usize) -> Result<f64, ChainError> {
        let pb = self.win_prob_b(i)?;
        Ok(self.gamma() * self.p_a() + (1.0 - self.gamma()) * pb)
    }

    /// Transition probabilities out of the state with `i` winners:
    ///
    /// ```text
    /// forward  = (N-i)/N * [gamma p_A + (1-gamma) p_B_i]
    /// backward =    i/N  * [gamma (1-p_A) + (1-gamma)(1-p_B_i)]
    /// stay     = 1 - forward - backward
    /// ```
    pub fn transition_row(&self, i: usize) -> Result<TransitionRow, ChainError> {
        self.check_state(i)?;
        let n = self.n_players() as f64;
        let i_f = i as f64;
        let pb = self.win_prob_b(i)?;
        let gamma = self.gamma();
        let win = gamma * self.p_a() + (1.0 - gamma) * pb;
        let lose = gamma * (1.0 - self.p_a()) + (1.0 - gamma) * (1.0 - pb);
        let forward = (n - i_f) / n * win;
        let backward = i_f / n * lose;
        Ok(TransitionRow {
            forward,
            stay: 1.0 - forward - backward,
            backward,
        })
    }

    /// All N+1 transition rows.
    pub fn transition_rows(&self) -> Vec<TransitionRow> {
        (0..=self.n_players())
            .map(|i| self.transition_row(i).expect("state index in range"))
            .collect()
    }

    /// One round of the master equation:
    /// `P_i(t+1) = p_{i-1} P_{i-1}(t) + r_i P_i(t) + q_{i+1} P_{i+1}(t)`.
    ///
    /// The input must be normalized; the output stays normalized because
    /// every row sums to one.
    pub fn evolve(&self, dist: &Distribution) -> Result<Distribution, ChainError> {
        let n_states = self.n_states();
        if dist.len() != n_states {
            return Err(ChainError::DimensionMismatch {
                len: dist.len(),
                expected: n_states,
            });
        }
        let sum: f64 = dist.probs().iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(ChainError::NotNormalized { sum });
        }
        let rows = self.transition_rows();
        let p = dist.probs();
        let mut next = vec![0.0; n_states];
        for (i, slot) in next.iter_mut().enumerate() {
            let mut acc = rows[i].stay * p[i];
            if i > 0 {
                acc += rows[i - 1].forward * p[i - 1];
            }
            if i + 1 < n_states {
                acc += rows[i + 1].backward * p[i + 1];
            }
            *slot = acc;
        }
        Distribution::new(next)
    }

    /// Exact stationary distribution via the birth-death product form.
    ///
    /// Requires the chain to be irreducible on 0..=N: every interior forward
    /// and backward probability must be positive. Reducible chains are
    /// refused with the blocking state named, since the stationary state
    /// would not be unique.
    pub fn stationary(&self) -> Result<Distribution, ChainError> {
        let n = self.n_players();
        let rows = self.transition_rows();
        for (i, row) in rows.iter().enumerate() {
            if i < n && row.forward <= 0.0 {
                return Err(ChainError::ReducibleChain {
                    state: i,
                    direction: BlockedDirection::Forward,
                });
            }
            if i > 0 && row.backward <= 0.0 {
                return Err(ChainError::ReducibleChain {
                    state: i,
                    direction: BlockedDirection::Backward,
                });
            }
        }

        // prefix[i] = product of forward probs 0..i, suffix[i] = product of
        // backward probs i+1..=N, both with exact power-of-two rescaling.
        let mut prefix = vec![Scaled::ONE; n + 1];
        for i in 1..=n {
            prefix[i] = prefix[i - 1].mul(rows[i - 1].forward);
        }
        let mut suffix = vec![Scaled::ONE; n + 1];
        for i in (0..n).rev() {
            suffix[i] = suffix[i + 1].mul(rows[i + 1].backward);
        }

        let weights: Vec<Scaled> = (0..=n).map(|i| prefix[i].product_with(suffix[i])).collect();
        let base = weights.iter().map(|w| w.exp2).max().expect("nonempty");
        let scaled: Vec<f64> = weights.iter().map(|w| w.to_f64_shifted(base)).collect();
        let total: f64 = scaled.iter().sum();
        Distribution::new(scaled.iter().map(|w| w / total).collect())
    }

    /// Average winning probability over the stationary states.
    ///
    /// Computed as `gamma p_A + (1-gamma) sum_i p_B_i P_i`, which uses the
    /// normalization of the stationary distribution; in particular the pure
    /// game A limit gives exactly p_A.
    pub fn p_win(&self) -> Result<f64, ChainError> {
        let st = self.stationary()?;
        self.p_win_given(&st)
    }

    /// As [`GameParams::p_win`] but reusing an already-computed stationary
    /// distribution.
    pub fn p_win_given(&self, stationary: &Distribution) -> Result<f64, ChainError> {
        if stationary.len() != self.n_states() {
            return Err(ChainError::DimensionMismatch {
                len: stationary.len(),
                expected: self.n_states(),
            });
        }
        let mean_pb: f64 = stationary
            .probs()
            .iter()
            .enumerate()
            .map(|(i, &p)| self.win_prob_b(i).expect("state in range") * p)
            .sum();
        Ok(self.gamma() * self.p_a() + (1.0 - self.gamma()) * mean_pb)
    }

    /// Average capital gain per played round, `J = 2 p_win - 1`.
    ///
    /// J > 0 is a winning game, J < 0 losing, J = 0 fair.
    pub fn current(&self) -> Result<f64, ChainError> {
        Ok(2.0 * self.p_win()? - 1.0)
    }

    fn check_state(&self, i: usize) -> Result<(), ChainError> {
        if i > self.n_players() {
            Err(ChainError::StateOutOfRange {
                index: i,
                max: self.n_players(),
            })
        } else {
            Ok(())
        }
    }
}
