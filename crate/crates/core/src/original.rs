//! The original single-player games: game A is a plain coin flip, game B
//! picks its coin by the player's capital modulo three. Solved exactly on
//! the 3-state residue chain.
//!
//! These games reproduce the classic paradox (two fair games combine into a
//! winning one) but, unlike the collective games, admit no current inversion
//! when the mixing probability is varied; `original_no_inversion_check`
//! verifies that on a gamma grid.

use crate::error::{ChainError, ScanError};
use crate::numeric::Dd;
use crate::params::check_probability;

/// Tolerance below which a slightly negative current still counts as
/// "no inversion" (numerical noise floor).
const NO_INVERSION_TOL: f64 = 1e-12;

/// Parameters of the original games.
///
/// The canonical parameterization derives everything from a bias `epsilon`:
/// `p_a = 1/2 - eps`, `p_b = [1/10 - eps, 3/4 - eps, 3/4 - eps]`, where
/// `p_b[c]` applies when the capital is congruent to `c` modulo 3. At
/// `epsilon = 0` both games are exactly fair; any positive bias makes both
/// losing. Arbitrary probabilities can be supplied with
/// [`OriginalParams::with_probs`].
#[derive(Debug, Clone, PartialEq)]
pub struct OriginalParams {
    epsilon: f64,
    gamma: f64,
    p_a: f64,
    p_b: [f64; 3],
}

impl OriginalParams {
    /// Canonical parameterization from the bias `epsilon`.
    pub fn new(epsilon: f64, gamma: f64) -> Result<Self, ChainError> {
        check_probability("gamma", gamma)?;
        let p_a = 0.5 - epsilon;
        let p_b = [0.1 - epsilon, 0.75 - epsilon, 0.75 - epsilon];
        check_probability("p_a", p_a)?;
        check_probability("p_b1", p_b[0])?;
        check_probability("p_b2", p_b[1])?;
        check_probability("p_b3", p_b[2])?;
        Ok(OriginalParams {
            epsilon,
            gamma,
            p_a,
            p_b,
        })
    }

    /// Arbitrary probabilities instead of the epsilon-derived ones.
    pub fn with_probs(gamma: f64, p_a: f64, p_b: [f64; 3]) -> Result<Self, ChainError> {
        check_probability("gamma", gamma)?;
        check_probability("p_a", p_a)?;
        check_probability("p_b1", p_b[0])?;
        check_probability("p_b2", p_b[1])?;
        check_probability("p_b3", p_b[2])?;
        Ok(OriginalParams {
            epsilon: 0.0,
            gamma,
            p_a,
            p_b,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn p_a(&self) -> f64 {
        self.p_a
    }

    pub fn p_b(&self) -> [f64; 3] {
        self.p_b
    }

    /// Effective win probability in capital class `c` under the mixture.
    pub fn effective_win(&self, c: usize) -> f64 {
        self.gamma * self.p_a + (1.0 - self.gamma) * self.p_b[c]
    }
}

/// Stationary distribution over capital mod 3.
///
/// The residue chain moves +1 with probability `w_c` and -1 otherwise; the
/// cyclic balance equations have the unnormalized solution
///
/// ```text
/// u_0 = 1 - w_1 (1 - w_2)
/// u_1 = w_0 + (1 - w_0)(1 - w_2)
/// u_2 = w_0 w_1 + (1 - w_0)
/// ```
///
/// evaluated in double-double arithmetic so the returned components are
/// correctly rounded. A residue class with u = 0 is transient (possible only
/// for degenerate w in {0, 1}); such chains are refused.
pub fn original_stationary(params: &OriginalParams) -> Result<[f64; 3], ChainError> {
    let w0 = Dd::from_f64(params.effective_win(0));
    let w1 = Dd::from_f64(params.effective_win(1));
    let w2 = Dd::from_f64(params.effective_win(2));
    let one = Dd::ONE;

    let u0 = one.sub(w1.mul(one.sub(w2)));
    let u1 = w0.add(one.sub(w0).mul(one.sub(w2)));
    let u2 = w0.mul(w1).add(one.sub(w0));
    let z = u0.add(u1).add(u2);

    let pi = [
        u0.div(z).to_f64(),
        u1.div(z).to_f64(),
        u2.div(z).to_f64(),
    ];
    for (state, &p) in pi.iter().enumerate() {
        if p == 0.0 {
            return Err(ChainError::ReducibleCycle { state });
        }
    }
    Ok(pi)
}

/// Average gain per round, `J = 2 sum_c pi_c w_c - 1`.
pub fn original_current(params: &OriginalParams) -> Result<f64, ChainError> {
    let pi = original_stationary(params)?;
    let mean_pb: f64 = pi
        .iter()
        .zip(params.p_b.iter())
        .map(|(&p, &w)| p * w)
        .sum();
    // Factored through sum(pi) = 1, so the pure game A limit is exact.
    let p_win = params.gamma * params.p_a + (1.0 - params.gamma) * mean_pb;
    Ok(2.0 * p_win - 1.0)
}

/// Gamma sweep of the original games at fixed bias.
#[derive(Debug, Clone, PartialEq)]
pub struct NoInversionReport {
    /// (gamma, current) at every grid node.
    pub points: Vec<(f64, f64)>,
    /// Most negative current found.
    pub min_current: f64,
    /// True iff no current fell below -1e-12 anywhere on the grid.
    pub no_inversion: bool,
}

/// Sweeps gamma over `grid` nodes on [0, 1] and reports whether the current
/// ever turns negative (it must not for the fair parameterization: mixing
/// the original games can only help).
pub fn original_no_inversion_check(
    epsilon: f64,
    grid: usize,
) -> Result<NoInversionReport, ScanError> {
    if grid < 2 {
        return Err(ScanError::InvalidGrid(grid));
    }
    let mut points = Vec::with_capacity(grid);
    let mut min_current = f64::INFINITY;
    for k in 0..grid {
        let gamma = k as f64 / (grid - 1) as f64;
        let params =
            OriginalParams::new(epsilon, gamma).map_err(|source| ScanError::AtGamma {
                gamma,
                source,
            })?;
        let current =
            original_current(&params).map_err(|source| ScanError::AtGamma { gamma, source })?;
        min_current = min_current.min(current);
        points.push((gamma, current));
    }
    Ok(NoInversionReport {
        points,
        min_current,
        no_inversion: min_current >= -NO_INVERSION_TOL,
    })
}
