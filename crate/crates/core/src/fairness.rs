//! Fairness conditions for game B: the p_B2 that makes the game-B-only
//! current vanish, via closed forms for N = 2..=5 and a bracketing numeric
//! solver for arbitrary N.

use crate::error::{ChainError, FairnessError};
use crate::numeric::{bisect, Bisection};
use crate::params::{check_probability, GameParams};

/// Iteration cap for the bisection refinement.
const BISECT_MAX_ITER: usize = 200;

/// Number of nodes of the coarse p_B2 grid used to bracket sign changes.
const BRACKET_GRID: usize = 101;

/// Inputs of a fairness solve: find p_B2 with |J_B| below `tolerance` given
/// N and the outer probabilities (p_B1, p_B3).
#[derive(Debug, Clone, PartialEq)]
pub struct FairnessQuery {
    n_players: usize,
    p_b1: f64,
    p_b3: f64,
    tolerance: f64,
}

impl FairnessQuery {
    /// Default tolerance 1e-12 on |J|.
    pub fn new(n_players: usize, p_b1: f64, p_b3: f64) -> Result<Self, ChainError> {
        if n_players < 2 {
            return Err(ChainError::TooFewPlayers(n_players));
        }
        check_probability("p_b1", p_b1)?;
        check_probability("p_b3", p_b3)?;
        Ok(FairnessQuery {
            n_players,
            p_b1,
            p_b3,
            tolerance: 1e-12,
        })
    }

    pub fn with_tolerance(self, tolerance: f64) -> Result<Self, ChainError> {
        if !(tolerance > 0.0) || !tolerance.is_finite() {
            return Err(ChainError::InvalidTolerance(tolerance));
        }
        Ok(FairnessQuery { tolerance, ..self })
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn p_b1(&self) -> f64 {
        self.p_b1
    }

    pub fn p_b3(&self) -> f64 {
        self.p_b3
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Game parameters playing B only (gamma = 0) with the candidate p_B2.
    fn game_b(&self, p_b2: f64) -> Result<GameParams, ChainError> {
        GameParams::new(self.n_players, 0.5, [self.p_b1, p_b2, self.p_b3], 0.0)
    }

    /// Current of game B alone at the candidate p_B2.
    fn current_b(&self, p_b2: f64) -> Result<f64, ChainError> {
        self.game_b(p_b2)?.current()
    }
}

/// Closed-form fair p_B2 for N in 2..=5.
///
/// The N = 3 expression is indeterminate (0/0) on the line p_B1 + p_B3 = 1;
/// its limit there is 1/2, the mirror-symmetric fair value, which is what we
/// return. Other vanishing denominators are reported as degenerate rather
/// than extrapolated. A finite result outside [0, 1] means no fair p_B2
/// exists in range for that N.
pub fn fair_pb2_closed(query: &FairnessQuery) -> Result<f64, FairnessError> {
    let p1 = query.p_b1;
    let p3 = query.p_b3;
    let value = match query.n_players {
        2 => {
            let den = p1 - p3 - 1.0;
            if den.abs() < 1e-12 {
                return Err(FairnessError::ClosedFormDegenerate);
            }
            (p1 - 1.0) / den
        }
        3 => {
            let den = p1 + p3 - 1.0;
            if den.abs() < 1e-9 {
                // 0/0: the limit along the mirror line is 1/2.
                return Ok(0.5);
            }
            let radicand = (p1 - 2.0) * (p1 - 1.0) * p3 * (p3 + 1.0);
            ((p1 - 1.0) * (p3 + 1.0) + radicand.sqrt()) / den
        }
        4 => {
            let den = 1.0 + p3 + (p1 - 2.0) * (p1 + p1 * p3 - p3 * p3);
            if den.abs() < 1e-12 {
                return Err(FairnessError::ClosedFormDegenerate);
            }
            (p1 - 1.0) * (p1 - 1.0) * (p3 + 1.0) / den
        }
        5 => {
            if (p1 - 1.0).abs() < 1e-12 {
                return Err(FairnessError::ClosedFormDegenerate);
            }
            let ratio = (5.0 + 2.0 * p1 * (p1 - 3.0)) / (1.0 + 2.0 * p3 * (1.0 + p3));
            let bracket = 1.0 - p3 / (p1 - 1.0) * ratio.sqrt();
            if bracket.abs() < 1e-12 {
                return Err(FairnessError::ClosedFormDegenerate);
            }
            bracket.recip()
        }
        n => return Err(FairnessError::UnsupportedPlayerCount(n)),
    };
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(FairnessError::ClosedFormOutOfRange { value })
    }
}

/// All p_B2 values in [0, 1] where the game-B current crosses zero, in
/// ascending order.
///
/// The current is evaluated on a coarse grid; each sign change between
/// consecutive solvable nodes is refined by bisection until |J| falls below
/// the query tolerance. Grid nodes where the chain is reducible (possible at
/// p_B2 = 0 or 1) are skipped. Callers that need a single value take the
/// first root.
pub fn fair_pb2_numeric(query: &FairnessQuery) -> Result<Vec<f64>, FairnessError> {
    let tol = query.tolerance;
    let mut nodes: Vec<(f64, f64)> = Vec::with_capacity(BRACKET_GRID);
    let mut last_err: Option<ChainError> = None;
    for k in 0..BRACKET_GRID {
        let p_b2 = k as f64 / (BRACKET_GRID - 1) as f64;
        match query.current_b(p_b2) {
            Ok(current) => nodes.push((p_b2, current)),
            Err(e) => last_err = Some(e),
        }
    }
    let Some(&(lo_pb2, lo_current)) = nodes.first() else {
        return Err(FairnessError::NoValidEvaluations(
            last_err.expect("empty grid implies at least one failure"),
        ));
    };

    let mut roots = Vec::new();
    // Nodes already below tolerance are roots; strict sign changes between
    // the remaining nodes are bracketed and refined. Recording a node root
    // clears the bracket state so the same crossing is not found twice.
    let mut prev_strict: Option<(f64, f64)> = None;
    for &(x, j) in &nodes {
        if j.abs() < tol {
            roots.push(x);
            prev_strict = None;
            continue;
        }
        if let Some((px, pj)) = prev_strict {
            if pj.signum() != j.signum() {
                match bisect(px, x, pj, |m| query.current_b(m), tol, BISECT_MAX_ITER)
                    .map_err(FairnessError::Chain)?
                {
                    Bisection::Converged(root) => roots.push(root),
                    Bisection::Stalled { best_abs, .. } => {
                        return Err(FairnessError::NoConvergence {
                            tolerance: tol,
                            best: best_abs,
                        })
                    }
                }
            }
        }
        prev_strict = Some((x, j));
    }

    if roots.is_empty() {
        let &(hi_pb2, hi_current) = nodes.last().expect("nonempty");
        return Err(FairnessError::NoSignChange {
            lo_pb2,
            lo_current,
            hi_pb2,
            hi_current,
        });
    }
    roots.sort_by(|a, b| a.partial_cmp(b).expect("roots are finite"));
    Ok(roots)
}

/// Whether |J| < tol for the given parameters.
pub fn is_fair(params: &GameParams, tol: f64) -> Result<bool, ChainError> {
    Ok(params.current()?.abs() < tol)
}
