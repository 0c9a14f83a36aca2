//! Parameter-space exploration: gamma sweeps with inversion-root detection,
//! fair/winning/losing region maps, fair-surface curves and fixed-gamma
//! inversion curves.
//!
//! All scanners are deterministic for a given grid spec: grid nodes are
//! independent and may be evaluated in parallel, but results are assembled
//! in grid-index order.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::ScanError;
use crate::fairness::{fair_pb2_numeric, FairnessQuery};
use crate::numeric::{bisect, Bisection};
use crate::params::GameParams;

/// |J| below which a refined root is accepted, and below which a grid value
/// is treated as "zero" when looking for sign changes (so families with
/// identically vanishing current report no spurious crossings).
pub const ROOT_TOL: f64 = 1e-12;

/// Default gamma-sweep resolution.
pub const DEFAULT_SWEEP_GRID: usize = 1001;

/// Default nodes per axis for 2D/3D maps.
pub const DEFAULT_MAP_GRID: usize = 101;

/// Default |J| band classified as fair in region maps.
pub const DEFAULT_CLASS_TOL: f64 = 1e-3;

const BISECT_MAX_ITER: usize = 200;

/// Zero-level points closer than this to the line pb1 + pb3 = 1 belong to
/// the diagonal branch, which is emitted analytically.
const DIAGONAL_TOL: f64 = 1e-7;

/// A (gamma, current) sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub gamma: f64,
    pub current: f64,
}

/// Gamma sweep with refined interior zero crossings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    /// Samples in increasing gamma order, endpoints included.
    pub points: Vec<SweepPoint>,
    /// Interior gammas where the current crosses zero, |J| < 1e-12 each.
    pub roots: Vec<f64>,
}

/// Evaluates the current at gamma = k/(grid-1) and refines every interior
/// sign change by bisection. The endpoints gamma = 0, 1 are sampled but
/// never counted as inversion roots.
pub fn gamma_sweep(base: &GameParams, grid: usize) -> Result<SweepResult, ScanError> {
    if grid < 2 {
        return Err(ScanError::InvalidGrid(grid));
    }
    let step = (grid - 1) as f64;
    let evaluated: Vec<Result<SweepPoint, ScanError>> = (0..grid)
        .into_par_iter()
        .map(|k| {
            let gamma = k as f64 / step;
            let current = current_at_gamma(base, gamma)?;
            Ok(SweepPoint { gamma, current })
        })
        .collect();
    let mut points = Vec::with_capacity(grid);
    for point in evaluated {
        points.push(point?);
    }

    let mut roots = Vec::new();
    let mut prev_strict: Option<SweepPoint> = None;
    for point in &points[1..grid - 1] {
        if point.current.abs() < ROOT_TOL {
            continue;
        }
        if let Some(prev) = prev_strict {
            if prev.current.signum() != point.current.signum() {
                let refined = bisect(
                    prev.gamma,
                    point.gamma,
                    prev.current,
                    |g| current_at_gamma(base, g),
                    ROOT_TOL,
                    BISECT_MAX_ITER,
                )?;
                match refined {
                    Bisection::Converged(root) => roots.push(root),
                    Bisection::Stalled { best_abs, .. } => {
                        return Err(ScanError::NoConvergence {
                            tolerance: ROOT_TOL,
                            best: best_abs,
                        })
                    }
                }
            }
        }
        prev_strict = Some(*point);
    }
    Ok(SweepResult { points, roots })
}

fn current_at_gamma(base: &GameParams, gamma: f64) -> Result<f64, ScanError> {
    let params = base
        .with_gamma(gamma)
        .map_err(|source| ScanError::AtGamma { gamma, source })?;
    params
        .current()
        .map_err(|source| ScanError::AtGamma { gamma, source })
}

/// The strongest current between two consecutive zero crossings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SegmentExtremum {
    pub gamma_lo: f64,
    pub gamma_hi: f64,
    /// Grid gamma with the largest |J| in the segment.
    pub gamma: f64,
    pub current: f64,
}

/// Inversion roots plus the optimal gamma on each side of each root.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InversionReport {
    pub roots: Vec<f64>,
    /// One entry per segment delimited by the roots (roots.len() + 1 total).
    pub extrema: Vec<SegmentExtremum>,
}

/// Runs [`gamma_sweep`] on the default 1001-node grid and summarizes each
/// sign segment by its extremal current.
pub fn find_inversion(base: &GameParams) -> Result<InversionReport, ScanError> {
    let sweep = gamma_sweep(base, DEFAULT_SWEEP_GRID)?;
    let mut boundaries = vec![0.0];
    boundaries.extend_from_slice(&sweep.roots);
    boundaries.push(1.0);

    let mut extrema = Vec::with_capacity(boundaries.len() - 1);
    for pair in boundaries.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let best = sweep
            .points
            .iter()
            .filter(|p| p.gamma >= lo && p.gamma <= hi)
            .max_by(|a, b| {
                a.current
                    .abs()
                    .partial_cmp(&b.current.abs())
                    .expect("currents are finite")
            })
            .expect("every segment contains at least one grid point");
        extrema.push(SegmentExtremum {
            gamma_lo: lo,
            gamma_hi: hi,
            gamma: best.gamma,
            current: best.current,
        });
    }
    Ok(InversionReport {
        roots: sweep.roots,
        extrema,
    })
}

/// Classification of one parameter-space node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionLabel {
    Fair,
    Winning,
    Losing,
    /// No fair p_B2 exists at this (pb1, pb3), so the node has no game.
    Unsolvable,
}

impl std::fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RegionLabel::Fair => write!(f, "fair"),
            RegionLabel::Winning => write!(f, "winning"),
            RegionLabel::Losing => write!(f, "losing"),
            RegionLabel::Unsolvable => write!(f, "unsolvable"),
        }
    }
}

/// One node of a region map. `pb2` is the solved fair middle probability;
/// it and `current` are absent for unsolvable nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionPoint {
    pub gamma: f64,
    pub pb1: f64,
    pub pb3: f64,
    pub pb2: Option<f64>,
    pub current: Option<f64>,
    pub label: RegionLabel,
}

/// A scan axis: swept over [0, 1] or pinned to one value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    Fixed(f64),
    Grid(usize),
}

impl Axis {
    fn nodes(&self) -> Result<Vec<f64>, ScanError> {
        match *self {
            Axis::Fixed(v) => Ok(vec![v]),
            Axis::Grid(count) => {
                if count < 2 {
                    return Err(ScanError::InvalidGrid(count));
                }
                let step = (count - 1) as f64;
                Ok((0..count).map(|k| k as f64 / step).collect())
            }
        }
    }
}

/// Grid spec for [`region_map`].
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSpec {
    pub gamma: Axis,
    pub pb1: Axis,
    pub pb3: Axis,
    /// |J| below this is fair; at or above it, winning or losing by sign.
    pub class_tol: f64,
}

impl Default for RegionSpec {
    fn default() -> Self {
        RegionSpec {
            gamma: Axis::Grid(DEFAULT_MAP_GRID),
            pb1: Axis::Grid(DEFAULT_MAP_GRID),
            pb3: Axis::Grid(DEFAULT_MAP_GRID),
            class_tol: DEFAULT_CLASS_TOL,
        }
    }
}

/// Classifies every (gamma, pb1, pb3) node of the grid as fair, winning or
/// losing, with p_B2 fixed at each (pb1, pb3) by the numeric fairness solve
/// so that game B alone is fair. Nodes without a fair p_B2 are emitted with
/// the `Unsolvable` label rather than dropped.
///
/// Points are ordered by (gamma, pb1, pb3) grid index. Game A uses p_A = 1/2.
pub fn region_map(n: usize, spec: &RegionSpec) -> Result<Vec<RegionPoint>, ScanError> {
    let gammas = spec.gamma.nodes()?;
    let pb1s = spec.pb1.nodes()?;
    let pb3s = spec.pb3.nodes()?;

    // One fairness solve per (pb1, pb3) column, shared across gammas.
    let pb2s: Vec<Option<f64>> = pb1s
        .par_iter()
        .flat_map_iter(|&pb1| pb3s.iter().map(move |&pb3| (pb1, pb3)))
        .map(|(pb1, pb3)| solve_fair_pb2(n, pb1, pb3))
        .collect();

    let n3 = pb3s.len();
    let per_gamma = pb1s.len() * n3;
    let evaluated: Vec<Result<RegionPoint, ScanError>> = (0..gammas.len() * per_gamma)
        .into_par_iter()
        .map(|flat| {
            let gamma = gammas[flat / per_gamma];
            let rest = flat % per_gamma;
            let pb1 = pb1s[rest / n3];
            let pb3 = pb3s[rest % n3];
            let Some(pb2) = pb2s[rest] else {
                return Ok(RegionPoint {
                    gamma,
                    pb1,
                    pb3,
                    pb2: None,
                    current: None,
                    label: RegionLabel::Unsolvable,
                });
            };
            let params = GameParams::new(n, 0.5, [pb1, pb2, pb3], gamma)
                .map_err(|source| ScanError::AtGamma { gamma, source })?;
            let current = params
                .current()
                .map_err(|source| ScanError::AtGamma { gamma, source })?;
            let label = if current.abs() < spec.class_tol {
                RegionLabel::Fair
            } else if current > 0.0 {
                RegionLabel::Winning
            } else {
                RegionLabel::Losing
            };
            Ok(RegionPoint {
                gamma,
                pb1,
                pb3,
                pb2: Some(pb2),
                current: Some(current),
                label,
            })
        })
        .collect();
    evaluated.into_iter().collect()
}

/// First fair p_B2 at (pb1, pb3) for game B alone, if any.
fn solve_fair_pb2(n: usize, pb1: f64, pb3: f64) -> Option<f64> {
    let query = FairnessQuery::new(n, pb1, pb3).ok()?;
    fair_pb2_numeric(&query).ok()?.first().copied()
}

/// One node of a fair-surface curve; `pb2` is absent where no fair value
/// exists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FairSurfacePoint {
    pub pb3: f64,
    pub pb2: Option<f64>,
}

/// Fair-surface curve for one player count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FairSurfaceCurve {
    pub n_players: usize,
    pub pb1: f64,
    pub points: Vec<FairSurfacePoint>,
}

/// For each pb3 node, the p_B2 making game B fair at fixed pb1 — the curve
/// traced in the (p_B2, p_B3) plane. Several player counts can be computed
/// in one call to compare how the curves approach their large-N limit.
pub fn fair_surface_fixed_pb1(
    ns: &[usize],
    pb1: f64,
    grid: usize,
) -> Result<Vec<FairSurfaceCurve>, ScanError> {
    if grid < 2 {
        return Err(ScanError::InvalidGrid(grid));
    }
    let step = (grid - 1) as f64;
    ns.iter()
        .map(|&n| {
            // Validate (n, pb1) eagerly so bad inputs error instead of
            // silently yielding an all-unsolvable curve.
            FairnessQuery::new(n, pb1, 0.5).map_err(ScanError::Chain)?;
            let points: Vec<FairSurfacePoint> = (0..grid)
                .into_par_iter()
                .map(|k| {
                    let pb3 = k as f64 / step;
                    FairSurfacePoint {
                        pb3,
                        pb2: solve_fair_pb2(n, pb1, pb3),
                    }
                })
                .collect();
            Ok(FairSurfaceCurve {
                n_players: n,
                pb1,
                points,
            })
        })
        .collect()
}

/// Which branch of the fixed-gamma fair set a curve point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// The mirror line pb1 = 1 - pb3, fair for every N and gamma.
    Diagonal,
    /// Zero crossings away from the mirror line.
    Nontrivial,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::Diagonal => write!(f, "diagonal"),
            Branch::Nontrivial => write!(f, "nontrivial"),
        }
    }
}

/// A point of the fixed-gamma inversion curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub pb1: f64,
    pub pb3: f64,
    pub branch: Branch,
}

/// Zero-level set of the mixed-game current over the (pb1, pb3) square at
/// fixed gamma, with p_B2 fair-solved at every evaluation point.
///
/// The mirror line pb1 = 1 - pb3 is fair identically; it is reported as its
/// own branch at the grid nodes. The nontrivial branch is extracted by
/// edge-wise sign-change detection plus 1D bisection along grid edges;
/// points are emitted unordered (ordering is a plotting concern).
pub fn inversion_curve_fixed_gamma(
    n: usize,
    gamma: f64,
    grid: usize,
) -> Result<Vec<CurvePoint>, ScanError> {
    if grid < 2 {
        return Err(ScanError::InvalidGrid(grid));
    }
    let params_check = GameParams::new(n, 0.5, [0.5, 0.5, 0.5], gamma);
    params_check.map_err(ScanError::Chain)?;

    let step = (grid - 1) as f64;
    let nodes: Vec<f64> = (0..grid).map(|k| k as f64 / step).collect();

    // J at every solvable grid node.
    let field: Vec<Option<f64>> = (0..grid * grid)
        .into_par_iter()
        .map(|flat| curve_current(n, gamma, nodes[flat / grid], nodes[flat % grid]))
        .collect();
    let at = |a: usize, b: usize| field[a * grid + b];

    let mut points: Vec<CurvePoint> = nodes
        .iter()
        .map(|&x| CurvePoint {
            pb1: x,
            pb3: 1.0 - x,
            branch: Branch::Diagonal,
        })
        .collect();

    // Horizontal (varying pb1) and vertical (varying pb3) edges.
    let mut edges: Vec<((usize, usize), (usize, usize))> = Vec::new();
    for a in 0..grid {
        for b in 0..grid {
            if a + 1 < grid {
                edges.push(((a, b), (a + 1, b)));
            }
            if b + 1 < grid {
                edges.push(((a, b), (a, b + 1)));
            }
        }
    }
    let zeros: Vec<Option<(f64, f64)>> = edges
        .par_iter()
        .map(|&((a0, b0), (a1, b1))| {
            let (j0, j1) = (at(a0, b0)?, at(a1, b1)?);
            if j0.abs() < ROOT_TOL || j1.abs() < ROOT_TOL || j0.signum() == j1.signum() {
                return None;
            }
            refine_edge(
                n,
                gamma,
                (nodes[a0], nodes[b0], j0),
                (nodes[a1], nodes[b1]),
            )
        })
        .collect();
    for zero in zeros.into_iter().flatten() {
        if (zero.0 + zero.1 - 1.0).abs() < DIAGONAL_TOL {
            continue; // already covered by the diagonal branch
        }
        points.push(CurvePoint {
            pb1: zero.0,
            pb3: zero.1,
            branch: Branch::Nontrivial,
        });
    }
    Ok(points)
}

/// Mixed-game current at (pb1, pb3) with fair-solved p_B2, if solvable.
fn curve_current(n: usize, gamma: f64, pb1: f64, pb3: f64) -> Option<f64> {
    let pb2 = solve_fair_pb2(n, pb1, pb3)?;
    let params = GameParams::new(n, 0.5, [pb1, pb2, pb3], gamma).ok()?;
    params.current().ok()
}

/// Bisects the current to zero along one grid edge. Returns `None` if an
/// evaluation point is unsolvable or the refinement stalls.
fn refine_edge(
    n: usize,
    gamma: f64,
    (x0, y0, j0): (f64, f64, f64),
    (x1, y1): (f64, f64),
) -> Option<(f64, f64)> {
    let mut t_lo = 0.0_f64;
    let mut t_hi = 1.0_f64;
    let mut f_lo = j0;
    for _ in 0..BISECT_MAX_ITER {
        let t = 0.5 * (t_lo + t_hi);
        let x = x0 + t * (x1 - x0);
        let y = y0 + t * (y1 - y0);
        let j = curve_current(n, gamma, x, y)?;
        if j.abs() < ROOT_TOL {
            return Some((x, y));
        }
        if j.signum() == f_lo.signum() {
            t_lo = t;
            f_lo = j;
        } else {
            t_hi = t;
        }
        if t_hi - t_lo < 1e-15 {
            break;
        }
    }
    None
}

/// Per-state label by the mixed single-round win probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SiteLabel {
    Winning,
    Losing,
    Neutral,
}

/// Labels each state as a winning site (mixed win probability above 1/2),
/// losing site (below) or neutral (exactly 1/2). This is the bookkeeping
/// behind the inversion mechanism: low gamma weights the heavily occupied
/// losing sites, high gamma the winning boundary sites.
pub fn site_classification(params: &GameParams) -> Vec<SiteLabel> {
    (0..=params.n_players())
        .map(|i| {
            let w = params.win_prob_mixed(i).expect("state index in range");
            if w > 0.5 {
                SiteLabel::Winning
            } else if w < 0.5 {
                SiteLabel::Losing
            } else {
                SiteLabel::Neutral
            }
        })
        .collect()
}
