//! Internal numeric helpers: bracketed bisection and double-double
//! (compensated) arithmetic.

/// Outcome of a bisection run.
pub(crate) enum Bisection {
    /// `|f| < tol` was reached at this abscissa.
    Converged(f64),
    /// Iteration cap hit; |f| at the last midpoint.
    Stalled { best_abs: f64 },
}

/// Bisect `f` on `[lo, hi]` until `|f| < tol`.
///
/// Requires `f(lo)` (passed as `f_lo`) and `f(hi)` to have strictly opposite
/// signs. Stops early when the bracket shrinks to machine resolution.
pub(crate) fn bisect<E>(
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    mut f: impl FnMut(f64) -> Result<f64, E>,
    tol: f64,
    max_iter: usize,
) -> Result<Bisection, E> {
    debug_assert!(lo < hi);
    let mut mid = 0.5 * (lo + hi);
    let mut f_mid = f(mid)?;
    for _ in 0..max_iter {
        if f_mid.abs() < tol {
            return Ok(Bisection::Converged(mid));
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        let next = 0.5 * (lo + hi);
        if next <= lo || next >= hi {
            // Bracket exhausted at machine precision.
            break;
        }
        mid = next;
        f_mid = f(mid)?;
    }
    if f_mid.abs() < tol {
        Ok(Bisection::Converged(mid))
    } else {
        Ok(Bisection::Stalled {
            best_abs: f_mid.abs(),
        })
    }
}

/// Double-double value `hi + lo` with `|lo| <= ulp(hi)/2`.
///
/// Used where a result must be correctly rounded, not merely close: the
/// roughly 106-bit working precision pushes accumulated rounding error far
/// below the final f64 rounding step.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub(crate) const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub(crate) fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub(crate) fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    pub(crate) fn sub(self, other: Dd) -> Dd {
        self.add(Dd {
            hi: -other.hi,
            lo: -other.lo,
        })
    }

    pub(crate) fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub(crate) fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(Dd::from_f64(q1).mul(other));
        let q2 = (r.hi + r.lo) / other.hi;
        let r2 = r.sub(Dd::from_f64(q2).mul(other));
        let q3 = (r2.hi + r2.lo) / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        let (hi, lo2) = quick_two_sum(hi, lo + q3);
        Dd { hi, lo: lo2 }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}
