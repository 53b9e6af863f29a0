//! Scalar root bracketing and unimodal minimization.
//!
//! All routines work on monotone predicates or unimodal functions and never
//! assume differentiability: Orlicz derivatives may jump.

use libm::sqrt;

/// Hard cap on bisection steps. Geometric splitting reaches machine precision
/// well before this even for brackets spanning hundreds of decades.
const MAX_BISECT_STEPS: usize = 4096;

/// Narrows `[lo, hi]` around the switch point of a monotone predicate.
///
/// `high(lo)` must be false and `high(hi)` true. The bracket is split
/// geometrically while it spans more than a factor of four (and `lo > 0`),
/// arithmetically afterwards. Stops once `hi - lo <= rel_tol * hi` or the
/// midpoint can no longer be represented strictly inside.
pub fn bisect_switch<F>(mut lo: f64, mut hi: f64, rel_tol: f64, mut high: F) -> (f64, f64)
where
    F: FnMut(f64) -> bool,
{
    debug_assert!(lo <= hi);
    for _ in 0..MAX_BISECT_STEPS {
        if hi - lo <= rel_tol * hi.abs() {
            break;
        }
        let mid = if lo > 0.0 && hi > 4.0 * lo {
            sqrt(lo) * sqrt(hi)
        } else {
            lo + 0.5 * (hi - lo)
        };
        if !(mid > lo && mid < hi) {
            break;
        }
        if high(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Result of an outward bracket search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bracket {
    /// `high(lo)` is false and `high(hi)` is true.
    Found { lo: f64, hi: f64 },
    /// `high` stayed false up to and including the limit.
    Exhausted { limit: f64 },
    /// `high` was already true at the smallest probed positive value.
    AlwaysHigh { floor: f64 },
}

/// Brackets the switch point of a monotone predicate on `(0, limit]`
/// starting from `start` and moving by factors of two.
pub fn bracket_switch<F>(start: f64, limit: f64, mut high: F) -> Bracket
where
    F: FnMut(f64) -> bool,
{
    let mut x = start.min(limit);
    if high(x) {
        // walk down
        let mut hi = x;
        loop {
            let lo = hi * 0.5;
            if lo < f64::MIN_POSITIVE {
                return Bracket::AlwaysHigh { floor: hi };
            }
            if !high(lo) {
                return Bracket::Found { lo, hi };
            }
            hi = lo;
        }
    }
    loop {
        if x >= limit {
            return Bracket::Exhausted { limit };
        }
        let next = (x * 2.0).min(limit);
        if high(next) {
            return Bracket::Found { lo: x, hi: next };
        }
        x = next;
    }
}

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`.
///
/// Returns the best evaluated `(x, f(x))`. Ties move the bracket left, so a
/// right-hand plateau of `+∞` is handled correctly.
pub fn golden_section_min<F>(mut a: f64, mut b: f64, abs_tol: f64, mut f: F) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let (mut best_x, mut best_f) = if fc <= fd { (c, fc) } else { (d, fd) };
    for _ in 0..500 {
        if (b - a).abs() <= abs_tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            if fc < best_f {
                best_x = c;
                best_f = fc;
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            if fd < best_f {
                best_x = d;
                best_f = fd;
            }
        }
    }
    (best_x, best_f)
}
