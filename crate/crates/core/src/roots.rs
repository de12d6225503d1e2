//! Bracketing root finder.

use crate::error::{Error, Result};

/// A root located by bisection.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RootResult {
    /// Location of the root.
    pub value: f64,
    /// Function value at [`RootResult::value`].
    pub residual: f64,
    /// Number of halvings performed.
    pub iterations: u32,
}

const MAX_ITERATIONS: u32 = 1100;

/// Bisect `f` on `[lo, hi]` until the bracket is no wider than `x_tol`
/// or cannot be split further in `f64`.
///
/// `f(lo)` and `f(hi)` must have opposite signs (or one must be zero).
/// The sign-change bracket is kept at every step. The returned point is the
/// bracket end with the smaller `|f|`.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, x_tol: f64) -> Result<RootResult>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(RootResult {
            value: a,
            residual: 0.0,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(RootResult {
            value: b,
            residual: 0.0,
            iterations: 0,
        });
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo: a, hi: b });
    }
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        let mid = a + 0.5 * (b - a);
        if b - a <= x_tol || mid <= a || mid >= b {
            break;
        }
        iterations += 1;
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(RootResult {
                value: mid,
                residual: 0.0,
                iterations,
            });
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
        debug_assert!(fa.signum() != fb.signum());
    }
    let (value, residual) = if fa.abs() <= fb.abs() {
        (a, fa)
    } else {
        (b, fb)
    };
    Ok(RootResult {
        value,
        residual,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 0.0).unwrap();
        assert!((r.value - 2f64.sqrt()).abs() < 1e-15);
        assert!(r.residual.abs() < 1e-14);
        assert!(r.iterations > 40);
    }

    #[test]
    fn reversed_bracket_and_endpoint_roots() {
        let r = bisect(|x| x - 1.0, 3.0, -1.0, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = bisect(|x| x, 0.0, 1.0, 1e-12).unwrap();
        assert_eq!((r.value, r.iterations), (0.0, 0));
    }

    #[test]
    fn rejects_same_sign() {
        assert_eq!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(Error::NoSignChange { lo: -1.0, hi: 1.0 })
        );
        assert!(bisect(|_| f64::NAN, 0.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn bracket_kept_every_step() {
        let mut seen = alloc::vec::Vec::new();
        let r = bisect(
            |x| {
                seen.push(x);
                libm::exp(x) - x - 2.0
            },
            0.5,
            2.0,
            0.0,
        )
        .unwrap();
        // Every probe lies inside the original bracket and the root is bracketed.
        assert!(seen.iter().all(|&x| (0.5..=2.0).contains(&x)));
        assert!(r.residual.abs() < 1e-10);
    }
}
