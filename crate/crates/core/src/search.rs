//! One-dimensional derivative-free search helpers.

/// Inverse golden ratio `(√5 - 1)/2`.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Result of a bracketed minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
///
/// Stops once the bracket is narrower than `tol` or after `max_iter`
/// iterations. The returned point is the best of the final interior probes
/// and the bracket ends, so a minimum sitting on an endpoint is found too.
pub fn golden_section<E>(
    mut f: impl FnMut(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Minimum, E> {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut iterations = 0;
    while hi - lo > tol && iterations < max_iter {
        iterations += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let (mut x, mut value) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    for end in [lo, hi] {
        let fe = f(end)?;
        if fe < value {
            x = end;
            value = fe;
        }
    }
    Ok(Minimum {
        x,
        value,
        iterations,
    })
}

/// Bisection for `f(x) = 0` on `[a, b]` with `f(a)` and `f(b)` of opposite sign
/// (or zero). Returns the midpoint of the final bracket.
pub fn bisect<E>(
    mut f: impl FnMut(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64, E> {
    let (mut lo, mut hi) = (a, b);
    let mut f_lo = f(lo)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    for _ in 0..max_iter {
        if (hi - lo).abs() <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Illinois (modified regula falsi) root search on a sign-changing bracket.
/// Converges superlinearly on smooth functions while keeping the bracket.
/// Returns `None` if `f(a)` and `f(b)` have the same strict sign.
pub fn illinois<E>(
    mut f: impl FnMut(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Option<f64>, E> {
    let (mut lo, mut hi) = (a, b);
    let (mut f_lo, mut f_hi) = (f(lo)?, f(hi)?);
    if f_lo == 0.0 {
        return Ok(Some(lo));
    }
    if f_hi == 0.0 {
        return Ok(Some(hi));
    }
    if (f_lo < 0.0) == (f_hi < 0.0) {
        return Ok(None);
    }
    // which end was kept on the previous step: -1 lo, +1 hi
    let mut side = 0;
    for _ in 0..max_iter {
        if (hi - lo).abs() <= tol {
            break;
        }
        let mut x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if !(x > lo.min(hi) && x < lo.max(hi)) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(Some(x));
        }
        if (fx < 0.0) == (f_lo < 0.0) {
            lo = x;
            f_lo = fx;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
        // a secant step that barely moves means the root is pinned
        if (hi - lo).abs() <= tol {
            break;
        }
    }
    Ok(Some(if f_lo.abs() < f_hi.abs() { lo } else { hi }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn ok(v: f64) -> Result<f64, Infallible> {
        Ok(v)
    }

    #[test]
    fn golden_finds_parabola_vertex() {
        let m = golden_section(|x| ok((x - 0.3).powi(2)), -1.0, 2.0, 1e-10, 200).unwrap();
        assert!((m.x - 0.3).abs() < 1e-8);
        assert!(m.value < 1e-16);
    }

    #[test]
    fn golden_handles_endpoint_minimum() {
        let m = golden_section(ok, 1.0, 2.0, 1e-12, 200).unwrap();
        assert_eq!(m.x, 1.0);
    }

    #[test]
    fn golden_respects_iteration_cap() {
        let m = golden_section(|x| ok(x.cos()), 0.0, 6.0, 0.0, 5).unwrap();
        assert_eq!(m.iterations, 5);
    }

    #[test]
    fn bisect_finds_root() {
        let r = bisect(|x| ok(x * x - 2.0), 0.0, 2.0, 1e-14, 200).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        let r = bisect(|x| ok(1.0 - x), 0.0, 3.0, 1e-14, 200).unwrap();
        assert!((r - 1.0).abs() < 1e-13);
    }

    #[test]
    fn illinois_converges_fast_and_keeps_bracket() {
        let mut calls = 0;
        let r = illinois(
            |x| {
                calls += 1;
                ok(x.cos() - x)
            },
            0.0,
            1.0,
            1e-14,
            100,
        )
        .unwrap()
        .unwrap();
        assert!((r - 0.739_085_133_215_160_6).abs() < 1e-13);
        assert!(calls < 20, "{calls}");
        assert_eq!(
            illinois(|x| ok(x * x + 1.0), -1.0, 1.0, 1e-12, 50).unwrap(),
            None
        );
    }
}
