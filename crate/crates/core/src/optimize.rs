//! Bounded scalar minimization (Brent's golden-section / parabolic method).

/// Result of a bounded minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub fx: f64,
    pub evals: usize,
}

const GOLDEN: f64 = 0.381_966_011_250_105_1; // (3 − √5) / 2

/// Minimizes `f` on `[lo, hi]` to absolute tolerance `tol` in `x`, using at
/// most `max_evals` evaluations (at least one).
///
/// `f` may return `+∞`; such points are never accepted as the incumbent
/// unless nothing better has been seen, and they suppress parabolic steps.
/// All evaluation points lie inside `[lo, hi]`.
pub fn minimize_bounded<F>(mut f: F, lo: f64, hi: f64, tol: f64, max_evals: usize) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    assert!(lo <= hi, "empty interval [{lo}, {hi}]");
    let max_evals = max_evals.max(1);
    let sqrt_eps = f64::EPSILON.sqrt();

    let (mut a, mut b) = (lo, hi);
    let mut x = a + GOLDEN * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut evals = 1;
    let (mut d, mut e) = (0.0f64, 0.0f64);

    while evals < max_evals {
        let xm = 0.5 * (a + b);
        let tol1 = sqrt_eps * x.abs() + tol / 3.0;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }

        let mut golden = true;
        if e.abs() > tol1 && fx.is_finite() && fw.is_finite() && fv.is_finite() {
            let mut r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            r = e;
            e = d;
            if p.abs() < (0.5 * q * r).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = GOLDEN * e;
        }

        let step = if d.abs() >= tol1 { d } else { tol1.copysign(d) };
        let u = (x + step).clamp(lo, hi);
        let fu = f(u);
        evals += 1;

        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Minimum { x, fx, evals }
}
