//! One-dimensional minimization used by the boundary infimum routine.

/// `(3 - √5) / 2`, the golden-section step fraction.
const GOLDEN: f64 = 0.381_966_011_250_105_1;

/// Result of a bracketed minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LineMinimum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Brent's method (golden section with parabolic interpolation) on `[a, b]`.
///
/// Stops once the bracket around the best point is narrower than about
/// `4 * (abs_tol + 2ε|x|)`. Returns `None` if the budget is exhausted or the
/// objective produces NaN.
pub(crate) fn brent_minimize<F>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_iter: usize,
) -> Option<LineMinimum>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut x = a + GOLDEN * (b - a);
    let mut w = x;
    let mut v = x;
    let mut fx = f(x);
    if fx.is_nan() {
        return None;
    }
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for iterations in 0..max_iter {
        let m = 0.5 * (a + b);
        let tol1 = 2.0 * f64::EPSILON * x.abs() + abs_tol;
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            return Some(LineMinimum {
                x,
                value: fx,
                iterations,
            });
        }

        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            e = d;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < m { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x < m { b - x } else { a - x };
            d = GOLDEN * e;
        }

        let u = if d.abs() >= tol1 {
            x + d
        } else if d > 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u);
        if fu.is_nan() {
            return None;
        }

        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
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
    None
}
