//! Small numerical helpers: composite Simpson, Gauss-Legendre nodes,
//! compensated summation and bisection.

use alloc::vec::Vec;

/// Composite Simpson rule on `[a, b]` with `panels` subintervals (rounded up
/// to the next even number).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let n = (panels.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let x = a + h * k as f64;
        acc += if k % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    acc * h / 3.0
}

/// Simpson on `[a, b]` where the integrand has one-sided limits at the ends.
///
/// `left` evaluates the integrand at `a` approached from the right, `right`
/// at `b` approached from the left; interior nodes use `f`. Lets callers split
/// at a jump and still pick the correct side at each endpoint.
pub fn simpson_one_sided<F, L, R>(f: F, left: L, right: R, a: f64, b: f64, panels: usize) -> f64
where
    F: Fn(f64) -> f64,
    L: Fn(f64) -> f64,
    R: Fn(f64) -> f64,
{
    if b <= a {
        return 0.0;
    }
    let n = (panels.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut acc = left(a) + right(b);
    for k in 1..n {
        let x = a + h * k as f64;
        acc += if k % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    acc * h / 3.0
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(q: usize) -> (Vec<f64>, Vec<f64>) {
    let q = q.max(1);
    let mut nodes = Vec::with_capacity(q);
    let mut weights = Vec::with_capacity(q);
    for k in 0..q {
        // Chebyshev-like initial guess, then Newton on P_q.
        let mut x = libm::cos(core::f64::consts::PI * (k as f64 + 0.75) / (q as f64 + 0.5));
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(q, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(q, x);
        if d != 0.0 {
            dp = d;
        }
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

fn legendre(q: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if q == 0 {
        return (1.0, 0.0);
    }
    for n in 2..=q {
        let nf = n as f64;
        let p2 = ((2.0 * nf - 1.0) * x * p1 - (nf - 1.0) * p0) / nf;
        p0 = p1;
        p1 = p2;
    }
    let d = q as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Bisection for a sign change of `g` on `[lo, hi]`.
///
/// Returns the final bracket so callers can integrate each side up to the
/// endpoint that lies on that side of the root (or jump).
pub fn bisect<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut glo = g(lo);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 {
            return (mid, mid);
        }
        if (gm > 0.0) == (glo > 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}
