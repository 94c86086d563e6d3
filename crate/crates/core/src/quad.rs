//! Adaptive Simpson quadrature with Richardson correction.

use crate::error::{PcfError, Result};

const MAX_DEPTH: u32 = 48;
const INITIAL_PANELS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of the local error estimates of accepted panels.
    pub error: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

struct Integrator<'f, F> {
    f: &'f F,
    evaluations: usize,
    error: f64,
    failed: Option<(f64, f64, f64)>,
}

impl<F: Fn(f64) -> f64> Integrator<'_, F> {
    fn eval(&mut self, x: f64) -> f64 {
        self.evaluations += 1;
        (self.f)(x)
    }

    fn recurse(&mut self, p: Panel, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (p.a + p.b);
        let (lm, rm) = (0.5 * (p.a + m), 0.5 * (m + p.b));
        let (flm, frm) = (self.eval(lm), self.eval(rm));
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let delta = left + right - p.whole;
        if delta.abs() <= 15.0 * tol {
            self.error += delta.abs() / 15.0;
            return left + right + delta / 15.0;
        }
        if depth >= MAX_DEPTH {
            self.error += delta.abs() / 15.0;
            if self.failed.is_none() {
                self.failed = Some((p.a, p.b, delta.abs()));
            }
            return left + right + delta / 15.0;
        }
        let l = Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
        };
        let r = Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
        };
        self.recurse(l, 0.5 * tol, depth + 1) + self.recurse(r, 0.5 * tol, depth + 1)
    }
}

/// Integrate `f` over `[a, b]` to absolute tolerance `abs_tol`.
pub fn integrate_abs<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> Result<Quadrature> {
    integrate_pieces(f, &[a, b], abs_tol)
}

/// Integrate over consecutive pieces `[points[i], points[i+1]]`, splitting at
/// every given point (e.g. a known peak), to absolute tolerance `abs_tol`.
pub fn integrate_pieces<F: Fn(f64) -> f64>(
    f: &F,
    points: &[f64],
    abs_tol: f64,
) -> Result<Quadrature> {
    let mut it = Integrator {
        f,
        evaluations: 0,
        error: 0.0,
        failed: None,
    };
    let (lo, hi) = (points[0], points[points.len() - 1]);
    let span = hi - lo;
    let mut value = 0.0;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let h = (b - a) / INITIAL_PANELS as f64;
        let mut fa = it.eval(a);
        for i in 0..INITIAL_PANELS {
            let pa = a + h * i as f64;
            let pb = if i + 1 == INITIAL_PANELS { b } else { pa + h };
            let fm = it.eval(0.5 * (pa + pb));
            let fb = it.eval(pb);
            let panel = Panel {
                a: pa,
                b: pb,
                fa,
                fm,
                fb,
                whole: simpson(pa, pb, fa, fm, fb),
            };
            let tol = abs_tol * (pb - pa) / span;
            value += it.recurse(panel, tol, 0);
            fa = fb;
        }
    }
    if let Some((a, b, _)) = it.failed {
        if it.error > abs_tol {
            return Err(PcfError::Quadrature {
                lo: a,
                hi: b,
                estimate: value,
                error: it.error,
            });
        }
    }
    Ok(Quadrature {
        value,
        error: it.error,
        evaluations: it.evaluations,
    })
}

/// Integrate to relative tolerance `rel_tol`, using a coarse pass to fix the scale.
pub fn integrate_rel<F: Fn(f64) -> f64>(f: &F, points: &[f64], rel_tol: f64) -> Result<Quadrature> {
    let mut scale = 0.0;
    for w in points.windows(2) {
        let n = 256;
        let h = (w[1] - w[0]) / n as f64;
        scale += (0..=n)
            .map(|i| {
                let weight = if i == 0 || i == n { 0.5 } else { 1.0 };
                weight * f(w[0] + h * i as f64).abs()
            })
            .sum::<f64>()
            * h;
    }
    let tol = if scale > 0.0 { rel_tol * scale } else { f64::MIN_POSITIVE };
    integrate_pieces(f, points, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_and_exponentials() {
        let q = integrate_abs(&|x: f64| x * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((q.value - 4.0).abs() < 1e-12);
        let q = integrate_rel(&|x: f64| (-x).exp(), &[0.0, 40.0], 1e-12).unwrap();
        assert!((q.value - (1.0 - (-40.0f64).exp())).abs() < 1e-11);
    }

    #[test]
    fn sharp_peak_with_breakpoint() {
        let c = 0.3;
        let f = |x: f64| (-(x - c) * (x - c) * 1e6).exp();
        let q = integrate_rel(&f, &[0.0, c, 1.0], 1e-10).unwrap();
        let exact = (std::f64::consts::PI / 1e6).sqrt();
        assert!(((q.value - exact) / exact).abs() < 1e-9, "{}", q.value);
    }

    #[test]
    fn sqrt_endpoint_behaviour() {
        // integrand with unbounded derivative at 0
        let q = integrate_rel(&|x: f64| x.sqrt(), &[0.0, 1.0], 1e-10).unwrap();
        assert!((q.value - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn reports_non_convergence() {
        let f = |x: f64| if x < 0.5 { 0.0 } else { 1.0 / (x - 0.5).max(1e-300) };
        assert!(matches!(
            integrate_abs(&f, 0.0, 1.0, 1e-12),
            Err(PcfError::Quadrature { .. })
        ));
    }
}
