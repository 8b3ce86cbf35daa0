//! 1-D quadrature kernels: adaptive Simpson and Gauss–Legendre panels.

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // p = P_n(x), dp = P_n'(x)
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // recompute derivative at the converged node for the weight
        let (mut p0, mut p1) = (1.0f64, x);
        for k in 2..=n {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Single Gauss–Legendre panel of f over [a, b].
pub fn gl_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, nodes: &[f64], weights: &[f64]) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    nodes
        .iter()
        .zip(weights)
        .map(|(&x, &w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Composite Gauss–Legendre with a fixed node count per panel, doubling the
/// panel count until successive estimates agree within `tol`.
pub fn gl_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, nodes_per_panel: usize, tol: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(nodes_per_panel);
    let mut panels = 1usize;
    let mut prev = gl_panel(f, a, b, &nodes, &weights);
    for _ in 0..20 {
        panels *= 2;
        let h = (b - a) / panels as f64;
        let cur: f64 = (0..panels)
            .map(|i| gl_panel(f, a + i as f64 * h, a + (i + 1) as f64 * h, &nodes, &weights))
            .sum();
        if (cur - prev).abs() < tol {
            return cur;
        }
        prev = cur;
    }
    prev
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_rec(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1)
            + adaptive_rec(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1)
    }
}

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    adaptive_rec(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_nodes_integrate_polynomials_exactly() {
        // n-point GL is exact up to degree 2n-1
        let (nodes, weights) = gauss_legendre(5);
        let val = gl_panel(&|x: f64| x.powi(9) + 3.0 * x.powi(4), -1.0, 1.0, &nodes, &weights);
        assert!((val - 6.0 / 5.0).abs() < 1e-13, "{val}");
    }

    #[test]
    fn adaptive_simpson_known_integrals() {
        let v = adaptive_simpson(&f64::sin, 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-10);
        let v = adaptive_simpson(&|x: f64| (-x * x).exp(), -8.0, 8.0, 1e-12);
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn gl_adaptive_matches_simpson() {
        let f = |x: f64| 1.0 / (1.0 + x * x);
        let a = adaptive_simpson(&f, 0.0, 1.0, 1e-12);
        let b = gl_adaptive(&f, 0.0, 1.0, 16, 1e-12);
        assert!((a - b).abs() < 1e-10);
        assert!((a - std::f64::consts::FRAC_PI_4).abs() < 1e-10);
    }
}
