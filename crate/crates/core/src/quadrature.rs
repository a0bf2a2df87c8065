//! Numerical integration: adaptive Simpson with Richardson extrapolation and
//! Gauss–Hermite rules for Gaussian expectations.

const MAX_DEPTH: u32 = 40;
const MAX_EVALS: usize = 4_000_000;
const INITIAL_PANELS: usize = 8;

/// Adaptive Simpson over `[a, b]` targeting `rel_tol` relative accuracy.
pub fn adaptive_simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    integrate_pieces(&mut f, &[a, b], rel_tol)
}

/// Adaptive Simpson over consecutive intervals of `breaks`, sharing one
/// relative tolerance. Put kinks and fast transitions on the break points.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(f: &mut F, breaks: &[f64], rel_tol: f64) -> f64 {
    assert!(breaks.len() >= 2, "need at least one interval");
    let span = breaks[breaks.len() - 1] - breaks[0];
    if span == 0.0 {
        return 0.0;
    }

    struct Panel {
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
    }

    let mut panels = Vec::new();
    let mut coarse = 0.0;
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let h = (hi - lo) / INITIAL_PANELS as f64;
        let mut fa = f(lo);
        for k in 0..INITIAL_PANELS {
            let a = lo + k as f64 * h;
            let b = if k + 1 == INITIAL_PANELS { hi } else { a + h };
            let m = 0.5 * (a + b);
            let fm = f(m);
            let fb = f(b);
            let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            coarse += whole.abs();
            panels.push(Panel { a, b, fa, fm, fb, whole });
            fa = fb;
        }
    }
    let abs_tol = (rel_tol * coarse).max(f64::MIN_POSITIVE);
    let mut evals = panels.len() * 2;
    panels
        .iter()
        .map(|p| {
            let tol = abs_tol * (p.b - p.a) / span;
            refine(f, p.a, p.b, p.fa, p.fm, p.fb, p.whole, tol, MAX_DEPTH, &mut evals)
        })
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn refine<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    evals: &mut usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    *evals += 2;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || *evals > MAX_EVALS || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, evals)
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, evals)
}

/// Nodes and weights for `∫ e^{-t²} g(t) dt ≈ Σ w_i g(t_i)`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Newton iteration on the orthonormal Hermite recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one node");
        let pim4 = std::f64::consts::PI.powf(-0.25);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        let half = n.div_ceil(2);
        let mut z = 0.0_f64;
        for i in 0..half {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[0],
                3 => 1.91 * z - 0.91 * nodes[1],
                _ => 2.0 * z - nodes[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..100 {
                let mut p1 = pim4;
                let mut p2 = 0.0;
                for j in 1..=n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
                }
                pp = (2.0 * nf).sqrt() * p2;
                let step = p1 / pp;
                z -= step;
                if step.abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            weights[i] = 2.0 / (pp * pp);
            weights[n - 1 - i] = weights[i];
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `E[g(Y)]` for `Y ~ N(mean, sd²)`.
    pub fn normal_expectation<F: FnMut(f64) -> f64>(&self, mean: f64, sd: f64, mut g: F) -> f64 {
        let scale = std::f64::consts::SQRT_2 * sd;
        let total: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(t, w)| w * g(mean + scale * t))
            .sum();
        total / std::f64::consts::PI.sqrt()
    }
}
