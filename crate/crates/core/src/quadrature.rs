//! Composite Gauss-Legendre quadrature on panels.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

/// Gauss-Legendre rule of fixed degree applied panel-wise.
#[derive(Debug, Clone)]
pub struct CompositeGauss {
    pairs: Vec<(f64, f64)>,
}

impl CompositeGauss {
    pub fn new(degree: usize) -> Self {
        let degree = NonZeroUsize::new(degree.max(1)).unwrap();
        let rule = GaussLegendre::new(degree);
        Self {
            pairs: rule.as_node_weight_pairs().to_vec(),
        }
    }

    /// Integrates `f` over `[a, b]` split into `panels` equal pieces.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, panels: usize, mut f: F) -> f64 {
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let lo = a + h * p as f64;
            let mid = lo + 0.5 * h;
            let mut s = 0.0;
            for &(x, w) in &self.pairs {
                s += w * f(mid + 0.5 * h * x);
            }
            total += 0.5 * h * s;
        }
        total
    }

    /// Integrates over consecutive intervals `[breaks[i], breaks[i+1]]`.
    pub fn integrate_pieces<F: FnMut(f64) -> f64>(
        &self,
        breaks: &[f64],
        panels_per_piece: usize,
        mut f: F,
    ) -> f64 {
        breaks
            .windows(2)
            .map(|w| self.integrate(w[0], w[1], panels_per_piece, &mut f))
            .sum()
    }

    /// Nodes and weights of the composite rule on `[a, b]`.
    pub fn nodes(&self, a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        let mut out = Vec::with_capacity(panels * self.pairs.len());
        for p in 0..panels {
            let mid = a + h * (p as f64 + 0.5);
            for &(x, w) in &self.pairs {
                out.push((mid + 0.5 * h * x, 0.5 * h * w));
            }
        }
        out
    }
}

/// Doubles the panel count until two successive estimates agree to
/// `rel_tol` (relative to the larger magnitude, floored at `abs_floor`).
/// Returns the estimate and the panel count used.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    rule: &CompositeGauss,
    breaks: &[f64],
    rel_tol: f64,
    abs_floor: f64,
    max_panels: usize,
    mut f: F,
) -> (f64, usize) {
    let mut panels = 2;
    let mut prev = rule.integrate_pieces(breaks, panels, &mut f);
    loop {
        let next_panels = panels * 2;
        let next = rule.integrate_pieces(breaks, next_panels, &mut f);
        let scale = next.abs().max(prev.abs()).max(abs_floor);
        if (next - prev).abs() <= rel_tol * scale || next_panels >= max_panels {
            return (next, next_panels);
        }
        prev = next;
        panels = next_panels;
    }
}
