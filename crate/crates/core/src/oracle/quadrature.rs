//! Composite Newton–Cotes rules on uniform grids.

use num_complex::Complex64 as C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Integrator {
    /// Composite Simpson; an even point count closes with the 3/8 rule.
    #[default]
    Simpson,
    Trapezoid,
}

pub fn weights(n: usize, h: f64, rule: Integrator) -> Vec<f64> {
    let mut w = vec![0.0; n];
    match (rule, n) {
        (_, 0) => {}
        (_, 1) => {}
        (Integrator::Trapezoid, _) | (Integrator::Simpson, 2) => {
            w.iter_mut().for_each(|v| *v = h);
            w[0] = 0.5 * h;
            w[n - 1] = 0.5 * h;
        }
        (Integrator::Simpson, _) => {
            // 1/3 rule over the first `m` points (m odd), 3/8 over the rest.
            let m = if n % 2 == 1 { n } else { n - 3 };
            for (i, wi) in w.iter_mut().enumerate().take(m) {
                *wi = if i == 0 || i == m - 1 {
                    h / 3.0
                } else if i % 2 == 1 {
                    4.0 * h / 3.0
                } else {
                    2.0 * h / 3.0
                };
            }
            if m < n {
                let c = 3.0 * h / 8.0;
                w[m - 1] += c;
                w[m] += 3.0 * c;
                w[m + 1] += 3.0 * c;
                w[m + 2] += c;
            }
        }
    }
    w
}

pub fn integrate(values: &[f64], h: f64, rule: Integrator) -> f64 {
    weights(values.len(), h, rule).iter().zip(values).map(|(w, v)| w * v).sum()
}

pub fn integrate_complex(values: &[C64], h: f64, rule: Integrator) -> C64 {
    weights(values.len(), h, rule).iter().zip(values).map(|(w, v)| v * *w).sum()
}
