//! Single-scale SSIM over a Gaussian window with reflect-padded borders.
//!
//! Local moments are `mu = A x`, `E[x^2] = A x^2`, `E[xy] = A (x*y)` where `A`
//! is the separable blur. The gradient is pulled back through the pointwise
//! SSIM formula and then through `A^T`.

use ndarray::{Array2, Axis};

use super::{LossConfig, LossError, LossOutput};

fn gaussian_kernel(size: usize, sigma: f64) -> Vec<f64> {
    let r = (size / 2) as f64;
    let mut k: Vec<f64> = (0..size)
        .map(|i| (-(i as f64 - r).powi(2) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    for v in &mut k {
        *v /= sum;
    }
    k
}

fn reflect(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let m = i.rem_euclid(period);
    if m < n as isize {
        m as usize
    } else {
        (period - m) as usize
    }
}

struct Blur {
    kernel: Vec<f64>,
}

impl Blur {
    fn radius(&self) -> isize {
        (self.kernel.len() / 2) as isize
    }

    fn along(&self, x: &Array2<f64>, axis: Axis, adjoint: bool) -> Array2<f64> {
        let mut out = Array2::zeros(x.dim());
        let r = self.radius();
        for (src, mut dst) in x.lanes(axis).into_iter().zip(out.lanes_mut(axis)) {
            let n = src.len();
            for j in 0..n {
                for (o, &k) in self.kernel.iter().enumerate() {
                    let idx = reflect(j as isize + o as isize - r, n);
                    if adjoint {
                        dst[idx] += k * src[j];
                    } else {
                        dst[j] += k * src[idx];
                    }
                }
            }
        }
        out
    }

    fn apply(&self, x: &Array2<f64>) -> Array2<f64> {
        let tmp = self.along(x, Axis(1), false);
        self.along(&tmp, Axis(0), false)
    }

    fn adjoint(&self, g: &Array2<f64>) -> Array2<f64> {
        let tmp = self.along(g, Axis(0), true);
        self.along(&tmp, Axis(1), true)
    }
}

/// Per-pixel SSIM and the local moments it was built from.
pub(crate) struct SsimMap {
    pub map: Array2<f64>,
    mu_x: Array2<f64>,
    mu_y: Array2<f64>,
    var_x: Array2<f64>,
    var_y: Array2<f64>,
    cov: Array2<f64>,
}

fn check(pred: &Array2<f64>, target: &Array2<f64>, cfg: &LossConfig) -> Result<(), LossError> {
    if pred.dim() != target.dim() {
        return Err(LossError::ShapeMismatch {
            left: pred.dim(),
            right: target.dim(),
        });
    }
    let (rows, cols) = pred.dim();
    if rows < cfg.ssim_window || cols < cfg.ssim_window {
        return Err(LossError::SmallerThanWindow {
            shape: (rows, cols),
            window: cfg.ssim_window,
        });
    }
    Ok(())
}

pub(crate) fn ssim_map(
    x: &Array2<f64>,
    y: &Array2<f64>,
    cfg: &LossConfig,
) -> Result<SsimMap, LossError> {
    cfg.validate()?;
    check(x, y, cfg)?;
    let blur = Blur {
        kernel: gaussian_kernel(cfg.ssim_window, cfg.ssim_sigma),
    };
    let (c1, c2) = (cfg.c1(), cfg.c2());
    let mu_x = blur.apply(x);
    let mu_y = blur.apply(y);
    let var_x = blur.apply(&(x * x)) - &mu_x * &mu_x;
    let var_y = blur.apply(&(y * y)) - &mu_y * &mu_y;
    let cov = blur.apply(&(x * y)) - &mu_x * &mu_y;
    let map = Array2::from_shape_fn(x.dim(), |ix| {
        let (mx, my) = (mu_x[ix], mu_y[ix]);
        let num = (2.0 * mx * my + c1) * (2.0 * cov[ix] + c2);
        let den = (mx * mx + my * my + c1) * (var_x[ix] + var_y[ix] + c2);
        num / den
    });
    Ok(SsimMap {
        map,
        mu_x,
        mu_y,
        var_x,
        var_y,
        cov,
    })
}

/// Mean SSIM between two equally shaped matrices.
pub fn ssim(x: &Array2<f64>, y: &Array2<f64>, cfg: &LossConfig) -> Result<f64, LossError> {
    let m = ssim_map(x, y, cfg)?;
    Ok(m.map.mean().expect("non-empty map"))
}

/// `1 - mean(SSIM)`; the gradient is taken with respect to `pred`.
pub fn ssim_loss(
    pred: &Array2<f64>,
    target: &Array2<f64>,
    cfg: &LossConfig,
    with_grad: bool,
) -> Result<LossOutput, LossError> {
    let m = ssim_map(pred, target, cfg)?;
    let value = 1.0 - m.map.mean().expect("non-empty map");
    if !with_grad {
        return Ok(LossOutput { value, grad: None });
    }

    let (c1, c2) = (cfg.c1(), cfg.c2());
    let n = pred.len() as f64;
    let blur = Blur {
        kernel: gaussian_kernel(cfg.ssim_window, cfg.ssim_sigma),
    };
    // dS/d(mu_x), dS/d(E[x^2]), dS/d(E[xy]) per pixel, scaled by -1/n.
    let mut g_mu = Array2::zeros(pred.dim());
    let mut g_xx = Array2::zeros(pred.dim());
    let mut g_xy = Array2::zeros(pred.dim());
    for ix in ndarray::indices(pred.dim()) {
        let (mx, my) = (m.mu_x[ix], m.mu_y[ix]);
        let a1 = 2.0 * mx * my + c1;
        let a2 = 2.0 * m.cov[ix] + c2;
        let b1 = mx * mx + my * my + c1;
        let b2 = m.var_x[ix] + m.var_y[ix] + c2;
        let s = m.map[ix];
        let d_cov = 2.0 * a1 / (b1 * b2);
        let d_var = -s / b2;
        let d_mu_direct = 2.0 * my * a2 / (b1 * b2) - 2.0 * mx * s / b1;
        // var_x = E[x^2] - mu_x^2, cov = E[xy] - mu_x mu_y
        g_mu[ix] = -(d_mu_direct - 2.0 * mx * d_var - my * d_cov) / n;
        g_xx[ix] = -d_var / n;
        g_xy[ix] = -d_cov / n;
    }
    let grad = blur.adjoint(&g_mu) + 2.0 * pred * &blur.adjoint(&g_xx) + target * &blur.adjoint(&g_xy);
    Ok(LossOutput {
        value,
        grad: Some(grad),
    })
}
