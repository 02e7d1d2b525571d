use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZneModel {
    /// `v = a + b f`
    Linear,
    /// `v = a + b f + c f^2`
    Poly2,
    /// `v = a e^{-b f} + c`, with `c = 0` for two points
    Exp,
}

impl std::str::FromStr for ZneModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Self::Linear),
            "poly2" => Ok(Self::Poly2),
            "exp" => Ok(Self::Exp),
            other => Err(Error::Parse(format!("unknown extrapolation model `{other}`"))),
        }
    }
}

/// Least squares with columns given by `basis(f)`; `None` if rank deficient.
fn lstsq(fs: &[f64], vs: &[f64], basis: impl Fn(f64) -> Vec<f64>) -> Option<(Vec<f64>, f64)> {
    let rows: Vec<Vec<f64>> = fs.iter().map(|&f| basis(f)).collect();
    let k = rows[0].len();
    let a = DMatrix::from_fn(fs.len(), k, |r, c| rows[r][c]);
    let b = DVector::from_column_slice(vs);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smax > 0.0) || smin <= smax * 1e-12 {
        return None;
    }
    let x = svd.solve(&b, 0.0).ok()?;
    let resid = (&a * &x - &b).norm_squared();
    Some((x.iter().copied().collect(), resid))
}

fn degenerate(msg: &str) -> Error {
    Error::DegenerateFit(msg.into())
}

/// Fit `(noise_factor, value)` points and evaluate the model at factor 0.
pub fn zne_extrapolate<T: Scalar>(points: &[(T, T)], model: ZneModel) -> Result<T> {
    let need = if model == ZneModel::Poly2 { 3 } else { 2 };
    if points.len() < need {
        return Err(Error::InvalidArgument(format!(
            "{model:?} extrapolation needs at least {need} points, got {}",
            points.len()
        )));
    }
    let fs: Vec<f64> = points.iter().map(|p| p.0.as_f64()).collect();
    let vs: Vec<f64> = points.iter().map(|p| p.1.as_f64()).collect();
    if fs.iter().chain(&vs).any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("non-finite extrapolation point".into()));
    }
    if fs.iter().any(|&f| f < 1.0) {
        return Err(Error::InvalidArgument("noise factors must be >= 1".into()));
    }
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            if fs[i] == fs[j] {
                return Err(Error::InvalidArgument(format!("repeated noise factor {}", fs[i])));
            }
        }
    }
    let out = match model {
        ZneModel::Linear => {
            lstsq(&fs, &vs, |f| vec![1.0, f])
                .ok_or_else(|| degenerate("linear design"))?
                .0[0]
        }
        ZneModel::Poly2 => {
            lstsq(&fs, &vs, |f| vec![1.0, f, f * f])
                .ok_or_else(|| degenerate("quadratic design"))?
                .0[0]
        }
        ZneModel::Exp if points.len() == 2 => exp_two_point(&fs, &vs)?,
        ZneModel::Exp => exp_fit(&fs, &vs)?,
    };
    Ok(T::lit(out))
}

fn exp_two_point(fs: &[f64], vs: &[f64]) -> Result<f64> {
    let (f1, f2, v1, v2) = (fs[0], fs[1], vs[0], vs[1]);
    if v1 == v2 {
        return Ok(v1);
    }
    if v1 == 0.0 || v2 == 0.0 || (v1 > 0.0) != (v2 > 0.0) {
        return Err(degenerate("exponential through zero or a sign change"));
    }
    let b = (v1 / v2).ln() / (f2 - f1);
    Ok(v1 * (b * f1).exp())
}

/// Separable fit: for fixed decay `b` the offsets `(a, c)` are linear, so
/// scan `b`, then refine the best bracket by golden-section search.
fn exp_fit(fs: &[f64], vs: &[f64]) -> Result<f64> {
    let mean = vs.iter().sum::<f64>() / vs.len() as f64;
    if vs.iter().all(|&v| (v - mean).abs() <= 1e-15 * mean.abs().max(1.0)) {
        return Ok(mean);
    }
    let fmax = fs.iter().cloned().fold(0.0, f64::max);
    let eval = |b: f64| -> Option<(f64, f64)> {
        let (x, r) = lstsq(fs, vs, |f| vec![(-b * f).exp(), 1.0])?;
        Some((x[0] + x[1], r))
    };
    let grid: Vec<f64> = (0..=400)
        .map(|k| 1e-4 / fmax * (1e5f64).powf(k as f64 / 400.0))
        .collect();
    let mut best: Option<(usize, f64)> = None;
    for (k, &b) in grid.iter().enumerate() {
        if let Some((_, r)) = eval(b) {
            if best.map_or(true, |(_, br)| r < br) {
                best = Some((k, r));
            }
        }
    }
    let (k, _) = best.ok_or_else(|| degenerate("exponential design"))?;
    let lo = grid[k.saturating_sub(1)];
    let hi = grid[(k + 1).min(grid.len() - 1)];
    let resid = |b: f64| eval(b).map_or(f64::INFINITY, |e| e.1);
    let b = golden_min(resid, lo, hi);
    let (zero, _) = eval(b).ok_or_else(|| degenerate("exponential design"))?;
    Ok(zero)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
        if (b - a).abs() <= 1e-12 * (a.abs() + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}
