//! Reference implementations that share no code with the library.

use nalgebra::{DMatrix, DVector};

/// Ridge weights by conjugate gradients on `(XᵀX + αI) w = Xᵀy`, one target
/// column at a time. `XᵀX` is never formed.
pub fn ridge_cg(x: &DMatrix<f64>, y: &DMatrix<f64>, alpha: f64) -> DMatrix<f64> {
    let p = x.ncols();
    let apply = |v: &DVector<f64>| x.tr_mul(&(x * v)) + v * alpha;
    let mut w = DMatrix::zeros(p, y.ncols());
    for k in 0..y.ncols() {
        let b = x.tr_mul(&y.column(k));
        let mut sol = DVector::zeros(p);
        let stop = 1e-15 * b.norm().max(1e-300);
        // restarted CG, each restart recomputes the true residual
        for _ in 0..20 {
            let mut r = &b - apply(&sol);
            if r.norm() <= stop {
                break;
            }
            let mut d = r.clone();
            let mut rr = r.norm_squared();
            for _ in 0..2 * p + 2 {
                let ad = apply(&d);
                let step = rr / d.dot(&ad);
                sol += &d * step;
                r -= &ad * step;
                let next = r.norm_squared();
                if next.sqrt() <= stop {
                    break;
                }
                d = &r + &d * (next / rr);
                rr = next;
            }
        }
        w.set_column(k, &sol);
    }
    w
}

/// Rank of each value: 1 + #smaller + (#equal - 1) / 2.
pub fn brute_ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|&a| {
            let less = v.iter().filter(|&&b| b < a).count() as f64;
            let equal = v.iter().filter(|&&b| b == a).count() as f64;
            1.0 + less + (equal - 1.0) / 2.0
        })
        .collect()
}

/// Pearson correlation from the pairwise-difference identity
/// `cov ∝ Σ_{i<j} (xi - xj)(yi - yj)`.
pub fn brute_pearson(x: &[f64], y: &[f64]) -> f64 {
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let (dx, dy) = (x[i] - x[j], y[i] - y[j]);
            sxy += dx * dy;
            sxx += dx * dx;
            syy += dy * dy;
        }
    }
    sxy / (sxx * syy).sqrt()
}

pub fn brute_spearman(x: &[f64], y: &[f64]) -> f64 {
    brute_pearson(&brute_ranks(x), &brute_ranks(y))
}

/// Student t CDF for integer degrees of freedom from the closed-form
/// trigonometric series.
pub fn t_cdf_integer_df(t: f64, df: u32) -> f64 {
    let nu = df as f64;
    let theta = (t.abs() / nu.sqrt()).atan();
    let (s, c) = theta.sin_cos();
    // central probability P(|T| < |t|)
    let central = if df % 2 == 1 {
        let mut sum = 0.0;
        if df > 1 {
            let mut term = c;
            sum = term;
            let mut k = 1.0;
            while 2.0 * k + 1.0 <= nu - 1.0 {
                term *= (2.0 * k) / (2.0 * k + 1.0) * c * c;
                sum += term;
                k += 1.0;
            }
        }
        2.0 / std::f64::consts::PI * (theta + s * sum)
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        while 2.0 * k <= nu - 2.0 {
            term *= (2.0 * k - 1.0) / (2.0 * k) * c * c;
            sum += term;
            k += 1.0;
        }
        s * sum
    };
    if t >= 0.0 {
        0.5 + 0.5 * central
    } else {
        0.5 - 0.5 * central
    }
}

fn ln_gamma_stirling(x: f64) -> f64 {
    // shift up so the asymptotic series is accurate, then shift back
    let mut shift = 0.0;
    let mut z = x;
    while z < 20.0 {
        shift += z.ln();
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift
}

/// Student t CDF by composite Simpson integration of the density, for any
/// positive `df`.
pub fn t_cdf_quadrature(t: f64, df: f64) -> f64 {
    let ln_norm = ln_gamma_stirling((df + 1.0) / 2.0)
        - ln_gamma_stirling(df / 2.0)
        - 0.5 * (df * std::f64::consts::PI).ln();
    let density = |u: f64| (ln_norm - (df + 1.0) / 2.0 * (1.0 + u * u / df).ln()).exp();
    let steps = 20_000;
    let h = t.abs() / steps as f64;
    let mut acc = density(0.0) + density(t.abs());
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * density(i as f64 * h);
    }
    let half = acc * h / 3.0;
    if t >= 0.0 {
        0.5 + half
    } else {
        0.5 - half
    }
}
