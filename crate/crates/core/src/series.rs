//! Small numeric helpers for the estimators: Aitken acceleration and least
//! squares fits.

/// Aitken's delta-squared transform. Entry `i` uses `s[i], s[i+1], s[i+2]`;
/// when the second difference vanishes the middle value is passed through.
pub fn aitken(s: &[f64]) -> Vec<f64> {
    s.windows(3)
        .map(|w| {
            let d1 = w[1] - w[0];
            let d2 = w[2] - 2.0 * w[1] + w[0];
            if d2.abs() <= 1e-300 || !d2.is_finite() {
                w[2]
            } else {
                w[0] - d1 * d1 / d2
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
}

/// Ordinary least squares `y = slope * x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    Some(LinearFit {
        slope,
        intercept,
        residual: (ss / nf).sqrt(),
    })
}

/// Least squares polynomial of degree `k`; returns coefficients (low to
/// high) and the largest residual relative to `|y|`.
pub fn poly_fit(xs: &[f64], ys: &[f64], k: usize) -> Option<(Vec<f64>, f64)> {
    let n = xs.len();
    if n <= k || ys.len() != n {
        return None;
    }
    // scale x to [0, 1] for conditioning
    let xmax = xs.iter().fold(0.0f64, |a, &b| a.max(b.abs())).max(1.0);
    let m = k + 1;
    let mut ata = vec![vec![0.0; m]; m];
    let mut aty = vec![0.0; m];
    for (x, y) in xs.iter().zip(ys) {
        let t = x / xmax;
        let pows: Vec<f64> = (0..m).map(|j| t.powi(j as i32)).collect();
        for i in 0..m {
            aty[i] += pows[i] * y;
            for j in 0..m {
                ata[i][j] += pows[i] * pows[j];
            }
        }
    }
    let coef_t = solve(ata, aty)?;
    let coef: Vec<f64> = coef_t
        .iter()
        .enumerate()
        .map(|(j, c)| c / xmax.powi(j as i32))
        .collect();
    let worst = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let fit: f64 = coef.iter().enumerate().map(|(j, c)| c * x.powi(j as i32)).sum();
            (fit - y).abs() / y.abs().max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max);
    Some((coef, worst))
}

fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for c in col..n {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}
