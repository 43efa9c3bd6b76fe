//! Oracles shared by the acceptance suite: small closed forms computed by
//! hand-rolled scalar arithmetic, independent of the library's kernels, so
//! the checks below them cannot inherit a library bug.

/// exp(α·J) for J = [[0,1],[−1,0]] — the rotation closed form
/// [[cos α, sin α], [−sin α, cos α]], entered directly from trigonometry.
pub fn rotation_exp(alpha: f64) -> Vec<Vec<f64>> {
    vec![
        vec![alpha.cos(), alpha.sin()],
        vec![-alpha.sin(), alpha.cos()],
    ]
}

/// Eigenvalues of [[a, b], [b, c]] in ascending order from the quadratic
/// formula: (a+c)/2 ∓ √(((a−c)/2)² + b²).
pub fn eig2_closed(a: f64, b: f64, c: f64) -> (f64, f64) {
    let mid = 0.5 * (a + c);
    let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    (mid - rad, mid + rad)
}

/// Frobenius inner product Σᵢⱼ xᵢⱼ·yᵢⱼ over nested rows.
pub fn inner_rows(x: &[Vec<f64>], y: &[Vec<f64>]) -> f64 {
    x.iter()
        .zip(y)
        .flat_map(|(rx, ry)| rx.iter().zip(ry).map(|(&a, &b)| a * b))
        .sum()
}

/// Determinant by first-row cofactor expansion over nested rows.
pub fn det_rows(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    if n == 1 {
        return rows[0][0];
    }
    let mut acc = 0.0;
    for j in 0..n {
        let minor: Vec<Vec<f64>> = rows[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter_map(|(k, &v)| (k != j).then_some(v))
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * rows[0][j] * det_rows(&minor);
    }
    acc
}

/// Directional derivative of det at a diagonal matrix toward 𝟙:
/// Σᵢ Πⱼ≠ᵢ aⱼ, written out as the plain double loop.
pub fn det_identity_direction_oracle(diag: &[f64]) -> f64 {
    (0..diag.len())
        .map(|i| {
            diag.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &v)| v)
                .product::<f64>()
        })
        .sum()
}
