//! Euclidean projection onto the scaled simplex `{x ≥ 0, Σx = z}`.

/// Sort-and-threshold projection of `y` onto `{x ≥ 0, Σx = z}` with `z > 0`.
pub fn project_simplex(y: &[f64], z: f64) -> Vec<f64> {
    if y.is_empty() {
        return Vec::new();
    }
    let mut sorted = y.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - z) / (k as f64 + 1.0);
        if u - t > 0.0 {
            theta = t;
        }
    }
    y.iter().map(|&v| (v - theta).max(0.0)).collect()
}
