//! Small dense vector helpers over `&[f64]`. Dimensions here are desk-scale
//! (d up to a few dozen), so plain slices beat a matrix library.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], k: f64) -> Vec<f64> {
    a.iter().map(|x| k * x).collect()
}

/// `a + k*b`, the workhorse of projections.
pub fn axpy(a: &[f64], k: f64, b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + k * y).collect()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let t = x - y;
            t * t
        })
        .sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist_sq(a, b).sqrt()
}

/// Unit vector in the direction of `a`; `None` when `|a|` is numerically zero.
pub fn unit(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n <= 1e-300 {
        None
    } else {
        Some(scale(a, 1.0 / n))
    }
}

/// Orthonormal basis of the hyperplane orthogonal to `normal` (d-1 vectors).
///
/// Gram-Schmidt seeded from the coordinate axes ordered by increasing
/// alignment with the normal, ties broken by axis index, so the frame is a
/// deterministic function of the normal.
pub fn orthonormal_frame(normal: &[f64]) -> Vec<Vec<f64>> {
    let d = normal.len();
    let mut axes: Vec<usize> = (0..d).collect();
    axes.sort_by(|&a, &b| {
        normal[a]
            .abs()
            .partial_cmp(&normal[b].abs())
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(d.saturating_sub(1));
    for &ax in &axes {
        if frame.len() + 1 == d {
            break;
        }
        let mut v = vec![0.0; d];
        v[ax] = 1.0;
        let v = orthogonalize(&v, normal, &frame);
        if let Some(u) = unit(&v) {
            frame.push(u);
        }
    }
    frame
}

fn orthogonalize(v: &[f64], normal: &[f64], frame: &[Vec<f64>]) -> Vec<f64> {
    let mut out = axpy(v, -dot(v, normal), normal);
    for f in frame {
        out = axpy(&out, -dot(&out, f), f);
    }
    out
}
