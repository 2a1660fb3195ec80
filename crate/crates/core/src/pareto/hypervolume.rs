//! Exact hypervolume by recursive slicing along the last objective.

use super::archive::cmp_vectors;
use super::dominance::{dominates_slice, ObjectiveVector};
use crate::error::{Error, Result};

/// Lebesgue measure of the union of boxes `[v, reference]`. Every vector must
/// be strictly below the reference in each component.
pub fn hypervolume(front: &[ObjectiveVector], reference: &ObjectiveVector) -> Result<f64> {
    let m = reference.dim();
    if m == 0 {
        return Err(Error::param("reference point must have at least one dimension"));
    }
    for v in front {
        if v.dim() != m {
            return Err(Error::param("front and reference dimensions differ"));
        }
        if v.0.iter().zip(&reference.0).any(|(x, r)| !(x < r)) {
            return Err(Error::param(format!(
                "point {:?} does not dominate reference {:?}",
                v.0, reference.0
            )));
        }
    }
    let mut pts: Vec<Vec<f64>> = front.iter().map(|v| v.0.clone()).collect();
    pts.sort_by(|a, b| cmp_vectors(a, b));
    pts.dedup();
    let pts: Vec<Vec<f64>> = pts
        .iter()
        .filter(|p| !pts.iter().any(|q| dominates_slice(q, p)))
        .cloned()
        .collect();
    Ok(slice_volume(&pts, &reference.0))
}

fn slice_volume(pts: &[Vec<f64>], reference: &[f64]) -> f64 {
    if pts.is_empty() {
        return 0.0;
    }
    let m = reference.len();
    if m == 1 {
        let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        return reference[0] - lo;
    }
    let last = m - 1;
    let mut order: Vec<&Vec<f64>> = pts.iter().collect();
    order.sort_by(|a, b| a[last].total_cmp(&b[last]).then_with(|| cmp_vectors(a, b)));
    let mut total = 0.0;
    let mut active: Vec<Vec<f64>> = Vec::new();
    for (k, p) in order.iter().enumerate() {
        active.push(p[..last].to_vec());
        let top = order.get(k + 1).map_or(reference[last], |q| q[last]);
        let height = top - p[last];
        if height > 0.0 {
            total += slice_volume(&active, &reference[..last]) * height;
        }
    }
    total
}
