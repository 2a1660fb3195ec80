use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qos::QosVector;

/// Objective values, all minimized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectiveVector(pub Vec<f64>);

impl ObjectiveVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl From<&QosVector> for ObjectiveVector {
    /// `(delay, 1/(1+bandwidth), hops)`.
    fn from(q: &QosVector) -> Self {
        ObjectiveVector(q.objectives().to_vec())
    }
}

impl From<Vec<f64>> for ObjectiveVector {
    fn from(v: Vec<f64>) -> Self {
        ObjectiveVector(v)
    }
}

/// `a` is no worse than `b` everywhere and strictly better somewhere.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::param(format!("dimension mismatch: {} vs {}", a.dim(), b.dim())));
    }
    Ok(dominates_slice(&a.0, &b.0))
}

pub(crate) fn dominates_slice(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Fronts of indices into `vectors`: front 0 is non-dominated, front k is
/// non-dominated once fronts `0..k` are removed. Indices within a front are
/// ascending.
pub fn nondominated_sort(vectors: &[ObjectiveVector]) -> Vec<Vec<usize>> {
    let n = vectors.len();
    let mut dominated_by_count = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates_slice(&vectors[i].0, &vectors[j].0) {
                dominates_list[i].push(j);
                dominated_by_count[j] += 1;
            } else if dominates_slice(&vectors[j].0, &vectors[i].0) {
                dominates_list[j].push(i);
                dominated_by_count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates_list[i] {
                dominated_by_count[j] -= 1;
                if dominated_by_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// Per-dimension min-max scaling to `[0, 1]`; constant dimensions map to 0.
pub fn normalize(vectors: &[ObjectiveVector]) -> Vec<Vec<f64>> {
    let Some(first) = vectors.first() else {
        return Vec::new();
    };
    let m = first.dim();
    let mut lo = vec![f64::INFINITY; m];
    let mut hi = vec![f64::NEG_INFINITY; m];
    for v in vectors {
        for (k, &x) in v.0.iter().enumerate() {
            lo[k] = lo[k].min(x);
            hi[k] = hi[k].max(x);
        }
    }
    vectors
        .iter()
        .map(|v| {
            v.0.iter()
                .enumerate()
                .map(|(k, &x)| {
                    let span = hi[k] - lo[k];
                    if span > 0.0 {
                        (x - lo[k]) / span
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

/// Niche-shared fitness for the members of one front: `dummy / m_i` with
/// `m_i = Σ_j max(0, 1 - (d_ij / sigma_share)^2)` over the same front.
/// `normalized` is indexed by population position.
pub fn shared_fitness(front: &[usize], normalized: &[Vec<f64>], dummy: f64, sigma_share: f64) -> Vec<f64> {
    front
        .iter()
        .map(|&i| {
            let niche: f64 = front
                .iter()
                .map(|&j| {
                    let d = normalized[i]
                        .iter()
                        .zip(&normalized[j])
                        .map(|(a, b)| (a - b).powi(2))
                        .sum::<f64>()
                        .sqrt();
                    (1.0 - (d / sigma_share).powi(2)).max(0.0)
                })
                .sum();
            dummy / niche
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ov(v: &[f64]) -> ObjectiveVector {
        ObjectiveVector(v.to_vec())
    }

    #[test]
    fn dominance_cases() {
        assert!(dominates(&ov(&[3.0, 5.0]), &ov(&[4.0, 6.0])).unwrap());
        assert!(!dominates(&ov(&[3.0, 5.0]), &ov(&[3.0, 5.0])).unwrap());
        assert!(!dominates(&ov(&[3.0, 6.0]), &ov(&[4.0, 5.0])).unwrap());
        assert!(!dominates(&ov(&[4.0, 5.0]), &ov(&[3.0, 6.0])).unwrap());
        assert!(dominates(&ov(&[1.0]), &ov(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn sort_examples() {
        let v = [ov(&[1.0, 2.0]), ov(&[2.0, 1.0]), ov(&[2.0, 2.0]), ov(&[3.0, 3.0])];
        assert_eq!(nondominated_sort(&v), vec![vec![0, 1], vec![2], vec![3]]);
        let same = vec![ov(&[1.0, 1.0]); 4];
        assert_eq!(nondominated_sort(&same), vec![vec![0, 1, 2, 3]]);
        let chain = [ov(&[1.0, 1.0]), ov(&[2.0, 2.0]), ov(&[3.0, 3.0])];
        assert_eq!(nondominated_sort(&chain), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn sharing_examples() {
        let norm = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 0.0]];
        assert_eq!(shared_fitness(&[0], &norm, 7.0, 0.1), vec![7.0]);
        assert_eq!(shared_fitness(&[0, 1], &norm, 7.0, 0.1), vec![7.0, 7.0]);
        assert_eq!(shared_fitness(&[0, 2], &norm, 7.0, 0.1), vec![3.5, 3.5]);
    }

    #[test]
    fn normalize_handles_constant_dimension() {
        let n = normalize(&[ov(&[1.0, 5.0]), ov(&[3.0, 5.0]), ov(&[2.0, 5.0])]);
        assert_eq!(n, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 0.0]]);
    }

    fn vec3() -> impl Strategy<Value = ObjectiveVector> {
        proptest::collection::vec(0u8..4, 3).prop_map(|v| ObjectiveVector(v.into_iter().map(f64::from).collect()))
    }

    proptest! {
        #[test]
        fn dominance_is_a_strict_partial_order(a in vec3(), b in vec3(), c in vec3()) {
            prop_assert!(!dominates(&a, &a).unwrap());
            if dominates(&a, &b).unwrap() {
                prop_assert!(!dominates(&b, &a).unwrap());
                if dominates(&b, &c).unwrap() {
                    prop_assert!(dominates(&a, &c).unwrap());
                }
            }
        }
    }
}
