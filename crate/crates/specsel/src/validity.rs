//! Cluster validity criteria: silhouette, eigenvalue gaps, Davies-Bouldin
//! and Calinski-Harabasz.
//!
//! Silhouette works directly on a distance matrix. Davies-Bouldin and
//! Calinski-Harabasz need coordinates and centroids, so they are evaluated
//! in the spectral embedding of the candidate count under test.

use crate::eigen::GapVector;
use crate::error::{Error, Result};
use crate::matrix::{AffinityMatrix, DistanceMatrix};
use crate::scalar::Scalar;
use crate::spectral::{ClusterAssignment, Embedding};

/// Per-cluster sizes, centroids and scatters, plus the global centroid.
#[derive(Debug, Clone)]
pub struct ClusterStats<T> {
    k: usize,
    dim: usize,
    sizes: Vec<usize>,
    /// Row-major `k x dim`.
    centroids: Vec<T>,
    global_centroid: Vec<T>,
    /// Mean member distance to the cluster centroid.
    scatters: Vec<T>,
    /// Total squared member distance to cluster centroids.
    within_sq: T,
}

impl<T: Scalar> ClusterStats<T> {
    pub fn compute(e: &Embedding<T>, labels: &ClusterAssignment) -> Result<Self> {
        if e.n() != labels.len() {
            return Err(Error::LengthMismatch { left: e.n(), right: labels.len() });
        }
        let n = e.n();
        let dim = e.dim();
        let k = labels.k();
        let sizes = labels.cluster_sizes();

        let mut centroids = vec![T::zero(); k * dim];
        let mut global_centroid = vec![T::zero(); dim];
        for (i, &l) in labels.labels().iter().enumerate() {
            for (c, &v) in e.row(i).iter().enumerate() {
                centroids[l * dim + c] += v;
                global_centroid[c] += v;
            }
        }
        for l in 0..k {
            let size = T::of(sizes[l] as f64);
            for c in 0..dim {
                centroids[l * dim + c] /= size;
            }
        }
        for c in global_centroid.iter_mut() {
            *c /= T::of(n as f64);
        }

        let mut scatters = vec![T::zero(); k];
        let mut within_sq = T::zero();
        for (i, &l) in labels.labels().iter().enumerate() {
            let d2 = dist_sq(e.row(i), &centroids[l * dim..(l + 1) * dim]);
            scatters[l] += d2.sqrt();
            within_sq += d2;
        }
        for l in 0..k {
            scatters[l] /= T::of(sizes[l] as f64);
        }

        Ok(Self { k, dim, sizes, centroids, global_centroid, scatters, within_sq })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn centroid(&self, l: usize) -> &[T] {
        &self.centroids[l * self.dim..(l + 1) * self.dim]
    }

    pub fn global_centroid(&self) -> &[T] {
        &self.global_centroid
    }

    pub fn scatters(&self) -> &[T] {
        &self.scatters
    }
}

fn dist_sq<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut sum = T::zero();
    for (x, y) in a.iter().zip(b) {
        let d = *x - *y;
        sum += d * d;
    }
    sum
}

fn require_multiple_clusters(k: usize, n: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::KOutOfRange { k, n, constraint: "at least 2 clusters" });
    }
    Ok(())
}

/// Mean silhouette score over all samples, in `[-1, 1]`.
///
/// For sample `i`, `a(i)` is the mean distance to the other members of its
/// cluster and `b(i)` the smallest mean distance to any other cluster;
/// `s(i) = (b - a) / max(a, b)`. Members of singleton clusters contribute 0,
/// as does a sample with `max(a, b) = 0`.
pub fn silhouette<T: Scalar>(d: &DistanceMatrix<T>, labels: &ClusterAssignment) -> Result<T> {
    let n = d.n();
    if n != labels.len() {
        return Err(Error::LengthMismatch { left: n, right: labels.len() });
    }
    require_multiple_clusters(labels.k(), n)?;
    let k = labels.k();
    let sizes = labels.cluster_sizes();

    // sums[i][c]: total distance from sample i to cluster c.
    let mut sums = vec![T::zero(); n * k];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = d.value(i, j);
            sums[i * k + labels.labels()[j]] += v;
            sums[j * k + labels.labels()[i]] += v;
        }
    }

    let mut total = T::zero();
    for i in 0..n {
        let own = labels.labels()[i];
        if sizes[own] == 1 {
            continue;
        }
        let a = sums[i * k + own] / T::of((sizes[own] - 1) as f64);
        let mut b = T::infinity();
        for c in 0..k {
            if c == own {
                continue;
            }
            let mean = sums[i * k + c] / T::of(sizes[c] as f64);
            if mean < b {
                b = mean;
            }
        }
        let denom = a.max(b);
        if denom > T::zero() {
            total += (b - a) / denom;
        }
    }
    Ok(total / T::of(n as f64))
}

/// Eigenvalue gaps of the graph Laplacian of `a`; gap `k` (1-based) scores
/// candidate count `k`.
pub fn eigengap_gaps<T: Scalar>(a: &AffinityMatrix<T>) -> Result<GapVector<T>> {
    Ok(a.laplacian().spectrum()?.gaps())
}

/// Davies-Bouldin index in embedding space; lower means better-separated,
/// tighter clusters.
///
/// Centroid pairs closer than [`Scalar::SEP_FLOOR`] score the clamped ratio
/// [`Scalar::RATIO_CEIL`].
pub fn davies_bouldin<T: Scalar>(e: &Embedding<T>, labels: &ClusterAssignment) -> Result<T> {
    require_multiple_clusters(labels.k(), e.n())?;
    let stats = ClusterStats::compute(e, labels)?;
    let k = stats.k();

    let mut total = T::zero();
    for i in 0..k {
        let mut worst = T::zero();
        for j in 0..k {
            if i == j {
                continue;
            }
            let sep = dist_sq(stats.centroid(i), stats.centroid(j)).sqrt();
            let ratio = if sep < T::SEP_FLOOR {
                T::RATIO_CEIL
            } else {
                (stats.scatters()[i] + stats.scatters()[j]) / sep
            };
            if ratio > worst {
                worst = ratio;
            }
        }
        total += worst;
    }
    Ok(total / T::of(k as f64))
}

/// Calinski-Harabasz variance-ratio index in embedding space; higher means
/// better-separated clusters.
///
/// Uses squared Euclidean distances. Zero within-cluster variance with
/// nonzero between-cluster variance yields [`Scalar::RATIO_CEIL`]; zero on
/// both sides yields 0.
pub fn calinski_harabasz<T: Scalar>(e: &Embedding<T>, labels: &ClusterAssignment) -> Result<T> {
    let n = e.n();
    let k = labels.k();
    require_multiple_clusters(k, n)?;
    if k >= n {
        return Err(Error::KOutOfRange { k, n, constraint: "k <= n - 1" });
    }
    let stats = ClusterStats::compute(e, labels)?;

    let mut between = T::zero();
    for l in 0..k {
        between += T::of(stats.sizes()[l] as f64) * dist_sq(stats.centroid(l), stats.global_centroid());
    }
    let within = stats.within_sq;

    if within <= T::SEP_FLOOR {
        return Ok(if between > T::SEP_FLOOR { T::RATIO_CEIL } else { T::zero() });
    }
    let df_between = T::of((k - 1) as f64);
    let df_within = T::of((n - k) as f64);
    Ok((between / df_between) / (within / df_within))
}
