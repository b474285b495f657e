//! Spectral embedding and seeded k-means.
//!
//! The embedding stacks the eigenvectors of the normalized Laplacian for the
//! k smallest eigenvalues and row-normalizes (Ng-Jordan-Weiss). Clustering is
//! Lloyd's algorithm with k-means++ seeding, restarted a fixed number of
//! times with derived sub-seeds so results are reproducible bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eigen::Spectrum;
use crate::error::{Error, Result};
use crate::matrix::AffinityMatrix;
use crate::scalar::Scalar;

const RESTARTS: u64 = 10;
const MAX_ITERS: usize = 300;

/// Samples as points in a k-dimensional spectral coordinate space.
///
/// Rows produced by [`spectral_embed`] have unit norm; rows whose
/// pre-normalization norm fell below [`Scalar::NORM_FLOOR`] are left at zero
/// and listed in `zero_rows`. Directly constructed embeddings may hold
/// arbitrary coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding<T> {
    n: usize,
    dim: usize,
    coords: Vec<T>,
    zero_rows: Vec<usize>,
}

impl<T: Scalar> Embedding<T> {
    /// Wraps row-major coordinates without normalizing them.
    pub fn from_coords(n: usize, dim: usize, coords: Vec<T>) -> Result<Self> {
        if n == 0 || dim == 0 {
            return Err(Error::EmptyInput("embedding"));
        }
        if coords.len() != n * dim {
            return Err(Error::BadShape { n, expected: n * dim, len: coords.len() });
        }
        Ok(Self { n, dim, coords, zero_rows: Vec::new() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    /// Rows left at zero because their eigenvector mass vanished.
    pub fn zero_rows(&self) -> &[usize] {
        &self.zero_rows
    }
}

/// Per-sample cluster labels in `[0, k)` with no empty cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterAssignment {
    labels: Vec<usize>,
    k: usize,
}

impl ClusterAssignment {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if labels.is_empty() || k == 0 {
            return Err(Error::EmptyInput("cluster assignment"));
        }
        let mut seen = vec![false; k];
        for (index, &label) in labels.iter().enumerate() {
            if label >= k {
                return Err(Error::LabelOutOfRange { index, label, k });
            }
            seen[label] = true;
        }
        if let Some(label) = seen.iter().position(|s| !s) {
            return Err(Error::EmptyCluster { label });
        }
        Ok(Self { labels, k })
    }

    /// Builds an assignment from raw ids, remapping them onto a dense
    /// `0..k` range in order of first appearance by id value.
    pub fn from_labels(raw: &[usize]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyInput("cluster assignment"));
        }
        let mut ids: Vec<usize> = raw.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let labels = raw
            .iter()
            .map(|v| ids.binary_search(v).expect("id present"))
            .collect();
        Self::new(labels, ids.len())
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }
}

/// Embedding from a precomputed Laplacian spectrum: the eigenvectors for the
/// `k` smallest eigenvalues as columns, rows normalized to unit length.
pub fn embed_from_spectrum<T: Scalar>(spectrum: &Spectrum<T>, k: usize) -> Result<Embedding<T>> {
    let n = spectrum.n();
    if k < 1 || k > n {
        return Err(Error::KOutOfRange { k, n, constraint: "1 <= k <= n" });
    }
    let mut coords = vec![T::zero(); n * k];
    let mut zero_rows = Vec::new();
    for i in 0..n {
        let mut norm_sq = T::zero();
        for c in 0..k {
            let v = spectrum.eigenvector_entry(i, c);
            coords[i * k + c] = v;
            norm_sq += v * v;
        }
        let norm = norm_sq.sqrt();
        if norm < T::NORM_FLOOR {
            for c in 0..k {
                coords[i * k + c] = T::zero();
            }
            zero_rows.push(i);
        } else {
            for c in 0..k {
                coords[i * k + c] /= norm;
            }
        }
    }
    Ok(Embedding { n, dim: k, coords, zero_rows })
}

/// Spectral embedding of an affinity matrix at candidate count `k`.
pub fn spectral_embed<T: Scalar>(a: &AffinityMatrix<T>, k: usize) -> Result<Embedding<T>> {
    let n = a.n();
    if k < 2 || k >= n {
        return Err(Error::KOutOfRange { k, n, constraint: "2 <= k < n" });
    }
    let spectrum = a.laplacian().spectrum()?;
    embed_from_spectrum(&spectrum, k)
}

/// Lloyd's k-means with k-means++ seeding.
///
/// Runs 10 restarts with sub-seeds `seed + restart`, up to 300 iterations
/// each, stopping when no centroid moves farther than
/// [`Scalar::KMEANS_TOL`]; the restart with the lowest within-cluster sum of
/// squares wins. Empty clusters are repaired by moving the point farthest
/// from its centroid. Deterministic given `seed`.
pub fn kmeans<T: Scalar>(e: &Embedding<T>, k: usize, seed: u64) -> Result<ClusterAssignment> {
    let n = e.n();
    if k < 1 || k > n {
        return Err(Error::KOutOfRange { k, n, constraint: "1 <= k <= n" });
    }

    let mut best: Option<(T, Vec<usize>)> = None;
    for restart in 0..RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart));
        let (wcss, labels) = lloyd(e, k, &mut rng);
        let better = match &best {
            None => true,
            Some((best_wcss, _)) => wcss < *best_wcss,
        };
        if better {
            best = Some((wcss, labels));
        }
    }

    let (_, labels) = best.expect("at least one restart ran");
    ClusterAssignment::new(labels, k)
}

/// Spectral clustering at a fixed `k`: embed, then k-means.
pub fn spectral_cluster<T: Scalar>(a: &AffinityMatrix<T>, k: usize, seed: u64) -> Result<ClusterAssignment> {
    let e = spectral_embed(a, k)?;
    kmeans(&e, k, seed)
}

fn dist_sq<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut sum = T::zero();
    for (x, y) in a.iter().zip(b) {
        let d = *x - *y;
        sum += d * d;
    }
    sum
}

fn lloyd<T: Scalar>(e: &Embedding<T>, k: usize, rng: &mut ChaCha8Rng) -> (T, Vec<usize>) {
    let n = e.n();
    let dim = e.dim();
    let mut centers = plus_plus_init(e, k, rng);
    let mut labels = vec![0usize; n];

    for _ in 0..MAX_ITERS {
        assign(e, &centers, &mut labels);
        repair_empty_clusters(e, k, &centers, &mut labels);

        let mut new_centers = vec![T::zero(); k * dim];
        let mut sizes = vec![0usize; k];
        for (i, &l) in labels.iter().enumerate() {
            sizes[l] += 1;
            for c in 0..dim {
                new_centers[l * dim + c] += e.row(i)[c];
            }
        }
        for l in 0..k {
            let size = T::of(sizes[l] as f64);
            for c in 0..dim {
                new_centers[l * dim + c] /= size;
            }
        }

        let mut shift = T::zero();
        for l in 0..k {
            shift = shift.max(dist_sq(&centers[l * dim..(l + 1) * dim], &new_centers[l * dim..(l + 1) * dim]).sqrt());
        }
        centers = new_centers;
        if shift < T::KMEANS_TOL {
            break;
        }
    }

    assign(e, &centers, &mut labels);
    repair_empty_clusters(e, k, &centers, &mut labels);
    let mut wcss = T::zero();
    for (i, &l) in labels.iter().enumerate() {
        wcss += dist_sq(e.row(i), &centers[l * dim..(l + 1) * dim]);
    }
    (wcss, labels)
}

fn assign<T: Scalar>(e: &Embedding<T>, centers: &[T], labels: &mut [usize]) {
    let dim = e.dim();
    let k = centers.len() / dim;
    for (i, label) in labels.iter_mut().enumerate() {
        let mut best = 0usize;
        let mut best_d = dist_sq(e.row(i), &centers[0..dim]);
        for l in 1..k {
            let d = dist_sq(e.row(i), &centers[l * dim..(l + 1) * dim]);
            if d < best_d {
                best_d = d;
                best = l;
            }
        }
        *label = best;
    }
}

/// Moves the farthest point of a multi-member cluster into each empty
/// cluster until none remain. With `k <= n` a donor always exists.
fn repair_empty_clusters<T: Scalar>(e: &Embedding<T>, k: usize, centers: &[T], labels: &mut [usize]) {
    let dim = e.dim();
    let mut sizes = vec![0usize; k];
    for &l in labels.iter() {
        sizes[l] += 1;
    }
    while let Some(empty) = sizes.iter().position(|&s| s == 0) {
        let mut donor: Option<(T, usize)> = None;
        for (i, &l) in labels.iter().enumerate() {
            if sizes[l] < 2 {
                continue;
            }
            let d = dist_sq(e.row(i), &centers[l * dim..(l + 1) * dim]);
            let better = match &donor {
                None => true,
                Some((best_d, _)) => d > *best_d,
            };
            if better {
                donor = Some((d, i));
            }
        }
        let (_, i) = donor.expect("a cluster with at least two members exists");
        sizes[labels[i]] -= 1;
        labels[i] = empty;
        sizes[empty] += 1;
    }
}

/// k-means++: first center uniform, every further center drawn with
/// probability proportional to the squared distance to the nearest chosen
/// center.
fn plus_plus_init<T: Scalar>(e: &Embedding<T>, k: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    let n = e.n();
    let dim = e.dim();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let first = rng.random_range(0..n as u64) as usize;
    chosen.push(first);

    let mut d2: Vec<T> = (0..n).map(|i| dist_sq(e.row(i), e.row(first))).collect();
    while chosen.len() < k {
        let total: T = d2.iter().copied().sum();
        let next = if total > T::zero() && total.is_finite() {
            let u = T::of(rng.random::<f64>()) * total;
            let mut cum = T::zero();
            let mut pick = None;
            for (i, &w) in d2.iter().enumerate() {
                cum += w;
                if cum > u {
                    pick = Some(i);
                    break;
                }
            }
            // Rounding may leave the final cumulative sum below `total`;
            // fall back to the last positive-weight index.
            pick.unwrap_or_else(|| d2.iter().rposition(|&w| w > T::zero()).expect("total > 0"))
        } else {
            (0..n).find(|i| !chosen.contains(i)).expect("k <= n leaves an unchosen point")
        };
        chosen.push(next);
        for (i, nearest) in d2.iter_mut().enumerate() {
            let d = dist_sq(e.row(i), e.row(next));
            if d < *nearest {
                *nearest = d;
            }
        }
    }

    let mut centers = vec![T::zero(); k * dim];
    for (l, &i) in chosen.iter().enumerate() {
        centers[l * dim..(l + 1) * dim].copy_from_slice(e.row(i));
    }
    centers
}
