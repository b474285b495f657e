//! Cluster-count selection: per-criterion confidence scores over a candidate
//! range and the strategies that turn them into a single count.
//!
//! For every candidate `k` the matrix is clustered and each criterion scored.
//! Raw scores are mapped to confidences in `[0, 1]`: min-max over the range
//! for silhouette and Calinski-Harabasz (higher is better), negated min-max
//! for Davies-Bouldin (lower is better), and for the eigenvalue gaps a
//! closeness score `1 - |k - k*| / (k_max - k_min)` around the largest gap
//! `k*`. The Average strategy picks the `k` with the highest mean confidence.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{fuse, AffinityMatrix, Normalization};
use crate::scalar::Scalar;
use crate::spectral::{embed_from_spectrum, kmeans};
use crate::validity::{calinski_harabasz, davies_bouldin, silhouette};

/// Inclusive candidate range `[k_min, k_max]` with `k_min >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KRange {
    k_min: usize,
    k_max: usize,
}

impl KRange {
    pub fn new(k_min: usize, k_max: usize) -> Result<Self> {
        if k_min < 2 || k_max < k_min {
            return Err(Error::InvalidRange { k_min, k_max });
        }
        Ok(Self { k_min, k_max })
    }

    /// The range must leave at least one sample outside every cluster.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        if self.k_max >= n {
            return Err(Error::RangeExceedsN { k_min: self.k_min, k_max: self.k_max, n });
        }
        Ok(())
    }

    pub fn k_min(&self) -> usize {
        self.k_min
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn len(&self) -> usize {
        self.k_max - self.k_min + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        self.k_min..=self.k_max
    }

    pub fn contains(&self, k: usize) -> bool {
        (self.k_min..=self.k_max).contains(&k)
    }

    /// Position of `k` within the range.
    pub fn index_of(&self, k: usize) -> Option<usize> {
        self.contains(k).then(|| k - self.k_min)
    }
}

/// The four selection criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Silhouette,
    Eigengap,
    DaviesBouldin,
    CalinskiHarabasz,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [
        Criterion::Silhouette,
        Criterion::Eigengap,
        Criterion::DaviesBouldin,
        Criterion::CalinskiHarabasz,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Criterion::Silhouette => "silhouette",
            Criterion::Eigengap => "eigengap",
            Criterion::DaviesBouldin => "db",
            Criterion::CalinskiHarabasz => "ch",
        }
    }

    fn index(&self) -> usize {
        match self {
            Criterion::Silhouette => 0,
            Criterion::Eigengap => 1,
            Criterion::DaviesBouldin => 2,
            Criterion::CalinskiHarabasz => 3,
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How to turn a confidence table into one selected count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionStrategy {
    /// Highest mean confidence across the four criteria.
    Average,
    /// Each criterion votes its favorite; unique mode wins, otherwise the
    /// smaller median of the sorted votes.
    Voting,
    /// Uniform draw from the range; ignores the scores.
    Random,
    /// Highest confidence of one criterion.
    Single(Criterion),
}

impl fmt::Display for SelectionStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelectionStrategy::Average => f.write_str("average"),
            SelectionStrategy::Voting => f.write_str("voting"),
            SelectionStrategy::Random => f.write_str("random"),
            SelectionStrategy::Single(c) => f.write_str(c.name()),
        }
    }
}

impl FromStr for SelectionStrategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "average" => Ok(SelectionStrategy::Average),
            "voting" => Ok(SelectionStrategy::Voting),
            "random" => Ok(SelectionStrategy::Random),
            "silhouette" => Ok(SelectionStrategy::Single(Criterion::Silhouette)),
            "eigengap" => Ok(SelectionStrategy::Single(Criterion::Eigengap)),
            "db" | "davies-bouldin" => Ok(SelectionStrategy::Single(Criterion::DaviesBouldin)),
            "ch" | "calinski-harabasz" => Ok(SelectionStrategy::Single(Criterion::CalinskiHarabasz)),
            other => Err(format!(
                "unknown strategy {other:?}; expected average, voting, random, silhouette, eigengap, db or ch"
            )),
        }
    }
}

/// Raw criterion scores and normalized confidences over a candidate range.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceTable<T> {
    range: KRange,
    /// Indexed by [`Criterion::index`], then by position in the range.
    raw: [Vec<T>; 4],
    normalized: [Vec<T>; 4],
    average: Vec<T>,
}

impl<T: Scalar> ConfidenceTable<T> {
    /// Normalizes raw scores into confidences.
    ///
    /// A single-candidate range gets confidence 1 everywhere; a criterion
    /// whose raw scores are constant over a wider range gets the neutral 0.5.
    /// The eigengap entry of `raw` holds the gap value at each candidate.
    pub fn from_raw(range: KRange, raw: [Vec<T>; 4]) -> Result<Self> {
        for scores in &raw {
            if scores.len() != range.len() {
                return Err(Error::LengthMismatch { left: scores.len(), right: range.len() });
            }
        }
        let m = range.len();

        let normalized = if m == 1 {
            [vec![T::one()], vec![T::one()], vec![T::one()], vec![T::one()]]
        } else {
            [
                min_max_normalize(&raw[0], true),
                eigengap_confidence(&raw[1], range),
                min_max_normalize(&raw[2], false),
                min_max_normalize(&raw[3], true),
            ]
        };

        let quarter = T::of(0.25);
        let average = (0..m)
            .map(|i| {
                (normalized[0][i] + normalized[1][i] + normalized[2][i] + normalized[3][i]) * quarter
            })
            .collect();

        Ok(Self { range, raw, normalized, average })
    }

    pub fn range(&self) -> KRange {
        self.range
    }

    pub fn raw(&self, criterion: Criterion) -> &[T] {
        &self.raw[criterion.index()]
    }

    pub fn normalized(&self, criterion: Criterion) -> &[T] {
        &self.normalized[criterion.index()]
    }

    /// Mean of the four confidences per candidate.
    pub fn average(&self) -> &[T] {
        &self.average
    }

    /// Favorite candidate of one criterion, ties toward the smaller count.
    pub fn argmax(&self, criterion: Criterion) -> usize {
        self.range.k_min() + argmax_first(&self.normalized[criterion.index()])
    }
}

/// Index of the maximum, first occurrence on ties.
fn argmax_first<T: Scalar>(scores: &[T]) -> usize {
    let mut best = 0usize;
    for (i, &v) in scores.iter().enumerate().skip(1) {
        if v > scores[best] {
            best = i;
        }
    }
    best
}

fn min_max_normalize<T: Scalar>(raw: &[T], higher_is_better: bool) -> Vec<T> {
    let min = raw.iter().copied().fold(T::infinity(), T::min);
    let max = raw.iter().copied().fold(T::neg_infinity(), T::max);
    if max == min {
        return vec![T::of(0.5); raw.len()];
    }
    let span = max - min;
    raw.iter()
        .map(|&v| if higher_is_better { (v - min) / span } else { (max - v) / span })
        .collect()
}

/// Closeness to the largest gap: `1 - |k - k*| / (k_max - k_min)`.
fn eigengap_confidence<T: Scalar>(gaps: &[T], range: KRange) -> Vec<T> {
    let best = range.k_min() + argmax_first(gaps);
    let span = T::of((range.k_max() - range.k_min()) as f64);
    range
        .iter()
        .map(|k| {
            let dist = T::of(k.abs_diff(best) as f64);
            T::one() - dist / span
        })
        .collect()
}

/// Scores every candidate count in `range` on `a`.
///
/// The Laplacian spectrum is computed once and shared: candidate `k` is
/// clustered on its own k-dimensional embedding with sub-seed `seed + k`,
/// silhouette is evaluated on the complement distance matrix,
/// Davies-Bouldin and Calinski-Harabasz on the embedding, and the eigengap
/// raw score is the gap at `k`. Failures carry the offending `k`.
pub fn confidence_table<T: Scalar>(
    a: &AffinityMatrix<T>,
    range: KRange,
    seed: u64,
) -> Result<ConfidenceTable<T>> {
    range.validate_for(a.n())?;
    let spectrum = a.laplacian().spectrum()?;
    let gaps = spectrum.gaps();
    let distance = a.to_distance();

    let mut raw_sil = Vec::with_capacity(range.len());
    let mut raw_gap = Vec::with_capacity(range.len());
    let mut raw_db = Vec::with_capacity(range.len());
    let mut raw_ch = Vec::with_capacity(range.len());
    for k in range.iter() {
        let sub_seed = seed.wrapping_add(k as u64);
        let scored = || -> Result<(T, T, T)> {
            let embedding = embed_from_spectrum(&spectrum, k)?;
            let labels = kmeans(&embedding, k, sub_seed)?;
            Ok((
                silhouette(&distance, &labels)?,
                davies_bouldin(&embedding, &labels)?,
                calinski_harabasz(&embedding, &labels)?,
            ))
        };
        let (sil, db, ch) = scored().map_err(|e| e.at_k(k))?;
        raw_sil.push(sil);
        raw_gap.push(gaps.at_k(k));
        raw_db.push(db);
        raw_ch.push(ch);
    }

    ConfidenceTable::from_raw(range, [raw_sil, raw_gap, raw_db, raw_ch])
}

/// Uniform draw from the range, deterministic given `seed`.
pub fn random_k(range: KRange, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = (range.k_max() - range.k_min()) as u64;
    range.k_min() + rng.random_range(0..=span) as usize
}

/// Applies a selection strategy to a confidence table.
pub fn select_k<T: Scalar>(table: &ConfidenceTable<T>, strategy: SelectionStrategy, seed: u64) -> usize {
    match strategy {
        SelectionStrategy::Average => table.range().k_min() + argmax_first(table.average()),
        SelectionStrategy::Single(criterion) => table.argmax(criterion),
        SelectionStrategy::Random => random_k(table.range(), seed),
        SelectionStrategy::Voting => {
            let mut votes: Vec<usize> = Criterion::ALL.iter().map(|c| table.argmax(*c)).collect();
            votes.sort_unstable();
            match unique_mode(&votes) {
                Some(winner) => winner,
                // No unique mode: the smaller of the two middle votes.
                None => votes[votes.len() / 2 - 1],
            }
        }
    }
}

/// The single most frequent value, if one exists.
fn unique_mode(sorted: &[usize]) -> Option<usize> {
    let mut best_value = sorted[0];
    let mut best_count = 0usize;
    let mut tied = false;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let count = j - i;
        if count > best_count {
            best_count = count;
            best_value = sorted[i];
            tied = false;
        } else if count == best_count {
            tied = true;
        }
        i = j;
    }
    (!tied).then_some(best_value)
}

/// Fuses affinity views for selection: a single view passes through
/// unchanged, several views are mean-fused with degree normalization.
pub fn fuse_views<T: Scalar>(views: &[AffinityMatrix<T>]) -> Result<AffinityMatrix<T>> {
    match views {
        [] => Err(Error::EmptyInput("affinity views")),
        [single] => Ok(single.clone()),
        many => fuse(many, Normalization::Degree),
    }
}

/// End-to-end selection over one or more affinity views.
pub fn select_for_views<T: Scalar>(
    views: &[AffinityMatrix<T>],
    range: KRange,
    strategy: SelectionStrategy,
    seed: u64,
) -> Result<usize> {
    let fused = fuse_views(views)?;
    let table = confidence_table(&fused, range, seed)?;
    Ok(select_k(&table, strategy, seed))
}
