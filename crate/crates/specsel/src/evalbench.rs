//! Evaluation harness: prediction metrics, the clustering error rate, a
//! planted-block affinity generator, and manifest-driven benchmark runs.
//!
//! File formats owned here: LBL-1 label files (one 0-based integer id per
//! line), MAN-1 manifests (CSV with header `id,gt_k,labels,affinities`,
//! affinity paths separated by `;`, paths relative to the manifest), and the
//! report output (one CSV row per sequence followed by `# aggregate` and
//! `# breakdown` rows, floats with 6 decimals).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::AffinityMatrix;
use crate::scalar::Scalar;
use crate::selection::{confidence_table, fuse_views, random_k, select_k, KRange, SelectionStrategy};
use crate::spectral::{spectral_cluster, ClusterAssignment};

/// Mean squared error of predicted counts against ground truth.
pub fn mse(pred: &[usize], gt: &[usize]) -> Result<f64> {
    check_paired(pred, gt)?;
    let total: f64 = pred
        .iter()
        .zip(gt)
        .map(|(&p, &g)| {
            let d = p as f64 - g as f64;
            d * d
        })
        .sum();
    Ok(total / pred.len() as f64)
}

/// Percentage of exactly correct count predictions.
pub fn exact_accuracy(pred: &[usize], gt: &[usize]) -> Result<f64> {
    check_paired(pred, gt)?;
    let hits = pred.iter().zip(gt).filter(|(p, g)| p == g).count();
    Ok(100.0 * hits as f64 / pred.len() as f64)
}

fn check_paired(pred: &[usize], gt: &[usize]) -> Result<()> {
    if pred.is_empty() {
        return Err(Error::EmptyInput("predictions"));
    }
    if pred.len() != gt.len() {
        return Err(Error::LengthMismatch { left: pred.len(), right: gt.len() });
    }
    Ok(())
}

/// Percentage of samples outside the best one-to-one correspondence between
/// predicted and ground-truth clusters.
///
/// The confusion matrix is zero-padded to square and matched with the
/// Hungarian method; unmatched clusters contribute all their samples as
/// errors.
pub fn error_rate(pred: &ClusterAssignment, gt: &ClusterAssignment) -> Result<f64> {
    let n = pred.len();
    if n != gt.len() {
        return Err(Error::LengthMismatch { left: n, right: gt.len() });
    }
    let side = pred.k().max(gt.k());
    let mut confusion = vec![0i64; side * side];
    for (&p, &g) in pred.labels().iter().zip(gt.labels()) {
        confusion[p * side + g] += 1;
    }
    let matched = max_agreement(&confusion, side);
    Ok(100.0 * (n as i64 - matched) as f64 / n as f64)
}

/// Maximum total agreement over one-to-one row/column matchings of a square
/// matrix, via the Hungarian algorithm on negated entries.
fn max_agreement(agreement: &[i64], side: usize) -> i64 {
    // Potentials-based shortest augmenting path; O(side^3).
    let inf = i64::MAX / 4;
    let mut u = vec![0i64; side + 1];
    let mut v = vec![0i64; side + 1];
    let mut matched_row = vec![0usize; side + 1];
    let mut way = vec![0usize; side + 1];

    for i in 1..=side {
        matched_row[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; side + 1];
        let mut used = vec![false; side + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=side {
                if used[j] {
                    continue;
                }
                let cur = -agreement[(i0 - 1) * side + (j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=side {
                if used[j] {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    (1..=side)
        .map(|j| {
            let i = matched_row[j];
            agreement[(i - 1) * side + (j - 1)]
        })
        .sum()
}

/// Parameters of the planted-block affinity generator.
///
/// Within-block entries are drawn uniformly from `[within_low, within_high]`
/// and cross-block entries from `[cross_low, cross_high]`; cross bounds must
/// not exceed within bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthSpec {
    pub k: usize,
    pub per_cluster: usize,
    pub within_low: f64,
    pub within_high: f64,
    pub cross_low: f64,
    pub cross_high: f64,
    pub seed: u64,
}

impl SynthSpec {
    pub fn new(
        k: usize,
        per_cluster: usize,
        within_low: f64,
        within_high: f64,
        cross_low: f64,
        cross_high: f64,
        seed: u64,
    ) -> Result<Self> {
        if k < 2 {
            return Err(Error::BadSynthSpec(format!("need k >= 2, got {k}")));
        }
        if per_cluster < 2 {
            return Err(Error::BadSynthSpec(format!("need per_cluster >= 2, got {per_cluster}")));
        }
        let ordered = 0.0 <= cross_low
            && cross_low <= cross_high
            && cross_high <= within_low
            && within_low <= within_high
            && within_high <= 1.0;
        if !ordered {
            return Err(Error::BadSynthSpec(format!(
                "need 0 <= cross [{cross_low}, {cross_high}] <= within [{within_low}, {within_high}] <= 1"
            )));
        }
        Ok(Self { k, per_cluster, within_low, within_high, cross_low, cross_high, seed })
    }

    pub fn n(&self) -> usize {
        self.k * self.per_cluster
    }
}

/// Draws a planted-block affinity matrix and its block labels.
///
/// The upper triangle is drawn and mirrored, the diagonal is 1;
/// deterministic given the seed.
pub fn generate_block_affinity<T: Scalar>(spec: &SynthSpec) -> (AffinityMatrix<T>, ClusterAssignment) {
    let n = spec.n();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut values = vec![T::zero(); n * n];
    for i in 0..n {
        values[i * n + i] = T::one();
        for j in (i + 1)..n {
            let (lo, hi) = if i / spec.per_cluster == j / spec.per_cluster {
                (spec.within_low, spec.within_high)
            } else {
                (spec.cross_low, spec.cross_high)
            };
            let v = T::of(lo + rng.random::<f64>() * (hi - lo));
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    let matrix = AffinityMatrix::from_values(n, values).expect("generated matrix satisfies invariants");
    let labels: Vec<usize> = (0..n).map(|i| i / spec.per_cluster).collect();
    let assignment = ClusterAssignment::new(labels, spec.k).expect("planted blocks are nonempty");
    (matrix, assignment)
}

/// One benchmark sequence: affinity views on disk plus ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceRecord {
    pub id: String,
    pub affinity_paths: Vec<PathBuf>,
    pub gt_k: usize,
    pub gt_labels_path: Option<PathBuf>,
}

/// Reads a MAN-1 manifest; paths resolve relative to the manifest directory.
pub fn read_manifest<P: AsRef<Path>>(path: P) -> Result<Vec<SequenceRecord>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
    let dir = path.parent().unwrap_or_else(|| Path::new(""));
    let err = |line: usize, msg: String| Error::Parse { path: path.into(), line, msg };

    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty manifest".into()))?;
    if header.trim() != "id,gt_k,labels,affinities" {
        return Err(err(1, format!("expected header id,gt_k,labels,affinities, got {header:?}")));
    }

    let mut records = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(err(line_no, format!("expected 4 fields, got {}", fields.len())));
        }
        let id = fields[0].trim();
        if id.is_empty() {
            return Err(err(line_no, "empty sequence id".into()));
        }
        let gt_k: usize = fields[1]
            .trim()
            .parse()
            .map_err(|_| err(line_no, format!("invalid gt_k {:?}", fields[1])))?;
        if gt_k < 1 {
            return Err(err(line_no, "gt_k must be at least 1".into()));
        }
        let gt_labels_path = {
            let f = fields[2].trim();
            (!f.is_empty()).then(|| dir.join(f))
        };
        let affinity_paths: Vec<PathBuf> = fields[3]
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| dir.join(s))
            .collect();
        if affinity_paths.is_empty() {
            return Err(err(line_no, "at least one affinity path is required".into()));
        }
        records.push(SequenceRecord {
            id: id.to_string(),
            affinity_paths,
            gt_k,
            gt_labels_path,
        });
    }
    Ok(records)
}

/// Reads an LBL-1 label file into a dense cluster assignment.
pub fn read_labels<P: AsRef<Path>>(path: P) -> Result<ClusterAssignment> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
    let mut raw = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let id: usize = line.trim().parse().map_err(|_| Error::Parse {
            path: path.into(),
            line: idx + 1,
            msg: format!("invalid label {line:?}"),
        })?;
        raw.push(id);
    }
    ClusterAssignment::from_labels(&raw).map_err(|e| e.in_file(path.into()))
}

/// Serializes labels in LBL-1 format.
pub fn labels_to_string(labels: &ClusterAssignment) -> String {
    let mut out = String::new();
    for &l in labels.labels() {
        let _ = writeln!(out, "{l}");
    }
    out
}

/// Per-sequence evaluation result.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceOutcome {
    pub id: String,
    pub gt_k: usize,
    pub predicted_k: usize,
    pub squared_error: f64,
    pub exact: bool,
    /// Only when the sequence has ground-truth labels.
    pub error_rate: Option<f64>,
    /// Error rate of clustering directly at `gt_k`.
    pub baseline_error_rate: Option<f64>,
}

/// A sequence that could not be evaluated; excluded from aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceFailure {
    pub id: String,
    pub message: String,
}

/// Aggregates for one ground-truth count.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakdownRow {
    pub gt_k: usize,
    pub count: usize,
    pub mse: f64,
    pub mean_error_rate: Option<f64>,
    pub baseline_mean_error_rate: Option<f64>,
}

/// Full benchmark result: per-sequence rows, failures, unweighted aggregate
/// means and a per-gt_k breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub rows: Vec<SequenceOutcome>,
    pub failures: Vec<SequenceFailure>,
    pub mse: f64,
    pub accuracy_percent: f64,
    pub mean_error_rate: Option<f64>,
    pub baseline_mean_error_rate: Option<f64>,
    pub breakdown: Vec<BreakdownRow>,
}

impl EvaluationReport {
    /// Report text: one CSV row per sequence, then `# failure`,
    /// `# aggregate` and `# breakdown` rows. Floats use 6 decimals; error
    /// rates are empty when no labels were available.
    pub fn to_csv_string(&self) -> String {
        fn opt(v: Option<f64>) -> String {
            v.map(|x| format!("{x:.6}")).unwrap_or_default()
        }
        let mut out = String::new();
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{:.6},{},{},{}",
                row.id,
                row.gt_k,
                row.predicted_k,
                row.squared_error,
                u8::from(row.exact),
                opt(row.error_rate),
                opt(row.baseline_error_rate),
            );
        }
        for failure in &self.failures {
            let _ = writeln!(out, "# failure,{},{}", failure.id, failure.message);
        }
        let _ = writeln!(out, "# aggregate,evaluated,{}", self.rows.len());
        let _ = writeln!(out, "# aggregate,failed,{}", self.failures.len());
        let _ = writeln!(out, "# aggregate,mse,{:.6}", self.mse);
        let _ = writeln!(out, "# aggregate,accuracy_percent,{:.6}", self.accuracy_percent);
        let _ = writeln!(out, "# aggregate,mean_error_rate,{}", opt(self.mean_error_rate));
        let _ = writeln!(
            out,
            "# aggregate,baseline_mean_error_rate,{}",
            opt(self.baseline_mean_error_rate)
        );
        for b in &self.breakdown {
            let _ = writeln!(
                out,
                "# breakdown k={},count,{},mse,{:.6},mean_error_rate,{},baseline_mean_error_rate,{}",
                b.gt_k,
                b.count,
                b.mse,
                opt(b.mean_error_rate),
                opt(b.baseline_mean_error_rate),
            );
        }
        out
    }
}

fn fnv1a64(text: &str) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for b in text.as_bytes() {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let mut total = 0.0;
    let mut count = 0usize;
    for v in values {
        total += v;
        count += 1;
    }
    (count > 0).then(|| total / count as f64)
}

/// Clustering at a fixed count, covering the degenerate counts the spectral
/// path cannot express: one cluster, or one cluster per sample.
fn cluster_at<T: Scalar>(a: &AffinityMatrix<T>, k: usize, seed: u64) -> Result<ClusterAssignment> {
    let n = a.n();
    if k == 1 {
        return ClusterAssignment::new(vec![0; n], 1);
    }
    if k == n {
        return ClusterAssignment::new((0..n).collect(), n);
    }
    spectral_cluster(a, k, seed)
}

/// Runs the benchmark: per sequence, fuse the affinity views, select a
/// count, cluster at it, and score against the ground truth; a baseline
/// clustering at the true count is scored alongside. Sequences are seeded
/// with `seed` plus a stable hash of their id, so results do not depend on
/// evaluation order. Failing sequences are recorded and excluded from the
/// unweighted aggregate means.
pub fn evaluate_manifest<T: Scalar>(
    records: &[SequenceRecord],
    range: KRange,
    strategy: SelectionStrategy,
    seed: u64,
) -> Result<EvaluationReport> {
    if records.is_empty() {
        return Err(Error::EmptyInput("manifest records"));
    }

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for record in records {
        match evaluate_sequence::<T>(record, range, strategy, seed) {
            Ok(row) => rows.push(row),
            Err(e) => failures.push(SequenceFailure {
                id: record.id.clone(),
                message: e.for_sequence(&record.id).to_string(),
            }),
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput("successfully evaluated sequences"));
    }

    let preds: Vec<usize> = rows.iter().map(|r| r.predicted_k).collect();
    let gts: Vec<usize> = rows.iter().map(|r| r.gt_k).collect();
    let mse = mse(&preds, &gts)?;
    let accuracy_percent = exact_accuracy(&preds, &gts)?;
    let mean_error_rate = mean(rows.iter().filter_map(|r| r.error_rate));
    let baseline_mean_error_rate = mean(rows.iter().filter_map(|r| r.baseline_error_rate));

    let mut ks: Vec<usize> = gts.clone();
    ks.sort_unstable();
    ks.dedup();
    let breakdown = ks
        .into_iter()
        .map(|gt_k| {
            let group: Vec<&SequenceOutcome> = rows.iter().filter(|r| r.gt_k == gt_k).collect();
            BreakdownRow {
                gt_k,
                count: group.len(),
                mse: group.iter().map(|r| r.squared_error).sum::<f64>() / group.len() as f64,
                mean_error_rate: mean(group.iter().filter_map(|r| r.error_rate)),
                baseline_mean_error_rate: mean(group.iter().filter_map(|r| r.baseline_error_rate)),
            }
        })
        .collect();

    Ok(EvaluationReport {
        rows,
        failures,
        mse,
        accuracy_percent,
        mean_error_rate,
        baseline_mean_error_rate,
        breakdown,
    })
}

fn evaluate_sequence<T: Scalar>(
    record: &SequenceRecord,
    range: KRange,
    strategy: SelectionStrategy,
    seed: u64,
) -> Result<SequenceOutcome> {
    let views: Vec<AffinityMatrix<T>> = record
        .affinity_paths
        .iter()
        .map(AffinityMatrix::read_mat)
        .collect::<Result<_>>()?;
    let fused = fuse_views(&views)?;
    let n = fused.n();
    range.validate_for(n)?;
    if record.gt_k > n {
        return Err(Error::KOutOfRange { k: record.gt_k, n, constraint: "gt_k <= n" });
    }

    let sub_seed = seed.wrapping_add(fnv1a64(&record.id));
    let predicted_k = if strategy == SelectionStrategy::Random {
        // The random strategy ignores the scores; skip the table.
        random_k(range, sub_seed)
    } else {
        let table = confidence_table(&fused, range, sub_seed)?;
        select_k(&table, strategy, sub_seed)
    };

    let gt_labels = record.gt_labels_path.as_deref().map(read_labels).transpose()?;
    if let Some(gt) = &gt_labels {
        if gt.len() != n {
            return Err(Error::LengthMismatch { left: gt.len(), right: n });
        }
    }

    let (error, baseline) = match &gt_labels {
        Some(gt) => {
            let pred = cluster_at(&fused, predicted_k, sub_seed)?;
            let base = cluster_at(&fused, record.gt_k, sub_seed)?;
            (Some(error_rate(&pred, gt)?), Some(error_rate(&base, gt)?))
        }
        None => (None, None),
    };

    let diff = predicted_k as f64 - record.gt_k as f64;
    Ok(SequenceOutcome {
        id: record.id.clone(),
        gt_k: record.gt_k,
        predicted_k,
        squared_error: diff * diff,
        exact: predicted_k == record.gt_k,
        error_rate: error,
        baseline_error_rate: baseline,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selection::SelectionStrategy;
    use std::sync::atomic::{AtomicUsize, Ordering};

    fn assignment(labels: &[usize]) -> ClusterAssignment {
        ClusterAssignment::from_labels(labels).unwrap()
    }

    /// Exhaustive maximum agreement over injective cluster matchings.
    fn brute_force_agreement(confusion: &[i64], rows: usize, cols: usize) -> i64 {
        fn recurse(confusion: &[i64], cols: usize, row: usize, rows: usize, used: &mut Vec<bool>) -> i64 {
            if row == rows {
                return 0;
            }
            // Leaving this row unmatched is allowed.
            let mut best = recurse(confusion, cols, row + 1, rows, used);
            for col in 0..cols {
                if used[col] {
                    continue;
                }
                used[col] = true;
                let value = confusion[row * cols + col] + recurse(confusion, cols, row + 1, rows, used);
                used[col] = false;
                best = best.max(value);
            }
            best
        }
        let mut used = vec![false; cols];
        recurse(confusion, cols, 0, rows, &mut used)
    }

    fn brute_force_error_rate(pred: &ClusterAssignment, gt: &ClusterAssignment) -> f64 {
        let n = pred.len();
        let rows = pred.k();
        let cols = gt.k();
        let mut confusion = vec![0i64; rows * cols];
        for (&p, &g) in pred.labels().iter().zip(gt.labels()) {
            confusion[p * cols + g] += 1;
        }
        let agreement = brute_force_agreement(&confusion, rows, cols);
        100.0 * (n as i64 - agreement) as f64 / n as f64
    }

    static DIR_ID: AtomicUsize = AtomicUsize::new(0);

    fn scratch_dir() -> PathBuf {
        let dir = std::env::temp_dir().join(format!(
            "specsel-evalbench-{}-{}",
            std::process::id(),
            DIR_ID.fetch_add(1, Ordering::Relaxed)
        ));
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    /// Writes k exact block sequences (gt 2..=2+k-1) and a manifest.
    fn write_ideal_manifest(dir: &Path, with_labels: bool) -> PathBuf {
        let mut manifest = String::from("id,gt_k,labels,affinities\n");
        for k in 2..=5usize {
            let spec = SynthSpec::new(k, 5, 1.0, 1.0, 0.0, 0.0, k as u64).unwrap();
            let (a, labels) = generate_block_affinity::<f64>(&spec);
            a.write_mat(dir.join(format!("seq{k}.mat"))).unwrap();
            let labels_field = if with_labels {
                fs::write(dir.join(format!("seq{k}.lbl")), labels_to_string(&labels)).unwrap();
                format!("seq{k}.lbl")
            } else {
                String::new()
            };
            manifest.push_str(&format!("seq{k},{k},{labels_field},seq{k}.mat\n"));
        }
        let path = dir.join("manifest.csv");
        fs::write(&path, manifest).unwrap();
        path
    }

    #[test]
    fn mse_basics() {
        assert_eq!(mse(&[2, 3, 4], &[2, 3, 4]).unwrap(), 0.0);
        assert_eq!(mse(&[3, 3], &[2, 5]).unwrap(), 2.5);
        assert!(matches!(mse(&[1], &[1, 2]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(mse(&[], &[]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn uniform_prediction_expectation_by_enumeration() {
        // Ground-truth composition 12 x 2, 4 x 3, 5 x 4, 1 x 5; uniform
        // draws over [2, 5] give an expected MSE of 59/22.
        let gts: Vec<usize> = [(2, 12), (3, 4), (4, 5), (5, 1)]
            .iter()
            .flat_map(|&(k, c)| std::iter::repeat_n(k, c))
            .collect();
        let mut expectation = 0.0;
        for &gt in &gts {
            for pred in 2..=5usize {
                let d = pred as f64 - gt as f64;
                expectation += d * d / 4.0;
            }
        }
        expectation /= gts.len() as f64;
        assert!((expectation - 59.0 / 22.0).abs() < 1e-12);
    }

    #[test]
    fn exact_accuracy_basics() {
        assert_eq!(exact_accuracy(&[2, 3], &[2, 3]).unwrap(), 100.0);
        assert_eq!(exact_accuracy(&[2, 3, 4, 5], &[2, 2, 2, 2]).unwrap(), 25.0);
        assert!(exact_accuracy(&[], &[]).is_err());
    }

    #[test]
    fn error_rate_identity_and_relabeling() {
        let a = assignment(&[0, 0, 1, 1, 2, 2]);
        assert_eq!(error_rate(&a, &a).unwrap(), 0.0);
        let relabeled = assignment(&[2, 2, 0, 0, 1, 1]);
        assert_eq!(error_rate(&relabeled, &a).unwrap(), 0.0);
        assert_eq!(error_rate(&a, &relabeled).unwrap(), 0.0);
    }

    #[test]
    fn error_rate_counts_unmatched_clusters() {
        // Prediction merges two ground-truth clusters: the smaller one is
        // entirely wrong.
        let pred = assignment(&[0, 0, 0, 0]);
        let gt = assignment(&[0, 0, 1, 1]);
        assert_eq!(error_rate(&pred, &gt).unwrap(), 50.0);
    }

    #[test]
    fn error_rate_matches_brute_force_on_random_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..60 {
            let n = rng.random_range(2..=8usize);
            let kp = rng.random_range(1..=3usize);
            let kg = rng.random_range(1..=3usize);
            let pred: Vec<usize> = (0..n).map(|_| rng.random_range(0..kp as u64) as usize).collect();
            let gt: Vec<usize> = (0..n).map(|_| rng.random_range(0..kg as u64) as usize).collect();
            let pred = assignment(&pred);
            let gt = assignment(&gt);
            let fast = error_rate(&pred, &gt).unwrap();
            let slow = brute_force_error_rate(&pred, &gt);
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn generator_produces_exact_blocks_and_is_deterministic() {
        let spec = SynthSpec::new(3, 2, 1.0, 1.0, 0.0, 0.0, 5).unwrap();
        let (a, labels) = generate_block_affinity::<f64>(&spec);
        assert_eq!(labels.labels(), &[0, 0, 1, 1, 2, 2]);
        for i in 0..6 {
            for j in 0..6 {
                let expected = if i / 2 == j / 2 { 1.0 } else { 0.0 };
                assert_eq!(a.value(i, j), expected);
            }
        }
        let (b, _) = generate_block_affinity::<f64>(&spec);
        assert_eq!(a, b);
    }

    #[test]
    fn generator_rejects_bad_specs() {
        assert!(SynthSpec::new(1, 5, 0.8, 1.0, 0.0, 0.2, 0).is_err());
        assert!(SynthSpec::new(3, 1, 0.8, 1.0, 0.0, 0.2, 0).is_err());
        assert!(SynthSpec::new(3, 5, 0.5, 1.0, 0.0, 0.6, 0).is_err());
        assert!(SynthSpec::new(3, 5, 0.8, 1.2, 0.0, 0.2, 0).is_err());
    }

    #[test]
    fn planted_structure_is_recoverable() {
        let spec = SynthSpec::new(4, 15, 0.8, 1.0, 0.0, 0.2, 7).unwrap();
        let (a, gt) = generate_block_affinity::<f64>(&spec);
        let pred = spectral_cluster(&a, 4, 0).unwrap();
        assert_eq!(error_rate(&pred, &gt).unwrap(), 0.0);
        let gaps = crate::validity::eigengap_gaps(&a).unwrap();
        assert_eq!(gaps.argmax_in(2, 5), 4);
    }

    #[test]
    fn manifest_roundtrip_and_errors() {
        let dir = scratch_dir();
        let path = write_ideal_manifest(&dir, true);
        let records = read_manifest(&path).unwrap();
        assert_eq!(records.len(), 4);
        assert_eq!(records[0].id, "seq2");
        assert_eq!(records[0].gt_k, 2);
        assert!(records[0].gt_labels_path.is_some());
        assert_eq!(records[0].affinity_paths, vec![dir.join("seq2.mat")]);

        let bad_header = dir.join("bad_header.csv");
        fs::write(&bad_header, "id,labels\n").unwrap();
        assert!(matches!(read_manifest(&bad_header), Err(Error::Parse { line: 1, .. })));

        let bad_row = dir.join("bad_row.csv");
        fs::write(&bad_row, "id,gt_k,labels,affinities\nseq,x,,a.mat\n").unwrap();
        assert!(matches!(read_manifest(&bad_row), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn labels_roundtrip_and_parse_error() {
        let dir = scratch_dir();
        let labels = assignment(&[0, 1, 1, 2]);
        let path = dir.join("l.lbl");
        fs::write(&path, labels_to_string(&labels)).unwrap();
        assert_eq!(read_labels(&path).unwrap(), labels);

        fs::write(&path, "0\nx\n").unwrap();
        assert!(matches!(read_labels(&path), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn ideal_manifest_evaluates_perfectly() {
        let dir = scratch_dir();
        let path = write_ideal_manifest(&dir, true);
        let records = read_manifest(&path).unwrap();
        let range = KRange::new(2, 5).unwrap();
        let report = evaluate_manifest::<f64>(&records, range, SelectionStrategy::Average, 42).unwrap();

        assert_eq!(report.mse, 0.0);
        assert_eq!(report.accuracy_percent, 100.0);
        assert_eq!(report.mean_error_rate, Some(0.0));
        assert_eq!(report.baseline_mean_error_rate, Some(0.0));
        assert_eq!(report.breakdown.len(), 4);
        assert!(report.failures.is_empty());

        // Aggregates equal recomputation from the rows.
        let preds: Vec<usize> = report.rows.iter().map(|r| r.predicted_k).collect();
        let gts: Vec<usize> = report.rows.iter().map(|r| r.gt_k).collect();
        assert!((report.mse - mse(&preds, &gts).unwrap()).abs() < 1e-12);
        assert!((report.accuracy_percent - exact_accuracy(&preds, &gts).unwrap()).abs() < 1e-12);
        let mean_err = report.rows.iter().filter_map(|r| r.error_rate).sum::<f64>() / report.rows.len() as f64;
        assert!((report.mean_error_rate.unwrap() - mean_err).abs() < 1e-12);

        let text = report.to_csv_string();
        assert!(text.contains("# aggregate,mse,0.000000"));
        assert!(text.contains("# aggregate,accuracy_percent,100.000000"));
        assert!(text.contains("# breakdown k=2,count,1,mse,0.000000"));
        assert!(text.lines().take(4).all(|l| l.split(',').count() == 7));
    }

    #[test]
    fn multi_view_sequences_are_fused_before_selection() {
        let dir = scratch_dir();
        let s1 = SynthSpec::new(3, 5, 0.8, 1.0, 0.0, 0.2, 61).unwrap();
        let s2 = SynthSpec::new(3, 5, 0.8, 1.0, 0.0, 0.2, 62).unwrap();
        let (v1, labels) = generate_block_affinity::<f64>(&s1);
        let (v2, _) = generate_block_affinity::<f64>(&s2);
        v1.write_mat(dir.join("v1.mat")).unwrap();
        v2.write_mat(dir.join("v2.mat")).unwrap();
        fs::write(dir.join("gt.lbl"), labels_to_string(&labels)).unwrap();
        let manifest = "id,gt_k,labels,affinities\npair,3,gt.lbl,v1.mat;v2.mat\n";
        fs::write(dir.join("man.csv"), manifest).unwrap();

        let records = read_manifest(dir.join("man.csv")).unwrap();
        assert_eq!(records[0].affinity_paths.len(), 2);
        let range = KRange::new(2, 5).unwrap();
        let report = evaluate_manifest::<f64>(&records, range, SelectionStrategy::Average, 1).unwrap();
        assert_eq!(report.rows[0].predicted_k, 3);
        assert_eq!(report.rows[0].error_rate, Some(0.0));
    }

    #[test]
    fn empty_manifest_is_rejected() {
        let range = KRange::new(2, 5).unwrap();
        assert!(matches!(
            evaluate_manifest::<f64>(&[], range, SelectionStrategy::Average, 0),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn failing_sequence_is_recorded_and_excluded() {
        let dir = scratch_dir();
        let path = write_ideal_manifest(&dir, true);
        let mut records = read_manifest(&path).unwrap();
        records.push(SequenceRecord {
            id: "missing".into(),
            affinity_paths: vec![dir.join("nope.mat")],
            gt_k: 2,
            gt_labels_path: None,
        });
        let range = KRange::new(2, 5).unwrap();
        let report = evaluate_manifest::<f64>(&records, range, SelectionStrategy::Average, 42).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].id, "missing");
        assert_eq!(report.mse, 0.0);
        assert!(report.to_csv_string().contains("# failure,missing"));
    }

    #[test]
    fn random_strategy_tracks_enumerated_expectation() {
        let dir = scratch_dir();
        let path = write_ideal_manifest(&dir, false);
        let records = read_manifest(&path).unwrap();
        let range = KRange::new(2, 5).unwrap();
        // Expected MSE for gt {2,3,4,5} under uniform draws: 2.5.
        let mut total = 0.0;
        let runs = 1000u64;
        for seed in 0..runs {
            let report = evaluate_manifest::<f64>(&records, range, SelectionStrategy::Random, seed).unwrap();
            total += report.mse;
        }
        let mean_mse = total / runs as f64;
        assert!((mean_mse - 2.5).abs() <= 0.15, "mean MSE = {mean_mse}");
    }
}
