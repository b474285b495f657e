//! Affinity and distance matrices, graph Laplacian, multi-matrix fusion,
//! and the MAT-1 file format.
//!
//! All matrices are dense, row-major and immutable after construction.
//! Construction validates and, where safe, repairs the invariants:
//! asymmetries up to [`Scalar::SYMMETRY_SLACK`] are averaged away and
//! diagonals within [`Scalar::DIAGONAL_SLACK`] of their expected value are
//! pinned; anything worse is rejected.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Symmetric pairwise similarity in `[0, 1]` with a unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinityMatrix<T> {
    n: usize,
    values: Vec<T>,
}

/// Symmetric pairwise dissimilarity in `[0, 1]` with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix<T> {
    n: usize,
    values: Vec<T>,
}

/// Dense symmetric matrix, the eigensolver input.
///
/// [`SymmetricMatrix::new`] accepts relative asymmetries up to
/// [`Scalar::JACOBI_TOL`] and averages them away, so the solver always sees
/// an exactly symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix<T> {
    n: usize,
    values: Vec<T>,
}

/// Post-processing applied after the element-wise mean in [`fuse`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Keep the plain mean.
    None,
    /// Symmetric degree normalization followed by a max-entry rescale,
    /// keeping the result symmetric and in `[0, 1]`.
    Degree,
}

fn check_shape<T: Scalar>(n: usize, values: &[T]) -> Result<()> {
    if n < 2 {
        return Err(Error::TooSmall { n });
    }
    let expected = n * n;
    if values.len() != expected {
        return Err(Error::BadShape { n, expected, len: values.len() });
    }
    if let Some(flat) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { i: flat / n, j: flat % n });
    }
    Ok(())
}

/// Averages `values[i][j]` and `values[j][i]` in place when they differ by
/// at most `slack`; errors on the first larger violation.
fn symmetrize<T: Scalar>(n: usize, values: &mut [T], slack: T) -> Result<()> {
    for i in 0..n {
        for j in (i + 1)..n {
            let a = values[i * n + j];
            let b = values[j * n + i];
            if a != b {
                let delta = (a - b).abs();
                if delta > slack {
                    return Err(Error::Asymmetric { i, j, delta: delta.to_f64().unwrap_or(f64::NAN) });
                }
                let mean = (a + b) / T::of(2.0);
                values[i * n + j] = mean;
                values[j * n + i] = mean;
            }
        }
    }
    Ok(())
}

impl<T: Scalar> AffinityMatrix<T> {
    /// Builds an affinity matrix from row-major values, validating and
    /// repairing the invariants.
    pub fn from_values(n: usize, mut values: Vec<T>) -> Result<Self> {
        check_shape(n, &values)?;
        symmetrize(n, &mut values, T::SYMMETRY_SLACK)?;
        for i in 0..n {
            let d = values[i * n + i];
            if (d - T::one()).abs() > T::DIAGONAL_SLACK {
                return Err(Error::BadDiagonal { i, value: d.to_f64().unwrap_or(f64::NAN) });
            }
            values[i * n + i] = T::one();
        }
        for i in 0..n {
            for j in 0..n {
                let v = values[i * n + j];
                if !(v >= T::zero() && v <= T::one()) {
                    return Err(Error::EntryOutOfRange { i, j, value: v.to_f64().unwrap_or(f64::NAN) });
                }
            }
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> T {
        self.values[i * self.n + j]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    /// Per-row degree `d_i = sum_j a[i][j]`; at least 1 thanks to the unit
    /// diagonal.
    pub fn degrees(&self) -> Vec<T> {
        (0..self.n).map(|i| self.row(i).iter().copied().sum()).collect()
    }

    /// Complements every entry (`1 - a`), turning similarity into
    /// dissimilarity. The diagonal becomes exactly zero.
    pub fn to_distance(&self) -> DistanceMatrix<T> {
        let n = self.n;
        let mut values = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    values[i * n + j] = T::one() - self.value(i, j);
                }
            }
        }
        DistanceMatrix { n, values }
    }

    /// Normalized symmetric graph Laplacian `I - D^{-1/2} A D^{-1/2}`.
    ///
    /// The result is exactly symmetric (the upper triangle is computed once
    /// and mirrored), positive semidefinite with eigenvalues in `[0, 2]`,
    /// and has a zero eigenvalue.
    pub fn laplacian(&self) -> SymmetricMatrix<T> {
        let n = self.n;
        let inv_sqrt: Vec<T> = self.degrees().iter().map(|d| d.sqrt().recip()).collect();
        let mut values = vec![T::zero(); n * n];
        for i in 0..n {
            values[i * n + i] = T::one() - inv_sqrt[i] * self.value(i, i) * inv_sqrt[i];
            for j in (i + 1)..n {
                let v = -(inv_sqrt[i] * self.value(i, j) * inv_sqrt[j]);
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        SymmetricMatrix { n, values }
    }

    /// Relabels samples: entry `(i, j)` of the result is `a[perm[i]][perm[j]]`.
    ///
    /// Panics if `perm` is not a permutation of `0..n`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n;
        assert_eq!(perm.len(), n, "permutation length must equal n");
        let mut seen = vec![false; n];
        for &p in perm {
            assert!(p < n && !seen[p], "not a permutation of 0..n");
            seen[p] = true;
        }
        let mut values = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                values[i * n + j] = self.value(perm[i], perm[j]);
            }
        }
        Self { n, values }
    }

    /// Reads a matrix in MAT-1 format: the first line holds `n`, each of the
    /// next `n` lines holds `n` whitespace-separated floats (scientific
    /// notation accepted).
    pub fn read_mat<P: AsRef<Path>>(path: P) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
        let (n, values) = parse_mat(&text, path)?;
        Self::from_values(n, values).map_err(|e| e.in_file(path.into()))
    }

    /// Serializes to MAT-1 with 17 significant digits per entry.
    pub fn to_mat_string(&self) -> String {
        format_mat(self.n, &self.values)
    }

    pub fn write_mat<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_mat_string()).map_err(|source| Error::Io { path: path.into(), source })
    }
}

impl<T: Scalar> DistanceMatrix<T> {
    /// Builds a distance matrix from row-major values, validating symmetry,
    /// the zero diagonal and the `[0, 1]` range.
    pub fn from_values(n: usize, mut values: Vec<T>) -> Result<Self> {
        check_shape(n, &values)?;
        symmetrize(n, &mut values, T::SYMMETRY_SLACK)?;
        for i in 0..n {
            let d = values[i * n + i];
            if d.abs() > T::DIAGONAL_SLACK {
                return Err(Error::BadDiagonal { i, value: d.to_f64().unwrap_or(f64::NAN) });
            }
            values[i * n + i] = T::zero();
        }
        for i in 0..n {
            for j in 0..n {
                let v = values[i * n + j];
                if !(v >= T::zero() && v <= T::one()) {
                    return Err(Error::EntryOutOfRange { i, j, value: v.to_f64().unwrap_or(f64::NAN) });
                }
            }
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> T {
        self.values[i * self.n + j]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Complements every entry (`1 - d`), the inverse of
    /// [`AffinityMatrix::to_distance`]. The diagonal becomes exactly one.
    pub fn to_affinity(&self) -> AffinityMatrix<T> {
        let n = self.n;
        let mut values = vec![T::one(); n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    values[i * n + j] = T::one() - self.value(i, j);
                }
            }
        }
        AffinityMatrix { n, values }
    }
}

impl<T: Scalar> SymmetricMatrix<T> {
    /// Builds a symmetric matrix, averaging away relative asymmetries up to
    /// [`Scalar::JACOBI_TOL`] of the largest entry magnitude.
    pub fn new(n: usize, mut values: Vec<T>) -> Result<Self> {
        check_shape(n, &values)?;
        let scale = values.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
        symmetrize(n, &mut values, T::JACOBI_TOL * scale.max(T::one()))?;
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> T {
        self.values[i * self.n + j]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn trace(&self) -> T {
        (0..self.n).map(|i| self.value(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> T {
        self.values.iter().map(|v| *v * *v).sum::<T>().sqrt()
    }
}

/// Element-wise mean of the given affinity matrices, optionally followed by
/// symmetric degree normalization with a max-entry rescale.
///
/// All inputs must share one dimension; the sequence must be nonempty.
pub fn fuse<T: Scalar>(matrices: &[AffinityMatrix<T>], normalization: Normalization) -> Result<AffinityMatrix<T>> {
    let first = matrices.first().ok_or(Error::EmptyInput("fuse input"))?;
    let n = first.n();
    for (index, m) in matrices.iter().enumerate() {
        if m.n() != n {
            return Err(Error::DimensionMismatch { index, expected: n, got: m.n() });
        }
    }

    let count = T::of(matrices.len() as f64);
    let mut mean = vec![T::zero(); n * n];
    for m in matrices {
        for (acc, v) in mean.iter_mut().zip(m.values()) {
            *acc += *v;
        }
    }
    for v in mean.iter_mut() {
        *v /= count;
    }

    if normalization == Normalization::Degree {
        let degrees: Vec<T> = (0..n).map(|i| mean[i * n..(i + 1) * n].iter().copied().sum()).collect();
        let inv_sqrt: Vec<T> = degrees.iter().map(|d| d.sqrt().recip()).collect();
        let mut scaled = vec![T::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let v = inv_sqrt[i] * mean[i * n + j] * inv_sqrt[j];
                scaled[i * n + j] = v;
                scaled[j * n + i] = v;
            }
        }
        let max = scaled.iter().fold(T::zero(), |acc, v| acc.max(*v));
        for v in scaled.iter_mut() {
            *v /= max;
        }
        for i in 0..n {
            scaled[i * n + i] = T::one();
        }
        mean = scaled;
    }

    AffinityMatrix::from_values(n, mean)
}

fn parse_mat<T: Scalar>(text: &str, path: &Path) -> Result<(usize, Vec<T>)> {
    let err = |line: usize, msg: String| Error::Parse { path: path.into(), line, msg };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| err(1, format!("expected the sample count, got {header:?}")))?;
    if n == 0 {
        return Err(err(1, "sample count must be positive".into()));
    }

    let mut values = Vec::with_capacity(n * n);
    let mut rows = 0usize;
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        if rows == n {
            return Err(err(line_no, format!("unexpected data after {n} rows")));
        }
        let mut count = 0usize;
        for token in line.split_whitespace() {
            let v: f64 = token
                .parse()
                .map_err(|_| err(line_no, format!("invalid float {token:?}")))?;
            values.push(T::of(v));
            count += 1;
        }
        if count != n {
            return Err(err(line_no, format!("expected {n} values in the row, got {count}")));
        }
        rows += 1;
    }
    if rows != n {
        return Err(err(rows + 1, format!("expected {n} rows, got {rows}")));
    }
    Ok((n, values))
}

fn format_mat<T: Scalar>(n: usize, values: &[T]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{n}");
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{:.16e}", values[i * n + j]);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn all_ones(n: usize) -> AffinityMatrix<f64> {
        AffinityMatrix::from_values(n, vec![1.0; n * n]).unwrap()
    }

    /// Block-diagonal affinity: `within` inside each block, `cross` outside,
    /// unit diagonal.
    pub(crate) fn block_affinity(sizes: &[usize], within: f64, cross: f64) -> AffinityMatrix<f64> {
        let n: usize = sizes.iter().sum();
        let mut block_of = Vec::with_capacity(n);
        for (b, &s) in sizes.iter().enumerate() {
            block_of.extend(std::iter::repeat_n(b, s));
        }
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                values[i * n + j] = if i == j {
                    1.0
                } else if block_of[i] == block_of[j] {
                    within
                } else {
                    cross
                };
            }
        }
        AffinityMatrix::from_values(n, values).unwrap()
    }

    fn rng_affinity(n: usize, seed: u64) -> AffinityMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            values[i * n + i] = 1.0;
            for j in (i + 1)..n {
                let v: f64 = rng.random();
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        AffinityMatrix::from_values(n, values).unwrap()
    }

    #[test]
    fn to_distance_2x2() {
        let a = AffinityMatrix::<f64>::from_values(2, vec![1.0, 0.8, 0.8, 1.0]).unwrap();
        let d = a.to_distance();
        assert!((d.value(0, 1) - 0.2).abs() < 1e-15);
        assert_eq!(d.value(0, 1), d.value(1, 0));
        assert_eq!(d.value(0, 0), 0.0);
        assert_eq!(d.value(1, 1), 0.0);
    }

    #[test]
    fn to_distance_identity_affinity_is_zero() {
        let d = all_ones(3).to_distance();
        assert!(d.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn distance_roundtrip_close_on_generated_matrix() {
        let a = rng_affinity(10, 7);
        let back = a.to_distance().to_affinity();
        for (x, y) in a.values().iter().zip(back.values()) {
            assert!((x - y).abs() <= 1e-15);
        }
    }

    #[test]
    fn laplacian_three_blocks_has_zero_multiplicity_three() {
        let a = block_affinity(&[4, 4, 4], 1.0, 0.0);
        let s = a.laplacian().spectrum().unwrap();
        let zeros = s.eigenvalues().iter().filter(|&&v| v.abs() < 1e-8).count();
        assert_eq!(zeros, 3);
    }

    #[test]
    fn laplacian_all_ones_2x2_eigenvalues() {
        let s = all_ones(2).laplacian().spectrum().unwrap();
        assert!((s.eigenvalues()[0] - 0.0).abs() < 1e-12);
        assert!((s.eigenvalues()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn laplacian_always_has_zero_eigenvalue() {
        for seed in 0..5 {
            let a = rng_affinity(8, seed);
            let s = a.laplacian().spectrum().unwrap();
            assert!(s.eigenvalues()[0].abs() < 1e-10, "smallest = {}", s.eigenvalues()[0]);
        }
    }

    #[test]
    fn laplacian_zero_multiplicity_counts_components() {
        for blocks in 1..=4usize {
            let sizes = vec![3; blocks];
            let a = block_affinity(&sizes, 0.8, 0.0);
            let s = a.laplacian().spectrum().unwrap();
            let zeros = s.eigenvalues().iter().filter(|&&v| v.abs() < 1e-8).count();
            assert_eq!(zeros, blocks);
        }
    }

    #[test]
    fn construction_repairs_small_asymmetry() {
        let values: Vec<f64> = vec![1.0, 0.5, 0.5 + 5e-10, 1.0];
        let a = AffinityMatrix::from_values(2, values).unwrap();
        assert_eq!(a.value(0, 1), a.value(1, 0));
    }

    #[test]
    fn construction_rejects_large_asymmetry() {
        let values: Vec<f64> = vec![1.0, 0.5, 0.6, 1.0];
        match AffinityMatrix::from_values(2, values) {
            Err(Error::Asymmetric { i: 0, j: 1, .. }) => {}
            other => panic!("expected asymmetry error, got {other:?}"),
        }
    }

    #[test]
    fn construction_repairs_near_unit_diagonal_and_rejects_bad_one() {
        let a = AffinityMatrix::<f64>::from_values(2, vec![1.0 + 1e-7, 0.3, 0.3, 1.0]).unwrap();
        assert_eq!(a.value(0, 0), 1.0);
        match AffinityMatrix::<f64>::from_values(2, vec![0.9, 0.3, 0.3, 1.0]) {
            Err(Error::BadDiagonal { i: 0, .. }) => {}
            other => panic!("expected diagonal error, got {other:?}"),
        }
    }

    #[test]
    fn construction_rejects_out_of_range_entries() {
        match AffinityMatrix::<f64>::from_values(2, vec![1.0, 1.5, 1.5, 1.0]) {
            Err(Error::EntryOutOfRange { value, .. }) => assert_eq!(value, 1.5),
            other => panic!("expected range error, got {other:?}"),
        }
        match AffinityMatrix::from_values(2, vec![1.0, f64::NAN, f64::NAN, 1.0]) {
            Err(Error::NonFinite { i: 0, j: 1 }) => {}
            other => panic!("expected non-finite error on NaN, got {other:?}"),
        }
    }

    #[test]
    fn construction_rejects_tiny_and_misshapen_input() {
        assert!(matches!(
            AffinityMatrix::<f64>::from_values(1, vec![1.0]),
            Err(Error::TooSmall { n: 1 })
        ));
        assert!(matches!(
            AffinityMatrix::<f64>::from_values(2, vec![1.0, 0.0, 1.0]),
            Err(Error::BadShape { .. })
        ));
    }

    #[test]
    fn fuse_singleton_is_identity() {
        let a = rng_affinity(6, 3);
        let fused = fuse(std::slice::from_ref(&a), Normalization::None).unwrap();
        assert_eq!(fused, a);
    }

    #[test]
    fn fuse_equal_matrices_unchanged() {
        let a = rng_affinity(5, 11);
        let fused = fuse(&[a.clone(), a.clone()], Normalization::None).unwrap();
        for (x, y) in fused.values().iter().zip(a.values()) {
            assert!((x - y).abs() <= 1e-15);
        }
    }

    #[test]
    fn fuse_means_entries() {
        let a = AffinityMatrix::<f64>::from_values(2, vec![1.0, 0.2, 0.2, 1.0]).unwrap();
        let b = AffinityMatrix::<f64>::from_values(2, vec![1.0, 0.6, 0.6, 1.0]).unwrap();
        let fused = fuse(&[a, b], Normalization::None).unwrap();
        assert!((fused.value(0, 1) - 0.4).abs() < 1e-15);
        assert_eq!(fused.value(0, 0), 1.0);
    }

    #[test]
    fn fuse_rejects_dimension_mismatch_and_empty_input() {
        let a = rng_affinity(4, 0);
        let b = rng_affinity(5, 1);
        match fuse(&[a, b], Normalization::None) {
            Err(Error::DimensionMismatch { index: 1, expected: 4, got: 5 }) => {}
            other => panic!("expected mismatch, got {other:?}"),
        }
        assert!(matches!(
            fuse::<f64>(&[], Normalization::None),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn fuse_degree_output_is_valid_affinity() {
        let a = rng_affinity(7, 21);
        let b = rng_affinity(7, 22);
        let fused = fuse(&[a, b], Normalization::Degree).unwrap();
        let n = fused.n();
        for i in 0..n {
            assert_eq!(fused.value(i, i), 1.0);
            for j in 0..n {
                let v = fused.value(i, j);
                assert!((0.0..=1.0).contains(&v));
                assert_eq!(v, fused.value(j, i));
            }
        }
    }

    #[test]
    fn fuse_is_permutation_equivariant() {
        let a = rng_affinity(6, 31);
        let b = rng_affinity(6, 32);
        let perm = [3usize, 0, 5, 1, 4, 2];

        // The plain mean acts entry by entry, so equivariance is exact.
        let direct = fuse(&[a.clone(), b.clone()], Normalization::None)
            .unwrap()
            .permuted(&perm);
        let permuted = fuse(&[a.permuted(&perm), b.permuted(&perm)], Normalization::None).unwrap();
        assert_eq!(direct, permuted);

        // Degree sums run in permuted order, so allow rounding noise.
        let direct = fuse(&[a.clone(), b.clone()], Normalization::Degree)
            .unwrap()
            .permuted(&perm);
        let permuted = fuse(&[a.permuted(&perm), b.permuted(&perm)], Normalization::Degree).unwrap();
        for (x, y) in direct.values().iter().zip(permuted.values()) {
            assert!((x - y).abs() <= 1e-15);
        }
    }

    #[test]
    fn mat_roundtrip_is_exact() {
        let a = rng_affinity(6, 99);
        let text = a.to_mat_string();
        let (n, values) = parse_mat::<f64>(&text, Path::new("mem")).unwrap();
        let back = AffinityMatrix::from_values(n, values).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn mat_parse_accepts_scientific_notation() {
        let text = "2\n1.0 8.0e-1\n8.0e-1 1e0\n";
        let (n, values) = parse_mat::<f64>(text, Path::new("mem")).unwrap();
        let a = AffinityMatrix::from_values(n, values).unwrap();
        assert_eq!(a.value(0, 1), 0.8);
    }

    #[test]
    fn mat_parse_reports_line_numbers() {
        let bad_header = parse_mat::<f64>("x\n", Path::new("m")).unwrap_err();
        assert!(matches!(bad_header, Error::Parse { line: 1, .. }));
        let bad_row = parse_mat::<f64>("2\n1.0 0.5\n0.5\n", Path::new("m")).unwrap_err();
        assert!(matches!(bad_row, Error::Parse { line: 3, .. }));
        let bad_float = parse_mat::<f64>("2\n1.0 zz\n0.5 1.0\n", Path::new("m")).unwrap_err();
        assert!(matches!(bad_float, Error::Parse { line: 2, .. }));
        let missing_rows = parse_mat::<f64>("3\n1.0 0.5 0.5\n", Path::new("m")).unwrap_err();
        assert!(matches!(missing_rows, Error::Parse { .. }));
    }

    proptest! {
        /// Complementation is an exact involution on the 2^-53 grid that
        /// uniform draws live on.
        #[test]
        fn prop_distance_involution_exact(seed in 0u64..500) {
            let a = rng_affinity(8, seed);
            let back = a.to_distance().to_affinity();
            prop_assert_eq!(a, back);
        }

        #[test]
        fn prop_laplacian_is_positive_semidefinite(seed in 0u64..60) {
            let a = rng_affinity(7, seed);
            let s = a.laplacian().spectrum().unwrap();
            for &v in s.eigenvalues() {
                prop_assert!(v >= -1e-10);
                prop_assert!(v <= 2.0 + 1e-10);
            }
        }
    }
}
