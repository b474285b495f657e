//! Dense symmetric eigendecomposition (cyclic Jacobi) and eigenvalue gaps.

use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;
use crate::scalar::Scalar;

/// Sweep cap for the Jacobi iteration; convergence is quadratic, so random
/// matrices finish in well under twenty sweeps.
const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a symmetric matrix.
///
/// Eigenvalues are ascending; eigenvector `j` (column `j`, unit norm) pairs
/// with eigenvalue `j`. The sign convention makes each eigenvector's
/// largest-magnitude entry positive, so the decomposition is deterministic.
#[derive(Debug, Clone)]
pub struct Spectrum<T> {
    n: usize,
    eigenvalues: Vec<T>,
    /// Row-major `n x n`; column `j` is eigenvector `j`.
    eigenvectors: Vec<T>,
}

impl<T: Scalar> Spectrum<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    #[inline]
    pub fn eigenvector_entry(&self, row: usize, col: usize) -> T {
        self.eigenvectors[row * self.n + col]
    }

    /// Differences of consecutive eigenvalues; nonnegative because the
    /// eigenvalues are sorted.
    pub fn gaps(&self) -> GapVector<T> {
        let gaps = self
            .eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .collect();
        GapVector { gaps }
    }
}

/// Consecutive eigenvalue differences, indexed by the 1-based candidate
/// cluster count: gap `k` separates eigenvalue `k` from eigenvalue `k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapVector<T> {
    gaps: Vec<T>,
}

impl<T: Scalar> GapVector<T> {
    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn gaps(&self) -> &[T] {
        &self.gaps
    }

    /// Gap for candidate count `k` (1-based).
    ///
    /// Panics if `k` is outside `1..=len`.
    pub fn at_k(&self, k: usize) -> T {
        self.gaps[k - 1]
    }

    /// Candidate count in `[k_min, k_max]` with the largest gap, ties broken
    /// toward the smaller count.
    ///
    /// Panics if the window is outside `1..=len`.
    pub fn argmax_in(&self, k_min: usize, k_max: usize) -> usize {
        assert!(k_min >= 1 && k_min <= k_max && k_max <= self.gaps.len());
        let mut best_k = k_min;
        let mut best = self.at_k(k_min);
        for k in (k_min + 1)..=k_max {
            let g = self.at_k(k);
            if g > best {
                best = g;
                best_k = k;
            }
        }
        best_k
    }
}

impl<T: Scalar> SymmetricMatrix<T> {
    /// Full eigendecomposition via cyclic Jacobi rotations.
    ///
    /// Converges when the off-diagonal Frobenius norm drops below
    /// [`Scalar::JACOBI_TOL`] times the matrix Frobenius norm; errors after
    /// 100 sweeps otherwise.
    pub fn spectrum(&self) -> Result<Spectrum<T>> {
        let n = self.n();
        let mut a = self.values().to_vec();
        let mut v = vec![T::zero(); n * n];
        for i in 0..n {
            v[i * n + i] = T::one();
        }

        let norm = self.frobenius_norm();
        if norm == T::zero() {
            // Zero matrix: every eigenvalue is zero, basis vectors as-is.
            return Ok(Spectrum { n, eigenvalues: vec![T::zero(); n], eigenvectors: v });
        }
        let threshold = T::JACOBI_TOL * norm;

        let mut sweeps = 0usize;
        while off_norm(&a, n) > threshold {
            if sweeps == MAX_SWEEPS {
                return Err(Error::NonConvergence { n, sweeps });
            }
            sweep(&mut a, &mut v, n);
            sweeps += 1;
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).unwrap());

        let eigenvalues: Vec<T> = order.iter().map(|&i| a[i * n + i]).collect();
        let mut eigenvectors = vec![T::zero(); n * n];
        for (col, &src) in order.iter().enumerate() {
            let mut peak = 0usize;
            let mut peak_abs = T::zero();
            for row in 0..n {
                let abs = v[row * n + src].abs();
                if abs > peak_abs {
                    peak_abs = abs;
                    peak = row;
                }
            }
            let flip = v[peak * n + src] < T::zero();
            for row in 0..n {
                let val = v[row * n + src];
                eigenvectors[row * n + col] = if flip { -val } else { val };
            }
        }

        Ok(Spectrum { n, eigenvalues, eigenvectors })
    }
}

fn off_norm<T: Scalar>(a: &[T], n: usize) -> T {
    let mut sum = T::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = a[i * n + j];
            sum += v * v;
        }
    }
    (sum + sum).sqrt()
}

/// One cyclic sweep of Jacobi rotations over the upper triangle.
fn sweep<T: Scalar>(a: &mut [T], v: &mut [T], n: usize) {
    let one = T::one();
    let two = T::of(2.0);
    for p in 0..n - 1 {
        for q in (p + 1)..n {
            let apq = a[p * n + q];
            if apq == T::zero() {
                continue;
            }
            let theta = (a[q * n + q] - a[p * n + p]) / (two * apq);
            // Guard theta^2 against overflow; the rotation degenerates to
            // t ~ 1/(2 theta) there anyway.
            let t = if theta.abs() > T::of(1e15) {
                (two * theta).recip()
            } else {
                let sign = if theta < T::zero() { -one } else { one };
                sign / (theta.abs() + (theta * theta + one).sqrt())
            };
            let c = one / (t * t + one).sqrt();
            let s = t * c;
            let tau = s / (one + c);

            a[p * n + p] -= t * apq;
            a[q * n + q] += t * apq;
            a[p * n + q] = T::zero();
            a[q * n + p] = T::zero();

            for r in 0..n {
                if r == p || r == q {
                    continue;
                }
                let arp = a[r * n + p];
                let arq = a[r * n + q];
                let new_rp = arp - s * (arq + tau * arp);
                let new_rq = arq + s * (arp - tau * arq);
                a[r * n + p] = new_rp;
                a[p * n + r] = new_rp;
                a[r * n + q] = new_rq;
                a[q * n + r] = new_rq;
            }
            for r in 0..n {
                let vrp = v[r * n + p];
                let vrq = v[r * n + q];
                v[r * n + p] = vrp - s * (vrq + tau * vrp);
                v[r * n + q] = vrq + s * (vrp - tau * vrq);
            }
        }
    }
}
