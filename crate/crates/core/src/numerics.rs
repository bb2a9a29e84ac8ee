//! Scalar and small dense-matrix numerics shared by the rate, decoy and
//! scenario modules.
//!
//! Everything here is a pure function. Series over photon numbers are
//! truncated at [`DEFAULT_N_MAX`] unless the caller asks otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default photon-number truncation for all series.
pub const DEFAULT_N_MAX: usize = 30;

const GOLDEN_MAX_ITER: usize = 200;
const PRESCAN_POINTS: usize = 32;
const BISECT_MAX_ITER: usize = 400;
const SINGULAR_TOL: f64 = 1e-12;

/// Binary Shannon entropy in bits. Exactly zero at both endpoints.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("binary entropy argument {x} outside [0, 1]")));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// Binary entropy with the argument clamped into [0, 1/2]'s mirror domain.
///
/// Error rates coming out of bounds can overshoot 1/2 slightly; above 1/2 the
/// entropy is taken as saturated.
pub(crate) fn entropy_saturating(x: f64) -> f64 {
    if x.is_nan() {
        return 1.0;
    }
    let x = x.clamp(0.0, 0.5);
    binary_entropy(x).unwrap_or(1.0)
}

/// Poisson photon-number probability, evaluated in log space.
pub fn poisson_pn(mean: f64, n: usize) -> Result<f64> {
    if !(mean >= 0.0) || !mean.is_finite() {
        return Err(Error::Domain(format!("negative or non-finite mean {mean}")));
    }
    if mean == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let nf = n as f64;
    let log_p = -mean + nf * mean.ln() - ln_factorial(n);
    Ok(log_p.exp())
}

/// Thermal (Bose-Einstein) photon-number probability.
pub fn thermal_pn(mean: f64, n: usize) -> Result<f64> {
    if !(mean >= 0.0) || !mean.is_finite() {
        return Err(Error::Domain(format!("negative or non-finite mean {mean}")));
    }
    if mean == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let nf = n as f64;
    let log_p = nf * mean.ln() - (nf + 1.0) * (1.0 + mean).ln();
    Ok(log_p.exp())
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Binomial coefficient as a float, exact for the small arguments used here.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Bisection root finder.
///
/// Requires `f(lo) * f(hi) <= 0`. Returns the midpoint of the final bracket,
/// whose width is at most `tol`.
pub fn bisect_root<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(lo < hi) {
        return Err(Error::InvalidInterval { lo, hi });
    }
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoSignChange {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }
    for _ in 0..BISECT_MAX_ITER {
        if b - a <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Maximize a scalar function on `[lo, hi]`.
///
/// A coarse pre-scan picks the best bracket, then golden-section search
/// refines inside it. Returns `(argmax, max)`.
pub fn maximize_scalar<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    if !(lo < hi) {
        return Err(Error::InvalidInterval { lo, hi });
    }
    let step = (hi - lo) / (PRESCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..PRESCAN_POINTS).map(|i| lo + step * i as f64).collect();
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, &x) in grid.iter().enumerate() {
        let v = f(x);
        if v > best_val {
            best_val = v;
            best = i;
        }
    }
    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(PRESCAN_POINTS - 1)];

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..GOLDEN_MAX_ITER {
        if (b - a).abs() <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // the pre-scan point can beat the refined one on flat or kinked inputs
    if best_val > fx {
        Ok((grid[best], best_val))
    } else {
        Ok((x, fx))
    }
}

/// A finite nonnegative vector over photon numbers or click counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionVec {
    entries: Vec<f64>,
}

impl DistributionVec {
    /// Wrap raw entries without any checks. Inversion results may be
    /// negative before clipping.
    pub fn from_raw(entries: Vec<f64>) -> Self {
        Self { entries }
    }

    /// Build a probability vector, rejecting negative entries and sums
    /// exceeding one.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = entries.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
            return Err(Error::Domain(format!("entry {i} is {v}, must be >= 0")));
        }
        let total: f64 = entries.iter().sum();
        if total > 1.0 + 1e-9 {
            return Err(Error::Domain(format!("entries sum to {total} > 1")));
        }
        Ok(Self { entries })
    }

    /// Truncated Poisson distribution over `0..=n_max`.
    pub fn poisson(mean: f64, n_max: usize) -> Result<Self> {
        let entries = (0..=n_max)
            .map(|n| poisson_pn(mean, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { entries })
    }

    /// Truncated thermal distribution over `0..=n_max`.
    pub fn thermal(mean: f64, n_max: usize) -> Result<Self> {
        let entries = (0..=n_max)
            .map(|n| thermal_pn(mean, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { entries })
    }

    /// Normalized histogram of nonnegative integer samples.
    pub fn histogram(samples: &[usize], n_max: usize) -> Self {
        let mut entries = vec![0.0; n_max + 1];
        let mut counted = 0usize;
        for &s in samples {
            if s <= n_max {
                entries[s] += 1.0;
                counted += 1;
            }
        }
        if counted > 0 {
            let total = counted as f64;
            entries.iter_mut().for_each(|e| *e /= total);
        }
        Self { entries }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<f64> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn n_max(&self) -> usize {
        self.entries.len().saturating_sub(1)
    }

    pub fn get(&self, n: usize) -> f64 {
        self.entries.get(n).copied().unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.entries
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum::<f64>()
            / self.sum()
    }

    /// Rescale so the entries sum to one.
    pub fn normalized(&self) -> Result<Self> {
        let total = self.sum();
        if !(total > 0.0) {
            return Err(Error::Degenerate("cannot normalize a zero vector".into()));
        }
        Ok(Self {
            entries: self.entries.iter().map(|e| e / total).collect(),
        })
    }

    /// Clip negative entries to zero and renormalize.
    pub fn clip_and_normalize(&self) -> Result<Self> {
        Self::from_raw(self.entries.iter().map(|e| e.max(0.0)).collect()).normalized()
    }
}

/// Inverse-CDF sampler over a discrete distribution.
#[derive(Debug, Clone)]
pub struct CdfSampler {
    cdf: Vec<f64>,
}

impl CdfSampler {
    pub fn new(dist: &DistributionVec) -> Self {
        let total = dist.sum();
        let mut acc = 0.0;
        let cdf = dist
            .entries()
            .iter()
            .map(|p| {
                acc += p / total;
                acc
            })
            .collect();
        Self { cdf }
    }

    /// Index whose cumulative bracket contains `u` in [0, 1).
    pub fn sample(&self, u: f64) -> usize {
        let idx = self.cdf.partition_point(|c| *c <= u);
        idx.min(self.cdf.len() - 1)
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.cols).map(|j| self.column(j).iter().sum()).collect()
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * x[j]).sum())
            .collect())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
///
/// No nonnegativity is enforced on the result.
pub fn solve_linear(a: &Matrix, b: &DistributionVec) -> Result<DistributionVec> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::Dimension(format!("matrix is {}x{}, not square", n, a.cols())));
    }
    if b.len() != n {
        return Err(Error::Dimension(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            n
        )));
    }
    let scale = a.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Err(Error::SingularMatrix { column: 0, pivot: 0.0 });
    }
    let mut m = a.clone();
    let mut rhs = b.entries().to_vec();
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, m[(r, col)]))
            .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
            .expect("non-empty pivot range");
        if pivot.abs() <= SINGULAR_TOL * scale {
            return Err(Error::SingularMatrix { column: col, pivot });
        }
        if pivot_row != col {
            for j in 0..n {
                m.data.swap(col * n + j, pivot_row * n + j);
            }
            rhs.swap(col, pivot_row);
        }
        for r in col + 1..n {
            let factor = m[(r, col)] / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                m[(r, j)] -= factor * m[(col, j)];
            }
            rhs[r] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| m[(i, j)] * x[j]).sum();
        x[i] = (rhs[i] - s) / m[(i, i)];
    }
    Ok(DistributionVec::from_raw(x))
}
