use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::FieldError;
use crate::scalar::Real;

/// Uniform periodic grid on `Πᵢ [0, Lᵢ)`, shifted by a fixed offset.
///
/// Node `(i₁, …, iₙ)` sits at `offset + (i₁h₁, …, iₙhₙ)`; the flat index is
/// row-major with the last axis fastest.
#[derive(Clone)]
pub struct FlatTorusGrid<T: Real> {
    n: usize,
    resolution: usize,
    periods: Vec<T>,
    offset: Vec<T>,
    plan: Arc<FftPair<T>>,
}

struct FftPair<T: Real> {
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

pub const MAX_DIM: usize = 3;
const LINE_GROUP: usize = 32;

pub const MIN_RESOLUTION: usize = 8;

impl<T: Real> FlatTorusGrid<T> {
    /// The torus `(ℝ/2πℤ)ⁿ` with the default offset `(√2 − 1)·h` per axis.
    pub fn new(n: usize, resolution: usize) -> Result<Self, FieldError> {
        Self::with_periods(vec![T::TAU(); n], resolution)
    }

    pub fn with_periods(periods: Vec<T>, resolution: usize) -> Result<Self, FieldError> {
        let n = periods.len();
        if n == 0 || n > MAX_DIM {
            return Err(FieldError::Dimension(n));
        }
        if resolution < MIN_RESOLUTION || !resolution.is_power_of_two() {
            return Err(FieldError::Resolution(resolution));
        }
        if periods.iter().any(|&l| !l.is_finite() || l <= T::zero()) {
            return Err(FieldError::Period);
        }
        let mut planner = FftPlanner::new();
        let plan = Arc::new(FftPair {
            forward: planner.plan_fft_forward(resolution),
            inverse: planner.plan_fft_inverse(resolution),
        });
        let res = T::from_usize(resolution).expect("resolution fits");
        let shift = T::SQRT_2() - T::one();
        let offset = periods.iter().map(|&l| shift * l / res).collect();
        Ok(Self { n, resolution, periods, offset, plan })
    }

    /// Replaces the offset; each entry must lie in `[0, hᵢ)`.
    pub fn with_offset(mut self, offset: Vec<T>) -> Result<Self, FieldError> {
        if offset.len() != self.n || offset.iter().enumerate().any(|(i, &o)| o < T::zero() || o >= self.spacing(i)) {
            return Err(FieldError::Offset);
        }
        self.offset = offset;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn periods(&self) -> &[T] {
        &self.periods
    }

    pub fn offset(&self) -> &[T] {
        &self.offset
    }

    pub fn spacing(&self, axis: usize) -> T {
        self.periods[axis] / T::from_usize(self.resolution).expect("resolution fits")
    }

    pub fn len(&self) -> usize {
        self.resolution.pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn volume(&self) -> T {
        self.periods.iter().fold(T::one(), |acc, &l| acc * l)
    }

    pub fn cell_volume(&self) -> T {
        self.volume() / T::from_usize(self.len()).expect("size fits")
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.n];
        for a in (0..self.n).rev() {
            idx[a] = flat % self.resolution;
            flat /= self.resolution;
        }
        idx
    }

    pub fn coords(&self, flat: usize) -> Vec<T> {
        self.multi_index(flat)
            .iter()
            .enumerate()
            .map(|(a, &i)| self.offset[a] + self.spacing(a) * T::from_usize(i).expect("index fits"))
            .collect()
    }

    /// Signed integer frequency of FFT bin `k` (Nyquist bin reported as 0).
    pub fn mode(&self, k: usize) -> i64 {
        let n = self.resolution as i64;
        let k = k as i64;
        if 2 * k == n {
            0
        } else if 2 * k < n {
            k
        } else {
            k - n
        }
    }

    /// Angular wavenumber `ξₐ = 2π m / Lₐ` of FFT bin `k` along `axis`.
    pub fn wavenumber(&self, axis: usize, k: usize) -> T {
        T::TAU() * T::from_i64(self.mode(k)).expect("mode fits") / self.periods[axis]
    }

    /// Wavevector of a flat spectral index.
    pub fn xi(&self, flat: usize) -> Vec<T> {
        self.multi_index(flat).iter().enumerate().map(|(a, &k)| self.wavenumber(a, k)).collect()
    }

    /// In-place n-dimensional FFT; the inverse includes the `1/Nⁿ` factor.
    pub fn transform(&self, data: &mut [Complex<T>], inverse: bool) {
        assert_eq!(data.len(), self.len());
        let fft = if inverse { &self.plan.inverse } else { &self.plan.forward };
        let res = self.resolution;
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()];
        let mut buf = Vec::new();
        for axis in 0..self.n {
            let stride = res.pow((self.n - 1 - axis) as u32);
            if stride == 1 {
                fft.process_with_scratch(data, &mut scratch);
                continue;
            }
            // Each block is a res × stride matrix whose columns are the lines
            // along `axis`; gather a few columns at a time into contiguous rows.
            let group = LINE_GROUP.min(stride);
            buf.resize(res * group, Complex::new(T::zero(), T::zero()));
            for block in data.chunks_exact_mut(res * stride) {
                for j0 in (0..stride).step_by(group) {
                    for (k, row) in block.chunks_exact(stride).enumerate() {
                        for (j, v) in row[j0..j0 + group].iter().enumerate() {
                            buf[j * res + k] = *v;
                        }
                    }
                    fft.process_with_scratch(&mut buf, &mut scratch);
                    for (k, row) in block.chunks_exact_mut(stride).enumerate() {
                        for (j, v) in row[j0..j0 + group].iter_mut().enumerate() {
                            *v = buf[j * res + k];
                        }
                    }
                }
            }
        }
        if inverse {
            let scale = T::one() / T::from_usize(self.len()).expect("size fits");
            data.iter_mut().for_each(|v| *v = v.scale(scale));
        }
    }

    pub fn forward(&self, values: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = values.to_vec();
        self.transform(&mut out, false);
        out
    }

    pub fn inverse(&self, coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = coeffs.to_vec();
        self.transform(&mut out, true);
        out
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.n == other.n && self.resolution == other.resolution && self.periods == other.periods && self.offset == other.offset
    }

    pub fn sample(&self, f: impl Fn(&[T]) -> Complex<T>) -> Vec<Complex<T>> {
        (0..self.len()).map(|i| f(&self.coords(i))).collect()
    }
}

impl<T: Real> fmt::Debug for FlatTorusGrid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FlatTorusGrid")
            .field("n", &self.n)
            .field("resolution", &self.resolution)
            .field("periods", &self.periods)
            .field("offset", &self.offset)
            .finish()
    }
}
