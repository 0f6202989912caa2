//! Cached-plan 2D complex FFT on square row-major grids: rows, transpose,
//! rows, transpose. rustfft does the 1D work; normalization (1/n² on the
//! inverse) is applied here so forward∘inverse is the identity.

use rustfft::{num_complex::Complex, Fft, FftPlanner};
use std::sync::Arc;

pub type Cplx = Complex<f64>;

pub struct Fft2 {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Cplx>,
    tmp: Vec<Cplx>,
}

impl Fft2 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let len = fwd
            .get_inplace_scratch_len()
            .max(inv.get_inplace_scratch_len());
        Self {
            n,
            fwd,
            inv,
            scratch: vec![Cplx::new(0.0, 0.0); len],
            tmp: vec![Cplx::new(0.0, 0.0); n * n],
        }
    }

    fn transpose(&mut self, data: &mut [Cplx]) {
        let n = self.n;
        self.tmp.copy_from_slice(data);
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.tmp[i * n + j];
            }
        }
    }

    fn pass(&mut self, data: &mut [Cplx], forward: bool) {
        let n = self.n;
        let plan = if forward { self.fwd.clone() } else { self.inv.clone() };
        for row in data.chunks_exact_mut(n) {
            plan.process_with_scratch(row, &mut self.scratch);
        }
        self.transpose(data);
        for row in data.chunks_exact_mut(n) {
            plan.process_with_scratch(row, &mut self.scratch);
        }
        self.transpose(data);
    }

    pub fn forward(&mut self, data: &mut [Cplx]) {
        assert_eq!(data.len(), self.n * self.n);
        self.pass(data, true);
    }

    pub fn inverse(&mut self, data: &mut [Cplx]) {
        assert_eq!(data.len(), self.n * self.n);
        self.pass(data, false);
        let scale = 1.0 / (self.n * self.n) as f64;
        for z in data.iter_mut() {
            *z *= scale;
        }
    }
}
