//! N-dimensional FFT on row-major grids. Plans are cached per thread.

use std::cell::RefCell;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::Grid;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Forward,
    Inverse,
}

fn transform_lines(lines: &mut [Complex64], len: usize, dir: Direction) {
    // chunk so each rayon task plans once and amortises its scratch buffer
    let per_task = (1 << 16).max(len);
    let per_task = per_task - per_task % len;
    lines.par_chunks_mut(per_task).for_each(|chunk| {
        let fft = PLANNER.with(|p| {
            let mut p = p.borrow_mut();
            match dir {
                Direction::Forward => p.plan_fft_forward(len),
                Direction::Inverse => p.plan_fft_inverse(len),
            }
        });
        fft.process(chunk);
    });
}

fn transform(grid: &Grid, data: &mut [Complex64], dir: Direction) {
    let sizes = grid.sizes();
    match sizes.len() {
        1 => transform_lines(data, sizes[0], dir),
        _ => {
            let (n0, n1) = (sizes[0], sizes[1]);
            transform_lines(data, n1, dir);
            let mut t = vec![Complex64::new(0.0, 0.0); data.len()];
            transpose(data, &mut t, n0, n1);
            transform_lines(&mut t, n0, dir);
            transpose(&t, data, n1, n0);
        }
    }
    if dir == Direction::Inverse {
        let scale = 1.0 / grid.len() as f64;
        data.par_iter_mut().for_each(|v| *v *= scale);
    }
}

/// `src` is rows x cols, `dst` becomes cols x rows.
fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    dst.par_chunks_mut(rows).enumerate().for_each(|(c, out)| {
        for (r, o) in out.iter_mut().enumerate() {
            *o = src[r * cols + c];
        }
    });
}

pub(crate) fn forward(grid: &Grid, data: &mut [Complex64]) {
    transform(grid, data, Direction::Forward);
}

/// Normalised inverse (forward then inverse is the identity).
pub(crate) fn inverse(grid: &Grid, data: &mut [Complex64]) {
    transform(grid, data, Direction::Inverse);
}
