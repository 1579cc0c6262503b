use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use super::Medium;
use crate::error::{Error, Result};
use crate::spectral::{Field, Grid, Point};

/// Linear phase `c * alpha . x`.
pub fn eikonal_plane(grid: &Grid, alpha: [f64; 2], c: f64) -> Result<Field> {
    let n = (alpha[0] * alpha[0] + alpha[1] * alpha[1]).sqrt();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!("direction has norm {n}, expected 1")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid("plane speed must be positive"));
    }
    Field::from_real_fn(grid, |x| c * (alpha[0] * x[0] + alpha[1] * x[1]))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FmmOptions {
    /// Nodes within this distance of the source are initialised by quadrature of `r`
    /// along the straight segment.
    pub init_radius: f64,
}

impl Default for FmmOptions {
    fn default() -> Self {
        Self { init_radius: 0.25 }
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Trial {
    value: f64,
    node: usize,
}

impl Eq for Trial {}

impl Ord for Trial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .value
            .total_cmp(&self.value)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Trial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Far,
    Trial,
    Known,
}

fn segment_integral(medium: &Medium, a: Point, b: Point) -> f64 {
    let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    // Simpson with 8 panels
    let m = 8;
    let mut acc = 0.0;
    for i in 0..=m {
        let t = i as f64 / m as f64;
        let w = if i == 0 || i == m {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * medium.r([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
    }
    acc * len / (3.0 * m as f64)
}

/// First-order fast marching for `|grad phi| = r` with `phi(x0) = 0`.
pub fn eikonal_distance(medium: &Medium, grid: &Grid, x0: Point) -> Result<Field> {
    eikonal_distance_with(medium, grid, x0, FmmOptions::default())
}

pub fn eikonal_distance_with(medium: &Medium, grid: &Grid, x0: Point, opts: FmmOptions) -> Result<Field> {
    if medium.omega().contains(x0) {
        return Err(Error::invalid(format!("source {x0:?} lies inside Omega")));
    }
    if !grid.contains(x0, 0.0) {
        return Err(Error::invalid(format!("source {x0:?} outside the grid box")));
    }
    let dim = grid.dim();
    let len = grid.len();
    let speed: Vec<f64> = grid.points().map(|x| medium.r(x)).collect();
    let mut value = vec![f64::INFINITY; len];
    let mut state = vec![State::Far; len];
    let init = opts.init_radius.max(2.0 * grid.max_spacing());
    for (k, x) in grid.points().enumerate() {
        let d = ((x[0] - x0[0]).powi(2) + (x[1] - x0[1]).powi(2)).sqrt();
        if d <= init {
            value[k] = segment_integral(medium, x0, x);
            state[k] = State::Known;
        }
    }

    let neighbours = |k: usize| {
        let idx = grid.multi_index(k);
        let mut out = [None; 4];
        for axis in 0..dim {
            for (slot, d) in [(-1i64, 0usize), (1, 1)] {
                let j = idx[axis] as i64 + slot;
                if j >= 0 && j < grid.sizes()[axis] as i64 {
                    let mut m = idx;
                    m[axis] = j as usize;
                    out[2 * axis + d] = Some(grid.flat_index(m));
                }
            }
        }
        out
    };

    let update = |k: usize, value: &[f64], state: &[State]| -> f64 {
        let nb = neighbours(k);
        let mut terms: Vec<(f64, f64)> = Vec::with_capacity(2);
        for axis in 0..dim {
            let mut best = f64::INFINITY;
            for n in [nb[2 * axis], nb[2 * axis + 1]].into_iter().flatten() {
                if state[n] == State::Known {
                    best = best.min(value[n]);
                }
            }
            if best.is_finite() {
                terms.push((best, grid.spacing(axis)));
            }
        }
        terms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let f = speed[k];
        let (t1, h1) = terms[0];
        let mut t = t1 + f * h1;
        if terms.len() == 2 && t > terms[1].0 {
            let (t2, h2) = terms[1];
            let a = 1.0 / (h1 * h1) + 1.0 / (h2 * h2);
            let b = -2.0 * (t1 / (h1 * h1) + t2 / (h2 * h2));
            let c = t1 * t1 / (h1 * h1) + t2 * t2 / (h2 * h2) - f * f;
            let disc = b * b - 4.0 * a * c;
            if disc >= 0.0 {
                t = (-b + disc.sqrt()) / (2.0 * a);
            }
        }
        t
    };

    let mut heap = BinaryHeap::new();
    for k in 0..len {
        if state[k] != State::Known {
            continue;
        }
        for n in neighbours(k).into_iter().flatten() {
            if state[n] == State::Far {
                state[n] = State::Trial;
            }
        }
    }
    for k in 0..len {
        if state[k] == State::Trial {
            value[k] = update(k, &value, &state);
            heap.push(Trial {
                value: value[k],
                node: k,
            });
        }
    }

    let mut last = 0.0f64;
    while let Some(Trial { value: v, node }) = heap.pop() {
        if state[node] != State::Trial || v != value[node] {
            continue;
        }
        if v < last - 1e-12 * last.max(1.0) {
            return Err(Error::NonMonotoneFront {
                cell: grid.multi_index(node)[..dim].to_vec(),
                value: v,
                accepted: last,
            });
        }
        last = last.max(v);
        state[node] = State::Known;
        for n in neighbours(node).into_iter().flatten() {
            if state[n] == State::Known {
                continue;
            }
            state[n] = State::Trial;
            let t = update(n, &value, &state);
            if t < value[n] {
                value[n] = t;
                heap.push(Trial { value: t, node: n });
            }
        }
    }
    Field::new(
        grid.clone(),
        value.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
    )
}
