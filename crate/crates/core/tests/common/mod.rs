#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sigpair::data_io::{align_pair, AlignedPairSeries};
use sigpair::path::{Path2D, Point};
use sigpair::synth::{generate_synthetic, SynthParams};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random polyline with `len` vertices, coordinates uniform in `[-10, 10]`.
pub fn random_points(rng: &mut ChaCha8Rng, len: usize) -> Vec<Point> {
    (0..len)
        .map(|_| {
            [
                rng.random_range(-10.0..=10.0),
                rng.random_range(-10.0..=10.0),
            ]
        })
        .collect()
}

pub fn random_path(rng: &mut ChaCha8Rng, min_len: usize, max_len: usize) -> Path2D {
    let len = rng.random_range(min_len..=max_len);
    Path2D::new(random_points(rng, len)).unwrap()
}

/// Random polyline on the grid of multiples of 1/64, so that shifting by a
/// dyadic offset is exact.
pub fn dyadic_points(rng: &mut ChaCha8Rng, len: usize) -> Vec<Point> {
    (0..len)
        .map(|_| {
            [
                rng.random_range(-640i32..=640) as f64 / 64.0,
                rng.random_range(-640i32..=640) as f64 / 64.0,
            ]
        })
        .collect()
}

struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    fn new() -> Self {
        Compensated { sum: 0.0, c: 0.0 }
    }

    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Brute-force level-2 terms: every segment is cut into `substeps` pieces and
/// `∫ (X^i - X^i_0) dX^j` is accumulated as a midpoint Riemann sum.
pub fn riemann_level2(points: &[Point], substeps: usize) -> [[f64; 2]; 2] {
    let x0 = points[0];
    let mut acc: [[Compensated; 2]; 2] = [
        [Compensated::new(), Compensated::new()],
        [Compensated::new(), Compensated::new()],
    ];
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let at = |s: f64| [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
        let mut prev = at(0.0);
        for k in 1..=substeps {
            let next = if k == substeps {
                b
            } else {
                at(k as f64 / substeps as f64)
            };
            let mid = [
                0.5 * (prev[0] + next[0]) - x0[0],
                0.5 * (prev[1] + next[1]) - x0[1],
            ];
            let dx = [next[0] - prev[0], next[1] - prev[1]];
            for i in 0..2 {
                for j in 0..2 {
                    acc[i][j].add(mid[i] * dx[j]);
                }
            }
            prev = next;
        }
    }
    [
        [acc[0][0].value(), acc[0][1].value()],
        [acc[1][0].value(), acc[1][1].value()],
    ]
}

/// The seeded synthetic pair used across the regression tests.
pub const FIXTURE_SEED: u64 = 42;

pub fn fixture(params: &SynthParams) -> AlignedPairSeries {
    let (b1, b2) = generate_synthetic(FIXTURE_SEED, params, ("ASSET1", "ASSET2"));
    align_pair(&b1, &b2).unwrap()
}

pub fn default_fixture() -> AlignedPairSeries {
    fixture(&SynthParams::default())
}

pub fn small_fixture(days: usize, minutes_per_day: usize) -> AlignedPairSeries {
    fixture(&SynthParams {
        days,
        minutes_per_day,
        ..SynthParams::default()
    })
}
