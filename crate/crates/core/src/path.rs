//! Two-dimensional piecewise-linear paths and their level-2 signatures.
//!
//! For a polyline every level-2 iterated integral has a closed form: the
//! symmetric part is fixed by the increments, `X^{(i,i)} = (X^{(i)})^2 / 2`
//! and `X^{(1,2)} + X^{(2,1)} = X^{(1)} X^{(2)}`, while the antisymmetric part
//! is the Lévy area, i.e. half the signed shoelace area of the polygon closed
//! by the chord. All terms are evaluated on the raw vertex coordinates with
//! an exact accumulator, so each returned value is the correctly rounded
//! iterated integral of the given polyline.

use crate::error::PathError;
use crate::exact::ExactSum;

pub type Point = [f64; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct Path2D {
    points: Vec<Point>,
    times: Option<Vec<f64>>,
}

impl Path2D {
    pub fn new(points: Vec<Point>) -> Result<Self, PathError> {
        if points.len() < 2 {
            return Err(PathError::TooShort(points.len()));
        }
        if let Some(i) = points
            .iter()
            .position(|p| !(p[0].is_finite() && p[1].is_finite()))
        {
            return Err(PathError::NonFinite(i));
        }
        Ok(Path2D {
            points,
            times: None,
        })
    }

    /// A path with explicit, strictly increasing sample times.
    pub fn with_times(points: Vec<Point>, times: Vec<f64>) -> Result<Self, PathError> {
        if points.len() != times.len() {
            return Err(PathError::LengthMismatch {
                points: points.len(),
                times: times.len(),
            });
        }
        let mut path = Path2D::new(points)?;
        if let Some(i) = (1..times.len()).find(|&i| !(times[i] > times[i - 1])) {
            return Err(PathError::NonIncreasingTime(i));
        }
        path.times = Some(times);
        Ok(path)
    }

    /// Zips two coordinate columns into a path.
    pub fn from_coords(x1: &[f64], x2: &[f64]) -> Result<Self, PathError> {
        if x1.len() != x2.len() {
            return Err(PathError::LengthMismatch {
                points: x1.len(),
                times: x2.len(),
            });
        }
        Path2D::new(x1.iter().zip(x2).map(|(&a, &b)| [a, b]).collect())
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn times(&self) -> Option<&[f64]> {
        self.times.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> Point {
        self.points[0]
    }

    pub fn end(&self) -> Point {
        self.points[self.points.len() - 1]
    }

    /// The same trajectory traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        let times = self.times.as_ref().map(|t| {
            let last = t[t.len() - 1];
            t.iter().rev().map(|&s| last - s).collect()
        });
        Path2D { points, times }
    }
}

/// Truncated (degree 2) signature of a 2-D path with its A/D decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level2Signature {
    /// Level-1 terms `X^{(1)}, X^{(2)}`.
    pub inc: [f64; 2],
    /// Level-2 terms, `tensor[i][j] = X^{(i+1, j+1)}`.
    pub tensor: [[f64; 2]; 2],
    /// Lévy area `A^{1,2}`.
    pub levy: f64,
    /// Symmetric part `D`.
    pub sym: [[f64; 2]; 2],
}

impl Level2Signature {
    /// Signature of a constant path.
    pub fn identity() -> Self {
        Level2Signature {
            inc: [0.0; 2],
            tensor: [[0.0; 2]; 2],
            levy: 0.0,
            sym: [[0.0; 2]; 2],
        }
    }

    /// The antisymmetric part `A` as a matrix.
    pub fn antisym(&self) -> [[f64; 2]; 2] {
        [[0.0, self.levy], [-self.levy, 0.0]]
    }
}

fn symmetric_part(inc: [f64; 2]) -> [[f64; 2]; 2] {
    let off = 0.5 * inc[0] * inc[1];
    [[0.5 * inc[0] * inc[0], off], [off, 0.5 * inc[1] * inc[1]]]
}

/// Twice the Lévy area, as an exact expansion: the closed shoelace sum.
fn twice_levy_expansion(points: &[Point]) -> ExactSum {
    let mut acc = ExactSum::new();
    for w in points.windows(2) {
        acc.add_product(w[0][0], w[1][1]);
        acc.add_product(-w[0][1], w[1][0]);
    }
    let (first, last) = (points[0], points[points.len() - 1]);
    acc.add_product(last[0], first[1]);
    acc.add_product(-last[1], first[0]);
    acc
}

/// Lévy area of the polyline through `points` (at least two of them).
pub fn levy_area(points: &[Point]) -> f64 {
    debug_assert!(points.len() >= 2);
    0.5 * twice_levy_expansion(points).value()
}

/// Level-1 terms: total increment per coordinate.
pub fn level1(path: &Path2D) -> [f64; 2] {
    let (s, e) = (path.start(), path.end());
    [e[0] - s[0], e[1] - s[1]]
}

/// Exact level-2 signature of a piecewise-linear path.
pub fn level2(path: &Path2D) -> Level2Signature {
    let pts = path.points();
    let (s, e) = (path.start(), path.end());
    let inc = level1(path);

    // (e_i - s_i)(e_j - s_j) expanded into raw products, scaled by `scale`
    let increment_product = |i: usize, j: usize, scale: f64| {
        let mut acc = ExactSum::new();
        acc.add_product(scale * e[i], e[j]);
        acc.add_product(-scale * e[i], s[j]);
        acc.add_product(-scale * s[i], e[j]);
        acc.add_product(scale * s[i], s[j]);
        acc
    };

    let twice_levy = twice_levy_expansion(pts);
    let half_cross = increment_product(0, 1, 0.5);

    let mut x12 = half_cross.clone();
    x12.absorb(&twice_levy, 0.5);
    let mut x21 = half_cross;
    x21.absorb(&twice_levy, -0.5);

    let tensor = [
        [increment_product(0, 0, 0.5).value(), x12.value()],
        [x21.value(), increment_product(1, 1, 0.5).value()],
    ];
    Level2Signature {
        inc,
        tensor,
        levy: 0.5 * twice_levy.value(),
        sym: symmetric_part(inc),
    }
}

/// Splits a signature into the Lévy area and the symmetric part `D`.
pub fn decompose(sig: &Level2Signature) -> (f64, [[f64; 2]; 2]) {
    (sig.levy, symmetric_part(sig.inc))
}

/// Chen's identity at level 2: signature of `a` followed by `b`.
///
/// Each output term is the correctly rounded value of the identity applied
/// to the given inputs.
#[allow(clippy::needless_range_loop)]
pub fn chen_concat(a: &Level2Signature, b: &Level2Signature) -> Level2Signature {
    let inc = [a.inc[0] + b.inc[0], a.inc[1] + b.inc[1]];
    let mut tensor = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = ExactSum::new();
            acc.add(a.tensor[i][j]);
            acc.add(b.tensor[i][j]);
            acc.add_product(a.inc[i], b.inc[j]);
            tensor[i][j] = acc.value();
        }
    }
    let mut levy = ExactSum::new();
    levy.add(a.levy);
    levy.add(b.levy);
    levy.add_product(0.5 * a.inc[0], b.inc[1]);
    levy.add_product(-0.5 * a.inc[1], b.inc[0]);
    let levy = levy.value();
    Level2Signature {
        inc,
        tensor,
        levy,
        sym: symmetric_part(inc),
    }
}

/// Length of the polyline (its 1-variation).
pub fn total_variation(path: &Path2D) -> f64 {
    path.points()
        .windows(2)
        .map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]))
        .sum()
}
