//! Error-free floating-point accumulation.
//!
//! Sums of `f64` values and pairwise products are carried as a list of
//! non-overlapping partials (Shewchuk's expansion arithmetic) and rounded
//! once when the value is read. Products are split with a fused
//! multiply-add so that `a * b == hi + lo` holds exactly.

/// Exact accumulator for sums of `f64` values and products.
#[derive(Debug, Clone, Default)]
pub struct ExactSum {
    partials: Vec<f64>,
}

impl ExactSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `x` without rounding.
    pub fn add(&mut self, x: f64) {
        let mut x = x;
        let mut kept = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[kept] = lo;
                kept += 1;
            }
            x = hi;
        }
        self.partials.truncate(kept);
        self.partials.push(x);
    }

    /// Adds the exact product `a * b`.
    pub fn add_product(&mut self, a: f64, b: f64) {
        let hi = a * b;
        let lo = a.mul_add(b, -hi);
        self.add(hi);
        if lo != 0.0 {
            self.add(lo);
        }
    }

    /// Adds every partial of `other`, scaled by `sign` (±1).
    pub fn absorb(&mut self, other: &ExactSum, sign: f64) {
        for &p in &other.partials {
            self.add(sign * p);
        }
    }

    /// Adds `factor` times the value of `other`, exactly.
    pub fn absorb_scaled(&mut self, other: &ExactSum, factor: f64) {
        for &p in &other.partials {
            self.add_product(p, factor);
        }
    }

    /// The correctly rounded value of the accumulated sum.
    pub fn value(&self) -> f64 {
        let p = &self.partials;
        let mut n = p.len();
        if n == 0 {
            return 0.0;
        }
        n -= 1;
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            let x = hi;
            let y = p[n - 1];
            n -= 1;
            hi = x + y;
            let yr = hi - x;
            lo = y - yr;
            if lo != 0.0 {
                break;
            }
        }
        // round-half-even correction when the remaining tail pushes past a tie
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
        hi
    }
}

/// Correctly rounded sum of a slice.
pub fn exact_sum(values: &[f64]) -> f64 {
    let mut acc = ExactSum::new();
    for &v in values {
        acc.add(v);
    }
    acc.value()
}

/// Correctly rounded `a * b - c * d`.
pub fn cross(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let mut acc = ExactSum::new();
    acc.add_product(a, b);
    acc.add_product(-c, d);
    acc.value()
}
