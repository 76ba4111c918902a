//! Low-discrepancy sampling of evaluation boxes.
//!
//! Property verifiers draw quasi-random points from a declared
//! `[0,T] × Ω̄ × [−U,U]`-style box. Halton sequences give reproducible,
//! well-spread samples without an RNG.

/// Radical-inverse (van der Corput) value of `index` in the given base.
pub fn halton(mut index: usize, base: usize) -> f64 {
    let mut result = 0.0;
    let mut f = 1.0 / base as f64;
    while index > 0 {
        result += f * (index % base) as f64;
        index /= base;
        f /= base as f64;
    }
    result
}

const BASES: [usize; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// An axis-aligned sampling box.
#[derive(Clone, Debug)]
pub struct SampleBox {
    dims: Vec<(f64, f64)>,
}

impl SampleBox {
    pub fn new(dims: Vec<(f64, f64)>) -> Self {
        assert!(dims.len() <= BASES.len(), "too many sampling dimensions");
        Self { dims }
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    /// The `i`-th Halton point of the box (1-based internally to avoid the
    /// degenerate all-zero first sample).
    pub fn point(&self, i: usize, out: &mut Vec<f64>) {
        out.clear();
        for (d, (lo, hi)) in self.dims.iter().enumerate() {
            let u = halton(i + 1, BASES[d]);
            out.push(lo + (hi - lo) * u);
        }
    }

    pub fn points(&self, n: usize) -> Vec<Vec<f64>> {
        let mut buf = Vec::new();
        (0..n)
            .map(|i| {
                self.point(i, &mut buf);
                buf.clone()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_base2_prefix() {
        let seq: Vec<f64> = (1..=6).map(|i| halton(i, 2)).collect();
        assert_eq!(seq, vec![0.5, 0.25, 0.75, 0.125, 0.625, 0.375]);
    }

    #[test]
    fn points_stay_in_box() {
        let b = SampleBox::new(vec![(0.0, 2.0), (-1.0, 1.0), (-5.0, -4.0)]);
        for p in b.points(100) {
            assert!(p[0] >= 0.0 && p[0] <= 2.0);
            assert!(p[1] >= -1.0 && p[1] <= 1.0);
            assert!(p[2] >= -5.0 && p[2] <= -4.0);
        }
    }

    #[test]
    fn deterministic() {
        let b = SampleBox::new(vec![(0.0, 1.0); 2]);
        assert_eq!(b.points(16), b.points(16));
    }
}
