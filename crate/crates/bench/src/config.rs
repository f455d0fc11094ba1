use mcube::{Grid, Kind, Mesh};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{BenchError, Result};
use crate::functions::{BenchmarkFunction, FunctionId};

/// Largest grid, in elements, the harness will allocate.
pub const MAX_GRID_ELEMENTS: u128 = 1 << 27;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub dim: usize,
    pub size: usize,
    pub spacings: Vec<f64>,
    /// Centre of the sampled region; defaults to the centre of the function's reference box.
    pub anchor: Option<f64>,
    pub function: FunctionId,
    pub kind: Kind,
    pub order: usize,
    pub samples: usize,
    pub seed: u64,
    pub allow_extrapolation: bool,
}

impl BenchConfig {
    pub fn new(dim: usize, kind: Kind, order: usize) -> Self {
        Self {
            dim,
            size: 12,
            spacings: vec![0.5],
            anchor: None,
            function: FunctionId::default_for(dim),
            kind,
            order,
            samples: 200,
            seed: 42,
            allow_extrapolation: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(BenchError::Config("dimension must be at least 1".into()));
        }
        if self.spacings.is_empty() || self.spacings.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(BenchError::Config("spacings must be positive and finite".into()));
        }
        if self.order < 2 || self.order > self.size {
            return Err(BenchError::Config(format!(
                "order {} must lie in 2..={}",
                self.order, self.size
            )));
        }
        if self.kind == Kind::Linear && self.order != 2 {
            return Err(BenchError::Config("linear interpolation requires order 2".into()));
        }
        if self.samples == 0 {
            return Err(BenchError::Config("at least one sample is required".into()));
        }
        self.check_memory()?;
        self.margin_knots()?;
        Ok(())
    }

    pub fn grid_elements(&self) -> u128 {
        (self.size as u128)
            .checked_pow(self.dim as u32)
            .unwrap_or(u128::MAX)
    }

    /// Refuses grids above [`MAX_GRID_ELEMENTS`] before anything is allocated.
    pub fn check_memory(&self) -> Result<()> {
        let elements = self.grid_elements();
        if elements > MAX_GRID_ELEMENTS {
            return Err(BenchError::MemoryGuard {
                elements,
                bytes: elements.saturating_mul(8),
                limit: MAX_GRID_ELEMENTS,
            });
        }
        Ok(())
    }

    /// Knots kept between the sampled region and each grid edge: `ceil(T/2)`.
    pub fn margin_knots(&self) -> Result<usize> {
        let m = self.order.div_ceil(2);
        if self.size < 2 * m + 2 {
            return Err(BenchError::Config(format!(
                "size {} leaves no interior region for order {} (need at least {})",
                self.size,
                self.order,
                2 * m + 2
            )));
        }
        Ok(m)
    }

    pub fn benchmark_function(&self) -> Result<BenchmarkFunction> {
        self.function.instantiate(self.dim)
    }
}

/// Grid and sampling box for one spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub spacing: f64,
    /// First knot per dimension.
    pub starts: Vec<f64>,
    /// Closed sampling interval per dimension.
    pub sample_box: Vec<(f64, f64)>,
}

/// Centres the grid on the anchor, shifting it inward when it would leave the
/// function's valid domain.
pub fn layout(config: &BenchConfig, f: &BenchmarkFunction, spacing: f64) -> Result<Layout> {
    let span = spacing * (config.size - 1) as f64;
    let anchor = config
        .anchor
        .unwrap_or(0.5 * (f.reference_box.0 + f.reference_box.1));
    let margin = config.margin_knots()? as f64 * spacing;
    let mut starts = Vec::with_capacity(config.dim);
    let mut sample_box = Vec::with_capacity(config.dim);
    for (d, &(lo, hi)) in f.valid_domain.iter().enumerate() {
        let mut start = anchor - 0.5 * span;
        if start < lo {
            start = lo;
        }
        if start + span > hi {
            start = hi - span;
        }
        if start < lo {
            return Err(BenchError::Config(format!(
                "grid span {span} does not fit the domain [{lo}, {hi}] of {} in dimension {d}",
                f.name
            )));
        }
        starts.push(start);
        sample_box.push((start + margin, start + span - margin));
    }
    Ok(Layout {
        spacing,
        starts,
        sample_box,
    })
}

impl Layout {
    pub fn mesh(&self, size: usize) -> Result<Mesh> {
        let n = self.starts.len();
        Ok(Mesh::uniform(
            &self.starts,
            &vec![self.spacing; n],
            &vec![size; n],
        )?)
    }

    pub fn build_grid(&self, size: usize, f: &BenchmarkFunction) -> Result<Grid> {
        Ok(Grid::build(self.mesh(size)?, |p| f.eval(p))?)
    }

    /// Uniform samples in the sampling box, reproducible from `seed`.
    pub fn samples(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                self.sample_box
                    .iter()
                    .map(|&(lo, hi)| rng.gen_range(lo..hi))
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r6_layout_stays_in_domain() {
        let mut c = BenchConfig::new(6, Kind::Polynomial, 5);
        let f = c.benchmark_function().unwrap();
        let l = layout(&c, &f, 0.5).unwrap();
        assert!((l.starts[0] - 1.25).abs() < 1e-15);
        assert!((l.sample_box[0].0 - 2.75).abs() < 1e-15);
        assert!((l.sample_box[0].1 - 5.25).abs() < 1e-15);

        let l = layout(&c, &f, 1.0).unwrap();
        assert_eq!(l.starts[0], 1.25);
        assert_eq!(l.sample_box[0], (4.25, 9.25));

        c.spacings = vec![10.0];
        assert!(matches!(layout(&c, &f, 10.0), Err(BenchError::Config(_))));
    }

    #[test]
    fn memory_guard() {
        let mut c = BenchConfig::new(6, Kind::Polynomial, 5);
        c.size = 22;
        assert!(c.check_memory().is_ok());
        c.size = 23;
        assert!(matches!(c.validate(), Err(BenchError::MemoryGuard { .. })));
        assert_eq!(c.validate().unwrap_err().exit_code(), 3);
    }

    #[test]
    fn config_errors() {
        let mut c = BenchConfig::new(2, Kind::Linear, 3);
        assert_eq!(c.validate().unwrap_err().exit_code(), 2);
        c.order = 2;
        c.size = 3;
        assert!(c.validate().is_err());
        c.size = 4;
        assert!(c.validate().is_ok());
    }

    #[test]
    fn samples_are_reproducible_and_inside() {
        let c = BenchConfig::new(3, Kind::Polynomial, 4);
        let f = c.benchmark_function().unwrap();
        let l = layout(&c, &f, 0.25).unwrap();
        let a = l.samples(50, 9);
        assert_eq!(a, l.samples(50, 9));
        for p in &a {
            for (x, &(lo, hi)) in p.iter().zip(&l.sample_box) {
                assert!(lo <= *x && *x < hi);
            }
        }
    }
}
