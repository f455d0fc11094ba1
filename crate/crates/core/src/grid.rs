//! N-dimensional interpolation on rectilinear grids.
//!
//! A query selects a window of `T_i` knots around `x_i` in every dimension,
//! prepares one 1-D stage per dimension, and quantizes the strided sub-window
//! of the grid data with those stages. Dimension N (stride 1) is collapsed
//! first and dimension 1 last.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::index::IndexSpec;
use crate::interp1d::{Interpolator1D, Kind, PreparedStage};
use crate::quantize::{Identity, Quantizer};
use crate::store::{MultiArray, WindowSpec};

/// The argument mesh: one strictly increasing knot array per dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    axes: Vec<Vec<f64>>,
}

impl Mesh {
    pub fn new(axes: Vec<Vec<f64>>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::EmptySpec);
        }
        for (axis, knots) in axes.iter().enumerate() {
            if knots.is_empty() {
                return Err(Error::ZeroSize { dim: axis });
            }
            if knots.iter().any(|k| !k.is_finite()) {
                return Err(Error::NonFiniteArgument);
            }
            if knots.len() >= 2 && knots.windows(2).all(|w| w[0] > w[1]) {
                return Err(Error::DecreasingAxis { axis });
            }
            if let Some(p) = knots.windows(2).position(|w| w[0] >= w[1]) {
                return Err(Error::NonMonotoneAxis {
                    axis,
                    position: p + 1,
                });
            }
        }
        Ok(Self { axes })
    }

    /// `size` equally spaced knots starting at `start`, per dimension.
    pub fn uniform(starts: &[f64], spacing: &[f64], sizes: &[usize]) -> Result<Self> {
        if starts.len() != sizes.len() || spacing.len() != sizes.len() {
            return Err(Error::Shape("starts, spacing and sizes differ in length".into()));
        }
        Self::new(
            sizes
                .iter()
                .zip(starts.iter().zip(spacing))
                .map(|(&n, (&a, &h))| (0..n).map(|j| a + h * j as f64).collect())
                .collect(),
        )
    }

    pub fn ndim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    pub fn axis(&self, dim: usize) -> &[f64] {
        &self.axes[dim]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }
}

/// Mesh plus the function values at every mesh node.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    mesh: Mesh,
    data: MultiArray,
}

impl Grid {
    /// Evaluates `f` at every knot tuple in lexicographic order.
    pub fn build<F>(mesh: Mesh, mut f: F) -> Result<Self>
    where
        F: FnMut(&[f64]) -> f64,
    {
        let spec = IndexSpec::unshifted(mesh.sizes())?;
        let mut point = vec![0.0; mesh.ndim()];
        let data = MultiArray::from_function(spec, |ix| {
            for (dim, (&a, p)) in ix.iter().zip(point.iter_mut()).enumerate() {
                *p = mesh.axes[dim][(a - 1) as usize];
            }
            f(&point)
        })
        .map_err(|e| match e {
            Error::NonFiniteValue { index, value } => {
                let at: Vec<String> = index
                    .iter()
                    .enumerate()
                    .map(|(d, &a)| mesh.axes[d][(a - 1) as usize].to_string())
                    .collect();
                Error::Shape(format!(
                    "function returned {value} at knot tuple ({})",
                    at.join(", ")
                ))
            }
            other => other,
        })?;
        Ok(Self { mesh, data })
    }

    pub fn from_parts(mesh: Mesh, data: MultiArray) -> Result<Self> {
        if mesh.sizes() != data.spec().sizes() {
            return Err(Error::Shape(format!(
                "mesh sizes {:?} differ from data sizes {:?}",
                mesh.sizes(),
                data.spec().sizes()
            )));
        }
        Ok(Self { mesh, data })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn data(&self) -> &MultiArray {
        &self.data
    }

    pub fn ndim(&self) -> usize {
        self.mesh.ndim()
    }

    /// Writes the array record followed by every axis' knots as little-endian `f64`.
    pub fn save<W: Write>(&self, mut sink: W) -> Result<()> {
        self.data.save(&mut sink)?;
        for axis in &self.mesh.axes {
            for k in axis {
                sink.write_all(&k.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn load<R: Read>(mut source: R) -> Result<Self> {
        let data = MultiArray::load(&mut source)?;
        let mut buf = [0u8; 8];
        let mut axes = Vec::with_capacity(data.ndim());
        for &s in data.spec().sizes() {
            let mut axis = Vec::with_capacity(s);
            for _ in 0..s {
                source
                    .read_exact(&mut buf)
                    .map_err(|_| Error::Format("truncated mesh section".into()))?;
                axis.push(f64::from_le_bytes(buf));
            }
            axes.push(axis);
        }
        Self::from_parts(Mesh::new(axes)?, data)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.save(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut cursor = bytes;
        let grid = Self::load(&mut cursor)?;
        if !cursor.is_empty() {
            return Err(Error::Format(format!(
                "{} trailing bytes after mesh section",
                cursor.len()
            )));
        }
        Ok(grid)
    }
}

/// Local interpolation orders `T_i`, each in `2..=S_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalOrders(Vec<usize>);

impl LocalOrders {
    pub fn new(orders: Vec<usize>, grid: &Grid) -> Result<Self> {
        let sizes = grid.mesh.sizes();
        if orders.len() != sizes.len() {
            return Err(Error::Arity {
                expected: sizes.len(),
                got: orders.len(),
            });
        }
        for (&t, &s) in orders.iter().zip(&sizes) {
            if t < 2 || t > s {
                return Err(Error::InvalidOrder {
                    order: t,
                    reason: "local order must lie in 2..=axis length",
                });
            }
        }
        Ok(Self(orders))
    }

    /// `T_i = S_i` everywhere: global interpolation.
    pub fn global(grid: &Grid) -> Result<Self> {
        Self::new(grid.mesh.sizes(), grid)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// Zero-based start of the `t`-knot window used for abscissa `x`.
///
/// `k` is the last knot with `axis[k] <= x` (0 left of the axis, `S-2` at or
/// beyond the last knot); the window is centred on `k` and clamped to the axis.
pub fn locate_window(axis: &[f64], x: f64, t: usize) -> Result<usize> {
    let s = axis.len();
    if t < 2 || t > s {
        return Err(Error::InvalidOrder {
            order: t,
            reason: "window length must lie in 2..=axis length",
        });
    }
    if !x.is_finite() {
        return Err(Error::NonFiniteArgument);
    }
    let k = axis.partition_point(|&a| a <= x).saturating_sub(1).min(s - 2);
    Ok(k.saturating_sub((t - 1) / 2).min(s - t))
}

/// Per-dimension counters recorded by the last interpolation call.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalCounters {
    pub prepares: Vec<u64>,
    pub quantizes: Vec<u64>,
}

impl EvalCounters {
    fn reset(&mut self, n: usize) {
        self.prepares.clear();
        self.prepares.resize(n, 0);
        self.quantizes.clear();
        self.quantizes.resize(n, 0);
    }

    pub fn total_prepares(&self) -> u64 {
        self.prepares.iter().sum()
    }
}

/// A reusable interpolation context bound to one grid, orders and kinds.
///
/// Owns the window buffers, prepared stages and quantizer scratch of a call,
/// so one context serves one query at a time; clone it for concurrent use.
#[derive(Debug, Clone)]
pub struct GridInterpolator<'g> {
    grid: &'g Grid,
    orders: LocalOrders,
    interps: Vec<Interpolator1D>,
    allow_extrapolation: bool,
    stages: Vec<PreparedStage>,
    starts: Vec<usize>,
    quantizer: Quantizer,
    counters: EvalCounters,
}

impl<'g> GridInterpolator<'g> {
    pub fn new(grid: &'g Grid, orders: LocalOrders, kinds: &[Kind]) -> Result<Self> {
        if kinds.len() != grid.ndim() {
            return Err(Error::Arity {
                expected: grid.ndim(),
                got: kinds.len(),
            });
        }
        let interps = kinds
            .iter()
            .zip(orders.as_slice())
            .map(|(&k, &t)| Interpolator1D::new(k, t))
            .collect::<Result<Vec<_>>>()?;
        // stages start bound to the leading window of each axis
        let stages = interps
            .iter()
            .enumerate()
            .map(|(d, ip)| {
                let knots = &grid.mesh.axes[d][..ip.order()];
                ip.prepare(knots, knots[0])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid,
            starts: vec![0; grid.ndim()],
            orders,
            interps,
            allow_extrapolation: false,
            stages,
            quantizer: Quantizer::new(),
            counters: EvalCounters::default(),
        })
    }

    /// Same kind in every dimension.
    pub fn uniform(grid: &'g Grid, kind: Kind, order: usize) -> Result<Self> {
        let orders = LocalOrders::new(vec![order; grid.ndim()], grid)?;
        Self::new(grid, orders, &vec![kind; grid.ndim()])
    }

    pub fn with_extrapolation(mut self, allow: bool) -> Self {
        self.allow_extrapolation = allow;
        self
    }

    pub fn grid(&self) -> &'g Grid {
        self.grid
    }

    pub fn orders(&self) -> &LocalOrders {
        &self.orders
    }

    /// Counters of the most recent call.
    pub fn evaluation_counters(&self) -> &EvalCounters {
        &self.counters
    }

    fn locate(&mut self, q: &[f64]) -> Result<()> {
        let n = self.grid.ndim();
        if q.len() != n {
            return Err(Error::Arity {
                expected: n,
                got: q.len(),
            });
        }
        for (dim, &x) in q.iter().enumerate() {
            let axis = &self.grid.mesh.axes[dim];
            if !x.is_finite() {
                return Err(Error::NonFiniteArgument);
            }
            let (lo, hi) = (axis[0], axis[axis.len() - 1]);
            if !self.allow_extrapolation && (x < lo || x > hi) {
                return Err(Error::OutsideHull {
                    dim,
                    value: x,
                    lo,
                    hi,
                });
            }
            self.starts[dim] = locate_window(axis, x, self.orders.0[dim])?;
        }
        Ok(())
    }

    /// Recursive path: one prepare per dimension, then a single strided
    /// quantization of the local window in place.
    pub fn interpolate_recursive(&mut self, q: &[f64]) -> Result<f64> {
        self.locate(q)?;
        let n = self.grid.ndim();
        self.counters.reset(n);
        for (dim, stage) in self.stages.iter_mut().enumerate() {
            let start = self.starts[dim];
            let t = self.orders.0[dim];
            stage.reset_counters();
            stage.prepare_into(&self.grid.mesh.axes[dim][start..start + t], q[dim])?;
        }
        let view = self.grid.data.subwindow(&WindowSpec::new(
            self.starts.clone(),
            self.orders.0.clone(),
        ))?;
        let out = self.quantizer.quantize(&view, &mut self.stages, &Identity);
        for (dim, stage) in self.stages.iter().enumerate() {
            self.counters.prepares[dim] = stage.prepare_count();
            self.counters.quantizes[dim] = stage.quantize_count();
        }
        out
    }

    /// Staged baseline: materializes every intermediate database and prepares
    /// a fresh 1-D interpolator for every element it produces.
    pub fn interpolate_iterative(&mut self, q: &[f64]) -> Result<f64> {
        self.locate(q)?;
        let n = self.grid.ndim();
        self.counters.reset(n);
        let window = self.grid.data.subwindow(&WindowSpec::new(
            self.starts.clone(),
            self.orders.0.clone(),
        ))?;
        let mut db = window.materialize(vec![0; n])?;
        for dim in (0..n).rev() {
            let t = self.orders.0[dim];
            let start = self.starts[dim];
            let knots = &self.grid.mesh.axes[dim][start..start + t];
            let mut reduced = Vec::with_capacity(db.data().len() / t);
            for chunk in db.data().chunks_exact(t) {
                let mut stage = self.interps[dim].prepare(knots, q[dim])?;
                self.counters.prepares[dim] += 1;
                reduced.push(stage.stage_quantize(chunk)?);
                self.counters.quantizes[dim] += 1;
            }
            if dim == 0 {
                return Ok(reduced[0]);
            }
            let spec = IndexSpec::unshifted(db.spec().sizes()[..dim].to_vec())?;
            db = MultiArray::from_vec(spec, reduced)?;
        }
        unreachable!("grid has at least one dimension")
    }
}
