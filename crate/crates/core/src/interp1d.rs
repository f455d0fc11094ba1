//! One-dimensional interpolators split into a prepare phase and a values-only phase.
//!
//! [`Interpolator1D::prepare`] consumes everything that stays constant during
//! one N-dimensional query (the knots and the query abscissa) and precomputes
//! the tableau coefficients. The resulting [`PreparedStage`] then maps `M`
//! values to the interpolated estimate using multiply-adds only, which makes
//! it a [`QuantizingFunction`].

use crate::error::{Error, Result};
use crate::quantize::QuantizingFunction;

/// Added to the rational tableau's `d` column so all-zero data does not produce 0/0.
const RATIONAL_TINY: f64 = 1.0e-25;
/// Rational tableau denominators below this magnitude are reported as poles.
pub const POLE_GUARD: f64 = 1.0e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Linear,
    Polynomial,
    Rational,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Linear => "linear",
            Kind::Polynomial => "polynomial",
            Kind::Rational => "rational",
        }
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "linear" => Ok(Kind::Linear),
            "polynomial" => Ok(Kind::Polynomial),
            "rational" => Ok(Kind::Rational),
            other => Err(format!(
                "unknown interpolator kind `{other}` (expected linear, polynomial or rational)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interpolator1D {
    kind: Kind,
    order: usize,
}

impl Interpolator1D {
    pub fn new(kind: Kind, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidOrder {
                order,
                reason: "at least two knots are required",
            });
        }
        if kind == Kind::Linear && order != 2 {
            return Err(Error::InvalidOrder {
                order,
                reason: "linear interpolation uses exactly two knots",
            });
        }
        Ok(Self { kind, order })
    }

    pub fn linear() -> Self {
        Self {
            kind: Kind::Linear,
            order: 2,
        }
    }

    pub fn polynomial(order: usize) -> Result<Self> {
        Self::new(Kind::Polynomial, order)
    }

    pub fn rational(order: usize) -> Result<Self> {
        Self::new(Kind::Rational, order)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn prepare(&self, knots: &[f64], x: f64) -> Result<PreparedStage> {
        let mut stage = PreparedStage {
            interp: *self,
            knots: Vec::with_capacity(self.order),
            x,
            plan: Plan::Exact(0),
            c: vec![0.0; self.order],
            d: vec![0.0; self.order],
            prepare_count: 0,
            quantize_count: 0,
        };
        stage.prepare_into(knots, x)?;
        Ok(stage)
    }
}

/// Precomputed, values-independent part of one interpolation.
#[derive(Debug, Clone)]
enum Plan {
    /// `x` coincides with a knot.
    Exact(usize),
    Linear { t: f64 },
    /// Per tableau cell, the factors multiplying `c[i+1] - d[i]`.
    Neville {
        c_factor: Vec<f64>,
        d_factor: Vec<f64>,
        start: usize,
        path: Vec<Step>,
    },
    /// Per tableau cell, `(k_i - x) / (k_{i+m} - x)`.
    Rational {
        ratio: Vec<f64>,
        start: usize,
        path: Vec<Step>,
    },
}

/// Which correction is added to the running estimate after each tableau column.
#[derive(Debug, Clone, Copy)]
enum Step {
    Up(usize),
    Down(usize),
}

/// An interpolator bound to fixed knots and a fixed abscissa.
#[derive(Debug, Clone)]
pub struct PreparedStage {
    interp: Interpolator1D,
    knots: Vec<f64>,
    x: f64,
    plan: Plan,
    c: Vec<f64>,
    d: Vec<f64>,
    prepare_count: u64,
    quantize_count: u64,
}

impl PreparedStage {
    /// Rebinds the stage to new constant arguments, reusing its buffers.
    pub fn prepare_into(&mut self, knots: &[f64], x: f64) -> Result<()> {
        let n = self.interp.order;
        if knots.len() != n {
            return Err(Error::ValueCount {
                order: n,
                got: knots.len(),
            });
        }
        if !x.is_finite() || knots.iter().any(|k| !k.is_finite()) {
            return Err(Error::NonFiniteArgument);
        }
        if let Some(p) = knots.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::NonMonotoneKnots { position: p + 1 });
        }
        self.knots.clear();
        self.knots.extend_from_slice(knots);
        self.x = x;
        self.prepare_count += 1;

        let mut nearest = 0;
        let mut best = f64::INFINITY;
        for (i, &k) in knots.iter().enumerate() {
            let dist = (x - k).abs();
            if dist < best {
                best = dist;
                nearest = i;
            }
        }
        if best == 0.0 {
            self.plan = Plan::Exact(nearest);
            return Ok(());
        }

        let (mut first, mut second, mut path) = match std::mem::replace(&mut self.plan, Plan::Exact(0)) {
            Plan::Neville {
                c_factor,
                d_factor,
                path,
                ..
            } => (c_factor, d_factor, path),
            Plan::Rational { ratio, path, .. } => (ratio, Vec::new(), path),
            _ => (Vec::new(), Vec::new(), Vec::new()),
        };
        first.clear();
        second.clear();
        self.plan = match self.interp.kind {
            Kind::Linear => Plan::Linear {
                t: (x - knots[0]) / (knots[1] - knots[0]),
            },
            Kind::Polynomial => {
                for m in 1..n {
                    for i in 0..n - m {
                        let ho = knots[i] - x;
                        let hp = knots[i + m] - x;
                        let den = ho - hp;
                        first.push(ho / den);
                        second.push(hp / den);
                    }
                }
                correction_path(n, nearest, &mut path);
                Plan::Neville {
                    c_factor: first,
                    d_factor: second,
                    start: nearest,
                    path,
                }
            }
            Kind::Rational => {
                for m in 1..n {
                    for i in 0..n - m {
                        first.push((knots[i] - x) / (knots[i + m] - x));
                    }
                }
                correction_path(n, nearest, &mut path);
                Plan::Rational {
                    ratio: first,
                    start: nearest,
                    path,
                }
            }
        };
        Ok(())
    }

    pub fn interpolator(&self) -> Interpolator1D {
        self.interp
    }

    pub fn order(&self) -> usize {
        self.interp.order
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// Linear weight `(x - k_1) / (k_2 - k_1)`; `None` for other kinds.
    pub fn linear_weight(&self) -> Option<f64> {
        match (&self.plan, self.interp.kind) {
            (Plan::Linear { t }, _) => Some(*t),
            (Plan::Exact(j), Kind::Linear) => Some(*j as f64),
            _ => None,
        }
    }

    pub fn is_extrapolating(&self) -> bool {
        self.x < self.knots[0] || self.x > self.knots[self.knots.len() - 1]
    }

    pub fn prepare_count(&self) -> u64 {
        self.prepare_count
    }

    pub fn quantize_count(&self) -> u64 {
        self.quantize_count
    }

    pub fn reset_counters(&mut self) {
        self.prepare_count = 0;
        self.quantize_count = 0;
    }

    /// Interpolated estimate at `x` for the given knot values.
    pub fn stage_quantize(&mut self, values: &[f64]) -> Result<f64> {
        if values.len() != self.interp.order {
            return Err(Error::ValueCount {
                order: self.interp.order,
                got: values.len(),
            });
        }
        self.quantize_unchecked(values)
    }

    pub fn as_quantizing_function(&mut self) -> &mut dyn QuantizingFunction {
        self
    }

    fn quantize_unchecked(&mut self, values: &[f64]) -> Result<f64> {
        self.quantize_count += 1;
        let n = values.len();
        match &self.plan {
            Plan::Exact(j) => Ok(values[*j]),
            Plan::Linear { t } => Ok((1.0 - t) * values[0] + t * values[1]),
            Plan::Neville {
                c_factor,
                d_factor,
                start,
                path,
            } => {
                let (c, d) = (&mut self.c, &mut self.d);
                c.copy_from_slice(values);
                d.copy_from_slice(values);
                let mut y = values[*start];
                let mut cell = 0;
                for (m, step) in (1..n).zip(path) {
                    for i in 0..n - m {
                        let w = c[i + 1] - d[i];
                        c[i] = c_factor[cell] * w;
                        d[i] = d_factor[cell] * w;
                        cell += 1;
                    }
                    y += match *step {
                        Step::Up(i) => c[i],
                        Step::Down(i) => d[i],
                    };
                }
                Ok(y)
            }
            Plan::Rational { ratio, start, path } => {
                let (c, d) = (&mut self.c, &mut self.d);
                c.copy_from_slice(values);
                for (di, v) in d.iter_mut().zip(values) {
                    *di = v + RATIONAL_TINY;
                }
                let mut y = values[*start];
                let mut cell = 0;
                for (m, step) in (1..n).zip(path) {
                    for i in 0..n - m {
                        let w = c[i + 1] - d[i];
                        let t = ratio[cell] * d[i];
                        let den = t - c[i + 1];
                        if den.abs() < POLE_GUARD {
                            return Err(Error::Pole { column: m, row: i });
                        }
                        let q = w / den;
                        d[i] = c[i + 1] * q;
                        c[i] = t * q;
                        cell += 1;
                    }
                    y += match *step {
                        Step::Up(i) => c[i],
                        Step::Down(i) => d[i],
                    };
                }
                Ok(y)
            }
        }
    }
}

impl QuantizingFunction for PreparedStage {
    fn order(&self) -> usize {
        self.interp.order
    }

    fn evaluate(&mut self, values: &[f64]) -> Result<f64> {
        self.quantize_unchecked(values)
    }
}

/// Path through the tableau that stays closest to the centre of the knot
/// window, starting from the knot nearest to `x`.
fn correction_path(n: usize, nearest: usize, path: &mut Vec<Step>) {
    // `below` is the number of knots left of the current path position.
    let mut below = nearest;
    path.clear();
    for m in 1..n {
        if 2 * below < n - m {
            path.push(Step::Up(below));
        } else {
            below -= 1;
            path.push(Step::Down(below));
        }
    }
}
