//! Recursive quantization of a multi-cube and its stage-by-stage oracle.
//!
//! A quantizing function maps an ordered list of `M` scalars to one scalar.
//! Quantizing an N-dimensional view with `f_1..f_N` applies `f_N` along the
//! innermost (stride-1) dimension, feeds those results into `f_{N-1}`, and so
//! on, until `f_1` produces the final scalar. The recursive engine walks the
//! view's strides directly in parent storage; nothing is copied.

use crate::error::{Error, Result};
use crate::store::{ArrayView, Axis};

/// Recursion depth cap; equals the largest supported dimensionality.
pub const MAX_DIMS: usize = 32;

pub trait QuantizingFunction {
    fn order(&self) -> usize;

    /// Evaluates on exactly `order()` values. Callers that have not already
    /// checked the length should use [`QuantizingFunction::call`].
    fn evaluate(&mut self, values: &[f64]) -> Result<f64>;

    fn call(&mut self, values: &[f64]) -> Result<f64> {
        if values.len() != self.order() {
            return Err(Error::ValueCount {
                order: self.order(),
                got: values.len(),
            });
        }
        self.evaluate(values)
    }
}

impl<Q: QuantizingFunction + ?Sized> QuantizingFunction for &mut Q {
    fn order(&self) -> usize {
        (**self).order()
    }

    fn evaluate(&mut self, values: &[f64]) -> Result<f64> {
        (**self).evaluate(values)
    }
}

impl<Q: QuantizingFunction + ?Sized> QuantizingFunction for Box<Q> {
    fn order(&self) -> usize {
        (**self).order()
    }

    fn evaluate(&mut self, values: &[f64]) -> Result<f64> {
        (**self).evaluate(values)
    }
}

/// Adapts a closure into a quantizing function of fixed order.
pub struct FnQuantizer<F> {
    order: usize,
    f: F,
}

pub fn from_fn<F>(order: usize, f: F) -> FnQuantizer<F>
where
    F: FnMut(&[f64]) -> f64,
{
    FnQuantizer { order, f }
}

impl<F: FnMut(&[f64]) -> f64> QuantizingFunction for FnQuantizer<F> {
    fn order(&self) -> usize {
        self.order
    }

    fn evaluate(&mut self, values: &[f64]) -> Result<f64> {
        Ok((self.f)(values))
    }
}

/// Order-agnostic reductions used by audits and tests.
#[derive(Debug, Clone, PartialEq)]
pub enum Reducer {
    Sum,
    Mean,
    Max,
    Min,
    WeightedSum(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducerFn {
    pub reducer: Reducer,
    order: usize,
}

impl Reducer {
    /// Binds the reducer to an order. Weighted sums take their order from the weights.
    pub fn with_order(self, order: usize) -> Result<ReducerFn> {
        if let Reducer::WeightedSum(w) = &self {
            if w.len() != order {
                return Err(Error::ValueCount {
                    order,
                    got: w.len(),
                });
            }
        }
        if order == 0 {
            return Err(Error::InvalidOrder {
                order,
                reason: "quantizing functions take at least one value",
            });
        }
        Ok(ReducerFn {
            reducer: self,
            order,
        })
    }
}

impl QuantizingFunction for ReducerFn {
    fn order(&self) -> usize {
        self.order
    }

    fn evaluate(&mut self, values: &[f64]) -> Result<f64> {
        Ok(match &self.reducer {
            Reducer::Sum => values.iter().sum(),
            Reducer::Mean => values.iter().sum::<f64>() / values.len() as f64,
            Reducer::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Reducer::Min => values.iter().copied().fold(f64::INFINITY, f64::min),
            Reducer::WeightedSum(w) => values.iter().zip(w).map(|(v, w)| v * w).sum(),
        })
    }
}

/// Maps stored values into the quantizing functions' domain.
pub trait Converter {
    fn apply(&self, x: f64) -> f64;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Identity;

impl Converter for Identity {
    #[inline]
    fn apply(&self, x: f64) -> f64 {
        x
    }
}

impl<F: Fn(f64) -> f64> Converter for F {
    fn apply(&self, x: f64) -> f64 {
        self(x)
    }
}

fn check_shape<Q: QuantizingFunction>(dims: &[Axis], fns: &[Q]) -> Result<()> {
    if dims.len() > MAX_DIMS {
        return Err(Error::TooManyDimensions {
            dims: dims.len(),
            max: MAX_DIMS,
        });
    }
    if fns.len() != dims.len() {
        return Err(Error::FunctionCount {
            functions: fns.len(),
            dims: dims.len(),
        });
    }
    for (dim, (f, axis)) in fns.iter().zip(dims).enumerate() {
        if f.order() != axis.len {
            return Err(Error::OrderMismatch {
                dim,
                order: f.order(),
                len: axis.len,
            });
        }
    }
    Ok(())
}

/// Recursive quantization engine. Holds one scratch buffer per recursion
/// depth; each buffer is refilled for every sibling sub-cube.
#[derive(Debug, Clone, Default)]
pub struct Quantizer {
    scratch: Vec<Vec<f64>>,
}

impl Quantizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn quantize<Q, C>(&mut self, view: &ArrayView<'_>, fns: &mut [Q], conv: &C) -> Result<f64>
    where
        Q: QuantizingFunction,
        C: Converter + ?Sized,
    {
        let dims = view.dims();
        check_shape(dims, fns)?;
        self.scratch.resize_with(dims.len(), Vec::new);
        for (buf, axis) in self.scratch.iter_mut().zip(dims) {
            buf.clear();
            buf.resize(axis.len, 0.0);
        }
        recurse(
            view.parent_data(),
            view.base(),
            dims,
            fns,
            &mut self.scratch[..dims.len()],
            conv,
            0,
        )
    }
}

fn recurse<Q, C>(
    data: &[f64],
    base: usize,
    dims: &[Axis],
    fns: &mut [Q],
    scratch: &mut [Vec<f64>],
    conv: &C,
    depth: usize,
) -> Result<f64>
where
    Q: QuantizingFunction,
    C: Converter + ?Sized,
{
    let (axis, inner_dims) = dims.split_first().expect("non-empty dims");
    let (head, tail) = fns.split_first_mut().expect("one function per dim");
    let (slot, rest) = scratch.split_first_mut().expect("one buffer per dim");

    let mut at = base;
    if inner_dims.is_empty() {
        for v in slot.iter_mut() {
            *v = conv.apply(data[at]);
            at += axis.stride;
        }
    } else {
        for v in slot.iter_mut() {
            *v = recurse(data, at, inner_dims, tail, rest, conv, depth + 1)?;
            at += axis.stride;
        }
    }
    let out = head.evaluate(slot)?;
    if !out.is_finite() {
        return Err(Error::NonFiniteIntermediate {
            dim: depth,
            value: out,
        });
    }
    Ok(out)
}

/// Quantizes `view` with a fresh engine.
pub fn quantize<Q, C>(view: &ArrayView<'_>, fns: &mut [Q], conv: &C) -> Result<f64>
where
    Q: QuantizingFunction,
    C: Converter + ?Sized,
{
    Quantizer::new().quantize(view, fns, conv)
}

/// Stage-by-stage oracle: copies the view out, then repeatedly collapses the
/// innermost dimension into a new, smaller database until one value remains.
pub fn quantize_iterative<Q, C>(view: &ArrayView<'_>, fns: &mut [Q], conv: &C) -> Result<f64>
where
    Q: QuantizingFunction,
    C: Converter + ?Sized,
{
    check_shape(view.dims(), fns)?;
    let lengths = view.lengths();
    let mut stage: Vec<f64> = view.values().map(|v| conv.apply(v)).collect();
    for dim in (0..lengths.len()).rev() {
        let f = &mut fns[dim];
        let mut next = Vec::with_capacity(stage.len() / lengths[dim]);
        for chunk in stage.chunks_exact(lengths[dim]) {
            let out = f.evaluate(chunk)?;
            if !out.is_finite() {
                return Err(Error::NonFiniteIntermediate { dim, value: out });
            }
            next.push(out);
        }
        stage = next;
    }
    Ok(stage[0])
}

/// Runs both paths and compares them at `rel_tol` relative to `max(1, |iterative|)`.
pub fn quantize_equivalence_check<Q, C>(
    view: &ArrayView<'_>,
    fns: &mut [Q],
    conv: &C,
    rel_tol: f64,
) -> Result<bool>
where
    Q: QuantizingFunction,
    C: Converter + ?Sized,
{
    let recursive = quantize(view, fns, conv)?;
    let iterative = quantize_iterative(view, fns, conv)?;
    Ok((recursive - iterative).abs() <= rel_tol * iterative.abs().max(1.0))
}
