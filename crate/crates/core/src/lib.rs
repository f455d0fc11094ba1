//! Interpolation on N-dimensional rectilinear grids by recursive quantization.
//!
//! The grid data lives in one contiguous array in lexicographic order. Every
//! Cartesian projection and every local window of that array is addressed by
//! stride arithmetic alone, and an N-dimensional interpolation is evaluated as
//! one recursion over per-dimension quantizing functions. Each 1-D interpolator
//! preprocesses its constant arguments once per query, so the recursion's hot
//! path only consumes data values.

pub mod error;
pub mod grid;
pub mod index;
pub mod interp1d;
pub mod quantize;
pub mod store;

pub use error::{Error, Result};
pub use grid::{locate_window, EvalCounters, Grid, GridInterpolator, LocalOrders, Mesh};
pub use index::{
    cartesian_strides, linear_offset, projection_extent, CartesianStrides, IndexSpec, MultiIndex,
};
pub use interp1d::{Interpolator1D, Kind, PreparedStage};
pub use quantize::{
    quantize, quantize_equivalence_check, quantize_iterative, Converter, Identity,
    QuantizingFunction, Quantizer, Reducer, ReducerFn,
};
pub use store::{ArrayView, Axis, MultiArray, WindowSpec};
