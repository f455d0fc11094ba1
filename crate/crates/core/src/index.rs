//! Indexing sets and Cartesian stride arithmetic.
//!
//! An [`IndexSpec`] describes the shifted indexing set
//! `{1+s_1..S_1+s_1} x ... x {1+s_N..S_N+s_N}`. Coordinates are 1-based relative
//! to the offsets, so coordinate `s_i + 1` is axis position 0 in storage.
//! Offsets never influence layout; they only shift which coordinates are valid.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexSpec {
    sizes: Vec<usize>,
    offsets: Vec<i64>,
    count: usize,
}

impl IndexSpec {
    pub fn new(sizes: Vec<usize>, offsets: Vec<i64>) -> Result<Self> {
        if sizes.is_empty() && offsets.is_empty() {
            return Err(Error::EmptySpec);
        }
        if sizes.len() != offsets.len() {
            return Err(Error::LengthMismatch {
                sizes: sizes.len(),
                offsets: offsets.len(),
            });
        }
        let mut count = 1usize;
        for (dim, &s) in sizes.iter().enumerate() {
            if s == 0 {
                return Err(Error::ZeroSize { dim });
            }
            count = count.checked_mul(s).ok_or(Error::CountOverflow)?;
        }
        // Storage offsets are computed in isize-compatible arithmetic and
        // coordinates as i64, so both bounds must hold.
        if count > isize::MAX as usize / std::mem::size_of::<f64>() {
            return Err(Error::CountOverflow);
        }
        for (&s, &o) in sizes.iter().zip(&offsets) {
            o.checked_add(s as i64).ok_or(Error::CountOverflow)?;
        }
        Ok(Self {
            sizes,
            offsets,
            count,
        })
    }

    /// Spec with all offsets zero, i.e. coordinates `1..=S_i`.
    pub fn unshifted(sizes: Vec<usize>) -> Result<Self> {
        let n = sizes.len();
        Self::new(sizes, vec![0; n])
    }

    pub fn ndim(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    /// Total element count `S_1 * ... * S_N`.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Inclusive coordinate range of dimension `dim`.
    pub fn coordinate_range(&self, dim: usize) -> (i64, i64) {
        let o = self.offsets[dim];
        (o + 1, o + self.sizes[dim] as i64)
    }

    pub fn strides(&self) -> CartesianStrides {
        cartesian_strides(self)
    }

    /// Zero-based axis position of `coord` in dimension `dim`.
    pub fn position(&self, dim: usize, coord: i64) -> Result<usize> {
        let (lo, hi) = self.coordinate_range(dim);
        if coord < lo || coord > hi {
            return Err(Error::CoordinateOutOfRange {
                dim,
                value: coord,
                lo,
                hi,
            });
        }
        Ok((coord - lo) as usize)
    }

    /// Iterates every valid multi-index in lexicographic order.
    pub fn indices(&self) -> Indices<'_> {
        Indices {
            spec: self,
            current: Some(
                self.offsets.iter().map(|&o| o + 1).collect::<Vec<_>>(),
            ),
        }
    }
}

/// Lexicographic iterator over the indexing set of an [`IndexSpec`].
pub struct Indices<'a> {
    spec: &'a IndexSpec,
    current: Option<Vec<i64>>,
}

impl Iterator for Indices<'_> {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let cur = self.current.take()?;
        let mut next = cur.clone();
        let mut dim = next.len();
        let mut advanced = false;
        while dim > 0 {
            dim -= 1;
            let (lo, hi) = self.spec.coordinate_range(dim);
            if next[dim] < hi {
                next[dim] += 1;
                advanced = true;
                break;
            }
            next[dim] = lo;
        }
        if advanced {
            self.current = Some(next);
        }
        Some(MultiIndex(cur))
    }
}

/// `CS_N = 1`, `CS_i = S_{i+1} * CS_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartesianStrides(Vec<usize>);

impl CartesianStrides {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::ops::Index<usize> for CartesianStrides {
    type Output = usize;

    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<i64>);

impl MultiIndex {
    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for MultiIndex {
    fn from(v: Vec<i64>) -> Self {
        MultiIndex(v)
    }
}

impl AsRef<[i64]> for MultiIndex {
    fn as_ref(&self) -> &[i64] {
        &self.0
    }
}

pub fn cartesian_strides(spec: &IndexSpec) -> CartesianStrides {
    let n = spec.ndim();
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        // cannot overflow: bounded by count, checked at construction
        strides[i] = spec.sizes[i + 1] * strides[i + 1];
    }
    CartesianStrides(strides)
}

/// Flat storage offset of `idx`, which is also its rank in lexicographic order.
pub fn linear_offset(spec: &IndexSpec, strides: &CartesianStrides, idx: &[i64]) -> Result<usize> {
    if idx.len() != spec.ndim() {
        return Err(Error::Arity {
            expected: spec.ndim(),
            got: idx.len(),
        });
    }
    let mut offset = 0;
    for (dim, &a) in idx.iter().enumerate() {
        offset += spec.position(dim, a)? * strides[dim];
    }
    Ok(offset)
}

/// Flat interval `(start, length)` occupied by the depth-M Cartesian projection
/// obtained by fixing `prefix` (M = `prefix.len()`).
pub fn projection_extent(
    spec: &IndexSpec,
    strides: &CartesianStrides,
    prefix: &[i64],
) -> Result<(usize, usize)> {
    let m = prefix.len();
    if m > spec.ndim() {
        return Err(Error::Arity {
            expected: spec.ndim(),
            got: m,
        });
    }
    let mut start = 0;
    for (dim, &a) in prefix.iter().enumerate() {
        start += spec.position(dim, a)? * strides[dim];
    }
    let length = spec.sizes[m..].iter().product();
    Ok((start, length))
}
