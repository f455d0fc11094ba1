//! Contiguous lexicographic storage and zero-copy strided views.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::index::{cartesian_strides, linear_offset, CartesianStrides, IndexSpec};

pub const MAGIC: &[u8; 4] = b"MCUB";
pub const FORMAT_VERSION: u8 = 0x01;

/// An N-dimensional array of `f64` stored in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiArray {
    spec: IndexSpec,
    strides: CartesianStrides,
    data: Vec<f64>,
}

impl MultiArray {
    /// Fills the array by evaluating `eval` at every index in lexicographic order.
    pub fn from_function<F>(spec: IndexSpec, mut eval: F) -> Result<Self>
    where
        F: FnMut(&[i64]) -> f64,
    {
        let mut data = Vec::with_capacity(spec.count());
        for ix in spec.indices() {
            let value = eval(&ix.0);
            if !value.is_finite() {
                return Err(Error::NonFiniteValue { index: ix.0, value });
            }
            data.push(value);
        }
        Ok(Self::assemble(spec, data))
    }

    pub fn from_vec(spec: IndexSpec, data: Vec<f64>) -> Result<Self> {
        if data.len() != spec.count() {
            return Err(Error::Shape(format!(
                "{} values supplied for {} elements",
                data.len(),
                spec.count()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            let index = spec.indices().nth(pos).map(|i| i.0).unwrap_or_default();
            return Err(Error::NonFiniteValue {
                index,
                value: data[pos],
            });
        }
        Ok(Self::assemble(spec, data))
    }

    fn assemble(spec: IndexSpec, data: Vec<f64>) -> Self {
        let strides = cartesian_strides(&spec);
        Self {
            spec,
            strides,
            data,
        }
    }

    pub fn spec(&self) -> &IndexSpec {
        &self.spec
    }

    pub fn strides(&self) -> &CartesianStrides {
        &self.strides
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn ndim(&self) -> usize {
        self.spec.ndim()
    }

    pub fn get(&self, idx: &[i64]) -> Result<f64> {
        Ok(self.data[linear_offset(&self.spec, &self.strides, idx)?])
    }

    /// The view of the whole multi-cube: base 0, `(S_i, CS_i)` per dimension.
    pub fn full_view(&self) -> ArrayView<'_> {
        ArrayView {
            data: &self.data,
            base: 0,
            dims: self
                .spec
                .sizes()
                .iter()
                .zip(self.strides.as_slice())
                .map(|(&len, &stride)| Axis { len, stride })
                .collect(),
        }
    }

    /// Sub-array view that keeps the parent strides, so it is generally not contiguous.
    pub fn subwindow(&self, win: &WindowSpec) -> Result<ArrayView<'_>> {
        self.full_view().subwindow(win)
    }

    pub fn save<W: Write>(&self, mut sink: W) -> Result<()> {
        sink.write_all(MAGIC)?;
        sink.write_all(&[FORMAT_VERSION])?;
        let n = u32::try_from(self.ndim())
            .map_err(|_| Error::Format("too many dimensions".into()))?;
        sink.write_all(&n.to_le_bytes())?;
        for (&s, &o) in self.spec.sizes().iter().zip(self.spec.offsets()) {
            let s = u32::try_from(s)
                .map_err(|_| Error::Format(format!("size {s} does not fit in u32")))?;
            sink.write_all(&s.to_le_bytes())?;
            sink.write_all(&o.to_le_bytes())?;
        }
        for v in &self.data {
            sink.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads one array record; bytes after the data section are left unread.
    pub fn load<R: Read>(mut source: R) -> Result<Self> {
        let mut magic = [0u8; 5];
        read_header(&mut source, &mut magic)?;
        if &magic[..4] != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        if magic[4] != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported version {}", magic[4])));
        }
        let mut word = [0u8; 4];
        read_header(&mut source, &mut word)?;
        let n = u32::from_le_bytes(word) as usize;
        if n == 0 {
            return Err(Error::Format("zero dimensions".into()));
        }
        let mut sizes = Vec::with_capacity(n.min(64));
        let mut offsets = Vec::with_capacity(n.min(64));
        let mut long = [0u8; 8];
        for _ in 0..n {
            read_header(&mut source, &mut word)?;
            read_header(&mut source, &mut long)?;
            sizes.push(u32::from_le_bytes(word) as usize);
            offsets.push(i64::from_le_bytes(long));
        }
        let spec = IndexSpec::new(sizes, offsets)?;
        let mut data = Vec::with_capacity(spec.count().min(1 << 24));
        for _ in 0..spec.count() {
            source
                .read_exact(&mut long)
                .map_err(|_| Error::Format("truncated data section".into()))?;
            data.push(f64::from_le_bytes(long));
        }
        Self::from_vec(spec, data)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(9 + 12 * self.ndim() + 8 * self.data.len());
        self.save(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    /// Decodes a buffer holding exactly one array record.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut cursor = bytes;
        let arr = Self::load(&mut cursor)?;
        if !cursor.is_empty() {
            return Err(Error::Format(format!(
                "declared {} values but payload carries {} extra bytes",
                arr.data.len(),
                cursor.len()
            )));
        }
        Ok(arr)
    }
}

fn read_header<R: Read>(source: &mut R, buf: &mut [u8]) -> Result<()> {
    source
        .read_exact(buf)
        .map_err(|_| Error::Format("truncated header".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Axis {
    pub len: usize,
    pub stride: usize,
}

/// A sub-window of a parent [`MultiArray`], given as zero-based starts and lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSpec {
    pub starts: Vec<usize>,
    pub lengths: Vec<usize>,
}

impl WindowSpec {
    pub fn new(starts: Vec<usize>, lengths: Vec<usize>) -> Self {
        Self { starts, lengths }
    }
}

/// Base offset plus `(length, stride)` per dimension over borrowed flat storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayView<'a> {
    data: &'a [f64],
    base: usize,
    dims: Vec<Axis>,
}

impl<'a> ArrayView<'a> {
    pub fn base(&self) -> usize {
        self.base
    }

    pub fn dims(&self) -> &[Axis] {
        &self.dims
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.dims.iter().map(|a| a.len).collect()
    }

    pub fn count(&self) -> usize {
        self.dims.iter().map(|a| a.len).product()
    }

    pub fn parent_data(&self) -> &'a [f64] {
        self.data
    }

    pub fn subwindow(&self, win: &WindowSpec) -> Result<ArrayView<'a>> {
        if win.starts.len() != self.ndim() || win.lengths.len() != self.ndim() {
            return Err(Error::Arity {
                expected: self.ndim(),
                got: win.starts.len().max(win.lengths.len()),
            });
        }
        let mut base = self.base;
        let mut dims = Vec::with_capacity(self.ndim());
        for (dim, ((&start, &len), axis)) in win
            .starts
            .iter()
            .zip(&win.lengths)
            .zip(&self.dims)
            .enumerate()
        {
            if len == 0 || start.checked_add(len).is_none_or(|end| end > axis.len) {
                return Err(Error::WindowOutOfBounds {
                    dim,
                    start,
                    len,
                    size: axis.len,
                });
            }
            base += start * axis.stride;
            dims.push(Axis {
                len,
                stride: axis.stride,
            });
        }
        Ok(ArrayView {
            data: self.data,
            base,
            dims,
        })
    }

    /// Flat offsets addressed by the view, in lexicographic view order.
    pub fn offsets(&self) -> ViewOffsets<'_> {
        ViewOffsets {
            dims: &self.dims,
            counter: vec![0; self.dims.len()],
            next: Some(self.base),
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.offsets().map(move |o| self.data[o])
    }

    /// Copies the addressed values into a fresh array with the given offsets.
    pub fn materialize(&self, offsets: Vec<i64>) -> Result<MultiArray> {
        let spec = IndexSpec::new(self.lengths(), offsets)?;
        MultiArray::from_vec(spec, self.values().collect())
    }

    /// True when the addressed offsets form one contiguous interval.
    pub fn is_contiguous(&self) -> bool {
        let mut expected = 1;
        for axis in self.dims.iter().rev() {
            if axis.len > 1 && axis.stride != expected {
                return false;
            }
            expected *= axis.len;
        }
        true
    }
}

pub struct ViewOffsets<'v> {
    dims: &'v [Axis],
    counter: Vec<usize>,
    next: Option<usize>,
}

impl Iterator for ViewOffsets<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let current = self.next?;
        let mut offset = current;
        let mut dim = self.dims.len();
        self.next = None;
        while dim > 0 {
            dim -= 1;
            let axis = self.dims[dim];
            if self.counter[dim] + 1 < axis.len {
                self.counter[dim] += 1;
                self.next = Some(offset + axis.stride);
                break;
            }
            offset -= self.counter[dim] * axis.stride;
            self.counter[dim] = 0;
        }
        Some(current)
    }
}
