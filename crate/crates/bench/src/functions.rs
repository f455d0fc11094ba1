//! Benchmark functions sampled onto grids.

use crate::error::{BenchError, Result};

/// Bounds every argument of [`r6`] must satisfy.
pub const R6_DOMAIN: (f64, f64) = (2.0, 6.0);

/// Six-variable benchmark. The formula names ten symbols `h0..h9`; `h6..h9`
/// wrap around to `v0..v3`.
pub fn r6_formula(v: &[f64]) -> f64 {
    let (v0, v1, v2, v3, v4, v5) = (v[0], v[1], v[2], v[3], v[4], v[5]);
    let (h6, h7, h8, h9) = (v0, v1, v2, v3);
    ((v0 * v1.ln().sqrt()).sqrt() * h8).ln() + h7 * h9
        - (v2.sin() * (3.0 * v3).sin()).exp()
        + ((v3 * v4).ln() * v5.sqrt()).sqrt()
        + h6 * (h7 + 12.0).sinh()
}

/// [`r6_formula`] restricted to `[2, 6]^6`.
pub fn r6(v: &[f64; 6]) -> Result<f64> {
    let (lo, hi) = R6_DOMAIN;
    if v.iter().any(|x| !(lo..=hi).contains(x)) {
        return Err(BenchError::Domain {
            function: "r6".into(),
            point: v.to_vec(),
        });
    }
    Ok(r6_formula(v))
}

fn sum(v: &[f64]) -> f64 {
    v.iter().sum()
}

fn quadratic(v: &[f64]) -> f64 {
    v.iter().map(|x| 1.0 + x - 0.5 * x * x).product()
}

fn smooth(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, x)| (0.7 * x + i as f64).sin() / n)
        .sum::<f64>()
        .exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionId {
    R6,
    Sum,
    Quadratic,
    Smooth,
}

impl std::str::FromStr for FunctionId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "r6" => Ok(FunctionId::R6),
            "sum" => Ok(FunctionId::Sum),
            "quadratic" => Ok(FunctionId::Quadratic),
            "smooth" => Ok(FunctionId::Smooth),
            other => Err(format!(
                "unknown function `{other}` (expected r6, sum, quadratic or smooth)"
            )),
        }
    }
}

impl FunctionId {
    pub fn name(self) -> &'static str {
        match self {
            FunctionId::R6 => "r6",
            FunctionId::Sum => "sum",
            FunctionId::Quadratic => "quadratic",
            FunctionId::Smooth => "smooth",
        }
    }

    /// `r6` for six dimensions, `smooth` otherwise.
    pub fn default_for(dim: usize) -> Self {
        if dim == 6 {
            FunctionId::R6
        } else {
            FunctionId::Smooth
        }
    }

    pub fn instantiate(self, dim: usize) -> Result<BenchmarkFunction> {
        match self {
            FunctionId::R6 => {
                if dim != 6 {
                    return Err(BenchError::Config(format!(
                        "r6 takes 6 arguments, not {dim}"
                    )));
                }
                // every log/sqrt argument stays positive once all v_i > 1
                BenchmarkFunction::new("r6", 6, r6_formula, R6_DOMAIN, vec![(1.25, 40.0); 6])
            }
            FunctionId::Sum => {
                BenchmarkFunction::new("sum", dim, sum, (-1.0, 1.0), vec![(-1e6, 1e6); dim])
            }
            FunctionId::Quadratic => BenchmarkFunction::new(
                "quadratic",
                dim,
                quadratic,
                (-1.0, 1.0),
                vec![(-1e3, 1e3); dim],
            ),
            FunctionId::Smooth => {
                BenchmarkFunction::new("smooth", dim, smooth, (-1.0, 1.0), vec![(-50.0, 50.0); dim])
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchmarkFunction {
    pub name: &'static str,
    pub arity: usize,
    eval: fn(&[f64]) -> f64,
    /// Box the sampled region is centred in by default.
    pub reference_box: (f64, f64),
    /// Per-variable closed interval on which `eval` is finite; grids must fit inside.
    pub valid_domain: Vec<(f64, f64)>,
}

/// Lattice points per variable used to check finiteness at registration.
const REGISTRATION_SAMPLES: usize = 6;

impl BenchmarkFunction {
    pub fn new(
        name: &'static str,
        arity: usize,
        eval: fn(&[f64]) -> f64,
        reference_box: (f64, f64),
        valid_domain: Vec<(f64, f64)>,
    ) -> Result<Self> {
        if arity == 0 || valid_domain.len() != arity {
            return Err(BenchError::Config(format!(
                "{name}: domain has {} intervals for arity {arity}",
                valid_domain.len()
            )));
        }
        let f = Self {
            name,
            arity,
            eval,
            reference_box,
            valid_domain,
        };
        f.check_finite()?;
        Ok(f)
    }

    fn check_finite(&self) -> Result<()> {
        let k = REGISTRATION_SAMPLES;
        let total = k.pow(self.arity.min(8) as u32);
        let mut point = vec![0.0; self.arity];
        for mut code in 0..total {
            for (d, p) in point.iter_mut().enumerate() {
                let (lo, hi) = self.valid_domain[d];
                let j = code % k;
                code /= k;
                *p = lo + (hi - lo) * j as f64 / (k - 1) as f64;
            }
            if !(self.eval)(&point).is_finite() {
                return Err(BenchError::Domain {
                    function: self.name.into(),
                    point: point.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn eval(&self, v: &[f64]) -> f64 {
        (self.eval)(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r6_golden_value() {
        // reference from a 40-digit evaluation of the same formula
        let got = r6(&[2.0; 6]).unwrap();
        assert!((got - 1_202_609.856_804_747_6).abs() <= 1e-12 * got.abs());
        let got = r6(&[3.0, 2.5, 4.0, 5.5, 6.0, 2.25]).unwrap();
        assert!((got - 2_974_155.135_450_293).abs() <= 1e-12 * got.abs());
    }

    #[test]
    fn r6_domain() {
        assert!(r6(&[2.0, 1.0, 2.0, 2.0, 2.0, 2.0]).is_err());
        assert!(r6(&[6.5, 2.0, 2.0, 2.0, 2.0, 2.0]).is_err());
        for i in 0..=40 {
            let x = 2.0 + 0.1 * i as f64;
            let v = [x, 8.0 - x, x, 6.0 - (x - 2.0) / 2.0, x, 4.0];
            assert!(r6(&v).unwrap().is_finite());
        }
    }

    #[test]
    fn registration_checks_finiteness() {
        assert!(FunctionId::R6.instantiate(6).is_ok());
        assert!(FunctionId::R6.instantiate(3).is_err());
        let bad = BenchmarkFunction::new("log", 1, |v| v[0].ln(), (1.0, 2.0), vec![(-1.0, 2.0)]);
        assert!(matches!(bad, Err(BenchError::Domain { .. })));
    }
}
