use std::time::{Duration, Instant};

use mcube::quantize::{quantize_equivalence_check, Identity, Reducer, ReducerFn};
use mcube::{Grid, GridInterpolator, Kind, LocalOrders, Mesh, MultiArray, IndexSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{layout, BenchConfig};
use crate::error::Result;
use crate::report::BenchRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Path {
    Recursive,
    Iterative,
}

struct Measurement {
    outputs: Vec<f64>,
    queries_per_sec: f64,
    prepares_per_query: f64,
}

/// Runs every point through `path` repeatedly until `min_duration` has elapsed.
fn measure(
    ip: &mut GridInterpolator<'_>,
    points: &[Vec<f64>],
    path: Path,
    min_duration: Duration,
) -> Result<Measurement> {
    let mut outputs = Vec::with_capacity(points.len());
    let mut prepares = 0u64;
    let mut queries = 0u64;
    let started = Instant::now();
    loop {
        let first_pass = outputs.is_empty();
        for q in points {
            let v = match path {
                Path::Recursive => ip.interpolate_recursive(q)?,
                Path::Iterative => ip.interpolate_iterative(q)?,
            };
            if first_pass {
                outputs.push(v);
                prepares += ip.evaluation_counters().total_prepares();
            }
            queries += 1;
        }
        if started.elapsed() >= min_duration {
            break;
        }
    }
    let secs = started.elapsed().as_secs_f64().max(1e-9);
    Ok(Measurement {
        queries_per_sec: queries as f64 / secs,
        prepares_per_query: prepares as f64 / points.len() as f64,
        outputs,
    })
}

fn errors(outputs: &[f64], exact: &[f64]) -> (f64, f64) {
    let mut max = 0.0f64;
    let mut sum = 0.0;
    for (o, e) in outputs.iter().zip(exact) {
        let err = (o - e).abs();
        max = max.max(err);
        sum += err;
    }
    (max, sum / outputs.len() as f64)
}

struct Prepared {
    grid: Grid,
    points: Vec<Vec<f64>>,
    exact: Vec<f64>,
}

fn prepare_run(config: &BenchConfig, spacing: f64) -> Result<Prepared> {
    config.validate()?;
    let f = config.benchmark_function()?;
    let lay = layout(config, &f, spacing)?;
    let grid = lay.build_grid(config.size, &f)?;
    let points = lay.samples(config.samples, config.seed);
    let exact = points.iter().map(|p| f.eval(p)).collect();
    Ok(Prepared {
        grid,
        points,
        exact,
    })
}

fn interpolator<'g>(config: &BenchConfig, grid: &'g Grid) -> Result<GridInterpolator<'g>> {
    Ok(GridInterpolator::uniform(grid, config.kind, config.order)?
        .with_extrapolation(config.allow_extrapolation))
}

/// Compares direct function values against grid interpolation at seeded
/// sample points, one row per spacing.
pub fn run_precision(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    config.validate()?;
    let mut rows = Vec::with_capacity(config.spacings.len());
    for &spacing in &config.spacings {
        let run = prepare_run(config, spacing)?;
        let mut ip = interpolator(config, &run.grid)?;
        let m = measure(&mut ip, &run.points, Path::Recursive, Duration::ZERO)?;
        let (max_abs_err, mean_abs_err) = errors(&m.outputs, &run.exact);
        rows.push(BenchRow {
            spacing,
            order: config.order,
            kind: config.kind,
            max_abs_err,
            mean_abs_err,
            queries_per_sec: m.queries_per_sec,
            prepare_count_per_query: m.prepares_per_query,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeedReport {
    /// Recursive path.
    pub row: BenchRow,
    pub iterative_qps: Option<f64>,
    pub iterative_prepares_per_query: Option<f64>,
}

impl SpeedReport {
    pub fn speedup(&self) -> Option<f64> {
        self.iterative_qps.map(|it| self.row.queries_per_sec / it)
    }

    pub fn prepare_ratio(&self) -> Option<f64> {
        self.iterative_prepares_per_query
            .map(|it| it / self.row.prepare_count_per_query)
    }
}

pub fn run_speed(
    config: &BenchConfig,
    compare_iterative: bool,
    min_duration: Duration,
) -> Result<Vec<SpeedReport>> {
    config.validate()?;
    let mut reports = Vec::with_capacity(config.spacings.len());
    for &spacing in &config.spacings {
        let run = prepare_run(config, spacing)?;
        let mut ip = interpolator(config, &run.grid)?;
        let rec = measure(&mut ip, &run.points, Path::Recursive, min_duration)?;
        let (max_abs_err, mean_abs_err) = errors(&rec.outputs, &run.exact);
        let iterative = if compare_iterative {
            Some(measure(&mut ip, &run.points, Path::Iterative, min_duration)?)
        } else {
            None
        };
        reports.push(SpeedReport {
            row: BenchRow {
                spacing,
                order: config.order,
                kind: config.kind,
                max_abs_err,
                mean_abs_err,
                queries_per_sec: rec.queries_per_sec,
                prepare_count_per_query: rec.prepares_per_query,
            },
            iterative_qps: iterative.as_ref().map(|m| m.queries_per_sec),
            iterative_prepares_per_query: iterative.as_ref().map(|m| m.prepares_per_query),
        });
    }
    Ok(reports)
}

/// `sum_{i=1..N} prod_{j<i} T_j`: prepares performed by the staged baseline.
pub fn iterative_prepare_count(orders: &[usize]) -> u64 {
    let mut total = 0u64;
    let mut prefix = 1u64;
    for &t in orders {
        total += prefix;
        prefix *= t as u64;
    }
    total
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for AuditLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status}  {}  {}", self.name, self.detail)
    }
}

fn random_reducers(rng: &mut ChaCha8Rng, lengths: &[usize]) -> Vec<ReducerFn> {
    lengths
        .iter()
        .map(|&l| {
            let r = match rng.gen_range(0..5) {
                0 => Reducer::Sum,
                1 => Reducer::Mean,
                2 => Reducer::Max,
                3 => Reducer::Min,
                _ => Reducer::WeightedSum((0..l).map(|_| rng.gen_range(-1.0..1.0)).collect()),
            };
            r.with_order(l).expect("weights match order")
        })
        .collect()
}

/// Equivalence and counter audits.
pub fn verify(seed: u64) -> Result<Vec<AuditLine>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::new();

    let mut failures = 0;
    let instances = 200;
    for _ in 0..instances {
        let n = rng.gen_range(1..=4);
        let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=8)).collect();
        let arr = MultiArray::from_function(IndexSpec::unshifted(sizes.clone())?, |_| {
            rng.gen_range(-1e3..1e3)
        })?;
        let mut fns = random_reducers(&mut rng, &sizes);
        if !quantize_equivalence_check(&arr.full_view(), &mut fns, &Identity, 1e-12)? {
            failures += 1;
        }
    }
    lines.push(AuditLine {
        name: "quantize recursive == iterative".into(),
        passed: failures == 0,
        detail: format!("{} of {instances} instances within 1e-12", instances - failures),
    });

    let mut worst = 0.0f64;
    let mut count = 0;
    for n in 2..=4 {
        for _ in 0..50 {
            let axes: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    let s = rng.gen_range(3..=8);
                    let h = rng.gen_range(0.2..1.0);
                    (0..s).map(|j| h * j as f64).collect()
                })
                .collect();
            let grid = Grid::build(Mesh::new(axes)?, |p| {
                p.iter().map(|x| (x + 1.0).ln()).sum::<f64>().cos() + 2.0
            })?;
            let sizes = grid.mesh().sizes();
            let kind = [Kind::Linear, Kind::Polynomial, Kind::Rational][rng.gen_range(0..3)];
            let orders: Vec<usize> = sizes
                .iter()
                .map(|&s| if kind == Kind::Linear { 2 } else { rng.gen_range(2..=s) })
                .collect();
            let mut ip =
                GridInterpolator::new(&grid, LocalOrders::new(orders, &grid)?, &vec![kind; n])?;
            let q: Vec<f64> = grid
                .mesh()
                .axes()
                .iter()
                .map(|a| rng.gen_range(a[0]..a[a.len() - 1]))
                .collect();
            let (Ok(r), Ok(i)) = (ip.interpolate_recursive(&q), ip.interpolate_iterative(&q)) else {
                continue;
            };
            worst = worst.max((r - i).abs() / i.abs().max(1.0));
            count += 1;
        }
    }
    lines.push(AuditLine {
        name: "grid recursive == iterative".into(),
        passed: worst <= 1e-10,
        detail: format!("{count} queries, worst relative gap {worst:.3e}"),
    });

    for n in [2usize, 3, 4, 6] {
        let size = 6;
        let t = 4;
        let grid = Grid::build(
            Mesh::uniform(&vec![0.0; n], &vec![1.0; n], &vec![size; n])?,
            |p| p.iter().sum(),
        )?;
        let mut ip = GridInterpolator::uniform(&grid, Kind::Polynomial, t)?;
        let q: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..(size - 1) as f64)).collect();
        ip.interpolate_recursive(&q)?;
        let rec = ip.evaluation_counters().total_prepares();
        ip.interpolate_iterative(&q)?;
        let it = ip.evaluation_counters().total_prepares();
        let want_it = iterative_prepare_count(&vec![t; n]);
        lines.push(AuditLine {
            name: format!("prepare counts N={n}"),
            passed: rec == n as u64 && it == want_it,
            detail: format!("recursive {rec} (want {n}), iterative {it} (want {want_it})"),
        });
    }
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::FunctionId;

    #[test]
    fn iterative_counts() {
        assert_eq!(iterative_prepare_count(&[4, 4, 4]), 21);
        assert_eq!(iterative_prepare_count(&[4; 6]), 1365);
        assert_eq!(iterative_prepare_count(&[7]), 1);
    }

    #[test]
    fn linear_sum_is_exact() {
        let mut c = BenchConfig::new(2, Kind::Linear, 2);
        c.function = FunctionId::Sum;
        c.spacings = vec![0.5, 0.1];
        let rows = run_precision(&c).unwrap();
        assert_eq!(rows.len(), 2);
        for r in rows {
            assert!(r.max_abs_err <= 1e-12, "{r:?}");
            assert!(r.max_abs_err >= r.mean_abs_err && r.mean_abs_err >= 0.0);
            assert_eq!(r.prepare_count_per_query, 2.0);
        }
    }

    #[test]
    fn quadratic_with_order_three() {
        let mut c = BenchConfig::new(3, Kind::Polynomial, 3);
        c.function = FunctionId::Quadratic;
        c.spacings = vec![0.3];
        let row = &run_precision(&c).unwrap()[0];
        assert!(row.max_abs_err <= 1e-9 * 8.0, "{row:?}");
    }

    #[test]
    fn precision_is_deterministic() {
        let mut c = BenchConfig::new(3, Kind::Rational, 4);
        c.spacings = vec![0.4];
        c.samples = 30;
        let a = run_precision(&c).unwrap();
        let b = run_precision(&c).unwrap();
        assert_eq!(a[0].max_abs_err.to_bits(), b[0].max_abs_err.to_bits());
        assert_eq!(a[0].mean_abs_err.to_bits(), b[0].mean_abs_err.to_bits());
    }

    #[test]
    fn speed_report_counts() {
        let mut c = BenchConfig::new(3, Kind::Polynomial, 4);
        c.samples = 20;
        let r = &run_speed(&c, true, Duration::ZERO).unwrap()[0];
        assert_eq!(r.row.prepare_count_per_query, 3.0);
        assert_eq!(r.iterative_prepares_per_query, Some(21.0));
        assert_eq!(r.prepare_ratio(), Some(7.0));
    }

    #[test]
    fn audits_pass() {
        for line in verify(1).unwrap() {
            assert!(line.passed, "{line}");
        }
    }
}
