//! Acceptance criteria. Each test prints one PASS/FAIL line.

use std::time::{Duration, Instant};

use mcube::quantize::{quantize, quantize_iterative, Identity, Reducer, ReducerFn};
use mcube::{
    projection_extent, Grid, GridInterpolator, IndexSpec, Kind, LocalOrders, Mesh, MultiArray,
    WindowSpec,
};
use mcube_bench::{iterative_prepare_count, run_precision, run_speed, BenchConfig, FunctionId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, passed: bool, detail: &str, elapsed: Duration, limit: Duration) {
    let in_time = elapsed < limit;
    let status = if passed && in_time { "PASS" } else { "FAIL" };
    println!(
        "criterion {id} [{status}] {name}: {detail} ({:.2}s, limit {}s)",
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    assert!(passed, "criterion {id} failed: {detail}");
    assert!(in_time, "criterion {id} exceeded its time limit");
}

/// Random shape with N <= 4 and at most `max_count` elements.
fn random_sizes(rng: &mut ChaCha8Rng, max_count: usize) -> Vec<usize> {
    loop {
        let n = rng.gen_range(1..=4);
        let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=16)).collect();
        if sizes.iter().product::<usize>() <= max_count {
            return sizes;
        }
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
                _ => Reducer::WeightedSum((0..l).map(|_| rng.gen_range(-2.0..2.0)).collect()),
            };
            r.with_order(l).unwrap()
        })
        .collect()
}

fn random_mesh(rng: &mut ChaCha8Rng, n: usize, max_size: usize) -> Mesh {
    Mesh::new(
        (0..n)
            .map(|_| {
                let s = rng.gen_range(2..=max_size);
                let mut x = rng.gen_range(-2.0..2.0);
                (0..s)
                    .map(|_| {
                        let k = x;
                        x += rng.gen_range(0.25..1.25);
                        k
                    })
                    .collect()
            })
            .collect(),
    )
    .unwrap()
}

#[test]
fn criterion_1_layout_partition() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut ok = true;
    let mut checked = 0;
    for _ in 0..50 {
        let sizes = random_sizes(&mut rng, 4096);
        let offsets: Vec<i64> = sizes.iter().map(|_| rng.gen_range(-10..10)).collect();
        let spec = IndexSpec::new(sizes.clone(), offsets.clone()).unwrap();
        let strides = spec.strides();
        for m in 0..=sizes.len() {
            let prefixes: Vec<Vec<i64>> = if m == 0 {
                vec![vec![]]
            } else {
                IndexSpec::new(sizes[..m].to_vec(), offsets[..m].to_vec())
                    .unwrap()
                    .indices()
                    .map(|i| i.0)
                    .collect()
            };
            let mut hits = vec![0u32; spec.count()];
            for p in &prefixes {
                let (start, len) = projection_extent(&spec, &strides, p).unwrap();
                ok &= len == sizes[m..].iter().product::<usize>();
                for h in &mut hits[start..start + len] {
                    *h += 1;
                }
            }
            // every offset covered exactly once: pairwise disjoint and tiling
            ok &= hits.iter().all(|&h| h == 1);
            checked += 1;
        }
    }
    report(
        1,
        "layout partition",
        ok,
        &format!("50 shapes, {checked} depths tiled exactly"),
        started.elapsed(),
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_2_quantize_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let instances = 500;
    let mut worst = 0.0f64;
    for _ in 0..instances {
        let sizes = random_sizes(&mut rng, 4096);
        let arr = MultiArray::from_function(IndexSpec::unshifted(sizes.clone()).unwrap(), |_| {
            rng.gen_range(-100.0..100.0)
        })
        .unwrap();
        let mut fns = random_reducers(&mut rng, &sizes);
        let view = arr.full_view();
        let r = quantize(&view, &mut fns, &Identity).unwrap();
        let i = quantize_iterative(&view, &mut fns, &Identity).unwrap();
        worst = worst.max((r - i).abs() / i.abs().max(1.0));
    }
    report(
        2,
        "quantize recursive == iterative",
        worst <= 1e-12,
        &format!("{instances} instances, worst relative gap {worst:.3e} (tol 1e-12)"),
        started.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_3_local_global_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let windows = 200;
    let mut worst = 0.0f64;
    for _ in 0..windows {
        let sizes = random_sizes(&mut rng, 4096);
        let arr = MultiArray::from_function(IndexSpec::unshifted(sizes.clone()).unwrap(), |_| {
            rng.gen_range(-100.0..100.0)
        })
        .unwrap();
        let starts: Vec<usize> = sizes.iter().map(|&s| rng.gen_range(0..s)).collect();
        let lengths: Vec<usize> = sizes
            .iter()
            .zip(&starts)
            .map(|(&s, &st)| rng.gen_range(1..=s - st))
            .collect();
        let view = arr
            .subwindow(&WindowSpec::new(starts, lengths.clone()))
            .unwrap();
        let copy = view.materialize(vec![0; sizes.len()]).unwrap();
        let mut fns = random_reducers(&mut rng, &lengths);
        let local = quantize(&view, &mut fns, &Identity).unwrap();
        let global = quantize(&copy.full_view(), &mut fns, &Identity).unwrap();
        worst = worst.max((local - global).abs() / global.abs().max(1.0));
    }
    report(
        3,
        "local == global quantization",
        worst <= 1e-12,
        &format!("{windows} windows, worst relative gap {worst:.3e} (tol 1e-12)"),
        started.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_4_node_reproduction() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst = 0.0f64;
    let mut nodes = 0;
    for _ in 0..30 {
        let n = rng.gen_range(1..=4);
        let grid = Grid::build(random_mesh(&mut rng, n, 6), |_| rng.gen_range(-50.0..50.0)).unwrap();
        for kind in [Kind::Linear, Kind::Polynomial, Kind::Rational] {
            let orders: Vec<usize> = grid
                .mesh()
                .sizes()
                .iter()
                .map(|&s| if kind == Kind::Linear { 2 } else { rng.gen_range(2..=s) })
                .collect();
            let orders = LocalOrders::new(orders, &grid).unwrap();
            let mut ip = GridInterpolator::new(&grid, orders, &vec![kind; n]).unwrap();
            for ix in grid.data().spec().indices() {
                let q: Vec<f64> = ix
                    .0
                    .iter()
                    .enumerate()
                    .map(|(d, &a)| grid.mesh().axis(d)[(a - 1) as usize])
                    .collect();
                let want = grid.data().get(&ix.0).unwrap();
                let got = ip.interpolate_recursive(&q).unwrap();
                worst = worst.max((got - want).abs() / want.abs().max(1.0));
                nodes += 1;
            }
        }
    }
    report(
        4,
        "node reproduction",
        worst <= 1e-12,
        &format!("{nodes} node queries over 3 kinds, worst relative error {worst:.3e} (tol 1e-12)"),
        started.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_5_tensor_polynomial_exactness() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut worst = 0.0f64;
    let mut points = 0;
    for n in [2usize, 3] {
        for _ in 0..4 {
            let mesh = random_mesh(&mut rng, n, 7);
            let orders: Vec<usize> = mesh.sizes().iter().map(|&s| rng.gen_range(2..=s)).collect();
            let coeffs: Vec<Vec<f64>> = orders
                .iter()
                .map(|&t| (0..t).map(|_| rng.gen_range(-2.0..2.0)).collect())
                .collect();
            let f = |p: &[f64]| -> f64 {
                p.iter()
                    .zip(&coeffs)
                    .map(|(&x, c)| c.iter().rev().fold(0.0, |acc, &a| acc * x + a))
                    .product()
            };
            let grid = Grid::build(mesh, f).unwrap();
            let orders = LocalOrders::new(orders, &grid).unwrap();
            let mut ip =
                GridInterpolator::new(&grid, orders, &vec![Kind::Polynomial; n]).unwrap();
            for _ in 0..50 {
                let q: Vec<f64> = grid
                    .mesh()
                    .axes()
                    .iter()
                    .map(|a| rng.gen_range(a[0]..a[a.len() - 1]))
                    .collect();
                let want = f(&q);
                let got = ip.interpolate_recursive(&q).unwrap();
                worst = worst.max((got - want).abs() / want.abs().max(1.0));
                points += 1;
            }
        }
    }
    report(
        5,
        "tensor polynomial exactness",
        worst <= 1e-9,
        &format!("{points} interior points, worst relative error {worst:.3e} (tol 1e-9)"),
        started.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_6_prepare_counts() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut ok = true;
    let mut shapes = 0;
    for n in [2usize, 3, 4, 6] {
        for _ in 0..5 {
            let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(3..=6)).collect();
            let mesh = Mesh::uniform(&vec![0.0; n], &vec![1.0; n], &sizes).unwrap();
            let grid = Grid::build(mesh, |p| p.iter().map(|x| x.sin()).sum()).unwrap();
            let orders: Vec<usize> = sizes.iter().map(|&s| rng.gen_range(2..=s)).collect();
            let kinds: Vec<Kind> = orders
                .iter()
                .map(|&t| if t == 2 && rng.gen_bool(0.5) { Kind::Linear } else { Kind::Polynomial })
                .collect();
            let mut ip =
                GridInterpolator::new(&grid, LocalOrders::new(orders.clone(), &grid).unwrap(), &kinds)
                    .unwrap();
            let q: Vec<f64> = sizes
                .iter()
                .map(|&s| rng.gen_range(0.0..(s - 1) as f64))
                .collect();
            ip.interpolate_recursive(&q).unwrap();
            let rec = ip.evaluation_counters().clone();
            ok &= rec.prepares == vec![1; n];
            ok &= rec.total_prepares() == n as u64;
            ip.interpolate_iterative(&q).unwrap();
            ok &= ip.evaluation_counters().total_prepares() == iterative_prepare_count(&orders);
            shapes += 1;
        }
    }
    report(
        6,
        "prepare-count invariant",
        ok,
        &format!("{shapes} shapes at N in {{2,3,4,6}}: recursive N, iterative sum of prod T_j"),
        started.elapsed(),
        Duration::from_secs(5),
    );
}

fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

#[test]
fn criterion_7_r6_precision() {
    let started = Instant::now();
    let mut poly = BenchConfig::new(6, Kind::Polynomial, 5);
    poly.function = FunctionId::R6;
    poly.size = 12;
    poly.samples = 200;
    poly.spacings = vec![1.0, 0.5];
    let rows = run_precision(&poly).unwrap();
    let mut rational = poly.clone();
    rational.kind = Kind::Rational;
    rational.order = 4;
    rational.spacings = vec![0.5];
    let rat = run_precision(&rational).unwrap();

    let checks = [
        ("polynomial T=5 h=1.0", rows[0].max_abs_err, 1e-4),
        ("polynomial T=5 h=0.5", rows[1].max_abs_err, 1e-5),
        ("rational T=4 h=0.5", rat[0].max_abs_err, 1e-4),
    ];
    let rss = peak_rss_bytes();
    let memory_ok = rss.is_none_or(|b| b < 512 * 1024 * 1024);
    let passed = checks.iter().all(|&(_, err, tol)| err <= tol) && memory_ok;
    let detail: Vec<String> = checks
        .iter()
        .map(|(name, err, tol)| format!("{name}: max_abs_err {err:.3e} (limit {tol:.0e})"))
        .collect();
    report(
        7,
        "R6 precision",
        passed,
        &format!(
            "{}; peak rss {} MiB",
            detail.join("; "),
            rss.map_or("n/a".to_string(), |b| (b >> 20).to_string())
        ),
        started.elapsed(),
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_8_speed_direction() {
    let started = Instant::now();
    let mut config = BenchConfig::new(6, Kind::Polynomial, 4);
    config.samples = 100;
    let report_ = &run_speed(&config, true, Duration::from_secs(2)).unwrap()[0];
    let speedup = report_.speedup().unwrap();
    report(
        8,
        "speed direction",
        speedup >= 2.0,
        &format!(
            "recursive {:.0} qps vs iterative {:.0} qps, speedup {speedup:.2}x (need >= 2x)",
            report_.row.queries_per_sec,
            report_.iterative_qps.unwrap()
        ),
        started.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_9_binary_round_trip() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut ok = true;
    for _ in 0..20 {
        let n = rng.gen_range(1..=4);
        let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=7)).collect();
        let offsets: Vec<i64> = (0..n).map(|_| rng.gen_range(-1000..1000)).collect();
        let spec = IndexSpec::new(sizes.clone(), offsets).unwrap();
        let arr = MultiArray::from_function(spec, |_| {
            let bits: u64 = rng.gen();
            let v = f64::from_bits(bits);
            if v.is_finite() { v } else { rng.gen_range(-1e300..1e300) }
        })
        .unwrap();
        let back = MultiArray::from_bytes(&arr.to_bytes()).unwrap();
        ok &= back.spec() == arr.spec();
        ok &= back
            .data()
            .iter()
            .zip(arr.data())
            .all(|(a, b)| a.to_bits() == b.to_bits());

        let axes: Vec<Vec<f64>> = sizes
            .iter()
            .map(|&s| (0..s).map(|j| -3.0 + 0.7 * j as f64).collect())
            .collect();
        let grid = Grid::from_parts(Mesh::new(axes).unwrap(), arr).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("grid.mcub");
        std::fs::write(&path, grid.to_bytes()).unwrap();
        let loaded = Grid::from_bytes(&std::fs::read(&path).unwrap()).unwrap();
        ok &= loaded.mesh() == grid.mesh()
            && loaded
                .data()
                .data()
                .iter()
                .zip(grid.data().data())
                .all(|(a, b)| a.to_bits() == b.to_bits());
    }
    report(
        9,
        "binary round trip",
        ok,
        "20 random arrays and grid files with negative offsets, bit-exact",
        started.elapsed(),
        Duration::from_secs(5),
    );
}
