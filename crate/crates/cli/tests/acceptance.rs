//! One line per acceptance criterion; exits non-zero if any fails.

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use std::process::Command;
use std::time::{Duration, Instant};
use trop_morse::compose::{etale_cyclic, kunneth, verify_sym, IndexedPointSet, LabelledPoint};
use trop_morse::curve::{
    chi_top, degree, intersection_points, lmd, random_curve, random_divisor, rotation_number, split_verify,
    PointKind, RandomCurveParams,
};
use trop_morse::exact::{int, Rational};
use trop_morse::fixtures;
use trop_morse::toric::{ehrhart, potential, toric_lmd, Facet, LatticePolytope};
use trop_morse::torus::{
    bohr_sommerfeld_count, intersection_count, intersection_points as torus_points, verify_hesse_rr,
    IntersectionCount, Lattice, TorusQuadraticDivisor,
};
use trop_morse::{sym_euler, GradedModule};

const CURVE_FIXTURE_BUDGET: Duration = Duration::from_secs(1);
const RANDOM_CURVE_BUDGET: Duration = Duration::from_secs(10);
const TORUS_BUDGET: Duration = Duration::from_secs(5);
const BRUTE_FORCE_DET_LIMIT: i64 = 24;
const GRADIENT_REL_TOL: f64 = 1e-6;
const FD_STEP: f64 = 1e-5;
const FACET_MARGIN: f64 = 1e-9;
const EIGEN_PD_FLOOR: f64 = 1e-12;
const EIGEN_ZERO_TOL: f64 = 1e-9;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cli(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_trop-morse"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)))?;
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn fixture_args(ids: impl Iterator<Item = String>) -> Vec<String> {
    let mut args: Vec<String> = ["--json", "curve", "check"].map(String::from).to_vec();
    for id in ids {
        args.push("--fixture".into());
        args.push(id);
    }
    args
}

fn criterion_1() -> Outcome {
    let args = fixture_args((1..=10).map(|n| format!("elliptic:{n}")));
    let start = Instant::now();
    let report = cli(&args.iter().map(String::as_str).collect::<Vec<_>>())?;
    let elapsed = start.elapsed();
    for (n, r) in (1..=10).zip(report["results"].as_array().ok_or("no results")?) {
        ensure(r["euler"] == n && r["degree"] == n && r["chi_top"] == 0 && r["ok"] == true, || {
            format!("elliptic:{n}: {r}")
        })?;
    }
    ensure(elapsed < CURVE_FIXTURE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("euler = n = deg for n = 1..10 via `curve check`, {:.0} ms", elapsed.as_secs_f64() * 1e3))
}

fn criterion_2() -> Outcome {
    let args = fixture_args((1..=10).map(|n| format!("tp1:{n}")));
    let report = cli(&args.iter().map(String::as_str).collect::<Vec<_>>())?;
    for (n, r) in (1..=10i64).zip(report["results"].as_array().ok_or("no results")?) {
        ensure(r["euler"] == n + 1 && r["degree"] == n && r["chi_top"] == 1 && r["ok"] == true, || {
            format!("tp1:{n}: {r}")
        })?;
    }
    Ok("euler = n + 1 = n + chi_top for n = 1..10".into())
}

fn criterion_3() -> Outcome {
    let table = [((3, 0), 1), ((2, 1), 0), ((1, 2), -1), ((0, 3), -2)];
    for ((p, q), expected) in table {
        let (curve, div) = fixtures::star(p, q);
        let points = intersection_points(&curve, &div).map_err(|e| e.to_string())?;
        let mut centre = None;
        let (mut leaf_up, mut leaf_down) = (0, 0);
        for point in &points {
            match point.kind {
                PointKind::VertexStar { .. } => centre = Some(point.index()),
                PointKind::InfiniteLeaf { ascending } => {
                    let want = if ascending { 1 } else { 0 };
                    ensure(point.index() == want, || format!("leaf index {} on star({p},{q})", point.index()))?;
                    if ascending {
                        leaf_up += 1;
                    } else {
                        leaf_down += 1;
                    }
                }
                _ => return Err(format!("unexpected point {:?} on star({p},{q})", point.kind)),
            }
        }
        ensure(centre == Some(expected), || format!("star({p},{q}) centre index {centre:?}, want {expected}"))?;
        // an ascending direction at the centre ends in a descending leaf
        ensure((leaf_up, leaf_down) == (q, p), || format!("star({p},{q}) leaves {leaf_up}/{leaf_down}"))?;
    }
    Ok("centre indices 1, 0, -1, -2 and leaf indices 1/0".into())
}

fn random_instance(rng: &mut ChaCha8Rng, seed: u64) -> Result<(trop_morse::curve::TropicalCurve, trop_morse::curve::CurveDivisor), String> {
    let params = RandomCurveParams { genus: rng.random_range(0..=4), leaves: rng.random_range(0..=3), max_edges: 12 };
    let curve = random_curve(&params, seed).map_err(|e| e.to_string())?;
    let div = random_divisor(&curve, seed ^ 0x5151, 5, 3).map_err(|e| e.to_string())?;
    Ok((curve, div))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let start = Instant::now();
    let mut max_edges = 0;
    for i in 0..200u64 {
        let (curve, div) = random_instance(&mut rng, 1000 + i)?;
        max_edges = max_edges.max(curve.edges().len());
        let euler = lmd(&curve, &div).map_err(|e| e.to_string())?.euler();
        let rotation = rotation_number(&curve, &div).map_err(|e| e.to_string())?;
        let deg = degree(&curve, &div).map_err(|e| e.to_string())?;
        let chi = chi_top(&curve);
        ensure(euler == rotation + chi && rotation == deg, || {
            format!("instance {i}: euler {euler}, rotation {rotation}, degree {deg}, chi_top {chi}")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < RANDOM_CURVE_BUDGET && max_edges <= 12, || format!("took {elapsed:?}, {max_edges} edges"))?;
    Ok(format!("200 random curves, euler = rotation + chi_top and rotation = degree, {:.0} ms", elapsed.as_secs_f64() * 1e3))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tested = 0;
    let mut seed = 5000;
    while tested < 50 {
        seed += 1;
        let (curve, div) = random_instance(&mut rng, seed)?;
        let points = intersection_points(&curve, &div).map_err(|e| e.to_string())?;
        if points.is_empty() {
            continue;
        }
        let cuts: Vec<_> =
            points.iter().filter(|_| rng.random_bool(0.4)).map(|p| p.location.clone()).collect();
        let cuts = if cuts.is_empty() { vec![points[0].location.clone()] } else { cuts };
        let report = split_verify(&curve, &div, &cuts).map_err(|e| e.to_string())?;
        let chi_parts: i64 = report.parts.iter().map(|p| p.chi_top).sum();
        ensure(
            report.euler_whole == report.euler_parts - report.overlap
                && report.rotation_whole == report.rotation_parts
                && chi_top(&curve) == chi_parts - report.overlap,
            || format!("seed {seed}: {report:?}"),
        )?;
        tested += 1;
    }
    Ok("50 random cuts: euler and chi_top glue with the overlap, rotation adds".into())
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-5..=5);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

/// Cofactor expansion in i128.
fn det_oracle(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] as i128 * det_oracle(&minor)
        })
        .sum()
}

/// Points `k/D` of `[0,1)ⁿ` with `Mk ≡ 0 (mod D)`, `D = |det M|`.
fn coset_oracle(m: &[Vec<i64>], d: i64) -> Vec<Vec<Rational>> {
    let n = m.len();
    let mut out = Vec::new();
    let mut k = vec![0i64; n];
    loop {
        if (0..n).all(|i| (0..n).map(|j| m[i][j] * k[j]).sum::<i64>().rem_euclid(d) == 0) {
            out.push(k.iter().map(|&v| Rational::new(BigInt::from(v), BigInt::from(d))).collect());
        }
        let mut i = 0;
        while i < n {
            k[i] += 1;
            if k[i] < d {
                break;
            }
            k[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out.sort();
    out
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let start = Instant::now();
    let (mut tested, mut brute) = (0, 0);
    while tested < 100 {
        let n = rng.random_range(1..=4);
        let m = random_symmetric(&mut rng, n);
        let det = det_oracle(&m);
        if det == 0 {
            continue;
        }
        let d = TorusQuadraticDivisor::new(m.clone(), Vec::new()).map_err(|e| e.to_string())?;
        let hesse = verify_hesse_rr(&d).map_err(|e| e.to_string())?;
        ensure(hesse.ok && hesse.lhs as i128 == det, || format!("{m:?}: euler {} det {det}", hesse.lhs))?;
        let count = match intersection_count(&d) {
            IntersectionCount::Finite(c) => c,
            IntersectionCount::Degenerate => return Err(format!("{m:?} reported degenerate")),
        };
        ensure(count == BigInt::from(det.abs()), || format!("{m:?}: Smith count {count}, |det| {}", det.abs()))?;
        if det.abs() <= BRUTE_FORCE_DET_LIMIT as i128 {
            let listed = torus_points(&d).map_err(|e| e.to_string())?;
            ensure(listed == coset_oracle(&m, det.abs() as i64), || format!("{m:?}: point sets differ"))?;
            brute += 1;
        }
        tested += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < TORUS_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "100 matrices: euler = det M, count = |det M| by Smith form, {brute} point sets match coset enumeration, {:.0} ms",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tested = 0;
    while tested < 50 {
        let n = rng.random_range(1..=4);
        let l: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(-5..=5)).collect()).collect();
        let det = det_oracle(&l);
        if det == 0 {
            continue;
        }
        let count = bohr_sommerfeld_count(&Lattice::new(l.clone()).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(count == BigInt::from(det.abs()), || format!("{l:?}: count {count}, |det| {}", det.abs()))?;
        tested += 1;
    }
    Ok("50 lattices: Bohr-Sommerfeld count = |det L|".into())
}

fn polytope_set() -> Vec<(String, LatticePolytope)> {
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push((format!("cube:{n}"), fixtures::cube(n)));
        out.push((format!("simplex:{n}"), fixtures::simplex(n)));
    }
    out.push(("segment:5".into(), fixtures::segment(5)));
    out.push(("dilated-simplex:2,2".into(), fixtures::dilated_simplex(2, 2)));
    out
}

/// Lattice points of `kP` (strictly inside when `strict`), by scanning a box
/// that contains it.
fn brute_count(p: &LatticePolytope, k: i64, strict: bool) -> usize {
    let n = p.n();
    let lo: Vec<i64> = (0..n).map(|i| k * p.vertices().iter().map(|v| v[i]).min().unwrap() - 1).collect();
    let hi: Vec<i64> = (0..n).map(|i| k * p.vertices().iter().map(|v| v[i]).max().unwrap() + 1).collect();
    let mut x = lo.clone();
    let mut count = 0;
    loop {
        let inside = p.facets().iter().all(|f: &Facet| {
            let v: i64 = f.a.iter().zip(&x).map(|(a, b)| a * b).sum();
            if strict {
                v < k * f.b
            } else {
                v <= k * f.b
            }
        });
        count += usize::from(inside);
        let mut i = 0;
        while i < n {
            x[i] += 1;
            if x[i] <= hi[i] {
                break;
            }
            x[i] = lo[i];
            i += 1;
        }
        if i == n {
            return count;
        }
    }
}

fn criterion_8() -> Outcome {
    for (name, p) in polytope_set() {
        let n = p.n() as i64;
        let ehr = ehrhart(&p).map_err(|e| e.to_string())?;
        let sign = if n % 2 == 0 { 1 } else { -1 };
        for k in 1..=4 {
            let interior = brute_count(&p, k, true);
            ensure(int(sign) * ehr.eval(-k) == int(interior as i64), || format!("{name}: reciprocity fails at k = {k}"))?;
        }
        for k in 0..=2 * n {
            let direct = brute_count(&p, k, false);
            ensure(ehr.eval(k) == int(direct as i64), || format!("{name}: Ehr({k}) differs from {direct}"))?;
        }
    }
    Ok("reciprocity for k <= 4 and Ehr(k) = direct count for k <= 2n on 8 polytopes".into())
}

fn criterion_9() -> Outcome {
    for (name, p) in polytope_set() {
        let n = p.n() as i64;
        let plus = toric_lmd(&p, 1).map_err(|e| e.to_string())?;
        let minus = toric_lmd(&p, -1).map_err(|e| e.to_string())?;
        let total = brute_count(&p, 1, false) as u64;
        let interior = brute_count(&p, 1, true) as u64;
        ensure(plus.lmd == GradedModule::free(0, total) && plus.euler == total as i64, || format!("{name}: +s {:?}", plus))?;
        let sign = if n % 2 == 0 { 1 } else { -1 };
        ensure(minus.lmd == GradedModule::free(n, interior) && minus.euler == sign * interior as i64, || {
            format!("{name}: -s {:?}", minus)
        })?;
    }
    Ok("euler(+s) = #lattice points in degree 0, euler(-s) = (-1)^n #interior in degree n".into())
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut polytopes = polytope_set();
    // a lattice segment in the plane, not full-dimensional
    let diagonal = LatticePolytope::new(
        vec![vec![0, 0], vec![2, 2]],
        vec![
            Facet { a: vec![1, -1], b: 0 },
            Facet { a: vec![-1, 1], b: 0 },
            Facet { a: vec![1, 0], b: 2 },
            Facet { a: vec![-1, 0], b: 0 },
        ],
    )
    .map_err(|e| e.to_string())?;
    polytopes.push(("diagonal".into(), diagonal));
    let mut worst = 0.0f64;
    for (name, p) in polytopes {
        let f = potential(&p).map_err(|e| e.to_string())?;
        let n = p.n();
        for _ in 0..50 {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
            let mu = f.moment_map(&x);
            let grad: Vec<f64> = (0..n)
                .map(|i| {
                    let (mut a, mut b) = (x.clone(), x.clone());
                    a[i] += FD_STEP;
                    b[i] -= FD_STEP;
                    (f.eval(&a) - f.eval(&b)) / (2.0 * FD_STEP)
                })
                .collect();
            let scale = mu.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            let err = grad.iter().zip(&mu).map(|(g, m)| (g - m).abs()).fold(0.0, f64::max) / scale;
            worst = worst.max(err);
            ensure(err < GRADIENT_REL_TOL, || format!("{name}: gradient error {err:e} at {x:?}"))?;
            if p.is_full_dimensional() {
                for facet in p.facets() {
                    let slack = facet.b as f64 - facet.a.iter().zip(&mu).map(|(&a, m)| a as f64 * m).sum::<f64>();
                    ensure(slack > FACET_MARGIN, || format!("{name}: facet slack {slack:e}"))?;
                }
            }
            let h = f.hessian(&x);
            let eig = SymmetricEigen::new(DMatrix::from_fn(n, n, |i, j| h[i][j])).eigenvalues;
            let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
            if p.is_full_dimensional() {
                ensure(min > EIGEN_PD_FLOOR, || format!("{name}: Hessian eigenvalue {min:e}"))?;
            } else {
                ensure(min > -EIGEN_ZERO_TOL && min.abs() < EIGEN_ZERO_TOL, || format!("{name}: Hessian eigenvalue {min:e}"))?;
            }
        }
    }
    Ok(format!("gradient = moment map (worst relative error {worst:.1e}), image inside P, Hessian PSD/PD"))
}

fn points_of_euler(chi: i64) -> IndexedPointSet {
    let degree = i64::from(chi < 0);
    IndexedPointSet::new(
        (0..chi.unsigned_abs()).map(|i| LabelledPoint { label: i.to_string(), lmd: GradedModule::free(degree, 1) }).collect(),
    )
    .unwrap()
}

/// Coefficients of `(1 − t)^(−chi)` up to `t^len`, by repeated prefix sums
/// or differences.
fn series(chi: i64, len: usize) -> Vec<i128> {
    let mut s = vec![0i128; len + 1];
    s[0] = 1;
    for _ in 0..chi.unsigned_abs() {
        if chi > 0 {
            for k in 1..=len {
                s[k] += s[k - 1];
            }
        } else {
            for k in (1..=len).rev() {
                s[k] -= s[k - 1];
            }
        }
    }
    s
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut pairs = 0;
    while pairs < 30 {
        let (n1, n2) = (rng.random_range(1..=2), rng.random_range(1..=2));
        let (m1, m2) = (random_symmetric(&mut rng, n1), random_symmetric(&mut rng, n2));
        let (d1, d2) = (det_oracle(&m1), det_oracle(&m2));
        if d1 == 0 || d2 == 0 || d1.abs() > 30 || d2.abs() > 30 {
            continue;
        }
        let a = TorusQuadraticDivisor::new(m1, Vec::new()).unwrap();
        let b = TorusQuadraticDivisor::new(m2, Vec::new()).unwrap();
        let product = kunneth(&IndexedPointSet::from_torus(&a).unwrap(), &IndexedPointSet::from_torus(&b).unwrap());
        let direct = trop_morse::torus::lmd(&a.block_sum(&b)).map_err(|e| e.to_string())?;
        ensure(
            product.euler() as i128 == d1 * d2 && product.total() == direct.lmd && direct.euler as i128 == d1 * d2,
            || format!("torus pair {pairs}: product {} block {}", product.total(), direct.lmd),
        )?;
        pairs += 1;
    }
    for (x, y) in [("elliptic:2", "elliptic:3"), ("tp1:2", "elliptic:-1"), ("star:2,1", "tp1:3")] {
        let load = |id| match fixtures::lookup(id).unwrap() {
            fixtures::Fixture::Curve(c, d) => IndexedPointSet::from_curve(&c, &d).unwrap(),
            _ => unreachable!(),
        };
        let (px, py) = (load(x), load(y));
        ensure(kunneth(&px, &py).euler() == px.euler() * py.euler(), || format!("{x} x {y} not multiplicative"))?;
    }
    for n in (-10..=10).filter(|&n| n != 0) {
        let (c, d) = fixtures::elliptic(n);
        let cover = etale_cyclic(&c, &d, 2).map_err(|e| e.to_string())?;
        ensure(cover.euler() == 2 * n, || format!("double cover of elliptic:{n} has euler {}", cover.euler()))?;
    }
    for chi in -8..=8i64 {
        let oracle = series(chi, 12);
        let set = points_of_euler(chi);
        for n in 0..=12u64 {
            ensure(sym_euler(chi, n) == BigInt::from(oracle[n as usize]) && verify_sym(&set, n).ok, || {
                format!("sym_euler({chi}, {n})")
            })?;
        }
    }
    Ok("30 torus products match block-diagonal tori, double covers give 2n, sym_euler matches series for |chi| <= 8, n <= 12".into())
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 11] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let mut failed = 0;
    for (number, run) in criteria {
        match run() {
            Ok(detail) => println!("[PASS] criterion {number}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("[FAIL] criterion {number}: {reason}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
