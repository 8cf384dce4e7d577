use super::{batch, verdict, Item};
use crate::input;
use crate::report::{to_value, Failure, Output};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::fmt::Write;
use trop_morse::curve::{analyze, random_curve, random_divisor, CurveReport, RandomCurveParams};

fn identity_holds(report: &CurveReport) -> bool {
    report.rr_ok && report.rotation == report.degree
}

pub fn check(files: Option<(&str, &str)>, fixtures: &[String]) -> Result<Output, Failure> {
    let inputs = input::curves(files, fixtures)?;
    batch(&inputs, |input| {
        let (curve, div) = &input.value;
        let report = analyze(curve, div)?;
        let ok = identity_holds(&report);

        let mut text = format!("{}\n", input.source);
        writeln!(text, "  {:<24} {:<16} {:<10} {:<12} index", "point", "kind", "levels", "lmd").unwrap();
        for p in &report.points {
            let levels: Vec<String> = p.levels.iter().map(i64::to_string).collect();
            writeln!(text, "  {:<24} {:<16} {:<10} {:<12} {}", p.label, p.kind, levels.join(","), p.lmd.to_string(), p.index)
                .unwrap();
        }
        writeln!(
            text,
            "  LMD = {}  euler {}  rotation {}  degree {}  chi_top {}  genus {}",
            report.lmd, report.euler, report.rotation, report.degree, report.chi_top, curve.genus()
        )
        .unwrap();
        writeln!(text, "  euler = degree + chi_top and rotation = degree: {}", verdict(ok)).unwrap();

        let mut value = to_value(&report);
        let map = value.as_object_mut().expect("report is an object");
        map.insert("source".into(), Value::from(input.source.clone()));
        map.insert("genus".into(), Value::from(curve.genus()));
        map.insert("ok".into(), Value::from(ok));
        Ok(Item { value, text, ok })
    })
}

pub struct RandomRun {
    pub genus: usize,
    pub leaves: usize,
    pub count: usize,
    pub max_edges: usize,
    pub max_slope: i64,
    pub breakpoints: usize,
    pub seed: u64,
}

/// Seed of the divisor on instance `seed`; decorrelates it from the curve.
fn divisor_seed(seed: u64) -> u64 {
    seed ^ 0x9e37_79b9_7f4a_7c15
}

pub fn random(run: &RandomRun) -> Result<Output, Failure> {
    if run.count == 0 {
        return Err(Failure::input("--count must be at least 1"));
    }
    let params = RandomCurveParams { genus: run.genus, leaves: run.leaves, max_edges: run.max_edges };
    let instances: Vec<Result<(Value, Option<Value>), Failure>> = (0..run.count)
        .into_par_iter()
        .map(|i| {
            let seed = run.seed.wrapping_add(i as u64);
            let curve = random_curve(&params, seed)?;
            let div = random_divisor(&curve, divisor_seed(seed), run.max_slope, run.breakpoints)?;
            let report = analyze(&curve, &div)?;
            let ok = identity_holds(&report);
            let record = json!({
                "instance": i,
                "seed": seed,
                "vertices": curve.vertices().len(),
                "edges": curve.edges().len(),
                "points": report.points.len(),
                "euler": report.euler,
                "rotation": report.rotation,
                "degree": report.degree,
                "chi_top": report.chi_top,
                "ok": ok,
            });
            let counterexample = (!ok).then(|| json!({ "instance": i, "curve": curve.to_spec(), "divisor": div.to_spec() }));
            Ok((record, counterexample))
        })
        .collect();

    let mut records = Vec::new();
    let mut first_counterexample = None;
    for instance in instances {
        let (record, counterexample) = instance?;
        if first_counterexample.is_none() {
            first_counterexample = counterexample;
        }
        records.push(record);
    }
    let failed = records.iter().filter(|r| r["ok"] == Value::Bool(false)).count();
    let ok = failed == 0;
    let mut text = format!(
        "{} random curves of genus {} with {} leaves (seed {})\n  passed {}  failed {}\n",
        run.count,
        run.genus,
        run.leaves,
        run.seed,
        run.count - failed,
        failed
    );
    if let Some(c) = &first_counterexample {
        writeln!(text, "  first counterexample: {c}").unwrap();
    }
    let value = json!({
        "genus": run.genus,
        "leaves": run.leaves,
        "count": run.count,
        "seed": run.seed,
        "passed": run.count - failed,
        "failed": failed,
        "first_counterexample": first_counterexample,
        "instances": records,
        "ok": ok,
    });
    Ok(super::single(Vec::new(), Item { value, text, ok }))
}
