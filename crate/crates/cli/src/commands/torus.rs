use super::{batch, big_value, verdict, Item};
use crate::input;
use crate::report::{to_value, Failure, Output};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Value};
use trop_morse::compose::IndexedPointSet;
use trop_morse::exact::format_rational;
use trop_morse::torus::{bohr_sommerfeld_count, determinant, lmd, verify_hesse_rr};

/// Intersection sets up to this size are listed in the report.
const LIST_LIMIT: u64 = 4096;

fn big_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

pub fn check(files: &[String], fixtures: &[String]) -> Result<Output, Failure> {
    let inputs = input::tori(files, fixtures)?;
    batch(&inputs, |input| {
        let d = &input.value;
        let report = lmd(d)?;
        let hesse = verify_hesse_rr(d)?;
        let count_ok = report.count.is_none_or(|c| i128::from(c) == i128::from(report.chern_volume).abs());
        let ok = hesse.ok && count_ok;

        let points = match report.count {
            Some(c) if c <= LIST_LIMIT => Some(IndexedPointSet::from_torus(d)?),
            _ => None,
        };
        let mut text = format!("{}\n  M = {:?}\n", input.source, d.matrix());
        match (report.count, report.index) {
            (Some(count), Some(index)) => text.push_str(&format!(
                "  det M {}  intersection points {}  index {}  LMD = {}\n",
                report.chern_volume, count, index, report.lmd
            )),
            _ => text.push_str("  degenerate (det M = 0): LMD = 0\n"),
        }
        text.push_str(&format!(
            "  euler {} = det M {}: {}\n",
            hesse.lhs,
            hesse.rhs,
            verdict(ok)
        ));

        let shift: Vec<String> = d.shift().iter().map(format_rational).collect();
        let mut value = to_value(&report);
        let map = value.as_object_mut().expect("report is an object");
        map.insert("source".into(), Value::from(input.source.clone()));
        map.insert("n".into(), Value::from(d.n()));
        map.insert("matrix".into(), to_value(&d.matrix()));
        map.insert("shift".into(), to_value(&shift));
        map.insert("hesse".into(), to_value(&hesse));
        map.insert("points_listed".into(), Value::from(points.is_some()));
        if let Some(points) = &points {
            map.insert("points".into(), to_value(&points.points()));
        }
        map.insert("ok".into(), Value::from(ok));
        Ok(Item { value, text, ok })
    })
}

pub fn bs_count(files: &[String], fixtures: &[String]) -> Result<Output, Failure> {
    let inputs = input::lattices(files, fixtures)?;
    batch(&inputs, |input| {
        let l = &input.value;
        let count = bohr_sommerfeld_count(l)?;
        let abs_det = determinant(&big_rows(l.matrix())).abs();
        let ok = count == abs_det;
        let text = format!(
            "{}\n  L = {:?}\n  Bohr-Sommerfeld points {}  |det L| {}: {}\n",
            input.source,
            l.matrix(),
            count,
            abs_det,
            verdict(ok)
        );
        let value = json!({
            "source": input.source,
            "n": l.n(),
            "lattice": l.matrix(),
            "count": big_value(&count),
            "abs_det": big_value(&abs_det),
            "ok": ok,
        });
        Ok(Item { value, text, ok })
    })
}
