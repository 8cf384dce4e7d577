use super::{big_value, single, verdict, Item};
use crate::input::{self, Operand};
use crate::report::{to_value, Failure, Output};
use serde_json::{json, Value};
use trop_morse::compose::{
    etale_cyclic, etale_disjoint, kunneth, verify_etale, verify_product_rr, verify_sym, IndexedPointSet, LabelledPoint,
};
use trop_morse::torus;
use trop_morse::GradedModule;

pub fn product(left: &str, right: &str) -> Result<Output, Failure> {
    let a = input::operand(left)?;
    let b = input::operand(right)?;
    let (pa, pb) = (a.value.points()?, b.value.points()?);
    let product = kunneth(&pa, &pb);
    let expected = pa.euler() * pb.euler();
    let mut ok = product.euler() == expected;
    let mut text = format!(
        "{} x {}\n  points {} x {} = {}  euler {} x {} = {}: {}\n",
        a.source,
        b.source,
        pa.len(),
        pb.len(),
        product.len(),
        pa.euler(),
        pb.euler(),
        product.euler(),
        verdict(ok)
    );

    let mut value = json!({
        "left": { "source": a.source, "euler": pa.euler(), "points": pa.len() },
        "right": { "source": b.source, "euler": pb.euler(), "points": pb.len() },
        "expected": expected,
        "multiplicative": ok,
    });
    let map = value.as_object_mut().expect("object");
    match (&a.value, &b.value) {
        (Operand::Torus(da), Operand::Torus(db)) => {
            let direct = torus::lmd(&da.block_sum(db))?;
            let oracle_ok = direct.lmd == product.total() && direct.euler == product.euler();
            ok &= oracle_ok;
            text.push_str(&format!(
                "  block-diagonal torus: LMD = {}  product LMD = {}: {}\n",
                direct.lmd,
                product.total(),
                verdict(oracle_ok)
            ));
            map.insert("torus_oracle".into(), json!({ "lmd": direct.lmd, "euler": direct.euler, "ok": oracle_ok }));
        }
        (Operand::Curve(c1, d1), Operand::Curve(c2, d2)) => {
            let check = verify_product_rr(c1, d1, c2, d2)?;
            ok &= check.ok;
            text.push_str(&format!(
                "  (deg + chi_top) factors {} x {}: {}\n",
                check.factors[0],
                check.factors[1],
                verdict(check.ok)
            ));
            map.insert("curve_identity".into(), to_value(&check));
        }
        _ => {}
    }
    map.insert("lmd".into(), to_value(&product.total()));
    map.insert("euler".into(), Value::from(product.euler()));
    map.insert("points".into(), to_value(&product.points()));
    map.insert("ok".into(), Value::from(ok));
    let mut digests = a.digests;
    digests.extend(b.digests);
    Ok(single(digests, Item { value, text, ok }))
}

pub fn cover(base: &str, degree: usize, cyclic: bool) -> Result<Output, Failure> {
    let b = input::operand(base)?;
    let base_points = b.value.points()?;
    let cover = if cyclic {
        match &b.value {
            Operand::Curve(c, d) => etale_cyclic(c, d, degree)?,
            _ => return Err(Failure::validation("cyclic covers need a curve operand")),
        }
    } else {
        etale_disjoint(&base_points, degree)?
    };
    let check = verify_etale(&base_points, &cover, degree);
    let mode = if cyclic { "cyclic" } else { "disjoint" };
    let text = format!(
        "{} ({mode} cover of degree {degree})\n  euler {} -> {} = {} x {}: {}\n",
        b.source,
        check.base_euler,
        check.cover_euler,
        degree,
        check.base_euler,
        verdict(check.ok)
    );
    let value = json!({
        "source": b.source,
        "mode": mode,
        "degree": degree,
        "base_euler": check.base_euler,
        "cover_euler": check.cover_euler,
        "lmd": cover.total(),
        "euler": cover.euler(),
        "points": cover.points(),
        "ok": check.ok,
    });
    Ok(single(b.digests, Item { value, text, ok: check.ok }))
}

/// `|chi|` points carrying `Z` in degree 0 (or 1 when `chi < 0`).
fn points_of_euler(chi: i64) -> IndexedPointSet {
    let degree = i64::from(chi < 0);
    let points = (0..chi.unsigned_abs())
        .map(|i| LabelledPoint { label: format!("p{i}"), lmd: GradedModule::free(degree, 1) })
        .collect();
    IndexedPointSet::new(points).expect("labels are distinct")
}

pub fn sym(operand: Option<&str>, chi: Option<i64>, n: u64) -> Result<Output, Failure> {
    let (source, digests, points) = match (operand, chi) {
        (Some(spec), _) => {
            let loaded = input::operand(spec)?;
            let points = loaded.value.points()?;
            (loaded.source, loaded.digests, points)
        }
        (None, Some(chi)) => {
            if chi.unsigned_abs() > 1 << 16 {
                return Err(Failure::input("--chi is limited to 65536 in absolute value"));
            }
            (format!("chi={chi}"), Vec::new(), points_of_euler(chi))
        }
        (None, None) => return Err(Failure::input("give a point set operand or --chi")),
    };
    if n > 1 << 12 {
        return Err(Failure::input("--n is limited to 4096"));
    }
    let check = verify_sym(&points, n);
    let text = format!(
        "{source}\n  euler {}  n {}  C(n + chi - 1, n) = {}  series oracle {}: {}\n",
        check.euler,
        n,
        check.formula,
        check.oracle,
        verdict(check.ok)
    );
    let value = json!({
        "source": source,
        "euler": check.euler,
        "n": n,
        "formula": big_value(&check.formula),
        "oracle": big_value(&check.oracle),
        "ok": check.ok,
    });
    Ok(single(digests, Item { value, text, ok: check.ok }))
}
