use super::{batch, verdict, Item};
use crate::input;
use crate::report::{to_value, Failure, Output};
use serde_json::{json, Value};
use std::fmt::Write;
use trop_morse::exact::format_rational;
use trop_morse::toric::{delzant_check, ehrhart as ehrhart_polynomial, potential, toric_lmd, verify_reciprocity};

pub fn ehrhart(files: &[String], fixtures: &[String], kmax: i64) -> Result<Output, Failure> {
    if kmax < 0 {
        return Err(Failure::input("--kmax must be non-negative"));
    }
    let inputs = input::polytopes(files, fixtures)?;
    batch(&inputs, |input| {
        let p = &input.value;
        let poly = ehrhart_polynomial(p)?;
        let mut counts = Vec::new();
        let mut text = format!("{}\n  Ehr(k) coefficients (constant first): {}\n", input.source, poly.to_strings().join(", "));
        let mut ok = true;
        for k in 0..=kmax {
            let direct = p.lattice_points(k)?.len();
            let value = poly.eval(k);
            let row_ok = value == trop_morse::exact::int(direct as i64);
            ok &= row_ok;
            writeln!(text, "  k={k}: direct {direct}  Ehr {}  {}", format_rational(&value), verdict(row_ok)).unwrap();
            counts.push(json!({ "k": k, "direct": direct, "polynomial": format_rational(&value), "ok": row_ok }));
        }
        let reciprocity = if p.is_full_dimensional() {
            let r = verify_reciprocity(p, kmax)?;
            for row in &r.rows {
                writeln!(
                    text,
                    "  k={}: (-1)^n Ehr(-k) {}  interior {}  {}",
                    row.k,
                    row.signed_value,
                    row.interior_count,
                    verdict(row.ok)
                )
                .unwrap();
            }
            ok &= r.ok;
            to_value(&r)
        } else {
            writeln!(text, "  not full-dimensional: reciprocity skipped").unwrap();
            Value::Null
        };
        let value = json!({
            "source": input.source,
            "n": p.n(),
            "dim": p.dim(),
            "coefficients": poly.to_strings(),
            "counts": counts,
            "reciprocity": reciprocity,
            "ok": ok,
        });
        Ok(Item { value, text, ok })
    })
}

pub fn lmd(files: &[String], fixtures: &[String]) -> Result<Output, Failure> {
    let inputs = input::polytopes(files, fixtures)?;
    batch(&inputs, |input| {
        let p = &input.value;
        let n = p.n() as i64;
        let plus = toric_lmd(p, 1)?;
        let minus = toric_lmd(p, -1)?;
        let delzant = delzant_check(p)?;
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let plus_ok = plus.euler == plus.lattice_count as i64 && plus.lmd.support().all(|d| d == 0);
        let minus_ok = minus.euler == sign * minus.interior_count as i64 && minus.lmd.support().all(|d| d == n);
        let ok = plus_ok && minus_ok;
        // barycentre of the lattice points, the image of the origin
        let centre = potential(p)?.moment_map(&vec![0.0; p.n()]);

        let text = format!(
            "{}\n  +s: LMD = {}  euler {} = #lattice points {}: {}\n  -s: LMD = {}  euler {} = (-1)^n #interior {}: {}\n  boundary points {}  Delzant {}\n",
            input.source,
            plus.lmd,
            plus.euler,
            plus.lattice_count,
            verdict(plus_ok),
            minus.lmd,
            minus.euler,
            minus.interior_count,
            verdict(minus_ok),
            plus.boundary_count,
            delzant
        );
        let value = json!({
            "source": input.source,
            "n": p.n(),
            "plus": plus,
            "minus": minus,
            "delzant": delzant,
            "moment_map_at_origin_approx": centre,
            "ok": ok,
        });
        Ok(Item { value, text, ok })
    })
}
