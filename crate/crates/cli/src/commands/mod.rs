pub mod compose;
pub mod curve;
pub mod toric;
pub mod torus;

use crate::input::Loaded;
use crate::report::{Failure, InputDigest, Output};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::Value;

/// Result of one input: its JSON, its text lines and its verdict.
pub struct Item {
    pub value: Value,
    pub text: String,
    pub ok: bool,
}

/// Runs `f` on every input in parallel; results keep input order and the
/// first failure in input order wins.
pub fn batch<T: Sync>(inputs: &[Loaded<T>], f: impl Fn(&Loaded<T>) -> Result<Item, Failure> + Sync) -> Result<Output, Failure> {
    let items: Vec<Result<Item, Failure>> =
        inputs.par_iter().map(|input| f(input).map_err(|e| e.within(&input.source))).collect();
    let mut output = Output { ok: true, ..Output::default() };
    for (input, item) in inputs.iter().zip(items) {
        let item = item?;
        output.inputs.extend(input.digests.iter().cloned());
        output.ok &= item.ok;
        output.text.push_str(&item.text);
        output.results.push(item.value);
    }
    Ok(output)
}

pub fn single(digests: Vec<InputDigest>, item: Item) -> Output {
    Output { inputs: digests, results: vec![item.value], ok: item.ok, text: item.text }
}

/// A JSON number when it fits in 64 bits, otherwise a decimal string.
pub fn big_value(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(small) => Value::from(small),
        Err(_) => Value::from(v.to_string()),
    }
}

pub fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}
