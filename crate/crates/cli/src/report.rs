use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use trop_morse::compose::ComposeError;
use trop_morse::curve::CurveError;
use trop_morse::fixtures::FixtureError;
use trop_morse::toric::ToricError;
use trop_morse::torus::TorusError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_MISMATCH: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

/// An error that ends the run with a non-zero exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self { code: EXIT_VALIDATION, message: message.into() }
    }

    /// Prefixes the message with the input it came from.
    pub fn within(self, source: &str) -> Self {
        Self { code: self.code, message: format!("{source}: {}", self.message) }
    }
}

impl From<CurveError> for Failure {
    fn from(e: CurveError) -> Self {
        let code = match e {
            CurveError::Parse(_) => EXIT_INPUT,
            _ => EXIT_VALIDATION,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<TorusError> for Failure {
    fn from(e: TorusError) -> Self {
        let code = match e {
            TorusError::Parse(_) | TorusError::Schema(_) => EXIT_INPUT,
            _ => EXIT_VALIDATION,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<ToricError> for Failure {
    fn from(e: ToricError) -> Self {
        let code = match e {
            ToricError::Parse(_) | ToricError::Schema(_) => EXIT_INPUT,
            _ => EXIT_VALIDATION,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<FixtureError> for Failure {
    fn from(e: FixtureError) -> Self {
        Self::input(e.to_string())
    }
}

impl From<ComposeError> for Failure {
    fn from(e: ComposeError) -> Self {
        match e {
            ComposeError::Curve(e) => e.into(),
            ComposeError::Torus(e) => e.into(),
            ComposeError::Toric(e) => e.into(),
            ComposeError::ZeroDegree => Self::validation(e.to_string()),
            _ => Self::input(e.to_string()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub source: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(source: impl Into<String>, bytes: &[u8]) -> Self {
        Self { source: source.into(), sha256: hex::encode(Sha256::digest(bytes)) }
    }
}

/// A finished run: the JSON results and a human-readable rendering.
#[derive(Debug, Default)]
pub struct Output {
    pub inputs: Vec<InputDigest>,
    pub results: Vec<Value>,
    pub ok: bool,
    pub text: String,
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: Vec<String>,
    inputs: &'a [InputDigest],
    results: &'a [Value],
    ok: bool,
}

/// Canonical JSON of any serializable value: object keys sorted.
pub fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}

impl Output {
    /// Prints the report and returns the exit code.
    pub fn emit(&self, command: Vec<String>, json: bool, quiet: bool) -> u8 {
        if !quiet {
            if json {
                let report = RunReport { command, inputs: &self.inputs, results: &self.results, ok: self.ok };
                println!("{}", serde_json::to_string_pretty(&to_value(&report)).expect("json"));
            } else {
                print!("{}", self.text);
                println!("{}", if self.ok { "ok" } else { "FAILED" });
            }
        }
        if self.ok {
            EXIT_OK
        } else {
            EXIT_MISMATCH
        }
    }
}
