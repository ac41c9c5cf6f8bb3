use std::fmt;
use std::path::Path;

use orderlab_core::catalog;
use orderlab_core::json::{parse_instance_str, ParseError};
use orderlab_core::{CoreError, Instance, SearchBudget};
use serde_json::Value;

use crate::args::Common;

pub const BUDGET_ENV: &str = "ORDERLAB_BUDGET";

/// A command failure with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    /// Exit 2: the input does not parse or validate.
    pub fn input(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        Failure::input(format!("parse error {e}"))
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Failure {
        Failure::input(e.to_string())
    }
}

/// Defaults, then the instance's own budget, then `ORDERLAB_BUDGET`, then flags.
pub fn budget(instance: Option<&Instance>, c: &Common) -> Result<SearchBudget, Failure> {
    let mut b = instance.map_or_else(SearchBudget::default, |m| m.budget);
    if let Ok(spec) = std::env::var(BUDGET_ENV) {
        b = b.apply_overrides(&spec).map_err(|e| Failure::input(format!("{BUDGET_ENV}: {e}")))?;
    }
    if let Some(v) = c.sample_box {
        b.sample_box = v;
    }
    if let Some(v) = c.nmax {
        b.n_max = v;
    }
    if let Some(v) = c.coeff_bound {
        b.coeff_bound = v;
    }
    if let Some(v) = c.depth {
        b.chain_depth = v;
    }
    b.validate().map_err(Failure::input)?;
    Ok(b)
}

/// An instance file, or failing that a catalog entry of that name.
pub fn load(arg: &str) -> Result<Instance, Failure> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{arg}: {e}")))?;
        return parse_instance_str(&text).map_err(|e| Failure::input(format!("{arg}: parse error {e}")));
    }
    catalog::lookup(arg)
        .map(|e| e.instance)
        .ok_or_else(|| Failure::input(format!("{arg}: no such file or catalog entry")))
}

pub fn json_arg(text: &str, flag: &str) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::input(format!("--{flag}: invalid JSON: {e}")))
}
