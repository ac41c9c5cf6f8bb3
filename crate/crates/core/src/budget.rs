use std::fmt;
use std::str::FromStr;

/// Bounds for every search that can run out. Larger values only turn
/// `Unknown` answers into decided ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SearchBudget {
    pub coeff_bound: u64,
    pub n_max: u64,
    pub chain_depth: u32,
    pub sample_box: i64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { coeff_bound: 12, n_max: 24, chain_depth: 8, sample_box: 6 }
    }
}

impl SearchBudget {
    pub fn with_box(mut self, b: i64) -> Self {
        self.sample_box = b;
        self
    }

    pub fn with_n_max(mut self, n: u64) -> Self {
        self.n_max = n;
        self
    }

    pub fn with_depth(mut self, d: u32) -> Self {
        self.chain_depth = d;
        self
    }

    pub fn with_coeff_bound(mut self, c: u64) -> Self {
        self.coeff_bound = c;
        self
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.coeff_bound == 0 || self.n_max == 0 || self.chain_depth == 0 || self.sample_box <= 0 {
            return Err("all budget fields must be positive".into());
        }
        Ok(())
    }

    /// Applies `key=value` overrides separated by commas, e.g.
    /// `box=8,nmax=30`.
    pub fn apply_overrides(mut self, spec: &str) -> Result<Self, String> {
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| format!("budget override `{part}` is not key=value"))?;
            let bad = |_| format!("budget value `{v}` for `{k}` is not a positive integer");
            match k.trim() {
                "box" | "sample_box" => self.sample_box = v.trim().parse().map_err(bad)?,
                "nmax" | "n_max" => self.n_max = v.trim().parse().map_err(bad)?,
                "coeff-bound" | "coeff_bound" => self.coeff_bound = v.trim().parse().map_err(bad)?,
                "depth" | "chain_depth" => self.chain_depth = v.trim().parse().map_err(bad)?,
                other => return Err(format!("unknown budget key `{other}`")),
            }
        }
        self.validate()?;
        Ok(self)
    }

    /// Node cap for exact membership enumeration; grows with
    /// `coeff_bound` so a larger budget never loses an answer.
    pub fn node_cap(&self) -> u64 {
        200_000 * self.coeff_bound
    }
}

impl FromStr for SearchBudget {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        SearchBudget::default().apply_overrides(s)
    }
}

impl fmt::Display for SearchBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "box={},nmax={},coeff-bound={},depth={}",
            self.sample_box, self.n_max, self.coeff_bound, self.chain_depth
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        let b: SearchBudget = "box=8, nmax=30".parse().unwrap();
        assert_eq!(b.sample_box, 8);
        assert_eq!(b.n_max, 30);
        assert_eq!(b.chain_depth, 8);
        assert!("box=0".parse::<SearchBudget>().is_err());
        assert!("speed=2".parse::<SearchBudget>().is_err());
        assert_eq!(SearchBudget::default().to_string().parse::<SearchBudget>().unwrap(), SearchBudget::default());
    }
}
