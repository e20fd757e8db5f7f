use crate::error::{Error, Result};

/// Upper bound on the number of candidates an exhaustive enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(10_000_000);

    /// Refuses up front when the candidate space is known to be too large.
    pub fn admit(self, what: &str, needed: u128) -> Result<()> {
        if needed > self.0 as u128 {
            return Err(Error::Budget {
                what: what.to_string(),
                needed: needed.to_string(),
                budget: self.0,
            });
        }
        Ok(())
    }

    pub(crate) fn meter(self, what: &str) -> Meter {
        Meter {
            limit: self.0,
            used: 0,
            what: what.to_string(),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}

/// Counts visited search nodes for enumerations whose size is only known
/// after pruning.
pub(crate) struct Meter {
    limit: u64,
    used: u64,
    what: String,
}

impl Meter {
    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::Budget {
                what: self.what.clone(),
                needed: format!("more than {}", self.limit),
                budget: self.limit,
            });
        }
        Ok(())
    }
}

/// `base^exp` without overflow, saturating at `u128::MAX`.
pub(crate) fn power(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
