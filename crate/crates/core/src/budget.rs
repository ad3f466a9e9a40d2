use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Caps on the work an operation may attempt before refusing with
/// [`Error::BudgetExceeded`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest search space (coefficient vectors, rules, walks) to enumerate.
    pub max_enumeration: u64,
    /// Largest number of hypercube entries `N^k` to visit or materialize.
    pub max_entries: u64,
    /// Largest bit length of a computed count.
    pub max_bigint_bits: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_enumeration: 1 << 24,
            max_entries: 1 << 24,
            max_bigint_bits: 1 << 20,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_enumeration: u64::MAX,
            max_entries: u64::MAX,
            max_bigint_bits: u64::MAX,
        }
    }

    pub fn check_enumeration(&self, what: &'static str, size: u128) -> Result<()> {
        check(what, size, self.max_enumeration)
    }

    pub fn check_entries(&self, what: &'static str, size: u128) -> Result<()> {
        check(what, size, self.max_entries)
    }

    pub fn check_bits(&self, what: &'static str, bits: u128) -> Result<()> {
        check(what, bits, self.max_bigint_bits)
    }

    pub fn check_big(&self, what: &'static str, value: &BigUint) -> Result<()> {
        self.check_bits(what, u128::from(value.bits()))
    }
}

fn check(what: &'static str, required: u128, limit: u64) -> Result<()> {
    if required > u128::from(limit) {
        Err(Error::BudgetExceeded {
            what,
            required,
            limit,
        })
    } else {
        Ok(())
    }
}

/// `base^exp`, saturating at `u128::MAX`.
pub fn saturating_pow(base: u64, exp: u64) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(u128::from(base));
        if acc == u128::MAX || acc == 0 {
            break;
        }
    }
    acc
}
