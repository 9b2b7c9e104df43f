use std::sync::RwLock;

use num_bigint::BigUint;

/// Growable, shared table of exact factorials.
pub struct FactorialTable {
    table: RwLock<Vec<BigUint>>,
}

static GLOBAL: FactorialTable = FactorialTable::new();

impl FactorialTable {
    pub const fn new() -> Self {
        Self {
            table: RwLock::new(Vec::new()),
        }
    }

    /// Process-wide table used by the closed-form counts.
    pub fn global() -> &'static FactorialTable {
        &GLOBAL
    }

    fn ensure(&self, n: usize) {
        if self.table.read().expect("factorial table poisoned").len() > n {
            return;
        }
        let mut table = self.table.write().expect("factorial table poisoned");
        if table.is_empty() {
            table.push(BigUint::from(1u32));
        }
        while table.len() <= n {
            let k = table.len();
            let next = &table[k - 1] * BigUint::from(k);
            table.push(next);
        }
    }

    /// Runs `f` with read access to a table holding at least `0!..=max!`.
    pub fn with<R>(&self, max: u64, f: impl FnOnce(&[BigUint]) -> R) -> R {
        self.ensure(max as usize);
        let table = self.table.read().expect("factorial table poisoned");
        f(&table)
    }

    pub fn get(&self, n: u64) -> BigUint {
        self.with(n, |t| t[n as usize].clone())
    }
}

impl Default for FactorialTable {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorials() {
        let t = FactorialTable::new();
        assert_eq!(t.get(0), BigUint::from(1u32));
        assert_eq!(t.get(5), BigUint::from(120u32));
        assert_eq!(t.get(20), BigUint::from(2_432_902_008_176_640_000u64));
        assert_eq!(t.get(3), BigUint::from(6u32));
    }
}
