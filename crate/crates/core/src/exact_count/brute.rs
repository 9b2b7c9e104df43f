//! Exhaustive enumeration oracle.

use num_bigint::BigUint;

use super::query::{start_heights, BigCount, StarQuery};
use crate::error::{Error, Result};

/// Default cap on `p * m` for exhaustive enumeration.
pub const DEFAULT_BRUTE_FORCE_BUDGET: u64 = 24;

/// Counts path families satisfying `q` by depth-first enumeration of every
/// step assignment, using the default budget.
pub fn enumerate_brute_force(q: &StarQuery) -> Result<BigCount> {
    enumerate_brute_force_with_budget(q, DEFAULT_BRUTE_FORCE_BUDGET)
}

pub fn enumerate_brute_force_with_budget(q: &StarQuery, budget: u64) -> Result<BigCount> {
    let work = q.p() as u64 * q.m();
    if work > budget {
        return Err(Error::BudgetExceeded { work, budget });
    }
    let mut count: u64 = 0;
    visit_families(q.p(), q.m(), q.wall(), Some(q.endpoints()), &mut |_| count += 1);
    Ok(BigCount::new(BigUint::from(count)))
}

/// Calls `visit` with the flattened `(m+1) x p` position array of every
/// non-touching family of length `m` started at `0, 2, ..., 2p-2` (and ending
/// at `end` when given).
pub(crate) fn visit_families(
    p: usize,
    m: u64,
    wall: bool,
    end: Option<&[i64]>,
    visit: &mut dyn FnMut(&[i64]),
) {
    let mut positions = start_heights(p);
    positions.reserve(p * m as usize);
    dfs(p, m, wall, end, 0, &mut positions, visit);
}

fn dfs(
    p: usize,
    m: u64,
    wall: bool,
    end: Option<&[i64]>,
    time: u64,
    positions: &mut Vec<i64>,
    visit: &mut dyn FnMut(&[i64]),
) {
    if time == m {
        if end.map_or(true, |e| positions[positions.len() - p..] == *e) {
            visit(positions);
        }
        return;
    }
    let remaining = (m - time - 1) as i64;
    let base = positions.len() - p;
    for mask in 0..(1u32 << p) {
        let mut ok = true;
        for i in 0..p {
            let next = positions[base + i] + if mask >> i & 1 == 1 { 1 } else { -1 };
            if (wall && next < 0)
                || (i > 0 && next <= positions[positions.len() - 1])
                || end.is_some_and(|e| (next - e[i]).abs() > remaining)
            {
                ok = false;
                break;
            }
            positions.push(next);
        }
        if ok {
            dfs(p, m, wall, end, time + 1, positions, visit);
        }
        positions.truncate(base + p);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(p: usize, m: u64, e: &[i64], wall: bool) -> BigCount {
        enumerate_brute_force(&StarQuery::new(p, m, e.to_vec(), wall).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(brute(1, 2, &[0], true), 1);
        assert_eq!(brute(2, 2, &[0, 2], false), 3);
        assert_eq!(brute(1, 2, &[4], false), 0);
        assert_eq!(brute(1, 3, &[1], true), 2);
        assert_eq!(brute(1, 6, &[0], true), 5);
        assert_eq!(brute(1, 6, &[0], false), 20);
    }

    #[test]
    fn budget_enforced() {
        let q = StarQuery::new(3, 10, vec![0, 2, 4], false).unwrap();
        match enumerate_brute_force(&q) {
            Err(Error::BudgetExceeded { work: 30, budget: 24 }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(enumerate_brute_force_with_budget(&q, 30).is_ok());
    }

    #[test]
    fn visits_full_trajectories() {
        let mut seen = Vec::new();
        visit_families(1, 4, true, Some(&[0]), &mut |pos| seen.push(pos.to_vec()));
        seen.sort();
        assert_eq!(seen, vec![vec![0, 1, 0, 1, 0], vec![0, 1, 2, 1, 0]]);
    }
}
