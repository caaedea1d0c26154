//! Fixed-size subset enumeration under a subset-count cap.

use std::ops::ControlFlow;

use crate::error::{Error, Result};

/// Default bound on the number of subsets a single enumeration level may visit.
pub const DEFAULT_SUBSET_CAP: u64 = 10_000_000;

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Fails with [`Error::Limit`] when `C(n, k)` exceeds `cap`.
pub fn check_cap(n: usize, k: usize, cap: u64) -> Result<()> {
    let subsets = binomial(n, k);
    if subsets > cap {
        return Err(Error::Limit { n, k, subsets, cap });
    }
    Ok(())
}

/// Visits every `k`-subset of `0..n` in lexicographic order. The callback
/// can stop the walk early by returning `ControlFlow::Break`.
pub fn for_each_combination<B>(
    n: usize,
    k: usize,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if k > n {
        return ControlFlow::Continue(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx)?;
        // rightmost position that can still advance
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < n - k + p) else {
            return ControlFlow::Continue(());
        };
        idx[pos] += 1;
        for p in pos + 1..k {
            idx[p] = idx[p - 1] + 1;
        }
    }
}
