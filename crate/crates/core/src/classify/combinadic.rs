//! Colexicographic ranking of k-subsets of `{0, ..., n-1}` packed in a u64.
//!
//! Colex order is the numeric order of the bit masks, so consecutive ranks are
//! one [`next_combination`] step apart and a rank range can be walked from
//! its unranked start.

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
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

/// Rank of a subset mask: `sum_i C(c_i, i + 1)` over its elements `c_0 < c_1 < ...`.
pub fn rank(mask: u64) -> u64 {
    let mut w = mask;
    let mut i = 0;
    let mut r = 0;
    while w != 0 {
        let c = w.trailing_zeros() as u64;
        i += 1;
        r += binomial(c, i);
        w &= w - 1;
    }
    r
}

/// The k-subset of `{0..n}` with the given colex rank.
pub fn unrank(mut r: u64, n: u32, k: u32) -> u64 {
    debug_assert!(r < binomial(n as u64, k as u64));
    let mut mask = 0u64;
    let mut top = n as u64;
    for i in (1..=k as u64).rev() {
        // largest c < top with C(c, i) <= r
        let mut c = top - 1;
        while binomial(c, i) > r {
            c -= 1;
        }
        mask |= 1 << c;
        r -= binomial(c, i);
        top = c;
    }
    mask
}

/// Next mask with the same popcount (Gosper's hack).
#[inline]
pub fn next_combination(mask: u64) -> u64 {
    let low = mask & mask.wrapping_neg();
    let ripple = mask.wrapping_add(low);
    ripple | (((mask ^ ripple) >> 2) / low)
}
