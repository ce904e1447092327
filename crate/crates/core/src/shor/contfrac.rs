//! Continued-fraction recovery of the period from a measured index.

/// Convergents `p_i / q_i` of `num / den` in order.
pub fn convergents(num: u64, den: u64) -> Vec<(u64, u64)> {
    assert!(den > 0, "zero denominator");
    let mut out = Vec::new();
    // h_{-2} = 0, h_{-1} = 1, k_{-2} = 1, k_{-1} = 0
    let (mut h2, mut h1) = (0u128, 1u128);
    let (mut k2, mut k1) = (1u128, 0u128);
    let (mut a, mut b) = (num as u128, den as u128);
    while b != 0 {
        let t = a / b;
        (a, b) = (b, a % b);
        let h = t * h1 + h2;
        let k = t * k1 + k2;
        out.push((h as u64, k as u64));
        (h2, h1) = (h1, h);
        (k2, k1) = (k1, k);
    }
    out
}

/// `|c/q - num/den| <= 1/(2q)`, in exact integer arithmetic.
pub fn within_half_step(c: u64, q: u64, num: u64, den: u64) -> bool {
    let lhs = (c as i128 * den as i128 - num as i128 * q as i128).abs();
    2 * lhs <= den as i128
}

/// The convergent `c'/r` of `c/q` with `r < n` and `|c/q - c'/r| <= 1/(2q)`,
/// in lowest terms, or `None` when no convergent qualifies.
///
/// With `q > n^2` at most one fraction with denominator below `n` can sit
/// that close to `c/q`.
pub fn continued_fraction_recover(c: u64, q: u64, n: u64) -> Option<(u64, u64)> {
    convergents(c, q)
        .into_iter().rfind(|&(num, den)| den < n && within_half_step(c, q, num, den))
}
