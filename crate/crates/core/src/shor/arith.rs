//! Classical number theory used around the quantum part.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `base^exp mod modulus` by repeated squaring.
pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut result: u128 = 1;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result as u64
}

/// `y^a mod n` for `a = 0..len`, by iterated modular multiplication.
pub fn modexp_table(n: u64, y: u64, len: usize) -> Vec<u64> {
    let mut table = Vec::with_capacity(len);
    let mut v = 1 % n;
    for _ in 0..len {
        table.push(v);
        v = ((v as u128 * y as u128) % n as u128) as u64;
    }
    table
}

/// Smallest `r > 0` with `y^r = 1 (mod n)`, or `None` when `gcd(y, n) > 1`.
/// Plain brute-force loop.
pub fn find_order(n: u64, y: u64) -> Option<u64> {
    if n < 2 || gcd(y, n) != 1 {
        return None;
    }
    let y = y % n;
    let mut v = y;
    let mut r = 1;
    while v != 1 {
        v = ((v as u128 * y as u128) % n as u128) as u64;
        r += 1;
    }
    Some(r)
}

/// Trial division up to `sqrt(n)`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The unique `L` with `N^2 < 2^L <= 2 N^2`.
pub fn choose_register_size(n: u64) -> u32 {
    let n2 = n as u128 * n as u128;
    // 2^L is the smallest power of two strictly above n^2.
    let l = 128 - n2.leading_zeros();
    debug_assert!((1u128 << l) > n2 && (1u128 << l) <= 2 * n2);
    l
}

/// `(M, d)` with `r = 2^M d` and `d` odd.
pub fn odd_part(r: u64) -> (u32, u64) {
    assert!(r > 0, "odd part of zero");
    let m = r.trailing_zeros();
    (m, r >> m)
}
