//! Small integer helpers for prime powers and unit groups.

use num_integer::Integer;

/// Returns `(p, k)` with `n = p^k` for a prime `p`, or `None`. `n = 1` gives `(1, 0)`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n == 0 {
        return None;
    }
    if n == 1 {
        return Some((1, 0));
    }
    let mut p = 2;
    while p * p <= n && n % p != 0 {
        p += 1;
    }
    if n % p != 0 {
        p = n;
    }
    let mut m = n;
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Euler's totient of a prime power (or of 1).
pub fn phi_prime_power(n: u64) -> u64 {
    match prime_power(n) {
        Some((_, 0)) => 1,
        Some((p, _)) => n / p * (p - 1),
        None => panic!("phi_prime_power called with {n}"),
    }
}

/// `log_p(n)` for an exact power of `p`.
pub fn log_p(n: u64, p: u64) -> Option<u32> {
    let mut m = n;
    let mut k = 0;
    while m > 1 {
        if m % p != 0 {
            return None;
        }
        m /= p;
        k += 1;
    }
    (m == 1).then_some(k)
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Multiplicative order of `a` modulo `m` (requires `gcd(a, m) = 1`).
pub fn mult_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = x * a % m;
        k += 1;
    }
    k
}

/// Smallest generator of the cyclic group `(Z/p^k)^*` for odd `p`.
pub fn primitive_root(n: u64) -> u64 {
    if n <= 2 {
        return 1;
    }
    let phi = phi_prime_power(n);
    (2..n)
        .find(|&g| g.gcd(&n) == 1 && mult_order(g, n) == phi)
        .expect("odd prime powers have primitive roots")
}

/// Smallest positive quadratic non-residue modulo the odd prime `p`.
pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&a| pow_mod(a, (p - 1) / 2, p) == p - 1)
        .expect("odd primes have non-residues")
}

/// Modular inverse for coprime arguments.
pub fn inv_mod(a: u64, m: u64) -> u64 {
    let e = (a as i64).extended_gcd(&(m as i64));
    assert_eq!(e.gcd, 1, "inv_mod of non-unit");
    e.x.rem_euclid(m as i64) as u64
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
