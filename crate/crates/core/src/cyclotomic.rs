//! Exact arithmetic in the cyclotomic fields `Q(zeta_n)` for prime powers `n = p^k`.
//!
//! Values are stored in the power basis `1, zeta_n, ..., zeta_n^(phi(n)-1)` at the
//! smallest order `n` whose field contains them, so equal values have equal
//! representations.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::arith::{phi_prime_power, prime_power, primitive_root};
use crate::error::{Error, Result};

/// Largest supported exponent `k` in `n = p^k`.
pub const MAX_EXPONENT: u32 = 5;

/// An element of `Q(zeta_n)`, `n` a prime power.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycNumber {
    n: u64,
    coeffs: Vec<Rational64>,
}

/// Parameters of `n = p^k` used by the reduction routines.
#[derive(Clone, Copy, Debug)]
struct Modulus {
    n: u64,
    p: u64,
    phi: u64,
    /// `n / p`, the stride of the cyclotomic polynomial's exponents.
    step: u64,
}

impl Modulus {
    fn new(n: u64) -> Result<Self> {
        let (p, k) = prime_power(n).ok_or_else(|| Error::Usage(format!("{n} is not a prime power")))?;
        if k > MAX_EXPONENT {
            return Err(Error::Capacity(format!("cyclotomic order {n} exceeds p^{MAX_EXPONENT}")));
        }
        if n == 1 {
            return Ok(Modulus { n: 1, p: 1, phi: 1, step: 1 });
        }
        if p == 2 {
            return Err(Error::Usage("only odd primes are supported".into()));
        }
        Ok(Modulus { n, p, phi: phi_prime_power(n), step: n / p })
    }

    /// Folds a length-`n` exponent vector into the power basis using
    /// `zeta^(phi + r) = -sum_{j < p-1} zeta^(r + j n/p)`.
    fn reduce(&self, mut v: Vec<Rational64>) -> Vec<Rational64> {
        if self.n == 1 {
            return vec![v.iter().copied().fold(Rational64::zero(), |a, b| a + b)];
        }
        for m in self.phi..self.n {
            let c = v[m as usize];
            if c.is_zero() {
                continue;
            }
            let r = m - self.phi;
            for j in 0..self.p - 1 {
                v[(r + j * self.step) as usize] -= c;
            }
        }
        v.truncate(self.phi as usize);
        v
    }
}

impl CycNumber {
    pub fn zero() -> Self {
        CycNumber { n: 1, coeffs: vec![Rational64::zero()] }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational64::one())
    }

    pub fn from_integer(a: i64) -> Self {
        Self::from_rational(Rational64::from_integer(a))
    }

    pub fn from_rational(a: Rational64) -> Self {
        CycNumber { n: 1, coeffs: vec![a] }
    }

    /// `zeta_n^e`, canonicalized.
    pub fn root_of_unity(n: u64, e: i64) -> Result<Self> {
        Self::from_exponent_terms(n, &[(e, Rational64::one())])
    }

    /// `sum c * zeta_n^e` over the given terms; exponents are taken modulo `n`.
    pub fn from_exponent_terms(n: u64, terms: &[(i64, Rational64)]) -> Result<Self> {
        let m = Modulus::new(n)?;
        let mut v = vec![Rational64::zero(); m.n as usize];
        for &(e, c) in terms {
            v[e.rem_euclid(m.n as i64) as usize] += c;
        }
        Ok(Self::canonical(m.n, m.reduce(v)))
    }

    /// `sum counts[e] * zeta_n^e` for an integer count vector of length `n`.
    pub fn from_root_counts(n: u64, counts: &[i64]) -> Result<Self> {
        let m = Modulus::new(n)?;
        if counts.len() as u64 != m.n {
            return Err(Error::Usage(format!("expected {} root counts, got {}", m.n, counts.len())));
        }
        let v = counts.iter().map(|&c| Rational64::from_integer(c)).collect();
        Ok(Self::canonical(m.n, m.reduce(v)))
    }

    /// Builds a value from power-basis coefficients at order `n`.
    pub fn from_coeffs(n: u64, coeffs: Vec<Rational64>) -> Result<Self> {
        let m = Modulus::new(n)?;
        if coeffs.len() as u64 != m.phi {
            return Err(Error::Usage(format!("order {n} needs {} coefficients", m.phi)));
        }
        Ok(Self::canonical(n, coeffs))
    }

    /// Demotes to the smallest order whose field contains the value.
    fn canonical(mut n: u64, mut coeffs: Vec<Rational64>) -> Self {
        loop {
            if n == 1 {
                return CycNumber { n, coeffs };
            }
            let (p, k) = prime_power(n).expect("prime power");
            if k == 1 {
                if coeffs[1..].iter().all(|c| c.is_zero()) {
                    coeffs.truncate(1);
                    n = 1;
                    continue;
                }
                return CycNumber { n, coeffs };
            }
            let p = p as usize;
            if coeffs.iter().enumerate().any(|(i, c)| i % p != 0 && !c.is_zero()) {
                return CycNumber { n, coeffs };
            }
            coeffs = coeffs.into_iter().step_by(p).collect();
            n /= p as u64;
        }
    }

    /// The order `n` of the smallest field `Q(zeta_n)` containing the value.
    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[Rational64] {
        &self.coeffs
    }

    /// Nonzero power-basis terms `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (u64, Rational64)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as u64, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.n == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    pub fn to_rational(&self) -> Option<Rational64> {
        self.is_rational().then(|| self.coeffs[0])
    }

    /// Power-basis coefficients at a multiple `n` of the current order.
    pub fn coeffs_at(&self, n: u64) -> Result<Vec<Rational64>> {
        let target = Modulus::new(n)?;
        if n % self.n != 0 {
            return Err(Error::Usage(format!("cannot promote order {} to {n}", self.n)));
        }
        let mut out = vec![Rational64::zero(); target.phi as usize];
        let stride = (n / self.n) as usize;
        for (i, c) in self.terms() {
            out[i as usize * stride] = c;
        }
        Ok(out)
    }

    fn common_order(&self, other: &Self) -> Result<u64> {
        let (a, b) = (self.n.max(other.n), self.n.min(other.n));
        if a % b != 0 {
            return Err(Error::Usage(format!("orders {} and {} lie over different primes", self.n, other.n)));
        }
        Ok(a)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let n = self.common_order(other)?;
        let mut a = self.coeffs_at(n)?;
        for (x, y) in a.iter_mut().zip(other.coeffs_at(n)?) {
            *x += y;
        }
        Ok(Self::canonical(n, a))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let n = self.common_order(other)?;
        let m = Modulus::new(n)?;
        let sa = n / self.n;
        let sb = n / other.n;
        let mut v = vec![Rational64::zero(); n as usize];
        for (i, c) in self.terms() {
            for (j, d) in other.terms() {
                v[((i * sa + j * sb) % n) as usize] += c * d;
            }
        }
        Ok(Self::canonical(n, m.reduce(v)))
    }

    pub fn scale(&self, r: Rational64) -> Self {
        Self::canonical(self.n, self.coeffs.iter().map(|c| c * r).collect())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = CycNumber::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The Galois automorphism `zeta_n -> zeta_n^t` applied to the value.
    pub fn conj_by(&self, t: i64) -> Result<Self> {
        let n = self.n;
        let t = t.rem_euclid(n.max(1) as i64) as u64;
        if t.gcd(&n) != 1 && n > 1 {
            return Err(Error::Usage(format!("{t} is not a unit modulo {n}")));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let m = Modulus::new(n)?;
        let mut v = vec![Rational64::zero(); n as usize];
        for (i, c) in self.terms() {
            v[(i * t % n) as usize] += c;
        }
        Ok(Self::canonical(n, m.reduce(v)))
    }

    /// Complex conjugate, i.e. `conj_by(-1)`.
    pub fn conj(&self) -> Self {
        self.conj_by(-1).expect("-1 is a unit")
    }

    /// Absolute trace `Tr_{Q(zeta_n)/Q}` at the value's own order `n`.
    pub fn trace(&self) -> Rational64 {
        let n = self.n;
        if n == 1 {
            return self.coeffs[0];
        }
        let (p, _) = prime_power(n).expect("prime power");
        let phi = phi_prime_power(n) as i64;
        let step = n / p;
        self.terms().fold(Rational64::zero(), |acc, (i, c)| {
            let t = if i == 0 {
                phi
            } else if i % step == 0 {
                -(step as i64)
            } else {
                0
            };
            acc + c * Rational64::from_integer(t)
        })
    }

    /// `Tr_{Q(zeta_d)/Q}` for a value lying in `Q(zeta_d)`.
    pub fn trace_from(&self, d: u64) -> Result<Rational64> {
        if d % self.n != 0 {
            return Err(Error::Usage(format!("value of order {} is not in Q(zeta_{d})", self.n)));
        }
        let ratio = phi_prime_power(d) / phi_prime_power(self.n);
        Ok(self.trace() * Rational64::from_integer(ratio as i64))
    }

    /// Order of the value as a root of unity of prime-power order, or `None` if it
    /// is not such a root of unity.
    pub fn detect_order(&self) -> Option<u64> {
        let n = self.n;
        if self.pow(n) != CycNumber::one() {
            return None;
        }
        if n == 1 {
            return Some(1);
        }
        let (p, _) = prime_power(n).expect("prime power");
        let mut m = 1;
        while self.pow(m) != CycNumber::one() {
            m *= p;
        }
        Some(m)
    }

    /// Text form `(n; c0, c1, ...)` with coefficients as `num/den`.
    pub fn to_text(&self) -> String {
        let cs: Vec<String> = self.coeffs.iter().map(|c| format!("{}/{}", c.numer(), c.denom())).collect();
        format!("({}; {})", self.n, cs.join(", "))
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed cyclotomic number {s:?}"));
        let body = s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (n, rest) = body.split_once(';').ok_or_else(bad)?;
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        let coeffs = rest
            .split(',')
            .map(|c| parse_rational(c.trim()).ok_or_else(bad))
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(n, coeffs)
    }
}

pub fn parse_rational(s: &str) -> Option<Rational64> {
    match s.split_once('/') {
        Some((a, b)) => {
            let n: i64 = a.trim().parse().ok()?;
            let d: i64 = b.trim().parse().ok()?;
            (d != 0).then(|| Rational64::new(n, d))
        }
        None => Some(Rational64::from_integer(s.trim().parse().ok()?)),
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                _ if c.is_one() => write!(f, "z{}^{i}", self.n)?,
                _ => write!(f, "({c})*z{}^{i}", self.n)?,
            }
        }
        Ok(())
    }
}

impl Add for &CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &CycNumber) -> CycNumber {
        self.checked_add(rhs).expect("cyclotomic addition")
    }
}

impl Sub for &CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &CycNumber) -> CycNumber {
        self.checked_add(&-rhs).expect("cyclotomic subtraction")
    }
}

impl Mul for &CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &CycNumber) -> CycNumber {
        self.checked_mul(rhs).expect("cyclotomic multiplication")
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber { n: self.n, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// Smallest `d` with `Q(S) = Q(zeta_d)`.
///
/// Computes the subgroup of `Gal(Q(zeta_e)/Q)` fixing every value and fails if its
/// fixed field is not itself cyclotomic.
pub fn field_of_values<'a, I>(values: I) -> Result<u64>
where
    I: IntoIterator<Item = &'a CycNumber>,
{
    let values: Vec<&CycNumber> = values.into_iter().collect();
    let mut e = 1;
    for v in &values {
        let (a, b) = (e.max(v.n), e.min(v.n));
        if a % b != 0 {
            return Err(Error::Usage("values lie over different primes".into()));
        }
        e = a;
    }
    if e == 1 {
        return Ok(1);
    }
    let (p, _) = prime_power(e).expect("prime power");
    let phi = phi_prime_power(e);
    let g = primitive_root(e);
    let fixes = |s: u64| values.iter().all(|v| v.conj_by(s as i64).map(|w| &w == *v).unwrap_or(false));
    let m = (1..=phi)
        .filter(|m| phi % m == 0)
        .find(|&m| fixes(crate::arith::pow_mod(g, m, e)))
        .expect("the trivial subgroup fixes everything");
    if m == 1 {
        return Ok(1);
    }
    let mut d = p;
    while d <= e {
        if phi_prime_power(d) == m {
            return Ok(d);
        }
        d *= p;
    }
    Err(Error::Invariant(format!(
        "field of values has degree {m} inside Q(zeta_{e}) and is not cyclotomic"
    )))
}
