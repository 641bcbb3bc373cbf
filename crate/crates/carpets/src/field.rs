//! Arithmetic in GF(p) and GF(p^k).
//!
//! Elements are coefficient vectors of length `k` over GF(p), constant term
//! first, reduced modulo a monic irreducible polynomial of degree `k`.  The
//! canonical external form of an element is its integer encoding
//! `c0 + c1*p + ... + c(k-1)*p^(k-1)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A concrete finite field GF(p^k): the characteristic, the extension degree
/// and the monic modulus polynomial (coefficients constant term first, length
/// `k + 1`, leading coefficient 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
    k: usize,
    modulus: Vec<u64>,
    order: u64,
}

/// An element of GF(p^k): `k` residues mod p, constant term first.
///
/// The characteristic travels with the element so that mixing elements from
/// different fields is caught as an error instead of producing garbage.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    p: u64,
    coeffs: Vec<u64>,
}

impl FieldSpec {
    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// GF(p^k) with an explicit modulus, or the default modulus when `None`.
    ///
    /// The default modulus is the lexicographically smallest monic
    /// irreducible of degree `k`, comparing coefficient tuples constant term
    /// first.  For `k = 1` the modulus is always `x`.
    pub fn new(p: u64, k: usize, modulus: Option<Vec<u64>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::usage(format!("characteristic {p} is not prime")));
        }
        if k == 0 {
            return Err(Error::usage("extension degree must be at least 1"));
        }
        let order = checked_pow(p, k).ok_or_else(|| {
            Error::capacity(format!("field order {p}^{k} does not fit in 64 bits"))
        })?;
        let modulus = match modulus {
            Some(m) => {
                validate_modulus(p, k, &m)?;
                m
            }
            None => default_modulus(p, k),
        };
        Ok(FieldSpec { p, k, modulus, order })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of elements, p^k.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Textual descriptor: `"p"` for prime fields, `"p^k/c0,...,ck"` with the
    /// full modulus otherwise.
    pub fn descriptor(&self) -> String {
        if self.k == 1 {
            format!("{}", self.p)
        } else {
            let coeffs: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
            format!("{}^{}/{}", self.p, self.k, coeffs.join(","))
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { p: self.p, coeffs: vec![0; self.k] }
    }

    pub fn one(&self) -> FieldElement {
        let mut coeffs = vec![0; self.k];
        coeffs[0] = 1;
        FieldElement { p: self.p, coeffs }
    }

    /// Element with the given coefficient vector (length `k`, entries < p).
    pub fn element(&self, coeffs: Vec<u64>) -> Result<FieldElement> {
        if coeffs.len() != self.k || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::usage(format!(
                "coefficient vector {coeffs:?} is not valid for {}",
                self.descriptor()
            )));
        }
        Ok(FieldElement { p: self.p, coeffs })
    }

    /// Integer residue embedded in the prime subfield.
    pub fn from_residue(&self, n: u64) -> FieldElement {
        let mut coeffs = vec![0; self.k];
        coeffs[0] = n % self.p;
        FieldElement { p: self.p, coeffs }
    }

    /// Inverse of `encode`: base-p digits of `n` become the coefficients.
    pub fn decode(&self, n: u64) -> Result<FieldElement> {
        if n >= self.order {
            return Err(Error::usage(format!(
                "encoding {n} out of range for field of order {}",
                self.order
            )));
        }
        let mut coeffs = vec![0; self.k];
        let mut rest = n;
        for c in coeffs.iter_mut() {
            *c = rest % self.p;
            rest /= self.p;
        }
        Ok(FieldElement { p: self.p, coeffs })
    }

    /// All field elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(move |n| self.decode(n).expect("encoding in range"))
    }

    fn check(&self, a: &FieldElement) -> Result<()> {
        if a.p != self.p || a.coeffs.len() != self.k || a.coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::usage(format!(
                "element {a:?} does not belong to {}",
                self.descriptor()
            )));
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        Ok(FieldElement { p: self.p, coeffs })
    }

    pub fn neg(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        Ok(FieldElement { p: self.p, coeffs })
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        let coeffs = self.mul_coeffs(&a.coeffs, &b.coeffs);
        Ok(FieldElement { p: self.p, coeffs })
    }

    /// Multiplicative inverse by the extended Euclidean algorithm on
    /// polynomials over GF(p).  Errors on zero.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::domain("zero has no multiplicative inverse"));
        }
        if self.k == 1 {
            let mut coeffs = a.coeffs.clone();
            coeffs[0] = mod_inv(a.coeffs[0], self.p)
                .ok_or_else(|| Error::internal("residue not invertible mod p"))?;
            return Ok(FieldElement { p: self.p, coeffs });
        }
        let inv = poly_inverse(&a.coeffs, &self.modulus, self.p)
            .ok_or_else(|| Error::internal("element not invertible; modulus not irreducible?"))?;
        let mut coeffs = inv;
        coeffs.resize(self.k, 0);
        Ok(FieldElement { p: self.p, coeffs })
    }

    /// `a` raised to a nonnegative integer power by square and multiply.
    pub fn pow(&self, a: &FieldElement, mut e: u64) -> Result<FieldElement> {
        self.check(a)?;
        let mut base = a.coeffs.clone();
        let mut acc = self.one().coeffs;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_coeffs(&acc, &base);
            }
            base = self.mul_coeffs(&base, &base);
            e >>= 1;
        }
        Ok(FieldElement { p: self.p, coeffs: acc })
    }

    /// The Frobenius automorphism `a -> a^p`.
    pub fn frobenius(&self, a: &FieldElement) -> Result<FieldElement> {
        if self.k == 1 {
            self.check(a)?;
            return Ok(a.clone());
        }
        self.pow(a, self.p)
    }

    /// Degree of `a` over the prime subfield: the smallest `t >= 1` with
    /// `frobenius^t(a) = a`.  Always divides `k`.
    pub fn degree_over_prime(&self, a: &FieldElement) -> Result<usize> {
        self.check(a)?;
        let mut b = self.frobenius(a)?;
        let mut t = 1;
        while &b != a {
            b = self.frobenius(&b)?;
            t += 1;
            if t > self.k {
                return Err(Error::internal("Frobenius orbit exceeded extension degree"));
            }
        }
        Ok(t)
    }

    fn mul_coeffs(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if self.k == 1 {
            return vec![mod_mul(a[0], b[0], self.p)];
        }
        let mut prod = vec![0u64; 2 * self.k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mod_mul(x, y, self.p)) % self.p;
            }
        }
        poly_rem(&mut prod, &self.modulus, self.p);
        prod.truncate(self.k);
        prod.resize(self.k, 0);
        prod
    }

    // Encoding-level arithmetic, used by the matrix layer so that dense
    // matrices can store one integer per entry.

    pub(crate) fn add_enc(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut weight = 1;
        for i in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * weight;
            a /= self.p;
            b /= self.p;
            if i + 1 < self.k {
                weight *= self.p;
            }
        }
        out
    }

    pub(crate) fn neg_enc(&self, a: u64) -> u64 {
        if self.k == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let mut a = a;
        let mut out = 0;
        let mut weight = 1;
        for i in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * weight;
            a /= self.p;
            if i + 1 < self.k {
                weight *= self.p;
            }
        }
        out
    }

    pub(crate) fn mul_enc(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            return mod_mul(a, b, self.p);
        }
        let ea = self.decode(a).expect("encoding in range");
        let eb = self.decode(b).expect("encoding in range");
        encode_coeffs(&self.mul_coeffs(&ea.coeffs, &eb.coeffs), self.p)
    }

    pub(crate) fn inv_enc(&self, a: u64) -> Result<u64> {
        let e = self.decode(a)?;
        Ok(self.inv(&e)?.encode())
    }

    pub(crate) fn frobenius_enc(&self, a: u64) -> u64 {
        if self.k == 1 {
            return a;
        }
        let e = self.decode(a).expect("encoding in range");
        self.frobenius(&e).expect("element belongs to field").encode()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

/// Parses a field descriptor: `"p"`, `"p^k"` or `"p^k/c0,c1,...,ck"` with the
/// modulus coefficients constant term first.
impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::usage(format!("field descriptor {s:?}: {what}"));
        let (base, modulus) = match s.split_once('/') {
            Some((b, m)) => (b, Some(m)),
            None => (s, None),
        };
        let (p_str, k_str) = match base.split_once('^') {
            Some((p, k)) => (p, Some(k)),
            None => (base, None),
        };
        let p: u64 = p_str.parse().map_err(|_| bad("characteristic must be an integer"))?;
        let k: usize = match k_str {
            Some(k) => k.parse().map_err(|_| bad("extension degree must be an integer"))?,
            None => 1,
        };
        let modulus = match modulus {
            Some(m) => {
                let coeffs: std::result::Result<Vec<u64>, _> =
                    m.split(',').map(|c| c.trim().parse()).collect();
                Some(coeffs.map_err(|_| bad("modulus coefficients must be integers"))?)
            }
            None => None,
        };
        FieldSpec::new(p, k, modulus)
    }
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// True when all nonconstant coefficients vanish, i.e. the element lies
    /// in the prime subfield GF(p).
    pub fn in_prime_subfield(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Base-p integer encoding `c0 + c1*p + ... + c(k-1)*p^(k-1)`.
    pub fn encode(&self) -> u64 {
        encode_coeffs(&self.coeffs, self.p)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

fn encode_coeffs(coeffs: &[u64], p: u64) -> u64 {
    let mut out = 0;
    let mut weight = 1u64;
    for (i, &c) in coeffs.iter().enumerate() {
        out += c * weight;
        if i + 1 < coeffs.len() {
            weight *= p;
        }
    }
    out
}

fn checked_pow(p: u64, k: usize) -> Option<u64> {
    let mut out = 1u64;
    for _ in 0..k {
        out = out.checked_mul(p)?;
    }
    Some(out)
}

/// Deterministic primality by trial division; exact for all u64 inputs that
/// occur at the intended working scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_mul(acc, a, p);
        }
        a = mod_mul(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse of `a` mod prime `p` via the extended Euclidean algorithm.
fn mod_inv(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(p as i128) as u64)
}

// Polynomials over GF(p) as coefficient vectors, constant term first.

fn poly_degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn poly_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && a.last() == Some(&0) {
        a.pop();
    }
    if a.is_empty() {
        a.push(0);
    }
}

/// Reduces `a` in place modulo the monic polynomial `f`.
fn poly_rem(a: &mut Vec<u64>, f: &[u64], p: u64) {
    let df = poly_degree(f).expect("modulus is nonzero");
    while let Some(da) = poly_degree(a) {
        if da < df {
            break;
        }
        let lead = a[da];
        let shift = da - df;
        for (i, &fc) in f.iter().enumerate() {
            if fc != 0 {
                let sub = mod_mul(lead, fc, p);
                a[shift + i] = (a[shift + i] + p - sub % p) % p;
            }
        }
    }
    poly_trim(a);
}

/// Quotient and remainder of `a / b` with `b` nonzero, not necessarily monic.
fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = poly_degree(b).expect("divisor is nonzero");
    let lead_inv = mod_inv(b[db], p).expect("leading coefficient invertible");
    let mut rem = a.to_vec();
    let da = match poly_degree(&rem) {
        Some(d) if d >= db => d,
        _ => {
            poly_trim(&mut rem);
            return (vec![0], rem);
        }
    };
    let mut quot = vec![0u64; da - db + 1];
    while let Some(d) = poly_degree(&rem) {
        if d < db {
            break;
        }
        let factor = mod_mul(rem[d], lead_inv, p);
        quot[d - db] = factor;
        for (i, &bc) in b.iter().enumerate() {
            if bc != 0 {
                let sub = mod_mul(factor, bc, p);
                rem[d - db + i] = (rem[d - db + i] + p - sub) % p;
            }
        }
    }
    poly_trim(&mut rem);
    poly_trim(&mut quot);
    (quot, rem)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mod_mul(x, y, p)) % p;
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_is_zero(a: &[u64]) -> bool {
    poly_degree(a).is_none()
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y % p) % p;
    }
    poly_trim(&mut out);
    out
}

/// Monic greatest common divisor.
fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    while !poly_is_zero(&r1) {
        let (_, rem) = poly_divmod(&r0, &r1, p);
        r0 = r1;
        r1 = rem;
    }
    if let Some(d) = poly_degree(&r0) {
        let inv = mod_inv(r0[d], p).expect("leading coefficient invertible");
        for c in r0.iter_mut() {
            *c = mod_mul(*c, inv, p);
        }
    }
    r0
}

/// Inverse of `a` modulo the monic irreducible `f`, when it exists.
fn poly_inverse(a: &[u64], f: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r0 = f.to_vec();
    let mut r1 = a.to_vec();
    poly_trim(&mut r1);
    let mut t0: Vec<u64> = vec![0];
    let mut t1: Vec<u64> = vec![1];
    while !poly_is_zero(&r1) {
        let (q, rem) = poly_divmod(&r0, &r1, p);
        let t2 = poly_sub(&t0, &poly_mul(&q, &t1, p), p);
        r0 = r1;
        r1 = rem;
        t0 = t1;
        t1 = t2;
    }
    let d = poly_degree(&r0)?;
    if d != 0 {
        return None;
    }
    let scale = mod_inv(r0[0], p)?;
    let mut inv = t0;
    for c in inv.iter_mut() {
        *c = mod_mul(*c, scale, p);
    }
    let mut reduced = inv;
    poly_rem(&mut reduced, f, p);
    Some(reduced)
}

fn validate_modulus(p: u64, k: usize, modulus: &[u64]) -> Result<()> {
    let err = |what: String| Err(Error::usage(format!("modulus {modulus:?}: {what}")));
    if modulus.len() != k + 1 {
        return err(format!("expected {} coefficients for degree {k}", k + 1));
    }
    if modulus.iter().any(|&c| c >= p) {
        return err(format!("coefficients must be residues mod {p}"));
    }
    if modulus[k] != 1 {
        return err("polynomial must be monic".to_string());
    }
    if k == 1 {
        // Degenerate case: arithmetic never reduces, so only the canonical
        // modulus x is accepted.
        if modulus[0] != 0 {
            return err("degree-1 modulus must be x (coefficients 0,1)".to_string());
        }
        return Ok(());
    }
    if !is_irreducible(modulus, p) {
        return err(format!("polynomial is reducible over GF({p})"));
    }
    Ok(())
}

/// Irreducibility of a monic degree-k polynomial over GF(p): requires
/// `x^(p^k) = x (mod f)` and `gcd(x^(p^(k/t)) - x, f) = 1` for every prime
/// divisor `t` of `k`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = match poly_degree(f) {
        Some(k) if k >= 1 => k,
        _ => return false,
    };
    if k == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // x^(p^j) mod f for j = 0..=k, each step one exponentiation by p.
    let mut frob_powers = Vec::with_capacity(k + 1);
    frob_powers.push(x.clone());
    for _ in 0..k {
        let prev = frob_powers.last().expect("nonempty");
        frob_powers.push(poly_powmod(prev, p, f, p));
    }
    if poly_sub(&frob_powers[k], &x, p) != vec![0] {
        return false;
    }
    for t in prime_divisors(k) {
        let g = poly_sub(&frob_powers[k / t], &x, p);
        let gcd = poly_gcd(&g, f, p);
        if poly_degree(&gcd) != Some(0) {
            return false;
        }
    }
    true
}

fn poly_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut base = base.to_vec();
    poly_rem(&mut base, f, p);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            let mut next = poly_mul(&acc, &base, p);
            poly_rem(&mut next, f, p);
            acc = next;
        }
        let mut sq = poly_mul(&base, &base, p);
        poly_rem(&mut sq, f, p);
        base = sq;
        e >>= 1;
    }
    acc
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Lexicographically smallest monic irreducible of degree `k` over GF(p),
/// comparing the lower-coefficient tuple `(c0, ..., c(k-1))` constant term
/// first.
fn default_modulus(p: u64, k: usize) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1];
    }
    let mut counter = vec![0u64; k];
    loop {
        // counter[0] is c0, the most significant position of the comparison.
        let mut candidate = counter.clone();
        candidate.push(1);
        if is_irreducible(&candidate, p) {
            return candidate;
        }
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            counter[pos] += 1;
            if counter[pos] < p {
                break;
            }
            counter[pos] = 0;
        }
        if pos == 0 && counter[0] == 0 {
            unreachable!("no irreducible polynomial of degree {k} over GF({p})");
        }
    }
}

/// Exponentiation oracle used by tests: `a^(q-2)` equals the inverse for
/// nonzero `a`.
pub fn pow_residue(a: u64, e: u64, p: u64) -> u64 {
    mod_pow(a, e, p)
}
