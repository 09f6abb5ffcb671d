//! Exact finite-field arithmetic GF(p^k) backed by exponent/log tables.
//!
//! Elements are integer indices in `[0, p^k)`: the base-`p` digits of an
//! index are the coefficients of the polynomial representative, ascending
//! degree. Index 0 is the zero element and index 1 the multiplicative
//! identity in every field. Multiplication and inversion go through a
//! discrete-log table over a fixed generator, so all operations are exact
//! table lookups after construction.
//!
//! Fields of characteristic 2 additionally expose the absolute trace map
//! and the irreducibility test for quadratics `x^2 + bx + 1`, which drive
//! the Denniston arc construction.

use thiserror::Error;

/// Largest supported field order. Everything at desk scale (q <= 64, with
/// headroom to q = 256) fits; the cap prevents runaway table allocation.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

/// Describes a concrete field representation: characteristic, extension
/// degree, and the monic irreducible modulus (coefficients ascending, so
/// `modulus[i]` multiplies x^i and `modulus[k] == 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub k: u32,
    pub modulus: Vec<u64>,
}

impl FieldSpec {
    /// Comma-separated coefficient list, e.g. `1,1,0,0,1` for x^4 + x + 1.
    pub fn modulus_csv(&self) -> String {
        self.modulus
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// An element of some [`FieldTable`], identified by its integer index.
///
/// The index is only meaningful relative to the table that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("field order {order} exceeds the supported maximum {cap}")]
    OrderTooLarge { order: u128, cap: u64 },
    #[error("modulus is reducible over GF({p})")]
    ReducibleModulus { p: u64 },
    #[error("modulus must be monic of degree {k} with coefficients in [0, {p})")]
    BadModulus { p: u64, k: u32 },
    #[error("operation requires characteristic 2, field has characteristic {0}")]
    WrongCharacteristic(u64),
    #[error("coefficient must be nonzero")]
    ZeroCoefficient,
    #[error("element index {index} out of range for field of order {order}")]
    ElementOutOfRange { index: u32, order: u32 },
}

/// Complete arithmetic tables for GF(p^k). Immutable after construction;
/// safe for unrestricted concurrent reads.
#[derive(Debug, Clone)]
pub struct FieldTable {
    spec: FieldSpec,
    order: u32,
    /// exp[i] = g^i for a fixed generator g, doubled in length so that
    /// `exp[log a + log b]` never wraps.
    exp: Vec<u32>,
    /// log[a] for a != 0; log[0] is unused.
    log: Vec<u32>,
}

impl FieldTable {
    /// Build GF(p^k). When `modulus` is `None`, the lexicographically least
    /// monic irreducible polynomial of degree k over GF(p) is chosen
    /// (coefficients compared from the highest degree down), which makes
    /// builds reproducible across runs.
    pub fn build(p: u64, k: u32, modulus: Option<&[u64]>) -> Result<FieldTable, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k < 1 {
            return Err(FieldError::BadModulus { p, k });
        }
        let order128 = (p as u128).pow(k);
        if order128 > MAX_FIELD_ORDER as u128 {
            return Err(FieldError::OrderTooLarge {
                order: order128,
                cap: MAX_FIELD_ORDER,
            });
        }
        let order = order128 as u64;

        let modulus = match modulus {
            Some(m) => {
                if m.len() != k as usize + 1 || m.last() != Some(&1) || m.iter().any(|&c| c >= p) {
                    return Err(FieldError::BadModulus { p, k });
                }
                if !poly_is_irreducible(m, p) {
                    return Err(FieldError::ReducibleModulus { p });
                }
                m.to_vec()
            }
            None => default_modulus(p, k, order),
        };

        let spec = FieldSpec { p, k, modulus };
        let ctx = RawField {
            p,
            k: k as usize,
            order,
            modulus: &spec.modulus,
        };

        // Find a generator of the cyclic group of order q-1: g works iff
        // g^((q-1)/r) != 1 for every prime r | q-1.
        let group = order - 1;
        let prime_factors = distinct_prime_factors(group);
        let g = (1..order)
            .find(|&g| prime_factors.iter().all(|&r| ctx.pow(g, group / r) != 1))
            .expect("every finite field has a primitive element");

        let mut exp = vec![0u32; (2 * group.max(1)) as usize];
        let mut log = vec![0u32; order as usize];
        let mut x = 1u64;
        for i in 0..group {
            exp[i as usize] = x as u32;
            exp[(i + group) as usize] = x as u32;
            log[x as usize] = i as u32;
            x = ctx.mul(x, g);
        }
        debug_assert_eq!(x, 1, "generator order must divide q-1");

        Ok(FieldTable {
            spec,
            order: order as u32,
            exp,
            log,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn characteristic(&self) -> u64 {
        self.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.spec.k
    }

    /// Checked constructor for an element of this field.
    pub fn element(&self, index: u32) -> Result<FieldElement, FieldError> {
        if index < self.order {
            Ok(FieldElement(index))
        } else {
            Err(FieldError::ElementOutOfRange {
                index,
                order: self.order,
            })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.0 < self.order && b.0 < self.order);
        if self.spec.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let p = self.spec.p as u32;
        let (mut a, mut b) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        while a != 0 || b != 0 {
            out += (a % p + b % p) % p * place;
            a /= p;
            b /= p;
            place *= p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        debug_assert!(a.0 < self.order);
        if self.spec.p == 2 {
            return a;
        }
        let p = self.spec.p as u32;
        let mut a = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        while a != 0 {
            out += (p - a % p) % p * place;
            a /= p;
            place *= p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.0 < self.order && b.0 < self.order);
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let la = self.log[a.0 as usize] as usize;
        let lb = self.log[b.0 as usize] as usize;
        FieldElement(self.exp[la + lb])
    }

    /// Multiplicative inverse. Panics on zero; callers must exclude it.
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        assert!(a.0 != 0, "zero has no multiplicative inverse");
        debug_assert!(a.0 < self.order);
        let group = (self.order - 1) as usize;
        let la = self.log[a.0 as usize] as usize;
        FieldElement(self.exp[group - la])
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        debug_assert!(a.0 < self.order);
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let group = (self.order - 1) as u64;
        let la = self.log[a.0 as usize] as u64;
        let idx = la * (e % group) % group;
        FieldElement(self.exp[idx as usize])
    }

    /// Absolute trace Tr(a) = a + a^2 + a^4 + ... + a^(2^(k-1)), returned as
    /// a bit. Only defined in characteristic 2.
    pub fn trace(&self, a: FieldElement) -> Result<u8, FieldError> {
        if self.spec.p != 2 {
            return Err(FieldError::WrongCharacteristic(self.spec.p));
        }
        debug_assert!(a.0 < self.order);
        let mut acc = a;
        let mut t = a;
        for _ in 1..self.spec.k {
            t = self.mul(t, t);
            acc = self.add(acc, t);
        }
        debug_assert!(acc.0 <= 1, "trace lands in the prime subfield");
        Ok(acc.0 as u8)
    }

    /// Whether x^2 + bx + 1 has no root in GF(2^k). Equivalent to
    /// Tr(b^-2) = 1: substituting x = by turns the quadratic into the
    /// Artin-Schreier equation y^2 + y = b^-2, solvable iff the trace of
    /// the right side vanishes.
    pub fn quadratic_irreducible(&self, b: FieldElement) -> Result<bool, FieldError> {
        if self.spec.p != 2 {
            return Err(FieldError::WrongCharacteristic(self.spec.p));
        }
        if b.0 == 0 {
            return Err(FieldError::ZeroCoefficient);
        }
        let b_inv_sq = self.inv(self.mul(b, b));
        Ok(self.trace(b_inv_sq)? == 1)
    }
}

/// Bootstrap arithmetic on raw element indices, used only while the tables
/// are being built.
struct RawField<'a> {
    p: u64,
    k: usize,
    order: u64,
    modulus: &'a [u64],
}

impl RawField<'_> {
    fn digits(&self, mut v: u64) -> Vec<u64> {
        let mut d = vec![0u64; self.k];
        for slot in d.iter_mut() {
            *slot = v % self.p;
            v /= self.p;
        }
        d
    }

    fn encode(&self, d: &[u64]) -> u64 {
        d.iter().rev().fold(0u64, |acc, &c| acc * self.p + c)
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.order && b < self.order);
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * self.k];
        for (i, &ca) in da.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (j, &cb) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ca * cb) % self.p;
            }
        }
        // Reduce by x^k = -(m_0 + m_1 x + ... + m_{k-1} x^{k-1}).
        for i in (self.k..2 * self.k).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..self.k {
                let sub = c * self.modulus[j] % self.p;
                prod[i - self.k + j] = (prod[i - self.k + j] + self.p - sub) % self.p;
            }
        }
        self.encode(&prod[..self.k])
    }

    fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

/// Lexicographically least monic irreducible of degree k over GF(p).
/// Candidates x^k + t are scanned by ascending integer encoding of t, which
/// orders coefficient tuples from the highest degree down.
fn default_modulus(p: u64, k: u32, order: u64) -> Vec<u64> {
    for t in 0..order {
        let mut coeffs = Vec::with_capacity(k as usize + 1);
        let mut v = t;
        for _ in 0..k {
            coeffs.push(v % p);
            v /= p;
        }
        coeffs.push(1);
        if poly_is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over GF(p)")
}

// --- polynomial arithmetic over GF(p), ascending coefficients ---

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ca * cb) % p;
        }
    }
    poly_rem(&mut prod, m, p);
    prod
}

/// In-place remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &mut Vec<u64>, m: &[u64], p: u64) {
    let deg_m = m.len() - 1;
    while a.len() > deg_m {
        let c = *a.last().unwrap();
        let shift = a.len() - 1 - deg_m;
        if c != 0 {
            for (j, &mj) in m.iter().enumerate() {
                let sub = c * mj % p;
                a[shift + j] = (a[shift + j] + p - sub) % p;
            }
        }
        a.pop();
        poly_trim(a);
    }
    poly_trim(a);
}

fn poly_pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    poly_rem(&mut b, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, m, p);
        }
        b = poly_mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        // Make b monic so poly_rem applies.
        let lead = *b.last().unwrap();
        if lead != 1 {
            let inv = mod_pow(lead, p - 2, p);
            for c in b.iter_mut() {
                *c = *c * inv % p;
            }
        }
        poly_rem(&mut a, &b, p);
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn mod_pow(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// x^(p^j) mod m, by iterating the p-th power map j times.
fn frobenius_iterate(j: u32, m: &[u64], p: u64) -> Vec<u64> {
    let mut g = vec![0u64, 1];
    poly_rem(&mut g, m, p);
    for _ in 0..j {
        g = poly_pow_mod(&g, p, m, p);
    }
    g
}

/// Irreducibility over GF(p) of a monic polynomial (ascending coefficients).
/// Degrees 1 and 2 use a direct root scan; higher degrees use the
/// Rabin divisibility criterion on x^(p^k) - x.
fn poly_is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    debug_assert!(f.last() == Some(&1));
    match k {
        0 => false,
        1 => true,
        2 => (0..p).all(|c| poly_eval(f, c, p) != 0),
        _ => {
            // x^(p^k) == x (mod f) ...
            let xpk = frobenius_iterate(k as u32, f, p);
            let mut x = vec![0u64, 1];
            poly_rem(&mut x, f, p);
            if xpk != x {
                return false;
            }
            // ... and gcd(x^(p^(k/r)) - x, f) = 1 for every prime r | k.
            for r in distinct_prime_factors(k as u64) {
                let sub = frobenius_iterate((k as u64 / r) as u32, f, p);
                let mut diff = sub.clone();
                diff.resize(diff.len().max(2), 0);
                diff[1] = (diff[1] + p - 1) % p;
                let g = poly_gcd(diff, f.to_vec(), p);
                if g.len() != 1 {
                    return false;
                }
            }
            true
        }
    }
}

fn poly_eval(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, k: u32) -> FieldTable {
        FieldTable::build(p, k, None).unwrap()
    }

    #[test]
    fn gf2_prime_field() {
        let f = gf(2, 1);
        assert_eq!(f.order(), 2);
        assert_eq!(f.add(FieldElement(1), FieldElement(1)), FieldElement(0));
        assert_eq!(f.mul(FieldElement(1), FieldElement(1)), FieldElement(1));
    }

    #[test]
    fn gf4_hand_multiplication_table() {
        // With modulus x^2 + x + 1: indices 2 = w, 3 = w + 1 and w^2 = w + 1.
        let f = FieldTable::build(2, 2, Some(&[1, 1, 1])).unwrap();
        let expect = [
            [0, 0, 0, 0],
            [0, 1, 2, 3],
            [0, 2, 3, 1], // w*w = w+1, w*(w+1) = w^2+w = 1
            [0, 3, 1, 2], // (w+1)^2 = w^2+1 = w
        ];
        for a in 0..4u32 {
            for b in 0..4u32 {
                assert_eq!(
                    f.mul(FieldElement(a), FieldElement(b)),
                    FieldElement(expect[a as usize][b as usize]),
                    "{a} * {b}"
                );
            }
        }
    }

    #[test]
    fn gf16_multiplicative_group_is_cyclic_of_order_15() {
        let f = FieldTable::build(2, 4, Some(&[1, 1, 0, 0, 1])).unwrap();
        // Exhaustive order check: some element generates all 15 nonzero ones.
        let generates = |g: FieldElement| {
            let mut seen = std::collections::HashSet::new();
            let mut x = FieldElement::ONE;
            for _ in 0..15 {
                x = f.mul(x, g);
                seen.insert(x);
            }
            x == FieldElement::ONE && seen.len() == 15
        };
        assert!(f.elements().skip(1).any(generates));
        // x itself is primitive for this modulus.
        assert!(generates(FieldElement(2)));
    }

    #[test]
    fn default_moduli_are_the_classical_least_ones() {
        assert_eq!(gf(2, 2).spec().modulus, vec![1, 1, 1]); // x^2+x+1
        assert_eq!(gf(2, 3).spec().modulus, vec![1, 1, 0, 1]); // x^3+x+1
        assert_eq!(gf(2, 4).spec().modulus, vec![1, 1, 0, 0, 1]); // x^4+x+1
        assert_eq!(gf(2, 1).spec().modulus, vec![0, 1]); // x
        assert_eq!(gf(3, 2).spec().modulus, vec![1, 0, 1]); // x^2+1, no root mod 3
    }

    #[test]
    fn build_rejects_bad_inputs() {
        assert_eq!(
            FieldTable::build(4, 1, None).unwrap_err(),
            FieldError::NotPrime(4)
        );
        assert_eq!(
            FieldTable::build(2, 2, Some(&[1, 0, 1])).unwrap_err(),
            FieldError::ReducibleModulus { p: 2 }
        );
        assert!(matches!(
            FieldTable::build(2, 17, None).unwrap_err(),
            FieldError::OrderTooLarge { .. }
        ));
        assert!(matches!(
            FieldTable::build(2, 2, Some(&[1, 1, 2])).unwrap_err(),
            FieldError::BadModulus { .. }
        ));
        assert!(matches!(
            FieldTable::build(5, 2, Some(&[1, 1])).unwrap_err(),
            FieldError::BadModulus { .. }
        ));
    }

    #[test]
    fn element_range_check() {
        let f = gf(2, 2);
        assert!(f.element(3).is_ok());
        assert_eq!(
            f.element(4).unwrap_err(),
            FieldError::ElementOutOfRange { index: 4, order: 4 }
        );
    }

    fn check_axioms_exhaustive(f: &FieldTable) {
        let els: Vec<_> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, FieldElement::ZERO), a);
            assert_eq!(f.mul(a, FieldElement::ONE), a);
            assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
            if a != FieldElement::ZERO {
                assert_eq!(f.mul(a, f.inv(a)), FieldElement::ONE);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
            }
        }
        for &a in &els {
            for &b in &els {
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small_orders() {
        for (p, k) in [
            (2, 1),
            (3, 1),
            (2, 2),
            (5, 1),
            (7, 1),
            (2, 3),
            (3, 2),
            (2, 4),
        ] {
            check_axioms_exhaustive(&gf(p, k));
        }
    }

    #[test]
    fn field_axioms_exhaustive_gf64() {
        check_axioms_exhaustive(&gf(2, 6));
    }

    #[test]
    fn field_axioms_gf256_pairs_exhaustive_triples_sampled() {
        let f = gf(2, 8);
        let els: Vec<_> = f.elements().collect();
        for &a in &els {
            if a != FieldElement::ZERO {
                assert_eq!(f.mul(a, f.inv(a)), FieldElement::ONE);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
            }
        }
        // Strided triple sample covering every residue class.
        for a in (0..256u32).step_by(7) {
            for b in (0..256u32).step_by(11) {
                for c in (0..256u32).step_by(13) {
                    let (a, b, c) = (FieldElement(a), FieldElement(b), FieldElement(c));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn build_at_the_order_cap() {
        let f = gf(2, 16);
        assert_eq!(f.order(), 65536);
        let a = FieldElement(12345);
        assert_eq!(f.mul(a, f.inv(a)), FieldElement::ONE);
        assert_eq!(f.pow(FieldElement(2), 65535), FieldElement::ONE);
    }

    #[test]
    fn large_prime_field() {
        let f = gf(251, 1);
        assert_eq!(f.add(FieldElement(250), FieldElement(1)), FieldElement(0));
        assert_eq!(f.mul(FieldElement(2), FieldElement(126)), FieldElement(1));
    }

    #[test]
    fn trace_known_values_gf4() {
        let f = gf(2, 2);
        assert_eq!(f.trace(FieldElement(0)).unwrap(), 0);
        assert_eq!(f.trace(FieldElement(1)).unwrap(), 0); // 1 + 1
        assert_eq!(f.trace(FieldElement(2)).unwrap(), 1); // w + w^2 = 1
        assert_eq!(f.trace(FieldElement(3)).unwrap(), 1);
    }

    #[test]
    fn trace_is_gf2_linear_and_frobenius_invariant() {
        for k in [2, 3, 4, 6, 8] {
            let f = gf(2, k);
            for a in f.elements() {
                let ta = f.trace(a).unwrap();
                assert_eq!(f.trace(f.mul(a, a)).unwrap(), ta);
                for b in f.elements() {
                    let tb = f.trace(b).unwrap();
                    assert_eq!(f.trace(f.add(a, b)).unwrap(), ta ^ tb);
                }
            }
        }
    }

    #[test]
    fn trace_rejects_odd_characteristic() {
        let f = gf(3, 2);
        assert_eq!(
            f.trace(FieldElement(1)).unwrap_err(),
            FieldError::WrongCharacteristic(3)
        );
    }

    #[test]
    fn quadratic_irreducible_examples() {
        let f4 = gf(2, 2);
        assert!(!f4.quadratic_irreducible(FieldElement(1)).unwrap());
        assert!(f4.quadratic_irreducible(FieldElement(2)).unwrap());
        let f2 = gf(2, 1);
        assert!(f2.quadratic_irreducible(FieldElement(1)).unwrap());
        assert_eq!(
            f4.quadratic_irreducible(FieldElement(0)).unwrap_err(),
            FieldError::ZeroCoefficient
        );
    }

    #[test]
    fn quadratic_irreducible_matches_exhaustive_root_search() {
        for k in 1..=8 {
            let f = gf(2, k);
            for b in f.elements().skip(1) {
                // Root scan for x^2 + bx + 1, independent of the trace route.
                let has_root = f.elements().any(|x| {
                    f.add(f.add(f.mul(x, x), f.mul(b, x)), FieldElement::ONE) == FieldElement::ZERO
                });
                assert_eq!(
                    f.quadratic_irreducible(b).unwrap(),
                    !has_root,
                    "k={k}, b={}",
                    b.0
                );
            }
        }
    }

    #[test]
    fn pow_agrees_with_repeated_multiplication() {
        let f = gf(2, 4);
        for a in f.elements() {
            let mut acc = FieldElement::ONE;
            for e in 0..20u64 {
                assert_eq!(f.pow(a, e), acc);
                acc = f.mul(acc, a);
            }
        }
    }
}
