//! Finite fields F_p and F_{p^k}.
//!
//! An [`ExtField`] is `F_p[x]/(f)` for a monic irreducible `f` of degree `k`;
//! its elements ([`FieldElem`]) are length-`k` coefficient vectors, lowest
//! degree first, fully reduced. Every element carries the id of the field it
//! came from and arithmetic across fields is refused: the only way to move an
//! element between fields is [`ExtField::embed`].
//!
//! Elements are enumerated by the integer index `Σ c_i p^i`; "smallest" for
//! moduli, nonsquares, primitive elements and square-root tie-breaks always
//! refers to that order.

mod binary_poly;
pub(crate) mod fp_poly;

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use smallvec::SmallVec;
use thiserror::Error;

pub use binary_poly::BinaryPoly;

/// Fields with at most this many elements take square roots by exhaustive
/// search; larger ones use Tonelli–Shanks.
const EXHAUSTIVE_SQRT_LIMIT: u128 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is outside the supported range 2..2^32")]
    UnsupportedPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {0}^{1} is too large")]
    TooLarge(u64, usize),
    #[error("modulus is not a monic irreducible polynomial over F_{0}")]
    BadModulus(u64),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no quadratic character")]
    ZeroCharacter,
    #[error("operation requires odd characteristic")]
    EvenCharacteristic,
    #[error("operation requires characteristic 2")]
    NotBinary,
    #[error("element is not a square")]
    NotSquare,
    #[error("invalid hex digit {0:?}")]
    BadHex(char),
    #[error("index {0} is outside the field")]
    IndexOutOfRange(u128),
    #[error("cannot embed: source is not the prime subfield of the target")]
    BadEmbedding,
}

/// Identifier of a concrete field, derived from `(p, modulus)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldId(u64);

/// A field element. Equality is coefficient-wise; the representation is
/// always reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    field: FieldId,
    coeffs: SmallVec<[u32; 4]>,
}

impl FieldElem {
    pub fn field_id(&self) -> FieldId {
        self.field
    }

    /// Coefficients, lowest degree first (always `k` of them).
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Coefficients as plain integers, the serialized form used in reports.
    pub fn to_vec(&self) -> Vec<u64> {
        self.coeffs.iter().map(|&c| c as u64).collect()
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "{:?}", self.coeffs.as_slice())
        }
    }
}

/// The binary operations of [`ExtField::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    /// `a^n` where `n` is the integer index of `b`.
    Pow,
    /// Unary; `b` is ignored.
    Inv,
    /// Unary; `b` is ignored.
    Neg,
}

#[derive(Clone, Debug)]
pub struct ExtField {
    id: FieldId,
    p: u64,
    k: usize,
    /// Monic, `k + 1` coefficients, lowest degree first.
    modulus: Vec<u64>,
    order: u128,
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for ExtField {}

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
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `Some((p, k))` when `n = p^k` for a prime `p` and `k >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n as u128).as_slice() {
        [(p, k)] => Some((*p as u64, *k)),
        _ => None,
    }
}

fn check_prime(p: u64) -> Result<(), FieldError> {
    if p >= 1 << 32 {
        return Err(FieldError::UnsupportedPrime(p));
    }
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    Ok(())
}

fn field_order(p: u64, k: usize) -> Result<u128, FieldError> {
    let mut order: u128 = 1;
    for _ in 0..k {
        order = order
            .checked_mul(p as u128)
            .filter(|&o| o < 1 << 64)
            .ok_or(FieldError::TooLarge(p, k))?;
    }
    Ok(order)
}

impl ExtField {
    /// `F_{p^k}` with the smallest monic irreducible modulus of degree `k`.
    /// For `k = 1` the modulus is `x`, i.e. plain residues mod `p`.
    pub fn new(p: u64, k: usize) -> Result<Self, FieldError> {
        check_prime(p)?;
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        field_order(p, k)?;
        if k == 1 {
            return Self::with_modulus(p, &[0, 1]);
        }
        let candidates = field_order(p, k)?;
        (0..candidates)
            .map(|i| fp_poly::monic_from_index(i, k, p))
            .find(|f| fp_poly::is_irreducible(f, p))
            .map(|f| Self::with_modulus(p, &f))
            .expect("irreducible polynomials exist in every degree")
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 1)
    }

    /// `F_p[x]/(modulus)`; the modulus must be monic and irreducible.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Self, FieldError> {
        check_prime(p)?;
        let mut f: Vec<u64> = modulus.to_vec();
        fp_poly::trim(&mut f);
        if f.len() < 2 || f.last() != Some(&1) || f.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus(p));
        }
        if !fp_poly::is_irreducible(&f, p) {
            return Err(FieldError::BadModulus(p));
        }
        let k = f.len() - 1;
        let order = field_order(p, k)?;
        let mut hasher = DefaultHasher::new();
        (p, &f).hash(&mut hasher);
        Ok(Self {
            id: FieldId(hasher.finish()),
            p,
            k,
            modulus: f,
            order,
        })
    }

    pub fn id(&self) -> FieldId {
        self.id
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    fn make(&self, coeffs: SmallVec<[u32; 4]>) -> FieldElem {
        FieldElem {
            field: self.id,
            coeffs,
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.make(SmallVec::from_elem(0, self.k))
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    /// The constant `c mod p`.
    pub fn from_int(&self, c: i64) -> FieldElem {
        let mut coeffs = SmallVec::from_elem(0, self.k);
        coeffs[0] = c.rem_euclid(self.p as i64) as u32;
        self.make(coeffs)
    }

    /// Reduce an arbitrary polynomial over F_p (lowest degree first) into
    /// the field.
    pub fn from_poly(&self, poly: &[u64]) -> FieldElem {
        let reduced: Vec<u64> = poly.iter().map(|c| c % self.p).collect();
        let r = fp_poly::rem(&reduced, &self.modulus, self.p);
        let mut coeffs = SmallVec::from_elem(0, self.k);
        for (i, c) in r.into_iter().enumerate() {
            coeffs[i] = c as u32;
        }
        self.make(coeffs)
    }

    /// The class of `x`, a root of the modulus.
    pub fn generator(&self) -> FieldElem {
        self.from_poly(&[0, 1])
    }

    /// Element number `index` in enumeration order.
    pub fn element(&self, index: u128) -> Result<FieldElem, FieldError> {
        if index >= self.order {
            return Err(FieldError::IndexOutOfRange(index));
        }
        let mut rest = index;
        let mut coeffs = SmallVec::with_capacity(self.k);
        for _ in 0..self.k {
            coeffs.push((rest % self.p as u128) as u32);
            rest /= self.p as u128;
        }
        Ok(self.make(coeffs))
    }

    pub fn index(&self, a: &FieldElem) -> u128 {
        self.check(a);
        a.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * self.p as u128 + c as u128)
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order).map(|i| self.element(i).expect("in range"))
    }

    pub fn contains(&self, a: &FieldElem) -> bool {
        a.field == self.id
    }

    fn check(&self, a: &FieldElem) {
        assert!(self.contains(a), "field element used with a foreign field");
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        let p = self.p;
        self.make(
            a.coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| ((x as u64 + y as u64) % p) as u32)
                .collect(),
        )
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        self.check(a);
        let p = self.p;
        self.make(
            a.coeffs
                .iter()
                .map(|&x| ((p - x as u64) % p) as u32)
                .collect(),
        )
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        let p = self.p;
        if self.k == 1 {
            let c = (a.coeffs[0] as u64 * b.coeffs[0] as u64) % p;
            return self.make(SmallVec::from_elem(c as u32, 1));
        }
        let k = self.k;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // x^k = -(f_0 + ... + f_{k-1} x^{k-1})
        for top in (k..2 * k - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for j in 0..k {
                let t = top - k + j;
                prod[t] = (prod[t] + p - (c * self.modulus[j]) % p) % p;
            }
            prod[top] = 0;
        }
        self.make(prod[..k].iter().map(|&c| c as u32).collect())
    }

    pub fn square(&self, a: &FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &FieldElem, mut e: u128) -> FieldElem {
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem, FieldError> {
        self.check(a);
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.k == 1 {
            let c = fp_poly::inv_mod_p(a.coeffs[0] as u64, self.p);
            return Ok(self.make(SmallVec::from_elem(c as u32, 1)));
        }
        Ok(self.pow(a, self.order - 2))
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Checked arithmetic: foreign operands and zero divisors are errors
    /// rather than panics.
    pub fn apply(
        &self,
        op: FieldOp,
        a: &FieldElem,
        b: &FieldElem,
    ) -> Result<FieldElem, FieldError> {
        let unary = matches!(op, FieldOp::Inv | FieldOp::Neg);
        if !self.contains(a) || (!unary && !self.contains(b)) {
            return Err(FieldError::FieldMismatch);
        }
        Ok(match op {
            FieldOp::Add => self.add(a, b),
            FieldOp::Sub => self.sub(a, b),
            FieldOp::Mul => self.mul(a, b),
            FieldOp::Div => self.div(a, b)?,
            FieldOp::Pow => self.pow(a, self.index(b)),
            FieldOp::Inv => self.inv(a)?,
            FieldOp::Neg => self.neg(a),
        })
    }

    /// Euler's criterion: `a^((|F|-1)/2) = 1`.
    pub fn is_square(&self, a: &FieldElem) -> Result<bool, FieldError> {
        if !self.contains(a) {
            return Err(FieldError::FieldMismatch);
        }
        if self.p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if a.is_zero() {
            return Err(FieldError::ZeroCharacter);
        }
        Ok(self.pow(a, (self.order - 1) / 2) == self.one())
    }

    /// A square root of `a`; of the two roots, the one with smaller index.
    pub fn sqrt(&self, a: &FieldElem) -> Result<FieldElem, FieldError> {
        if !self.contains(a) {
            return Err(FieldError::FieldMismatch);
        }
        if self.p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if a.is_zero() {
            return Ok(self.zero());
        }
        if !self.is_square(a)? {
            return Err(FieldError::NotSquare);
        }
        if self.order <= EXHAUSTIVE_SQRT_LIMIT {
            // The first root met in enumeration order is the smaller one.
            return Ok(self
                .elements()
                .find(|b| self.square(b) == *a)
                .expect("a is a square"));
        }
        let root = self.tonelli_shanks(a)?;
        let other = self.neg(&root);
        Ok(if self.index(&other) < self.index(&root) {
            other
        } else {
            root
        })
    }

    fn tonelli_shanks(&self, a: &FieldElem) -> Result<FieldElem, FieldError> {
        let mut q = self.order - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let z = self.find_nonsquare()?;
        let mut m = s;
        let mut c = self.pow(&z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        let one = self.one();
        while t != one {
            let mut i = 0u32;
            let mut t2 = t.clone();
            while t2 != one {
                t2 = self.square(&t2);
                i += 1;
            }
            let b = self.pow(&c, 1u128 << (m - i - 1));
            m = i;
            c = self.square(&b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        Ok(r)
    }

    /// The smallest element that is not a square.
    pub fn find_nonsquare(&self) -> Result<FieldElem, FieldError> {
        if self.p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        for i in 1..self.order {
            let a = self.element(i)?;
            if !self.is_square(&a)? {
                return Ok(a);
            }
        }
        unreachable!("half of the nonzero elements of an odd field are nonsquares")
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: &FieldElem) -> Result<u128, FieldError> {
        self.check(a);
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let mut order = self.order - 1;
        for (r, _) in factorize(self.order - 1) {
            while order.is_multiple_of(r) && self.pow(a, order / r) == self.one() {
                order /= r;
            }
        }
        Ok(order)
    }

    /// The smallest element of multiplicative order `|F| - 1`.
    pub fn primitive_element(&self) -> FieldElem {
        let n = self.order - 1;
        let primes: Vec<u128> = factorize(n).into_iter().map(|(r, _)| r).collect();
        (1..self.order)
            .map(|i| self.element(i).expect("in range"))
            .find(|a| primes.iter().all(|&r| self.pow(a, n / r) != self.one()))
            .expect("the multiplicative group is cyclic")
    }

    /// Minimal polynomial over F₂ of a nonzero element, computed as the
    /// product of `(X - a^(2^i))` over the Frobenius orbit.
    pub fn minimal_polynomial(&self, a: &FieldElem) -> Result<BinaryPoly, FieldError> {
        if !self.contains(a) {
            return Err(FieldError::FieldMismatch);
        }
        if self.p != 2 {
            return Err(FieldError::NotBinary);
        }
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let mut orbit = vec![a.clone()];
        loop {
            let next = self.square(orbit.last().expect("nonempty"));
            if next == *a {
                break;
            }
            orbit.push(next);
        }
        // Coefficients in the big field, lowest degree first.
        let mut poly = vec![self.one()];
        for root in &orbit {
            let mut next = vec![self.zero(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] = self.add(&next[i + 1], c);
                next[i] = self.sub(&next[i], &self.mul(c, root));
            }
            poly = next;
        }
        let bits = poly.iter().map(|c| {
            debug_assert!(
                c.coeffs[1..].iter().all(|&x| x == 0),
                "coefficient outside F_2"
            );
            c.coeffs[0] == 1
        });
        Ok(BinaryPoly::from_bits(bits))
    }

    /// Evaluate a polynomial with F_p coefficients (lowest degree first) at `a`.
    pub fn eval_prime_poly(&self, poly: &[u64], a: &FieldElem) -> FieldElem {
        poly.iter().rev().fold(self.zero(), |acc, &c| {
            self.add(&self.mul(&acc, a), &self.from_int((c % self.p) as i64))
        })
    }

    /// Map an element of the prime field `F_p` (built with modulus `x`) into
    /// this field as a constant.
    pub fn embed(&self, a: &FieldElem, from: &ExtField) -> Result<FieldElem, FieldError> {
        if !from.contains(a) {
            return Err(FieldError::FieldMismatch);
        }
        if from.p != self.p || from.k != 1 {
            return Err(FieldError::BadEmbedding);
        }
        Ok(self.from_int(a.coeffs[0] as i64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f16() -> ExtField {
        ExtField::new(2, 4).unwrap()
    }

    #[test]
    fn smallest_irreducible_quartic_over_f2() {
        // Exhaustive oracle over the 16 monic quartics (8 with nonzero
        // constant term): the first irreducible in index order is x^4+x+1.
        let brute = (0..16u128)
            .map(|i| fp_poly::monic_from_index(i, 4, 2))
            .find(|f| {
                // no factor of degree 1 or 2: test against every monic
                // polynomial of degree 1 and 2 by long division.
                (0..2u128)
                    .map(|i| fp_poly::monic_from_index(i, 1, 2))
                    .chain((0..4u128).map(|i| fp_poly::monic_from_index(i, 2, 2)))
                    .all(|g| !fp_poly::rem(f, &g, 2).is_empty())
            })
            .unwrap();
        assert_eq!(brute, vec![1, 1, 0, 0, 1]);
        assert_eq!(f16().modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn prime_fields() {
        let f5 = ExtField::new(5, 1).unwrap();
        assert_eq!(f5.modulus(), &[0, 1]);
        assert_eq!(f5.order(), 5);
        assert_eq!(ExtField::prime(19).unwrap().order(), 19);
        assert_eq!(ExtField::new(15, 1).unwrap_err(), FieldError::NotPrime(15));
        assert_eq!(ExtField::new(5, 0).unwrap_err(), FieldError::ZeroDegree);
    }

    #[test]
    fn inverse_in_f5() {
        let f5 = ExtField::prime(5).unwrap();
        assert_eq!(f5.inv(&f5.from_int(2)).unwrap(), f5.from_int(3));
        assert_eq!(f5.inv(&f5.zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn reduction_in_f16() {
        let f = f16();
        let x = f.generator();
        let x3 = f.pow(&x, 3);
        assert_eq!(f.mul(&x3, &x), f.from_poly(&[1, 1]));
    }

    #[test]
    fn checked_ops_reject_foreign_elements() {
        let f5 = ExtField::prime(5).unwrap();
        let f7 = ExtField::prime(7).unwrap();
        let a = f5.from_int(2);
        let b = f7.from_int(2);
        assert_eq!(
            f5.apply(FieldOp::Add, &a, &b),
            Err(FieldError::FieldMismatch)
        );
        assert_eq!(
            f5.apply(FieldOp::Div, &a, &f5.zero()),
            Err(FieldError::DivisionByZero)
        );
        assert_eq!(f5.apply(FieldOp::Inv, &a, &a).unwrap(), f5.from_int(3));
        assert_eq!(
            f5.apply(FieldOp::Pow, &a, &f5.from_int(2)).unwrap(),
            f5.from_int(4)
        );
    }

    #[test]
    #[should_panic(expected = "foreign field")]
    fn raw_ops_panic_on_foreign_elements() {
        let f5 = ExtField::prime(5).unwrap();
        let f7 = ExtField::prime(7).unwrap();
        f5.mul(&f5.one(), &f7.one());
    }

    #[test]
    fn squares_mod_5() {
        let f5 = ExtField::prime(5).unwrap();
        assert!(f5.is_square(&f5.from_int(4)).unwrap());
        assert!(!f5.is_square(&f5.from_int(2)).unwrap());
        assert!(f5.is_square(&f5.one()).unwrap());
        assert_eq!(f5.is_square(&f5.zero()), Err(FieldError::ZeroCharacter));
        assert_eq!(
            f16().is_square(&f16().one()),
            Err(FieldError::EvenCharacteristic)
        );
    }

    #[test]
    fn square_roots() {
        let f5 = ExtField::prime(5).unwrap();
        assert_eq!(f5.sqrt(&f5.from_int(4)).unwrap(), f5.from_int(2));
        assert_eq!(f5.sqrt(&f5.one()).unwrap(), f5.one());
        assert_eq!(f5.sqrt(&f5.from_int(2)), Err(FieldError::NotSquare));
        let f19 = ExtField::prime(19).unwrap();
        assert_eq!(f19.sqrt(&f19.from_int(5)).unwrap(), f19.from_int(9));
    }

    #[test]
    fn tonelli_shanks_on_large_field() {
        // 65537 > 2^16 takes the Tonelli-Shanks path; 65537 - 1 = 2^16 is
        // the worst case for the 2-adic loop.
        let f = ExtField::prime(65537).unwrap();
        for a in [2i64, 3, 9, 12345, 65536] {
            let a = f.from_int(a);
            if f.is_square(&a).unwrap() {
                let r = f.sqrt(&a).unwrap();
                assert_eq!(f.square(&r), a);
                assert!(f.index(&r) <= f.index(&f.neg(&r)));
            }
        }
        let f2 = ExtField::new(257, 2).unwrap();
        let mut found = 0;
        for i in (1..f2.order()).step_by(997) {
            let a = f2.element(i).unwrap();
            if f2.is_square(&a).unwrap() {
                assert_eq!(f2.square(&f2.sqrt(&a).unwrap()), a);
                found += 1;
            }
        }
        assert!(found > 10);
    }

    #[test]
    fn nonsquares() {
        for (p, n) in [(5u64, 2i64), (19, 2), (7, 3)] {
            let f = ExtField::prime(p).unwrap();
            assert_eq!(f.find_nonsquare().unwrap(), f.from_int(n));
        }
        // 2^9 mod 19 = 18, confirming 2 is a nonresidue there.
        let f19 = ExtField::prime(19).unwrap();
        assert_eq!(f19.pow(&f19.from_int(2), 9), f19.from_int(18));
    }

    #[test]
    fn primitive_elements() {
        let f5 = ExtField::prime(5).unwrap();
        assert_eq!(f5.primitive_element(), f5.from_int(2));
        let f2 = ExtField::prime(2).unwrap();
        assert_eq!(f2.primitive_element(), f2.one());
        let f = f16();
        let x = f.primitive_element();
        assert_eq!(x, f.generator());
        // order 15 by exhaustive powers
        let mut y = x.clone();
        let mut ord = 1;
        while y != f.one() {
            y = f.mul(&y, &x);
            ord += 1;
        }
        assert_eq!(ord, 15);
    }

    #[test]
    fn minimal_polynomials_in_f16() {
        let f = f16();
        let w = f.generator();
        assert_eq!(
            f.minimal_polynomial(&f.one()).unwrap(),
            BinaryPoly::from_exponents(&[1, 0])
        );
        assert_eq!(
            f.minimal_polynomial(&w).unwrap(),
            BinaryPoly::from_exponents(&[4, 1, 0])
        );
        assert_eq!(
            f.minimal_polynomial(&f.pow(&w, 5)).unwrap(),
            BinaryPoly::from_exponents(&[2, 1, 0])
        );
        assert_eq!(
            f.minimal_polynomial(&f.zero()),
            Err(FieldError::DivisionByZero)
        );
    }

    #[test]
    fn embedding_constants() {
        let f5 = ExtField::prime(5).unwrap();
        let f25 = ExtField::new(5, 2).unwrap();
        let two = f25.embed(&f5.from_int(2), &f5).unwrap();
        assert_eq!(two, f25.from_int(2));
        assert_eq!(f25.embed(&f25.one(), &f25), Err(FieldError::BadEmbedding));
        assert_eq!(f5.embed(&f25.one(), &f5), Err(FieldError::FieldMismatch));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(4093), Some((4093, 1)));
        assert_eq!(prime_power(125), Some((5, 3)));
        assert_eq!(prime_power(2045), None);
        assert_eq!(prime_power(1), None);
    }

    fn fields() -> Vec<ExtField> {
        vec![
            ExtField::prime(5).unwrap(),
            ExtField::prime(19).unwrap(),
            ExtField::new(2, 4).unwrap(),
            ExtField::new(2, 11).unwrap(),
            ExtField::new(5, 2).unwrap(),
            ExtField::new(3, 3).unwrap(),
        ]
    }

    #[test]
    fn field_axioms_on_random_triples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for f in fields() {
            for _ in 0..1000 {
                let mut pick = || f.element(rng.gen_range(0..f.order())).unwrap();
                let (a, b, c) = (pick(), pick(), pick());
                assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
                assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
                assert_eq!(
                    f.mul(&a, &f.add(&b, &c)),
                    f.add(&f.mul(&a, &b), &f.mul(&a, &c))
                );
                assert_eq!(f.mul(&a, &f.one()), a);
                assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
                if !a.is_zero() {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_everything() {
        for f in fields() {
            let step = (f.order() / 300).max(1);
            for i in (0..f.order()).step_by(step as usize) {
                let a = f.element(i).unwrap();
                assert_eq!(f.pow(&a, f.order()), a);
            }
        }
    }

    #[test]
    fn nonsquare_times_square_classes() {
        for f in fields().into_iter().filter(|f| f.characteristic() != 2) {
            let n = f.find_nonsquare().unwrap();
            for a in f.elements().skip(1).take(400) {
                let s1 = f.is_square(&a).unwrap();
                let s2 = f.is_square(&f.mul(&n, &a)).unwrap();
                assert!(s1 ^ s2);
                if s1 {
                    assert_eq!(f.square(&f.sqrt(&a).unwrap()), a);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn minimal_polynomial_is_frobenius_invariant(i in 1u128..2048) {
            let f = ExtField::new(2, 11).unwrap();
            let a = f.element(i).unwrap();
            let m = f.minimal_polynomial(&a).unwrap();
            prop_assert_eq!(&m, &f.minimal_polynomial(&f.square(&a)).unwrap());
            prop_assert!(m.degree().unwrap() <= 11);
            prop_assert!(m.divides(&BinaryPoly::x_pow_minus_one(2047)));
        }
    }
}
