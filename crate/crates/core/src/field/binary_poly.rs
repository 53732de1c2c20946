//! Polynomials over F₂, bit-packed lowest degree first.

use std::fmt;

use super::FieldError;

/// An element of F₂[x]. Bit `i` of the packed words is the coefficient of
/// `x^i`; trailing zero words are always trimmed, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BinaryPoly {
    words: Vec<u64>,
}

impl BinaryPoly {
    pub fn zero() -> Self {
        Self { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut p = Self {
            words: vec![0; n / 64 + 1],
        };
        p.words[n / 64] |= 1 << (n % 64);
        p
    }

    /// `x^n - 1`, which over F₂ is `x^n + 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        Self::monomial(n).add(&Self::one())
    }

    /// Build from coefficient bits, lowest degree first.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        for (i, b) in bits.into_iter().enumerate() {
            if i / 64 >= words.len() {
                words.push(0);
            }
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Self::from_words(words)
    }

    /// Build from the exponents of the nonzero terms.
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Self::zero();
        for &e in exps {
            p = p.add(&Self::monomial(e));
        }
        p
    }

    pub fn from_words(mut words: Vec<u64>) -> Self {
        while words.last() == Some(&0) {
            words.pop();
        }
        Self { words }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let top = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Coefficients `0..len` as bools (zero-padded past the degree).
    pub fn to_bits(&self, len: usize) -> Vec<bool> {
        (0..len).map(|i| self.coeff(i)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(&short.words) {
            *w ^= s;
        }
        Self::from_words(words)
    }

    /// Multiply by `x^n`.
    pub fn shl(&self, n: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (ws, bs) = (n / 64, n % 64);
        let mut words = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + ws] |= w << bs;
            if bs > 0 {
                words[i + ws + 1] |= w >> (64 - bs);
            }
        }
        Self::from_words(words)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut acc = vec![0u64; self.words.len() + other.words.len() + 1];
        for (wi, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let shift = wi * 64 + b;
                let (ws, bs) = (shift / 64, shift % 64);
                for (j, &o) in other.words.iter().enumerate() {
                    acc[j + ws] ^= o << bs;
                    if bs > 0 {
                        acc[j + ws + 1] ^= o >> (64 - bs);
                    }
                }
            }
        }
        Self::from_words(acc)
    }

    /// Squaring is linear over F₂: spread each bit to twice its position.
    pub fn square(&self) -> Self {
        let mut exps = Vec::with_capacity(self.weight());
        for i in 0..=self.degree().unwrap_or(0) {
            if self.coeff(i) {
                exps.push(2 * i);
            }
        }
        Self::from_exponents(&exps)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), FieldError> {
        let dd = divisor.degree().ok_or(FieldError::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let shift = dr - dd;
            quot = quot.add(&Self::monomial(shift));
            rem = rem.add(&divisor.shl(shift));
        }
        Ok((quot, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self, FieldError> {
        Ok(self.div_rem(divisor)?.1)
    }

    pub fn divides(&self, other: &Self) -> bool {
        matches!(other.rem(self), Ok(r) if r.is_zero())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("b nonzero");
            a = b;
            b = r;
        }
        a
    }

    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(other);
        self.div_rem(&g).expect("gcd nonzero").0.mul(other)
    }

    /// `x^deg · p(1/x)`: the coefficient vector reversed.
    pub fn reciprocal(&self) -> Self {
        match self.degree() {
            None => Self::zero(),
            Some(d) => Self::from_bits((0..=d).rev().map(|i| self.coeff(i))),
        }
    }

    /// Hex bit string, lowest degree first: nibble `j` packs the coefficients
    /// of `x^{4j}..x^{4j+3}` with `x^{4j}` as its least significant bit, and
    /// nibbles are written in increasing `j`. Zero is the empty string.
    pub fn to_hex(&self) -> String {
        let Some(d) = self.degree() else {
            return String::new();
        };
        (0..d / 4 + 1)
            .map(|j| {
                let nib = (0..4).fold(0u32, |acc, b| acc | (self.coeff(4 * j + b) as u32) << b);
                char::from_digit(nib, 16).expect("nibble")
            })
            .collect()
    }

    pub fn from_hex(s: &str) -> Result<Self, FieldError> {
        let mut bits = Vec::with_capacity(4 * s.len());
        for ch in s.trim().chars() {
            let nib = ch.to_digit(16).ok_or(FieldError::BadHex(ch))?;
            bits.extend((0..4).map(|b| (nib >> b) & 1 == 1));
        }
        Ok(Self::from_bits(bits))
    }
}

impl fmt::Debug for BinaryPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryPoly({self})")
    }
}

impl fmt::Display for BinaryPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return write!(f, "0");
        };
        let terms: Vec<String> = (0..=d)
            .rev()
            .filter(|&i| self.coeff(i))
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}
