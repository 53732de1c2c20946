//! Binary cyclic codes as ideals of F₂[x]/(xⁿ − 1).
//!
//! A word `(a_0, …, a_{n-1})` is identified with `Σ a_i x^i`. A code is
//! given by its generator `h | xⁿ − 1`; it has dimension `n − deg h` and the
//! shifts `h, xh, …, x^{k-1}h` form a basis.

use std::fmt;
use std::io::{BufRead, Write};

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::field::{prime_power, BinaryPoly, ExtField, FieldError};
use crate::gf2::{self, Gf2Matrix};

/// Largest dimension for which minimum distances are computed exactly.
pub const EXACT_DISTANCE_MAX_DIM: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("generator {0} does not divide x^{1} - 1")]
    NotADivisor(String, usize),
    #[error("generator must be nonzero of degree below the length {0}")]
    DegenerateGenerator(usize),
    #[error("BCH parameters out of range: m = {m}, r = {r} (need m >= 2 and 1 <= r <= 2^m - 1)")]
    BchRange { m: u32, r: usize },
    #[error("length {0} must be odd")]
    EvenLength(usize),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("exact distance needs dimension <= {EXACT_DISTANCE_MAX_DIM}, got {0}")]
    TooLargeForExact(usize),
    #[error("q + 1 = {0} is not 2(2^m - 1) = {1}")]
    LengthConstraint(u64, u64),
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("m = {0} is below 10")]
    SmallM(u32),
    #[error("a = {0} must exceed 2")]
    SmallA(u64),
    #[error("malformed code file: {0}")]
    Format(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicCode {
    n: usize,
    generator: BinaryPoly,
}

/// How to measure a minimum distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMode {
    Exact,
    Sampled { trials: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceReport {
    /// `"exact"` or `"sampled"`.
    pub mode: &'static str,
    /// True minimum distance; only set in exact mode.
    pub exact: Option<usize>,
    /// Lightest nonzero word found. In sampled mode this is an upper bound
    /// and nothing more.
    pub upper: Option<usize>,
    pub trials: Option<u64>,
}

/// Dimension, distance bounds and rate of a code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub d_exact: Option<usize>,
    pub d_lower: usize,
    pub d_upper: Option<usize>,
    pub rate: Ratio<u64>,
    pub delta_lower: Ratio<u64>,
}

impl CyclicCode {
    /// The ideal generated by `h`; `h` must divide `xⁿ − 1` and have degree
    /// below `n`.
    pub fn from_generator(n: usize, h: BinaryPoly) -> Result<Self, CodeError> {
        match h.degree() {
            Some(d) if d < n => {}
            _ => return Err(CodeError::DegenerateGenerator(n)),
        }
        if !h.divides(&BinaryPoly::x_pow_minus_one(n)) {
            return Err(CodeError::NotADivisor(h.to_string(), n));
        }
        Ok(Self { n, generator: h })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.n - self.generator.degree().expect("nonzero generator")
    }

    pub fn generator(&self) -> &BinaryPoly {
        &self.generator
    }

    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.dim() as u64, self.n as u64)
    }

    /// Generator matrix: rows `x^i h` for `0 <= i < k`.
    pub fn basis(&self) -> Gf2Matrix {
        let mut m = Gf2Matrix::with_capacity(self.n, self.dim());
        for i in 0..self.dim() {
            m.push_bits(&self.generator.shl(i).to_bits(self.n));
        }
        m
    }

    /// Membership: a word of length `n` is a codeword iff `h` divides it.
    pub fn contains(&self, word: &[bool]) -> bool {
        word.len() == self.n
            && self
                .generator
                .divides(&BinaryPoly::from_bits(word.iter().copied()))
    }

    /// Generator of the dual code: the reciprocal of `(xⁿ − 1)/h`. Its first
    /// `n − k` shifts form a basis of the dual. `None` when the code is all
    /// of F₂ⁿ (the dual is zero).
    pub fn dual_generator(&self) -> Option<BinaryPoly> {
        if self.dim() == self.n {
            return None;
        }
        let (check, rem) = BinaryPoly::x_pow_minus_one(self.n)
            .div_rem(&self.generator)
            .expect("nonzero generator");
        debug_assert!(rem.is_zero());
        Some(check.reciprocal())
    }

    /// Parity-check matrix: the `n − k` shifts of the dual generator.
    pub fn dual_basis(&self) -> Gf2Matrix {
        let mut m = Gf2Matrix::new(self.n);
        if let Some(g) = self.dual_generator() {
            for i in 0..self.n - self.dim() {
                m.push_bits(&g.shl(i).to_bits(self.n));
            }
        }
        m
    }

    pub fn min_distance(&self, mode: DistanceMode) -> Result<DistanceReport, CodeError> {
        match mode {
            DistanceMode::Exact => {
                if self.dim() > EXACT_DISTANCE_MAX_DIM {
                    return Err(CodeError::TooLargeForExact(self.dim()));
                }
                let mw = gf2::exact_min_weight(&self.basis());
                Ok(DistanceReport {
                    mode: "exact",
                    exact: mw.weight,
                    upper: mw.weight,
                    trials: None,
                })
            }
            DistanceMode::Sampled { trials, seed } => {
                let mw = gf2::sampled_min_weight(&self.basis(), trials, seed);
                Ok(DistanceReport {
                    mode: "sampled",
                    exact: None,
                    upper: mw.weight,
                    trials: Some(trials),
                })
            }
        }
    }

    /// The even-length code of the same rate and distance: generator `h²`,
    /// length `2n`, whose words are exactly `φ(C × C)`.
    pub fn double_length(&self) -> Result<Self, CodeError> {
        if self.n.is_multiple_of(2) {
            return Err(CodeError::EvenLength(self.n));
        }
        Self::from_generator(2 * self.n, self.generator.square())
    }

    /// Parameters with the supplied designed lower bound on the distance.
    pub fn params(&self, d_lower: usize, distance: Option<&DistanceReport>) -> CodeParams {
        let n = self.n as u64;
        CodeParams {
            n: self.n,
            k: self.dim(),
            d_exact: distance.and_then(|d| d.exact),
            d_lower,
            d_upper: distance.and_then(|d| d.upper),
            rate: self.rate(),
            delta_lower: Ratio::new(d_lower as u64, n),
        }
    }

    /// Text form: `"n k"` then the generator as a hex bit string.
    pub fn write_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.n, self.dim())?;
        writeln!(w, "{}", self.generator.to_hex())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("ascii")
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<Self, CodeError> {
        let mut lines = r
            .lines()
            .map_while(Result::ok)
            .filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| CodeError::Format("empty input".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| CodeError::Format(format!("bad header {header:?}")))
            })
            .collect::<Result<_, _>>()?;
        let [n, k] = nums[..] else {
            return Err(CodeError::Format(format!(
                "header must be \"n k\", got {header:?}"
            )));
        };
        let hex = lines
            .next()
            .ok_or_else(|| CodeError::Format("missing generator".into()))?;
        let code = Self::from_generator(n, BinaryPoly::from_hex(&hex)?)?;
        if code.dim() != k {
            return Err(CodeError::Format(format!(
                "header claims k = {k} but the generator gives k = {}",
                code.dim()
            )));
        }
        Ok(code)
    }
}

impl fmt::Display for CyclicCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] cyclic code", self.n, self.dim())
    }
}

/// Cyclic shift `(a_{n-1}, a_0, …, a_{n-2})`.
pub fn cyclic_shift(word: &[bool]) -> Vec<bool> {
    let n = word.len();
    (0..n).map(|i| word[(i + n - 1) % n]).collect()
}

/// The interleaving
/// `(a₀, b₁, a₂, b₃, …, b_{n-2}, a_{n-1}, b₀, a₁, b₂, …, a_{n-2}, b_{n-1})`
/// for odd `n`: position `j < n` holds `a_j` for even `j` and `b_j` for odd
/// `j`, and position `n + j` the other one.
pub fn interleave_phi(a: &[bool], b: &[bool]) -> Result<Vec<bool>, CodeError> {
    let n = a.len();
    if b.len() != n {
        return Err(CodeError::LengthMismatch(n, b.len()));
    }
    if n.is_multiple_of(2) {
        return Err(CodeError::EvenLength(n));
    }
    let mut out = Vec::with_capacity(2 * n);
    out.extend((0..n).map(|j| if j % 2 == 0 { a[j] } else { b[j] }));
    out.extend((0..n).map(|j| if j % 2 == 0 { b[j] } else { a[j] }));
    Ok(out)
}

fn bch_check(m: u32, r: usize) -> Result<usize, CodeError> {
    if !(2..=20).contains(&m) {
        return Err(CodeError::BchRange { m, r });
    }
    let n = (1usize << m) - 1;
    if r == 0 || r > n {
        return Err(CodeError::BchRange { m, r });
    }
    Ok(n)
}

/// `lcm{ m_{w^i}(x) : 1 <= i <= r }` for the primitive element `w` of
/// F_{2^m} (built on its smallest irreducible modulus).
pub fn bch_generator(m: u32, r: usize) -> Result<BinaryPoly, CodeError> {
    bch_check(m, r)?;
    let field = ExtField::new(2, m as usize)?;
    let w = field.primitive_element();
    let mut h = BinaryPoly::one();
    let mut power = field.one();
    for _ in 1..=r {
        power = field.mul(&power, &w);
        h = h.lcm(&field.minimal_polynomial(&power)?);
    }
    Ok(h)
}

/// The BCH(m, r) code of length `2^m − 1`.
pub fn bch_code(m: u32, r: usize) -> Result<CyclicCode, CodeError> {
    let n = bch_check(m, r)?;
    CyclicCode::from_generator(n, bch_generator(m, r)?)
}

/// Dimension from the actual generator; designed distance `r + 1`.
pub fn bch_designed_params(m: u32, r: usize) -> Result<CodeParams, CodeError> {
    Ok(bch_code(m, r)?.params(r + 1, None))
}

/// `r = ⌊(n/m)(1 − 2/a)⌋ = ⌊n(a − 2)/(ma)⌋` for `n = 2^m − 1`.
pub fn bch_r_for_a(m: u32, a: u64) -> Result<usize, CodeError> {
    if a <= 2 {
        return Err(CodeError::SmallA(a));
    }
    let n = bch_check(m, 1)? as u64;
    let r = (n * (a - 2)) / (m as u64 * a);
    bch_check(m, r as usize)?;
    Ok(r as usize)
}

/// Outcome of the inner-code threshold checks for `q + 1 = 2(2^m − 1)`.
#[derive(Clone, Debug, Serialize)]
pub struct GoodInnerCode {
    pub q: u64,
    pub m: u32,
    pub a: u64,
    pub r: usize,
    pub bch: CodeParams,
    pub params: CodeParams,
    /// `r(B) > 1/2`.
    pub rate_exceeds_half: bool,
    /// `r(B) >= 1/2 + 1/a`.
    pub rate_at_least_half_plus_inv_a: bool,
    /// designed `δ(B) = (r+1)/(q+1)`.
    pub designed_delta: Ratio<u64>,
    /// `2√q/(q+1)`, for display only; the comparison is exact.
    pub ramanujan_threshold: f64,
    /// designed `δ(B) > 2√q/(q+1)`, decided in integers.
    pub delta_exceeds_ramanujan: bool,
    pub pass: bool,
    #[serde(skip)]
    pub code: CyclicCode,
}

/// Build `B = double(BCH(m, ⌊(n/m)(1 − 2/a)⌋))` and compare its rate with
/// 1/2 and its designed normalized distance with `2√q/(q+1)`.
pub fn check_good_inner_code(q: u64, m: u32, a: u64) -> Result<GoodInnerCode, CodeError> {
    if m < 10 {
        return Err(CodeError::SmallM(m));
    }
    if a <= 2 {
        return Err(CodeError::SmallA(a));
    }
    let n = bch_check(m, 1)? as u64;
    if q + 1 != 2 * n {
        return Err(CodeError::LengthConstraint(q + 1, 2 * n));
    }
    if prime_power(q).is_none() {
        return Err(CodeError::NotPrimePower(q));
    }
    let r = bch_r_for_a(m, a)?;
    let c = bch_code(m, r)?;
    let b = c.double_length()?;
    let k = b.dim() as u128;
    let len = b.len() as u128;
    let rate_exceeds_half = 2 * k > len;
    let rate_at_least_half_plus_inv_a = 2 * a as u128 * k >= len * (a as u128 + 2);
    // (r+1)/(q+1) > 2√q/(q+1)  <=>  (r+1)^2 > 4q
    let d = r as u128 + 1;
    let delta_exceeds_ramanujan = d * d > 4 * q as u128;
    Ok(GoodInnerCode {
        q,
        m,
        a,
        r,
        bch: c.params(r + 1, None),
        params: b.params(r + 1, None),
        rate_exceeds_half,
        rate_at_least_half_plus_inv_a,
        designed_delta: Ratio::new(r as u64 + 1, q + 1),
        ramanujan_threshold: 2.0 * (q as f64).sqrt() / (q as f64 + 1.0),
        delta_exceeds_ramanujan,
        pass: rate_exceeds_half && delta_exceeds_ramanujan,
        code: b,
    })
}
