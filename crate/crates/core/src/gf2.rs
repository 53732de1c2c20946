//! Dense GF(2) matrices with word-packed rows.
//!
//! Rows are stored contiguously, `words_per_row` u64 words each, bit `j` of
//! a row being column `j`. Elimination works on a copy so the input stays
//! untouched.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gf2Matrix {
    width: usize,
    words_per_row: usize,
    rows: usize,
    data: Vec<u64>,
}

pub fn words_for(width: usize) -> usize {
    width.div_ceil(64)
}

pub fn get_bit(row: &[u64], j: usize) -> bool {
    (row[j / 64] >> (j % 64)) & 1 == 1
}

pub fn set_bit(row: &mut [u64], j: usize) {
    row[j / 64] |= 1 << (j % 64);
}

pub fn flip_bit(row: &mut [u64], j: usize) {
    row[j / 64] ^= 1 << (j % 64);
}

pub fn weight(row: &[u64]) -> usize {
    row.iter().map(|w| w.count_ones() as usize).sum()
}

/// Indices of the set bits, ascending.
pub fn support(row: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (wi, &w) in row.iter().enumerate() {
        let mut bits = w;
        while bits != 0 {
            out.push(wi * 64 + bits.trailing_zeros() as usize);
            bits &= bits - 1;
        }
    }
    out
}

#[inline]
fn xor_from(dst: &mut [u64], src: &[u64], from_word: usize) {
    for (d, s) in dst[from_word..].iter_mut().zip(&src[from_word..]) {
        *d ^= s;
    }
}

impl Gf2Matrix {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            words_per_row: words_for(width),
            rows: 0,
            data: Vec::new(),
        }
    }

    pub fn with_capacity(width: usize, rows: usize) -> Self {
        let mut m = Self::new(width);
        m.data.reserve(rows * m.words_per_row);
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n);
        for i in 0..n {
            m.push_support(&[i]);
        }
        m
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.data.chunks(self.words_per_row.max(1)).take(self.rows)
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        get_bit(self.row(i), j)
    }

    pub fn push_row(&mut self, words: &[u64]) {
        assert_eq!(words.len(), self.words_per_row, "row width mismatch");
        if let Some(&last) = words.last() {
            let spare = self.words_per_row * 64 - self.width;
            assert!(
                spare == 0 || last >> (64 - spare) == 0,
                "bits set past the row width"
            );
        }
        self.data.extend_from_slice(words);
        self.rows += 1;
    }

    /// Append a row given by the columns of its ones.
    pub fn push_support(&mut self, cols: &[usize]) {
        let mut row = vec![0u64; self.words_per_row];
        for &c in cols {
            assert!(c < self.width, "column {c} out of range");
            flip_bit(&mut row, c);
        }
        self.push_row(&row);
    }

    pub fn push_bits(&mut self, bits: &[bool]) {
        assert_eq!(bits.len(), self.width);
        let cols: Vec<usize> = (0..bits.len()).filter(|&j| bits[j]).collect();
        self.push_support(&cols);
    }

    pub fn row_weight(&self, i: usize) -> usize {
        weight(self.row(i))
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Row echelon form by Gaussian elimination. Pivot rows come out in
    /// increasing pivot column, each zero to the left of its pivot.
    pub fn echelon(&self) -> Echelon {
        let wpr = self.words_per_row;
        let mut m = self.clone();
        let mut rank = 0usize;
        let mut pivots = Vec::new();
        for col in 0..self.width {
            if rank == m.rows {
                break;
            }
            let (wi, bit) = (col / 64, 1u64 << (col % 64));
            let Some(p) = (rank..m.rows).find(|&r| m.data[r * wpr + wi] & bit != 0) else {
                continue;
            };
            if p != rank {
                for w in 0..wpr {
                    m.data.swap(p * wpr + w, rank * wpr + w);
                }
            }
            let (head, tail) = m.data.split_at_mut((rank + 1) * wpr);
            let pivot = &head[rank * wpr..];
            for row in tail.chunks_mut(wpr) {
                if row[wi] & bit != 0 {
                    xor_from(row, pivot, wi);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        m.data.truncate(rank * wpr);
        m.rows = rank;
        Echelon { basis: m, pivots }
    }

    /// Reduced row echelon form with pivots chosen by scanning columns in
    /// `order` (a permutation of `0..width`).
    pub fn rref_in_order(&self, order: &[usize]) -> Echelon {
        let wpr = self.words_per_row;
        let mut m = self.clone();
        let mut rank = 0usize;
        let mut pivots = Vec::new();
        for &col in order {
            if rank == m.rows {
                break;
            }
            let (wi, bit) = (col / 64, 1u64 << (col % 64));
            let Some(p) = (rank..m.rows).find(|&r| m.data[r * wpr + wi] & bit != 0) else {
                continue;
            };
            if p != rank {
                for w in 0..wpr {
                    m.data.swap(p * wpr + w, rank * wpr + w);
                }
            }
            let pivot: Vec<u64> = m.row(rank).to_vec();
            for r in 0..m.rows {
                if r != rank && m.data[r * wpr + wi] & bit != 0 {
                    xor_from(m.row_mut(r), &pivot, 0);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        m.data.truncate(rank * wpr);
        m.rows = rank;
        Echelon { basis: m, pivots }
    }

    /// A basis of `{x : M x = 0}` as the rows of a matrix of the same width.
    pub fn nullspace(&self) -> Gf2Matrix {
        let order: Vec<usize> = (0..self.width).collect();
        let rref = self.rref_in_order(&order);
        let mut is_pivot = vec![false; self.width];
        for &c in &rref.pivots {
            is_pivot[c] = true;
        }
        let mut out = Gf2Matrix::new(self.width);
        for free in (0..self.width).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u64; self.words_per_row];
            set_bit(&mut v, free);
            for (i, &pc) in rref.pivots.iter().enumerate() {
                if rref.basis.get(i, free) {
                    set_bit(&mut v, pc);
                }
            }
            out.push_row(&v);
        }
        out
    }

    /// `M v` for a vector given as packed words of length `width`.
    pub fn syndrome_is_zero(&self, v: &[u64]) -> bool {
        self.rows().all(|r| {
            r.iter()
                .zip(v)
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                % 2
                == 0
        })
    }
}

/// Row echelon basis of a row space.
#[derive(Clone, Debug)]
pub struct Echelon {
    basis: Gf2Matrix,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &Gf2Matrix {
        &self.basis
    }

    /// Reduce `v` in place against the basis; zero afterwards iff `v` was in
    /// the row space.
    pub fn reduce(&self, v: &mut [u64]) {
        for (i, &c) in self.pivots.iter().enumerate() {
            if get_bit(v, c) {
                xor_from(v, self.basis.row(i), c / 64);
            }
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }
}

/// Result of a minimum-weight search over a span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinWeight {
    /// `None` when the span is `{0}`.
    pub weight: Option<usize>,
    pub witness: Option<Vec<u64>>,
}

/// Exact minimum nonzero weight of the row span, by visiting all
/// `2^rows - 1` nonzero combinations in Gray-code order.
pub fn exact_min_weight(gens: &Gf2Matrix) -> MinWeight {
    let k = gens.num_rows();
    assert!(k < 40, "exhaustive enumeration of 2^{k} words");
    let mut word = vec![0u64; gens.words_per_row()];
    let mut best: Option<(usize, Vec<u64>)> = None;
    for step in 1u64..(1u64 << k) {
        let flip = step.trailing_zeros() as usize;
        for (w, r) in word.iter_mut().zip(gens.row(flip)) {
            *w ^= r;
        }
        let wt = weight(&word);
        if wt > 0 && best.as_ref().is_none_or(|(b, _)| wt < *b) {
            best = Some((wt, word.clone()));
        }
    }
    MinWeight {
        weight: best.as_ref().map(|b| b.0),
        witness: best.map(|b| b.1),
    }
}

/// Randomized upper bound on the minimum weight of the row span
/// (Lee–Brickell with information sets of size `rank`): each trial draws a
/// random column order, brings the generators to systematic form on it and
/// inspects every single row and, when affordable, every pair of rows.
/// Trial `i` uses its own ChaCha stream `i` under `seed`, so the result
/// depends only on `(gens, trials, seed)`.
pub fn sampled_min_weight(gens: &Gf2Matrix, trials: u64, seed: u64) -> MinWeight {
    const PAIR_LIMIT: usize = 4096;
    let mut best: Option<(usize, Vec<u64>)> = None;
    let mut consider = |v: Vec<u64>| {
        let wt = weight(&v);
        if wt > 0 && best.as_ref().is_none_or(|(b, _)| wt < *b) {
            best = Some((wt, v));
        }
    };
    let mut order: Vec<usize> = (0..gens.width()).collect();
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        order.shuffle(&mut rng);
        let sys = gens.rref_in_order(&order).basis;
        let k = sys.num_rows();
        for i in 0..k {
            consider(sys.row(i).to_vec());
        }
        if k * k.saturating_sub(1) / 2 <= PAIR_LIMIT {
            for i in 0..k {
                for j in i + 1..k {
                    let v: Vec<u64> = sys
                        .row(i)
                        .iter()
                        .zip(sys.row(j))
                        .map(|(a, b)| a ^ b)
                        .collect();
                    consider(v);
                }
            }
        }
    }
    MinWeight {
        weight: best.as_ref().map(|b| b.0),
        witness: best.map(|b| b.1),
    }
}
