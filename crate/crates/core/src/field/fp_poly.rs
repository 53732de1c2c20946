//! Dense polynomials over a prime field, lowest degree first.
//!
//! Only what the field constructor needs: irreducibility testing and root
//! evaluation. Coefficients are kept reduced mod `p` and trailing zeros are
//! trimmed, so the zero polynomial is the empty vector.

pub(crate) fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn mul_mod_p(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_mod_p(a: u64, p: u64) -> u64 {
    // Extended Euclid on signed integers; p < 2^32 keeps everything in range.
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "inverse of a non-unit");
    s0.rem_euclid(p as i128) as u64
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out.push((x + p - y) % p);
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod_p(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = mul_mod_p(r[top], lead_inv, p);
        if c != 0 {
            let shift = top - dm;
            for (j, &mj) in m.iter().enumerate() {
                r[shift + j] = (r[shift + j] + p - mul_mod_p(c, mj, p)) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// Monic gcd.
pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let inv = inv_mod_p(lead, p);
        for c in x.iter_mut() {
            *c = mul_mod_p(*c, inv, p);
        }
    }
    x
}

pub(crate) fn pow_mod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(&mul(&result, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    rem(&result, m, p)
}

/// Ben-Or test: a monic `f` of degree k is irreducible iff
/// gcd(f, x^(p^i) - x) = 1 for every 1 <= i <= k/2.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut h = x.clone();
    for _ in 0..k / 2 {
        h = pow_mod(&h, p as u128, f, p);
        let g = gcd(f, &sub(&h, &x, p), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Decode an enumeration index into a monic polynomial of degree `k`.
pub(crate) fn monic_from_index(index: u128, k: usize, p: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(k + 1);
    let mut rest = index;
    for _ in 0..k {
        out.push((rest % p as u128) as u64);
        rest /= p as u128;
    }
    out.push(1);
    out
}
