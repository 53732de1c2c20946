//! Generators from a split quaternion algebra.
//!
//! Over `R = F_q[y, 1/y, 1/(1+y)]` the algebra with `α² = δ`, `z² = 1 + y`,
//! `zα = −αz` reduces modulo a prime `I = (f)` to 2×2 matrices over
//! `F_{q^e}`. The element `b = 1 + z⁻¹` maps to `γ = I + c⁻¹M_z` with
//! `c = 1 + ȳ`, and the generating set is its orbit under conjugation by the
//! nonsplit torus `F_q[α]* / F_q*`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::field::{fp_poly, ExtField, FieldElem, FieldError};
use crate::group::{
    mat_add, mat_identity, mat_mul, mat_scalar, mat_scale, GroupError, Mat2, Pgl2,
    ProjectiveMatrix, Torus, TorusElement,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LsvError {
    #[error("q = {0} must be an odd prime")]
    BadQ(u64),
    #[error("extension degree must be at least 1")]
    BadDegree,
    #[error("delta = {0} is not a nonsquare mod q")]
    SquareDelta(u64),
    #[error("y-bar must avoid 0 and -1")]
    BadYbar,
    #[error("y-bar does not generate F_(q^{0}) over F_q")]
    YbarDegree(usize),
    #[error("no admissible ideal of degree {e} over F_{q} for the {want} variant")]
    NoAdmissibleIdeal { q: u64, e: usize, want: Variant },
    #[error("quaternion relation {0} fails")]
    Relation(&'static str),
    #[error("no solution of u^2 - delta v^2 = c")]
    NormEquation,
    #[error("generator orbit has {0} elements, expected {1}")]
    OrbitTooSmall(usize, usize),
    #[error("identity lies in the generator set")]
    IdentityInGenerators,
    #[error("generator set is not closed under inverses")]
    NotSymmetric,
    #[error("torus conjugation does not permute the generator set")]
    NotTorusStable,
    #[error("generator {0} has the wrong determinant class for the predicted variant")]
    ClassificationMismatch(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Psl,
    Pgl,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Psl => "psl",
            Variant::Pgl => "pgl",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "psl" => Ok(Variant::Psl),
            "pgl" => Ok(Variant::Pgl),
            _ => Err(format!("unknown variant {s:?} (expected psl or pgl)")),
        }
    }
}

/// The reduction data: base field `F_q`, ambient field `F_{q^e}`, the
/// nonsquare `δ`, the ideal `(f)` and the image `ȳ` of `y`.
#[derive(Clone, Debug)]
pub struct LsvParams {
    pub q: u64,
    pub e: usize,
    pub base: Arc<ExtField>,
    pub ambient: Arc<ExtField>,
    pub delta: FieldElem,
    /// Monic irreducible over `F_q`, lowest degree first.
    pub f: Vec<u64>,
    pub y_bar: FieldElem,
}

impl LsvParams {
    /// Build from an explicit `ȳ` in the ambient field. `delta = None` picks
    /// the smallest nonsquare of `F_q`.
    pub fn new(
        q: u64,
        e: usize,
        delta: Option<u64>,
        y_bar: impl FnOnce(&ExtField) -> Result<FieldElem, FieldError>,
    ) -> Result<Self, LsvError> {
        let (base, ambient) = fields(q, e)?;
        let delta = pick_delta(&base, delta)?;
        let y_bar = y_bar(&ambient)?;
        if !ambient.contains(&y_bar) {
            return Err(FieldError::FieldMismatch.into());
        }
        if y_bar.is_zero() || ambient.add(&y_bar, &ambient.one()).is_zero() {
            return Err(LsvError::BadYbar);
        }
        let f = min_poly_over_prime(&ambient, &y_bar);
        if f.len() != e + 1 {
            return Err(LsvError::YbarDegree(e));
        }
        Ok(Self {
            q,
            e,
            base,
            ambient,
            delta,
            f,
            y_bar,
        })
    }

    /// `c = 1 + ȳ`.
    pub fn c(&self) -> FieldElem {
        self.ambient.add(&self.ambient.one(), &self.y_bar)
    }

    pub fn delta_ambient(&self) -> FieldElem {
        self.ambient
            .embed(&self.delta, &self.base)
            .expect("delta lies in the base field")
    }

    /// The variant predicted by whether `ȳ/(1+ȳ)` is a square in `F_{q^e}`.
    pub fn predicted_variant(&self) -> Variant {
        let ratio = self.ambient.div(&self.y_bar, &self.c()).expect("c nonzero");
        if self.ambient.is_square(&ratio).expect("nonzero") {
            Variant::Psl
        } else {
            Variant::Pgl
        }
    }
}

fn fields(q: u64, e: usize) -> Result<(Arc<ExtField>, Arc<ExtField>), LsvError> {
    if q == 2 || !crate::field::is_prime(q) {
        return Err(LsvError::BadQ(q));
    }
    if e == 0 {
        return Err(LsvError::BadDegree);
    }
    let base = Arc::new(ExtField::prime(q)?);
    let ambient = if e == 1 {
        base.clone()
    } else {
        Arc::new(ExtField::new(q, e)?)
    };
    Ok((base, ambient))
}

fn pick_delta(base: &ExtField, delta: Option<u64>) -> Result<FieldElem, LsvError> {
    match delta {
        None => Ok(base.find_nonsquare()?),
        Some(d) => {
            let x = base.from_int((d % base.characteristic()) as i64);
            if x.is_zero() || base.is_square(&x)? {
                return Err(LsvError::SquareDelta(d));
            }
            Ok(x)
        }
    }
}

/// Minimal polynomial over the prime field, lowest degree first, as the
/// product of `(X − a^{p^i})` over the Frobenius orbit.
pub fn min_poly_over_prime(field: &ExtField, a: &FieldElem) -> Vec<u64> {
    let p = field.characteristic() as u128;
    let mut orbit = vec![a.clone()];
    loop {
        let next = field.pow(orbit.last().expect("nonempty"), p);
        if next == *a {
            break;
        }
        orbit.push(next);
    }
    let mut poly = vec![field.one()];
    for root in &orbit {
        let mut next = vec![field.zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = field.add(&next[i + 1], c);
            next[i] = field.sub(&next[i], &field.mul(c, root));
        }
        poly = next;
    }
    poly.iter().map(|c| c.coeffs()[0] as u64).collect()
}

/// Admissible reductions in scan order. For `e = 1` this is `ȳ = 1, 2, …`
/// (skipping `−1`); for `e > 1` the monic irreducibles `f` of degree `e` in
/// index order, each contributing its smallest-index root.
pub fn ideal_candidates(q: u64, e: usize, delta: Option<u64>) -> Result<Vec<LsvParams>, LsvError> {
    let (base, ambient) = fields(q, e)?;
    let delta = pick_delta(&base, delta)?;
    let make = |f: Vec<u64>, y_bar: FieldElem| LsvParams {
        q,
        e,
        base: base.clone(),
        ambient: ambient.clone(),
        delta: delta.clone(),
        f,
        y_bar,
    };
    let mut out = Vec::new();
    if e == 1 {
        for y in 1..q - 1 {
            let y_bar = ambient.from_int(y as i64);
            out.push(make(vec![(q - y) % q, 1], y_bar));
        }
        return Ok(out);
    }
    let count = (q as u128).pow(e as u32);
    for index in 0..count {
        let f = fp_poly::monic_from_index(index, e, q);
        // f(0) = 0 or f(−1) = 0 would make y or 1 + y vanish modulo f;
        // both are excluded anyway by irreducibility for e > 1
        if !fp_poly::is_irreducible(&f, q) {
            continue;
        }
        let root = ambient
            .elements()
            .find(|a| ambient.eval_prime_poly(&f, a).is_zero())
            .expect("an irreducible of degree e splits in F_(q^e)");
        out.push(make(f, root));
    }
    Ok(out)
}

/// The first admissible reduction whose predicted variant is `want`.
pub fn choose_ideal(q: u64, e: usize, want: Variant) -> Result<LsvParams, LsvError> {
    ideal_candidates(q, e, None)?
        .into_iter()
        .find(|p| p.predicted_variant() == want)
        .ok_or(LsvError::NoAdmissibleIdeal { q, e, want })
}

/// Matrices for `α` and `z` with `α² = δ`, `z² = c`, `zα = −αz`.
#[derive(Clone, Debug)]
pub struct QuaternionSplit {
    pub m_alpha: Mat2,
    pub m_z: Mat2,
    pub u: FieldElem,
    pub v: FieldElem,
    pub c: FieldElem,
}

/// `M_α = [[0, δ], [1, 0]]` and `M_z = [[u, −δv], [v, −u]]` where `v` is the
/// first element (index order) making `c + δv²` a square and `u` its root.
pub fn split_quaternion(
    field: &ExtField,
    delta: &FieldElem,
    c: &FieldElem,
) -> Result<QuaternionSplit, LsvError> {
    if c.is_zero() {
        return Err(LsvError::BadYbar);
    }
    let (u, v) = field
        .elements()
        .find_map(|v| {
            let w = field.add(c, &field.mul(delta, &field.square(&v)));
            if w.is_zero() {
                return Some((w, v));
            }
            match field.is_square(&w) {
                Ok(true) => Some((field.sqrt(&w).expect("square"), v)),
                _ => None,
            }
        })
        .ok_or(LsvError::NormEquation)?;
    let m_alpha = [field.zero(), delta.clone(), field.one(), field.zero()];
    let m_z = [
        u.clone(),
        field.neg(&field.mul(delta, &v)),
        v.clone(),
        field.neg(&u),
    ];
    let split = QuaternionSplit {
        m_alpha,
        m_z,
        u,
        v,
        c: c.clone(),
    };
    split.check(field, delta)?;
    Ok(split)
}

impl QuaternionSplit {
    pub fn check(&self, field: &ExtField, delta: &FieldElem) -> Result<(), LsvError> {
        let a2 = mat_mul(field, &self.m_alpha, &self.m_alpha);
        if a2 != mat_scalar(field, delta) {
            return Err(LsvError::Relation("alpha^2 = delta"));
        }
        let z2 = mat_mul(field, &self.m_z, &self.m_z);
        if z2 != mat_scalar(field, &self.c) {
            return Err(LsvError::Relation("z^2 = 1 + y"));
        }
        let anti = mat_add(
            field,
            &mat_mul(field, &self.m_z, &self.m_alpha),
            &mat_mul(field, &self.m_alpha, &self.m_z),
        );
        if anti != mat_scalar(field, &field.zero()) {
            return Err(LsvError::Relation("z alpha = -alpha z"));
        }
        Ok(())
    }
}

/// The generating set `s_i = t₀ⁱ γ t₀⁻ⁱ`, `0 <= i <= q`.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub gamma: ProjectiveMatrix,
    pub elements: Vec<ProjectiveMatrix>,
    /// `inverse[i] = j` with `s_j = s_i⁻¹`.
    pub inverse: Vec<usize>,
    pub torus: Torus,
    pub t0: TorusElement,
    pub group: Pgl2,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `perm[i] = j` with `t s_i t⁻¹ = s_j`.
    pub fn conjugation_perm(&self, t: &ProjectiveMatrix) -> Result<Vec<usize>, LsvError> {
        let pos: HashMap<&ProjectiveMatrix, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        self.elements
            .iter()
            .map(|s| {
                pos.get(&self.group.conj(t, s))
                    .copied()
                    .ok_or(LsvError::NotTorusStable)
            })
            .collect()
    }
}

/// `γ = proj(I + c⁻¹M_z)` and its torus orbit, ordered by powers of the
/// torus generator and checked for size, symmetry and stability.
pub fn build_generators(
    params: &LsvParams,
    split: &QuaternionSplit,
) -> Result<GeneratorSet, LsvError> {
    let amb = &params.ambient;
    let group = Pgl2::new(amb.clone());
    let c_inv = amb.inv(&split.c)?;
    let gamma = group.proj(mat_add(
        amb,
        &mat_identity(amb),
        &mat_scale(amb, &c_inv, &split.m_z),
    ))?;
    let torus = Torus::new(params.base.clone(), params.delta.clone(), group.clone())?;
    let t0 = torus.generator().clone();
    let elements: Vec<ProjectiveMatrix> = torus
        .powers()
        .iter()
        .map(|t| group.conj(&t.matrix, &gamma))
        .collect();
    let expected = params.q as usize + 1;
    let pos: HashMap<&ProjectiveMatrix, usize> =
        elements.iter().enumerate().map(|(i, s)| (s, i)).collect();
    if pos.len() != expected {
        return Err(LsvError::OrbitTooSmall(pos.len(), expected));
    }
    if pos.contains_key(&group.identity()) {
        return Err(LsvError::IdentityInGenerators);
    }
    let inverse = elements
        .iter()
        .map(|s| {
            pos.get(&group.inv(s))
                .copied()
                .ok_or(LsvError::NotSymmetric)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let gens = GeneratorSet {
        gamma,
        elements,
        inverse,
        torus,
        t0,
        group,
    };
    for t in gens.torus.elements() {
        gens.conjugation_perm(&t.matrix)?;
    }
    Ok(gens)
}

/// The predicted variant, cross-checked against the determinant class of
/// every generator.
pub fn classify(params: &LsvParams, gens: &GeneratorSet) -> Result<Variant, LsvError> {
    let want = params.predicted_variant();
    for (i, s) in gens.elements.iter().enumerate() {
        if gens.group.in_psl(s) != (want == Variant::Psl) {
            return Err(LsvError::ClassificationMismatch(i));
        }
    }
    Ok(want)
}
