//! PGL₂ over a finite field, its nonsplit torus, and the semidirect product
//! `G ⋊ T` acting on generator-labelled edges.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{ExtField, FieldElem, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("singular matrix")]
    Singular,
    #[error("matrix entries come from a different field")]
    FieldMismatch,
    #[error("torus parameter must be a nonsquare in the base field")]
    SquareDelta,
    #[error("conjugate of generator {0} by the torus element is not in the generator set")]
    NotInGenerators(usize),
    #[error("element is not in the torus")]
    NotInTorus,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Row-major 2×2 matrix `[[a, b], [c, d]]`.
pub type Mat2 = [FieldElem; 4];

/// An element of PGL₂: a nonsingular matrix scaled so that its first nonzero
/// entry (row-major) is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjectiveMatrix {
    entries: Mat2,
}

impl ProjectiveMatrix {
    pub fn entries(&self) -> &Mat2 {
        &self.entries
    }

    /// Entries as coefficient lists, the serialized form.
    pub fn to_vecs(&self) -> Vec<Vec<u64>> {
        self.entries.iter().map(FieldElem::to_vec).collect()
    }
}

impl fmt::Debug for ProjectiveMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.entries;
        write!(f, "[[{a:?}, {b:?}], [{c:?}, {d:?}]]")
    }
}

/// Plain matrix arithmetic over one field.
pub fn mat_mul(f: &ExtField, x: &Mat2, y: &Mat2) -> Mat2 {
    let dot = |a: &FieldElem, b: &FieldElem, c: &FieldElem, d: &FieldElem| {
        f.add(&f.mul(a, b), &f.mul(c, d))
    };
    [
        dot(&x[0], &y[0], &x[1], &y[2]),
        dot(&x[0], &y[1], &x[1], &y[3]),
        dot(&x[2], &y[0], &x[3], &y[2]),
        dot(&x[2], &y[1], &x[3], &y[3]),
    ]
}

pub fn mat_add(f: &ExtField, x: &Mat2, y: &Mat2) -> Mat2 {
    std::array::from_fn(|i| f.add(&x[i], &y[i]))
}

pub fn mat_scale(f: &ExtField, c: &FieldElem, x: &Mat2) -> Mat2 {
    std::array::from_fn(|i| f.mul(c, &x[i]))
}

pub fn mat_det(f: &ExtField, x: &Mat2) -> FieldElem {
    f.sub(&f.mul(&x[0], &x[3]), &f.mul(&x[1], &x[2]))
}

pub fn mat_identity(f: &ExtField) -> Mat2 {
    [f.one(), f.zero(), f.zero(), f.one()]
}

pub fn mat_scalar(f: &ExtField, c: &FieldElem) -> Mat2 {
    [c.clone(), f.zero(), f.zero(), c.clone()]
}

/// PGL₂ over a fixed field.
#[derive(Clone, Debug)]
pub struct Pgl2 {
    field: Arc<ExtField>,
}

impl Pgl2 {
    pub fn new(field: Arc<ExtField>) -> Self {
        Self { field }
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<ExtField> {
        &self.field
    }

    /// `|PGL₂(F)| = |F|(|F|² − 1)`.
    pub fn order(&self) -> u128 {
        let n = self.field.order();
        n * (n * n - 1)
    }

    pub fn proj(&self, m: Mat2) -> Result<ProjectiveMatrix, GroupError> {
        if m.iter().any(|x| !self.field.contains(x)) {
            return Err(GroupError::FieldMismatch);
        }
        if mat_det(&self.field, &m).is_zero() {
            return Err(GroupError::Singular);
        }
        Ok(self.canonical(m))
    }

    pub fn proj_ints(&self, m: [i64; 4]) -> Result<ProjectiveMatrix, GroupError> {
        self.proj(m.map(|c| self.field.from_int(c)))
    }

    fn canonical(&self, m: Mat2) -> ProjectiveMatrix {
        let lead = m.iter().find(|x| !x.is_zero()).expect("nonsingular");
        if *lead == self.field.one() {
            return ProjectiveMatrix { entries: m };
        }
        let s = self.field.inv(lead).expect("nonzero");
        ProjectiveMatrix {
            entries: mat_scale(&self.field, &s, &m),
        }
    }

    pub fn identity(&self) -> ProjectiveMatrix {
        ProjectiveMatrix {
            entries: mat_identity(&self.field),
        }
    }

    pub fn mul(&self, a: &ProjectiveMatrix, b: &ProjectiveMatrix) -> ProjectiveMatrix {
        self.canonical(mat_mul(&self.field, &a.entries, &b.entries))
    }

    pub fn inv(&self, a: &ProjectiveMatrix) -> ProjectiveMatrix {
        let f = &self.field;
        let [x, y, z, w] = &a.entries;
        self.canonical([w.clone(), f.neg(y), f.neg(z), x.clone()])
    }

    /// `t g t⁻¹`.
    pub fn conj(&self, t: &ProjectiveMatrix, g: &ProjectiveMatrix) -> ProjectiveMatrix {
        self.mul(&self.mul(t, g), &self.inv(t))
    }

    pub fn pow(&self, a: &ProjectiveMatrix, e: u64) -> ProjectiveMatrix {
        (0..e).fold(self.identity(), |acc, _| self.mul(&acc, a))
    }

    /// Membership in PSL₂: the determinant of the canonical form is a square
    /// (rescaling multiplies it by a square, so the test is well defined).
    pub fn in_psl(&self, a: &ProjectiveMatrix) -> bool {
        let det = mat_det(&self.field, &a.entries);
        self.field
            .is_square(&det)
            .expect("odd characteristic, nonzero determinant")
    }

    /// Order by repeated multiplication.
    pub fn element_order(&self, a: &ProjectiveMatrix) -> u64 {
        let id = self.identity();
        let mut x = a.clone();
        let mut n = 1;
        while x != id {
            x = self.mul(&x, a);
            n += 1;
        }
        n
    }
}

/// A point `(x : y)` of the projective line over the base field, normalized
/// with first nonzero coordinate 1, and its torus matrix `[[x, δy], [y, x]]`
/// in the ambient group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusElement {
    pub x: FieldElem,
    pub y: FieldElem,
    pub matrix: ProjectiveMatrix,
}

/// The nonsplit torus `F*_{q²}/F*_q ⊂ PGL₂(q)`, embedded in PGL₂(qᵉ).
#[derive(Clone, Debug)]
pub struct Torus {
    base: Arc<ExtField>,
    delta: FieldElem,
    group: Pgl2,
    elements: Vec<TorusElement>,
    lookup: HashMap<ProjectiveMatrix, usize>,
}

impl Torus {
    /// Elements enumerated as `(1 : t)` for `t` in index order, then
    /// `(0 : 1)`. `base` must be a prime field and `group` a PGL₂ over an
    /// extension of it.
    pub fn new(base: Arc<ExtField>, delta: FieldElem, group: Pgl2) -> Result<Self, GroupError> {
        if !base.contains(&delta) {
            return Err(GroupError::FieldMismatch);
        }
        if delta.is_zero() || base.is_square(&delta)? {
            return Err(GroupError::SquareDelta);
        }
        let amb = group.field();
        let d = amb.embed(&delta, &base)?;
        let mut reps: Vec<(FieldElem, FieldElem)> =
            base.elements().map(|t| (base.one(), t)).collect();
        reps.push((base.zero(), base.one()));
        let mut elements = Vec::with_capacity(reps.len());
        let mut lookup = HashMap::new();
        for (x, y) in reps {
            let (xe, ye) = (amb.embed(&x, &base)?, amb.embed(&y, &base)?);
            let matrix = group.proj([xe.clone(), amb.mul(&d, &ye), ye, xe])?;
            lookup.insert(matrix.clone(), elements.len());
            elements.push(TorusElement { x, y, matrix });
        }
        Ok(Self {
            base,
            delta,
            group,
            elements,
            lookup,
        })
    }

    pub fn base(&self) -> &ExtField {
        &self.base
    }

    pub fn delta(&self) -> &FieldElem {
        &self.delta
    }

    pub fn group(&self) -> &Pgl2 {
        &self.group
    }

    pub fn elements(&self) -> &[TorusElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, m: &ProjectiveMatrix) -> Option<usize> {
        self.lookup.get(m).copied()
    }

    pub fn mul(&self, a: &TorusElement, b: &TorusElement) -> Result<TorusElement, GroupError> {
        let m = self.group.mul(&a.matrix, &b.matrix);
        self.position(&m)
            .map(|i| self.elements[i].clone())
            .ok_or(GroupError::NotInTorus)
    }

    pub fn inv(&self, a: &TorusElement) -> Result<TorusElement, GroupError> {
        let m = self.group.inv(&a.matrix);
        self.position(&m)
            .map(|i| self.elements[i].clone())
            .ok_or(GroupError::NotInTorus)
    }

    pub fn identity(&self) -> &TorusElement {
        &self.elements[0]
    }

    /// The first element in enumeration order of order exactly `q + 1`.
    pub fn generator(&self) -> &TorusElement {
        let n = self.elements.len() as u64;
        self.elements
            .iter()
            .find(|t| self.group.element_order(&t.matrix) == n)
            .expect("the torus is cyclic")
    }

    /// `t⁰, t¹, …, t^q` for the generator `t`.
    pub fn powers(&self) -> Vec<TorusElement> {
        let t = self.generator().clone();
        let mut out = vec![self.identity().clone()];
        for _ in 1..self.elements.len() {
            out.push(self.mul(out.last().expect("nonempty"), &t).expect("closed"));
        }
        out
    }
}

/// An element `(g, t)` of `G ⋊ T`, with `t` stored by its matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SdpElement {
    pub g: ProjectiveMatrix,
    pub t: ProjectiveMatrix,
}

impl Pgl2 {
    pub fn sdp_identity(&self) -> SdpElement {
        SdpElement {
            g: self.identity(),
            t: self.identity(),
        }
    }

    /// `(g₁, t₁)(g₂, t₂) = (g₁ · t₁g₂t₁⁻¹, t₁t₂)`.
    pub fn sdp_mul(&self, a: &SdpElement, b: &SdpElement) -> SdpElement {
        SdpElement {
            g: self.mul(&a.g, &self.conj(&a.t, &b.g)),
            t: self.mul(&a.t, &b.t),
        }
    }

    /// `(g, t)⁻¹ = (t⁻¹g⁻¹t, t⁻¹)`.
    pub fn sdp_inv(&self, a: &SdpElement) -> SdpElement {
        let ti = self.inv(&a.t);
        SdpElement {
            g: self.conj(&ti, &self.inv(&a.g)),
            t: ti,
        }
    }

    /// `(g', s)^{(g, t)} = (g · tg't⁻¹, tst⁻¹)`, with generators given by
    /// their index in `gens`.
    pub fn sdp_act_directed_edge(
        &self,
        h: &SdpElement,
        vertex: &ProjectiveMatrix,
        gen: usize,
        gens: &[ProjectiveMatrix],
    ) -> Result<(ProjectiveMatrix, usize), GroupError> {
        let v = self.mul(&h.g, &self.conj(&h.t, vertex));
        let s = self.conj(&h.t, &gens[gen]);
        let j = gens
            .iter()
            .position(|x| *x == s)
            .ok_or(GroupError::NotInGenerators(gen))?;
        Ok((v, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn setup(q: u64, e: usize) -> (Arc<ExtField>, Pgl2) {
        let base = Arc::new(ExtField::prime(q).unwrap());
        let amb = if e == 1 {
            base.clone()
        } else {
            Arc::new(ExtField::new(q, e).unwrap())
        };
        (base, Pgl2::new(amb))
    }

    fn torus(q: u64, e: usize) -> Torus {
        let (base, g) = setup(q, e);
        let d = base.find_nonsquare().unwrap();
        Torus::new(base, d, g).unwrap()
    }

    fn random_elem(g: &Pgl2, rng: &mut impl Rng) -> ProjectiveMatrix {
        let n = g.field().order();
        loop {
            let m = std::array::from_fn(|_| g.field().element(rng.gen_range(0..n)).unwrap());
            if let Ok(p) = g.proj(m) {
                return p;
            }
        }
    }

    #[test]
    fn scalars_collapse() {
        let (_, g) = setup(5, 1);
        assert_eq!(g.proj_ints([2, 0, 0, 2]).unwrap(), g.identity());
        let a = g.proj_ints([0, 2, 1, 0]).unwrap();
        assert_eq!(g.mul(&a, &a), g.identity());
        assert_eq!(g.proj_ints([1, 2, 2, 4]), Err(GroupError::Singular));
    }

    #[test]
    fn group_axioms() {
        let (_, g) = setup(7, 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let (a, b, c) = (
                random_elem(&g, &mut rng),
                random_elem(&g, &mut rng),
                random_elem(&g, &mut rng),
            );
            assert_eq!(g.mul(&a, &g.inv(&a)), g.identity());
            assert_eq!(g.mul(&g.mul(&a, &b), &c), g.mul(&a, &g.mul(&b, &c)));
            assert_eq!(g.conj(&a, &g.conj(&g.inv(&a), &b)), b);
            assert_eq!(g.in_psl(&g.mul(&a, &b)), g.in_psl(&a) == g.in_psl(&b));
        }
    }

    #[test]
    fn psl_is_index_two() {
        let (_, g) = setup(5, 1);
        let n = g.field().order();
        let mut all = std::collections::HashSet::new();
        for i in 0..n.pow(4) {
            let m = std::array::from_fn(|j| g.field().element((i / n.pow(j as u32)) % n).unwrap());
            if let Ok(p) = g.proj(m) {
                all.insert(p);
            }
        }
        assert_eq!(all.len() as u128, g.order());
        assert_eq!(all.iter().filter(|p| g.in_psl(p)).count(), 60);
    }

    #[test]
    fn torus_sizes_and_closure() {
        for q in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            let t = torus(q, 1);
            assert_eq!(t.len() as u64, q + 1);
            assert_eq!(*t.identity(), t.elements()[0]);
            assert_eq!(t.identity().matrix, t.group().identity());
            let set: std::collections::HashSet<_> =
                t.elements().iter().map(|e| &e.matrix).collect();
            assert_eq!(set.len() as u64, q + 1);
            for a in t.elements() {
                assert!(t.inv(a).is_ok());
                for b in t.elements() {
                    assert!(t.mul(a, b).is_ok());
                }
            }
            // commutes with [[0, δ], [1, 0]]
            let alpha = t.elements().last().unwrap().matrix.clone();
            for a in t.elements() {
                let g = t.group();
                assert_eq!(g.mul(&a.matrix, &alpha), g.mul(&alpha, &a.matrix));
            }
        }
    }

    #[test]
    fn torus_generator_is_cyclic() {
        let t = torus(5, 1);
        let g = t.generator();
        assert_eq!(t.group().element_order(&g.matrix), 6);
        let powers = t.powers();
        let set: std::collections::HashSet<_> = powers.iter().collect();
        assert_eq!(set.len(), 6);
        assert_eq!(t.mul(powers.last().unwrap(), g).unwrap(), *t.identity());
    }

    #[test]
    fn torus_rejects_square_delta() {
        let (base, g) = setup(5, 1);
        let four = base.from_int(4);
        assert_eq!(
            Torus::new(base, four, g).unwrap_err(),
            GroupError::SquareDelta
        );
    }

    #[test]
    fn torus_embeds_in_extension() {
        let t = torus(5, 2);
        assert_eq!(t.len(), 6);
        assert_eq!(t.group().element_order(&t.generator().matrix), 6);
    }

    #[test]
    fn semidirect_product_laws() {
        let t = torus(7, 1);
        let g = t.group();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let sample = |rng: &mut rand_chacha::ChaCha8Rng| SdpElement {
            g: random_elem(g, rng),
            t: t.elements()[rng.gen_range(0..t.len())].matrix.clone(),
        };
        for _ in 0..100 {
            let (a, b, c) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
            assert_eq!(
                g.sdp_mul(&g.sdp_mul(&a, &b), &c),
                g.sdp_mul(&a, &g.sdp_mul(&b, &c))
            );
            assert_eq!(g.sdp_mul(&g.sdp_inv(&a), &a), g.sdp_identity());
        }
    }

    #[test]
    fn directed_edge_action() {
        let t = torus(7, 1);
        let g = t.group();
        // a torus-stable set: the conjugates of a unipotent element, which
        // has trivial stabilizer in the torus
        let gamma = g.proj_ints([1, 1, 0, 1]).unwrap();
        let gens: Vec<_> = t
            .powers()
            .iter()
            .map(|p| g.conj(&p.matrix, &gamma))
            .collect();
        assert_eq!(
            gens.iter().collect::<std::collections::HashSet<_>>().len(),
            8
        );
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let sample = |rng: &mut rand_chacha::ChaCha8Rng| SdpElement {
            g: random_elem(g, rng),
            t: t.elements()[rng.gen_range(0..t.len())].matrix.clone(),
        };
        let v = random_elem(g, &mut rng);
        assert_eq!(
            g.sdp_act_directed_edge(&g.sdp_identity(), &v, 3, &gens)
                .unwrap(),
            (v.clone(), 3)
        );
        for _ in 0..200 {
            let (h1, h2) = (sample(&mut rng), sample(&mut rng));
            let v = random_elem(g, &mut rng);
            let i = rng.gen_range(0..gens.len());
            let (v2, i2) = g.sdp_act_directed_edge(&h2, &v, i, &gens).unwrap();
            let lhs = g.sdp_act_directed_edge(&h1, &v2, i2, &gens).unwrap();
            let rhs = g
                .sdp_act_directed_edge(&g.sdp_mul(&h1, &h2), &v, i, &gens)
                .unwrap();
            assert_eq!(lhs, rhs);
            // pure-G elements act by left multiplication
            let pure = SdpElement {
                g: h1.g.clone(),
                t: g.identity(),
            };
            assert_eq!(
                g.sdp_act_directed_edge(&pure, &v, i, &gens).unwrap(),
                (g.mul(&h1.g, &v), i)
            );
        }
        let bad = vec![gamma.clone()];
        let h = SdpElement {
            g: g.identity(),
            t: t.generator().matrix.clone(),
        };
        assert_eq!(
            g.sdp_act_directed_edge(&h, &v, 0, &bad),
            Err(GroupError::NotInGenerators(0))
        );
    }
}
