//! Reductive group actions on the plane and their linearization over the coefficient field.

use crate::error::{Error, Result};
use crate::fields::{Cyclo, Elem, Field, Scalar, UniPoly};
use crate::linalg::mat2::{self, Mat2};
use crate::plane::{AffineMap, ElementaryMap, PlaneAut};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(u32),
    FiniteAbelian(Vec<u32>),
    /// Diagonal torus t ↦ (t^a z₁, t^b z₂), transported by a conjugator.
    Torus(i64, i64),
}

/// A reductive group given by generators. A torus is represented by the image of its
/// Zariski-dense element t = 2, which has the same commutant as the whole torus.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub kind: GroupKind,
    pub generators: Vec<PlaneAut>,
    /// For a torus: the map φ with action φ∘diag(t^a, t^b)∘φ⁻¹.
    pub conjugator: Option<PlaneAut>,
}

/// Images of the generators under ρ: G → GL₂(κ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRep {
    pub images: Vec<Mat2>,
}

impl LinearRep {
    pub fn as_auts(&self) -> Vec<PlaneAut> {
        self.images.iter().map(|m| PlaneAut::from_affine(AffineMap::linear(m.clone()).expect("invertible"))).collect()
    }

    pub fn field(&self) -> Field {
        self.images[0][0][0].field()
    }

    /// Same matrices viewed over another field with the same constants.
    pub fn over(&self, field: &Field) -> LinearRep {
        let c = |e: &Elem| field.coerce(e.as_cyclo().map(|c| field.embed(&c)).unwrap_or_else(|| e.clone()));
        LinearRep { images: self.images.iter().map(|m| [[c(&m[0][0]), c(&m[0][1])], [c(&m[1][0]), c(&m[1][1])]]).collect() }
    }

    pub fn all_diagonal(&self) -> bool {
        self.images.iter().all(mat2::is_diagonal)
    }
}

impl GroupAction {
    pub fn field(&self) -> &Field {
        self.generators[0].field()
    }

    /// Finite cyclic group; checks g^n = id.
    pub fn cyclic(g: PlaneAut, n: u32) -> Result<GroupAction> {
        if !g.pow(n).is_identity() {
            return Err(Error::Schema(format!("generator does not have order dividing {n}")));
        }
        Ok(GroupAction { kind: GroupKind::Cyclic(n), generators: vec![g], conjugator: None })
    }

    /// Finite abelian group; checks orders and pairwise commutation.
    pub fn finite_abelian(gens: Vec<PlaneAut>, orders: Vec<u32>) -> Result<GroupAction> {
        if gens.len() != orders.len() || gens.is_empty() {
            return Err(Error::Schema("generators and orders differ in length".into()));
        }
        for (g, &n) in gens.iter().zip(&orders) {
            if !g.pow(n).is_identity() {
                return Err(Error::Schema(format!("generator does not have order dividing {n}")));
            }
        }
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if gens[i].compose(&gens[j])?.forward() != gens[j].compose(&gens[i])?.forward() {
                    return Err(Error::Schema("generators do not commute".into()));
                }
            }
        }
        Ok(GroupAction { kind: GroupKind::FiniteAbelian(orders), generators: gens, conjugator: None })
    }

    /// φ∘T∘φ⁻¹ for the torus T of weights (a, b).
    pub fn torus(field: &Field, a: i64, b: i64, conjugator: Option<PlaneAut>) -> Result<GroupAction> {
        let d = torus_generic_element(field, a, b)?;
        let g = match &conjugator {
            Some(phi) => PlaneAut::compose_all(&[phi, &d, &phi.inv()])?,
            None => d,
        };
        Ok(GroupAction { kind: GroupKind::Torus(a, b), generators: vec![g], conjugator })
    }

    /// Linear group with the given matrices as generators.
    pub fn linear(images: &[Mat2], orders: Option<Vec<u32>>) -> Result<GroupAction> {
        let gens: Vec<PlaneAut> =
            images.iter().map(|m| Ok(PlaneAut::from_affine(AffineMap::linear(m.clone())?))).collect::<Result<_>>()?;
        match orders {
            Some(o) if o.len() == 1 => GroupAction::cyclic(gens[0].clone(), o[0]),
            Some(o) => GroupAction::finite_abelian(gens, o),
            None => Err(Error::Schema("orders required for a finite group".into())),
        }
    }

    pub fn orders(&self) -> Vec<u32> {
        match &self.kind {
            GroupKind::Cyclic(n) => vec![*n],
            GroupKind::FiniteAbelian(v) => v.clone(),
            GroupKind::Torus(..) => vec![],
        }
    }

    pub fn is_torus(&self) -> bool {
        matches!(self.kind, GroupKind::Torus(..))
    }

    /// Conjugate every generator: ψ∘g∘ψ⁻¹.
    pub fn conjugated(&self, psi: &PlaneAut) -> Result<GroupAction> {
        let gens = self
            .generators
            .iter()
            .map(|g| PlaneAut::compose_all(&[psi, g, &psi.inv()]))
            .collect::<Result<Vec<_>>>()?;
        let conjugator = match &self.conjugator {
            Some(phi) => Some(psi.compose(phi)?),
            None if self.is_torus() => Some(psi.clone()),
            None => None,
        };
        Ok(GroupAction { kind: self.kind.clone(), generators: gens, conjugator })
    }
}

/// diag(2^a, 2^b).
pub fn torus_generic_element(field: &Field, a: i64, b: i64) -> Result<PlaneAut> {
    let two = field.int(2);
    PlaneAut::diagonal(two.powi(a)?, two.powi(b)?)
}

/// Conjugate a finite-order element into one amalgam factor: returns (c, r) with r = c⁻¹∘g∘c
/// affine or elementary.
pub fn cyclic_reduce(g: &PlaneAut) -> Result<(PlaneAut, PlaneAut)> {
    let field = g.field().clone();
    // p maps g to cur: cur = p∘g∘p⁻¹
    let mut p = PlaneAut::identity(&field);
    let mut cur = g.clone();
    let cap = g.word().len() + 2;
    for _ in 0..cap {
        let w = cur.word();
        let m = w.len();
        if m == 0 {
            return Ok((p.inv(), cur));
        }
        let a1 = &w.affines[0];
        let outer = &w.affines[m];
        let joined = a1.compose(outer);
        if !joined.is_triangular() {
            return Err(Error::NotFiniteOrder(format!("cyclically reduced word of length {}", 2 * m)));
        }
        if m == 1 {
            let h = PlaneAut::from_affine(a1.clone());
            cur = PlaneAut::compose_all(&[&h, &cur, &h.inv()])?;
            p = h.compose(&p)?;
            return Ok((p.inv(), cur));
        }
        let e1 = PlaneAut::from_elementary(&w.elementaries[0]);
        let h = e1.compose(&PlaneAut::from_affine(a1.clone()))?;
        let next = PlaneAut::compose_all(&[&h, &cur, &h.inv()])?;
        if next.word().len() >= m {
            return Err(Error::NotFiniteOrder("conjugation did not shorten the word".into()));
        }
        cur = next;
        p = h.compose(&p)?;
    }
    Err(Error::NotFiniteOrder("reduction did not terminate".into()))
}

/// Eigenvalue candidates: the roots of unity of κ, or explicit values for a torus.
fn roots_of_unity(field: &Field) -> Vec<Elem> {
    let base = field.base();
    let n = base.roots_of_unity_count();
    let gen = if base.k() % 2 == 1 { Cyclo::zeta(base).neg() } else { Cyclo::zeta(base) };
    (0..n).map(|i| field.embed(&gen.pow(i as u64))).collect()
}

/// Conjugator c with c⁻¹∘M∘c diagonal, using eigenvalues from `candidates`.
fn diagonalize(m: &Mat2, candidates: &[Elem], order_hint: Option<(&Elem, &Elem)>) -> Result<(AffineMap, Mat2)> {
    let f = m[0][0].field();
    if mat2::is_diagonal(m) {
        if let Some((l0, l1)) = order_hint {
            if m[0][0] == *l1 && m[1][1] == *l0 && l0 != l1 {
                let sw = AffineMap::swap(&f);
                return Ok((sw, mat2::diag(m[1][1].clone(), m[0][0].clone())));
            }
        }
        return Ok((AffineMap::identity(&f), m.clone()));
    }
    let tr = mat2::trace(m);
    let det = mat2::det(m);
    let roots: Vec<Elem> = candidates
        .iter()
        .filter(|l| l.mul(l).sub(&tr.mul(l)).add(&det).is_zero())
        .cloned()
        .collect();
    let mut eig: Vec<Elem> = Vec::new();
    for r in roots {
        if !eig.contains(&r) {
            eig.push(r);
        }
    }
    if eig.len() == 1 && eig[0].mul(&eig[0]) == det && eig[0].add(&eig[0]) == tr {
        return Err(Error::GroupReductionFailed("non-diagonalizable linear part".into()));
    }
    if eig.len() != 2 {
        return Err(Error::GroupReductionFailed("eigenvalues outside the coefficient field".into()));
    }
    if let Some((l0, _)) = order_hint {
        if eig[1] == *l0 {
            eig.swap(0, 1);
        }
    }
    let vec_for = |l: &Elem| -> [Elem; 2] {
        // kernel of M − l
        let a = m[0][0].sub(l);
        let b = m[0][1].clone();
        if !a.is_zero() || !b.is_zero() {
            [b, a.neg()]
        } else {
            let c = m[1][0].clone();
            let d = m[1][1].sub(l);
            [d, c.neg()]
        }
    };
    let v0 = vec_for(&eig[0]);
    let v1 = vec_for(&eig[1]);
    let p = [[v0[0].clone(), v1[0].clone()], [v0[1].clone(), v1[1].clone()]];
    let c = AffineMap::linear(p)?;
    Ok((c, mat2::diag(eig[0].clone(), eig[1].clone())))
}

/// Linearize one element that lies in an amalgam factor. Returns c with c⁻¹∘r∘c linear diagonal.
fn linearize_reduced(r: &PlaneAut, order: Option<u32>, eig: &[Elem], hint: Option<(&Elem, &Elem)>) -> Result<(PlaneAut, Mat2)> {
    let field = r.field().clone();
    let mut c = PlaneAut::identity(&field);
    let mut cur = r.clone();
    if !cur.is_affine() {
        // r = (α z₁ + p(z₂), β z₂ + β′) up to the canonical word
        let e = elementary_form(&cur)?;
        let one = Elem::one(&field);
        if e.beta == one {
            if !e.beta_p.is_zero() {
                return Err(Error::NotFiniteOrder("translation along z₂".into()));
            }
        } else {
            let s = e.beta_p.div(&one.sub(&e.beta))?;
            let t = PlaneAut::from_affine(AffineMap::translation(Elem::zero(&field), s));
            cur = PlaneAut::compose_all(&[&t.inv(), &cur, &t])?;
            c = c.compose(&t)?;
        }
        let e = elementary_form(&cur)?;
        let mut q = Vec::new();
        for (i, pi) in e.p.coeffs().iter().enumerate() {
            let bi = e.beta.pow(i as u64);
            if pi.is_zero() {
                q.push(Elem::zero(&field));
            } else if bi == e.alpha {
                return Err(Error::NotFiniteOrder("resonant elementary term".into()));
            } else {
                q.push(pi.div(&bi.sub(&e.alpha))?);
            }
        }
        let eq = PlaneAut::from_elementary(&ElementaryMap::shear(UniPoly::new(&field, q)));
        cur = PlaneAut::compose_all(&[&eq.inv(), &cur, &eq])?;
        c = c.compose(&eq)?;
    }
    let a = AffineMap::from_endo(cur.forward())?;
    if !a.is_linear() {
        let b = match order {
            Some(n) => {
                // barycenter of the orbit of the origin
                let mut pt = [Elem::zero(&field), Elem::zero(&field)];
                let mut sum = [Elem::zero(&field), Elem::zero(&field)];
                for _ in 0..n {
                    sum = [sum[0].add(&pt[0]), sum[1].add(&pt[1])];
                    pt = a.apply_point(&pt);
                }
                let ni = field.int(n as i64).inv()?;
                [sum[0].mul(&ni), sum[1].mul(&ni)]
            }
            None => {
                // fixed point of z ↦ Mz + t
                let m_minus = [
                    [a.m[0][0].sub(&Elem::one(&field)), a.m[0][1].clone()],
                    [a.m[1][0].clone(), a.m[1][1].sub(&Elem::one(&field))],
                ];
                let sol = crate::linalg::solve(
                    &field,
                    &vec![m_minus[0].to_vec(), m_minus[1].to_vec()],
                    &[a.t[0].neg(), a.t[1].neg()],
                    2,
                )
                .ok_or_else(|| Error::NotFiniteOrder("affine map without fixed point".into()))?;
                [sol[0].clone(), sol[1].clone()]
            }
        };
        let t = PlaneAut::from_affine(AffineMap::translation(b[0].clone(), b[1].clone()));
        cur = PlaneAut::compose_all(&[&t.inv(), &cur, &t])?;
        c = c.compose(&t)?;
    }
    let m = AffineMap::from_endo(cur.forward())?.m;
    let (p, d) = diagonalize(&m, eig, hint)?;
    let pa = PlaneAut::from_affine(p);
    c = c.compose(&pa)?;
    Ok((c, d))
}

/// Read (α, β, β′, p) of an automorphism whose word has length ≤ 1 and lies in E.
fn elementary_form(g: &PlaneAut) -> Result<ElementaryMap> {
    let f = g.forward();
    let field = g.field().clone();
    if f.p2.degree().unwrap_or(0) > 1 || !f.p2.coeff(1, 0).is_zero() {
        return Err(Error::GroupReductionFailed("element is not elementary".into()));
    }
    let alpha = f.p1.coeff(1, 0);
    let rest = f.p1.sub(&crate::poly::BiPoly::z1(&field).scale(&alpha));
    let p = rest.as_upoly_z2().ok_or_else(|| Error::GroupReductionFailed("element is not elementary".into()))?;
    ElementaryMap::new(alpha, f.p2.coeff(0, 1), f.p2.coeff(0, 0), p)
}

/// ψ and ρ with ψ∘g∘ψ⁻¹ = ρ(g) for every generator.
pub fn linearize_over_field(g: &GroupAction) -> Result<(PlaneAut, LinearRep)> {
    let field = g.field().clone();
    let (candidates, torus_eig) = match g.kind {
        GroupKind::Torus(a, b) => {
            let two = field.int(2);
            let (l0, l1) = (two.powi(a)?, two.powi(b)?);
            (vec![l0.clone(), l1.clone()], Some((l0, l1)))
        }
        _ => (roots_of_unity(&field), None),
    };
    let orders = g.orders();
    let mut psi = PlaneAut::identity(&field);
    let mut images: Vec<Mat2> = Vec::new();
    let mut current: Vec<PlaneAut> = g.generators.clone();
    for i in 0..current.len() {
        let gi = current[i].clone();
        let (c, r) = cyclic_reduce(&gi)?;
        let hint = torus_eig.as_ref().map(|(a, b)| (a, b));
        let (c2, _) = linearize_reduced(&r, orders.get(i).copied(), &candidates, hint)?;
        let conj = c.compose(&c2)?; // conj⁻¹∘gi∘conj is diagonal
        let step = conj.inv();
        psi = step.compose(&psi)?;
        for h in current.iter_mut() {
            *h = PlaneAut::compose_all(&[&step, h, &conj])?;
        }
        images.clear();
        for h in &current[..=i] {
            if !h.is_affine() {
                return Err(Error::GroupReductionFailed("earlier generator lost linearity".into()));
            }
            let a = AffineMap::from_endo(h.forward())?;
            if !a.is_linear() {
                return Err(Error::GroupReductionFailed("earlier generator gained a translation".into()));
            }
            images.push(a.m);
        }
    }
    let rho = LinearRep { images };
    if !verify_linearization(&psi, g, &rho) {
        return Err(Error::GroupReductionFailed("conjugation identity failed".into()));
    }
    Ok((psi, rho))
}

/// Exact check of ψ∘g∘ψ⁻¹ = ρ(g) per generator.
pub fn verify_linearization(psi: &PlaneAut, g: &GroupAction, rho: &LinearRep) -> bool {
    if rho.images.len() != g.generators.len() {
        return false;
    }
    // ρ may be given over the constant field of g
    g.generators.iter().zip(rho.over(g.field()).as_auts()).all(|(gen, r)| {
        // compare ψ∘g with ρ(g)∘ψ to avoid inverting ψ twice
        match (psi.compose(gen), r.compose(psi)) {
            (Ok(a), Ok(b)) => a.forward() == b.forward(),
            _ => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::PlaneEndo;
    use crate::poly::BiPoly;

    #[test]
    fn reduce_conjugated_involution() {
        let f = Field::rationals();
        let phi = PlaneAut::invert(
            &PlaneEndo::new(BiPoly::from_ints(&f, &[(1, 0, 1), (0, 2, 1)]), BiPoly::z2(&f)).unwrap(),
        )
        .unwrap();
        let rho0 = PlaneAut::diagonal(f.int(1), f.int(-1)).unwrap();
        let g = PlaneAut::compose_all(&[&phi, &rho0, &phi.inv()]).unwrap();
        let (c, r) = cyclic_reduce(&g).unwrap();
        assert!(r.word().len() <= 1);
        assert_eq!(PlaneAut::compose_all(&[&c.inv(), &g, &c]).unwrap().forward(), r.forward());
        let ga = GroupAction::cyclic(g, 2).unwrap();
        let (psi, rho) = linearize_over_field(&ga).unwrap();
        assert!(verify_linearization(&psi, &ga, &rho));
        let swapped = LinearRep { images: vec![mat2::diag(rho.images[0][1][1].clone(), rho.images[0][0][0].clone())] };
        assert!(!verify_linearization(&psi, &ga, &swapped));
    }

    #[test]
    fn elementary_involution() {
        let f = Field::rationals();
        let g = PlaneAut::invert(
            &PlaneEndo::new(BiPoly::from_ints(&f, &[(1, 0, -1), (0, 2, 1)]), BiPoly::z2(&f)).unwrap(),
        )
        .unwrap();
        let ga = GroupAction::cyclic(g, 2).unwrap();
        let (psi, rho) = linearize_over_field(&ga).unwrap();
        assert_eq!(rho.images[0], mat2::diag(f.int(-1), f.int(1)));
        assert!(verify_linearization(&psi, &ga, &rho));
        assert!(!verify_linearization(&PlaneAut::identity(&f), &ga, &rho));
    }

    #[test]
    fn parabolic_is_already_reduced() {
        let f = Field::rationals();
        let g = PlaneAut::invert(
            &PlaneEndo::new(BiPoly::from_ints(&f, &[(1, 0, 1), (0, 2, 1)]), BiPoly::z2(&f)).unwrap(),
        )
        .unwrap();
        let (c, r) = cyclic_reduce(&g).unwrap();
        assert_eq!(r, g);
        assert!(c.is_identity());
    }
}
