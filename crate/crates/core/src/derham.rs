//! Whitney–de Rham complex, symplectic Hodge star, Brylinski differential and
//! exact Betti numbers.
//!
//! `d` descends to `Ω/I`. The star is `C^∞`-linear but does not preserve the
//! truncated ideal, so Poisson-side forms live in `Ω/∗I`, where `δ` descends
//! because `δ = ±∗d∗`. [`WhitneyForm::dual`] records the side.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::Serialize;

use crate::element::{form_indices, form_sets, wedge_sign, FormSet, Key, MixedElement, VarKind};
use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, SparseVec};
use crate::policy::TruncationPolicy;
use crate::scalar::{factorial, Scalar};
use crate::weyl::PoissonTensor;
use crate::whitney::{WhitneyClass, WhitneyQuotient};

/// `Λ^kΠ(dx^S, dx^T) = det[Π^{s_a t_b}]`.
pub fn lambda_pi_basis(pt: &PoissonTensor, s: FormSet, t: FormSet) -> Scalar {
    let si = form_indices(s);
    let ti = form_indices(t);
    if si.len() != ti.len() {
        return Scalar::zero();
    }
    let m: Vec<Vec<Scalar>> = si.iter().map(|&a| ti.iter().map(|&b| pt.pi(a, b).clone()).collect()).collect();
    linalg::det(&m)
}

/// `Λ^kΠ(α, β)` for ambient forms of equal degree.
pub fn lambda_pi_forms(a: &MixedElement, b: &MixedElement, pt: &PoissonTensor) -> Result<MixedElement> {
    a.check_dim(b)?;
    let (ca, cb) = (a.form_components(), b.form_components());
    let degs = |c: &BTreeMap<FormSet, MixedElement>| {
        let mut v: Vec<usize> = c.keys().map(|s| s.count_ones() as usize).collect();
        v.dedup();
        v
    };
    let (da, db) = (degs(&ca), degs(&cb));
    if da.len() > 1 || db.len() > 1 || (!da.is_empty() && !db.is_empty() && da != db) {
        return Err(Error::DegreeMismatch(da.first().copied().unwrap_or(0), db.first().copied().unwrap_or(0)));
    }
    let pol = TruncationPolicy::unbounded(a.n());
    let mut out = MixedElement::zero(a.dim());
    for (s, fa) in &ca {
        for (t, fb) in &cb {
            let c = lambda_pi_basis(pt, *s, *t);
            if !c.is_zero() {
                out.add_scaled(&fa.mul(fb, &pol)?, &c);
            }
        }
    }
    Ok(out)
}

/// `Ω = ½ Ω_{ij} dx^i ∧ dx^j` with `Ω_{ij} = ω_{ji}`.
pub fn symplectic_form(pt: &PoissonTensor) -> MixedElement {
    let d = pt.dim();
    let mut out = MixedElement::zero(d);
    for i in 0..d {
        for j in (i + 1)..d {
            let c = pt.omega(j, i);
            if !c.is_zero() {
                out.add_term(Key { forms: 1 << i | 1 << j, ..Key::one() }, c.clone());
            }
        }
    }
    out
}

/// Liouville form `ν = Ωⁿ / n!`.
pub fn volume_form(pt: &PoissonTensor) -> MixedElement {
    let pol = TruncationPolicy::unbounded(pt.n());
    let w = symplectic_form(pt);
    let mut v = MixedElement::one(pt.dim());
    for _ in 0..pt.n() {
        v = v.mul(&w, &pol).unwrap();
    }
    v.scale(&factorial(pt.n() as u32).inv().unwrap())
}

/// Symplectic Hodge star, tabulated on basis forms.
#[derive(Clone, Debug)]
pub struct HodgeStar {
    dim: usize,
    table: BTreeMap<FormSet, Vec<(FormSet, Scalar)>>,
}

impl HodgeStar {
    /// Solve `dx^S ∧ ∗dx^T = Λ^kΠ(dx^S, dx^T) ν` for every basis `T`.
    pub fn new(pt: &PoissonTensor) -> Result<Self> {
        let dim = pt.dim();
        let top: FormSet = ((1u32 << dim) - 1) as FormSet;
        let vol = volume_form(pt).coeff(&Key { forms: top, ..Key::one() });
        let mut table = BTreeMap::new();
        for k in 0..=dim {
            let rows = form_sets(dim, k);
            let unknowns = form_sets(dim, dim - k);
            // m[S][U] = coefficient of the top form in dx^S ∧ dx^U
            let m: Vec<Vec<Scalar>> = rows
                .iter()
                .map(|&s| {
                    unknowns
                        .iter()
                        .map(|&u| wedge_sign(s, u).map(Scalar::from_int).unwrap_or_else(Scalar::zero))
                        .collect()
                })
                .collect();
            let inv = linalg::inverse(&m).ok_or_else(|| Error::Invalid("singular wedge pairing".into()))?;
            for &t in &rows {
                let rhs: Vec<Scalar> = rows.iter().map(|&s| &lambda_pi_basis(pt, s, t) * &vol).collect();
                let mut sol = Vec::new();
                for (ui, &u) in unknowns.iter().enumerate() {
                    let mut c = Scalar::zero();
                    for (si, r) in rhs.iter().enumerate() {
                        if !r.is_zero() && !inv[ui][si].is_zero() {
                            c += &(&inv[ui][si] * r);
                        }
                    }
                    if !c.is_zero() {
                        sol.push((u, c));
                    }
                }
                table.insert(t, sol);
            }
        }
        Ok(HodgeStar { dim, table })
    }

    pub fn basis(&self, s: FormSet) -> &[(FormSet, Scalar)] {
        &self.table[&s]
    }

    /// `C^∞`-linear extension to ambient forms.
    pub fn apply(&self, a: &MixedElement) -> MixedElement {
        let mut out = MixedElement::zero(self.dim);
        for (k, c) in a.terms() {
            for (u, w) in &self.table[&k.forms] {
                out.add_term(Key { forms: *u, ..*k }, c * w);
            }
        }
        out
    }
}

/// Exterior derivative on ambient forms.
pub fn exterior_d(a: &MixedElement) -> MixedElement {
    crate::fedosov::d_x(a)
}

/// `{f, x_s} = Π^{as} ∂_a f`.
fn bracket_with_coordinate(f: &MixedElement, s: usize, pt: &PoissonTensor) -> MixedElement {
    let mut out = MixedElement::zero(f.dim());
    for a in 0..f.dim() {
        let c = pt.pi(a, s);
        if !c.is_zero() {
            out.add_scaled(&f.partial0(VarKind::Base, a), c);
        }
    }
    out
}

/// Brylinski `δ` in coordinates: `δ(f dx^{s_1}∧…∧dx^{s_k}) = Σ_i (-1)^{i+1} {f, x_{s_i}} dx^{S∖s_i}`
/// (the second sum of the general formula vanishes since `{x_a, x_b}` is constant).
pub fn brylinski_delta(a: &MixedElement, pt: &PoissonTensor) -> MixedElement {
    let mut out = MixedElement::zero(a.dim());
    for (s, f) in a.form_components() {
        for (i, &si) in form_indices(s).iter().enumerate() {
            let b = bracket_with_coordinate(&f, si, pt).with_forms(s & !(1 << si));
            if i % 2 == 0 {
                out.add_assign_ref(&b);
            } else {
                out = &out - &b;
            }
        }
    }
    out
}

/// The two-sum formula on a decomposable `f_0 df_1∧…∧df_k`.
pub fn brylinski_delta_decomposable(f0: &MixedElement, fs: &[MixedElement], pt: &PoissonTensor) -> Result<MixedElement> {
    let pol = TruncationPolicy::unbounded(f0.n());
    let wedge_d = |skip: &[usize]| -> Result<MixedElement> {
        let mut w = MixedElement::one(f0.dim());
        for (j, f) in fs.iter().enumerate() {
            if !skip.contains(&j) {
                w = w.mul(&exterior_d(f), &pol)?;
            }
        }
        Ok(w)
    };
    let br = |f: &MixedElement, g: &MixedElement| crate::weyl::base_poisson(f, g, pt);
    let mut out = MixedElement::zero(f0.dim());
    for i in 0..fs.len() {
        let t = br(f0, &fs[i])?.mul(&wedge_d(&[i])?, &pol)?;
        // (-1)^{i+1} with 1-based i
        if i % 2 == 0 {
            out.add_assign_ref(&t);
        } else {
            out = &out - &t;
        }
    }
    for i in 0..fs.len() {
        for j in (i + 1)..fs.len() {
            let t = f0.mul(&exterior_d(&br(&fs[i], &fs[j])?), &pol)?.mul(&wedge_d(&[i, j])?, &pol)?;
            if (i + j) % 2 == 0 {
                out.add_assign_ref(&t);
            } else {
                out = &out - &t;
            }
        }
    }
    Ok(out)
}

/// `(-1)^{k+1} ∗d∗` applied degree by degree.
pub fn delta_via_star(a: &MixedElement, hs: &HodgeStar) -> MixedElement {
    let mut out = MixedElement::zero(a.dim());
    for k in 0..=a.dim() {
        let part = a.form_part(k);
        if part.is_zero() {
            continue;
        }
        let v = hs.apply(&exterior_d(&hs.apply(&part)));
        if k % 2 == 1 {
            out.add_assign_ref(&v);
        } else {
            out = &out - &v;
        }
    }
    out
}

/// A class of forms modulo the truncated ideal (`dual == false`) or modulo
/// its Hodge transport (`dual == true`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhitneyForm {
    pub order: i64,
    pub dual: bool,
    pub rep: MixedElement,
}

/// Form-level operations over a fixed quotient and Poisson tensor.
pub struct FormCalculus<'a> {
    pub q: &'a WhitneyQuotient,
    pub pt: &'a PoissonTensor,
    pub hs: HodgeStar,
}

impl<'a> FormCalculus<'a> {
    pub fn new(q: &'a WhitneyQuotient, pt: &'a PoissonTensor) -> Result<Self> {
        if q.dim() != pt.dim() {
            return Err(Error::DimensionMismatch { left: q.dim(), right: pt.dim() });
        }
        Ok(FormCalculus { q, pt, hs: HodgeStar::new(pt)? })
    }

    fn normal_primal(&self, a: &MixedElement, order: i64) -> Result<MixedElement> {
        let mut out = MixedElement::zero(a.dim());
        for (s, f) in a.form_components() {
            if f.terms().any(|(k, _)| k.hbar != 0 || k.beta.degree() != 0) {
                return Err(Error::Invalid("Whitney forms carry base coefficients only".into()));
            }
            out.add_assign_ref(&self.q.evaluator(order, s).normal_form(&f)?.with_forms(s));
        }
        Ok(out)
    }

    /// Class in `Ω/I` at `order`.
    pub fn project(&self, a: &MixedElement, order: i64) -> Result<WhitneyForm> {
        Ok(WhitneyForm { order, dual: false, rep: self.normal_primal(a, order)? })
    }

    /// Class in `Ω/∗I` at `order`: `∗ proj(∗a)`.
    pub fn project_dual(&self, a: &MixedElement, order: i64) -> Result<WhitneyForm> {
        let p = self.normal_primal(&self.hs.apply(a), order)?;
        Ok(WhitneyForm { order, dual: true, rep: self.hs.apply(&p) })
    }

    fn reproject(&self, a: &MixedElement, order: i64, dual: bool) -> Result<WhitneyForm> {
        if dual {
            self.project_dual(a, order)
        } else {
            self.project(a, order)
        }
    }

    pub fn d(&self, w: &WhitneyForm) -> Result<WhitneyForm> {
        if w.dual {
            return Err(Error::Invalid("d acts on de Rham-side forms".into()));
        }
        self.project(&exterior_d(&w.rep), w.order)
    }

    pub fn hodge_star(&self, w: &WhitneyForm) -> Result<WhitneyForm> {
        self.reproject(&self.hs.apply(&w.rep), w.order, !w.dual)
    }

    /// Brylinski `δ` by the coordinate formula.
    pub fn delta(&self, w: &WhitneyForm) -> Result<WhitneyForm> {
        if !w.dual {
            return Err(Error::Invalid("delta acts on Poisson-side forms".into()));
        }
        self.project_dual(&brylinski_delta(&w.rep, self.pt), w.order)
    }

    /// `(-1)^{k+1} ∗d∗` through the class-level operations.
    pub fn delta_by_star(&self, w: &WhitneyForm) -> Result<WhitneyForm> {
        let s = self.hodge_star(w)?;
        let v = self.hodge_star(&self.d(&s)?)?;
        let mut out = MixedElement::zero(w.rep.dim());
        for k in 0..=w.rep.dim() {
            let part = v.rep.form_part(k);
            // v has degree k exactly when w had degree k + 1
            if k % 2 == 0 {
                out.add_assign_ref(&part);
            } else {
                out = &out - &part;
            }
        }
        self.project_dual(&out, w.order)
    }

    /// `Λ^kΠ(α, β)` as a class `k` orders lower.
    pub fn lambda_pi(&self, a: &WhitneyForm, b: &WhitneyForm) -> Result<WhitneyClass> {
        let k = a.rep.max_form_degree().max(b.rep.max_form_degree()) as i64;
        let v = lambda_pi_forms(&a.rep, &b.rep, self.pt)?;
        self.q.project_at(&v, a.order.min(b.order) - k)
    }

    /// Basis of `Ω^k/I` at `order`: `x^m dx^S` over standard monomials.
    pub fn primal_basis(&self, k: usize, order: i64) -> Vec<MixedElement> {
        let dim = self.q.dim();
        let mut out = Vec::new();
        for s in form_sets(dim, k) {
            let ev = self.q.evaluator(order, s);
            for m in &ev.standard {
                out.push(MixedElement::term(dim, Key { alpha: *m, forms: s, ..Key::one() }, Scalar::one()));
            }
        }
        out
    }

    fn offsets(&self, k: usize, order: i64) -> BTreeMap<FormSet, usize> {
        let mut off = BTreeMap::new();
        let mut at = 0;
        for s in form_sets(self.q.dim(), k) {
            off.insert(s, at);
            at += self.q.evaluator(order, s).rank();
        }
        off
    }

    /// Coordinates of a homogeneous degree-`k` primal form in [`Self::primal_basis`].
    pub fn primal_coordinates(&self, a: &MixedElement, k: usize, order: i64) -> Result<SparseVec> {
        let off = self.offsets(k, order);
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (s, f) in a.form_components() {
            let Some(o) = off.get(&s) else {
                return Err(Error::DegreeMismatch(s.count_ones() as usize, k));
            };
            for (i, c) in self.q.evaluator(order, s).coordinates(&f)? {
                acc.insert(o + i, c);
            }
        }
        Ok(linalg::sparse_from_map(acc))
    }

    /// Betti numbers of `(Ω/I, d)` at `order`.
    pub fn cohomology_dims(&self, order: i64) -> Result<Vec<usize>> {
        let dim = self.q.dim();
        let sizes: Vec<usize> = (0..=dim).map(|k| self.primal_basis(k, order).len()).collect();
        let mut ranks = vec![0usize; dim + 1];
        for k in 0..dim {
            let mut e = Echelon::new(false);
            for b in self.primal_basis(k, order) {
                e.insert(&self.primal_coordinates(&exterior_d(&b), k + 1, order)?);
            }
            ranks[k] = e.rank();
        }
        Ok(betti(&sizes, &ranks, true))
    }

    /// Dimensions of `H^δ_k` on `(Ω/∗I, δ)` at `order`, with `δ` from the
    /// coordinate formula.
    pub fn poisson_homology_dims(&self, order: i64) -> Result<Vec<usize>> {
        let dim = self.q.dim();
        let sizes: Vec<usize> = (0..=dim).map(|k| self.primal_basis(dim - k, order).len()).collect();
        let mut ranks = vec![0usize; dim + 1];
        for k in 1..=dim {
            let mut e = Echelon::new(false);
            for b in self.primal_basis(dim - k, order) {
                let dual = self.hs.apply(&b);
                let image = self.hs.apply(&brylinski_delta(&dual, self.pt));
                e.insert(&self.primal_coordinates(&image, dim - k + 1, order)?);
            }
            ranks[k] = e.rank();
        }
        Ok(betti(&sizes, &ranks, false))
    }
}

/// `b_k = size_k - rank(out of k) - rank(into k)`; `up` says whether the
/// differential raises degree.
fn betti(sizes: &[usize], ranks: &[usize], up: bool) -> Vec<usize> {
    let top = sizes.len() - 1;
    (0..=top)
        .map(|k| {
            let into = if up {
                if k > 0 {
                    ranks[k - 1]
                } else {
                    0
                }
            } else if k < top {
                ranks[k + 1]
            } else {
                0
            };
            sizes[k] - ranks[k] - into
        })
        .collect()
}

/// Betti table for reports.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BettiTable {
    pub subset: String,
    pub jet_order: i64,
    pub de_rham: Vec<usize>,
    pub poisson: Vec<usize>,
    pub de_rham_next_order: Vec<usize>,
}

impl BettiTable {
    pub fn duality_holds(&self) -> bool {
        let top = self.de_rham.len() - 1;
        (0..=top).all(|q| self.poisson[q] == self.de_rham[top - q])
    }

    pub fn stable(&self) -> bool {
        self.de_rham == self.de_rham_next_order
    }
}

pub fn betti_table(name: &str, q: &WhitneyQuotient, pt: &PoissonTensor) -> Result<BettiTable> {
    let fc = FormCalculus::new(q, pt)?;
    let n = q.jet_order;
    Ok(BettiTable {
        subset: name.to_string(),
        jet_order: n,
        de_rham: fc.cohomology_dims(n)?,
        poisson: fc.poisson_homology_dims(n)?,
        de_rham_next_order: fc.cohomology_dims(n + 1)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_element;
    use crate::whitney::SubsetModel;

    fn p(s: &str, n: usize) -> MixedElement {
        parse_element(s, &TruncationPolicy::unbounded(n)).unwrap()
    }

    #[test]
    fn lambda_examples() {
        let pt = PoissonTensor::darboux(1);
        assert_eq!(lambda_pi_forms(&p("x1", 1), &p("x2", 1), &pt).unwrap(), p("x1*x2", 1));
        assert_eq!(lambda_pi_forms(&p("dx1", 1), &p("dx2", 1), &pt).unwrap(), p("1", 1));
        assert!(lambda_pi_forms(&p("dx1", 1), &p("dx1", 1), &pt).unwrap().is_zero());
        assert!(lambda_pi_forms(&p("dx1", 1), &p("dx1^dx2", 1), &pt).is_err());
    }

    #[test]
    fn star_examples() {
        let hs = HodgeStar::new(&PoissonTensor::darboux(1)).unwrap();
        assert_eq!(hs.apply(&p("1", 1)), p("dx1^dx2", 1));
        assert_eq!(hs.apply(&p("dx1", 1)), p("dx1", 1));
        for n in 1..=2 {
            let hs = HodgeStar::new(&PoissonTensor::darboux(n)).unwrap();
            for k in 0..=2 * n {
                for s in form_sets(2 * n, k) {
                    let f = MixedElement::term(2 * n, Key { forms: s, ..Key::one() }, Scalar::one());
                    assert_eq!(hs.apply(&hs.apply(&f)), f);
                }
            }
        }
    }

    #[test]
    fn delta_examples() {
        let pt = PoissonTensor::darboux(1);
        let hs = HodgeStar::new(&pt).unwrap();
        assert_eq!(brylinski_delta(&p("x1*dx2", 1), &pt), p("1", 1));
        assert!(brylinski_delta(&p("dx1", 1), &pt).is_zero());
        let w = p("x1*x2*dx1^dx2", 1);
        let v = brylinski_delta(&w, &pt);
        assert_eq!(v, p("-x2*dx1 - x1*dx2", 1));
        assert_eq!(v, delta_via_star(&w, &hs));
        let dec = brylinski_delta_decomposable(&p("x1*x2", 1), &[p("x1", 1), p("x2", 1)], &pt).unwrap();
        assert_eq!(dec, v);
    }

    #[test]
    fn d_examples() {
        let x = SubsetModel::catalogue("point", 1).unwrap();
        let q = WhitneyQuotient::new(&x, &TruncationPolicy::new(1, 2, 4, 0)).unwrap();
        let pt = PoissonTensor::darboux(1);
        let fc = FormCalculus::new(&q, &pt).unwrap();
        let f = fc.project(&p("x1", 1), 2).unwrap();
        assert_eq!(fc.d(&f).unwrap().rep, p("dx1", 1));
        let g = fc.project(&p("x1*dx2", 1), 2).unwrap();
        assert_eq!(fc.d(&g).unwrap().rep, p("dx1^dx2", 1));
    }

    #[test]
    fn betti_numbers_n1() {
        let pt = PoissonTensor::darboux(1);
        for (name, want) in [("point", vec![1, 0, 0]), ("axis", vec![1, 0, 0]), ("cross", vec![1, 0, 0]), ("two-points", vec![2, 0, 0])] {
            let x = SubsetModel::catalogue(name, 1).unwrap();
            let q = WhitneyQuotient::new(&x, &TruncationPolicy::new(1, 2, 4, 0)).unwrap();
            let t = betti_table(name, &q, &pt).unwrap();
            assert_eq!(t.de_rham, want, "{}", name);
            assert!(t.duality_holds(), "{} {:?}", name, t);
            assert!(t.stable());
        }
    }
}
