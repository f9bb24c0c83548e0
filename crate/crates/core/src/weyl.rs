//! The formal Weyl algebra fiber: Moyal–Weyl product, Fedosov degree and the
//! `δ`/`δ⁻¹` homotopy operators.
//!
//! Convention: `a∘b = Σ_k ((-iħ/2)^k / k!) μ(Π̂^k(a⊗b))`, with `Π̂` built
//! from the full antisymmetric matrix `Π^{ij}` acting on fiber variables.
//! Then `[y^i, y^j]_∘ = -iħ Π^{ij}` exactly.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num::{One, Zero};

use crate::element::{form_degree, interior_sign, wedge_sign, Key, MixedElement, MultiIndex, VarKind};
use crate::error::{Error, Result};
use crate::linalg;
use crate::policy::TruncationPolicy;
use crate::scalar::{factorial, falling, Scalar};

/// One term `c · ∂^p ⊗ ∂^q` of `Π̂^k`.
#[derive(Clone, Debug)]
pub struct OpTerm {
    pub p: MultiIndex,
    pub q: MultiIndex,
    pub c: Scalar,
}

/// Constant Poisson tensor `Π^{ij} = {x^i, x^j}` with inverse `ω = Π⁻¹`.
pub struct PoissonTensor {
    n: usize,
    pi: Vec<Vec<Scalar>>,
    omega: Vec<Vec<Scalar>>,
    powers: Mutex<Vec<Arc<Vec<OpTerm>>>>,
}

impl Clone for PoissonTensor {
    fn clone(&self) -> Self {
        PoissonTensor {
            n: self.n,
            pi: self.pi.clone(),
            omega: self.omega.clone(),
            powers: Mutex::new(self.powers.lock().unwrap().clone()),
        }
    }
}

impl PartialEq for PoissonTensor {
    fn eq(&self, o: &Self) -> bool {
        self.pi == o.pi
    }
}

impl fmt::Debug for PoissonTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PoissonTensor").field("n", &self.n).field("pi", &self.pi).finish()
    }
}

impl PoissonTensor {
    /// Darboux tensor in coordinates `(q_1..q_n, p_1..p_n)`: `{q_a, p_a} = 1`.
    pub fn darboux(n: usize) -> Self {
        let d = 2 * n;
        let mut pi = vec![vec![Scalar::zero(); d]; d];
        for a in 0..n {
            pi[a][n + a] = Scalar::one();
            pi[n + a][a] = -Scalar::one();
        }
        PoissonTensor::from_matrix(pi).expect("Darboux tensor is valid")
    }

    /// Validate antisymmetry and invertibility.
    pub fn from_matrix(pi: Vec<Vec<Scalar>>) -> Result<Self> {
        let d = pi.len();
        if d == 0 || d % 2 != 0 || d > crate::element::MAX_DIM {
            return Err(Error::Invalid(format!("Poisson tensor must be 2n x 2n with 2n <= 8, got {}", d)));
        }
        for (i, row) in pi.iter().enumerate() {
            if row.len() != d {
                return Err(Error::Invalid("Poisson tensor is not square".into()));
            }
            for j in 0..d {
                if pi[i][j] != -&pi[j][i] {
                    return Err(Error::Invalid(format!("Poisson tensor not antisymmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        let omega = linalg::inverse(&pi).ok_or_else(|| Error::Invalid("Poisson tensor is not invertible".into()))?;
        Ok(PoissonTensor { n: d / 2, pi, omega, powers: Mutex::new(Vec::new()) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// `Π^{ij}`, 0-based.
    pub fn pi(&self, i: usize, j: usize) -> &Scalar {
        &self.pi[i][j]
    }

    /// `ω_{ij}`, the inverse matrix, 0-based.
    pub fn omega(&self, i: usize, j: usize) -> &Scalar {
        &self.omega[i][j]
    }

    pub fn pi_matrix(&self) -> &[Vec<Scalar>] {
        &self.pi
    }

    /// Terms of `Π̂^k` as bidifferential monomials.
    pub fn power(&self, k: usize) -> Arc<Vec<OpTerm>> {
        let mut cache = self.powers.lock().unwrap();
        if cache.is_empty() {
            cache.push(Arc::new(vec![OpTerm { p: MultiIndex::zero(), q: MultiIndex::zero(), c: Scalar::one() }]));
        }
        while cache.len() <= k {
            let prev = cache.last().unwrap().clone();
            let mut acc: HashMap<(MultiIndex, MultiIndex), Scalar> = HashMap::new();
            for t in prev.iter() {
                for i in 0..self.dim() {
                    for j in 0..self.dim() {
                        let pij = &self.pi[i][j];
                        if pij.is_zero() {
                            continue;
                        }
                        let e = acc.entry((t.p.inc(i), t.q.inc(j))).or_insert_with(Scalar::zero);
                        *e += &(&t.c * pij);
                    }
                }
            }
            let mut v: Vec<OpTerm> =
                acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((p, q), c)| OpTerm { p, q, c }).collect();
            v.sort_by(|a, b| (a.p, a.q).cmp(&(b.p, b.q)));
            cache.push(Arc::new(v));
        }
        cache[k].clone()
    }
}

/// Fiberwise bidifferential expansion `Σ_k w_k h^{s_k} μ(Π̂^k(a⊗b))`, with
/// Koszul signs on the form parts. `weight(k)` returns `(w_k, s_k)` or `None`
/// to skip the order.
fn bidifferential(
    a: &MixedElement,
    b: &MixedElement,
    pt: &PoissonTensor,
    policy: &TruncationPolicy,
    weight: &dyn Fn(usize) -> Option<(Scalar, i32)>,
    fedosov_shift: i64,
) -> Result<MixedElement> {
    a.check_dim(b)?;
    if a.dim() != pt.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: pt.dim() });
    }
    let mut out = MixedElement::zero(a.dim());
    let mut weights: Vec<Option<(Scalar, i32)>> = Vec::new();
    for (ka, ca) in a.terms() {
        let sa = ka.beta.degree() as usize;
        for (kb, cb) in b.terms() {
            let Some(sign) = wedge_sign(ka.forms, kb.forms) else { continue };
            if ka.fedosov_degree() + kb.fedosov_degree() + fedosov_shift > policy.fedosov_order as i64 {
                continue;
            }
            let forms = ka.forms | kb.forms;
            let alpha = ka.alpha.add(&kb.alpha);
            if policy.jet_cap {
                match policy.base_cap(form_degree(forms)) {
                    Some(cap) if alpha.degree() <= cap => {}
                    _ => continue,
                }
            }
            let sb = kb.beta.degree() as usize;
            let base = {
                let c = ca * cb;
                if sign < 0 {
                    -c
                } else {
                    c
                }
            };
            let beta_sum = ka.beta.add(&kb.beta);
            for k in 0..=sa.min(sb) {
                while weights.len() <= k {
                    weights.push(weight(weights.len()));
                }
                let Some((w, shift)) = &weights[k] else { continue };
                let hbar = ka.hbar + kb.hbar + shift;
                if hbar > policy.hbar_order {
                    break;
                }
                if hbar < policy.hbar_min {
                    continue;
                }
                let pref = &base * w;
                let ops = pt.power(k);
                for op in ops.iter() {
                    if !ka.beta.dominates(&op.p) || !kb.beta.dominates(&op.q) {
                        continue;
                    }
                    let mut ff: i64 = 1;
                    for j in 0..a.dim() {
                        ff *= falling(ka.beta.get(j), op.p.get(j)) * falling(kb.beta.get(j), op.q.get(j));
                    }
                    let beta = beta_sum.checked_sub(&op.p.add(&op.q)).unwrap();
                    let key = Key { hbar, forms, alpha, beta };
                    out.add_term(key, (&pref * &op.c).scale_int(ff));
                }
            }
        }
    }
    Ok(out)
}

fn moyal_weight(k: usize) -> Option<(Scalar, i32)> {
    // (-i/2)^k / k!
    let w = &Scalar::new(Zero::zero(), num::BigRational::new((-1).into(), 2.into())).pow(k as u32) / &factorial(k as u32);
    Some((w, k as i32))
}

fn bracket_weight(k: usize) -> Option<(Scalar, i32)> {
    if k % 2 == 0 {
        return None;
    }
    // (i/h)·2·(-ih/2)^k/k! = 2i(-i/2)^k/k! · h^{k-1}
    let (w, _) = moyal_weight(k)?;
    Some((&(&w * &Scalar::i()) * &Scalar::from_int(2), k as i32 - 1))
}

/// The `Π̂` operator on a pair, as a list of weighted pairs
/// `Σ_{ij} Π^{ij} (∂_{y_i} a) ⊗ (∂_{y_j} b)`; zero pairs are dropped.
pub fn pi_hat(
    a: &MixedElement,
    b: &MixedElement,
    pt: &PoissonTensor,
) -> Result<Vec<(Scalar, MixedElement, MixedElement)>> {
    a.check_dim(b)?;
    if a.dim() != pt.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: pt.dim() });
    }
    let mut out = Vec::new();
    for i in 0..a.dim() {
        let da = a.partial0(VarKind::Fiber, i);
        if da.is_zero() {
            continue;
        }
        for j in 0..a.dim() {
            let c = pt.pi(i, j);
            if c.is_zero() {
                continue;
            }
            let db = b.partial0(VarKind::Fiber, j);
            if db.is_zero() {
                continue;
            }
            out.push((c.clone(), da.clone(), db));
        }
    }
    Ok(out)
}

/// Contract a list of weighted pairs with the graded product.
pub fn contract_pairs(pairs: &[(Scalar, MixedElement, MixedElement)], dim: usize) -> MixedElement {
    let pol = TruncationPolicy::unbounded(dim / 2);
    let mut out = MixedElement::zero(dim);
    for (c, a, b) in pairs {
        out.add_scaled(&a.mul(b, &pol).unwrap(), c);
    }
    out
}

/// Moyal–Weyl product, extended to forms with Koszul signs.
pub fn moyal(a: &MixedElement, b: &MixedElement, pt: &PoissonTensor, policy: &TruncationPolicy) -> Result<MixedElement> {
    bidifferential(a, b, pt, policy, &moyal_weight, 0)
}

/// Fiber-degree-0 part of `a∘b`, computed from the full contractions only.
pub fn moyal_symbol(
    a: &MixedElement,
    b: &MixedElement,
    pt: &PoissonTensor,
    policy: &TruncationPolicy,
) -> Result<MixedElement> {
    a.check_dim(b)?;
    let mut out = MixedElement::zero(a.dim());
    let mut tables: HashMap<usize, HashMap<(MultiIndex, MultiIndex), Scalar>> = HashMap::new();
    for (ka, ca) in a.terms() {
        let s = ka.beta.degree() as usize;
        for (kb, cb) in b.terms() {
            if kb.beta.degree() as usize != s {
                continue;
            }
            let Some(sign) = wedge_sign(ka.forms, kb.forms) else { continue };
            let key = Key {
                hbar: ka.hbar + kb.hbar + s as i32,
                forms: ka.forms | kb.forms,
                alpha: ka.alpha.add(&kb.alpha),
                beta: MultiIndex::zero(),
            };
            if ka.fedosov_degree() + kb.fedosov_degree() > policy.fedosov_order as i64 || !policy.keeps(&key) {
                continue;
            }
            let table = tables.entry(s).or_insert_with(|| {
                let (w, _) = moyal_weight(s).unwrap();
                pt.power(s).iter().map(|op| ((op.p, op.q), &op.c * &w)).collect()
            });
            let Some(c) = table.get(&(ka.beta, kb.beta)) else { continue };
            let mut ff: i64 = 1;
            for j in 0..a.dim() {
                ff *= falling(ka.beta.get(j), ka.beta.get(j)) * falling(kb.beta.get(j), kb.beta.get(j));
            }
            let v = (&(ca * cb) * c).scale_int(sign * ff);
            out.add_term(key, v);
        }
    }
    Ok(out)
}

/// `a∘b - b∘a` (fiber commutator; on forms, the graded commutator).
pub fn star_commutator(
    a: &MixedElement,
    b: &MixedElement,
    pt: &PoissonTensor,
    policy: &TruncationPolicy,
) -> Result<MixedElement> {
    // graded commutator: for forms of degrees s, t this is a∘b - (-1)^{st} b∘a,
    // which equals the fiber commutator of coefficients times dx^S∧dx^T
    let ab = moyal(a, b, pt, policy)?;
    let ba = graded_swap_product(b, a, pt, policy)?;
    Ok(&ab - &ba)
}

fn graded_swap_product(
    b: &MixedElement,
    a: &MixedElement,
    pt: &PoissonTensor,
    policy: &TruncationPolicy,
) -> Result<MixedElement> {
    // (-1)^{|a||b|} b∘a computed term-wise
    let mut out = MixedElement::zero(a.dim());
    for (ka, ca) in a.terms() {
        for (kb, cb) in b.terms() {
            let ta = MixedElement::term(a.dim(), *ka, ca.clone());
            let tb = MixedElement::term(a.dim(), *kb, cb.clone());
            let p = moyal(&tb, &ta, pt, policy)?;
            if (ka.form_degree() * kb.form_degree()) % 2 == 1 {
                out = &out - &p;
            } else {
                out.add_assign_ref(&p);
            }
        }
    }
    Ok(out)
}

/// `(i/ħ)[a, b]` for the graded commutator, computed without ever dividing
/// by `ħ`: only odd orders of `Π̂` contribute and each loses one `ħ`.
/// At lowest order this is the fiber Poisson bracket `Π^{ij} ∂_i a ∂_j b`.
pub fn hbar_bracket(
    a: &MixedElement,
    b: &MixedElement,
    pt: &PoissonTensor,
    policy: &TruncationPolicy,
) -> Result<MixedElement> {
    bidifferential(a, b, pt, policy, &bracket_weight, -2)
}

/// Fiber Poisson bracket `Π^{ij} ∂_{y_i} a ∂_{y_j} b` (Koszul signs on forms).
pub fn fiber_poisson(a: &MixedElement, b: &MixedElement, pt: &PoissonTensor) -> Result<MixedElement> {
    let pairs = pi_hat(a, b, pt)?;
    Ok(contract_pairs(&pairs, a.dim()))
}

/// Base Poisson bracket `Π^{ij} ∂_{x_i} f ∂_{x_j} g`.
pub fn base_poisson(f: &MixedElement, g: &MixedElement, pt: &PoissonTensor) -> Result<MixedElement> {
    f.check_dim(g)?;
    let pol = TruncationPolicy::unbounded(f.n());
    let mut out = MixedElement::zero(f.dim());
    for i in 0..f.dim() {
        let df = f.partial0(VarKind::Base, i);
        if df.is_zero() {
            continue;
        }
        for j in 0..f.dim() {
            let c = pt.pi(i, j);
            if c.is_zero() {
                continue;
            }
            let dg = g.partial0(VarKind::Base, j);
            if dg.is_zero() {
                continue;
            }
            out.add_scaled(&df.mul(&dg, &pol)?, c);
        }
    }
    Ok(out)
}

/// `deg_F(a) = min(|beta| + 2k)`; `None` stands for `+∞` (the zero element).
pub fn fedosov_degree(a: &MixedElement) -> Option<i64> {
    a.terms().map(|(k, _)| k.fedosov_degree()).min()
}

/// `δa = Σ_i dx^i ∧ ∂_{y^i} a`.
pub fn delta_op(a: &MixedElement) -> MixedElement {
    let mut out = MixedElement::zero(a.dim());
    for (k, c) in a.terms() {
        for i in 0..a.dim() {
            let e = k.beta.get(i);
            if e == 0 {
                continue;
            }
            let Some(sign) = wedge_sign(1 << i, k.forms) else { continue };
            let mut nk = *k;
            nk.beta.0[i] -= 1;
            nk.forms |= 1 << i;
            out.add_term(nk, c.scale_int(sign * e as i64));
        }
    }
    out
}

/// `δ⁻¹` on the `(s, t)` component: `(1/(s+t)) Σ_i y^i ι(∂_{x^i})`, zero on `(0, 0)`.
pub fn delta_inv(a: &MixedElement) -> MixedElement {
    let mut out = MixedElement::zero(a.dim());
    for (k, c) in a.terms() {
        let st = k.beta.degree() as i64 + k.form_degree() as i64;
        if st == 0 {
            continue;
        }
        for i in 0..a.dim() {
            let Some(sign) = interior_sign(k.forms, i) else { continue };
            let mut nk = *k;
            nk.forms &= !(1 << i);
            nk.beta.0[i] += 1;
            out.add_term(nk, &c.scale_int(sign) / &Scalar::from_int(st));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_element;

    fn p(s: &str, n: usize) -> MixedElement {
        parse_element(s, &TruncationPolicy::unbounded(n)).unwrap()
    }

    #[test]
    fn pi_hat_examples() {
        let pt = PoissonTensor::darboux(1);
        let r = pi_hat(&p("y1", 1), &p("y2", 1), &pt).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].0, Scalar::one());
        assert_eq!(contract_pairs(&r, 2), p("1", 1));
        let r = pi_hat(&p("y1", 1), &p("y1", 1), &pt).unwrap();
        assert!(contract_pairs(&r, 2).is_zero());
        let r = pi_hat(&p("y1^2", 1), &p("y2", 1), &pt).unwrap();
        assert_eq!(contract_pairs(&r, 2), p("2*y1", 1));
    }

    #[test]
    fn moyal_examples() {
        let pt = PoissonTensor::darboux(1);
        let pol = TruncationPolicy::unbounded(1);
        assert_eq!(moyal(&p("y1", 1), &p("y2", 1), &pt, &pol).unwrap(), p("y1*y2 - (1/2)*i*h", 1));
        let a = p("3*y1^2*x2 + h*y2 - dx1", 1);
        assert_eq!(moyal(&p("1", 1), &a, &pt, &pol).unwrap(), a);
        assert_eq!(moyal(&a, &p("1", 1), &pt, &pol).unwrap(), a);
        assert_eq!(
            moyal(&p("y1^2", 1), &p("y2^2", 1), &pt, &pol).unwrap(),
            p("y1^2*y2^2 - 2*i*h*y1*y2 - (1/2)*h^2", 1)
        );
    }

    #[test]
    fn commutator_examples() {
        let pt = PoissonTensor::darboux(1);
        let pol = TruncationPolicy::unbounded(1);
        assert_eq!(star_commutator(&p("y1", 1), &p("y2", 1), &pt, &pol).unwrap(), p("-i*h", 1));
        let a = p("y1^3 + x1*y2", 1);
        assert!(star_commutator(&a, &a, &pt, &pol).unwrap().is_zero());
        assert_eq!(star_commutator(&p("y1^2", 1), &p("y2^2", 1), &pt, &pol).unwrap(), p("-4*i*h*y1*y2", 1));
    }

    #[test]
    fn hbar_bracket_matches_commutator() {
        let pt = PoissonTensor::darboux(1);
        let pol = TruncationPolicy::unbounded(1);
        let a = p("y1^3*x1 + y1*y2^2 + h*y2", 1);
        let b = p("y2^3 + y1^2*y2*dx1", 1);
        let c = star_commutator(&a, &b, &pt, &pol).unwrap();
        let br = hbar_bracket(&a, &b, &pt, &pol).unwrap();
        assert_eq!(br.hbar_shift(1).scale(&(-Scalar::i())), c);
    }

    #[test]
    fn symbol_part_of_product() {
        let pt = PoissonTensor::darboux(2);
        let pol = TruncationPolicy::new(2, 4, 6, 3);
        let a = p("y1^2*x2 + y3*y2 + h*y4 + x1 + y1*y2*y3", 2);
        let b = p("y3^2 + y2*y4 - 2*h + y1*y4 + i*y4^3", 2);
        let full = moyal(&a, &b, &pt, &pol).unwrap();
        let sym = full.filter(|k| k.beta.degree() == 0);
        assert_eq!(moyal_symbol(&a, &b, &pt, &pol).unwrap(), sym);
    }

    #[test]
    fn fedosov_degree_examples() {
        assert_eq!(fedosov_degree(&p("y1*y2", 1)), Some(2));
        assert_eq!(fedosov_degree(&p("h*y1", 1)), Some(3));
        assert_eq!(fedosov_degree(&MixedElement::zero(2)), None);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_op(&p("y1^2", 1)), p("2*y1*dx1", 1));
        assert_eq!(delta_inv(&p("dx1", 1)), p("y1", 1));
        let a = p("y1^2*y2*x1 + y2*dx1 + h*y1*y2*dx1^dx2", 1);
        assert!(delta_op(&delta_op(&a)).is_zero());
        assert!(delta_inv(&delta_inv(&a)).is_zero());
    }
}
