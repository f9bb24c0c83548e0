//! Hochschild and cyclic chain operators over finite truncations of the
//! (deformed) Whitney algebra, the `μ` and antisymmetrization maps, and the
//! first-order probe of the `ħ`-filtration.

use std::collections::{BTreeMap, HashMap};

use num::{One, Zero};
use serde::Serialize;

use crate::derham::{brylinski_delta, FormCalculus, WhitneyForm};
use crate::element::{Key, MixedElement, MultiIndex};
use crate::error::{Error, Result};
use crate::fedosov::FedosovData;
use crate::linalg::{self, Echelon, SparseVec};
use crate::policy::TruncationPolicy;
use crate::scalar::{factorial, Scalar};
use crate::whitney::WhitneyQuotient;

/// Largest algebra accepted by [`hochschild_dims`].
pub const MAX_ALGEBRA_DIM: usize = 12;
/// Largest homological degree accepted by [`hochschild_dims`].
pub const MAX_DEGREE: usize = 3;

/// Finite-dimensional algebra with basis `ħ^j x^m`, `x^m` a standard monomial
/// at jet order `N - j`, and exact structure constants.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    pub basis: Vec<(i32, MultiIndex)>,
    pub unit: usize,
    pub deformed: bool,
    pub descriptor: String,
    pub jet_order: i64,
    dim: usize,
    table: Vec<Vec<SparseVec>>,
}

impl FiniteAlgebra {
    /// Structure constants of the commutative product (`fd = None`) or of
    /// the induced star product.
    pub fn new(q: &WhitneyQuotient, fd: Option<&FedosovData>, descriptor: &str) -> Result<Self> {
        if let Some(fd) = fd {
            if q.hbar_order > fd.exact_hbar_order() {
                return Err(Error::Invalid(format!(
                    "h order {} exceeds the exact order {} of the star product",
                    q.hbar_order,
                    fd.exact_hbar_order()
                )));
            }
        }
        let dim = q.dim();
        let mut basis = Vec::new();
        let mut index = HashMap::new();
        let mut offsets = BTreeMap::new();
        for j in 0..=q.hbar_order {
            let ev = q.evaluator(q.order_at(q.jet_order, j), 0);
            offsets.insert(j, basis.len());
            for m in &ev.standard {
                index.insert((j, *m), basis.len());
                basis.push((j, *m));
            }
        }
        let unit = *index
            .get(&(0, MultiIndex::zero()))
            .ok_or_else(|| Error::Invalid("the quotient is zero".into()))?;
        let mut alg = FiniteAlgebra {
            basis,
            unit,
            deformed: fd.is_some(),
            descriptor: descriptor.to_string(),
            jet_order: q.jet_order,
            dim,
            table: Vec::new(),
        };
        let mut pol = TruncationPolicy::unbounded(dim / 2);
        pol.hbar_order = q.hbar_order;
        pol.hbar_min = 0;
        let size = alg.basis.len();
        let mut table = vec![vec![Vec::new(); size]; size];
        for a in 0..size {
            for b in 0..size {
                let (fa, fb) = (alg.monomial(a), alg.monomial(b));
                let prod = match fd {
                    Some(fd) => fd.star(&fa.hbar_coeff(fa.hbar_powers()[0]), &fb.hbar_coeff(fb.hbar_powers()[0]))?
                        .hbar_shift(alg.basis[a].0 + alg.basis[b].0),
                    None => fa.mul(&fb, &pol)?,
                };
                table[a][b] = alg.coordinates_with(q, &offsets, &prod)?;
            }
        }
        alg.table = table;
        Ok(alg)
    }

    fn coordinates_with(&self, q: &WhitneyQuotient, offsets: &BTreeMap<i32, usize>, p: &MixedElement) -> Result<SparseVec> {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for j in p.hbar_powers() {
            if j < 0 {
                return Err(Error::Invalid("negative h power".into()));
            }
            let Some(off) = offsets.get(&j) else { continue };
            let ev = q.evaluator(q.order_at(q.jet_order, j), 0);
            for (i, c) in ev.coordinates(&p.hbar_coeff(j))? {
                acc.insert(off + i, c);
            }
        }
        Ok(linalg::sparse_from_map(acc))
    }

    /// Coordinates of a polynomial with `ħ` powers.
    pub fn element(&self, q: &WhitneyQuotient, p: &MixedElement) -> Result<SparseVec> {
        let mut offsets = BTreeMap::new();
        for (i, (j, _)) in self.basis.iter().enumerate() {
            offsets.entry(*j).or_insert(i);
        }
        self.coordinates_with(q, &offsets, p)
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `ħ^j x^m` for basis index `a`.
    pub fn monomial(&self, a: usize) -> MixedElement {
        let (j, m) = self.basis[a];
        MixedElement::term(self.dim, Key { hbar: j, alpha: m, ..Key::one() }, Scalar::one())
    }

    pub fn to_polynomial(&self, v: &SparseVec) -> MixedElement {
        let mut out = MixedElement::zero(self.dim);
        for (a, c) in v {
            out.add_scaled(&self.monomial(*a), c);
        }
        out
    }

    pub fn product(&self, a: usize, b: usize) -> &SparseVec {
        &self.table[a][b]
    }

    pub fn mul(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (a, ca) in u {
            for (b, cb) in v {
                let c = ca * cb;
                for (k, ck) in &self.table[*a][*b] {
                    *acc.entry(*k).or_insert_with(Scalar::zero) += &(&c * ck);
                }
            }
        }
        linalg::sparse_from_map(acc)
    }

    /// Whether the table is associative and `unit` is a two-sided unit.
    pub fn check_table(&self) -> bool {
        let n = self.len();
        let e = |a: usize| -> SparseVec { vec![(a, Scalar::one())] };
        for a in 0..n {
            if self.table[self.unit][a] != e(a) || self.table[a][self.unit] != e(a) {
                return false;
            }
            for b in 0..n {
                for c in 0..n {
                    let l = self.mul(&self.table[a][b], &e(c));
                    let r = self.mul(&e(a), &self.table[b][c]);
                    if l != r {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Linear combination of elementary tensors `a_0 ⊗ … ⊗ a_q` of basis indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainVector {
    pub q: usize,
    pub normalized: bool,
    pub terms: BTreeMap<Vec<usize>, Scalar>,
}

impl ChainVector {
    pub fn zero(q: usize, normalized: bool) -> Self {
        ChainVector { q, normalized, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, t: Vec<usize>, c: Scalar, unit: usize) {
        debug_assert_eq!(t.len(), self.q + 1);
        if c.is_zero() || (self.normalized && t[1..].contains(&unit)) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(t) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, o: &ChainVector, unit: usize) {
        for (t, c) in &o.terms {
            self.add_term(t.clone(), c.clone(), unit);
        }
    }

    pub fn scale(&self, c: &Scalar) -> ChainVector {
        ChainVector {
            q: self.q,
            normalized: self.normalized,
            terms: self.terms.iter().map(|(t, v)| (t.clone(), v * c)).filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    /// `v_0 ⊗ … ⊗ v_q` for algebra elements given in coordinates.
    pub fn tensor(parts: &[SparseVec], normalized: bool, unit: usize) -> ChainVector {
        let mut out = ChainVector::zero(parts.len() - 1, normalized);
        let mut stack: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), Scalar::one())];
        for p in parts {
            let mut next = Vec::new();
            for (t, c) in &stack {
                for (i, ci) in p {
                    let mut nt = t.clone();
                    nt.push(*i);
                    next.push((nt, c * ci));
                }
            }
            stack = next;
        }
        for (t, c) in stack {
            out.add_term(t, c, unit);
        }
        out
    }

    /// Tuples whose total `ħ` power is `j`.
    pub fn hbar_part(&self, alg: &FiniteAlgebra, j: i32) -> ChainVector {
        ChainVector {
            q: self.q,
            normalized: self.normalized,
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| t.iter().map(|&a| alg.basis[a].0).sum::<i32>() == j)
                .map(|(t, c)| (t.clone(), c.clone()))
                .collect(),
        }
    }
}

/// Hochschild boundary `b`.
pub fn hochschild_b(c: &ChainVector, alg: &FiniteAlgebra) -> Result<ChainVector> {
    if c.q == 0 {
        return Err(Error::Invalid("b needs chain degree at least 1".into()));
    }
    let q = c.q;
    let mut out = ChainVector::zero(q - 1, c.normalized);
    for (t, coef) in &c.terms {
        for i in 0..q {
            let sign = if i % 2 == 0 { coef.clone() } else { -coef };
            for (k, ck) in alg.product(t[i], t[i + 1]) {
                let mut nt = Vec::with_capacity(q);
                nt.extend_from_slice(&t[..i]);
                nt.push(*k);
                nt.extend_from_slice(&t[i + 2..]);
                out.add_term(nt, &sign * ck, alg.unit);
            }
        }
        let sign = if q % 2 == 0 { coef.clone() } else { -coef };
        for (k, ck) in alg.product(t[q], t[0]) {
            let mut nt = Vec::with_capacity(q);
            nt.push(*k);
            nt.extend_from_slice(&t[1..q]);
            out.add_term(nt, &sign * ck, alg.unit);
        }
    }
    Ok(out)
}

/// Normalized Connes operator `B = Σ_i (-1)^{qi} 1 ⊗ a_i ⊗ … ⊗ a_q ⊗ a_0 ⊗ … ⊗ a_{i-1}`.
pub fn connes_b(c: &ChainVector, alg: &FiniteAlgebra) -> Result<ChainVector> {
    if !c.normalized {
        return Err(Error::NotNormalized);
    }
    let q = c.q;
    let mut out = ChainVector::zero(q + 1, true);
    for (t, coef) in &c.terms {
        for i in 0..=q {
            let mut nt = Vec::with_capacity(q + 2);
            nt.push(alg.unit);
            nt.extend_from_slice(&t[i..]);
            nt.extend_from_slice(&t[..i]);
            let sign = if (q * i) % 2 == 0 { coef.clone() } else { -coef };
            out.add_term(nt, sign, alg.unit);
        }
    }
    Ok(out)
}

/// `μ(a_0 ⊗ … ⊗ a_q) = (1/q!) a_0 da_1 ∧ … ∧ da_q` at `ħ = 0`, as an ambient form.
pub fn mu_raw(c: &ChainVector, alg: &FiniteAlgebra) -> MixedElement {
    let pol = TruncationPolicy::unbounded(alg.dim / 2);
    let mut out = MixedElement::zero(alg.dim);
    let norm = factorial(c.q as u32).inv().unwrap();
    for (t, coef) in &c.terms {
        if t.iter().any(|&a| alg.basis[a].0 != 0) {
            continue;
        }
        let mut w = alg.monomial(t[0]);
        for &a in &t[1..] {
            w = w.mul(&crate::fedosov::d_x(&alg.monomial(a)), &pol).unwrap();
            if w.is_zero() {
                break;
            }
        }
        out.add_scaled(&w, &(coef * &norm));
    }
    out
}

/// `μ` followed by projection to the Whitney–de Rham quotient.
pub fn mu(c: &ChainVector, alg: &FiniteAlgebra, fc: &FormCalculus) -> Result<WhitneyForm> {
    fc.project(&mu_raw(c, alg), alg.jet_order)
}

/// `ε(f_0 df_1 ∧ … ∧ df_q) = Σ_σ sgn(σ) f_0 ⊗ f_{σ(1)} ⊗ … ⊗ f_{σ(q)}`.
pub fn antisymmetrize(f0: &SparseVec, fs: &[SparseVec], alg: &FiniteAlgebra, normalized: bool) -> ChainVector {
    let mut out = ChainVector::zero(fs.len(), normalized);
    for (perm, sign) in permutations(fs.len()) {
        let mut parts = vec![f0.clone()];
        parts.extend(perm.iter().map(|&i| fs[i].clone()));
        let t = ChainVector::tensor(&parts, normalized, alg.unit);
        out.add_assign(&t.scale(&Scalar::from_int(sign)), alg.unit);
    }
    out
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut np = p.clone();
            np.insert(pos, n - 1);
            // inserting the largest element at `pos` adds len - pos inversions
            let sign = if (p.len() - pos) % 2 == 0 { s } else { -s };
            out.push((np, sign));
        }
    }
    out
}

/// Result of [`e1_probe`].
#[derive(Clone, Debug, Serialize)]
pub struct ProbeResult {
    pub q: usize,
    /// `μ` of the `ħ¹` part of `b_⋆(ε(ω))`, compared at order `N - 2`.
    pub output: String,
    pub delta: String,
    /// `output = κ·δ(ω)` when `Some`; `None` when both sides vanish.
    pub kappa: Option<String>,
    pub proportional: bool,
    #[serde(skip)]
    pub kappa_value: Option<Scalar>,
}

/// First differential of the `ħ`-filtration on `ω = f_0 df_1 ∧ … ∧ df_q`.
pub fn e1_probe(
    f0: &MixedElement,
    fs: &[MixedElement],
    alg: &FiniteAlgebra,
    q: &WhitneyQuotient,
    fc: &FormCalculus,
) -> Result<ProbeResult> {
    if !alg.deformed {
        return Err(Error::ProbeFault("the probe needs a deformed algebra".into()));
    }
    if fs.is_empty() {
        return Err(Error::ProbeFault("the probe needs q >= 1".into()));
    }
    let c0 = alg.element(q, f0)?;
    let cs = fs.iter().map(|f| alg.element(q, f)).collect::<Result<Vec<_>>>()?;
    let chain = antisymmetrize(&c0, &cs, alg, false);
    let b = hochschild_b(&chain, alg)?;
    if !b.hbar_part(alg, 0).is_zero() {
        return Err(Error::ProbeFault("h^0 part of b(eps(omega)) is nonzero".into()));
    }
    // strip the single h from each tuple of the h^1 part
    let first = b.hbar_part(alg, 1);
    let pol = TruncationPolicy::unbounded(alg.dim / 2);
    let norm = factorial(first.q as u32).inv().unwrap();
    let mut raw = MixedElement::zero(alg.dim);
    for (t, coef) in &first.terms {
        let mut w = alg.monomial(t[0]).hbar_shift(-alg.basis[t[0]].0);
        for &a in &t[1..] {
            let m = alg.monomial(a).hbar_shift(-alg.basis[a].0);
            w = w.mul(&crate::fedosov::d_x(&m), &pol)?;
        }
        raw.add_scaled(&w, &(coef * &norm));
    }
    let order = alg.jet_order - 2;
    let out = fc.project(&raw, order)?;
    let mut omega = alg.to_polynomial(&c0);
    for c in &cs {
        omega = omega.mul(&crate::fedosov::d_x(&alg.to_polynomial(c)), &pol)?;
    }
    let delta = fc.project(&brylinski_delta(&omega, fc.pt), order)?;
    let kappa = fit_ratio(&out.rep, &delta.rep);
    let proportional = match &kappa {
        Some(k) => out.rep == delta.rep.scale(k),
        None => out.rep.is_zero() && delta.rep.is_zero(),
    };
    Ok(ProbeResult {
        q: fs.len(),
        output: out.rep.to_string(),
        delta: delta.rep.to_string(),
        kappa: kappa.as_ref().map(|k| k.to_string()),
        proportional,
        kappa_value: kappa,
    })
}

fn fit_ratio(a: &MixedElement, b: &MixedElement) -> Option<Scalar> {
    let (k, c) = b.terms().next()?;
    Some(&a.coeff(k) / c)
}

/// One row of a homology report.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct HomologyRow {
    pub q: usize,
    pub chain_dim: usize,
    pub rank_b: usize,
    pub homology_dim: usize,
}

/// Homology dimensions of the normalized Hochschild complex.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct HomologyReport {
    pub algebra: String,
    pub algebra_dim: usize,
    pub deformed: bool,
    pub rows: Vec<HomologyRow>,
    /// Truncated-algebra homology is an exploration aid, not the homology of
    /// the untruncated Laurent-coefficient algebra.
    pub caveat: bool,
}

impl HomologyReport {
    pub fn dims(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.homology_dim).collect()
    }
}

fn chains(alg: &FiniteAlgebra, q: usize) -> Vec<Vec<usize>> {
    let bar: Vec<usize> = (0..alg.len()).filter(|&a| a != alg.unit).collect();
    let mut out: Vec<Vec<usize>> = (0..alg.len()).map(|a| vec![a]).collect();
    for _ in 0..q {
        let mut next = Vec::with_capacity(out.len() * bar.len());
        for t in &out {
            for &a in &bar {
                let mut nt = t.clone();
                nt.push(a);
                next.push(nt);
            }
        }
        out = next;
    }
    out
}

fn rank_of_b(alg: &FiniteAlgebra, q: usize, cap: usize) -> Result<usize> {
    let target: HashMap<Vec<usize>, usize> = chains(alg, q - 1).into_iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut e = Echelon::new(false);
    for t in chains(alg, q) {
        if e.rank() >= cap {
            break;
        }
        let mut c = ChainVector::zero(q, true);
        c.add_term(t, Scalar::one(), alg.unit);
        let img = hochschild_b(&c, alg)?;
        let mut v: SparseVec = img.terms.into_iter().map(|(t, c)| (target[&t], c)).collect();
        v.sort_by_key(|(i, _)| *i);
        e.insert(&v);
    }
    Ok(e.rank())
}

/// `dim HH_q` for `q = 0..=q_max` by exact ranks on the normalized complex.
pub fn hochschild_dims(alg: &FiniteAlgebra, q_max: usize) -> Result<HomologyReport> {
    if alg.len() > MAX_ALGEBRA_DIM {
        return Err(Error::Guardrail(format!("algebra dimension {} exceeds {}", alg.len(), MAX_ALGEBRA_DIM)));
    }
    if q_max > MAX_DEGREE {
        return Err(Error::Guardrail(format!("degree {} exceeds {}", q_max, MAX_DEGREE)));
    }
    let dims: Vec<usize> = (0..=q_max + 1).map(|q| alg.len() * (alg.len() - 1).pow(q as u32)).collect();
    let mut ranks = vec![0usize; q_max + 2];
    for q in 1..=q_max + 1 {
        // the rank of b_q is bounded by the kernel of b_{q-1}
        let cap = dims[q - 1] - ranks[q - 1];
        ranks[q] = rank_of_b(alg, q, cap)?;
    }
    let rows = (0..=q_max)
        .map(|q| HomologyRow {
            q,
            chain_dim: dims[q],
            rank_b: ranks[q],
            homology_dim: dims[q] - ranks[q] - ranks[q + 1],
        })
        .collect();
    Ok(HomologyReport {
        algebra: alg.descriptor.clone(),
        algebra_dim: alg.len(),
        deformed: alg.deformed,
        rows,
        caveat: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fedosov::{build_a, ConnectionInput};
    use crate::parse::parse_element;
    use crate::weyl::PoissonTensor;
    use crate::whitney::SubsetModel;

    fn p(s: &str) -> MixedElement {
        parse_element(s, &TruncationPolicy::unbounded(1)).unwrap()
    }

    fn point_quotient(jet: u32, k: i32) -> WhitneyQuotient {
        let x = SubsetModel::catalogue("point", 1).unwrap();
        WhitneyQuotient::new(&x, &TruncationPolicy::new(1, jet, 6, k)).unwrap()
    }

    #[test]
    fn permutation_signs() {
        let ps = permutations(3);
        assert_eq!(ps.len(), 6);
        assert_eq!(ps.iter().map(|(_, s)| s).sum::<i64>(), 0);
        for (p, s) in ps {
            let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            assert_eq!(s, if inv % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn small_examples() {
        let q = point_quotient(1, 0);
        let alg = FiniteAlgebra::new(&q, None, "point").unwrap();
        assert_eq!(alg.len(), 3);
        assert!(alg.check_table());
        let f = alg.element(&q, &p("x1")).unwrap();
        let g = alg.element(&q, &p("x2")).unwrap();
        let c = ChainVector::tensor(&[f.clone(), g.clone()], true, alg.unit);
        assert!(hochschild_b(&c, &alg).unwrap().is_zero());
        let bf = connes_b(&ChainVector::tensor(&[f.clone()], true, alg.unit), &alg).unwrap();
        assert_eq!(bf, ChainVector::tensor(&[vec![(alg.unit, Scalar::one())], f.clone()], true, alg.unit));
        let e = antisymmetrize(&f, &[g.clone()], &alg, true);
        assert_eq!(e, c);
        let r = hochschild_dims(&alg, 1).unwrap();
        assert_eq!(r.rows[0].homology_dim, 3);
        assert!(r.caveat);
    }

    #[test]
    fn deformed_commutator() {
        let q = point_quotient(1, 1);
        let fd = build_a(&ConnectionInput::flat(1), &TruncationPolicy::new(1, 1, 4, 1)).unwrap();
        let alg = FiniteAlgebra::new(&q, Some(&fd), "point").unwrap();
        assert_eq!(alg.len(), 4);
        assert!(alg.check_table());
        let f = alg.element(&q, &p("x1")).unwrap();
        let g = alg.element(&q, &p("x2")).unwrap();
        let c = ChainVector::tensor(&[f, g], true, alg.unit);
        let b = hochschild_b(&c, &alg).unwrap();
        let want = alg.element(&q, &p("-i*h")).unwrap();
        assert_eq!(b, ChainVector::tensor(&[want], true, alg.unit));
        let undeformed = FiniteAlgebra::new(&q, None, "point").unwrap();
        let d0 = hochschild_dims(&undeformed, 0).unwrap().dims()[0];
        let d1 = hochschild_dims(&alg, 0).unwrap().dims()[0];
        assert_eq!(d0, 4);
        assert!(d1 < d0);
    }

    #[test]
    fn scalars_only() {
        let x = SubsetModel::catalogue("point", 1).unwrap();
        let q = WhitneyQuotient::new(&x, &TruncationPolicy::new(1, 0, 4, 0)).unwrap();
        let alg = FiniteAlgebra::new(&q, None, "scalars").unwrap();
        assert_eq!(alg.len(), 1);
        assert_eq!(hochschild_dims(&alg, 2).unwrap().dims(), vec![1, 0, 0]);
    }

    #[test]
    fn e1_probe_first_degree() {
        let q = point_quotient(3, 1);
        let fd = build_a(&ConnectionInput::flat(1), &TruncationPolicy::new(1, 3, 4, 1)).unwrap();
        let alg = FiniteAlgebra::new(&q, Some(&fd), "point").unwrap();
        let pt = PoissonTensor::darboux(1);
        let fc = FormCalculus::new(&q, &pt).unwrap();
        let r = e1_probe(&p("x1"), &[p("x2")], &alg, &q, &fc).unwrap();
        assert!(r.proportional);
        assert_eq!(r.kappa_value, Some(-Scalar::i()));
        let r = e1_probe(&p("1"), &[p("x1")], &alg, &q, &fc).unwrap();
        assert!(r.proportional);
        assert!(r.kappa.is_none());
    }
}
