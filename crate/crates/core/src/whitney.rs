//! Closed model sets, their truncated flat ideals and the quotient algebra of
//! Whitney jets, with the induced star product and Poisson bracket.
//!
//! A germ `(P, T)` is the affine subspace `P + span{e_t : t ∈ T}`. In local
//! coordinates `u = x - P` a form monomial `u^α du^S` has weight `w = α + e_S`.
//! At order `o` it lies in the germ's ideal when `|w_N| > o` (normal
//! directions `N`, the complement of `T`) or `|w| > 2o + 2`. The ideal of `X`
//! is the intersection over its germs. The conditions only see weights, which
//! `d` preserves and derivatives lower, so the ideal is a dg-ideal and
//! `∂^γ` maps order `o` into order `o - |γ|`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num::{BigRational, One, Zero};
use serde::{Deserialize, Serialize};

use crate::element::{form_degree, FormSet, Key, MixedElement, MultiIndex};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, Insert, SparseVec};
use crate::parse::parse_rational;
use crate::policy::TruncationPolicy;
use crate::scalar::Scalar;

/// Germ document entry.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GermSpec {
    pub point: Vec<String>,
    #[serde(default)]
    pub directions: Vec<usize>,
}

/// Subset document: `{dim, germs: [{point, directions}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SubsetSpec {
    pub dim: usize,
    pub germs: Vec<GermSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Germ {
    pub point: Vec<BigRational>,
    /// Tangent directions as a bit set (bit `t-1` for direction `t`).
    pub directions: u16,
}

impl Germ {
    fn is_origin(&self) -> bool {
        self.point.iter().all(|c| c.is_zero())
    }
}

/// Catalogue names understood by [`SubsetModel::catalogue`].
pub const CATALOGUE: &[&str] = &["point", "axis", "cross", "two-points", "plane-in-r4", "full"];

/// Finite union of affine coordinate subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetModel {
    pub dim: usize,
    pub germs: Vec<Germ>,
}

impl SubsetModel {
    pub fn new(dim: usize, germs: Vec<Germ>) -> Result<Self> {
        if dim == 0 || dim % 2 != 0 || dim > crate::element::MAX_DIM {
            return Err(Error::Invalid(format!("subset dim must be 2, 4, 6 or 8, got {}", dim)));
        }
        if germs.is_empty() {
            return Err(Error::Invalid("subset needs at least one germ".into()));
        }
        for (i, g) in germs.iter().enumerate() {
            if g.point.len() != dim {
                return Err(Error::DimensionMismatch { left: g.point.len(), right: dim });
            }
            if g.directions >> dim != 0 {
                return Err(Error::Invalid(format!("germ {} has a direction beyond {}", i + 1, dim)));
            }
            if germs[..i].contains(g) {
                return Err(Error::Invalid(format!("germ {} is a duplicate", i + 1)));
            }
        }
        Ok(SubsetModel { dim, germs })
    }

    pub fn n(&self) -> usize {
        self.dim / 2
    }

    pub fn catalogue(name: &str, n: usize) -> Result<Self> {
        let dim = 2 * n;
        let origin = vec![BigRational::zero(); dim];
        let at = |x1: i64| {
            let mut p = origin.clone();
            p[0] = BigRational::from_integer(x1.into());
            p
        };
        let germ = |point: Vec<BigRational>, dirs: &[usize]| Germ {
            point,
            directions: dirs.iter().fold(0u16, |m, &t| m | 1 << (t - 1)),
        };
        let germs = match name {
            "point" => vec![germ(origin.clone(), &[])],
            "axis" => vec![germ(origin.clone(), &[1])],
            "cross" => vec![germ(origin.clone(), &[1]), germ(origin.clone(), &[2])],
            "two-points" => vec![germ(at(1), &[]), germ(at(-1), &[])],
            "plane-in-r4" => {
                if n != 2 {
                    return Err(Error::Invalid("plane-in-r4 needs n = 2".into()));
                }
                vec![germ(origin.clone(), &[1, 2])]
            }
            "full" => vec![germ(origin.clone(), &(1..=dim).collect::<Vec<_>>())],
            other => return Err(Error::Invalid(format!("unknown subset '{}'", other))),
        };
        SubsetModel::new(dim, germs)
    }

    pub fn from_spec(spec: &SubsetSpec) -> Result<Self> {
        let mut germs = Vec::new();
        for g in &spec.germs {
            let point = g.point.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            let mut directions = 0u16;
            for &t in &g.directions {
                if t == 0 || t > spec.dim {
                    return Err(Error::IndexOutOfRange { index: t, dim: spec.dim });
                }
                directions |= 1 << (t - 1);
            }
            germs.push(Germ { point, directions });
        }
        SubsetModel::new(spec.dim, germs)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SubsetSpec =
            serde_json::from_str(text).map_err(|e| Error::Invalid(format!("subset JSON: {}", e)))?;
        SubsetModel::from_spec(&spec)
    }

    pub fn to_spec(&self) -> SubsetSpec {
        SubsetSpec {
            dim: self.dim,
            germs: self
                .germs
                .iter()
                .map(|g| GermSpec {
                    point: g.point.iter().map(|c| c.to_string()).collect(),
                    directions: (0..self.dim).filter(|t| g.directions >> t & 1 == 1).map(|t| t + 1).collect(),
                })
                .collect(),
        }
    }
}

/// Total-degree cap at order `o`.
pub fn degree_cap(order: i64) -> i64 {
    2 * order + 2
}

/// Whether `u^α du^S` survives in the quotient of one germ at order `o`.
fn retained(alpha: &MultiIndex, shift: FormSet, normal: u16, order: i64) -> bool {
    if order < 0 {
        return false;
    }
    let mut total = 0i64;
    let mut nrm = 0i64;
    for j in 0..crate::element::MAX_DIM {
        let w = alpha.get(j) as i64 + (shift >> j & 1) as i64;
        total += w;
        if normal >> j & 1 == 1 {
            nrm += w;
        }
    }
    nrm <= order && total <= degree_cap(order)
}

/// Degree bound for representatives: enough to interpolate jets at every germ.
fn representative_degree(x: &SubsetModel, order: i64, shift: FormSet) -> i64 {
    let cap = degree_cap(order) - form_degree(shift) as i64;
    if cap < 0 {
        return -1;
    }
    let distinct: Vec<&Vec<BigRational>> = {
        let mut v: Vec<&Vec<BigRational>> = Vec::new();
        for g in &x.germs {
            if !v.contains(&&g.point) {
                v.push(&g.point);
            }
        }
        v
    };
    distinct.len() as i64 * (cap + 1) - 1
}

/// Linear map from polynomial coefficients to the retained jet data of every
/// germ, with a canonical basis of standard monomials for the image.
#[derive(Debug)]
pub struct JetEvaluator {
    dim: usize,
    pub order: i64,
    pub shift: FormSet,
    normals: Vec<u16>,
    points: Vec<Vec<Scalar>>,
    origins: Vec<bool>,
    columns: Mutex<HashMap<(usize, MultiIndex), usize>>,
    echelon: Echelon,
    /// Standard monomials: the quotient basis, in graded order.
    pub standard: Vec<MultiIndex>,
    /// Flat polynomials `x^m - Σ c·x^std` from the dependent monomials.
    pub kernel: Vec<MixedElement>,
    /// Dimension of the representative polynomial space.
    pub space_dim: usize,
}

impl JetEvaluator {
    pub fn new(x: &SubsetModel, order: i64, shift: FormSet) -> Self {
        let dim = x.dim;
        let mut ev = JetEvaluator {
            dim,
            order,
            shift,
            normals: x.germs.iter().map(|g| !g.directions & ((1u16 << dim) - 1)).collect(),
            points: x.germs.iter().map(|g| g.point.iter().map(|c| Scalar::real(c.clone())).collect()).collect(),
            origins: x.germs.iter().map(|g| g.is_origin()).collect(),
            columns: Mutex::new(HashMap::new()),
            echelon: Echelon::new(true),
            standard: Vec::new(),
            kernel: Vec::new(),
            space_dim: 0,
        };
        let r = representative_degree(x, order, shift);
        if r < 0 {
            return ev;
        }
        let monos = MultiIndex::all_up_to(dim, r as u32);
        ev.space_dim = monos.len();
        for m in monos {
            let v = ev.image_monomial(&m);
            match ev.echelon.insert(&v) {
                Insert::Independent(_) => ev.standard.push(m),
                Insert::Dependent(combo) => {
                    let mut k = MixedElement::term(dim, Key { alpha: m, ..Key::one() }, Scalar::one());
                    for (id, c) in combo {
                        k.add_term(Key { alpha: ev.standard[id], ..Key::one() }, -c);
                    }
                    ev.kernel.push(k);
                }
            }
        }
        ev
    }

    fn column(&self, germ: usize, a: MultiIndex) -> usize {
        let mut cols = self.columns.lock().unwrap();
        let next = cols.len();
        *cols.entry((germ, a)).or_insert(next)
    }

    fn image_monomial(&self, m: &MultiIndex) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        self.accumulate(m, &Scalar::one(), &mut acc);
        crate::linalg::sparse_from_map(acc)
    }

    fn accumulate(&self, m: &MultiIndex, c: &Scalar, acc: &mut BTreeMap<usize, Scalar>) {
        for g in 0..self.points.len() {
            if self.origins[g] {
                if retained(m, self.shift, self.normals[g], self.order) {
                    let col = self.column(g, *m);
                    *acc.entry(col).or_insert_with(Scalar::zero) += c;
                }
                continue;
            }
            // (u + P)^m = Σ_{a <= m} Π C(m_i, a_i) P_i^{m_i - a_i} u^a
            let mut a = MultiIndex::zero();
            loop {
                if retained(&a, self.shift, self.normals[g], self.order) {
                    let mut coef = c.clone();
                    for i in 0..self.dim {
                        let (mi, ai) = (m.get(i), a.get(i));
                        if mi > ai {
                            coef = &coef * &self.points[g][i].pow(mi - ai);
                        }
                        coef = coef.scale_int(binomial(mi, ai));
                    }
                    if !coef.is_zero() {
                        let col = self.column(g, a);
                        *acc.entry(col).or_insert_with(Scalar::zero) += &coef;
                    }
                }
                // next a <= m in odometer order
                let mut i = 0;
                loop {
                    if i == self.dim {
                        break;
                    }
                    if a.get(i) < m.get(i) {
                        a.0[i] += 1;
                        break;
                    }
                    a.0[i] = 0;
                    i += 1;
                }
                if i == self.dim {
                    break;
                }
            }
        }
    }

    /// Jet data of a polynomial (form and `h` parts are ignored).
    pub fn image(&self, p: &MixedElement) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (k, c) in p.terms() {
            self.accumulate(&k.alpha, c, &mut acc);
        }
        crate::linalg::sparse_from_map(acc)
    }

    /// Dimension of the quotient at this order and form shift.
    pub fn rank(&self) -> usize {
        self.standard.len()
    }

    pub fn is_flat(&self, p: &MixedElement) -> bool {
        self.image(p).is_empty()
    }

    /// Coordinates of `p` in the standard basis.
    pub fn coordinates(&self, p: &MixedElement) -> Result<SparseVec> {
        self.echelon
            .coordinates(&self.image(p))
            .ok_or_else(|| Error::Invalid("jet data outside the representative span".into()))
    }

    /// Canonical representative `Σ c_m x^m` over standard monomials.
    pub fn normal_form(&self, p: &MixedElement) -> Result<MixedElement> {
        let coords = self.coordinates(p)?;
        Ok(self.from_coordinates(&coords))
    }

    pub fn from_coordinates(&self, coords: &SparseVec) -> MixedElement {
        MixedElement::from_terms(
            self.dim,
            coords.iter().map(|(i, c)| (Key { alpha: self.standard[*i], ..Key::one() }, c.clone())),
        )
    }

    /// Independent recount of the representative space:
    /// `(space_dim, rank of the jet map, independent flat kernel vectors)`.
    pub fn exact_sequence_witness(&self) -> (usize, usize, usize, bool) {
        let rows: Vec<SparseVec> = self.kernel.iter().map(|k| self.image(k)).collect();
        let kernel_flat = rows.iter().all(|r| r.is_empty());
        let kernel_rows: Vec<SparseVec> = self
            .kernel
            .iter()
            .map(|k| {
                let mut v: Vec<(usize, Scalar)> = k
                    .terms()
                    .map(|(key, c)| (monomial_index(self.dim, &key.alpha), c.clone()))
                    .collect();
                v.sort_by_key(|(i, _)| *i);
                v
            })
            .collect();
        let kernel_rank = crate::linalg::rank(&kernel_rows);
        let std_rows: Vec<SparseVec> = self
            .standard
            .iter()
            .map(|m| self.image(&MixedElement::term(self.dim, Key { alpha: *m, ..Key::one() }, Scalar::one())))
            .collect();
        let image_rank = crate::linalg::rank(&std_rows);
        (self.space_dim, image_rank, kernel_rank, kernel_flat)
    }
}

fn monomial_index(dim: usize, m: &MultiIndex) -> usize {
    // injective packing, enough for rank computations
    let mut idx = 0usize;
    for j in 0..dim {
        idx = idx * 128 + m.get(j) as usize;
    }
    idx
}

fn binomial(n: u32, k: u32) -> i64 {
    let mut r: i64 = 1;
    for i in 0..k as i64 {
        r = r * (n as i64 - i) / (i + 1);
    }
    r
}

/// A Whitney class: canonical representative plus the jet order of its
/// `ħ^0` part. The `ħ^j` part lives at order `order - loss·j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhitneyClass {
    pub order: i64,
    pub rep: MixedElement,
}

impl WhitneyClass {
    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

/// Quotient of polynomials (with `ħ` powers) by the truncated flat ideal.
#[derive(Debug)]
pub struct WhitneyQuotient {
    pub x: SubsetModel,
    pub jet_order: i64,
    pub hbar_order: i32,
    /// Jet orders consumed per power of `ħ`.
    pub loss: i64,
    evaluators: Mutex<HashMap<(i64, FormSet), Arc<JetEvaluator>>>,
}

impl WhitneyQuotient {
    pub fn new(x: &SubsetModel, policy: &TruncationPolicy) -> Result<Self> {
        WhitneyQuotient::with_loss(x, policy, 1)
    }

    /// Quotient matched to a Fedosov star product. Its cochains `c_k`
    /// differentiate each argument at most `k` times.
    pub fn for_fedosov(x: &SubsetModel, fd: &crate::fedosov::FedosovData) -> Result<Self> {
        let mut pol = fd.policy.clone();
        pol.hbar_order = fd.exact_hbar_order();
        WhitneyQuotient::with_loss(x, &pol, 1)
    }

    pub fn with_loss(x: &SubsetModel, policy: &TruncationPolicy, loss: i64) -> Result<Self> {
        policy.validate()?;
        if policy.dim() != x.dim {
            return Err(Error::DimensionMismatch { left: policy.dim(), right: x.dim });
        }
        if policy.hbar_min < 0 {
            return Err(Error::Invalid("Whitney quotients use h powers >= 0".into()));
        }
        Ok(WhitneyQuotient {
            x: x.clone(),
            jet_order: policy.jet_order as i64,
            hbar_order: policy.hbar_order,
            loss,
            evaluators: Mutex::new(HashMap::new()),
        })
    }

    pub fn dim(&self) -> usize {
        self.x.dim
    }

    pub fn evaluator(&self, order: i64, shift: FormSet) -> Arc<JetEvaluator> {
        let key = (order.max(-1), shift);
        if let Some(e) = self.evaluators.lock().unwrap().get(&key) {
            return e.clone();
        }
        let e = Arc::new(JetEvaluator::new(&self.x, key.0, shift));
        self.evaluators.lock().unwrap().insert(key, e.clone());
        e
    }

    /// Order of the `ħ^j` coefficient of a class whose `ħ^0` part has order `order`.
    pub fn order_at(&self, order: i64, j: i32) -> i64 {
        order - self.loss * j as i64
    }

    /// Quotient dimension of the `ħ^0` part at the given order.
    pub fn quotient_dim(&self, order: i64) -> usize {
        self.evaluator(order, 0).rank()
    }

    /// Whether every `ħ^j` coefficient of `p` is flat at `order - loss·j`.
    pub fn is_flat(&self, p: &MixedElement, order: i64) -> bool {
        p.hbar_powers().into_iter().all(|j| {
            j > self.hbar_order || self.evaluator(self.order_at(order, j), 0).is_flat(&p.hbar_coeff(j))
        })
    }

    pub fn project(&self, p: &MixedElement) -> Result<WhitneyClass> {
        self.project_at(p, self.jet_order)
    }

    pub fn project_at(&self, p: &MixedElement, order: i64) -> Result<WhitneyClass> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch { left: p.dim(), right: self.dim() });
        }
        if !p.is_base_series() {
            return Err(Error::Invalid("Whitney classes are represented by base polynomials".into()));
        }
        let mut rep = MixedElement::zero(self.dim());
        for j in p.hbar_powers() {
            if j < 0 {
                return Err(Error::Invalid("negative h power in a Whitney class".into()));
            }
            if j > self.hbar_order {
                continue;
            }
            let nf = self.evaluator(self.order_at(order, j), 0).normal_form(&p.hbar_coeff(j))?;
            rep.add_assign_ref(&nf.hbar_shift(j));
        }
        Ok(WhitneyClass { order, rep })
    }

    /// Re-project a class to a lower order.
    pub fn lower(&self, f: &WhitneyClass, order: i64) -> Result<WhitneyClass> {
        self.project_at(&f.rep, order.min(f.order))
    }

    pub fn one(&self) -> Result<WhitneyClass> {
        self.project(&MixedElement::one(self.dim()))
    }

    pub fn add(&self, f: &WhitneyClass, g: &WhitneyClass) -> Result<WhitneyClass> {
        self.project_at(&(&f.rep + &g.rep), f.order.min(g.order))
    }

    /// Commutative product of classes.
    pub fn mul(&self, f: &WhitneyClass, g: &WhitneyClass) -> Result<WhitneyClass> {
        let mut pol = TruncationPolicy::unbounded(self.x.n());
        pol.hbar_order = self.hbar_order;
        self.project_at(&f.rep.mul(&g.rep, &pol)?, f.order.min(g.order))
    }

    /// Star product of representatives, projected per `ħ` power.
    pub fn induced_star(
        &self,
        f: &WhitneyClass,
        g: &WhitneyClass,
        fd: &crate::fedosov::FedosovData,
    ) -> Result<WhitneyClass> {
        if fd.dim() != self.dim() {
            return Err(Error::DimensionMismatch { left: fd.dim(), right: self.dim() });
        }
        self.project_at(&fd.star(&f.rep, &g.rep)?, f.order.min(g.order))
    }

    /// Poisson bracket of representatives, one jet order lower.
    pub fn whitney_poisson(
        &self,
        f: &WhitneyClass,
        g: &WhitneyClass,
        pt: &crate::weyl::PoissonTensor,
    ) -> Result<WhitneyClass> {
        let b = crate::weyl::base_poisson(&f.rep, &g.rep, pt)?;
        self.project_at(&b, f.order.min(g.order) - 1)
    }

    /// Random element of the flat ideal at `order`: kernel vectors times
    /// random polynomials.
    pub fn random_flat<R: rand::Rng>(&self, rng: &mut R, order: i64, terms: usize) -> MixedElement {
        let ev = self.evaluator(order, 0);
        let mut out = MixedElement::zero(self.dim());
        if ev.kernel.is_empty() {
            return out;
        }
        let pol = TruncationPolicy::unbounded(self.x.n());
        for _ in 0..terms {
            let k = &ev.kernel[rng.gen_range(0..ev.kernel.len())];
            let m = crate::random::polynomial(rng, self.dim(), 2, 2);
            out.add_assign_ref(&k.mul(&m, &pol).unwrap());
        }
        out
    }

    /// Random representative with monomials from the representative space.
    pub fn random_class<R: rand::Rng>(&self, rng: &mut R, terms: usize) -> Result<WhitneyClass> {
        let ev = self.evaluator(self.jet_order, 0);
        let mut p = MixedElement::zero(self.dim());
        if !ev.standard.is_empty() {
            for _ in 0..terms {
                let m = ev.standard[rng.gen_range(0..ev.standard.len())];
                p.add_term(Key { alpha: m, ..Key::one() }, crate::random::small_scalar(rng, false));
            }
        }
        self.project(&p)
    }
}

/// Outcome of [`verify_ideal_stability`].
#[derive(Clone, Debug, Default, Serialize)]
pub struct StabilityReport {
    pub trials: usize,
    pub checks: usize,
    pub failures: Vec<String>,
    pub space_dim: usize,
    pub quotient_dim: usize,
    pub ideal_dim: usize,
    pub exact_sequence: bool,
}

impl StabilityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.exact_sequence
    }
}

/// For random flat `p` and arbitrary `q`, check that every `c_k(p, q)` and
/// `c_k(q, p)` is flat at order `N_jet - loss·k`; also check the rank–nullity
/// witness of the representative space.
pub fn verify_ideal_stability<R: rand::Rng>(
    fd: &crate::fedosov::FedosovData,
    q: &WhitneyQuotient,
    trials: usize,
    rng: &mut R,
) -> Result<StabilityReport> {
    let n = q.jet_order;
    let ev = q.evaluator(n, 0);
    let (space, image, kernel, kernel_flat) = ev.exact_sequence_witness();
    let mut rep = StabilityReport {
        trials,
        space_dim: space,
        quotient_dim: image,
        ideal_dim: kernel,
        exact_sequence: kernel_flat && space == image + kernel && image == ev.rank(),
        ..Default::default()
    };
    let top = q.hbar_order;
    for t in 0..trials {
        let p = q.random_flat(rng, n, 3);
        let other = crate::random::polynomial(rng, q.dim(), 4, 4);
        for (label, a, b) in [("c_k(p, q)", &p, &other), ("c_k(q, p)", &other, &p)] {
            let s = fd.star(a, b)?;
            for k in 0..=top {
                rep.checks += 1;
                let ck = s.hbar_coeff(k);
                if !q.evaluator(q.order_at(n, k), 0).is_flat(&ck) {
                    rep.failures.push(format!("trial {}: {} not flat for k = {}", t, label, k));
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fedosov::{build_a, ConnectionInput};
    use crate::parse::parse_element;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str, n: usize) -> MixedElement {
        parse_element(s, &TruncationPolicy::unbounded(n)).unwrap()
    }

    fn quotient(name: &str, n: usize, jet: u32) -> WhitneyQuotient {
        let x = SubsetModel::catalogue(name, n).unwrap();
        WhitneyQuotient::new(&x, &TruncationPolicy::new(n, jet, 2 * jet, 0)).unwrap()
    }

    #[test]
    fn flat_membership_examples() {
        let q = quotient("point", 1, 3);
        let ev = q.evaluator(3, 0);
        assert!(!ev.is_flat(&p("x1", 1)));
        assert!(ev.kernel.iter().all(|k| k.terms().all(|(key, _)| key.alpha.degree() > 3)));
        assert_eq!(ev.rank(), 10);
        let q = quotient("axis", 1, 2);
        let ev = q.evaluator(2, 0);
        assert!(!ev.is_flat(&p("x2^2", 1)));
        assert!(ev.is_flat(&p("x2^3", 1)));
        assert!(ev.is_flat(&p("x1^4*x2^3 - 2*x2^5", 1)));
        assert!(!ev.is_flat(&p("x1^6", 1)));
    }

    #[test]
    fn two_points_separate() {
        let q = quotient("two-points", 1, 1);
        let ev = q.evaluator(1, 0);
        // x1 - 1 vanishes to first order only at (1, 0)
        assert!(!ev.is_flat(&p("x1 - 1", 1)));
        let f = p("(x1 - 1)^5*(x1 + 1)^5", 1);
        assert!(ev.is_flat(&f));
        let c1 = q.project(&p("x1", 1)).unwrap();
        let c2 = q.project(&p("x1 + (x1 - 1)^5*(x1 + 1)^5", 1)).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(ev.rank(), 2 * ev.rank() / 2);
        assert_eq!(ev.rank(), 2 * quotient("point", 1, 1).quotient_dim(1));
    }

    #[test]
    fn projection_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for name in ["point", "axis", "cross", "two-points"] {
            let q = quotient(name, 1, 2);
            for _ in 0..5 {
                let a = crate::random::polynomial(&mut rng, 2, 4, 4);
                let b = crate::random::polynomial(&mut rng, 2, 4, 4);
                let pol = TruncationPolicy::unbounded(1);
                let lhs = q.project(&a.mul(&b, &pol).unwrap()).unwrap();
                let rhs = q.mul(&q.project(&a).unwrap(), &q.project(&b).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "{}", name);
            }
        }
    }

    #[test]
    fn induced_star_examples() {
        let q = quotient("point", 1, 2);
        let fd = build_a(&ConnectionInput::flat(1), &TruncationPolicy::new(1, 2, 4, 2)).unwrap();
        let q2 = WhitneyQuotient::for_fedosov(&q.x, &fd).unwrap();
        let a = q2.project(&p("x1", 1)).unwrap();
        let b = q2.project(&p("x2", 1)).unwrap();
        let s = q2.induced_star(&a, &b, &fd).unwrap();
        assert_eq!(s, q2.project(&p("x1*x2 - (1/2)*i*h", 1)).unwrap());
        let one = q2.one().unwrap();
        assert_eq!(q2.induced_star(&one, &a, &fd).unwrap(), a);
    }

    #[test]
    fn poisson_examples() {
        let q = quotient("axis", 1, 3);
        let pt = crate::weyl::PoissonTensor::darboux(1);
        let a = q.project(&p("x1", 1)).unwrap();
        let b = q.project(&p("x2", 1)).unwrap();
        assert_eq!(q.whitney_poisson(&a, &b, &pt).unwrap(), q.project_at(&p("1", 1), 2).unwrap());
        assert!(q.whitney_poisson(&a, &a, &pt).unwrap().is_zero());
    }

    #[test]
    fn ideal_stability_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for conn in ["flat", "curved-linear-n1"] {
            let fd = build_a(&ConnectionInput::builtin(conn, 1).unwrap(), &TruncationPolicy::new(1, 3, 6, 3)).unwrap();
            for name in ["axis", "cross", "two-points"] {
                let x = SubsetModel::catalogue(name, 1).unwrap();
                let q = WhitneyQuotient::for_fedosov(&x, &fd).unwrap();
                let r = verify_ideal_stability(&fd, &q, 5, &mut rng).unwrap();
                assert!(r.passed(), "{} {}: {:?}", conn, name, r);
            }
        }
    }

    #[test]
    fn subset_json() {
        let x = SubsetModel::from_json(r#"{"dim": 2, "germs": [{"point": ["1/2", "0"], "directions": [2]}]}"#).unwrap();
        assert_eq!(SubsetModel::from_spec(&x.to_spec()).unwrap(), x);
        assert!(SubsetModel::from_json(r#"{"dim": 2, "germs": []}"#).is_err());
        assert!(SubsetModel::from_json(
            r#"{"dim": 2, "germs": [{"point": ["0", "0"]}, {"point": ["0", "0"]}]}"#
        )
        .is_err());
    }
}
