//! Abelian Fedosov connection, quantization and symbol maps, and the induced
//! star product on base polynomials.
//!
//! Conventions: `∇a = d_x a + (i/ħ)[Γ̂, a]` with `Γ̂ = ½ Γ_{ijk}(x) y^i y^j dx^k`,
//! and `D = ∇ + (i/ħ)[A, ·]` with `A = ω_{ij} y^i dx^j + r`. Since
//! `(i/ħ)[ω_{ij} y^i dx^j, a] = -δa`, this is `D = ∇ - δ + (i/ħ)[r, ·]`, and
//! flatness is `δr = R̂ + ∇r + (i/ħ) r∘r`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::element::{Key, MixedElement, MultiIndex};
use crate::error::{Error, Result};
use crate::parse::{parse_element, parse_scalar};
use crate::policy::TruncationPolicy;
use crate::scalar::Scalar;
use crate::weyl::{delta_inv, delta_op, hbar_bracket, moyal_symbol, PoissonTensor};

/// One `Γ` entry of a connection document (1-based indices).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GammaEntry {
    pub indices: [usize; 3],
    pub poly: String,
}

/// Connection document: `{dim, pi?, gamma: [{indices, poly}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConnectionSpec {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub gamma: Vec<GammaEntry>,
}

/// Names of the shipped connections.
pub const BUILTIN_CONNECTIONS: &[&str] = &["flat", "curved-linear-n1", "curved-linear-n2"];

/// Poisson tensor plus a totally symmetric lowered `Γ_{ijk}(x)`.
#[derive(Clone, Debug)]
pub struct ConnectionInput {
    pub pt: PoissonTensor,
    /// Keyed by sorted 0-based index triples.
    gamma: BTreeMap<[usize; 3], MixedElement>,
}

fn sorted(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

impl ConnectionInput {
    pub fn flat(n: usize) -> Self {
        ConnectionInput { pt: PoissonTensor::darboux(n), gamma: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.pt.dim()
    }

    pub fn n(&self) -> usize {
        self.pt.n()
    }

    pub fn is_flat(&self) -> bool {
        self.gamma.is_empty()
    }

    /// `flat` (any n), `curved-linear-n1`, `curved-linear-n2`.
    pub fn builtin(name: &str, n: usize) -> Result<Self> {
        let spec = match name {
            "flat" => return Ok(ConnectionInput::flat(n)),
            "curved-linear-n1" => ConnectionSpec {
                dim: 2,
                pi: None,
                gamma: vec![GammaEntry { indices: [1, 1, 1], poly: "x2".into() }],
            },
            "curved-linear-n2" => ConnectionSpec {
                dim: 4,
                pi: None,
                gamma: vec![
                    GammaEntry { indices: [1, 1, 1], poly: "x2".into() },
                    GammaEntry { indices: [1, 2, 2], poly: "x3".into() },
                ],
            },
            other => return Err(Error::Invalid(format!("unknown connection '{}'", other))),
        };
        if spec.dim != 2 * n {
            return Err(Error::Invalid(format!("connection '{}' needs n = {}, got n = {}", name, spec.dim / 2, n)));
        }
        ConnectionInput::from_spec(&spec)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ConnectionSpec =
            serde_json::from_str(text).map_err(|e| Error::Invalid(format!("connection JSON: {}", e)))?;
        ConnectionInput::from_spec(&spec)
    }

    pub fn from_spec(spec: &ConnectionSpec) -> Result<Self> {
        if spec.dim == 0 || spec.dim % 2 != 0 || spec.dim > crate::element::MAX_DIM {
            return Err(Error::Invalid(format!("connection dim must be 2, 4, 6 or 8, got {}", spec.dim)));
        }
        let n = spec.dim / 2;
        let pt = match &spec.pi {
            None => PoissonTensor::darboux(n),
            Some(rows) => {
                let m = rows
                    .iter()
                    .map(|r| r.iter().map(|s| parse_scalar(s)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                if m.len() != spec.dim {
                    return Err(Error::Invalid("pi must be dim x dim".into()));
                }
                PoissonTensor::from_matrix(m)?
            }
        };
        let pol = TruncationPolicy::unbounded(n);
        let mut gamma: BTreeMap<[usize; 3], MixedElement> = BTreeMap::new();
        for e in &spec.gamma {
            for &i in &e.indices {
                if i == 0 || i > spec.dim {
                    return Err(Error::IndexOutOfRange { index: i, dim: spec.dim });
                }
            }
            let f = parse_element(&e.poly, &pol)?;
            if !f.is_base_series() || f.terms().any(|(k, _)| k.hbar != 0) {
                return Err(Error::Invalid(format!("gamma entry '{}' must be a polynomial in x", e.poly)));
            }
            let key = sorted([e.indices[0] - 1, e.indices[1] - 1, e.indices[2] - 1]);
            if let Some(prev) = gamma.get(&key) {
                if *prev != f {
                    return Err(Error::Invalid(format!(
                        "gamma is not totally symmetric at {:?}",
                        e.indices
                    )));
                }
            }
            gamma.insert(key, f);
        }
        gamma.retain(|_, f| !f.is_zero());
        Ok(ConnectionInput { pt, gamma })
    }

    /// `Γ_{ijk}` (0-based), symmetric in all slots.
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> MixedElement {
        self.gamma.get(&sorted([i, j, k])).cloned().unwrap_or_else(|| MixedElement::zero(self.dim()))
    }

    /// `Γ̂ = ½ Γ_{ijk}(x) y^i y^j dx^k`.
    pub fn gamma_hat(&self) -> MixedElement {
        let d = self.dim();
        let half = Scalar::from_frac(1, 2);
        let mut out = MixedElement::zero(d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let g = self.gamma(i, j, k);
                    for (key, c) in g.terms() {
                        let mut nk = *key;
                        nk.beta = MultiIndex::unit(i).add(&MultiIndex::unit(j));
                        nk.forms = 1 << k;
                        out.add_term(nk, c * &half);
                    }
                }
            }
        }
        out
    }

    /// Torsion of the induced Christoffels `Γ^m_{jk} = Π^{mi} Γ_{ijk}`,
    /// and `∇ω` in Darboux form, both as lists of nonzero defects.
    /// Empty means the connection is torsion-free and symplectic.
    pub fn symplectic_defects(&self) -> Vec<String> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let g = self.gamma(i, j, k);
                    for (a, b, c) in [(j, i, k), (i, k, j), (k, j, i)] {
                        if self.gamma(a, b, c) != g {
                            out.push(format!("Gamma_{}{}{} != Gamma_{}{}{}", i + 1, j + 1, k + 1, a + 1, b + 1, c + 1));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Base exterior derivative `Σ_j dx^j ∧ ∂_{x_j}`.
pub fn d_x(a: &MixedElement) -> MixedElement {
    let mut out = MixedElement::zero(a.dim());
    for (k, c) in a.terms() {
        for j in 0..a.dim() {
            let e = k.alpha.get(j);
            if e == 0 {
                continue;
            }
            let Some(sign) = crate::element::wedge_sign(1 << j, k.forms) else { continue };
            let mut nk = *k;
            nk.alpha.0[j] -= 1;
            nk.forms |= 1 << j;
            out.add_term(nk, c.scale_int(sign * e as i64));
        }
    }
    out
}

/// `∇a = d_x a + (i/ħ)[Γ̂, a]`.
pub fn nabla(a: &MixedElement, conn: &ConnectionInput, policy: &TruncationPolicy) -> Result<MixedElement> {
    let mut out = d_x(a).truncate(policy);
    if !conn.is_flat() {
        out.add_assign_ref(&hbar_bracket(&conn.gamma_hat(), a, &conn.pt, policy)?);
    }
    Ok(out)
}

/// `R̂ = d_x Γ̂ + (i/ħ) Γ̂∘Γ̂`, so that `∇∇a = (i/ħ)[R̂, a]`.
pub fn curvature(conn: &ConnectionInput, policy: &TruncationPolicy) -> Result<MixedElement> {
    if conn.is_flat() {
        return Ok(MixedElement::zero(conn.dim()));
    }
    let g = conn.gamma_hat();
    let mut out = d_x(&g).truncate(policy);
    let sq = hbar_bracket(&g, &g, &conn.pt, policy)?;
    out.add_scaled(&sq, &Scalar::from_frac(1, 2));
    Ok(out)
}

/// Verified abelian connection together with memoized quantizations.
#[derive(Debug)]
pub struct FedosovData {
    pub conn: ConnectionInput,
    /// `A = ω_{ij} y^i dx^j + r`.
    pub a: MixedElement,
    pub r: MixedElement,
    pub policy: TruncationPolicy,
    /// `R̂ + ∇r - δr + (i/ħ) r∘r` in Fedosov degrees below `N_F`; expected 0.
    pub curvature_residual: MixedElement,
    pub rounds: usize,
    operator: Mutex<Option<Arc<BTreeMap<MultiIndex, MixedElement>>>>,
    products: Mutex<HashMap<(MultiIndex, MultiIndex), MixedElement>>,
}

/// `ω_{ij} y^i dx^j`.
pub fn a_zero(pt: &PoissonTensor) -> MixedElement {
    let d = pt.dim();
    let mut out = MixedElement::zero(d);
    for i in 0..d {
        for j in 0..d {
            let w = pt.omega(i, j);
            if w.is_zero() {
                continue;
            }
            let key = Key { hbar: 0, forms: 1 << j, alpha: MultiIndex::zero(), beta: MultiIndex::unit(i) };
            out.add_term(key, w.clone());
        }
    }
    out
}

fn below(a: &MixedElement, deg: i64) -> MixedElement {
    a.filter(|k| k.fedosov_degree() <= deg)
}

/// Solve `r = δ⁻¹(R̂ + ∇r + (i/ħ) r∘r)` by fixed-point iteration from `r = 0`.
pub fn build_a(conn: &ConnectionInput, policy: &TruncationPolicy) -> Result<FedosovData> {
    policy.validate()?;
    if policy.n != conn.n() {
        return Err(Error::DimensionMismatch { left: policy.dim(), right: conn.dim() });
    }
    if policy.fedosov_order < 2 {
        return Err(Error::Invalid("Fedosov order must be at least 2".into()));
    }
    let pol = policy.without_jet_cap();
    let pt = &conn.pt;
    let rhat = curvature(conn, &pol)?;
    let half = Scalar::from_frac(1, 2);
    let mut r = MixedElement::zero(conn.dim());
    let max_rounds = policy.fedosov_order as usize + 2;
    let mut rounds = 0;
    loop {
        if rounds >= max_rounds {
            return Err(Error::NonConvergence { rounds });
        }
        rounds += 1;
        let mut rhs = rhat.clone();
        rhs.add_assign_ref(&nabla(&r, conn, &pol)?);
        rhs.add_scaled(&hbar_bracket(&r, &r, pt, &pol)?, &half);
        let next = delta_inv(&rhs).truncate(&pol);
        if next == r {
            break;
        }
        r = next;
    }
    let mut residual = rhat;
    residual.add_assign_ref(&nabla(&r, conn, &pol)?);
    residual = &residual - &delta_op(&r);
    residual.add_scaled(&hbar_bracket(&r, &r, pt, &pol)?, &half);
    let residual = below(&residual, policy.fedosov_order as i64 - 1);
    let a = &a_zero(pt) + &r;
    Ok(FedosovData {
        conn: conn.clone(),
        a,
        r,
        policy: pol,
        curvature_residual: residual,
        rounds,
        operator: Mutex::new(None),
        products: Mutex::new(HashMap::new()),
    })
}

impl FedosovData {
    pub fn n(&self) -> usize {
        self.conn.n()
    }

    pub fn dim(&self) -> usize {
        self.conn.dim()
    }

    /// `D a = ∇a + (i/ħ)[A, a]`.
    pub fn d(&self, a: &MixedElement) -> Result<MixedElement> {
        let mut out = nabla(a, &self.conn, &self.policy)?;
        out.add_assign_ref(&hbar_bracket(&self.a, a, &self.conn.pt, &self.policy)?);
        Ok(out)
    }

    /// `D(D a)` restricted to Fedosov degrees where truncation cannot reach it.
    pub fn d_squared_defect(&self, a: &MixedElement) -> Result<MixedElement> {
        let dd = self.d(&self.d(a)?)?;
        let top = a.terms().map(|(k, _)| k.fedosov_degree()).max().unwrap_or(0);
        let cap = (self.policy.fedosov_order as i64).min(top.max(0)) - 2;
        Ok(below(&dd, cap.max(self.policy.fedosov_order as i64 - 2)))
    }

    /// The quantization as a differential operator: `q(f) = Σ_γ Q_γ ∂^γ f`.
    /// Built degree by degree in the Fedosov filtration.
    pub fn operator(&self) -> Result<Arc<BTreeMap<MultiIndex, MixedElement>>> {
        let mut guard = self.operator.lock().unwrap();
        if let Some(op) = guard.as_ref() {
            return Ok(op.clone());
        }
        let pol = &self.policy;
        let pt = &self.conn.pt;
        let dim = self.dim();
        let nf = pol.fedosov_order as usize;
        let r_parts: Vec<MixedElement> =
            (0..=nf + 1).map(|m| self.r.filter(|k| k.fedosov_degree() == m as i64)).collect();
        let mut parts: Vec<BTreeMap<MultiIndex, MixedElement>> =
            vec![BTreeMap::from([(MultiIndex::zero(), MixedElement::one(dim))])];
        for d in 1..=nf {
            let mut rhs: BTreeMap<MultiIndex, MixedElement> = BTreeMap::new();
            let mut push = |g: MultiIndex, e: MixedElement| {
                if !e.is_zero() {
                    rhs.entry(g).or_insert_with(|| MixedElement::zero(dim)).add_assign_ref(&e);
                }
            };
            for (g, c) in &parts[d - 1] {
                push(*g, nabla(c, &self.conn, pol)?);
                for j in 0..dim {
                    push(g.inc(j), c.with_forms(1 << j));
                }
            }
            for (j, part) in parts.iter().enumerate().take(d - 1) {
                let m = d + 1 - j;
                if r_parts[m].is_zero() {
                    continue;
                }
                for (g, c) in part {
                    push(*g, hbar_bracket(&r_parts[m], c, pt, pol)?);
                }
            }
            let next: BTreeMap<MultiIndex, MixedElement> = rhs
                .into_iter()
                .map(|(g, e)| (g, delta_inv(&e).truncate(pol)))
                .filter(|(_, e)| !e.is_zero())
                .collect();
            parts.push(next);
        }
        let mut op: BTreeMap<MultiIndex, MixedElement> = BTreeMap::new();
        for part in parts {
            for (g, e) in part {
                op.entry(g).or_insert_with(|| MixedElement::zero(dim)).add_assign_ref(&e);
            }
        }
        let op = Arc::new(op);
        *guard = Some(op.clone());
        Ok(op)
    }

    /// Reference lift: iterate `a <- f + δ⁻¹(∇a + (i/ħ)[r, a])` until stable.
    pub fn quantize_by_iteration(&self, f: &MixedElement) -> Result<MixedElement> {
        check_base(f, self.dim())?;
        let pt = &self.conn.pt;
        let mut a = f.truncate(&self.policy);
        let max_rounds = self.policy.fedosov_order as usize + 2;
        for _ in 0..max_rounds {
            let mut rhs = nabla(&a, &self.conn, &self.policy)?;
            rhs.add_assign_ref(&hbar_bracket(&self.r, &a, pt, &self.policy)?);
            let mut next = delta_inv(&rhs);
            next.add_assign_ref(f);
            next.truncate_in_place(&self.policy);
            if next == a {
                return Ok(a);
            }
            a = next;
        }
        Err(Error::NonConvergence { rounds: max_rounds })
    }

    /// The flat section with symbol `f`.
    pub fn quantize(&self, f: &MixedElement) -> Result<MixedElement> {
        check_base(f, self.dim())?;
        let op = self.operator()?;
        let derivs = derivatives(f, op.keys());
        let mut out = MixedElement::zero(self.dim());
        for (g, df) in &derivs {
            out.add_assign_ref(&op[g].mul(df, &self.policy)?);
        }
        Ok(out)
    }

    /// `σ(Q_γ ∘ Q_γ')`, the coefficient of `∂^γ f ∂^γ' g` in `f ⋆ g`.
    pub fn bidifferential_coefficient(&self, g1: &MultiIndex, g2: &MultiIndex) -> Result<MixedElement> {
        if let Some(p) = self.products.lock().unwrap().get(&(*g1, *g2)) {
            return Ok(p.clone());
        }
        let op = self.operator()?;
        let p = match (op.get(g1), op.get(g2)) {
            (Some(a), Some(b)) => moyal_symbol(a, b, &self.conn.pt, &self.policy)?,
            _ => MixedElement::zero(self.dim()),
        };
        self.products.lock().unwrap().insert((*g1, *g2), p.clone());
        Ok(p)
    }

    /// `f ⋆ g = σ(q(f)∘q(g))`; exact in `ħ^k` for `2k <= N_F`.
    pub fn star(&self, f: &MixedElement, g: &MixedElement) -> Result<MixedElement> {
        check_base(f, self.dim())?;
        check_base(g, self.dim())?;
        let op = self.operator()?;
        let df = derivatives(f, op.keys());
        let dg = derivatives(g, op.keys());
        let mut out = MixedElement::zero(self.dim());
        for (g1, a) in &df {
            for (g2, b) in &dg {
                if (g1.degree() + g2.degree()) as i64 > 2 * self.policy.hbar_order as i64 {
                    continue;
                }
                let c = self.bidifferential_coefficient(g1, g2)?;
                if c.is_zero() {
                    continue;
                }
                out.add_assign_ref(&c.mul(a, &self.policy)?.mul(b, &self.policy)?);
            }
        }
        Ok(out)
    }

    /// Reference star product through the iterated lift.
    pub fn star_by_iteration(&self, f: &MixedElement, g: &MixedElement) -> Result<MixedElement> {
        let qf = self.quantize_by_iteration(f)?;
        let qg = self.quantize_by_iteration(g)?;
        moyal_symbol(&qf, &qg, &self.conn.pt, &self.policy)
    }

    /// Coefficient `c_k(f, g)` of `ħ^k` in `f ⋆ g`.
    pub fn c_k(&self, f: &MixedElement, g: &MixedElement, k: i32) -> Result<MixedElement> {
        Ok(self.star(f, g)?.hbar_coeff(k))
    }

    /// Highest `ħ` power of the star product that is exact at this policy.
    pub fn exact_hbar_order(&self) -> i32 {
        self.policy.hbar_order.min(self.policy.fedosov_order as i32 / 2)
    }
}

/// Nonzero `∂^γ f` for the requested `γ`.
fn derivatives<'a>(
    f: &MixedElement,
    wanted: impl Iterator<Item = &'a MultiIndex>,
) -> Vec<(MultiIndex, MixedElement)> {
    let mut memo: HashMap<MultiIndex, MixedElement> = HashMap::new();
    memo.insert(MultiIndex::zero(), f.clone());
    let top = f.max_base_degree();
    let mut out = Vec::new();
    for g in wanted {
        if g.degree() > top {
            continue;
        }
        let d = derivative(f.dim(), g, &mut memo);
        if !d.is_zero() {
            out.push((*g, d));
        }
    }
    out
}

fn derivative(dim: usize, g: &MultiIndex, memo: &mut HashMap<MultiIndex, MixedElement>) -> MixedElement {
    if let Some(d) = memo.get(g) {
        return d.clone();
    }
    let j = (0..dim).find(|&j| g.get(j) > 0).unwrap();
    let prev = derivative(dim, &g.dec(j).unwrap(), memo);
    let d = prev.partial0(crate::element::VarKind::Base, j);
    memo.insert(*g, d.clone());
    d
}

/// Projection to fiber degree 0 and form degree 0.
pub fn symbol(a: &MixedElement) -> MixedElement {
    a.filter(|k| k.beta.degree() == 0 && k.forms == 0)
}

fn check_base(f: &MixedElement, dim: usize) -> Result<()> {
    if f.dim() != dim {
        return Err(Error::DimensionMismatch { left: f.dim(), right: dim });
    }
    if !f.is_base_series() {
        return Err(Error::Invalid("expected a base function (no y, no dx)".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;
    use crate::random::{element, polynomial, Shape};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str, n: usize) -> MixedElement {
        parse_element(s, &TruncationPolicy::unbounded(n)).unwrap()
    }

    #[test]
    fn nabla_flat_examples() {
        let c = ConnectionInput::flat(1);
        let pol = TruncationPolicy::unbounded(1);
        assert_eq!(nabla(&p("x1*y1", 1), &c, &pol).unwrap(), p("y1*dx1", 1));
        assert!(nabla(&p("y1", 1), &c, &pol).unwrap().is_zero());
    }

    #[test]
    fn nabla_constant_gamma() {
        // Γ̂ = ½ y1² dx1 commutes with y1; against y2 only Π^{12} contributes
        let spec = ConnectionSpec { dim: 2, pi: None, gamma: vec![GammaEntry { indices: [1, 1, 1], poly: "1".into() }] };
        let c = ConnectionInput::from_spec(&spec).unwrap();
        let pol = TruncationPolicy::unbounded(1);
        assert!(nabla(&p("y1", 1), &c, &pol).unwrap().is_zero());
        assert_eq!(nabla(&p("y2", 1), &c, &pol).unwrap(), p("y1*dx1", 1));
    }

    #[test]
    fn a_zero_bracket_is_minus_delta() {
        let pt = PoissonTensor::darboux(2);
        let pol = TruncationPolicy::unbounded(2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let shape = Shape { dim: 4, terms: 10, base_degree: 2, fiber_degree: 3, hbar: (0, 2), max_forms: 2, complex: true };
        for _ in 0..10 {
            let a = element(&mut rng, &shape);
            let lhs = hbar_bracket(&a_zero(&pt), &a, &pt, &pol).unwrap();
            assert_eq!(lhs, delta_op(&a).scale(&-Scalar::one()));
        }
    }

    #[test]
    fn torsion_free_lift_anticommutes_with_delta() {
        let c = ConnectionInput::builtin("curved-linear-n2", 2).unwrap();
        let pol = TruncationPolicy::unbounded(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let shape = Shape { dim: 4, terms: 8, base_degree: 2, fiber_degree: 3, hbar: (0, 1), max_forms: 2, complex: false };
        for _ in 0..5 {
            let a = element(&mut rng, &shape);
            let lhs = &delta_op(&nabla(&a, &c, &pol).unwrap()) + &nabla(&delta_op(&a), &c, &pol).unwrap();
            assert!(lhs.is_zero());
        }
    }

    #[test]
    fn curvature_examples() {
        let pol = TruncationPolicy::unbounded(2);
        assert!(curvature(&ConnectionInput::flat(2), &pol).unwrap().is_zero());
        let spec = ConnectionSpec { dim: 2, pi: None, gamma: vec![GammaEntry { indices: [1, 1, 1], poly: "x1".into() }] };
        let c = ConnectionInput::from_spec(&spec).unwrap();
        assert!(curvature(&c, &TruncationPolicy::unbounded(1)).unwrap().is_zero());
        let c = ConnectionInput::builtin("curved-linear-n2", 2).unwrap();
        assert!(!curvature(&c, &pol).unwrap().is_zero());
    }

    #[test]
    fn flat_connection_is_trivial() {
        let fd = build_a(&ConnectionInput::flat(1), &TruncationPolicy::new(1, 4, 6, 3)).unwrap();
        assert!(fd.r.is_zero());
        assert_eq!(fd.a, p("y2*dx1 - y1*dx2", 1));
        assert!(fd.curvature_residual.is_zero());
    }

    #[test]
    fn gamma_x1_in_n2_has_no_curvature() {
        let spec = ConnectionSpec { dim: 4, pi: None, gamma: vec![GammaEntry { indices: [1, 1, 1], poly: "x1".into() }] };
        let c = ConnectionInput::from_spec(&spec).unwrap();
        let fd = build_a(&c, &TruncationPolicy::new(2, 4, 6, 3)).unwrap();
        assert!(fd.r.is_zero());
        assert!(fd.curvature_residual.is_zero());
    }

    #[test]
    fn curved_connection_is_abelian() {
        for (name, n) in [("curved-linear-n1", 1), ("curved-linear-n2", 2)] {
            let c = ConnectionInput::builtin(name, n).unwrap();
            assert!(c.symplectic_defects().is_empty());
            let fd = build_a(&c, &TruncationPolicy::new(n, 4, 6, 3)).unwrap();
            assert!(!fd.r.is_zero());
            assert!(fd.curvature_residual.is_zero(), "{}: {}", name, fd.curvature_residual);
            assert!(delta_inv(&fd.r).is_zero());
            assert!(crate::weyl::fedosov_degree(&fd.r).unwrap() >= 3);
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let shape = Shape { dim: 2 * n, terms: 6, base_degree: 2, fiber_degree: 3, hbar: (0, 1), max_forms: 1, complex: false };
            for _ in 0..3 {
                let a = element(&mut rng, &shape);
                assert!(fd.d_squared_defect(&a).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn quantize_examples() {
        let fd = build_a(&ConnectionInput::flat(1), &TruncationPolicy::new(1, 4, 6, 3)).unwrap();
        assert_eq!(fd.quantize(&p("x1", 1)).unwrap(), p("x1 + y1", 1));
        assert_eq!(fd.quantize(&p("1", 1)).unwrap(), p("1", 1));
        assert_eq!(fd.quantize(&p("x1^2", 1)).unwrap(), p("x1^2 + 2*x1*y1 + y1^2", 1));
        assert_eq!(symbol(&p("x1 + y1", 1)), p("x1", 1));
        assert!(symbol(&p("h*y1*y2", 1)).is_zero());
    }

    #[test]
    fn star_examples() {
        let fd = build_a(&ConnectionInput::flat(1), &TruncationPolicy::new(1, 4, 6, 3)).unwrap();
        assert_eq!(fd.star(&p("x1", 1), &p("x2", 1)).unwrap(), p("x1*x2 - (1/2)*i*h", 1));
        assert_eq!(
            fd.star(&p("x1^2", 1), &p("x2^2", 1)).unwrap(),
            p("x1^2*x2^2 - 2*i*h*x1*x2 - (1/2)*h^2", 1)
        );
        let f = p("x1^3 - 2*x2 + x1*x2", 1);
        assert_eq!(fd.star(&f, &p("1", 1)).unwrap(), f);
        assert_eq!(fd.star(&p("1", 1), &f).unwrap(), f);
    }

    #[test]
    fn curved_quantization_is_flat_and_invertible() {
        let c = ConnectionInput::builtin("curved-linear-n1", 1).unwrap();
        let fd = build_a(&c, &TruncationPolicy::new(1, 4, 6, 3)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let f = polynomial(&mut rng, 2, 3, 4);
            let q = fd.quantize(&f).unwrap();
            assert_eq!(symbol(&q), f);
            let dq = below(&fd.d(&q).unwrap(), fd.policy.fedosov_order as i64 - 1);
            assert!(dq.is_zero(), "{}", dq);
        }
    }

    #[test]
    fn operator_form_matches_iterated_lift() {
        for (name, n) in [("flat", 1), ("curved-linear-n1", 1), ("curved-linear-n2", 2)] {
            let c = ConnectionInput::builtin(name, n).unwrap();
            let fd = build_a(&c, &TruncationPolicy::new(n, 4, 6, 3)).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            for _ in 0..3 {
                let f = polynomial(&mut rng, 2 * n, 3, 4);
                let g = polynomial(&mut rng, 2 * n, 3, 4);
                assert_eq!(fd.quantize(&f).unwrap(), fd.quantize_by_iteration(&f).unwrap());
                assert_eq!(fd.star(&f, &g).unwrap(), fd.star_by_iteration(&f, &g).unwrap());
            }
        }
    }

    #[test]
    fn cochains_have_order_at_most_k_per_argument() {
        for (name, n) in [("flat", 1), ("curved-linear-n1", 1), ("curved-linear-n2", 2)] {
            let fd = build_a(&ConnectionInput::builtin(name, n).unwrap(), &TruncationPolicy::new(n, 4, 6, 3)).unwrap();
            let op = fd.operator().unwrap();
            let mut seen = 0;
            for g1 in op.keys() {
                for g2 in op.keys() {
                    let c = fd.bidifferential_coefficient(g1, g2).unwrap();
                    for k in c.hbar_powers() {
                        if k <= fd.exact_hbar_order() {
                            seen += 1;
                            assert!(g1.degree() as i32 <= k && g2.degree() as i32 <= k, "{} {:?} {:?} at h^{}", name, g1, g2, k);
                        }
                    }
                }
            }
            assert!(seen > 0);
        }
    }

    #[test]
    fn connection_json() {
        let c = ConnectionInput::from_json(r#"{"dim": 2, "gamma": [{"indices": [1, 2, 1], "poly": "x1"}, {"indices": [2, 1, 1], "poly": "x1"}]}"#).unwrap();
        assert_eq!(c.gamma(0, 0, 1), p("x1", 1));
        assert!(ConnectionInput::from_json(r#"{"dim": 2, "gamma": [{"indices": [1, 2, 1], "poly": "x1"}, {"indices": [2, 1, 1], "poly": "x2"}]}"#).is_err());
        assert!(ConnectionInput::from_json(r#"{"dim": 2, "pi": [["0", "1"], ["1", "0"]], "gamma": []}"#).is_err());
        assert!(ConnectionInput::from_json(r#"{"dim": 2, "pi": [["0", "2"], ["-2", "0"]], "gamma": []}"#).is_ok());
    }
}
