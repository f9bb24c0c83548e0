//! Seeded verification suites and the reports built from them.

use std::collections::BTreeMap;

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;
use crate::derham::{betti_table, brylinski_delta, BettiTable, FormCalculus, WhitneyForm};
use crate::element::{form_sets, MixedElement};
use crate::error::{Error, Result};
use crate::fedosov::{a_zero, build_a, symbol, ConnectionInput, FedosovData};
use crate::homology::{
    antisymmetrize, connes_b, e1_probe, hochschild_b, hochschild_dims, mu, ChainVector, FiniteAlgebra,
    HomologyReport,
};
use crate::linalg::SparseVec;
use crate::policy::TruncationPolicy;
use crate::random::{element, polynomial, small_scalar, Shape};
use crate::scalar::Scalar;
use crate::weyl::{base_poisson, delta_inv, delta_op, hbar_bracket, moyal, PoissonTensor};
use crate::whitney::{verify_ideal_stability, SubsetModel, WhitneyClass, WhitneyQuotient};

pub const SCHEMA_VERSION: u32 = 1;

pub const SUITES: &[&str] = &["weyl", "fedosov", "whitney", "derham", "homology", "all"];

/// Results that the suites only cover through finite shadows.
pub const SCOPE_NOTES: &[&str] = &[
    "Laurent-coefficient Hochschild homology and E2 degeneration are checked only through Betti counts, chain identities and the first-order probe",
    "the quasi-isomorphism to cyclic homology and the index diagram are not computed",
];

/// One named invariant.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub trials: usize,
    pub passed: bool,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl Check {
    pub fn new(name: &str) -> Self {
        Check { name: name.into(), trials: 0, passed: true, failures: 0, first_failure: None }
    }

    pub fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.passed = false;
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub version: String,
    pub config: RunConfig,
    pub suite: String,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub scope_notes: Vec<String>,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("suite {} (version {}, seed {})\n", self.suite, self.version, self.config.seed);
        for c in &self.checks {
            s += &format!("{}: {} ({} trials)\n", c.name, if c.passed { "pass" } else { "FAIL" }, c.trials);
            if let Some(f) = &c.first_failure {
                s += &format!("  first failure: {}\n", f);
            }
        }
        s += &format!("overall: {}\n", if self.passed { "pass" } else { "FAIL" });
        s
    }
}

/// Deterministic generator per check label.
pub fn rng_for(seed: u64, label: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

fn builtin_for(name: &str, n: usize) -> Result<ConnectionInput> {
    ConnectionInput::builtin(name, n)
}

// ---------------------------------------------------------------- weyl

pub fn weyl_checks(pt: &PoissonTensor, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let dim = pt.dim();
    let mut pol = TruncationPolicy::unbounded(pt.n());
    pol.fedosov_order = 6;
    pol.hbar_min = 0;
    pol.hbar_order = 3;
    let shape = Shape { dim, terms: 4, base_degree: 1, fiber_degree: 3, hbar: (0, 1), max_forms: 0, complex: true };
    let fshape = Shape { max_forms: 2, terms: 6, ..shape.clone() };
    let mut assoc = Check::new("moyal_associativity");
    let mut unit = Check::new("moyal_unit");
    let mut hodge = Check::new("delta_hodge_decomposition");
    let mut dd = Check::new("delta_squared");
    let mut dinv = Check::new("delta_inverse_squared");
    let mut a0 = Check::new("a0_bracket_is_minus_delta");
    let mut rng = rng_for(seed, "weyl");
    let one = MixedElement::one(dim);
    let unb = TruncationPolicy::unbounded(pt.n());
    for _ in 0..trials {
        let (a, b, c) = (element(&mut rng, &shape), element(&mut rng, &shape), element(&mut rng, &shape));
        let l = moyal(&moyal(&a, &b, pt, &pol)?, &c, pt, &pol)?;
        let r = moyal(&a, &moyal(&b, &c, pt, &pol)?, pt, &pol)?;
        assoc.record(l == r, || format!("a = {}, b = {}, c = {}", a, b, c));
        let at = a.truncate(&pol);
        unit.record(moyal(&one, &a, pt, &pol)? == at && moyal(&a, &one, pt, &pol)? == at, || a.to_string());
        let w = element(&mut rng, &fshape);
        let a00 = w.filter(|k| k.beta.degree() == 0 && k.forms == 0);
        let sum = &(&delta_op(&delta_inv(&w)) + &delta_inv(&delta_op(&w))) + &a00;
        hodge.record(sum == w, || w.to_string());
        dd.record(delta_op(&delta_op(&w)).is_zero(), || w.to_string());
        dinv.record(delta_inv(&delta_inv(&w)).is_zero(), || w.to_string());
        let br = hbar_bracket(&a_zero(pt), &w, pt, &unb)?;
        a0.record(br == -&delta_op(&w), || w.to_string());
    }
    Ok(vec![assoc, unit, hodge, dd, dinv, a0])
}

// ---------------------------------------------------------------- fedosov

/// Star-product axioms at `K = 3`, `N_F = 8` on random polynomials of degree `<= 4`.
pub fn star_axiom_checks(conn: &ConnectionInput, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let n = conn.n();
    let dim = conn.dim();
    let fd = build_a(conn, &TruncationPolicy::new(n, 4, 8, 3))?;
    let top = fd.exact_hbar_order();
    let tag = |s: &str| format!("{}[{}]", s, conn_label(conn));
    let mut c0 = Check::new(&tag("star_c0_is_product"));
    let mut unit = Check::new(&tag("star_unit"));
    let mut assoc = Check::new(&tag("star_associativity"));
    let mut comm = Check::new(&tag("star_commutator_bracket"));
    let mut rng = rng_for(seed, &tag("star"));
    let one = MixedElement::one(dim);
    let unb = TruncationPolicy::unbounded(n);
    let within = |e: &MixedElement| e.filter(|k| k.hbar <= top);
    let min_order = if conn.is_flat() { 3 } else { 2 };
    for _ in 0..trials {
        let f = polynomial(&mut rng, dim, 4, 4);
        let g = polynomial(&mut rng, dim, 4, 4);
        let h = polynomial(&mut rng, dim, 4, 4);
        let fg = fd.star(&f, &g)?;
        c0.record(fg.hbar_coeff(0) == f.mul(&g, &unb)?, || format!("f = {}, g = {}", f, g));
        unit.record(fd.star(&one, &f)? == f && fd.star(&f, &one)? == f, || f.to_string());
        let l = within(&fd.star(&fg, &h)?);
        let r = within(&fd.star(&f, &fd.star(&g, &h)?)?);
        assoc.record(l == r, || format!("f = {}, g = {}, h = {}", f, g, h));
        let gf = fd.star(&g, &f)?;
        let mut d = &fg - &gf;
        d.add_assign_ref(&base_poisson(&f, &g, &conn.pt)?.hbar_shift(1).scale(&Scalar::i()));
        let d = within(&d);
        comm.record(d.hbar_powers().iter().all(|&k| k >= min_order), || format!("f = {}, g = {}: {}", f, g, d));
    }
    Ok(vec![c0, unit, assoc, comm])
}

fn conn_label(conn: &ConnectionInput) -> String {
    if conn.is_flat() {
        format!("flat,n={}", conn.n())
    } else {
        format!("curved,n={}", conn.n())
    }
}

/// `D∘D = 0`, `D q(f) = 0`, `σ∘q = id` and `q∘σ = id` at `N_F = 8`.
pub fn fedosov_checks(conn: &ConnectionInput, polys: usize, sections: usize, seed: u64) -> Result<Vec<Check>> {
    let n = conn.n();
    let dim = conn.dim();
    let fd = build_a(conn, &TruncationPolicy::new(n, 4, 8, 3))?;
    let tag = |s: &str| format!("{}[{}]", s, conn_label(conn));
    let mut res = Check::new(&tag("fedosov_curvature_residual"));
    res.record(fd.curvature_residual.is_zero(), || fd.curvature_residual.to_string());
    let mut dd = Check::new(&tag("d_squared"));
    let mut flat = Check::new(&tag("quantization_is_flat"));
    let mut sq = Check::new(&tag("symbol_of_quantization"));
    let mut qs = Check::new(&tag("quantization_of_symbol"));
    let mut rng = rng_for(seed, &tag("fedosov"));
    let shape = Shape { dim, terms: 6, base_degree: 2, fiber_degree: 3, hbar: (0, 1), max_forms: 1, complex: false };
    let cap = fd.policy.fedosov_order as i64 - 1;
    for _ in 0..sections {
        let a = element(&mut rng, &shape);
        dd.record(fd.d_squared_defect(&a)?.is_zero(), || a.to_string());
    }
    let mut images = Vec::new();
    for t in 0..polys {
        let f = polynomial(&mut rng, dim, 4, 4);
        let q = fd.quantize(&f)?;
        sq.record(symbol(&q) == f, || f.to_string());
        let dq = fd.d(&q)?.filter(|k| k.fedosov_degree() <= cap);
        flat.record(dq.is_zero(), || f.to_string());
        if t < sections {
            images.push(q);
        }
    }
    for a in images {
        let back = fd.quantize(&symbol(&a))?;
        qs.record(back == a, || a.to_string());
    }
    Ok(vec![res, dd, flat, sq, qs])
}

/// With `Γ = 0` the star product is the Moyal product in the base variables.
pub fn flat_oracle_check(n: usize, trials: usize, seed: u64) -> Result<Check> {
    let dim = 2 * n;
    let fd = build_a(&ConnectionInput::flat(n), &TruncationPolicy::new(n, 4, 8, 3))?;
    let mut pol = TruncationPolicy::unbounded(n);
    pol.hbar_order = fd.exact_hbar_order();
    pol.hbar_min = 0;
    let mut c = Check::new(&format!("flat_star_is_moyal[n={}]", n));
    let mut rng = rng_for(seed, &c.name.clone());
    for _ in 0..trials {
        let f = polynomial(&mut rng, dim, 4, 4);
        let g = polynomial(&mut rng, dim, 4, 4);
        let m = moyal(&f.swap_base_fiber(), &g.swap_base_fiber(), &fd.conn.pt, &pol)?.swap_base_fiber();
        c.record(fd.star(&f, &g)? == m, || format!("f = {}, g = {}", f, g));
    }
    Ok(c)
}

// ---------------------------------------------------------------- whitney

/// Connection used with a catalogue set: curved in each dimension.
pub fn default_curved(n: usize) -> Result<ConnectionInput> {
    builtin_for(if n == 1 { "curved-linear-n1" } else { "curved-linear-n2" }, n)
}

pub fn subset_for(name: &str) -> Result<(SubsetModel, usize)> {
    let n = if name == "plane-in-r4" { 2 } else { 1 };
    Ok((SubsetModel::catalogue(name, n)?, n))
}

/// Ideal stability and the rank–nullity witness.
pub fn stability_check(x: &SubsetModel, label: &str, fd: &FedosovData, jet: u32, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let mut pol = fd.policy.clone();
    pol.jet_order = jet;
    pol.hbar_order = fd.exact_hbar_order();
    let q = WhitneyQuotient::new(x, &pol)?;
    let mut rng = rng_for(seed, &format!("stability[{}]", label));
    let rep = verify_ideal_stability(fd, &q, trials, &mut rng)?;
    let mut st = Check::new(&format!("ideal_stability[{}]", label));
    st.trials = rep.trials;
    st.failures = rep.failures.len();
    st.passed = rep.failures.is_empty();
    st.first_failure = rep.failures.first().cloned();
    let mut ex = Check::new(&format!("exact_sequence[{}]", label));
    ex.record(rep.exact_sequence, || format!("space {} image {} kernel {}", rep.space_dim, rep.quotient_dim, rep.ideal_dim));
    Ok(vec![st, ex])
}

/// Representative independence, associativity, unit and the first-order
/// commutator of the induced star product.
pub fn quotient_star_checks(x: &SubsetModel, label: &str, fd: &FedosovData, jet: u32, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let mut pol = fd.policy.clone();
    pol.jet_order = jet;
    let q = WhitneyQuotient::for_fedosov(x, fd)?;
    let q = if q.jet_order == jet as i64 { q } else { WhitneyQuotient::new(x, &TruncationPolicy { hbar_order: fd.exact_hbar_order(), ..pol })? };
    let tag = |s: &str| format!("{}[{}]", s, label);
    let mut indep = Check::new(&tag("quotient_star_well_defined"));
    let mut assoc = Check::new(&tag("quotient_star_associativity"));
    let mut unit = Check::new(&tag("quotient_star_unit"));
    let mut dq3 = Check::new(&tag("quotient_star_commutator"));
    let mut rng = rng_for(seed, &tag("quotient"));
    let one = q.one()?;
    let n = q.jet_order;
    for _ in 0..trials {
        let f = q.random_class(&mut rng, 3)?;
        let g = q.random_class(&mut rng, 3)?;
        let h = q.random_class(&mut rng, 3)?;
        let fg = q.induced_star(&f, &g, fd)?;
        let shifted = WhitneyClass { order: n, rep: &f.rep + &q.random_flat(&mut rng, n, 2) };
        let other = WhitneyClass { order: n, rep: &g.rep + &q.random_flat(&mut rng, n, 2) };
        indep.record(q.induced_star(&shifted, &other, fd)? == fg, || format!("f = {}, g = {}", f.rep, g.rep));
        let l = q.induced_star(&fg, &h, fd)?;
        let r = q.induced_star(&f, &q.induced_star(&g, &h, fd)?, fd)?;
        assoc.record(l == r, || format!("f = {}, g = {}, h = {}", f.rep, g.rep, h.rep));
        unit.record(q.induced_star(&one, &f, fd)? == f && q.induced_star(&f, &one, fd)? == f, || f.rep.to_string());
        let gf = q.induced_star(&g, &f, fd)?;
        let c = &fg.rep - &gf.rep;
        let br = q.whitney_poisson(&f, &g, &fd.conn.pt)?;
        let first = q.project_at(&c.hbar_coeff(1), n - 1)?;
        let ok = c.hbar_coeff(0).is_zero() && first.rep == br.rep.scale(&-Scalar::i());
        dq3.record(ok, || format!("f = {}, g = {}", f.rep, g.rep));
    }
    Ok(vec![indep, assoc, unit, dq3])
}

// ---------------------------------------------------------------- derham

fn random_form<R: Rng>(rng: &mut R, dim: usize, k: usize, deg: u32, terms: usize) -> MixedElement {
    let sets = form_sets(dim, k);
    let mut out = MixedElement::zero(dim);
    for _ in 0..terms {
        let s = sets[rng.gen_range(0..sets.len())];
        let f = polynomial(rng, dim, deg, 1);
        out.add_assign_ref(&f.with_forms(s));
    }
    out
}

/// `∗∗ = id` on the full primal basis for jet orders `1..=max_jet`.
pub fn star_involution_check(x: &SubsetModel, pt: &PoissonTensor, max_jet: u32) -> Result<Check> {
    let mut c = Check::new("star_involution");
    let dim = pt.dim();
    for jet in 1..=max_jet {
        let q = WhitneyQuotient::new(x, &TruncationPolicy::new(pt.n(), jet, 4, 0))?;
        let fc = FormCalculus::new(&q, pt)?;
        for k in 0..=dim {
            for b in fc.primal_basis(k, jet as i64) {
                let w = WhitneyForm { order: jet as i64, dual: false, rep: b };
                let back = fc.hodge_star(&fc.hodge_star(&w)?)?;
                c.record(back == w, || format!("jet {}: {}", jet, w.rep));
            }
        }
    }
    Ok(c)
}

/// `δ = (-1)^{k+1}∗d∗`, `δ² = 0` and `d² = 0` on random forms of each degree.
pub fn form_identity_checks(x: &SubsetModel, pt: &PoissonTensor, jet: u32, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let dim = pt.dim();
    let q = WhitneyQuotient::new(x, &TruncationPolicy::new(pt.n(), jet, 4, 0))?;
    let fc = FormCalculus::new(&q, pt)?;
    let mut ds = Check::new("delta_is_star_d_star");
    let mut dd = Check::new("delta_squared_on_forms");
    let mut d2 = Check::new("d_squared_on_forms");
    let mut rng = rng_for(seed, "forms");
    let order = jet as i64;
    for k in 0..=dim {
        for _ in 0..trials {
            let a = random_form(&mut rng, dim, k, jet, 3);
            let w = fc.project_dual(&a, order)?;
            let v = fc.delta(&w)?;
            ds.record(v == fc.delta_by_star(&w)?, || a.to_string());
            dd.record(fc.delta(&v)?.rep.is_zero(), || a.to_string());
            let p = fc.project(&a, order)?;
            d2.record(fc.d(&fc.d(&p)?)?.rep.is_zero(), || a.to_string());
        }
    }
    // the coordinate formula agrees with the ambient `∗d∗` before projection
    let mut amb = Check::new("delta_ambient_formula");
    for _ in 0..trials {
        let k = rng.gen_range(0..=dim);
        let a = random_form(&mut rng, dim, k, jet, 3);
        amb.record(brylinski_delta(&a, pt) == crate::derham::delta_via_star(&a, &fc.hs), || a.to_string());
    }
    Ok(vec![ds, dd, d2, amb])
}

/// Expected de Rham Betti numbers of the catalogue sets.
pub fn expected_betti(name: &str) -> Option<Vec<usize>> {
    match name {
        "point" | "axis" | "cross" | "full" => Some(vec![1, 0, 0]),
        "two-points" => Some(vec![2, 0, 0]),
        "plane-in-r4" => Some(vec![1, 0, 0, 0, 0]),
        _ => None,
    }
}

pub fn betti_checks(name: &str, jet: u32) -> Result<(Vec<Check>, BettiTable)> {
    let (x, n) = subset_for(name)?;
    let pt = PoissonTensor::darboux(n);
    let q = WhitneyQuotient::new(&x, &TruncationPolicy::new(n, jet, 4, 0))?;
    let t = betti_table(name, &q, &pt)?;
    let tag = |s: &str| format!("{}[{}]", s, name);
    let mut b = Check::new(&tag("betti_numbers"));
    let want = expected_betti(name);
    b.record(want.as_ref().map_or(true, |w| *w == t.de_rham), || format!("{:?} vs {:?}", t.de_rham, want));
    let mut dual = Check::new(&tag("poisson_duality"));
    dual.record(t.duality_holds(), || format!("{:?} vs {:?}", t.poisson, t.de_rham));
    let mut st = Check::new(&tag("betti_stable"));
    st.record(t.stable(), || format!("{:?} vs {:?}", t.de_rham, t.de_rham_next_order));
    Ok((vec![b, dual, st], t))
}

// ---------------------------------------------------------------- homology

fn random_vec<R: Rng>(rng: &mut R, alg: &FiniteAlgebra, terms: usize, h0_only: bool) -> SparseVec {
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    let idx: Vec<usize> = (0..alg.len()).filter(|&a| !h0_only || alg.basis[a].0 == 0).collect();
    for _ in 0..terms {
        let a = idx[rng.gen_range(0..idx.len())];
        *acc.entry(a).or_insert_with(Scalar::zero) += &small_scalar(rng, false);
    }
    crate::linalg::sparse_from_map(acc)
}

fn random_chain<R: Rng>(rng: &mut R, alg: &FiniteAlgebra, q: usize, normalized: bool) -> ChainVector {
    let mut out = ChainVector::zero(q, normalized);
    for _ in 0..3 {
        let t: Vec<usize> = (0..=q).map(|_| rng.gen_range(0..alg.len())).collect();
        out.add_term(t, small_scalar(rng, true), alg.unit);
    }
    out
}

/// `b² = B² = bB + Bb = 0`, `μ∘b = 0`, `μ∘B = d∘μ` and `μ∘ε = id`.
pub fn chain_checks(trials: usize, seed: u64) -> Result<Vec<Check>> {
    let x = SubsetModel::catalogue("point", 1)?;
    let pt = PoissonTensor::darboux(1);
    let jet = 2;
    let q = WhitneyQuotient::new(&x, &TruncationPolicy::new(1, jet, 4, 1))?;
    let fd = build_a(&default_curved(1)?, &TruncationPolicy::new(1, jet, 4, 1))?;
    let plain = FiniteAlgebra::new(&q, None, "point")?;
    let deformed = FiniteAlgebra::new(&q, Some(&fd), "point")?;
    let fc = FormCalculus::new(&q, &pt)?;
    let mut bb = Check::new("b_squared");
    let mut cb = Check::new("connes_b_squared");
    let mut mixed = Check::new("b_connes_b_anticommute");
    let mut mub = Check::new("mu_kills_b");
    let mut mucb = Check::new("mu_connes_b_is_d_mu");
    let mut mue = Check::new("mu_antisymmetrization_is_identity");
    let mut rng = rng_for(seed, "chains");
    for t in 0..trials {
        let qd = 1 + t % 3;
        for alg in [&plain, &deformed] {
            let c = random_chain(&mut rng, alg, qd, true);
            let b1 = hochschild_b(&c, alg)?;
            let b2 = if b1.q == 0 { ChainVector::zero(0, true) } else { hochschild_b(&b1, alg)? };
            bb.record(b2.is_zero(), || format!("{:?}", c.terms));
            let cbb = connes_b(&connes_b(&c, alg)?, alg)?;
            cb.record(cbb.is_zero(), || format!("{:?}", c.terms));
            let mut s = connes_b(&b1, alg)?;
            s.add_assign(&hochschild_b(&connes_b(&c, alg)?, alg)?, alg.unit);
            mixed.record(s.is_zero(), || format!("{:?}", c.terms));
        }
        let c = random_chain(&mut rng, &plain, qd, false);
        mub.record(mu(&hochschild_b(&c, &plain)?, &plain, &fc)?.rep.is_zero(), || format!("{:?}", c.terms));
        let c = random_chain(&mut rng, &plain, qd - 1, true);
        let l = mu(&connes_b(&c, &plain)?, &plain, &fc)?;
        let r = fc.d(&mu(&c, &plain, &fc)?)?;
        mucb.record(l == r, || format!("{:?}", c.terms));
        let f0 = random_vec(&mut rng, &plain, 2, true);
        let fs: Vec<SparseVec> = (0..qd.min(2)).map(|_| random_vec(&mut rng, &plain, 2, true)).collect();
        let e = antisymmetrize(&f0, &fs, &plain, false);
        let unb = TruncationPolicy::unbounded(1);
        let mut w = plain.to_polynomial(&f0);
        for f in &fs {
            w = w.mul(&crate::fedosov::d_x(&plain.to_polynomial(f)), &unb)?;
        }
        mue.record(mu(&e, &plain, &fc)? == fc.project(&w, jet as i64)?, || w.to_string());
    }
    Ok(vec![bb, cb, mixed, mub, mucb, mue])
}

/// Outcome of the first-order probe over random inputs.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeSummary {
    pub subset: String,
    pub q: usize,
    pub trials: usize,
    pub kappa: Option<String>,
    pub constant: bool,
    pub proportional: bool,
}

/// `e1_probe` on random `ω = f_0 df_1 ∧ … ∧ df_q`.
pub fn e1_checks(subsets: &[&str], trials: usize, seed: u64) -> Result<(Vec<Check>, Vec<ProbeSummary>)> {
    let mut checks = Vec::new();
    let mut summaries = Vec::new();
    let jet = 3;
    for name in subsets {
        let (x, n) = subset_for(name)?;
        let dim = 2 * n;
        let pt = PoissonTensor::darboux(n);
        let pol = TruncationPolicy::new(n, jet, 4, 1);
        let fd = build_a(&default_curved(n)?, &pol)?;
        let q = WhitneyQuotient::new(&x, &pol)?;
        let alg = FiniteAlgebra::new(&q, Some(&fd), name)?;
        let fc = FormCalculus::new(&q, &pt)?;
        for deg in 1..=2usize {
            let mut c = Check::new(&format!("e1_probe[{},q={}]", name, deg));
            let mut rng = rng_for(seed, &c.name.clone());
            let mut kappa: Option<Scalar> = None;
            let mut constant = true;
            let mut proportional = true;
            for _ in 0..trials {
                let f0 = polynomial(&mut rng, dim, 2, 2);
                let fs: Vec<MixedElement> = (0..deg).map(|_| polynomial(&mut rng, dim, 2, 2)).collect();
                let r = e1_probe(&f0, &fs, &alg, &q, &fc)?;
                let mut ok = r.proportional;
                proportional &= r.proportional;
                if let Some(k) = r.kappa_value {
                    match &kappa {
                        None => kappa = Some(k),
                        Some(prev) => {
                            if *prev != k {
                                constant = false;
                                ok = false;
                            }
                        }
                    }
                }
                c.record(ok, || format!("f0 = {}, fs = {:?}: {} vs {}", f0, fs.iter().map(|f| f.to_string()).collect::<Vec<_>>(), r.output, r.delta));
            }
            if deg == 1 && kappa != Some(-Scalar::i()) {
                c.record(false, || format!("kappa_1 = {:?}", kappa.as_ref().map(|k| k.to_string())));
            }
            summaries.push(ProbeSummary {
                subset: name.to_string(),
                q: deg,
                trials,
                kappa: kappa.as_ref().map(|k| k.to_string()),
                constant,
                proportional,
            });
            checks.push(c);
        }
    }
    Ok((checks, summaries))
}

// ---------------------------------------------------------------- suites

pub fn run_suite(config: &RunConfig, suite: &str) -> Result<SuiteReport> {
    if !SUITES.contains(&suite) {
        return Err(Error::Invalid(format!("unknown suite {:?}", suite)));
    }
    config.validate()?;
    let conn = config.connection_input()?;
    let x = config.subset_model()?;
    let n = config.dim;
    let seed = config.seed;
    let trials = config.trials;
    let all = suite == "all";
    let mut checks = Vec::new();
    if all || suite == "weyl" {
        checks.extend(weyl_checks(&conn.pt, trials, seed)?);
    }
    if all || suite == "fedosov" {
        checks.extend(star_axiom_checks(&conn, trials, seed)?);
        checks.extend(fedosov_checks(&conn, trials, trials.min(20), seed)?);
        checks.push(flat_oracle_check(n, trials, seed)?);
    }
    if all || suite == "whitney" {
        let pol = TruncationPolicy { hbar_min: 0, ..config.policy() };
        let fd = build_a(&conn, &pol)?;
        checks.extend(stability_check(&x, &config.subset, &fd, config.jet_order, trials, seed)?);
        checks.extend(quotient_star_checks(&x, &config.subset, &fd, config.jet_order, trials, seed)?);
    }
    if all || suite == "derham" {
        checks.push(star_involution_check(&x, &conn.pt, config.jet_order.min(4))?);
        checks.extend(form_identity_checks(&x, &conn.pt, config.jet_order.min(4), trials, seed)?);
        if CATALOGUE_N1.contains(&config.subset.as_str()) || config.subset == "plane-in-r4" {
            checks.extend(betti_checks(&config.subset, config.jet_order.clamp(1, 4))?.0);
        }
    }
    if all || suite == "homology" {
        checks.extend(chain_checks(trials, seed)?);
        checks.extend(e1_checks(&["point", "axis"], trials, seed)?.0);
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        version: crate::VERSION.to_string(),
        config: config.clone(),
        suite: suite.to_string(),
        checks,
        passed,
        scope_notes: SCOPE_NOTES.iter().map(|s| s.to_string()).collect(),
    })
}

const CATALOGUE_N1: &[&str] = &["point", "axis", "cross", "two-points"];

/// Betti tables, Poisson homology, the duality witness and optionally
/// Hochschild dimensions of the truncated algebras.
#[derive(Clone, Debug, Serialize)]
pub struct HomologyRun {
    pub schema_version: u32,
    pub version: String,
    pub config: RunConfig,
    pub betti: BettiTable,
    pub duality: Vec<(usize, usize, usize)>,
    pub duality_holds: bool,
    pub hochschild: Vec<HomologyReport>,
    pub scope_notes: Vec<String>,
}

impl HomologyRun {
    pub fn to_text(&self) -> String {
        let t = &self.betti;
        let mut s = format!("subset {} at jet order {}\n", t.subset, t.jet_order);
        s += &format!("de Rham: {:?}\n", t.de_rham);
        s += &format!("Poisson: {:?}\n", t.poisson);
        s += "q  H^delta_q  H^(2n-q)\n";
        for (q, a, b) in &self.duality {
            s += &format!("{}  {}  {}\n", q, a, b);
        }
        s += &format!("duality: {}\n", if self.duality_holds { "holds" } else { "FAILS" });
        for h in &self.hochschild {
            s += &format!("Hochschild ({}, {}): {:?} [truncated algebra]\n", h.algebra, if h.deformed { "deformed" } else { "undeformed" }, h.dims());
        }
        s
    }
}

pub fn homology_run(config: &RunConfig, hochschild: Option<usize>) -> Result<HomologyRun> {
    config.validate()?;
    let x = config.subset_model()?;
    let conn = config.connection_input()?;
    let pol = TruncationPolicy { hbar_min: 0, ..config.policy() };
    let q0 = WhitneyQuotient::new(&x, &TruncationPolicy { hbar_order: 0, ..pol.clone() })?;
    let betti = betti_table(&config.subset, &q0, &conn.pt)?;
    let top = betti.de_rham.len() - 1;
    let duality: Vec<_> = (0..=top).map(|k| (k, betti.poisson[k], betti.de_rham[top - k])).collect();
    let mut hh = Vec::new();
    if let Some(q_max) = hochschild {
        let fd = build_a(&conn, &pol)?;
        let k = pol.hbar_order.min(fd.exact_hbar_order());
        let q = WhitneyQuotient::new(&x, &TruncationPolicy { hbar_order: k, ..pol.clone() })?;
        let plain = FiniteAlgebra::new(&q, None, &config.subset)?;
        let deformed = FiniteAlgebra::new(&q, Some(&fd), &config.subset)?;
        hh.push(hochschild_dims(&plain, q_max)?);
        hh.push(hochschild_dims(&deformed, q_max)?);
    }
    Ok(HomologyRun {
        schema_version: SCHEMA_VERSION,
        version: crate::VERSION.to_string(),
        config: config.clone(),
        duality_holds: betti.duality_holds(),
        betti,
        duality,
        hochschild: hh,
        scope_notes: SCOPE_NOTES.iter().map(|s| s.to_string()).collect(),
    })
}

/// `c_0..c_K` of `f ⋆ g`, and the induced product when a subset is given.
#[derive(Clone, Debug, Serialize)]
pub struct StarRun {
    pub schema_version: u32,
    pub version: String,
    pub config: RunConfig,
    pub f: String,
    pub g: String,
    pub product: String,
    pub coefficients: Vec<String>,
    pub quotient: Option<String>,
}

pub fn star_run(config: &RunConfig, f: &str, g: &str, with_subset: bool) -> Result<StarRun> {
    config.validate()?;
    let conn = config.connection_input()?;
    let pol = TruncationPolicy { hbar_min: 0, ..config.policy() };
    let unb = TruncationPolicy::unbounded(config.dim);
    let fe = crate::parse::parse_element(f, &unb)?;
    let ge = crate::parse::parse_element(g, &unb)?;
    let fd = build_a(&conn, &pol)?;
    let top = fd.exact_hbar_order();
    let p = fd.star(&fe, &ge)?.filter(|k| k.hbar <= top);
    let quotient = if with_subset {
        let x = config.subset_model()?;
        let q = WhitneyQuotient::for_fedosov(&x, &fd)?;
        let (a, b) = (q.project(&fe)?, q.project(&ge)?);
        Some(q.induced_star(&a, &b, &fd)?.rep.to_string())
    } else {
        None
    };
    Ok(StarRun {
        schema_version: SCHEMA_VERSION,
        version: crate::VERSION.to_string(),
        config: config.clone(),
        f: fe.to_string(),
        g: ge.to_string(),
        product: p.to_string(),
        coefficients: (0..=top).map(|k| p.hbar_coeff(k).to_string()).collect(),
        quotient,
    })
}
