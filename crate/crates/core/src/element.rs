//! Sparse multigraded elements of the (truncated) Weyl-bundle form algebra.
//!
//! A term is `c · x^alpha · y^beta · h^k · dx^S`. Base variables `x` and
//! fiber variables `y` both live in dimension `2n`; form generators `dx_j`
//! anticommute. Coefficients are exact Gaussian rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::policy::TruncationPolicy;
use crate::scalar::Scalar;

/// Largest supported ambient dimension `2n`.
pub const MAX_DIM: usize = 8;

/// Exponent vector of length `2n` (unused slots stay zero).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(pub [u8; MAX_DIM]);

impl MultiIndex {
    pub fn zero() -> Self {
        MultiIndex([0; MAX_DIM])
    }

    pub fn unit(j: usize) -> Self {
        let mut m = MultiIndex::zero();
        m.0[j] = 1;
        m
    }

    pub fn from_slice(e: &[u8]) -> Self {
        let mut m = MultiIndex::zero();
        m.0[..e.len()].copy_from_slice(e);
        m
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    #[inline]
    pub fn get(&self, j: usize) -> u32 {
        self.0[j] as u32
    }

    #[inline]
    pub fn add(&self, o: &MultiIndex) -> MultiIndex {
        let mut r = *self;
        for j in 0..MAX_DIM {
            r.0[j] += o.0[j];
        }
        r
    }

    /// `self - o`, or `None` when some entry would go negative.
    #[inline]
    pub fn checked_sub(&self, o: &MultiIndex) -> Option<MultiIndex> {
        let mut r = *self;
        for j in 0..MAX_DIM {
            r.0[j] = r.0[j].checked_sub(o.0[j])?;
        }
        Some(r)
    }

    pub fn dominates(&self, o: &MultiIndex) -> bool {
        (0..MAX_DIM).all(|j| self.0[j] >= o.0[j])
    }

    pub fn inc(&self, j: usize) -> MultiIndex {
        let mut r = *self;
        r.0[j] += 1;
        r
    }

    pub fn dec(&self, j: usize) -> Option<MultiIndex> {
        let mut r = *self;
        r.0[j] = r.0[j].checked_sub(1)?;
        Some(r)
    }

    /// All exponent vectors of total degree `<= max_deg` in `dim` variables,
    /// ordered by degree, then reverse-lexicographically within a degree so
    /// that `x1` precedes `x2`.
    pub fn all_up_to(dim: usize, max_deg: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for d in 0..=max_deg {
            let mut cur = MultiIndex::zero();
            fill_degree(dim, 0, d, &mut cur, &mut out);
        }
        out
    }
}

fn fill_degree(dim: usize, pos: usize, left: u32, cur: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
    if pos + 1 == dim || dim == 0 {
        if dim > 0 {
            cur.0[pos] = left as u8;
        } else if left > 0 {
            return;
        }
        out.push(*cur);
        if dim > 0 {
            cur.0[pos] = 0;
        }
        return;
    }
    for e in (0..=left).rev() {
        cur.0[pos] = e as u8;
        fill_degree(dim, pos + 1, left - e, cur, out);
    }
    cur.0[pos] = 0;
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.0)
    }
}

/// Bit set of form generators: bit `j` is `dx_{j+1}`.
pub type FormSet = u16;

pub fn form_degree(s: FormSet) -> usize {
    s.count_ones() as usize
}

/// Sign of `dx^S ∧ dx^T` relative to `dx^{S∪T}`; `None` if they overlap.
#[inline]
pub fn wedge_sign(s: FormSet, t: FormSet) -> Option<i64> {
    if s & t != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut tt = t;
    while tt != 0 {
        let j = tt.trailing_zeros();
        swaps += (s >> (j + 1)).count_ones();
        tt &= tt - 1;
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

/// Indices (0-based) contained in a form set, ascending.
pub fn form_indices(s: FormSet) -> Vec<usize> {
    (0..16).filter(|j| s & (1 << j) != 0).collect()
}

/// Sign of removing `dx_j` from `dx^S` from the front: `ι_j dx^S = sign · dx^{S∖j}`.
pub fn interior_sign(s: FormSet, j: usize) -> Option<i64> {
    if s & (1 << j) == 0 {
        return None;
    }
    let before = (s & ((1u16 << j) - 1)).count_ones();
    Some(if before % 2 == 0 { 1 } else { -1 })
}

/// All form sets of a given degree in `dim` generators, ascending.
pub fn form_sets(dim: usize, degree: usize) -> Vec<FormSet> {
    (0u32..(1u32 << dim))
        .map(|s| s as FormSet)
        .filter(|s| form_degree(*s) == degree)
        .collect()
}

/// Sparse key of a term.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Key {
    pub hbar: i32,
    pub forms: FormSet,
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
}

impl Key {
    pub fn one() -> Key {
        Key { hbar: 0, forms: 0, alpha: MultiIndex::zero(), beta: MultiIndex::zero() }
    }

    pub fn fedosov_degree(&self) -> i64 {
        self.beta.degree() as i64 + 2 * self.hbar as i64
    }

    pub fn form_degree(&self) -> usize {
        form_degree(self.forms)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Base,
    Fiber,
}

/// Element of `Ω^•W` in the polynomial-coefficient model.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MixedElement {
    dim: usize,
    terms: BTreeMap<Key, Scalar>,
}

impl MixedElement {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM && dim % 2 == 0, "ambient dimension must be even and <= {}", MAX_DIM);
        MixedElement { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Scalar) -> Self {
        MixedElement::term(dim, Key::one(), c)
    }

    pub fn one(dim: usize) -> Self {
        MixedElement::constant(dim, Scalar::one())
    }

    pub fn term(dim: usize, key: Key, c: Scalar) -> Self {
        let mut e = MixedElement::zero(dim);
        e.add_term(key, c);
        e
    }

    /// Base coordinate `x_j` (1-based).
    pub fn x(dim: usize, j: usize) -> Self {
        let mut k = Key::one();
        k.alpha = MultiIndex::unit(j - 1);
        MixedElement::term(dim, k, Scalar::one())
    }

    /// Fiber coordinate `y_j` (1-based).
    pub fn y(dim: usize, j: usize) -> Self {
        let mut k = Key::one();
        k.beta = MultiIndex::unit(j - 1);
        MixedElement::term(dim, k, Scalar::one())
    }

    /// Form generator `dx_j` (1-based).
    pub fn dx(dim: usize, j: usize) -> Self {
        let mut k = Key::one();
        k.forms = 1 << (j - 1);
        MixedElement::term(dim, k, Scalar::one())
    }

    /// `h^p`.
    pub fn hbar_pow(dim: usize, p: i32) -> Self {
        let mut k = Key::one();
        k.hbar = p;
        MixedElement::term(dim, k, Scalar::one())
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Key, Scalar)>) -> Self {
        let mut e = MixedElement::zero(dim);
        for (k, c) in terms {
            e.add_term(k, c);
        }
        e
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.dim / 2
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &Key) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn into_terms(self) -> BTreeMap<Key, Scalar> {
        self.terms
    }

    /// Accumulate `c` onto `key`, dropping the entry if it cancels.
    pub fn add_term(&mut self, key: Key, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
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

    pub fn add_term_ref(&mut self, key: Key, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn check_dim(&self, o: &MixedElement) -> Result<()> {
        if self.dim != o.dim {
            Err(Error::DimensionMismatch { left: self.dim, right: o.dim })
        } else {
            Ok(())
        }
    }

    pub fn scale(&self, c: &Scalar) -> MixedElement {
        if c.is_zero() {
            return MixedElement::zero(self.dim);
        }
        MixedElement {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn add_assign_ref(&mut self, o: &MixedElement) {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        for (k, c) in &o.terms {
            self.add_term_ref(*k, c);
        }
    }

    pub fn add_scaled(&mut self, o: &MixedElement, c: &Scalar) {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        if c.is_zero() {
            return;
        }
        for (k, v) in &o.terms {
            self.add_term(*k, v * c);
        }
    }

    /// Keep only the terms selected by `pred`.
    pub fn filter(&self, mut pred: impl FnMut(&Key) -> bool) -> MixedElement {
        MixedElement {
            dim: self.dim,
            terms: self.terms.iter().filter(|(k, _)| pred(k)).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    pub fn truncate(&self, policy: &TruncationPolicy) -> MixedElement {
        self.filter(|k| policy.keeps(k))
    }

    pub fn truncate_in_place(&mut self, policy: &TruncationPolicy) {
        self.terms.retain(|k, _| policy.keeps(k));
    }

    /// Multiply every term by `h^p`.
    pub fn hbar_shift(&self, p: i32) -> MixedElement {
        MixedElement {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    let mut k = *k;
                    k.hbar += p;
                    (k, c.clone())
                })
                .collect(),
        }
    }

    /// Graded-commutative product, truncated per `policy`.
    pub fn mul(&self, o: &MixedElement, policy: &TruncationPolicy) -> Result<MixedElement> {
        self.check_dim(o)?;
        let mut out = MixedElement::zero(self.dim);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                let Some(sign) = wedge_sign(ka.forms, kb.forms) else { continue };
                let key = Key {
                    hbar: ka.hbar + kb.hbar,
                    forms: ka.forms | kb.forms,
                    alpha: ka.alpha.add(&kb.alpha),
                    beta: ka.beta.add(&kb.beta),
                };
                if !policy.keeps(&key) {
                    continue;
                }
                let c = ca * cb;
                out.add_term(key, if sign < 0 { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Exact partial derivative in `x_j` or `y_j` (1-based).
    pub fn partial(&self, kind: VarKind, j: usize) -> Result<MixedElement> {
        if j == 0 || j > self.dim {
            return Err(Error::IndexOutOfRange { index: j, dim: self.dim });
        }
        Ok(self.partial0(kind, j - 1))
    }

    /// 0-based partial derivative without range checks.
    pub fn partial0(&self, kind: VarKind, j: usize) -> MixedElement {
        let mut out = MixedElement::zero(self.dim);
        for (k, c) in &self.terms {
            let e = match kind {
                VarKind::Base => k.alpha.get(j),
                VarKind::Fiber => k.beta.get(j),
            };
            if e == 0 {
                continue;
            }
            let mut nk = *k;
            match kind {
                VarKind::Base => nk.alpha.0[j] -= 1,
                VarKind::Fiber => nk.beta.0[j] -= 1,
            }
            out.add_term(nk, c.scale_int(e as i64));
        }
        out
    }

    /// The `a_{s,k}` component: fiber degree `s`, `h`-power `k`.
    pub fn grade_filter(&self, s: u32, k: i32) -> MixedElement {
        self.filter(|key| key.beta.degree() == s && key.hbar == k)
    }

    /// Terms of the given form degree.
    pub fn form_part(&self, t: usize) -> MixedElement {
        self.filter(|key| key.form_degree() == t)
    }

    /// Split by form set: `a = Σ_S a_S dx^S`, with `a_S` stored as 0-forms.
    pub fn form_components(&self) -> BTreeMap<FormSet, MixedElement> {
        let mut out: BTreeMap<FormSet, MixedElement> = BTreeMap::new();
        for (k, c) in &self.terms {
            let mut nk = *k;
            nk.forms = 0;
            out.entry(k.forms).or_insert_with(|| MixedElement::zero(self.dim)).add_term_ref(nk, c);
        }
        out
    }

    /// `self ∧ dx^S` placed on the right of every term's existing forms.
    pub fn with_forms(&self, s: FormSet) -> MixedElement {
        let mut out = MixedElement::zero(self.dim);
        for (k, c) in &self.terms {
            let Some(sign) = wedge_sign(k.forms, s) else { continue };
            let mut nk = *k;
            nk.forms |= s;
            out.add_term(nk, c.scale_int(sign));
        }
        out
    }

    /// Largest form degree present, 0 for the zero element.
    pub fn max_form_degree(&self) -> usize {
        self.terms.keys().map(|k| k.form_degree()).max().unwrap_or(0)
    }

    pub fn max_fiber_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.beta.degree()).max().unwrap_or(0)
    }

    pub fn max_base_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.alpha.degree()).max().unwrap_or(0)
    }

    /// Lowest `h` power with a nonzero coefficient.
    pub fn hbar_order(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.hbar).min()
    }

    pub fn hbar_powers(&self) -> Vec<i32> {
        let mut v: Vec<i32> = self.terms.keys().map(|k| k.hbar).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Coefficient of `h^p`, returned with `h`-power 0.
    pub fn hbar_coeff(&self, p: i32) -> MixedElement {
        let mut out = MixedElement::zero(self.dim);
        for (k, c) in &self.terms {
            if k.hbar == p {
                let mut nk = *k;
                nk.hbar = 0;
                out.terms.insert(nk, c.clone());
            }
        }
        out
    }

    /// True when no term carries fiber variables or forms.
    pub fn is_base_series(&self) -> bool {
        self.terms.keys().all(|k| k.beta.degree() == 0 && k.forms == 0)
    }

    /// Substitute `h = 0` (drop every term with nonzero `h`-power).
    pub fn at_hbar_zero(&self) -> MixedElement {
        self.filter(|k| k.hbar == 0)
    }

    /// Swap base and fiber variables.
    pub fn swap_base_fiber(&self) -> MixedElement {
        MixedElement {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (Key { alpha: k.beta, beta: k.alpha, ..*k }, c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> MixedElement {
        MixedElement::from_terms(self.dim, self.terms.iter().map(|(k, c)| (*k, f(c))))
    }
}

impl<'a> Add<&'a MixedElement> for &'a MixedElement {
    type Output = MixedElement;
    fn add(self, o: &MixedElement) -> MixedElement {
        let mut r = self.clone();
        r.add_assign_ref(o);
        r
    }
}

impl<'a> Sub<&'a MixedElement> for &'a MixedElement {
    type Output = MixedElement;
    fn sub(self, o: &MixedElement) -> MixedElement {
        let mut r = self.clone();
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        for (k, c) in &o.terms {
            r.add_term(*k, -c);
        }
        r
    }
}

impl<'a> Neg for &'a MixedElement {
    type Output = MixedElement;
    fn neg(self) -> MixedElement {
        self.map_coeffs(|c| -c)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, dim: usize, key: &Key) -> fmt::Result {
    let mut parts: Vec<String> = Vec::new();
    for (name, m) in [("x", &key.alpha), ("y", &key.beta)] {
        for j in 0..dim {
            match m.get(j) {
                0 => {}
                1 => parts.push(format!("{}{}", name, j + 1)),
                e => parts.push(format!("{}{}^{}", name, j + 1, e)),
            }
        }
    }
    match key.hbar {
        0 => {}
        1 => parts.push("h".into()),
        p if p < 0 => parts.push(format!("h^({})", p)),
        p => parts.push(format!("h^{}", p)),
    }
    if key.forms != 0 {
        let w: Vec<String> = form_indices(key.forms).iter().map(|j| format!("dx{}", j + 1)).collect();
        parts.push(w.join("^"));
    }
    write!(f, "{}", parts.join("*"))
}

/// Canonical printer: terms in key order joined by ` + `; a coefficient
/// other than 1 is printed in parentheses. Output parses back exactly.
impl fmt::Display for MixedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let is_unit_key = *k == Key::one();
            if is_unit_key {
                if c.is_one() {
                    write!(f, "1")?;
                } else {
                    write!(f, "({})", c)?;
                }
            } else if c.is_one() {
                write_monomial(f, self.dim, k)?;
            } else {
                write!(f, "({})*", c)?;
                write_monomial(f, self.dim, k)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MixedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol() -> TruncationPolicy {
        TruncationPolicy::unbounded(1)
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_sign(0b10, 0b01), Some(-1));
        assert_eq!(wedge_sign(0b01, 0b10), Some(1));
        assert_eq!(wedge_sign(0b01, 0b01), None);
        assert_eq!(wedge_sign(0b101, 0b010), Some(-1));
    }

    #[test]
    fn product_examples() {
        let p = pol();
        let a = MixedElement::x(2, 1).mul(&MixedElement::dx(2, 1), &p).unwrap();
        let b = MixedElement::y(2, 1).mul(&MixedElement::dx(2, 2), &p).unwrap();
        let ab = a.mul(&b, &p).unwrap();
        let mut k = Key::one();
        k.alpha = MultiIndex::unit(0);
        k.beta = MultiIndex::unit(0);
        k.forms = 0b11;
        assert_eq!(ab, MixedElement::term(2, k, Scalar::one()));
        let dd = MixedElement::dx(2, 1).mul(&MixedElement::dx(2, 1), &p).unwrap();
        assert!(dd.is_zero());

        let mut p1 = TruncationPolicy::unbounded(1);
        p1.hbar_order = 1;
        let one = MixedElement::one(2);
        let h = MixedElement::hbar_pow(2, 1);
        let r = (&one + &h).mul(&(&one - &h), &p1).unwrap();
        assert_eq!(r, one);
    }

    #[test]
    fn dimension_mismatch() {
        let e = MixedElement::one(2).mul(&MixedElement::one(4), &pol());
        assert!(matches!(e, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn partial_examples() {
        let p = pol();
        let y1 = MixedElement::y(2, 1);
        let y2 = MixedElement::y(2, 2);
        let f = y1.mul(&y1, &p).unwrap().mul(&y2, &p).unwrap();
        let g = f.partial(VarKind::Fiber, 1).unwrap();
        assert_eq!(g, y1.mul(&y2, &p).unwrap().scale(&Scalar::from_int(2)));
        assert!(y2.partial(VarKind::Base, 1).unwrap().is_zero());
        let y1y2 = y1.mul(&y2, &p).unwrap();
        let one = y1y2.partial(VarKind::Fiber, 1).unwrap().partial(VarKind::Fiber, 2).unwrap();
        assert_eq!(one, MixedElement::one(2));
        assert!(matches!(y1.partial(VarKind::Fiber, 3), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(y1.partial(VarKind::Fiber, 0), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn grade_filter_examples() {
        let p = pol();
        let y1 = MixedElement::y(2, 1);
        let h = MixedElement::hbar_pow(2, 1);
        let hy = h.mul(&y1, &p).unwrap().mul(&MixedElement::y(2, 2), &p).unwrap();
        let a = &y1 + &hy;
        assert_eq!(a.grade_filter(2, 1), hy);
        assert!(y1.grade_filter(0, 0).is_zero());
    }

    #[test]
    fn monomial_enumeration() {
        let m = MultiIndex::all_up_to(2, 2);
        assert_eq!(m.len(), 6);
        assert_eq!(m[1], MultiIndex::unit(0));
        assert_eq!(m[2], MultiIndex::unit(1));
        assert_eq!(MultiIndex::all_up_to(4, 3).len(), 35);
    }
}
