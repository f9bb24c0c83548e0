//! Seeded random elements for the verification suites and property tests.

use rand::Rng;

use crate::element::{Key, MixedElement, MultiIndex};
use crate::scalar::Scalar;

/// Shape of random elements.
#[derive(Clone, Debug)]
pub struct Shape {
    pub dim: usize,
    pub terms: usize,
    pub base_degree: u32,
    pub fiber_degree: u32,
    pub hbar: (i32, i32),
    pub max_forms: usize,
    pub complex: bool,
}

impl Shape {
    /// Base polynomials of degree `<= deg` with rational coefficients.
    pub fn polynomial(dim: usize, deg: u32, terms: usize) -> Self {
        Shape { dim, terms, base_degree: deg, fiber_degree: 0, hbar: (0, 0), max_forms: 0, complex: false }
    }
}

pub fn small_scalar<R: Rng>(rng: &mut R, complex: bool) -> Scalar {
    let num = |rng: &mut R| {
        let mut v = rng.gen_range(-5i64..=5);
        if v == 0 {
            v = 1;
        }
        v
    };
    let den = rng.gen_range(1i64..=3);
    let re = Scalar::from_frac(num(rng), den);
    if complex && rng.gen_bool(0.3) {
        let im = Scalar::from_frac(num(rng), rng.gen_range(1i64..=3));
        &re + &im.mul_i()
    } else {
        re
    }
}

fn multi_index<R: Rng>(rng: &mut R, dim: usize, max_deg: u32) -> MultiIndex {
    let deg = rng.gen_range(0..=max_deg);
    let mut m = MultiIndex::zero();
    for _ in 0..deg {
        m = m.inc(rng.gen_range(0..dim));
    }
    m
}

pub fn element<R: Rng>(rng: &mut R, shape: &Shape) -> MixedElement {
    let mut out = MixedElement::zero(shape.dim);
    for _ in 0..shape.terms {
        let mut forms = 0u16;
        if shape.max_forms > 0 {
            let k = rng.gen_range(0..=shape.max_forms.min(shape.dim));
            while (forms.count_ones() as usize) < k {
                forms |= 1 << rng.gen_range(0..shape.dim);
            }
        }
        let key = Key {
            hbar: rng.gen_range(shape.hbar.0..=shape.hbar.1),
            forms,
            alpha: multi_index(rng, shape.dim, shape.base_degree),
            beta: multi_index(rng, shape.dim, shape.fiber_degree),
        };
        out.add_term(key, small_scalar(rng, shape.complex));
    }
    out
}

/// Random base polynomial `f(x)` of degree `<= deg`.
pub fn polynomial<R: Rng>(rng: &mut R, dim: usize, deg: u32, terms: usize) -> MixedElement {
    element(rng, &Shape::polynomial(dim, deg, terms))
}
