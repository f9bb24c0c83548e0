use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use whitney_dq::derham::{brylinski_delta, delta_via_star, exterior_d, FormCalculus, HodgeStar};
use whitney_dq::element::{form_sets, MixedElement, VarKind};
use whitney_dq::fedosov::{build_a, ConnectionInput};
use whitney_dq::random::{element, polynomial, Shape};
use whitney_dq::weyl::{delta_inv, delta_op, moyal, PoissonTensor};
use whitney_dq::whitney::{SubsetModel, WhitneyQuotient};
use whitney_dq::TruncationPolicy;

fn shape(n: usize, forms: usize) -> Shape {
    Shape { dim: 2 * n, terms: 5, base_degree: 2, fiber_degree: 3, hbar: (-1, 2), max_forms: forms, complex: true }
}

fn form(rng: &mut ChaCha8Rng, dim: usize, k: usize) -> MixedElement {
    let mut out = MixedElement::zero(dim);
    for s in form_sets(dim, k).into_iter().take(3) {
        out.add_assign_ref(&polynomial(rng, dim, 3, 2).with_forms(s));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_is_a_unital_associative_ring(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = shape(n, 2);
        let (a, b, c) = (element(&mut rng, &s), element(&mut rng, &s), element(&mut rng, &s));
        let pol = TruncationPolicy::unbounded(n);
        let one = MixedElement::one(2 * n);
        prop_assert_eq!(a.mul(&b, &pol)?.mul(&c, &pol)?, a.mul(&b.mul(&c, &pol)?, &pol)?);
        prop_assert_eq!(a.mul(&(&b + &c), &pol)?, &a.mul(&b, &pol)? + &a.mul(&c, &pol)?);
        prop_assert_eq!(one.mul(&a, &pol)?, a.clone());
        prop_assert_eq!(a.mul(&one, &pol)?, a);
    }

    #[test]
    fn partial_derivatives_commute(seed in any::<u64>(), i in 0usize..4, j in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = element(&mut rng, &shape(2, 1));
        for (ki, kj) in [(VarKind::Base, VarKind::Fiber), (VarKind::Base, VarKind::Base), (VarKind::Fiber, VarKind::Fiber)] {
            prop_assert_eq!(a.partial0(ki, i).partial0(kj, j), a.partial0(kj, j).partial0(ki, i));
        }
    }

    #[test]
    fn grade_components_partition(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = element(&mut rng, &shape(2, 2));
        let mut sum = MixedElement::zero(4);
        for s in 0..=a.max_fiber_degree() {
            for k in a.hbar_powers() {
                sum.add_assign_ref(&a.grade_filter(s, k));
            }
        }
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn moyal_is_associative(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = Shape { hbar: (0, 1), max_forms: 0, ..shape(n, 0) };
        let (a, b, c) = (element(&mut rng, &s), element(&mut rng, &s), element(&mut rng, &s));
        let pt = PoissonTensor::darboux(n);
        let mut pol = TruncationPolicy::unbounded(n);
        pol.fedosov_order = 7;
        prop_assert_eq!(
            moyal(&moyal(&a, &b, &pt, &pol)?, &c, &pt, &pol)?,
            moyal(&a, &moyal(&b, &c, &pt, &pol)?, &pt, &pol)?
        );
    }

    #[test]
    fn delta_homotopy(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = element(&mut rng, &shape(n, 2));
        let a00 = a.filter(|k| k.beta.degree() == 0 && k.forms == 0);
        let sum = &(&delta_op(&delta_inv(&a)) + &delta_inv(&delta_op(&a))) + &a00;
        prop_assert_eq!(sum, a.clone());
        prop_assert!(delta_op(&delta_op(&a)).is_zero());
        prop_assert!(delta_inv(&delta_inv(&a)).is_zero());
    }

    #[test]
    fn curved_star_is_associative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fd = build_a(&ConnectionInput::builtin("curved-linear-n1", 1)?, &TruncationPolicy::new(1, 4, 6, 3))?;
        let (f, g, h) = (polynomial(&mut rng, 2, 3, 3), polynomial(&mut rng, 2, 3, 3), polynomial(&mut rng, 2, 3, 3));
        prop_assert_eq!(fd.star(&fd.star(&f, &g)?, &h)?, fd.star(&f, &fd.star(&g, &h)?)?);
    }

    #[test]
    fn form_differentials(seed in any::<u64>(), n in 1usize..=2, k in 0usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = 2 * n;
        let k = k.min(dim);
        let pt = PoissonTensor::darboux(n);
        let hs = HodgeStar::new(&pt)?;
        let a = form(&mut rng, dim, k);
        prop_assert!(exterior_d(&exterior_d(&a)).is_zero());
        prop_assert!(brylinski_delta(&brylinski_delta(&a, &pt), &pt).is_zero());
        prop_assert_eq!(brylinski_delta(&a, &pt), delta_via_star(&a, &hs));
    }

    #[test]
    fn quotient_form_identities(seed in any::<u64>(), k in 0usize..=2, subset in prop::sample::select(vec!["point", "axis", "cross", "two-points"])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = SubsetModel::catalogue(subset, 1)?;
        let q = WhitneyQuotient::new(&x, &TruncationPolicy::new(1, 3, 4, 0))?;
        let pt = PoissonTensor::darboux(1);
        let fc = FormCalculus::new(&q, &pt)?;
        let a = form(&mut rng, 2, k);
        let w = fc.project_dual(&a, 3)?;
        prop_assert_eq!(fc.delta(&w)?, fc.delta_by_star(&w)?);
        prop_assert!(fc.delta(&fc.delta(&w)?)?.rep.is_zero());
        let p = fc.project(&a, 3)?;
        prop_assert!(fc.d(&fc.d(&p)?)?.rep.is_zero());
        prop_assert_eq!(fc.hodge_star(&fc.hodge_star(&p)?)?, p);
    }
}
