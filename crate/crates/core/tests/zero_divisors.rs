mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twisted_ring_lab::{
    build_truncated_operator, convolve, folner_ratio_diagnostic, interior, kernel_search, rank_nullity_check,
    search_zero_divisor, torsion_zero_divisor, vn_dim_estimate, Cocycle, Complex64, FolnerSequence, Group,
    RingElement, ToleranceConfig, WindowSpec,
};

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

#[test]
fn torsion_factor_is_found_by_the_search() {
    let g = Group::cyclic_product(vec![4, 2]).unwrap();
    let sigma = Cocycle::cyclic_root_form(&g, vec![vec![1, 2], vec![2, 0]], 4).unwrap();
    let t = torsion_zero_divisor(&g.point([1, 1]).unwrap(), &sigma).unwrap();
    assert_eq!(t.order, 4);
    assert_eq!(t.exact_zero, Some(true));
    let search = search_zero_divisor(&t.right, &sigma, 2, &ToleranceConfig::default()).unwrap();
    assert_eq!(search.found_at, Some(1));
    let c = search.cofactor().unwrap();
    assert!(convolve(&t.right, c, &sigma).unwrap().max_abs() < 1e-10);
}

#[test]
fn kernel_vectors_annihilate() {
    let g = Group::cyclic_product(vec![6]).unwrap();
    let sigma = Cocycle::cyclic_root_form(&g, vec![vec![1]], 6).unwrap();
    let t = torsion_zero_divisor(&g.point([2]).unwrap(), &sigma).unwrap();
    let r = kernel_search(&t.left, &sigma, &WindowSpec::new(1).unwrap(), &ToleranceConfig::default()).unwrap();
    // left is supported on the subgroup {0, 2, 4} and is a multiple of an idempotent.
    assert!(r.nullity > 0);
    for b in &r.kernel_basis {
        assert!(convolve(&t.left, b, &sigma).unwrap().max_abs() < 1e-10);
        assert!((b.l2_norm() - 1.0).abs() < 1e-10);
    }
    let op = build_truncated_operator(&t.left, &sigma, &WindowSpec::new(1).unwrap()).unwrap();
    assert_eq!(op.matrix().nrows(), 6);
    assert_eq!(r.rank + r.nullity, op.columns().len());
}

#[test]
fn torsion_factor_dimension_is_positive() {
    let g = Group::cyclic_product(vec![3]).unwrap();
    let sigma = Cocycle::cyclic_root_form(&g, vec![vec![1]], 3).unwrap();
    let t = torsion_zero_divisor(&g.point([1]).unwrap(), &sigma).unwrap();
    let tol = ToleranceConfig::default();
    let left = vn_dim_estimate(&t.left, &sigma, 1, &tol).unwrap();
    let right = vn_dim_estimate(&t.right, &sigma, 1, &tol).unwrap();
    // left is 3 times a rank-one idempotent; right kills its range.
    assert_eq!(left.nullity, 2);
    assert_eq!(right.nullity, 1);
    assert!((left.value - 2.0 / 3.0).abs() < 1e-15 && (right.value - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn heisenberg_windows() {
    let h = Group::heisenberg3();
    let seq = FolnerSequence::new(&h);
    assert_eq!(seq.set(1).unwrap().len(), 27);
    assert_eq!(seq.set(2).unwrap().len(), 5 * 5 * 9);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sigma = common::random_bicharacter(&mut rng, &h);
    let a = RingElement::from_coords(&h, [([0, 0, 0], one()), ([1, 0, 0], -one()), ([0, 1, 0], 0.5 * one())]).unwrap();
    let tol = ToleranceConfig::default();
    for n in 1..=2 {
        let r = rank_nullity_check(&a, &sigma, n, &tol).unwrap();
        assert!(r.passed);
        assert_eq!(r.nullity, 0);
    }
}

#[test]
fn box_ratio_lower_bound() {
    // K inside the radius-2 ball of Z^2: ratio >= ((2n+1-4)/(2n+1))^2.
    let z2 = Group::free_abelian(2).unwrap();
    let a = RingElement::from_coords(&z2, [([-2, 0], one()), ([2, 2], one()), ([0, -1], one())]).unwrap();
    let radii: Vec<usize> = (2..=8).collect();
    for p in folner_ratio_diagnostic(&a, &radii).unwrap() {
        let side = (2 * p.radius + 1) as f64;
        assert!(p.ratio >= ((side - 4.0) / side).powi(2) - 1e-15);
        assert!(p.ratio <= 1.0);
    }
}

#[test]
fn interior_examples() {
    let z = Group::free_abelian(1).unwrap();
    let f: Vec<_> = (-2..=2).map(|i| z.point([i]).unwrap()).collect();
    let k = [z.point([0]).unwrap(), z.point([3]).unwrap()];
    assert_eq!(interior(&z, &k, &f), vec![z.point([-2]).unwrap(), z.point([-1]).unwrap()]);
}

#[test]
fn empty_interior_is_reported() {
    let z = Group::free_abelian(1).unwrap();
    let a = RingElement::from_coords(&z, [([0], one()), ([5], one())]).unwrap();
    let sigma = Cocycle::trivial(&z);
    let s = search_zero_divisor(&a, &sigma, 3, &ToleranceConfig::default()).unwrap();
    assert!(s.radii.iter().take(2).all(|o| o.report.is_none()));
    assert!(s.radii[2].report.is_some());
    assert!(kernel_search(&a, &sigma, &WindowSpec::new(1).unwrap(), &ToleranceConfig::default()).is_err());
}
