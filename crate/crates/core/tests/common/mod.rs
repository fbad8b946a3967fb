#![allow(dead_code)]

use rand::Rng;
use twisted_ring_lab::{Cocycle, Complex64, Group, RingElement};

pub fn random_coeff<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random element with at most `max_support` terms and coordinates in
/// `lo..=hi`; never zero.
pub fn random_element<R: Rng>(rng: &mut R, group: &Group, max_support: usize, lo: i64, hi: i64) -> RingElement {
    loop {
        let k = rng.random_range(1..=max_support);
        let terms: Vec<(Vec<i64>, Complex64)> = (0..k)
            .map(|_| {
                let coords = (0..group.coord_len()).map(|_| rng.random_range(lo..=hi)).collect();
                (coords, random_coeff(rng))
            })
            .collect();
        let a = RingElement::from_coords(group, terms).unwrap();
        if !a.is_empty() {
            return a;
        }
    }
}

pub fn random_theta<R: Rng>(rng: &mut R, d: usize) -> Vec<Vec<f64>> {
    (0..d).map(|_| (0..d).map(|_| rng.random_range(0.0..1.0)).collect()).collect()
}

pub fn random_bicharacter<R: Rng>(rng: &mut R, group: &Group) -> Cocycle {
    let d = match group.kind() {
        twisted_ring_lab::GroupKind::Heisenberg3 => 2,
        _ => group.coord_len(),
    };
    Cocycle::bicharacter(group, random_theta(rng, d)).unwrap()
}

/// Real 2x2 basis with entries in `[-2, 2]` and determinant away from zero.
pub fn random_real_basis<R: Rng>(rng: &mut R) -> Vec<Vec<f64>> {
    loop {
        let b: Vec<Vec<f64>> = (0..2).map(|_| (0..2).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
        if (b[0][0] * b[1][1] - b[0][1] * b[1][0]).abs() > 0.1 {
            return b;
        }
    }
}

/// Integer 2x2 basis with entries in `{-2..2}` and nonzero determinant.
pub fn random_integer_basis<R: Rng>(rng: &mut R) -> [[f64; 2]; 2] {
    loop {
        let b: [[i64; 2]; 2] = [
            [rng.random_range(-2..=2), rng.random_range(-2..=2)],
            [rng.random_range(-2..=2), rng.random_range(-2..=2)],
        ];
        if b[0][0] * b[1][1] - b[0][1] * b[1][0] != 0 {
            return b.map(|r| r.map(|v| v as f64));
        }
    }
}

/// Largest coefficient difference.
pub fn dist(a: &RingElement, b: &RingElement) -> f64 {
    a.sub(b).unwrap().max_abs()
}
