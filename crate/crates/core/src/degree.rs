//! Degree maps `Γ -> Z`, homogeneous decompositions and the leading-part
//! argument for products, plus the polynomial degree on `Z^d`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::cocycle::Cocycle;
use crate::error::{LabError, Result};
use crate::group::{gcd, Group, GroupKind, GroupPoint};
use crate::ring::{convolve, ensure_same, RingElement};

/// A surjective homomorphism to `Z` given by integer weights.
///
/// On `Z^d` the degree is `w . coords`; on the Heisenberg group the two
/// weights act on the abelianization `(a, b)` and the center has degree 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeMap {
    group: Group,
    weights: Vec<i64>,
}

impl DegreeMap {
    pub fn new(group: &Group, weights: Vec<i64>) -> Result<Self> {
        let expected = match group.kind() {
            GroupKind::FreeAbelian { rank } => *rank,
            GroupKind::Heisenberg3 => 2,
            GroupKind::CyclicProduct { .. } => {
                return Err(LabError::InvalidDegreeMap(format!("{group} has no nonzero map to Z")))
            }
        };
        if weights.len() != expected {
            return Err(LabError::InvalidDegreeMap(format!("expected {expected} weights, got {}", weights.len())));
        }
        let g = weights.iter().fold(0, |acc, &w| gcd(acc, w));
        if g != 1 {
            return Err(LabError::InvalidDegreeMap(format!(
                "weights {weights:?} do not define a surjective map (gcd {g})"
            )));
        }
        Ok(Self { group: group.clone(), weights })
    }

    /// The `i`-th coordinate projection.
    pub fn coordinate(group: &Group, i: usize) -> Result<Self> {
        let n = match group.kind() {
            GroupKind::Heisenberg3 => 2,
            _ => group.coord_len(),
        };
        if i >= n {
            return Err(LabError::IndexOutOfRange { index: i, rank: n });
        }
        let mut w = vec![0; n];
        w[i] = 1;
        Self::new(group, w)
    }

    /// Sum of all coordinates (of the abelianization on the Heisenberg group).
    pub fn total(group: &Group) -> Result<Self> {
        let n = match group.kind() {
            GroupKind::Heisenberg3 => 2,
            _ => group.coord_len(),
        };
        Self::new(group, vec![1; n])
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn degree(&self, g: &GroupPoint) -> i64 {
        self.weights.iter().zip(g.coords()).map(|(w, c)| w * c).sum()
    }
}

/// Splits `a` into homogeneous parts keyed by degree. Their sum is `a`.
pub fn homogeneous_decompose(a: &RingElement, phi: &DegreeMap) -> Result<BTreeMap<i64, RingElement>> {
    ensure_same(a.group(), &phi.group)?;
    let mut bins: BTreeMap<i64, Vec<(GroupPoint, Complex64)>> = BTreeMap::new();
    for (p, c) in a.terms() {
        bins.entry(phi.degree(p)).or_default().push((p.clone(), *c));
    }
    bins.into_iter().map(|(k, terms)| Ok((k, RingElement::from_terms(a.group(), terms)?))).collect()
}

/// Outcome of comparing the lowest-degree part of `a * b` with `a' * b'`.
#[derive(Clone, Debug)]
pub struct LeadingStepReport {
    /// Lowest degree in `a`.
    pub k: i64,
    /// Lowest degree in `b`.
    pub l: i64,
    pub leading_product: RingElement,
    /// Degree `k + l` part of `a * b`.
    pub product_part: RingElement,
    pub remainder: RingElement,
    /// `max |(a*b)_{k+l} - a'*b'|`.
    pub leading_deviation: f64,
    /// No part of `a * b` has degree below `k + l`.
    pub no_lower_degrees: bool,
    /// `supp(a' * b')` and `supp(R)` do not meet.
    pub supports_disjoint: bool,
    pub leading_nonzero: bool,
    pub product_nonzero: bool,
    /// `a'*b' != 0` implied `a*b != 0` on this instance.
    pub implication_held: bool,
    pub passed: bool,
}

pub fn verify_leading_step(a: &RingElement, b: &RingElement, sigma: &Cocycle, phi: &DegreeMap) -> Result<LeadingStepReport> {
    if a.is_empty() || b.is_empty() {
        return Err(LabError::ZeroElement);
    }
    ensure_same(a.group(), sigma.group())?;
    let da = homogeneous_decompose(a, phi)?;
    let db = homogeneous_decompose(b, phi)?;
    let (&k, a_low) = da.iter().next().expect("nonzero");
    let (&l, b_low) = db.iter().next().expect("nonzero");
    let leading_product = convolve(a_low, b_low, sigma)?;
    let product = convolve(a, b, sigma)?;
    let target = k + l;
    let product_part = product.filter(|p| phi.degree(p) == target);
    let remainder = product.filter(|p| phi.degree(p) != target);
    let no_lower_degrees = remainder.support().iter().all(|p| phi.degree(p) > target);
    let supports_disjoint = leading_product.terms().keys().all(|p| !remainder.terms().contains_key(p));
    let leading_deviation = product_part.distance(&leading_product)?;
    let leading_nonzero = !leading_product.is_empty();
    let product_nonzero = !product.is_empty();
    let implication_held = !leading_nonzero || product_nonzero;
    Ok(LeadingStepReport {
        k,
        l,
        passed: leading_deviation <= 1e-10 && no_lower_degrees && supports_disjoint && implication_held,
        leading_product,
        product_part,
        remainder,
        leading_deviation,
        no_lower_degrees,
        supports_disjoint,
        leading_nonzero,
        product_nonzero,
        implication_held,
    })
}

/// How to measure the degree of an element.
#[derive(Clone, Debug)]
pub enum DegreeRule {
    /// Total degree of a non-negative element of `Z^d`.
    Coordinatewise,
    /// Largest value of a degree map on the support.
    Map(DegreeMap),
}

/// Degree of `a`, with `deg(0) = -1`.
pub fn degree_nonneg(a: &RingElement, rule: &DegreeRule) -> Result<i64> {
    match rule {
        DegreeRule::Coordinatewise => {
            if !matches!(a.group().kind(), GroupKind::FreeAbelian { .. }) {
                return Err(LabError::InvalidDegreeMap(format!(
                    "coordinatewise degree needs a free abelian group, got {}",
                    a.group()
                )));
            }
            if let Some(p) = a.terms().keys().find(|p| p.coords().iter().any(|&c| c < 0)) {
                return Err(LabError::NegativeCoordinate { coords: p.coords().to_vec() });
            }
            Ok(a.terms().keys().map(|p| p.coords().iter().sum::<i64>()).max().unwrap_or(-1))
        }
        DegreeRule::Map(phi) => {
            ensure_same(a.group(), &phi.group)?;
            Ok(a.terms().keys().map(|p| phi.degree(p)).max().unwrap_or(-1))
        }
    }
}

/// Commutation phase `z_ij = s(e_i, e_j) conj(s(e_j, e_i))` with
/// `u_i u_j = z_ij u_j u_i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CommutatorPhase {
    pub value: Complex64,
    /// `max |u_i u_j - z_ij u_j u_i|`.
    pub deviation: f64,
    pub verified: bool,
}

/// Indices are zero-based.
pub fn commutator_phase(sigma: &Cocycle, i: usize, j: usize) -> Result<CommutatorPhase> {
    let group = sigma.group();
    let GroupKind::FreeAbelian { rank } = group.kind() else {
        return Err(LabError::InvalidParameter(format!("commutator phases need a free abelian group, got {group}")));
    };
    for idx in [i, j] {
        if idx >= *rank {
            return Err(LabError::IndexOutOfRange { index: idx, rank: *rank });
        }
    }
    let gens = group.generators();
    let (ei, ej) = (&gens[i], &gens[j]);
    let value = sigma.eval_unchecked(ei, ej) * sigma.eval_unchecked(ej, ei).conj();
    let ui = RingElement::delta(group, ei.clone());
    let uj = RingElement::delta(group, ej.clone());
    let lhs = convolve(&ui, &uj, sigma)?;
    let rhs = convolve(&uj, &ui, sigma)?.scale(value);
    let deviation = lhs.distance(&rhs)?;
    Ok(CommutatorPhase { value, deviation, verified: deviation <= 1e-12 })
}
