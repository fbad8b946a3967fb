//! Exact arithmetic for ring elements whose coefficients are integer
//! combinations of roots of unity, used with root-of-unity cocycles.
//!
//! A coefficient is a formal sum `sum_t n_t exp(2 pi i t)`. Terms with equal
//! turns are merged, so products built from identical phase chains cancel
//! exactly. No relations between distinct roots are applied, which means
//! [`ExactElement::is_zero`] is sound (true implies zero) but not complete.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::cocycle::Cocycle;
use crate::error::{LabError, Result};
use crate::group::{Group, GroupPoint};
use crate::phase::Turn;
use crate::ring::{ensure_same, RingElement};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhaseSum(BTreeMap<Turn, i64>);

impl PhaseSum {
    pub fn single(t: Turn, n: i64) -> Self {
        let mut s = PhaseSum::default();
        s.push(t, n);
        s
    }

    fn push(&mut self, t: Turn, n: i64) {
        let v = self.0.entry(t).or_insert(0);
        *v += n;
        if *v == 0 {
            self.0.remove(&t);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn rotated(&self, t: Turn) -> PhaseSum {
        PhaseSum(self.0.iter().map(|(u, n)| (*u + t, *n)).collect())
    }

    fn mul(&self, other: &PhaseSum) -> PhaseSum {
        let mut out = PhaseSum::default();
        for (t, n) in &self.0 {
            for (u, m) in &other.0 {
                out.push(*t + *u, n * m);
            }
        }
        out
    }

    pub fn to_complex(&self) -> Complex64 {
        self.0.iter().map(|(t, n)| t.to_complex() * *n as f64).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactElement {
    group: Group,
    terms: BTreeMap<GroupPoint, PhaseSum>,
}

impl ExactElement {
    pub fn zero(group: &Group) -> Self {
        Self { group: group.clone(), terms: BTreeMap::new() }
    }

    /// `exp(2 pi i t) delta_p`.
    pub fn monomial(group: &Group, p: GroupPoint, t: Turn) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(p, PhaseSum::single(t, 1));
        Self { group: group.clone(), terms }
    }

    pub fn unit(group: &Group) -> Self {
        Self::monomial(group, group.identity(), Turn::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    fn merge(&mut self, p: GroupPoint, s: &PhaseSum, sign: i64) {
        let entry = self.terms.entry(p.clone()).or_default();
        for (t, n) in &s.0 {
            entry.push(*t, sign * n);
        }
        if entry.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn add(&self, other: &ExactElement) -> Result<ExactElement> {
        ensure_same(&self.group, &other.group)?;
        let mut out = self.clone();
        for (p, s) in &other.terms {
            out.merge(p.clone(), s, 1);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ExactElement) -> Result<ExactElement> {
        ensure_same(&self.group, &other.group)?;
        let mut out = self.clone();
        for (p, s) in &other.terms {
            out.merge(p.clone(), s, -1);
        }
        Ok(out)
    }

    /// Twisted convolution with exact cocycle phases.
    pub fn convolve(&self, other: &ExactElement, sigma: &Cocycle) -> Result<ExactElement> {
        ensure_same(&self.group, &other.group)?;
        ensure_same(&self.group, sigma.group())?;
        if !sigma.has_exact_phases() {
            return Err(LabError::InvalidCocycle(format!(
                "{} cocycles have no exact phase representation",
                sigma.family().label()
            )));
        }
        let mut out = ExactElement::zero(&self.group);
        for (g, x) in &self.terms {
            for (h, y) in &other.terms {
                let t = sigma.exact_turn(g, h).expect("exact family");
                let prod = x.mul(y).rotated(t);
                out.merge(self.group.compose_unchecked(g, h), &prod, 1);
            }
        }
        Ok(out)
    }

    pub fn to_ring_element(&self) -> RingElement {
        RingElement::from_terms(&self.group, self.terms.iter().map(|(p, s)| (p.clone(), s.to_complex())))
            .expect("points are canonical")
    }
}
