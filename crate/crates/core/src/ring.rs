//! Finitely supported elements of the twisted group ring and their
//! twisted convolution.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cocycle::Cocycle;
use crate::error::{LabError, Result};
use crate::group::{Group, GroupPoint};

/// Numerical tolerances shared by the zero tests and rank decisions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub zero_tol: f64,
    /// Singular values above `rank_tol_factor * sigma_max` count towards the rank.
    pub rank_tol_factor: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { zero_tol: 1e-10, rank_tol_factor: 1e-8 }
    }
}

impl ToleranceConfig {
    pub fn new(zero_tol: f64, rank_tol_factor: f64) -> Result<Self> {
        let cfg = Self { zero_tol, rank_tol_factor };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.zero_tol >= 0.0 && self.rank_tol_factor >= 0.0) {
            return Err(LabError::InvalidParameter("tolerances must be nonnegative".into()));
        }
        Ok(())
    }
}

/// One serialized term of a ring element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coords: Vec<i64>,
    pub re: f64,
    pub im: f64,
}

/// A finitely supported map from group points to complex coefficients.
///
/// Exact zeros are never stored, so the key set is the support.
#[derive(Clone, Debug, PartialEq)]
pub struct RingElement {
    group: Group,
    terms: BTreeMap<GroupPoint, Complex64>,
}

impl RingElement {
    pub fn zero(group: &Group) -> Self {
        Self { group: group.clone(), terms: BTreeMap::new() }
    }

    pub fn unit(group: &Group) -> Self {
        Self::delta(group, group.identity())
    }

    /// `delta_p`. Panics if `p` is not a canonical point of `group`;
    /// use [`RingElement::from_terms`] for checked construction.
    pub fn delta(group: &Group, p: GroupPoint) -> Self {
        group.check(&p).expect("delta point must belong to the group");
        Self::monomial(group, p, Complex64::new(1.0, 0.0))
    }

    pub(crate) fn monomial(group: &Group, p: GroupPoint, c: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        if c != Complex64::new(0.0, 0.0) {
            terms.insert(p, c);
        }
        Self { group: group.clone(), terms }
    }

    /// Sums coefficients of repeated points; exact zeros are dropped.
    pub fn from_terms<I>(group: &Group, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GroupPoint, Complex64)>,
    {
        let mut out = BTreeMap::new();
        for (p, c) in terms {
            group.check(&p)?;
            *out.entry(p).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        Ok(Self::pruned(group, out))
    }

    /// Builds an element from raw coordinates, reducing cyclic coordinates.
    pub fn from_coords<I, C>(group: &Group, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (C, Complex64)>,
        C: Into<Vec<i64>>,
    {
        let pts = terms
            .into_iter()
            .map(|(c, v)| Ok((group.point(c)?, v)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(group, pts)
    }

    pub fn from_records(group: &Group, records: &[TermRecord]) -> Result<Self> {
        Self::from_coords(group, records.iter().map(|r| (r.coords.clone(), Complex64::new(r.re, r.im))))
    }

    /// Terms in lexicographic coordinate order.
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(p, c)| TermRecord { coords: p.coords().to_vec(), re: c.re, im: c.im })
            .collect()
    }

    fn pruned(group: &Group, mut terms: BTreeMap<GroupPoint, Complex64>) -> Self {
        terms.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Self { group: group.clone(), terms }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn terms(&self) -> &BTreeMap<GroupPoint, Complex64> {
        &self.terms
    }

    pub fn coeff(&self, p: &GroupPoint) -> Complex64 {
        self.terms.get(p).copied().unwrap_or_default()
    }

    pub fn support(&self) -> Vec<GroupPoint> {
        self.terms.keys().cloned().collect()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    /// True when no term is stored.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff every coefficient has modulus at most `tol`.
    pub fn is_zero(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.norm() <= tol)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn l2_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    fn same_group(&self, other: &RingElement) -> Result<()> {
        ensure_same(&self.group, &other.group)
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.same_group(other)?;
        let mut terms = self.terms.clone();
        for (p, c) in &other.terms {
            *terms.entry(p.clone()).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        Ok(Self::pruned(&self.group, terms))
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> RingElement {
        let terms = self.terms.iter().map(|(p, v)| (p.clone(), v * c)).collect();
        Self::pruned(&self.group, terms)
    }

    /// Maximum coefficient distance to `other`.
    pub fn distance(&self, other: &RingElement) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Keeps only the terms at points satisfying `keep`.
    pub fn filter<F: Fn(&GroupPoint) -> bool>(&self, keep: F) -> RingElement {
        let terms = self.terms.iter().filter(|(p, _)| keep(p)).map(|(p, c)| (p.clone(), *c)).collect();
        Self { group: self.group.clone(), terms }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:.6}{:+.6}i)d{}", c.re, c.im, p)?;
        }
        Ok(())
    }
}

pub(crate) fn ensure_same(expected: &Group, found: &Group) -> Result<()> {
    if expected != found {
        return Err(LabError::GroupMismatch { expected: expected.name().into(), found: found.name().into() });
    }
    Ok(())
}

/// Twisted convolution `(a * b)(g') = sum_g s(g, g^-1 g') a(g) b(g^-1 g')`,
/// evaluated as `sum_{g, h} s(g, h) a(g) b(h) delta_{gh}`.
pub fn convolve(a: &RingElement, b: &RingElement, sigma: &Cocycle) -> Result<RingElement> {
    a.same_group(b)?;
    ensure_same(&a.group, sigma.group())?;
    let group = &a.group;
    let mut out: BTreeMap<GroupPoint, Complex64> = BTreeMap::new();
    for (g, x) in &a.terms {
        for (h, y) in &b.terms {
            let gh = group.compose_unchecked(g, h);
            *out.entry(gh).or_insert(Complex64::new(0.0, 0.0)) += sigma.eval_unchecked(g, h) * x * y;
        }
    }
    Ok(RingElement::pruned(group, out))
}

/// `n`-fold product `a * a * ... * a`, multiplied left to right.
pub fn power(a: &RingElement, n: u32, sigma: &Cocycle) -> Result<RingElement> {
    if n == 0 {
        return Err(LabError::InvalidParameter("power exponent must be at least 1".into()));
    }
    ensure_same(&a.group, sigma.group())?;
    let mut acc = a.clone();
    for _ in 1..n {
        acc = convolve(&acc, a, sigma)?;
    }
    Ok(acc)
}
