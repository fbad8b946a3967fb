//! Supported discrete groups and their elements.
//!
//! Three families are available: free abelian groups `Z^d`, finite products of
//! cyclic groups `Z/n1 x ... x Z/nr`, and the integer Heisenberg group with the
//! law `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`.

use std::fmt;

use rand::Rng;

use crate::error::{LabError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    FreeAbelian { rank: usize },
    CyclicProduct { orders: Vec<i64> },
    Heisenberg3,
}

/// A supported discrete group together with a display name.
///
/// Equality compares the group law only; the name is cosmetic.
#[derive(Clone, Debug)]
pub struct Group {
    kind: GroupKind,
    name: String,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Group {}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// An element of a supported group, stored as its integer coordinates.
///
/// Points are ordered lexicographically by coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupPoint(Vec<i64>);

impl GroupPoint {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }
}

impl fmt::Display for GroupPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Group {
    pub fn free_abelian(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(LabError::InvalidGroup("free abelian rank must be at least 1".into()));
        }
        let name = if rank == 1 { "Z".to_string() } else { format!("Z^{rank}") };
        Ok(Self { kind: GroupKind::FreeAbelian { rank }, name })
    }

    pub fn cyclic_product(orders: Vec<i64>) -> Result<Self> {
        if orders.is_empty() {
            return Err(LabError::InvalidGroup("cyclic product needs at least one factor".into()));
        }
        if let Some(o) = orders.iter().find(|&&o| o < 2) {
            return Err(LabError::InvalidGroup(format!("cyclic order {o} is below 2")));
        }
        let name = orders.iter().map(|o| format!("Z/{o}")).collect::<Vec<_>>().join(" x ");
        Ok(Self { kind: GroupKind::CyclicProduct { orders }, name })
    }

    pub fn heisenberg3() -> Self {
        Self { kind: GroupKind::Heisenberg3, name: "H3(Z)".into() }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of integer coordinates of a point.
    pub fn coord_len(&self) -> usize {
        match &self.kind {
            GroupKind::FreeAbelian { rank } => *rank,
            GroupKind::CyclicProduct { orders } => orders.len(),
            GroupKind::Heisenberg3 => 3,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, GroupKind::CyclicProduct { .. })
    }

    pub fn is_abelian(&self) -> bool {
        !matches!(self.kind, GroupKind::Heisenberg3)
    }

    /// Group order for finite groups.
    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            GroupKind::CyclicProduct { orders } => Some(orders.iter().map(|&o| o as usize).product()),
            _ => None,
        }
    }

    pub fn identity(&self) -> GroupPoint {
        GroupPoint(vec![0; self.coord_len()])
    }

    /// Builds a point, reducing cyclic coordinates to `[0, order)`.
    pub fn point(&self, coords: impl Into<Vec<i64>>) -> Result<GroupPoint> {
        let mut coords = coords.into();
        if coords.len() != self.coord_len() {
            return Err(self.invalid(&coords));
        }
        if let GroupKind::CyclicProduct { orders } = &self.kind {
            for (c, o) in coords.iter_mut().zip(orders) {
                *c = c.rem_euclid(*o);
            }
        }
        Ok(GroupPoint(coords))
    }

    /// Checks that `p` is a canonical point of this group.
    pub fn check(&self, p: &GroupPoint) -> Result<()> {
        if p.0.len() != self.coord_len() {
            return Err(self.invalid(&p.0));
        }
        if let GroupKind::CyclicProduct { orders } = &self.kind {
            if p.0.iter().zip(orders).any(|(c, o)| *c < 0 || c >= o) {
                return Err(self.invalid(&p.0));
            }
        }
        Ok(())
    }

    pub fn compose(&self, g: &GroupPoint, h: &GroupPoint) -> Result<GroupPoint> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.compose_unchecked(g, h))
    }

    pub(crate) fn compose_unchecked(&self, g: &GroupPoint, h: &GroupPoint) -> GroupPoint {
        let (g, h) = (&g.0, &h.0);
        match &self.kind {
            GroupKind::FreeAbelian { .. } => GroupPoint(g.iter().zip(h).map(|(a, b)| a + b).collect()),
            GroupKind::CyclicProduct { orders } => GroupPoint(
                g.iter().zip(h).zip(orders).map(|((a, b), o)| (a + b).rem_euclid(*o)).collect(),
            ),
            GroupKind::Heisenberg3 => {
                GroupPoint(vec![g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1]])
            }
        }
    }

    pub fn inverse(&self, g: &GroupPoint) -> Result<GroupPoint> {
        self.check(g)?;
        Ok(self.inverse_unchecked(g))
    }

    pub(crate) fn inverse_unchecked(&self, g: &GroupPoint) -> GroupPoint {
        let g = &g.0;
        match &self.kind {
            GroupKind::FreeAbelian { .. } => GroupPoint(g.iter().map(|a| -a).collect()),
            GroupKind::CyclicProduct { orders } => {
                GroupPoint(g.iter().zip(orders).map(|(a, o)| (-a).rem_euclid(*o)).collect())
            }
            GroupKind::Heisenberg3 => GroupPoint(vec![-g[0], -g[1], -g[2] + g[0] * g[1]]),
        }
    }

    /// `g^k` for `k >= 0`.
    pub fn pow(&self, g: &GroupPoint, k: u64) -> Result<GroupPoint> {
        self.check(g)?;
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.compose_unchecked(&acc, g);
        }
        Ok(acc)
    }

    /// Order of `g`, or `None` when it is infinite.
    pub fn element_order(&self, g: &GroupPoint) -> Result<Option<u64>> {
        self.check(g)?;
        match &self.kind {
            GroupKind::CyclicProduct { orders } => {
                let mut n: u64 = 1;
                for (c, o) in g.0.iter().zip(orders) {
                    let k = (*o / gcd(*c, *o)) as u64;
                    n = n / gcd(n as i64, k as i64) as u64 * k;
                }
                Ok(Some(n))
            }
            _ if g.0.iter().all(|&c| c == 0) => Ok(Some(1)),
            _ => Ok(None),
        }
    }

    /// Every element of a finite group in lexicographic order.
    pub fn elements(&self) -> Option<Vec<GroupPoint>> {
        match &self.kind {
            GroupKind::CyclicProduct { orders } => {
                let ranges: Vec<(i64, i64)> = orders.iter().map(|&o| (0, o - 1)).collect();
                Some(box_points(&ranges))
            }
            _ => None,
        }
    }

    /// The standard generators: unit vectors for abelian groups, `x`, `y` and `z`
    /// for the Heisenberg group.
    pub fn generators(&self) -> Vec<GroupPoint> {
        let n = self.coord_len();
        (0..n)
            .map(|i| {
                let mut c = vec![0; n];
                c[i] = 1;
                GroupPoint(c)
            })
            .collect()
    }

    /// Uniform random point with coordinates in `[-radius, radius]`, reduced for
    /// cyclic factors.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R, radius: i64) -> GroupPoint {
        let coords: Vec<i64> = (0..self.coord_len()).map(|_| rng.random_range(-radius..=radius)).collect();
        self.point(coords).expect("length matches")
    }

    fn invalid(&self, coords: &[i64]) -> LabError {
        LabError::InvalidPoint { coords: coords.to_vec(), group: self.name.clone() }
    }
}

/// All integer points of a box, in lexicographic order.
pub(crate) fn box_points(ranges: &[(i64, i64)]) -> Vec<GroupPoint> {
    let mut out = vec![Vec::with_capacity(ranges.len())];
    for &(lo, hi) in ranges {
        let mut next = Vec::with_capacity(out.len() * (hi - lo + 1).max(0) as usize);
        for prefix in &out {
            for v in lo..=hi {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter().map(GroupPoint).collect()
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
