//! Unit-modulus 2-cocycles on the supported groups.
//!
//! A cocycle satisfies `s(x,y) s(xy,z) = s(x,yz) s(y,z)` and `s(e,e) = 1`.
//! Four closed-form families are provided; [`check_cocycle_identity`] tests
//! the identity for any phase map, including ones that are not cocycles.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{LabError, Result};
use crate::group::{Group, GroupKind, GroupPoint};
use crate::phase::{turns_to_unit, Turn};

/// Tolerance for the cocycle identity in [`CocycleReport::passed`].
pub const COCYCLE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum CocycleFamily {
    Trivial,
    /// `exp(2 pi i x^T theta y)`. On the Heisenberg group `theta` is 2x2 and
    /// acts on the abelianization `(a, b)`.
    Bicharacter { theta: Vec<Vec<f64>> },
    /// Pullback of the time-frequency cocycle `exp(-2 pi i x . xi')` along a
    /// lattice basis `B` (2d rows, k columns): `s(m, n) = s(Bm, Bn)`.
    TimeFrequencyLattice { basis: Vec<Vec<f64>> },
    /// Root-of-unity valued cocycle on a cyclic product, stored as exact turns.
    CyclicRoot(CyclicRoot),
}

impl CocycleFamily {
    pub fn label(&self) -> &'static str {
        match self {
            CocycleFamily::Trivial => "trivial",
            CocycleFamily::Bicharacter { .. } => "bicharacter",
            CocycleFamily::TimeFrequencyLattice { .. } => "time_frequency_lattice",
            CocycleFamily::CyclicRoot(_) => "cyclic_root",
        }
    }
}

/// How a [`CyclicRoot`] cocycle was specified.
#[derive(Clone, Debug, PartialEq)]
pub enum CyclicRootSource {
    /// Turns `x^T M y / denominator`.
    Form { numerators: Vec<Vec<i64>>, denominator: i64 },
    /// Explicit turns indexed by the lexicographic element order.
    Table(Vec<Vec<Turn>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CyclicRoot {
    source: CyclicRootSource,
    orders: Vec<i64>,
    size: usize,
    table: Vec<Turn>,
}

impl CyclicRoot {
    pub fn source(&self) -> &CyclicRootSource {
        &self.source
    }

    fn index(&self, p: &GroupPoint) -> usize {
        p.coords().iter().zip(&self.orders).fold(0usize, |acc, (c, o)| acc * *o as usize + *c as usize)
    }

    fn turn(&self, g: &GroupPoint, h: &GroupPoint) -> Turn {
        self.table[self.index(g) * self.size + self.index(h)]
    }
}

/// A validated cocycle bound to its group.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle {
    group: Group,
    family: CocycleFamily,
}

impl Cocycle {
    pub fn trivial(group: &Group) -> Self {
        Self { group: group.clone(), family: CocycleFamily::Trivial }
    }

    pub fn bicharacter(group: &Group, theta: Vec<Vec<f64>>) -> Result<Self> {
        let dim = match group.kind() {
            GroupKind::FreeAbelian { rank } => *rank,
            GroupKind::Heisenberg3 => 2,
            GroupKind::CyclicProduct { .. } => return Err(unsupported("bicharacter", group)),
        };
        check_matrix(&theta, dim, dim, "theta")?;
        Ok(Self { group: group.clone(), family: CocycleFamily::Bicharacter { theta } })
    }

    pub fn time_frequency_lattice(group: &Group, basis: Vec<Vec<f64>>) -> Result<Self> {
        let GroupKind::FreeAbelian { rank } = group.kind() else {
            return Err(unsupported("time_frequency_lattice", group));
        };
        let rows = basis.len();
        if rows == 0 || !rows.is_multiple_of(2) {
            return Err(LabError::InvalidCocycle(format!(
                "lattice basis needs an even, nonzero number of rows, got {rows}"
            )));
        }
        check_matrix(&basis, rows, *rank, "basis")?;
        Ok(Self { group: group.clone(), family: CocycleFamily::TimeFrequencyLattice { basis } })
    }

    /// Cyclic-root cocycle with turns `x^T M y / denominator`.
    ///
    /// The form must be well defined on residues: shifting any coordinate by
    /// its order may only change the turn by an integer.
    pub fn cyclic_root_form(group: &Group, numerators: Vec<Vec<i64>>, denominator: i64) -> Result<Self> {
        let GroupKind::CyclicProduct { orders } = group.kind() else {
            return Err(unsupported("cyclic_root", group));
        };
        let r = orders.len();
        if denominator <= 0 {
            return Err(LabError::InvalidCocycle("denominator must be positive".into()));
        }
        if numerators.len() != r || numerators.iter().any(|row| row.len() != r) {
            return Err(LabError::InvalidCocycle(format!("exponent form must be {r}x{r}")));
        }
        for (i, row) in numerators.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                if (orders[i] * m) % denominator != 0 || (orders[j] * m) % denominator != 0 {
                    return Err(LabError::InvalidCocycle(format!(
                        "exponent entry ({i},{j}) = {m}/{denominator} is not well defined modulo the orders {orders:?}"
                    )));
                }
            }
        }
        let elements = group.elements().expect("cyclic product is finite");
        let size = elements.len();
        let mut table = Vec::with_capacity(size * size);
        for g in &elements {
            for h in &elements {
                let mut acc: i64 = 0;
                for (i, row) in numerators.iter().enumerate() {
                    for (j, &m) in row.iter().enumerate() {
                        acc += g.coords()[i] * m * h.coords()[j];
                    }
                }
                table.push(Turn::new(acc, denominator));
            }
        }
        let root = CyclicRoot {
            source: CyclicRootSource::Form { numerators, denominator },
            orders: orders.clone(),
            size,
            table,
        };
        Ok(Self { group: group.clone(), family: CocycleFamily::CyclicRoot(root) })
    }

    /// Cyclic-root cocycle from an explicit table of turns. The cocycle
    /// identity is verified exactly on every triple.
    pub fn cyclic_root_table(group: &Group, rows: Vec<Vec<Turn>>) -> Result<Self> {
        let GroupKind::CyclicProduct { orders } = group.kind() else {
            return Err(unsupported("cyclic_root", group));
        };
        let elements = group.elements().expect("cyclic product is finite");
        let size = elements.len();
        if rows.len() != size || rows.iter().any(|r| r.len() != size) {
            return Err(LabError::InvalidCocycle(format!("turn table must be {size}x{size}")));
        }
        let root = CyclicRoot {
            source: CyclicRootSource::Table(rows.clone()),
            orders: orders.clone(),
            size,
            table: rows.into_iter().flatten().collect(),
        };
        let e = group.identity();
        if !root.turn(&e, &e).is_zero() {
            return Err(LabError::InvalidCocycle("table value at (e, e) must be 1".into()));
        }
        for x in &elements {
            for y in &elements {
                let xy = group.compose_unchecked(x, y);
                for z in &elements {
                    let lhs = root.turn(x, y) + root.turn(&xy, z);
                    let rhs = root.turn(x, &group.compose_unchecked(y, z)) + root.turn(y, z);
                    if lhs != rhs {
                        return Err(LabError::InvalidCocycle(format!(
                            "cocycle identity fails at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        Ok(Self { group: group.clone(), family: CocycleFamily::CyclicRoot(root) })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn family(&self) -> &CocycleFamily {
        &self.family
    }

    pub fn eval(&self, g: &GroupPoint, h: &GroupPoint) -> Result<Complex64> {
        self.group.check(g)?;
        self.group.check(h)?;
        Ok(self.eval_unchecked(g, h))
    }

    pub(crate) fn eval_unchecked(&self, g: &GroupPoint, h: &GroupPoint) -> Complex64 {
        match &self.family {
            CocycleFamily::Trivial => Complex64::new(1.0, 0.0),
            CocycleFamily::Bicharacter { theta } => {
                let (x, y) = (g.coords(), h.coords());
                let n = theta.len();
                let mut t = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        t += x[i] as f64 * theta[i][j] * y[j] as f64;
                    }
                }
                turns_to_unit(t)
            }
            CocycleFamily::TimeFrequencyLattice { basis } => {
                let z = lattice_image(basis, g.coords());
                let w = lattice_image(basis, h.coords());
                let d = basis.len() / 2;
                let t: f64 = (0..d).map(|r| z[r] * w[d + r]).sum();
                turns_to_unit(-t)
            }
            CocycleFamily::CyclicRoot(root) => root.turn(g, h).to_complex(),
        }
    }

    /// The exact phase, when the family carries one.
    pub fn exact_turn(&self, g: &GroupPoint, h: &GroupPoint) -> Option<Turn> {
        match &self.family {
            CocycleFamily::Trivial => Some(Turn::ZERO),
            CocycleFamily::CyclicRoot(root) => Some(root.turn(g, h)),
            _ => None,
        }
    }

    pub fn has_exact_phases(&self) -> bool {
        matches!(self.family, CocycleFamily::Trivial | CocycleFamily::CyclicRoot(_))
    }

    /// The point `Bm` of the time-frequency plane, for lattice cocycles.
    pub fn lattice_point(&self, m: &GroupPoint) -> Option<Vec<f64>> {
        match &self.family {
            CocycleFamily::TimeFrequencyLattice { basis } => Some(lattice_image(basis, m.coords())),
            _ => None,
        }
    }

    /// Evaluates the cocycle identity on the given triples.
    pub fn check(&self, samples: &[(GroupPoint, GroupPoint, GroupPoint)]) -> Result<CocycleReport> {
        for (x, y, z) in samples {
            self.group.check(x)?;
            self.group.check(y)?;
            self.group.check(z)?;
        }
        Ok(check_cocycle_identity(&self.group, |g, h| self.eval_unchecked(g, h), samples))
    }
}

fn lattice_image(basis: &[Vec<f64>], m: &[i64]) -> Vec<f64> {
    basis.iter().map(|row| row.iter().zip(m).map(|(b, &c)| b * c as f64).sum()).collect()
}

fn check_matrix(m: &[Vec<f64>], rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(LabError::InvalidCocycle(format!("{what} must be {rows}x{cols}")));
    }
    if m.iter().flatten().any(|v| !v.is_finite()) {
        return Err(LabError::InvalidCocycle(format!("{what} has non-finite entries")));
    }
    Ok(())
}

fn unsupported(family: &str, group: &Group) -> LabError {
    LabError::UnsupportedCocycle { family: family.into(), group: group.name().into() }
}

/// Outcome of a cocycle identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleReport {
    pub samples: usize,
    /// `max |s(x,y)s(xy,z) - s(x,yz)s(y,z)|` over the samples.
    pub max_deviation: f64,
    pub identity_value: Complex64,
    pub identity_ok: bool,
    /// `max(|s(x,e) - 1|, |s(e,x) - 1|)` over all sampled points.
    pub normalization_deviation: f64,
    pub passed: bool,
}

/// Checks the cocycle identity for an arbitrary phase map `f`.
pub fn check_cocycle_identity<F>(group: &Group, f: F, samples: &[(GroupPoint, GroupPoint, GroupPoint)]) -> CocycleReport
where
    F: Fn(&GroupPoint, &GroupPoint) -> Complex64,
{
    let e = group.identity();
    let identity_value = f(&e, &e);
    let identity_ok = (identity_value - 1.0).norm() <= 1e-12;
    let mut max_deviation: f64 = 0.0;
    let mut normalization_deviation: f64 = 0.0;
    for (x, y, z) in samples {
        let xy = group.compose_unchecked(x, y);
        let yz = group.compose_unchecked(y, z);
        let lhs = f(x, y) * f(&xy, z);
        let rhs = f(x, &yz) * f(y, z);
        max_deviation = max_deviation.max((lhs - rhs).norm());
        for p in [x, y, z] {
            normalization_deviation = normalization_deviation
                .max((f(p, &e) - 1.0).norm())
                .max((f(&e, p) - 1.0).norm());
        }
    }
    CocycleReport {
        samples: samples.len(),
        max_deviation,
        identity_value,
        identity_ok,
        normalization_deviation,
        passed: identity_ok && max_deviation <= COCYCLE_TOL,
    }
}

/// Random triples with coordinates in `[-radius, radius]`.
pub fn random_triples<R: Rng + ?Sized>(
    group: &Group,
    count: usize,
    radius: i64,
    rng: &mut R,
) -> Vec<(GroupPoint, GroupPoint, GroupPoint)> {
    (0..count)
        .map(|_| {
            (
                group.random_point(rng, radius),
                group.random_point(rng, radius),
                group.random_point(rng, radius),
            )
        })
        .collect()
}
