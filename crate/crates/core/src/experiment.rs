//! Experiment configurations, dispatch and report emission for the `twlab`
//! command-line tool.
//!
//! A configuration is a JSON document; every field is optional at parse time
//! and checked per experiment kind by [`ExperimentConfig::validate`].

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cocycle::{random_triples, Cocycle};
use crate::descriptor::{CocycleSpec, Descriptor, GroupSpec};
use crate::degree::{commutator_phase, verify_leading_step, DegreeMap};
use crate::error::LabError;
use crate::folner::{folner_ratio_diagnostic, rank_nullity_check, vn_dim_estimate};
use crate::gabor::{
    gram_matrix, independence_witness, lattice_points, AnalyticWindow, GramResult, GramWindow, Grid,
    IndependenceWitness, TfPoint,
};
use crate::group::Group;
use crate::ring::{convolve, RingElement, TermRecord, ToleranceConfig};
use crate::zero_divisor::{search_zero_divisor, torsion_zero_divisor, ZeroDivisorSearch};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    CocycleCheck,
    ZdSearch,
    TorsionConstruct,
    FolnerDim,
    GaborGram,
    Pipeline,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::CocycleCheck => "cocycle-check",
            ExperimentKind::ZdSearch => "zd-search",
            ExperimentKind::TorsionConstruct => "torsion-construct",
            ExperimentKind::FolnerDim => "folner-dim",
            ExperimentKind::GaborGram => "gabor-gram",
            ExperimentKind::Pipeline => "pipeline",
        }
    }
}

/// `{"lattice_basis": [[..], [..]], "coefficient_range": n}` expands to
/// `{B m : m in {-n..n}^2}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub lattice_basis: [[f64; 2]; 2],
    pub coefficient_range: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSet {
    Lattice(LatticeSpec),
    List(Vec<[f64; 2]>),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Option<ExperimentKind>,
    pub group: Option<GroupSpec>,
    pub cocycle: Option<CocycleSpec>,
    pub element: Option<Vec<TermRecord>>,
    /// Largest window radius; folner-dim uses `1..=radius` unless `radii` is set.
    pub radius: Option<usize>,
    pub radii: Option<Vec<usize>>,
    pub tolerances: Option<ToleranceConfig>,
    /// cocycle-check: number of random triples (default 1000).
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    /// cocycle-check: coordinate bound for random points (default 3).
    pub sample_radius: Option<i64>,
    /// cocycle-check: pairs `[g, h]` at which to evaluate the cocycle.
    pub evaluate: Option<Vec<[Vec<i64>; 2]>>,
    /// cocycle-check: element pairs `[a, b]` to multiply.
    pub multiply: Option<Vec<[Vec<TermRecord>; 2]>>,
    /// cocycle-check: degree map weights; each product in `multiply` also
    /// gets a leading-part report.
    pub degree_weights: Option<Vec<i64>>,
    /// cocycle-check: report commutation phases of the standard generators.
    pub commutators: Option<bool>,
    /// torsion-construct: the element of finite order.
    pub generator: Option<Vec<i64>>,
    /// gabor-gram: the set of time-frequency points.
    pub points: Option<PointSet>,
    /// gabor-gram: "closed-form" (default) or "quadrature".
    pub method: Option<String>,
    /// Quadrature grid step and half-width (default 1/512 and 8).
    pub grid_step: Option<f64>,
    pub grid_half_width: Option<f64>,
    /// Eigenvalue threshold for the independence witness (default 1e-6).
    pub witness_tol: Option<f64>,
    /// pipeline: 2x2 lattice basis (rows x and xi).
    pub lattice_basis: Option<[[f64; 2]; 2]>,
    pub output: Option<String>,
}

/// Command-line overrides; these win over file values.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub radius: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RunStatus {
    Success,
    ValidationFailure,
    Inconclusive,
}

impl RunStatus {
    pub fn code(&self) -> i32 {
        match self {
            RunStatus::Success => 0,
            RunStatus::ValidationFailure => 2,
            RunStatus::Inconclusive => 3,
        }
    }
}

/// Failure before a report could be produced.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RunError {
    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },
    #[error(transparent)]
    Lab(#[from] LabError),
}

impl RunError {
    fn config(field: &str, message: impl Into<String>) -> Self {
        RunError::Config { field: field.into(), message: message.into() }
    }

    pub fn status(&self) -> RunStatus {
        match self {
            RunError::Lab(LabError::Numerical(_)) => RunStatus::Inconclusive,
            _ => RunStatus::ValidationFailure,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub kind: ExperimentKind,
    pub record: Value,
    pub csv: String,
    pub table: String,
    pub status: RunStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, RunError> {
        serde_json::from_str(text).map_err(|e| RunError::config("<root>", e.to_string()))
    }

    /// Applies command-line overrides and fixes the experiment kind.
    pub fn apply(&mut self, kind: ExperimentKind, o: &Overrides) -> Result<(), RunError> {
        if let Some(k) = self.kind {
            if k != kind {
                return Err(RunError::config("kind", format!("config is for {}, not {}", k.name(), kind.name())));
            }
        }
        self.kind = Some(kind);
        if let Some(r) = o.radius {
            match kind {
                ExperimentKind::ZdSearch | ExperimentKind::Pipeline => self.radius = Some(r),
                ExperimentKind::FolnerDim => {
                    self.radius = Some(r);
                    self.radii = None;
                }
                ExperimentKind::CocycleCheck => self.sample_radius = Some(r as i64),
                _ => return Err(RunError::config("--radius", format!("not used by {}", kind.name()))),
            }
        }
        if let Some(t) = o.tol {
            let mut tol = self.tolerances.unwrap_or_default();
            match kind {
                ExperimentKind::ZdSearch | ExperimentKind::FolnerDim => tol.rank_tol_factor = t,
                ExperimentKind::TorsionConstruct => tol.zero_tol = t,
                ExperimentKind::GaborGram | ExperimentKind::Pipeline => self.witness_tol = Some(t),
                ExperimentKind::CocycleCheck => {
                    return Err(RunError::config("--tol", "cocycle-check uses a fixed threshold of 1e-10"))
                }
            }
            self.tolerances = Some(tol);
        }
        if o.out.is_some() {
            self.output = o.out.clone();
        }
        Ok(())
    }

    fn kind(&self) -> Result<ExperimentKind, RunError> {
        self.kind.ok_or_else(|| RunError::config("kind", "missing experiment kind"))
    }

    fn tolerances(&self) -> Result<ToleranceConfig, RunError> {
        let t = self.tolerances.unwrap_or_default();
        t.validate().map_err(|e| RunError::config("tolerances", e.to_string()))?;
        Ok(t)
    }

    fn descriptor(&self) -> Result<(Group, Cocycle), RunError> {
        let group = self.group.clone().ok_or_else(|| RunError::config("group", "required"))?;
        let d = Descriptor { group, cocycle: self.cocycle.clone().unwrap_or(CocycleSpec::Trivial) };
        d.build().map_err(|e| RunError::config("cocycle", e.to_string()))
    }

    fn element(&self, group: &Group) -> Result<RingElement, RunError> {
        let records = self.element.as_ref().ok_or_else(|| RunError::config("element", "required"))?;
        let a = RingElement::from_records(group, records).map_err(|e| RunError::config("element", e.to_string()))?;
        if a.is_empty() {
            return Err(RunError::config("element", "must be nonzero"));
        }
        Ok(a)
    }

    fn radii(&self) -> Result<Vec<usize>, RunError> {
        let radii = match (&self.radii, self.radius) {
            (Some(r), _) => r.clone(),
            (None, Some(n)) => (1..=n).collect(),
            (None, None) => (1..=6).collect(),
        };
        if radii.is_empty() || radii.contains(&0) {
            return Err(RunError::config("radii", "radii must be positive and nonempty"));
        }
        Ok(radii)
    }

    fn max_radius(&self, default: usize) -> Result<usize, RunError> {
        match self.radius.unwrap_or(default) {
            0 => Err(RunError::config("radius", "must be positive")),
            r => Ok(r),
        }
    }

    fn witness_tol(&self) -> Result<f64, RunError> {
        match self.witness_tol.unwrap_or(1e-6) {
            t if t >= 0.0 => Ok(t),
            _ => Err(RunError::config("witness_tol", "must be nonnegative")),
        }
    }

    /// Checks kind-specific required fields without running anything.
    pub fn validate(&self) -> Result<(), RunError> {
        let kind = self.kind()?;
        self.tolerances()?;
        match kind {
            ExperimentKind::CocycleCheck => {
                self.descriptor()?;
                if self.samples == Some(0) {
                    return Err(RunError::config("samples", "must be positive"));
                }
            }
            ExperimentKind::ZdSearch | ExperimentKind::FolnerDim => {
                let (g, _) = self.descriptor()?;
                self.element(&g)?;
                self.radii()?;
                self.max_radius(6)?;
            }
            ExperimentKind::TorsionConstruct => {
                let (g, _) = self.descriptor()?;
                let gen = self.generator.clone().ok_or_else(|| RunError::config("generator", "required"))?;
                g.point(gen).map_err(|e| RunError::config("generator", e.to_string()))?;
            }
            ExperimentKind::GaborGram => {
                self.points()?;
                self.witness_tol()?;
            }
            ExperimentKind::Pipeline => {
                self.lattice_basis.ok_or_else(|| RunError::config("lattice_basis", "required"))?;
                self.max_radius(4)?;
                self.witness_tol()?;
            }
        }
        Ok(())
    }

    fn points(&self) -> Result<Vec<TfPoint>, RunError> {
        let pts = match self.points.as_ref().ok_or_else(|| RunError::config("points", "required"))? {
            PointSet::List(list) => list.iter().map(|p| TfPoint::new(p[0], p[1])).collect::<Vec<_>>(),
            PointSet::Lattice(spec) => {
                if spec.coefficient_range < 0 {
                    return Err(RunError::config("points.coefficient_range", "must be nonnegative"));
                }
                lattice_points(spec.lattice_basis, spec.coefficient_range)
            }
        };
        if pts.is_empty() {
            return Err(RunError::config("points", "must be nonempty"));
        }
        Ok(pts)
    }
}

fn cplx(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn element_json(a: &RingElement) -> Value {
    serde_json::to_value(a.to_records()).expect("records serialize")
}

fn descriptor_json(sigma: &Cocycle) -> Value {
    serde_json::to_value(Descriptor::of(sigma)).expect("descriptor serializes")
}

/// Runs one experiment.
pub fn run(config: &ExperimentConfig) -> Result<Report, RunError> {
    config.validate()?;
    match config.kind()? {
        ExperimentKind::CocycleCheck => run_cocycle_check(config),
        ExperimentKind::ZdSearch => run_zd_search(config),
        ExperimentKind::TorsionConstruct => run_torsion(config),
        ExperimentKind::FolnerDim => run_folner_dim(config),
        ExperimentKind::GaborGram => run_gabor_gram(config),
        ExperimentKind::Pipeline => run_pipeline(config),
    }
}

/// Runs independent configurations concurrently, one thread each.
pub fn run_batch(configs: &[ExperimentConfig]) -> Vec<Result<Report, RunError>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = configs.iter().map(|c| s.spawn(move || run(c))).collect();
        handles.into_iter().map(|h| h.join().expect("experiment thread panicked")).collect()
    })
}

fn run_cocycle_check(config: &ExperimentConfig) -> Result<Report, RunError> {
    let (group, sigma) = config.descriptor()?;
    let count = config.samples.unwrap_or(1000);
    let seed = config.seed.unwrap_or(0);
    let radius = config.sample_radius.unwrap_or(3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = random_triples(&group, count, radius, &mut rng);
    let r = sigma.check(&samples)?;
    let record = json!({
        "kind": "cocycle-check",
        "descriptor": descriptor_json(&sigma),
        "samples": r.samples,
        "seed": seed,
        "sample_radius": radius,
        "max_deviation": r.max_deviation,
        "identity_value": cplx(r.identity_value),
        "identity_ok": r.identity_ok,
        "normalization_deviation": r.normalization_deviation,
        "passed": r.passed,
    });
    let csv = format!(
        "samples,max_deviation,identity_ok,normalization_deviation,passed\n{},{:e},{},{:e},{}\n",
        r.samples, r.max_deviation, r.identity_ok, r.normalization_deviation, r.passed
    );
    let table = format!(
        "cocycle-check on {} ({})\n  samples                 {}\n  max deviation           {:.3e}\n  s(e,e) = 1              {}\n  normalization deviation {:.3e}\n  result                  {}\n",
        group,
        sigma.family().label(),
        r.samples,
        r.max_deviation,
        r.identity_ok,
        r.normalization_deviation,
        if r.passed { "pass" } else { "FAIL" }
    );
    let mut record = record;
    let mut table = table;
    let leading_ok = cocycle_extras(config, &group, &sigma, &mut record, &mut table)?;
    let status = if !r.passed {
        RunStatus::ValidationFailure
    } else if !leading_ok {
        RunStatus::Inconclusive
    } else {
        RunStatus::Success
    };
    Ok(Report { kind: ExperimentKind::CocycleCheck, record, csv, table, status })
}

/// Optional evaluations, products and commutation phases; returns whether
/// every leading-part report passed.
fn cocycle_extras(
    config: &ExperimentConfig,
    group: &Group,
    sigma: &Cocycle,
    record: &mut Value,
    table: &mut String,
) -> Result<bool, RunError> {
    if let Some(pairs) = &config.evaluate {
        let mut out = Vec::new();
        for [g, h] in pairs {
            let gp = group.point(g.clone()).map_err(|e| RunError::config("evaluate", e.to_string()))?;
            let hp = group.point(h.clone()).map_err(|e| RunError::config("evaluate", e.to_string()))?;
            let v = sigma.eval(&gp, &hp)?;
            writeln!(table, "  s({gp}, {hp}) = {:.12} {:+.12}i", v.re, v.im).unwrap();
            out.push(json!({"g": gp.coords(), "h": hp.coords(), "value": cplx(v)}));
        }
        record["evaluations"] = json!(out);
    }
    let phi = match &config.degree_weights {
        Some(w) => Some(DegreeMap::new(group, w.clone()).map_err(|e| RunError::config("degree_weights", e.to_string()))?),
        None => None,
    };
    let mut leading_ok = true;
    if let Some(pairs) = &config.multiply {
        let mut out = Vec::new();
        for [a, b] in pairs {
            let a = RingElement::from_records(group, a).map_err(|e| RunError::config("multiply", e.to_string()))?;
            let b = RingElement::from_records(group, b).map_err(|e| RunError::config("multiply", e.to_string()))?;
            let ab = convolve(&a, &b, sigma)?;
            writeln!(table, "  ({a}) * ({b}) = {ab}").unwrap();
            let mut entry = json!({"a": element_json(&a), "b": element_json(&b), "product": element_json(&ab)});
            if let Some(phi) = &phi {
                if a.is_empty() || b.is_empty() {
                    return Err(RunError::config("multiply", "leading-part reports need nonzero factors"));
                }
                let r = verify_leading_step(&a, &b, sigma, phi)?;
                leading_ok &= r.passed;
                entry["leading_step"] = json!({
                    "k": r.k,
                    "l": r.l,
                    "leading_product": element_json(&r.leading_product),
                    "remainder": element_json(&r.remainder),
                    "leading_deviation": r.leading_deviation,
                    "supports_disjoint": r.supports_disjoint,
                    "no_lower_degrees": r.no_lower_degrees,
                    "passed": r.passed,
                });
            }
            out.push(entry);
        }
        record["products"] = json!(out);
    }
    if config.commutators == Some(true) {
        let n = group.generators().len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let c = commutator_phase(sigma, i, j).map_err(|e| RunError::config("commutators", e.to_string()))?;
                out.push(json!({"i": i, "j": j, "value": cplx(c.value), "verified": c.verified}));
            }
        }
        record["commutators"] = json!(out);
    }
    Ok(leading_ok)
}

fn search_json(search: &ZeroDivisorSearch) -> Value {
    let radii: Vec<Value> = search
        .radii
        .iter()
        .map(|o| match &o.report {
            None => json!({"radius": o.radius, "status": "empty-interior"}),
            Some(r) => json!({
                "radius": o.radius,
                "status": "searched",
                "window_size": r.window_size,
                "interior_size": r.interior_size,
                "rank": r.rank,
                "nullity": r.nullity,
                "threshold": r.threshold,
                "singular_values": r.singular_values,
                "kernel_basis": r.kernel_basis.iter().map(element_json).collect::<Vec<_>>(),
            }),
        })
        .collect();
    json!({
        "max_radius": search.max_radius,
        "found_at": search.found_at,
        "status": search.status(),
        "radii": radii,
    })
}

fn search_csv(search: &ZeroDivisorSearch) -> String {
    let mut csv = String::from("radius,window_size,interior_size,rank,nullity\n");
    for o in &search.radii {
        match &o.report {
            None => writeln!(csv, "{},,0,,", o.radius).unwrap(),
            Some(r) => writeln!(csv, "{},{},{},{},{}", o.radius, r.window_size, r.interior_size, r.rank, r.nullity).unwrap(),
        }
    }
    csv
}

fn search_table(search: &ZeroDivisorSearch) -> String {
    let mut t = String::from("  radius  |F|     |int|   rank    nullity\n");
    for o in &search.radii {
        match &o.report {
            None => writeln!(t, "  {:<7} (empty interior)", o.radius).unwrap(),
            Some(r) => writeln!(
                t,
                "  {:<7} {:<7} {:<7} {:<7} {}",
                o.radius, r.window_size, r.interior_size, r.rank, r.nullity
            )
            .unwrap(),
        }
    }
    writeln!(t, "  outcome: {}", search.status()).unwrap();
    t
}

fn run_zd_search(config: &ExperimentConfig) -> Result<Report, RunError> {
    let (group, sigma) = config.descriptor()?;
    let a = config.element(&group)?;
    let tol = config.tolerances()?;
    let max_radius = config.max_radius(6)?;
    let search = search_zero_divisor(&a, &sigma, max_radius, &tol)?;
    let record = json!({
        "kind": "zd-search",
        "descriptor": descriptor_json(&sigma),
        "element": element_json(&a),
        "tolerances": {"zero_tol": tol.zero_tol, "rank_tol_factor": tol.rank_tol_factor},
        "search": search_json(&search),
    });
    let table = format!("zd-search on {} ({})\n{}", group, sigma.family().label(), search_table(&search));
    Ok(Report { kind: ExperimentKind::ZdSearch, record, csv: search_csv(&search), table, status: RunStatus::Success })
}

fn run_torsion(config: &ExperimentConfig) -> Result<Report, RunError> {
    let (group, sigma) = config.descriptor()?;
    let tol = config.tolerances()?;
    let gen = group.point(config.generator.clone().unwrap_or_default()).map_err(|e| RunError::config("generator", e.to_string()))?;
    let t = torsion_zero_divisor(&gen, &sigma).map_err(|e| RunError::config("generator", e.to_string()))?;
    let record = json!({
        "kind": "torsion-construct",
        "descriptor": descriptor_json(&sigma),
        "generator": gen.coords(),
        "order": t.order,
        "alpha": cplx(t.alpha),
        "root": cplx(t.root),
        "left": element_json(&t.left),
        "right": element_json(&t.right),
        "residual": t.residual,
        "float_residual": t.float_residual,
        "exact_zero": t.exact_zero,
    });
    let mut csv = String::from("factor,coords,re,im\n");
    for (name, e) in [("left", &t.left), ("right", &t.right)] {
        for r in e.to_records() {
            let coords = r.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
            writeln!(csv, "{name},{coords},{},{}", r.re, r.im).unwrap();
        }
    }
    let table = format!(
        "torsion-construct on {} at {} (order {})\n  left     {}\n  right    {}\n  residual {:.3e} (floating point {:.3e})\n  exact    {}\n",
        group,
        gen,
        t.order,
        t.left,
        t.right,
        t.residual,
        t.float_residual,
        t.exact_zero.map_or("n/a".to_string(), |b| b.to_string())
    );
    let status = if t.residual <= tol.zero_tol && t.exact_zero != Some(false) { RunStatus::Success } else { RunStatus::Inconclusive };
    Ok(Report { kind: ExperimentKind::TorsionConstruct, record, csv, table, status })
}

fn run_folner_dim(config: &ExperimentConfig) -> Result<Report, RunError> {
    let (group, sigma) = config.descriptor()?;
    let a = config.element(&group)?;
    let tol = config.tolerances()?;
    let radii = config.radii()?;
    let ratios = folner_ratio_diagnostic(&a, &radii)?;
    let mut rows = Vec::new();
    let mut csv = String::from("n,|F_n|,|int|,ratio,nullity,estimate\n");
    let mut table = format!(
        "folner-dim on {} ({})\n  n     |F_n|   |int|   ratio      nullity  estimate   rank-nullity\n",
        group,
        sigma.family().label()
    );
    let mut all_pass = true;
    for p in &ratios {
        if p.interior_size == 0 {
            rows.push(json!({
                "n": p.radius, "folner_size": p.folner_size, "interior_size": 0, "ratio": p.ratio,
                "status": "empty-interior",
            }));
            writeln!(csv, "{},{},0,{},,", p.radius, p.folner_size, p.ratio).unwrap();
            writeln!(table, "  {:<5} {:<7} 0       {:<10.6} (empty interior)", p.radius, p.folner_size, p.ratio).unwrap();
            continue;
        }
        let est = vn_dim_estimate(&a, &sigma, p.radius, &tol)?;
        let rn = rank_nullity_check(&a, &sigma, p.radius, &tol)?;
        all_pass &= rn.passed;
        rows.push(json!({
            "n": p.radius,
            "folner_size": est.folner_size,
            "interior_size": est.interior_size,
            "ratio": est.interior_ratio,
            "nullity": est.nullity,
            "estimate": est.value,
            "projection_average": est.projection_average,
            "rank": rn.rank,
            "rank_nullity_passed": rn.passed,
        }));
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            p.radius, est.folner_size, est.interior_size, est.interior_ratio, est.nullity, est.value
        )
        .unwrap();
        writeln!(
            table,
            "  {:<5} {:<7} {:<7} {:<10.6} {:<8} {:<10.6} {}",
            p.radius,
            est.folner_size,
            est.interior_size,
            est.interior_ratio,
            est.nullity,
            est.value,
            if rn.passed { "ok" } else { "MISMATCH" }
        )
        .unwrap();
    }
    let record = json!({
        "kind": "folner-dim",
        "descriptor": descriptor_json(&sigma),
        "element": element_json(&a),
        "tolerances": {"zero_tol": tol.zero_tol, "rank_tol_factor": tol.rank_tol_factor},
        "series": rows,
    });
    let status = if all_pass { RunStatus::Success } else { RunStatus::Inconclusive };
    Ok(Report { kind: ExperimentKind::FolnerDim, record, csv, table, status })
}

fn gram_json(g: &GramResult, witness: IndependenceWitness, tol: f64) -> Value {
    let matrix: Vec<Vec<Value>> =
        (0..g.matrix.nrows()).map(|i| (0..g.matrix.ncols()).map(|j| cplx(g.matrix[(i, j)])).collect()).collect();
    json!({
        "points": g.points.iter().map(|p| [p.x, p.xi]).collect::<Vec<_>>(),
        "method": g.method,
        "matrix": matrix,
        "eigenvalues": g.eigenvalues,
        "min_eigenvalue": g.min_eigenvalue,
        "condition_number": g.condition_number,
        "hermitian_defect": g.hermitian_defect,
        "witness_tol": tol,
        "witness": witness,
    })
}

fn gram_status(w: IndependenceWitness) -> RunStatus {
    match w {
        IndependenceWitness::CertifiedIndependent => RunStatus::Success,
        IndependenceWitness::Inconclusive => RunStatus::Inconclusive,
    }
}

fn witness_name(w: IndependenceWitness) -> &'static str {
    match w {
        IndependenceWitness::CertifiedIndependent => "certified-independent",
        IndependenceWitness::Inconclusive => "inconclusive",
    }
}

fn run_gabor_gram(config: &ExperimentConfig) -> Result<Report, RunError> {
    let points = config.points()?;
    let tol = config.witness_tol()?;
    let sampled;
    let window = match config.method.as_deref().unwrap_or("closed-form") {
        "closed-form" => GramWindow::Analytic(AnalyticWindow::UnitGaussian),
        "quadrature" => {
            let grid = Grid::new(config.grid_step.unwrap_or(1.0 / 512.0), config.grid_half_width.unwrap_or(8.0))
                .map_err(|e| RunError::config("grid_step", e.to_string()))?;
            sampled = AnalyticWindow::UnitGaussian.sample(grid);
            GramWindow::Sampled(&sampled)
        }
        other => return Err(RunError::config("method", format!("unknown method {other:?}"))),
    };
    let g = gram_matrix(window, &points).map_err(|e| match e {
        LabError::Numerical(_) => RunError::Lab(e),
        other => RunError::config("points", other.to_string()),
    })?;
    let w = independence_witness(&g, tol);
    let mut record = gram_json(&g, w, tol);
    record["kind"] = json!("gabor-gram");
    let mut csv = String::from("index,eigenvalue\n");
    for (i, ev) in g.eigenvalues.iter().enumerate() {
        writeln!(csv, "{i},{ev}").unwrap();
    }
    let table = format!(
        "gabor-gram: {} points, {:?}\n  min eigenvalue   {:.10}\n  condition number {:.6e}\n  witness          {}\n",
        points.len(),
        g.method,
        g.min_eigenvalue,
        g.condition_number,
        witness_name(w)
    );
    Ok(Report { kind: ExperimentKind::GaborGram, record, csv, table, status: gram_status(w) })
}

fn run_pipeline(config: &ExperimentConfig) -> Result<Report, RunError> {
    let basis = config.lattice_basis.ok_or_else(|| RunError::config("lattice_basis", "required"))?;
    let group = Group::free_abelian(2)?;
    let sigma = Cocycle::time_frequency_lattice(&group, basis.iter().map(|r| r.to_vec()).collect())
        .map_err(|e| RunError::config("lattice_basis", e.to_string()))?;
    let a = match &config.element {
        Some(_) => config.element(&group)?,
        None => RingElement::from_coords(&group, [[0, 0], [0, 1], [1, 0], [1, 1]].map(|m| (m, Complex64::new(1.0, 0.0))))?,
    };
    let tol = config.tolerances()?;
    let witness_tol = config.witness_tol()?;
    let radius = config.max_radius(4)?;

    // Gram witness on the lattice points carrying the coefficients of `a`.
    let points: Vec<TfPoint> = a
        .support()
        .iter()
        .map(|m| {
            let z = sigma.lattice_point(m).expect("lattice cocycle");
            TfPoint::new(z[0], z[1])
        })
        .collect();
    let distinct: BTreeSet<(u64, u64)> = points.iter().map(|p| (p.x.to_bits(), p.xi.to_bits())).collect();
    if distinct.len() != points.len() {
        return Err(RunError::config("lattice_basis", "basis is degenerate: distinct coefficients map to one point"));
    }
    let gram = gram_matrix(GramWindow::Analytic(AnalyticWindow::UnitGaussian), &points)?;
    let witness = independence_witness(&gram, witness_tol);

    let search = search_zero_divisor(&a, &sigma, radius, &tol)?;

    let last = search.radii.iter().rev().find(|o| o.report.is_some()).map(|o| o.radius);
    let dimension = match last {
        Some(n) => {
            let est = vn_dim_estimate(&a, &sigma, n, &tol)?;
            json!({
                "n": n,
                "folner_size": est.folner_size,
                "interior_size": est.interior_size,
                "ratio": est.interior_ratio,
                "nullity": est.nullity,
                "estimate": est.value,
            })
        }
        None => json!({"status": "empty-interior"}),
    };
    let consistent = witness == IndependenceWitness::CertifiedIndependent && search.found_at.is_none();
    let record = json!({
        "kind": "pipeline",
        "descriptor": descriptor_json(&sigma),
        "element": element_json(&a),
        "stages": {
            "gram": gram_json(&gram, witness, witness_tol),
            "kernel_search": search_json(&search),
            "dimension": dimension,
        },
        "conclusion": if consistent {
            "independent; no zero-divisor cofactor within window"
        } else if search.found_at.is_some() {
            "cofactor found"
        } else {
            "inconclusive"
        },
    });
    let mut csv = String::from("stage,quantity,value\n");
    writeln!(csv, "gram,min_eigenvalue,{}", gram.min_eigenvalue).unwrap();
    writeln!(csv, "gram,witness,{}", witness_name(witness)).unwrap();
    writeln!(csv, "kernel_search,status,{}", search.status()).unwrap();
    if let Some(n) = last {
        writeln!(csv, "dimension,radius,{n}").unwrap();
        writeln!(csv, "dimension,estimate,{}", record["stages"]["dimension"]["estimate"]).unwrap();
    }
    let table = format!(
        "pipeline on lattice {:?}\n  gram: {} points, min eigenvalue {:.6}, {}\n{}  dimension: {}\n",
        basis,
        points.len(),
        gram.min_eigenvalue,
        witness_name(witness),
        search_table(&search),
        record["stages"]["dimension"]
    );
    let status = if witness == IndependenceWitness::CertifiedIndependent { RunStatus::Success } else { RunStatus::Inconclusive };
    Ok(Report { kind: ExperimentKind::Pipeline, record, csv, table, status })
}

impl Report {
    /// Serialized report. JSON keys are sorted, so output is byte-stable.
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.record).expect("record serializes");
                s.push('\n');
                s
            }
            OutputFormat::Csv => self.csv.clone(),
        }
    }
}

/// Writes the rendered report to `path`.
pub fn emit(report: &Report, format: OutputFormat, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, report.render(format))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(kind: ExperimentKind, text: &str) -> ExperimentConfig {
        let mut c = ExperimentConfig::from_json(text).unwrap();
        c.apply(kind, &Overrides::default()).unwrap();
        c
    }

    #[test]
    fn torsion_report() {
        let c = cfg(
            ExperimentKind::TorsionConstruct,
            r#"{"group": {"kind": "cyclic_product", "params": {"orders": [4]}}, "generator": [1]}"#,
        );
        let r = run(&c).unwrap();
        assert_eq!(r.status, RunStatus::Success);
        assert_eq!(r.record["residual"], json!(0.0));
        assert_eq!(r.record["left"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn zd_search_report() {
        let c = cfg(
            ExperimentKind::ZdSearch,
            r#"{"group": {"kind": "free_abelian", "params": {"rank": 1}},
                "element": [{"coords": [0], "re": 1.0, "im": 0.0}, {"coords": [1], "re": -1.0, "im": 0.0}],
                "radius": 6}"#,
        );
        let r = run(&c).unwrap();
        assert_eq!(r.record["search"]["status"], json!("no cofactor within window"));
        let radii = r.record["search"]["radii"].as_array().unwrap();
        assert_eq!(radii.len(), 6);
        assert!(radii.iter().all(|x| x["nullity"] == json!(0) && x["kernel_basis"] == json!([])));
    }

    #[test]
    fn gram_report() {
        let c = cfg(ExperimentKind::GaborGram, r#"{"points": [[0.0, 0.0], [1.0, 0.0]]}"#);
        let r = run(&c).unwrap();
        let min = r.record["min_eigenvalue"].as_f64().unwrap();
        assert!((min - (1.0 - (-std::f64::consts::PI / 2.0).exp())).abs() < 1e-12);
        assert_eq!(r.record["witness"], json!("certified-independent"));
        assert!(r.csv.starts_with("index,eigenvalue\n"));
    }

    #[test]
    fn folner_csv_header() {
        let c = cfg(
            ExperimentKind::FolnerDim,
            r#"{"group": {"kind": "free_abelian", "params": {"rank": 1}},
                "element": [{"coords": [0], "re": 1.0, "im": 0.0}, {"coords": [1], "re": 1.0, "im": 0.0}],
                "radii": [1, 2]}"#,
        );
        let r = run(&c).unwrap();
        let mut lines = r.csv.lines();
        assert_eq!(lines.next(), Some("n,|F_n|,|int|,ratio,nullity,estimate"));
        assert_eq!(lines.next(), Some("1,3,2,0.6666666666666666,0,0"));
    }

    #[test]
    fn config_errors() {
        let c = cfg(ExperimentKind::ZdSearch, r#"{"group": {"kind": "free_abelian", "params": {"rank": 1}}}"#);
        let e = run(&c).unwrap_err();
        assert!(matches!(&e, RunError::Config { field, .. } if field == "element"));
        assert_eq!(e.status().code(), 2);
        assert!(ExperimentConfig::from_json(r#"{"bogus": 1}"#).is_err());
        let mut c = ExperimentConfig::from_json(r#"{"kind": "pipeline"}"#).unwrap();
        assert!(c.apply(ExperimentKind::ZdSearch, &Overrides::default()).is_err());
        let mut c = ExperimentConfig::default();
        let o = Overrides { radius: Some(3), ..Default::default() };
        assert!(c.apply(ExperimentKind::GaborGram, &o).is_err());
    }

    #[test]
    fn overrides_win() {
        let mut c = ExperimentConfig::from_json(r#"{"radius": 2, "radii": [1]}"#).unwrap();
        let o = Overrides { radius: Some(5), tol: Some(1e-6), out: Some("x.json".into()) };
        c.apply(ExperimentKind::FolnerDim, &o).unwrap();
        assert_eq!(c.radii().unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(c.tolerances.unwrap().rank_tol_factor, 1e-6);
        assert_eq!(c.output.as_deref(), Some("x.json"));
    }

    #[test]
    fn cocycle_check_extras() {
        let c = cfg(
            ExperimentKind::CocycleCheck,
            r#"{"group": {"kind": "free_abelian", "params": {"rank": 2}},
                "cocycle": {"family": "bicharacter", "params": {"theta": [[0.0, 0.2], [0.0, 0.0]]}},
                "samples": 10,
                "evaluate": [[[1, 0], [0, 1]]],
                "multiply": [[[{"coords": [1, 0], "re": 1.0, "im": 0.0}, {"coords": [1, 1], "re": 1.0, "im": 0.0}],
                              [{"coords": [0, 1], "re": 1.0, "im": 0.0}]]],
                "degree_weights": [1, 1],
                "commutators": true}"#,
        );
        let r = run(&c).unwrap();
        assert_eq!(r.status, RunStatus::Success);
        let v = r.record["evaluations"][0]["value"].as_array().unwrap();
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU * 0.2);
        assert!((v[0].as_f64().unwrap() - w.re).abs() < 1e-15 && (v[1].as_f64().unwrap() - w.im).abs() < 1e-15);
        let step = &r.record["products"][0]["leading_step"];
        assert_eq!((step["k"].as_i64(), step["l"].as_i64()), (Some(1), Some(1)));
        assert_eq!(step["leading_product"].as_array().unwrap().len(), 1);
        assert_eq!(step["remainder"][0]["coords"], json!([1, 2]));
        assert_eq!(r.record["commutators"][0]["verified"], json!(true));
    }

    #[test]
    fn batch_matches_serial() {
        let a = cfg(ExperimentKind::GaborGram, r#"{"points": [[0.0, 0.0], [0.5, 1.0]]}"#);
        let b = cfg(
            ExperimentKind::TorsionConstruct,
            r#"{"group": {"kind": "cyclic_product", "params": {"orders": [3]}}, "generator": [2]}"#,
        );
        let out = run_batch(&[a.clone(), b.clone()]);
        assert_eq!(out[0].as_ref().unwrap().render(OutputFormat::Json), run(&a).unwrap().render(OutputFormat::Json));
        assert_eq!(out[1].as_ref().unwrap().render(OutputFormat::Json), run(&b).unwrap().render(OutputFormat::Json));
    }
}
