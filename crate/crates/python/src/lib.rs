use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use twisted_ring_lab as lab;
use twisted_ring_lab::experiment::{self, ExperimentConfig, ExperimentKind, OutputFormat, Overrides};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Group", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyGroup(lab::Group);

#[pymethods]
impl PyGroup {
    #[staticmethod]
    fn free_abelian(rank: usize) -> PyResult<Self> {
        lab::Group::free_abelian(rank).map(Self).map_err(err)
    }

    #[staticmethod]
    fn cyclic_product(orders: Vec<i64>) -> PyResult<Self> {
        lab::Group::cyclic_product(orders).map(Self).map_err(err)
    }

    #[staticmethod]
    fn heisenberg3() -> Self {
        Self(lab::Group::heisenberg3())
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    #[getter]
    fn order(&self) -> Option<usize> {
        self.0.order()
    }

    fn compose(&self, g: Vec<i64>, h: Vec<i64>) -> PyResult<Vec<i64>> {
        let (g, h) = (self.0.point(g).map_err(err)?, self.0.point(h).map_err(err)?);
        self.0.compose(&g, &h).map(|p| p.into_coords()).map_err(err)
    }

    fn inverse(&self, g: Vec<i64>) -> PyResult<Vec<i64>> {
        let g = self.0.point(g).map_err(err)?;
        self.0.inverse(&g).map(|p| p.into_coords()).map_err(err)
    }

    fn element_order(&self, g: Vec<i64>) -> PyResult<Option<u64>> {
        let g = self.0.point(g).map_err(err)?;
        self.0.element_order(&g).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Group({})", self.0)
    }
}

#[pyclass(name = "Cocycle", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCocycle(lab::Cocycle);

#[pymethods]
impl PyCocycle {
    #[staticmethod]
    fn trivial(group: &PyGroup) -> Self {
        Self(lab::Cocycle::trivial(&group.0))
    }

    #[staticmethod]
    fn bicharacter(group: &PyGroup, theta: Vec<Vec<f64>>) -> PyResult<Self> {
        lab::Cocycle::bicharacter(&group.0, theta).map(Self).map_err(err)
    }

    #[staticmethod]
    fn time_frequency_lattice(group: &PyGroup, basis: Vec<Vec<f64>>) -> PyResult<Self> {
        lab::Cocycle::time_frequency_lattice(&group.0, basis).map(Self).map_err(err)
    }

    #[staticmethod]
    fn cyclic_root(group: &PyGroup, numerators: Vec<Vec<i64>>, denominator: i64) -> PyResult<Self> {
        lab::Cocycle::cyclic_root_form(&group.0, numerators, denominator).map(Self).map_err(err)
    }

    /// Builds a cocycle from a JSON group/cocycle descriptor.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let d = lab::Descriptor::from_json(text).map_err(err)?;
        d.build().map(|(_, s)| Self(s)).map_err(err)
    }

    fn to_json(&self) -> String {
        lab::Descriptor::of(&self.0).to_json()
    }

    #[getter]
    fn group(&self) -> PyGroup {
        PyGroup(self.0.group().clone())
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.0.family().label()
    }

    fn eval(&self, g: Vec<i64>, h: Vec<i64>) -> PyResult<Complex64> {
        let group = self.0.group();
        let (g, h) = (group.point(g).map_err(err)?, group.point(h).map_err(err)?);
        self.0.eval(&g, &h).map_err(err)
    }

    #[pyo3(signature = (samples = 1000, seed = 0, radius = 3))]
    fn check<'py>(&self, py: Python<'py>, samples: usize, seed: u64, radius: i64) -> PyResult<Bound<'py, PyDict>> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let triples = lab::random_triples(self.0.group(), samples, radius, &mut rng);
        let r = self.0.check(&triples).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("samples", r.samples)?;
        d.set_item("max_deviation", r.max_deviation)?;
        d.set_item("identity_ok", r.identity_ok)?;
        d.set_item("normalization_deviation", r.normalization_deviation)?;
        d.set_item("passed", r.passed)?;
        Ok(d)
    }
}

#[pyclass(name = "RingElement", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRingElement(lab::RingElement);

#[pymethods]
impl PyRingElement {
    /// `terms` is a list of `(coords, coefficient)` pairs; repeated points add.
    #[new]
    fn new(group: &PyGroup, terms: Vec<(Vec<i64>, Complex64)>) -> PyResult<Self> {
        lab::RingElement::from_coords(&group.0, terms).map(Self).map_err(err)
    }

    #[staticmethod]
    fn unit(group: &PyGroup) -> Self {
        Self(lab::RingElement::unit(&group.0))
    }

    #[getter]
    fn group(&self) -> PyGroup {
        PyGroup(self.0.group().clone())
    }

    fn terms(&self) -> Vec<(Vec<i64>, Complex64)> {
        self.0.terms().iter().map(|(p, c)| (p.coords().to_vec(), *c)).collect()
    }

    fn support(&self) -> Vec<Vec<i64>> {
        self.0.support().into_iter().map(|p| p.into_coords()).collect()
    }

    fn coeff(&self, coords: Vec<i64>) -> PyResult<Complex64> {
        Ok(self.0.coeff(&self.0.group().point(coords).map_err(err)?))
    }

    #[pyo3(signature = (tol = 1e-10))]
    fn is_zero(&self, tol: f64) -> bool {
        self.0.is_zero(tol)
    }

    fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    fn __add__(&self, other: &PyRingElement) -> PyResult<Self> {
        self.0.add(&other.0).map(Self).map_err(err)
    }

    fn __sub__(&self, other: &PyRingElement) -> PyResult<Self> {
        self.0.sub(&other.0).map(Self).map_err(err)
    }

    fn scale(&self, c: Complex64) -> Self {
        Self(self.0.scale(c))
    }

    fn __len__(&self) -> usize {
        self.0.support_size()
    }

    fn __repr__(&self) -> String {
        format!("RingElement({})", self.0)
    }
}

fn tolerances(zero_tol: f64, rank_tol_factor: f64) -> PyResult<lab::ToleranceConfig> {
    lab::ToleranceConfig::new(zero_tol, rank_tol_factor).map_err(err)
}

fn elements(list: &[lab::RingElement]) -> Vec<PyRingElement> {
    list.iter().cloned().map(PyRingElement).collect()
}

#[pyfunction]
fn convolve(a: &PyRingElement, b: &PyRingElement, sigma: &PyCocycle) -> PyResult<PyRingElement> {
    lab::convolve(&a.0, &b.0, &sigma.0).map(PyRingElement).map_err(err)
}

#[pyfunction]
fn power(a: &PyRingElement, n: u32, sigma: &PyCocycle) -> PyResult<PyRingElement> {
    lab::power(&a.0, n, &sigma.0).map(PyRingElement).map_err(err)
}

#[pyfunction]
fn torsion_zero_divisor<'py>(py: Python<'py>, generator: Vec<i64>, sigma: &PyCocycle) -> PyResult<Bound<'py, PyDict>> {
    let g = sigma.0.group().point(generator).map_err(err)?;
    let t = lab::torsion_zero_divisor(&g, &sigma.0).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("order", t.order)?;
    d.set_item("alpha", t.alpha)?;
    d.set_item("root", t.root)?;
    d.set_item("left", PyRingElement(t.left))?;
    d.set_item("right", PyRingElement(t.right))?;
    d.set_item("residual", t.residual)?;
    d.set_item("float_residual", t.float_residual)?;
    d.set_item("exact_zero", t.exact_zero)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (a, sigma, radius, zero_tol = 1e-10, rank_tol_factor = 1e-8))]
fn kernel_search<'py>(
    py: Python<'py>,
    a: &PyRingElement,
    sigma: &PyCocycle,
    radius: usize,
    zero_tol: f64,
    rank_tol_factor: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let window = lab::WindowSpec::new(radius).map_err(err)?;
    let r = lab::kernel_search(&a.0, &sigma.0, &window, &tolerances(zero_tol, rank_tol_factor)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("radius", r.radius)?;
    d.set_item("window_size", r.window_size)?;
    d.set_item("interior_size", r.interior_size)?;
    d.set_item("rank", r.rank)?;
    d.set_item("nullity", r.nullity)?;
    d.set_item("singular_values", r.singular_values.clone())?;
    d.set_item("kernel_basis", elements(&r.kernel_basis))?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (a, sigma, max_radius, zero_tol = 1e-10, rank_tol_factor = 1e-8))]
fn search_zero_divisor(
    a: &PyRingElement,
    sigma: &PyCocycle,
    max_radius: usize,
    zero_tol: f64,
    rank_tol_factor: f64,
) -> PyResult<(Option<usize>, Option<PyRingElement>)> {
    let s = lab::search_zero_divisor(&a.0, &sigma.0, max_radius, &tolerances(zero_tol, rank_tol_factor)?)
        .map_err(err)?;
    Ok((s.found_at, s.cofactor().cloned().map(PyRingElement)))
}

#[pyfunction]
#[pyo3(signature = (a, sigma, n, zero_tol = 1e-10, rank_tol_factor = 1e-8))]
fn vn_dim_estimate<'py>(
    py: Python<'py>,
    a: &PyRingElement,
    sigma: &PyCocycle,
    n: usize,
    zero_tol: f64,
    rank_tol_factor: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let e = lab::vn_dim_estimate(&a.0, &sigma.0, n, &tolerances(zero_tol, rank_tol_factor)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n", e.radius)?;
    d.set_item("folner_size", e.folner_size)?;
    d.set_item("interior_size", e.interior_size)?;
    d.set_item("ratio", e.interior_ratio)?;
    d.set_item("nullity", e.nullity)?;
    d.set_item("value", e.value)?;
    d.set_item("projection_average", e.projection_average)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (a, sigma, n, zero_tol = 1e-10, rank_tol_factor = 1e-8))]
fn rank_nullity_check(
    a: &PyRingElement,
    sigma: &PyCocycle,
    n: usize,
    zero_tol: f64,
    rank_tol_factor: f64,
) -> PyResult<(usize, usize, usize, bool)> {
    let r = lab::rank_nullity_check(&a.0, &sigma.0, n, &tolerances(zero_tol, rank_tol_factor)?).map_err(err)?;
    Ok((r.nullity, r.rank, r.interior_size, r.passed))
}

/// Gram matrix of the unit Gaussian's translates at `points`.
#[pyfunction]
#[pyo3(signature = (points, method = "closed-form", witness_tol = 1e-6))]
fn gram_matrix<'py>(
    py: Python<'py>,
    points: Vec<(f64, f64)>,
    method: &str,
    witness_tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let pts: Vec<lab::TfPoint> = points.iter().map(|&(x, xi)| lab::TfPoint::new(x, xi)).collect();
    let sampled;
    let window = match method {
        "closed-form" => lab::GramWindow::Analytic(lab::AnalyticWindow::UnitGaussian),
        "quadrature" => {
            sampled = lab::AnalyticWindow::UnitGaussian.sample(lab::Grid::default());
            lab::GramWindow::Sampled(&sampled)
        }
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    };
    let g = lab::gram_matrix(window, &pts).map_err(err)?;
    let rows: Vec<Vec<Complex64>> =
        (0..g.matrix.nrows()).map(|i| (0..g.matrix.ncols()).map(|j| g.matrix[(i, j)]).collect()).collect();
    let d = PyDict::new(py);
    d.set_item("matrix", rows)?;
    d.set_item("eigenvalues", g.eigenvalues.clone())?;
    d.set_item("min_eigenvalue", g.min_eigenvalue)?;
    d.set_item("condition_number", g.condition_number)?;
    let witness = match lab::independence_witness(&g, witness_tol) {
        lab::IndependenceWitness::CertifiedIndependent => "certified-independent",
        lab::IndependenceWitness::Inconclusive => "inconclusive",
    };
    d.set_item("witness", witness)?;
    Ok(d)
}

/// Runs a CLI experiment from its JSON config; returns `(exit_status, json)`.
#[pyfunction]
fn run_experiment(kind: &str, config_json: &str) -> PyResult<(i32, String)> {
    let kind: ExperimentKind = serde_json::from_value(serde_json::Value::String(kind.to_string())).map_err(err)?;
    let mut config = ExperimentConfig::from_json(config_json).map_err(err)?;
    config.apply(kind, &Overrides::default()).map_err(err)?;
    let report = experiment::run(&config).map_err(err)?;
    Ok((report.status.code(), report.render(OutputFormat::Json)))
}

#[pymodule]
fn twlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyCocycle>()?;
    m.add_class::<PyRingElement>()?;
    m.add_function(wrap_pyfunction!(convolve, m)?)?;
    m.add_function(wrap_pyfunction!(power, m)?)?;
    m.add_function(wrap_pyfunction!(torsion_zero_divisor, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_search, m)?)?;
    m.add_function(wrap_pyfunction!(search_zero_divisor, m)?)?;
    m.add_function(wrap_pyfunction!(vn_dim_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(rank_nullity_check, m)?)?;
    m.add_function(wrap_pyfunction!(gram_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
