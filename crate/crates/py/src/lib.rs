//! Python bindings for `spv_core`.
//!
//! Points and directions are lists of complex numbers (floats are accepted),
//! multi-indexes are lists of ints, reports come back as plain dicts.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;

use spv_core::bounds::{self, Check, InequalityId};
use spv_core::geometry::{self, JacobianAt, SharpnessParams};
use spv_core::harness::{self, MapKind, Suite, SuiteConfig, SweepFamily};
use spv_core::holomap;
use spv_core::linalg::CVec;
use spv_core::{BallPoint, Direction, MultiIndex, QuadratureSpec};

fn err(e: spv_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn cvec(v: Vec<Complex64>) -> CVec {
    CVec::from_vec(v)
}

fn point(v: Vec<Complex64>) -> PyResult<BallPoint> {
    BallPoint::new(cvec(v)).map_err(err)
}

fn direction(v: Vec<Complex64>) -> PyResult<Direction> {
    Direction::new(cvec(v)).map_err(err)
}

fn to_list(v: &CVec) -> Vec<Complex64> {
    v.iter().copied().collect()
}

fn from_json<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse<T: serde::de::DeserializeOwned>(what: &str, name: &str) -> PyResult<T> {
    serde_json::from_value(serde_json::Value::String(name.to_string()))
        .map_err(|_| PyValueError::new_err(format!("unknown {what} {name:?}")))
}

/// A polynomial map given by its coefficient table.
#[pyclass(name = "PolyMap", module = "spv", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPolyMap(holomap::PolyMap);

#[pymethods]
impl PyPolyMap {
    /// `terms` is a list of `(alpha, coefficient_vector)` pairs.
    #[new]
    fn new(n: usize, m: usize, terms: Vec<(Vec<u32>, Vec<Complex64>)>) -> PyResult<Self> {
        let terms = terms.into_iter().map(|(a, c)| (MultiIndex::new(a), cvec(c)));
        holomap::PolyMap::from_terms(n, m, terms).map(PyPolyMap).map_err(err)
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        PyPolyMap(holomap::PolyMap::identity(n))
    }

    /// Seeded draw with `sum |a_alpha| = 1 - margin`.
    #[staticmethod]
    #[pyo3(signature = (n, m, degree, seed, margin = 0.05))]
    fn random(n: usize, m: usize, degree: u32, seed: u64, margin: f64) -> PyResult<Self> {
        holomap::random_polymap(n, m, degree, seed, margin).map(PyPolyMap).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        holomap::PolyMap::from_json(text).map(PyPolyMap).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.domain_dim()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.codomain_dim()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.0.degree()
    }

    /// `sum |a_alpha|`; at most one certifies that the map sends the ball into the ball.
    fn certificate_sum(&self) -> f64 {
        self.0.certificate_sum()
    }

    fn coefficient(&self, alpha: Vec<u32>) -> Vec<Complex64> {
        to_list(&self.0.coefficient(&MultiIndex::new(alpha)))
    }

    fn eval(&self, z: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        self.map().eval(z)
    }

    /// The same map as a `HoloMap`.
    fn map(&self) -> PyHoloMap {
        PyHoloMap(self.0.clone().into())
    }

    /// Residuals of the coefficient inequalities for index `v` and unit direction `beta`.
    fn coefficient_checks<'py>(
        &self,
        py: Python<'py>,
        v: Vec<u32>,
        beta: Vec<Complex64>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let r = holomap::coefficient_checks(&self.0, &MultiIndex::new(v), &cvec(beta)).map_err(err)?;
        from_json(py, &r)
    }

    fn __repr__(&self) -> String {
        format!("PolyMap(n={}, m={}, degree={})", self.0.domain_dim(), self.0.codomain_dim(), self.0.degree())
    }
}

/// A holomorphic self-map of balls: a polynomial, a closed-form family, or
/// an automorphism composed after another map.
#[pyclass(name = "HoloMap", module = "spv", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyHoloMap(holomap::HoloMap);

#[pymethods]
impl PyHoloMap {
    #[staticmethod]
    fn automorphism(a: Vec<Complex64>) -> PyResult<Self> {
        let a = point(a)?;
        Ok(PyHoloMap(holomap::HoloMap::Family(holomap::ClosedForm::Automorphism(
            geometry::Automorphism::new(a),
        ))))
    }

    /// The extremal map at the origin with `f(0) = a0`, its coefficient at `v`
    /// on the ray of `u`.
    #[staticmethod]
    fn extremal_origin(a0: Vec<Complex64>, u: Vec<Complex64>, v: Vec<u32>) -> PyResult<Self> {
        let a0 = point(a0)?;
        let v = MultiIndex::new(v);
        let av = geometry::extremal_origin_coefficient(&a0, &cvec(u), &v).map_err(err)?;
        geometry::extremal_origin_map(&a0, &av, &v).map(PyHoloMap).map_err(err)
    }

    /// The first-order extremal map through `f(xi) = w0`; `isometry` is an
    /// `m x n` matrix (list of rows) with orthonormal columns.
    #[staticmethod]
    fn extremal_k1(
        xi: Vec<Complex64>,
        w0: Vec<Complex64>,
        isometry: Vec<Vec<Complex64>>,
    ) -> PyResult<Self> {
        let (xi, w0) = (point(xi)?, point(w0)?);
        let rows = isometry.len();
        let cols = isometry.first().map_or(0, Vec::len);
        if isometry.iter().any(|r| r.len() != cols) {
            return Err(PyValueError::new_err("isometry rows differ in length"));
        }
        let u = spv_core::linalg::CMat::from_fn(rows, cols, |i, j| isometry[i][j]);
        let jac = geometry::extremal_k1_jacobian(&xi, &w0, &u).map_err(err)?;
        geometry::extremal_k1_map(&xi, &w0, &jac).map(PyHoloMap).map_err(err)
    }

    /// Disk-to-ball sharpness family, `n = 1`.
    #[staticmethod]
    fn sharp_disk(xi: Complex64, w: Vec<Complex64>) -> PyResult<Self> {
        geometry::sharpness_family(SharpnessParams::Disk { xi, w: cvec(w) }).map(PyHoloMap).map_err(err)
    }

    /// Power sharpness family, `m = 1`, `xi` on the first axis.
    #[staticmethod]
    fn sharp_power(v: Vec<u32>, xi: Vec<Complex64>, w: Complex64) -> PyResult<Self> {
        let params = SharpnessParams::Power {
            v: MultiIndex::new(v),
            xi: point(xi)?,
            w,
        };
        geometry::sharpness_family(params).map(PyHoloMap).map_err(err)
    }

    /// First-axis sharpness family, `m = 1`.
    #[staticmethod]
    fn sharp_axis(xi: Vec<Complex64>, w: Complex64) -> PyResult<Self> {
        geometry::sharpness_family(SharpnessParams::Axis { xi: point(xi)?, w }).map(PyHoloMap).map_err(err)
    }

    /// `phi_a o self`.
    fn compose_automorphism(&self, a: Vec<Complex64>) -> PyResult<Self> {
        holomap::compose_ball_automorphism(&point(a)?, self.0.clone()).map(PyHoloMap).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.domain_dim()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.codomain_dim()
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label()
    }

    fn eval(&self, z: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        self.0.eval(&point(z)?).map(|w| to_list(&w)).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("HoloMap({}, n={}, m={})", self.0.label(), self.0.domain_dim(), self.0.codomain_dim())
    }
}

/// Accepts either a `HoloMap` or a `PolyMap`.
fn holo(f: &Bound<'_, PyAny>) -> PyResult<holomap::HoloMap> {
    if let Ok(h) = f.cast::<PyHoloMap>() {
        return Ok(h.get().0.clone());
    }
    if let Ok(p) = f.cast::<PyPolyMap>() {
        return Ok(p.get().0.clone().into());
    }
    Err(PyValueError::new_err("expected a HoloMap or a PolyMap"))
}

fn spec_at(z: &BallPoint, nodes: Option<usize>) -> PyResult<QuadratureSpec> {
    let spec = QuadratureSpec::default_at(z);
    match nodes {
        Some(n) => spec.with_nodes(n).map_err(err),
        None => Ok(spec),
    }
}

/// `H_z(beta, beta)`.
#[pyfunction]
fn bergman_metric(z: Vec<Complex64>, beta: Vec<Complex64>) -> PyResult<f64> {
    Ok(geometry::bergman_metric(&point(z)?, &cvec(beta)))
}

/// `phi_a(w)`.
#[pyfunction]
fn moebius_apply(a: Vec<Complex64>, w: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    let phi = geometry::Automorphism::new(point(a)?);
    geometry::moebius_apply(&phi, &point(w)?).map(|p| to_list(p.coords())).map_err(err)
}

/// Jacobian of `phi_a` at `"origin"` or `"center"` (the point `a`), as rows.
#[pyfunction]
#[pyo3(signature = (a, at = "center"))]
fn moebius_jacobian(a: Vec<Complex64>, at: &str) -> PyResult<Vec<Vec<Complex64>>> {
    let at: JacobianAt = parse("jacobian location", at)?;
    let j = geometry::moebius_jacobian(&geometry::Automorphism::new(point(a)?), at);
    Ok((0..j.nrows()).map(|i| j.row(i).iter().copied().collect()).collect())
}

/// `d^v f(z)` by torus quadrature.
#[pyfunction]
#[pyo3(signature = (f, z, v, nodes = None))]
fn partial_derivative(
    f: &Bound<'_, PyAny>,
    z: Vec<Complex64>,
    v: Vec<u32>,
    nodes: Option<usize>,
) -> PyResult<Vec<Complex64>> {
    let (f, z) = (holo(f)?, point(z)?);
    let spec = spec_at(&z, nodes)?;
    spv_core::partial_derivative(&f, &z, &MultiIndex::new(v), &spec)
        .map(|d| to_list(&d.value))
        .map_err(err)
}

/// `(D_k f(z) beta, route gap)`, the multi-index sum checked against the line route.
#[pyfunction]
#[pyo3(signature = (f, z, beta, k, nodes = None))]
fn frechet_derivative(
    f: &Bound<'_, PyAny>,
    z: Vec<Complex64>,
    beta: Vec<Complex64>,
    k: u32,
    nodes: Option<usize>,
) -> PyResult<(Vec<Complex64>, f64)> {
    let (f, z) = (holo(f)?, point(z)?);
    let spec = spec_at(&z, nodes)?;
    let d = spv_core::frechet_derivative(&f, &z, &direction(beta)?, k, &spec).map_err(err)?;
    Ok((to_list(&d.value), d.route_gap.unwrap_or(0.0)))
}

/// Taylor coefficient `a_v` at the origin.
#[pyfunction]
fn taylor_coefficient(f: &Bound<'_, PyAny>, v: Vec<u32>) -> PyResult<Vec<Complex64>> {
    let f = holo(f)?;
    let spec = QuadratureSpec::default_at(&BallPoint::origin(f.domain_dim()));
    spv_core::taylor_coefficient(&f, &MultiIndex::new(v), &spec)
        .map(|a| to_list(&a))
        .map_err(err)
}

#[pyfunction]
fn lhs_quadratic(d: Vec<Complex64>, w: Vec<Complex64>) -> f64 {
    bounds::lhs_quadratic(&cvec(d), &cvec(w))
}

#[pyfunction]
fn rhs_main(k: u32, z: Vec<Complex64>, beta: Vec<Complex64>) -> PyResult<f64> {
    Ok(bounds::rhs_main(k, &point(z)?, &direction(beta)?))
}

#[pyfunction]
fn rhs_disk(k: u32, z_norm: f64, fz_norm: f64) -> f64 {
    bounds::rhs_disk(k, z_norm, fz_norm)
}

#[pyfunction]
fn rhs_partial<'py>(py: Python<'py>, v: Vec<u32>, z_norm: f64, fz_norm: f64) -> PyResult<Bound<'py, PyAny>> {
    from_json(py, &bounds::rhs_partial(&MultiIndex::new(v), z_norm, fz_norm).map_err(err)?)
}

#[pyfunction]
fn rhs_radial(v: Vec<u32>, z: Vec<Complex64>, fz_norm: f64) -> PyResult<f64> {
    bounds::rhs_radial(&MultiIndex::new(v), &point(z)?, fz_norm).map_err(err)
}

#[pyfunction]
fn rhs_origin<'py>(py: Python<'py>, v: Vec<u32>, a0_norm: f64) -> PyResult<Bound<'py, PyAny>> {
    from_json(py, &bounds::rhs_origin(&MultiIndex::new(v), a0_norm).map_err(err)?)
}

/// Moduli of the `A_j` terms, their sum and its closed form. With `v` the
/// first-axis variant is used, otherwise the disk one.
#[pyfunction]
#[pyo3(signature = (k, xi, v = None))]
fn aj_coefficients<'py>(
    py: Python<'py>,
    k: u32,
    xi: Complex64,
    v: Option<Vec<u32>>,
) -> PyResult<Bound<'py, PyAny>> {
    let variant = match v {
        Some(v) => bounds::AjVariant::Radial(MultiIndex::new(v)),
        None => bounds::AjVariant::Disk,
    };
    let t = bounds::aj_coefficients(k, xi, &variant).map_err(err)?;
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("first", t.first)?;
    dict.set_item("moduli", t.moduli)?;
    dict.set_item("sum", t.sum)?;
    dict.set_item("closed_form", t.closed_form)?;
    Ok(dict.into_any())
}

/// Evaluates one inequality, named by its id (`"1.4"` and so on), at `z`.
#[pyfunction]
#[pyo3(signature = (f, z, inequality, k = None, v = None, beta = None))]
fn check_inequality<'py>(
    py: Python<'py>,
    f: &Bound<'_, PyAny>,
    z: Vec<Complex64>,
    inequality: &str,
    k: Option<u32>,
    v: Option<Vec<u32>>,
    beta: Option<Vec<Complex64>>,
) -> PyResult<Bound<'py, PyAny>> {
    let id: InequalityId = inequality.parse().map_err(err)?;
    let need_k = || k.ok_or_else(|| PyValueError::new_err(format!("{id} needs k")));
    let need_v = || {
        v.clone()
            .map(MultiIndex::new)
            .ok_or_else(|| PyValueError::new_err(format!("{id} needs v")))
    };
    let need_beta = || match &beta {
        Some(b) => direction(b.clone()),
        None => Err(PyValueError::new_err(format!("{id} needs beta"))),
    };
    let check = match id {
        InequalityId::ModulusDisk => Check::ModulusDisk { k: need_k()? },
        InequalityId::PartialBaseline => Check::PartialBaseline { v: need_v()? },
        InequalityId::FirstOrder => Check::FirstOrder { beta: need_beta()? },
        InequalityId::Frechet => Check::Frechet { beta: need_beta()?, k: need_k()? },
        InequalityId::OriginDirectional => Check::OriginDirectional { beta: need_beta()?, k: need_k()? },
        InequalityId::OriginCoefficient => Check::OriginCoefficient { v: need_v()? },
        InequalityId::DiskQuadratic => Check::DiskQuadratic { k: need_k()? },
        InequalityId::PartialQuadratic => Check::PartialQuadratic { v: need_v()? },
        InequalityId::PartialModulus => Check::PartialModulus { v: need_v()? },
        InequalityId::RadialQuadratic => Check::RadialQuadratic { v: need_v()? },
    };
    let report = bounds::check_inequality(&holo(f)?, &point(z)?, &check).map_err(err)?;
    from_json(py, &report)
}

/// Runs a suite and returns the report as a JSON string.
#[pyfunction]
#[pyo3(signature = (
    suite = "main", n = 2, m = 2, samples = 100, degree = 4, k_max = 3, seed = 42,
    tol = 1e-8, max_radius = 0.9, maps = None, families = None, radii = None, xi = None,
))]
#[allow(clippy::too_many_arguments)]
fn run_suite(
    py: Python<'_>,
    suite: &str,
    n: usize,
    m: usize,
    samples: u64,
    degree: u32,
    k_max: u32,
    seed: u64,
    tol: f64,
    max_radius: f64,
    maps: Option<Vec<String>>,
    families: Option<Vec<String>>,
    radii: Option<Vec<f64>>,
    xi: Option<Vec<f64>>,
) -> PyResult<String> {
    let suite: Suite = parse("suite", suite)?;
    let defaults = SuiteConfig::default();
    let maps = maps
        .unwrap_or_default()
        .iter()
        .map(|s| parse::<MapKind>("map kind", s))
        .collect::<PyResult<Vec<_>>>()?;
    let families = families
        .unwrap_or_default()
        .iter()
        .map(|s| parse::<SweepFamily>("sweep family", s))
        .collect::<PyResult<Vec<_>>>()?;
    let config = SuiteConfig {
        suite,
        n,
        m,
        samples,
        degree,
        k_max,
        seed,
        tol,
        max_radius,
        maps,
        families,
        radii: radii.unwrap_or(defaults.radii.clone()),
        xi: xi.unwrap_or(defaults.xi.clone()),
        ..defaults
    };
    let report = py.detach(|| harness::run(&config)).map_err(err)?;
    Ok(report.to_json())
}

#[pymodule]
fn spv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolyMap>()?;
    m.add_class::<PyHoloMap>()?;
    m.add_function(wrap_pyfunction!(bergman_metric, m)?)?;
    m.add_function(wrap_pyfunction!(moebius_apply, m)?)?;
    m.add_function(wrap_pyfunction!(moebius_jacobian, m)?)?;
    m.add_function(wrap_pyfunction!(partial_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(frechet_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(taylor_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(lhs_quadratic, m)?)?;
    m.add_function(wrap_pyfunction!(rhs_main, m)?)?;
    m.add_function(wrap_pyfunction!(rhs_disk, m)?)?;
    m.add_function(wrap_pyfunction!(rhs_partial, m)?)?;
    m.add_function(wrap_pyfunction!(rhs_radial, m)?)?;
    m.add_function(wrap_pyfunction!(rhs_origin, m)?)?;
    m.add_function(wrap_pyfunction!(aj_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(check_inequality, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
