//! Python bindings: the radial set type, the minimizing-movement flow driver,
//! the geometric checkers, the radial ODE oracle and the counterexample
//! tables.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use starflow::barriers::{radial_ode, RadialForcing};
use starflow::counterexamples::{annuli_family, bump_family, cone_family};
use starflow::flow::{
    equilibrium_volume, holder_fit, lambda_l2, run_flow, FlowParams, FlowTrace,
};
use starflow::geochecks::{check_rho_reflection, check_star_shaped, CheckReport};
use starflow::starset::{
    ball, flower, hausdorff_distance, pseudo_distance_sq, random_star_set, DirectionGrid,
};

fn err(e: starflow::StarflowError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn report_dict<'py>(py: Python<'py>, report: &CheckReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("name", &report.name)?;
    d.set_item("passed", report.passed)?;
    d.set_item("worst_margin", report.worst_margin)?;
    d.set_item("tolerance", report.tolerance)?;
    d.set_item("witness", report.witness.to_string())?;
    Ok(d)
}

/// Star-shaped planar set given by radii on a uniform direction grid.
#[pyclass(name = "RadialSet", frozen)]
struct PyRadialSet {
    inner: starflow::RadialSet,
}

#[pymethods]
impl PyRadialSet {
    /// Disk of radius `r` sampled on `m` directions.
    #[staticmethod]
    fn ball(m: usize, r: f64) -> Self {
        Self { inner: ball(m, r) }
    }

    /// Cosine flower `a + b cos(k theta)`.
    #[staticmethod]
    fn flower(m: usize, a: f64, b: f64, k: u32) -> Self {
        Self {
            inner: flower(m, a, b, k),
        }
    }

    /// Reproducible random star-shaped profile with radii in `[r_lo, r_hi]`.
    #[staticmethod]
    fn random(m: usize, r_lo: f64, r_hi: f64, seed: u64) -> Self {
        Self {
            inner: random_star_set(m, r_lo, r_hi, seed),
        }
    }

    /// Build from an explicit radius profile with admissible band
    /// `[r_lo, r_hi]`.
    #[staticmethod]
    fn from_radii(radii: Vec<f64>, r_lo: f64, r_hi: f64) -> PyResult<Self> {
        let grid = DirectionGrid::new(radii.len());
        Ok(Self {
            inner: starflow::RadialSet::new(grid, radii, r_lo, r_hi).map_err(err)?,
        })
    }

    fn radii(&self) -> Vec<f64> {
        self.inner.radii().to_vec()
    }

    fn volume(&self) -> f64 {
        self.inner.volume()
    }

    fn perimeter(&self) -> f64 {
        self.inner.perimeter()
    }

    fn mean_curvature(&self) -> f64 {
        self.inner.mean_curvature()
    }

    fn centroid(&self) -> (f64, f64) {
        let c = self.inner.centroid();
        (c[0], c[1])
    }

    fn min_radius(&self) -> f64 {
        self.inner.min_radius()
    }

    fn max_radius(&self) -> f64 {
        self.inner.max_radius()
    }

    fn scale(&self, a: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.scale(a).map_err(err)?,
        })
    }

    fn rescaled_to_volume(&self, target: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.rescaled_to_volume(target).map_err(err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "RadialSet(m={}, volume={:.6}, perimeter={:.6})",
            self.inner.len(),
            self.inner.volume(),
            self.inner.perimeter()
        )
    }
}

/// One completed flow: per-step statistics plus every intermediate set.
#[pyclass(name = "FlowTrace", frozen)]
struct PyFlowTrace {
    inner: FlowTrace,
}

#[pymethods]
impl PyFlowTrace {
    fn times(&self) -> Vec<f64> {
        self.inner.steps.iter().map(|s| s.t).collect()
    }

    fn volumes(&self) -> Vec<f64> {
        self.inner.steps.iter().map(|s| s.volume).collect()
    }

    fn perimeters(&self) -> Vec<f64> {
        self.inner.steps.iter().map(|s| s.perimeter).collect()
    }

    fn energies(&self) -> Vec<f64> {
        self.inner.steps.iter().map(|s| s.energy).collect()
    }

    fn lambdas(&self) -> Vec<f64> {
        self.inner.steps.iter().map(|s| s.lambda).collect()
    }

    fn set_at(&self, k: usize) -> PyResult<PyRadialSet> {
        self.inner
            .sets
            .get(k)
            .map(|s| PyRadialSet { inner: s.clone() })
            .ok_or_else(|| PyValueError::new_err(format!("step {k} out of range")))
    }

    fn last(&self) -> PyRadialSet {
        PyRadialSet {
            inner: self.inner.last().clone(),
        }
    }

    /// `||lambda||^2_{L^2}` over `[t0, t0 + T]`.
    fn lambda_l2(&self, t0: f64, t: f64) -> f64 {
        lambda_l2(&self.inner, t0, t)
    }

    /// Time-regularity fit: `(exponent, constant)` of the 1/3-Holder bound.
    fn holder_fit(&self) -> (f64, f64) {
        let f = holder_fit(&self.inner);
        (f.exponent, f.constant)
    }

    fn __len__(&self) -> usize {
        self.inner.sets.len()
    }
}

/// Run the constrained minimizing-movement flow from `initial`.
#[pyfunction]
#[pyo3(signature = (initial, delta, h, t_end, r0=0.3, big_r0=2.5, rho=0.08,
                    inner_tol=1e-7, max_inner_iters=500, enforce_unit_volume=true,
                    strict_guards=false))]
#[allow(clippy::too_many_arguments)]
fn flow(
    initial: &PyRadialSet,
    delta: f64,
    h: f64,
    t_end: f64,
    r0: f64,
    big_r0: f64,
    rho: f64,
    inner_tol: f64,
    max_inner_iters: usize,
    enforce_unit_volume: bool,
    strict_guards: bool,
) -> PyResult<PyFlowTrace> {
    let params = FlowParams {
        delta,
        h,
        r0,
        big_r0,
        rho,
        t_end,
        m: initial.inner.len(),
        inner_tol,
        max_inner_iters,
        enforce_unit_volume,
        strict_guards,
    };
    params.validate().map_err(err)?;
    let start = if enforce_unit_volume {
        initial.inner.rescaled_to_volume(1.0).map_err(err)?
    } else {
        initial.inner.clone()
    };
    Ok(PyFlowTrace {
        inner: run_flow(&start, &params).map_err(err)?,
    })
}

/// Star-shape support check: `x . n >= r0` along the boundary.
#[pyfunction]
fn star_shaped<'py>(
    py: Python<'py>,
    set: &PyRadialSet,
    r0: f64,
) -> PyResult<Bound<'py, PyDict>> {
    report_dict(py, &check_star_shaped(&set.inner, r0))
}

/// Reflection check: every plane at offset beyond `rho` reflects the far
/// side into the set, sampled on `planes` normal directions.
#[pyfunction]
fn rho_reflection<'py>(
    py: Python<'py>,
    set: &PyRadialSet,
    rho: f64,
    planes: usize,
) -> PyResult<Bound<'py, PyDict>> {
    report_dict(py, &check_rho_reflection(&set.inner, rho, planes))
}

/// Boundary Hausdorff distance between two sets.
#[pyfunction]
fn hausdorff(a: &PyRadialSet, b: &PyRadialSet) -> f64 {
    hausdorff_distance(&a.inner, &b.inner)
}

/// Movement term `d~^2(F, E)`: the integral over the symmetric difference of
/// the distance to the boundary of `e`.
#[pyfunction]
fn movement_sq(f: &PyRadialSet, e: &PyRadialSet) -> f64 {
    pseudo_distance_sq(&f.inner, &e.inner)
}

/// Integrate the radial comparison ODE `r' = -1/r + (1 - pi r^2)/delta` and
/// return `(t, r)` samples.
#[pyfunction]
fn oracle(r0: f64, delta: f64, t_end: f64, dt: f64) -> PyResult<Vec<(f64, f64)>> {
    radial_ode(r0, &RadialForcing::Penalty { delta }, t_end, dt).map_err(err)
}

/// Stationary area of the penalized flow at a given `delta`.
#[pyfunction]
fn stationary_area(delta: f64) -> f64 {
    equilibrium_volume(delta)
}

/// Metrics of the perforated-annuli family with `n` holes.
#[pyfunction]
fn annuli<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyDict>> {
    let m = annuli_family(n).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("holes", m.holes)?;
    d.set_item("total_curvature", m.total_curvature)?;
    d.set_item("perimeter", m.perimeter)?;
    d.set_item("area", m.area)?;
    Ok(d)
}

/// Metrics of the cube-with-caps family with `n` bumps.
#[pyfunction]
fn bumps<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyDict>> {
    let m = bump_family(n);
    let d = PyDict::new(py);
    d.set_item("bumps", m.bumps)?;
    d.set_item("total_curvature", m.total_curvature)?;
    d.set_item("perimeter", m.perimeter)?;
    d.set_item("volume", m.volume)?;
    Ok(d)
}

/// Metrics of the thin-spike family at aperture `epsilon`.
#[pyfunction]
fn cone<'py>(py: Python<'py>, epsilon: f64) -> PyResult<Bound<'py, PyDict>> {
    let m = cone_family(epsilon);
    let d = PyDict::new(py);
    d.set_item("epsilon", m.epsilon)?;
    d.set_item("hausdorff", m.hausdorff)?;
    d.set_item("sym_diff", m.sym_diff)?;
    d.set_item("dtilde_sq", m.dtilde_sq)?;
    d.set_item("ratio", m.ratio)?;
    Ok(d)
}

#[pymodule]
fn starflow_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRadialSet>()?;
    m.add_class::<PyFlowTrace>()?;
    m.add_function(wrap_pyfunction!(flow, m)?)?;
    m.add_function(wrap_pyfunction!(star_shaped, m)?)?;
    m.add_function(wrap_pyfunction!(rho_reflection, m)?)?;
    m.add_function(wrap_pyfunction!(hausdorff, m)?)?;
    m.add_function(wrap_pyfunction!(movement_sq, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(stationary_area, m)?)?;
    m.add_function(wrap_pyfunction!(annuli, m)?)?;
    m.add_function(wrap_pyfunction!(bumps, m)?)?;
    m.add_function(wrap_pyfunction!(cone, m)?)?;
    Ok(())
}
