//! Python bindings: tensors, frames, family constructors and the classifier.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use curv4::quaternion::{Quaternion, QuatPair, UnitQuaternion};
use curv4::tensor_file::{read_tensor, write_tensor, Layout};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fixed<const N: usize>(name: &str, v: Vec<f64>) -> PyResult<[f64; N]> {
    let n = v.len();
    v.try_into().map_err(|_| PyValueError::new_err(format!("{name} must have {N} entries, got {n}")))
}

fn square<const N: usize>(name: &str, rows: Vec<Vec<f64>>) -> PyResult<[[f64; N]; N]> {
    let n = rows.len();
    let rows: Vec<[f64; N]> = rows.into_iter().map(|r| fixed(name, r)).collect::<PyResult<_>>()?;
    rows.try_into().map_err(|_| PyValueError::new_err(format!("{name} must have {N} rows, got {n}")))
}

fn rows<const N: usize>(m: &[[f64; N]; N]) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.to_vec()).collect()
}

fn to_python(py: Python<'_>, value: &impl serde::Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pyclass(name = "Frame", module = "curv4py", frozen)]
struct PyFrame(curv4::Frame);

#[pymethods]
impl PyFrame {
    /// Frame from a 4×4 matrix whose columns are the frame vectors.
    #[new]
    fn new(matrix: Vec<Vec<f64>>) -> PyResult<Self> {
        curv4::Frame::new(square("matrix", matrix)?).map(PyFrame).map_err(value_error)
    }

    #[staticmethod]
    fn identity() -> Self {
        PyFrame(curv4::Frame::identity())
    }

    /// Frame of `x ↦ p x q̄` for unit quaternions given as (w, x, y, z).
    #[staticmethod]
    fn from_quaternions(p: Vec<f64>, q: Vec<f64>) -> PyResult<Self> {
        let unit = |v: [f64; 4]| UnitQuaternion::new(Quaternion::new(v[0], v[1], v[2], v[3])).map_err(value_error);
        let pair = QuatPair::new(unit(fixed("p", p)?)?, unit(fixed("q", q)?)?);
        Ok(PyFrame(curv4::so4_from_pair(&pair)))
    }

    fn matrix(&self) -> Vec<Vec<f64>> {
        rows(self.0.matrix())
    }

    fn compose(&self, other: &PyFrame) -> Self {
        PyFrame(self.0.compose(&other.0))
    }

    fn inverse(&self) -> Self {
        PyFrame(self.0.inverse())
    }

    fn __repr__(&self) -> String {
        format!("Frame({:?})", self.matrix())
    }
}

fn frame_or_identity(frame: Option<PyRef<'_, PyFrame>>) -> curv4::Frame {
    frame.map(|f| f.0).unwrap_or_default()
}

#[pyclass(name = "CurvTensor", module = "curv4py", frozen)]
struct PyCurvTensor(curv4::CurvTensor);

#[pymethods]
impl PyCurvTensor {
    /// Tensor from its 6×6 matrix on the bivector basis
    /// (e1∧e2, e1∧e3, e1∧e4, e3∧e4, e4∧e2, e2∧e3).
    #[new]
    fn new(matrix6: Vec<Vec<f64>>) -> PyResult<Self> {
        curv4::CurvTensor::from_matrix(square("matrix6", matrix6)?).map(PyCurvTensor).map_err(value_error)
    }

    #[staticmethod]
    fn zero() -> Self {
        PyCurvTensor(curv4::CurvTensor::zero())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        read_tensor(text).map(PyCurvTensor).map_err(value_error)
    }

    #[pyo3(signature = (components = false))]
    fn to_json(&self, components: bool) -> String {
        write_tensor(&self.0, if components { Layout::Components } else { Layout::Matrix6 })
    }

    fn matrix(&self) -> Vec<Vec<f64>> {
        rows(self.0.matrix())
    }

    /// `R(u_i∧u_j, u_k∧u_l)` with 1-based indices.
    #[pyo3(signature = (i, j, k, l, frame = None))]
    fn component(&self, i: usize, j: usize, k: usize, l: usize, frame: Option<PyRef<'_, PyFrame>>) -> PyResult<f64> {
        self.0.component(&frame_or_identity(frame), (i, j, k, l)).map_err(value_error)
    }

    fn scalar(&self) -> f64 {
        self.0.scalar()
    }

    fn ricci(&self) -> Vec<Vec<f64>> {
        rows(&self.0.ricci().matrix())
    }

    fn einstein(&self) -> Vec<Vec<f64>> {
        rows(&self.0.einstein().matrix())
    }

    fn weyl(&self) -> Self {
        PyCurvTensor(self.0.weyl())
    }

    fn triple_contraction(&self) -> Vec<Vec<f64>> {
        rows(&self.0.triple_contraction().matrix())
    }

    fn act_on_sym2(&self, b: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
        let b = square::<4>("b", b)?;
        if (0..4).any(|i| (0..4).any(|j| b[i][j] != b[j][i])) {
            return Err(PyValueError::new_err("b must be symmetric"));
        }
        Ok(rows(&self.0.act_on_sym2(&curv4::Sym2::from_matrix(&b)).matrix()))
    }

    /// Components in the given frame.
    fn rotate(&self, frame: &PyFrame) -> Self {
        PyCurvTensor(self.0.rotate(&frame.0))
    }

    fn frobenius(&self) -> f64 {
        self.0.frobenius()
    }

    fn max_abs_diff(&self, other: &PyCurvTensor) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    fn __add__(&self, other: &PyCurvTensor) -> Self {
        PyCurvTensor(self.0 + other.0)
    }

    fn __sub__(&self, other: &PyCurvTensor) -> Self {
        PyCurvTensor(self.0 - other.0)
    }

    fn __mul__(&self, k: f64) -> Self {
        PyCurvTensor(k * self.0)
    }

    fn __rmul__(&self, k: f64) -> Self {
        PyCurvTensor(k * self.0)
    }

    fn __repr__(&self) -> String {
        format!("CurvTensor(s={}, |R|={:.6})", self.0.scalar(), self.0.frobenius())
    }
}

fn built(r: Result<curv4::CurvTensor, curv4::FamilyError>) -> PyResult<PyCurvTensor> {
    r.map(PyCurvTensor).map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (mu, c, frame = None))]
fn thm1(mu: Vec<f64>, c: Vec<f64>, frame: Option<PyRef<'_, PyFrame>>) -> PyResult<PyCurvTensor> {
    built(curv4::thm1(fixed("mu", mu)?, fixed("c", c)?, &frame_or_identity(frame)))
}

#[pyfunction]
#[pyo3(signature = (s, lam, mu, c, frame = None))]
fn thm2(s: f64, lam: f64, mu: f64, c: Vec<f64>, frame: Option<PyRef<'_, PyFrame>>) -> PyResult<PyCurvTensor> {
    built(curv4::thm2(s, lam, mu, fixed("c", c)?, &frame_or_identity(frame)))
}

#[pyfunction]
#[pyo3(signature = (s, lam, xi, c, frame = None))]
fn thm3(s: f64, lam: f64, xi: f64, c: Vec<f64>, frame: Option<PyRef<'_, PyFrame>>) -> PyResult<PyCurvTensor> {
    built(curv4::thm3(s, lam, xi, fixed("c", c)?, &frame_or_identity(frame)))
}

#[pyfunction]
#[pyo3(signature = (s, lam, xi, frame = None))]
fn kahler_type(s: f64, lam: f64, xi: f64, frame: Option<PyRef<'_, PyFrame>>) -> PyResult<PyCurvTensor> {
    built(curv4::kahler_type(s, lam, xi, &frame_or_identity(frame)))
}

#[pyfunction]
fn eps(lam: f64) -> PyResult<PyCurvTensor> {
    built(curv4::eps(lam))
}

#[pyfunction]
#[pyo3(signature = (s, mu, w_plus, w_minus, frame = None))]
fn singer_thorpe(
    s: f64,
    mu: Vec<f64>,
    w_plus: Vec<f64>,
    w_minus: Vec<f64>,
    frame: Option<PyRef<'_, PyFrame>>,
) -> PyResult<PyCurvTensor> {
    built(curv4::singer_thorpe(
        &frame_or_identity(frame),
        s,
        fixed("mu", mu)?,
        fixed("w_plus", w_plus)?,
        fixed("w_minus", w_minus)?,
    ))
}

/// Kulkarni–Nomizu square of a diagonal `b` (4 values).
#[pyfunction]
fn kn_square(b: Vec<f64>) -> PyResult<PyCurvTensor> {
    Ok(PyCurvTensor(curv4::kn_square(&curv4::Sym2::diagonal(fixed("b", b)?))))
}

/// `(W⁺, W⁻)` as 3×3 lists in the σ± bases of `frame`.
#[pyfunction]
#[pyo3(signature = (r, frame = None))]
fn w_pm_blocks(r: &PyCurvTensor, frame: Option<PyRef<'_, PyFrame>>) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let b = curv4::w_pm_blocks(&r.0, &frame_or_identity(frame));
    (rows(&b.plus), rows(&b.minus))
}

#[pyfunction]
#[pyo3(signature = (r, tol = curv4::classify::DEFAULT_TOL))]
fn is_weakly_einstein(py: Python<'_>, r: &PyCurvTensor, tol: f64) -> PyResult<Py<PyAny>> {
    to_python(py, &curv4::is_weakly_einstein(&r.0, tol))
}

#[pyfunction]
#[pyo3(signature = (r, cluster_tol = curv4::classify::DEFAULT_CLUSTER_TOL))]
fn einstein_spectrum(r: &PyCurvTensor, cluster_tol: f64) -> (Vec<f64>, String) {
    let s = curv4::einstein_spectrum(&r.0, cluster_tol);
    (s.eigenvalues.to_vec(), s.multiplicity.to_string())
}

#[pyfunction]
#[pyo3(signature = (mu, s, tol = curv4::classify::DEFAULT_TOL))]
fn mu_system_solve(py: Python<'_>, mu: Vec<f64>, s: f64, tol: f64) -> PyResult<Py<PyAny>> {
    let sol = curv4::mu_system_solve(fixed("mu", mu)?, s, tol).map_err(value_error)?;
    to_python(py, &sol)
}

#[pyfunction]
#[pyo3(signature = (mu, tol = curv4::classify::DEFAULT_RANK_TOL))]
fn rank_rho(mu: Vec<f64>, tol: f64) -> PyResult<usize> {
    Ok(curv4::rank_rho(fixed("mu", mu)?, tol))
}

/// Classification as a dict; `frame` is returned as a `Frame` object.
#[pyfunction]
#[pyo3(signature = (r, tol = curv4::classify::DEFAULT_TOL))]
fn classify(py: Python<'_>, r: &PyCurvTensor, tol: f64) -> PyResult<Py<PyAny>> {
    let c = curv4::classify(&r.0, tol);
    let d = PyDict::new(py);
    d.set_item("verdict", c.verdict.as_str())?;
    d.set_item("multiplicity", c.multiplicity.as_str())?;
    d.set_item("scalar", c.scalar)?;
    d.set_item("eigenvalues", c.eigenvalues.to_vec())?;
    d.set_item("residual", c.residual())?;
    d.set_item("reconstruction_error", c.reconstruction_error)?;
    d.set_item("note", c.note.clone())?;
    d.set_item("family", c.family.as_ref().map(|f| to_python(py, f)).transpose()?)?;
    d.set_item("frame", c.frame.map(|f| Py::new(py, PyFrame(f))).transpose()?)?;
    Ok(d.into_any().unbind())
}

/// Rebuilds a tensor from the `family` dict returned by `classify`.
#[pyfunction]
#[pyo3(signature = (family, frame = None))]
fn build_family(py: Python<'_>, family: &Bound<'_, PyAny>, frame: Option<PyRef<'_, PyFrame>>) -> PyResult<PyCurvTensor> {
    let text: String = py.import("json")?.call_method1("dumps", (family,))?.extract()?;
    let f: curv4::Family = serde_json::from_str(&text).map_err(value_error)?;
    built(f.build(&frame_or_identity(frame)))
}

#[pymodule]
fn curv4py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCurvTensor>()?;
    m.add_class::<PyFrame>()?;
    m.add_function(wrap_pyfunction!(thm1, m)?)?;
    m.add_function(wrap_pyfunction!(thm2, m)?)?;
    m.add_function(wrap_pyfunction!(thm3, m)?)?;
    m.add_function(wrap_pyfunction!(kahler_type, m)?)?;
    m.add_function(wrap_pyfunction!(eps, m)?)?;
    m.add_function(wrap_pyfunction!(singer_thorpe, m)?)?;
    m.add_function(wrap_pyfunction!(kn_square, m)?)?;
    m.add_function(wrap_pyfunction!(w_pm_blocks, m)?)?;
    m.add_function(wrap_pyfunction!(is_weakly_einstein, m)?)?;
    m.add_function(wrap_pyfunction!(einstein_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(mu_system_solve, m)?)?;
    m.add_function(wrap_pyfunction!(rank_rho, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(build_family, m)?)?;
    Ok(())
}
