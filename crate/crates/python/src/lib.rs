//! Python bindings for the trunkweave library.

use std::path::Path;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use trunkweave::cli::{self, catalog, KnotFile, PatternFile, PipelineOptions};
use trunkweave::geometry::{
    connected_sum_presentation, embed_pattern, sweep_profile, trunk_embedding, ClosedPolyline,
    Point, SolidTorusEmbedding,
};
use trunkweave::pattern::{cable_pattern, PatternCurve, PatternPoint};
use trunkweave::spherelemma::exhaustive_check;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A closed polygonal knot in space.
#[pyclass(name = "Knot", module = "trunkweave_py")]
struct PyKnot {
    curve: ClosedPolyline,
}

#[pymethods]
impl PyKnot {
    #[new]
    fn new(vertices: Vec<(f64, f64, f64)>) -> PyResult<Self> {
        let points = vertices
            .into_iter()
            .map(|(x, y, z)| Point::new(x, y, z))
            .collect();
        Ok(PyKnot {
            curve: ClosedPolyline::new(points).map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn catalog(name: &str) -> PyResult<Self> {
        let file = catalog::knot(name)
            .ok_or_else(|| PyValueError::new_err(format!("no catalog knot named {name:?}")))?;
        Ok(PyKnot {
            curve: file.load().map_err(value_error)?.curve,
        })
    }

    /// Reads a knot file; the curve is rescaled and made generic as on load.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let file = KnotFile::read(Path::new(path)).map_err(value_error)?;
        Ok(PyKnot {
            curve: file.load().map_err(value_error)?.curve,
        })
    }

    fn vertices(&self) -> Vec<(f64, f64, f64)> {
        self.curve
            .vertices()
            .iter()
            .map(|p| (p.x, p.y, p.z))
            .collect()
    }

    fn __len__(&self) -> usize {
        self.curve.len()
    }

    fn is_generic(&self) -> bool {
        self.curve.is_generic()
    }

    fn normalized(&self) -> Self {
        PyKnot {
            curve: self.curve.normalized(),
        }
    }

    fn trunk(&self) -> PyResult<usize> {
        trunk_embedding(&self.curve).map_err(value_error)
    }

    /// `(critical_values, interval_counts)` of the height sweep.
    fn sweep_profile(&self) -> PyResult<(Vec<f64>, Vec<usize>)> {
        let p = sweep_profile(&self.curve).map_err(value_error)?;
        Ok((p.critical_values, p.interval_counts))
    }

    fn connected_sum(&self, other: &PyKnot) -> PyResult<Self> {
        Ok(PyKnot {
            curve: connected_sum_presentation(&self.curve, &other.curve).map_err(value_error)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Knot({} vertices)", self.curve.len())
    }
}

/// A closed curve in the solid torus, given by `(theta, u, v)` vertices with
/// lifted angles and a closing point.
#[pyclass(name = "Pattern", module = "trunkweave_py")]
struct PyPattern {
    curve: PatternCurve,
}

#[pymethods]
impl PyPattern {
    #[new]
    fn new(points: Vec<(f64, f64, f64)>) -> PyResult<Self> {
        let points = points
            .into_iter()
            .map(|(t, u, v)| PatternPoint::new(t, u, v))
            .collect();
        Ok(PyPattern {
            curve: PatternCurve::new(points).map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn catalog(name: &str) -> PyResult<Self> {
        catalog::pattern_curve(name)
            .map(|curve| PyPattern { curve })
            .ok_or_else(|| PyValueError::new_err(format!("no catalog pattern named {name:?}")))
    }

    #[staticmethod]
    fn cable(strands: u32, twists: i64) -> PyResult<Self> {
        Ok(PyPattern {
            curve: cable_pattern(strands, twists).map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let file = PatternFile::read(Path::new(path)).map_err(value_error)?;
        Ok(PyPattern {
            curve: file.load().map_err(value_error)?,
        })
    }

    fn winding_number(&self) -> i64 {
        self.curve.winding_number()
    }

    fn meridian_count(&self, theta: f64) -> PyResult<usize> {
        self.curve.meridian_count_at(theta).map_err(value_error)
    }

    /// `(lower, upper)` bounds on the norm of the meridian disk class.
    fn norm_bounds(&self) -> (u64, u64) {
        let b = self.curve.norm_bounds();
        (b.lower, b.upper)
    }

    fn __repr__(&self) -> String {
        format!(
            "Pattern({} vertices, winding {})",
            self.curve.len(),
            self.curve.winding_number()
        )
    }
}

/// Satellite of `companion` with `pattern`, framed by the transported frame
/// plus `twist` full twists.
#[pyfunction]
#[pyo3(signature = (companion, pattern, twist = 0, samples_per_edge = 4))]
fn satellite(
    companion: &PyKnot,
    pattern: &PyPattern,
    twist: i64,
    samples_per_edge: usize,
) -> PyResult<PyKnot> {
    let torus =
        SolidTorusEmbedding::new(companion.curve.clone(), None, twist).map_err(value_error)?;
    Ok(PyKnot {
        curve: embed_pattern(&torus, &pattern.curve, samples_per_edge).map_err(value_error)?,
    })
}

/// Runs the level-by-level inequality check on a catalog name or file path
/// for each input; returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (companion, pattern, twist = 0, rings = 64, around = 16))]
fn verify_inequality(
    companion: &str,
    pattern: &str,
    twist: i64,
    rings: usize,
    around: usize,
) -> PyResult<String> {
    let knot = cli::resolve_knot(companion).map_err(value_error)?;
    let pattern = cli::resolve_pattern(pattern).map_err(value_error)?;
    let options = PipelineOptions {
        twist,
        longitudinal_res: rings,
        meridional_res: around,
        ..Default::default()
    };
    let report =
        cli::run_verify_inequality(vec![], &knot, &pattern, &options, None).map_err(value_error)?;
    Ok(report.to_json())
}

/// Exhaustive check of circle configurations with up to `max_circles` circles.
#[pyfunction]
#[pyo3(signature = (max_circles = 9))]
fn lemma_check(py: Python<'_>, max_circles: usize) -> PyResult<Bound<'_, PyDict>> {
    let report = exhaustive_check(max_circles).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("max_circles", report.max_circles)?;
    d.set_item("forests", report.forests_checked)?;
    d.set_item("configurations", report.configurations_checked)?;
    d.set_item("hypothesis_passing", report.hypothesis_passing)?;
    d.set_item("counterexamples", report.counterexamples.len())?;
    d.set_item("passed", report.passed())?;
    Ok(d)
}

/// Runs the command-line tool in-process: `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::main_with_args(&args, &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}

#[pymodule]
fn trunkweave_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyKnot>()?;
    m.add_class::<PyPattern>()?;
    m.add_function(wrap_pyfunction!(satellite, m)?)?;
    m.add_function(wrap_pyfunction!(verify_inequality, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
