//! Python bindings: build tessellation-quotient codes, inspect their
//! parameters and check matrices, decode syndromes, and run the single-shot
//! protocol, all from Python.

use hypercode::algebra::{Ideal, IdealKind};
use hypercode::css::{pack_support, unpack_support};
use hypercode::decode::{bp_decode, ca_decode, TannerGraph};
use hypercode::descriptor::Descriptor;
use hypercode::pipeline::{build_code, BuildOptions, CodeBuild};
use hypercode::sim::{run_single_shot, wald_ci, DecoderKind, SimConfig};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::path::PathBuf;

fn pyerr(e: hypercode::Error) -> PyErr {
    use hypercode::Error::*;
    match e {
        Parse(_) | Invalid(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// A built CSS code together with the cell complex it came from.
#[pyclass(frozen)]
struct Code {
    build: CodeBuild,
    graph: TannerGraph,
}

#[pymethods]
impl Code {
    #[getter]
    fn descriptor(&self) -> String {
        self.build.descriptor.to_string()
    }

    #[getter]
    fn n(&self) -> usize {
        self.build.code.n
    }

    #[getter]
    fn k(&self) -> usize {
        self.build.code.k
    }

    #[getter]
    fn group_order(&self) -> usize {
        self.build.complex.group_order
    }

    #[getter]
    fn covering_subgroup_order(&self) -> usize {
        self.build.complex.subgroup_order
    }

    #[getter]
    fn chi(&self) -> i64 {
        self.build.complex.chi()
    }

    #[getter]
    fn cell_counts(&self) -> Vec<usize> {
        self.build.complex.counts.clone()
    }

    #[getter]
    fn incidence_multiplicities(&self) -> Vec<u64> {
        self.build.complex.mu[1..].to_vec()
    }

    #[getter]
    fn counts_proper(&self) -> bool {
        self.build.properness.counts_proper
    }

    #[getter]
    fn incidence_proper(&self) -> bool {
        self.build.properness.incidence_proper
    }

    #[getter]
    fn rate_lower_bound(&self) -> f64 {
        self.build.code.rate_lower_bound()
    }

    #[getter]
    fn locality_preserved(&self) -> Option<bool> {
        self.build.locality_preserved
    }

    /// Support of each X-check row (rows of Hx).
    fn hx_rows(&self) -> Vec<Vec<u32>> {
        let m = &self.build.code.hx;
        (0..m.rows).map(|r| m.row_support(r)).collect()
    }

    /// Support of each Z-check row (rows of Hz).
    fn hz_rows(&self) -> Vec<Vec<u32>> {
        let m = &self.build.code.hz;
        (0..m.rows).map(|r| m.row_support(r)).collect()
    }

    /// Supports of k X-logical representatives (kernel of Hz modulo Hx rows).
    fn logical_basis(&self) -> Vec<Vec<u32>> {
        let n = self.build.code.n;
        self.build
            .code
            .logical_x_basis()
            .iter()
            .map(|v| unpack_support(n, v))
            .collect()
    }

    fn report(&self) -> String {
        self.build.report()
    }

    /// Randomized information-set search for a minimum-weight logical
    /// operator; returns (weight, support) or None when k = 0.
    #[pyo3(signature = (restarts=1000, seed=1))]
    fn min_logical_weight(&self, py: Python<'_>, restarts: usize, seed: u64)
        -> Option<(usize, Vec<u32>)>
    {
        py.detach(|| {
            let found = self.build.code.min_logical_weight_search(restarts, seed)?;
            Some((found.weight, unpack_support(self.build.code.n, &found.vector)))
        })
    }

    /// Decode one Z-syndrome, given as the list of violated check indices.
    /// Returns (correction support, converged, iterations).
    #[pyo3(signature = (violated, decoder="bp", p=0.05, max_iters=60))]
    fn decode(&self, violated: Vec<u32>, decoder: &str, p: f64, max_iters: usize)
        -> PyResult<(Vec<u32>, bool, usize)>
    {
        let kind: DecoderKind = decoder.parse().map_err(pyerr)?;
        let m = self.build.code.hz.rows;
        for &c in &violated {
            if c as usize >= m {
                return Err(PyValueError::new_err(format!(
                    "check index {c} out of range (m = {m})"
                )));
            }
        }
        let syndrome = pack_support(m, &violated);
        let out = match kind {
            DecoderKind::Ca => ca_decode(&self.graph, &syndrome, max_iters),
            DecoderKind::Bp => bp_decode(&self.graph, &syndrome, p, max_iters),
        };
        Ok((
            unpack_support(self.build.code.n, &out.correction),
            out.converged,
            out.iterations,
        ))
    }

    /// Run the single-shot protocol; returns a dict of rates and intervals.
    #[pyo3(signature = (decoder="bp", p=0.01, q=0.0, rounds=1, trials=1000, seed=1, max_iters=60))]
    #[allow(clippy::too_many_arguments)]
    fn simulate<'py>(
        &self,
        py: Python<'py>,
        decoder: &str,
        p: f64,
        q: f64,
        rounds: usize,
        trials: usize,
        seed: u64,
        max_iters: usize,
    ) -> PyResult<Bound<'py, PyDict>> {
        let cfg = SimConfig {
            code: self.build.descriptor.to_string(),
            decoder: decoder.parse().map_err(pyerr)?,
            rounds,
            p,
            q,
            trials,
            seed,
            max_decoder_iters: max_iters,
        };
        let r = py
            .detach(|| run_single_shot(&self.build.code, &cfg))
            .map_err(pyerr)?;
        let d = PyDict::new(py);
        d.set_item("failures", r.failures)?;
        d.set_item("trials", trials)?;
        d.set_item("failure_rate", r.failure_rate)?;
        d.set_item("ci", (r.ci_lo, r.ci_hi))?;
        d.set_item("mean_rounds", r.mean_rounds)?;
        d.set_item("unencoded_failure_rate", r.unencoded_failure_rate)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "Code('{}', n={}, k={})",
            self.build.descriptor, self.build.code.n, self.build.code.k
        )
    }
}

/// Build a code from a descriptor string like
/// "5,3,3,5|word:ababacbdedcbabacedcbaedced" or "5,3,3,5|ideal:2".
#[pyfunction]
#[pyo3(signature = (descriptor, large=false, cache_dir=None))]
fn build(py: Python<'_>, descriptor: &str, large: bool, cache_dir: Option<PathBuf>)
    -> PyResult<Code>
{
    let d: Descriptor = descriptor.parse().map_err(pyerr)?;
    let mut opts = if large { BuildOptions::large() } else { BuildOptions::default() };
    opts.cache_dir = cache_dir;
    let build = py.detach(|| build_code(&d, &opts)).map_err(pyerr)?;
    let graph = TannerGraph::from_matrix(&build.code.hz);
    Ok(Code { build, graph })
}

/// How a rational prime behaves in the golden integer ring: "inert",
/// "split(root=r)", or "ramified", with the residue field size.
#[pyfunction]
fn classify_ideal(p: u64) -> PyResult<(String, u64)> {
    let ideal = Ideal::classify(p).map_err(pyerr)?;
    let kind = match ideal.kind {
        IdealKind::Inert => "inert".to_string(),
        IdealKind::Split { root } => format!("split(root={root})"),
        IdealKind::Ramified => "ramified".to_string(),
    };
    Ok((kind, ideal.field().order()))
}

/// 95% Wald interval for a failure count.
#[pyfunction]
fn wald_interval(failures: usize, trials: usize) -> (f64, f64) {
    wald_ci(failures, trials)
}

#[pymodule]
fn hypercode_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Code>()?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(classify_ideal, m)?)?;
    m.add_function(wrap_pyfunction!(wald_interval, m)?)?;
    Ok(())
}
