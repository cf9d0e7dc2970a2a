//! Schrödinger evolution, steady states and Euclidean propagators.
//!
//! Units are `ħ = 1`, `2m = 1`, so a vertex state evolves as `e^{iΔ+ t}ψ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::matrix::{DenseSymMatrix, IntMatrix};
use crate::operators::{laplacian_even, laplacian_odd, laplacian_susy};
use crate::spectral::{eig_sym, kernel_from_spectrum, KernelBasis, Spectrum};

/// Which part of the vertex-edge space a state lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateSector {
    Vertex,
    Edge,
    Mixed,
}

/// Complex amplitudes over vertices, edges, or both (vertices first).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    sector: StateSector,
    amplitudes: Vec<Complex64>,
    /// Number of leading vertex amplitudes; only meaningful for mixed states.
    split: usize,
}

impl QuantumState {
    pub fn new(sector: StateSector, amplitudes: Vec<Complex64>) -> Result<Self> {
        if let Some(k) = amplitudes.iter().position(|z| !z.is_finite()) {
            return Err(Error::Precondition(format!("amplitude {k} is not finite")));
        }
        let split = match sector {
            StateSector::Vertex => amplitudes.len(),
            StateSector::Edge => 0,
            StateSector::Mixed => 0,
        };
        Ok(Self {
            sector,
            amplitudes,
            split,
        })
    }

    pub fn vertex(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::new(StateSector::Vertex, amplitudes)
    }

    pub fn edge(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::new(StateSector::Edge, amplitudes)
    }

    /// Mixed state; the first `split` amplitudes are vertex amplitudes.
    pub fn mixed(amplitudes: Vec<Complex64>, split: usize) -> Result<Self> {
        if split > amplitudes.len() {
            return Err(Error::IndexOutOfRange {
                what: "mixed state split",
                index: split,
                len: amplitudes.len(),
            });
        }
        let mut s = Self::new(StateSector::Mixed, amplitudes)?;
        s.split = split;
        Ok(s)
    }

    /// Real-valued state in the given sector.
    pub fn from_real(sector: StateSector, values: &[f64], split: usize) -> Result<Self> {
        let amps = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        match sector {
            StateSector::Mixed => Self::mixed(amps, split),
            _ => Self::new(sector, amps),
        }
    }

    pub fn sector(&self) -> StateSector {
        self.sector
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn split(&self) -> usize {
        self.split
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖self - other‖`; lengths must match.
    pub fn distance(&self, other: &QuantumState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn with_amplitudes(&self, amplitudes: Vec<Complex64>) -> Self {
        Self {
            sector: self.sector,
            amplitudes,
            split: self.split,
        }
    }

    pub fn to_doc(&self) -> StateDoc {
        StateDoc {
            sector: self.sector,
            re: self.amplitudes.iter().map(|z| z.re).collect(),
            im: self.amplitudes.iter().map(|z| z.im).collect(),
        }
    }

    /// Builds a state from its JSON document. `vertex_count` fixes the split
    /// of mixed states.
    pub fn from_doc(doc: &StateDoc, vertex_count: usize) -> Result<Self> {
        if doc.re.len() != doc.im.len() {
            return Err(Error::DimensionMismatch {
                expected: doc.re.len(),
                found: doc.im.len(),
            });
        }
        let amps = doc
            .re
            .iter()
            .zip(&doc.im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        match doc.sector {
            StateSector::Mixed => Self::mixed(amps, vertex_count),
            s => Self::new(s, amps),
        }
    }
}

/// JSON form `{"sector": ..., "re": [...], "im": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDoc {
    pub sector: StateSector,
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

/// The Hamiltonian acting on a sector: `Δ+`, `Δ-`, or `Δ_S`.
pub fn sector_hamiltonian(g: &OrientedGraph, sector: StateSector) -> IntMatrix {
    match sector {
        StateSector::Vertex => laplacian_even(g),
        StateSector::Edge => laplacian_odd(g),
        StateSector::Mixed => laplacian_susy(g).entries().clone(),
    }
}

fn check_dims(state: &QuantumState, g: &OrientedGraph) -> Result<()> {
    let expected = match state.sector {
        StateSector::Vertex => g.vertex_count(),
        StateSector::Edge => g.edge_count(),
        StateSector::Mixed => {
            if state.split != g.vertex_count() {
                return Err(Error::DimensionMismatch {
                    expected: g.vertex_count(),
                    found: state.split,
                });
            }
            g.vertex_count() + g.edge_count()
        }
    };
    if state.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: state.len(),
        });
    }
    Ok(())
}

fn apply_real(m: &DenseSymMatrix, amps: &[Complex64]) -> Vec<Complex64> {
    let n = m.dim();
    (0..n)
        .map(|i| {
            let row = m.as_real().row(i);
            row.iter().zip(amps).map(|(&a, z)| z * a).sum::<Complex64>()
        })
        .collect()
}

/// `e^{iHt}` applied through the eigenbasis of `H`.
fn apply_phase_evolution(spectrum: &Spectrum, amps: &[Complex64], t: f64) -> Vec<Complex64> {
    let n = spectrum.dim();
    let v = &spectrum.eigenvectors;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let coeff: Complex64 = (0..n).map(|i| amps[i] * v[(i, k)]).sum();
        let phased = coeff * Complex64::from_polar(1.0, spectrum.eigenvalues[k] * t);
        for i in 0..n {
            out[i] += phased * v[(i, k)];
        }
    }
    out
}

/// `e^{iΔt} ψ` with the Laplacian matching the state's sector.
pub fn evolve(state: &QuantumState, t: f64, g: &OrientedGraph) -> Result<QuantumState> {
    check_dims(state, g)?;
    let h = sector_hamiltonian(g, state.sector).to_sym()?;
    let spectrum = eig_sym(&h)?;
    Ok(state.with_amplitudes(apply_phase_evolution(&spectrum, &state.amplitudes, t)))
}

/// Kernel membership test: `‖Δψ‖ < tol ‖ψ‖`.
pub fn is_steady(state: &QuantumState, g: &OrientedGraph, tol: f64) -> Result<bool> {
    check_dims(state, g)?;
    let norm = state.norm();
    if norm == 0.0 {
        return Err(Error::ZeroState);
    }
    let h = sector_hamiltonian(g, state.sector).to_sym()?;
    let image = apply_real(&h, &state.amplitudes);
    let image_norm = image.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok(image_norm < tol * norm)
}

/// Norm of the component of `ψ` outside the kernel of its sector Laplacian.
pub fn excited_component_norm(state: &QuantumState, g: &OrientedGraph) -> Result<f64> {
    check_dims(state, g)?;
    let h = sector_hamiltonian(g, state.sector).to_sym()?;
    let spectrum = eig_sym(&h)?;
    let tol = spectrum.kernel_tol();
    let v = &spectrum.eigenvectors;
    let mut total = 0.0;
    for (k, &l) in spectrum.eigenvalues.iter().enumerate() {
        if l.abs() < tol {
            continue;
        }
        let coeff: Complex64 = (0..spectrum.dim()).map(|i| state.amplitudes[i] * v[(i, k)]).sum();
        total += coeff.norm_sqr();
    }
    Ok(total.sqrt())
}

/// Orthonormal basis of steady states in a sector.
pub fn steady_basis(g: &OrientedGraph, sector: StateSector, tol: Option<f64>) -> Result<KernelBasis> {
    let h = sector_hamiltonian(g, sector).to_sym()?;
    kernel_from_spectrum(&eig_sym(&h)?, tol)
}

/// Sign convention of the Euclidean propagator.
///
/// `Psd` is `e^{-t(D - A)}` and `Walk` is `e^{t(A - D)}`. They are the same
/// matrix; the walk-sum identities are phrased against `Walk`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Psd,
    Walk,
}

/// Heat kernel of the even Laplacian through its eigenbasis.
pub fn euclidean_propagator(g: &OrientedGraph, t: f64, convention: Convention) -> Result<DenseSymMatrix> {
    let spectrum = eig_sym(&laplacian_even(g).to_sym()?)?;
    Ok(match convention {
        Convention::Psd => spectrum.map(|l| (-t * l).exp()),
        // A - D has eigenvalues -λ
        Convention::Walk => spectrum.map(|l| (t * -l).exp()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> OrientedGraph {
        OrientedGraph::from_pairs("t", 3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn p2() -> OrientedGraph {
        OrientedGraph::from_pairs("p2", 2, &[(0, 1)]).unwrap()
    }

    #[test]
    fn constant_state_is_stationary() {
        let g = triangle();
        let psi = QuantumState::from_real(StateSector::Vertex, &[1.0, 1.0, 1.0], 0).unwrap();
        for t in [0.3, 1.0, 17.5] {
            let out = evolve(&psi, t, &g).unwrap();
            assert!(out.distance(&psi) < 1e-12);
        }
        assert!(is_steady(&psi, &g, 1e-10).unwrap());
    }

    #[test]
    fn cycle_edge_state_is_stationary() {
        let g = triangle();
        let c = 1.0 / 3f64.sqrt();
        let psi = QuantumState::from_real(StateSector::Edge, &[c, c, c], 0).unwrap();
        let out = evolve(&psi, 2.2, &g).unwrap();
        assert!(out.distance(&psi) < 1e-12);
        assert!(is_steady(&psi, &g, 1e-10).unwrap());
    }

    #[test]
    fn p2_vertex_evolution_closed_form() {
        // eigenbasis (1,1)/√2 with 0 and (1,-1)/√2 with 2:
        // e^{iΔt}(1,0) = ((1 + e^{2it})/2, (1 - e^{2it})/2)
        let g = p2();
        let psi = QuantumState::from_real(StateSector::Vertex, &[1.0, 0.0], 0).unwrap();
        let t = std::f64::consts::FRAC_PI_2;
        let out = evolve(&psi, t, &g).unwrap();
        let phase = Complex64::from_polar(1.0, 2.0 * t);
        let one = Complex64::new(1.0, 0.0);
        let expected = [(one + phase) / 2.0, (one - phase) / 2.0];
        for (a, b) in out.amplitudes().iter().zip(expected) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn steady_checks() {
        let g = p2();
        let anti = QuantumState::from_real(StateSector::Vertex, &[1.0, -1.0], 0).unwrap();
        assert!(!is_steady(&anti, &g, 1e-8).unwrap());

        let path = OrientedGraph::from_pairs("p3", 3, &[(0, 1), (1, 2)]).unwrap();
        let bridge = QuantumState::from_real(StateSector::Edge, &[1.0, 0.0], 0).unwrap();
        assert!(!is_steady(&bridge, &path, 1e-8).unwrap());

        let zero = QuantumState::from_real(StateSector::Vertex, &[0.0, 0.0], 0).unwrap();
        assert_eq!(is_steady(&zero, &g, 1e-8), Err(Error::ZeroState));
    }

    #[test]
    fn dimension_mismatch() {
        let psi = QuantumState::from_real(StateSector::Edge, &[1.0, 0.0], 0).unwrap();
        assert!(matches!(evolve(&psi, 1.0, &p2()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn propagator_examples() {
        let g = triangle();
        let id = euclidean_propagator(&g, 0.0, Convention::Psd).unwrap();
        assert!(
            id.as_real()
                .sub(&DenseSymMatrix::identity(3).into_real())
                .unwrap()
                .max_abs()
                < 1e-12
        );

        let k = euclidean_propagator(&g, 1.0, Convention::Walk).unwrap();
        for i in 0..3 {
            let s: f64 = k.as_real().row(i).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }

        let k = euclidean_propagator(&p2(), 1.0, Convention::Psd).unwrap();
        let e = (-2.0f64).exp();
        assert!((k[(0, 0)] - (1.0 + e) / 2.0).abs() < 1e-12);
        assert!((k[(0, 1)] - (1.0 - e) / 2.0).abs() < 1e-12);
        let w = euclidean_propagator(&p2(), 1.0, Convention::Walk).unwrap();
        assert!(k.as_real().sub(w.as_real()).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn state_doc_round_trip() {
        let psi = QuantumState::mixed(
            vec![
                Complex64::new(1.0, 0.5),
                Complex64::new(0.0, -1.0),
                Complex64::new(2.0, 0.0),
            ],
            2,
        )
        .unwrap();
        let doc = psi.to_doc();
        let json = serde_json::to_string(&doc).unwrap();
        let back = QuantumState::from_doc(&serde_json::from_str(&json).unwrap(), 2).unwrap();
        assert_eq!(back, psi);
    }
}
