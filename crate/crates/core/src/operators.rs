//! Laplacians, Dirac operators, fermion parity and supercharges.
//!
//! Operators acting on mixed vertex-edge states are [`BlockOperator`]s over
//! the space `C^|V| ⊕ C^|E|` with vertices first. Everything here except the
//! spectral square roots is exact integer arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::matrix::{DenseSymMatrix, IntMatrix, RealMatrix};
use crate::spectral::eig_sym;

/// Global phase carried by a [`BlockOperator`].
///
/// An `Imaginary` operator stands for `i * entries`. Only the second
/// supercharge needs it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Real,
    Imaginary,
}

/// Operator on vertex-edge states with explicit sector sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockOperator {
    vertex_dim: usize,
    edge_dim: usize,
    phase: Phase,
    entries: IntMatrix,
}

impl BlockOperator {
    pub fn from_blocks(
        vertex_block: &IntMatrix,
        upper: &IntMatrix,
        lower: &IntMatrix,
        edge_block: &IntMatrix,
        phase: Phase,
    ) -> Self {
        let m = vertex_block.rows();
        let n = edge_block.rows();
        debug_assert_eq!((upper.rows(), upper.cols()), (m, n));
        debug_assert_eq!((lower.rows(), lower.cols()), (n, m));
        let mut entries = IntMatrix::zeros(m + n, m + n);
        for i in 0..m {
            for j in 0..m {
                entries[(i, j)] = vertex_block[(i, j)];
            }
            for j in 0..n {
                entries[(i, m + j)] = upper[(i, j)];
                entries[(m + j, i)] = lower[(j, i)];
            }
        }
        for i in 0..n {
            for j in 0..n {
                entries[(m + i, m + j)] = edge_block[(i, j)];
            }
        }
        Self {
            vertex_dim: m,
            edge_dim: n,
            phase,
            entries,
        }
    }

    pub fn vertex_dim(&self) -> usize {
        self.vertex_dim
    }

    pub fn edge_dim(&self) -> usize {
        self.edge_dim
    }

    pub fn dim(&self) -> usize {
        self.vertex_dim + self.edge_dim
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    /// Real pattern; the operator is `entries` or `i * entries` by phase.
    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    /// Whether index `k` of the full space belongs to the vertex sector.
    pub fn is_vertex_index(&self, k: usize) -> bool {
        k < self.vertex_dim
    }

    fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> IntMatrix {
        let mut b = IntMatrix::zeros(rows.len(), cols.len());
        for (bi, i) in rows.clone().enumerate() {
            for (bj, j) in cols.clone().enumerate() {
                b[(bi, bj)] = self.entries[(i, j)];
            }
        }
        b
    }

    pub fn vertex_block(&self) -> IntMatrix {
        self.block(0..self.vertex_dim, 0..self.vertex_dim)
    }

    pub fn edge_block(&self) -> IntMatrix {
        let d = self.dim();
        self.block(self.vertex_dim..d, self.vertex_dim..d)
    }

    /// Vertex rows by edge columns.
    pub fn upper_block(&self) -> IntMatrix {
        self.block(0..self.vertex_dim, self.vertex_dim..self.dim())
    }

    /// Edge rows by vertex columns.
    pub fn lower_block(&self) -> IntMatrix {
        self.block(self.vertex_dim..self.dim(), 0..self.vertex_dim)
    }

    fn check_shape(&self, rhs: &BlockOperator) -> Result<()> {
        if (self.vertex_dim, self.edge_dim) != (rhs.vertex_dim, rhs.edge_dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rhs.dim(),
            });
        }
        Ok(())
    }

    /// Exact product; `i * i` folds into a sign.
    pub fn compose(&self, rhs: &BlockOperator) -> Result<BlockOperator> {
        self.check_shape(rhs)?;
        let product = self.entries.matmul(&rhs.entries)?;
        let (phase, entries) = match (self.phase, rhs.phase) {
            (Phase::Real, Phase::Real) => (Phase::Real, product),
            (Phase::Imaginary, Phase::Imaginary) => (Phase::Real, product.scale(-1)),
            _ => (Phase::Imaginary, product),
        };
        Ok(BlockOperator {
            vertex_dim: self.vertex_dim,
            edge_dim: self.edge_dim,
            phase,
            entries,
        })
    }

    fn combine(&self, rhs: &BlockOperator, sign: i64) -> Result<BlockOperator> {
        self.check_shape(rhs)?;
        if self.phase != rhs.phase {
            return Err(Error::Precondition("cannot add operators with different phases".into()));
        }
        Ok(BlockOperator {
            vertex_dim: self.vertex_dim,
            edge_dim: self.edge_dim,
            phase: self.phase,
            entries: self.entries.add(&rhs.entries.scale(sign))?,
        })
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, rhs: &BlockOperator) -> Result<BlockOperator> {
        self.compose(rhs)?.combine(&rhs.compose(self)?, 1)
    }

    /// `AB - BA`.
    pub fn commutator(&self, rhs: &BlockOperator) -> Result<BlockOperator> {
        self.compose(rhs)?.combine(&rhs.compose(self)?, -1)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_zero()
    }

    /// Hermitian check: real operators must be symmetric, imaginary ones
    /// antisymmetric.
    pub fn is_hermitian(&self) -> bool {
        let t = self.entries.transpose();
        match self.phase {
            Phase::Real => t == self.entries,
            Phase::Imaginary => t == self.entries.scale(-1),
        }
    }

    pub fn trace(&self) -> i64 {
        self.entries.trace()
    }

    /// Real symmetric form; only valid for real-phase operators.
    pub fn to_sym(&self) -> Result<DenseSymMatrix> {
        if self.phase != Phase::Real {
            return Err(Error::Precondition(
                "imaginary-phase operator has no real symmetric form".into(),
            ));
        }
        self.entries.to_sym()
    }
}

/// `Δ+ = I Iᵀ`, the combinatorial graph Laplacian `D - A`.
pub fn laplacian_even(g: &OrientedGraph) -> IntMatrix {
    let i = g.incidence_matrix();
    i.matmul(&i.transpose()).expect("incidence shapes agree")
}

/// `Δ- = Iᵀ I`; entries depend on orientation.
pub fn laplacian_odd(g: &OrientedGraph) -> IntMatrix {
    let i = g.incidence_matrix();
    i.transpose().matmul(&i).expect("incidence shapes agree")
}

/// `Δ_S = Δ+ ⊕ Δ-`.
pub fn laplacian_susy(g: &OrientedGraph) -> BlockOperator {
    let (m, n) = (g.vertex_count(), g.edge_count());
    BlockOperator::from_blocks(
        &laplacian_even(g),
        &IntMatrix::zeros(m, n),
        &IntMatrix::zeros(n, m),
        &laplacian_odd(g),
        Phase::Real,
    )
}

/// Incidence Dirac operator with off-diagonal blocks `I` and `Iᵀ`.
pub fn dirac_incidence(g: &OrientedGraph) -> BlockOperator {
    let (m, n) = (g.vertex_count(), g.edge_count());
    let i = g.incidence_matrix();
    BlockOperator::from_blocks(
        &IntMatrix::zeros(m, m),
        &i,
        &i.transpose(),
        &IntMatrix::zeros(n, n),
        Phase::Real,
    )
}

/// Vertex or edge sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Even,
    Odd,
}

/// Spectral square root `P √Λ Pᵀ` of `Δ+` or `Δ-`.
///
/// Rounding can leave eigenvalues of a PSD matrix slightly negative; those
/// are clamped to zero before the square root.
pub fn dirac_sector(g: &OrientedGraph, sector: Sector) -> Result<DenseSymMatrix> {
    let lap = match sector {
        Sector::Even => laplacian_even(g),
        Sector::Odd => laplacian_odd(g),
    };
    let spectrum = eig_sym(&lap.to_sym()?)?;
    let roots: Vec<f64> = spectrum.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    Ok(spectrum.reconstruct_with(&roots))
}

/// Diagonal `+1` on vertices and `-1` on edges.
pub fn fermion_parity(g: &OrientedGraph) -> BlockOperator {
    let (m, n) = (g.vertex_count(), g.edge_count());
    BlockOperator::from_blocks(
        &IntMatrix::identity(m),
        &IntMatrix::zeros(m, n),
        &IntMatrix::zeros(n, m),
        &IntMatrix::identity(n).scale(-1),
        Phase::Real,
    )
}

/// The two supercharges `Q1 = [[0, I], [Iᵀ, 0]]` and
/// `Q2 = [[0, iI], [-iIᵀ, 0]]`, the latter stored as `i * [[0, I], [-Iᵀ, 0]]`.
pub fn supercharges(g: &OrientedGraph) -> (BlockOperator, BlockOperator) {
    let (m, n) = (g.vertex_count(), g.edge_count());
    let i = g.incidence_matrix();
    let q1 = dirac_incidence(g);
    let q2 = BlockOperator::from_blocks(
        &IntMatrix::zeros(m, m),
        &i,
        &i.transpose().scale(-1),
        &IntMatrix::zeros(n, n),
        Phase::Imaginary,
    );
    (q1, q2)
}

/// `xᵀ Δ+ x` evaluated as a sum over edges of squared differences.
pub fn even_quadratic_form(g: &OrientedGraph, x: &[f64]) -> f64 {
    g.edges().iter().map(|e| (x[e.head] - x[e.tail]).powi(2)).sum()
}

/// Quadratic form of the incidence Dirac operator on a mixed vector,
/// `2 Σ_e x_e (v_head - v_tail)`.
pub fn dirac_quadratic_form(g: &OrientedGraph, v: &[f64], e: &[f64]) -> f64 {
    2.0 * g
        .edges()
        .iter()
        .enumerate()
        .map(|(k, edge)| e[k] * (v[edge.head] - v[edge.tail]))
        .sum::<f64>()
}

/// Named operator for the CLI and the FFI layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Adjacency,
    Incidence,
    Even,
    Odd,
    Susy,
    Dirac,
    DiracEven,
    DiracOdd,
    Parity,
    Q1,
    Q2,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 11] = [
        OperatorKind::Adjacency,
        OperatorKind::Incidence,
        OperatorKind::Even,
        OperatorKind::Odd,
        OperatorKind::Susy,
        OperatorKind::Dirac,
        OperatorKind::DiracEven,
        OperatorKind::DiracOdd,
        OperatorKind::Parity,
        OperatorKind::Q1,
        OperatorKind::Q2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::Adjacency => "adjacency",
            OperatorKind::Incidence => "incidence",
            OperatorKind::Even => "even",
            OperatorKind::Odd => "odd",
            OperatorKind::Susy => "susy",
            OperatorKind::Dirac => "dirac",
            OperatorKind::DiracEven => "dirac_even",
            OperatorKind::DiracOdd => "dirac_odd",
            OperatorKind::Parity => "parity",
            OperatorKind::Q1 => "q1",
            OperatorKind::Q2 => "q2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// A built operator, either exact or floating.
#[derive(Debug, Clone)]
pub enum BuiltOperator {
    Int { matrix: IntMatrix, phase: Phase },
    Real(RealMatrix),
}

pub fn build_operator(g: &OrientedGraph, kind: OperatorKind) -> Result<BuiltOperator> {
    let int = |matrix: IntMatrix| BuiltOperator::Int {
        matrix,
        phase: Phase::Real,
    };
    let block = |b: BlockOperator| BuiltOperator::Int {
        phase: b.phase(),
        matrix: b.entries().clone(),
    };
    Ok(match kind {
        OperatorKind::Adjacency => int(g.adjacency_matrix()),
        OperatorKind::Incidence => int(g.incidence_matrix()),
        OperatorKind::Even => int(laplacian_even(g)),
        OperatorKind::Odd => int(laplacian_odd(g)),
        OperatorKind::Susy => block(laplacian_susy(g)),
        OperatorKind::Dirac | OperatorKind::Q1 => block(dirac_incidence(g)),
        OperatorKind::DiracEven => BuiltOperator::Real(dirac_sector(g, Sector::Even)?.into_real()),
        OperatorKind::DiracOdd => BuiltOperator::Real(dirac_sector(g, Sector::Odd)?.into_real()),
        OperatorKind::Parity => block(fermion_parity(g)),
        OperatorKind::Q2 => block(supercharges(g).1),
    })
}
