//! Eigendecomposition of the lattice Hamiltonian and the spectral
//! diagnostics built on it: imaginary gap, averaged mean displacement per
//! sublattice, open/ring spectral distance and per-sublattice IPR.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{BoundaryCondition, Hamiltonian};

/// Relative residual bound `‖Hφ − Eφ‖ ≤ tol · ‖H‖` for every eigenpair.
pub const EIG_RESIDUAL_TOL: f64 = 1e-8;

/// Largest matrix dimension accepted by [`eigensystem`].
pub const MAX_DIM: usize = 1024;

const SCHUR_MAX_ITER: usize = 0; // 0 lets nalgebra pick its default cap

/// Right eigenpairs of a Hamiltonian.
///
/// Eigenvectors are the columns of `eigenvectors`, each with unit 2-norm,
/// and column `j` belongs to `eigenvalues[j]`. Pairs are sorted by
/// `(Re E, Im E)`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<C64>,
    eigenvectors: DMatrix<C64>,
    bc: BoundaryCondition,
}

impl Spectrum {
    /// Assembles a spectrum from raw parts, normalizing columns and sorting.
    /// Intended for synthetic inputs; [`eigensystem`] is the normal route.
    pub fn from_parts(eigenvalues: Vec<C64>, mut eigenvectors: DMatrix<C64>, bc: BoundaryCondition) -> Result<Self> {
        let dim = eigenvectors.nrows();
        if eigenvalues.len() != eigenvectors.ncols() {
            return Err(Error::DimensionMismatch { expected: eigenvectors.ncols(), actual: eigenvalues.len() });
        }
        if !dim.is_multiple_of(2) {
            return Err(Error::InvalidParameter("eigenvectors must have even length".into()));
        }
        for mut col in eigenvectors.column_iter_mut() {
            let norm = col.norm();
            if norm > 0.0 {
                col /= C64::new(norm, 0.0);
            }
        }
        let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
        order.sort_by(|&i, &j| lexicographic(eigenvalues[i], eigenvalues[j]));
        let sorted_vals = order.iter().map(|&i| eigenvalues[i]).collect();
        let sorted_vecs = DMatrix::from_fn(dim, order.len(), |r, c| eigenvectors[(r, order[c])]);
        Ok(Self { eigenvalues: sorted_vals, eigenvectors: sorted_vecs, bc })
    }

    pub fn eigenvalues(&self) -> &[C64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.eigenvectors
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    /// Number of unit cells.
    pub fn cells(&self) -> usize {
        self.eigenvectors.nrows() / 2
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

fn lexicographic(a: C64, b: C64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Full eigendecomposition via complex Schur form `H = Q T Q†`.
///
/// Eigenvectors of the triangular factor come from back-substitution and
/// are rotated back with `Q`. Every pair is checked against
/// [`EIG_RESIDUAL_TOL`].
pub fn eigensystem(h: &Hamiltonian) -> Result<Spectrum> {
    let dim = h.dim();
    if dim > MAX_DIM {
        return Err(Error::InvalidParameter(format!("matrix dimension {dim} exceeds cap {MAX_DIM}")));
    }
    let matrix = h.matrix();
    if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidParameter("Hamiltonian has non-finite entries".into()));
    }
    let schur = nalgebra::Schur::try_new(matrix.clone(), f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or(Error::NoConvergence)?;
    let (q, t) = schur.unpack();

    let eigenvalues: Vec<C64> = (0..dim).map(|i| t[(i, i)]).collect();
    let tri_vecs = triangular_eigenvectors(&t);
    let eigenvectors = q * tri_vecs;

    let spectrum = Spectrum::from_parts(eigenvalues, eigenvectors, h.bc())?;
    let worst = max_residual(matrix, &spectrum);
    let tolerance = EIG_RESIDUAL_TOL * h.norm().max(f64::MIN_POSITIVE);
    if worst > tolerance {
        return Err(Error::EigenResidual { residual: worst, tolerance });
    }
    Ok(spectrum)
}

/// Right eigenvectors of an upper-triangular matrix, one per column.
/// Near-coincident diagonal entries are separated by a small floor so the
/// back-substitution stays finite.
fn triangular_eigenvectors(t: &DMatrix<C64>) -> DMatrix<C64> {
    let n = t.nrows();
    let scale = t.norm().max(f64::MIN_POSITIVE);
    let floor = f64::EPSILON * scale;
    let mut vecs = DMatrix::<C64>::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        vecs[(k, k)] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut acc = C64::new(0.0, 0.0);
            for j in i + 1..=k {
                acc += t[(i, j)] * vecs[(j, k)];
            }
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < floor {
                denom = C64::new(floor, 0.0);
            }
            vecs[(i, k)] = -acc / denom;
            // Rescale to keep entries bounded when the column grows quickly.
            let big = vecs[(i, k)].norm();
            if big > 1e100 {
                let s = C64::new(1.0 / big, 0.0);
                for r in i..=k {
                    vecs[(r, k)] *= s;
                }
            }
        }
    }
    vecs
}

/// Largest `‖Hφ − Eφ‖` over all eigenpairs.
pub fn max_residual(matrix: &DMatrix<C64>, spec: &Spectrum) -> f64 {
    let hv = matrix * spec.eigenvectors();
    spec.eigenvalues
        .iter()
        .enumerate()
        .map(|(j, &e)| {
            let col = spec.eigenvectors.column(j);
            (hv.column(j) - col * e).norm()
        })
        .fold(0.0, f64::max)
}

/// Largest imaginary part of the spectrum. A value near zero means the
/// spectrum touches the real axis (imaginary gap closed).
pub fn imaginary_gap(spec: &Spectrum) -> f64 {
    spec.eigenvalues.iter().map(|e| e.im).fold(f64::NEG_INFINITY, f64::max)
}

/// Eigenstate-averaged centre of weight on each sublattice, in units of cell
/// index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementPair {
    pub mean_a: f64,
    pub mean_b: f64,
}

/// `mean_X = (1/N) Σ_states Σ_n n |φ_n^X|²`, summed over all `2N` states.
pub fn mean_displacement(spec: &Spectrum) -> DisplacementPair {
    let cells = spec.cells();
    let (mut sum_a, mut sum_b) = (0.0, 0.0);
    for col in spec.eigenvectors.column_iter() {
        for cell in 1..=cells {
            let w = cell as f64;
            sum_a += w * col[2 * (cell - 1)].norm_sqr();
            sum_b += w * col[2 * (cell - 1) + 1].norm_sqr();
        }
    }
    let n = cells as f64;
    DisplacementPair { mean_a: sum_a / n, mean_b: sum_b / n }
}

/// Symmetric Hausdorff distance between two eigenvalue sets in the complex
/// plane.
pub fn spectra_compare(spec_open: &Spectrum, spec_ring: &Spectrum) -> f64 {
    hausdorff(spec_open.eigenvalues(), spec_ring.eigenvalues())
}

pub fn hausdorff(a: &[C64], b: &[C64]) -> f64 {
    fn directed(from: &[C64], to: &[C64]) -> f64 {
        from.iter()
            .map(|&x| to.iter().map(|&y| (x - y).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    }
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    directed(a, b).max(directed(b, a))
}

/// Per-sublattice inverse participation ratios, one entry per eigenstate.
#[derive(Debug, Clone, PartialEq)]
pub struct SublatticeIpr {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

const IPR_WEIGHT_FLOOR: f64 = 1e-12;

/// `IPR_X = Σ_n |φ_n^X|⁴ / (Σ_n |φ_n^X|²)²` for every eigenstate; states
/// with sublattice weight below `1e-12` report zero.
pub fn ipr_per_sublattice(spec: &Spectrum) -> SublatticeIpr {
    let mut a = Vec::with_capacity(spec.len());
    let mut b = Vec::with_capacity(spec.len());
    for col in spec.eigenvectors.column_iter() {
        a.push(ipr_of(col.iter().step_by(2).map(|z| z.norm_sqr())));
        b.push(ipr_of(col.iter().skip(1).step_by(2).map(|z| z.norm_sqr())));
    }
    SublatticeIpr { a, b }
}

fn ipr_of(weights: impl Iterator<Item = f64>) -> f64 {
    let (mut total, mut quartic) = (0.0, 0.0);
    for w in weights {
        total += w;
        quartic += w * w;
    }
    if total < IPR_WEIGHT_FLOOR {
        0.0
    } else {
        quartic / (total * total)
    }
}

/// Median of a slice (mean of the two central values for even lengths).
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len().is_multiple_of(2) {
        0.5 * (v[mid - 1] + v[mid])
    } else {
        v[mid]
    }
}
