//! Finite-dimensional state machinery: states, density matrices, tensor
//! products, partial traces and fidelities.

mod pauli;
mod random;
pub(crate) mod sym;

pub use pauli::{bell_state, gen_pauli, is_broadcastable, mub, omega, MubFamily};
pub use random::{haar_state, haar_unitary, seeded_rng};
pub use sym::{sym_basis, sym_embed, sym_isometry, symmetrizer, OccupationVector};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Pure state over a tensor product of subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amps: CVec,
}

impl StateVector {
    /// Builds a state, checking the length and unit norm.
    pub fn new(dims: Vec<usize>, amps: CVec) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.iter().any(|&d| d < 1) || total != amps.len() {
            return Err(Error::DimMismatch(format!(
                "dims {dims:?} do not match {} amplitudes",
                amps.len()
            )));
        }
        let norm = amps.norm_squared();
        if (norm - 1.0).abs() > tol::NORM * (total as f64).sqrt().max(1.0) {
            return Err(Error::InvalidState(format!("squared norm {norm} is not 1")));
        }
        Ok(Self { dims, amps })
    }

    /// Builds a state after rescaling to unit norm.
    pub fn normalized(dims: Vec<usize>, amps: CVec) -> Result<Self> {
        let n = amps.norm();
        if n < 1e-300 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::new(dims, amps / r(n))
    }

    /// Single-qudit state from amplitudes (normalized).
    pub fn qudit(amps: &[C64]) -> Result<Self> {
        Self::normalized(vec![amps.len()], CVec::from_column_slice(amps))
    }

    /// Qubit cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩.
    pub fn bloch(theta: f64, phi: f64) -> Self {
        let amps = CVec::from_vec(vec![
            r((theta / 2.0).cos()),
            C64::from_polar((theta / 2.0).sin(), phi),
        ]);
        Self { dims: vec![2], amps }
    }

    /// Orthogonal qubit |ψ⊥⟩ = b*|0⟩ − a*|1⟩ for |ψ⟩ = a|0⟩ + b|1⟩.
    pub fn qubit_perp(&self) -> Result<Self> {
        if self.dims != [2] {
            return Err(Error::DimMismatch("qubit_perp needs a single qubit".into()));
        }
        let (a, b) = (self.amps[0], self.amps[1]);
        Ok(Self { dims: vec![2], amps: CVec::from_vec(vec![b.conj(), -a.conj()]) })
    }

    /// Computational basis state |index⟩ of the given product space.
    pub fn basis(dims: Vec<usize>, index: usize) -> Self {
        let total: usize = dims.iter().product();
        let mut amps = CVec::zeros(total);
        amps[index] = ONE;
        Self { dims, amps }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &CVec {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn into_amps(self) -> CVec {
        self.amps
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims, amps: self.amps.kronecker(&other.amps) }
    }

    /// n-fold tensor power.
    pub fn power(&self, n: usize) -> Self {
        let mut out = self.clone();
        for _ in 1..n {
            out = out.kron(self);
        }
        out
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amps.dotc(&other.amps)
    }

    /// |⟨a|b⟩|², insensitive to global phase.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix { dims: self.dims.clone(), mat: &self.amps * self.amps.adjoint() }
    }

    /// Applies an operator acting on the whole space, keeping the dims.
    pub fn apply(&self, op: &CMat) -> Result<Self> {
        if op.ncols() != self.dim() || op.nrows() != self.dim() {
            return Err(Error::DimMismatch("operator size".into()));
        }
        Ok(Self { dims: self.dims.clone(), amps: op * &self.amps })
    }

    /// Reduced density matrix on the `keep` subsystems (in ascending order).
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let split = Split::new(&self.dims, keep)?;
        let mut psi = CMat::zeros(split.keep_dim, split.trace_dim);
        for (i, &(k, t)) in split.map.iter().enumerate() {
            psi[(k, t)] = self.amps[i];
        }
        Ok(DensityMatrix { dims: split.keep_dims, mat: &psi * psi.adjoint() })
    }
}

/// Mixed state: Hermitian, PSD, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    mat: CMat,
}

impl DensityMatrix {
    /// Builds a density matrix and validates it.
    pub fn new(dims: Vec<usize>, mat: CMat) -> Result<Self> {
        let rho = Self::unchecked(dims, mat)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Builds without the physical checks (shape is still checked).
    pub fn unchecked(dims: Vec<usize>, mat: CMat) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || mat.nrows() != total || mat.ncols() != total {
            return Err(Error::DimMismatch(format!(
                "dims {dims:?} vs {}x{} matrix",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Self { dims, mat })
    }

    /// Maximally mixed state on the given space.
    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n: usize = dims.iter().product();
        Self { dims, mat: CMat::identity(n, n) / r(n as f64) }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_mat(self) -> CMat {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.mat)
    }

    /// Hermiticity, trace and PSD checks.
    pub fn validate(&self) -> Result<()> {
        let herm = (&self.mat - self.mat.adjoint()).norm();
        if herm > tol::NORM * (self.dim() as f64).max(1.0) {
            return Err(Error::InvalidState(format!("not Hermitian (residual {herm:e})")));
        }
        let tr = self.trace();
        if (tr - ONE).norm() > tol::NORM * (self.dim() as f64).max(1.0) {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = self.min_eigenvalue();
        if min < -tol::PSD_SLACK {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims, mat: self.mat.kronecker(&other.mat) }
    }

    /// Expectation value Tr[ρ O].
    pub fn expect(&self, op: &CMat) -> C64 {
        (&self.mat * op).trace()
    }

    /// ρ ↦ U ρ U†.
    pub fn conjugate(&self, u: &CMat) -> Result<Self> {
        if u.ncols() != self.dim() {
            return Err(Error::DimMismatch("operator size".into()));
        }
        Ok(Self { dims: self.dims.clone(), mat: u * &self.mat * u.adjoint() })
    }

    /// Maximum absolute entrywise difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        max_abs_diff(&self.mat, &other.mat)
    }

    /// von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        SymmetricEigen::new(hermitian_part(&self.mat))
            .eigenvalues
            .iter()
            .filter(|&&l| l > 1e-15)
            .map(|&l| -l * l.log2())
            .sum()
    }
}

/// Operand of [`tensor`].
#[derive(Debug, Clone, PartialEq)]
pub enum Operand {
    State(StateVector),
    Density(DensityMatrix),
}

/// Kronecker product of a list of states or density matrices, left to right.
pub fn tensor(parts: &[Operand]) -> Result<Operand> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("empty tensor product".into()))?;
    let mut acc = first.clone();
    for p in rest {
        acc = match (acc, p) {
            (Operand::State(a), Operand::State(b)) => Operand::State(a.kron(b)),
            (Operand::Density(a), Operand::Density(b)) => Operand::Density(a.kron(b)),
            _ => return Err(Error::MixedKinds),
        };
    }
    Ok(acc)
}

/// Index bookkeeping for splitting a product space into kept and traced parts.
struct Split {
    keep_dims: Vec<usize>,
    keep_dim: usize,
    trace_dim: usize,
    map: Vec<(usize, usize)>,
}

impl Split {
    fn new(dims: &[usize], keep: &[usize]) -> Result<Self> {
        let n = dims.len();
        if keep.is_empty() {
            return Err(Error::InvalidArgument("keep set is empty".into()));
        }
        let mut mask = vec![false; n];
        for &k in keep {
            if k >= n {
                return Err(Error::InvalidArgument(format!("subsystem {k} out of range 0..{n}")));
            }
            if mask[k] {
                return Err(Error::InvalidArgument(format!("subsystem {k} repeated")));
            }
            mask[k] = true;
        }
        let keep_dims: Vec<usize> = (0..n).filter(|&i| mask[i]).map(|i| dims[i]).collect();
        let keep_dim: usize = keep_dims.iter().product();
        let total: usize = dims.iter().product();
        let trace_dim = total / keep_dim;
        let mut map = Vec::with_capacity(total);
        let mut digits = vec![0usize; n];
        for _ in 0..total {
            let (mut k, mut t) = (0, 0);
            for i in 0..n {
                if mask[i] {
                    k = k * dims[i] + digits[i];
                } else {
                    t = t * dims[i] + digits[i];
                }
            }
            map.push((k, t));
            for i in (0..n).rev() {
                digits[i] += 1;
                if digits[i] < dims[i] {
                    break;
                }
                digits[i] = 0;
            }
        }
        Ok(Self { keep_dims, keep_dim, trace_dim, map })
    }
}

/// Partial trace keeping the listed subsystems (result ordered ascending).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let split = Split::new(&rho.dims, keep)?;
    let mut out = CMat::zeros(split.keep_dim, split.keep_dim);
    let mut by_trace: Vec<Vec<(usize, usize)>> = vec![Vec::new(); split.trace_dim];
    for (i, &(k, t)) in split.map.iter().enumerate() {
        by_trace[t].push((i, k));
    }
    for group in &by_trace {
        for &(i, ki) in group {
            for &(j, kj) in group {
                out[(ki, kj)] += rho.mat[(i, j)];
            }
        }
    }
    Ok(DensityMatrix { dims: split.keep_dims, mat: out })
}

/// Fidelity ⟨ψ|ρ|ψ⟩.
pub fn fidelity(rho: &DensityMatrix, psi: &StateVector) -> Result<f64> {
    if rho.dim() != psi.dim() {
        return Err(Error::DimMismatch(format!("{} vs {}", rho.dim(), psi.dim())));
    }
    Ok(psi.amps.dotc(&(&rho.mat * &psi.amps)).re)
}

/// Embeds a single-subsystem operator at position `site` of a product space.
pub fn embed_op(op: &CMat, dims: &[usize], site: usize) -> CMat {
    let mut acc = CMat::identity(1, 1);
    for (i, &d) in dims.iter().enumerate() {
        let f = if i == site { op.clone() } else { CMat::identity(d, d) };
        acc = acc.kronecker(&f);
    }
    acc
}

/// Kronecker product of a list of matrices.
pub fn kron_all(ops: &[CMat]) -> CMat {
    ops.iter().fold(CMat::identity(1, 1), |acc, m| acc.kronecker(m))
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * r(0.5)
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    SymmetricEigen::new(hermitian_part(m)).eigenvalues.min()
}

pub fn max_eigenvalue(m: &CMat) -> f64 {
    SymmetricEigen::new(hermitian_part(m)).eigenvalues.max()
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// ‖U†U − I‖ (Frobenius).
pub fn unitarity_residual(u: &CMat) -> f64 {
    (u.adjoint() * u - CMat::identity(u.ncols(), u.ncols())).norm()
}

/// Outer product |a⟩⟨b|.
pub fn outer(a: &CVec, b: &CVec) -> CMat {
    a * b.adjoint()
}
