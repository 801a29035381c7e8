//! Gaussian N → M cloning of coherent states.
//!
//! Units: ħ = 1, quadratures x = (a + a†)/√2, p = (a − a†)/(i√2), so the
//! vacuum covariance is I/2 and |α⟩ has mean (√2 Re α, √2 Im α).
//! Modes are ordered (x₀, p₀, x₁, p₁, …).

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::linalg::{c, min_eigenvalue, CMat, C64};
use crate::tol;

/// Largest allowed ‖SΩSᵀ − Ω‖_max for an applied transformation.
pub const SYMPLECTIC_TOL: f64 = 1e-12;

/// Gaussian state given by first and second moments.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n_modes: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidArgument("at least one mode".into()));
        }
        tol::check_dim(2 * n_modes)?;
        Ok(Self {
            n_modes,
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes) * 0.5,
        })
    }

    /// Product of coherent states |α₀⟩ ⊗ |α₁⟩ ⊗ ….
    pub fn coherent(alphas: &[C64]) -> Result<Self> {
        let mut s = Self::vacuum(alphas.len())?;
        for (k, &a) in alphas.iter().enumerate() {
            s.displace(k, a)?;
        }
        Ok(s)
    }

    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        if mean.len() % 2 != 0 || cov.nrows() != mean.len() || cov.ncols() != mean.len() {
            return Err(Error::DimMismatch("mean and covariance sizes".into()));
        }
        let s = Self { n_modes: mean.len() / 2, mean, cov };
        s.validate()?;
        Ok(s)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Smallest eigenvalue of cov + iΩ/2.
    pub fn uncertainty_margin(&self) -> f64 {
        let om = omega(self.n_modes);
        let m = CMat::from_fn(2 * self.n_modes, 2 * self.n_modes, |i, j| {
            c(self.cov[(i, j)], 0.5 * om[(i, j)])
        });
        min_eigenvalue(&m)
    }

    /// Symmetric covariance obeying the uncertainty relation.
    pub fn validate(&self) -> Result<()> {
        let asym = (&self.cov - self.cov.transpose()).amax();
        if asym > tol::EXACT {
            return Err(Error::InvalidState(format!("covariance asymmetric by {asym:e}")));
        }
        let margin = self.uncertainty_margin();
        if margin < -tol::PSD_SLACK {
            return Err(Error::InvalidState(format!("uncertainty relation violated ({margin:e})")));
        }
        Ok(())
    }

    fn check_mode(&self, k: usize) -> Result<()> {
        if k >= self.n_modes {
            return Err(Error::InvalidArgument(format!("mode {k} of {}", self.n_modes)));
        }
        Ok(())
    }

    /// Applies D(α) to one mode.
    pub fn displace(&mut self, mode: usize, alpha: C64) -> Result<()> {
        self.check_mode(mode)?;
        self.mean[2 * mode] += 2f64.sqrt() * alpha.re;
        self.mean[2 * mode + 1] += 2f64.sqrt() * alpha.im;
        Ok(())
    }

    /// cov → S cov Sᵀ, mean → S mean for a symplectic S on the listed modes.
    /// Returns the symplectic residual of S.
    pub fn apply(&mut self, modes: &[usize], s: &DMatrix<f64>) -> Result<f64> {
        for &k in modes {
            self.check_mode(k)?;
        }
        let mut sorted = modes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != modes.len() || s.nrows() != 2 * modes.len() || s.ncols() != 2 * modes.len() {
            return Err(Error::DimMismatch("symplectic matrix does not fit the modes".into()));
        }
        let res = symplectic_residual(s);
        if res > SYMPLECTIC_TOL {
            return Err(Error::Inconsistent(res));
        }
        let full = self.embed(modes, s);
        self.mean = &full * &self.mean;
        self.cov = &full * &self.cov * full.transpose();
        Ok(res)
    }

    fn embed(&self, modes: &[usize], s: &DMatrix<f64>) -> DMatrix<f64> {
        let n = 2 * self.n_modes;
        let mut full = DMatrix::identity(n, n);
        let idx: Vec<usize> = modes.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        for &i in &idx {
            full[(i, i)] = 0.0;
        }
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                full[(i, j)] = s[(a, b)];
            }
        }
        full
    }

    /// Single-mode marginal (mean, covariance).
    pub fn mode(&self, k: usize) -> Result<(Vector2<f64>, Matrix2<f64>)> {
        self.check_mode(k)?;
        let mean = Vector2::new(self.mean[2 * k], self.mean[2 * k + 1]);
        let cov = self.cov.fixed_view::<2, 2>(2 * k, 2 * k).into_owned();
        Ok((mean, cov))
    }

    /// ⟨α|ρ_k|α⟩ from the Gaussian overlap formula.
    pub fn coherent_fidelity(&self, k: usize, alpha: C64) -> Result<f64> {
        let (mean, cov) = self.mode(k)?;
        let delta = mean - Vector2::new(2f64.sqrt() * alpha.re, 2f64.sqrt() * alpha.im);
        let sum = cov + Matrix2::identity() * 0.5;
        let inv = sum.try_inverse().ok_or_else(|| Error::InvalidState("singular covariance".into()))?;
        Ok((-0.5 * (delta.transpose() * inv * delta)[(0, 0)]).exp() / sum.determinant().sqrt())
    }
}

/// Symplectic form Ω = ⊕ [[0, 1], [−1, 0]].
pub fn omega(n_modes: usize) -> DMatrix<f64> {
    let mut om = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        om[(2 * k, 2 * k + 1)] = 1.0;
        om[(2 * k + 1, 2 * k)] = -1.0;
    }
    om
}

pub fn symplectic_residual(s: &DMatrix<f64>) -> f64 {
    let om = omega(s.nrows() / 2);
    (s * &om * s.transpose() - om).amax()
}

/// Quadrature map of the passive transformation a_k → Σ_l U_kl a_l.
pub fn passive(u: &CMat) -> DMatrix<f64> {
    let n = u.nrows();
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        for l in 0..n {
            let z = u[(k, l)];
            s[(2 * k, 2 * l)] = z.re;
            s[(2 * k, 2 * l + 1)] = -z.im;
            s[(2 * k + 1, 2 * l)] = z.im;
            s[(2 * k + 1, 2 * l + 1)] = z.re;
        }
    }
    s
}

/// Beam splitter a_i → √T a_i + √(1−T) a_j, a_j → √(1−T) a_i − √T a_j.
pub fn beam_splitter(state: &mut GaussianState, i: usize, j: usize, transmittance: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&transmittance) {
        return Err(Error::InvalidArgument(format!("transmittance {transmittance} outside [0,1]")));
    }
    let (t, r) = (transmittance.sqrt(), (1.0 - transmittance).sqrt());
    let u = CMat::from_row_slice(2, 2, &[c(t, 0.0), c(r, 0.0), c(r, 0.0), c(-t, 0.0)]);
    state.apply(&[i, j], &passive(&u))
}

/// Unitary DFT matrix U_kl = e^{2πikl/n}/√n.
pub fn dft_matrix(n: usize) -> CMat {
    let s = 1.0 / (n as f64).sqrt();
    CMat::from_fn(n, n, |k, l| C64::from_polar(s, 2.0 * PI * ((k * l) % n) as f64 / n as f64))
}

/// a_k → (1/√n) Σ_l e^{2πikl/n} a_l over the listed modes.
pub fn dft_network(state: &mut GaussianState, modes: &[usize]) -> Result<f64> {
    state.apply(modes, &passive(&dft_matrix(modes.len())))
}

/// Inverse of [`dft_network`].
pub fn inverse_dft_network(state: &mut GaussianState, modes: &[usize]) -> Result<f64> {
    state.apply(modes, &passive(&dft_matrix(modes.len()).adjoint()))
}

/// Phase-insensitive amplifier a → √G a + √(G−1) a_z†, a_z → √(G−1) a† + √G a_z.
pub fn amplify(state: &mut GaussianState, mode: usize, ancilla: usize, gain: f64) -> Result<f64> {
    if gain.is_nan() || gain < 1.0 {
        return Err(Error::InvalidArgument(format!("gain {gain} < 1")));
    }
    let (g, h) = (gain.sqrt(), (gain - 1.0).sqrt());
    #[rustfmt::skip]
    let s = DMatrix::from_row_slice(4, 4, &[
        g, 0.0, h, 0.0,
        0.0, g, 0.0, -h,
        h, 0.0, g, 0.0,
        0.0, -h, 0.0, g,
    ]);
    state.apply(&[mode, ancilla], &s)
}

/// Minimal added variance (M−N)/(MN).
pub fn optimal_noise(n: usize, m: usize) -> f64 {
    (m - n) as f64 / (m * n) as f64
}

/// Optimal fidelity MN/(MN+M−N).
pub fn optimal_fidelity(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    m * n / (m * n + m - n)
}

/// Concentrate `outputs[..n]` by a DFT, amplify with gain M/N into `ancilla`,
/// then distribute over all `outputs` with a second DFT.
/// Returns the largest symplectic residual.
pub fn clone_network(state: &mut GaussianState, n: usize, outputs: &[usize], ancilla: usize) -> Result<f64> {
    let m = outputs.len();
    if n == 0 || n > m {
        return Err(Error::InvalidArgument(format!("need 1 <= N <= M, got N={n}, M={m}")));
    }
    let mut worst: f64 = dft_network(state, &outputs[..n])?;
    worst = worst.max(amplify(state, outputs[0], ancilla, m as f64 / n as f64)?);
    worst = worst.max(dft_network(state, outputs)?);
    Ok(worst)
}

/// Outcome of the simulated cloner.
#[derive(Debug, Clone, PartialEq)]
pub struct CvCloneReport {
    /// Mean of each clone as a complex amplitude.
    pub means: Vec<C64>,
    /// Added variance (x, p) of each clone above the vacuum 1/2.
    pub added_variance: Vec<(f64, f64)>,
    /// Closed form 1/(1+σ²) with σ² the mean added variance.
    pub fidelity: Vec<f64>,
    /// Gaussian-overlap fidelity ⟨α|ρ_k|α⟩.
    pub overlap_fidelity: Vec<f64>,
    pub symplectic_residual: f64,
    pub state: GaussianState,
}

fn report(state: GaussianState, clones: &[usize], alpha: C64, residual: f64) -> Result<CvCloneReport> {
    let mut means = vec![];
    let mut added_variance = vec![];
    let mut fidelity = vec![];
    let mut overlap_fidelity = vec![];
    for &k in clones {
        let (mu, cov) = state.mode(k)?;
        means.push(c(mu[0], mu[1]) / 2f64.sqrt());
        let (vx, vp) = (cov[(0, 0)] - 0.5, cov[(1, 1)] - 0.5);
        added_variance.push((vx, vp));
        fidelity.push(1.0 / (1.0 + 0.5 * (vx + vp)));
        overlap_fidelity.push(state.coherent_fidelity(k, alpha)?);
    }
    Ok(CvCloneReport { means, added_variance, fidelity, overlap_fidelity, symplectic_residual: residual, state })
}

/// N copies of |α⟩, M−N blank modes and an ancilla, run through [`clone_network`].
/// Clones are modes 0..M, the ancilla is mode M.
pub fn gaussian_clone(n: usize, m: usize, alpha: C64) -> Result<CvCloneReport> {
    if n == 0 || n > m {
        return Err(Error::InvalidArgument(format!("need 1 <= N <= M, got N={n}, M={m}")));
    }
    let mut alphas = vec![alpha; n];
    alphas.resize(m + 1, c(0.0, 0.0));
    let mut state = GaussianState::coherent(&alphas)?;
    let outputs: Vec<usize> = (0..m).collect();
    let residual = clone_network(&mut state, n, &outputs, m)?;
    report(state, &outputs, alpha, residual)
}

/// Single clone of the N → M network on three modes: the concentrated input, the
/// amplifier ancilla and one collective vacuum mode mixed in with transmittance 1/M.
pub fn gaussian_clone_marginal(n: usize, m: usize, alpha: C64) -> Result<CvCloneReport> {
    if n == 0 || n > m {
        return Err(Error::InvalidArgument(format!("need 1 <= N <= M, got N={n}, M={m}")));
    }
    let concentrated = alpha * (n as f64).sqrt();
    let mut state = GaussianState::coherent(&[concentrated, c(0.0, 0.0), c(0.0, 0.0)])?;
    let mut worst: f64 = amplify(&mut state, 0, 1, m as f64 / n as f64)?;
    worst = worst.max(beam_splitter(&mut state, 0, 2, 1.0 / m as f64)?);
    report(state, &[0], alpha, worst)
}

/// N → M followed by M → L on the M clones, each stage with its own ancilla.
pub fn cascade_clone(n: usize, m: usize, l: usize, alpha: C64) -> Result<CvCloneReport> {
    if n == 0 || n > m || m > l {
        return Err(Error::InvalidArgument(format!("need 1 <= N <= M <= L, got {n}, {m}, {l}")));
    }
    let mut alphas = vec![alpha; n];
    alphas.resize(l + 2, c(0.0, 0.0));
    let mut state = GaussianState::coherent(&alphas)?;
    let first: Vec<usize> = (0..m).collect();
    let second: Vec<usize> = (0..l).collect();
    let mut worst: f64 = clone_network(&mut state, n, &first, l)?;
    worst = worst.max(clone_network(&mut state, m, &second, l + 1)?);
    report(state, &second, alpha, worst)
}
