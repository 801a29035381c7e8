//! Phase-covariant and state-dependent cloning.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::asym::AmplitudeMatrix;
use crate::combin::{binom, is_prime};
use crate::error::{Error, Result};
use crate::linalg::{c, fidelity, r, sym_embed, CMat, CVec, OccupationVector, StateVector, C64};
use crate::optimize::{bisect, golden_max, multistart, scan_max};

/// Equatorial qubit (|0⟩ + e^{iφ}|1⟩)/√2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquatorialQubit {
    pub phi: f64,
}

impl EquatorialQubit {
    pub fn new(phi: f64) -> Self {
        Self { phi: phi.rem_euclid(2.0 * PI) }
    }

    pub fn state(&self) -> StateVector {
        StateVector::bloch(PI / 2.0, self.phi)
    }
}

/// Niu–Griffiths economic cloner |0⟩|0⟩ → |00⟩, |1⟩|0⟩ → cos η|10⟩ + sin η|01⟩.
pub fn economic_phase_1to2(phi: f64, eta: f64) -> Result<(f64, f64, StateVector)> {
    if !(0.0..=PI / 2.0 + 1e-15).contains(&eta) {
        return Err(Error::InvalidArgument(format!("η = {eta} outside [0, π/2]")));
    }
    let e = C64::from_polar(1.0, phi);
    let s = 1.0 / 2f64.sqrt();
    let amps = CVec::from_vec(vec![r(s), e * (eta.sin() * s), e * (eta.cos() * s), r(0.0)]);
    let out = StateVector::new(vec![2, 2], amps)?;
    let psi = EquatorialQubit::new(phi).state();
    let fa = fidelity(&out.reduced(&[0])?, &psi)?;
    let fb = fidelity(&out.reduced(&[1])?, &psi)?;
    Ok((fa, fb, out))
}

/// Isometry C² → (copy₁, copy₂, ancilla) of the ancilla-assisted 1 → 2 phase cloner.
pub fn non_economic_phase_isometry() -> CMat {
    let s = 1.0 / 2f64.sqrt();
    let mut v = CMat::zeros(8, 2);
    // index = 4·q1 + 2·q2 + a
    v[(0, 0)] = r(s);
    v[(2 + 1, 0)] = r(0.5);
    v[(4 + 1, 0)] = r(0.5);
    v[(7, 1)] = r(s);
    v[(2, 1)] = r(0.5);
    v[(4, 1)] = r(0.5);
    v
}

/// η(1,M) = Σ_j α_j α_{M−1−j} C(M−1,j)/√(C(M,j) C(M,j+1)).
pub fn phase_eta(alphas: &[f64]) -> f64 {
    let m = alphas.len();
    (0..m)
        .map(|j| {
            alphas[j] * alphas[m - 1 - j] * binom(m - 1, j)
                / (binom(m, j) * binom(m, j + 1)).sqrt()
        })
        .sum()
}

/// Optimal α_j for 1 → M equatorial cloning.
pub fn phase_optimal_alphas(m: usize) -> Vec<f64> {
    let mut a = vec![0.0; m];
    if m % 2 == 0 {
        a[m / 2 - 1] = 0.5f64.sqrt();
        a[m / 2] = 0.5f64.sqrt();
    } else {
        a[(m - 1) / 2] = 1.0;
    }
    a
}

/// Optimal 1 → M equatorial fidelity.
pub fn phase_1tom_fidelity(m: usize) -> f64 {
    let mf = m as f64;
    if m % 2 == 0 {
        0.5 + (mf * (mf + 2.0)).sqrt() / (4.0 * mf)
    } else {
        0.5 + (mf + 1.0) / (4.0 * mf)
    }
}

fn dicke(m: usize, downs: usize) -> Result<CVec> {
    Ok(sym_embed(&OccupationVector::new(vec![m - downs, downs])?)?.into_amps())
}

/// Isometry C² → (C²)^⊗M ⊗ C^M for coefficients α_0..α_{M−1}.
pub fn phase_1tom_isometry(alphas: &[f64]) -> Result<CMat> {
    let m = alphas.len();
    if m < 2 {
        return Err(Error::InvalidArgument("need M >= 2".into()));
    }
    let n: f64 = alphas.iter().map(|a| a * a).sum();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::Normalization(format!("Σα² = {n}")));
    }
    crate::tol::check_dim((1 << m) * m)?;
    let mut v = CMat::zeros((1 << m) * m, 2);
    for j in 0..m {
        let anc = CVec::from_fn(m, |i, _| if i == j { r(1.0) } else { r(0.0) });
        let up = dicke(m, j)?.kronecker(&anc) * r(alphas[j]);
        let down = dicke(m, j + 1)?.kronecker(&anc) * r(alphas[m - 1 - j]);
        v.set_column(0, &(v.column(0) + up));
        v.set_column(1, &(v.column(1) + down));
    }
    Ok(v)
}

/// Economic 1 → M isometry C² → (C²)^⊗M: odd M uses the middle pair, even M the
/// (L+1, L−1)/(L, L) pair.
pub fn economic_phase_1tom_isometry(m: usize) -> Result<CMat> {
    if m < 2 {
        return Err(Error::InvalidArgument("need M >= 2".into()));
    }
    let (up, down) = if m % 2 == 0 { (m / 2 - 1, m / 2) } else { ((m - 1) / 2, m.div_ceil(2)) };
    let mut v = CMat::zeros(1 << m, 2);
    v.set_column(0, &dicke(m, up)?);
    v.set_column(1, &dicke(m, down)?);
    Ok(v)
}

/// Fidelity of every output qubit for the equatorial input at `phi`, through isometry `v`
/// whose output is `copies` qubits followed by an ancilla.
pub fn copy_fidelities(v: &CMat, copies: usize, phi: f64) -> Result<Vec<f64>> {
    let psi = EquatorialQubit::new(phi).state();
    let out = v * psi.amps();
    let anc = out.len() >> copies;
    let mut dims = vec![2; copies];
    if anc > 1 {
        dims.push(anc);
    }
    let sv = StateVector::new(dims, out)?;
    (0..copies).map(|k| fidelity(&sv.reduced(&[k])?, &psi)).collect()
}

/// Optimal 1 → M machine with ancilla, its closed-form and simulated fidelity.
#[derive(Debug, Clone)]
pub struct PhaseMachine {
    pub alphas: Vec<f64>,
    pub fidelity: f64,
    pub simulated: f64,
}

pub fn phase_1tom(m: usize) -> Result<PhaseMachine> {
    let alphas = phase_optimal_alphas(m);
    let v = phase_1tom_isometry(&alphas)?;
    let simulated = copy_fidelities(&v, m, 0.7)?[0];
    Ok(PhaseMachine { fidelity: phase_1tom_fidelity(m), alphas, simulated })
}

/// F = 2λ_max of the block-diagonal Bloch-invariance matrix A for 1 → M.
pub fn phase_matrix_bound(m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidArgument("need M >= 2".into()));
    }
    let n = 2 * (m + 1);
    let idx = |j: usize, k: usize| j * (m + 1) + k;
    let mf = m as f64;
    let mut a = nalgebra::DMatrix::<f64>::zeros(n, n);
    for j in 0..2 {
        for k in 0..=m {
            a[(idx(j, k), idx(j, k))] = 0.25;
        }
    }
    // |↑⟩ with k flipped copies pairs with |↓⟩ with k+1
    for k in 0..m {
        let w = 0.25 * (((m - k) * (k + 1)) as f64).sqrt() / mf;
        a[(idx(1, k + 1), idx(0, k))] = w;
        a[(idx(0, k), idx(1, k + 1))] = w;
    }
    let lam = a.symmetric_eigen().eigenvalues.max();
    Ok(2.0 * lam)
}

/// Symmetric qudit phase cloner fidelity for real (α, β).
pub fn phase_qudit_fidelity(d: usize, alpha: f64, beta: f64) -> f64 {
    let df = d as f64;
    1.0 / df + alpha * beta * (2.0 * (df - 1.0)).sqrt() / df + beta * beta * (df - 2.0) / (2.0 * df)
}

/// Optimal (α, β) and fidelity of the symmetric qudit phase cloner.
pub fn phase_qudit_optimal(d: usize) -> (f64, f64, f64) {
    let df = d as f64;
    let q = (df * df + 4.0 * df - 4.0).sqrt();
    let alpha = (0.5 - (df - 2.0) / (2.0 * q)).sqrt();
    let beta = (0.5 + (df - 2.0) / (2.0 * q)).sqrt();
    let f = 1.0 / df + (df - 2.0 + q) / (4.0 * df);
    (alpha, beta, f)
}

/// Asymmetric qudit phase fidelities (F₁, F₂) at amplitude α and asymmetry θ.
pub fn phase_qudit_asym(d: usize, alpha: f64, theta: f64) -> (f64, f64) {
    let df = d as f64;
    let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
    let f = |t: f64| {
        1.0 / df
            + 2.0 * alpha * beta * (df - 1.0).sqrt() * t / df
            + beta * beta * (df - 2.0) * t * t / df
    };
    (f(theta.cos()), f(theta.sin()))
}

/// Result of the qudit phase cloner.
#[derive(Debug, Clone, Copy)]
pub struct QuditPhase {
    pub alpha: f64,
    pub beta: f64,
    pub f1: f64,
    pub f2: f64,
}

/// Symmetric optimum when `theta` is `None`; otherwise α maximizing F₁ + F₂ at θ.
pub fn phase_qudit_1to2(d: usize, theta: Option<f64>) -> Result<QuditPhase> {
    if d < 2 {
        return Err(Error::InvalidArgument("d >= 2".into()));
    }
    match theta {
        None => {
            let (alpha, beta, f) = phase_qudit_optimal(d);
            Ok(QuditPhase { alpha, beta, f1: f, f2: f })
        }
        Some(th) => {
            let (t, _) = scan_max(
                |t| {
                    let (a, b) = phase_qudit_asym_t(d, t, th);
                    a + b
                },
                0.0,
                PI,
                2001,
                1e-13,
            );
            let (f1, f2) = phase_qudit_asym_t(d, t, th);
            Ok(QuditPhase { alpha: t.cos(), beta: t.sin(), f1, f2 })
        }
    }
}

fn phase_qudit_asym_t(d: usize, t: f64, theta: f64) -> (f64, f64) {
    let df = d as f64;
    let (alpha, beta) = (t.cos(), t.sin());
    let f = |c: f64| {
        1.0 / df
            + 2.0 * alpha * beta * (df - 1.0).sqrt() * c / df
            + beta * beta * (df - 2.0) * c * c / df
    };
    (f(theta.cos()), f(theta.sin()))
}

/// Isometry C^d → (copy₁, copy₂, ancilla) of the asymmetric qudit phase cloner.
pub fn phase_qudit_isometry(d: usize, alpha: f64, theta: f64) -> CMat {
    let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
    let g = beta / ((d - 1) as f64).sqrt();
    let at = |a: usize, b: usize, anc: usize| (a * d + b) * d + anc;
    let mut v = CMat::zeros(d * d * d, d);
    for i in 0..d {
        v[(at(i, i, i), i)] = r(alpha);
        for j in (0..d).filter(|&j| j != i) {
            v[(at(i, j, j), i)] += r(g * theta.cos());
            v[(at(j, i, j), i)] += r(g * theta.sin());
        }
    }
    v
}

/// Max F₂ over the asymmetric qudit phase family subject to F₁ = `f1`.
pub fn phase_qudit_frontier(d: usize, f1: f64) -> Result<f64> {
    let mut best: Option<f64> = None;
    let (nt, nth) = (600, 600);
    for a in 0..=nth {
        let th = PI / 2.0 * a as f64 / nth as f64;
        let g = |t: f64| phase_qudit_asym_t(d, t, th).0 - f1;
        let mut prev = (0.0, g(0.0));
        for i in 1..=nt {
            let t = PI * i as f64 / nt as f64;
            let cur = (t, g(t));
            if prev.1.signum() != cur.1.signum() {
                let root = bisect(g, prev.0, cur.0, 1e-14)?;
                let f2 = phase_qudit_asym_t(d, root, th).1;
                best = Some(best.map_or(f2, |b: f64| b.max(f2)));
            }
            prev = cur;
        }
    }
    best.ok_or_else(|| Error::Optimizer(format!("F₁ = {f1} not reachable")))
}

/// Amplitude-matrix parameters of the cloner for g+1 mutually unbiased bases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MubCloneParams {
    pub d: usize,
    pub g: usize,
    pub f_b: f64,
    pub v: f64,
    pub x: f64,
    pub y: f64,
}

/// Allowed v interval for which x and y are real.
pub fn mub_v_range(d: usize, g: usize, f_b: f64) -> (f64, f64) {
    let gf = g as f64;
    let lo = (((gf + 1.0) * f_b - 1.0) / gf).max(0.0).sqrt();
    if g == d {
        (lo, lo)
    } else {
        (lo, f_b.sqrt())
    }
}

impl MubCloneParams {
    pub fn new(d: usize, g: usize, f_b: f64, v: f64) -> Result<Self> {
        if !is_prime(d) {
            return Err(Error::NotPrime(d));
        }
        if g == 0 || g > d {
            return Err(Error::InvalidArgument(format!("g = {g} outside 1..=d")));
        }
        if !(0.0..=1.0).contains(&f_b) {
            return Err(Error::InvalidArgument(format!("F_B = {f_b} outside [0,1]")));
        }
        let (lo, hi) = mub_v_range(d, g, f_b);
        if v < lo - 1e-12 || v > hi + 1e-12 {
            return Err(Error::InvalidArgument(format!("v = {v} outside [{lo}, {hi}]")));
        }
        let (df, gf) = (d as f64, g as f64);
        let x = ((f_b - v * v) / (df - 1.0)).max(0.0).sqrt();
        let y = if g == d {
            0.0
        } else {
            ((1.0 + gf * v * v - (gf + 1.0) * f_b) / ((df - 1.0) * (df - gf))).max(0.0).sqrt()
        };
        Ok(Self { d, g, f_b, v, x, y })
    }

    /// a_{mn}: v at (0,0), x on row 0 and at n = km (k < g), y elsewhere.
    pub fn amplitude_matrix(&self) -> Result<AmplitudeMatrix> {
        let d = self.d;
        let mut a = CMat::from_element(d, d, r(self.y));
        a[(0, 0)] = r(self.v);
        for n in 1..d {
            a[(0, n)] = r(self.x);
        }
        for m in 1..d {
            for k in 0..self.g {
                a[(m, (k * m) % d)] = r(self.x);
            }
        }
        AmplitudeMatrix::new(a)
    }

    /// Eve's fidelity (1/d){[v+(d−1)x]² + (d−1)[gx+(d−g)y]²}.
    pub fn eve_fidelity(&self) -> f64 {
        let (df, gf) = (self.d as f64, self.g as f64);
        ((self.v + (df - 1.0) * self.x).powi(2)
            + (df - 1.0) * (gf * self.x + (df - gf) * self.y).powi(2))
            / df
    }
}

/// (F_B, F_E) of the g+1 MUB cloner at a given v.
pub fn mub_cloner(d: usize, g: usize, f_b: f64, v: f64) -> Result<(f64, f64)> {
    let p = MubCloneParams::new(d, g, f_b, v)?;
    Ok((f_b, p.eve_fidelity()))
}

/// Eve's optimum over v at fixed F_B; returns the maximizing parameters.
pub fn mub_eve_max(d: usize, g: usize, f_b: f64) -> Result<MubCloneParams> {
    let (lo, hi) = mub_v_range(d, g, f_b);
    let v = if hi - lo < 1e-15 {
        lo
    } else {
        let f = |v: f64| MubCloneParams::new(d, g, f_b, v).map(|p| p.eve_fidelity()).unwrap_or(f64::MIN);
        scan_max(f, lo, hi, 10_000, 1e-13).0
    };
    MubCloneParams::new(d, g, f_b, v)
}

/// Symmetric fidelity F_B = F_E of the g+1 MUB cloner.
///
/// g = d is the universal limit (d+3)/(2d+2).
pub fn mub_symmetric_fidelity(d: usize, g: usize) -> Result<f64> {
    if !is_prime(d) {
        return Err(Error::NotPrime(d));
    }
    if g == 0 || g > d {
        return Err(Error::InvalidArgument(format!("g = {g} outside 1..=d")));
    }
    let (df, gf) = (d as f64, g as f64);
    if g == d {
        return Ok((df + 3.0) / (2.0 * df + 2.0));
    }
    let root = ((gf + 3.0).powi(2) - 8.0 * (df - gf) * (gf + 1.0) / df).sqrt();
    [gf + 3.0 - root, gf + 3.0 + root]
        .into_iter()
        .map(|den| 2.0 / df * (df - gf) / den)
        .find(|f| (1.0 / df..=1.0).contains(f))
        .ok_or_else(|| Error::Optimizer("no symmetric branch in [1/d, 1]".into()))
}

/// Two-basis trade-off F_E(F) for g = 1.
pub fn mub_tradeoff_g1(d: usize, f: f64) -> f64 {
    let df = d as f64;
    f / df + (df - 1.0) * (1.0 - f) / df + 2.0 / df * ((df - 1.0) * f * (1.0 - f)).sqrt()
}

/// Fidelities for cloning two states with overlap S.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStateFidelities {
    /// Maximal global fidelity F_g.
    pub global: f64,
    /// Local fidelity of the global-optimal machine, F_l1.
    pub local_of_global: f64,
    /// Local fidelity of the optimal eavesdropping machine, F_l2.
    pub eavesdrop: f64,
    /// Maximal local fidelity F_l3.
    pub local_optimal: f64,
}

pub fn two_state_clone(s: f64) -> Result<TwoStateFidelities> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidArgument(format!("S = {s} outside [0,1]")));
    }
    let c2 = (1.0 - s * s).sqrt();
    let global = 0.25 * ((1.0 + s * s).sqrt() * (1.0 + s).sqrt() + c2 * (1.0 - s).sqrt()).powi(2);
    let local_of_global =
        0.5 * (1.0 + (1.0 - s * s) / (1.0 + s * s).sqrt() + s * s * (1.0 + s) / (1.0 + s * s));
    let s2 = s * s;
    let eavesdrop = 0.5
        + 2f64.sqrt() / 4.0
            * ((1.0 - 2.0 * s2 + 2.0 * s2 * s + s2 * s2)
                + (1.0 - s2) * ((1.0 + s) * (1.0 - s + 3.0 * s2 - s2 * s)).sqrt())
            .sqrt();
    let q = (1.0 - 2.0 * s + 9.0 * s2).sqrt();
    let local_optimal = if s < 0.25 {
        // cancellation-free form of the small-S branch
        let den = (1.0 - s) * q + 1.0 - 2.0 * s - 3.0 * s2;
        0.5 + 2f64.sqrt() / 8.0 * (1.0 + s) * (3.0 - 3.0 * s + q) * ((1.0 - 2.0 * s) / den).sqrt()
    } else {
        let inner = -1.0 + 2.0 * s + 3.0 * s2 + (1.0 - s) * q;
        0.5 + 2f64.sqrt() / (32.0 * s) * (1.0 + s) * (3.0 - 3.0 * s + q) * inner.max(0.0).sqrt()
    };
    Ok(TwoStateFidelities { global, local_of_global, eavesdrop, local_optimal })
}

/// Best symmetric cloner found for a finite input set.
#[derive(Debug, Clone)]
pub struct MinimalSetResult {
    /// Columns are the images of |0⟩, |1⟩ in Sym²(C²) ⊗ C^k.
    pub isometry: CMat,
    pub mean_fidelity: f64,
    pub fidelities: Vec<f64>,
    pub converged: bool,
}

/// Options for [`minimal_set_optimizer`].
#[derive(Debug, Clone, Copy)]
pub struct MinimalSetOptions {
    /// Ancilla dimension; 1 means economic.
    pub ancilla: usize,
    pub starts: usize,
    pub seed: u64,
    /// Penalize unequal fidelities across inputs.
    pub equal_fidelity: bool,
}

impl Default for MinimalSetOptions {
    fn default() -> Self {
        Self { ancilla: 1, starts: 20, seed: 1, equal_fidelity: false }
    }
}

fn params_to_isometry(p: &[f64], k: usize) -> CMat {
    let n = 3 * k;
    let mut m = CMat::from_fn(n, 2, |i, j| c(p[2 * i + j], p[2 * n + 2 * i + j]));
    for j in 0..2 {
        for prev in 0..j {
            let proj = m.column(prev).dotc(&m.column(j));
            let col = m.column(j) - m.column(prev) * proj;
            m.set_column(j, &col);
        }
        let nrm = m.column(j).norm().max(1e-300);
        let col = m.column(j) / r(nrm);
        m.set_column(j, &col);
    }
    m
}

fn sym_copy_fidelity(v: &CMat, k: usize, psi: &CVec) -> f64 {
    let out = v * psi;
    let s = 1.0 / 2f64.sqrt();
    // amplitudes T[q1][q2][a] from the symmetric basis |00⟩, |S⟩, |11⟩
    let mut t = [[vec![C64::new(0.0, 0.0); k], vec![C64::new(0.0, 0.0); k]], [
        vec![C64::new(0.0, 0.0); k],
        vec![C64::new(0.0, 0.0); k],
    ]];
    for a in 0..k {
        t[0][0][a] = out[a];
        t[0][1][a] = out[k + a] * s;
        t[1][0][a] = out[k + a] * s;
        t[1][1][a] = out[2 * k + a];
    }
    let mut f = 0.0;
    for q2 in 0..2 {
        for a in 0..k {
            let amp = psi[0].conj() * t[0][q2][a] + psi[1].conj() * t[1][q2][a];
            f += amp.norm_sqr();
        }
    }
    f
}

/// Multi-start search for the symmetric qubit cloner maximizing the mean
/// single-copy fidelity over `inputs`.
pub fn minimal_set_optimizer(inputs: &[StateVector], opts: MinimalSetOptions) -> Result<MinimalSetResult> {
    if inputs.len() < 2 {
        return Err(Error::InvalidArgument("need at least two input states".into()));
    }
    if inputs.iter().any(|s| s.dims() != [2]) {
        return Err(Error::DimMismatch("inputs must be qubits".into()));
    }
    let k = opts.ancilla.max(1);
    let evaluate = |p: &[f64]| {
        let v = params_to_isometry(p, k);
        inputs.iter().map(|s| sym_copy_fidelity(&v, k, s.amps())).collect::<Vec<_>>()
    };
    let objective = |p: &[f64]| {
        let f = evaluate(p);
        let mean = f.iter().sum::<f64>() / f.len() as f64;
        if opts.equal_fidelity {
            let spread = f.iter().cloned().fold(f64::MIN, f64::max) - f.iter().cloned().fold(f64::MAX, f64::min);
            mean - 10.0 * spread
        } else {
            mean
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let best = multistart(objective, 12 * k, opts.starts, &mut rng, 1e-10);
    let fidelities = evaluate(&best.x);
    let mean_fidelity = fidelities.iter().sum::<f64>() / fidelities.len() as f64;
    Ok(MinimalSetResult {
        isometry: params_to_isometry(&best.x, k),
        mean_fidelity,
        fidelities,
        converged: best.converged,
    })
}

/// Single-copy fidelity of a [`MinimalSetResult`] machine on an arbitrary qubit.
pub fn minimal_set_fidelity(res: &MinimalSetResult, psi: &StateVector) -> f64 {
    let k = res.isometry.nrows() / 3;
    sym_copy_fidelity(&res.isometry, k, psi.amps())
}

/// Symmetric optimum of the qudit phase cloner by direct maximization over α.
pub fn phase_qudit_numeric(d: usize) -> f64 {
    golden_max(|t| phase_qudit_fidelity(d, t.cos(), t.sin()), 0.0, PI / 2.0, 1e-13).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{mub, seeded_rng};
    use crate::uqcm::uqcm_f1;

    const F_PHASE: f64 = 0.853_553_390_593_273_7;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn economic_values() {
        let (fa, fb, _) = economic_phase_1to2(0.4, PI / 4.0).unwrap();
        assert!(close(fa, 0.5 + 1.0 / 8f64.sqrt(), 1e-12) && close(fb, fa, 1e-12));
        let (fa, fb, _) = economic_phase_1to2(2.0, 0.0).unwrap();
        assert!(close(fa, 1.0, 1e-12) && close(fb, 0.5, 1e-12));
        for eta in [0.1, 0.7, 1.3] {
            let (fa, fb, _) = economic_phase_1to2(1.0, eta).unwrap();
            assert!(close(fa, (1.0 + eta.cos()) / 2.0, 1e-12));
            assert!(close(fb, (1.0 + eta.sin()) / 2.0, 1e-12));
        }
        assert!(economic_phase_1to2(0.0, 2.0).is_err());
    }

    #[test]
    fn economic_phase_independent() {
        let vals: Vec<f64> = (0..32)
            .map(|k| economic_phase_1to2(2.0 * PI * k as f64 / 32.0, 0.6).unwrap().0)
            .collect();
        let spread = vals.iter().cloned().fold(f64::MIN, f64::max) - vals.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-12);
    }

    #[test]
    fn scalar_form_only_for_ancilla_machine() {
        let v = non_economic_phase_isometry();
        assert!((v.adjoint() * &v - CMat::identity(2, 2)).norm() < 1e-14);
        for phi in [0.3, 1.7, 4.0] {
            let psi = EquatorialQubit::new(phi).state();
            let out = StateVector::new(vec![2, 2, 2], &v * psi.amps()).unwrap();
            let rho = out.reduced(&[0]).unwrap();
            let eta = 1.0 / 2f64.sqrt();
            let want = psi.density().into_mat() * r(eta) + CMat::identity(2, 2) * r((1.0 - eta) / 2.0);
            assert!((rho.mat() - &want).norm() < 1e-12);
            let (_, _, eco) = economic_phase_1to2(phi, PI / 4.0).unwrap();
            let rho_e = eco.reduced(&[0]).unwrap();
            assert!((rho_e.mat() - &want).norm() > 0.1);
            assert!(close(rho_e.mat()[(0, 0)].re, 0.75, 1e-12));
        }
    }

    #[test]
    fn one_to_m_closed_forms() {
        assert!(close(phase_1tom_fidelity(2), F_PHASE, 1e-12));
        assert!(close(phase_1tom_fidelity(3), 5.0 / 6.0, 1e-12));
        assert!(close(phase_1tom_fidelity(4), 0.5 + 24f64.sqrt() / 16.0, 1e-12));
        let a = [0.0, 1.0, 0.0];
        assert!(close(phase_eta(&a), 2.0 / 3.0, 1e-14));
    }

    #[test]
    fn one_to_m_simulation() {
        for m in 2..=7 {
            let pm = phase_1tom(m).unwrap();
            assert!(close(pm.simulated, pm.fidelity, 1e-10), "M={m}");
            let v = phase_1tom_isometry(&pm.alphas).unwrap();
            assert!((v.adjoint() * &v - CMat::identity(2, 2)).norm() < 1e-12);
            for phi in [0.0, 1.1, 2.9] {
                for f in copy_fidelities(&v, m, phi).unwrap() {
                    assert!(close(f, pm.fidelity, 1e-10));
                }
            }
            let e = economic_phase_1tom_isometry(m).unwrap();
            for f in copy_fidelities(&e, m, 0.5).unwrap() {
                assert!(close(f, pm.fidelity, 1e-10), "economic M={m}");
            }
        }
    }

    #[test]
    fn eta_formula_matches_simulation_for_random_alphas() {
        use rand::Rng;
        let mut rng = seeded_rng(8);
        for m in [2, 3, 4, 5] {
            let raw: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
            let n = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            let a: Vec<f64> = raw.iter().map(|x| x / n).collect();
            let v = phase_1tom_isometry(&a).unwrap();
            let f = copy_fidelities(&v, m, 1.3).unwrap()[0];
            assert!(close(f, 0.5 * (1.0 + phase_eta(&a)), 1e-12), "M={m}");
        }
    }

    #[test]
    fn block_matrix_bound() {
        for m in 2..=9 {
            assert!(close(phase_matrix_bound(m).unwrap(), phase_1tom_fidelity(m), 1e-10));
        }
        let b = 0.25 * (1.0 + 2f64.sqrt() / 2.0);
        assert!(close(phase_matrix_bound(2).unwrap(), 2.0 * b, 1e-14));
    }

    #[test]
    fn qudit_phase_optimum() {
        let q = phase_qudit_1to2(2, None).unwrap();
        assert!(close(q.f1, F_PHASE, 1e-12));
        let q = phase_qudit_1to2(3, None).unwrap();
        assert!(close(q.f1, (5.0 + 17f64.sqrt()) / 12.0, 1e-12));
        for d in 2..=7 {
            let (a, b, f) = phase_qudit_optimal(d);
            assert!(close(phase_qudit_fidelity(d, a, b), f, 1e-12));
            assert!(close(phase_qudit_numeric(d), f, 1e-12));
            assert!(f > uqcm_f1(d, 1, 2));
        }
    }

    #[test]
    fn qudit_phase_simulation() {
        use rand::Rng;
        let mut rng = seeded_rng(10);
        for d in [2, 3, 4] {
            for (alpha, theta) in [(0.5, PI / 4.0), (0.3, 0.4), (-0.2, 1.2)] {
                let v = phase_qudit_isometry(d, alpha, theta);
                assert!((v.adjoint() * &v - CMat::identity(d, d)).norm() < 1e-12);
                let amps: Vec<C64> = (0..d)
                    .map(|_| C64::from_polar(1.0 / (d as f64).sqrt(), rng.random_range(0.0..2.0 * PI)))
                    .collect();
                let psi = StateVector::qudit(&amps).unwrap();
                let out = StateVector::new(vec![d, d, d], &v * psi.amps()).unwrap();
                let f1 = fidelity(&out.reduced(&[0]).unwrap(), &psi).unwrap();
                let f2 = fidelity(&out.reduced(&[1]).unwrap(), &psi).unwrap();
                let (w1, w2) = phase_qudit_asym(d, alpha, theta);
                assert!(close(f1, w1, 1e-12) && close(f2, w2, 1e-12), "d={d}");
            }
        }
        let sym = phase_qudit_1to2(3, Some(PI / 4.0)).unwrap();
        assert!(close(sym.f1, (5.0 + 17f64.sqrt()) / 12.0, 1e-10));
    }

    #[test]
    fn mub_cloner_examples() {
        let f = mub_symmetric_fidelity(2, 1).unwrap();
        assert!(close(f, F_PHASE, 1e-12));
        assert!(close(f, phase_qudit_optimal(2).2, 1e-12));
        for d in [3, 5, 7] {
            let f = mub_symmetric_fidelity(d, d - 1).unwrap();
            assert!(close(f, phase_qudit_optimal(d).2, 1e-12), "d={d}");
        }
        assert!(close(mub_symmetric_fidelity(3, 3).unwrap(), uqcm_f1(3, 1, 2), 1e-15));
        // limit g → d of the closed form
        let d = 5.0;
        let g = 5.0 - 1e-7;
        let root = ((g + 3.0f64).powi(2) - 8.0 * (d - g) * (g + 1.0) / d).sqrt();
        let lim = 2.0 / d * (d - g) / (g + 3.0 - root);
        assert!(close(lim, uqcm_f1(5, 1, 2), 1e-6));
    }

    #[test]
    fn mub_symmetric_matches_root_of_tradeoff() {
        for (d, g) in [(2, 1), (3, 1), (3, 2), (5, 2), (5, 4), (7, 3)] {
            let h = |f: f64| mub_eve_max(d, g, f).unwrap().eve_fidelity() - f;
            let root = bisect(h, 1.0 / d as f64 + 1e-9, 1.0, 1e-12).unwrap();
            assert!(close(root, mub_symmetric_fidelity(d, g).unwrap(), 1e-7), "d={d} g={g}");
        }
    }

    #[test]
    fn mub_two_basis_tradeoff() {
        for d in [2, 3, 5] {
            for f in [0.5, 0.7, 0.9, 0.99] {
                let p = mub_eve_max(d, 1, f).unwrap();
                assert!(close(p.eve_fidelity(), mub_tradeoff_g1(d, f), 1e-9), "d={d} F={f}");
            }
        }
    }

    #[test]
    fn mub_perfect_bob_leaves_eve_random() {
        for (d, g) in [(2, 1), (3, 2), (5, 3), (5, 5)] {
            let p = mub_eve_max(d, g, 1.0).unwrap();
            assert!(close(p.eve_fidelity(), 1.0 / d as f64, 1e-12));
        }
    }

    #[test]
    fn mub_amplitudes_reproduce_fidelities_on_bases() {
        for (d, g) in [(3, 1), (3, 2), (5, 2), (5, 4)] {
            let fam = mub(d).unwrap();
            let p = mub_eve_max(d, g, 0.8).unwrap();
            let a = p.amplitude_matrix().unwrap();
            let b = a.fourier();
            let comp = StateVector::basis(vec![d], 1);
            let bob = a.apply_channel(&comp).unwrap();
            assert!(close(fidelity(&bob, &comp).unwrap(), 0.8, 1e-10));
            let eve = b.apply_channel(&comp).unwrap();
            assert!(close(fidelity(&eve, &comp).unwrap(), p.eve_fidelity(), 1e-10));
            for k in 0..g {
                let s = fam.state(k, 2);
                let bob = a.apply_channel(s).unwrap();
                assert!(close(fidelity(&bob, s).unwrap(), 0.8, 1e-10), "d={d} g={g} k={k}");
            }
        }
    }

    #[test]
    fn asymmetric_mub_and_phase_frontiers_agree() {
        for d in [3, 5] {
            for f in [0.6, 0.75, 0.9] {
                let phase = phase_qudit_frontier(d, f).unwrap();
                let m = mub_eve_max(d, d - 1, f).unwrap().eve_fidelity();
                assert!(close(phase, m, 1e-3), "d={d} F={f}: {phase} vs {m}");
            }
        }
    }

    #[test]
    fn two_state_values() {
        let z = two_state_clone(0.0).unwrap();
        assert!(close(z.local_optimal, 1.0, 1e-12));
        assert!(close(z.global, 1.0, 1e-12));
        let one = two_state_clone(1.0).unwrap();
        assert!(close(one.local_optimal, 1.0, 1e-12));
        let half = two_state_clone(0.5).unwrap();
        assert!(close(half.local_optimal, 0.987, 5e-4));
        let mut min = (f64::MAX, 0.0);
        for i in 0..=1000 {
            let s = i as f64 / 1000.0;
            let t = two_state_clone(s).unwrap();
            if t.local_optimal < min.0 {
                min = (t.local_optimal, s);
            }
            assert!(t.local_optimal >= t.eavesdrop - 1e-12);
            assert!(t.local_optimal >= t.local_of_global - 1e-12);
            assert!(t.local_of_global > 5.0 / 6.0);
        }
        assert!(close(min.1, 0.5, 1e-3));
        assert!(two_state_clone(1.5).is_err());
    }

    #[test]
    fn small_overlap_branch_is_continuous() {
        let a = two_state_clone(0.25 - 1e-12).unwrap().local_optimal;
        let b = two_state_clone(0.25 + 1e-12).unwrap().local_optimal;
        assert!(close(a, b, 1e-10));
    }

    #[test]
    fn global_fidelity_geometric_oracle() {
        // symmetric placement of the two outputs in span{|aa⟩, |bb⟩}
        for s in [0.1f64, 0.3, 0.5, 0.8, 0.95] {
            let want = ((s.acos() - (s * s).acos()) / 2.0).cos().powi(2);
            assert!(close(two_state_clone(s).unwrap().global, want, 1e-12));
        }
    }

    fn equator(n: usize, offset: f64) -> Vec<StateVector> {
        (0..n).map(|t| EquatorialQubit::new(offset + 2.0 * PI * t as f64 / n as f64).state()).collect()
    }

    #[test]
    fn minimal_three_state_set() {
        let opts = MinimalSetOptions { starts: 6, ..Default::default() };
        let res = minimal_set_optimizer(&equator(3, 0.0), opts).unwrap();
        assert!(close(res.mean_fidelity, F_PHASE, 1e-4), "{}", res.mean_fidelity);
        for phi in [0.2, 1.0, 2.5, 5.0] {
            let f = minimal_set_fidelity(&res, &EquatorialQubit::new(phi).state());
            assert!(close(f, F_PHASE, 1e-4));
        }
    }

    #[test]
    fn minimal_bb84_set() {
        let opts = MinimalSetOptions { starts: 6, ..Default::default() };
        let res = minimal_set_optimizer(&equator(4, 0.0), opts).unwrap();
        assert!(close(res.mean_fidelity, F_PHASE, 1e-4));
    }

    #[test]
    fn minimal_tetrahedron_set() {
        let c0 = 3f64.sqrt() / 3.0;
        let theta = 2.0 * c0.acos();
        let mut states = vec![StateVector::basis(vec![2], 0)];
        for t in 0..3 {
            states.push(StateVector::bloch(theta, 2.0 * PI * t as f64 / 3.0));
        }
        let opts = MinimalSetOptions { ancilla: 2, starts: 6, ..Default::default() };
        let res = minimal_set_optimizer(&states, opts).unwrap();
        assert!(close(res.mean_fidelity, 5.0 / 6.0, 1e-3), "{}", res.mean_fidelity);
        let eco = minimal_set_optimizer(&states, MinimalSetOptions { starts: 6, ..Default::default() }).unwrap();
        assert!(eco.mean_fidelity < 5.0 / 6.0 - 1e-3);
    }

    #[test]
    fn optimizer_rejects_bad_input() {
        assert!(minimal_set_optimizer(&equator(1, 0.0), MinimalSetOptions::default()).is_err());
    }
}
