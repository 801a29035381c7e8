//! Telecloning: a Bell measurement on the input and a port particle, followed by
//! local recovery unitaries (LRUO) on the receivers.

use crate::combin::sym_dim;
use crate::error::{Error, Result};
use crate::linalg::{
    bell_state, fidelity, kron_all, omega, partial_trace, r, sym_basis, sym_embed, CMat, CVec,
    DensityMatrix, StateVector,
};
use crate::tol;

/// Telecloning resource Σ_j x_j |j⟩_P |φ_j⟩ together with its recovery rule.
#[derive(Debug, Clone)]
pub struct Teleclone {
    d: usize,
    weights: Vec<f64>,
    phis: Vec<StateVector>,
    /// Per-site phase sign s in Σ_j ω^{s·jn} |j⟩⟨j+m|.
    signs: Vec<i64>,
    /// Whether the recovery also undoes the shift m.
    shift: bool,
    receivers: Vec<usize>,
}

/// One Bell outcome (m, n) with the corrected receiver-side state.
#[derive(Debug, Clone)]
pub struct TeleBranch {
    pub m: usize,
    pub n: usize,
    pub probability: f64,
    pub state: StateVector,
}

impl Teleclone {
    /// Resource with weights x_j and output basis φ_j (all on the same sites).
    pub fn new(
        weights: Vec<f64>,
        phis: Vec<StateVector>,
        signs: Vec<i64>,
        shift: bool,
        receivers: Vec<usize>,
    ) -> Result<Self> {
        let d = phis.len();
        if d < 2 || weights.len() != d {
            return Err(Error::DimMismatch("one weight per output state".into()));
        }
        let dims = phis[0].dims().to_vec();
        if phis.iter().any(|p| p.dims() != dims.as_slice()) || dims.iter().any(|&k| k != d) {
            return Err(Error::DimMismatch("output states must be qudits of the input dimension".into()));
        }
        if signs.len() != dims.len() || receivers.iter().any(|&k| k >= dims.len()) {
            return Err(Error::DimMismatch("sign or receiver index out of range".into()));
        }
        let norm: f64 = weights.iter().map(|x| x * x).sum();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::Normalization(format!("Σ x_j² = {norm}")));
        }
        Ok(Self { d, weights, phis, signs, shift, receivers })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn phi(&self, j: usize) -> &StateVector {
        &self.phis[j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Sites of the output register, excluding the port.
    pub fn sites(&self) -> usize {
        self.phis[0].dims().len()
    }

    /// |ξ⟩ on port ⊗ outputs.
    pub fn resource(&self) -> StateVector {
        let mut v = CVec::zeros(self.d * self.phis[0].dim());
        for (j, (x, phi)) in self.weights.iter().zip(&self.phis).enumerate() {
            v += StateVector::basis(vec![self.d], j).amps().kronecker(phi.amps()) * r(*x);
        }
        let mut dims = vec![self.d];
        dims.extend_from_slice(self.phis[0].dims());
        StateVector::new(dims, v).expect("orthonormal outputs give a unit resource")
    }

    /// Recovery unitary for Bell outcome (m, n).
    pub fn lruo(&self, m: usize, n: usize) -> CMat {
        let d = self.d;
        let shift = if self.shift { m } else { 0 };
        let ops: Vec<CMat> = self
            .signs
            .iter()
            .map(|&s| {
                let mut u = CMat::zeros(d, d);
                for j in 0..d {
                    u[(j, (j + shift) % d)] = omega(d, s * (j * n) as i64);
                }
                u
            })
            .collect();
        kron_all(&ops)
    }

    /// All d² measurement branches for input `psi`.
    pub fn run(&self, psi: &StateVector) -> Result<Vec<TeleBranch>> {
        let d = self.d;
        if psi.dims() != [d] {
            return Err(Error::DimMismatch(format!("input must be a single qudit of dim {d}")));
        }
        let xi = self.resource();
        let rest = self.phis[0].dim();
        tol::check_dim(d * d * rest)?;
        let mut out = Vec::with_capacity(d * d);
        for m in 0..d {
            for n in 0..d {
                let bell = bell_state(d, m, n);
                let mut amp = CVec::zeros(rest);
                for x in 0..d {
                    for p in 0..d {
                        let w = bell.amps()[x * d + p].conj() * psi.amps()[x];
                        if w.norm() == 0.0 {
                            continue;
                        }
                        amp += xi.amps().rows(p * rest, rest) * w;
                    }
                }
                let probability = amp.norm_squared();
                let amp = self.lruo(m, n) * amp;
                let state = StateVector::normalized(self.phis[0].dims().to_vec(), amp)?;
                out.push(TeleBranch { m, n, probability, state });
            }
        }
        Ok(out)
    }

    /// Joint state of the receivers in one branch.
    pub fn receivers(&self, branch: &TeleBranch) -> Result<DensityMatrix> {
        partial_trace(&branch.state.density(), &self.receivers)
    }

    /// Single-receiver fidelities ⟨ψ|ρ_k|ψ⟩ in one branch.
    pub fn fidelities(&self, branch: &TeleBranch, psi: &StateVector) -> Result<Vec<f64>> {
        let rho = branch.state.density();
        self.receivers.iter().map(|&k| fidelity(&partial_trace(&rho, &[k])?, psi)).collect()
    }
}

/// Symmetric 1 → M telecloning. Output sites are M−1 ancillas followed by M receivers.
pub fn teleclone_channel(d: usize, m: usize) -> Result<Teleclone> {
    if d < 2 || m < 1 {
        return Err(Error::InvalidArgument(format!("need d >= 2, M >= 1 (d={d}, M={m})")));
    }
    tol::check_dim(d.pow((2 * m) as u32))?;
    let rest = d.pow((m - 1) as u32);
    let mut phis = vec![CVec::zeros(rest * d.pow(m as u32)); d];
    for occ in sym_basis(d, m) {
        let xi = sym_embed(&occ)?;
        for (j, phi) in phis.iter_mut().enumerate() {
            // ⟨j|_P on the first site of |ξ_k⟩
            *phi += xi.amps().rows(j * rest, rest).kronecker(xi.amps());
        }
    }
    let scale = (d as f64 / sym_dim(d, m) as f64).sqrt();
    let phis = phis
        .into_iter()
        .map(|v| StateVector::new(vec![d; 2 * m - 1], v * r(scale)))
        .collect::<Result<Vec<_>>>()?;
    let mut signs = vec![-1; m - 1];
    signs.extend(vec![1; m]);
    let receivers = (m - 1..2 * m - 1).collect();
    Teleclone::new(vec![1.0 / (d as f64).sqrt(); d], phis, signs, true, receivers)
}

/// Bob's and Claire's fidelities (1+p²)/(1+p²+q²) and (1+q²)/(1+p²+q²).
pub fn asym_teleclone_1to2(p: f64, q: f64) -> Result<(f64, f64)> {
    check_pq(p, q)?;
    let n = 1.0 + p * p + q * q;
    Ok(((1.0 + p * p) / n, (1.0 + q * q) / n))
}

/// Qudit fidelities (F_C1, F_C2) = ((1+(d−1)p²)/N, (1+(d−1)q²)/N), N = 1+(d−1)(p²+q²).
pub fn asym_teleclone_qudit(d: usize, p: f64) -> Result<(f64, f64)> {
    let q = 1.0 - p;
    check_pq(p, q)?;
    let k = d as f64 - 1.0;
    let n = 1.0 + k * (p * p + q * q);
    Ok(((1.0 + k * p * p) / n, (1.0 + k * q * q) / n))
}

fn check_pq(p: f64, q: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) || (p + q - 1.0).abs() > tol::EXACT {
        return Err(Error::InvalidArgument(format!("need p, q in [0,1] with p+q=1 (p={p}, q={q})")));
    }
    Ok(())
}

/// Qubit asymmetric channel on (ancilla, Bob, Claire).
pub fn asym_teleclone_qubit_channel(p: f64, q: f64) -> Result<Teleclone> {
    check_pq(p, q)?;
    let s = 1.0 / (1.0 + p * p + q * q).sqrt();
    let state = |terms: [(usize, f64); 3]| {
        let mut v = CVec::zeros(8);
        for (idx, a) in terms {
            v[idx] = r(a * s);
        }
        StateVector::new(vec![2; 3], v)
    };
    // φ₀ = |000⟩ + p|101⟩ + q|110⟩, φ₁ = |111⟩ + p|010⟩ + q|001⟩
    let phi0 = state([(0b000, 1.0), (0b101, p), (0b110, q)])?;
    let phi1 = state([(0b111, 1.0), (0b010, p), (0b001, q)])?;
    let h = 1.0 / 2f64.sqrt();
    Teleclone::new(vec![h, h], vec![phi0, phi1], vec![1, 1, 1], true, vec![1, 2])
}

/// Qudit asymmetric channel on (C₁, C₂, ancilla):
/// |φ_j⟩ = Σ b_{m,r} |j+m⟩|j+r⟩|j+m+r⟩ with b from (ν, μ) at asymmetry p.
pub fn asym_teleclone_qudit_channel(d: usize, p: f64) -> Result<Teleclone> {
    let q = 1.0 - p;
    check_pq(p, q)?;
    let df = d as f64;
    let s = (df / (1.0 + (df - 1.0) * (p * p + q * q))).sqrt();
    let mu = q * s / df;
    let nu = p * s + mu;
    let b = |m: usize, rr: usize| match (m, rr) {
        (0, 0) => (nu + (df - 1.0) * mu) / df.sqrt(),
        (_, 0) => df.sqrt() * mu,
        (0, _) => (nu - mu) / df.sqrt(),
        _ => 0.0,
    };
    let phis = (0..d)
        .map(|j| {
            let mut v = CVec::zeros(d * d * d);
            for m in 0..d {
                for rr in 0..d {
                    let (a, bb, c) = ((j + m) % d, (j + rr) % d, (j + m + rr) % d);
                    v[(a * d + bb) * d + c] += r(b(m, rr));
                }
            }
            StateVector::new(vec![d; 3], v)
        })
        .collect::<Result<Vec<_>>>()?;
    Teleclone::new(vec![1.0 / df.sqrt(); d], phis, vec![1, 1, -1], true, vec![0, 1])
}

/// Economical 1 → 2 phase-covariant telecloning of qudits.
#[derive(Debug, Clone)]
pub struct EconTeleclone {
    pub channel: Teleclone,
    /// Total probability of the m = 0 outcomes.
    pub success_probability: f64,
    /// Conditional fidelity on success.
    pub fidelity: f64,
    /// Entanglement entropy of the resource across port | clones, in bits.
    pub entropy: f64,
}

/// x₀ = X(d), x_{j≠0} = Y(d) with D = √(d²+4d−4).
pub fn econ_weights(d: usize) -> Vec<f64> {
    let df = d as f64;
    let dd = (df * df + 4.0 * df - 4.0).sqrt();
    let x = (4.0 * (df - 1.0) / (dd * (dd + df - 2.0))).sqrt();
    let y = ((df * df + (df - 2.0) * dd) / (dd * (dd + df - 2.0) * (df - 1.0))).sqrt();
    let mut w = vec![y; d];
    w[0] = x;
    w
}

/// Success-branch fidelity (1/d)(1 + √2 x₀ Σ_{j≥1} x_j + Σ_{1≤i<j} x_i x_j).
pub fn econ_teleclone_fidelity(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let tail: f64 = x[1..].iter().sum();
    let pairs: f64 = (1..x.len()).flat_map(|i| (i + 1..x.len()).map(move |j| (i, j))).map(|(i, j)| x[i] * x[j]).sum();
    (1.0 + 2f64.sqrt() * x[0] * tail + pairs) / d
}

/// Resource Σ x_j |j⟩|φ_j⟩ with φ₀ = |00⟩, φ_j = (|j0⟩+|0j⟩)/√2.
/// Recovery is the phase correction U_{0n} = diag(ω^{jn}) on both clones.
pub fn econ_phase_teleclone(d: usize) -> Result<EconTeleclone> {
    if d < 2 {
        return Err(Error::InvalidArgument("d >= 2".into()));
    }
    let h = 1.0 / 2f64.sqrt();
    let phis = (0..d)
        .map(|j| {
            let mut v = CVec::zeros(d * d);
            if j == 0 {
                v[0] = r(1.0);
            } else {
                v[j * d] = r(h);
                v[j] = r(h);
            }
            StateVector::new(vec![d, d], v)
        })
        .collect::<Result<Vec<_>>>()?;
    let x = econ_weights(d);
    let channel = Teleclone::new(x.clone(), phis, vec![1, 1], false, vec![0, 1])?;
    let entropy = channel.resource().reduced(&[0])?.entropy();
    Ok(EconTeleclone {
        channel,
        success_probability: 1.0 / d as f64,
        fidelity: econ_teleclone_fidelity(&x),
        entropy,
    })
}

/// Uniform-amplitude phase state (1/√d) Σ e^{iθ_j}|j⟩.
pub fn phase_state(thetas: &[f64]) -> Result<StateVector> {
    let s = 1.0 / (thetas.len() as f64).sqrt();
    StateVector::qudit(&thetas.iter().map(|&t| crate::linalg::C64::from_polar(s, t)).collect::<Vec<_>>())
}

/// Result of the bilateral-CNOT local copier.
#[derive(Debug, Clone)]
pub struct LocalClone {
    /// Output on (A₁, B₁, A₂, B₂).
    pub output: StateVector,
    /// Overlap |⟨Ψ⊗Ψ|output⟩|².
    pub fidelity: f64,
}

/// ADD gate |a⟩|b⟩ → |a⟩|a+b⟩ between two sites of a register.
fn add_gate(d: usize, sites: usize, control: usize, target: usize) -> CMat {
    let dim = d.pow(sites as u32);
    let mut u = CMat::zeros(dim, dim);
    for idx in 0..dim {
        let mut digits: Vec<usize> = (0..sites).map(|k| idx / d.pow((sites - 1 - k) as u32) % d).collect();
        digits[target] = (digits[target] + digits[control]) % d;
        let out = digits.iter().fold(0, |acc, &x| acc * d + x);
        u[(out, idx)] = r(1.0);
    }
    u
}

/// Copies a shared two-qudit state with a shared |Φ⁺⟩ by one ADD gate on each side.
pub fn local_clone(input: &StateVector) -> Result<LocalClone> {
    let d = input.dims()[0];
    if input.dims() != [d, d] {
        return Err(Error::DimMismatch("input must be a two-qudit state".into()));
    }
    let joint = input.kron(&bell_state(d, 0, 0));
    // sites (A₁, B₁, A₂, B₂)
    let u = add_gate(d, 4, 0, 2) * add_gate(d, 4, 1, 3);
    let output = joint.apply(&u)?;
    let fidelity = output.overlap(&input.kron(input));
    Ok(LocalClone { output, fidelity })
}

/// Local copy of the Bell state |B_{m,0}⟩ = (1/√d) Σ_k |k⟩|k+m⟩.
pub fn local_clone_bell(d: usize, m: usize) -> Result<LocalClone> {
    if d < 2 || m >= d {
        return Err(Error::InvalidArgument(format!("need d >= 2 and m < d (d={d}, m={m})")));
    }
    local_clone(&bell_state(d, m, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{haar_state, seeded_rng, unitarity_residual};
    use crate::phasecov::phase_qudit_optimal;
    use crate::uqcm::{buzek_hillery_1to2, uqcm_f1, werner_clone};

    #[test]
    fn symmetric_qubit_telecloning_matches_buzek_hillery() {
        let tc = teleclone_channel(2, 2).unwrap();
        assert!((tc.resource().amps().norm() - 1.0).abs() < 1e-12);
        let mut rng = seeded_rng(11);
        for _ in 0..5 {
            let psi = haar_state(&[2], &mut rng);
            let want = buzek_hillery_1to2(&psi).unwrap().joint;
            let branches = tc.run(&psi).unwrap();
            assert_eq!(branches.len(), 4);
            for b in &branches {
                assert!((b.probability - 0.25).abs() < 1e-12);
                let got = tc.receivers(b).unwrap();
                assert!(got.max_diff(&want) < 1e-9, "outcome ({}, {})", b.m, b.n);
            }
        }
    }

    #[test]
    fn identity_outcome_needs_no_correction() {
        let tc = teleclone_channel(3, 2).unwrap();
        assert!((tc.lruo(0, 0) - CMat::identity(27, 27)).norm() < 1e-15);
        for (m, n) in [(1, 2), (2, 1)] {
            assert!(unitarity_residual(&tc.lruo(m, n)) < 1e-12);
        }
    }

    #[test]
    fn recovery_maps_output_basis() {
        // U_{mn}|φ_{j+m}⟩ = ω^{nj}|φ_j⟩
        for (d, mm) in [(2, 3), (3, 2)] {
            let tc = teleclone_channel(d, mm).unwrap();
            for m in 0..d {
                for n in 0..d {
                    let u = tc.lruo(m, n);
                    for j in 0..d {
                        let got = &u * tc.phi((j + m) % d).amps();
                        let want = tc.phi(j).amps() * omega(d, (n * j) as i64);
                        assert!((got - want).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn qutrit_and_three_copy_telecloning() {
        let mut rng = seeded_rng(12);
        for (d, mm) in [(3, 2), (2, 3)] {
            let tc = teleclone_channel(d, mm).unwrap();
            let psi = haar_state(&[d], &mut rng);
            let want = werner_clone(&psi, 1, mm).unwrap();
            for b in tc.run(&psi).unwrap() {
                assert!((b.probability - 1.0 / (d * d) as f64).abs() < 1e-12);
                assert!(tc.receivers(&b).unwrap().max_diff(&want.joint) < 1e-9);
                for f in tc.fidelities(&b, &psi).unwrap() {
                    assert!((f - uqcm_f1(d, 1, mm)).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn asymmetric_qubit_fidelities() {
        let (fb, fc) = asym_teleclone_1to2(0.5, 0.5).unwrap();
        assert!((fb - 5.0 / 6.0).abs() < 1e-15 && (fc - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(asym_teleclone_1to2(1.0, 0.0).unwrap(), (1.0, 0.5));
        assert!(asym_teleclone_1to2(0.3, 0.3).is_err());
        for k in 0..=20 {
            let p = k as f64 / 20.0;
            let (fb, fc) = asym_teleclone_1to2(p, 1.0 - p).unwrap();
            assert!((((1.0 - fb) * (1.0 - fc)).sqrt() - (fb + fc - 1.5)).abs() < 1e-10);
        }
    }

    #[test]
    fn asymmetric_qubit_channel_simulation() {
        let mut rng = seeded_rng(13);
        for p in [0.2, 0.5, 0.9] {
            let tc = asym_teleclone_qubit_channel(p, 1.0 - p).unwrap();
            let (fb, fc) = asym_teleclone_1to2(p, 1.0 - p).unwrap();
            for _ in 0..3 {
                let psi = haar_state(&[2], &mut rng);
                for b in tc.run(&psi).unwrap() {
                    let f = tc.fidelities(&b, &psi).unwrap();
                    assert!((f[0] - fb).abs() < 1e-10 && (f[1] - fc).abs() < 1e-10, "p={p}");
                }
            }
        }
    }

    #[test]
    fn asymmetric_qudit_telecloning() {
        for d in [2, 3, 4] {
            let (f1, f2) = asym_teleclone_qudit(d, 0.5).unwrap();
            assert!((f1 - uqcm_f1(d, 1, 2)).abs() < 1e-14 && (f2 - f1).abs() < 1e-15);
        }
        let mut rng = seeded_rng(14);
        for (d, p) in [(3, 0.3), (3, 0.5), (4, 0.8)] {
            let tc = asym_teleclone_qudit_channel(d, p).unwrap();
            let (f1, f2) = asym_teleclone_qudit(d, p).unwrap();
            let psi = haar_state(&[d], &mut rng);
            for b in tc.run(&psi).unwrap() {
                let f = tc.fidelities(&b, &psi).unwrap();
                assert!((f[0] - f1).abs() < 1e-10 && (f[1] - f2).abs() < 1e-10, "d={d} p={p}");
            }
        }
    }

    #[test]
    fn economical_telecloning() {
        let e2 = econ_phase_teleclone(2).unwrap();
        assert!((e2.channel.weights()[0] - e2.channel.weights()[1]).abs() < 1e-15);
        assert!((e2.entropy - 1.0).abs() < 1e-12);
        assert!((e2.fidelity - 0.85355).abs() < 1e-5);
        let e3 = econ_phase_teleclone(3).unwrap();
        assert!(((e3.fidelity) - (5.0 + 17f64.sqrt()) / 12.0).abs() < 1e-12);
        assert!(e3.entropy < 3f64.log2() - 1e-3);
        for d in 2..=6 {
            let e = econ_phase_teleclone(d).unwrap();
            assert!((e.fidelity - phase_qudit_optimal(d).2).abs() < 1e-12, "d={d}");
            let x: Vec<f64> = e.channel.weights().to_vec();
            let xi = x[0] * x[0];
            let yi = x[1] * x[1];
            let s = -xi * xi.log2() - (d as f64 - 1.0) * yi * yi.log2();
            assert!((e.entropy - s).abs() < 1e-10);
        }
    }

    #[test]
    fn economical_branches() {
        let d = 3;
        let e = econ_phase_teleclone(d).unwrap();
        let psi = phase_state(&[0.0, 1.1, -2.3]).unwrap();
        let branches = e.channel.run(&psi).unwrap();
        let success: f64 = branches.iter().filter(|b| b.m == 0).map(|b| b.probability).sum();
        assert!((success - e.success_probability).abs() < 1e-12);
        for b in &branches {
            assert!((b.probability - 1.0 / 9.0).abs() < 1e-12);
            let f = e.channel.fidelities(b, &psi).unwrap();
            if b.m == 0 {
                assert!((f[0] - e.fidelity).abs() < 1e-10 && (f[1] - e.fidelity).abs() < 1e-10);
            } else {
                assert!(f[0] < e.fidelity - 1e-3);
            }
        }
    }

    #[test]
    fn bell_states_copy_locally() {
        let phi_plus = local_clone_bell(2, 0).unwrap();
        assert!((phi_plus.fidelity - 1.0).abs() < 1e-12);
        let want = bell_state(2, 0, 0).kron(&bell_state(2, 0, 0));
        assert!((phi_plus.output.amps() - want.amps()).norm() < 1e-12);
        // |Ψ⁺⟩ = (|01⟩+|10⟩)/√2
        let s = 1.0 / 2f64.sqrt();
        let psi_plus = StateVector::new(vec![2, 2], CVec::from_vec(vec![r(0.0), r(s), r(s), r(0.0)])).unwrap();
        assert!((local_clone(&psi_plus).unwrap().fidelity - 1.0).abs() < 1e-12);
        for m in 0..3 {
            assert!((local_clone_bell(3, m).unwrap().fidelity - 1.0).abs() < 1e-12);
        }
        // outside the commuting family the copy fails
        assert!(local_clone(&bell_state(2, 0, 1)).unwrap().fidelity < 0.5);
        assert!(local_clone_bell(3, 3).is_err());
    }
}
