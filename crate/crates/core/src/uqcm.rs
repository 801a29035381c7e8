//! Symmetric universal cloning machines.
//!
//! Qubit machines of Bužek–Hillery and Gisin–Massar, the qudit constructions
//! of Werner (symmetrizer), Fan (occupation basis) and the unified
//! maximally-entangled-ancilla form, L-copy fidelities, mixed-state cloning
//! and the universal NOT.

use std::collections::HashMap;

use crate::combin::{binom, factorial, sym_dim};
use crate::error::{Error, Result};
use crate::linalg::{
    fidelity, kron_all, partial_trace, r, sym::for_each_arrangement, sym_basis, sym_embed,
    sym_isometry, CMat, CVec, DensityMatrix, OccupationVector, StateVector, C64,
};
use crate::tol;

/// Which construction produced a symmetric cloner output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    GisinMassar,
    Werner,
    Fan,
    Unified,
}

/// Cloning task N → M on qudits of dimension d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CloneSpec {
    pub d: usize,
    pub n: usize,
    pub m: usize,
    pub variant: Variant,
}

impl CloneSpec {
    pub fn new(d: usize, n: usize, m: usize, variant: Variant) -> Result<Self> {
        if d < 2 || n < 1 || m < n {
            return Err(Error::InvalidArgument(format!("need d>=2, 1<=N<=M (d={d}, N={n}, M={m})")));
        }
        if variant == Variant::GisinMassar && d != 2 {
            return Err(Error::InvalidArgument("Gisin-Massar cloner is for qubits".into()));
        }
        Ok(Self { d, n, m, variant })
    }

    /// Runs the selected construction on `psi`.
    pub fn run(&self, psi: &StateVector) -> Result<CloneReport> {
        if psi.dims() != [self.d] {
            return Err(Error::DimMismatch(format!("input must be a single qudit of dim {}", self.d)));
        }
        match self.variant {
            Variant::GisinMassar => gisin_massar(psi, self.n, self.m),
            Variant::Werner => werner_clone(psi, self.n, self.m),
            Variant::Fan => fan_clone(psi, self.n, self.m),
            Variant::Unified => unified_clone(psi, self.n, self.m),
        }
    }
}

/// Output of a symmetric cloner for a pure input.
#[derive(Debug, Clone)]
pub struct CloneReport {
    /// Joint state of the M copies (ancilla traced out).
    pub joint: DensityMatrix,
    /// Reduced state of the first copy.
    pub per_copy: DensityMatrix,
    /// Single-copy fidelity.
    pub f1: f64,
    /// Global fidelity ⟨ψ^⊗M|ρ|ψ^⊗M⟩.
    pub fm: f64,
    /// Shrinking factor η with ρ₁ = η|ψ⟩⟨ψ| + (1−η)I/d.
    pub eta: f64,
}

impl CloneReport {
    pub fn from_joint(joint: DensityMatrix, psi: &StateVector) -> Result<Self> {
        let m = joint.dims().len();
        let d = psi.dim() as f64;
        let per_copy = partial_trace(&joint, &[0])?;
        let f1 = fidelity(&per_copy, psi)?;
        let fm = fidelity(&joint, &psi.power(m))?;
        Ok(Self { joint, per_copy, f1, fm, eta: (d * f1 - 1.0) / (d - 1.0) })
    }

    /// Reduced state of every copy.
    pub fn copies(&self) -> Result<Vec<DensityMatrix>> {
        (0..self.joint.dims().len()).map(|k| partial_trace(&self.joint, &[k])).collect()
    }

    /// L-copy fidelity from the simulated output.
    pub fn fidelity_l(&self, psi: &StateVector, l: usize) -> Result<f64> {
        let m = self.joint.dims().len();
        if l == 0 || l > m {
            return Err(Error::InvalidArgument(format!("L={l} outside 1..={m}")));
        }
        let keep: Vec<usize> = (0..l).collect();
        fidelity(&partial_trace(&self.joint, &keep)?, &psi.power(l))
    }
}

/// Single-copy fidelity (N(M+d)+M−N)/(M(N+d)) of the optimal symmetric cloner.
pub fn uqcm_f1(d: usize, n: usize, m: usize) -> f64 {
    let (d, n, m) = (d as f64, n as f64, m as f64);
    (n * (m + d) + m - n) / (m * (n + d))
}

/// Qubit single-copy fidelity (M(N+1)+N)/(M(N+2)).
pub fn gisin_massar_f1(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    (m * (n + 1.0) + n) / (m * (n + 2.0))
}

/// Global fidelity d[N]/d[M].
pub fn uqcm_fm(d: usize, n: usize, m: usize) -> f64 {
    binom(n + d - 1, n) / binom(m + d - 1, m)
}

/// L-copy fidelity of the optimal N → M qudit cloner.
pub fn fidelity_l(d: usize, n: usize, m: usize, l: usize) -> Result<f64> {
    if d < 2 || n < 1 || m < n || l < 1 || l > m {
        return Err(Error::InvalidArgument(format!("bad (d,N,M,L)=({d},{n},{m},{l})")));
    }
    let f = factorial;
    let pre = f(d + n - 1) * f(m - n) * f(m - l) / (f(d + m - 1) * f(m) * f(n));
    let sum: f64 = (l.max(n)..=m)
        .map(|m1| {
            f(m - m1 + d - 2) * f(m1) * f(m1)
                / (f(m1 - l) * f(m1 - n) * f(d - 2) * f(m - m1))
        })
        .sum();
    Ok(pre * sum)
}

/// Closed form of the L-copy fidelity for a single input.
pub fn fidelity_l_single_input(d: usize, m: usize, l: usize) -> f64 {
    let f = factorial;
    let (df, mf, lf) = (d as f64, m as f64, l as f64);
    f(l) * f(d) * (lf * (df + mf) + mf - lf) / (f(d + l) * mf)
}

/// Bužek–Hillery isometry |ψ⟩|0⟩|0⟩_R → copies ⊗ ancilla, as an 8 × 2 matrix.
pub fn buzek_hillery_isometry() -> CMat {
    let (a, b) = ((2.0f64 / 3.0).sqrt(), (1.0f64 / 6.0).sqrt());
    let mut v = CMat::zeros(8, 2);
    // index = 4·copy1 + 2·copy2 + R
    v[(0b000, 0)] = r(a);
    v[(0b011, 0)] = r(b);
    v[(0b101, 0)] = r(b);
    v[(0b111, 1)] = r(a);
    v[(0b010, 1)] = r(b);
    v[(0b100, 1)] = r(b);
    v
}

/// Global pure state (copy, copy, ancilla) of the Bužek–Hillery machine.
pub fn buzek_hillery_state(psi: &StateVector) -> Result<StateVector> {
    qubit_input(psi)?;
    StateVector::new(vec![2, 2, 2], buzek_hillery_isometry() * psi.amps())
}

pub fn buzek_hillery_1to2(psi: &StateVector) -> Result<CloneReport> {
    let global = buzek_hillery_state(psi)?;
    CloneReport::from_joint(global.reduced(&[0, 1])?, psi)
}

fn qubit_input(psi: &StateVector) -> Result<()> {
    if psi.dims() != [2] {
        return Err(Error::DimMismatch("qubit input required".into()));
    }
    Ok(())
}

fn check_nm(n: usize, m: usize) -> Result<()> {
    if n < 1 || m < n {
        return Err(Error::InvalidArgument(format!("need 1 <= N <= M, got N={n}, M={m}")));
    }
    Ok(())
}

/// Gisin–Massar amplitudes α_j, j = 0..=M−N.
pub fn gisin_massar_alpha(n: usize, m: usize) -> Vec<f64> {
    (0..=m - n)
        .map(|j| {
            let pre = (n as f64 + 1.0) / (m as f64 + 1.0);
            let mut ratio = 1.0;
            // (M−N)!(M−j)! / ((M−N−j)! M!)
            for t in 0..j {
                ratio *= (m - n - t) as f64 / (m - t) as f64;
            }
            (pre * ratio).sqrt()
        })
        .collect()
}

/// Global state Σ_j α_j |(M−j)ψ, jψ⊥⟩|R_j⟩ over M qubits and an (M−N+1)-level register.
pub fn gisin_massar_state(psi: &StateVector, n: usize, m: usize) -> Result<StateVector> {
    qubit_input(psi)?;
    check_nm(n, m)?;
    let reg = m - n + 1;
    tol::check_dim((1 << m) * reg)?;
    let perp = psi.qubit_perp()?;
    let mut rot = CMat::zeros(2, 2);
    rot.set_column(0, psi.amps());
    rot.set_column(1, perp.amps());
    let rot_m = kron_all(&vec![rot; m]);
    let mut out = CVec::zeros((1 << m) * reg);
    for (j, alpha) in gisin_massar_alpha(n, m).into_iter().enumerate() {
        let occ = OccupationVector::new(vec![m - j, j])?;
        let copies = &rot_m * sym_embed(&occ)?.amps();
        let mut anc = CVec::zeros(reg);
        anc[j] = r(1.0);
        out += copies.kronecker(&anc) * r(alpha);
    }
    let mut dims = vec![2; m];
    dims.push(reg);
    StateVector::new(dims, out)
}

pub fn gisin_massar(psi: &StateVector, n: usize, m: usize) -> Result<CloneReport> {
    let global = gisin_massar_state(psi, n, m)?;
    let keep: Vec<usize> = (0..m).collect();
    CloneReport::from_joint(global.reduced(&keep)?, psi)
}

/// Werner cloner ρ = (d[N]/d[M]) s_M (|ψ⟩⟨ψ|^⊗N ⊗ I^⊗(M−N)) s_M.
pub fn werner_clone(psi: &StateVector, n: usize, m: usize) -> Result<CloneReport> {
    check_nm(n, m)?;
    if psi.dims().len() != 1 {
        return Err(Error::DimMismatch("single-qudit input required".into()));
    }
    let d = psi.dim();
    tol::check_dim(d.pow(m as u32))?;
    // s_M = B B† with B the symmetric-subspace isometry
    let b = sym_isometry(d, m)?;
    let proj = psi.power(n).density().into_mat();
    let rest = d.pow((m - n) as u32);
    let inner = proj.kronecker(&CMat::identity(rest, rest));
    let scale = sym_dim(d, n) as f64 / sym_dim(d, m) as f64;
    let core = b.adjoint() * inner * &b;
    let rho = &b * core * b.adjoint() * r(scale);
    CloneReport::from_joint(DensityMatrix::unchecked(vec![d; m], rho)?, psi)
}

/// One term α |n⃗+j⃗⟩|R_j⃗⟩ of the Fan transformation.
#[derive(Debug, Clone, PartialEq)]
pub struct FanTerm {
    pub output: OccupationVector,
    pub ancilla: OccupationVector,
    pub alpha: f64,
}

/// Fan coefficients α_{n⃗j⃗} for the basis input |n⃗⟩ and M outputs.
pub fn fan_map(input: &OccupationVector, m: usize) -> Result<Vec<FanTerm>> {
    let (d, n) = (input.d(), input.n());
    check_nm(n, m)?;
    let pre = factorial(m - n) * factorial(n + d - 1) / factorial(m + d - 1);
    sym_basis(d, m - n)
        .into_iter()
        .map(|j| {
            let prod: f64 = input
                .counts()
                .iter()
                .zip(j.counts())
                .map(|(&nk, &jk)| binom(nk + jk, jk))
                .product();
            Ok(FanTerm { output: input.add(&j), ancilla: j, alpha: (pre * prod).sqrt() })
        })
        .collect()
}

/// Fan output amplitudes as a d[M] × d[M−N] matrix (symmetric basis ⊗ register).
pub fn fan_state(psi: &StateVector, n: usize, m: usize) -> Result<CMat> {
    check_nm(n, m)?;
    let d = psi.dim();
    let out_index: HashMap<OccupationVector, usize> =
        sym_basis(d, m).into_iter().enumerate().map(|(i, o)| (o, i)).collect();
    let anc_index: HashMap<OccupationVector, usize> =
        sym_basis(d, m - n).into_iter().enumerate().map(|(i, o)| (o, i)).collect();
    let mut out = CMat::zeros(out_index.len(), anc_index.len());
    for occ in sym_basis(d, n) {
        let mut coeff = r(occ.multiplicity().sqrt());
        for (k, &nk) in occ.counts().iter().enumerate() {
            coeff *= psi.amps()[k].powu(nk as u32);
        }
        if coeff.norm() == 0.0 {
            continue;
        }
        for t in fan_map(&occ, m)? {
            out[(out_index[&t.output], anc_index[&t.ancilla])] += coeff * t.alpha;
        }
    }
    Ok(out)
}

pub fn fan_clone(psi: &StateVector, n: usize, m: usize) -> Result<CloneReport> {
    let d = psi.dim();
    let amps = fan_state(psi, n, m)?;
    let embed = sym_isometry(d, m)?;
    let rho_sym = &amps * amps.adjoint();
    let rho = &embed * rho_sym * embed.adjoint();
    CloneReport::from_joint(DensityMatrix::unchecked(vec![d; m], rho)?, psi)
}

/// Unified cloner (s_M ⊗ I)|ψ⟩^⊗N|Φ⁺⟩^⊗(M−N), normalized, ancilla halves traced.
pub fn unified_clone(psi: &StateVector, n: usize, m: usize) -> Result<CloneReport> {
    check_nm(n, m)?;
    let d = psi.dim();
    let rest = d.pow((m - n) as u32);
    tol::check_dim(d.pow(m as u32) * rest)?;
    // Column k of `pre` is |ψ⟩^⊗N|k⟩ on the copies, paired with ancilla |k⟩.
    let base = psi.power(n).into_amps();
    let mut pre = CMat::zeros(d.pow(m as u32), rest);
    for k in 0..rest {
        let mut e = CVec::zeros(rest);
        e[k] = r(1.0);
        pre.set_column(k, &base.kronecker(&e));
    }
    let b = sym_isometry(d, m)?;
    let post = &b * (b.adjoint() * pre);
    let norm2 = post.norm_squared();
    let rho = &post * post.adjoint() / r(norm2);
    CloneReport::from_joint(DensityMatrix::unchecked(vec![d; m], rho)?, psi)
}

/// Output of a mixed-state cloner.
#[derive(Debug, Clone)]
pub struct MixedCloneReport {
    pub joint: DensityMatrix,
    pub per_copy: Vec<DensityMatrix>,
    /// Fitted shrinking factor; `None` for the maximally mixed input.
    pub eta: Option<f64>,
}

/// Coefficients β_mk of the N → M mixed-state qubit cloner.
pub fn mixed_beta(n: usize, m: usize, mm: usize, k: usize) -> f64 {
    let f = factorial;
    let pre = f(m - n) * f(n + 1) / f(m + 1);
    let a = f(m - mm - k) / (f(n - mm) * f(m - n - k));
    let b = f(mm + k) / (f(mm) * f(k));
    (pre * a * b).sqrt()
}

/// |m,n⟩ with the arrangements (sorted by index) weighted by e^{2πit/C}.
fn tilde_state(zeros: usize, ones: usize) -> CVec {
    let len = zeros + ones;
    let mut idx = Vec::new();
    for_each_arrangement(&[zeros, ones], |i| idx.push(i));
    idx.sort_unstable();
    let cnt = idx.len() as f64;
    let mut v = CVec::zeros(1 << len);
    for (t, &i) in idx.iter().enumerate() {
        v[i] = C64::from_polar(1.0 / cnt.sqrt(), 2.0 * std::f64::consts::PI * t as f64 / cnt);
    }
    v
}

fn qubit_sym(zeros: usize, ones: usize) -> CVec {
    let occ = OccupationVector::new(vec![zeros, ones]).expect("two levels");
    sym_embed(&occ).expect("small").into_amps()
}

/// Isometry of the N → M mixed-state qubit cloner on the span it is defined on.
///
/// Columns map the symmetric inputs |N−m, m⟩ (and the singlet for N = 2);
/// the returned pair is (input basis, images) as column matrices.
pub fn mixed_isometry(n: usize, m: usize) -> Result<(CMat, CMat)> {
    check_nm(n, m)?;
    let reg = m - n + 1;
    tol::check_dim((1 << m) * reg)?;
    let mut inputs = Vec::new();
    let mut images = Vec::new();
    let image = |mm: usize, tilde: bool| -> CVec {
        let mut v = CVec::zeros((1 << m) * reg);
        for k in 0..reg {
            let (z, o) = (m - mm - k, mm + k);
            let copies = if tilde { tilde_state(z, o) } else { qubit_sym(z, o) };
            let mut anc = CVec::zeros(reg);
            anc[k] = r(1.0);
            v += copies.kronecker(&anc) * r(mixed_beta(n, m, mm, k));
        }
        v
    };
    for mm in 0..=n {
        inputs.push(qubit_sym(n - mm, mm));
        images.push(image(mm, false));
    }
    if n == 2 {
        inputs.push(tilde_state(1, 1));
        images.push(image(1, true));
    }
    Ok((CMat::from_columns(&inputs), CMat::from_columns(&images)))
}

/// Clones N copies of a qubit density matrix into M.
///
/// For N ≤ 2 every input is supported. For N ≥ 3 the machine acts on the
/// symmetric subspace only, so ρ^⊗N must lie in it (pure ρ).
pub fn mixed_clone(rho: &DensityMatrix, n: usize, m: usize) -> Result<MixedCloneReport> {
    if rho.dims() != [2] {
        return Err(Error::DimMismatch("mixed cloner takes a qubit density matrix".into()));
    }
    check_nm(n, m)?;
    let (basis, images) = mixed_isometry(n, m)?;
    let mut input = rho.mat().clone();
    for _ in 1..n {
        input = input.kronecker(rho.mat());
    }
    let coeffs = basis.adjoint() * &input * &basis;
    let covered = coeffs.trace().re;
    if (covered - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "input has weight {:.3e} outside the cloner's domain (N={n} needs a pure state)",
            1.0 - covered
        )));
    }
    let out = &images * coeffs * images.adjoint();
    let mut dims = vec![2; m];
    dims.push(m - n + 1);
    let global = DensityMatrix::unchecked(dims, out)?;
    let keep: Vec<usize> = (0..m).collect();
    let joint = partial_trace(&global, &keep)?;
    let per_copy = (0..m).map(|k| partial_trace(&joint, &[k])).collect::<Result<Vec<_>>>()?;
    let half = CMat::identity(2, 2) * r(0.5);
    let dev = rho.mat() - &half;
    let denom = (&dev * &dev).trace().re;
    let eta = (denom > 1e-14).then(|| ((&per_copy[0].mat().clone() - &half) * &dev).trace().re / denom);
    Ok(MixedCloneReport { joint, per_copy, eta })
}

/// Shrinking factor of the optimal qubit N → M cloner, 2F − 1.
pub fn qubit_shrinking(n: usize, m: usize) -> f64 {
    2.0 * gisin_massar_f1(n, m) - 1.0
}

/// Approximate universal NOT from N copies.
#[derive(Debug, Clone, Copy)]
pub struct UniversalNot {
    pub n: usize,
}

impl UniversalNot {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("N must be positive".into()));
        }
        Ok(Self { n })
    }

    /// ρ = N/(N+2)|ψ⊥⟩⟨ψ⊥| + I/(N+2).
    pub fn output(&self, psi: &StateVector) -> Result<DensityMatrix> {
        let perp = psi.qubit_perp()?;
        let nf = self.n as f64;
        let mat = perp.density().into_mat() * r(nf / (nf + 2.0))
            + CMat::identity(2, 2) * r(1.0 / (nf + 2.0));
        DensityMatrix::new(vec![2], mat)
    }

    /// Fidelity with |ψ⊥⟩, (N+1)/(N+2).
    pub fn fidelity(&self) -> f64 {
        (self.n as f64 + 1.0) / (self.n as f64 + 2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gen_pauli, haar_state, seeded_rng};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn buzek_hillery_values() {
        let mut rng = seeded_rng(11);
        for _ in 0..5 {
            let psi = haar_state(&[2], &mut rng);
            let rep = buzek_hillery_1to2(&psi).unwrap();
            assert!(close(rep.f1, 5.0 / 6.0, 1e-12));
            assert!(close(rep.fm, 2.0 / 3.0, 1e-12));
            let want = psi.density().into_mat() * r(2.0 / 3.0) + CMat::identity(2, 2) * r(1.0 / 6.0);
            assert!((rep.per_copy.mat() - want).norm() < 1e-12);
        }
    }

    #[test]
    fn buzek_hillery_joint_output() {
        let psi = StateVector::bloch(0.9, 2.1);
        let perp = psi.qubit_perp().unwrap();
        let pp = psi.kron(&psi).into_amps();
        let sym = psi.kron(&perp).into_amps() + perp.kron(&psi).into_amps();
        let want = &pp * pp.adjoint() * r(2.0 / 3.0) + &sym * sym.adjoint() * r(1.0 / 6.0);
        let rep = buzek_hillery_1to2(&psi).unwrap();
        assert!((rep.joint.mat() - want).norm() < 1e-12);
    }

    #[test]
    fn bh_isometry() {
        let v = buzek_hillery_isometry();
        assert!((v.adjoint() * &v - CMat::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn gisin_massar_headlines() {
        let psi = StateVector::bloch(1.3, 0.4);
        assert!(close(gisin_massar(&psi, 1, 2).unwrap().f1, 5.0 / 6.0, 1e-10));
        assert!(close(gisin_massar(&psi, 2, 3).unwrap().f1, 11.0 / 12.0, 1e-10));
        assert!(close(gisin_massar_f1(2, 3), 11.0 / 12.0, 1e-15));
        assert!(close(gisin_massar_f1(3, 1_000_000), 4.0 / 5.0, 1e-5));
        for (n, m) in [(1, 3), (2, 5), (3, 4)] {
            let rep = gisin_massar(&psi, n, m).unwrap();
            assert!(close(rep.f1, gisin_massar_f1(n, m), 1e-10));
        }
    }

    #[test]
    fn gisin_massar_alpha_normalized() {
        for (n, m) in [(1, 2), (1, 5), (3, 7)] {
            let s: f64 = gisin_massar_alpha(n, m).iter().map(|a| a * a).sum();
            assert!(close(s, 1.0, 1e-14));
        }
        assert!(gisin_massar(&StateVector::bloch(0.1, 0.0), 3, 2).is_err());
    }

    #[test]
    fn werner_reproduces_bh_output() {
        let psi = StateVector::bloch(2.2, -1.0);
        let w = werner_clone(&psi, 1, 2).unwrap();
        let b = buzek_hillery_1to2(&psi).unwrap();
        assert!(w.joint.max_diff(&b.joint) < 1e-12);
    }

    #[test]
    fn werner_qutrit_and_global() {
        let mut rng = seeded_rng(5);
        let psi = haar_state(&[3], &mut rng);
        let rep = werner_clone(&psi, 1, 2).unwrap();
        assert!(close(rep.f1, 0.75, 1e-12));
        let q = haar_state(&[2], &mut rng);
        assert!(close(werner_clone(&q, 1, 3).unwrap().fm, 0.5, 1e-12));
        assert!(close(uqcm_fm(2, 1, 3), 0.5, 1e-15));
        rep.joint.validate().unwrap();
    }

    #[test]
    fn fan_coefficients_normalized() {
        for occ in sym_basis(3, 2) {
            let s: f64 = fan_map(&occ, 4).unwrap().iter().map(|t| t.alpha * t.alpha).sum();
            assert!(close(s, 1.0, 1e-13));
        }
    }

    #[test]
    fn three_constructions_agree_on_qutrits() {
        let mut rng = seeded_rng(9);
        for _ in 0..3 {
            let psi = haar_state(&[3], &mut rng);
            let w = werner_clone(&psi, 1, 3).unwrap();
            let f = fan_clone(&psi, 1, 3).unwrap();
            let u = unified_clone(&psi, 1, 3).unwrap();
            assert!(w.joint.max_diff(&f.joint) < 1e-10);
            assert!(w.joint.max_diff(&u.joint) < 1e-10);
        }
    }

    #[test]
    fn l_copy_fidelity() {
        for (d, n, m) in [(2, 1, 3), (3, 1, 3), (2, 2, 4), (3, 2, 3)] {
            assert!(close(fidelity_l(d, n, m, 1).unwrap(), uqcm_f1(d, n, m), 1e-12));
            assert!(close(fidelity_l(d, n, m, m).unwrap(), uqcm_fm(d, n, m), 1e-12));
        }
        for (d, m, l) in [(2, 3, 2), (3, 4, 2), (4, 3, 3)] {
            assert!(close(fidelity_l(d, 1, m, l).unwrap(), fidelity_l_single_input(d, m, l), 1e-12));
        }
        let psi = haar_state(&[3], &mut seeded_rng(2));
        let rep = werner_clone(&psi, 1, 3).unwrap();
        assert!(close(rep.fidelity_l(&psi, 2).unwrap(), fidelity_l(3, 1, 3, 2).unwrap(), 1e-10));
        assert!(fidelity_l(2, 1, 3, 4).is_err());
    }

    #[test]
    fn mixed_two_to_three() {
        let mut rng = seeded_rng(4);
        let a = haar_state(&[2, 2], &mut rng).reduced(&[0]).unwrap();
        let rep = mixed_clone(&a, 2, 3).unwrap();
        assert!(close(rep.eta.unwrap(), 5.0 / 6.0, 1e-12));
        for c in &rep.per_copy {
            let want = a.mat() * r(5.0 / 6.0) + CMat::identity(2, 2) * r(1.0 / 12.0);
            assert!((c.mat() - want).norm() < 1e-12);
        }
    }

    #[test]
    fn mixed_identity_and_two_to_four() {
        let a = haar_state(&[2, 2], &mut seeded_rng(8)).reduced(&[1]).unwrap();
        let same = mixed_clone(&a, 2, 2).unwrap();
        assert!(same.per_copy[0].max_diff(&a) < 1e-12);
        let rep = mixed_clone(&a, 2, 4).unwrap();
        assert!(close(rep.eta.unwrap(), 2.0 * uqcm_f1(2, 2, 4) - 1.0, 1e-12));
    }

    #[test]
    fn mixed_isometry_is_isometric() {
        for (n, m) in [(1, 3), (2, 3), (2, 5), (3, 5)] {
            let (basis, images) = mixed_isometry(n, m).unwrap();
            let k = basis.ncols();
            assert!((basis.adjoint() * &basis - CMat::identity(k, k)).norm() < 1e-13);
            assert!((images.adjoint() * &images - CMat::identity(k, k)).norm() < 1e-13);
        }
    }

    #[test]
    fn mixed_general_n_needs_pure_input() {
        let pure = StateVector::bloch(0.4, 0.3).density();
        let rep = mixed_clone(&pure, 3, 4).unwrap();
        assert!(close(rep.eta.unwrap(), qubit_shrinking(3, 4), 1e-12));
        let mixed = DensityMatrix::maximally_mixed(vec![2]);
        assert!(mixed_clone(&mixed, 3, 4).is_err());
    }

    #[test]
    fn universal_not_matches_bh_ancilla() {
        let psi = StateVector::bloch(1.7, 0.8);
        let not = UniversalNot::new(1).unwrap();
        let out = not.output(&psi).unwrap();
        let perp = psi.qubit_perp().unwrap();
        assert!(close(fidelity(&out, &perp).unwrap(), 2.0 / 3.0, 1e-12));
        let anc = buzek_hillery_state(&psi).unwrap().reduced(&[2]).unwrap();
        let flipped = anc.conjugate(&(gen_pauli(2, 1, 0) * gen_pauli(2, 0, 1))).unwrap();
        assert!(flipped.max_diff(&out) < 1e-12);
        let big = UniversalNot::new(10_000).unwrap();
        assert!(close(big.fidelity(), 1.0 - 1.0 / 10_002.0, 1e-15));
    }
}
