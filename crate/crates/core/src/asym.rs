//! Asymmetric universal cloning.

use crate::error::{Error, Result};
use crate::linalg::{
    bell_state, fidelity, gen_pauli, kron_all, omega, partial_trace, r, CMat, CVec, DensityMatrix,
    StateVector, C64,
};
use crate::tol;

/// d × d amplitudes a_{m,n} of a Pauli-channel cloner, unit Frobenius norm.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeMatrix {
    a: CMat,
}

impl AmplitudeMatrix {
    pub fn new(a: CMat) -> Result<Self> {
        if a.nrows() != a.ncols() || a.nrows() < 2 {
            return Err(Error::DimMismatch("amplitude matrix must be square, d >= 2".into()));
        }
        let n = a.norm_squared();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::Normalization(format!("Σ|a_mn|² = {n}")));
        }
        Ok(Self { a })
    }

    /// Real matrix helper.
    pub fn from_real(d: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != d * d {
            return Err(Error::DimMismatch(format!("need {} entries", d * d)));
        }
        Self::new(CMat::from_row_iterator(d, d, entries.iter().map(|&x| r(x))))
    }

    pub fn d(&self) -> usize {
        self.a.nrows()
    }

    pub fn get(&self, m: usize, n: usize) -> C64 {
        self.a[(m, n)]
    }

    pub fn matrix(&self) -> &CMat {
        &self.a
    }

    /// Dual amplitudes b_{m,n} = (1/d) Σ ω^{n m' − m n'} a_{m',n'}.
    pub fn fourier(&self) -> Self {
        let d = self.d();
        let b = CMat::from_fn(d, d, |m, n| {
            let mut s = C64::new(0.0, 0.0);
            for mp in 0..d {
                for np in 0..d {
                    s += omega(d, (n * mp) as i64 - (m * np) as i64) * self.a[(mp, np)];
                }
            }
            s / d as f64
        });
        Self { a: b }
    }

    /// Σ_n |a_{0,n}|², the fidelity of the channel on computational basis inputs.
    pub fn channel_fidelity(&self) -> f64 {
        (0..self.d()).map(|n| self.a[(0, n)].norm_sqr()).sum()
    }

    /// Σ |a_mn|² U_{mn} |ψ⟩⟨ψ| U_{mn}†.
    pub fn apply_channel(&self, psi: &StateVector) -> Result<DensityMatrix> {
        let d = self.d();
        if psi.dims() != [d] {
            return Err(Error::DimMismatch("channel input dimension".into()));
        }
        let mut out = CMat::zeros(d, d);
        for m in 0..d {
            for n in 0..d {
                let v = gen_pauli(d, m, n) * psi.amps();
                out += &v * v.adjoint() * r(self.a[(m, n)].norm_sqr());
            }
        }
        DensityMatrix::new(vec![d], out)
    }
}

/// Two-output result.
#[derive(Debug, Clone)]
pub struct AsymOutput {
    pub f_a: f64,
    pub f_b: f64,
    pub rho_a: DensityMatrix,
    pub rho_b: DensityMatrix,
}

/// Amplitude of a product of |ψ⟩ at `psi_site` and |Φ⁺⟩ on each pair, on `sites` qudits.
fn placed(d: usize, sites: usize, psi: &CVec, psi_site: usize, pairs: &[(usize, usize)]) -> CVec {
    let total = d.pow(sites as u32);
    let inv = 1.0 / (d as f64).sqrt();
    let mut v = CVec::zeros(total);
    let mut digits = vec![0usize; sites];
    for idx in 0..total {
        let mut rem = idx;
        for s in (0..sites).rev() {
            digits[s] = rem % d;
            rem /= d;
        }
        if pairs.iter().all(|&(x, y)| digits[x] == digits[y]) {
            v[idx] = psi[digits[psi_site]] * inv.powi(pairs.len() as i32);
        }
    }
    v
}

/// F_A = 1 − b²(d−1)/d, F_B = 1 − a²(d−1)/d.
pub fn asym_1to2_fidelities(a: f64, b: f64, d: usize) -> (f64, f64) {
    let k = (d as f64 - 1.0) / d as f64;
    (1.0 - b * b * k, 1.0 - a * a * k)
}

pub fn check_ab(a: f64, b: f64, d: usize) -> Result<()> {
    let n = a * a + b * b + 2.0 * a * b / d as f64;
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::Normalization(format!("a²+b²+2ab/d = {n}")));
    }
    Ok(())
}

/// b for a given a on the normalization ellipse (b ≥ 0 branch).
pub fn b_from_a(a: f64, d: usize) -> f64 {
    let df = d as f64;
    -a / df + ((a / df).powi(2) - a * a + 1.0).sqrt()
}

/// |ψ⟩_A → a|ψ⟩_A|Φ⁺⟩_BR + b|ψ⟩_B|Φ⁺⟩_AR, simulated.
pub fn asym_1to2(psi: &StateVector, a: f64, b: f64, d: usize) -> Result<AsymOutput> {
    if psi.dims() != [d] {
        return Err(Error::DimMismatch("input dimension".into()));
    }
    check_ab(a, b, d)?;
    let amps = placed(d, 3, psi.amps(), 0, &[(1, 2)]) * r(a)
        + placed(d, 3, psi.amps(), 1, &[(0, 2)]) * r(b);
    let global = StateVector::new(vec![d; 3], amps)?;
    let rho_a = global.reduced(&[0])?;
    let rho_b = global.reduced(&[1])?;
    Ok(AsymOutput { f_a: fidelity(&rho_a, psi)?, f_b: fidelity(&rho_b, psi)?, rho_a, rho_b })
}

/// Left side minus right side of the qudit 1 → 2 trade-off (≤ 0 when allowed).
pub fn tradeoff_excess(f_a: f64, f_b: f64, d: usize) -> f64 {
    let df = d as f64;
    let x = ((df + 1.0) * f_a - 1.0).max(0.0).sqrt();
    let y = ((df + 1.0) * f_b - 1.0).max(0.0).sqrt();
    (x + y).powi(2) / (2.0 * (df + 1.0)) + (x - y).powi(2) / (2.0 * (df - 1.0)) - 1.0
}

/// Qubit relation √((1−F_A)(1−F_B)) ≥ F_A + F_B − 3/2, returned as LHS − RHS.
pub fn qubit_tradeoff_gap(f_a: f64, f_b: f64) -> f64 {
    ((1.0 - f_a) * (1.0 - f_b)).sqrt() - (f_a + f_b - 1.5)
}

/// Cerf cloner output.
#[derive(Debug, Clone)]
pub struct CerfOutput {
    pub rho_a: DensityMatrix,
    pub rho_c: DensityMatrix,
    pub b: AmplitudeMatrix,
}

/// |ψ⟩_A|Φ⁺⟩_BC → Σ a_{mn} U_{mn}|ψ⟩_A (U_{m,−n}⊗I)|Φ⁺⟩_BC, simulated; C is the copy.
pub fn cerf_channel(psi: &StateVector, a: &AmplitudeMatrix) -> Result<CerfOutput> {
    let d = a.d();
    if psi.dims() != [d] {
        return Err(Error::DimMismatch("input dimension".into()));
    }
    let phi = bell_state(d, 0, 0);
    let id = CMat::identity(d, d);
    let mut amps = CVec::zeros(d * d * d);
    for m in 0..d {
        for n in 0..d {
            let u_psi = gen_pauli(d, m, n) * psi.amps();
            let bc = gen_pauli(d, m, (d - n) % d).kronecker(&id) * phi.amps();
            amps += u_psi.kronecker(&bc) * a.get(m, n);
        }
    }
    let global = StateVector::new(vec![d; 3], amps)?;
    Ok(CerfOutput { rho_a: global.reduced(&[0])?, rho_c: global.reduced(&[2])?, b: a.fourier() })
}

/// Closed-form 1 → 1+1+1 fidelities.
pub fn asym_1to3(alpha: f64, beta: f64, gamma: f64, d: usize) -> Result<(f64, f64, f64)> {
    let df = d as f64;
    let n = alpha * alpha
        + beta * beta
        + gamma * gamma
        + 2.0 / df * (alpha * beta + beta * gamma + alpha * gamma);
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::Normalization(format!("1→3 quadratic form = {n}")));
    }
    let k = (df - 1.0) / df;
    let f = |p: f64, q: f64| 1.0 - k * (p * p + q * q + 2.0 * p * q / (df + 1.0));
    Ok((f(beta, gamma), f(alpha, gamma), f(alpha, beta)))
}

/// Simulated 1 → 1+1+1 cloner on sites (A, B, C, R, S); returns the three copies.
pub fn asym_1to3_state(
    psi: &StateVector,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<(StateVector, [DensityMatrix; 3])> {
    let d = psi.dim();
    asym_1to3(alpha, beta, gamma, d)?;
    tol::check_dim(d.pow(5))?;
    let (a, b, c, rr, s) = (0, 1, 2, 3, 4);
    let p = psi.amps();
    let term = |site: usize, x: usize, y: usize| {
        placed(d, 5, p, site, &[(x, rr), (y, s)]) + placed(d, 5, p, site, &[(x, s), (y, rr)])
    };
    let df = d as f64;
    let amps = (term(a, b, c) * r(alpha) + term(b, a, c) * r(beta) + term(c, a, b) * r(gamma))
        * r((df / (2.0 * df + 2.0)).sqrt());
    let global = StateVector::new(vec![d; 5], amps)?;
    let copies = [global.reduced(&[a])?, global.reduced(&[b])?, global.reduced(&[c])?];
    Ok((global, copies))
}

/// Permutation operator on `n` qudits sending the qudit at position k to `perm[k]`.
pub fn permutation_operator(d: usize, perm: &[usize]) -> CMat {
    let n = perm.len();
    let total = d.pow(n as u32);
    let mut p = CMat::zeros(total, total);
    let mut digits = vec![0usize; n];
    let mut out = vec![0usize; n];
    for idx in 0..total {
        let mut rem = idx;
        for s in (0..n).rev() {
            digits[s] = rem % d;
            rem /= d;
        }
        for k in 0..n {
            out[perm[k]] = digits[k];
        }
        let j = out.iter().fold(0, |acc, &x| acc * d + x);
        p[(j, idx)] = r(1.0);
    }
    p
}

/// The six S₃ elements in the order I, P12, P13, P23, P123, P132.
pub fn s3_operators(d: usize) -> [CMat; 6] {
    [
        permutation_operator(d, &[0, 1, 2]),
        permutation_operator(d, &[1, 0, 2]),
        permutation_operator(d, &[2, 1, 0]),
        permutation_operator(d, &[0, 2, 1]),
        permutation_operator(d, &[1, 2, 0]),
        permutation_operator(d, &[2, 0, 1]),
    ]
}

/// Output of the permutation-operator asymmetric cloner.
#[derive(Debug, Clone)]
pub struct PermOutput {
    pub joint: DensityMatrix,
    pub fidelities: [f64; 3],
}

/// Trace of ½ W(|ψ⟩⟨ψ|^⊗N ⊗ I)W†; must equal one.
pub fn perm_normalization(weights: &[f64; 6], n: usize) -> Result<f64> {
    let psi = StateVector::basis(vec![2], 0);
    let rho = perm_raw(weights, n, &psi)?;
    Ok(rho.trace().re)
}

fn perm_raw(weights: &[f64; 6], n: usize, psi: &StateVector) -> Result<CMat> {
    if !(1..=2).contains(&n) || psi.dims() != [2] {
        return Err(Error::InvalidArgument("permutation cloner: qubit input, N ∈ {1,2}".into()));
    }
    let ops = s3_operators(2);
    let w = ops.iter().zip(weights).fold(CMat::zeros(8, 8), |acc, (p, &x)| acc + p * r(x));
    let proj = psi.power(n).density().into_mat();
    let rest = 1 << (3 - n);
    let inner = kron_all(&[proj, CMat::identity(rest, rest)]);
    Ok(&w * inner * w.adjoint() * r(0.5))
}

/// Weights (α, β, γ, δ, μ, ν) on I, P12, P13, P23, P123, P132.
pub fn perm_asym(weights: &[f64; 6], n: usize, psi: &StateVector) -> Result<PermOutput> {
    let norm = perm_normalization(weights, n)?;
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Normalization(format!("permutation cloner trace = {norm}")));
    }
    let joint = DensityMatrix::unchecked(vec![2; 3], perm_raw(weights, n, psi)?)?;
    let mut fidelities = [0.0; 3];
    for (k, f) in fidelities.iter_mut().enumerate() {
        *f = fidelity(&partial_trace(&joint, &[k])?, psi)?;
    }
    Ok(PermOutput { joint, fidelities })
}

/// Closed-form 1 → 3 fidelities of the permutation cloner (normalized weights).
pub fn perm_1to3_fidelities(w: &[f64; 6]) -> [f64; 3] {
    let [al, be, ga, de, mu, nu] = *w;
    let sq = |x: f64| x * x;
    [
        1.0 - 0.5 * (sq(be + mu) + sq(be + nu) + sq(ga + mu) + sq(ga + nu)),
        1.0 - 0.5 * (sq(al + ga) + sq(al + de) + sq(ga + nu) + sq(de + nu)),
        1.0 - 0.5 * (sq(al + be) + sq(al + de) + sq(be + mu) + sq(de + mu)),
    ]
}

/// Closed-form 2 → 3 fidelities in terms of A = α+β, B = γ+μ, C = δ+ν.
pub fn perm_2to3_fidelities(w: &[f64; 6]) -> [f64; 3] {
    let (a, b, c) = (w[0] + w[1], w[2] + w[4], w[3] + w[5]);
    [1.0 - b * b / 2.0, 1.0 - c * c / 2.0, 1.0 - a * a / 2.0]
}

/// Closed-form 1 → 1+1+1+1 fidelities (non-negative βᵢ).
pub fn asym_1to4(beta: [f64; 4], d: usize) -> Result<[f64; 4]> {
    if beta.iter().any(|&b| b < 0.0) {
        return Err(Error::InvalidArgument("1→4 coefficients must be non-negative".into()));
    }
    let df = d as f64;
    let mut cross = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            cross += beta[i] * beta[j];
        }
    }
    let n = beta.iter().map(|b| b * b).sum::<f64>() + 2.0 / df * cross;
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::Normalization(format!("1→4 quadratic form = {n}")));
    }
    let k = (df - 1.0) / df;
    let mut out = [0.0; 4];
    for (i, f) in out.iter_mut().enumerate() {
        let others: Vec<f64> = (0..4).filter(|&j| j != i).map(|j| beta[j]).collect();
        let sq: f64 = others.iter().map(|b| b * b).sum();
        let pairs = others[0] * others[1] + others[0] * others[2] + others[1] * others[2];
        *f = 1.0 - k * (sq + 2.0 * pairs / (df + 1.0));
    }
    Ok(out)
}

/// F_i = (p d + 1)/(d + 1) from a singlet fraction.
pub fn monogamy_fidelity(p: f64, d: usize) -> f64 {
    let df = d as f64;
    (p * df + 1.0) / (df + 1.0)
}

/// Σp ≤ (d−1)/d + (Σ√p)²/(N+d−1) for singlet fractions p with N outputs.
pub fn monogamy_check(p: &[f64], d: usize) -> Result<bool> {
    if p.is_empty() || p.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
        return Err(Error::InvalidArgument("singlet fractions must lie in [0,1]".into()));
    }
    let (df, n) = (d as f64, p.len() as f64);
    let lhs: f64 = p.iter().sum();
    let root: f64 = p.iter().map(|x| x.sqrt()).sum();
    Ok(lhs <= (df - 1.0) / df + root * root / (n + df - 1.0) + 1e-12)
}
