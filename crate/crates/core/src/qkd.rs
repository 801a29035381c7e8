//! Cloning attacks on MUB key distribution and on the mean king retrodiction protocol.

use nalgebra::DMatrix;

use crate::combin::is_prime;
use crate::error::{Error, Result};
use crate::linalg::{max_abs_diff, mub, omega, r, CMat, CVec, DensityMatrix, StateVector, C64};
use crate::optimize::{bisect, golden_max, scan_max};
use crate::phasecov::{mub_eve_max, mub_tradeoff_g1, mub_v_range, MubCloneParams};

/// Bob's guess s((m,n), A): n − Am mod d for A < d, m for A = d.
pub fn guessing_function(m: usize, n: usize, basis: usize, d: usize) -> Result<usize> {
    if m >= d || n >= d || basis > d {
        return Err(Error::InvalidArgument(format!("(m,n,A) = ({m},{n},{basis}) out of range for d = {d}")));
    }
    Ok(if basis < d { (n + d * d - basis * m % d) % d } else { m })
}

/// |A, a⟩ with the retrodiction labeling: a-th eigenvector of σ_xσ_z^A, or |a⟩ for A = d.
pub fn king_mub_state(d: usize, basis: usize, a: usize) -> Result<StateVector> {
    let fam = mub(d)?;
    if basis > d || a >= d {
        return Err(Error::InvalidArgument(format!("(A,a) = ({basis},{a}) out of range")));
    }
    // odd d: the shared family labels eigenvalue ω^i, this labeling uses ω^{−a}
    let idx = if d == 2 || basis == d { a } else { (d - a) % d };
    Ok(fam.state(basis, idx).clone())
}

/// |Φ_{A,a}⟩ = |conj(A,a)⟩ ⊗ |A,a⟩.
pub fn phi_state(d: usize, basis: usize, a: usize) -> Result<StateVector> {
    let s = king_mub_state(d, basis, a)?;
    let bar = StateVector::new(vec![d], s.amps().map(|z| z.conj()))?;
    Ok(bar.kron(&s))
}

/// Bob's retrodiction basis {|I⟩}, I = m·d + n.
#[derive(Debug, Clone)]
pub struct KingBasis {
    d: usize,
    vectors: Vec<StateVector>,
    residual: f64,
}

impl KingBasis {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn vector(&self, m: usize, n: usize) -> &StateVector {
        &self.vectors[m * self.d + n]
    }

    /// s(I, A) for the flat index I = m·d + n.
    pub fn guess(&self, index: usize, basis: usize) -> usize {
        guessing_function(index / self.d, index % self.d, basis, self.d).expect("index in range")
    }

    /// Largest |⟨Φ_{A,a}|I⟩ − δ_{s(I,A),a}/√d|.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// ‖Σ_I |I⟩⟨I| − 1‖_max.
    pub fn completeness_residual(&self) -> f64 {
        let n = self.d * self.d;
        let mut sum = CMat::zeros(n, n);
        for v in &self.vectors {
            sum += v.amps() * v.amps().adjoint();
        }
        max_abs_diff(&sum, &CMat::identity(n, n))
    }

    /// Probability that the guess for basis A equals a: Σ_I δ_{s(I,A),a} ⟨I|ρ|I⟩.
    pub fn success(&self, rho: &CMat, basis: usize, a: usize) -> f64 {
        self.vectors
            .iter()
            .enumerate()
            .filter(|(i, _)| self.guess(*i, basis) == a)
            .map(|(_, v)| (v.amps().adjoint() * rho * v.amps())[(0, 0)].re)
            .sum()
    }
}

/// Solves ⟨Φ_{A,a}|I⟩ = δ_{s(I,A),a}/√d for every I and checks orthonormality.
pub fn king_basis(d: usize) -> Result<KingBasis> {
    if !is_prime(d) {
        return Err(Error::NotPrime(d));
    }
    let n = d * d;
    let keys: Vec<(usize, usize)> = (0..=d).flat_map(|b| (0..d).map(move |a| (b, a))).collect();
    let mut rows = CMat::zeros(keys.len(), n);
    for (k, &(b, a)) in keys.iter().enumerate() {
        let phi = phi_state(d, b, a)?;
        for j in 0..n {
            rows[(k, j)] = phi.amps()[j].conj();
        }
    }
    let svd = rows.clone().svd(true, true);
    let s = 1.0 / (d as f64).sqrt();
    let mut vectors = Vec::with_capacity(n);
    let mut residual: f64 = 0.0;
    for m in 0..d {
        for nn in 0..d {
            let rhs = CVec::from_iterator(
                keys.len(),
                keys.iter().map(|&(b, a)| r(if guessing_function(m, nn, b, d).unwrap() == a { s } else { 0.0 })),
            );
            let x = svd.solve(&rhs, 1e-12).map_err(|e| Error::Optimizer(e.to_string()))?;
            residual = (&rows * &x - rhs).iter().fold(residual, |acc, z| acc.max(z.norm()));
            vectors.push(x);
        }
    }
    if residual > 1e-8 {
        return Err(Error::Inconsistent(residual));
    }
    let mut ortho: f64 = 0.0;
    for (i, u) in vectors.iter().enumerate() {
        for (j, v) in vectors.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            ortho = ortho.max((u.dotc(v) - r(want)).norm());
        }
    }
    if ortho > 1e-8 {
        return Err(Error::Inconsistent(ortho));
    }
    let vectors = vectors
        .into_iter()
        .map(|v| StateVector::new(vec![d, d], v))
        .collect::<Result<Vec<_>>>()?;
    Ok(KingBasis { d, vectors, residual })
}

/// Eve's two-channel attack: swap fraction p on the pair source and a g+1 MUB cloner
/// with Bob-side channel fidelity F_B on the return channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackParams {
    pub d: usize,
    pub g: usize,
    pub p: f64,
    pub f_b: f64,
    pub v: f64,
}

impl AttackParams {
    pub fn new(d: usize, g: usize, p: f64, f_b: f64, v: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("p = {p} outside [0,1]")));
        }
        MubCloneParams::new(d, g, f_b, v)?;
        Ok(Self { d, g, p, f_b, v })
    }

    pub fn cloner(&self) -> MubCloneParams {
        MubCloneParams::new(self.d, self.g, self.f_b, self.v).expect("validated")
    }

    pub fn x(&self) -> f64 {
        self.cloner().x
    }

    pub fn y(&self) -> f64 {
        self.cloner().y
    }
}

/// (v′, x′, y′) read off the dual amplitude matrix b.
pub fn dual_parameters(params: &AttackParams) -> Result<(f64, f64, f64)> {
    let b = params.cloner().amplitude_matrix()?.fourier();
    let y = if params.g < params.d { b.get(1, params.g).norm() } else { 0.0 };
    Ok((b.get(0, 0).norm(), b.get(0, 1).norm(), y))
}

/// Closed-form (F_Bob, F_Eve) of the retrodiction protocol under the attack.
pub fn king_fidelities(params: &AttackParams) -> Result<(f64, f64)> {
    let AttackParams { d, g, p, .. } = *params;
    let c = params.cloner();
    let (vp, xp, yp) = dual_parameters(params)?;
    if d == 2 {
        let fb = 0.5 - p / 4.0 + 0.5 * (c.v * c.v + c.x * c.x);
        let fe = (1.0 + p) / 4.0 + 0.5 * (vp * vp + xp * xp);
        return Ok((fb, fe));
    }
    let (df, gf) = (d as f64, g as f64);
    let q = |v: f64, x: f64, y: f64| v * v + (df + gf - 1.0) * x * x + (df - gf) * y * y;
    let fb = (1.0 - p) * q(c.v, c.x, c.y) + p / df;
    let fe = (1.0 - p) / df + p * q(vp, xp, yp);
    Ok((fb, fe))
}

/// Bases Alice draws from: the computational one and the first g eigenbases.
fn attacked_bases(d: usize, g: usize) -> Vec<usize> {
    std::iter::once(d).chain(0..g).collect()
}

fn project_site1(state: &CVec, psi: &StateVector, d: usize) -> Result<StateVector> {
    // sites (B, A, E, E′), keeps (B, E, E′)
    let mut out = CVec::zeros(d * d * d);
    for b in 0..d {
        for a in 0..d {
            for rest in 0..d * d {
                out[b * d * d + rest] += psi.amps()[a].conj() * state[(b * d + a) * d * d + rest];
            }
        }
    }
    StateVector::normalized(vec![d, d, d], out)
}

/// Full density-matrix simulation of the attacked protocol, averaged over the
/// attacked bases and Alice's outcomes; returns (F_Bob, F_Eve).
pub fn simulate_mean_king(params: &AttackParams) -> Result<(f64, f64)> {
    let AttackParams { d, g, p, .. } = *params;
    let king = king_basis(d)?;
    let amp = params.cloner().amplitude_matrix()?;
    let s = 1.0 / (d as f64).sqrt();
    // √(1−p)|Φ⁺⟩_BA|Φ⁺⟩_EE′ and √p|Φ⁺⟩_BE|Φ⁺⟩_AE′, mixed with weights (1−p, p)
    let idx = |b: usize, a: usize, e: usize, ep: usize| ((b * d + a) * d + e) * d + ep;
    let mut direct = CVec::zeros(d.pow(4));
    let mut swapped = CVec::zeros(d.pow(4));
    for i in 0..d {
        for j in 0..d {
            direct[idx(i, i, j, j)] = r(s * s);
            swapped[idx(i, j, i, j)] = r(s * s);
        }
    }
    let (mut fb, mut fe, mut count) = (0.0, 0.0, 0.0);
    for basis in attacked_bases(d, g) {
        for a0 in 0..d {
            let psi = king_mub_state(d, basis, a0)?;
            let br1 = project_site1(&direct, &psi, d)?;
            let br2 = project_site1(&swapped, &psi, d)?;
            let rho_b = br1.reduced(&[0])?.into_mat() * r(1.0 - p) + br2.reduced(&[0])?.into_mat() * r(p);
            let rho_e = br1.reduced(&[2])?.into_mat() * r(1.0 - p) + br2.reduced(&[2])?.into_mat() * r(p);
            let out = crate::asym::cerf_channel(&psi, &amp)?;
            let bob = DensityMatrix::new(vec![d], rho_b)?.kron(&out.rho_a);
            let eve = DensityMatrix::new(vec![d], rho_e)?.kron(&out.rho_c);
            bob.validate()?;
            eve.validate()?;
            fb += king.success(bob.mat(), basis, a0);
            fe += king.success(eve.mat(), basis, a0);
            count += 1.0;
        }
    }
    Ok((fb / count, fe / count))
}

/// Qubit case of [`simulate_mean_king`].
pub fn simulate_mean_king_d2(params: &AttackParams) -> Result<(f64, f64)> {
    if params.d != 2 {
        return Err(Error::InvalidArgument("d must be 2".into()));
    }
    simulate_mean_king(params)
}

/// Conditional probability tables of the attack, indexed by Alice's symbol i.
#[derive(Debug, Clone)]
pub struct AttackTables {
    pub d: usize,
    /// p(a₁|i), rows i.
    pub bob1: DMatrix<f64>,
    /// p(a₂|i), rows i.
    pub bob2: DMatrix<f64>,
    /// p(e₁,e₁′|i), one d × d matrix per i.
    pub eve1: Vec<DMatrix<f64>>,
    /// p(e₂,e₂′|i), one d × d matrix per i.
    pub eve2: Vec<DMatrix<f64>>,
}

/// Tables from the closed forms of the attack.
pub fn attack_tables(params: &AttackParams) -> Result<AttackTables> {
    let AttackParams { d, g, p, .. } = *params;
    let c = params.cloner();
    let (v, x, y) = (c.v, c.x, c.y);
    let (df, gf) = (d as f64, g as f64);
    let bob1 = DMatrix::from_fn(d, d, |i, a| if a == i { 1.0 / df + (df - 1.0) * (1.0 - p) / df } else { p / df });
    let off = gf * x * x + (df - gf) * y * y;
    let bob2 = DMatrix::from_fn(d, d, |i, a| if a == i { v * v + (df - 1.0) * x * x } else { off });
    let eve1 = (0..d)
        .map(|i| {
            DMatrix::from_fn(d, d, |e, ep| match (e == ep, e == i, ep == i) {
                (true, true, _) => 1.0 / df,
                (true, false, _) => (1.0 - p) / df,
                (false, _, true) => p / df,
                _ => 0.0,
            })
        })
        .collect();
    let eve2 = (0..d)
        .map(|i| {
            DMatrix::from_fn(d, d, |e, ep| {
                if e == ep && ep == i {
                    (v + (df - 1.0) * x).powi(2) / df
                } else if e == ep {
                    (v - x).powi(2) / df
                } else if ep == i {
                    (gf * x + (df - gf) * y).powi(2) / df
                } else {
                    let m = (e + d - ep) % d;
                    let t = ((i + d - ep) % d) as i64;
                    let ratio = (C64::new(1.0, 0.0) - omega(d, m as i64 * g as i64 * t))
                        / (C64::new(1.0, 0.0) - omega(d, m as i64 * t));
                    (x - y).powi(2) / df * ratio.norm_sqr()
                }
            })
        })
        .collect();
    let t = AttackTables { d, bob1, bob2, eve1, eve2 };
    t.validate()?;
    Ok(t)
}

/// p(e₂,e₂′|i) computed directly from the post-attack state amplitudes.
pub fn eve2_table_direct(params: &AttackParams, i: usize) -> Result<DMatrix<f64>> {
    let d = params.d;
    let a = params.cloner().amplitude_matrix()?;
    Ok(DMatrix::from_fn(d, d, |e, ep| {
        let m = (e + d - ep) % d;
        let t = (i + d - ep) % d;
        let s: C64 = (0..d).map(|n| a.get(m, n) * omega(d, (n * t) as i64)).sum();
        s.norm_sqr() / d as f64
    }))
}

impl AttackTables {
    fn validate(&self) -> Result<()> {
        let d = self.d;
        let check = |m: &DMatrix<f64>, what: &str| -> Result<()> {
            if m.iter().any(|&v| v < -1e-12) {
                return Err(Error::Normalization(format!("negative entry in {what}")));
            }
            Ok(())
        };
        for (m, what) in [(&self.bob1, "p(a1|i)"), (&self.bob2, "p(a2|i)")] {
            check(m, what)?;
            for i in 0..d {
                let s = m.row(i).sum();
                if (s - 1.0).abs() > 1e-10 {
                    return Err(Error::Normalization(format!("{what} row {i} sums to {s}")));
                }
            }
        }
        for (ms, what) in [(&self.eve1, "p(e1,e1'|i)"), (&self.eve2, "p(e2,e2'|i)")] {
            for (i, m) in ms.iter().enumerate() {
                check(m, what)?;
                let s = m.sum();
                if (s - 1.0).abs() > 1e-10 {
                    return Err(Error::Normalization(format!("{what} row {i} sums to {s}")));
                }
            }
        }
        Ok(())
    }

    /// (I_AB, I_AE) in bits with the two channels conditionally independent.
    ///
    /// Every row is the row for i = 0 cyclically shifted by i, so the conditional
    /// entropy is that of row 0 and the marginal is invariant under a common shift.
    pub fn mutual_info(&self) -> (f64, f64) {
        let d = self.d;
        let h_bob = entropy_bits(self.bob1.row(0).iter().copied()) + entropy_bits(self.bob2.row(0).iter().copied());
        let h_eve = entropy_bits(self.eve1[0].iter().copied()) + entropy_bits(self.eve2[0].iter().copied());
        let df = d as f64;
        let (b1, b2) = (&self.bob1, &self.bob2);
        let bob_marg = (0..d)
            .flat_map(|a| (0..d).map(move |b| (0..d).map(|i| b1[(i, a)] * b2[(i, b)]).sum::<f64>() / df));
        let (e1, e2) = (&self.eve1[0], &self.eve2[0]);
        let back = |x: usize, i: usize| (x + d - i) % d;
        let mut h_marg = 0.0;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let q = (0..d)
                        .map(|i| e1[(back(0, i), back(a, i))] * e2[(back(b, i), back(c, i))])
                        .sum::<f64>()
                        / df;
                    if q > 0.0 {
                        h_marg -= q * q.log2();
                    }
                }
            }
        }
        (entropy_bits(bob_marg) - h_bob, df * h_marg - h_eve)
    }

    /// [`Self::mutual_info`] summed over the full joint tables without the shift symmetry.
    pub fn mutual_info_direct(&self) -> (f64, f64) {
        let d = self.d;
        let bob: Vec<Vec<f64>> = (0..d)
            .map(|i| product(self.bob1.row(i).iter(), self.bob2.row(i).iter()))
            .collect();
        let eve: Vec<Vec<f64>> = (0..d).map(|i| product(self.eve1[i].iter(), self.eve2[i].iter())).collect();
        (shannon_mi(&bob), shannon_mi(&eve))
    }

    /// (I_AB, I_AE) of the return channel alone.
    pub fn channel2_mutual_info(&self) -> (f64, f64) {
        let d = self.d;
        let bob: Vec<Vec<f64>> = (0..d).map(|i| self.bob2.row(i).iter().copied().collect()).collect();
        let eve: Vec<Vec<f64>> = (0..d).map(|i| self.eve2[i].iter().copied().collect()).collect();
        (shannon_mi(&bob), shannon_mi(&eve))
    }
}

fn product<'a>(a: impl Iterator<Item = &'a f64>, b: impl Iterator<Item = &'a f64> + Clone) -> Vec<f64> {
    a.flat_map(|x| b.clone().map(move |y| x * y)).collect()
}

/// Shannon entropy in bits with 0·log 0 = 0 and negative round-off clipped.
pub fn entropy_bits(p: impl IntoIterator<Item = f64>) -> f64 {
    p.into_iter().filter(|&x| x > 0.0).map(|x| -x * x.log2()).sum()
}

/// I(X;Y) for uniform X and conditional rows p(y|x).
pub fn shannon_mi(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len() as f64;
    let k = rows[0].len();
    let marginal = (0..k).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n);
    let cond: f64 = rows.iter().map(|r| entropy_bits(r.iter().copied())).sum::<f64>() / n;
    entropy_bits(marginal) - cond
}

/// (I_AB, I_AE) in bits for the attacked retrodiction protocol.
pub fn mutual_info(params: &AttackParams) -> Result<(f64, f64)> {
    Ok(attack_tables(params)?.mutual_info())
}

/// Bob's return-channel fidelity F_B that yields the protocol fidelity F_Bob at swap fraction p.
pub fn channel_fidelity_for(d: usize, p: f64, f_bob: f64) -> Option<f64> {
    let df = d as f64;
    let fb = if d == 2 {
        2.0 * f_bob - 1.0 + p / 2.0
    } else {
        if p >= 1.0 {
            return None;
        }
        ((f_bob - p / df) / (1.0 - p) - 1.0 / (df - 1.0)) * (df - 1.0) / (df - 2.0)
    };
    (1.0 / df - 1e-14..=1.0 + 1e-14).contains(&fb).then(|| fb.clamp(1.0 / df, 1.0))
}

/// Grid sizes for the D_I optimization.
#[derive(Debug, Clone, Copy)]
pub struct DisturbanceOptions {
    pub p_points: usize,
    pub v_points: usize,
    pub tol: f64,
}

impl Default for DisturbanceOptions {
    fn default() -> Self {
        Self { p_points: 41, v_points: 24, tol: 1e-7 }
    }
}

fn max_over_v(d: usize, g: usize, f_b: f64, points: usize, f: impl Fn(f64) -> f64) -> f64 {
    let (lo, hi) = mub_v_range(d, g, f_b);
    if hi - lo < 1e-12 {
        f(lo)
    } else {
        scan_max(f, lo, hi, points, 1e-9).1
    }
}

fn max_over_p(points: usize, f: impl Fn(f64) -> f64) -> f64 {
    let n = points.max(3);
    let h = 1.0 / (n - 1) as f64;
    let vals: Vec<f64> = (0..n).map(|i| f(i as f64 * h)).collect();
    let (k, best) = vals.iter().enumerate().fold((0, f64::MIN), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    if best == f64::MIN {
        return best;
    }
    let lo = (k as f64 - 1.0).max(0.0) * h;
    let hi = ((k + 1) as f64 * h).min(1.0);
    golden_max(&f, lo, hi, 1e-7).1.max(best)
}

/// max over (p, v) of I_AE − I_AB at fixed F_Bob.
pub fn king_gap(d: usize, g: usize, f_bob: f64, opts: &DisturbanceOptions) -> f64 {
    max_over_p(opts.p_points, |p| match channel_fidelity_for(d, p, f_bob) {
        None => f64::MIN,
        Some(f_b) => max_over_v(d, g, f_b, opts.v_points, |v| {
            AttackParams::new(d, g, p, f_b, v)
                .and_then(|a| mutual_info(&a))
                .map(|(ib, ie)| ie - ib)
                .unwrap_or(f64::MIN)
        }),
    })
}

/// max over v of I_AE − I_AB for the plain g+1 basis protocol at F_Bob = F_B.
pub fn standard_gap(d: usize, g: usize, f_b: f64, opts: &DisturbanceOptions) -> f64 {
    max_over_v(d, g, f_b, opts.v_points, |v| {
        AttackParams::new(d, g, 0.0, f_b, v)
            .and_then(|a| attack_tables(&a))
            .map(|t| {
                let (ib, ie) = t.channel2_mutual_info();
                ie - ib
            })
            .unwrap_or(f64::MIN)
    })
}

fn check_dg(d: usize, g: usize) -> Result<()> {
    if !is_prime(d) {
        return Err(Error::NotPrime(d));
    }
    if g == 0 || g > d {
        return Err(Error::InvalidArgument(format!("g = {g} outside 1..=d")));
    }
    Ok(())
}

fn crossing(d: usize, gap: impl Fn(f64) -> f64, tol: f64) -> Result<f64> {
    // bracket the first positive → non-positive change on a grid over (1/d, 1)
    let n = 64;
    let lo = 1.0 / d as f64;
    let hi = 1.0 - 1e-9;
    let grid: Vec<f64> = (1..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
    let mut prev: Option<f64> = None;
    for &f in &grid {
        let v = gap(f);
        if v > 0.0 {
            prev = Some(f);
        } else if let Some(a) = prev {
            let f_star = bisect(&gap, a, f, tol)?;
            return Ok(100.0 * (1.0 - f_star));
        }
    }
    Err(Error::Optimizer("I_AE − I_AB does not change sign on the F_Bob bracket".into()))
}

/// Disturbance D_I (percent) of the retrodiction protocol.
pub fn disturbance_di(d: usize, g: usize) -> Result<f64> {
    disturbance_di_with(d, g, &DisturbanceOptions::default())
}

pub fn disturbance_di_with(d: usize, g: usize, opts: &DisturbanceOptions) -> Result<f64> {
    check_dg(d, g)?;
    crossing(d, |f| king_gap(d, g, f, opts), opts.tol)
}

/// Disturbance D_I (percent) of the plain g+1 MUB protocol.
pub fn standard_disturbance_di(d: usize, g: usize) -> Result<f64> {
    check_dg(d, g)?;
    let opts = DisturbanceOptions::default();
    crossing(d, |f| standard_gap(d, g, f, &opts), opts.tol)
}

/// Prepare-and-measure protocols with a known optimal cloning attack.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QkdProtocol {
    Bb84,
    SixState,
    TwoBasis { d: usize },
    MultiBasis { d: usize, g: usize },
}

impl QkdProtocol {
    pub fn dim(&self) -> usize {
        match *self {
            Self::Bb84 | Self::SixState => 2,
            Self::TwoBasis { d } | Self::MultiBasis { d, .. } => d,
        }
    }
}

/// Eve's optimal fidelity at Bob fidelity F_Bob.
pub fn standard_qkd_eve(f_bob: f64, protocol: QkdProtocol) -> Result<f64> {
    let d = protocol.dim();
    if !(1.0 / d as f64 - 1e-12..=1.0 + 1e-12).contains(&f_bob) {
        return Err(Error::InvalidArgument(format!("F_Bob = {f_bob} outside [1/d, 1]")));
    }
    let f = f_bob.clamp(1.0 / d as f64, 1.0);
    Ok(match protocol {
        QkdProtocol::Bb84 => 0.5 * (f.sqrt() + (1.0 - f).sqrt()).powi(2),
        QkdProtocol::SixState => ((3.0 * f - 1.0).sqrt() + (1.0 - f).sqrt()).powi(2) / 4.0 + (1.0 - f),
        QkdProtocol::TwoBasis { d } => mub_tradeoff_g1(d, f),
        QkdProtocol::MultiBasis { d, g } => mub_eve_max(d, g, f)?.eve_fidelity(),
    })
}

/// Eve's best fidelity on the retrodiction protocol at fixed F_Bob, over (p, v).
pub fn king_eve_max(d: usize, g: usize, f_bob: f64) -> Result<f64> {
    check_dg(d, g)?;
    let best = max_over_p(201, |p| match channel_fidelity_for(d, p, f_bob) {
        None => f64::MIN,
        Some(f_b) => max_over_v(d, g, f_b, 200, |v| {
            AttackParams::new(d, g, p, f_b, v)
                .and_then(|a| king_fidelities(&a))
                .map(|(_, fe)| fe)
                .unwrap_or(f64::MIN)
        }),
    });
    if best == f64::MIN {
        return Err(Error::InvalidArgument(format!("F_Bob = {f_bob} unreachable")));
    }
    Ok(best)
}
