//! Sequential N → M cloning with a matrix-product chain.
//!
//! Physical sites 1..M carry the clones and sites M+1..2M−N the register.
//! The ancilla sweeps the sites once. Bond labels are occupation vectors: the
//! content of the sites already written during the clone phase, and the content
//! still owed to the register afterwards.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::combin::{binom, binom_u, multinomial};
use crate::error::{Error, Result};
use crate::linalg::{c, r, sym_basis, sym_embed, CMat, CVec, OccupationVector, StateVector, C64};
use crate::tol;

/// How register occupation maps to register basis states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Register {
    /// |R_j⟩ is the symmetric state with occupation j.
    Occupation,
    /// Qubit convention |R_j⟩ = |(K−j) ones, j zeros⟩.
    Complement,
}

/// Site tensors V^[n]i (D×D per physical index) with boundary vectors.
///
/// Amplitudes are ψ(i₁…i_L) = φ_F† V^[L]i_L ⋯ V^[1]i₁ φ_I.
#[derive(Debug, Clone, PartialEq)]
pub struct MpsChain {
    d: usize,
    bond: usize,
    sites: Vec<Vec<CMat>>,
    phi_i: CVec,
    phi_f: CVec,
    labels: Vec<Vec<Vec<usize>>>,
}

impl MpsChain {
    pub fn d(&self) -> usize {
        self.d
    }

    /// Ancilla dimension D.
    pub fn bond(&self) -> usize {
        self.bond
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// V^[site]i as a D×D matrix, `site` counted from 0.
    pub fn matrix(&self, site: usize, i: usize) -> &CMat {
        &self.sites[site][i]
    }

    pub fn phi_i(&self) -> &CVec {
        &self.phi_i
    }

    pub fn phi_f(&self) -> &CVec {
        &self.phi_f
    }

    /// Occupation labels of the bond states at cut `cut` (0..=L), in index order.
    /// Empty for chains read from JSON.
    pub fn labels(&self, cut: usize) -> &[Vec<usize>] {
        self.labels.get(cut).map_or(&[], |v| v.as_slice())
    }

    /// Ancilla ⊗ physical amplitudes after all sites, as a D × d^L matrix.
    pub fn sweep(&self) -> Result<CMat> {
        let total = self.d.pow(self.len() as u32);
        tol::check_dim(total.max(self.bond))?;
        let mut acc = CMat::from_column_slice(self.bond, 1, self.phi_i.as_slice());
        for site in &self.sites {
            let cols = acc.ncols();
            let mut next = CMat::zeros(self.bond, cols * self.d);
            for col in 0..cols {
                let v = acc.column(col);
                for (i, m) in site.iter().enumerate() {
                    next.set_column(col * self.d + i, &(m * v));
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    /// The physical state φ_F† (∏ V) φ_I.
    pub fn contract(&self) -> Result<StateVector> {
        let acc = self.sweep()?;
        let amps = (self.phi_f.adjoint() * acc).transpose();
        StateVector::new(vec![self.d; self.len()], amps)
    }

    /// ‖Σᵢ V^i†V^i − I‖_max at one site.
    pub fn site_isometry_residual(&self, site: usize) -> f64 {
        let mut acc = -CMat::identity(self.bond, self.bond);
        for m in &self.sites[site] {
            acc += m.adjoint() * m;
        }
        acc.iter().fold(0.0, |w, z| w.max(z.norm()))
    }

    /// Largest per-site isometry residual.
    pub fn isometry_residual(&self) -> f64 {
        (0..self.len()).map(|s| self.site_isometry_residual(s)).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        let pair = |z: &C64| [z.re, z.im];
        let doc = ChainJson {
            d: self.d,
            bond: self.bond,
            phi_i: self.phi_i.iter().map(pair).collect(),
            phi_f: self.phi_f.iter().map(pair).collect(),
            tensors: self
                .sites
                .iter()
                .enumerate()
                .flat_map(|(site, ms)| {
                    ms.iter().enumerate().map(move |(physical, m)| TensorJson {
                        site,
                        physical,
                        rows: m.nrows(),
                        cols: m.ncols(),
                        entries: m.transpose().iter().map(pair).collect(),
                    })
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("chain serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ChainJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let vec = |v: &[[f64; 2]]| CVec::from_iterator(v.len(), v.iter().map(|p| c(p[0], p[1])));
        let (d, bond) = (doc.d, doc.bond);
        if doc.phi_i.len() != bond || doc.phi_f.len() != bond {
            return Err(Error::DimMismatch("boundary vector length".into()));
        }
        let n_sites = doc.tensors.iter().map(|t| t.site + 1).max().unwrap_or(0);
        let mut sites = vec![vec![CMat::zeros(bond, bond); d]; n_sites];
        let mut seen = vec![vec![false; d]; n_sites];
        for t in &doc.tensors {
            if t.rows != bond || t.cols != bond || t.entries.len() != bond * bond || t.physical >= d {
                return Err(Error::DimMismatch(format!("tensor ({}, {})", t.site, t.physical)));
            }
            sites[t.site][t.physical] = CMat::from_row_iterator(
                bond,
                bond,
                t.entries.iter().map(|p| c(p[0], p[1])),
            );
            seen[t.site][t.physical] = true;
        }
        if seen.iter().flatten().any(|s| !s) {
            return Err(Error::InvalidArgument("missing site tensor".into()));
        }
        Ok(Self { d, bond, sites, phi_i: vec(&doc.phi_i), phi_f: vec(&doc.phi_f), labels: vec![] })
    }
}

#[derive(Serialize, Deserialize)]
struct ChainJson {
    d: usize,
    bond: usize,
    phi_i: Vec<[f64; 2]>,
    phi_f: Vec<[f64; 2]>,
    tensors: Vec<TensorJson>,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    site: usize,
    physical: usize,
    rows: usize,
    cols: usize,
    /// Row-major (re, im) pairs.
    entries: Vec<[f64; 2]>,
}

fn mult(counts: &[usize]) -> f64 {
    multinomial(counts)
}

fn add(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[usize], b: &[usize]) -> Option<Vec<usize>> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
}

/// β_j = √(Π C(m_i+j_i, m_i) / C(M+d−1, M−N)).
fn beta(input: &[usize], j: &[usize], mm: usize) -> f64 {
    let d = input.len();
    let n: usize = input.iter().sum();
    let num: f64 = input.iter().zip(j).map(|(&a, &b)| binom(a + b, a)).product();
    (num / binom(mm + d - 1, mm - n)).sqrt()
}

/// Output |Ψ_M^(m)⟩ = Σ_j β_j |m+j⟩ ⊗ |R_j⟩ built directly.
pub fn sequential_target(input: &OccupationVector, mm: usize, register: Register) -> Result<StateVector> {
    let (d, n) = (input.d(), input.n());
    check_args(n, mm)?;
    if register == Register::Complement && d != 2 {
        return Err(Error::InvalidArgument("complement register needs d = 2".into()));
    }
    let k = mm - n;
    tol::check_dim(d.pow((mm + k) as u32))?;
    let mut amps = CVec::zeros(d.pow((mm + k) as u32));
    for j in sym_basis(d, k) {
        let out = sym_embed(&input.add(&j))?;
        let reg = match register {
            Register::Occupation => j.clone(),
            Register::Complement => OccupationVector::new(vec![j.counts()[1], j.counts()[0]])?,
        };
        let reg = if k == 0 { CVec::from_element(1, r(1.0)) } else { sym_embed(&reg)?.into_amps() };
        amps += out.amps().kronecker(&reg) * r(beta(input.counts(), j.counts(), mm));
    }
    StateVector::new(vec![d; mm + k], amps)
}

fn check_args(n: usize, mm: usize) -> Result<()> {
    if n == 0 || n > mm {
        return Err(Error::InvalidArgument(format!("need 1 <= N <= M, got N={n}, M={mm}")));
    }
    Ok(())
}

fn build_chain(input: &OccupationVector, mm: usize, register: Register) -> Result<MpsChain> {
    let (d, n) = (input.d(), input.n());
    check_args(n, mm)?;
    let m = input.counts();
    let k = mm - n;
    let len = mm + k;
    tol::check_dim(d.pow(len as u32))?;
    let regs = sym_basis(d, k);
    let b2: Vec<f64> = regs.iter().map(|j| beta(m, j.counts(), mm).powi(2)).collect();
    let b2_of: HashMap<Vec<usize>, f64> =
        regs.iter().zip(&b2).map(|(j, &b)| (j.counts().to_vec(), b)).collect();

    // Schmidt weights λ² at every cut, restricted to reachable labels.
    let mut labels: Vec<Vec<Vec<usize>>> = Vec::with_capacity(len + 1);
    let mut weights: Vec<HashMap<Vec<usize>, f64>> = Vec::with_capacity(len + 1);
    for t in 0..=mm {
        let mut w = HashMap::new();
        let mut keep = vec![];
        for cc in sym_basis(d, t) {
            let cc = cc.counts().to_vec();
            let lam2: f64 = regs
                .iter()
                .zip(&b2)
                .filter_map(|(j, &b)| {
                    let full = add(m, j.counts());
                    sub(&full, &cc).map(|rest| b * mult(&cc) * mult(&rest) / mult(&full))
                })
                .sum();
            if lam2 > 0.0 {
                w.insert(cc.clone(), lam2);
                keep.push(cc);
            }
        }
        labels.push(keep);
        weights.push(w);
    }
    for l in 1..=k {
        let mut w = HashMap::new();
        let mut keep = vec![];
        for rr in sym_basis(d, k - l) {
            let rr = rr.counts().to_vec();
            let lam2: f64 = sym_basis(d, l)
                .iter()
                .map(|z| {
                    let full = add(z.counts(), &rr);
                    b2_of[&full] * mult(z.counts()) * mult(&rr) / mult(&full)
                })
                .sum();
            if lam2 > 0.0 {
                w.insert(rr.clone(), lam2);
                keep.push(rr);
            }
        }
        labels.push(keep);
        weights.push(w);
    }

    let bond = labels.iter().map(Vec::len).max().unwrap_or(1);
    let index: Vec<HashMap<Vec<usize>, usize>> = labels
        .iter()
        .map(|ls| ls.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect())
        .collect();
    let unit = |i: usize| -> Vec<usize> { (0..d).map(|a| usize::from(a == i)).collect() };

    let mut sites = Vec::with_capacity(len);
    for s in 1..=len {
        let mut mats = vec![CMat::zeros(bond, bond); d];
        for (col, lab) in labels[s - 1].iter().enumerate() {
            if s <= mm {
                for (i, mat) in mats.iter_mut().enumerate() {
                    let next = add(lab, &unit(i));
                    if let Some(&row) = index[s].get(&next) {
                        let v = (weights[s][&next] / weights[s - 1][lab]).sqrt()
                            * (mult(lab) / mult(&next)).sqrt();
                        mat[(row, col)] = r(v);
                    }
                }
            } else {
                let owed = if s - 1 == mm {
                    sub(lab, m).ok_or(Error::Inconsistent(1.0))?
                } else {
                    lab.clone()
                };
                for i in 0..d {
                    let Some(next) = sub(&owed, &unit(i)) else { continue };
                    if let Some(&row) = index[s].get(&next) {
                        let phys = match register {
                            Register::Occupation => i,
                            Register::Complement => d - 1 - i,
                        };
                        mats[phys][(row, col)] = r((mult(&next) / mult(&owed)).sqrt());
                    }
                }
            }
        }
        complete_isometry(&mut mats, labels[s - 1].len())?;
        sites.push(mats);
    }
    let mut phi_i = CVec::zeros(bond);
    phi_i[0] = r(1.0);
    let phi_f = phi_i.clone();
    Ok(MpsChain { d, bond, sites, phi_i, phi_f, labels })
}

/// Fills columns `used..D` of the stacked (dD × D) site map with an orthonormal
/// completion, after checking the first `used` columns are orthonormal.
fn complete_isometry(mats: &mut [CMat], used: usize) -> Result<()> {
    let bond = mats[0].ncols();
    let d = mats.len();
    let mut stacked = CMat::zeros(d * bond, bond);
    for (i, m) in mats.iter().enumerate() {
        stacked.view_mut((i * bond, 0), (bond, bond)).copy_from(m);
    }
    let gram = stacked.columns(0, used).adjoint() * stacked.columns(0, used);
    let err = (gram - CMat::identity(used, used)).iter().fold(0.0, |w: f64, z| w.max(z.norm()));
    if err > tol::EXACT {
        return Err(Error::Inconsistent(err));
    }
    let mut basis: Vec<CVec> = (0..used).map(|j| stacked.column(j).into_owned()).collect();
    let mut cand = 0;
    for col in used..bond {
        loop {
            let mut v = CVec::zeros(d * bond);
            v[cand] = r(1.0);
            cand += 1;
            for b in &basis {
                v -= b * b.dotc(&v);
            }
            let nv = v.norm();
            if nv > 1e-6 {
                let v = v / r(nv);
                stacked.set_column(col, &v);
                basis.push(v);
                break;
            }
        }
    }
    for (i, m) in mats.iter_mut().enumerate() {
        m.copy_from(&stacked.view((i * bond, 0), (bond, bond)));
    }
    Ok(())
}

/// Chain for the qubit input with `m` ones among N, register |(K−j) ones, j zeros⟩.
pub fn seq_matrices_qubit(n: usize, mm: usize, m: usize) -> Result<MpsChain> {
    if m > n {
        return Err(Error::InvalidArgument(format!("m={m} exceeds N={n}")));
    }
    build_chain(&OccupationVector::new(vec![n - m, m])?, mm, Register::Complement)
}

/// Chain for a qudit occupation input, register |R_j⟩ = |j⟩_sym.
pub fn seq_matrices_qudit(input: &OccupationVector, mm: usize) -> Result<MpsChain> {
    build_chain(input, mm, Register::Occupation)
}

/// All chains for N → M qudit cloning, one per input occupation vector.
pub fn seq_chains_qudit(n: usize, mm: usize, d: usize) -> Result<Vec<(OccupationVector, MpsChain)>> {
    if d < 2 {
        return Err(Error::InvalidArgument("d >= 2".into()));
    }
    sym_basis(d, n).into_iter().map(|o| seq_matrices_qudit(&o, mm).map(|ch| (o, ch))).collect()
}

/// Minimal qubit ancilla dimension M − ⌊(N+1)/2⌋ + 1.
pub fn qubit_bond_dimension(n: usize, mm: usize) -> usize {
    mm + 1 - n.div_ceil(2)
}

/// Closed-form qudit ancilla dimension C(M − ⌊(N+1)/2⌋ + d − 1, d − 1).
///
/// Equals the minimal width for N = 1 and for d = 2; see [`MpsChain::bond`] otherwise.
pub fn qudit_bond_dimension(n: usize, mm: usize, d: usize) -> usize {
    binom_u(mm - n.div_ceil(2) + d - 1, d - 1)
}

/// One measurement outcome of the sequential protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolBranch {
    pub outcome: usize,
    pub probability: f64,
    /// Phase-gate angle θ = −2πm′/(N+1).
    pub theta: f64,
    /// Post-correction state.
    pub state: StateVector,
    /// ⟨Ψ_M|corrected⟩.
    pub overlap: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolReport {
    /// Σ_m x₀^{N−m} x₁^m √C(N,m) |Ψ_M^(m)⟩.
    pub target: StateVector,
    pub branches: Vec<ProtocolBranch>,
    /// Largest ancilla weight left outside φ_F after the sweep.
    pub ancilla_leak: f64,
}

/// Runs the controlled-chain protocol, measures the register in the Fourier
/// basis and applies U_S = diag(1, e^{iθ}) to every site.
pub fn seq_clone_protocol(n: usize, mm: usize, x0: C64, x1: C64) -> Result<ProtocolReport> {
    check_args(n, mm)?;
    if (x0.norm_sqr() + x1.norm_sqr() - 1.0).abs() > tol::NORM {
        return Err(Error::Normalization("|x0|² + |x1|² != 1".into()));
    }
    let len = 2 * mm - n;
    let dim = 1usize << len;
    let mut parts: Vec<CVec> = Vec::with_capacity(n + 1);
    let mut ancilla_leak: f64 = 0.0;
    for m in 0..=n {
        let coeff = x0.powu((n - m) as u32) * x1.powu(m as u32) * r(binom(n, m).sqrt());
        let chain = seq_matrices_qubit(n, mm, m)?;
        let swept = chain.sweep()? * coeff;
        let on_f = chain.phi_f.adjoint() * &swept;
        let rest = &swept - &chain.phi_f * &on_f;
        ancilla_leak = ancilla_leak.max(rest.norm());
        parts.push(on_f.transpose());
    }
    let target = StateVector::normalized(vec![2; len], parts.iter().sum())?;
    let scale = 1.0 / ((n + 1) as f64).sqrt();
    let mut branches = Vec::with_capacity(n + 1);
    for mp in 0..=n {
        let mut v = CVec::zeros(dim);
        for (m, p) in parts.iter().enumerate() {
            let ph = C64::from_polar(scale, 2.0 * PI * (m * mp) as f64 / (n + 1) as f64);
            v += p * ph;
        }
        let probability = v.norm_squared();
        let theta = -2.0 * PI * mp as f64 / (n + 1) as f64;
        for (idx, a) in v.iter_mut().enumerate() {
            *a *= C64::from_polar(1.0, theta * idx.count_ones() as f64);
        }
        let state = StateVector::normalized(vec![2; len], v)?;
        let overlap = target.inner(&state);
        branches.push(ProtocolBranch { outcome: mp, probability, theta, state, overlap });
    }
    Ok(ProtocolReport { target, branches, ancilla_leak })
}
