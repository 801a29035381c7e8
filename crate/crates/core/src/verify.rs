//! Acceptance checks shared by the test suite and the command-line `verify` report.
//!
//! Each criterion returns a list of named [`Check`]s. Randomized inputs use fixed seeds.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::circuits::{cloning_circuit, copy_fidelities, CircuitAngles};
use crate::cvclone::{cascade_clone, gaussian_clone};
use crate::error::Result;
use crate::linalg::{
    haar_state, haar_unitary, hermitian_part, is_broadcastable, min_eigenvalue, mub, r, seeded_rng, CMat,
    DensityMatrix, OccupationVector, StateVector, C64,
};
use crate::optimize::bisect;
use crate::phasecov::{
    economic_phase_1to2, minimal_set_optimizer, phase_qudit_1to2, EquatorialQubit, MinimalSetOptions,
};
use crate::probclone::prob_clone_feasible;
use crate::qkd::{
    disturbance_di, king_eve_max, king_fidelities, simulate_mean_king_d2, standard_disturbance_di,
    standard_qkd_eve, AttackParams, QkdProtocol,
};
use crate::phasecov::mub_v_range;
use crate::seqclone::{seq_chains_qudit, seq_clone_protocol, seq_matrices_qubit, sequential_target, Register};
use crate::teleclone::{econ_phase_teleclone, phase_state, teleclone_channel};
use crate::tol;
use crate::uqcm::{fan_clone, mixed_clone, unified_clone, uqcm_f1, werner_clone, CloneSpec, Variant};

/// How `got` is compared with `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// |got − expected| ≤ tol.
    Close,
    /// got ≤ expected + tol.
    AtMost,
    /// got ≥ expected − tol.
    AtLeast,
    /// got − expected > tol.
    Exceeds,
}

/// One named numeric check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub got: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(skip)]
    pub relation: Relation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, relation: Relation, expected: f64, got: f64, tol: f64) -> Self {
        let mut c = Self { name: name.into(), expected, got, tol, pass: false, relation, note: None };
        c.pass = c.evaluate();
        c
    }

    pub fn close(name: impl Into<String>, expected: f64, got: f64, tol: f64) -> Self {
        Self::new(name, Relation::Close, expected, got, tol)
    }

    pub fn at_most(name: impl Into<String>, bound: f64, got: f64, tol: f64) -> Self {
        Self::new(name, Relation::AtMost, bound, got, tol)
    }

    pub fn at_least(name: impl Into<String>, bound: f64, got: f64, tol: f64) -> Self {
        Self::new(name, Relation::AtLeast, bound, got, tol)
    }

    pub fn exceeds(name: impl Into<String>, bound: f64, got: f64) -> Self {
        Self::new(name, Relation::Exceeds, bound, got, 0.0)
    }

    /// A check that could not be computed.
    pub fn error(name: impl Into<String>, message: String) -> Self {
        Self {
            name: name.into(),
            expected: f64::NAN,
            got: f64::NAN,
            tol: 0.0,
            pass: false,
            relation: Relation::Close,
            note: Some(message),
        }
    }

    fn evaluate(&self) -> bool {
        if self.note.is_some() || !self.got.is_finite() || !self.expected.is_finite() {
            return false;
        }
        match self.relation {
            Relation::Close => (self.got - self.expected).abs() <= self.tol,
            Relation::AtMost => self.got <= self.expected + self.tol,
            Relation::AtLeast => self.got >= self.expected - self.tol,
            Relation::Exceeds => self.got - self.expected > self.tol,
        }
    }

    /// Same check re-evaluated at another tolerance.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.pass = self.evaluate();
        self
    }
}

/// Acceptance criterion metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Criterion {
    pub id: usize,
    pub key: &'static str,
    pub title: &'static str,
}

pub const CRITERIA: [Criterion; 10] = [
    Criterion { id: 1, key: "universal", title: "universal cloner fidelities" },
    Criterion { id: 2, key: "equivalence", title: "Werner, Fan and unified cloners agree" },
    Criterion { id: 3, key: "phase", title: "phase-covariant cloning" },
    Criterion { id: 4, key: "probabilistic", title: "probabilistic cloning bound by bisection" },
    Criterion { id: 5, key: "king", title: "mean-king and standard QKD disturbance tables" },
    Criterion { id: 6, key: "king-d2", title: "qubit mean-king simulation and security dominance" },
    Criterion { id: 7, key: "sequential", title: "sequential MPS cloning" },
    Criterion { id: 8, key: "cv", title: "Gaussian cloning" },
    Criterion { id: 9, key: "telecloning", title: "telecloning branches and economical telecloning" },
    Criterion { id: 10, key: "properties", title: "density matrices, broadcastability and MUB invariants" },
];

/// Looks a criterion up by number or key.
pub fn find_criterion(selector: &str) -> Option<Criterion> {
    CRITERIA.iter().copied().find(|c| c.key == selector || c.id.to_string() == selector)
}

/// Checks of one criterion, with computation errors turned into failing checks.
pub fn run_criterion(c: Criterion) -> Vec<Check> {
    let res = match c.id {
        1 => universal(),
        2 => equivalence(),
        3 => phase(),
        4 => probabilistic(),
        5 => king(),
        6 => king_d2(),
        7 => sequential(),
        8 => cv(),
        9 => telecloning(),
        10 => properties(),
        _ => unreachable!("criterion ids are 1..=10"),
    };
    res.unwrap_or_else(|e| vec![Check::error(format!("{}/error", c.key), e.to_string())])
}

/// Machine-readable report with a versioned schema.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(checks: Vec<Check>) -> Self {
        Self { schema: 1, checks }
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn spread(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)
}

fn universal() -> Result<Vec<Check>> {
    let mut out = vec![];
    let mut rng = seeded_rng(101);
    for d in [2, 3, 5] {
        for n in [1, 2] {
            for m in [2, 3, 4] {
                if m < n {
                    continue;
                }
                let psi = haar_state(&[d], &mut rng);
                let rep = CloneSpec::new(d, n, m, Variant::Werner)?.run(&psi)?;
                out.push(Check::close(format!("universal/f1/d={d},N={n},M={m}"), uqcm_f1(d, n, m), rep.f1, 1e-9));
                if d == 2 {
                    let gm = CloneSpec::new(d, n, m, Variant::GisinMassar)?.run(&psi)?;
                    out.push(Check::close(format!("universal/f1-qubit/N={n},M={m}"), uqcm_f1(d, n, m), gm.f1, 1e-9));
                }
            }
        }
    }
    let psi = StateVector::bloch(1.1, 0.4);
    let headline = [("1to2-qubit", 1, 2, 5.0 / 6.0), ("1to3-qubit", 1, 3, 7.0 / 9.0), ("2to3-qubit", 2, 3, 11.0 / 12.0)];
    for (name, n, m, want) in headline {
        let gm = CloneSpec::new(2, n, m, Variant::GisinMassar)?.run(&psi)?;
        out.push(Check::close(format!("universal/headline/{name}"), want, gm.f1, 1e-12));
        out.push(Check::close(format!("universal/headline/{name}/closed-form"), want, uqcm_f1(2, n, m), 1e-15));
    }
    for d in [2, 3, 4, 5] {
        let df = d as f64;
        let psi = haar_state(&[d], &mut rng);
        let f1 = werner_clone(&psi, 1, 2)?.f1;
        out.push(Check::close(format!("universal/headline/1to2/d={d}"), (df + 3.0) / (2.0 * df + 2.0), f1, 1e-12));
    }
    Ok(out)
}

fn equivalence() -> Result<Vec<Check>> {
    let mut out = vec![];
    let mut rng = seeded_rng(202);
    let cap = tol::max_dim();
    for d in [2usize, 3, 5] {
        for n in [1usize, 2] {
            for m in [2usize, 3, 4] {
                if m <= n || d.pow(m as u32) > cap {
                    continue;
                }
                // the unified construction also carries a d^(M−N) ancilla
                let with_unified = d.pow((2 * m - n) as u32) <= cap;
                let (mut wf, mut wu): (f64, f64) = (0.0, 0.0);
                for _ in 0..10 {
                    let psi = haar_state(&[d], &mut rng);
                    let w = werner_clone(&psi, n, m)?;
                    wf = wf.max(w.joint.max_diff(&fan_clone(&psi, n, m)?.joint));
                    if with_unified {
                        wu = wu.max(w.joint.max_diff(&unified_clone(&psi, n, m)?.joint));
                    }
                }
                out.push(Check::close(format!("equivalence/werner-fan/d={d},N={n},M={m}"), 0.0, wf, 1e-10));
                if with_unified {
                    out.push(Check::close(format!("equivalence/werner-unified/d={d},N={n},M={m}"), 0.0, wu, 1e-10));
                }
            }
        }
    }
    Ok(out)
}

fn phase() -> Result<Vec<Check>> {
    let mut out = vec![];
    let f_opt = 0.5 + 1.0 / 8f64.sqrt();
    let (mut eco, mut circ) = (vec![], vec![]);
    for k in 0..32 {
        let phi = 2.0 * PI * k as f64 / 32.0;
        let (fa, fb, _) = economic_phase_1to2(phi, PI / 4.0)?;
        let psi = EquatorialQubit::new(phi).state();
        let (f2, f3) = copy_fidelities(&cloning_circuit(CircuitAngles::phase_covariant(), &psi)?, &psi)?;
        eco.extend([fa, fb]);
        circ.extend([f2, f3]);
    }
    let agree = eco.iter().zip(&circ).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    out.push(Check::close("phase/d=2/economic", f_opt, eco[0], 1e-10));
    out.push(Check::close("phase/d=2/circuit", f_opt, circ[0], 1e-10));
    out.push(Check::close("phase/d=2/economic-vs-circuit", 0.0, agree, 1e-10));
    out.push(Check::close("phase/d=2/phi-spread/economic", 0.0, spread(&eco), 1e-12));
    out.push(Check::close("phase/d=2/phi-spread/circuit", 0.0, spread(&circ), 1e-12));
    let q3 = phase_qudit_1to2(3, None)?;
    out.push(Check::close("phase/d=3/optimal", (5.0 + 17f64.sqrt()) / 12.0, q3.f1, 1e-12));

    let opts = MinimalSetOptions { starts: 6, ..Default::default() };
    let equator: Vec<_> = (0..3).map(|t| EquatorialQubit::new(2.0 * PI * t as f64 / 3.0).state()).collect();
    let res = minimal_set_optimizer(&equator, opts)?;
    out.push(Check::close("phase/minimal-set/equatorial-3", 0.85355, res.mean_fidelity, 1e-3));
    let theta = 2.0 * (1.0 / 3f64.sqrt()).acos();
    let mut tetra = vec![StateVector::basis(vec![2], 0)];
    tetra.extend((0..3).map(|t| StateVector::bloch(theta, 2.0 * PI * t as f64 / 3.0)));
    let res = minimal_set_optimizer(&tetra, MinimalSetOptions { ancilla: 2, ..opts })?;
    out.push(Check::close("phase/minimal-set/tetrahedron", 5.0 / 6.0, res.mean_fidelity, 1e-3));
    Ok(out)
}

fn probabilistic() -> Result<Vec<Check>> {
    let mut out = vec![];
    for k in 1..=9 {
        let s = k as f64 / 10.0;
        let states = [StateVector::bloch(0.0, 0.0), StateVector::bloch(2.0 * s.acos(), 0.0)];
        let h = |g: f64| prob_clone_feasible(&states, &[g, g]).map(|f| f.min_eigenvalue).unwrap_or(f64::NAN);
        let eta = bisect(h, 0.0, 1.0, 1e-12)?;
        out.push(Check::close(format!("probabilistic/eta-max/s={s:.1}"), 1.0 / (1.0 + s), eta, 1e-6));
    }
    Ok(out)
}

/// Retrodiction-protocol D_I (percent), rows d = 2, 3, 5, 7.
pub const KING_DI_TABLE: [(usize, &[f64]); 4] = [
    (2, &[15.64, 16.62]),
    (3, &[22.92, 24.31, 24.57]),
    (5, &[39.72, 41.27, 41.51, 41.60, 41.65]),
    (7, &[46.88, 48.05, 48.20, 48.27, 48.31, 48.33, 48.34]),
];

/// Standard g+1 basis QKD D_I (percent), rows d = 2, 3, 5, 7.
pub const STANDARD_DI_TABLE: [(usize, &[f64]); 4] = [
    (2, &[14.64, 15.64]),
    (3, &[21.13, 22.47, 22.67]),
    (5, &[27.60, 28.91, 29.12, 29.20, 29.23]),
    (7, &[30.90, 32.10, 32.26, 32.32, 32.36, 32.38, 32.39]),
];

fn king() -> Result<Vec<Check>> {
    let cells: Vec<(usize, usize, f64, f64)> = KING_DI_TABLE
        .iter()
        .zip(STANDARD_DI_TABLE.iter())
        .flat_map(|((d, k), (_, s))| k.iter().zip(s.iter()).enumerate().map(move |(i, (&k, &s))| (*d, i + 1, k, s)))
        .collect();
    let computed: Vec<Result<(f64, f64)>> = cells
        .par_iter()
        .map(|&(d, g, _, _)| Ok((disturbance_di(d, g)?, standard_disturbance_di(d, g)?)))
        .collect();
    let mut out = vec![];
    for (&(d, g, want_k, want_s), got) in cells.iter().zip(computed) {
        let (k, s) = got?;
        out.push(Check::close(format!("king/di/d={d},g={g}"), want_k, k, 0.1));
        out.push(Check::close(format!("king/standard-di/d={d},g={g}"), want_s, s, 0.1));
        out.push(Check::exceeds(format!("king/exceeds-standard/d={d},g={g}"), s, k));
    }
    Ok(out)
}

fn king_d2() -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for g in [1, 2] {
        for i in 0..5 {
            for j in 0..5 {
                let p = i as f64 / 4.0;
                let f_b = 0.5 + 0.5 * j as f64 / 4.0;
                let (lo, hi) = mub_v_range(2, g, f_b);
                let v = lo + (hi - lo) * ((i + 2 * j) % 5) as f64 / 4.0;
                let a = AttackParams::new(2, g, p, f_b, v)?;
                let (sb, se) = simulate_mean_king_d2(&a)?;
                let (fb, fe) = king_fidelities(&a)?;
                worst = worst.max((sb - fb).abs()).max((se - fe).abs());
            }
        }
    }
    let mut out = vec![Check::close("king-d2/simulation-vs-closed-form", 0.0, worst, 1e-8)];
    for g in [1, 2] {
        let (mut over_bb84, mut over_six) = (f64::MIN, f64::MIN);
        for k in 0..=22 {
            let f = 0.55 + 0.02 * k as f64;
            let eve = king_eve_max(2, g, f)?;
            over_bb84 = over_bb84.max(eve - standard_qkd_eve(f, QkdProtocol::Bb84)?);
            over_six = over_six.max(eve - standard_qkd_eve(f, QkdProtocol::SixState)?);
        }
        out.push(Check::at_most(format!("king-d2/below-bb84/g={g}"), 0.0, over_bb84, 1e-12));
        out.push(Check::at_most(format!("king-d2/below-six-state/g={g}"), 0.0, over_six, 1e-12));
    }
    Ok(out)
}

fn sequential() -> Result<Vec<Check>> {
    let mut out = vec![];
    for (n, mm) in [(1, 2), (1, 3), (2, 3), (2, 4)] {
        let (mut fid, mut iso): (f64, f64) = (1.0, 0.0);
        for m in 0..=n {
            let chain = seq_matrices_qubit(n, mm, m)?;
            let direct = sequential_target(&OccupationVector::new(vec![n - m, m])?, mm, Register::Complement)?;
            fid = fid.min(chain.contract()?.overlap(&direct));
            iso = iso.max(chain.isometry_residual());
        }
        out.push(Check::at_least(format!("sequential/contraction/qubit/N={n},M={mm}"), 1.0, fid, 1e-10));
        out.push(Check::close(format!("sequential/isometry/qubit/N={n},M={mm}"), 0.0, iso, 1e-10));

        let (x0, x1) = (r(0.7f64.cos()), C64::from_polar(0.7f64.sin(), 0.3));
        let rep = seq_clone_protocol(n, mm, x0, x1)?;
        let worst = rep.branches.iter().map(|b| b.overlap.norm_sqr()).fold(1.0, f64::min);
        let total: f64 = rep.branches.iter().map(|b| b.probability).sum();
        out.push(Check::at_least(format!("sequential/branches/N={n},M={mm}"), 1.0, worst, 1e-10));
        out.push(Check::close(format!("sequential/branch-probability/N={n},M={mm}"), 1.0, total, 1e-10));
        out.push(Check::close(format!("sequential/ancilla-decoupled/N={n},M={mm}"), 0.0, rep.ancilla_leak, 1e-10));
    }
    let (mut fid, mut iso): (f64, f64) = (1.0, 0.0);
    for (input, chain) in seq_chains_qudit(1, 2, 3)? {
        let direct = sequential_target(&input, 2, Register::Occupation)?;
        fid = fid.min(chain.contract()?.overlap(&direct));
        iso = iso.max(chain.isometry_residual());
    }
    out.push(Check::at_least("sequential/contraction/qutrit/N=1,M=2", 1.0, fid, 1e-10));
    out.push(Check::close("sequential/isometry/qutrit/N=1,M=2", 0.0, iso, 1e-10));
    Ok(out)
}

fn cv() -> Result<Vec<Check>> {
    let mut out = vec![];
    let alpha = C64::new(0.8, -0.35);
    for (n, m) in [(1usize, 2usize), (1, 3), (2, 3)] {
        let rep = gaussian_clone(n, m, alpha)?;
        let want = (m - n) as f64 / (m * n) as f64;
        let dev = rep.added_variance.iter().map(|&(x, p)| (x - want).abs().max((p - want).abs())).fold(0.0, f64::max);
        out.push(Check::close(format!("cv/added-variance/N={n},M={m}"), 0.0, dev, 1e-10));
        let mean_dev = rep.means.iter().map(|mu| (mu - alpha).norm()).fold(0.0, f64::max);
        out.push(Check::close(format!("cv/mean/N={n},M={m}"), 0.0, mean_dev, 1e-10));
        out.push(Check::close(format!("cv/symplectic/N={n},M={m}"), 0.0, rep.symplectic_residual, 1e-12));
        if (n, m) == (1, 2) {
            out.push(Check::close("cv/fidelity/N=1,M=2", 2.0 / 3.0, rep.overlap_fidelity[0], 1e-10));
        }
    }
    for (n, m, l) in [(1usize, 2usize, 3usize), (1, 2, 4), (2, 3, 5)] {
        let rep = cascade_clone(n, m, l, alpha)?;
        let stage = |a: usize, b: usize| (b - a) as f64 / (a * b) as f64;
        let want = stage(n, m) + stage(m, l);
        let dev = rep.added_variance.iter().map(|&(x, p)| (x - want).abs().max((p - want).abs())).fold(0.0, f64::max);
        out.push(Check::close(format!("cv/cascade/N={n},M={m},L={l}"), 0.0, dev, 1e-10));
        out.push(Check::close(format!("cv/symplectic/cascade/N={n},M={m},L={l}"), 0.0, rep.symplectic_residual, 1e-12));
    }
    Ok(out)
}

fn telecloning() -> Result<Vec<Check>> {
    let mut out = vec![];
    let mut rng = seeded_rng(909);
    for (d, mm) in [(2, 2), (3, 2), (2, 3)] {
        let tc = teleclone_channel(d, mm)?;
        let (mut worst, mut prob): (f64, f64) = (0.0, 0.0);
        for _ in 0..3 {
            let psi = haar_state(&[d], &mut rng);
            let want = werner_clone(&psi, 1, mm)?.joint;
            for b in tc.run(&psi)? {
                worst = worst.max(tc.receivers(&b)?.max_diff(&want));
                prob = prob.max((b.probability - 1.0 / (d * d) as f64).abs());
            }
        }
        out.push(Check::close(format!("telecloning/branches/d={d},M={mm}"), 0.0, worst, 1e-9));
        out.push(Check::close(format!("telecloning/branch-probability/d={d},M={mm}"), 0.0, prob, 1e-12));
    }
    for d in [2usize, 3] {
        let df = d as f64;
        let f_opt = 1.0 / df + (df - 2.0 + (df * df + 4.0 * df - 4.0).sqrt()) / (4.0 * df);
        let e = econ_phase_teleclone(d)?;
        let thetas: Vec<f64> = (0..d).map(|j| 0.9 * j as f64 - 0.4 * (j * j) as f64).collect();
        let psi = phase_state(&thetas)?;
        let branches = e.channel.run(&psi)?;
        let success: f64 = branches.iter().filter(|b| b.m == 0).map(|b| b.probability).sum();
        let mut worst: f64 = 0.0;
        for b in branches.iter().filter(|b| b.m == 0) {
            for f in e.channel.fidelities(b, &psi)? {
                worst = worst.max((f - f_opt).abs());
            }
        }
        out.push(Check::close(format!("telecloning/economic/success/d={d}"), 1.0 / df, success, 1e-12));
        out.push(Check::close(format!("telecloning/economic/fidelity/d={d}"), 0.0, worst, 1e-10));
    }
    Ok(out)
}

fn emitted_states() -> Result<Vec<DensityMatrix>> {
    let mut rng = seeded_rng(1010);
    let mut states = vec![];
    for (d, n, m) in [(2, 1, 2), (2, 1, 3), (2, 2, 3), (3, 1, 2), (3, 1, 3), (3, 2, 3)] {
        let psi = haar_state(&[d], &mut rng);
        for v in [Variant::Werner, Variant::Fan, Variant::Unified] {
            let rep = CloneSpec::new(d, n, m, v)?.run(&psi)?;
            states.extend(rep.copies()?);
            states.push(rep.joint);
        }
        if d == 2 {
            states.push(CloneSpec::new(d, n, m, Variant::GisinMassar)?.run(&psi)?.joint);
        }
    }
    let mixed = haar_state(&[2, 2], &mut rng).reduced(&[0])?;
    for m in [3, 4] {
        let rep = mixed_clone(&mixed, 2, m)?;
        states.extend(rep.per_copy);
        states.push(rep.joint);
    }
    for (d, mm) in [(2, 2), (3, 2)] {
        let tc = teleclone_channel(d, mm)?;
        let psi = haar_state(&[d], &mut rng);
        for b in tc.run(&psi)? {
            states.push(tc.receivers(&b)?);
        }
    }
    let psi = haar_state(&[2], &mut rng);
    for angles in [CircuitAngles::universal(), CircuitAngles::phase_covariant()] {
        let outp = cloning_circuit(angles, &psi)?;
        states.push(outp.reduced(&[1, 2])?);
        states.push(outp.reduced(&[1])?);
    }
    Ok(states)
}

fn properties() -> Result<Vec<Check>> {
    let mut out = vec![];
    let states = emitted_states()?;
    let (mut herm, mut trace, mut min_eig): (f64, f64, f64) = (0.0, 0.0, f64::MAX);
    for s in &states {
        let m = s.mat();
        herm = herm.max((m - m.adjoint()).norm());
        trace = trace.max((m.trace() - r(1.0)).norm());
        min_eig = min_eig.min(min_eigenvalue(&hermitian_part(m)));
    }
    out.push(Check::close("properties/density/hermitian", 0.0, herm, tol::NORM));
    out.push(Check::close("properties/density/trace", 0.0, trace, tol::NORM));
    out.push(Check::at_least("properties/density/psd", 0.0, min_eig, tol::PSD_SLACK));

    // commuting pairs share an eigenbasis by construction; generic mixed pairs do not
    let mut rng = seeded_rng(1011);
    let mut mismatches = 0usize;
    for k in 0..100 {
        let d = 2 + k % 3;
        let (a, b, commute) = if k % 2 == 0 {
            let u = haar_unitary(d, &mut rng);
            let diag = |rng: &mut rand_chacha::ChaCha8Rng| {
                let w: Vec<f64> = haar_state(&[d], rng).amps().iter().map(|z| z.norm_sqr()).collect();
                let m = CMat::from_diagonal(&nalgebra::DVector::from_iterator(d, w.into_iter().map(r)));
                &u * m * u.adjoint()
            };
            (diag(&mut rng), diag(&mut rng), true)
        } else {
            let a = haar_state(&[d, d], &mut rng).reduced(&[0])?.into_mat();
            let b = haar_state(&[d, d], &mut rng).reduced(&[0])?.into_mat();
            (a, b, false)
        };
        let pair = [DensityMatrix::new(vec![d], a)?, DensityMatrix::new(vec![d], b)?];
        if is_broadcastable(&pair)? != commute {
            mismatches += 1;
        }
    }
    out.push(Check::close("properties/broadcastable-vs-commutator", 0.0, mismatches as f64, 0.0));

    for d in [2usize, 3, 5, 7] {
        let fam = mub(d)?;
        let bases = fam.bases();
        let inv_d = 1.0 / d as f64;
        let mut worst: f64 = 0.0;
        for (i, bi) in bases.iter().enumerate() {
            for (j, bj) in bases.iter().enumerate() {
                for (a, x) in bi.iter().enumerate() {
                    for (b, y) in bj.iter().enumerate() {
                        let want = if i != j { inv_d } else if a == b { 1.0 } else { 0.0 };
                        worst = worst.max((x.overlap(y) - want).abs());
                    }
                }
            }
        }
        out.push(Check::close(format!("properties/mub/count/d={d}"), (d + 1) as f64, bases.len() as f64, 0.0));
        out.push(Check::close(format!("properties/mub/overlaps/d={d}"), 0.0, worst, 1e-12));
        out.push(Check::close(format!("properties/mub/eigenbases/d={d}"), 0.0, fam.eigen_residual(), 1e-12));
    }
    Ok(out)
}
