//! Probabilistic cloning and the probabilistic NOT gate.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_part, min_eigenvalue, r, CMat, StateVector};
use crate::tol::PSD_SLACK;

/// Gram matrix X_ij = ⟨Ψ_i|Ψ_j⟩ of a list of pure states.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    x: CMat,
}

impl GramMatrix {
    pub fn new(states: &[StateVector]) -> Result<Self> {
        let first = states.first().ok_or_else(|| Error::InvalidArgument("empty state list".into()))?;
        if states.iter().any(|s| s.dims() != first.dims()) {
            return Err(Error::DimMismatch("states have different dims".into()));
        }
        let n = states.len();
        Ok(Self { x: CMat::from_fn(n, n, |i, j| states[i].inner(&states[j])) })
    }

    pub fn matrix(&self) -> &CMat {
        &self.x
    }

    /// Elementwise power X^(k).
    pub fn power(&self, k: u32) -> CMat {
        self.x.map(|z| z.powu(k))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.x)
    }

    /// Positive definiteness of X, i.e. linear independence of the states.
    pub fn independent(&self) -> bool {
        self.min_eigenvalue() > PSD_SLACK
    }
}

/// η_max = 1/(1+s) for two states with overlap modulus s.
pub fn duan_guo_bound(s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidArgument(format!("overlap {s} outside [0,1]")));
    }
    Ok(1.0 / (1.0 + s))
}

/// PSD test outcome with the witnessing smallest eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    pub min_eigenvalue: f64,
}

impl Feasibility {
    fn of(m: &CMat) -> Self {
        let min_eigenvalue = min_eigenvalue(&hermitian_part(m));
        Self { feasible: min_eigenvalue >= -PSD_SLACK, min_eigenvalue }
    }
}

/// Whether success probabilities γ_i admit a probabilistic 1 → 2 cloner:
/// X^(1) − √Γ X^(2) √Γ ⪰ 0.
pub fn prob_clone_feasible(states: &[StateVector], gammas: &[f64]) -> Result<Feasibility> {
    let g = GramMatrix::new(states)?;
    if gammas.len() != states.len() {
        return Err(Error::DimMismatch("one γ per state".into()));
    }
    if gammas.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::InvalidArgument("γ_i must lie in [0,1]".into()));
    }
    if !g.independent() {
        return Err(Error::InvalidState("input states are linearly dependent".into()));
    }
    let sg = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        gammas.len(),
        gammas.iter().map(|x| r(x.sqrt())),
    ));
    let residual = g.power(1) - &sg * g.power(2) * &sg;
    Ok(Feasibility::of(&residual))
}

/// Result of the uniform-P_k scan for the superposition cloner.
#[derive(Debug, Clone, PartialEq)]
pub struct PatiResult {
    pub feasible: bool,
    /// Largest uniform success weight p with P_k = √p·I found feasible.
    pub p: f64,
    pub min_eigenvalue: f64,
    pub reason: Option<String>,
}

/// Residual X^(1) − p Σ_{k=1}^{M} X^(k+1) for uniform weights.
pub fn pati_residual(gram: &GramMatrix, m: usize, p: f64) -> CMat {
    let mut acc = gram.power(1);
    for k in 1..=m {
        acc -= gram.power(k as u32 + 1) * r(p);
    }
    acc
}

/// Conservative feasibility scan for the 1 → 2, …, M+1 superposition cloner.
///
/// Scans uniform P_k on a grid and reports the largest p > 0 whose residual is PSD.
pub fn pati_feasible(states: &[StateVector], m: usize) -> Result<PatiResult> {
    if m == 0 {
        return Err(Error::InvalidArgument("M >= 1".into()));
    }
    let gram = GramMatrix::new(states)?;
    if !gram.independent() {
        return Ok(PatiResult {
            feasible: false,
            p: 0.0,
            min_eigenvalue: gram.min_eigenvalue(),
            reason: Some("input states are linearly dependent".into()),
        });
    }
    let steps = 1000;
    for i in (1..=steps).rev() {
        let p = i as f64 / steps as f64;
        let f = Feasibility::of(&pati_residual(&gram, m, p));
        if f.feasible {
            return Ok(PatiResult { feasible: true, p, min_eigenvalue: f.min_eigenvalue, reason: None });
        }
    }
    Ok(PatiResult {
        feasible: false,
        p: 0.0,
        min_eigenvalue: gram.min_eigenvalue(),
        reason: Some("no uniform weight on the grid".into()),
    })
}

/// f_max = 1/(1+s) for the two-state probabilistic NOT.
pub fn prob_not_bound(s: f64) -> Result<f64> {
    duan_guo_bound(s)
}

/// Whether X^(1) − f X′ ⪰ 0 with X′_ij = ⟨Ψ_i|Ψ_j⟩⟨Ψ_i^⊥|Ψ_j^⊥⟩, for qubit inputs.
pub fn prob_not_feasible(states: &[StateVector], f: f64) -> Result<Feasibility> {
    let g = GramMatrix::new(states)?;
    let perps = states.iter().map(|s| s.qubit_perp()).collect::<Result<Vec<_>>>()?;
    let n = states.len();
    let xp = CMat::from_fn(n, n, |i, j| g.matrix()[(i, j)] * perps[i].inner(&perps[j]));
    Ok(Feasibility::of(&(g.power(1) - xp * r(f))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{haar_state, seeded_rng};
    use crate::optimize::bisect;

    fn pair(s: f64) -> Vec<StateVector> {
        // two real qubits with overlap s
        let t = s.acos();
        vec![StateVector::bloch(0.0, 0.0), StateVector::bloch(t * 2.0, 0.0)]
    }

    #[test]
    fn bound_values() {
        assert_eq!(duan_guo_bound(0.0).unwrap(), 1.0);
        assert_eq!(duan_guo_bound(1.0).unwrap(), 0.5);
        assert!((duan_guo_bound(0.5).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((prob_not_bound(0.6).unwrap() - 0.625).abs() < 1e-15);
        assert!(duan_guo_bound(-0.1).is_err());
    }

    #[test]
    fn orthonormal_pair_clones_perfectly() {
        let states = vec![StateVector::basis(vec![2], 0), StateVector::basis(vec![2], 1)];
        assert!(prob_clone_feasible(&states, &[1.0, 1.0]).unwrap().feasible);
    }

    #[test]
    fn above_bound_is_infeasible() {
        let states = pair(0.5);
        assert!((states[0].overlap(&states[1]).sqrt() - 0.5).abs() < 1e-12);
        let f = prob_clone_feasible(&states, &[0.8, 0.8]).unwrap();
        assert!(!f.feasible);
        // 2×2 oracle: eigenvalues 1−γ ± (s − γs²)
        let want = 1.0 - 0.8 - (0.5 - 0.8 * 0.25);
        assert!((f.min_eigenvalue - want).abs() < 1e-12);
    }

    #[test]
    fn bisection_recovers_two_state_bound() {
        for s in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let states = pair(s);
            let h = |g: f64| prob_clone_feasible(&states, &[g, g]).unwrap().min_eigenvalue;
            let eta = bisect(h, 0.0, 1.0, 1e-12).unwrap();
            assert!((eta - duan_guo_bound(s).unwrap()).abs() < 1e-6, "s={s}");
        }
    }

    #[test]
    fn three_symmetric_states_small_gamma() {
        let states: Vec<_> = (0..3)
            .map(|k| StateVector::bloch(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0))
            .collect();
        assert!(prob_clone_feasible(&states[..2], &[0.3, 0.3]).unwrap().feasible);
        // three qubit states are linearly dependent
        assert!(prob_clone_feasible(&states, &[0.1, 0.1, 0.1]).is_err());
        let mut rng = seeded_rng(2);
        let q: Vec<_> = (0..3).map(|_| haar_state(&[3], &mut rng)).collect();
        assert!(prob_clone_feasible(&q, &[0.05, 0.05, 0.05]).unwrap().feasible);
    }

    #[test]
    fn feasibility_is_monotone() {
        use rand::Rng;
        let mut rng = seeded_rng(4);
        for _ in 0..30 {
            let states: Vec<_> = (0..3).map(|_| haar_state(&[3], &mut rng)).collect();
            let g: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..1.0)).collect();
            if prob_clone_feasible(&states, &g).unwrap().feasible {
                let shrunk: Vec<f64> = g.iter().map(|x| x * rng.random_range(0.0..1.0)).collect();
                assert!(prob_clone_feasible(&states, &shrunk).unwrap().feasible);
            }
        }
    }

    #[test]
    fn pati_examples() {
        let ortho = vec![StateVector::basis(vec![2], 0), StateVector::basis(vec![2], 1)];
        let res = pati_feasible(&ortho, 2).unwrap();
        assert!(res.feasible && (res.p - 0.5).abs() < 1e-12);

        let mut states = pair(0.3);
        let res = pati_feasible(&states, 2).unwrap();
        assert!(res.feasible);
        let gram = GramMatrix::new(&states).unwrap();
        assert!(min_eigenvalue(&hermitian_part(&pati_residual(&gram, 2, 0.05))) >= 0.0);

        let sup = StateVector::normalized(
            vec![2],
            states[0].amps() * r(0.6) + states[1].amps() * r(0.8),
        )
        .unwrap();
        states.push(sup);
        let res = pati_feasible(&states, 2).unwrap();
        assert!(!res.feasible && res.reason.is_some());
    }

    #[test]
    fn pati_m1_matches_duan_guo() {
        for s in [0.2, 0.6] {
            let res = pati_feasible(&pair(s), 1).unwrap();
            let bound = duan_guo_bound(s).unwrap();
            assert!(res.p <= bound + 1e-12 && res.p > bound - 1e-3);
        }
    }

    #[test]
    fn probabilistic_not_bound_by_bisection() {
        for s in [0.2, 0.5, 0.8] {
            let states = pair(s);
            let h = |f: f64| prob_not_feasible(&states, f).unwrap().min_eigenvalue;
            let f = bisect(h, 0.0, 1.0, 1e-12).unwrap();
            assert!((f - prob_not_bound(s).unwrap()).abs() < 1e-6);
        }
    }
}
