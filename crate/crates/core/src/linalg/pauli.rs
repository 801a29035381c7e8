use std::f64::consts::PI;

use super::{c, r, CMat, CVec, DensityMatrix, StateVector};
use crate::combin::is_prime;
use crate::error::{Error, Result};
use crate::tol;

/// ω^k with ω = e^{2πi/d}.
pub fn omega(d: usize, k: i64) -> super::C64 {
    let k = k.rem_euclid(d as i64) as f64;
    super::C64::from_polar(1.0, 2.0 * PI * k / d as f64)
}

/// Generalized Pauli U_{m,n} = σ_x^m σ_z^n, so U|k⟩ = ω^{kn}|k+m⟩.
pub fn gen_pauli(d: usize, m: usize, n: usize) -> CMat {
    let mut u = CMat::zeros(d, d);
    for k in 0..d {
        u[((k + m) % d, k)] = omega(d, (k * n) as i64);
    }
    u
}

/// Bell state |B_{m,n}⟩ = (1/√d) Σ_k ω^{kn}|k⟩|k+m⟩ = (I⊗U_{m,n})|Φ⁺⟩.
pub fn bell_state(d: usize, m: usize, n: usize) -> StateVector {
    let mut v = CVec::zeros(d * d);
    let s = 1.0 / (d as f64).sqrt();
    for k in 0..d {
        v[k * d + (k + m) % d] = omega(d, (k * n) as i64) * s;
    }
    StateVector::new(vec![d, d], v).expect("Bell state is normalized")
}

/// The d+1 mutually unbiased bases of a prime dimension.
///
/// Bases `0..d` are the eigenbases of σ_xσ_z^k; basis `d` is computational.
#[derive(Debug, Clone)]
pub struct MubFamily {
    d: usize,
    bases: Vec<Vec<StateVector>>,
}

impl MubFamily {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn bases(&self) -> &[Vec<StateVector>] {
        &self.bases
    }

    pub fn state(&self, basis: usize, index: usize) -> &StateVector {
        &self.bases[basis][index]
    }

    /// Largest deviation from orthonormality within bases and from 1/√d
    /// overlap moduli across bases.
    pub fn invariant_residual(&self) -> f64 {
        let target = 1.0 / (self.d as f64).sqrt();
        let mut worst: f64 = 0.0;
        for (a, ba) in self.bases.iter().enumerate() {
            for (b, bb) in self.bases.iter().enumerate() {
                for (i, u) in ba.iter().enumerate() {
                    for (j, v) in bb.iter().enumerate() {
                        let ov = u.inner(v).norm();
                        let want = if a == b {
                            if i == j { 1.0 } else { 0.0 }
                        } else {
                            target
                        };
                        worst = worst.max((ov - want).abs());
                    }
                }
            }
        }
        worst
    }

    /// Eigenvalue of σ_xσ_z^k on the i-th state of basis k (k < d).
    pub fn eigenvalue(&self, k: usize, i: usize) -> super::C64 {
        if self.d == 2 && k == 1 {
            // σ_xσ_z = −iσ_y
            return if i == 0 { c(0.0, -1.0) } else { c(0.0, 1.0) };
        }
        omega(self.d, i as i64)
    }

    /// Largest ‖σ_xσ_z^k|v⟩ − λ|v⟩‖ over the non-computational bases.
    pub fn eigen_residual(&self) -> f64 {
        let d = self.d;
        let mut worst: f64 = 0.0;
        for k in 0..d {
            let op = gen_pauli(d, 1, 0) * gen_pauli(d, 0, k);
            for (i, v) in self.bases[k].iter().enumerate() {
                let lam = self.eigenvalue(k, i);
                worst = worst.max((&op * v.amps() - v.amps() * lam).norm());
            }
        }
        worst
    }
}

/// Mutually unbiased bases for prime `d`.
pub fn mub(d: usize) -> Result<MubFamily> {
    if !is_prime(d) {
        return Err(Error::NotPrime(d));
    }
    let s = 1.0 / (d as f64).sqrt();
    let mut bases = Vec::with_capacity(d + 1);
    if d == 2 {
        let x = |sign: f64| vec![r(s), r(sign * s)];
        let y = |sign: f64| vec![r(s), c(0.0, sign * s)];
        for pair in [[x(1.0), x(-1.0)], [y(1.0), y(-1.0)]] {
            bases.push(
                pair.into_iter()
                    .map(|a| StateVector::new(vec![2], CVec::from_vec(a)).expect("unit"))
                    .collect(),
            );
        }
    } else {
        // s_j = j + (j+1) + … + (d−1)
        let sj: Vec<i64> = (0..d).map(|j| (j..d).sum::<usize>() as i64).collect();
        for k in 0..d as i64 {
            let basis = (0..d as i64)
                .map(|i| {
                    let amps = (0..d as i64)
                        .map(|j| omega(d, i * (d as i64 - j) - k * sj[j as usize]) * s)
                        .collect();
                    StateVector::new(vec![d], CVec::from_vec(amps)).expect("unit")
                })
                .collect();
            bases.push(basis);
        }
    }
    bases.push((0..d).map(|i| StateVector::basis(vec![d], i)).collect());
    Ok(MubFamily { d, bases })
}

/// True iff all pairs of states commute within tolerance.
pub fn is_broadcastable(states: &[DensityMatrix]) -> Result<bool> {
    let first = states
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty state list".into()))?;
    if states.iter().any(|s| s.dims() != first.dims()) {
        return Err(Error::DimMismatch("states have different dims".into()));
    }
    for (i, a) in states.iter().enumerate() {
        for b in &states[i + 1..] {
            let comm = a.mat() * b.mat() - b.mat() * a.mat();
            if comm.norm() > tol::EXACT {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{unitarity_residual, ONE, ZERO};

    #[test]
    fn qubit_paulis() {
        let x = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let z = CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, r(-1.0)]);
        assert!((gen_pauli(2, 1, 0) - x).norm() < 1e-15);
        assert!((gen_pauli(2, 0, 1) - z).norm() < 1e-15);
    }

    #[test]
    fn pauli_action_on_basis() {
        let d = 5;
        let u = gen_pauli(d, 2, 3);
        for k in 0..d {
            let col = u.column(k);
            let want = omega(d, (3 * k) as i64);
            assert!((col[(k + 2) % d] - want).norm() < 1e-15);
            assert!((col.norm() - 1.0).abs() < 1e-15);
        }
        assert!(unitarity_residual(&u) < 1e-14);
    }

    #[test]
    fn group_law_up_to_phase() {
        let d = 3;
        for (m, n, mp, np) in [(1, 2, 2, 2), (0, 1, 1, 0), (2, 1, 2, 2)] {
            let lhs = gen_pauli(d, m, n) * gen_pauli(d, mp, np);
            let rhs = gen_pauli(d, (m + mp) % d, (n + np) % d);
            let phase = (rhs.adjoint() * &lhs).trace() / r(d as f64);
            assert!((phase.norm() - 1.0).abs() < 1e-13);
            assert!((lhs - rhs * phase).norm() < 1e-13);
        }
    }

    #[test]
    fn bell_basis_orthonormal() {
        for d in 2..=5 {
            let states: Vec<_> =
                (0..d).flat_map(|m| (0..d).map(move |n| bell_state(d, m, n))).collect();
            for (i, a) in states.iter().enumerate() {
                for (j, b) in states.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((a.inner(b).norm() - want).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn bell_state_from_local_pauli() {
        let d = 3;
        let phi = bell_state(d, 0, 0);
        let op = CMat::identity(d, d).kronecker(&gen_pauli(d, 2, 1));
        let got = phi.apply(&op).unwrap();
        assert!((got.amps() - bell_state(d, 2, 1).amps()).norm() < 1e-14);
    }

    #[test]
    fn six_qubit_states() {
        let f = mub(2).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let plus = CVec::from_vec(vec![r(s), r(s)]);
        let plus_i = CVec::from_vec(vec![r(s), c(0.0, s)]);
        assert!((f.state(0, 0).amps() - plus).norm() < 1e-15);
        assert!((f.state(1, 0).amps() - plus_i).norm() < 1e-15);
        assert_eq!(f.state(2, 1).amps()[1], ONE);
        assert!(f.invariant_residual() < 1e-14);
        assert!(f.eigen_residual() < 1e-14);
    }

    #[test]
    fn odd_prime_families() {
        for d in [3, 5, 7] {
            let f = mub(d).unwrap();
            assert_eq!(f.bases().len(), d + 1);
            assert!(f.invariant_residual() < 1e-10, "d={d}");
            assert!(f.eigen_residual() < 1e-10, "d={d}");
        }
    }

    #[test]
    fn non_prime_rejected() {
        assert_eq!(mub(4).unwrap_err(), Error::NotPrime(4));
        assert_eq!(mub(1).unwrap_err(), Error::NotPrime(1));
    }

    #[test]
    fn broadcastability() {
        let z0 = StateVector::basis(vec![2], 0).density();
        let z1 = StateVector::basis(vec![2], 1).density();
        let plus = mub(2).unwrap().state(0, 0).density();
        assert!(is_broadcastable(&[z0.clone(), z1]).unwrap());
        assert!(!is_broadcastable(&[z0.clone(), plus]).unwrap());
        assert!(is_broadcastable(&[z0]).unwrap());
        assert!(is_broadcastable(&[]).is_err());
    }
}
