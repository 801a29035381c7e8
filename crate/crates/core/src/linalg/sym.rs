use serde::{Deserialize, Serialize};

use super::{r, CMat, CVec, StateVector};
use crate::combin::{compositions, multinomial};
use crate::error::{Error, Result};
use crate::tol;

/// Occupation numbers (n₀,…,n_{d−1}) labelling a symmetric basis state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OccupationVector {
    counts: Vec<usize>,
}

impl OccupationVector {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::InvalidArgument("occupation vector needs d >= 2".into()));
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn d(&self) -> usize {
        self.counts.len()
    }

    pub fn n(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Componentwise sum.
    pub fn add(&self, other: &Self) -> Self {
        let counts = self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect();
        Self { counts }
    }

    /// Number of distinct orderings N!/Π nᵢ!.
    pub fn multiplicity(&self) -> f64 {
        multinomial(&self.counts)
    }
}

/// Ordered symmetric basis of (ℂ^d)^⊗N.
pub fn sym_basis(d: usize, n: usize) -> Vec<OccupationVector> {
    compositions(d, n).into_iter().map(|counts| OccupationVector { counts }).collect()
}

/// Visits every computational index whose digit histogram equals `counts`.
pub(crate) fn for_each_arrangement(counts: &[usize], mut f: impl FnMut(usize)) {
    fn rec(counts: &mut [usize], left: usize, acc: usize, f: &mut impl FnMut(usize)) {
        if left == 0 {
            f(acc);
            return;
        }
        let d = counts.len();
        for level in 0..d {
            if counts[level] > 0 {
                counts[level] -= 1;
                rec(counts, left - 1, acc * d + level, f);
                counts[level] += 1;
            }
        }
    }
    let mut c = counts.to_vec();
    let n = c.iter().sum();
    rec(&mut c, n, 0, &mut f);
}

/// Embeds |n⃗⟩ as a normalized vector in (ℂ^d)^⊗N.
pub fn sym_embed(occ: &OccupationVector) -> Result<StateVector> {
    let (d, n) = (occ.d(), occ.n());
    let dim = d.pow(n as u32);
    tol::check_dim(dim)?;
    let amp = r(1.0 / occ.multiplicity().sqrt());
    let mut v = CVec::zeros(dim);
    for_each_arrangement(occ.counts(), |i| v[i] = amp);
    StateVector::new(vec![d; n.max(1)], v)
}

/// Isometry from the symmetric subspace (basis order of [`sym_basis`]) into (ℂ^d)^⊗N.
pub fn sym_isometry(d: usize, n: usize) -> Result<CMat> {
    let basis = sym_basis(d, n);
    let dim = d.pow(n as u32);
    tol::check_dim(dim)?;
    let mut b = CMat::zeros(dim, basis.len());
    for (col, occ) in basis.iter().enumerate() {
        let amp = r(1.0 / occ.multiplicity().sqrt());
        for_each_arrangement(occ.counts(), |i| b[(i, col)] = amp);
    }
    Ok(b)
}

/// Projector s_M onto the symmetric subspace of (ℂ^d)^⊗M.
pub fn symmetrizer(d: usize, m: usize) -> Result<CMat> {
    let b = sym_isometry(d, m)?;
    Ok(&b * b.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::sym_dim;
    use crate::linalg::{haar_unitary, kron_all, seeded_rng, ONE, ZERO};

    fn histogram(mut index: usize, d: usize, n: usize) -> Vec<usize> {
        let mut h = vec![0; d];
        for _ in 0..n {
            h[index % d] += 1;
            index /= d;
        }
        h
    }

    #[test]
    fn qubit_pair_basis() {
        let b = sym_basis(2, 2);
        let counts: Vec<_> = b.iter().map(|o| o.counts().to_vec()).collect();
        assert_eq!(counts, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let v = sym_embed(&b[1]).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let want = CVec::from_vec(vec![ZERO, r(s), r(s), ZERO]);
        assert!((v.amps() - want).norm() < 1e-15);
    }

    #[test]
    fn counts_and_trivial_case() {
        assert_eq!(sym_basis(2, 3).len(), 4);
        assert_eq!(sym_basis(4, 3).len(), sym_dim(4, 3));
        for (k, occ) in sym_basis(3, 1).iter().enumerate() {
            let v = sym_embed(occ).unwrap();
            assert_eq!(v.amps()[k], ONE);
        }
    }

    #[test]
    fn embeddings_orthonormal() {
        let b = sym_isometry(3, 3).unwrap();
        let g = b.adjoint() * &b;
        assert!((g - CMat::identity(10, 10)).norm() < 1e-13);
    }

    #[test]
    fn two_qubit_symmetrizer_entries() {
        let s = symmetrizer(2, 2).unwrap();
        let h = r(0.5);
        #[rustfmt::skip]
        let want = CMat::from_row_slice(4, 4, &[
            ONE, ZERO, ZERO, ZERO,
            ZERO, h, h, ZERO,
            ZERO, h, h, ZERO,
            ZERO, ZERO, ZERO, ONE,
        ]);
        assert!((s - want).norm() < 1e-15);
    }

    #[test]
    fn symmetrizer_is_rank_d_m_projector() {
        let s = symmetrizer(3, 3).unwrap();
        assert!((&s * &s - &s).norm() < 1e-13);
        assert!((&s - s.adjoint()).norm() < 1e-15);
        assert!((s.trace().re - sym_dim(3, 3) as f64).abs() < 1e-12);
    }

    #[test]
    fn symmetrizer_commutes_with_collective_unitary() {
        let mut rng = seeded_rng(7);
        let u = haar_unitary(3, &mut rng);
        let uuu = kron_all(&[u.clone(), u.clone(), u]);
        let s = symmetrizer(3, 3).unwrap();
        assert!((&uuu * &s - &s * &uuu).norm() < 1e-10);
    }

    #[test]
    fn embedded_vectors_are_fixed_by_symmetrizer() {
        let s = symmetrizer(2, 4).unwrap();
        for occ in sym_basis(2, 4) {
            let v = sym_embed(&occ).unwrap();
            assert!((&s * v.amps() - v.amps()).norm() < 1e-14);
        }
    }

    #[test]
    fn histogram_roundtrip() {
        for occ in sym_basis(3, 2) {
            for_each_arrangement(occ.counts(), |i| {
                assert_eq!(histogram(i, 3, 2), occ.counts());
            });
        }
    }
}
