//! Three-qubit cloning network built from rotations and CNOTs.
//!
//! Qubits are (a₁, a₂, a₃) with a₁ the input; copies come out on a₂ and a₃.

use crate::error::{Error, Result};
use crate::linalg::{c, embed_op, fidelity, r, CMat, StateVector};

/// R(ϑ)|0⟩ = cos ϑ|0⟩ + e^{iφ} sin ϑ|1⟩, R(ϑ)|1⟩ = −e^{−iφ} sin ϑ|0⟩ + cos ϑ|1⟩.
pub fn rotation_with_phase(theta: f64, phi: f64) -> CMat {
    let (s, co) = theta.sin_cos();
    CMat::from_row_slice(
        2,
        2,
        &[r(co), -c(phi.cos(), -phi.sin()) * s, c(phi.cos(), phi.sin()) * s, r(co)],
    )
}

/// Rotation with φ = 0.
pub fn rotation(theta: f64) -> CMat {
    rotation_with_phase(theta, 0.0)
}

/// CNOT on `n_qubits` with the given control and target (qubit 0 most significant).
pub fn cnot(control: usize, target: usize, n_qubits: usize) -> Result<CMat> {
    if control == target || control >= n_qubits || target >= n_qubits {
        return Err(Error::InvalidArgument(format!(
            "bad CNOT({control}, {target}) on {n_qubits} qubits"
        )));
    }
    let dim = 1usize << n_qubits;
    let bit = |q: usize| 1usize << (n_qubits - 1 - q);
    let mut u = CMat::zeros(dim, dim);
    for i in 0..dim {
        let j = if i & bit(control) != 0 { i ^ bit(target) } else { i };
        u[(j, i)] = r(1.0);
    }
    Ok(u)
}

/// Rotation angles (ϑ₁, ϑ₂, ϑ₃) of the preparation stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitAngles {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

impl CircuitAngles {
    /// ϑ₁ = ϑ₃ = π/8, ϑ₂ = −arcsin √(1/2 − √2/3).
    pub fn universal() -> Self {
        let t = std::f64::consts::PI / 8.0;
        Self { theta1: t, theta2: -(0.5 - 2f64.sqrt() / 3.0).sqrt().asin(), theta3: t }
    }

    /// ϑ₁ = ϑ₃ = arcsin √(1/2 − 1/(2√3)), ϑ₂ = −arcsin √(1/2 − √3/4).
    pub fn phase_covariant() -> Self {
        let t = (0.5 - 1.0 / (2.0 * 3f64.sqrt())).sqrt().asin();
        Self { theta1: t, theta2: -(0.5 - 3f64.sqrt() / 4.0).sqrt().asin(), theta3: t }
    }
}

const DIMS: [usize; 3] = [2, 2, 2];

fn on(site: usize, op: &CMat) -> CMat {
    embed_op(op, &DIMS, site)
}

fn cx(control: usize, target: usize) -> CMat {
    cnot(control, target, 3).expect("valid qubit indices")
}

/// R₂(ϑ₃) CNOT₃₂ R₃(ϑ₂) CNOT₂₃ R₂(ϑ₁) |00⟩ on (a₂, a₃).
pub fn preparation_state(angles: CircuitAngles) -> StateVector {
    let u = on(1, &rotation(angles.theta3))
        * cx(2, 1)
        * on(2, &rotation(angles.theta2))
        * cx(1, 2)
        * on(1, &rotation(angles.theta1));
    let out = StateVector::basis(vec![2; 3], 0).apply(&u).expect("square unitary");
    // a₁ is still |0⟩
    StateVector::new(vec![2, 2], out.amps().rows(0, 4).into_owned()).expect("unit norm")
}

/// CNOT₃₁ CNOT₂₁ CNOT₁₃ CNOT₁₂ applied to |ψ⟩ ⊗ |prep⟩.
pub fn cloning_circuit(angles: CircuitAngles, psi: &StateVector) -> Result<StateVector> {
    if psi.dims() != [2] {
        return Err(Error::DimMismatch("input must be a qubit".into()));
    }
    let copy = cx(2, 0) * cx(1, 0) * cx(0, 2) * cx(0, 1);
    psi.kron(&preparation_state(angles)).apply(&copy)
}

/// Fidelities of the copies on a₂ and a₃.
pub fn copy_fidelities(output: &StateVector, psi: &StateVector) -> Result<(f64, f64)> {
    Ok((fidelity(&output.reduced(&[1])?, psi)?, fidelity(&output.reduced(&[2])?, psi)?))
}
