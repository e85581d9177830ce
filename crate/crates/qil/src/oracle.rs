//! Brute-force numerical ground truth: dense statevector simulation,
//! arbitrary single-qubit bases, measurement collapse, partial trace,
//! concurrence, and the searches used to cross-check every symbolic verdict.
//!
//! Qubit 1 occupies the most significant bit of the amplitude index, matching
//! the ket ordering used throughout the fixtures.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::gf2::Mask;
use crate::qie::Gate;

pub const MAX_ORACLE_QUBITS: usize = 12;
const ZERO_PROB: f64 = 1e-12;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("statevector limited to {MAX_ORACLE_QUBITS} qubits, got {0}")]
    SizeOverflow(usize),
    #[error("qubit index {0} out of range")]
    QubitOutOfRange(usize),
    #[error("requested branch has zero probability")]
    ZeroProbabilityBranch,
    #[error("localizable search complement larger than 6 qubits")]
    ComplementTooLarge,
}

/// An arbitrary single-qubit basis rotation, parameterized as
/// `[[a1, a2* e^{i alpha}], [a2, -a1* e^{i alpha}]]`.
#[derive(Clone, Copy, Debug)]
pub struct SingleQubitUnitary {
    pub a1: Complex64,
    pub a2: Complex64,
    pub alpha: f64,
}

impl SingleQubitUnitary {
    pub fn new(a1: Complex64, a2: Complex64, alpha: f64) -> Self {
        SingleQubitUnitary { a1, a2, alpha }
    }

    pub fn identity() -> Self {
        SingleQubitUnitary::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), 0.0)
    }

    pub fn hadamard() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        SingleQubitUnitary::new(Complex64::new(s, 0.0), Complex64::new(s, 0.0), 0.0)
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let phase = Complex64::from_polar(1.0, self.alpha);
        [
            [self.a1, self.a2.conj() * phase],
            [self.a2, -self.a1.conj() * phase],
        ]
    }

    /// Haar-flavored sample: normalized complex Gaussian amplitudes and a
    /// uniform phase.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        loop {
            let g: [f64; 4] = [
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
            ];
            let a1 = Complex64::new(g[0], g[1]);
            let a2 = Complex64::new(g[2], g[3]);
            let norm = (a1.norm_sqr() + a2.norm_sqr()).sqrt();
            if norm > 1e-6 {
                let alpha = rng.gen_range(0.0..std::f64::consts::TAU);
                return SingleQubitUnitary::new(a1 / norm, a2 / norm, alpha);
            }
        }
    }
}

/// Dense amplitude vector over `2^n` computational basis states.
#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis_state(n: usize, init_bits: &[bool]) -> Result<Self, OracleError> {
        if n == 0 || n > MAX_ORACLE_QUBITS {
            return Err(OracleError::SizeOverflow(n));
        }
        assert_eq!(init_bits.len(), n);
        let mut index = 0usize;
        for (i, &b) in init_bits.iter().enumerate() {
            if b {
                index |= 1 << (n - 1 - i);
            }
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Value of `qubit` in basis-state index `index`.
    pub fn bit_of(&self, index: usize, qubit: usize) -> bool {
        index & (1 << (self.n - 1 - qubit)) != 0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_index(&self, qubit: usize) -> Result<(), OracleError> {
        if qubit < self.n {
            Ok(())
        } else {
            Err(OracleError::QubitOutOfRange(qubit))
        }
    }

    pub fn apply_unitary(
        &mut self,
        qubit: usize,
        u: &SingleQubitUnitary,
    ) -> Result<(), OracleError> {
        self.check_index(qubit)?;
        let m = u.matrix();
        let step = 1usize << (self.n - 1 - qubit);
        for base in 0..self.amps.len() {
            if base & step == 0 {
                let lo = self.amps[base];
                let hi = self.amps[base | step];
                self.amps[base] = m[0][0] * lo + m[0][1] * hi;
                self.amps[base | step] = m[1][0] * lo + m[1][1] * hi;
            }
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), OracleError> {
        match gate {
            Gate::H(qs) => {
                for &q in qs {
                    self.apply_unitary(q, &SingleQubitUnitary::hadamard())?;
                }
            }
            Gate::X(q) => {
                self.check_index(*q)?;
                let step = 1usize << (self.n - 1 - q);
                for base in 0..self.amps.len() {
                    if base & step == 0 {
                        self.amps.swap(base, base | step);
                    }
                }
            }
            Gate::Z(q) => {
                self.check_index(*q)?;
                let step = 1usize << (self.n - 1 - q);
                for (idx, amp) in self.amps.iter_mut().enumerate() {
                    if idx & step != 0 {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Cnot { control, target } => {
                self.check_index(*control)?;
                self.check_index(*target)?;
                let cstep = 1usize << (self.n - 1 - control);
                let tstep = 1usize << (self.n - 1 - target);
                for base in 0..self.amps.len() {
                    if base & cstep != 0 && base & tstep == 0 {
                        self.amps.swap(base, base | tstep);
                    }
                }
            }
            Gate::U1Q {
                qubit,
                a1,
                a2,
                alpha,
            } => {
                self.apply_unitary(*qubit, &SingleQubitUnitary::new(*a1, *a2, *alpha))?;
            }
        }
        Ok(())
    }

    pub fn prob_of(&self, qubit: usize, outcome: bool) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(idx, _)| self.bit_of(*idx, qubit) == outcome)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Overlap probability `|<self|other>|^2`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }

    /// Does the XOR of the listed qubits' values equal `rhs` on every basis
    /// state in the support?
    pub fn satisfies_parity(&self, members: Mask, rhs: bool, tol: f64) -> bool {
        self.amps.iter().enumerate().all(|(idx, amp)| {
            if amp.norm_sqr() <= tol {
                return true;
            }
            let mut parity = false;
            for q in 0..self.n {
                if members & (1 << q) != 0 {
                    parity ^= self.bit_of(idx, q);
                }
            }
            parity == rhs
        })
    }

    /// Indices of computational basis states carrying nonzero amplitude.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > tol)
            .map(|(idx, _)| idx)
            .collect()
    }

    /// One "index:real,imag" line per nonzero amplitude, for golden files.
    pub fn to_sparse_text(&self) -> String {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > ZERO_PROB)
            .map(|(idx, a)| format!("{idx}:{:.12},{:.12}", a.re, a.im))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Exact dense evolution of a circuit from a computational basis state.
pub fn simulate(
    circuit: &[Gate],
    n: usize,
    init_bits: &[bool],
) -> Result<StateVector, OracleError> {
    let mut state = StateVector::basis_state(n, init_bits)?;
    for gate in circuit {
        state.apply_gate(gate)?;
    }
    Ok(state)
}

/// Optionally rotate one qubit, project on the outcome, renormalize. Returns
/// the collapsed state and the branch probability.
pub fn measure_collapse(
    state: &StateVector,
    qubit: usize,
    pre_rotation: Option<&SingleQubitUnitary>,
    outcome: bool,
) -> Result<(StateVector, f64), OracleError> {
    let mut work = state.clone();
    if let Some(u) = pre_rotation {
        work.apply_unitary(qubit, u)?;
    } else {
        work.check_index(qubit)?;
    }
    let p = work.prob_of(qubit, outcome);
    if p <= ZERO_PROB {
        return Err(OracleError::ZeroProbabilityBranch);
    }
    let scale = 1.0 / p.sqrt();
    for idx in 0..work.amps.len() {
        if work.bit_of(idx, qubit) != outcome {
            work.amps[idx] = Complex64::new(0.0, 0.0);
        } else {
            work.amps[idx] *= scale;
        }
    }
    Ok((work, p))
}

pub type RotatedOutcome = (usize, SingleQubitUnitary, bool);

/// `p(then | first)` and the unconditional `p(then)` with no first
/// measurement.
pub fn conditional_probability(
    state: &StateVector,
    first: RotatedOutcome,
    then: RotatedOutcome,
) -> Result<(f64, f64), OracleError> {
    assert_ne!(first.0, then.0, "qubits must differ");
    let (collapsed, _) = measure_collapse(state, first.0, Some(&first.1), first.2)?;
    let mut rotated = collapsed;
    rotated.apply_unitary(then.0, &then.1)?;
    let p_conditional = rotated.prob_of(then.0, then.2);
    let mut unrotated = state.clone();
    unrotated.apply_unitary(then.0, &then.1)?;
    let p_unconditional = unrotated.prob_of(then.0, then.2);
    Ok((p_conditional, p_unconditional))
}

/// Seeded sweep of random local bases: true when the first measurement never
/// shifts the second qubit's outcome probabilities, in either order.
pub fn random_basis_independence(
    state: &StateVector,
    i: usize,
    j: usize,
    trials: usize,
    seed: u64,
) -> Result<bool, OracleError> {
    assert!(trials >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let ui = SingleQubitUnitary::random(&mut rng);
        let uj = SingleQubitUnitary::random(&mut rng);
        for (a, ua, b, ub) in [(i, ui, j, uj), (j, uj, i, ui)] {
            for first_outcome in [false, true] {
                let mut probe = state.clone();
                probe.apply_unitary(a, &ua)?;
                if probe.prob_of(a, first_outcome) <= ZERO_PROB {
                    continue;
                }
                let (pc, pu) =
                    conditional_probability(state, (a, ua, first_outcome), (b, ub, false))?;
                if (pc - pu).abs() >= 1e-7 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Reduced density matrix over a kept-qubit subset, kept qubits ordered
/// ascending with the lowest index most significant.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    pub keep: Vec<usize>,
    pub mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.diagonal().sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.mat - self.mat.adjoint()).norm()
    }

    pub fn frobenius_distance(&self, other: &DensityMatrix) -> f64 {
        (&self.mat - &other.mat).norm()
    }
}

pub fn partial_trace(state: &StateVector, keep: &[usize]) -> DensityMatrix {
    let n = state.n();
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    // keep == all qubits degenerates to the pure-state outer product, which
    // the product-marginal check relies on for two-qubit registers.
    assert!(!keep.is_empty() && keep.len() <= n, "keep must be nonempty");
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let k = keep.len();
    let dim = 1usize << k;
    let mut mat = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    let full_index = |kept_cfg: usize, traced_cfg: usize| -> usize {
        let mut idx = 0usize;
        for (pos, &q) in keep.iter().enumerate() {
            if kept_cfg & (1 << (k - 1 - pos)) != 0 {
                idx |= 1 << (n - 1 - q);
            }
        }
        for (pos, &q) in traced.iter().enumerate() {
            if traced_cfg & (1 << (traced.len() - 1 - pos)) != 0 {
                idx |= 1 << (n - 1 - q);
            }
        }
        idx
    };
    for row in 0..dim {
        for col in 0..dim {
            let mut sum = Complex64::new(0.0, 0.0);
            for t in 0..(1usize << traced.len()) {
                sum += state.amps()[full_index(row, t)] * state.amps()[full_index(col, t)].conj();
            }
            mat[(row, col)] = sum;
        }
    }
    DensityMatrix { keep, mat }
}

/// Does the two-qubit reduced state factor into the product of its one-qubit
/// marginals? A product marginal is independent under every pair of local
/// bases.
pub fn product_marginal_check(state: &StateVector, i: usize, j: usize, tol: f64) -> bool {
    let rho_ij = partial_trace(state, &[i, j]);
    let rho_i = partial_trace(state, &[i]);
    let rho_j = partial_trace(state, &[j]);
    // partial_trace orders kept qubits ascending with the smaller index most
    // significant, so the lower-indexed marginal is the left Kronecker factor.
    let (first, second) = if i < j {
        (rho_i, rho_j)
    } else {
        (rho_j, rho_i)
    };
    let product = first.mat.kronecker(&second.mat);
    (&rho_ij.mat - product).norm() < tol
}

/// Two-qubit concurrence of a (possibly mixed) density matrix.
pub fn concurrence(rho: &DensityMatrix) -> f64 {
    assert_eq!(rho.dim(), 4, "concurrence is defined for two qubits");
    let yy = DMatrix::from_row_slice(
        4,
        4,
        &[
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    );
    let rho_tilde = &yy * rho.mat.map(|c| c.conj()) * &yy;
    let sqrt_rho = hermitian_sqrt(&rho.mat);
    let m = &sqrt_rho * rho_tilde * &sqrt_rho;
    let mut lambdas: Vec<f64> = hermitian_eigenvalues(&m)
        .into_iter()
        .map(|v| v.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0)
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect()
}

fn hermitian_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = m.clone().symmetric_eigen();
    let vals = eig
        .eigenvalues
        .map(|v| Complex64::new(v.max(0.0).sqrt(), 0.0));
    let v = eig.eigenvectors;
    &v * DMatrix::from_diagonal(&vals) * v.adjoint()
}

/// Concurrence of a pure two-qubit state, `2|a00 a11 - a01 a10|`.
pub fn pure_concurrence(amps: &[Complex64; 4]) -> f64 {
    2.0 * (amps[0] * amps[3] - amps[1] * amps[2]).norm()
}

/// Can local measurements of every other qubit, each in the computational or
/// Hadamard basis, leave the pair in an entangled pure state on some branch?
pub fn localizable_entanglement_search(
    state: &StateVector,
    i: usize,
    j: usize,
) -> Result<bool, OracleError> {
    let n = state.n();
    assert_ne!(i, j);
    let complement: Vec<usize> = (0..n).filter(|&q| q != i && q != j).collect();
    if complement.len() > 6 {
        return Err(OracleError::ComplementTooLarge);
    }
    if complement.is_empty() {
        let amps = pair_amplitudes(state, i, j);
        return Ok(pure_concurrence(&amps) > 1e-6);
    }
    for basis_choice in 0..(1usize << complement.len()) {
        let mut rotated = state.clone();
        for (pos, &q) in complement.iter().enumerate() {
            if basis_choice & (1 << pos) != 0 {
                rotated.apply_unitary(q, &SingleQubitUnitary::hadamard())?;
            }
        }
        for outcomes in 0..(1usize << complement.len()) {
            let mut branch = rotated.clone();
            let mut alive = true;
            for (pos, &q) in complement.iter().enumerate() {
                let outcome = outcomes & (1 << pos) != 0;
                match measure_collapse(&branch, q, None, outcome) {
                    Ok((next, _)) => branch = next,
                    Err(OracleError::ZeroProbabilityBranch) => {
                        alive = false;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if !alive {
                continue;
            }
            let amps = pair_amplitudes(&branch, i, j);
            if pure_concurrence(&amps) > 1e-6 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Amplitudes of the pure pair state after all other qubits have been
/// measured (their values are fixed in the support).
fn pair_amplitudes(state: &StateVector, i: usize, j: usize) -> [Complex64; 4] {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (idx, amp) in state.amps().iter().enumerate() {
        if amp.norm_sqr() <= ZERO_PROB {
            continue;
        }
        let bi = usize::from(state.bit_of(idx, i));
        let bj = usize::from(state.bit_of(idx, j));
        out[(bi << 1) | bj] += *amp;
    }
    out
}
