//! Operators on the truncated `atom ⊗ Fock` space.
//!
//! Basis index = `atom * (n_cut + 1) + n`, atom index slow. Atom index 0 is the
//! lower level `|b>`, index 1 the upper level `|a>`, so the global ground state
//! `|0, b>` sits at index 0.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, SqueezeError};

pub type Operator = DMatrix<Complex64>;

pub const LOWER: usize = 0;
pub const UPPER: usize = 1;

/// Default cap on the Hilbert-space dimension.
pub const DEFAULT_DIM_CAP: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertConfig {
    pub n_cut: usize,
    pub dim_cap: usize,
}

impl HilbertConfig {
    pub fn new(n_cut: usize) -> Self {
        HilbertConfig {
            n_cut,
            dim_cap: DEFAULT_DIM_CAP,
        }
    }

    pub fn fock_dim(&self) -> usize {
        self.n_cut + 1
    }

    pub fn dim(&self) -> usize {
        2 * self.fock_dim()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_cut < 2 {
            return Err(SqueezeError::invalid(
                "n_cut",
                format!("must be >= 2, got {}", self.n_cut),
            ));
        }
        if self.dim() > self.dim_cap {
            return Err(SqueezeError::DimensionCap {
                dim: self.dim(),
                cap: self.dim_cap,
            });
        }
        Ok(())
    }
}

/// The operator set `a`, `sigma = |b><a|`, `eta_a = |a><a|`, `eta_b = |b><b|`.
#[derive(Debug, Clone)]
pub struct Operators {
    pub a: Operator,
    pub sigma: Operator,
    pub eta_a: Operator,
    pub eta_b: Operator,
}

pub fn dagger(op: &Operator) -> Operator {
    op.adjoint()
}

/// Fock-space annihilation operator, `<n|a|n+1> = sqrt(n+1)`.
pub fn annihilation(fock_dim: usize) -> Operator {
    let mut a = Operator::zeros(fock_dim, fock_dim);
    for n in 0..fock_dim.saturating_sub(1) {
        a[(n, n + 1)] = Complex64::new(((n + 1) as f64).sqrt(), 0.0);
    }
    a
}

fn atom_outer(row: usize, col: usize) -> Operator {
    let mut m = Operator::zeros(2, 2);
    m[(row, col)] = Complex64::new(1.0, 0.0);
    m
}

pub fn build_operators(cfg: &HilbertConfig) -> Result<Operators> {
    cfg.validate()?;
    let fock = cfg.fock_dim();
    let id_fock = Operator::identity(fock, fock);
    let id_atom = Operator::identity(2, 2);
    Ok(Operators {
        a: id_atom.kronecker(&annihilation(fock)),
        sigma: atom_outer(LOWER, UPPER).kronecker(&id_fock),
        eta_a: atom_outer(UPPER, UPPER).kronecker(&id_fock),
        eta_b: atom_outer(LOWER, LOWER).kronecker(&id_fock),
    })
}

/// `H = i g (sigma^dag a - a^dag sigma) + i eps (a^dag - a)`.
pub fn build_hamiltonian(g: f64, epsilon: f64, ops: &Operators) -> Operator {
    let i = Complex64::new(0.0, 1.0);
    let a_dag = dagger(&ops.a);
    let sigma_dag = dagger(&ops.sigma);
    let coupling = &sigma_dag * &ops.a - &a_dag * &ops.sigma;
    let drive = &a_dag - &ops.a;
    coupling * (i * g) + drive * (i * epsilon)
}

/// Drive-only Hamiltonian on the bare Fock space, `i eps (a^dag - a)`.
pub fn cavity_hamiltonian(epsilon: f64, a: &Operator) -> Operator {
    let i = Complex64::new(0.0, 1.0);
    (dagger(a) - a) * (i * epsilon)
}

/// Largest entrywise `|m - m^dag|`.
pub fn hermiticity_error(m: &Operator) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(m: &Operator) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}
