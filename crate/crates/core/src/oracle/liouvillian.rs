//! The cavity-damped Liouvillian
//! `L[rho] = -i[H, rho] + kappa (a rho a^dag - {a^dag a, rho} / 2)`
//! in matrix-free and dense (row-major vectorized) form.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::operators::{dagger, hermiticity_error, Operator};

/// Nonzero entries `(row, col, value)` of an operator.
#[derive(Debug, Clone)]
struct Sparse {
    entries: Vec<(usize, usize, Complex64)>,
}

impl Sparse {
    fn from_dense(m: &Operator) -> Self {
        let mut entries = Vec::new();
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                let v = m[(r, c)];
                if v != Complex64::new(0.0, 0.0) {
                    entries.push((r, c, v));
                }
            }
        }
        Sparse { entries }
    }

    /// `out += scale * self * x`
    fn left_mul_into(&self, x: &Operator, scale: Complex64, out: &mut Operator) {
        let n = x.ncols();
        for &(r, c, v) in &self.entries {
            let f = scale * v;
            for k in 0..n {
                out[(r, k)] += f * x[(c, k)];
            }
        }
    }

    /// `out += scale * x * self^dag`
    fn right_mul_adjoint_into(&self, x: &Operator, scale: Complex64, out: &mut Operator) {
        for &(r, c, v) in &self.entries {
            let f = scale * v.conj();
            let src = x.column(c).clone_owned();
            out.column_mut(r).axpy(f, &src, Complex64::new(1.0, 0.0));
        }
    }
}

#[derive(Debug, Clone)]
pub struct Liouvillian {
    hamiltonian: Operator,
    a: Operator,
    a_dag: Operator,
    /// `H - i kappa/2 a^dag a`
    h_eff: Sparse,
    a_sparse: Sparse,
    kappa: f64,
}

impl Liouvillian {
    pub fn new(hamiltonian: Operator, a: Operator, kappa: f64) -> Self {
        let a_dag = dagger(&a);
        let number = &a_dag * &a;
        let h_eff = Sparse::from_dense(&(&hamiltonian - number * Complex64::new(0.0, 0.5 * kappa)));
        let a_sparse = Sparse::from_dense(&a);
        Liouvillian {
            hamiltonian,
            a,
            a_dag,
            h_eff,
            a_sparse,
            kappa,
        }
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    /// `-i (H_eff rho - rho H_eff^dag) + kappa a rho a^dag`, using the
    /// sparsity of `H_eff` and `a`.
    pub fn apply(&self, rho: &Operator) -> Operator {
        let n = self.dim();
        let i = Complex64::new(0.0, 1.0);
        let mut out = Operator::zeros(n, n);
        self.h_eff.left_mul_into(rho, -i, &mut out);
        self.h_eff.right_mul_adjoint_into(rho, i, &mut out);
        let mut a_rho = Operator::zeros(n, n);
        self.a_sparse.left_mul_into(rho, Complex64::new(1.0, 0.0), &mut a_rho);
        self.a_sparse
            .right_mul_adjoint_into(&a_rho, Complex64::new(self.kappa, 0.0), &mut out);
        out
    }

    /// Dense superoperator acting on row-major `vec(rho)`, built from
    /// `vec(A rho B) = (A ⊗ B^T) vec(rho)`.
    pub fn dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let id = Operator::identity(n, n);
        let i = Complex64::new(0.0, 1.0);
        let number = &self.a_dag * &self.a;
        let commutator = self.hamiltonian.kronecker(&id) - id.kronecker(&self.hamiltonian.transpose());
        let jump = self.a.kronecker(&self.a_dag.transpose());
        let anti = number.kronecker(&id) + id.kronecker(&number.transpose());
        commutator * (-i) + (jump - anti * Complex64::new(0.5, 0.0)) * Complex64::new(self.kappa, 0.0)
    }
}

pub fn vectorize(rho: &Operator) -> DVector<Complex64> {
    let n = rho.nrows();
    DVector::from_iterator(n * n, (0..n).flat_map(|r| (0..n).map(move |c| rho[(r, c)])))
}

pub fn unvectorize(v: &DVector<Complex64>, n: usize) -> Operator {
    Operator::from_fn(n, n, |r, c| v[r * n + c])
}

/// A density matrix with its invariant diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(pub Operator);

impl DensityMatrix {
    pub fn matrix(&self) -> &Operator {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// Pure state `|index><index|`.
    pub fn pure_basis_state(dim: usize, index: usize) -> Self {
        let mut m = Operator::zeros(dim, dim);
        m[(index, index)] = Complex64::new(1.0, 0.0);
        DensityMatrix(m)
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn trace_error(&self) -> f64 {
        (self.trace() - Complex64::new(1.0, 0.0)).norm()
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.0)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().min()
    }

    /// `Tr(rho op)`
    pub fn expect(&self, op: &Operator) -> Complex64 {
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..n {
            for k in 0..n {
                acc += self.0[(r, k)] * op[(k, r)];
            }
        }
        acc
    }

    /// Project onto the Hermitian, unit-trace set.
    pub(crate) fn normalized(m: Operator) -> Self {
        let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let tr = herm.trace();
        DensityMatrix(herm / tr)
    }
}
