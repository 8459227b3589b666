//! Stationary state of a Liouvillian: `L[rho] = 0` with `Tr rho = 1`.
//!
//! The trace condition replaces the equation for the vectorized entry where
//! the vectorized identity is largest; all its nonzeros are 1, so that is the
//! first diagonal entry, `rho_00`. Small systems are factorized densely, larger
//! ones go through restarted GMRES on the matrix-free operator.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::liouvillian::{unvectorize, vectorize, DensityMatrix, Liouvillian};
use super::operators::{max_abs, Operator};
use crate::error::{Result, SqueezeError};

/// Largest Hilbert-space dimension whose superoperator is formed densely.
pub const DENSE_MAX_DIM: usize = 20;

const GMRES_RESTART: usize = 80;
const GMRES_MAX_ITER: usize = 40_000;
const GMRES_RTOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    DenseLu,
    Gmres,
}

#[derive(Debug, Clone)]
pub struct StationarySolution {
    pub rho: DensityMatrix,
    pub solver: SolverKind,
    pub iterations: usize,
    /// `max |L[rho]|` entrywise.
    pub residual: f64,
}

/// Index of the vectorized equation swapped for the trace condition.
fn trace_row(dim: usize) -> usize {
    // argmax |vec(I)|, first on ties
    let id = vectorize(&Operator::identity(dim, dim));
    let mut best = 0;
    for (k, z) in id.iter().enumerate() {
        if z.norm() > id[best].norm() {
            best = k;
        }
    }
    best
}

pub fn solve_stationary(l: &Liouvillian, guess: Option<&Operator>) -> Result<StationarySolution> {
    let (raw, solver, iterations) = if l.dim() <= DENSE_MAX_DIM {
        (solve_dense(l)?, SolverKind::DenseLu, 1)
    } else {
        let (m, it) = solve_gmres(l, guess)?;
        (m, SolverKind::Gmres, it)
    };
    if raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(SqueezeError::SingularSystem("non-finite solution".into()));
    }
    let trace = raw.trace();
    if trace.norm() < 1e-300 {
        return Err(SqueezeError::SingularSystem("solution has zero trace".into()));
    }
    let rho = DensityMatrix::normalized(raw);
    let residual = max_abs(&l.apply(rho.matrix()));
    Ok(StationarySolution {
        rho,
        solver,
        iterations,
        residual,
    })
}

fn solve_dense(l: &Liouvillian) -> Result<Operator> {
    let n = l.dim();
    let mut m = l.dense();
    let row = trace_row(n);
    m.row_mut(row).fill(Complex64::new(0.0, 0.0));
    for k in 0..n {
        m[(row, k * n + k)] = Complex64::new(1.0, 0.0);
    }
    let mut rhs = DVector::zeros(n * n);
    rhs[row] = Complex64::new(1.0, 0.0);
    let x = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| SqueezeError::SingularSystem("LU factorization is singular".into()))?;
    Ok(unvectorize(&x, n))
}

fn solve_gmres(l: &Liouvillian, guess: Option<&Operator>) -> Result<(Operator, usize)> {
    let n = l.dim();
    let row = trace_row(n);
    let apply = |x: &DVector<Complex64>| {
        let rho = unvectorize(x, n);
        let mut y = vectorize(&l.apply(&rho));
        y[row] = rho.trace();
        y
    };
    let mut rhs = DVector::zeros(n * n);
    rhs[row] = Complex64::new(1.0, 0.0);
    let x0 = match guess {
        Some(g) if g.nrows() == n => vectorize(g),
        _ => {
            let mut v = DVector::zeros(n * n);
            v[row] = Complex64::new(1.0, 0.0);
            v
        }
    };
    let out = gmres(apply, &rhs, x0, GMRES_RESTART, GMRES_MAX_ITER, GMRES_RTOL);
    if out.relative_residual > GMRES_RTOL.sqrt() {
        return Err(SqueezeError::SolverStalled {
            iterations: out.iterations,
            residual: out.relative_residual,
        });
    }
    Ok((unvectorize(&out.x, n), out.iterations))
}

pub(crate) struct GmresOutcome {
    pub x: DVector<Complex64>,
    pub iterations: usize,
    pub relative_residual: f64,
}

fn dot(u: &DVector<Complex64>, v: &DVector<Complex64>) -> Complex64 {
    u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// Givens rotation `(c, s)` with real `c` taking `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let rho = na.hypot(nb);
    (na / rho, (a / na) * b.conj() / rho)
}

/// Restarted GMRES with modified Gram-Schmidt and one reorthogonalization pass.
pub(crate) fn gmres<F>(
    apply: F,
    b: &DVector<Complex64>,
    mut x: DVector<Complex64>,
    restart: usize,
    max_iter: usize,
    rtol: f64,
) -> GmresOutcome
where
    F: Fn(&DVector<Complex64>) -> DVector<Complex64>,
{
    let b_norm = b.norm().max(f64::MIN_POSITIVE);
    let mut iterations = 0;
    let mut rel = f64::INFINITY;

    while iterations < max_iter {
        let r = b - apply(&x);
        let beta = r.norm();
        rel = beta / b_norm;
        if rel <= rtol {
            break;
        }
        let m = restart.min(max_iter - iterations);
        let mut basis: Vec<DVector<Complex64>> = Vec::with_capacity(m + 1);
        basis.push(r / Complex64::new(beta, 0.0));
        let mut h = DMatrix::<Complex64>::zeros(m + 1, m);
        let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(m);
        let mut g = DVector::<Complex64>::zeros(m + 1);
        g[0] = Complex64::new(beta, 0.0);
        let mut used = 0;

        for j in 0..m {
            let mut w = apply(&basis[j]);
            for _pass in 0..2 {
                for (i, v) in basis.iter().enumerate() {
                    let coeff = dot(v, &w);
                    h[(i, j)] += coeff;
                    w.axpy(-coeff, v, Complex64::new(1.0, 0.0));
                }
            }
            let w_norm = w.norm();
            h[(j + 1, j)] = Complex64::new(w_norm, 0.0);
            for (i, &(c, s)) in rotations.iter().enumerate() {
                let top = h[(i, j)];
                let bottom = h[(i + 1, j)];
                h[(i, j)] = top * c + s * bottom;
                h[(i + 1, j)] = -s.conj() * top + bottom * c;
            }
            let (c, s) = givens(h[(j, j)], h[(j + 1, j)]);
            h[(j, j)] = h[(j, j)] * c + s * h[(j + 1, j)];
            h[(j + 1, j)] = Complex64::new(0.0, 0.0);
            rotations.push((c, s));
            g[j + 1] = -s.conj() * g[j];
            g[j] *= c;
            used = j + 1;
            iterations += 1;
            rel = g[j + 1].norm() / b_norm;
            if rel <= rtol || w_norm == 0.0 {
                break;
            }
            basis.push(w / Complex64::new(w_norm, 0.0));
        }

        // back substitution on the leading `used x used` triangle
        let mut y = vec![Complex64::new(0.0, 0.0); used];
        for i in (0..used).rev() {
            let mut acc = g[i];
            for k in i + 1..used {
                acc -= h[(i, k)] * y[k];
            }
            y[i] = acc / h[(i, i)];
        }
        for (k, yk) in y.iter().enumerate() {
            x.axpy(*yk, &basis[k], Complex64::new(1.0, 0.0));
        }
        if rel <= rtol {
            // confirm with the true residual on the next pass
            let true_rel = (b - apply(&x)).norm() / b_norm;
            rel = true_rel;
            if true_rel <= rtol * 10.0 {
                break;
            }
        }
    }
    GmresOutcome {
        x,
        iterations,
        relative_residual: rel,
    }
}
