//! Standard Lindblad treatment of the same driven atom-cavity system.
//!
//! The Hamiltonian is the resonant coupling plus coherent drive,
//! `H = i g (sigma^dag a - a^dag sigma) + i eps (a^dag - a)` (hbar = 1); only
//! the cavity is damped, at rate `kappa`. The atom has no loss channel of its
//! own. The stationary density matrix is computed on a truncated Fock space
//! and compared with the adiabatic-elimination closed forms. The two
//! frameworks use different commutation relations, so differences are
//! reported, never asserted.

mod liouvillian;
mod operators;
mod report;
mod solve;

use serde::{Deserialize, Serialize};

pub use liouvillian::{vectorize, DensityMatrix, Liouvillian};
pub use operators::{
    annihilation, build_hamiltonian, build_operators, cavity_hamiltonian, dagger, hermiticity_error,
    max_abs, HilbertConfig, Operator, Operators, DEFAULT_DIM_CAP, LOWER, UPPER,
};
pub use report::{oracle_report, OracleQuantities, OracleReport, ReferenceKind};
pub use solve::{solve_stationary, SolverKind, StationarySolution, DENSE_MAX_DIM};

use num_complex::Complex64;

use crate::closed_form::ModeMoments;
use crate::error::{Result, SqueezeError};
use crate::params::SystemParams;

/// First cutoff tried by [`cutoff_converged`].
pub const INITIAL_CUTOFF: usize = 8;

/// Rates for the master equation. Unlike [`SystemParams`], `g = 0` is allowed:
/// the decoupled driven cavity has an exact coherent-state solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LindbladParams {
    pub g: f64,
    pub kappa: f64,
    pub epsilon: f64,
}

impl LindbladParams {
    pub fn new(g: f64, kappa: f64, epsilon: f64) -> Result<Self> {
        if !g.is_finite() || g < 0.0 {
            return Err(SqueezeError::invalid("g", format!("must be finite and >= 0, got {g}")));
        }
        if !kappa.is_finite() || kappa <= 0.0 {
            return Err(SqueezeError::invalid(
                "kappa",
                format!("must be finite and > 0, got {kappa}"),
            ));
        }
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(SqueezeError::invalid(
                "epsilon",
                format!("must be finite and >= 0, got {epsilon}"),
            ));
        }
        Ok(LindbladParams { g, kappa, epsilon })
    }

    /// Closed-form parameters, when the atom is actually coupled.
    pub fn system_params(&self) -> Option<SystemParams> {
        if self.g > 0.0 {
            SystemParams::new(self.g, self.kappa, self.epsilon).ok()
        } else {
            None
        }
    }
}

impl From<&SystemParams> for LindbladParams {
    fn from(p: &SystemParams) -> Self {
        LindbladParams {
            g: p.g(),
            kappa: p.kappa(),
            epsilon: p.epsilon(),
        }
    }
}

/// Full-space operators and Liouvillian for one parameter set.
pub fn liouvillian(params: &LindbladParams, cfg: &HilbertConfig) -> Result<(Operators, Liouvillian)> {
    let ops = build_operators(cfg)?;
    let h = build_hamiltonian(params.g, params.epsilon, &ops);
    let l = Liouvillian::new(h, ops.a.clone(), params.kappa);
    Ok((ops, l))
}

/// Stationary state with its solver diagnostics.
///
/// For `g = 0` the atom is a conserved, undamped spectator and the stationary
/// set is degenerate; the state selected is the one reached from the atomic
/// ground state, `rho_cavity ⊗ |b><b|`.
pub fn steady_state(
    params: &LindbladParams,
    cfg: &HilbertConfig,
    guess: Option<&DensityMatrix>,
) -> Result<StationarySolution> {
    cfg.validate()?;
    if params.g == 0.0 {
        return decoupled_steady_state(params, cfg, guess);
    }
    let (_, l) = liouvillian(params, cfg)?;
    let guess = guess.and_then(|g| embed(g, cfg));
    solve_stationary(&l, guess.as_ref())
}

pub fn steady_density(params: &LindbladParams, cfg: &HilbertConfig) -> Result<DensityMatrix> {
    steady_state(params, cfg, None).map(|s| s.rho)
}

fn decoupled_steady_state(
    params: &LindbladParams,
    cfg: &HilbertConfig,
    guess: Option<&DensityMatrix>,
) -> Result<StationarySolution> {
    let fock = cfg.fock_dim();
    let a = annihilation(fock);
    let l_cav = Liouvillian::new(cavity_hamiltonian(params.epsilon, &a), a, params.kappa);
    let guess = guess.and_then(|g| {
        let small = g.dim() / 2;
        (small <= fock).then(|| {
            let mut m = Operator::zeros(fock, fock);
            m.view_mut((0, 0), (small, small))
                .copy_from(&g.matrix().view((LOWER * small, LOWER * small), (small, small)));
            m
        })
    });
    let cavity = solve_stationary(&l_cav, guess.as_ref())?;

    let dim = cfg.dim();
    let mut full = Operator::zeros(dim, dim);
    let offset = LOWER * fock;
    full.view_mut((offset, offset), (fock, fock))
        .copy_from(cavity.rho.matrix());
    let rho = DensityMatrix(full);
    let (_, l) = liouvillian(params, cfg)?;
    let residual = max_abs(&l.apply(rho.matrix()));
    Ok(StationarySolution {
        rho,
        solver: cavity.solver,
        iterations: cavity.iterations,
        residual,
    })
}

/// Zero-pad a state from a smaller cutoff into `cfg`'s space.
fn embed(rho: &DensityMatrix, cfg: &HilbertConfig) -> Option<Operator> {
    let small_fock = rho.dim() / 2;
    let fock = cfg.fock_dim();
    if small_fock > fock {
        return None;
    }
    let mut m = Operator::zeros(cfg.dim(), cfg.dim());
    for ai in 0..2 {
        for aj in 0..2 {
            for n in 0..small_fock {
                for k in 0..small_fock {
                    m[(ai * fock + n, aj * fock + k)] = rho.matrix()[(ai * small_fock + n, aj * small_fock + k)];
                }
            }
        }
    }
    Some(m)
}

/// Mode moments `<a^dag a>`, `<a a^dag>`, `<a^2>`, `<a>` in the state `rho`.
pub fn mode_moments(rho: &DensityMatrix, ops: &Operators) -> ModeMoments {
    let a_dag = dagger(&ops.a);
    ModeMoments {
        number: rho.expect(&(&a_dag * &ops.a)).re,
        anti_number: rho.expect(&(&ops.a * &a_dag)).re,
        a_sq: rho.expect(&(&ops.a * &ops.a)),
        a_mean: rho.expect(&ops.a),
    }
}

/// Quadrature variances of `a^dag + a` and `i(a^dag - a)` under the standard
/// commutator, from the state's moments.
pub fn standard_quadrature_variances(rho: &DensityMatrix, ops: &Operators) -> (f64, f64) {
    mode_moments(rho, ops).quadrature_variances()
}

/// Outcome of a cutoff-doubling convergence run.
#[derive(Debug, Clone, Serialize)]
pub struct CutoffConvergence {
    pub n_cut: usize,
    /// `(n_cut, <a^dag a>)` for every cutoff solved.
    pub history: Vec<(usize, f64)>,
    pub report: OracleReport,
}

/// Double the cutoff from [`INITIAL_CUTOFF`] until `<a^dag a>` moves by less
/// than `tol` between successive cutoffs; report at the last cutoff solved.
pub fn cutoff_converged(params: &LindbladParams, tol: f64, dim_cap: usize) -> Result<CutoffConvergence> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(SqueezeError::invalid("tol", format!("must be > 0, got {tol}")));
    }
    let mut n_cut = INITIAL_CUTOFF;
    let mut history = Vec::new();
    let mut previous: Option<StationarySolution> = None;
    loop {
        let cfg = HilbertConfig { n_cut, dim_cap };
        cfg.validate()?;
        let solution = steady_state(params, &cfg, previous.as_ref().map(|s| &s.rho))?;
        let ops = build_operators(&cfg)?;
        let photons = mode_moments(&solution.rho, &ops).number;
        history.push((n_cut, photons));
        if let [.., (_, before), (_, now)] = history.as_slice() {
            if (now - before).abs() < tol {
                let report = oracle_report(params, &cfg, &solution, &ops);
                return Ok(CutoffConvergence {
                    n_cut,
                    history,
                    report,
                });
            }
        }
        previous = Some(solution);
        n_cut *= 2;
    }
}

/// Fixed-step RK4 evolution of `rho` under `l` for `steps` steps of `dt`.
pub fn evolve_density(l: &Liouvillian, rho: &DensityMatrix, dt: f64, steps: usize) -> DensityMatrix {
    let half = Complex64::new(0.5 * dt, 0.0);
    let full = Complex64::new(dt, 0.0);
    let sixth = Complex64::new(dt / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let mut m = rho.matrix().clone();
    for _ in 0..steps {
        let k1 = l.apply(&m);
        let k2 = l.apply(&(&m + &k1 * half));
        let k3 = l.apply(&(&m + &k2 * half));
        let k4 = l.apply(&(&m + &k3 * full));
        m += (k1 + k2 * two + k3 * two + k4) * sixth;
    }
    DensityMatrix(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure_rates(eps: f64) -> LindbladParams {
        LindbladParams::from(&SystemParams::from_gamma_c(0.4, 0.8, eps).unwrap())
    }

    #[test]
    fn undriven_state_is_ground() {
        let cfg = HilbertConfig::new(6);
        let rho = steady_density(&figure_rates(0.0), &cfg).unwrap();
        let ground = DensityMatrix::pure_basis_state(cfg.dim(), 0);
        assert!(max_abs(&(rho.matrix() - ground.matrix())) < 1e-12);
        let ops = build_operators(&cfg).unwrap();
        let (p, m) = standard_quadrature_variances(&rho, &ops);
        assert!((p - 1.0).abs() < 1e-12 && (m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decoupled_cavity_is_coherent() {
        let params = LindbladParams::new(0.0, 0.8, 0.2).unwrap();
        let cfg = HilbertConfig::new(16);
        let sol = steady_state(&params, &cfg, None).unwrap();
        assert!(sol.residual < 1e-10);
        let ops = build_operators(&cfg).unwrap();
        let m = mode_moments(&sol.rho, &ops);
        assert!((m.number - 0.25).abs() < 1e-8);
        assert!((m.a_mean - Complex64::new(0.5, 0.0)).norm() < 1e-8);
        let (p, q) = m.quadrature_variances();
        assert!((p - 1.0).abs() < 1e-8 && (q - 1.0).abs() < 1e-8);
        assert!(sol.rho.expect(&ops.eta_b).re > 1.0 - 1e-14);
    }

    #[test]
    fn rejects_negative_coupling() {
        assert!(LindbladParams::new(-0.1, 1.0, 0.0).is_err());
        assert!(LindbladParams::new(0.1, 0.0, 0.0).is_err());
        assert!(LindbladParams::new(0.1, 1.0, -1.0).is_err());
    }

    #[test]
    fn embedding_preserves_blocks() {
        let small = HilbertConfig::new(3);
        let rho = steady_density(&figure_rates(0.2), &small).unwrap();
        let big = HilbertConfig::new(6);
        let m = embed(&rho, &big).unwrap();
        assert_eq!(m[(7, 7)], rho.matrix()[(4, 4)]);
        assert!((m.trace() - rho.trace()).norm() < 1e-15);
    }
}
