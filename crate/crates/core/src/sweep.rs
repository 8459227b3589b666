//! Drive-amplitude sweeps: the data behind the uncertainty and squeezing
//! curves, the identity residual tables, and the numerical squeezing maximizer.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::closed_form::{self, check_rates, OptimalDrive};
use crate::error::{Result, SqueezeError};
use crate::format::sci;
use crate::params::SystemParams;
use crate::superposition;

/// Rates used for every published figure.
pub const FIGURE_GAMMA_C: f64 = 0.4;
pub const FIGURE_KAPPA: f64 = 0.8;

pub const SWEEP_CSV_HEADER: &str =
    "epsilon,f_a,f_b,S,f_c,f_d,s_plus,n_bar,n_bar_sup,var_plus,var_c_plus";
pub const IDENTITY_CSV_HEADER: &str =
    "epsilon,fb2_minus_fa2,expected_ab,residual_ab,fd_minus_fc,expected_cd,residual_cd";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    pub eps_min: f64,
    pub eps_max: f64,
    pub n_points: usize,
    pub gamma_c: f64,
    pub kappa: f64,
}

impl SweepSpec {
    pub fn new(eps_min: f64, eps_max: f64, n_points: usize, gamma_c: f64, kappa: f64) -> Result<Self> {
        let spec = SweepSpec {
            eps_min,
            eps_max,
            n_points,
            gamma_c,
            kappa,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_rates(self.gamma_c, self.kappa)?;
        if !self.eps_min.is_finite() || self.eps_min < 0.0 {
            return Err(SqueezeError::invalid("eps_min", format!("must be >= 0, got {}", self.eps_min)));
        }
        if !self.eps_max.is_finite() || self.eps_max <= self.eps_min {
            return Err(SqueezeError::invalid(
                "eps_max",
                format!("must exceed eps_min = {}, got {}", self.eps_min, self.eps_max),
            ));
        }
        if self.n_points < 2 {
            return Err(SqueezeError::invalid("n_points", format!("must be >= 2, got {}", self.n_points)));
        }
        Ok(())
    }

    /// Uniform grid; each point computed from its index so endpoints are exact.
    pub fn grid(&self) -> Vec<f64> {
        let span = self.eps_max - self.eps_min;
        let last = (self.n_points - 1) as f64;
        (0..self.n_points)
            .map(|i| {
                if i + 1 == self.n_points {
                    self.eps_max
                } else {
                    self.eps_min + span * (i as f64) / last
                }
            })
            .collect()
    }

    fn params_at(&self, epsilon: f64) -> SystemParams {
        SystemParams::from_gamma_c(self.gamma_c, self.kappa, epsilon)
            .expect("validated sweep spec yields valid parameters")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub f_a: f64,
    pub f_b: f64,
    #[serde(rename = "S")]
    pub squeezing: f64,
    pub f_c: f64,
    pub f_d: f64,
    pub s_plus: f64,
    pub n_bar: f64,
    pub n_bar_sup: f64,
    pub var_plus: f64,
    pub var_c_plus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.rows.len() * 220);
        out.push_str(SWEEP_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let fields = [
                r.epsilon, r.f_a, r.f_b, r.squeezing, r.f_c, r.f_d, r.s_plus, r.n_bar, r.n_bar_sup,
                r.var_plus, r.var_c_plus,
            ];
            let line: Vec<String> = fields.iter().map(|&x| sci(x)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Rows ascend strictly in epsilon and satisfy both uncertainty relations.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for w in self.rows.windows(2) {
            if w[1].epsilon <= w[0].epsilon {
                return Err(format!("epsilon not ascending at {}", w[1].epsilon));
            }
        }
        for r in &self.rows {
            if r.f_b < r.f_a {
                return Err(format!("f_b < f_a at epsilon = {}", r.epsilon));
            }
            if r.f_d < r.f_c {
                return Err(format!("f_d < f_c at epsilon = {}", r.epsilon));
            }
        }
        Ok(())
    }
}

fn sweep_row(params: &SystemParams) -> SweepRow {
    let single = closed_form::single_mode_stats(params);
    let (f_c, f_d) = superposition::superposed_bounds(params);
    let (var_c_plus, _, _) = superposition::superposed_variances(params);
    SweepRow {
        epsilon: params.epsilon(),
        f_a: single.f_a,
        f_b: single.f_b,
        squeezing: single.squeezing,
        f_c,
        f_d,
        s_plus: superposition::superposed_squeezing(params).s_plus,
        n_bar: single.n_bar,
        n_bar_sup: superposition::superposed_mean_photons(params),
        var_plus: single.var_plus,
        var_c_plus,
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    // indexed parallel collect keeps grid order
    let rows = spec
        .grid()
        .into_par_iter()
        .map(|eps| sweep_row(&spec.params_at(eps)))
        .collect();
    Ok(SweepTable { rows })
}

/// `1/2 - S` written as `(8 eps^2 - kappa gamma_c)^2 / (2 D^2)`, which keeps full
/// relative precision where `S` itself is flat to within an ulp.
fn squeezing_deficit(gamma_c: f64, kappa: f64, eps: f64) -> f64 {
    let lead = 8.0 * eps * eps - kappa * gamma_c;
    let d = 8.0 * eps * eps + kappa * gamma_c;
    lead * lead / (2.0 * d * d)
}

/// Grid scan of the squeezing over `[0, 5 eps*]`, then ternary refinement of
/// the bracket around the best grid point.
pub fn find_max_squeezing(gamma_c: f64, kappa: f64) -> Result<OptimalDrive> {
    const COARSE_POINTS: usize = 1000;
    const EPS_TOL: f64 = 1e-10;

    check_rates(gamma_c, kappa)?;
    let params_at =
        |eps: f64| SystemParams::from_gamma_c(gamma_c, kappa, eps).expect("validated rates");
    let upper = 5.0 * (kappa * gamma_c / 8.0).sqrt();
    let step = upper / (COARSE_POINTS - 1) as f64;
    let best = (0..COARSE_POINTS)
        .map(|i| (i, closed_form::squeezing(&params_at(i as f64 * step))))
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });

    let deficit = |eps: f64| squeezing_deficit(gamma_c, kappa, eps);
    let mut lo = (best.0.saturating_sub(1)) as f64 * step;
    let mut hi = ((best.0 + 1).min(COARSE_POINTS - 1)) as f64 * step;
    while hi - lo > EPS_TOL {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if deficit(m1) > deficit(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let epsilon = 0.5 * (lo + hi);
    Ok(OptimalDrive {
        epsilon,
        squeezing: closed_form::squeezing(&params_at(epsilon)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityRow {
    pub epsilon: f64,
    pub fb2_minus_fa2: f64,
    pub expected_ab: f64,
    pub residual_ab: f64,
    pub fd_minus_fc: f64,
    pub expected_cd: f64,
    pub residual_cd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityTable {
    pub rows: Vec<IdentityRow>,
    pub max_residual_ab: f64,
    pub max_residual_cd: f64,
}

impl IdentityTable {
    pub fn max_residual(&self) -> f64 {
        self.max_residual_ab.max(self.max_residual_cd)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(IDENTITY_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                sci(r.epsilon),
                sci(r.fb2_minus_fa2),
                sci(r.expected_ab),
                sci(r.residual_ab),
                sci(r.fd_minus_fc),
                sci(r.expected_cd),
                sci(r.residual_cd)
            );
        }
        out
    }
}

/// `|lhs - rhs|` relative to the size of the terms whose difference forms `lhs`.
fn scaled_residual(lhs: f64, rhs: f64, scale: f64) -> f64 {
    if lhs == rhs {
        0.0
    } else {
        (lhs - rhs).abs() / scale
    }
}

/// Per-row residuals of
/// `f_b^2 - f_a^2 = 64 gamma_c^2 eps^4 / (kappa^2 D^2)` and
/// `f_d - f_c = 128 gamma_c eps^4 / (kappa D^2)`.
///
/// Each left side is a difference of two computed quantities, so residuals are
/// scaled by the larger of those two magnitudes.
pub fn identity_report(spec: &SweepSpec) -> Result<IdentityTable> {
    spec.validate()?;
    let rows: Vec<IdentityRow> = spec
        .grid()
        .into_par_iter()
        .map(|eps| {
            let p = spec.params_at(eps);
            let (gc, k) = (p.gamma_c(), p.kappa());
            let d = p.denominator();
            let eps4 = eps.powi(4);
            let f_a = closed_form::uncertainty_bound(&p);
            let f_b = closed_form::uncertainty_product(&p);
            let (f_c, f_d) = superposition::superposed_bounds(&p);
            let fb2_minus_fa2 = f_b * f_b - f_a * f_a;
            let expected_ab = 64.0 * gc * gc * eps4 / (k * k * d * d);
            let fd_minus_fc = f_d - f_c;
            let expected_cd = 128.0 * gc * eps4 / (k * d * d);
            IdentityRow {
                epsilon: eps,
                fb2_minus_fa2,
                expected_ab,
                residual_ab: scaled_residual(fb2_minus_fa2, expected_ab, (f_b * f_b).max(f_a * f_a)),
                fd_minus_fc,
                expected_cd,
                residual_cd: scaled_residual(fd_minus_fc, expected_cd, f_d.max(f_c)),
            }
        })
        .collect();
    let max_residual_ab = rows.iter().map(|r| r.residual_ab).fold(0.0, f64::max);
    let max_residual_cd = rows.iter().map(|r| r.residual_cd).fold(0.0, f64::max);
    Ok(IdentityTable {
        rows,
        max_residual_ab,
        max_residual_cd,
    })
}

/// Sweep grids for the three figures and the identity table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureSpecs {
    pub fig2: SweepSpec,
    pub fig3: SweepSpec,
    pub fig4: SweepSpec,
    pub identities: SweepSpec,
}

impl FigureSpecs {
    pub fn for_rates(gamma_c: f64, kappa: f64) -> Result<Self> {
        Ok(FigureSpecs {
            fig2: SweepSpec::new(0.0, 0.8, 401, gamma_c, kappa)?,
            fig3: SweepSpec::new(0.0, 1.0, 501, gamma_c, kappa)?,
            fig4: SweepSpec::new(0.0, 0.8, 401, gamma_c, kappa)?,
            identities: SweepSpec::new(0.0, 1.0, 1000, gamma_c, kappa)?,
        })
    }
}

impl Default for FigureSpecs {
    fn default() -> Self {
        FigureSpecs::for_rates(FIGURE_GAMMA_C, FIGURE_KAPPA).expect("figure rates are valid")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureSummary {
    pub gamma_c: f64,
    pub kappa: f64,
    pub eps_star: f64,
    pub s_max: f64,
    pub max_identity_residual_ab: f64,
    pub max_identity_residual_cd: f64,
}

/// In-memory contents of every figure output file.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub fig2: SweepTable,
    pub fig3: SweepTable,
    pub fig4: SweepTable,
    pub identities: IdentityTable,
    pub summary: FigureSummary,
}

impl FigureData {
    pub fn generate(specs: &FigureSpecs) -> Result<Self> {
        let fig3 = run_sweep(&specs.fig3)?;
        let identities = identity_report(&specs.identities)?;
        let peak = find_max_squeezing(specs.fig3.gamma_c, specs.fig3.kappa)?;
        Ok(FigureData {
            fig2: run_sweep(&specs.fig2)?,
            fig3,
            fig4: run_sweep(&specs.fig4)?,
            summary: FigureSummary {
                gamma_c: specs.fig3.gamma_c,
                kappa: specs.fig3.kappa,
                eps_star: peak.epsilon,
                s_max: peak.squeezing,
                max_identity_residual_ab: identities.max_residual_ab,
                max_identity_residual_cd: identities.max_residual_cd,
            },
            identities,
        })
    }

    /// `(file name, contents)` for every output file.
    pub fn files(&self) -> Vec<(&'static str, String)> {
        let summary = serde_json::to_string_pretty(&self.summary).expect("summary serializes") + "\n";
        vec![
            ("fig2.csv", self.fig2.to_csv()),
            ("fig3.csv", self.fig3.to_csv()),
            ("fig4.csv", self.fig4.to_csv()),
            ("identities.csv", self.identities.to_csv()),
            ("summary.json", summary),
        ]
    }

    pub fn write_to(&self, dir: &Path) -> io::Result<Vec<std::path::PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for (name, contents) in self.files() {
            let path = dir.join(name);
            fs::write(&path, contents)?;
            written.push(path);
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_spec() -> SweepSpec {
        SweepSpec::new(0.0, 1.0, 101, 0.4, 0.8).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(SweepSpec::new(0.5, 0.5, 10, 0.4, 0.8).is_err());
        assert!(SweepSpec::new(-0.1, 0.5, 10, 0.4, 0.8).is_err());
        assert!(SweepSpec::new(0.0, 0.5, 1, 0.4, 0.8).is_err());
        assert!(SweepSpec::new(0.0, 0.5, 10, 0.0, 0.8).is_err());
    }

    #[test]
    fn grid_endpoints_exact() {
        let g = unit_spec().grid();
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[20], 0.2);
        assert_eq!(g[100], 1.0);
    }

    #[test]
    fn zero_drive_row() {
        let t = run_sweep(&unit_spec()).unwrap();
        let r = t.rows[0];
        assert!((r.f_a - 0.5).abs() < 1e-15 && (r.f_b - 0.5).abs() < 1e-15);
        assert_eq!(r.squeezing, 0.0);
        assert!((r.f_c - 1.0).abs() < 1e-15 && (r.f_d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn optimum_row() {
        let t = run_sweep(&unit_spec()).unwrap();
        let r = t.rows[20];
        assert!((r.squeezing - 0.5).abs() < 1e-12);
        assert!((r.f_a - 0.25).abs() < 1e-12);
        assert!((r.f_b - 0.353_553_390_6).abs() < 1e-10);
    }

    #[test]
    fn squeezing_tail_decreases() {
        let t = run_sweep(&unit_spec()).unwrap();
        for w in t.rows[20..].windows(2) {
            assert!(w[1].squeezing < w[0].squeezing);
        }
        t.check_invariants().unwrap();
    }

    #[test]
    fn identity_examples() {
        let spec = unit_spec();
        let t = identity_report(&spec).unwrap();
        assert_eq!(t.rows[0].residual_ab, 0.0);
        assert_eq!(t.rows[0].residual_cd, 0.0);
        let r = t.rows[20];
        assert!((r.fb2_minus_fa2 - 0.0625).abs() < 1e-13);
        assert!((r.fd_minus_fc - 0.25).abs() < 1e-13);
        assert!(t.max_residual() <= 1e-12, "{}", t.max_residual());
    }

    #[test]
    fn maximizer_examples() {
        for (gc, k, eps) in [(0.4, 0.8, 0.2), (1.0, 1.0, (1.0f64 / 8.0).sqrt()), (2.0, 0.5, (1.0f64 / 8.0).sqrt())] {
            let o = find_max_squeezing(gc, k).unwrap();
            assert!((o.squeezing - 0.5).abs() <= 1e-9);
            assert!((o.epsilon - eps).abs() <= 1e-8, "{gc} {k}: {}", o.epsilon);
        }
    }

    #[test]
    fn deficit_complements_squeezing() {
        for eps in [0.0, 0.05, 0.2, 0.7, 3.0] {
            let p = SystemParams::from_gamma_c(0.4, 0.8, eps).unwrap();
            let s = closed_form::squeezing(&p);
            assert!((squeezing_deficit(0.4, 0.8, eps) - (0.5 - s)).abs() < 1e-15);
        }
    }

    #[test]
    fn csv_layout() {
        let t = run_sweep(&SweepSpec::new(0.0, 0.2, 2, 0.4, 0.8).unwrap()).unwrap();
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SWEEP_CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0.000000000000e+00,5.000000000000e-01,"));
        assert!(lines[2].starts_with("2.000000000000e-01,"));
        assert!(csv.ends_with('\n') && !csv.contains('\r'));
    }
}
