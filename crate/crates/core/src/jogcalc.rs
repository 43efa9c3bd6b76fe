//! Operator calculus for products of self-adjoint positive definite
//! operators on Sym(n).
//!
//! Three pieces fit together:
//!
//! * **Product certification.**  If A and B are self-adjoint positive
//!   definite operators and their composition A∘B happens to be
//!   self-adjoint, then A∘B is positive definite (its spectrum equals that
//!   of A^{1/2}BA^{1/2}).  [`product_pd`] embodies this as an API that
//!   cannot be misapplied: when the composition is *not* self-adjoint it
//!   refuses with the measured asymmetry instead of returning a junk
//!   verdict.
//! * **Chain factorization.**  With B := V the stretch, the true-stress
//!   derivative factors as ∂σ/∂V ∘ ∂V/∂log V = ∂σ̂/∂log V, where
//!   ∂V/∂log V = Dexp[log V] is always self-adjoint positive definite.
//!   [`chain_factorization`] builds all three operators (finite differences
//!   for the two stress legs, the divided-difference derivative for the
//!   exponential leg), reports the factorization residual, and — only when
//!   the log-strain leg is itself self-adjoint positive definite — runs the
//!   product certification on ∂σ̂/∂log V ∘ Dexp[log V]⁻¹ to propagate
//!   positivity to ∂σ/∂V.  Away from spherical stress the stress legs are
//!   genuinely non-self-adjoint (see [`crate::elast::tsts_operator`]), so
//!   the hypothesis flags in the report carry real information.
//! * **The shear path.**  A = diag(1, 1/8) composed with the unit shears
//!   B_t = [[1, −t], [0, 1]] keeps det(A·B_t) = 1/8 for every t while
//!   det(sym(A·B_t)) = 1/8 − t²/4 changes sign at t = 1/√2: a continuous
//!   family that stays invertible yet loses positive definiteness of its
//!   symmetric part.  [`run_path_experiment`] tabulates the grid and
//!   [`sym_pd_crossing`] bisects for the crossing.

use std::fmt::Write as _;

use serde::Serialize;

use crate::elast::{cauchy_of_log, StrainState, StressModel};
use crate::error::{Error, Result};
use crate::primfn::{fd_operator, frechet, DifferencingSpec, SymOperator, EXP};
use crate::symcore::{
    definiteness, eig_slice, Definiteness, GeneralMatrix, DEFAULT_DEFINITENESS_TOL,
};

/// Relative asymmetry above which an operator (or a composition) no longer
/// counts as self-adjoint.
pub const SELF_ADJOINT_TOL: f64 = 1e-9;

/// Determinant magnitude below which a path matrix counts as singular.
pub const INVERTIBILITY_TOL: f64 = 1e-12;

/// Conditioning bound on the exponential-derivative leg beyond which the
/// factorization is reported as numerically meaningless.
pub const MAX_CONDITIONING: f64 = 1e12;

// ---------------------------------------------------------------------------
// Product certification
// ---------------------------------------------------------------------------

/// Outcome of [`product_pd`]: either a positive definiteness certificate for
/// the composition, or a refusal because the composition failed the
/// self-adjointness hypothesis the certificate rests on.
#[derive(Clone, Copy, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ProductVerdict {
    /// Composition self-adjoint within tolerance and positive definite.
    PositiveDefinite {
        lambda_min: f64,
        composition_asymmetry: f64,
    },
    /// Composition not self-adjoint: no definiteness claim is made.
    Refusal {
        composition_asymmetry: f64,
        tolerance: f64,
    },
}

impl ProductVerdict {
    pub fn is_definite(&self) -> bool {
        matches!(self, ProductVerdict::PositiveDefinite { .. })
    }

    pub fn is_refusal(&self) -> bool {
        matches!(self, ProductVerdict::Refusal { .. })
    }

    /// λ_min of a certified composition.
    pub fn lambda_min(&self) -> Option<f64> {
        match self {
            ProductVerdict::PositiveDefinite { lambda_min, .. } => Some(*lambda_min),
            ProductVerdict::Refusal { .. } => None,
        }
    }
}

fn require_self_adjoint_pd(side: &str, op: &SymOperator) -> Result<f64> {
    let asym = op.matrix_asymmetry();
    if asym > SELF_ADJOINT_TOL {
        return Err(Error::Precondition(format!(
            "{side} operator is not self-adjoint: asymmetry {asym:e} exceeds {SELF_ADJOINT_TOL:e}"
        )));
    }
    let lambda_min = op.lambda_min()?;
    if lambda_min <= 0.0 {
        return Err(Error::Precondition(format!(
            "{side} operator is not positive definite: λ_min = {lambda_min:e}"
        )));
    }
    Ok(lambda_min)
}

/// Certifies positive definiteness of op_a ∘ op_b.
///
/// Both inputs must be self-adjoint (asymmetry ≤ [`SELF_ADJOINT_TOL`]) and
/// positive definite — anything else is a precondition error.  The verdict
/// is then decided by the composition alone: self-adjoint within tolerance
/// ⇒ positive definite certificate with its λ_min; otherwise an explicit
/// refusal carrying the measured asymmetry.
pub fn product_pd(op_a: &SymOperator, op_b: &SymOperator) -> Result<ProductVerdict> {
    require_self_adjoint_pd("left", op_a)?;
    require_self_adjoint_pd("right", op_b)?;
    let composition = op_a.compose(op_b)?;
    let composition_asymmetry = composition.matrix_asymmetry();
    if composition_asymmetry > SELF_ADJOINT_TOL {
        return Ok(ProductVerdict::Refusal {
            composition_asymmetry,
            tolerance: SELF_ADJOINT_TOL,
        });
    }
    let lambda_min = composition.lambda_min()?;
    if lambda_min <= 0.0 {
        // Impossible for exact arithmetic (the spectrum of the composition
        // is that of a congruence-symmetrized product); reaching this means
        // the factor spectra were at rounding scale.
        return Err(Error::Numerical(format!(
            "self-adjoint composition of positive definite operators classified \
             non-definite (λ_min = {lambda_min:e})"
        )));
    }
    Ok(ProductVerdict::PositiveDefinite {
        lambda_min,
        composition_asymmetry,
    })
}

/// Spectral inverse of a self-adjoint positive definite operator, together
/// with its conditioning λ_max/λ_min.  The matrix is symmetrized before
/// decomposition; a non-positive spectrum is a numerical error.
pub fn inverse_of_self_adjoint(op: &SymOperator) -> Result<(SymOperator, f64)> {
    let m = op.m();
    let mut sym = vec![0.0; m * m];
    for a in 0..m {
        for b in 0..m {
            sym[a * m + b] = 0.5 * (op.mat()[a * m + b] + op.mat()[b * m + a]);
        }
    }
    let (lambda, q) = eig_slice(m, &sym)?;
    let lambda_min = lambda[0];
    let lambda_max = lambda[m - 1];
    if lambda_min <= 0.0 {
        return Err(Error::Numerical(format!(
            "operator is not positive definite (λ_min = {lambda_min:e}); spectral \
             inversion refused"
        )));
    }
    let conditioning = lambda_max / lambda_min;
    let mut inv = vec![0.0; m * m];
    for a in 0..m {
        for b in 0..m {
            let mut s = 0.0;
            for k in 0..m {
                s += q[k * m + a] / lambda[k] * q[k * m + b];
            }
            inv[a * m + b] = s;
        }
    }
    Ok((SymOperator::from_raw(op.basis().clone(), inv)?, conditioning))
}

// ---------------------------------------------------------------------------
// Chain factorization
// ---------------------------------------------------------------------------

/// The three operators of the factorization ∂σ/∂V ∘ ∂V/∂log V = ∂σ̂/∂log V
/// at one state, plus the Frobenius residual of the identity.
#[derive(Clone, Debug)]
pub struct OperatorTriple {
    pub dsigma_db: SymOperator,
    pub db_dlogb: SymOperator,
    pub dsigma_dlogb: SymOperator,
    pub residual: f64,
}

/// JSON-facing summary of a chain factorization: the λ_min of each
/// operator's symmetric part, the measured asymmetries, the factorization
/// residual, and whether positivity of ∂σ/∂V was actually certified via the
/// product rule (it is claimed only when the log-strain leg passes both
/// hypotheses and the composition with the inverse exponential derivative
/// is self-adjoint).
#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub model: String,
    pub n: usize,
    pub step: f64,
    pub residual: f64,
    pub lambda_min_dsigma_db: f64,
    pub lambda_min_db_dlogb: f64,
    pub lambda_min_dsigma_dlogb: f64,
    pub asymmetry_dsigma_db: f64,
    pub asymmetry_dsigma_dlogb: f64,
    pub exp_derivative_conditioning: f64,
    pub hypothesis_self_adjoint: bool,
    pub hypothesis_positive: bool,
    pub pd_propagated: bool,
}

/// [`chain_factorization`] with an explicit finite-difference step for the
/// two stress legs; the residual shrinks as O(step²).
pub fn chain_factorization_with_step(
    model: &StressModel,
    state: &StrainState,
    step: f64,
) -> Result<(OperatorTriple, ChainReport)> {
    model.validate()?;
    let v = state.v();
    let l = state.logv();
    let dsigma_db = fd_operator(
        |x| {
            let dec = x.eig()?;
            let lmin = dec.lambda()[0];
            if lmin <= 0.0 {
                return Err(Error::Precondition(format!(
                    "stretch left the positive cone during differencing \
                     (smallest eigenvalue {lmin:e})"
                )));
            }
            cauchy_of_log(model, &dec.map_spectrum(f64::ln))
        },
        v,
        step,
    )?;
    let db_dlogb = frechet(&EXP, l, &DifferencingSpec::default())?;
    let dsigma_dlogb = fd_operator(|x| cauchy_of_log(model, x), l, step)?;
    let residual = dsigma_db.compose(&db_dlogb)?.diff_norm(&dsigma_dlogb)?;

    let (dexp_inverse, conditioning) = inverse_of_self_adjoint(&db_dlogb)?;
    if conditioning > MAX_CONDITIONING {
        return Err(Error::Numerical(format!(
            "exponential-derivative leg has conditioning {conditioning:e}; the \
             factorization is numerically meaningless"
        )));
    }
    let asymmetry_dsigma_dlogb = dsigma_dlogb.asymmetry();
    let lambda_min_dsigma_dlogb = dsigma_dlogb.lambda_min()?;
    let hypothesis_self_adjoint = asymmetry_dsigma_dlogb <= SELF_ADJOINT_TOL;
    let hypothesis_positive = lambda_min_dsigma_dlogb > 0.0;
    let pd_propagated = if hypothesis_self_adjoint && hypothesis_positive {
        product_pd(&dsigma_dlogb, &dexp_inverse)?.is_definite()
    } else {
        false
    };
    let report = ChainReport {
        model: model.name().to_string(),
        n: state.n(),
        step,
        residual,
        lambda_min_dsigma_db: dsigma_db.lambda_min()?,
        lambda_min_db_dlogb: db_dlogb.lambda_min()?,
        lambda_min_dsigma_dlogb,
        asymmetry_dsigma_db: dsigma_db.asymmetry(),
        asymmetry_dsigma_dlogb,
        exp_derivative_conditioning: conditioning,
        hypothesis_self_adjoint,
        hypothesis_positive,
        pd_propagated,
    };
    let triple = OperatorTriple {
        dsigma_db,
        db_dlogb,
        dsigma_dlogb,
        residual,
    };
    Ok((triple, report))
}

/// Builds the factorization at the default step 1e-5·max(1, ‖V‖, ‖log V‖).
pub fn chain_factorization(
    model: &StressModel,
    state: &StrainState,
) -> Result<(OperatorTriple, ChainReport)> {
    let step = 1e-5 * 1.0_f64.max(state.v().norm().max(state.logv().norm()));
    chain_factorization_with_step(model, state, step)
}

// ---------------------------------------------------------------------------
// The shear path
// ---------------------------------------------------------------------------

/// The fixed diagonal factor diag(1, 1/8).
pub fn path_matrix_a() -> GeneralMatrix {
    GeneralMatrix::new(2, vec![1.0, 0.0, 0.0, 0.125]).expect("constant 2x2 matrix")
}

/// The unit upper-triangular shear [[1, −t], [0, 1]].
pub fn path_matrix_b(t: f64) -> GeneralMatrix {
    GeneralMatrix::new(2, vec![1.0, -t, 0.0, 1.0]).expect("finite 2x2 matrix")
}

/// One grid record of the shear-path experiment, recomputable from t alone.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PathRecord {
    pub t: f64,
    pub det_ab: f64,
    pub det_sym_ab: f64,
    pub sym_pd: bool,
    pub invertible: bool,
}

/// Evaluates the path at one parameter value.
pub fn path_point(t: f64) -> Result<PathRecord> {
    if !t.is_finite() {
        return Err(Error::Configuration(format!(
            "path parameter must be finite, got {t}"
        )));
    }
    let ab = path_matrix_a().matmul(&path_matrix_b(t));
    let sym = ab.sym();
    let det_ab = ab.det();
    let det_sym_ab = sym.det();
    let sym_pd = definiteness(&sym, DEFAULT_DEFINITENESS_TOL)?.verdict
        == Definiteness::PositiveDefinite;
    Ok(PathRecord {
        t,
        det_ab,
        det_sym_ab,
        sym_pd,
        invertible: det_ab.abs() > INVERTIBILITY_TOL,
    })
}

/// Grid tabulation of the shear path on [0, 1].
#[derive(Clone, Debug, Serialize)]
pub struct PathExperiment {
    pub records: Vec<PathRecord>,
}

impl PathExperiment {
    /// True when |det(A·B_t)| stayed above [`INVERTIBILITY_TOL`] on the
    /// whole grid.
    pub fn invertible_throughout(&self) -> bool {
        self.records.iter().all(|r| r.invertible)
    }

    /// Number of grid steps where the sym-PD verdict flips.
    pub fn sym_pd_changes(&self) -> usize {
        self.records
            .windows(2)
            .filter(|w| w[0].sym_pd != w[1].sym_pd)
            .count()
    }

    /// CSV rendering: header plus one row per grid point, in t order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,det_AB,det_sym_AB,sym_pd,invertible\n");
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{}",
                r.t, r.det_ab, r.det_sym_ab, r.sym_pd, r.invertible
            )
            .expect("string writes are infallible");
        }
        out
    }
}

/// Runs the experiment on a uniform grid of `t_steps` ≥ 2 points spanning
/// [0, 1] inclusive.
pub fn run_path_experiment(t_steps: usize) -> Result<PathExperiment> {
    if t_steps < 2 {
        return Err(Error::Configuration(format!(
            "the path grid needs at least 2 steps, got {t_steps}"
        )));
    }
    let mut records = Vec::with_capacity(t_steps);
    for k in 0..t_steps {
        let t = k as f64 / (t_steps - 1) as f64;
        records.push(path_point(t)?);
    }
    Ok(PathExperiment { records })
}

/// Bisection on [0, 1] for the parameter t* where det(sym(A·B_t)) crosses
/// zero — the point where the symmetric part stops being positive definite
/// while A·B_t itself stays invertible.  Resolves t* to within `tol`.
pub fn sym_pd_crossing(tol: f64) -> Result<f64> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Configuration(format!(
            "bisection tolerance must be positive, got {tol}"
        )));
    }
    let g = |t: f64| -> f64 {
        path_matrix_a().matmul(&path_matrix_b(t)).sym().det()
    };
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    let g_lo = g(lo);
    let g_hi = g(hi);
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::Precondition(format!(
            "no sign change of det(sym) between the endpoints ({g_lo} and {g_hi})"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if g(mid).signum() == g_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
