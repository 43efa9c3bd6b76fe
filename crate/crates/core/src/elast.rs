//! Stress responses of isotropic constitutive models in logarithmic strain.
//!
//! All models are given by a stored energy W expressed in the true strain
//! L = log V, where V is the positive definite left stretch:
//!
//! * quadratic (Hencky):       W = μ‖dev_n L‖² + (κ/2)(tr L)²,
//! * exponential-in-full-norm: W = (μ/k)·e^{k‖L‖²} + (λ/(2k̂))·e^{k̂(tr L)²}
//!   with k > 3/8, k̂ > 1/8,
//! * exponential-in-deviator:  W = (μ/k)·e^{k‖dev_n L‖²} + (κ/(2k̂))·e^{k̂(tr L)²}
//!   with k > 1/3, k̂ > 1/8.
//!
//! The Kirchhoff stress is the gradient τ = ∂W/∂L (closed forms below,
//! verified against finite differences of W), and the Cauchy (true) stress
//! is σ = e^{−tr L}·τ.  The central diagnostic is true-stress–true-strain
//! monotonicity: ⟨σ(X) − σ(Y), X − Y⟩ ≥ 0 for logarithmic strains X, Y —
//! equivalently positive semidefiniteness of sym ∂σ/∂L along the way.  The
//! module provides
//!
//! * closed-form energies and stresses ([`energy_of_log`],
//!   [`kirchhoff_of_log`], [`cauchy_of_log`]) and their [`StrainState`]
//!   wrappers,
//! * the finite-difference operator sym ∂σ/∂L with its asymmetry
//!   ([`tsts_operator`]),
//! * randomized pairwise scans of the monotonicity inequality, optionally
//!   restricted to the elastic domain ℰ = {‖dev log V‖² ≤ (2/3)σ_y²}
//!   ([`tsts_scan`]),
//! * the monotonicity of L ↦ τ(L), which holds for every μ, κ > 0 in the
//!   quadratic model with margin between min(2μ, nκ) and max(2μ, nκ)
//!   ([`hill_check`]); when κ = 2μ/n (zero lateral contraction) τ = 2μL and
//!   the margin is identically 2μ,
//! * a deterministic grid search for the quadratic model's monotonicity
//!   violations under large dilation, with a bisection for the parameter
//!   where λ_min(sym ∂σ/∂L) crosses zero ([`hencky_violation_search`],
//!   [`operator_lambda_min_crossing`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monocheck::{check_hmon_with, MonotonicityReport, SampleSpec};
use crate::primfn::{apply_primary, fd_operator, SymOperator, EXP};
use crate::sample;
use crate::symcore::SymMatrix;

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

/// An isotropic constitutive model with its material parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum StressModel {
    /// Quadratic energy in log strain: shear modulus `mu`, bulk modulus
    /// `kappa`.
    Hencky { mu: f64, kappa: f64 },
    /// Exponential energy in the full norm of log strain, parameters
    /// `mu`, Lamé `lambda`, growth exponents `k` > 3/8 and `k_hat` > 1/8.
    Tsts {
        mu: f64,
        lambda: f64,
        k: f64,
        k_hat: f64,
    },
    /// Exponential energy in the deviatoric norm, `k` > 1/3, `k_hat` > 1/8,
    /// with a yield stress bounding the elastic domain.
    ExpHencky {
        mu: f64,
        kappa: f64,
        k: f64,
        k_hat: f64,
        sigma_y: f64,
    },
}

fn require_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Configuration(format!("{name} must be finite, got {value}")))
    }
}

impl StressModel {
    /// Model tag used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            StressModel::Hencky { .. } => "hencky",
            StressModel::Tsts { .. } => "tsts",
            StressModel::ExpHencky { .. } => "exp-hencky",
        }
    }

    /// Validates the parameter thresholds of the variant.
    pub fn validate(&self) -> Result<()> {
        match *self {
            StressModel::Hencky { mu, kappa } => {
                require_finite("mu", mu)?;
                require_finite("kappa", kappa)?;
                if mu <= 0.0 {
                    return Err(Error::Configuration("mu must be positive".to_string()));
                }
                if kappa <= 0.0 {
                    return Err(Error::Configuration("kappa must be positive".to_string()));
                }
            }
            StressModel::Tsts { mu, lambda, k, k_hat } => {
                require_finite("mu", mu)?;
                require_finite("lambda", lambda)?;
                require_finite("k", k)?;
                require_finite("k_hat", k_hat)?;
                if mu <= 0.0 {
                    return Err(Error::Configuration("mu must be positive".to_string()));
                }
                if k <= 0.375 {
                    return Err(Error::Configuration("k must exceed 3/8".to_string()));
                }
                if k_hat <= 0.125 {
                    return Err(Error::Configuration("k_hat must exceed 1/8".to_string()));
                }
            }
            StressModel::ExpHencky {
                mu,
                kappa,
                k,
                k_hat,
                sigma_y,
            } => {
                require_finite("mu", mu)?;
                require_finite("kappa", kappa)?;
                require_finite("k", k)?;
                require_finite("k_hat", k_hat)?;
                require_finite("sigma_y", sigma_y)?;
                if mu <= 0.0 {
                    return Err(Error::Configuration("mu must be positive".to_string()));
                }
                if kappa <= 0.0 {
                    return Err(Error::Configuration("kappa must be positive".to_string()));
                }
                if k <= 1.0 / 3.0 {
                    return Err(Error::Configuration("k must exceed 1/3".to_string()));
                }
                if k_hat <= 0.125 {
                    return Err(Error::Configuration("k_hat must exceed 1/8".to_string()));
                }
                if sigma_y < 0.0 {
                    return Err(Error::Configuration(
                        "sigma_y must be nonnegative".to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Yield stress, for the variant that has one.
    pub fn sigma_y(&self) -> Option<f64> {
        match *self {
            StressModel::ExpHencky { sigma_y, .. } => Some(sigma_y),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Strain states
// ---------------------------------------------------------------------------

/// A positive definite stretch V together with its logarithm, kept
/// consistent by construction.
#[derive(Clone, Debug)]
pub struct StrainState {
    v: SymMatrix,
    logv: SymMatrix,
}

impl StrainState {
    /// From the stretch V, which must be positive definite.
    pub fn from_stretch(v: SymMatrix) -> Result<Self> {
        let dec = v.eig()?;
        let lambda_min = dec.lambda()[0];
        if lambda_min <= 0.0 {
            return Err(Error::Precondition(format!(
                "stretch must be positive definite; smallest eigenvalue {lambda_min}"
            )));
        }
        let logv = dec.map_spectrum(f64::ln);
        Ok(Self { v, logv })
    }

    /// From the logarithmic strain L; V = exp(L) is always well defined.
    pub fn from_log(logv: SymMatrix) -> Result<Self> {
        let v = apply_primary(&EXP, &logv)?;
        Ok(Self { v, logv })
    }

    pub fn n(&self) -> usize {
        self.v.n()
    }

    /// The stretch V.
    pub fn v(&self) -> &SymMatrix {
        &self.v
    }

    /// The logarithmic strain log V.
    pub fn logv(&self) -> &SymMatrix {
        &self.logv
    }

    /// ‖exp(log V) − V‖ — rounding-level by construction.
    pub fn consistency_residual(&self) -> Result<f64> {
        Ok(apply_primary(&EXP, &self.logv)?.sub(&self.v).norm())
    }
}

// ---------------------------------------------------------------------------
// Energies and stresses (closed forms in L = log V)
// ---------------------------------------------------------------------------

/// Stored energy W(L) at the logarithmic strain L.
pub fn energy_of_log(model: &StressModel, l: &SymMatrix) -> Result<f64> {
    model.validate()?;
    let n = l.n() as f64;
    let tr = l.tr();
    let dev2 = {
        let d = l.dev();
        d.norm().powi(2)
    };
    let full2 = dev2 + tr * tr / n;
    Ok(match *model {
        StressModel::Hencky { mu, kappa } => mu * dev2 + 0.5 * kappa * tr * tr,
        StressModel::Tsts { mu, lambda, k, k_hat } => {
            mu / k * (k * full2).exp() + lambda / (2.0 * k_hat) * (k_hat * tr * tr).exp()
        }
        StressModel::ExpHencky {
            mu,
            kappa,
            k,
            k_hat,
            ..
        } => mu / k * (k * dev2).exp() + kappa / (2.0 * k_hat) * (k_hat * tr * tr).exp(),
    })
}

/// Kirchhoff stress τ(L) = ∂W/∂L in closed form:
///
/// * quadratic model: τ = 2μ·dev_n L + κ(tr L)𝟙,
/// * full-norm exponential: τ = 2μ·e^{k‖L‖²}·L + λ·e^{k̂(tr L)²}(tr L)𝟙,
/// * deviatoric exponential: τ = 2μ·e^{k‖dev L‖²}·dev L + κ·e^{k̂(tr L)²}(tr L)𝟙.
pub fn kirchhoff_of_log(model: &StressModel, l: &SymMatrix) -> Result<SymMatrix> {
    model.validate()?;
    let n = l.n() as f64;
    let tr = l.tr();
    let dev = l.dev();
    let dev2 = dev.norm().powi(2);
    let eye = SymMatrix::identity(l.n())?;
    Ok(match *model {
        StressModel::Hencky { mu, kappa } => dev.scale(2.0 * mu).add(&eye.scale(kappa * tr)),
        StressModel::Tsts { mu, lambda, k, k_hat } => {
            let full2 = dev2 + tr * tr / n;
            l.scale(2.0 * mu * (k * full2).exp())
                .add(&eye.scale(lambda * (k_hat * tr * tr).exp() * tr))
        }
        StressModel::ExpHencky {
            mu,
            kappa,
            k,
            k_hat,
            ..
        } => dev
            .scale(2.0 * mu * (k * dev2).exp())
            .add(&eye.scale(kappa * (k_hat * tr * tr).exp() * tr)),
    })
}

/// Cauchy (true) stress σ(L) = e^{−tr L}·τ(L): the Kirchhoff stress scaled
/// by the inverse volume ratio det V = e^{tr L}.
pub fn cauchy_of_log(model: &StressModel, l: &SymMatrix) -> Result<SymMatrix> {
    Ok(kirchhoff_of_log(model, l)?.scale((-l.tr()).exp()))
}

/// Energy at a strain state.
pub fn energy(model: &StressModel, state: &StrainState) -> Result<f64> {
    energy_of_log(model, state.logv())
}

/// Kirchhoff stress at a strain state.
pub fn kirchhoff_stress(model: &StressModel, state: &StrainState) -> Result<SymMatrix> {
    kirchhoff_of_log(model, state.logv())
}

/// Cauchy stress at a strain state.
pub fn cauchy_stress(model: &StressModel, state: &StrainState) -> Result<SymMatrix> {
    cauchy_of_log(model, state.logv())
}

// ---------------------------------------------------------------------------
// Elastic domain
// ---------------------------------------------------------------------------

/// Membership in the elastic domain ℰ = {V : ‖dev log V‖² ≤ (2/3)·σ_y²}
/// (closed — the boundary belongs to ℰ).
pub fn elastic_domain_contains(state: &StrainState, sigma_y: f64) -> Result<bool> {
    if !(sigma_y.is_finite() && sigma_y >= 0.0) {
        return Err(Error::Configuration(format!(
            "sigma_y must be nonnegative, got {sigma_y}"
        )));
    }
    let dev2 = state.logv().dev().norm().powi(2);
    Ok(dev2 <= 2.0 / 3.0 * sigma_y * sigma_y)
}

// ---------------------------------------------------------------------------
// The monotonicity operator sym ∂σ/∂L
// ---------------------------------------------------------------------------

/// Finite-difference probe of the stress derivative at one state: the
/// symmetrized operator of H ↦ ∂σ/∂L.H, its smallest eigenvalue, and the
/// asymmetry of the raw difference matrix.
///
/// The raw derivative is genuinely non-self-adjoint away from spherical
/// stress: σ = e^{−tr L}·τ gives ∂σ/∂L.H = e^{−tr L}(∂τ/∂L.H − (tr H)·τ),
/// a symmetric Hessian part plus the rank-two skew −(τ⊗𝟙 − 𝟙⊗τ)/2 — zero
/// exactly when τ is a multiple of 𝟙.  This is why the monotonicity
/// condition takes the symmetric part.  The probe records both the raw
/// asymmetry and this closed-form structural part; only their gap is
/// differencing noise, and only the gap raises a warning.
#[derive(Clone, Debug)]
pub struct OperatorProbe {
    pub operator: SymOperator,
    pub lambda_min: f64,
    /// Asymmetry of the raw finite-difference matrix.
    pub asymmetry: f64,
    /// Closed-form asymmetry of the exact derivative, same normalization.
    pub structural_asymmetry: f64,
    /// ‖skew(raw) − skew(exact)‖ under the asymmetry normalization.
    pub excess_asymmetry: f64,
    pub step: f64,
    /// Set when the finite differences were further from the exact skew
    /// than differencing noise explains.
    pub warning: Option<String>,
}

/// Central-difference construction of sym ∂σ/∂L at `state`, step
/// h = 1e-5·max(1, ‖log V‖).
pub fn tsts_operator(model: &StressModel, state: &StrainState) -> Result<OperatorProbe> {
    model.validate()?;
    let l = state.logv();
    let step = 1e-5 * 1.0_f64.max(l.norm());
    let raw = fd_operator(|x| cauchy_of_log(model, x), l, step)?;
    let asymmetry = raw.asymmetry();
    let m = raw.m();
    let u = raw.basis().coords(&kirchhoff_of_log(model, l)?);
    let v = raw.basis().coords(&SymMatrix::identity(l.n())?);
    let vol = (-l.tr()).exp();
    let mut struct2 = 0.0;
    let mut excess2 = 0.0;
    for a in 0..m {
        for b in 0..m {
            let skew_raw = 0.5 * (raw.mat()[a * m + b] - raw.mat()[b * m + a]);
            let skew_exact = -0.5 * vol * (u[a] * v[b] - v[a] * u[b]);
            struct2 += skew_exact * skew_exact;
            excess2 += (skew_raw - skew_exact).powi(2);
        }
    }
    let denom = 1.0_f64.max(raw.frobenius());
    let structural_asymmetry = 2.0 * struct2.sqrt() / denom;
    let excess_asymmetry = 2.0 * excess2.sqrt() / denom;
    let operator = SymOperator::from_raw_symmetrized(raw.basis().clone(), raw.mat().to_vec())?;
    let lambda_min = operator.lambda_min()?;
    let warning = if excess_asymmetry > 1e-6 {
        Some(format!(
            "finite-difference skew deviates from the exact derivative skew by \
             {excess_asymmetry:e}; the step {step:e} may be unreliable against the \
             local curvature"
        ))
    } else {
        None
    };
    Ok(OperatorProbe {
        operator,
        lambda_min,
        asymmetry,
        structural_asymmetry,
        excess_asymmetry,
        step,
        warning,
    })
}

// ---------------------------------------------------------------------------
// Randomized scans
// ---------------------------------------------------------------------------

/// Pairwise true-stress monotonicity scan ⟨σ(X)−σ(Y), X−Y⟩/‖X−Y‖² over
/// seeded logarithmic strains X, Y.  The plan's scale feeds the Gaussian
/// strain draw; its domain is ignored (strains fill Sym(n)).
///
/// With `restrict_elastic`, both strains are projected into the elastic
/// domain of the model's yield stress by rescaling their deviatoric parts —
/// only the deviator is constrained by ℰ, dilations stay free.  This needs
/// a model with a yield stress.
pub fn tsts_scan(
    model: &StressModel,
    n: usize,
    spec: &SampleSpec,
    restrict_elastic: bool,
) -> Result<MonotonicityReport> {
    model.validate()?;
    let map_name = if restrict_elastic {
        format!("{}-cauchy-elastic", model.name())
    } else {
        format!("{}-cauchy", model.name())
    };
    let sigma_y = if restrict_elastic {
        Some(model.sigma_y().ok_or_else(|| {
            Error::Configuration(
                "the elastic-domain restriction needs a model with a yield stress".to_string(),
            )
        })?)
    } else {
        None
    };
    let scale = spec.scale();
    let draw_strain = move |rng: &mut rand_chacha::ChaCha8Rng| -> Result<SymMatrix> {
        let s = sample::gaussian_sym(rng, n, scale);
        match sigma_y {
            None => Ok(s),
            Some(sy) => {
                // Rescale the deviator into the ball ‖dev‖ ≤ r·√(2/3)·σ_y
                // with a seeded fraction r, keeping the trace part intact.
                let radius = (2.0_f64 / 3.0).sqrt() * sy;
                let dev = s.dev();
                let sph = s.sub(&dev);
                let u: f64 = rand::Rng::gen::<f64>(rng);
                let target = 0.999 * radius * u;
                let dn = dev.norm();
                let dev_scaled = if dn > 1e-300 {
                    dev.scale(target / dn)
                } else {
                    dev
                };
                Ok(sph.add(&dev_scaled))
            }
        }
    };
    let report = check_hmon_with(
        &map_name,
        |x| cauchy_of_log(model, x),
        n,
        spec,
        |idx| {
            let mut rng = sample::substream(spec.seed(), idx);
            let a = draw_strain(&mut rng)?;
            for _ in 0..64 {
                let b = draw_strain(&mut rng)?;
                if b.sub(&a).norm() > 1e-12 * (1.0 + a.norm()) {
                    return Ok((a, b));
                }
            }
            Err(Error::Numerical(
                "could not sample a distinct strain pair".to_string(),
            ))
        },
    )?;
    if let Some(sy) = sigma_y {
        // Every witness must itself lie in ℰ — the restriction is part of
        // the claim being tested.
        for w in &report.witnesses {
            for rows in [&w.a, &w.b_or_h] {
                let l = SymMatrix::from_rows(rows)?;
                let state = StrainState::from_log(l)?;
                if !elastic_domain_contains(&state, sy)? {
                    return Err(Error::Numerical(
                        "scan produced a witness outside the elastic domain".to_string(),
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// Monotonicity of the Kirchhoff response L ↦ τ(L) of the quadratic model:
/// a linear PD map, so the normalized margin lies between min(2μ, nκ) and
/// max(2μ, nκ) and no violations can occur; with κ = 2μ/n the margin is
/// identically 2μ.
pub fn hill_check(model: &StressModel, n: usize, spec: &SampleSpec) -> Result<MonotonicityReport> {
    let StressModel::Hencky { .. } = model else {
        return Err(Error::Configuration(
            "the Kirchhoff-monotonicity check applies to the quadratic (hencky) model".to_string(),
        ));
    };
    model.validate()?;
    check_hmon_with(
        &format!("{}-kirchhoff", model.name()),
        |x| kirchhoff_of_log(model, x),
        n,
        spec,
        |idx| {
            let mut rng = sample::substream(spec.seed(), idx);
            let a = sample::gaussian_sym(&mut rng, n, spec.scale());
            let b = sample::gaussian_sym(&mut rng, n, spec.scale());
            if b.sub(&a).norm() <= 1e-12 * (1.0 + a.norm()) {
                return Err(Error::Numerical("coincident strain pair".to_string()));
            }
            Ok((a, b))
        },
    )
}

/// Pairwise monotonicity of the stretch-parametrized Kirchhoff response
/// V ↦ τ(log V) over positive definite stretches.  Monotone when
/// τ = 2μ·log V (κ = 2μ/n); for other parameters violations may be found
/// and are reported as witnesses.
pub fn kirchhoff_v_scan(
    model: &StressModel,
    n: usize,
    spec: &SampleSpec,
) -> Result<MonotonicityReport> {
    let StressModel::Hencky { .. } = model else {
        return Err(Error::Configuration(
            "the stretch-parametrized check applies to the quadratic (hencky) model".to_string(),
        ));
    };
    model.validate()?;
    check_hmon_with(
        &format!("{}-kirchhoff-of-v", model.name()),
        |v| {
            let dec = v.eig()?;
            let lmin = dec.lambda()[0];
            if lmin <= 0.0 {
                return Err(Error::Precondition(format!(
                    "stretch must be positive definite; smallest eigenvalue {lmin}"
                )));
            }
            kirchhoff_of_log(model, &dec.map_spectrum(f64::ln))
        },
        n,
        spec,
        |idx| {
            let mut rng = sample::substream(spec.seed(), idx);
            let a = sample::positive_sym(&mut rng, n, spec.scale());
            for _ in 0..64 {
                let b = sample::positive_sym(&mut rng, n, spec.scale());
                if b.sub(&a).norm() > 1e-12 * (1.0 + a.norm()) {
                    return Ok((a, b));
                }
            }
            Err(Error::Numerical("coincident stretch pair".to_string()))
        },
    )
}

// ---------------------------------------------------------------------------
// Deterministic violation search for the quadratic model
// ---------------------------------------------------------------------------

/// A monotonicity violation of the true stress found by the grid search:
/// a strain pair with negative normalized margin.
#[derive(Clone, Debug, Serialize)]
pub struct GridWitness {
    pub l0: Vec<Vec<f64>>,
    pub l1: Vec<Vec<f64>>,
    pub margin: f64,
    pub shear: f64,
    pub dilations: (f64, f64),
}

impl GridWitness {
    pub fn l0_matrix(&self) -> Result<SymMatrix> {
        SymMatrix::from_rows(&self.l0)
    }
    pub fn l1_matrix(&self) -> Result<SymMatrix> {
        SymMatrix::from_rows(&self.l1)
    }
}

/// Normalized true-stress pairing margin between two strains.
pub fn tsts_margin(model: &StressModel, l0: &SymMatrix, l1: &SymMatrix) -> Result<f64> {
    let delta = l1.sub(l0);
    let d2 = delta.norm().powi(2);
    if d2 == 0.0 {
        return Err(Error::Precondition(
            "margin needs distinct strains".to_string(),
        ));
    }
    let ds = cauchy_of_log(model, l1)?.sub(&cauchy_of_log(model, l0)?);
    Ok(crate::symcore::inner(&ds, &delta)? / d2)
}

/// Deterministic search for a true-stress monotonicity violation of the
/// quadratic model on Sym(3): strains L = s·D₀ + d·𝟙 on a fixed grid of
/// isochoric shears s ∈ {0, 1/2, 1} (D₀ = diag(1,−1,0)/√2) and dilations
/// d ∈ {0, 1/4, …, 2}; consecutive dilation pairs are tested in scan order
/// and the first negative margin is returned.  The volumetric response
/// d ↦ 3κ·d·e^{−3d} decays beyond d = 1/3, so dilation pairs past that
/// point violate monotonicity for every μ, κ > 0.
pub fn hencky_violation_search(model: &StressModel) -> Result<Option<GridWitness>> {
    let StressModel::Hencky { .. } = model else {
        return Err(Error::Configuration(
            "the dilation grid search applies to the quadratic (hencky) model".to_string(),
        ));
    };
    model.validate()?;
    let n = 3;
    let eye = SymMatrix::identity(n)?;
    let d0 = SymMatrix::diag(&[1.0, -1.0, 0.0])?.scale(1.0 / 2.0_f64.sqrt());
    let shears = [0.0, 0.5, 1.0];
    let dilations: Vec<f64> = (0..9).map(|k| 0.25 * k as f64).collect();
    for &s in &shears {
        for pair in dilations.windows(2) {
            let l0 = d0.scale(s).add(&eye.scale(pair[0]));
            let l1 = d0.scale(s).add(&eye.scale(pair[1]));
            let margin = tsts_margin(model, &l0, &l1)?;
            if margin < -crate::monocheck::MARGIN_BAND {
                return Ok(Some(GridWitness {
                    l0: l0.to_rows(),
                    l1: l1.to_rows(),
                    margin,
                    shear: s,
                    dilations: (pair[0], pair[1]),
                }));
            }
        }
    }
    Ok(None)
}

/// Bisection for the parameter t* where λ_min(sym ∂σ/∂L) crosses zero on
/// the segment L₀ + t(L₁−L₀); requires a sign change between the
/// endpoints.  Returns t* to within `tol`.
pub fn operator_lambda_min_crossing(
    model: &StressModel,
    l0: &SymMatrix,
    l1: &SymMatrix,
    tol: f64,
) -> Result<f64> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Configuration(format!(
            "bisection tolerance must be positive, got {tol}"
        )));
    }
    let phi = |t: f64| -> Result<f64> {
        let l = l0.add(&l1.sub(l0).scale(t));
        Ok(tsts_operator(model, &StrainState::from_log(l)?)?.lambda_min)
    };
    let mut lo = 0.0;
    let mut hi = 1.0;
    let phi_lo = phi(lo)?;
    let phi_hi = phi(hi)?;
    if phi_lo.signum() == phi_hi.signum() {
        return Err(Error::Precondition(format!(
            "no sign change of λ_min between the endpoints ({phi_lo:e} and {phi_hi:e})"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let phi_mid = phi(mid)?;
        if phi_mid.signum() == phi_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
