//! Primary matrix functions and their derivative operators.
//!
//! A scalar function f on an open interval I lifts to symmetric matrices
//! with spectrum in I through the spectral decomposition:
//! f(A) = Qᵀ·diag(f(λ₁),…,f(λₙ))·Q.  This module provides
//!
//! * a registry of built-in scalar functions with derivative, optional
//!   antiderivative and domain ([`ScalarFunction`]),
//! * the lift itself ([`apply_primary`]),
//! * the Fréchet derivative Df[A] as a linear operator on Sym(n), built from
//!   divided differences of the eigenvalues ([`frechet`]) and, independently,
//!   from quadrature of the integral representations of Dexp and Dlog
//!   ([`frechet_exp_integral`], [`frechet_log_integral`]) so the two
//!   constructions can check each other,
//! * the scalar potential W(A) = Σᵢ F(λᵢ) whose gradient is f(A)
//!   ([`potential_value`], [`potential_gradient_check`], [`pseudo_potential`]),
//! * finite-difference operators of arbitrary matrix maps ([`fd_operator`]),
//! * derivative identities of the determinant and of simple eigenvalues in
//!   diagonal states ([`det_derivative_identity_direction`],
//!   [`det_derivative_offdiag`], [`eigenvalue_offdiag_shift`]),
//! * the conjugation-invariance check f(QᵀAQ) = Qᵀf(A)Q
//!   ([`isotropy_conjugation_check`]).
//!
//! Operators on Sym(n) are represented as m×m matrices, m = n(n+1)/2, in the
//! orthonormal basis fixed by [`crate::symcore::SymBasis`].

use crate::error::{Error, Result};
use crate::symcore::{eig_slice, inner, GeneralMatrix, SymBasis, SymMatrix};

// ---------------------------------------------------------------------------
// Scalar functions
// ---------------------------------------------------------------------------

/// Open interval (lo, hi); endpoints may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// The whole real line.
    pub const REAL: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };
    /// The positive half-line (0, ∞).
    pub const POSITIVE: Interval = Interval {
        lo: 0.0,
        hi: f64::INFINITY,
    };

    /// Strict membership: endpoints are excluded.
    pub fn contains(&self, t: f64) -> bool {
        t > self.lo && t < self.hi
    }
}

/// A scalar function together with the calculus the matrix lifts need:
/// derivative, optional antiderivative (for potentials), and the open
/// interval on which it is defined.
#[derive(Clone, Copy)]
pub struct ScalarFunction {
    name: &'static str,
    f: fn(f64) -> f64,
    df: fn(f64) -> f64,
    antiderivative: Option<fn(f64) -> f64>,
    domain: Interval,
}

impl std::fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("has_antiderivative", &self.antiderivative.is_some())
            .finish()
    }
}

impl ScalarFunction {
    /// Assembles a scalar function from plain function pointers.
    pub const fn new(
        name: &'static str,
        f: fn(f64) -> f64,
        df: fn(f64) -> f64,
        antiderivative: Option<fn(f64) -> f64>,
        domain: Interval,
    ) -> Self {
        Self {
            name,
            f,
            df,
            antiderivative,
            domain,
        }
    }

    /// Registry name.
    pub fn name(&self) -> &'static str {
        self.name
    }

    /// f(t).
    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    /// f′(t).
    pub fn deriv(&self, t: f64) -> f64 {
        (self.df)(t)
    }

    /// F(t) with F′ = f, when registered.
    pub fn antiderivative(&self, t: f64) -> Option<f64> {
        self.antiderivative.map(|g| g(t))
    }

    /// Whether an antiderivative is registered.
    pub fn has_antiderivative(&self) -> bool {
        self.antiderivative.is_some()
    }

    /// Domain of definition (open).
    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Max deviation of the registered derivative (and antiderivative, when
    /// present) from central differences of step `h` over interior sample
    /// points.  Returns (derivative residual, antiderivative residual).
    pub fn calculus_residual(&self, samples: &[f64], h: f64) -> (f64, f64) {
        let mut dmax: f64 = 0.0;
        let mut fmax: f64 = 0.0;
        for &t in samples {
            if !(self.domain.contains(t - h) && self.domain.contains(t + h)) {
                continue;
            }
            let fd = (self.eval(t + h) - self.eval(t - h)) / (2.0 * h);
            dmax = dmax.max((fd - self.deriv(t)).abs());
            if let Some(g) = self.antiderivative {
                let fd_f = (g(t + h) - g(t - h)) / (2.0 * h);
                fmax = fmax.max((fd_f - self.eval(t)).abs());
            }
        }
        (dmax, fmax)
    }
}

fn f_exp(t: f64) -> f64 {
    t.exp()
}
fn f_log(t: f64) -> f64 {
    t.ln()
}
fn df_log(t: f64) -> f64 {
    1.0 / t
}
fn anti_log(t: f64) -> f64 {
    // t·ln t − t, extended by its limit 0 at t = 0 so quadrature comparisons
    // against Σ F(λ) − n·F(0) stay finite.
    if t == 0.0 {
        0.0
    } else {
        t * t.ln() - t
    }
}
fn f_square(t: f64) -> f64 {
    t * t
}
fn df_square(t: f64) -> f64 {
    2.0 * t
}
fn anti_square(t: f64) -> f64 {
    t * t * t / 3.0
}
fn f_cube(t: f64) -> f64 {
    t * t * t
}
fn df_cube(t: f64) -> f64 {
    3.0 * t * t
}
fn anti_cube(t: f64) -> f64 {
    t * t * t * t / 4.0
}
fn f_id(t: f64) -> f64 {
    t
}
fn df_id(_: f64) -> f64 {
    1.0
}
fn anti_id(t: f64) -> f64 {
    0.5 * t * t
}
fn f_cubic_mono(t: f64) -> f64 {
    t + t * t * t / 3.0
}
fn df_cubic_mono(t: f64) -> f64 {
    1.0 + t * t
}
fn anti_cubic_mono(t: f64) -> f64 {
    0.5 * t * t + t * t * t * t / 12.0
}
fn f_softplus(t: f64) -> f64 {
    // ln(1 + eᵗ), evaluated without overflow for large |t|.
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}
fn df_softplus(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// eᵗ on ℝ.
pub static EXP: ScalarFunction = ScalarFunction::new("exp", f_exp, f_exp, Some(f_exp), Interval::REAL);
/// ln t on (0, ∞).
pub static LOG: ScalarFunction =
    ScalarFunction::new("log", f_log, df_log, Some(anti_log), Interval::POSITIVE);
/// t² on ℝ.
pub static SQUARE: ScalarFunction =
    ScalarFunction::new("square", f_square, df_square, Some(anti_square), Interval::REAL);
/// t³ on ℝ.
pub static CUBE: ScalarFunction =
    ScalarFunction::new("cube", f_cube, df_cube, Some(anti_cube), Interval::REAL);
/// t on ℝ.
pub static IDENTITY: ScalarFunction =
    ScalarFunction::new("id", f_id, df_id, Some(anti_id), Interval::REAL);
/// t + t³/3 on ℝ — strictly increasing with strictly convex derivative.
pub static CUBIC_MONO: ScalarFunction = ScalarFunction::new(
    "cubic-mono",
    f_cubic_mono,
    df_cubic_mono,
    Some(anti_cubic_mono),
    Interval::REAL,
);
/// ln(1 + eᵗ) on ℝ — strictly increasing; no elementary antiderivative is
/// registered, which exercises the potential-free paths.
pub static SOFTPLUS: ScalarFunction =
    ScalarFunction::new("softplus", f_softplus, df_softplus, None, Interval::REAL);

static BUILTINS: [&ScalarFunction; 7] = [
    &EXP,
    &LOG,
    &SQUARE,
    &CUBE,
    &IDENTITY,
    &CUBIC_MONO,
    &SOFTPLUS,
];

/// Looks up a built-in scalar function by registry name.
pub fn builtin(name: &str) -> Option<&'static ScalarFunction> {
    BUILTINS.iter().copied().find(|f| f.name == name)
}

/// Names of all built-in scalar functions, in registry order.
pub fn builtin_names() -> Vec<&'static str> {
    BUILTINS.iter().map(|f| f.name).collect()
}

// ---------------------------------------------------------------------------
// Differencing configuration
// ---------------------------------------------------------------------------

/// Numerical knobs of the derivative constructions: the relative eigenvalue
/// gap below which divided differences switch to f′ at the midpoint, and the
/// Gauss–Legendre order used for the integral representations.
#[derive(Clone, Copy, Debug)]
pub struct DifferencingSpec {
    tau_eig: f64,
    quad_order: usize,
}

impl DifferencingSpec {
    /// Validating constructor.
    pub fn new(tau_eig: f64, quad_order: usize) -> Result<Self> {
        if !(tau_eig.is_finite() && tau_eig > 0.0) {
            return Err(Error::Configuration(format!(
                "tau_eig must be a positive finite number, got {tau_eig}"
            )));
        }
        if !(2..=200).contains(&quad_order) {
            return Err(Error::Configuration(format!(
                "quadrature order must lie in 2..=200, got {quad_order}"
            )));
        }
        Ok(Self {
            tau_eig,
            quad_order,
        })
    }

    /// Relative eigenvalue-gap threshold for the divided-difference switch.
    pub fn tau_eig(&self) -> f64 {
        self.tau_eig
    }

    /// Gauss–Legendre order for the integral representations.
    pub fn quad_order(&self) -> usize {
        self.quad_order
    }
}

impl Default for DifferencingSpec {
    fn default() -> Self {
        Self {
            tau_eig: 1e-8,
            quad_order: 32,
        }
    }
}

// ---------------------------------------------------------------------------
// Gauss–Legendre quadrature on [0, 1]
// ---------------------------------------------------------------------------

/// Legendre polynomial Pₙ and its derivative at x, by the three-term
/// recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 1..n {
        let jf = j as f64;
        let p2 = ((2.0 * jf + 1.0) * x * p1 - jf * p0) / (jf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss–Legendre nodes and weights on [0, 1], nodes ascending.  Computed by
/// Newton iteration from the Chebyshev initial guess; fully deterministic.
pub(crate) fn gauss_legendre_01(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th root counted from +1 downwards; map [−1,1] → [0,1]
        // and fill the mirror node so the rule is exactly symmetric.
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

// ---------------------------------------------------------------------------
// Operators on Sym(n)
// ---------------------------------------------------------------------------

/// A linear operator on Sym(n), stored as its m×m matrix in the orthonormal
/// basis of [`SymBasis`], m = n(n+1)/2.
///
/// The `asymmetry` recorded at construction is the relative Frobenius size
/// ‖M − Mᵀ‖ / max(1, ‖M‖) of the matrix the operator was built from — for
/// the symmetrizing constructor that is the pre-symmetrization value, which
/// is how self-adjointness of a derivative is measured.
#[derive(Clone, Debug)]
pub struct SymOperator {
    basis: SymBasis,
    mat: Vec<f64>,
    asymmetry: f64,
}

fn mat_asymmetry(m: usize, mat: &[f64]) -> f64 {
    let mut skew = 0.0;
    let mut norm = 0.0;
    for a in 0..m {
        for b in 0..m {
            let x = mat[a * m + b];
            norm += x * x;
            let d = 0.5 * (x - mat[b * m + a]);
            skew += d * d;
        }
    }
    2.0 * skew.sqrt() / 1.0_f64.max(norm.sqrt())
}

impl SymOperator {
    fn validate(basis: &SymBasis, mat: &[f64]) -> Result<()> {
        let m = basis.m();
        if mat.len() != m * m {
            return Err(Error::Shape(format!(
                "operator matrix must have {} entries for carrier dimension {}, got {}",
                m * m,
                basis.n(),
                mat.len()
            )));
        }
        if let Some(x) = mat.iter().find(|x| !x.is_finite()) {
            return Err(Error::Shape(format!("non-finite operator entry {x}")));
        }
        Ok(())
    }

    /// Wraps an operator matrix as-is, recording its asymmetry.
    pub fn from_raw(basis: SymBasis, mat: Vec<f64>) -> Result<Self> {
        Self::validate(&basis, &mat)?;
        let asymmetry = mat_asymmetry(basis.m(), &mat);
        Ok(Self {
            basis,
            mat,
            asymmetry,
        })
    }

    /// Records the asymmetry of `mat`, then stores the symmetrized matrix
    /// (M + Mᵀ)/2.  This is the constructor for derivative operators that
    /// are self-adjoint in exact arithmetic.
    pub fn from_raw_symmetrized(basis: SymBasis, mut mat: Vec<f64>) -> Result<Self> {
        Self::validate(&basis, &mat)?;
        let m = basis.m();
        let asymmetry = mat_asymmetry(m, &mat);
        for a in 0..m {
            for b in (a + 1)..m {
                let avg = 0.5 * (mat[a * m + b] + mat[b * m + a]);
                mat[a * m + b] = avg;
                mat[b * m + a] = avg;
            }
        }
        Ok(Self {
            basis,
            mat,
            asymmetry,
        })
    }

    /// Asymmetry of the matrix as stored right now — zero for an operator
    /// symmetrized on construction, unlike [`Self::asymmetry`], which keeps
    /// the construction-time measurement.
    pub fn matrix_asymmetry(&self) -> f64 {
        mat_asymmetry(self.basis.m(), &self.mat)
    }

    /// The identity operator on Sym(n).
    pub fn identity(basis: SymBasis) -> Self {
        let m = basis.m();
        let mut mat = vec![0.0; m * m];
        for a in 0..m {
            mat[a * m + a] = 1.0;
        }
        Self {
            basis,
            mat,
            asymmetry: 0.0,
        }
    }

    /// Carrier dimension n.
    pub fn n(&self) -> usize {
        self.basis.n()
    }

    /// Operator matrix side length m = n(n+1)/2.
    pub fn m(&self) -> usize {
        self.basis.m()
    }

    /// The basis in which the matrix is expressed.
    pub fn basis(&self) -> &SymBasis {
        &self.basis
    }

    /// Stored m×m matrix, row-major.
    pub fn mat(&self) -> &[f64] {
        &self.mat
    }

    /// Stored matrix as nested rows (JSON interchange shape).
    pub fn mat_rows(&self) -> Vec<Vec<f64>> {
        let m = self.m();
        (0..m)
            .map(|a| self.mat[a * m..(a + 1) * m].to_vec())
            .collect()
    }

    /// Relative asymmetry ‖M − Mᵀ‖/max(1, ‖M‖) of the construction input.
    pub fn asymmetry(&self) -> f64 {
        self.asymmetry
    }

    /// Frobenius norm of the stored matrix.
    pub fn frobenius(&self) -> f64 {
        self.mat.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Frobenius distance between the stored matrices of two operators.
    pub fn diff_norm(&self, rhs: &SymOperator) -> Result<f64> {
        if self.m() != rhs.m() {
            return Err(Error::Shape(format!(
                "operator size mismatch: {} vs {}",
                self.m(),
                rhs.m()
            )));
        }
        Ok(self
            .mat
            .iter()
            .zip(&rhs.mat)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt())
    }

    /// Applies the operator to a symmetric matrix.
    pub fn apply(&self, h: &SymMatrix) -> Result<SymMatrix> {
        if h.n() != self.n() {
            return Err(Error::Shape(format!(
                "operator on Sym({}) applied to a {}x{} matrix",
                self.n(),
                h.n(),
                h.n()
            )));
        }
        let m = self.m();
        let c = self.basis.coords(h);
        let mut out = vec![0.0; m];
        for a in 0..m {
            let mut s = 0.0;
            for b in 0..m {
                s += self.mat[a * m + b] * c[b];
            }
            out[a] = s;
        }
        Ok(self.basis.from_coords(&out))
    }

    /// Composition self ∘ rhs as raw matrix product; the asymmetry recorded
    /// on the result is that of the product (compositions of self-adjoint
    /// operators need not be self-adjoint).
    pub fn compose(&self, rhs: &SymOperator) -> Result<SymOperator> {
        let m = self.m();
        if m != rhs.m() {
            return Err(Error::Shape(format!(
                "operator size mismatch in composition: {} vs {}",
                m,
                rhs.m()
            )));
        }
        let mut mat = vec![0.0; m * m];
        for a in 0..m {
            for k in 0..m {
                let x = self.mat[a * m + k];
                if x == 0.0 {
                    continue;
                }
                for b in 0..m {
                    mat[a * m + b] += x * rhs.mat[k * m + b];
                }
            }
        }
        SymOperator::from_raw(self.basis.clone(), mat)
    }

    /// Eigenvalues (ascending) of the symmetric part (M + Mᵀ)/2.
    pub fn sym_eigenvalues(&self) -> Result<Vec<f64>> {
        let m = self.m();
        let mut sym = vec![0.0; m * m];
        for a in 0..m {
            for b in 0..m {
                sym[a * m + b] = 0.5 * (self.mat[a * m + b] + self.mat[b * m + a]);
            }
        }
        Ok(eig_slice(m, &sym)?.0)
    }

    /// Smallest eigenvalue of the symmetric part.
    pub fn lambda_min(&self) -> Result<f64> {
        Ok(self.sym_eigenvalues()?[0])
    }
}

// ---------------------------------------------------------------------------
// Primary lift and Fréchet derivative
// ---------------------------------------------------------------------------

fn check_spectrum(fnc: &ScalarFunction, lambda: &[f64]) -> Result<()> {
    let dom = fnc.domain();
    for &l in lambda {
        if !dom.contains(l) {
            return Err(Error::Domain {
                fn_name: fnc.name().to_string(),
                eigenvalue: l,
                lo: dom.lo,
                hi: dom.hi,
            });
        }
    }
    Ok(())
}

/// f(A) = Qᵀ·diag(f(λ))·Q.  Every eigenvalue must lie strictly inside the
/// domain of f.
pub fn apply_primary(fnc: &ScalarFunction, a: &SymMatrix) -> Result<SymMatrix> {
    let dec = a.eig()?;
    check_spectrum(fnc, dec.lambda())?;
    Ok(dec.map_spectrum(|t| fnc.eval(t)))
}

/// Divided-difference kernel Φᵢⱼ used by [`frechet`]: the slope of f between
/// λᵢ and λⱼ, switching to f′ at the midpoint once the gap falls below
/// `tau_eig · max(1, |λ|_max)`.
fn divided_differences(fnc: &ScalarFunction, lambda: &[f64], tau_eig: f64) -> Vec<f64> {
    let n = lambda.len();
    let scale = lambda.iter().fold(1.0_f64, |acc, &l| acc.max(l.abs()));
    let tau = tau_eig * scale;
    let fv: Vec<f64> = lambda.iter().map(|&l| fnc.eval(l)).collect();
    let mut phi = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            phi[i * n + j] = if (lambda[i] - lambda[j]).abs() <= tau {
                fnc.deriv(0.5 * (lambda[i] + lambda[j]))
            } else {
                (fv[i] - fv[j]) / (lambda[i] - lambda[j])
            };
        }
    }
    phi
}

/// Fréchet derivative Df[A] as an operator on Sym(n), from the
/// divided-difference representation
/// Df[A].H = Qᵀ·(Φ ∘ (Q·H·Qᵀ))·Q.
///
/// The stored matrix is symmetrized; [`SymOperator::asymmetry`] reports how
/// non-self-adjoint the raw construction was (rounding-level for a genuine
/// primary matrix function).
pub fn frechet(fnc: &ScalarFunction, a: &SymMatrix, spec: &DifferencingSpec) -> Result<SymOperator> {
    let n = a.n();
    let dec = a.eig()?;
    check_spectrum(fnc, dec.lambda())?;
    let phi = divided_differences(fnc, dec.lambda(), spec.tau_eig());
    let basis = SymBasis::new(n)?;
    let m = basis.m();
    let mut mat = vec![0.0; m * m];
    for b in 0..m {
        let mut k = dec.to_eigenbasis(basis.element(b));
        for (x, p) in k.iter_mut().zip(&phi) {
            *x *= p;
        }
        let image = dec.from_eigenbasis(&k);
        let col = basis.coords(&image);
        for a_idx in 0..m {
            mat[a_idx * m + b] = col[a_idx];
        }
    }
    SymOperator::from_raw_symmetrized(basis, mat)
}

/// Accumulates quadrature columns Σₖ wₖ·L(tₖ)·E_b·R(tₖ) into an operator
/// matrix, given the factor pair for each node.
fn integral_operator(
    n: usize,
    nodes: &[f64],
    weights: &[f64],
    factors: impl Fn(f64) -> Result<(GeneralMatrix, GeneralMatrix)>,
) -> Result<SymOperator> {
    let basis = SymBasis::new(n)?;
    let m = basis.m();
    let mut acc: Vec<GeneralMatrix> = (0..m)
        .map(|_| GeneralMatrix::identity(n).map(|i| i.scale(0.0)))
        .collect::<Result<_>>()?;
    for (&t, &w) in nodes.iter().zip(weights) {
        let (left, right) = factors(t)?;
        for b in 0..m {
            let term = left
                .matmul(&basis.element(b).to_general())
                .matmul(&right);
            acc[b] = acc[b].add(&term.scale(w));
        }
    }
    let mut mat = vec![0.0; m * m];
    for b in 0..m {
        let col = basis.coords(&acc[b].sym());
        for a_idx in 0..m {
            mat[a_idx * m + b] = col[a_idx];
        }
    }
    SymOperator::from_raw_symmetrized(basis, mat)
}

/// Derivative of the matrix exponential from its integral representation
/// Dexp[A].H = ∫₀¹ exp(sA)·H·exp((1−s)A) ds, by Gauss–Legendre quadrature.
///
/// The exponentials are evaluated by scaling-and-squaring, so this
/// construction shares nothing with the divided-difference route and serves
/// as an independent cross-check of [`frechet`] at the exp function.
pub fn frechet_exp_integral(a: &SymMatrix, spec: &DifferencingSpec) -> Result<SymOperator> {
    let (nodes, weights) = gauss_legendre_01(spec.quad_order());
    let g = a.to_general();
    integral_operator(a.n(), &nodes, &weights, |s| {
        Ok((g.scale(s).expm(), g.scale(1.0 - s).expm()))
    })
}

/// Derivative of the matrix logarithm from its integral representation
/// Dlog[A].H = ∫₀¹ (t(A−𝟙)+𝟙)⁻¹·H·(t(A−𝟙)+𝟙)⁻¹ dt, by Gauss–Legendre
/// quadrature; `a` must be positive definite so the resolvent exists on the
/// whole segment.
///
/// The resolvents are computed by Gauss–Jordan elimination — independent of
/// the divided-difference route.
pub fn frechet_log_integral(a: &SymMatrix, spec: &DifferencingSpec) -> Result<SymOperator> {
    let dec = a.eig()?;
    check_spectrum(&LOG, dec.lambda())?;
    let (nodes, weights) = gauss_legendre_01(spec.quad_order());
    let n = a.n();
    let eye = GeneralMatrix::identity(n)?;
    let shifted = a.to_general().sub(&eye);
    integral_operator(n, &nodes, &weights, |t| {
        let resolvent = shifted.scale(t).add(&eye).inverse()?;
        Ok((resolvent.clone(), resolvent))
    })
}

// ---------------------------------------------------------------------------
// Potentials
// ---------------------------------------------------------------------------

/// Potential value W(A) = Σᵢ F(λᵢ) for the registered antiderivative F of f.
/// Its gradient with respect to the Frobenius inner product is f(A).
pub fn potential_value(fnc: &ScalarFunction, a: &SymMatrix) -> Result<f64> {
    if !fnc.has_antiderivative() {
        return Err(Error::Configuration(format!(
            "`{}` has no registered antiderivative; its potential is unavailable",
            fnc.name()
        )));
    }
    let dec = a.eig()?;
    check_spectrum(fnc, dec.lambda())?;
    Ok(dec
        .lambda()
        .iter()
        .map(|&l| fnc.antiderivative(l).expect("checked above"))
        .sum())
}

/// Quadrature of the pseudo-potential line integral ∫₀¹ ⟨f(tA), A⟩ dt, which
/// equals Σᵢ F(λᵢ) − n·F(0) whenever F′ = f.  Every scaled eigenvalue tₖ·λᵢ
/// must lie in the domain of f at the quadrature nodes.
pub fn pseudo_potential(fnc: &ScalarFunction, a: &SymMatrix, spec: &DifferencingSpec) -> Result<f64> {
    let dec = a.eig()?;
    let (nodes, weights) = gauss_legendre_01(spec.quad_order());
    // t·λ sweeps a segment as t runs through the nodes; checking the extreme
    // nodes suffices because the domain is an interval.
    let t_min = nodes[0];
    let t_max = nodes[nodes.len() - 1];
    for &l in dec.lambda() {
        for &t in &[t_min, t_max] {
            if !fnc.domain().contains(t * l) {
                return Err(Error::Domain {
                    fn_name: fnc.name().to_string(),
                    eigenvalue: t * l,
                    lo: fnc.domain().lo,
                    hi: fnc.domain().hi,
                });
            }
        }
    }
    let mut acc = 0.0;
    for (&t, &w) in nodes.iter().zip(&weights) {
        let ft = dec.map_spectrum(|l| fnc.eval(t * l));
        acc += w * inner(&ft, a)?;
    }
    Ok(acc)
}

/// Outcome of [`potential_gradient_check`].
#[derive(Clone, Copy, Debug)]
pub struct GradientCheck {
    /// Finite-difference step used.
    pub step: f64,
    /// Max over basis directions of |central difference − ⟨f(A), E⟩|.
    pub max_deviation: f64,
    /// Basis index attaining the max.
    pub worst_direction: usize,
}

/// Compares the gradient of W(A) = Σ F(λᵢ) against f(A): for every basis
/// direction E the central difference (W(A+hE) − W(A−hE))/(2h) is matched
/// with ⟨f(A), E⟩.  Probing can leave the domain of f, in which case the
/// domain error is propagated.
pub fn potential_gradient_check(
    fnc: &ScalarFunction,
    a: &SymMatrix,
    step: f64,
) -> Result<GradientCheck> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::Configuration(format!(
            "finite-difference step must be positive, got {step}"
        )));
    }
    let grad = apply_primary(fnc, a)?;
    let basis = SymBasis::new(a.n())?;
    let mut max_deviation: f64 = 0.0;
    let mut worst = 0;
    for b in 0..basis.m() {
        let e = basis.element(b);
        let plus = potential_value(fnc, &a.add(&e.scale(step)))?;
        let minus = potential_value(fnc, &a.sub(&e.scale(step)))?;
        let fd = (plus - minus) / (2.0 * step);
        let exact = inner(&grad, e)?;
        let dev = (fd - exact).abs();
        if dev > max_deviation {
            max_deviation = dev;
            worst = b;
        }
    }
    Ok(GradientCheck {
        step,
        max_deviation,
        worst_direction: worst,
    })
}

// ---------------------------------------------------------------------------
// Finite-difference operators
// ---------------------------------------------------------------------------

/// Central-difference derivative operator of an arbitrary matrix map at `a`:
/// column b holds the coordinates of (map(A+hE_b) − map(A−hE_b))/(2h).
///
/// The matrix is stored raw — measuring its asymmetry is how a map is told
/// apart from a gradient field.
pub fn fd_operator<F>(map: F, a: &SymMatrix, step: f64) -> Result<SymOperator>
where
    F: Fn(&SymMatrix) -> Result<SymMatrix>,
{
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::Configuration(format!(
            "finite-difference step must be positive, got {step}"
        )));
    }
    let basis = SymBasis::new(a.n())?;
    let m = basis.m();
    let mut mat = vec![0.0; m * m];
    for b in 0..m {
        let e = basis.element(b);
        let plus = map(&a.add(&e.scale(step)))?;
        let minus = map(&a.sub(&e.scale(step)))?;
        let col = basis.coords(&plus.sub(&minus).scale(1.0 / (2.0 * step)));
        for a_idx in 0..m {
            mat[a_idx * m + b] = col[a_idx];
        }
    }
    SymOperator::from_raw(basis, mat)
}

// ---------------------------------------------------------------------------
// Determinant and eigenvalue derivative identities
// ---------------------------------------------------------------------------

fn validate_diag(a_diag: &[f64]) -> Result<()> {
    let n = a_diag.len();
    if !(crate::symcore::MIN_DIM..=crate::symcore::MAX_DIM).contains(&n) {
        return Err(Error::Shape(format!(
            "diagonal of length {n} outside supported dimensions"
        )));
    }
    if let Some(x) = a_diag.iter().find(|x| !x.is_finite()) {
        return Err(Error::Shape(format!("non-finite diagonal entry {x}")));
    }
    Ok(())
}

/// D det[diag(a)].𝟙 = Σᵢ Πⱼ≠ᵢ aⱼ — the closed form of the determinant
/// derivative at a diagonal state in the identity direction.
pub fn det_derivative_identity_direction(a_diag: &[f64]) -> Result<f64> {
    validate_diag(a_diag)?;
    let n = a_diag.len();
    let mut total = 0.0;
    for i in 0..n {
        let mut prod = 1.0;
        for (j, &a) in a_diag.iter().enumerate() {
            if j != i {
                prod *= a;
            }
        }
        total += prod;
    }
    Ok(total)
}

/// Central-difference estimate of D det[diag(a)].𝟙 — the independent route
/// against [`det_derivative_identity_direction`].
pub fn det_derivative_identity_fd(a_diag: &[f64], step: f64) -> Result<f64> {
    validate_diag(a_diag)?;
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::Configuration(format!(
            "finite-difference step must be positive, got {step}"
        )));
    }
    let a = SymMatrix::diag(a_diag)?;
    let eye = SymMatrix::identity(a.n())?;
    let plus = a.add(&eye.scale(step)).det();
    let minus = a.sub(&eye.scale(step)).det();
    Ok((plus - minus) / (2.0 * step))
}

/// Central-difference estimate of D det[diag(a)].H for an off-diagonal
/// symmetric direction H: vanishes as the step shrinks, because the
/// determinant has no first-order response to off-diagonal perturbations at
/// a diagonal state.
pub fn det_derivative_offdiag(a_diag: &[f64], h_off: &SymMatrix, step: f64) -> Result<f64> {
    validate_diag(a_diag)?;
    if h_off.n() != a_diag.len() {
        return Err(Error::Shape(format!(
            "direction dimension {} does not match diagonal length {}",
            h_off.n(),
            a_diag.len()
        )));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::Configuration(format!(
            "finite-difference step must be positive, got {step}"
        )));
    }
    let diag_size = (0..h_off.n())
        .map(|i| h_off.get(i, i).abs())
        .fold(0.0_f64, f64::max);
    if diag_size > 1e-14 * (1.0 + h_off.norm()) {
        return Err(Error::Precondition(format!(
            "direction must be purely off-diagonal; largest diagonal entry {diag_size:e}"
        )));
    }
    let a = SymMatrix::diag(a_diag)?;
    let plus = a.add(&h_off.scale(step)).det();
    let minus = a.sub(&h_off.scale(step)).det();
    Ok((plus - minus) / (2.0 * step))
}

/// Eigenvalue shifts λ(A + tH) − λ(A) for diagonal A with simple spectrum
/// and purely off-diagonal symmetric H, both spectra in ascending order.
/// The shifts are O(t²): simple eigenvalues have no first-order response to
/// off-diagonal perturbations.
pub fn eigenvalue_offdiag_shift(
    a_diag: &[f64],
    h_off: &SymMatrix,
    t: f64,
    spec: &DifferencingSpec,
) -> Result<Vec<f64>> {
    validate_diag(a_diag)?;
    if h_off.n() != a_diag.len() {
        return Err(Error::Shape(format!(
            "direction dimension {} does not match diagonal length {}",
            h_off.n(),
            a_diag.len()
        )));
    }
    if !t.is_finite() {
        return Err(Error::Configuration(format!(
            "perturbation size must be finite, got {t}"
        )));
    }
    let diag_size = (0..h_off.n())
        .map(|i| h_off.get(i, i).abs())
        .fold(0.0_f64, f64::max);
    if diag_size > 1e-14 * (1.0 + h_off.norm()) {
        return Err(Error::Precondition(format!(
            "direction must be purely off-diagonal; largest diagonal entry {diag_size:e}"
        )));
    }
    let scale = a_diag.iter().fold(1.0_f64, |acc, &x| acc.max(x.abs()));
    let mut gap = f64::INFINITY;
    for i in 0..a_diag.len() {
        for j in (i + 1)..a_diag.len() {
            gap = gap.min((a_diag[i] - a_diag[j]).abs());
        }
    }
    if gap <= 10.0 * spec.tau_eig() * scale {
        return Err(Error::Precondition(format!(
            "eigenvalue gap {gap:e} too small against threshold {:e}; the spectrum must be simple",
            10.0 * spec.tau_eig() * scale
        )));
    }
    let mut base: Vec<f64> = a_diag.to_vec();
    base.sort_by(|x, y| x.partial_cmp(y).expect("finite entries"));
    let perturbed = SymMatrix::diag(a_diag)?.add(&h_off.scale(t));
    let dec = perturbed.eig()?;
    Ok(dec
        .lambda()
        .iter()
        .zip(&base)
        .map(|(&l, &b)| l - b)
        .collect())
}

// ---------------------------------------------------------------------------
// Isotropy
// ---------------------------------------------------------------------------

/// Outcome of [`isotropy_conjugation_check`].
#[derive(Clone, Copy, Debug)]
pub struct IsotropyReport {
    /// ‖f(QᵀAQ) − Qᵀ·f(A)·Q‖.
    pub primary_deviation: f64,
    /// |W(QᵀAQ) − W(A)| when a potential is registered.
    pub potential_deviation: Option<f64>,
    /// The larger of the two deviations.
    pub max_deviation: f64,
}

/// Verifies that the primary lift commutes with orthogonal conjugation,
/// f(QᵀAQ) = Qᵀ·f(A)·Q, and that the potential (when registered) is
/// invariant, W(QᵀAQ) = W(A).  The two sides go through independent spectral
/// decompositions.  `q` must be orthogonal to within 1e-10.
pub fn isotropy_conjugation_check(
    fnc: &ScalarFunction,
    a: &SymMatrix,
    q: &GeneralMatrix,
) -> Result<IsotropyReport> {
    if q.n() != a.n() {
        return Err(Error::Shape(format!(
            "conjugating matrix dimension {} does not match argument dimension {}",
            q.n(),
            a.n()
        )));
    }
    let ortho_residual = q
        .transpose()
        .matmul(q)
        .sub(&GeneralMatrix::identity(q.n())?)
        .norm();
    if ortho_residual > 1e-10 {
        return Err(Error::Precondition(format!(
            "conjugating matrix is not orthogonal: ‖QᵀQ − 𝟙‖ = {ortho_residual:e}"
        )));
    }
    let conjugated = crate::symcore::conjugate(q, a);
    let lhs = apply_primary(fnc, &conjugated)?;
    let rhs = crate::symcore::conjugate(q, &apply_primary(fnc, a)?);
    let primary_deviation = lhs.sub(&rhs).norm();
    let potential_deviation = if fnc.has_antiderivative() {
        Some((potential_value(fnc, &conjugated)? - potential_value(fnc, a)?).abs())
    } else {
        None
    };
    let max_deviation = potential_deviation
        .unwrap_or(0.0)
        .max(primary_deviation);
    Ok(IsotropyReport {
        primary_deviation,
        potential_deviation,
        max_deviation,
    })
}
