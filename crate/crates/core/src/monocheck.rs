//! Randomized monotonicity diagnostics for maps of symmetric matrices.
//!
//! Four notions of monotonicity are checked by seeded sampling:
//!
//! * inner-product monotone (`h-mon`): ⟨f(B)−f(A), B−A⟩ > 0 for A ≠ B,
//! * operator monotone (`o-mon`): B−A positive definite ⇒ f(B)−f(A)
//!   positive semidefinite,
//! * scalar monotone (`s-mon`): the inducing scalar function is increasing
//!   (applicable to primary matrix functions only),
//! * positive-increment monotone (`p-mon`): ⟨f(A+H)−f(A), H⟩ > 0 for
//!   positive definite H.
//!
//! For primary matrix functions the scalar, inner-product and
//! positive-increment notions are equivalent and are implied by operator
//! monotonicity; no other implication holds between the four.
//! [`implication_matrix`] samples all applicable notions under a shared seed
//! and [`ImplicationPattern::consistent_with_theory`] checks the observed
//! pattern against those implications.  Sampling is one-sided: a violation
//! is a replayable certificate, a clean pass is evidence, not proof.
//!
//! Margins are normalized so verdicts are scale-free: the inner-product and
//! increment pairings are divided by ‖B−A‖² resp. ‖H‖², the operator margin
//! λ_min(f(B)−f(A)) by ‖B−A‖.  Margins inside the band ±[`MARGIN_BAND`]
//! (scaled) count as boundary cases, reported separately from violations,
//! so both the strict and the non-strict reading of each notion can be
//! evaluated from one report.
//!
//! The module also provides the λ_min trace of an operator field along a
//! matrix segment ([`lambda_min_along_curve`]) — positivity of the smallest
//! eigenvalue of a derivative field along a path is the local criterion
//! behind monotonicity on convex domains — and a deterministic catalog of
//! closed-form counterexample values ([`counterexample_catalog`]).

use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::primfn::{self, apply_primary, ScalarFunction, SymOperator};
use crate::sample;
use crate::symcore::{inner, GeneralMatrix, SymMatrix};

/// Half-width of the boundary band: normalized margins within
/// ±band·max(1, scale) are neither violations nor clean passes.
pub const MARGIN_BAND: f64 = 1e-10;

/// Band used to classify the sign of λ_min along a curve; values within
/// ±[`SIGN_BAND`] count as "operator near-singular".
pub const SIGN_BAND: f64 = 1e-9;

/// Witnesses stored per report are capped to keep artifacts small; the
/// violation count still reflects every sample.
pub const MAX_WITNESSES: usize = 16;

const SAMPLE_RETRIES: usize = 64;

// ---------------------------------------------------------------------------
// Notions, domains, maps
// ---------------------------------------------------------------------------

/// The four monotonicity notions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Notion {
    /// ⟨f(B)−f(A), B−A⟩ > 0.
    HMon,
    /// B−A PD ⇒ f(B)−f(A) PSD.
    OMon,
    /// The inducing scalar function is increasing.
    SMon,
    /// ⟨f(A+H)−f(A), H⟩ > 0 for PD H.
    PMon,
}

impl Notion {
    /// Short display label.
    pub fn label(self) -> &'static str {
        match self {
            Notion::HMon => "H",
            Notion::OMon => "O",
            Notion::SMon => "S",
            Notion::PMon => "P",
        }
    }
}

/// Where arguments are sampled from.
#[derive(Clone, Debug, PartialEq)]
pub enum SampleDomain {
    /// All of Sym(n): Gaussian entries.
    Sym,
    /// Positive definite matrices: exp of a Gaussian symmetric matrix.
    PSym,
    /// Matrices with spectrum inside the open interval (lo, hi).
    SpectrumIn { lo: f64, hi: f64 },
}

impl SampleDomain {
    /// The scalar interval matching the matrix domain (spectra live here).
    pub fn interval(&self) -> primfn::Interval {
        match self {
            SampleDomain::Sym => primfn::Interval::REAL,
            SampleDomain::PSym => primfn::Interval::POSITIVE,
            SampleDomain::SpectrumIn { lo, hi } => primfn::Interval { lo: *lo, hi: *hi },
        }
    }
}

/// Sampling plan of a randomized check.
#[derive(Clone, Debug)]
pub struct SampleSpec {
    seed: u64,
    count: usize,
    scale: f64,
    domain: SampleDomain,
}

impl SampleSpec {
    /// Validating constructor: `count ≥ 1`, `scale > 0`.
    pub fn new(seed: u64, count: usize, scale: f64, domain: SampleDomain) -> Result<Self> {
        if count == 0 {
            return Err(Error::Configuration(
                "sample count must be at least 1".to_string(),
            ));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::Configuration(format!(
                "sample scale must be positive and finite, got {scale}"
            )));
        }
        if let SampleDomain::SpectrumIn { lo, hi } = domain {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Configuration(format!(
                    "spectrum interval must satisfy lo < hi with finite bounds, got ({lo}, {hi})"
                )));
            }
        }
        Ok(Self {
            seed,
            count,
            scale,
            domain,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn count(&self) -> usize {
        self.count
    }
    pub fn scale(&self) -> f64 {
        self.scale
    }
    pub fn domain(&self) -> &SampleDomain {
        &self.domain
    }

    fn band(&self) -> f64 {
        MARGIN_BAND * 1.0_f64.max(self.scale)
    }
}

/// How a map acts: as the lift of a scalar function, or as an arbitrary
/// symmetric-valued map.
#[derive(Clone)]
pub enum MapKind {
    Primary(&'static ScalarFunction),
    General(Arc<dyn Fn(&SymMatrix) -> Result<SymMatrix> + Send + Sync>),
}

/// A named map of symmetric matrices with its natural sampling domain.
#[derive(Clone)]
pub struct MatrixMap {
    name: String,
    domain: SampleDomain,
    kind: MapKind,
}

impl std::fmt::Debug for MatrixMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MatrixMap")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field(
                "kind",
                &match self.kind {
                    MapKind::Primary(_) => "primary",
                    MapKind::General(_) => "general",
                },
            )
            .finish()
    }
}

impl MatrixMap {
    /// The lift of a scalar function, sampled on `domain`.
    pub fn primary(fnc: &'static ScalarFunction, domain: SampleDomain) -> Self {
        Self {
            name: fnc.name().to_string(),
            domain,
            kind: MapKind::Primary(fnc),
        }
    }

    /// An arbitrary symmetric-valued map.
    pub fn general(
        name: &str,
        domain: SampleDomain,
        eval: impl Fn(&SymMatrix) -> Result<SymMatrix> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.to_string(),
            domain,
            kind: MapKind::General(Arc::new(eval)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &SampleDomain {
        &self.domain
    }

    /// The inducing scalar function, when the map is a primary lift.
    pub fn scalar(&self) -> Option<&'static ScalarFunction> {
        match self.kind {
            MapKind::Primary(f) => Some(f),
            MapKind::General(_) => None,
        }
    }

    /// Evaluates the map.
    pub fn eval(&self, a: &SymMatrix) -> Result<SymMatrix> {
        match &self.kind {
            MapKind::Primary(f) => apply_primary(f, a),
            MapKind::General(g) => g(a),
        }
    }
}

/// The registered map suite: every built-in scalar function on its natural
/// domain, plus `det-identity`, the map C ↦ det(C)·𝟙 (operator monotone on
/// the positive cone but not a gradient and not inner-product monotone).
pub fn builtin_map(name: &str) -> Option<MatrixMap> {
    match name {
        "exp" => Some(MatrixMap::primary(&primfn::EXP, SampleDomain::Sym)),
        "log" => Some(MatrixMap::primary(&primfn::LOG, SampleDomain::PSym)),
        "square" => Some(MatrixMap::primary(&primfn::SQUARE, SampleDomain::PSym)),
        "cube" => Some(MatrixMap::primary(&primfn::CUBE, SampleDomain::Sym)),
        "id" => Some(MatrixMap::primary(&primfn::IDENTITY, SampleDomain::Sym)),
        "cubic-mono" => Some(MatrixMap::primary(&primfn::CUBIC_MONO, SampleDomain::Sym)),
        "softplus" => Some(MatrixMap::primary(&primfn::SOFTPLUS, SampleDomain::Sym)),
        "det-identity" => Some(MatrixMap::general(
            "det-identity",
            SampleDomain::PSym,
            |c: &SymMatrix| {
                let eye = SymMatrix::identity(c.n())?;
                Ok(eye.scale(c.det()))
            },
        )),
        _ => None,
    }
}

/// Names accepted by [`builtin_map`], in registry order.
pub fn builtin_map_names() -> Vec<&'static str> {
    vec![
        "exp",
        "log",
        "square",
        "cube",
        "id",
        "cubic-mono",
        "softplus",
        "det-identity",
    ]
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// A recorded violation: the argument pair and its normalized margin.
/// Matrices are stored as dense rows at full precision so witnesses replay
/// exactly.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub a: Vec<Vec<f64>>,
    pub b_or_h: Vec<Vec<f64>>,
    pub margin: f64,
}

impl Witness {
    fn from_pair(a: &SymMatrix, b_or_h: &SymMatrix, margin: f64) -> Self {
        Self {
            a: a.to_rows(),
            b_or_h: b_or_h.to_rows(),
            margin,
        }
    }

    fn from_scalars(a: f64, b: f64, margin: f64) -> Self {
        Self {
            a: vec![vec![a]],
            b_or_h: vec![vec![b]],
            margin,
        }
    }
}

/// Aggregated outcome of one randomized check.
#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityReport {
    pub notion: Notion,
    pub map: String,
    pub n: usize,
    pub samples: usize,
    pub violations: usize,
    pub worst_margin: f64,
    pub boundary_count: usize,
    pub seed: u64,
    pub witnesses: Vec<Witness>,
}

impl MonotonicityReport {
    /// No violations recorded (boundary cases do not fail a check).
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

struct MarginTally {
    band: f64,
    violations: usize,
    boundary: usize,
    worst: f64,
    witnesses: Vec<Witness>,
}

impl MarginTally {
    fn new(band: f64) -> Self {
        Self {
            band,
            violations: 0,
            boundary: 0,
            worst: f64::INFINITY,
            witnesses: Vec::new(),
        }
    }

    fn record(&mut self, margin: f64, witness: impl FnOnce(f64) -> Witness) {
        self.worst = self.worst.min(margin);
        if margin < -self.band {
            self.violations += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness(margin));
            }
        } else if margin <= self.band {
            self.boundary += 1;
        }
    }

    fn into_report(
        self,
        notion: Notion,
        map: &str,
        n: usize,
        samples: usize,
        seed: u64,
    ) -> MonotonicityReport {
        MonotonicityReport {
            notion,
            map: map.to_string(),
            n,
            samples,
            violations: self.violations,
            worst_margin: self.worst,
            boundary_count: self.boundary,
            seed,
            witnesses: self.witnesses,
        }
    }
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

fn draw_state(rng: &mut ChaCha8Rng, n: usize, scale: f64, domain: &SampleDomain) -> Result<SymMatrix> {
    match domain {
        SampleDomain::Sym => Ok(sample::gaussian_sym(rng, n, scale)),
        SampleDomain::PSym => Ok(sample::positive_sym(rng, n, scale)),
        SampleDomain::SpectrumIn { lo, hi } => {
            // Squash a Gaussian spectrum smoothly into the open interval,
            // staying clear of the endpoints.
            let s = sample::gaussian_sym(rng, n, scale);
            let dec = s.eig()?;
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            Ok(dec.map_spectrum(|l| mid + 0.95 * half * l.tanh()))
        }
    }
}

fn spectrum_inside(a: &SymMatrix, domain: &SampleDomain) -> Result<bool> {
    let iv = domain.interval();
    if iv == primfn::Interval::REAL {
        return Ok(true);
    }
    let dec = a.eig()?;
    Ok(dec.lambda().iter().all(|&l| iv.contains(l)))
}

/// Draws a distinct pair (A, B) in the domain.
fn draw_pair(
    rng: &mut ChaCha8Rng,
    n: usize,
    scale: f64,
    domain: &SampleDomain,
) -> Result<(SymMatrix, SymMatrix)> {
    let a = draw_state(rng, n, scale, domain)?;
    for _ in 0..SAMPLE_RETRIES {
        let b = draw_state(rng, n, scale, domain)?;
        if b.sub(&a).norm() > 1e-12 * (1.0 + a.norm()) {
            return Ok((a, b));
        }
    }
    Err(Error::Numerical(format!(
        "could not sample a distinct pair after {SAMPLE_RETRIES} attempts"
    )))
}

/// Draws a base point A and a PD increment keeping A + P inside the domain.
fn draw_increment_pair(
    rng: &mut ChaCha8Rng,
    n: usize,
    scale: f64,
    domain: &SampleDomain,
) -> Result<(SymMatrix, SymMatrix)> {
    let a = draw_state(rng, n, scale, domain)?;
    let p0 = sample::positive_increment(rng, n, scale);
    // Sym and PSym are closed under adding a PD increment; a bounded
    // spectrum interval may need the increment shrunk.
    let mut p = p0;
    for _ in 0..SAMPLE_RETRIES {
        if spectrum_inside(&a.add(&p), domain)? {
            return Ok((a, p));
        }
        p = p.scale(0.5);
    }
    Err(Error::Numerical(format!(
        "could not fit a positive increment into the domain after {SAMPLE_RETRIES} halvings"
    )))
}

// ---------------------------------------------------------------------------
// Margins
// ---------------------------------------------------------------------------

/// Normalized inner-product margin ⟨f(B)−f(A), B−A⟩ / ‖B−A‖².
pub fn hmon_margin(map: &MatrixMap, a: &SymMatrix, b: &SymMatrix) -> Result<f64> {
    let delta = b.sub(a);
    let d2 = delta.norm().powi(2);
    if d2 == 0.0 {
        return Err(Error::Precondition(
            "inner-product margin needs distinct arguments".to_string(),
        ));
    }
    let df = map.eval(b)?.sub(&map.eval(a)?);
    Ok(inner(&df, &delta)? / d2)
}

/// Normalized operator margin λ_min(f(B)−f(A)) / ‖B−A‖ for B = A + P.
pub fn omon_margin(map: &MatrixMap, a: &SymMatrix, b: &SymMatrix) -> Result<f64> {
    let p = b.sub(a);
    let pn = p.norm();
    if pn == 0.0 {
        return Err(Error::Precondition(
            "operator margin needs a nonzero increment".to_string(),
        ));
    }
    let df = map.eval(b)?.sub(&map.eval(a)?);
    Ok(df.eig()?.lambda()[0] / pn)
}

/// Normalized increment margin ⟨f(A+H)−f(A), H⟩ / ‖H‖².
pub fn pmon_margin(map: &MatrixMap, a: &SymMatrix, h: &SymMatrix) -> Result<f64> {
    let hn2 = h.norm().powi(2);
    if hn2 == 0.0 {
        return Err(Error::Precondition(
            "increment margin needs a nonzero increment".to_string(),
        ));
    }
    let df = map.eval(&a.add(h))?.sub(&map.eval(a)?);
    Ok(inner(&df, h)? / hn2)
}

// ---------------------------------------------------------------------------
// Checkers
// ---------------------------------------------------------------------------

/// Inner-product monotonicity check over seeded sample pairs drawn by
/// `draw`: per index, `draw` must deterministically produce the pair so
/// reports are replayable.  The margin is ⟨eval(B)−eval(A), B−A⟩/‖B−A‖².
pub fn check_hmon_with<F, G>(
    map_name: &str,
    eval: F,
    n: usize,
    spec: &SampleSpec,
    draw: G,
) -> Result<MonotonicityReport>
where
    F: Fn(&SymMatrix) -> Result<SymMatrix>,
    G: Fn(u64) -> Result<(SymMatrix, SymMatrix)>,
{
    let mut tally = MarginTally::new(spec.band());
    for idx in 0..spec.count() as u64 {
        let (a, b) = draw(idx)?;
        let delta = b.sub(&a);
        let d2 = delta.norm().powi(2);
        if d2 == 0.0 {
            return Err(Error::Precondition(format!(
                "sample {idx}: coincident pair in inner-product check"
            )));
        }
        let df = eval(&b)?.sub(&eval(&a)?);
        let margin = inner(&df, &delta)? / d2;
        tally.record(margin, |m| Witness::from_pair(&a, &b, m));
    }
    Ok(tally.into_report(Notion::HMon, map_name, n, spec.count(), spec.seed()))
}

/// Inner-product monotonicity of `map` over pairs from the plan's domain.
pub fn check_hmon(map: &MatrixMap, n: usize, spec: &SampleSpec) -> Result<MonotonicityReport> {
    check_hmon_with(
        map.name(),
        |x| map.eval(x),
        n,
        spec,
        |idx| {
            let mut rng = sample::substream(spec.seed(), idx);
            draw_pair(&mut rng, n, spec.scale(), spec.domain())
        },
    )
}

/// Operator monotonicity over pairs B = A + P with P positive definite;
/// margin λ_min(f(B)−f(A))/‖P‖.
pub fn check_omon(map: &MatrixMap, n: usize, spec: &SampleSpec) -> Result<MonotonicityReport> {
    let mut tally = MarginTally::new(spec.band());
    for idx in 0..spec.count() as u64 {
        let mut rng = sample::substream(spec.seed(), idx);
        let (a, p) = draw_increment_pair(&mut rng, n, spec.scale(), spec.domain())?;
        let b = a.add(&p);
        let df = map.eval(&b)?.sub(&map.eval(&a)?);
        let margin = df.eig()?.lambda()[0] / p.norm();
        tally.record(margin, |m| Witness::from_pair(&a, &b, m));
    }
    Ok(tally.into_report(Notion::OMon, map.name(), n, spec.count(), spec.seed()))
}

/// Positive-increment monotonicity: margin ⟨f(A+H)−f(A), H⟩/‖H‖² over PD
/// increments H.
pub fn check_pmon(map: &MatrixMap, n: usize, spec: &SampleSpec) -> Result<MonotonicityReport> {
    let mut tally = MarginTally::new(spec.band());
    for idx in 0..spec.count() as u64 {
        let mut rng = sample::substream(spec.seed(), idx);
        let (a, h) = draw_increment_pair(&mut rng, n, spec.scale(), spec.domain())?;
        let df = map.eval(&a.add(&h))?.sub(&map.eval(&a)?);
        let margin = inner(&df, &h)? / h.norm().powi(2);
        tally.record(margin, |m| Witness::from_pair(&a, &h, m));
    }
    Ok(tally.into_report(Notion::PMon, map.name(), n, spec.count(), spec.seed()))
}

/// A deterministic grid in the interval for scalar monotonicity checks:
/// uniform inside bounded intervals, a ±3 window squashed into unbounded
/// ones.
pub fn scalar_grid(domain: &SampleDomain, count: usize) -> Vec<f64> {
    let iv = domain.interval();
    let count = count.max(2);
    (0..count)
        .map(|k| {
            let u = -3.0 + 6.0 * k as f64 / (count - 1) as f64;
            match (iv.lo.is_finite(), iv.hi.is_finite()) {
                (false, false) => u,
                (true, false) => iv.lo + (u + 3.0).exp() * 1e-1,
                (false, true) => iv.hi - (3.0 - u).exp() * 1e-1,
                (true, true) => {
                    let mid = 0.5 * (iv.lo + iv.hi);
                    let half = 0.5 * (iv.hi - iv.lo);
                    mid + 0.95 * half * (u / 3.0)
                }
            }
        })
        .collect()
}

/// Scalar monotonicity on a sample grid: slopes (f(b)−f(a))/(b−a) over
/// consecutive sorted points must be positive.  Points outside the domain
/// of f are dropped.
pub fn check_smon(fnc: &ScalarFunction, samples: &[f64]) -> MonotonicityReport {
    let mut pts: Vec<f64> = samples
        .iter()
        .copied()
        .filter(|&t| t.is_finite() && fnc.domain().contains(t))
        .collect();
    pts.sort_by(|x, y| x.partial_cmp(y).expect("finite samples"));
    pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * (1.0 + y.abs()));
    let mut tally = MarginTally::new(MARGIN_BAND);
    let mut pairs = 0usize;
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let margin = (fnc.eval(b) - fnc.eval(a)) / (b - a);
        tally.record(margin, |m| Witness::from_scalars(a, b, m));
        pairs += 1;
    }
    tally.into_report(Notion::SMon, fnc.name(), 1, pairs, 0)
}

// ---------------------------------------------------------------------------
// Implication pattern
// ---------------------------------------------------------------------------

/// The verdict pattern of all applicable notions for one map under a shared
/// seed.
#[derive(Clone, Debug, Serialize)]
pub struct ImplicationPattern {
    pub map: String,
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    pub hmon: MonotonicityReport,
    pub omon: MonotonicityReport,
    pub pmon: MonotonicityReport,
    pub smon: Option<MonotonicityReport>,
}

impl ImplicationPattern {
    pub fn hmon_pass(&self) -> bool {
        self.hmon.passed()
    }
    pub fn omon_pass(&self) -> bool {
        self.omon.passed()
    }
    pub fn pmon_pass(&self) -> bool {
        self.pmon.passed()
    }
    /// None when the map is not a primary lift.
    pub fn smon_pass(&self) -> Option<bool> {
        self.smon.as_ref().map(MonotonicityReport::passed)
    }

    /// Compact display such as `H✓ S✓ P✓ O✗` (S− when not applicable).
    pub fn pattern_string(&self) -> String {
        let tick = |b: bool| if b { "✓" } else { "✗" };
        let s = match self.smon_pass() {
            Some(b) => tick(b),
            None => "−",
        };
        format!(
            "H{} S{} P{} O{}",
            tick(self.hmon_pass()),
            s,
            tick(self.pmon_pass()),
            tick(self.omon_pass()),
        )
    }

    /// Checks the observed pattern against the only implications that hold:
    /// operator ⇒ increment, and for primary lifts the scalar,
    /// inner-product and increment verdicts coincide.
    pub fn consistent_with_theory(&self) -> bool {
        if self.omon_pass() && !self.pmon_pass() {
            return false;
        }
        if let Some(s) = self.smon_pass() {
            if s != self.hmon_pass() || self.hmon_pass() != self.pmon_pass() {
                return false;
            }
        }
        true
    }
}

/// Runs every applicable checker for one map under a shared seed.
pub fn implication_matrix(map: &MatrixMap, n: usize, spec: &SampleSpec) -> Result<ImplicationPattern> {
    let hmon = check_hmon(map, n, spec)?;
    let omon = check_omon(map, n, spec)?;
    let pmon = check_pmon(map, n, spec)?;
    let smon = map
        .scalar()
        .map(|f| check_smon(f, &scalar_grid(spec.domain(), 128)));
    Ok(ImplicationPattern {
        map: map.name().to_string(),
        n,
        seed: spec.seed(),
        samples: spec.count(),
        hmon,
        omon,
        pmon,
        smon,
    })
}

// ---------------------------------------------------------------------------
// λ_min along a segment
// ---------------------------------------------------------------------------

/// One sample of [`lambda_min_along_curve`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CurvePoint {
    pub t: f64,
    pub lambda_min: f64,
}

/// λ_min trace of an operator field along a straight matrix segment.
#[derive(Clone, Debug, Serialize)]
pub struct CurveTrace {
    pub points: Vec<CurvePoint>,
    /// Number of consecutive sample pairs whose λ_min sign class (negative /
    /// within ±[`SIGN_BAND`] / positive) differs — every 0-crossing and
    /// every entry into the near-singular band is counted.
    pub sign_changes: usize,
    pub min_lambda: f64,
    pub min_abs_lambda: f64,
}

fn sign_class(x: f64) -> i8 {
    if x > SIGN_BAND {
        1
    } else if x < -SIGN_BAND {
        -1
    } else {
        0
    }
}

/// Evaluates λ_min of the symmetric part of `field` at `steps` equispaced
/// points of the segment A₀ + t(A₁−A₀), t ∈ [0,1].  A field error at some t
/// is reported as a curve exit at that parameter.
pub fn lambda_min_along_curve<F>(
    field: F,
    a0: &SymMatrix,
    a1: &SymMatrix,
    steps: usize,
) -> Result<CurveTrace>
where
    F: Fn(&SymMatrix) -> Result<SymOperator>,
{
    if a0.n() != a1.n() {
        return Err(Error::Shape(format!(
            "segment endpoints have different dimensions {} and {}",
            a0.n(),
            a1.n()
        )));
    }
    if steps < 2 {
        return Err(Error::Configuration(format!(
            "a segment trace needs at least 2 steps, got {steps}"
        )));
    }
    let dir = a1.sub(a0);
    let mut points = Vec::with_capacity(steps);
    for k in 0..steps {
        let t = k as f64 / (steps - 1) as f64;
        let at = a0.add(&dir.scale(t));
        let op = field(&at).map_err(|e| Error::CurveExit {
            t,
            reason: e.to_string(),
        })?;
        let lambda_min = op.lambda_min().map_err(|e| Error::CurveExit {
            t,
            reason: e.to_string(),
        })?;
        points.push(CurvePoint { t, lambda_min });
    }
    let sign_changes = points
        .windows(2)
        .filter(|w| sign_class(w[0].lambda_min) != sign_class(w[1].lambda_min))
        .count();
    let min_lambda = points
        .iter()
        .map(|p| p.lambda_min)
        .fold(f64::INFINITY, f64::min);
    let min_abs_lambda = points
        .iter()
        .map(|p| p.lambda_min.abs())
        .fold(f64::INFINITY, f64::min);
    Ok(CurveTrace {
        points,
        sign_changes,
        min_lambda,
        min_abs_lambda,
    })
}

// ---------------------------------------------------------------------------
// Counterexample catalog
// ---------------------------------------------------------------------------

/// One deterministic golden computation: a named quantity recomputed from
/// scratch against its closed-form value.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub expected: f64,
    pub computed: f64,
    pub abs_err: f64,
    pub tol: f64,
}

impl CatalogEntry {
    pub fn new(name: impl Into<String>, expected: f64, computed: f64, tol: f64) -> Self {
        let name = name.into();
        Self {
            name,
            expected,
            computed,
            abs_err: (computed - expected).abs(),
            tol,
        }
    }

    pub fn passed(&self) -> bool {
        self.abs_err <= self.tol
    }
}

fn skew_exp_pairing(alpha: f64) -> f64 {
    // K = α·[[0,1],[−1,0]] is skew; the pairing ⟨exp(K) − exp(−K), 2K⟩
    // equals 8·α·sin α, negative for example at α = 3π/2 — the exponential
    // is not inner-product monotone beyond the symmetric world.
    let k = GeneralMatrix::from_rows(&[vec![0.0, alpha], vec![-alpha, 0.0]])
        .expect("2x2 literal");
    let diff = k.expm().sub(&k.scale(-1.0).expm());
    inner(&diff, &k.scale(2.0)).expect("matched dimensions")
}

fn det_identity_pairing(a: &SymMatrix, b: &SymMatrix) -> f64 {
    let g = |c: &SymMatrix| {
        SymMatrix::identity(c.n())
            .expect("supported dimension")
            .scale(c.det())
    };
    inner(&g(b).sub(&g(a)), &b.sub(a)).expect("matched dimensions")
}

/// Deterministic catalog of closed-form counterexample values: the skew
/// exponential pairing 8α·sin α (negative at α = 3π/2), the det·𝟙
/// inner-product violation of value −1 in dimensions 2 and 4, the
/// asymmetric pairing of the det·𝟙 derivative (a map with no potential),
/// and the shear path whose product with diag(1, 1/8) stays invertible
/// while its symmetric part loses definiteness.
pub fn counterexample_catalog() -> Vec<CatalogEntry> {
    let mut entries = Vec::new();

    let alpha_star = 1.5 * std::f64::consts::PI;
    entries.push(CatalogEntry::new(
        "skew-exp-pairing[3pi/2]",
        -12.0 * std::f64::consts::PI,
        skew_exp_pairing(alpha_star),
        1e-9,
    ));
    for k in 0..11 {
        let alpha = alpha_star * k as f64 / 10.0;
        entries.push(CatalogEntry::new(
            format!("skew-exp-grid-{k:02}"),
            8.0 * alpha * alpha.sin(),
            skew_exp_pairing(alpha),
            1e-9,
        ));
    }

    let a2 = SymMatrix::diag(&[3.0, 2.0]).expect("diag literal");
    let b2 = SymMatrix::diag(&[5.0, 1.0]).expect("diag literal");
    entries.push(CatalogEntry::new(
        "det-identity-hmon-witness-n2",
        -1.0,
        det_identity_pairing(&a2, &b2),
        1e-12,
    ));
    let a4 = SymMatrix::diag(&[3.0, 2.0, 1.0, 1.0]).expect("diag literal");
    let b4 = SymMatrix::diag(&[5.0, 1.0, 1.0, 1.0]).expect("diag literal");
    entries.push(CatalogEntry::new(
        "det-identity-hmon-witness-n4",
        -1.0,
        det_identity_pairing(&a4, &b4),
        1e-12,
    ));

    // ⟨Dg[C].E₀₀, E₁₁⟩ − ⟨Dg[C].E₁₁, E₀₀⟩ at C = diag(1,2) for g = det·𝟙:
    // the difference of the two cofactors, 2 − 1 = 1.  A self-adjoint
    // derivative (any gradient field) would give 0.
    let c = SymMatrix::diag(&[1.0, 2.0]).expect("diag literal");
    let g = |x: &SymMatrix| -> Result<SymMatrix> {
        Ok(SymMatrix::identity(x.n())?.scale(x.det()))
    };
    let dg = primfn::fd_operator(g, &c, 1e-4).expect("finite-difference operator");
    let m = dg.m();
    let pairing_gap = dg.mat()[m] - dg.mat()[1];
    entries.push(CatalogEntry::new(
        "det-identity-derivative-pairing-gap",
        1.0,
        pairing_gap,
        1e-9,
    ));

    // Fixed A = diag(1, 1/8) against the unit shear B₁ = [[1,−1],[0,1]]:
    // the product stays invertible (det 1/8) while det(sym(A·B₁)) = −1/8.
    let a = GeneralMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.125]]).expect("2x2 literal");
    let b1 = GeneralMatrix::from_rows(&[vec![1.0, -1.0], vec![0.0, 1.0]]).expect("2x2 literal");
    let ab = a.matmul(&b1);
    entries.push(CatalogEntry::new(
        "shear-path-det-sym-endpoint",
        -0.125,
        ab.sym().det(),
        1e-12,
    ));
    entries.push(CatalogEntry::new(
        "shear-path-det-product",
        0.125,
        ab.det(),
        1e-12,
    ));

    entries
}

// ---------------------------------------------------------------------------
// Pinned operator-monotonicity witness for the square map
// ---------------------------------------------------------------------------

/// A fixed operator-monotonicity violation of A ↦ A² on the positive cone:
/// B − A is positive definite while B² − A² has a negative eigenvalue.
/// Found by [`search_square_omon_witness`] and pinned.
pub fn square_omon_witness() -> (SymMatrix, SymMatrix) {
    let a = SymMatrix::diag(&[2.0, 0.1]).expect("diag literal");
    let b = SymMatrix::from_rows(&[vec![2.1, 0.3], vec![0.3, 1.1]]).expect("2x2 literal");
    (a, b)
}

/// Seeded random search for an operator-monotonicity violation of A ↦ A²
/// on PSym(2), followed by a line refinement in the increment size.
/// Returns the best (A, B, margin) found with margin < 0, if any.
pub fn search_square_omon_witness(
    seed: u64,
    tries: usize,
) -> Result<Option<(SymMatrix, SymMatrix, f64)>> {
    let map = builtin_map("square").expect("registered map");
    let mut best: Option<(SymMatrix, SymMatrix, f64)> = None;
    for idx in 0..tries as u64 {
        let mut rng = sample::substream(seed, idx);
        let a = sample::positive_sym(&mut rng, 2, 1.0);
        let p = sample::positive_increment(&mut rng, 2, 1.0);
        // Refine along the increment size: the violation is often sharpest
        // for moderate steps.
        for k in 0..16 {
            let t = (k + 1) as f64 / 16.0;
            let b = a.add(&p.scale(t));
            let margin = omon_margin(&map, &a, &b)?;
            if margin < best.as_ref().map_or(0.0, |(_, _, m)| *m) {
                best = Some((a.clone(), b, margin));
            }
        }
    }
    Ok(best)
}
