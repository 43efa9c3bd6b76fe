//! Dense symmetric-matrix kernel.
//!
//! Everything downstream works with small dense matrices (2 ≤ n ≤ 8) over
//! `f64`: symmetric matrices `SymMatrix` carrying the Frobenius inner product
//! ⟨A,B⟩ = Σᵢⱼ aᵢⱼbᵢⱼ, general square matrices `GeneralMatrix` for products
//! and non-symmetric intermediates, spectral decompositions A = Qᵀ·diag(λ)·Q
//! produced by a deterministic cyclic Jacobi sweep, and the orthonormal basis
//! of Sym(n) used to represent linear operators on Sym(n) as m×m matrices,
//! m = n(n+1)/2.
//!
//! Numerical conventions, fixed here once and relied on everywhere else:
//!
//! * eigenvalues are returned in ascending order; ties keep the Jacobi
//!   output order (the sort is stable),
//! * the rows of `Q` are the eigenvector coordinates, so `A = Qᵀ diag(λ) Q`,
//! * the basis of Sym(n) enumerates diagonal elements Eᵢᵢ = eᵢeᵢᵀ first,
//!   then off-diagonal pairs Eᵢⱼ = (eᵢeⱼᵀ + eⱼeᵢᵀ)/√2 in lexicographic
//!   order of (i,j), i < j.

use crate::error::{Error, Result};

/// Smallest supported carrier dimension.
pub const MIN_DIM: usize = 2;
/// Largest supported carrier dimension.
pub const MAX_DIM: usize = 8;

/// Asymmetry level (in max-abs terms) above which construction of a
/// [`SymMatrix`] is considered to have genuinely altered its input.
pub const SYMMETRIZATION_NOTE_TOL: f64 = 1e-12;

/// Default relative tolerance for definiteness classification.
pub const DEFAULT_DEFINITENESS_TOL: f64 = 1e-9;

/// The Jacobi sweep stops once the off-diagonal Frobenius norm drops below
/// this multiple of the input Frobenius norm.
const JACOBI_REL_TOL: f64 = 1e-14;
/// Hard cap on full Jacobi sweeps; for n ≤ 8 convergence takes far fewer.
const JACOBI_MAX_SWEEPS: usize = 64;

fn validate_dim(n: usize) -> Result<()> {
    if !(MIN_DIM..=MAX_DIM).contains(&n) {
        return Err(Error::Shape(format!(
            "dimension {n} outside supported range {MIN_DIM}..={MAX_DIM}"
        )));
    }
    Ok(())
}

fn validate_finite(data: &[f64]) -> Result<()> {
    if let Some(x) = data.iter().find(|x| !x.is_finite()) {
        return Err(Error::Shape(format!("non-finite entry {x}")));
    }
    Ok(())
}

fn rows_to_flat(rows: &[Vec<f64>]) -> Result<(usize, Vec<f64>)> {
    let n = rows.len();
    let mut data = Vec::with_capacity(n * n);
    for row in rows {
        if row.len() != n {
            return Err(Error::Shape(format!(
                "expected {n} columns per row, found a row with {}",
                row.len()
            )));
        }
        data.extend_from_slice(row);
    }
    Ok((n, data))
}

/// Frobenius norm of a raw row-major buffer.
fn frob(data: &[f64]) -> f64 {
    data.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Common access for the two dense carrier types so that [`inner`] and the
/// norm helpers can treat them uniformly.
pub trait DenseSquare {
    /// Side length of the square matrix.
    fn dim(&self) -> usize;
    /// Row-major entries, `dim() * dim()` of them.
    fn data(&self) -> &[f64];
}

/// Frobenius inner product ⟨A,B⟩ = Σᵢⱼ aᵢⱼ·bᵢⱼ of two same-shaped matrices.
pub fn inner<A: DenseSquare + ?Sized, B: DenseSquare + ?Sized>(a: &A, b: &B) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::Shape(format!(
            "inner product of a {0}x{0} and a {1}x{1} matrix",
            a.dim(),
            b.dim()
        )));
    }
    Ok(a.data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| x * y)
        .sum())
}

// ---------------------------------------------------------------------------
// SymMatrix
// ---------------------------------------------------------------------------

/// Dense symmetric n×n matrix, 2 ≤ n ≤ 8, entries finite.
///
/// Construction symmetrizes its input via (M + Mᵀ)/2 and records how large
/// the discarded skew part was; values are immutable afterwards.
#[derive(Clone, Debug)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
    /// Max-abs change applied by symmetrization, i.e. maxᵢⱼ |mᵢⱼ − mⱼᵢ|/2.
    sym_defect: f64,
}

impl DenseSquare for SymMatrix {
    fn dim(&self) -> usize {
        self.n
    }
    fn data(&self) -> &[f64] {
        &self.data
    }
}

impl SymMatrix {
    /// Builds from a row-major buffer of length n², symmetrizing the input.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        validate_dim(n)?;
        if data.len() != n * n {
            return Err(Error::Shape(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        validate_finite(&data)?;
        let mut sym = data;
        let mut defect: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let upper = sym[i * n + j];
                let lower = sym[j * n + i];
                let avg = 0.5 * (upper + lower);
                defect = defect.max(0.5 * (upper - lower).abs());
                sym[i * n + j] = avg;
                sym[j * n + i] = avg;
            }
        }
        Ok(Self {
            n,
            data: sym,
            sym_defect: defect,
        })
    }

    /// Builds from nested rows as they appear in JSON matrix literals.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let (n, data) = rows_to_flat(rows)?;
        Self::new(n, data)
    }

    /// Builds entrywise; `f` is evaluated for i ≤ j and mirrored, so the
    /// result is exactly symmetric.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        validate_dim(n)?;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        validate_finite(&data)?;
        Ok(Self {
            n,
            data,
            sym_defect: 0.0,
        })
    }

    /// The zero matrix.
    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_fn(n, |_, _| 0.0)
    }

    /// The identity matrix 𝟙.
    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// Diagonal matrix from the given entries.
    pub fn diag(entries: &[f64]) -> Result<Self> {
        let entries = entries.to_vec();
        Self::from_fn(entries.len(), |i, j| if i == j { entries[i] } else { 0.0 })
    }

    /// Side length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry (i, j); panics on out-of-range indices.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "index ({i},{j}) out of range");
        self.data[i * self.n + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    /// Max-abs change applied when the constructor symmetrized the input.
    pub fn symmetrization_defect(&self) -> f64 {
        self.sym_defect
    }

    /// Whether construction altered the input beyond 1e-12 in any entry.
    pub fn needed_symmetrization(&self) -> bool {
        self.sym_defect > SYMMETRIZATION_NOTE_TOL
    }

    /// Nested-row copy, the JSON interchange shape.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    fn from_flat_symmetric(n: usize, data: Vec<f64>) -> Self {
        Self {
            n,
            data,
            sym_defect: 0.0,
        }
    }

    /// Entrywise sum; panics on dimension mismatch.
    pub fn add(&self, rhs: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in add");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(x, y)| x + y)
            .collect();
        Self::from_flat_symmetric(self.n, data)
    }

    /// Entrywise difference; panics on dimension mismatch.
    pub fn sub(&self, rhs: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in sub");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(x, y)| x - y)
            .collect();
        Self::from_flat_symmetric(self.n, data)
    }

    /// Scalar multiple.
    pub fn scale(&self, c: f64) -> SymMatrix {
        let data = self.data.iter().map(|x| c * x).collect();
        Self::from_flat_symmetric(self.n, data)
    }

    /// Matrix product; the product of two symmetric matrices is general.
    pub fn matmul(&self, rhs: &SymMatrix) -> GeneralMatrix {
        self.to_general().matmul(&rhs.to_general())
    }

    /// Trace Σᵢ aᵢᵢ.
    pub fn tr(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    /// Trace-free part dev A = A − (tr A / n)·𝟙.
    pub fn dev(&self) -> SymMatrix {
        let shift = self.tr() / self.n as f64;
        let mut data = self.data.clone();
        for i in 0..self.n {
            data[i * self.n + i] -= shift;
        }
        Self::from_flat_symmetric(self.n, data)
    }

    /// Frobenius norm ‖A‖ = √⟨A,A⟩.
    pub fn norm(&self) -> f64 {
        frob(&self.data)
    }

    /// Determinant, via the general LU path.
    pub fn det(&self) -> f64 {
        self.to_general().det()
    }

    /// Cofactor matrix: Cof(A)ᵢⱼ = (−1)^{i+j}·det(minorᵢⱼ), which satisfies
    /// A·Cof(A)ᵀ = det(A)·𝟙 and is symmetric for symmetric A.
    pub fn cof(&self) -> SymMatrix {
        let g = self.to_general().cof();
        // Minors of a symmetric matrix are symmetric up to rounding; fold
        // the two evaluations together.
        SymMatrix::new(self.n, g.data).expect("cofactor entries are finite")
    }

    /// Copy into the general carrier.
    pub fn to_general(&self) -> GeneralMatrix {
        GeneralMatrix {
            n: self.n,
            data: self.data.clone(),
        }
    }

    /// Spectral decomposition by the cyclic Jacobi sweep.
    pub fn eig(&self) -> Result<SpectralDecomposition> {
        let (lambda, q) = eig_slice(self.n, &self.data)?;
        Ok(SpectralDecomposition {
            n: self.n,
            lambda,
            q,
        })
    }
}

// ---------------------------------------------------------------------------
// GeneralMatrix
// ---------------------------------------------------------------------------

/// Dense square matrix with finite entries; no symmetry assumed.
#[derive(Clone, Debug)]
pub struct GeneralMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseSquare for GeneralMatrix {
    fn dim(&self) -> usize {
        self.n
    }
    fn data(&self) -> &[f64] {
        &self.data
    }
}

impl GeneralMatrix {
    /// Builds from a row-major buffer of length n².
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        validate_dim(n)?;
        if data.len() != n * n {
            return Err(Error::Shape(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        validate_finite(&data)?;
        Ok(Self { n, data })
    }

    /// Builds from nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let (n, data) = rows_to_flat(rows)?;
        Self::new(n, data)
    }

    /// Builds entrywise.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        validate_dim(n)?;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = f(i, j);
            }
        }
        validate_finite(&data)?;
        Ok(Self { n, data })
    }

    /// The identity matrix.
    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// Side length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry (i, j); panics on out-of-range indices.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "index ({i},{j}) out of range");
        self.data[i * self.n + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    /// Nested-row copy.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    /// Transpose.
    pub fn transpose(&self) -> GeneralMatrix {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        Self { n, data }
    }

    /// Symmetric part (M + Mᵀ)/2; the recorded defect of the result is the
    /// size of the skew part that was discarded.
    pub fn sym(&self) -> SymMatrix {
        SymMatrix::new(self.n, self.data.clone()).expect("entries already validated")
    }

    /// Entrywise sum; panics on dimension mismatch.
    pub fn add(&self, rhs: &GeneralMatrix) -> GeneralMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in add");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(x, y)| x + y)
            .collect();
        Self { n: self.n, data }
    }

    /// Entrywise difference; panics on dimension mismatch.
    pub fn sub(&self, rhs: &GeneralMatrix) -> GeneralMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in sub");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(x, y)| x - y)
            .collect();
        Self { n: self.n, data }
    }

    /// Scalar multiple.
    pub fn scale(&self, c: f64) -> GeneralMatrix {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    /// Matrix product; panics on dimension mismatch.
    pub fn matmul(&self, rhs: &GeneralMatrix) -> GeneralMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matmul");
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += aik * rhs.data[k * n + j];
                }
            }
        }
        Self { n, data }
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        frob(&self.data)
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let mut pivot = col;
            for row in (col + 1)..n {
                if a[row * n + col].abs() > a[pivot * n + col].abs() {
                    pivot = row;
                }
            }
            let p = a[pivot * n + col];
            if p == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            det *= a[col * n + col];
            for row in (col + 1)..n {
                let factor = a[row * n + col] / a[col * n + col];
                if factor == 0.0 {
                    continue;
                }
                for j in col..n {
                    a[row * n + j] -= factor * a[col * n + j];
                }
            }
        }
        det
    }

    /// Cofactor matrix from (n−1)×(n−1) minors.
    pub fn cof(&self) -> GeneralMatrix {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(i, j);
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                data[i * n + j] = sign * minor;
            }
        }
        Self { n, data }
    }

    /// Determinant of the minor obtained by deleting row `ri` and column `cj`.
    fn minor(&self, ri: usize, cj: usize) -> f64 {
        let n = self.n;
        let m = n - 1;
        // n ≥ 2 is guaranteed, so m ≥ 1; a 1×1 determinant is the entry.
        let mut sub = Vec::with_capacity(m * m);
        for i in 0..n {
            if i == ri {
                continue;
            }
            for j in 0..n {
                if j == cj {
                    continue;
                }
                sub.push(self.data[i * n + j]);
            }
        }
        if m == 1 {
            return sub[0];
        }
        GeneralMatrix { n: m, data: sub }.det()
    }

    /// Inverse by Gauss–Jordan with partial pivoting.
    pub fn inverse(&self) -> Result<GeneralMatrix> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = GeneralMatrix::identity(n)?.data;
        for col in 0..n {
            let mut pivot = col;
            for row in (col + 1)..n {
                if a[row * n + col].abs() > a[pivot * n + col].abs() {
                    pivot = row;
                }
            }
            let p = a[pivot * n + col];
            if p.abs() < 1e-300 {
                return Err(Error::Numerical(format!(
                    "matrix is singular to working precision (pivot {p:e} in column {col})"
                )));
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                    inv.swap(col * n + j, pivot * n + j);
                }
            }
            let d = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= d;
                inv[col * n + j] /= d;
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let factor = a[row * n + col];
                if factor == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[row * n + j] -= factor * a[col * n + j];
                    inv[row * n + j] -= factor * inv[col * n + j];
                }
            }
        }
        Ok(GeneralMatrix { n, data: inv })
    }

    /// Matrix exponential by scaling-and-squaring with a Taylor series on the
    /// scaled block.  Accurate to near machine precision for the moderate
    /// norms (‖M‖ ≲ 10) this crate feeds it; independent of any spectral
    /// decomposition.
    pub fn expm(&self) -> GeneralMatrix {
        let norm = self.norm();
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let x = self.scale(0.5_f64.powi(squarings as i32));
        let mut sum = GeneralMatrix::identity(self.n).expect("dimension already validated");
        let mut term = sum.clone();
        for k in 1..=30 {
            term = term.matmul(&x).scale(1.0 / k as f64);
            sum = sum.add(&term);
            if term.norm() <= 1e-18 * sum.norm() {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum.matmul(&sum);
        }
        sum
    }
}

/// Conjugation QᵀAQ of a symmetric matrix by a (numerically) orthogonal one.
/// The result is symmetrized; for genuinely orthogonal `q` the discarded skew
/// part is at rounding level.
pub fn conjugate(q: &GeneralMatrix, a: &SymMatrix) -> SymMatrix {
    q.transpose().matmul(&a.to_general()).matmul(q).sym()
}

// ---------------------------------------------------------------------------
// Spectral decomposition (cyclic Jacobi)
// ---------------------------------------------------------------------------

/// Eigendecomposition of a symmetric matrix given as a raw row-major slice
/// of arbitrary side length (this kernel also serves the m×m operator
/// matrices, m up to 36).
///
/// Returns `(λ, q)` with λ ascending and `q` row-major such that rows of `q`
/// are eigenvectors: `a = qᵀ·diag(λ)·q`.  The sweep is cyclic over the upper
/// triangle in row-major order, with no randomization, so the output is a
/// pure function of the input bits.
pub fn eig_slice(n: usize, data: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 || data.len() != n * n {
        return Err(Error::Shape(format!(
            "expected {} entries for a {n}x{n} matrix, got {}",
            n * n,
            data.len()
        )));
    }
    validate_finite(data)?;
    let norm_a = frob(data);
    let mut a = data.to_vec();
    // Columns of v accumulate the eigenvectors: a_input = v·diag(λ)·vᵀ.
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off(&a) <= JACOBI_REL_TOL * norm_a;
    if !converged {
        'sweeps: for _ in 0..JACOBI_MAX_SWEEPS {
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    let apq = a[p * n + q];
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                    // Smaller-angle root of tan²θ + 2θ·tanθ − 1 = 0, with a
                    // guard against overflow in θ² for extreme ratios.
                    let t = if theta.abs() > 1e150 {
                        0.5 / theta
                    } else {
                        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
                    };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    let tau = s / (1.0 + c);

                    let app = a[p * n + p];
                    let aqq = a[q * n + q];
                    a[p * n + p] = app - t * apq;
                    a[q * n + q] = aqq + t * apq;
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    for k in 0..n {
                        if k == p || k == q {
                            continue;
                        }
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        let new_kp = akp - s * (akq + tau * akp);
                        let new_kq = akq + s * (akp - tau * akq);
                        a[k * n + p] = new_kp;
                        a[p * n + k] = new_kp;
                        a[k * n + q] = new_kq;
                        a[q * n + k] = new_kq;
                    }
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp - s * (vkq + tau * vkp);
                        v[k * n + q] = vkq + s * (vkp - tau * vkq);
                    }
                }
            }
            if off(&a) <= JACOBI_REL_TOL * norm_a {
                converged = true;
                break 'sweeps;
            }
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Jacobi sweep did not converge in {JACOBI_MAX_SWEEPS} sweeps; off-diagonal residual {:e} \
             against threshold {:e}",
            off(&a),
            JACOBI_REL_TOL * norm_a
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort: equal eigenvalues keep the Jacobi output order.
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .partial_cmp(&a[j * n + j])
            .expect("eigenvalues of a finite matrix are finite")
    });
    let lambda: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut q = vec![0.0; n * n];
    for (row, &col) in order.iter().enumerate() {
        for j in 0..n {
            q[row * n + j] = v[j * n + col];
        }
    }
    Ok((lambda, q))
}

/// Result of [`SymMatrix::eig`]: `a = qᵀ·diag(λ)·q` with λ ascending and the
/// rows of `q` holding eigenvector coordinates.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    n: usize,
    lambda: Vec<f64>,
    q: Vec<f64>,
}

impl SpectralDecomposition {
    /// Carrier dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Eigenvalues in ascending order.
    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// Orthogonal factor, row-major; row i is the eigenvector for λᵢ.
    pub fn q(&self) -> &[f64] {
        &self.q
    }

    /// The orthogonal factor as a matrix.
    pub fn q_matrix(&self) -> GeneralMatrix {
        GeneralMatrix {
            n: self.n,
            data: self.q.clone(),
        }
    }

    /// ‖QᵀQ − 𝟙‖ — orthogonality residual of the factor.
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut dot = 0.0;
                for k in 0..n {
                    dot += self.q[k * n + i] * self.q[k * n + j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                s += (dot - target) * (dot - target);
            }
        }
        s.sqrt()
    }

    /// Qᵀ·diag(λ)·Q — reconstruction of the decomposed matrix.
    pub fn reconstruct(&self) -> SymMatrix {
        self.map_spectrum(|x| x)
    }

    /// Qᵀ·diag(f(λ))·Q — the spectral image of a scalar function.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.n;
        let fv: Vec<f64> = self.lambda.iter().map(|&x| f(x)).collect();
        SymMatrix::from_fn(n, |i, j| {
            let mut s = 0.0;
            for k in 0..n {
                s += self.q[k * n + i] * fv[k] * self.q[k * n + j];
            }
            s
        })
        .expect("dimension already validated")
    }

    /// K = Q·H·Qᵀ, the coordinates of H in the eigenbasis (row-major n×n).
    pub fn to_eigenbasis(&self, h: &SymMatrix) -> Vec<f64> {
        let n = self.n;
        assert_eq!(n, h.n(), "dimension mismatch in to_eigenbasis");
        // T = Q·H, then K = T·Qᵀ.
        let mut t = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let qik = self.q[i * n + k];
                if qik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    t[i * n + j] += qik * h.data[k * n + j];
                }
            }
        }
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += t[i * n + k] * self.q[j * n + k];
                }
                out[i * n + j] = s;
            }
        }
        out
    }

    /// Qᵀ·K·Q — back from eigenbasis coordinates.
    pub fn from_eigenbasis(&self, k: &[f64]) -> SymMatrix {
        let n = self.n;
        assert_eq!(k.len(), n * n, "dimension mismatch in from_eigenbasis");
        SymMatrix::from_fn(n, |i, j| {
            let mut s = 0.0;
            for a in 0..n {
                for b in 0..n {
                    s += self.q[a * n + i] * k[a * n + b] * self.q[b * n + j];
                }
            }
            s
        })
        .expect("dimension already validated")
    }
}

// ---------------------------------------------------------------------------
// Definiteness
// ---------------------------------------------------------------------------

/// Sign classification of a symmetric matrix by its spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemiDefinite,
    Indefinite,
    NegativeSemiDefinite,
    NegativeDefinite,
}

/// Outcome of [`definiteness`]: the class plus the extreme eigenvalues it
/// was derived from.
#[derive(Clone, Copy, Debug)]
pub struct DefinitenessReport {
    pub verdict: Definiteness,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

/// Classification rule shared by matrix and operator paths.  The threshold is
/// `tol · max(1, |λ|_max)`; a matrix within the threshold of both signs (for
/// example the zero matrix) classifies as positive semi-definite.
pub(crate) fn classify(lambda_min: f64, lambda_max: f64, tol: f64) -> Definiteness {
    let scale = 1.0_f64.max(lambda_min.abs().max(lambda_max.abs()));
    let thr = tol * scale;
    if lambda_min > thr {
        Definiteness::PositiveDefinite
    } else if lambda_max < -thr {
        Definiteness::NegativeDefinite
    } else if lambda_min >= -thr {
        Definiteness::PositiveSemiDefinite
    } else if lambda_max <= thr {
        Definiteness::NegativeSemiDefinite
    } else {
        Definiteness::Indefinite
    }
}

/// Classifies a symmetric matrix by its spectrum with relative tolerance
/// `tol` (see [`DEFAULT_DEFINITENESS_TOL`]).
pub fn definiteness(a: &SymMatrix, tol: f64) -> Result<DefinitenessReport> {
    if !(tol >= 0.0) {
        return Err(Error::Configuration(format!(
            "definiteness tolerance must be non-negative, got {tol}"
        )));
    }
    let dec = a.eig()?;
    let lambda_min = dec.lambda[0];
    let lambda_max = dec.lambda[dec.n - 1];
    Ok(DefinitenessReport {
        verdict: classify(lambda_min, lambda_max, tol),
        lambda_min,
        lambda_max,
    })
}

// ---------------------------------------------------------------------------
// Orthonormal basis of Sym(n)
// ---------------------------------------------------------------------------

/// Orthonormal basis of Sym(n) under the Frobenius inner product:
/// diagonal elements Eᵢᵢ = eᵢeᵢᵀ first, then Eᵢⱼ = (eᵢeⱼᵀ + eⱼeᵢᵀ)/√2 for
/// i < j in lexicographic order.  Operators on Sym(n) are m×m matrices in
/// this basis, m = n(n+1)/2.
#[derive(Clone, Debug)]
pub struct SymBasis {
    n: usize,
    elements: Vec<SymMatrix>,
    /// (i, j) index pair of each basis element, i ≤ j.
    pairs: Vec<(usize, usize)>,
}

impl SymBasis {
    /// Builds the basis for dimension n.
    pub fn new(n: usize) -> Result<Self> {
        validate_dim(n)?;
        let mut elements = Vec::new();
        let mut pairs = Vec::new();
        for i in 0..n {
            elements.push(SymMatrix::from_fn(n, |a, b| {
                if a == i && b == i {
                    1.0
                } else {
                    0.0
                }
            })?);
            pairs.push((i, i));
        }
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        for i in 0..n {
            for j in (i + 1)..n {
                elements.push(SymMatrix::from_fn(n, |a, b| {
                    if (a, b) == (i, j) || (a, b) == (j, i) {
                        inv_sqrt2
                    } else {
                        0.0
                    }
                })?);
                pairs.push((i, j));
            }
        }
        Ok(Self { n, elements, pairs })
    }

    /// Carrier dimension n.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Basis size m = n(n+1)/2.
    pub fn m(&self) -> usize {
        self.elements.len()
    }

    /// The a-th basis element.
    pub fn element(&self, a: usize) -> &SymMatrix {
        &self.elements[a]
    }

    /// The (i, j) pair, i ≤ j, indexed by the a-th element.
    pub fn pair(&self, a: usize) -> (usize, usize) {
        self.pairs[a]
    }

    /// Position of the element touching entries (i, j) / (j, i).
    pub fn index_of(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        assert!(j < self.n, "index ({i},{j}) out of range");
        if i == j {
            i
        } else {
            // Off-diagonal block starts at n; pairs with first index i
            // occupy a run of length n−1−i.
            let before: usize = (0..i).map(|k| self.n - 1 - k).sum();
            self.n + before + (j - i - 1)
        }
    }

    /// Coordinates cₐ = ⟨H, Eₐ⟩ of a symmetric matrix in this basis.
    pub fn coords(&self, h: &SymMatrix) -> Vec<f64> {
        assert_eq!(self.n, h.n(), "dimension mismatch in coords");
        let sqrt2 = 2.0_f64.sqrt();
        self.pairs
            .iter()
            .map(|&(i, j)| {
                if i == j {
                    h.get(i, i)
                } else {
                    sqrt2 * h.get(i, j)
                }
            })
            .collect()
    }

    /// Reassembles Σₐ cₐ·Eₐ from coordinates.
    pub fn from_coords(&self, c: &[f64]) -> SymMatrix {
        assert_eq!(self.m(), c.len(), "coordinate length mismatch");
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        let mut data = vec![0.0; self.n * self.n];
        for (a, &(i, j)) in self.pairs.iter().enumerate() {
            if i == j {
                data[i * self.n + i] = c[a];
            } else {
                data[i * self.n + j] = c[a] * inv_sqrt2;
                data[j * self.n + i] = c[a] * inv_sqrt2;
            }
        }
        SymMatrix::from_flat_symmetric(self.n, data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Closed-form eigenvalues of a symmetric 2×2 [[a, b], [b, d]]: roots of
    /// the characteristic polynomial, ascending.
    fn eig2_oracle(a: f64, b: f64, d: f64) -> [f64; 2] {
        let mean = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        [mean - disc, mean + disc]
    }

    /// Closed-form eigenvalues of a symmetric 3×3 via the trigonometric
    /// solution of the characteristic cubic, ascending.
    fn eig3_oracle(m: &SymMatrix) -> [f64; 3] {
        let p1 = m.get(0, 1).powi(2) + m.get(0, 2).powi(2) + m.get(1, 2).powi(2);
        if p1 == 0.0 {
            let mut d = [m.get(0, 0), m.get(1, 1), m.get(2, 2)];
            d.sort_by(|x, y| x.partial_cmp(y).unwrap());
            return d;
        }
        let q = m.tr() / 3.0;
        let p2 = (m.get(0, 0) - q).powi(2)
            + (m.get(1, 1) - q).powi(2)
            + (m.get(2, 2) - q).powi(2)
            + 2.0 * p1;
        let p = (p2 / 6.0).sqrt();
        let b = m
            .sub(&SymMatrix::identity(3).unwrap().scale(q))
            .scale(1.0 / p);
        let r = (b.det() / 2.0).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        let hi = q + 2.0 * p * phi.cos();
        let lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
        let mid = 3.0 * q - hi - lo;
        [lo, mid, hi]
    }

    #[test]
    fn construction_symmetrizes_and_records_defect() {
        let m = SymMatrix::new(2, vec![1.0, 0.5, 0.1, 2.0]).unwrap();
        assert_eq!(m.get(0, 1), 0.3);
        assert_eq!(m.get(1, 0), 0.3);
        assert!(m.needed_symmetrization());
        assert!((m.symmetrization_defect() - 0.2).abs() < 1e-15);

        let s = SymMatrix::new(2, vec![1.0, 0.5, 0.5, 2.0]).unwrap();
        assert!(!s.needed_symmetrization());
        assert_eq!(s.symmetrization_defect(), 0.0);
    }

    #[test]
    fn construction_rejects_bad_inputs() {
        assert!(matches!(
            SymMatrix::new(1, vec![1.0]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            SymMatrix::new(9, vec![0.0; 81]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            SymMatrix::new(2, vec![1.0, 2.0, 3.0]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            SymMatrix::new(2, vec![1.0, f64::NAN, 0.0, 1.0]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            SymMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn inner_matches_entrywise_sum_and_rejects_mismatch() {
        let a = SymMatrix::diag(&[1.0, 2.0]).unwrap();
        let b = SymMatrix::from_rows(&[vec![0.0, 3.0], vec![3.0, -1.0]]).unwrap();
        assert_eq!(inner(&a, &b).unwrap(), 1.0 * 0.0 + 2.0 * -1.0);
        let c = SymMatrix::identity(3).unwrap();
        assert!(matches!(inner(&a, &c), Err(Error::Shape(_))));
    }

    #[test]
    fn inner_of_skew_difference_pair_is_eight_alpha_sin_alpha() {
        // ⟨[[0, −2s], [2s, 0]], [[0, −2α], [2α, 0]]⟩ = 8·α·s with s = sin α.
        for &alpha in &[0.3_f64, 1.0, 2.2, 4.712388980384690] {
            let s = alpha.sin();
            let diff = GeneralMatrix::from_rows(&[vec![0.0, -2.0 * s], vec![2.0 * s, 0.0]]).unwrap();
            let dir = GeneralMatrix::from_rows(&[vec![0.0, -2.0 * alpha], vec![2.0 * alpha, 0.0]])
                .unwrap();
            let v = inner(&diff, &dir).unwrap();
            assert!((v - 8.0 * alpha * s).abs() <= 1e-12 * (1.0 + v.abs()));
        }
    }

    #[test]
    fn inner_positive_on_positive_definite_pairs() {
        for i in 0..1000_u64 {
            let mut rng = sample::substream(0x5EED, i);
            let n = 2 + (i % 3) as usize;
            let p = sample::positive_increment(&mut rng, n, 1.0);
            let q = sample::positive_increment(&mut rng, n, 1.0);
            assert!(
                inner(&p, &q).unwrap() > 0.0,
                "inner product of PD matrices must be positive (sample {i})"
            );
        }
    }

    #[test]
    fn eig_matches_two_by_two_oracle() {
        for i in 0..500_u64 {
            let mut rng = sample::substream(0xE16, i);
            let m = sample::gaussian_sym(&mut rng, 2, 2.0);
            let dec = m.eig().unwrap();
            let oracle = eig2_oracle(m.get(0, 0), m.get(0, 1), m.get(1, 1));
            for k in 0..2 {
                assert!(
                    (dec.lambda()[k] - oracle[k]).abs() <= 1e-12 * (1.0 + oracle[k].abs()),
                    "sample {i}: eigenvalue {k} {} vs oracle {}",
                    dec.lambda()[k],
                    oracle[k]
                );
            }
        }
    }

    #[test]
    fn eig_matches_three_by_three_oracle() {
        for i in 0..500_u64 {
            let mut rng = sample::substream(0xE17, i);
            let m = sample::gaussian_sym(&mut rng, 3, 1.5);
            let dec = m.eig().unwrap();
            let oracle = eig3_oracle(&m);
            for k in 0..3 {
                assert!(
                    (dec.lambda()[k] - oracle[k]).abs() <= 1e-9 * (1.0 + oracle[k].abs()),
                    "sample {i}: eigenvalue {k} {} vs oracle {}",
                    dec.lambda()[k],
                    oracle[k]
                );
            }
        }
    }

    #[test]
    fn eig_reconstructs_and_is_orthogonal_in_dimension_five() {
        for i in 0..200_u64 {
            let mut rng = sample::substream(0xE18, i);
            let m = sample::gaussian_sym(&mut rng, 5, 1.0);
            let dec = m.eig().unwrap();
            let residual = dec.reconstruct().sub(&m).norm();
            assert!(
                residual <= 1e-10 * (1.0 + m.norm()),
                "sample {i}: reconstruction residual {residual:e}"
            );
            assert!(dec.orthogonality_residual() <= 1e-12 * 5.0);
            for w in dec.lambda().windows(2) {
                assert!(w[0] <= w[1], "eigenvalues must ascend");
            }
        }
    }

    #[test]
    fn eig_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = sample::gaussian_sym(&mut rng, 4, 1.0);
        let d1 = m.eig().unwrap();
        let d2 = m.eig().unwrap();
        assert_eq!(d1.lambda(), d2.lambda());
        assert_eq!(d1.q(), d2.q());
    }

    #[test]
    fn eig_handles_diagonal_and_zero_input() {
        let m = SymMatrix::diag(&[3.0, -1.0, 2.0]).unwrap();
        let dec = m.eig().unwrap();
        assert_eq!(dec.lambda(), &[-1.0, 2.0, 3.0]);
        let z = SymMatrix::zeros(2).unwrap();
        assert_eq!(z.eig().unwrap().lambda(), &[0.0, 0.0]);
    }

    #[test]
    fn eig_slice_handles_operator_sized_matrices() {
        // 12×12 exceeds the carrier cap on purpose: the raw kernel also
        // serves m×m operator matrices.
        let dim = 12;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v: f64 = sample::standard_normal(&mut rng);
                data[i * dim + j] = v;
                data[j * dim + i] = v;
            }
        }
        let (lambda, q) = eig_slice(dim, &data).unwrap();
        // Reconstruct and compare.
        let mut recon = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let mut s = 0.0;
                for k in 0..dim {
                    s += q[k * dim + i] * lambda[k] * q[k * dim + j];
                }
                recon[i * dim + j] = s;
            }
        }
        let err: f64 = recon
            .iter()
            .zip(&data)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        assert!(err <= 1e-10 * (1.0 + frob(&data)));
    }

    #[test]
    fn definiteness_classifies_spot_cases() {
        let tol = DEFAULT_DEFINITENESS_TOL;
        let pd = SymMatrix::diag(&[0.1, 2.0]).unwrap();
        assert_eq!(
            definiteness(&pd, tol).unwrap().verdict,
            Definiteness::PositiveDefinite
        );

        // Symmetric part of [[1, −1], [0, 1/8]] — mixed signs.
        let indef =
            SymMatrix::from_rows(&[vec![1.0, -0.5], vec![-0.5, 0.125]]).unwrap();
        let rep = definiteness(&indef, tol).unwrap();
        assert_eq!(rep.verdict, Definiteness::Indefinite);
        assert!(rep.lambda_min < 0.0 && rep.lambda_max > 0.0);

        let boundary = SymMatrix::diag(&[1.0, -1e-12]).unwrap();
        assert_eq!(
            definiteness(&boundary, tol).unwrap().verdict,
            Definiteness::PositiveSemiDefinite
        );

        let zero = SymMatrix::zeros(3).unwrap();
        assert_eq!(
            definiteness(&zero, tol).unwrap().verdict,
            Definiteness::PositiveSemiDefinite
        );

        let nd = SymMatrix::diag(&[-0.5, -3.0]).unwrap();
        assert_eq!(
            definiteness(&nd, tol).unwrap().verdict,
            Definiteness::NegativeDefinite
        );

        assert!(matches!(
            definiteness(&pd, -1.0),
            Err(Error::Configuration(_))
        ));
    }

    #[test]
    fn dev_is_trace_free_and_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let m = sample::gaussian_sym(&mut rng, 4, 2.0);
            let d = m.dev();
            assert!(d.tr().abs() <= 1e-13 * (1.0 + m.norm()));
            assert!(d.dev().sub(&d).norm() <= 1e-13 * (1.0 + m.norm()));
        }
    }

    #[test]
    fn cofactor_satisfies_adjugate_identity() {
        for i in 0..200_u64 {
            let mut rng = sample::substream(0xC0F, i);
            let n = 2 + (i % 3) as usize;
            let m = sample::gaussian_sym(&mut rng, n, 1.0);
            let det = m.det();
            let lhs = m.to_general().matmul(&m.cof().to_general().transpose());
            let rhs = GeneralMatrix::identity(n).unwrap().scale(det);
            let scale = 1.0_f64.max(det.abs()).max(m.norm());
            assert!(
                lhs.sub(&rhs).norm() <= 1e-10 * scale,
                "sample {i}: adjugate identity residual {:e}",
                lhs.sub(&rhs).norm()
            );
        }
    }

    #[test]
    fn cofactor_trace_gives_eigenvalue_gap_product() {
        // For A = diag(1, 2, 4): tr Cof(A − 1·𝟙) = (2−1)(4−1) = 3.
        let a = SymMatrix::diag(&[1.0, 2.0, 4.0]).unwrap();
        let shifted = a.sub(&SymMatrix::identity(3).unwrap());
        assert!((shifted.cof().tr() - 3.0).abs() <= 1e-12);
    }

    #[test]
    fn determinant_of_triangular_product_is_exact() {
        // A·B(t) with A = diag(1, 1/8), B(t) = [[1, −t], [0, 1]] stays upper
        // triangular, so LU gives its determinant exactly.
        let a = SymMatrix::diag(&[1.0, 0.125]).unwrap();
        for &t in &[0.0, 0.25, 0.5, 1.0] {
            let b = GeneralMatrix::from_rows(&[vec![1.0, -t], vec![0.0, 1.0]]).unwrap();
            let ab = a.to_general().matmul(&b);
            assert_eq!(ab.det(), 0.125);
        }
    }

    #[test]
    fn inverse_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let m = sample::positive_increment(&mut rng, 3, 1.0);
            let inv = m.to_general().inverse().unwrap();
            let resid = m
                .to_general()
                .matmul(&inv)
                .sub(&GeneralMatrix::identity(3).unwrap())
                .norm();
            assert!(resid <= 1e-10 * (1.0 + m.norm()));
        }
        let singular = GeneralMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(singular.inverse(), Err(Error::Numerical(_))));
    }

    #[test]
    fn expm_matches_rotation_closed_form() {
        for &alpha in &[0.0, 0.7, 2.0, 3.0 * std::f64::consts::FRAC_PI_2] {
            let k =
                GeneralMatrix::from_rows(&[vec![0.0, -alpha], vec![alpha, 0.0]]).unwrap();
            let e = k.expm();
            let expect = GeneralMatrix::from_rows(&[
                vec![alpha.cos(), -alpha.sin()],
                vec![alpha.sin(), alpha.cos()],
            ])
            .unwrap();
            assert!(
                e.sub(&expect).norm() <= 1e-13,
                "alpha = {alpha}: residual {:e}",
                e.sub(&expect).norm()
            );
        }
    }

    #[test]
    fn expm_of_diagonal_exponentiates_entries() {
        let d = GeneralMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, -2.0]]).unwrap();
        let e = d.expm();
        assert!((e.get(0, 0) - 1.0_f64.exp()).abs() <= 1e-14 * 1.0_f64.exp());
        assert!((e.get(1, 1) - (-2.0_f64).exp()).abs() <= 1e-14);
        assert!(e.get(0, 1).abs() <= 1e-16 && e.get(1, 0).abs() <= 1e-16);
    }

    #[test]
    fn basis_is_orthonormal_and_ordered() {
        for n in MIN_DIM..=4 {
            let basis = SymBasis::new(n).unwrap();
            assert_eq!(basis.m(), n * (n + 1) / 2);
            for a in 0..basis.m() {
                for b in 0..basis.m() {
                    let g = inner(basis.element(a), basis.element(b)).unwrap();
                    let target = if a == b { 1.0 } else { 0.0 };
                    assert!(
                        (g - target).abs() <= 1e-14,
                        "n = {n}: Gram entry ({a},{b}) = {g}"
                    );
                }
            }
            // Diagonal-first convention.
            for i in 0..n {
                assert_eq!(basis.pair(i), (i, i));
                assert_eq!(basis.element(i).get(i, i), 1.0);
            }
            // Lexicographic off-diagonal order and normalization.
            let first_off = basis.element(n);
            assert_eq!(basis.pair(n), (0, 1));
            assert!((first_off.get(0, 1) - 1.0 / 2.0_f64.sqrt()).abs() <= 1e-16);
            // index_of inverts pair().
            for a in 0..basis.m() {
                let (i, j) = basis.pair(a);
                assert_eq!(basis.index_of(i, j), a);
                assert_eq!(basis.index_of(j, i), a);
            }
        }
    }

    #[test]
    fn basis_coords_round_trip() {
        let basis = SymBasis::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let h = sample::gaussian_sym(&mut rng, 3, 1.0);
            let c = basis.coords(&h);
            let back = basis.from_coords(&c);
            assert!(back.sub(&h).norm() <= 1e-14 * (1.0 + h.norm()));
            // Coordinates are the inner products against the elements.
            for a in 0..basis.m() {
                let ip = inner(&h, basis.element(a)).unwrap();
                assert!((c[a] - ip).abs() <= 1e-14 * (1.0 + ip.abs()));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn prop_eig_reconstructs(
            n in 2usize..=5,
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = sample::gaussian_sym(&mut rng, n, 3.0);
            let dec = m.eig().unwrap();
            let resid = dec.reconstruct().sub(&m).norm();
            prop_assert!(resid <= 1e-10 * (1.0 + m.norm()));
        }

        #[test]
        fn prop_inner_is_symmetric_bilinear(
            seed in any::<u64>(),
            c in -10.0f64..10.0,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = sample::gaussian_sym(&mut rng, 3, 1.0);
            let b = sample::gaussian_sym(&mut rng, 3, 1.0);
            let d = sample::gaussian_sym(&mut rng, 3, 1.0);
            let s = 1.0 + a.norm() * (b.norm() + d.norm()) * (1.0 + c.abs());
            prop_assert!((inner(&a, &b).unwrap() - inner(&b, &a).unwrap()).abs() <= 1e-13 * s);
            let lhs = inner(&a, &b.scale(c).add(&d)).unwrap();
            let rhs = c * inner(&a, &b).unwrap() + inner(&a, &d).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * s);
        }

        #[test]
        fn prop_basis_round_trip(
            n in 2usize..=6,
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let basis = SymBasis::new(n).unwrap();
            let h = sample::gaussian_sym(&mut rng, n, 2.0);
            let back = basis.from_coords(&basis.coords(&h));
            prop_assert!(back.sub(&h).norm() <= 1e-13 * (1.0 + h.norm()));
        }
    }
}
