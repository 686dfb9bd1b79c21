//! Dense complex linear algebra on finite Hilbert spaces.
//!
//! Everything here works on [`Operator`], a square complex matrix. Composite
//! spaces follow a single index convention, fixed by [`BipartiteSpace`]:
//! basis index `i = i_a * d_b + i_b`, so subsystem A is the slow (left)
//! Kronecker factor.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::{Error, Result};

/// Relative tolerance used by [`Operator::is_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Largest imaginary residue tolerated by [`expectation`].
pub const IMAG_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A square complex matrix acting on a `dim`-dimensional Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    m: DMatrix<Complex64>,
}

impl Operator {
    /// Wraps a matrix. Fails if it is not square or is empty.
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        Ok(Self { m })
    }

    /// Builds a `dim`×`dim` operator from row-major entries.
    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::from_matrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Builds a real operator from row-major entries.
    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_rows(dim, &c)
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(dim > 0, "operator dimension must be positive");
        Self {
            m: DMatrix::from_fn(dim, dim, f),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| ZERO)
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    /// Diagonal operator with real entries.
    pub fn diagonal(values: &[f64]) -> Self {
        Self::from_fn(values.len(), |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// Projector `|v⟩⟨v|`.
    pub fn projector(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn pauli_x() -> Self {
        Self::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    pub fn pauli_y() -> Self {
        let i = Complex64::new(0.0, 1.0);
        Self::from_rows(2, &[ZERO, -i, i, ZERO]).unwrap()
    }

    /// `σ_z` in the (excited, ground) ordering: `σ_z|0⟩ = +|0⟩`.
    pub fn pauli_z() -> Self {
        Self::diagonal(&[1.0, -1.0])
    }

    /// Truncated annihilation operator, `a|n⟩ = √n |n−1⟩` for `n < levels`.
    pub fn annihilation(levels: usize) -> Self {
        Self::from_fn(levels, |i, j| {
            if j == i + 1 {
                Complex64::new((j as f64).sqrt(), 0.0)
            } else {
                ZERO
            }
        })
    }

    /// Truncated number operator `a†a`.
    pub fn number(levels: usize) -> Self {
        let n: Vec<f64> = (0..levels).map(|k| k as f64).collect();
        Self::diagonal(&n)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.m
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// Largest entry modulus, `‖M‖_max`.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// `‖M − M†‖_max`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.m[(i, j)] - self.m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= HERMITIAN_TOL * (1.0 + self.max_abs())
    }

    /// Fails with [`Error::NotHermitian`] when [`Self::is_hermitian`] is false.
    pub fn ensure_hermitian(&self) -> Result<()> {
        if self.is_hermitian() {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                defect: self.hermiticity_defect(),
            })
        }
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self {
            m: (&self.m + self.m.adjoint()).scale(0.5),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { m: self.m.scale(s) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            m: &self.m + &other.m,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            m: &self.m - &other.m,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            m: &self.m * &other.m,
        })
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            m: &self.m * &other.m - &other.m * &self.m,
        })
    }

    /// Applies the operator to a state vector.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        let out = &self.m * DVector::from_column_slice(v);
        Ok(out.iter().copied().collect())
    }

    /// `⟨v|M|v⟩`.
    pub fn sandwich(&self, v: &[Complex64]) -> Result<Complex64> {
        let mv = self.apply(v)?;
        Ok(v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum())
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        }
    }
}

/// Subsystem selector for [`partial_trace`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Dimensions of a two-party composite space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BipartiteSpace {
    d_a: usize,
    d_b: usize,
}

impl BipartiteSpace {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a == 0 || d_b == 0 {
            return Err(Error::InvalidBipartition {
                d_a,
                d_b,
                composite: 0,
            });
        }
        Ok(Self { d_a, d_b })
    }

    #[inline]
    pub fn d_a(&self) -> usize {
        self.d_a
    }

    #[inline]
    pub fn d_b(&self) -> usize {
        self.d_b
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d_a * self.d_b
    }

    /// Composite basis index of `|i_a, i_b⟩`.
    #[inline]
    pub fn index(&self, i_a: usize, i_b: usize) -> usize {
        i_a * self.d_b + i_b
    }

    /// Inverse of [`Self::index`].
    #[inline]
    pub fn split(&self, i: usize) -> (usize, usize) {
        (i / self.d_b, i % self.d_b)
    }

    pub fn swapped(&self) -> Self {
        Self {
            d_a: self.d_b,
            d_b: self.d_a,
        }
    }

    /// Permutation operator mapping `|i_a, i_b⟩` on this space to
    /// `|i_b, i_a⟩` on [`Self::swapped`].
    pub fn swap_operator(&self) -> Operator {
        let out = self.swapped();
        Operator::from_fn(self.dim(), |row, col| {
            let (i_a, i_b) = self.split(col);
            if row == out.index(i_b, i_a) {
                ONE
            } else {
                ZERO
            }
        })
    }

    fn check(&self, op: &Operator) -> Result<()> {
        if op.dim() == self.dim() {
            Ok(())
        } else {
            Err(Error::InvalidBipartition {
                d_a: self.d_a,
                d_b: self.d_b,
                composite: op.dim(),
            })
        }
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &Operator, b: &Operator) -> Operator {
    Operator {
        m: a.m.kronecker(&b.m),
    }
}

/// Traces out one party of `rho`, returning the operator on the `keep` party.
pub fn partial_trace(rho: &Operator, space: BipartiteSpace, keep: Subsystem) -> Result<Operator> {
    space.check(rho)?;
    let (d_a, d_b) = (space.d_a, space.d_b);
    let out = match keep {
        Subsystem::A => Operator::from_fn(d_a, |i, k| {
            (0..d_b)
                .map(|j| rho.m[(space.index(i, j), space.index(k, j))])
                .sum()
        }),
        Subsystem::B => Operator::from_fn(d_b, |i, k| {
            (0..d_a)
                .map(|j| rho.m[(space.index(j, i), space.index(j, k))])
                .sum()
        }),
    };
    Ok(out)
}

/// Re-expresses `op` on `space` with the two parties exchanged.
pub fn swap_parties(op: &Operator, space: BipartiteSpace) -> Result<Operator> {
    space.check(op)?;
    let p = space.swap_operator();
    Ok(Operator {
        m: &p.m * &op.m * p.m.adjoint(),
    })
}

/// Eigenvalues (ascending) and the unitary of column eigenvectors.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// The `k`-th eigenvector (ascending order).
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k).iter().copied().collect()
    }

    /// `V f(Λ) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Operator {
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.weighted_sum(&weights)
    }

    /// `Σ_k w_k |v_k⟩⟨v_k|`.
    pub fn weighted_sum(&self, weights: &[f64]) -> Operator {
        let n = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for (k, &w) in weights.iter().enumerate() {
            scaled.column_mut(k).scale_mut(w);
        }
        let m = scaled * self.eigenvectors.adjoint();
        debug_assert_eq!(m.nrows(), n);
        Operator { m }
    }

    pub fn reconstruct(&self) -> Operator {
        self.map_spectrum(|l| l)
    }
}

/// Eigendecomposition of a Hermitian operator.
///
/// The input is checked against [`HERMITIAN_TOL`] and then symmetrized, so
/// the returned eigenvalues are exactly real and sorted ascending.
pub fn eig_hermitian(h: &Operator) -> Result<SpectralDecomposition> {
    h.ensure_hermitian()?;
    let sym = h.hermitian_part().m;
    let n = sym.nrows();
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 0).ok_or(Error::EigenFailure)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// `Tr(obs · rho)` as a real number.
///
/// Fails when the imaginary part exceeds [`IMAG_TOL`], which means one of
/// the inputs is not Hermitian.
pub fn expectation(obs: &Operator, rho: &Operator) -> Result<f64> {
    obs.check_same_dim(rho)?;
    let n = obs.dim();
    // Tr(AB) = Σ_ij A_ij B_ji without forming the product.
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += obs.m[(i, j)] * rho.m[(j, i)];
        }
    }
    if acc.im.abs() > IMAG_TOL * (1.0 + acc.re.abs()) {
        return Err(Error::ComplexExpectation { imag: acc.im });
    }
    Ok(acc.re)
}
