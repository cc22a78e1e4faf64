//! Dense linear-algebra helpers bridging `ndarray` storage and `faer` factorizations.
//!
//! Everything public in the crate speaks `ndarray`; the factorizations below
//! convert at the boundary. The complete orthogonal decomposition is built here
//! from a column-pivoted QR followed by a QR of the transposed leading block.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::householder;
use faer::linalg::solvers::{ColPivQr, Qr};
use faer::{Conj, Mat, MatRef, Par, Side};
use ndarray::{Array1, Array2, ArrayView2};

/// Relative tolerance for numerical rank: a singular value counts as zero when
/// it is at or below `max(rows, cols) * eps * sigma_max`.
pub fn default_rank_tol(rows: usize, cols: usize) -> f64 {
    rows.max(cols).max(1) as f64 * f64::EPSILON
}

pub(crate) fn to_faer(a: ArrayView2<'_, f64>) -> Mat<f64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[[i, j]])
}

pub(crate) fn from_faer(a: MatRef<'_, f64>) -> Array2<f64> {
    Array2::from_shape_fn((a.nrows(), a.ncols()), |(i, j)| a[(i, j)])
}

/// Eigenvalues of a symmetric matrix in nondecreasing order.
pub fn sym_eigenvalues(a: ArrayView2<'_, f64>) -> crate::Result<Vec<f64>> {
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    to_faer(a)
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| crate::Error::Numerical(format!("symmetric eigensolver: {e:?}")))
}

/// Eigen-decomposition of a symmetric matrix: eigenvalues in nondecreasing
/// order and the matching orthonormal eigenvectors as columns.
pub fn sym_eigen(a: ArrayView2<'_, f64>) -> crate::Result<(Array1<f64>, Array2<f64>)> {
    let evd = to_faer(a)
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| crate::Error::Numerical(format!("symmetric eigensolver: {e:?}")))?;
    let s = evd.S().column_vector();
    let values = Array1::from_shape_fn(s.nrows(), |i| s[i]);
    Ok((values, from_faer(evd.U())))
}

/// Numerical rank of a symmetric positive semi-definite matrix.
pub fn psd_rank(a: ArrayView2<'_, f64>, n_obs: usize) -> crate::Result<usize> {
    let eig = sym_eigenvalues(a)?;
    let max = eig.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return Ok(0);
    }
    let tol = default_rank_tol(n_obs, a.nrows()) * max;
    Ok(eig.iter().filter(|v| **v > tol).count())
}

/// Singular values in nonincreasing order.
pub fn singular_values(a: ArrayView2<'_, f64>) -> crate::Result<Vec<f64>> {
    if a.is_empty() {
        return Ok(Vec::new());
    }
    to_faer(a)
        .singular_values()
        .map_err(|e| crate::Error::Numerical(format!("svd: {e:?}")))
}

/// Lower Cholesky factor of a symmetric positive definite matrix, or `None`
/// when the factorization breaks down.
pub fn cholesky(a: ArrayView2<'_, f64>) -> Option<Array2<f64>> {
    let llt = to_faer(a).llt(Side::Lower).ok()?;
    Some(from_faer(llt.L()))
}

/// Solves `L X = B` in place for lower-triangular `L`.
pub fn solve_lower(l: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>) -> Array2<f64> {
    let lf = to_faer(l);
    let mut x = to_faer(b);
    faer::linalg::triangular_solve::solve_lower_triangular_in_place(lf.as_ref(), x.as_mut(), Par::Seq);
    from_faer(x.as_ref())
}

/// Solves `U X = B` for upper-triangular `U`.
pub fn solve_upper(u: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>) -> Array2<f64> {
    let uf = to_faer(u);
    let mut x = to_faer(b);
    faer::linalg::triangular_solve::solve_upper_triangular_in_place(uf.as_ref(), x.as_mut(), Par::Seq);
    from_faer(x.as_ref())
}

/// Thin SVD `A = U diag(s) V^T`.
pub struct ThinSvd {
    pub u: Array2<f64>,
    pub s: Array1<f64>,
    pub v: Array2<f64>,
}

pub fn thin_svd(a: ArrayView2<'_, f64>) -> crate::Result<ThinSvd> {
    let svd = to_faer(a)
        .thin_svd()
        .map_err(|e| crate::Error::Numerical(format!("svd: {e:?}")))?;
    let s = svd.S().column_vector();
    Ok(ThinSvd {
        u: from_faer(svd.U()),
        s: Array1::from_shape_fn(s.nrows(), |i| s[i]),
        v: from_faer(svd.V()),
    })
}

/// The `R` factor of a reduced (unpivoted) QR decomposition, `min(rows, cols) x cols`.
pub fn qr_r_factor(a: ArrayView2<'_, f64>) -> Array2<f64> {
    qr_r_factor_faer(to_faer(a))
}

pub(crate) fn qr_r_factor_faer(a: Mat<f64>) -> Array2<f64> {
    let qr = Qr::new(a.as_ref());
    from_faer(qr.thin_R())
}

/// Complete orthogonal decomposition `P^T K Q = [[R, 0], [0, 0]]`.
///
/// `R` is `rank x rank`, upper triangular and invertible. The orthogonal factors
/// are kept in Householder form; [`CompleteOrthogonalDecomposition::p_leading_rows`]
/// extracts a few rows of `P` without forming the full `rows x rows` matrix,
/// which matters when `K` is tall.
pub struct CompleteOrthogonalDecomposition {
    left: ColPivQr<f64>,
    right: Option<Qr<f64>>,
    perm: Vec<usize>,
    r: Array2<f64>,
    rank: usize,
    nrows: usize,
    ncols: usize,
}

/// Computes the complete orthogonal decomposition of `k`.
///
/// `tol` is relative: a pivot `|R_ii|` is treated as zero when it is at or below
/// `tol * |R_00|`. Use [`default_rank_tol`] for the standard convention.
pub fn complete_orthogonal_decomposition(
    k: ArrayView2<'_, f64>,
    tol: f64,
) -> CompleteOrthogonalDecomposition {
    CompleteOrthogonalDecomposition::from_faer(to_faer(k), tol)
}

impl CompleteOrthogonalDecomposition {
    pub(crate) fn from_faer(k: Mat<f64>, tol: f64) -> Self {
        let (nrows, ncols) = k.shape();
        let left = ColPivQr::new(k.as_ref());
        let perm = left.P().arrays().0.to_vec();
        let r_top = left.thin_R();
        let size = nrows.min(ncols);

        let lead = if size > 0 { r_top[(0, 0)].abs() } else { 0.0 };
        let mut rank = 0;
        if lead > 0.0 {
            // Pivoting makes |R_ii| nonincreasing, so the rank is the leading run.
            while rank < size && r_top[(rank, rank)].abs() > tol * lead {
                rank += 1;
            }
        }

        if rank == 0 {
            return Self {
                left,
                right: None,
                perm,
                r: Array2::zeros((0, 0)),
                rank,
                nrows,
                ncols,
            };
        }

        // [R11 R12]^T = Z L, so [R11 R12] = L^T Z^T with L^T lower triangular.
        let top_t = Mat::from_fn(ncols, rank, |i, j| if i >= j { r_top[(j, i)] } else { 0.0 });
        let right = Qr::new(top_t.as_ref());
        let l = right.thin_R();
        // Reversing rows and columns of L^T gives an upper-triangular R.
        let r = Array2::from_shape_fn((rank, rank), |(i, j)| l[(rank - 1 - j, rank - 1 - i)]);

        Self {
            left,
            right: Some(right),
            perm,
            r,
            rank,
            nrows,
            ncols,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The `rank x rank` upper-triangular factor.
    pub fn r(&self) -> &Array2<f64> {
        &self.r
    }

    /// Full `cols x cols` right orthogonal factor `Q`.
    pub fn q(&self) -> Array2<f64> {
        let n = self.ncols;
        let z = match &self.right {
            Some(right) => right.compute_Q(),
            None => Mat::identity(n, n),
        };
        let mut q = Array2::zeros((n, n));
        for i in 0..n {
            let target = self.perm[i];
            for j in 0..n {
                let src_col = if j < self.rank { self.rank - 1 - j } else { j };
                q[[target, j]] = z[(i, src_col)];
            }
        }
        q
    }

    /// First `rank` columns of `Q`, spanning the row space of `K`.
    pub fn q_leading(&self) -> Array2<f64> {
        let n = self.ncols;
        let r = self.rank;
        let mut q = Array2::zeros((n, r));
        if let Some(right) = &self.right {
            let z = right.compute_thin_Q();
            for i in 0..n {
                let target = self.perm[i];
                for j in 0..r {
                    q[[target, j]] = z[(i, r - 1 - j)];
                }
            }
        }
        q
    }

    /// Full `rows x rows` left orthogonal factor `P`.
    pub fn p(&self) -> Array2<f64> {
        let q1 = self.left.compute_Q();
        let m = self.nrows;
        Array2::from_shape_fn((m, m), |(i, j)| {
            let src_col = if j < self.rank { self.rank - 1 - j } else { j };
            q1[(i, src_col)]
        })
    }

    /// `P(0..k, 0..rank)`: the leading `k` rows of the first `rank` columns of `P`.
    ///
    /// Computed as `(Q1^T E_k)^T` where `E_k` selects the first `k` rows, costing
    /// `O(rows * cols * k)` instead of forming `P`.
    pub fn p_leading_rows(&self, k: usize) -> Array2<f64> {
        let m = self.nrows;
        let r = self.rank;
        let k = k.min(m);
        let mut sel = Mat::<f64>::zeros(m, k);
        for i in 0..k {
            sel[(i, i)] = 1.0;
        }
        let basis = self.left.Q_basis();
        let coeff = self.left.Q_coeff();
        let block = coeff.nrows();
        let mut mem = MemBuffer::new(
            householder::apply_block_householder_sequence_transpose_on_the_left_in_place_scratch::<f64>(
                m, block, k,
            ),
        );
        householder::apply_block_householder_sequence_transpose_on_the_left_in_place_with_conj(
            basis,
            coeff,
            Conj::No,
            sel.as_mut(),
            Par::Seq,
            MemStack::new(&mut mem),
        );
        Array2::from_shape_fn((k, r), |(i, j)| sel[(r - 1 - j, i)])
    }
}
