// SPDX-License-Identifier: Apache-2.0
//
// Small dense/banded complex linear algebra kernels: just enough for the
// eigensolver (Hessenberg QR, Schur reordering, triangular eigenvectors),
// polynomial companion roots, and the banded LU used for the N x N solves.

#ifndef RESON_LINA_HPP
#define RESON_LINA_HPP

#include <cstddef>
#include <vector>

#include "reson/types.hpp"

namespace reson::lina
{

// Column-major dense complex matrix.
class ZMat
{
public:
    ZMat() = default;
    ZMat(std::size_t rows, std::size_t cols, Cplx fill = Cplx(0.0, 0.0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Cplx &operator()(std::size_t i, std::size_t j) { return data_[i + j * rows_]; }
    const Cplx &operator()(std::size_t i, std::size_t j) const { return data_[i + j * rows_]; }

    Cplx *col(std::size_t j) { return data_.data() + j * rows_; }
    const Cplx *col(std::size_t j) const { return data_.data() + j * rows_; }

    std::vector<Cplx> &data() { return data_; }
    const std::vector<Cplx> &data() const { return data_; }

    static ZMat identity(std::size_t n)
    {
        ZMat m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Cplx> data_;
};

std::vector<Cplx> matvec(const ZMat &a, const std::vector<Cplx> &x);
ZMat matmul(const ZMat &a, const ZMat &b);

// In-place LU with partial pivoting; returns the permutation sign and the
// pivot row indices. Throws SingularShift on exact breakdown.
void lu_factor(ZMat &a, std::vector<int> &piv);
void lu_solve(const ZMat &lu, const std::vector<int> &piv, std::vector<Cplx> &b);

// log|det| and arg(det) of a square matrix (destroys a copy internally).
// Row scaling is the caller's business.
Cplx det(ZMat a);

// Reduce a general square matrix to upper Hessenberg form (Householder).
// When q is given, the accumulated transform is multiplied into it from
// the right (a_in = Q a_out Q^H for Q built from identity).
void hessenberg(ZMat &a, ZMat *q = nullptr);

// Schur decomposition of an upper Hessenberg matrix: on return h is upper
// triangular with the eigenvalues on the diagonal and q holds the
// accumulated unitary transform (input q is multiplied from the right).
// Shifted complex QR iteration with deflation.
void schur_hessenberg(ZMat &h, ZMat &q, int max_sweeps = 60);

// Eigenvalues of a general dense matrix (Hessenberg + QR).
std::vector<Cplx> eigenvalues(ZMat a);

// Right eigenvector of an upper triangular matrix for the eigenvalue at
// diagonal position k (back substitution, unit normalized).
std::vector<Cplx> triangular_eigenvector(const ZMat &t, std::size_t k);

// Swap the adjacent diagonal entries (k, k+1) of a triangular matrix by a
// unitary similarity, updating q accordingly.
void schur_swap(ZMat &t, ZMat &q, std::size_t k);

// Roots of a polynomial sum_k c[k] z^k (c.back() != 0) via the companion
// matrix. Leading/trailing zero coefficients are handled by the caller.
std::vector<Cplx> polynomial_roots(const std::vector<Cplx> &coeffs);

// ----------------------------------------------------------------------
// Sparse CSR complex matrix (assembled from coordinate triplets).
// ----------------------------------------------------------------------
struct Triplet
{
    int row = 0, col = 0;
    Cplx value{0.0, 0.0};
};

class SparseMatrix
{
public:
    SparseMatrix() = default;
    SparseMatrix(int n, std::vector<Triplet> triplets); // square, duplicates summed

    int dim() const { return n_; }
    std::size_t nnz() const { return values_.size(); }

    void multiply(const Cplx *x, Cplx *y) const;                 // y = A x
    void multiply_add(const Cplx *x, Cplx *y, Cplx alpha) const; // y += alpha A x
    std::vector<Cplx> operator*(const std::vector<Cplx> &x) const;

    // Symmetric (not conjugated) structural bandwidth.
    int bandwidth() const;

    const std::vector<int> &row_ptr() const { return row_ptr_; }
    const std::vector<int> &col_idx() const { return col_idx_; }
    const std::vector<Cplx> &values() const { return values_; }

    ZMat dense() const;

private:
    int n_ = 0;
    std::vector<int> row_ptr_, col_idx_;
    std::vector<Cplx> values_;
};

// axpy combination of sparse matrices sharing a dimension: sum_i c_i A_i.
SparseMatrix sparse_combine(const std::vector<const SparseMatrix *> &mats,
                            const std::vector<Cplx> &coeffs);

// ----------------------------------------------------------------------
// Banded LU with partial pivoting (LAPACK zgbtrf-style storage).
// ----------------------------------------------------------------------
class BandedLU
{
public:
    BandedLU() = default;
    explicit BandedLU(const SparseMatrix &a);

    void solve(std::vector<Cplx> &b) const;
    std::vector<Cplx> solve_copy(const std::vector<Cplx> &b) const;

    int dim() const { return n_; }

private:
    int n_ = 0, kl_ = 0, ku_ = 0;
    std::vector<Cplx> ab_; // (2kl+ku+1) x n, column-major
    std::vector<int> piv_;

    Cplx &at(int i, int j) { return ab_[i + j * ld_]; }
    const Cplx &at(int i, int j) const { return ab_[i + j * ld_]; }
    int ld_ = 0;

    void factor();
};

} // namespace reson::lina

#endif // RESON_LINA_HPP
