// SPDX-License-Identifier: Apache-2.0

#include "reson/lina.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace reson::lina
{

std::vector<Cplx> matvec(const ZMat &a, const std::vector<Cplx> &x)
{
    std::vector<Cplx> y(a.rows(), Cplx(0.0));
    for (std::size_t j = 0; j < a.cols(); ++j)
    {
        const Cplx xj = x[j];
        const Cplx *cj = a.col(j);
        for (std::size_t i = 0; i < a.rows(); ++i)
            y[i] += cj[i] * xj;
    }
    return y;
}

ZMat matmul(const ZMat &a, const ZMat &b)
{
    ZMat c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t k = 0; k < a.cols(); ++k)
        {
            const Cplx bkj = b(k, j);
            if (bkj == Cplx(0.0))
                continue;
            const Cplx *ak = a.col(k);
            Cplx *cj = c.col(j);
            for (std::size_t i = 0; i < a.rows(); ++i)
                cj[i] += ak[i] * bkj;
        }
    return c;
}

void lu_factor(ZMat &a, std::vector<int> &piv)
{
    const std::size_t n = a.rows();
    piv.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k)
    {
        std::size_t imax = k;
        double vmax = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
        {
            const double v = std::abs(a(i, k));
            if (v > vmax)
            {
                vmax = v;
                imax = i;
            }
        }
        piv[k] = static_cast<int>(imax);
        if (vmax == 0.0)
            throw SingularShift("exact zero pivot in dense LU");
        if (imax != k)
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a(k, j), a(imax, j));
        const Cplx inv = 1.0 / a(k, k);
        for (std::size_t i = k + 1; i < n; ++i)
        {
            const Cplx lik = a(i, k) * inv;
            a(i, k) = lik;
            if (lik == Cplx(0.0))
                continue;
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) -= lik * a(k, j);
        }
    }
}

void lu_solve(const ZMat &lu, const std::vector<int> &piv, std::vector<Cplx> &b)
{
    const std::size_t n = lu.rows();
    for (std::size_t k = 0; k < n; ++k)
        if (piv[k] != static_cast<int>(k))
            std::swap(b[k], b[piv[k]]);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = k + 1; i < n; ++i)
            b[i] -= lu(i, k) * b[k];
    for (std::size_t k = n; k-- > 0;)
    {
        for (std::size_t j = k + 1; j < n; ++j)
            b[k] -= lu(k, j) * b[j];
        b[k] /= lu(k, k);
    }
}

Cplx det(ZMat a)
{
    std::vector<int> piv;
    try
    {
        lu_factor(a, piv);
    }
    catch (const SingularShift &)
    {
        return Cplx(0.0);
    }
    Cplx d(1.0);
    for (std::size_t k = 0; k < a.rows(); ++k)
    {
        d *= a(k, k);
        if (piv[k] != static_cast<int>(k))
            d = -d;
    }
    return d;
}

void hessenberg(ZMat &a, ZMat *q)
{
    const std::size_t n = a.rows();
    if (n < 3)
        return;
    std::vector<Cplx> v(n);
    for (std::size_t k = 0; k + 2 < n; ++k)
    {
        double scale = 0.0;
        for (std::size_t i = k + 1; i < n; ++i)
            scale += std::abs(a(i, k));
        if (scale == 0.0)
            continue;
        double norm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i)
        {
            v[i] = a(i, k) / scale;
            norm2 += std::norm(v[i]);
        }
        const double alpha = std::sqrt(norm2);
        const Cplx phase = (v[k + 1] == Cplx(0.0)) ? Cplx(1.0) : v[k + 1] / std::abs(v[k + 1]);
        v[k + 1] += phase * alpha;
        double vv = 0.0;
        for (std::size_t i = k + 1; i < n; ++i)
            vv += std::norm(v[i]);
        if (vv == 0.0)
            continue;
        const double beta = 2.0 / vv;
        // A <- (I - beta v v^H) A
        for (std::size_t j = k; j < n; ++j)
        {
            Cplx s(0.0);
            for (std::size_t i = k + 1; i < n; ++i)
                s += std::conj(v[i]) * a(i, j);
            s *= beta;
            for (std::size_t i = k + 1; i < n; ++i)
                a(i, j) -= v[i] * s;
        }
        // A <- A (I - beta v v^H)
        for (std::size_t i = 0; i < n; ++i)
        {
            Cplx s(0.0);
            for (std::size_t j = k + 1; j < n; ++j)
                s += a(i, j) * v[j];
            s *= beta;
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) -= s * std::conj(v[j]);
        }
        if (q)
            for (std::size_t i = 0; i < q->rows(); ++i)
            {
                Cplx s(0.0);
                for (std::size_t j = k + 1; j < n; ++j)
                    s += (*q)(i, j) * v[j];
                s *= beta;
                for (std::size_t j = k + 1; j < n; ++j)
                    (*q)(i, j) -= s * std::conj(v[j]);
            }
        for (std::size_t i = k + 2; i < n; ++i)
            a(i, k) = 0.0;
    }
}

namespace
{

// Givens rotation zeroing b in (a, b): [c, s; -conj(s), c] with real c.
void make_givens(Cplx a, Cplx b, double &c, Cplx &s)
{
    if (b == Cplx(0.0))
    {
        c = 1.0;
        s = Cplx(0.0);
        return;
    }
    const double scale = std::abs(a) + std::abs(b);
    const double na = std::abs(a / scale), nb = std::abs(b / scale);
    const double r = scale * std::sqrt(na * na + nb * nb);
    if (std::abs(a) == 0.0)
    {
        c = 0.0;
        s = std::conj(b) / std::abs(b);
        return;
    }
    c = std::abs(a) / r;
    s = (a / std::abs(a)) * std::conj(b) / r;
}

} // namespace

void schur_hessenberg(ZMat &h, ZMat &q, int max_sweeps)
{
    const std::size_t n = h.rows();
    if (n == 0)
        return;
    const double eps = 2.3e-16;
    std::size_t ihi = n; // active block is [ilo, ihi)
    int stall = 0;
    while (ihi > 1)
    {
        // deflate converged subdiagonals
        bool deflated = false;
        for (std::size_t k = ihi - 1; k >= 1; --k)
        {
            const double sub = std::abs(h(k, k - 1));
            const double ref = std::abs(h(k, k)) + std::abs(h(k - 1, k - 1));
            if (sub <= eps * (ref > 0.0 ? ref : 1.0))
            {
                h(k, k - 1) = 0.0;
                if (k == ihi - 1)
                {
                    --ihi;
                    deflated = true;
                    stall = 0;
                }
                break;
            }
            if (k == 1)
                break;
        }
        if (deflated || ihi <= 1)
            continue;

        // locate the start of the trailing unreduced block
        std::size_t ilo = ihi - 1;
        while (ilo > 0 && h(ilo, ilo - 1) != Cplx(0.0))
            --ilo;

        // Wilkinson shift from the trailing 2x2
        const std::size_t m = ihi - 1;
        Cplx shift = h(m, m);
        if (m > ilo)
        {
            const Cplx a = h(m - 1, m - 1), b = h(m - 1, m), c = h(m, m - 1), d = h(m, m);
            const Cplx tr = a + d;
            const Cplx disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
            const Cplx l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
            shift = (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
        }
        if (++stall % 12 == 0) // exceptional shift to break cycles
            shift = h(m, m) + Cplx(std::abs(h(m, m - 1)), 0.0);
        if (stall > max_sweeps * 40)
            throw Error("QR iteration failed to converge");

        // implicit single-shift QR sweep on [ilo, ihi)
        std::vector<double> cs(ihi);
        std::vector<Cplx> sn(ihi);
        Cplx x = h(ilo, ilo) - shift;
        Cplx y = h(ilo + 1, ilo);
        for (std::size_t k = ilo; k < ihi - 1; ++k)
        {
            double c;
            Cplx s;
            make_givens(x, y, c, s);
            cs[k] = c;
            sn[k] = s;
            // apply from the left to rows k, k+1
            const std::size_t jstart = (k > ilo) ? k - 1 : ilo;
            for (std::size_t j = jstart; j < n; ++j)
            {
                const Cplx t1 = h(k, j), t2 = h(k + 1, j);
                h(k, j) = c * t1 + s * t2;
                h(k + 1, j) = -std::conj(s) * t1 + c * t2;
            }
            // apply from the right to cols k, k+1
            const std::size_t iend = std::min(ihi, k + 3);
            for (std::size_t i = 0; i < iend; ++i)
            {
                const Cplx t1 = h(i, k), t2 = h(i, k + 1);
                h(i, k) = c * t1 + std::conj(s) * t2;
                h(i, k + 1) = -s * t1 + c * t2;
            }
            if (q.rows() > 0)
                for (std::size_t i = 0; i < q.rows(); ++i)
                {
                    const Cplx t1 = q(i, k), t2 = q(i, k + 1);
                    q(i, k) = c * t1 + std::conj(s) * t2;
                    q(i, k + 1) = -s * t1 + c * t2;
                }
            if (k + 2 < ihi)
            {
                x = h(k + 1, k);
                y = h(k + 2, k);
            }
        }
    }
    // clean lower triangle dust
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = j + 1; i < n; ++i)
            h(i, j) = 0.0;
}

std::vector<Cplx> eigenvalues(ZMat a)
{
    hessenberg(a);
    ZMat q; // not accumulated
    schur_hessenberg(a, q);
    std::vector<Cplx> ev(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        ev[i] = a(i, i);
    return ev;
}

std::vector<Cplx> triangular_eigenvector(const ZMat &t, std::size_t k)
{
    const std::size_t n = t.rows();
    std::vector<Cplx> v(n, Cplx(0.0));
    v[k] = 1.0;
    const Cplx lam = t(k, k);
    for (std::size_t i = k; i-- > 0;)
    {
        Cplx s(0.0);
        for (std::size_t j = i + 1; j <= k; ++j)
            s += t(i, j) * v[j];
        Cplx diag = t(i, i) - lam;
        if (std::abs(diag) < 1e-300)
            diag = Cplx(1e-300, 0.0); // perturb defective cluster
        v[i] = -s / diag;
    }
    double nrm = 0.0;
    for (const Cplx &c : v)
        nrm += std::norm(c);
    nrm = std::sqrt(nrm);
    for (Cplx &c : v)
        c /= nrm;
    return v;
}

void schur_swap(ZMat &t, ZMat &q, std::size_t k)
{
    // Unitary similarity exchanging t(k,k) and t(k+1,k+1).
    const Cplx t11 = t(k, k), t12 = t(k, k + 1), t22 = t(k + 1, k + 1);
    double c;
    Cplx s;
    // rotate the eigenvector (t12, t22 - t11) of the 2x2 block onto e1
    make_givens(t12, t22 - t11, c, s);
    const std::size_t n = t.rows();
    // T <- G^H T G with G acting on columns/rows k, k+1
    for (std::size_t j = 0; j < n; ++j)
    {
        const Cplx a = t(k, j), b = t(k + 1, j);
        t(k, j) = c * a + s * b;
        t(k + 1, j) = -std::conj(s) * a + c * b;
    }
    for (std::size_t i = 0; i < n; ++i)
    {
        const Cplx a = t(i, k), b = t(i, k + 1);
        t(i, k) = c * a + std::conj(s) * b;
        t(i, k + 1) = -s * a + c * b;
    }
    if (q.rows() > 0)
        for (std::size_t i = 0; i < q.rows(); ++i)
        {
            const Cplx a = q(i, k), b = q(i, k + 1);
            q(i, k) = c * a + std::conj(s) * b;
            q(i, k + 1) = -s * a + c * b;
        }
    t(k + 1, k) = 0.0;
    t(k, k) = t22;
    t(k + 1, k + 1) = t11;
}

std::vector<Cplx> polynomial_roots(const std::vector<Cplx> &coeffs)
{
    // strip leading (highest-order) zeros
    std::size_t deg = coeffs.size();
    while (deg > 1 && std::abs(coeffs[deg - 1]) == 0.0)
        --deg;
    if (deg <= 1)
        return {};
    const std::size_t n = deg - 1;
    const Cplx lead = coeffs[n];
    ZMat comp(n, n);
    for (std::size_t i = 1; i < n; ++i)
        comp(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        comp(i, n - 1) = -coeffs[i] / lead;
    return eigenvalues(comp);
}

// ----------------------------------------------------------------------

SparseMatrix::SparseMatrix(int n, std::vector<Triplet> triplets) : n_(n)
{
    std::sort(triplets.begin(), triplets.end(), [](const Triplet &a, const Triplet &b)
              { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    row_ptr_.assign(n + 1, 0);
    for (std::size_t k = 0; k < triplets.size();)
    {
        std::size_t m = k;
        Cplx sum(0.0);
        while (m < triplets.size() && triplets[m].row == triplets[k].row &&
               triplets[m].col == triplets[k].col)
            sum += triplets[m++].value;
        col_idx_.push_back(triplets[k].col);
        values_.push_back(sum);
        ++row_ptr_[triplets[k].row + 1];
        k = m;
    }
    for (int i = 0; i < n; ++i)
        row_ptr_[i + 1] += row_ptr_[i];
}

void SparseMatrix::multiply(const Cplx *x, Cplx *y) const
{
    for (int i = 0; i < n_; ++i)
    {
        Cplx s(0.0);
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            s += values_[k] * x[col_idx_[k]];
        y[i] = s;
    }
}

void SparseMatrix::multiply_add(const Cplx *x, Cplx *y, Cplx alpha) const
{
    for (int i = 0; i < n_; ++i)
    {
        Cplx s(0.0);
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            s += values_[k] * x[col_idx_[k]];
        y[i] += alpha * s;
    }
}

std::vector<Cplx> SparseMatrix::operator*(const std::vector<Cplx> &x) const
{
    std::vector<Cplx> y(n_);
    multiply(x.data(), y.data());
    return y;
}

int SparseMatrix::bandwidth() const
{
    int bw = 0;
    for (int i = 0; i < n_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            bw = std::max(bw, std::abs(col_idx_[k] - i));
    return bw;
}

ZMat SparseMatrix::dense() const
{
    ZMat a(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            a(i, col_idx_[k]) += values_[k];
    return a;
}

SparseMatrix sparse_combine(const std::vector<const SparseMatrix *> &mats,
                            const std::vector<Cplx> &coeffs)
{
    std::vector<Triplet> trip;
    int n = 0;
    for (std::size_t t = 0; t < mats.size(); ++t)
    {
        const SparseMatrix &a = *mats[t];
        n = a.dim();
        for (int i = 0; i < a.dim(); ++i)
            for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
                trip.push_back({i, a.col_idx()[k], coeffs[t] * a.values()[k]});
    }
    return SparseMatrix(n, std::move(trip));
}

// ----------------------------------------------------------------------

BandedLU::BandedLU(const SparseMatrix &a) : n_(a.dim())
{
    kl_ = ku_ = a.bandwidth();
    ld_ = 2 * kl_ + ku_ + 1;
    ab_.assign(static_cast<std::size_t>(ld_) * n_, Cplx(0.0));
    piv_.assign(n_, 0);
    // band storage: entry (i, j) lives at ab(kl + ku + i - j, j)
    for (int i = 0; i < n_; ++i)
        for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
        {
            const int j = a.col_idx()[k];
            at(kl_ + ku_ + i - j, j) += a.values()[k];
        }
    factor();
}

void BandedLU::factor()
{
    const int kv = kl_ + ku_; // rows above the diagonal in storage
    for (int j = 0; j < n_; ++j)
    {
        const int km = std::min(kl_, n_ - 1 - j); // elements below diagonal
        // pivot search in column j
        int ip = 0;
        double vmax = std::abs(at(kv, j));
        for (int i = 1; i <= km; ++i)
        {
            const double v = std::abs(at(kv + i, j));
            if (v > vmax)
            {
                vmax = v;
                ip = i;
            }
        }
        piv_[j] = j + ip;
        if (vmax == 0.0)
            throw SingularShift("zero pivot in banded LU");
        const int jend = std::min(j + kl_ + ku_, n_ - 1); // pivoting widens the band to kl+ku
        if (ip != 0)
            for (int jj = j; jj <= jend; ++jj)
                std::swap(at(kv + ip + j - jj, jj), at(kv + j - jj, jj));
        const Cplx inv = 1.0 / at(kv, j);
        for (int i = 1; i <= km; ++i)
            at(kv + i, j) *= inv;
        for (int jj = j + 1; jj <= jend; ++jj)
        {
            const Cplx up = at(kv + j - jj, jj);
            if (up == Cplx(0.0))
                continue;
            for (int i = 1; i <= km; ++i)
                at(kv + i + j - jj, jj) -= at(kv + i, j) * up;
        }
    }
}

void BandedLU::solve(std::vector<Cplx> &b) const
{
    const int kv = kl_ + ku_;
    for (int j = 0; j < n_; ++j)
    {
        if (piv_[j] != j)
            std::swap(b[j], b[piv_[j]]);
        const int km = std::min(kl_, n_ - 1 - j);
        for (int i = 1; i <= km; ++i)
            b[j + i] -= at(kv + i, j) * b[j];
    }
    for (int j = n_ - 1; j >= 0; --j)
    {
        const int top = std::max(0, j - kl_ - ku_);
        b[j] /= at(kv, j);
        for (int i = top; i < j; ++i)
            b[i] -= at(kv + i - j, j) * b[j];
    }
}

std::vector<Cplx> BandedLU::solve_copy(const std::vector<Cplx> &b) const
{
    std::vector<Cplx> x = b;
    solve(x);
    return x;
}

} // namespace reson::lina
