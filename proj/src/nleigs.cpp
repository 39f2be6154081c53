// SPDX-License-Identifier: Apache-2.0

#include "reson/nleigs.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace reson::nleigs
{

namespace
{

const double kInfPole = std::numeric_limits<double>::infinity();

bool is_inf(Cplx g)
{
    return !std::isfinite(g.real()) || !std::isfinite(g.imag());
}

Cplx pole_divisor(Cplx omega, Cplx gamma)
{
    return is_inf(gamma) ? Cplx(1.0) : 1.0 - omega / gamma;
}

} // namespace

bool NleigsExpansion::pole_is_infinite(int j) const
{
    return is_inf(poles[j - 1]);
}

std::vector<Cplx> NleigsExpansion::basis(Cplx omega) const
{
    std::vector<Cplx> b(degree + 1);
    b[0] = Cplx(1.0);
    for (int j = 1; j <= degree; ++j)
        b[j] = b[j - 1] * (omega - nodes[j - 1]) / (scalings[j - 1] * pole_divisor(omega, poles[j - 1]));
    return b;
}

NleigsExpansion leja_bagby_points(const ComplexDisk &sigma, std::vector<Cplx> gamma, int degree)
{
    if (degree < 1)
        throw DomainError("leja_bagby_points requires degree >= 1");
    if (!(sigma.radius > 0.0))
        throw DegenerateRegion("target region has zero radius");
    for (const Cplx &g : gamma)
        if (std::abs(g - sigma.center) <= sigma.radius)
            throw DomainError("singularity set intersects the closure of Sigma");

    std::vector<Cplx> boundary(kBoundarySamples);
    for (int i = 0; i < kBoundarySamples; ++i)
        boundary[i] = sigma.center +
                      sigma.radius * std::polar(1.0, 2.0 * kPi * i / kBoundarySamples);

    NleigsExpansion exp;
    exp.degree = degree;
    exp.sigma = sigma;
    exp.nodes.push_back(boundary[0]); // sigma_0 arbitrary on the sampled boundary

    // running products s_j(w) on the boundary samples and at candidate poles
    std::vector<Cplx> sb(kBoundarySamples, Cplx(1.0));
    std::vector<Cplx> sg(gamma.size(), Cplx(1.0));
    std::vector<bool> used(gamma.size(), false);

    for (int j = 1; j <= degree; ++j)
    {
        for (int i = 0; i < kBoundarySamples; ++i)
            sb[i] *= boundary[i] - exp.nodes[j - 1];
        for (std::size_t g = 0; g < gamma.size(); ++g)
            if (!used[g])
                sg[g] *= gamma[g] - exp.nodes[j - 1];

        // pole: minimizer of |s_{j-1}| among remaining candidates; the last
        // slot stays at infinity for the linearization
        Cplx pole(kInfPole, 0.0);
        if (j < degree)
        {
            double best = std::numeric_limits<double>::infinity();
            int best_g = -1;
            for (std::size_t g = 0; g < gamma.size(); ++g)
                if (!used[g] && std::abs(sg[g]) < best)
                {
                    best = std::abs(sg[g]);
                    best_g = static_cast<int>(g);
                }
            if (best_g >= 0)
            {
                pole = gamma[best_g];
                used[best_g] = true;
            }
        }
        exp.poles.push_back(pole);

        for (int i = 0; i < kBoundarySamples; ++i)
            sb[i] /= pole_divisor(boundary[i], pole);
        for (std::size_t g = 0; g < gamma.size(); ++g)
            if (!used[g])
                sg[g] /= pole_divisor(gamma[g], pole);

        // normalization: max |b_j| = 1 on the sampled boundary
        double beta = 0.0;
        int arg = 0;
        for (int i = 0; i < kBoundarySamples; ++i)
            if (std::abs(sb[i]) > beta)
            {
                beta = std::abs(sb[i]);
                arg = i;
            }
        if (beta == 0.0)
            throw DegenerateRegion("Leja-Bagby product collapsed");
        exp.scalings.push_back(beta);
        for (int i = 0; i < kBoundarySamples; ++i)
            sb[i] /= beta;
        for (std::size_t g = 0; g < gamma.size(); ++g)
            if (!used[g])
                sg[g] /= beta;

        // next node: maximizer of |b_j| (the normalization argmax)
        exp.nodes.push_back(boundary[arg]);
    }
    return exp;
}

void scalar_divided_differences(const nep::RationalNEP &problem, NleigsExpansion &expansion)
{
    const int d = expansion.degree;
    // triangular table B[k][j] = b_j(sigma_k)
    std::vector<std::vector<Cplx>> b(d + 1);
    for (int k = 0; k <= d; ++k)
        b[k] = expansion.basis(expansion.nodes[k]);

    expansion.divided_differences.assign(problem.coefficients.size(), std::vector<Cplx>(d + 1));
    for (std::size_t i = 0; i < problem.coefficients.size(); ++i)
    {
        std::vector<Cplx> &dd = expansion.divided_differences[i];
        for (int k = 0; k <= d; ++k)
        {
            Cplx fv;
            try
            {
                fv = problem.coefficients[i].eval(expansion.nodes[k]);
            }
            catch (const Error &)
            {
                throw NodeAtPole("coefficient function singular at an interpolation node");
            }
            Cplx acc = fv;
            for (int j = 0; j < k; ++j)
                acc -= b[k][j] * dd[j];
            dd[k] = acc / b[k][k];
        }
    }
}

double verify_interpolant(const nep::RationalNEP &problem, const NleigsExpansion &expansion,
                          const std::vector<Cplx> &omega_samples, int probes, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double worst = 0.0;
    for (int pr = 0; pr < probes; ++pr)
    {
        std::vector<Cplx> x(problem.dim);
        for (Cplx &c : x)
            c = Cplx(uni(rng), uni(rng));
        for (const Cplx &w : omega_samples)
        {
            const std::vector<Cplx> basis = expansion.basis(w);
            std::vector<Cplx> fdx(problem.dim, Cplx(0.0));
            for (std::size_t i = 0; i < problem.matrices.size(); ++i)
            {
                Cplx coeff(0.0);
                for (int j = 0; j <= expansion.degree; ++j)
                    coeff += basis[j] * expansion.divided_differences[i][j];
                problem.matrices[i].multiply_add(x.data(), fdx.data(), coeff);
            }
            const std::vector<Cplx> tx = problem.apply(w, x);
            double dn = 0.0, tn = 0.0;
            for (int i = 0; i < problem.dim; ++i)
            {
                dn += std::norm(fdx[i] - tx[i]);
                tn += std::norm(tx[i]);
            }
            worst = std::max(worst, std::sqrt(dn / tn));
        }
    }
    return worst;
}

DensePencil build_dense_pencil(const nep::RationalNEP &problem, const NleigsExpansion &expansion)
{
    const int d = expansion.degree;
    const int n = problem.dim;
    DensePencil pencil{lina::ZMat(d * n, d * n), lina::ZMat(d * n, d * n)};

    // D_j assembled densely (test-scale only)
    std::vector<lina::ZMat> dj(d + 1, lina::ZMat(n, n));
    std::vector<lina::ZMat> dense_a;
    for (const auto &a : problem.matrices)
        dense_a.push_back(a.dense());
    for (int j = 0; j <= d; ++j)
        for (std::size_t i = 0; i < dense_a.size(); ++i)
        {
            const Cplx c = expansion.divided_differences[i][j];
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s)
                    dj[j](r, s) += c * dense_a[i](r, s);
        }

    auto put = [n](lina::ZMat &m, int bi, int bj, const lina::ZMat &blk, Cplx scale)
    {
        for (int r = 0; r < n; ++r)
            for (int s = 0; s < n; ++s)
                m(bi * n + r, bj * n + s) += scale * blk(r, s);
    };
    auto put_eye = [n](lina::ZMat &m, int bi, int bj, Cplx scale)
    {
        for (int r = 0; r < n; ++r)
            m(bi * n + r, bj * n + r) += scale;
    };

    const double beta_d = expansion.scalings[d - 1];
    for (int j = 0; j <= d - 2; ++j)
        put(pencil.l0, 0, j, dj[j], Cplx(1.0));
    put(pencil.l0, 0, d - 1, dj[d - 1], Cplx(1.0));
    put(pencil.l0, 0, d - 1, dj[d], -expansion.nodes[d - 1] / beta_d);
    put(pencil.l1, 0, d - 1, dj[d], Cplx(-1.0 / beta_d));
    for (int k = 1; k <= d - 1; ++k)
    {
        put_eye(pencil.l0, k, k - 1, expansion.nodes[k - 1]);
        put_eye(pencil.l0, k, k, Cplx(expansion.scalings[k - 1], 0.0));
        put_eye(pencil.l1, k, k - 1, Cplx(1.0));
        if (!expansion.pole_is_infinite(k))
            put_eye(pencil.l1, k, k, expansion.scalings[k - 1] / expansion.poles[k - 1]);
    }
    return pencil;
}

// ----------------------------------------------------------------------
// Compact Krylov basis and the shift-and-invert application
// ----------------------------------------------------------------------

namespace
{

struct CompactBasis
{
    int n = 0, d = 0;
    std::vector<std::vector<Cplx>> u_cols;           // orthonormal N-columns
    std::vector<std::vector<std::vector<Cplx>>> g;   // g[block][column] coeffs
    // column c of the Krylov basis: V^i_c = sum_r u_cols[r] * gpad(i, c)[r]

    int n_cols() const { return g.empty() ? 0 : static_cast<int>(g[0].size()); }
    int rank() const { return static_cast<int>(u_cols.size()); }

    std::size_t complex_count() const
    {
        std::size_t total = u_cols.size() * static_cast<std::size_t>(n);
        for (const auto &blk : g)
            for (const auto &col : blk)
                total += col.size();
        return total;
    }

    Cplx g_at(int block, int col, int row) const
    {
        const auto &v = g[block][col];
        return row < static_cast<int>(v.size()) ? v[row] : Cplx(0.0);
    }

    // explicit block i of column c
    std::vector<Cplx> block_vector(int block, int col) const
    {
        std::vector<Cplx> out(n, Cplx(0.0));
        const auto &coef = g[block][col];
        for (std::size_t r = 0; r < coef.size(); ++r)
        {
            if (coef[r] == Cplx(0.0))
                continue;
            const auto &u = u_cols[r];
            for (int i = 0; i < n; ++i)
                out[i] += coef[r] * u[i];
        }
        return out;
    }
};

struct ShiftContext
{
    Cplx mu;
    lina::BandedLU lu; // factorization of F_d(mu)
    std::vector<Cplx> fd_coeff; // effective coefficient of each A_i at mu
};

double vec_norm(const std::vector<Cplx> &v)
{
    double s = 0.0;
    for (const Cplx &c : v)
        s += std::norm(c);
    return std::sqrt(s);
}

Cplx vec_dot(const std::vector<Cplx> &a, const std::vector<Cplx> &b) // a^H b
{
    Cplx s(0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::conj(a[i]) * b[i];
    return s;
}

} // namespace

// Arnoldi engine shared by solve() and arnoldi_hessenberg().
namespace
{

class CompactArnoldi
{
public:
    CompactArnoldi(const nep::RationalNEP &problem, const NleigsExpansion &expansion, Cplx mu,
                   unsigned seed)
        : problem_(problem), exp_(expansion), mu_(mu)
    {
        basis_.n = problem.dim;
        basis_.d = expansion.degree;
        basis_.g.resize(expansion.degree);

        ctx_.mu = mu;
        ctx_.fd_coeff.resize(problem.matrices.size());
        const std::vector<Cplx> b = expansion.basis(mu);
        std::vector<const lina::SparseMatrix *> mats;
        for (std::size_t i = 0; i < problem.matrices.size(); ++i)
        {
            Cplx c(0.0);
            for (int j = 0; j <= expansion.degree; ++j)
                c += b[j] * expansion.divided_differences[i][j];
            ctx_.fd_coeff[i] = c;
            mats.push_back(&problem.matrices[i]);
        }
        ctx_.lu = lina::BandedLU(lina::sparse_combine(mats, ctx_.fd_coeff));

        // start vector: random u in the first block row
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        std::vector<Cplx> u0(problem.dim);
        for (Cplx &c : u0)
        {
            const double re = uni(rng);
            const double im = uni(rng);
            c = Cplx(re, im);
        }
        const double nrm = vec_norm(u0);
        for (Cplx &c : u0)
            c /= nrm;
        basis_.u_cols.push_back(std::move(u0));
        for (int i = 0; i < basis_.d; ++i)
            basis_.g[i].push_back(i == 0 ? std::vector<Cplx>{Cplx(1.0)} : std::vector<Cplx>{});
    }

    const CompactBasis &basis() const { return basis_; }
    CompactBasis &basis() { return basis_; }

    // one Arnoldi step on the last basis column; returns the new Hessenberg
    // column h(0..m) and the normalization beta as h[m+1]
    std::vector<Cplx> step()
    {
        const int d = basis_.d;
        const int n = basis_.n;
        const int m = basis_.n_cols(); // index of the column being produced
        const int last = m - 1;

        // explicit blocks of the last column
        std::vector<std::vector<Cplx>> w(d);
        for (int i = 0; i < d; ++i)
            w[i] = basis_.block_vector(i, last);

        // rhs_k = w_{k-1} + (beta_k/gamma_k) w_k, k = 1..d-1
        // aux_k = (rhs_k + (mu - sigma_{k-1}) aux_{k-1}) / (beta_k (1 - mu/gamma_k))
        std::vector<std::vector<Cplx>> aux(d);
        aux[0].assign(n, Cplx(0.0));
        const int r_old = basis_.rank();
        for (int k = 1; k < d; ++k)
        {
            const Cplx pole_scale = basis_coeff_pole(k);
            const Cplx denom = exp_.scalings[k - 1] * pole_divisor(mu_, exp_.poles[k - 1]);
            aux[k].assign(n, Cplx(0.0));
            for (int i = 0; i < n; ++i)
            {
                const Cplx rhs = w[k - 1][i] + pole_scale * w[k][i];
                aux[k][i] = (rhs + (mu_ - exp_.nodes[k - 1]) * aux[k - 1][i]) / denom;
            }
        }

        // right-hand side for the F_d(mu) solve
        const double beta_d = exp_.scalings[d - 1];
        const Cplx tail = (mu_ - exp_.nodes[d - 1]) / beta_d;
        std::vector<Cplx> rhs0(n, Cplx(0.0));
        std::vector<Cplx> combo(n);
        for (std::size_t i = 0; i < problem_.matrices.size(); ++i)
        {
            const auto &dd = exp_.divided_differences[i];
            for (int idx = 0; idx < n; ++idx)
            {
                Cplx c = (dd[d] / beta_d) * w[d - 1][idx];
                for (int j = 1; j <= d - 2; ++j)
                    c += dd[j] * aux[j][idx];
                if (d >= 2)
                    c += (dd[d - 1] + tail * dd[d]) * aux[d - 1][idx];
                combo[idx] = c;
            }
            problem_.matrices[i].multiply_add(combo.data(), rhs0.data(), Cplx(-1.0));
        }
        std::vector<Cplx> x0 = ctx_.lu.solve_copy(rhs0);

        // orthogonalize x0 against U (two Gram-Schmidt passes)
        std::vector<Cplx> p(r_old + 1, Cplx(0.0));
        for (int pass = 0; pass < 2; ++pass)
            for (int r = 0; r < r_old; ++r)
            {
                const Cplx h = vec_dot(basis_.u_cols[r], x0);
                p[r] += h;
                for (int i = 0; i < n; ++i)
                    x0[i] -= h * basis_.u_cols[r][i];
            }
        const double tau = vec_norm(x0);
        int r_new = r_old;
        if (tau > 1e-14 * (1.0 + std::abs(p[0])))
        {
            for (Cplx &c : x0)
                c /= tau;
            p[r_old] = tau;
            basis_.u_cols.push_back(std::move(x0));
            r_new = r_old + 1;
        }

        // coefficient vectors of the new block column before orthogonalization:
        // x_0 = U p, then the same recursion as for x_k in coefficient space
        std::vector<std::vector<Cplx>> gx(d, std::vector<Cplx>(r_new, Cplx(0.0)));
        for (int r = 0; r < r_new; ++r)
            gx[0][r] = p[r];
        for (int k = 1; k < d; ++k)
        {
            const Cplx pole_scale = basis_coeff_pole(k);
            const Cplx denom = exp_.scalings[k - 1] * pole_divisor(mu_, exp_.poles[k - 1]);
            for (int r = 0; r < r_new; ++r)
            {
                const Cplx rhs = ((r < r_old)
                                      ? basis_.g_at(k - 1, last, r) + pole_scale * basis_.g_at(k, last, r)
                                      : Cplx(0.0));
                gx[k][r] = (rhs + (mu_ - exp_.nodes[k - 1]) * gx[k - 1][r]) / denom;
            }
        }

        // Hessenberg orthogonalization in coefficient space (CGS with one
        // reorthogonalization pass)
        std::vector<Cplx> h(m + 2, Cplx(0.0));
        double before = 0.0;
        for (int i = 0; i < d; ++i)
            for (int r = 0; r < r_new; ++r)
                before += std::norm(gx[i][r]);
        before = std::sqrt(before);
        for (int pass = 0; pass < 2; ++pass)
            for (int c = 0; c < m; ++c)
            {
                Cplx proj(0.0);
                for (int i = 0; i < d; ++i)
                {
                    const auto &col = basis_.g[i][c];
                    for (std::size_t r = 0; r < col.size() && r < gx[i].size(); ++r)
                        proj += std::conj(col[r]) * gx[i][r];
                }
                h[c] += proj;
                for (int i = 0; i < d; ++i)
                {
                    const auto &col = basis_.g[i][c];
                    for (std::size_t r = 0; r < col.size() && r < gx[i].size(); ++r)
                        gx[i][r] -= proj * col[r];
                }
            }
        double beta = 0.0;
        for (int i = 0; i < d; ++i)
            for (int r = 0; r < r_new; ++r)
                beta += std::norm(gx[i][r]);
        beta = std::sqrt(beta);
        h[m] = beta; // actually h(m+1, m); caller interprets
        if (beta > 1e-300)
            for (int i = 0; i < d; ++i)
                for (Cplx &c : gx[i])
                    c /= beta;
        for (int i = 0; i < d; ++i)
            basis_.g[i].push_back(std::move(gx[i]));
        // pad: columns store own-length coefficients; g_at zero-extends

        std::vector<Cplx> column(m + 1);
        for (int c = 0; c < m; ++c)
            column[c] = h[c];
        column[m] = beta;
        return column; // entries H(0..m-1, m-1) and H(m, m-1)
    }

private:
    Cplx basis_coeff_pole(int k) const
    {
        return exp_.pole_is_infinite(k) ? Cplx(0.0)
                                        : Cplx(exp_.scalings[k - 1], 0.0) / exp_.poles[k - 1];
    }

    const nep::RationalNEP &problem_;
    const NleigsExpansion &exp_;
    Cplx mu_;
    CompactBasis basis_;
    ShiftContext ctx_;
};

} // namespace

NleigsSolver::NleigsSolver(const nep::RationalNEP &problem, const ComplexDisk &sigma,
                           SolverOptions options)
    : problem_(problem), options_(options)
{
    int d = options_.degree;
    if (d < 0)
    {
        const auto [p, q] = problem.rational_type();
        d = std::max(p, q + 1);
        d = std::max(d, 1);
    }
    expansion_ = leja_bagby_points(sigma, problem.singularities(), d);
    scalar_divided_differences(problem, expansion_);
    if (options_.keep < 0)
        options_.keep = std::max(2 * options_.nev, options_.nev + 8);
}

lina::ZMat NleigsSolver::arnoldi_hessenberg(Cplx mu, int k, std::size_t *basis_complex_count) const
{
    CompactArnoldi arnoldi(problem_, expansion_, mu, options_.seed);
    lina::ZMat h(k + 1, k);
    for (int step = 0; step < k; ++step)
    {
        const std::vector<Cplx> col = arnoldi.step();
        for (int i = 0; i <= step + 1; ++i)
            h(i, step) = col[i];
    }
    if (basis_complex_count)
        *basis_complex_count = arnoldi.basis().complex_count();
    return h;
}

SolveReport NleigsSolver::solve(Cplx mu) const
{
    for (const Cplx &g : expansion_.poles)
        if (!is_inf(g) && std::abs(g - mu) < 1e-12 * (1.0 + std::abs(mu)))
            throw SingularShift("shift coincides with a singularity");

    const int d = expansion_.degree;
    const int n = problem_.dim;
    const int keep = std::min(options_.keep, std::max(2, n * d / 2));
    const int m_max = std::min(std::max(2 * keep, keep + 8), n * d);

    CompactArnoldi arnoldi(problem_, expansion_, mu, options_.seed);
    lina::ZMat bmat(m_max + 1, m_max + 1); // active recurrence matrix (m x m in use)
    std::vector<Cplx> rrow(m_max + 1, Cplx(0.0));
    int m = 0;

    SolveReport report;
    std::vector<ResonancePair> converged_pairs;

    // Ritz pairs from the Schur form t with basis combination z: the Ritz
    // vector over the original basis columns is z * s.
    auto extract_pairs = [&](const lina::ZMat &t, const lina::ZMat &z,
                             int mm) -> std::vector<ResonancePair>
    {
        std::vector<ResonancePair> out;
        const auto &basis = arnoldi.basis();
        for (int i = 0; i < mm; ++i)
        {
            const Cplx theta = t(i, i);
            if (std::abs(theta) < 1e-10)
                continue; // maps to |omega - mu| ~ 1/|theta| huge
            const Cplx omega = mu + 1.0 / theta;
            const std::vector<Cplx> s = lina::triangular_eigenvector(t, i);
            std::vector<Cplx> zs(mm, Cplx(0.0));
            for (int r = 0; r < mm; ++r)
                for (int c = 0; c < mm; ++c)
                    zs[r] += z(r, c) * s[c];
            ResonancePair pair;
            pair.omega = omega;
            pair.shift = mu;
            // xi from the first block row
            std::vector<Cplx> coef(basis.rank(), Cplx(0.0));
            for (int c = 0; c < mm; ++c)
                for (int r = 0; r < basis.rank(); ++r)
                    coef[r] += basis.g_at(0, c, r) * zs[c];
            std::vector<Cplx> xi(n, Cplx(0.0));
            for (int r = 0; r < basis.rank(); ++r)
                for (int idx = 0; idx < n; ++idx)
                    xi[idx] += coef[r] * basis.u_cols[r][idx];
            const double nrm = vec_norm(xi);
            if (nrm < 1e-300)
                continue;
            for (Cplx &c : xi)
                c /= nrm;
            pair.eigenvector = std::move(xi);
            pair.residual = problem_.residual(omega, pair.eigenvector);
            pair.converged = pair.residual <= options_.tol;
            out.push_back(std::move(pair));
        }
        return out;
    };

    bool breakdown = false;
    for (int restart = 0; restart <= options_.max_restarts; ++restart)
    {
        report.restarts = restart;
        // expand to m_max
        while (m < m_max && !breakdown)
        {
            const std::vector<Cplx> col = arnoldi.step();
            for (int i = 0; i < m; ++i)
                bmat(i, m) = col[i];
            bmat(m, m) = col[m];
            // row m of bmat for columns < m comes from the previous coupling row
            for (int c = 0; c < m; ++c)
                bmat(m, c) = rrow[c];
            std::fill(rrow.begin(), rrow.end(), Cplx(0.0));
            rrow[m] = col[m + 1];
            ++m;
            ++report.arnoldi_steps;
            if (std::abs(col[m]) < 1e-14)
                breakdown = true; // invariant subspace found
        }

        // Schur form of the active matrix
        lina::ZMat t(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                t(i, j) = bmat(i, j);
        lina::ZMat z = lina::ZMat::identity(m);
        lina::hessenberg(t, &z);
        lina::schur_hessenberg(t, z);
        std::vector<Cplx> coupling(m, Cplx(0.0));

        // order wanted Ritz values (largest |theta|, i.e. closest to mu) first
        const int want = std::min(keep, m);
        for (int pos = 0; pos < want; ++pos)
        {
            int best = pos;
            for (int i = pos + 1; i < m; ++i)
                if (std::abs(t(i, i)) > std::abs(t(best, best)))
                    best = i;
            for (int i = best; i > pos; --i)
                lina::schur_swap(t, z, i - 1);
        }
        // coupling row after the reordering
        for (int c = 0; c < m; ++c)
        {
            Cplx acc(0.0);
            for (int j = 0; j < m; ++j)
                acc += rrow[j] * z(j, c);
            coupling[c] = acc;
        }

        // convergence check on the current window
        std::vector<ResonancePair> pairs = extract_pairs(t, z, m);
        int n_conv = 0;
        for (const auto &p : pairs)
            if (p.converged && expansion_.sigma.contains(p.omega, 1e-9 * expansion_.sigma.radius))
                ++n_conv;
        const bool done = n_conv >= options_.nev || restart == options_.max_restarts || breakdown;
        if (done)
        {
            std::vector<ResonancePair> final_pairs;
            for (auto &p : pairs)
                if (expansion_.sigma.contains(p.omega, 1e-9 * expansion_.sigma.radius) &&
                    p.residual <= options_.tol)
                    final_pairs.push_back(std::move(p));
            std::sort(final_pairs.begin(), final_pairs.end(),
                      [](const ResonancePair &a, const ResonancePair &b)
                      { return a.residual < b.residual; });
            report.pairs = std::move(final_pairs);
            report.all_converged = n_conv >= options_.nev;
            report.basis_complex_count = arnoldi.basis().complex_count();
            return report;
        }

        // truncate: keep the leading `want` Schur vectors plus the residual column
        auto &basis = arnoldi.basis();
        const int old_cols = basis.n_cols(); // m basis columns + residual column
        const int rk = basis.rank();
        for (int blk = 0; blk < d; ++blk)
        {
            std::vector<std::vector<Cplx>> fresh(want + 1);
            for (int c = 0; c < want; ++c)
            {
                fresh[c].assign(rk, Cplx(0.0));
                for (int j = 0; j < m; ++j)
                {
                    const Cplx zjc = z(j, c);
                    if (zjc == Cplx(0.0))
                        continue;
                    for (int r = 0; r < rk; ++r)
                        fresh[c][r] += basis.g_at(blk, j, r) * zjc;
                }
            }
            // residual vector stays as the last column
            fresh[want].assign(rk, Cplx(0.0));
            for (int r = 0; r < rk; ++r)
                fresh[want][r] = basis.g_at(blk, old_cols - 1, r);
            basis.g[blk] = std::move(fresh);
        }
        for (int i = 0; i < m_max + 1; ++i)
            for (int j = 0; j < m_max + 1; ++j)
                bmat(i, j) = (i < want && j < want) ? t(i, j) : Cplx(0.0);
        std::fill(rrow.begin(), rrow.end(), Cplx(0.0));
        for (int c = 0; c < want; ++c)
            rrow[c] = coupling[c];
        m = want;
    }
    return report; // unreachable
}

} // namespace reson::nleigs
