// SPDX-License-Identifier: Apache-2.0

#include "reson/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace reson::mesh
{

Mesh1D::Mesh1D(std::vector<double> breakpoints, std::vector<std::string> materials,
               std::vector<int> degrees, BoundaryKind left, BoundaryKind right)
    : left_(left), right_(right)
{
    if (breakpoints.size() < 2 || materials.size() + 1 != breakpoints.size() ||
        degrees.size() != materials.size())
        throw MeshInvalid("inconsistent mesh description");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    {
        if (!(breakpoints[i] < breakpoints[i + 1]))
            throw MeshInvalid("breakpoints must be strictly increasing");
        Element e;
        e.x_left = breakpoints[i];
        e.x_right = breakpoints[i + 1];
        e.material = materials[i];
        e.degree = degrees[i];
        elems_.push_back(e);
    }
    validate();
}

void Mesh1D::split(std::size_t k)
{
    Element left = elems_[k], right = elems_[k];
    const double mid = elems_[k].mid();
    left.x_right = mid;
    right.x_left = mid;
    ++left.refine_level;
    ++right.refine_level;
    elems_[k] = left;
    elems_.insert(elems_.begin() + k + 1, right);
}

void Mesh1D::refine_uniform()
{
    for (std::size_t k = elems_.size(); k-- > 0;)
        split(k);
}

void Mesh1D::set_uniform_degree(int p)
{
    for (Element &e : elems_)
        e.degree = p;
}

int Mesh1D::n_dofs_total() const
{
    int n = 1;
    for (const Element &e : elems_)
        n += e.degree;
    return n;
}

void Mesh1D::validate() const
{
    if (elems_.empty())
        throw MeshInvalid("empty mesh");
    for (std::size_t i = 0; i < elems_.size(); ++i)
    {
        if (!(elems_[i].size() > 0.0))
            throw MeshInvalid("non-positive element size");
        if (elems_[i].degree < 1)
            throw MeshInvalid("element degree must be >= 1");
        if (i > 0 && std::abs(elems_[i].x_left - elems_[i - 1].x_right) > 1e-14)
            throw MeshInvalid("elements not contiguous");
    }
}

// ----------------------------------------------------------------------

namespace
{

double legendre(int n, double x, double &dp)
{
    double p0 = 1.0, p1 = x;
    if (n == 0)
    {
        dp = 0.0;
        return 1.0;
    }
    for (int k = 2; k <= n; ++k)
    {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    return p1;
}

QuadratureRule make_gauss_legendre(int n)
{
    QuadratureRule r;
    r.points.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i)
    {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it)
        {
            const double p = legendre(n, x, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        legendre(n, x, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.points[i] = -x;
        r.weights[i] = w;
        r.points[n - 1 - i] = x;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        r.points[n / 2] = 0.0;
    return r;
}

QuadratureRule make_gauss_lobatto(int p)
{
    // p+1 points: +-1 and the roots of P'_p.
    const int n = p + 1;
    QuadratureRule r;
    r.points.resize(n);
    r.weights.resize(n);
    r.points[0] = -1.0;
    r.points[n - 1] = 1.0;
    for (int i = 1; i < n - 1; ++i)
    {
        // Newton on P'_p with Chebyshev-Gauss-Lobatto initial guess
        double x = -std::cos(kPi * i / p);
        for (int it = 0; it < 100; ++it)
        {
            double dp = 0.0;
            const double pv = legendre(p, x, dp);
            // P''_p from the Legendre ODE: (1-x^2) P'' = 2x P' - p(p+1) P
            const double d2 = (2.0 * x * dp - p * (p + 1.0) * pv) / (1.0 - x * x);
            const double dx = dp / d2;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        r.points[i] = x;
    }
    std::sort(r.points.begin(), r.points.end());
    for (int i = 0; i < n; ++i)
    {
        double dp = 0.0;
        const double pv = legendre(p, r.points[i], dp);
        r.weights[i] = 2.0 / (p * (p + 1.0) * pv * pv);
    }
    return r;
}

std::mutex cache_mutex;

} // namespace

const QuadratureRule &gauss_legendre(int n)
{
    static std::map<int, QuadratureRule> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

const QuadratureRule &gauss_lobatto(int p)
{
    static std::map<int, QuadratureRule> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(p);
    if (it == cache.end())
        it = cache.emplace(p, make_gauss_lobatto(p)).first;
    return it->second;
}

LobattoBasis::LobattoBasis(int p) : p_(p)
{
    if (p < 1 || p > 60)
        throw DomainError("LobattoBasis supports 1 <= p <= 60");
    nodes_ = gauss_lobatto(p).points;
    const int n = p + 1;
    bary_.assign(n, 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i)
                bary_[i] /= (nodes_[i] - nodes_[j]);
}

void LobattoBasis::eval(double xi, std::vector<double> &phi, std::vector<double> &dphi) const
{
    const int n = p_ + 1;
    phi.assign(n, 0.0);
    dphi.assign(n, 0.0);
    // node coincidence: Kronecker values, differentiation-matrix derivatives
    for (int i = 0; i < n; ++i)
    {
        if (std::abs(xi - nodes_[i]) < 1e-13)
        {
            phi[i] = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i)
                {
                    dphi[j] = (bary_[j] / bary_[i]) / (nodes_[i] - nodes_[j]);
                    dphi[i] -= dphi[j];
                }
            return;
        }
    }
    // barycentric form: phi_i = l(xi) w_i/(xi-x_i), phi_i' = phi_i sum_{j != i} 1/(xi-x_j)
    double ell = 1.0;
    double sum_inv = 0.0;
    for (int j = 0; j < n; ++j)
    {
        ell *= (xi - nodes_[j]);
        sum_inv += 1.0 / (xi - nodes_[j]);
    }
    for (int i = 0; i < n; ++i)
    {
        phi[i] = ell * bary_[i] / (xi - nodes_[i]);
        dphi[i] = phi[i] * (sum_inv - 1.0 / (xi - nodes_[i]));
    }
}

const LobattoBasis &LobattoBasis::get(int p)
{
    static std::map<int, LobattoBasis> cache;
    static std::mutex basis_mutex;
    {
        std::lock_guard<std::mutex> lock(basis_mutex);
        const auto it = cache.find(p);
        if (it != cache.end())
            return it->second;
    }
    LobattoBasis fresh(p); // built outside the lock: pulls the node caches
    std::lock_guard<std::mutex> lock(basis_mutex);
    return cache.emplace(p, std::move(fresh)).first->second;
}

} // namespace reson::mesh
