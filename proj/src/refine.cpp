// SPDX-License-Identifier: Apache-2.0

#include "reson/refine.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace reson::refine
{

std::pair<Cplx, double> cell_wavenumber(const materials::PermittivityModel &model,
                                        const SpectralRegion &region)
{
    if (!(region.r_mu > 0.0))
        throw RegionInvalid("spectral region radius must be positive");
    for (const Cplx &p : model.all_poles())
        if (std::abs(p - region.mu) <= region.r_mu)
            throw RegionInvalid("material pole inside the spectral region");
    if (!model.is_constant())
        for (const Cplx &z : model.all_zeros())
            if (std::abs(z - region.mu) <= region.r_mu)
                throw RegionInvalid("material zero inside the spectral region");

    // argmax of |n| over the sampled disk; density doubled until the
    // maximizer stabilizes
    Cplx lambda = region.mu;
    double best = std::abs(model.refractive_index(region.mu));
    int n_angle = 256, n_ring = 8;
    for (int round = 0; round < 5; ++round)
    {
        Cplx new_lambda = region.mu;
        double new_best = std::abs(model.refractive_index(region.mu));
        for (int ring = 1; ring <= n_ring + 1; ++ring)
        {
            const double rad = region.r_mu * ring / (n_ring + 1.0);
            for (int a = 0; a < n_angle; ++a)
            {
                const Cplx w = region.mu + rad * std::polar(1.0, 2.0 * kPi * a / n_angle);
                double v;
                try
                {
                    v = std::abs(model.refractive_index(w));
                }
                catch (const PoleProximity &)
                {
                    throw RegionInvalid("pole proximity while sampling the region");
                }
                // plateau tie: keep the sampled maximizer of smallest |omega|
                if (v > new_best + 1e-15 ||
                    (std::abs(v - new_best) <= 1e-15 && std::abs(w) < std::abs(new_lambda)))
                {
                    new_best = v;
                    new_lambda = w;
                }
            }
        }
        const bool settled = std::abs(new_lambda - lambda) < 1e-3 && round > 0;
        lambda = new_lambda;
        best = new_best;
        if (settled)
            break;
        n_angle *= 2;
        n_ring *= 2;
    }
    const double k = (best < 1.0) ? std::abs(region.mu) : best * std::abs(region.mu);
    return {lambda, k};
}

double global_indicator(const mesh::Mesh1D &mesh, const std::vector<double> &k_values, int p0,
                        StrategyMode mode)
{
    if (mesh.n_elements() == 0 || p0 < 1)
        throw DomainError("global_indicator requires nonempty mesh and p0 >= 1");
    double k0, h0;
    if (mode == StrategyMode::HStrategy)
    {
        k0 = *std::min_element(k_values.begin(), k_values.end());
        h0 = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < mesh.n_elements(); ++j)
            if (k_values[j] == k0)
                h0 = std::min(h0, mesh.elements()[j].size());
    }
    else
    {
        k0 = *std::max_element(k_values.begin(), k_values.end());
        h0 = 0.0;
        for (std::size_t j = 0; j < mesh.n_elements(); ++j)
            if (k_values[j] == k0)
                h0 = std::max(h0, mesh.elements()[j].size());
    }
    return goal_value(k0, h0, p0);
}

HStrategyResult h_strategy(const mesh::Mesh1D &mesh, const std::vector<double> &k_values, int p0,
                           double gamma0)
{
    if (!(gamma0 < 1.0))
        throw StrategyInfeasible("gamma0 >= 1: restart with modified input parameters");
    HStrategyResult out;
    out.mesh = mesh;
    out.k_values = k_values;
    const double k0 = *std::min_element(k_values.begin(), k_values.end());
    double h0 = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < mesh.n_elements(); ++j)
        if (k_values[j] == k0)
            h0 = std::min(h0, mesh.elements()[j].size());

    // split until h_j <= (k0/kj) h0
    for (std::size_t j = 0; j < out.mesh.n_elements();)
    {
        const double target = (k0 / out.k_values[j]) * h0;
        if (out.mesh.elements()[j].size() > target * (1.0 + 1e-12))
        {
            if (out.mesh.elements()[j].refine_level >= 30)
                throw InfeasibleRefinement("more than 30 split levels required");
            out.mesh.split(j);
            out.k_values.insert(out.k_values.begin() + j, out.k_values[j]);
        }
        else
        {
            ++j;
        }
    }
    // level smoothing: neighbors at most one refinement level apart
    bool changed = true;
    while (changed)
    {
        changed = false;
        for (std::size_t j = 0; j + 1 < out.mesh.n_elements(); ++j)
        {
            const int li = out.mesh.elements()[j].refine_level;
            const int lr = out.mesh.elements()[j + 1].refine_level;
            if (li + 1 < lr)
            {
                out.mesh.split(j);
                out.k_values.insert(out.k_values.begin() + j, out.k_values[j]);
                changed = true;
                break;
            }
            if (lr + 1 < li)
            {
                out.mesh.split(j + 1);
                out.k_values.insert(out.k_values.begin() + j + 1, out.k_values[j + 1]);
                changed = true;
                break;
            }
        }
    }
    out.mesh.set_uniform_degree(p0);
    out.plan.gamma0 = gamma0;
    out.plan.feasible = true;
    for (std::size_t j = 0; j < out.mesh.n_elements(); ++j)
        out.plan.cells.push_back({out.mesh.elements()[j].size(), p0, out.k_values[j]});
    return out;
}

double p_strategy_root(double kh, int p0, double gamma0)
{
    const double c = 0.5 * kh;
    auto f = [&](double z) { return std::pow(c / z, z) - gamma0; };
    auto fp = [&](double z) { return std::pow(c / z, z) * (std::log(c / z) - 1.0); };
    if (f(static_cast<double>(p0)) > 0.0)
        throw StrategyInfeasible("goal unreachable within [1, p0]");
    if (f(1.0) <= 0.0)
        return 0.5; // only roots below 1: p = 1 already over-satisfies the goal

    // Newton from z0 = p0 (converges to the larger root)
    double z = static_cast<double>(p0);
    bool ok = false;
    for (int it = 0; it < 100; ++it)
    {
        const double fv = f(z);
        const double dv = fp(z);
        if (dv == 0.0)
            break;
        const double step = fv / dv;
        const double znew = z - step;
        if (znew < 1.0 || znew > p0 || !std::isfinite(znew))
            break;
        z = znew;
        if (std::abs(step) < 1e-13 * (1.0 + z))
        {
            ok = true;
            break;
        }
    }
    if (!ok || std::abs(f(z)) > 1e-10 * std::max(gamma0, 1e-300))
    {
        // bisection fallback on a bracket found by coarse scanning
        double lo = 1.0, hi = static_cast<double>(p0);
        double flo = f(lo);
        const int scan = 256;
        for (int i = 1; i <= scan; ++i)
        {
            const double x = 1.0 + (p0 - 1.0) * i / scan;
            const double fx = f(x);
            if ((flo > 0.0) != (fx > 0.0))
            {
                hi = x;
                break;
            }
            lo = x;
            flo = fx;
        }
        for (int it = 0; it < 200; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            ((f(mid) > 0.0) == (flo > 0.0) ? lo : hi) = mid;
        }
        z = 0.5 * (lo + hi);
        if (std::abs(f(z)) > 1e-8)
            throw NewtonDivergence("p-strategy root polish failed");
    }
    return z;
}

RefinementPlan p_strategy(const mesh::Mesh1D &mesh, const std::vector<double> &k_values, int p0,
                          double gamma0)
{
    if (!(gamma0 < 1.0))
        throw StrategyInfeasible("gamma0 >= 1: restart with modified input parameters");
    RefinementPlan plan;
    plan.gamma0 = gamma0;
    plan.feasible = true;
    for (std::size_t j = 0; j < mesh.n_elements(); ++j)
    {
        const double kh = k_values[j] * mesh.elements()[j].size();
        const double z = p_strategy_root(kh, p0, gamma0);
        const int pj = std::max(1, static_cast<int>(std::ceil(z)));
        plan.cells.push_back({mesh.elements()[j].size(), std::min(pj, p0), k_values[j]});
    }
    return plan;
}

RefineOutcome apriori_refine(const mesh::Mesh1D &mesh, const materials::MaterialTable &table,
                             const SpectralRegion &region, int p0, StrategyMode mode)
{
    mesh.validate();
    // k_j per cell, cached per material
    std::map<std::string, double> k_cache;
    std::vector<double> k_values;
    for (const auto &e : mesh.elements())
    {
        auto it = k_cache.find(e.material);
        if (it == k_cache.end())
            it = k_cache.emplace(e.material, cell_wavenumber(table.get(e.material), region).second)
                     .first;
        k_values.push_back(it->second);
    }
    const double gamma0 = global_indicator(mesh, k_values, p0, mode);
    if (!(gamma0 < 1.0))
        throw StrategyInfeasible("gamma0 >= 1: restart with modified input parameters");

    RefineOutcome out;
    if (mode == StrategyMode::HStrategy)
    {
        HStrategyResult hs = h_strategy(mesh, k_values, p0, gamma0);
        out.mesh = std::move(hs.mesh);
        out.plan = std::move(hs.plan);
    }
    else
    {
        out.plan = p_strategy(mesh, k_values, p0, gamma0);
        out.mesh = mesh;
        for (std::size_t j = 0; j < out.mesh.n_elements(); ++j)
            out.mesh.elements()[j].degree = out.plan.cells[j].p;
    }
    // post-check: every cell satisfies the goal
    for (const auto &c : out.plan.cells)
        if (goal_value(c.k, c.h, c.p) > out.plan.gamma0 * (1.0 + 1e-12) + 1e-14)
            throw InfeasibleRefinement("refined mesh violates the goal condition");
    return out;
}

} // namespace reson::refine
