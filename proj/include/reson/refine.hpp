// SPDX-License-Identifier: Apache-2.0
//
// A-priori hp refinement: per-cell wavenumber bounds over the spectral
// region, the global mesh indicator gamma_0 = (k_0 h_0 / 2 p_0)^{p_0}, and
// the h- and p-strategies that enforce (k_j h_j / 2 p_j)^{p_j} <= gamma_0.

#ifndef RESON_REFINE_HPP
#define RESON_REFINE_HPP

#include <string>
#include <vector>

#include "reson/materials.hpp"
#include "reson/mesh.hpp"
#include "reson/types.hpp"

namespace reson::refine
{

struct SpectralRegion
{
    Cplx mu{0.0, 0.0};
    double r_mu = 0.0;

    ComplexDisk disk() const { return {mu, r_mu}; }
};

enum class StrategyMode
{
    HStrategy,
    PStrategy
};

struct CellTarget
{
    double h = 0.0;
    int p = 1;
    double k = 0.0;
};

struct RefinementPlan
{
    std::vector<CellTarget> cells;
    double gamma0 = 0.0;
    bool feasible = false;
};

// lambda_j = argmax over the sampled region of |n_j|, k_j per the
// small-index rule; RegionInvalid when a material pole/zero lies inside.
std::pair<Cplx, double> cell_wavenumber(const materials::PermittivityModel &model,
                                        const SpectralRegion &region);

double global_indicator(const mesh::Mesh1D &mesh, const std::vector<double> &k_values, int p0,
                        StrategyMode mode);

// goal check for one cell
inline double goal_value(double k, double h, int p)
{
    return std::pow(k * h / (2.0 * p), p);
}

struct HStrategyResult
{
    mesh::Mesh1D mesh;
    std::vector<double> k_values; // per refined cell
    RefinementPlan plan;
};

HStrategyResult h_strategy(const mesh::Mesh1D &mesh, const std::vector<double> &k_values, int p0,
                           double gamma0);

RefinementPlan p_strategy(const mesh::Mesh1D &mesh, const std::vector<double> &k_values, int p0,
                          double gamma0);

struct RefineOutcome
{
    mesh::Mesh1D mesh;
    RefinementPlan plan;
};

RefineOutcome apriori_refine(const mesh::Mesh1D &mesh, const materials::MaterialTable &table,
                             const SpectralRegion &region, int p0, StrategyMode mode);

// root of F(z) = (c/z)^z - gamma0 in [1, p0] minimizing |p0 - z| (Newton
// with analytic derivative and bisection fallback). Returns < 1 when the
// goal already holds at p = 1; throws StrategyInfeasible when unreachable.
double p_strategy_root(double kh, int p0, double gamma0);

} // namespace reson::refine

#endif // RESON_REFINE_HPP
