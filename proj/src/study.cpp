// SPDX-License-Identifier: Apache-2.0

#include "reson/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace reson::study
{

LadderMode ladder_mode_from_string(const std::string &name)
{
    if (name == "classical_h")
        return LadderMode::ClassicalH;
    if (name == "classical_p")
        return LadderMode::ClassicalP;
    if (name == "sh")
        return LadderMode::StrategyH;
    if (name == "hp")
        return LadderMode::StrategyP;
    throw DomainError("unknown ladder mode: " + name);
}

std::string ladder_mode_name(LadderMode mode)
{
    switch (mode)
    {
    case LadderMode::ClassicalH:
        return "classical_h";
    case LadderMode::ClassicalP:
        return "classical_p";
    case LadderMode::StrategyH:
        return "sh";
    case LadderMode::StrategyP:
        return "hp";
    }
    return "?";
}

FunctionErrors eigenfunction_errors(const fem1d::Fem1DSystem &system, const std::vector<Cplx> &u,
                                    const ExactFunction &exact)
{
    // align scale at the maximal-magnitude DoF
    std::size_t idx = 0;
    for (std::size_t i = 1; i < u.size(); ++i)
        if (std::abs(u[i]) > std::abs(u[idx]))
            idx = i;
    const double x_star = system.dofs[idx].position;
    const Cplx exact_at = exact(x_star, nullptr);
    const Cplx scale = exact_at / u[idx];

    double l2 = 0.0, l2_ref = 0.0, semi = 0.0, semi_ref = 0.0;
    for (std::size_t k = 0; k < system.mesh.n_elements(); ++k)
    {
        const auto &e = system.mesh.elements()[k];
        const double jac = 0.5 * e.size();
        // value part at the p+1 Lobatto points
        const auto &lob = mesh::gauss_lobatto(e.degree);
        for (std::size_t q = 0; q < lob.points.size(); ++q)
        {
            const double x = e.mid() + jac * lob.points[q];
            const Cplx uh = scale * system.eval(u, x);
            const Cplx ue = exact(x, nullptr);
            l2 += lob.weights[q] * jac * std::norm(uh - ue);
            l2_ref += lob.weights[q] * jac * std::norm(ue);
        }
        // derivative part at the p Gauss points
        const auto &gau = mesh::gauss_legendre(e.degree);
        for (std::size_t q = 0; q < gau.points.size(); ++q)
        {
            const double x = e.mid() + jac * gau.points[q];
            Cplx duh;
            system.eval(u, x, &duh);
            Cplx due;
            exact(x, &due);
            semi += gau.weights[q] * jac * std::norm(scale * duh - due);
            semi_ref += gau.weights[q] * jac * std::norm(due);
        }
    }
    FunctionErrors err;
    err.l2 = std::sqrt(l2 / l2_ref);
    err.h1 = std::sqrt((l2 + semi) / (l2_ref + semi_ref));
    return err;
}

namespace
{

ConvergenceRecord solve_once(const mesh::Mesh1D &mesh, const materials::MaterialTable &table,
                             Polarization pol, const StudyConfig &config)
{
    const auto t0 = std::chrono::steady_clock::now();
    ConvergenceRecord rec;
    const fem1d::Fem1DSystem system = fem1d::assemble_1d(mesh);
    rec.dofs = system.dim;
    const nep::RationalNEP problem = fem1d::build_nep_1d(system, table, pol);
    nleigs::SolverOptions opt;
    opt.nev = config.nev;
    opt.tol = config.solver_tol;
    nleigs::NleigsSolver solver(problem, ComplexDisk{config.shift, config.radius}, opt);
    const nleigs::SolveReport report = solver.solve(config.shift);

    const nleigs::ResonancePair *best = nullptr;
    for (const auto &p : report.pairs)
        if (!best || std::abs(p.omega - config.reference) < std::abs(best->omega - config.reference))
            best = &p;
    if (best)
    {
        rec.omega_fem = best->omega;
        rec.eigenvalue_error = std::abs(best->omega - config.reference) / std::abs(config.reference);
        if (config.exact)
        {
            const FunctionErrors fe = eigenfunction_errors(system, best->eigenvector, config.exact);
            rec.l2_error = fe.l2;
            rec.h1_error = fe.h1;
        }
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

} // namespace

std::vector<ConvergenceRecord> run_ladder(const mesh::Mesh1D &base,
                                          const materials::MaterialTable &table, Polarization pol,
                                          LadderMode mode, const StudyConfig &config)
{
    std::vector<ConvergenceRecord> records;
    const refine::SpectralRegion region{config.shift, config.radius};
    if (mode == LadderMode::ClassicalH || mode == LadderMode::StrategyH)
    {
        mesh::Mesh1D current = base;
        current.set_uniform_degree(config.p_fixed);
        for (int r = 0; r < config.rungs; ++r)
        {
            mesh::Mesh1D solve_mesh = current;
            if (mode == LadderMode::StrategyH)
                solve_mesh = refine::apriori_refine(current, table, region, config.p_fixed,
                                                    refine::StrategyMode::HStrategy)
                                 .mesh;
            records.push_back(solve_once(solve_mesh, table, pol, config));
            current.refine_uniform();
        }
    }
    else
    {
        for (int p = config.p_min; p <= config.p_max; ++p)
        {
            mesh::Mesh1D solve_mesh = base;
            solve_mesh.set_uniform_degree(p);
            if (mode == LadderMode::StrategyP)
                solve_mesh = refine::apriori_refine(solve_mesh, table, region, p,
                                                    refine::StrategyMode::PStrategy)
                                 .mesh;
            records.push_back(solve_once(solve_mesh, table, pol, config));
        }
    }
    return records;
}

double fit_loglog_slope(const std::vector<double> &x, const std::vector<double> &y)
{
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double fit_exponential_rate(const std::vector<double> &x, const std::vector<double> &y)
{
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        const double ly = std::log(y[i]);
        sx += x[i];
        sy += ly;
        sxx += x[i] * x[i];
        sxy += x[i] * ly;
    }
    return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double dofs_at_error(const std::vector<ConvergenceRecord> &records, double target_error)
{
    // scan from the asymptotic (fine) end for the bracketing pair; errors
    // measured by the eigenvalue error when present, else H1
    auto err_of = [](const ConvergenceRecord &r)
    { return r.eigenvalue_error >= 0.0 ? r.eigenvalue_error : r.h1_error; };
    std::vector<const ConvergenceRecord *> valid;
    for (const auto &r : records)
        if (err_of(r) > 0.0 && std::isfinite(err_of(r)))
            valid.push_back(&r);
    if (valid.size() < 2)
        throw OracleMissing("not enough ladder points for interpolation");
    for (std::size_t i = valid.size() - 1; i-- > 0;)
    {
        const double ea = err_of(*valid[i]), eb = err_of(*valid[i + 1]);
        if ((ea - target_error) * (eb - target_error) <= 0.0)
        {
            const double t = (std::log(target_error) - std::log(ea)) /
                             (std::log(eb) - std::log(ea));
            return std::exp(std::log(static_cast<double>(valid[i]->dofs)) +
                            t * (std::log(static_cast<double>(valid[i + 1]->dofs)) -
                                 std::log(static_cast<double>(valid[i]->dofs))));
        }
    }
    throw OracleMissing("ladder does not bracket the target error");
}

double gain_at_error(const std::vector<ConvergenceRecord> &classical,
                     const std::vector<ConvergenceRecord> &strategy, double target_error)
{
    const double nc = dofs_at_error(classical, target_error);
    const double ns = dofs_at_error(strategy, target_error);
    return 1.0 - ns / nc;
}

} // namespace reson::study
