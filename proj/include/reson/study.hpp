// SPDX-License-Identifier: Apache-2.0
//
// Convergence machinery: refinement ladders under the classical and
// a-priori strategies, discrete eigenfunction error norms, log-log slope
// fits and the DoF gain at matched error.

#ifndef RESON_STUDY_HPP
#define RESON_STUDY_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "reson/fem1d.hpp"
#include "reson/materials.hpp"
#include "reson/mesh.hpp"
#include "reson/nleigs.hpp"
#include "reson/refine.hpp"

namespace reson::study
{

struct ConvergenceRecord
{
    int dofs = 0;
    Cplx omega_fem{0.0, 0.0};
    double eigenvalue_error = -1.0; // relative, vs the reference
    double l2_error = -1.0;         // discrete L2, Lobatto-point quadrature
    double h1_error = -1.0;         // discrete H1, Gauss-point derivative part
    double wall_seconds = 0.0;
};

enum class LadderMode
{
    ClassicalH,
    ClassicalP,
    StrategyH, // sh-FE
    StrategyP  // hp-FE
};

LadderMode ladder_mode_from_string(const std::string &name);
std::string ladder_mode_name(LadderMode mode);

// exact eigenfunction: u(x) returned, derivative through the pointer
using ExactFunction = std::function<Cplx(double, Cplx *)>;

struct StudyConfig
{
    int rungs = 6;     // h ladders: uniform refinements of the base mesh
    int p_fixed = 1;   // degree for h ladders
    int p_min = 1;     // first degree for p ladders
    int p_max = 12;    // last degree for p ladders
    Cplx shift{0.0, 0.0};
    double radius = 1.0;
    Cplx reference{0.0, 0.0};
    ExactFunction exact; // empty: eigenfunction errors skipped
    double solver_tol = 1e-9;
    int nev = 6;
};

std::vector<ConvergenceRecord> run_ladder(const mesh::Mesh1D &base,
                                          const materials::MaterialTable &table,
                                          Polarization pol, LadderMode mode,
                                          const StudyConfig &config);

// Discrete error norms of a FE eigenvector against the exact eigenfunction,
// aligned by the maximal-magnitude DoF (eigenvectors carry arbitrary
// complex scale). L2 part sampled at the p+1 Lobatto points, the H1
// derivative part at the p Gauss points of each element.
struct FunctionErrors
{
    double l2 = 0.0;
    double h1 = 0.0;
};
FunctionErrors eigenfunction_errors(const fem1d::Fem1DSystem &system,
                                    const std::vector<Cplx> &u, const ExactFunction &exact);

// least-squares slope of log(y) against log(x)
double fit_loglog_slope(const std::vector<double> &x, const std::vector<double> &y);
// least-squares decay alpha of y ~ C exp(-alpha x)
double fit_exponential_rate(const std::vector<double> &x, const std::vector<double> &y);

// DoFs needed at the target error, log-interpolated along the ladder.
double dofs_at_error(const std::vector<ConvergenceRecord> &records, double target_error);

// 1 - N_strategy / N_classical at matched error.
double gain_at_error(const std::vector<ConvergenceRecord> &classical,
                     const std::vector<ConvergenceRecord> &strategy, double target_error);

} // namespace reson::study

#endif // RESON_STUDY_HPP
