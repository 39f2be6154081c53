// SPDX-License-Identifier: Apache-2.0
//
// File formats: scene and solver-config JSON, result JSON, CSV emitters,
// refinement-plan serialization, and the per-run manifest.

#ifndef RESON_IO_HPP
#define RESON_IO_HPP

#include <string>
#include <vector>

#include "reson/fem_radial.hpp"
#include "reson/mesh.hpp"
#include "reson/nleigs.hpp"
#include "reson/refine.hpp"
#include "reson/types.hpp"

namespace reson::io
{

struct Scene1D
{
    mesh::Mesh1D mesh;
    Polarization polarization = Polarization::TM;
};

// {"breakpoints": [...], "regions": [{"material": id, "p": int}, ...],
//  "bc": {"left": "dirichlet", "right": "dtn"}, "polarization": "TM"}
Scene1D load_scene_1d(const std::string &path);

// {"radii": [...], "materials": [...], "pml": {"sigma0": num, ...},
//  "m_range": [0, M], "polarization": "TM"|"TE"}
struct RadialSceneFile
{
    fem_radial::RadialScene scene; // angular_mode holds m_range start
    int m_lo = 0, m_hi = 0;
};
RadialSceneFile load_scene_radial(const std::string &path);

bool is_radial_scene(const std::string &path);

struct SolverConfig
{
    Cplx shift{0.0, 0.0};
    double radius = 0.5;
    int nev = 4;
    double tol = 1e-10;
    int max_restarts = 30;
    int degree = -1; // "auto"
    unsigned seed = 1234;
};
SolverConfig load_solver_config(const std::string &path);

std::string pairs_to_json(const std::vector<nleigs::ResonancePair> &pairs, bool all_converged);
std::string plan_to_json(const refine::RefinementPlan &plan);

// one manifest per run: canonical config text hash, code version, timing
void write_manifest(const std::string &out_dir, const std::string &command,
                    const std::string &config_text, double wall_seconds);

void write_text_atomic(const std::string &path, const std::string &content);

// full double precision, 17 significant digits
std::string format_full(double v);
std::string format_full(Cplx v);

// Distance-based duplicate merge keeping the entry with smaller weight;
// idempotent: merging a merged list changes nothing.
struct WeightedPoint
{
    Cplx z;
    double weight = 0.0;
    int tag = 0;
};
std::vector<WeightedPoint> merge_points(const std::vector<WeightedPoint> &points, double tol);

} // namespace reson::io

#endif // RESON_IO_HPP
