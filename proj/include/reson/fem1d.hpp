// SPDX-License-Identifier: Apache-2.0
//
// Assembly of the 1D DtN finite element matrices with variable-degree
// Gauss-Lobatto bases, and construction of the rational eigenproblem
// T1(omega) = sum_m { rho_m(omega) A_m - omega^2 eta_m(omega) M_m } - i omega rho_0 E.

#ifndef RESON_FEM1D_HPP
#define RESON_FEM1D_HPP

#include <map>
#include <string>
#include <vector>

#include "reson/lina.hpp"
#include "reson/materials.hpp"
#include "reson/mesh.hpp"
#include "reson/nep.hpp"

namespace reson::fem1d
{

struct DofInfo
{
    double position = 0.0; // physical node coordinate
};

struct Fem1DSystem
{
    // per-material stiffness and mass (complex symmetric, Dirichlet rows removed)
    std::map<std::string, lina::SparseMatrix> stiffness;
    std::map<std::string, lina::SparseMatrix> mass;
    lina::SparseMatrix boundary; // E: DtN endpoint matrix
    int dim = 0;
    std::vector<DofInfo> dofs;       // active DoFs in global order
    std::vector<int> full_to_active; // -1 for eliminated Dirichlet DoFs
    std::vector<std::vector<int>> element_dofs; // active numbering, -1 eliminated
    mesh::Mesh1D mesh;

    // evaluate a coefficient vector as a function of x (and derivative)
    Cplx eval(const std::vector<Cplx> &u, double x, Cplx *du = nullptr) const;
};

Fem1DSystem assemble_1d(const mesh::Mesh1D &mesh);

// quadrature_boost raises the Gauss order above the p_j+1 default (used by
// the exactness study in the tests).
Fem1DSystem assemble_1d(const mesh::Mesh1D &mesh, int quadrature_boost);

nep::RationalNEP build_nep_1d(const Fem1DSystem &system,
                              const materials::MaterialTable &table,
                              Polarization polarization);

// Coefficient helpers shared with the radial variant.
nep::NepCoefficient coeff_rho(const materials::PermittivityModel &m, Polarization pol);
nep::NepCoefficient coeff_mass(const materials::PermittivityModel &m, Polarization pol);

// Matrix Market export for external cross-checks.
void write_matrix_market(const lina::SparseMatrix &a, const std::string &path);

} // namespace reson::fem1d

#endif // RESON_FEM1D_HPP
