// SPDX-License-Identifier: Apache-2.0
//
// Angular-mode reduction of the 2D radial-PML resonance problem: for a
// radially symmetric scatterer and u = R(r) e^{i m theta}, the PML form
// reduces per mode m to a 1D problem in r with coefficients
//   c_stiff = (alpha~/alpha) r,  c_angular = (alpha/alpha~) m^2 / r,
//   c_mass = alpha alpha~ r,
// which inside the physical region collapse to the TM/TE (rho, eta) pattern.

#ifndef RESON_FEM_RADIAL_HPP
#define RESON_FEM_RADIAL_HPP

#include <map>
#include <string>
#include <vector>

#include "reson/fem1d.hpp"
#include "reson/materials.hpp"
#include "reson/mesh.hpp"
#include "reson/nep.hpp"

namespace reson::fem_radial
{

struct RadialPmlProfile
{
    double a = 0.0;       // stretch-free radius
    double b = 0.0;       // ramp end
    double ell = 0.0;     // outer pad width; domain ends at b + ell
    double sigma0 = 5.0;  // PML strength

    // quintic ramp P with P(a)=P'(a)=P''(a)=0, P(b)=sigma0, P'(b)=P''(b)=0
    double ramp(double r) const;
    double ramp_derivative(double r) const;

    static RadialPmlProfile standard(double scatterer_radius, double sigma0 = 5.0);
};

struct PmlCoefficients
{
    Cplx alpha_tilde, alpha, r_tilde;
};
PmlCoefficients pml_functions(const RadialPmlProfile &profile, double r);

struct RadialScene
{
    std::vector<double> radii;           // material breakpoints in (0, a]
    std::vector<std::string> materials;  // per radial shell, inside out
    RadialPmlProfile pml;
    int angular_mode = 0;
    Polarization polarization = Polarization::TM;
};

// Radial mesh spanning [r_min, b + ell]; elements are aligned with the
// material breakpoints and with the PML ramp ends.
mesh::Mesh1D radial_mesh(const RadialScene &scene, int degree, int elements_per_region = 2);

struct RadialSystem
{
    std::map<std::string, lina::SparseMatrix> stiffness; // includes m^2/r block
    std::map<std::string, lina::SparseMatrix> mass;
    lina::SparseMatrix pml_stiffness; // frozen complex coefficients
    lina::SparseMatrix pml_mass;
    int dim = 0;
    int angular_mode = 0;
    std::vector<fem1d::DofInfo> dofs;
    std::vector<std::vector<int>> element_dofs;
    mesh::Mesh1D mesh;
};

inline constexpr double kAxisRadius = 1e-8; // first node offset from r = 0
inline constexpr int kQuadratureBoost = 3;  // Gauss order p + 4 by default

RadialSystem assemble_radial(const RadialScene &scene, const mesh::Mesh1D &mesh,
                             int extra_quadrature = 0);

nep::RationalNEP build_nep_radial(const RadialSystem &system,
                                  const materials::MaterialTable &table,
                                  Polarization polarization);

} // namespace reson::fem_radial

#endif // RESON_FEM_RADIAL_HPP
