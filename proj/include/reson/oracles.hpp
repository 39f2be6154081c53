// SPDX-License-Identifier: Apache-2.0
//
// Semi-analytic reference solutions: closed-form slab resonances, the
// transfer-matrix determinant for layered profiles, and Bessel/Hankel
// resonance relations for the disk and the coated disk.

#ifndef RESON_ORACLES_HPP
#define RESON_ORACLES_HPP

#include <functional>
#include <string>
#include <vector>

#include "reson/lina.hpp"
#include "reson/materials.hpp"
#include "reson/types.hpp"

namespace reson::oracles
{

struct LayeredProfile
{
    std::vector<double> breakpoints;  // 0 = x_0 < ... < x_N = 1
    std::vector<Cplx> indices;        // n_j per layer (n = 1 for x > 1)
    Polarization polarization = Polarization::TM;
};

enum class ReferenceSource
{
    ClosedForm,
    NewtonOnDet,
    NewtonOnBesselRelation
};

struct ReferenceEigenvalue
{
    Cplx omega{0.0, 0.0};
    ReferenceSource source = ReferenceSource::ClosedForm;
    double residual = 0.0;
    int angular_mode = 0;
};

struct SlabMode
{
    Cplx omega;
    Cplx a2_over_a1; // B_1 = -A_1, B_2 = 0
};

// Exact resonances of the two-layer slab with interface at x = a:
//   TM: omega_m = ((2m+1) pi - i Log mu)/(2 n1 a),  mu = (n1+1)/(n1-1)
//   TE: omega_m = (2 m pi - i Log mu)/(2 n1 a)
SlabMode slab_exact(double n1, double a, int m, Polarization pol);

// Exact eigenfunction of the slab mode on (0, 1): A1 normalized to 1.
Cplx slab_eigenfunction(double n1, double a, const SlabMode &mode, double x,
                        Polarization pol, Cplx *derivative = nullptr);

// 2N x 2N matrix enforcing u(0) = 0, interface continuity of u and rho u',
// and the DtN condition u'(1) = i omega u(1); rows scaled to unit max
// magnitude before the determinant.
lina::ZMat transfer_matrix(const LayeredProfile &profile, Cplx omega);
Cplx transfer_determinant(const LayeredProfile &profile, Cplx omega);

// Coefficient vector z = (A_1, B_1, ..., A_N, B_N) at a resonance
// (smallest singular vector of Q).
std::vector<Cplx> transfer_null_vector(const LayeredProfile &profile, Cplx omega);

// Evaluate the piecewise-exponential eigenfunction from transfer coefficients.
Cplx layered_eigenfunction(const LayeredProfile &profile, Cplx omega,
                           const std::vector<Cplx> &z, double x, Cplx *derivative = nullptr);

// Complex Newton with a central finite-difference derivative.
ReferenceEigenvalue newton_root(const std::function<Cplx(Cplx)> &f, Cplx omega0,
                                int max_iter = 200);

// Single disk: J_m(a n1 w) H_m^(1)'(a w) - g J'_m(a n1 w) H_m^(1)(a w),
// g = n1 (TM) or 1/n1 (TE).
Cplx disk_relation(double n1, double a, int m, Polarization pol, Cplx omega);

// Coated disk: F_m = f1 f4 - f2 f3 with the dispersive coating index
// n2(omega) from the material model (Im n2 >= 0 branch).
Cplx coated_disk_relation(double n1, const materials::PermittivityModel &coating, double r1,
                          double r2, int m, Polarization pol, Cplx omega);

// Grid-seeded Newton over a rectangle, duplicates merged at 1e-8.
std::vector<ReferenceEigenvalue> reference_sweep(const std::function<Cplx(Cplx)> &relation,
                                                 Cplx corner_lo, Cplx corner_hi, int grid = 48,
                                                 double residual_cap = 1e-10);

// Multislab benchmark profile n = (1, 10, 2, 5) on (0, 1).
LayeredProfile multislab_profile(Polarization pol);
// Two-layer slab profile (n1 on (0, a), vacuum on (a, 1)).
LayeredProfile slab_profile(double n1, double a, Polarization pol);

} // namespace reson::oracles

#endif // RESON_ORACLES_HPP
