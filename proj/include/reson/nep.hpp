// SPDX-License-Identifier: Apache-2.0
//
// Rational nonlinear eigenvalue problems T(omega) = sum_i f_i(omega) A_i.
// Coefficient functions carry their rational type and finite poles so the
// eigensolver can size its interpolation automatically.

#ifndef RESON_NEP_HPP
#define RESON_NEP_HPP

#include <functional>
#include <utility>
#include <vector>

#include "reson/lina.hpp"
#include "reson/types.hpp"

namespace reson::nep
{

struct NepCoefficient
{
    std::function<Cplx(Cplx)> eval;
    int num_degree = 0;
    int den_degree = 0;
    std::vector<Cplx> finite_poles; // listed with multiplicity

    static NepCoefficient polynomial(std::vector<Cplx> coeffs); // ascending
    static NepCoefficient constant(Cplx c) { return polynomial({c}); }
};

struct RationalNEP
{
    std::vector<lina::SparseMatrix> matrices;
    std::vector<NepCoefficient> coefficients;
    int dim = 0;

    // Combined rational type over the common denominator.
    std::pair<int, int> rational_type() const;

    // Union of the finite coefficient poles (with multiplicity).
    std::vector<Cplx> singularities() const;
    // Singularities within distance `slack`*radius of the disk boundary or inside.
    std::vector<Cplx> singularities_near(const ComplexDisk &sigma, double factor = 4.0) const;

    // T(omega) assembled as one sparse matrix.
    lina::SparseMatrix assemble(Cplx omega) const;

    // y = T(omega) x without assembling.
    std::vector<Cplx> apply(Cplx omega, const std::vector<Cplx> &x) const;

    // ||T(omega) x||_2 / ||x||_2
    double residual(Cplx omega, const std::vector<Cplx> &x) const;
};

} // namespace reson::nep

#endif // RESON_NEP_HPP
