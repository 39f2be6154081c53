// SPDX-License-Identifier: Apache-2.0

#include "reson/nep.hpp"

#include <algorithm>
#include <cmath>

namespace reson::nep
{

NepCoefficient NepCoefficient::polynomial(std::vector<Cplx> coeffs)
{
    while (coeffs.size() > 1 && std::abs(coeffs.back()) == 0.0)
        coeffs.pop_back();
    NepCoefficient c;
    c.num_degree = static_cast<int>(coeffs.size()) - 1;
    c.den_degree = 0;
    c.eval = [coeffs](Cplx w)
    {
        Cplx v(0.0);
        for (std::size_t i = coeffs.size(); i-- > 0;)
            v = v * w + coeffs[i];
        return v;
    };
    return c;
}

std::pair<int, int> RationalNEP::rational_type() const
{
    // over the common denominator D = prod of distinct denominators; for the
    // problems built here denominators of different coefficients are either
    // equal or coprime, so summing degrees of the union is the safe bound
    int den = 0;
    for (const auto &c : coefficients)
        den = std::max(den, c.den_degree); // per material; union handled below
    // conservative union: total distinct poles with multiplicity
    const auto sing = singularities();
    den = static_cast<int>(sing.size());
    int num = 0;
    for (const auto &c : coefficients)
        num = std::max(num, c.num_degree + den - c.den_degree);
    return {num, den};
}

std::vector<Cplx> RationalNEP::singularities() const
{
    std::vector<Cplx> out;
    for (const auto &c : coefficients)
        for (const Cplx &p : c.finite_poles)
        {
            bool dup = false;
            for (const Cplx &q : out)
                if (std::abs(p - q) < 1e-10)
                    dup = true;
            if (!dup)
                out.push_back(p);
        }
    return out;
}

std::vector<Cplx> RationalNEP::singularities_near(const ComplexDisk &sigma, double factor) const
{
    std::vector<Cplx> out;
    for (const Cplx &p : singularities())
        if (std::abs(p - sigma.center) <= factor * sigma.radius)
            out.push_back(p);
    std::sort(out.begin(), out.end(), [&](Cplx a, Cplx b)
              { return std::abs(a - sigma.center) < std::abs(b - sigma.center); });
    return out;
}

lina::SparseMatrix RationalNEP::assemble(Cplx omega) const
{
    std::vector<const lina::SparseMatrix *> mats;
    std::vector<Cplx> coeffs;
    for (std::size_t i = 0; i < matrices.size(); ++i)
    {
        mats.push_back(&matrices[i]);
        coeffs.push_back(coefficients[i].eval(omega));
    }
    return lina::sparse_combine(mats, coeffs);
}

std::vector<Cplx> RationalNEP::apply(Cplx omega, const std::vector<Cplx> &x) const
{
    std::vector<Cplx> y(dim, Cplx(0.0));
    for (std::size_t i = 0; i < matrices.size(); ++i)
        matrices[i].multiply_add(x.data(), y.data(), coefficients[i].eval(omega));
    return y;
}

double RationalNEP::residual(Cplx omega, const std::vector<Cplx> &x) const
{
    const std::vector<Cplx> y = apply(omega, x);
    double ny = 0.0, nx = 0.0;
    for (int i = 0; i < dim; ++i)
    {
        ny += std::norm(y[i]);
        nx += std::norm(x[i]);
    }
    return std::sqrt(ny / nx);
}

} // namespace reson::nep
