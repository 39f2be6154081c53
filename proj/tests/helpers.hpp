// SPDX-License-Identifier: Apache-2.0

#ifndef RESON_TESTS_HELPERS_HPP
#define RESON_TESTS_HELPERS_HPP

#include <random>

#include "reson/types.hpp"

namespace testutil
{

inline std::mt19937 &rng()
{
    static std::mt19937 gen(20240915u);
    return gen;
}

inline double uniform(double lo, double hi)
{
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng());
}

inline reson::Cplx random_complex(double re_lo, double re_hi, double im_lo, double im_hi)
{
    return {uniform(re_lo, re_hi), uniform(im_lo, im_hi)};
}

// random point in an annulus, any argument strictly inside (-pi, pi)
inline reson::Cplx random_cut_plane(double r_lo, double r_hi, double arg_margin = 0.05)
{
    const double r = uniform(r_lo, r_hi);
    const double a = uniform(-3.14159265358979 + arg_margin, 3.14159265358979 - arg_margin);
    return std::polar(r, a);
}

} // namespace testutil

#endif
