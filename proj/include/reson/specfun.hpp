// SPDX-License-Identifier: Apache-2.0
//
// Complex-argument special functions: integer-order Bessel/Hankel via
// series / continued fractions (Steed) / Hankel asymptotics, half-integer
// orders via the spherical closed forms, and Airy functions.

#ifndef RESON_SPECFUN_HPP
#define RESON_SPECFUN_HPP

#include "reson/types.hpp"

namespace reson::specfun
{

struct BesselResult
{
    Cplx value{0.0, 0.0};
    Cplx derivative{0.0, 0.0};
    bool scaled_flag = false;   // no exponential scaling in v1
    bool accuracy_loss = false; // cancellation estimate exceeded 1e-8
};

enum class BesselKind
{
    J,
    Y,
    H1,
    H2
};

enum class AiryKind
{
    Ai,
    Bi
};

// Switchover constants, validated against the Wronskian oracles (see tests).
inline constexpr double kSeriesRadius = 2.0;      // plain power series below this
inline constexpr double kAsymptoticRadius = 25.0; // Hankel expansions beyond this
inline constexpr double kAiryAsymRadius = 9.5;    // Airy asymptotics beyond this
// Airy Maclaurin is used while the cancellation exponent |zeta| +- Re zeta
// stays below this; the exponentially small Ai sector goes through a
// Taylor-ODE march from the asymptotic anchor instead.
inline constexpr double kAiryCancelExponent = 15.0;

// J_{n+1/2} or Y_{n+1/2} from the spherical Bessel closed forms, with the
// derivative from the standard recurrence. Requires z != 0, |arg z| < pi.
BesselResult bessel_half_integer(BesselKind kind, int n, Cplx z);

// Integer order m >= 0. J admits z = 0 (series constant term); the others
// require z != 0, |arg z| < pi.
BesselResult bessel_integer(BesselKind kind, int m, Cplx z);

// Airy Ai/Bi with derivative; |xi| < 50.
BesselResult airy(AiryKind kind, Cplx xi);

// Spherical Bessel pair (j_n, y_n) and derivatives.
struct SphericalPair
{
    Cplx j, jp, y, yp;
};
SphericalPair spherical_bessel(int n, Cplx z);

// Overflow-safe ratio j_n(z)/y_n(z) = J_{n+1/2}(z)/Y_{n+1/2}(z).
// Underflows gracefully to 0 for tiny |z| and large n.
Cplx spherical_ratio(int n, Cplx z);

} // namespace reson::specfun

#endif // RESON_SPECFUN_HPP
