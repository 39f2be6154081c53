// SPDX-License-Identifier: Apache-2.0
//
// Discrete dispersion error E^p = R_p(omega h) - cos(omega h) for complex
// frequencies, the Olver-type region K, and the decay-regime classifier
// that drives the hp-refinement strategies.

#ifndef RESON_DISPERSION_HPP
#define RESON_DISPERSION_HPP

#include <string>
#include <vector>

#include "reson/types.hpp"

namespace reson::dispersion
{

struct DispersionPoint
{
    Cplx omega{0.0, 0.0};
    double h = 0.0;
    int p = 1;

    Cplx kappa() const { return 0.5 * omega * h; } // recomputed, never stored
};

enum class Regime
{
    NonDecaying,
    Transition,
    Superexponential
};

std::string regime_name(Regime r);

struct RegimeReport
{
    Regime regime = Regime::NonDecaying;
    double sigma_abs = 0.0; // |sigma| proxy
    Cplx estimate{0.0, 0.0};
    bool in_K = false;
};

// Q_m(kappa) = J_m(kappa)/Y_m(kappa) for half-integer m = n + 1/2.
// Throws NearPoleOfQ when Y vanishes within tolerance.
Cplx q_ratio(int n, Cplx kappa);

// The three-line assembly of E^p; FormulaPole when a denominator vanishes.
Cplx dispersive_error(const DispersionPoint &point);

// cos(omega h) + E^p.
Cplx numerical_cosine(const DispersionPoint &point);

// Region K bounded by w = +-(tau coth tau - tau^2)^{1/2} +- i (tau^2 - tau tanh tau)^{1/2}.
// Membership by ray crossing against a 2000-point polyline of the curve.
bool region_K_contains(Cplx z);

// Points of the boundary curve in the closed first quadrant, tau in (0, tau0].
std::vector<Cplx> region_K_quarter_curve(int n_points = 500);

// Distance from the origin to the K boundary along direction arg(z).
double region_K_ray_radius(double theta);

// f(w) = (1-w)/(1+w) exp(2w); |f(sqrt(1-z^2))| < 1 characterizes the interior of K.
Cplx olver_f(Cplx w);

RegimeReport classify_regime(const DispersionPoint &point);

// The three closed-form estimates of the theorem.
Cplx estimate_airy(const DispersionPoint &point);        // transition zone
Cplx estimate_superexp(const DispersionPoint &point);    // f(w)^{p+1/2} form
Cplx estimate_superexp_deep(const DispersionPoint &point); // (omega h e / (2(2p+1)))^{2p+1} form

} // namespace reson::dispersion

#endif // RESON_DISPERSION_HPP
