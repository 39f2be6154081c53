// SPDX-License-Identifier: Apache-2.0

#include "reson/dispersion.hpp"

#include <algorithm>
#include <cmath>

#include "reson/specfun.hpp"

namespace reson::dispersion
{

std::string regime_name(Regime r)
{
    switch (r)
    {
    case Regime::NonDecaying:
        return "non_decaying";
    case Regime::Transition:
        return "transition";
    case Regime::Superexponential:
        return "superexponential";
    }
    return "?";
}

Cplx q_ratio(int n, Cplx kappa)
{
    if (kappa == Cplx(0.0))
        throw DomainError("q_ratio requires kappa != 0");
    const Cplx q = specfun::spherical_ratio(n, kappa);
    // Pole guard: Y vanishing within tolerance makes Q blow up.
    if (std::abs(q) > 0.0 && !(std::abs(q) < 1e10))
        throw NearPoleOfQ("Y_m vanishes near kappa");
    return q;
}

Cplx dispersive_error(const DispersionPoint &point)
{
    if (point.p < 1 || point.p > 60)
        throw DomainError("dispersive_error supports 1 <= p <= 60");
    const Cplx wh = point.omega * point.h;
    const Cplx kappa = 0.5 * wh;
    if (kappa == Cplx(0.0))
        throw DomainError("omega h = 0");
    const int ne = point.p / 2;
    const int no = (point.p + 1) / 2;

    const Cplx qe = q_ratio(2 * ne + 1, kappa); // order 2 N_e + 3/2
    const Cplx qo = q_ratio(2 * no, kappa);     // order 2 N_o + 1/2

    const Cplx sk = std::sin(kappa), ck = std::cos(kappa);
    if (std::abs(sk) < 1e-12 || std::abs(ck) < 1e-12)
        throw FormulaPole("sin/cos of omega h / 2 vanishes");
    const Cplx de = 1.0 - qe * sk / ck; // 1 - Q_e tan(kappa)
    const Cplx dn = 1.0 + qo * ck / sk; // 1 + Q_o cot(kappa)
    if (std::abs(de) < 1e-12 || std::abs(dn) < 1e-12)
        throw FormulaPole("denominator of E^p_e / E^p_o vanishes");

    // a_e = E_e cos^2(kappa), a_o = E_o sin^2(kappa); the squared trig
    // factors of the first line cancel against the second and third.
    const Cplx a_e = -wh * qe / de;
    const Cplx a_o = -wh * qo / dn;
    const Cplx e_e = a_e / (ck * ck);
    const Cplx e_o = a_o / (sk * sk);

    const Cplx swh = std::sin(wh);
    const Cplx bracket = 1.0 + swh / (2.0 * wh) * (e_o - e_e);
    if (std::abs(bracket) < 1e-12)
        throw FormulaPole("outer denominator of E^p vanishes");
    return swh / wh * (a_o + a_e) / bracket;
}

Cplx numerical_cosine(const DispersionPoint &point)
{
    return std::cos(point.omega * point.h) + dispersive_error(point);
}

namespace
{

double solve_tau0()
{
    // coth(tau) = tau by bisection
    double lo = 1.0, hi = 1.5;
    for (int i = 0; i < 200; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        (1.0 / std::tanh(mid) - mid > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

const double kTau0 = solve_tau0();

Cplx curve_point(double tau)
{
    const double re2 = tau / std::tanh(tau) - tau * tau;
    const double im2 = tau * tau - tau * std::tanh(tau);
    return Cplx(std::sqrt(std::max(re2, 0.0)), std::sqrt(std::max(im2, 0.0)));
}

// Closed boundary polyline of K (counterclockwise), 4 reflected quarters.
const std::vector<Cplx> &boundary_polyline()
{
    static const std::vector<Cplx> poly = []
    {
        const int n = 500; // 4*500 = 2000 points around the closed curve
        std::vector<Cplx> quarter(n);
        for (int i = 0; i < n; ++i)
        {
            const double tau = kTau0 * (i + 1) / static_cast<double>(n);
            quarter[i] = curve_point(tau);
        }
        std::vector<Cplx> poly;
        poly.reserve(4 * n);
        for (int i = 0; i < n; ++i) // first quadrant: 1 -> ic
            poly.push_back(quarter[i]);
        for (int i = n; i-- > 0;) // second quadrant: ic -> -1
            poly.push_back(Cplx(-quarter[i].real(), quarter[i].imag()));
        for (int i = 0; i < n; ++i) // third: -1 -> -ic
            poly.push_back(-quarter[i]);
        for (int i = n; i-- > 0;) // fourth: -ic -> 1
            poly.push_back(std::conj(quarter[i]));
        return poly;
    }();
    return poly;
}

} // namespace

std::vector<Cplx> region_K_quarter_curve(int n_points)
{
    std::vector<Cplx> out(n_points);
    for (int i = 0; i < n_points; ++i)
        out[i] = curve_point(kTau0 * (i + 1) / static_cast<double>(n_points));
    return out;
}

bool region_K_contains(Cplx z)
{
    // ray crossing along +x
    const auto &poly = boundary_polyline();
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    {
        const Cplx a = poly[j], b = poly[i];
        const bool straddles = (a.imag() > z.imag()) != (b.imag() > z.imag());
        if (!straddles)
            continue;
        const double xcross =
            a.real() + (z.imag() - a.imag()) / (b.imag() - a.imag()) * (b.real() - a.real());
        if (xcross > z.real())
            inside = !inside;
    }
    return inside;
}

double region_K_ray_radius(double theta)
{
    // fold into the first quadrant by symmetry and bisect on the radius
    const double c = std::abs(std::cos(theta)), s = std::abs(std::sin(theta));
    const Cplx dir(c, s);
    double lo = 0.0, hi = 1.5;
    for (int i = 0; i < 100; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        (region_K_contains(mid * dir) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Cplx olver_f(Cplx w)
{
    return (1.0 - w) / (1.0 + w) * std::exp(2.0 * w);
}

Cplx estimate_airy(const DispersionPoint &point)
{
    const Cplx wh = point.omega * point.h;
    const Cplx xi = -std::cbrt(2.0 / point.p) * 0.5 * (wh - 2.0 * point.p);
    const auto ai = specfun::airy(specfun::AiryKind::Ai, xi);
    const auto bi = specfun::airy(specfun::AiryKind::Bi, xi);
    return std::sin(wh) * ai.value / bi.value;
}

Cplx estimate_superexp(const DispersionPoint &point)
{
    const Cplx wh = point.omega * point.h;
    const double n = 2.0 * point.p + 1.0;
    const Cplx w = std::sqrt(1.0 - (wh / n) * (wh / n));
    return 0.5 * std::sin(wh) * std::pow(olver_f(w), point.p + 0.5);
}

Cplx estimate_superexp_deep(const DispersionPoint &point)
{
    const Cplx wh = point.omega * point.h;
    const double n = 2.0 * point.p + 1.0;
    constexpr double e = 2.71828182845904523536;
    return 0.5 * std::sin(wh) * std::pow(wh * e / (2.0 * n), n);
}

RegimeReport classify_regime(const DispersionPoint &point)
{
    if (point.p < 1)
        throw DomainError("classify_regime requires p >= 1");
    const Cplx wh = point.omega * point.h;
    const double n = 2.0 * point.p + 1.0;
    const Cplx z = wh / n;

    RegimeReport rep;
    rep.in_K = region_K_contains(z);
    // |sigma| proxy: |z| rescaled so that s = 1 on the K boundary along arg z.
    const double ray = region_K_ray_radius(std::arg(z));
    const double s = std::abs(z) / ray;
    rep.sigma_abs = n * s;

    const double band = std::cbrt(rep.sigma_abs);
    if (rep.in_K && n > rep.sigma_abs + band)
        rep.regime = Regime::Superexponential;
    else if (!rep.in_K && n < rep.sigma_abs - band)
        rep.regime = Regime::NonDecaying;
    else
        rep.regime = Regime::Transition;

    constexpr double e = 2.71828182845904523536;
    switch (rep.regime)
    {
    case Regime::Superexponential:
        rep.estimate = (n > std::abs(wh) * e / 2.0) ? estimate_superexp_deep(point)
                                                    : estimate_superexp(point);
        break;
    case Regime::Transition:
        rep.estimate = estimate_airy(point);
        break;
    case Regime::NonDecaying:
        rep.estimate = std::sin(wh); // order of the non-decaying oscillation
        break;
    }
    return rep;
}

} // namespace reson::dispersion
