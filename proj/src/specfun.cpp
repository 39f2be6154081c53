// SPDX-License-Identifier: Apache-2.0

#include "reson/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace reson::specfun
{

namespace
{

constexpr double kEps = 2.2e-16;

struct Quad // J_m, J'_m, Y_m, Y'_m at one argument
{
    Cplx j, jp, y, yp;
    double loss = 2.2e-16; // estimated relative cancellation of the route
};

// ----------------------- small-|z| power series -----------------------

Cplx series_j(int m, Cplx z)
{
    if (z == Cplx(0.0))
        return m == 0 ? Cplx(1.0) : Cplx(0.0);
    const Cplx q = 0.25 * z * z;
    Cplx term(1.0);
    for (int k = 1; k <= m; ++k)
        term *= 0.5 * z / static_cast<double>(k);
    Cplx sum = term;
    for (int k = 1; k < 400; ++k)
    {
        term *= -q / (static_cast<double>(k) * (m + k));
        sum += term;
        if (std::abs(term) < kEps * std::abs(sum) && k > 4)
            break;
    }
    return sum;
}

// Y_0 and Y_1 from the logarithmic series (DLMF 10.8).
void series_y01(Cplx z, Cplx &y0, Cplx &y1)
{
    constexpr double kEulerGamma = 0.57721566490153286061;
    const Cplx lg = std::log(0.5 * z) + kEulerGamma;
    const Cplx j0 = series_j(0, z), j1 = series_j(1, z);
    const Cplx q = 0.25 * z * z;

    Cplx term(1.0), sum0(0.0);
    double hk = 0.0;
    for (int k = 1; k < 400; ++k)
    {
        term *= -q / (static_cast<double>(k) * k);
        hk += 1.0 / k;
        const Cplx add = -term * hk; // (-1)^{k+1} H_k (z^2/4)^k / (k!)^2
        sum0 += add;
        if (std::abs(add) < kEps * (std::abs(sum0) + 1e-300) && k > 4)
            break;
    }
    y0 = (2.0 / kPi) * (lg * j0 + sum0);

    Cplx t1 = 0.5 * z, sum1 = t1; // k = 0 term: H_0 + H_1 = 1
    double hk1 = 0.0, hk2 = 1.0;
    for (int k = 1; k < 400; ++k)
    {
        t1 *= -q / (static_cast<double>(k) * (k + 1));
        hk1 += 1.0 / k;
        hk2 += 1.0 / (k + 1);
        const Cplx add = t1 * (hk1 + hk2);
        sum1 += add;
        if (std::abs(add) < kEps * (std::abs(sum1) + 1e-300) && k > 4)
            break;
    }
    y1 = (2.0 / kPi) * lg * j1 - 2.0 / (kPi * z) - sum1 / kPi;
}

Quad quad_series(int m, Cplx z)
{
    Quad r;
    r.loss = kEps * 8.0 * std::exp(std::max(0.0, std::abs(z) - std::abs(z.imag())));
    r.j = series_j(m, z);
    if (m == 0)
        r.jp = -series_j(1, z);
    else
        r.jp = series_j(m - 1, z) - (static_cast<double>(m) / z) * r.j;
    Cplx ym1, ym; // Y_{k-1}, Y_k walking upward
    series_y01(z, ym1, ym);
    if (m == 0)
    {
        r.y = ym1;
        r.yp = -ym;
        return r;
    }
    for (int k = 1; k < m; ++k)
    {
        const Cplx next = (2.0 * k / z) * ym - ym1;
        ym1 = ym;
        ym = next;
    }
    r.y = ym;
    r.yp = ym1 - (static_cast<double>(m) / z) * ym;
    return r;
}

// ------------- Steed's method for complex argument (CF1 + 2x CF2) ------
// Miller-type backward recurrence driven by CF1, normalized through the
// Hankel Wronskian with both H1'/H1 and H2'/H2 from continued fractions.
// Valid for Re z > 0 and moderate |z|.

Cplx cf1_ratio(int m, Cplx z) // J_{m+1}/J_m by modified Lentz
{
    const double tiny = 1e-300;
    Cplx f(tiny), c(tiny), d(0.0);
    for (int k = 1; k < 20000; ++k)
    {
        const Cplx an = (k == 1) ? Cplx(1.0) : Cplx(-1.0);
        const Cplx bn = 2.0 * (m + k) / z;
        d = bn + an * d;
        if (d == Cplx(0.0))
            d = tiny;
        c = bn + an / c;
        if (c == Cplx(0.0))
            c = tiny;
        d = 1.0 / d;
        const Cplx delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            break;
    }
    return f;
}

Cplx cf2_logderiv(Cplx z, int sign) // H^{(1 or 2)}'_0 / H^{(1 or 2)}_0
{
    const double tiny = 1e-300;
    const Cplx si(0.0, static_cast<double>(sign));
    Cplx f(tiny), c(tiny), d(0.0);
    for (int k = 1; k < 40000; ++k)
    {
        const double hk = k - 0.5;
        const Cplx an(hk * hk, 0.0); // (k - 1/2)^2, order 0
        const Cplx bn = 2.0 * (z + si * static_cast<double>(k));
        d = bn + an * d;
        if (d == Cplx(0.0))
            d = tiny;
        c = bn + an / c;
        if (c == Cplx(0.0))
            c = tiny;
        d = 1.0 / d;
        const Cplx delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            break;
    }
    return -0.5 / z + si + (si / z) * f;
}

Quad quad_steed(int m, Cplx z)
{
    // CF1 at the target order, then stable downward recurrence to order 0.
    // The rho = H2/H1 split cancels like exp(-2 Im z), so this route is
    // reserved for arguments near the real axis (see quad_q1 routing).
    const Cplx rat = cf1_ratio(m, z);
    const Cplx f = static_cast<double>(m) / z - rat; // J'_m/J_m
    std::vector<Cplx> jt(m + 1), jpt(m + 1);
    jt[m] = 1e-30; // arbitrary scale, fixed later
    jpt[m] = f * jt[m];
    for (int k = m; k >= 1; --k)
    {
        jt[k - 1] = (static_cast<double>(k) / z) * jt[k] + jpt[k];
        jpt[k - 1] = (static_cast<double>(k - 1) / z) * jt[k - 1] - jt[k];
    }
    const Cplx f0 = jpt[0] / jt[0];
    const Cplx rp = cf2_logderiv(z, +1);
    const Cplx rm = cf2_logderiv(z, -1);

    // rho = H2/H1 from 2 J' = H1' + H2'; then |H1| from the Hankel
    // Wronskian H1 H2' - H1' H2 = -4i/(pi z).
    const Cplx rho = (f0 - rp) / (rm - f0);
    const Cplx h1sq = Cplx(0.0, -4.0) / (kPi * z * rho * (rm - rp));
    Cplx h1 = std::sqrt(h1sq);
    Cplx h2 = rho * h1;
    Cplx j0 = 0.5 * (h1 + h2);
    Cplx y0 = Cplx(0.0, -0.5) * (h1 - h2);

    // Resolve the square-root sign against a rough series evaluation of
    // whichever of J_0, Y_0 is larger (a few digits suffice here).
    const Quad rough = quad_series(0, z);
    const bool use_y = std::abs(rough.y) > std::abs(rough.j);
    const Cplx have = use_y ? y0 : j0;
    const Cplx want = use_y ? rough.y : rough.j;
    if (std::abs(have - want) > std::abs(-have - want))
    {
        h1 = -h1;
        h2 = -h2;
        j0 = -j0;
        y0 = -y0;
    }

    Quad r;
    r.loss = kEps * 8.0 * std::exp(2.0 * std::abs(z.imag()));
    const Cplx scale = j0 / jt[0];
    r.j = jt[m] * scale;
    r.jp = jpt[m] * scale;
    // Y by stable upward recurrence from (Y_0, Y'_0).
    const Cplx yp0 = Cplx(0.0, -0.5) * (rp * h1 - rm * h2);
    if (m == 0)
    {
        r.y = y0;
        r.yp = yp0;
        return r;
    }
    Cplx ym1 = y0;
    Cplx yk = -yp0; // Y'_0 = -Y_1
    for (int k = 1; k < m; ++k)
    {
        const Cplx next = (2.0 * k / z) * yk - ym1;
        ym1 = yk;
        yk = next;
    }
    r.y = yk;
    r.yp = ym1 - (static_cast<double>(m) / z) * yk;
    return r;
}

// ---------------- Hankel asymptotic expansions, |z| large --------------

bool hankel_pair_asym(int m, Cplx z, Cplx &h1, Cplx &h2)
{
    // H^{(1,2)}_m(z) = sqrt(2/(pi z)) e^{+-i chi} sum_k (+-i)^k a_k(m)/z^k;
    // accepted only when the smallest retained term certifies ~1e-13.
    const Cplx chi = z - (0.5 * m + 0.25) * kPi;
    Cplx s1(0.0), s2(0.0), term(1.0);
    const double mu = 4.0 * m * m;
    Cplx ik(1.0); // i^k
    double prev = 1e300;
    bool ok = false;
    for (int k = 0; k < 60; ++k)
    {
        const double mag = std::abs(term);
        if (k > 3 && mag > prev)
            break; // smallest term passed
        s1 += term * ik;
        s2 += term * std::conj(ik);
        if (mag < 1e-13)
        {
            ok = true;
            break;
        }
        prev = mag;
        const double tk = 2.0 * k + 1.0;
        term *= (mu - tk * tk) / (8.0 * (k + 1.0)) / z;
        ik *= Cplx(0.0, 1.0);
    }
    if (!ok)
        return false;
    const Cplx pref = std::sqrt(2.0 / (kPi * z));
    h1 = pref * std::exp(Cplx(0.0, 1.0) * chi) * s1;
    h2 = pref * std::exp(Cplx(0.0, -1.0) * chi) * s2;
    return true;
}

bool quad_asym(int m, Cplx z, Quad &r)
{
    Cplx h1m, h2m, h1n, h2n;
    if (!hankel_pair_asym(m, z, h1m, h2m) || !hankel_pair_asym(m + 1, z, h1n, h2n))
        return false;
    const Cplx j = 0.5 * (h1m + h2m);
    const Cplx y = Cplx(0.0, -0.5) * (h1m - h2m);
    const Cplx jn = 0.5 * (h1n + h2n);
    const Cplx yn = Cplx(0.0, -0.5) * (h1n - h2n);
    r.j = j;
    r.y = y;
    const Cplx moz = static_cast<double>(m) / z;
    r.jp = moz * j - jn;
    r.yp = moz * y - yn;
    r.loss = 1e-13;
    return true;
}

// First-quadrant driver (Re z >= 0, Im z >= 0, z != 0). Route by the
// cancellation estimate of each method: the ascending series cancels like
// exp(|z| - Im z), the Steed continued fractions like exp(2 Im z), and the
// Hankel expansions self-certify through their smallest term.
Quad quad_q1(int m, Cplx z)
{
    const double az = std::abs(z);
    if (az <= kSeriesRadius)
        return quad_series(m, z);
    if (az > 14.0)
    {
        Quad r;
        if (quad_asym(m, z, r))
            return r;
    }
    const double loss_series = az - z.imag();
    const double loss_steed = 2.0 * z.imag();
    if (loss_series <= loss_steed && az <= 400.0)
        return quad_series(m, z);
    return quad_steed(m, z);
}

// Full-plane driver for |arg z| < pi via conjugation and reflection.
Quad quad_integer(int m, Cplx z)
{
    if (z.imag() < 0.0)
    {
        const Quad c = quad_integer(m, std::conj(z));
        return {std::conj(c.j), std::conj(c.jp), std::conj(c.y), std::conj(c.yp), c.loss};
    }
    if (z.real() < 0.0)
    {
        // z = w e^{i pi} with Re w > 0: J_m(z) = (-1)^m J_m(w),
        // Y_m(z) = (-1)^m [Y_m(w) + 2i J_m(w)], derivatives pick up -1.
        const Quad c = quad_integer(m, -z);
        const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        const Cplx twoi(0.0, 2.0);
        return {sgn * c.j, -sgn * c.jp, sgn * (c.y + twoi * c.j), -sgn * (c.yp + twoi * c.jp),
                c.loss};
    }
    return quad_q1(m, z);
}

} // namespace

BesselResult bessel_integer(BesselKind kind, int m, Cplx z)
{
    if (m < 0)
        throw DomainError("bessel_integer requires m >= 0");
    if (z == Cplx(0.0))
    {
        if (kind == BesselKind::J)
            return {m == 0 ? Cplx(1.0) : Cplx(0.0), m == 1 ? Cplx(0.5) : (m == 0 ? Cplx(0.0) : Cplx(0.0)), false, false};
        throw DomainError("Y/H singular at z = 0");
    }
    const Quad q = quad_integer(m, z);
    BesselResult r;
    switch (kind)
    {
    case BesselKind::J:
        r.value = q.j;
        r.derivative = q.jp;
        break;
    case BesselKind::Y:
        r.value = q.y;
        r.derivative = q.yp;
        break;
    case BesselKind::H1:
        r.value = q.j + Cplx(0.0, 1.0) * q.y;
        r.derivative = q.jp + Cplx(0.0, 1.0) * q.yp;
        break;
    case BesselKind::H2:
        r.value = q.j - Cplx(0.0, 1.0) * q.y;
        r.derivative = q.jp - Cplx(0.0, 1.0) * q.yp;
        break;
    }
    if (q.loss > 1e-8)
        r.accuracy_loss = true;
    if (kind == BesselKind::H1 || kind == BesselKind::H2)
    {
        const double scale = std::abs(q.j) + std::abs(q.y);
        if (std::abs(r.value) > 0.0 && std::max(kEps, q.loss) * scale / std::abs(r.value) > 1e-8)
            r.accuracy_loss = true;
    }
    return r;
}

// ---------------------- half-integer orders ----------------------------

SphericalPair spherical_bessel(int n, Cplx z)
{
    if (z == Cplx(0.0))
        throw DomainError("spherical Bessel singular at z = 0");
    SphericalPair r;
    const Cplx sz = std::sin(z), cz = std::cos(z);
    const Cplx inv = 1.0 / z;

    // y_n: upward recurrence (dominant direction).
    Cplx ym1 = -cz * inv;              // y_0
    Cplx yk = (-cz * inv - sz) * inv;  // y_1
    if (n == 0)
    {
        r.y = ym1;
        r.yp = -yk; // y_0' = -y_1
    }
    else
    {
        for (int k = 1; k < n; ++k)
        {
            const Cplx next = (2.0 * k + 1.0) * inv * yk - ym1;
            ym1 = yk;
            yk = next;
        }
        r.y = yk;
        r.yp = ym1 - (n + 1.0) * inv * yk;
    }

    // j_n: downward Miller recurrence normalized against j_0 or j_1.
    const Cplx j0 = sz * inv;
    const Cplx j1 = (sz * inv - cz) * inv;
    if (n == 0)
    {
        r.j = j0;
        r.jp = -j1;
        return r;
    }
    const int start = n + 25 + static_cast<int>(1.5 * std::abs(z));
    Cplx fkp1(0.0), fk(1e-280);
    Cplx fn(0.0), fnm1(0.0), f1(0.0), f0(0.0);
    for (int k = start; k >= 0; --k)
    {
        const Cplx fkm1 = (2.0 * k + 3.0) * inv * fk - fkp1;
        fkp1 = fk;
        fk = fkm1;
        if (k == n)
            fn = fk;
        if (k == n - 1)
            fnm1 = fk;
        if (k == 1)
            f1 = fk;
        if (k == 0)
            f0 = fk;
        if (std::abs(fk) > 1e260) // rescale to avoid overflow
        {
            const double s = 1e-260;
            fk *= s;
            fkp1 *= s;
            fn *= s;
            fnm1 *= s;
            f1 *= s;
            f0 *= s;
        }
    }
    const Cplx scale = (std::abs(j0) >= std::abs(j1) || f1 == Cplx(0.0)) ? j0 / f0 : j1 / f1;
    r.j = fn * scale;
    const Cplx jnm1 = (n == 1) ? j0 : fnm1 * scale;
    r.jp = jnm1 - (n + 1.0) * inv * r.j;
    return r;
}

Cplx spherical_ratio(int n, Cplx z)
{
    if (z == Cplx(0.0))
        throw DomainError("spherical ratio singular at z = 0");
    if (n <= 1)
    {
        const SphericalPair p = spherical_bessel(std::max(n, 0), z);
        return p.j / p.y;
    }
    const Cplx inv = 1.0 / z;
    // y upward with exponent tracking
    Cplx ym1 = -std::cos(z) * inv;
    Cplx yk = (-std::cos(z) * inv - std::sin(z)) * inv;
    double yexp = 0.0;
    for (int k = 1; k < n; ++k)
    {
        const Cplx next = (2.0 * k + 1.0) * inv * yk - ym1;
        ym1 = yk;
        yk = next;
        if (std::abs(yk) > 1e200)
        {
            yk *= 1e-200;
            ym1 *= 1e-200;
            yexp += 200.0;
        }
    }
    // j via Miller with its own tracking
    const int start = n + 25 + static_cast<int>(1.5 * std::abs(z));
    Cplx fkp1(0.0), fk(1e-280);
    Cplx fn(0.0), f1(0.0), f0(0.0);
    double fshift = 0.0, fn_shift = 0.0;
    for (int k = start; k >= 0; --k)
    {
        const Cplx fkm1 = (2.0 * k + 3.0) * inv * fk - fkp1;
        fkp1 = fk;
        fk = fkm1;
        if (k == n)
        {
            fn = fk;
            fn_shift = fshift;
        }
        if (k == 1)
            f1 = fk;
        if (k == 0)
            f0 = fk;
        if (std::abs(fk) > 1e260)
        {
            fk *= 1e-260;
            fkp1 *= 1e-260;
            fshift += 260.0;
        }
    }
    const Cplx j0 = std::sin(z) * inv;
    const Cplx j1 = (std::sin(z) * inv - std::cos(z)) * inv;
    const bool use0 = std::abs(j0) >= std::abs(j1) || f1 == Cplx(0.0);
    const Cplx jref = use0 ? j0 : j1;
    const Cplx fref = use0 ? f0 : f1;
    // j_n = fn * jref/fref * 10^{fn_shift - fshift};  Q = j_n / (yk * 10^{yexp})
    const double log10q = (fn_shift - fshift) - yexp;
    const Cplx core = (fn / fref) * (jref / yk);
    if (core == Cplx(0.0))
        return Cplx(0.0);
    const double mag = std::log10(std::abs(core)) + log10q;
    if (mag < -290.0)
        return Cplx(0.0); // underflow: the ratio is numerically zero
    if (mag > 290.0)
        throw Error("spherical_ratio overflow");
    return core * std::pow(10.0, log10q);
}

BesselResult bessel_half_integer(BesselKind kind, int n, Cplx z)
{
    if (z == Cplx(0.0))
        throw DomainError("half-integer Bessel singular at z = 0");
    if (kind != BesselKind::J && kind != BesselKind::Y)
        throw DomainError("half-integer orders support J and Y only");
    const SphericalPair p = spherical_bessel(n, z);
    const Cplx pref = std::sqrt(2.0 * z / kPi); // J_{n+1/2} = sqrt(2z/pi) j_n
    BesselResult r;
    if (kind == BesselKind::J)
    {
        r.value = pref * p.j;
        r.derivative = pref * (p.jp + 0.5 * p.j / z);
    }
    else
    {
        r.value = pref * p.y;
        r.derivative = pref * (p.yp + 0.5 * p.y / z);
    }
    return r;
}

// ------------------------------ Airy -----------------------------------

namespace
{

struct AiryPair
{
    Cplx ai, aip, bi, bip;
};

void airy_maclaurin(Cplx xi, AiryPair &r)
{
    constexpr double c1 = 0.35502805388781723926; // Ai(0)
    constexpr double c2 = 0.25881940379280679841; // -Ai'(0)
    const Cplx x3 = xi * xi * xi;
    Cplx f(1.0), fsum(1.0), fpsum(0.0);
    Cplx g = xi, gsum = xi, gpsum(1.0);
    for (int k = 1; k < 200; ++k)
    {
        f *= x3 / (3.0 * k * (3.0 * k - 1.0));
        g *= x3 / ((3.0 * k + 1.0) * (3.0 * k));
        fsum += f;
        gsum += g;
        fpsum += f * (3.0 * k) / xi;        // xi != 0 handled by caller
        gpsum += g * (3.0 * k + 1.0) / xi;
        if (std::abs(f) + std::abs(g) < kEps * (std::abs(fsum) + std::abs(gsum)) && k > 3)
            break;
    }
    r.ai = c1 * fsum - c2 * gsum;
    r.aip = c1 * fpsum - c2 * gpsum;
    const double s3 = std::sqrt(3.0);
    r.bi = s3 * (c1 * fsum + c2 * gsum);
    r.bip = s3 * (c1 * fpsum + c2 * gpsum);
}

// Asymptotic expansion of Ai, Ai' valid for |arg w| <= 2 pi/3.
void airy_ai_asym_core(Cplx w, Cplx &ai, Cplx &aip)
{
    const Cplx w14 = std::pow(w, 0.25);
    const Cplx zeta = (2.0 / 3.0) * w * std::sqrt(w);
    Cplx su(1.0), sv(1.0), u(1.0);
    double prev = 1e300;
    for (int k = 1; k < 40; ++k)
    {
        u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
             ((2.0 * k - 1.0) * 216.0 * k);
        const Cplx uk = u / std::pow(zeta, k);
        const Cplx vk = uk * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        su += sgn * uk;
        sv += sgn * vk;
        const double mag = std::abs(uk);
        if (mag < 1e-17 || mag > prev)
            break;
        prev = mag;
    }
    const double pref = 0.5 / std::sqrt(kPi);
    ai = pref * std::exp(-zeta) / w14 * su;
    aip = -pref * w14 * std::exp(-zeta) * sv;
}

void airy_ai_asym(Cplx w, Cplx &ai, Cplx &aip); // fwd

// rotate w by e^{i 2pi/3 * dir} and evaluate Ai there
void airy_ai_rotated(Cplx w, int dir, Cplx &ai, Cplx &aip)
{
    const Cplx rot = std::polar(1.0, dir * 2.0 * kPi / 3.0);
    airy_ai_asym(w * rot, ai, aip);
}

void airy_ai_asym(Cplx w, Cplx &ai, Cplx &aip)
{
    if (std::abs(std::arg(w)) <= 2.0 * kPi / 3.0 + 1e-12)
    {
        airy_ai_asym_core(w, ai, aip);
        return;
    }
    // connection formula: Ai(w) + e^{2pi i/3} Ai(w e^{2pi i/3}) + e^{-2pi i/3} Ai(w e^{-2pi i/3}) = 0
    Cplx a1, a1p, a2, a2p;
    airy_ai_rotated(w, +1, a1, a1p);
    airy_ai_rotated(w, -1, a2, a2p);
    const Cplx e1 = std::polar(1.0, 2.0 * kPi / 3.0);
    const Cplx e2 = std::conj(e1);
    ai = -e1 * a1 - e2 * a2;
    aip = -e1 * e1 * a1p - e2 * e2 * a2p;
}

// March Ai inward along the ray of xi from an anchor where the asymptotics
// are at machine accuracy. Stable while Ai does not decay inward, i.e. for
// Re zeta bounded below (used only with Re zeta > -5).
void airy_ai_march(Cplx xi, Cplx &ai, Cplx &aip)
{
    const double anchor_r = kAiryAsymRadius;
    const Cplx dir = xi / std::abs(xi);
    Cplx a = anchor_r * dir;
    Cplx v, vp;
    airy_ai_asym(a, v, vp);
    const int nsteps = static_cast<int>(std::ceil((anchor_r - std::abs(xi)) / 0.7));
    const Cplx step = (xi - a) / static_cast<double>(nsteps);
    for (int s = 0; s < nsteps; ++s)
    {
        // Taylor coefficients of y'' = x y about the current point
        std::array<Cplx, 44> c{};
        c[0] = v;
        c[1] = vp;
        for (int k = 0; k + 2 < static_cast<int>(c.size()); ++k)
        {
            const Cplx prev = (k >= 1) ? c[k - 1] : Cplx(0.0);
            c[k + 2] = (a * c[k] + prev) / ((k + 2.0) * (k + 1.0));
        }
        Cplx val(0.0), der(0.0);
        for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
            val = val * step + c[k];
        for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k)
            der = der * step + static_cast<double>(k) * c[k];
        v = val;
        vp = der;
        a += step;
    }
    ai = v;
    aip = vp;
}

// Route selection for Ai: plain Maclaurin cancels like exp(|zeta| + Re zeta),
// so the exponentially small sector goes through the inward ODE march; far
// arguments use the (folded) asymptotics.
void airy_ai_value(Cplx xi, Cplx &ai, Cplx &aip)
{
    const double axi = std::abs(xi);
    if (axi >= kAiryAsymRadius)
    {
        airy_ai_asym(xi, ai, aip);
        return;
    }
    const Cplx zeta = (2.0 / 3.0) * xi * std::sqrt(xi);
    if (std::abs(zeta) + zeta.real() > kAiryCancelExponent)
    {
        airy_ai_march(xi, ai, aip);
        return;
    }
    AiryPair p;
    airy_maclaurin(xi, p);
    ai = p.ai;
    aip = p.aip;
}

} // namespace

BesselResult airy(AiryKind kind, Cplx xi)
{
    if (std::abs(xi) >= 50.0)
        throw DomainError("airy argument cap |xi| < 50");
    BesselResult r;
    if (xi == Cplx(0.0))
    {
        constexpr double c1 = 0.35502805388781723926;
        constexpr double c2 = 0.25881940379280679841;
        const double s3 = std::sqrt(3.0);
        if (kind == AiryKind::Ai)
        {
            r.value = c1;
            r.derivative = -c2;
        }
        else
        {
            r.value = s3 * c1;
            r.derivative = s3 * c2;
        }
        return r;
    }
    if (kind == AiryKind::Ai)
    {
        airy_ai_value(xi, r.value, r.derivative);
        return r;
    }
    // Bi: Maclaurin wherever it does not cancel (|zeta| - Re zeta bounded),
    // otherwise the connection Bi(w) = e^{i pi/6} Ai(w e^{2pi i/3})
    //                               + e^{-i pi/6} Ai(w e^{-2pi i/3}).
    const double axi = std::abs(xi);
    if (axi < kAiryAsymRadius)
    {
        const Cplx zeta = (2.0 / 3.0) * xi * std::sqrt(xi);
        if (std::abs(zeta) - zeta.real() <= kAiryCancelExponent)
        {
            AiryPair p;
            airy_maclaurin(xi, p);
            r.value = p.bi;
            r.derivative = p.bip;
            return r;
        }
    }
    Cplx a1, a1p, a2, a2p;
    const Cplx rot = std::polar(1.0, 2.0 * kPi / 3.0);
    airy_ai_value(xi * rot, a1, a1p);
    airy_ai_value(xi * std::conj(rot), a2, a2p);
    const Cplx e16 = std::polar(1.0, kPi / 6.0);
    const Cplx e56 = std::polar(1.0, 5.0 * kPi / 6.0);
    r.value = e16 * a1 + std::conj(e16) * a2;
    r.derivative = e56 * a1p + std::conj(e56) * a2p;
    return r;
}

} // namespace reson::specfun
