// SPDX-License-Identifier: Apache-2.0

#include "reson/materials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "reson/lina.hpp"

namespace reson::materials
{

namespace
{

// Multiply polynomial (ascending coefficients) by a quadratic c0 + c1 w + c2 w^2.
std::vector<Cplx> poly_mul_quadratic(const std::vector<Cplx> &p, Cplx c0, Cplx c1, Cplx c2)
{
    std::vector<Cplx> out(p.size() + 2, Cplx(0.0));
    for (std::size_t i = 0; i < p.size(); ++i)
    {
        out[i] += p[i] * c0;
        out[i + 1] += p[i] * c1;
        out[i + 2] += p[i] * c2;
    }
    return out;
}

Cplx poly_eval(const std::vector<Cplx> &p, Cplx w)
{
    Cplx v(0.0);
    for (std::size_t i = p.size(); i-- > 0;)
        v = v * w + p[i];
    return v;
}

} // namespace

PermittivityModel::PermittivityModel(double eps_inf, double omega_p,
                                     std::vector<OscillatorTerm> terms)
    : eps_inf_(eps_inf), omega_p_(omega_p), terms_(std::move(terms))
{
    if (eps_inf_ < 1.0)
        throw DomainError("eps_inf must be >= 1");
    if (omega_p_ < 0.0)
        throw DomainError("omega_p must be non-negative");
    for (const auto &t : terms_)
        if (t.f < 0.0 || t.omega < 0.0 || t.gamma < 0.0)
            throw DomainError("oscillator parameters must be non-negative");
}

PermittivityModel PermittivityModel::constant(double eps)
{
    PermittivityModel m;
    m.eps_inf_ = eps;
    if (eps < 1.0)
        throw DomainError("constant permittivity must be >= 1");
    return m;
}

Cplx PermittivityModel::eval(Cplx omega) const
{
    Cplx eps(eps_inf_, 0.0);
    const double wp2 = omega_p_ * omega_p_;
    for (const auto &t : terms_)
    {
        const Cplx den = t.omega * t.omega - omega * omega - kImag * omega * t.gamma;
        if (std::abs(den) < 1e-12 * std::max(wp2, 1.0))
            throw PoleProximity("omega within 1e-12 of a Drude-Lorentz pole");
        eps += t.f * wp2 / den;
    }
    return eps;
}

std::vector<Cplx> PermittivityModel::all_poles() const
{
    std::vector<Cplx> poles;
    for (const auto &t : terms_)
    {
        // roots of omega_j^2 - w^2 - i w gamma_j = 0
        const Cplx disc = std::sqrt(Cplx(t.omega * t.omega - 0.25 * t.gamma * t.gamma, 0.0));
        poles.push_back(-0.5 * kImag * t.gamma + disc);
        poles.push_back(-0.5 * kImag * t.gamma - disc);
    }
    return poles;
}

std::vector<Cplx> PermittivityModel::denominator_coeffs() const
{
    std::vector<Cplx> den{Cplx(1.0)};
    for (const auto &t : terms_)
        den = poly_mul_quadratic(den, Cplx(t.omega * t.omega), -kImag * t.gamma, Cplx(-1.0));
    return den;
}

std::vector<Cplx> PermittivityModel::numerator_coeffs() const
{
    // eps_inf * prod_k D_k + wp^2 sum_j f_j prod_{k != j} D_k
    std::vector<Cplx> num = denominator_coeffs();
    for (Cplx &c : num)
        c *= eps_inf_;
    const double wp2 = omega_p_ * omega_p_;
    for (std::size_t j = 0; j < terms_.size(); ++j)
    {
        std::vector<Cplx> part{Cplx(terms_[j].f * wp2)};
        for (std::size_t k = 0; k < terms_.size(); ++k)
            if (k != j)
                part = poly_mul_quadratic(part, Cplx(terms_[k].omega * terms_[k].omega),
                                          -kImag * terms_[k].gamma, Cplx(-1.0));
        if (num.size() < part.size())
            num.resize(part.size(), Cplx(0.0));
        for (std::size_t i = 0; i < part.size(); ++i)
            num[i] += part[i];
    }
    return num;
}

std::vector<Cplx> PermittivityModel::all_zeros() const
{
    if (terms_.empty())
        return {};
    std::vector<Cplx> roots = lina::polynomial_roots(numerator_coeffs());
    // Newton polish on eps itself; companion roots are accurate enough seeds.
    for (Cplx &r : roots)
    {
        bool ok = false;
        for (int it = 0; it < 100; ++it)
        {
            const Cplx f = eval(r);
            if (std::abs(f) < 1e-12)
            {
                ok = true;
                break;
            }
            const double h = 1e-7 * (1.0 + std::abs(r));
            const Cplx df = (eval(r + h) - eval(r - h)) / (2.0 * h);
            const Cplx step = f / df;
            r -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(r)))
            {
                ok = std::abs(eval(r)) < 1e-10;
                break;
            }
        }
        if (!ok && std::abs(eval(r)) > 1e-10)
            throw RootFindingFailure("zero polishing did not converge");
    }
    return roots;
}

std::pair<std::vector<Cplx>, std::vector<Cplx>>
PermittivityModel::pole_zero_set(const ComplexDisk &region) const
{
    if (!(region.radius < std::numeric_limits<double>::infinity()))
        throw DomainError("pole_zero_set requires a finite region");
    std::vector<Cplx> poles, zeros;
    for (const Cplx &p : all_poles())
        if (region.contains(p))
            poles.push_back(p);
    if (!terms_.empty())
        for (const Cplx &z : all_zeros())
            if (region.contains(z))
                zeros.push_back(z);
    return {poles, zeros};
}

std::vector<Cplx> PermittivityModel::branch_points(double target) const
{
    std::vector<Cplx> found;
    if (terms_.empty())
    {
        (void)target;
        return found; // constant model never crosses a different target
    }
    // 200-point seed grid over the validity window extended below the axis.
    const int nre = 200, nim = 8;
    for (int i = 0; i < nre; ++i)
        for (int k = 0; k <= nim; ++k)
        {
            Cplx w(kValidityLo + (kValidityHi - kValidityLo) * i / (nre - 1.0),
                   -1.5 * k / static_cast<double>(nim));
            bool converged = false;
            for (int it = 0; it < 60; ++it)
            {
                Cplx f;
                try
                {
                    f = eval(w) - target;
                }
                catch (const PoleProximity &)
                {
                    break;
                }
                if (std::abs(f) < 1e-12)
                {
                    converged = true;
                    break;
                }
                const double h = 1e-7 * (1.0 + std::abs(w));
                const Cplx df = (eval(w + h) - eval(w - h)) / (2.0 * h);
                if (std::abs(df) == 0.0)
                    break;
                w -= f / df;
                if (std::abs(w) > 50.0)
                    break;
            }
            if (!converged || std::abs(eval(w) - target) > 1e-10)
                continue;
            if (w.real() < kValidityLo - 1e-6 || w.real() > kValidityHi + 1e-6 ||
                w.imag() > 1e-6 || w.imag() < -1.5 - 1e-6)
                continue;
            bool dup = false;
            for (const Cplx &p : found)
                if (std::abs(p - w) < 1e-7)
                    dup = true;
            if (!dup)
                found.push_back(w);
        }
    std::sort(found.begin(), found.end(),
              [](Cplx a, Cplx b) { return a.real() < b.real(); });
    return found;
}

Cplx PermittivityModel::refractive_index(Cplx omega) const
{
    Cplx n = std::sqrt(eval(omega));
    if (n.imag() < 0.0)
        n = -n;
    return n;
}

// ----------------------------------------------------------------------

void MaterialTable::add(const std::string &name, PermittivityModel model)
{
    models_.insert_or_assign(name, std::move(model));
}

const PermittivityModel &MaterialTable::get(const std::string &name) const
{
    const auto it = models_.find(name);
    if (it == models_.end())
        throw UnknownMaterial(name);
    return it->second;
}

bool MaterialTable::has(const std::string &name) const
{
    return models_.count(name) > 0;
}

std::vector<std::string> MaterialTable::names() const
{
    std::vector<std::string> out;
    for (const auto &kv : models_)
        out.push_back(kv.first);
    return out;
}

MaterialTable load_materials_json(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open material file: " + path);
    nlohmann::json doc = nlohmann::json::parse(in);
    MaterialTable table;
    for (const auto &entry : doc.at("materials"))
    {
        const std::string name = entry.at("name").get<std::string>();
        if (entry.contains("eps"))
        {
            table.add(name, PermittivityModel::constant(entry.at("eps").get<double>()));
            continue;
        }
        std::vector<OscillatorTerm> terms;
        for (const auto &t : entry.at("terms"))
            terms.push_back({t.at("f").get<double>(), t.at("omega").get<double>(),
                             t.at("gamma").get<double>()});
        table.add(name, PermittivityModel(entry.at("eps_inf").get<double>(),
                                          entry.at("omega_p").get<double>(), std::move(terms)));
    }
    return table;
}

MaterialTable MaterialTable::builtin()
{
#ifdef RESON_DATA_DIR
    return load_materials_json(std::string(RESON_DATA_DIR) + "/materials.json");
#else
    return load_materials_json("data/materials.json");
#endif
}

ScaleConvention ScaleConvention::electronvolt()
{
    constexpr double hbar = 1.054571817e-34; // J s
    constexpr double ev = 1.602176634e-19;   // J
    constexpr double c = 299792458.0;        // m/s
    const double w = ev / hbar;
    return {2.0 * kPi * c / w, w};
}

bool ScaleConvention::consistent(double rel_tol) const
{
    constexpr double c = 299792458.0;
    const double lhs = length_factor_m * frequency_factor;
    return std::abs(lhs - 2.0 * kPi * c) <= rel_tol * 2.0 * kPi * c;
}

} // namespace reson::materials
