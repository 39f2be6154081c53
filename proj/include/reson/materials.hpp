// SPDX-License-Identifier: Apache-2.0
//
// Dispersive permittivity models (Drude-Lorentz), their poles, zeros and
// plasmonic branch points, and the refractive-index branch used downstream.

#ifndef RESON_MATERIALS_HPP
#define RESON_MATERIALS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reson/types.hpp"

namespace reson::materials
{

struct OscillatorTerm
{
    double f = 0.0;     // oscillator strength
    double omega = 0.0; // resonance frequency (scaled eV)
    double gamma = 0.0; // damping (scaled eV)
};

class PermittivityModel
{
public:
    PermittivityModel() = default; // vacuum
    PermittivityModel(double eps_inf, double omega_p, std::vector<OscillatorTerm> terms);

    // Constant (possibly dispersive-free) material eps(omega) = eps_inf.
    static PermittivityModel constant(double eps);

    double eps_inf() const { return eps_inf_; }
    double omega_p() const { return omega_p_; }
    const std::vector<OscillatorTerm> &terms() const { return terms_; }
    bool is_constant() const { return terms_.empty(); }

    Cplx eval(Cplx omega) const;

    // Poles of the model in `region` (per-term quadratic roots),
    // zeros of the numerator polynomial (companion roots, Newton-polished).
    std::pair<std::vector<Cplx>, std::vector<Cplx>> pole_zero_set(const ComplexDisk &region) const;

    // All poles / zeros, unrestricted.
    std::vector<Cplx> all_poles() const;
    std::vector<Cplx> all_zeros() const;

    // Frequencies in the validity window with eps(omega) = target.
    std::vector<Cplx> branch_points(double target) const;

    // sqrt(eps) on the branch with Im n >= 0.
    Cplx refractive_index(Cplx omega) const;

    // Numerator / denominator coefficients of eps written over the common
    // denominator (ascending powers of omega).
    std::vector<Cplx> numerator_coeffs() const;
    std::vector<Cplx> denominator_coeffs() const;

private:
    double eps_inf_ = 1.0;
    double omega_p_ = 0.0;
    std::vector<OscillatorTerm> terms_;
};

// Validity window of the tabulated models, scaled units (section 5 data).
inline constexpr double kValidityLo = 0.5;
inline constexpr double kValidityHi = 6.5;

class MaterialTable
{
public:
    void add(const std::string &name, PermittivityModel model);
    const PermittivityModel &get(const std::string &name) const;
    bool has(const std::string &name) const;
    std::vector<std::string> names() const;

    // vacuum (1), silica (2) and the tabulated gold model from the data file.
    static MaterialTable builtin();

private:
    std::map<std::string, PermittivityModel> models_;
};

// Parse material definitions from a JSON document (see data/materials.json).
MaterialTable load_materials_json(const std::string &path);

// Scaling convention: L * W = 2 pi c.
struct ScaleConvention
{
    double length_factor_m;  // L in meters
    double frequency_factor; // W in Hz

    static ScaleConvention electronvolt(); // W = eV/hbar, L = 2 pi c / W
    bool consistent(double rel_tol = 1e-12) const;
};

} // namespace reson::materials

#endif // RESON_MATERIALS_HPP
