// SPDX-License-Identifier: Apache-2.0

#include "reson/fem_radial.hpp"

#include <algorithm>
#include <cmath>

namespace reson::fem_radial
{

namespace
{
const std::string kPmlMaterial = "__pml";
}

double RadialPmlProfile::ramp(double r) const
{
    const double t = (r - a) / (b - a);
    return sigma0 * t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double RadialPmlProfile::ramp_derivative(double r) const
{
    const double t = (r - a) / (b - a);
    return sigma0 * 30.0 * t * t * (1.0 + t * (-2.0 + t)) / (b - a);
}

RadialPmlProfile RadialPmlProfile::standard(double scatterer_radius, double sigma0)
{
    RadialPmlProfile p;
    p.a = 1.1 * scatterer_radius;
    p.b = p.a + 1.0;
    // the constant-sigma pad does most of the absorbing: round-trip decay
    // exp(-2 Re(omega) sigma0 (ell + (b-a)/2)) must clear the transparency
    // tolerance at the low end of the spectral windows of interest
    p.ell = 2.5;
    p.sigma0 = sigma0;
    return p;
}

PmlCoefficients pml_functions(const RadialPmlProfile &profile, double r)
{
    if (!(r > 0.0) || r > profile.b + profile.ell + 1e-12)
        throw DomainError("pml_functions requires 0 < r <= b + ell");
    double sigma_tilde = 0.0, dsigma_tilde = 0.0;
    if (r >= profile.a && r <= profile.b)
    {
        sigma_tilde = profile.ramp(r);
        dsigma_tilde = profile.ramp_derivative(r);
    }
    else if (r > profile.b)
    {
        sigma_tilde = profile.sigma0;
    }
    const double sigma = sigma_tilde + r * dsigma_tilde;
    PmlCoefficients c;
    c.alpha_tilde = Cplx(1.0, sigma_tilde);
    c.alpha = Cplx(1.0, sigma);
    c.r_tilde = c.alpha_tilde * r;
    return c;
}

mesh::Mesh1D radial_mesh(const RadialScene &scene, int degree, int elements_per_region)
{
    if (scene.radii.empty() || scene.radii.size() != scene.materials.size())
        throw MeshInvalid("radial scene needs one material per shell");
    std::vector<double> breaks{kAxisRadius};
    std::vector<std::string> mats;
    std::vector<int> degs;
    auto add_region = [&](double r_end, const std::string &mat, int n_elem)
    {
        const double r_start = breaks.back();
        for (int i = 1; i <= n_elem; ++i)
        {
            breaks.push_back(r_start + (r_end - r_start) * i / n_elem);
            mats.push_back(mat);
            degs.push_back(degree);
        }
    };
    for (std::size_t s = 0; s < scene.radii.size(); ++s)
        add_region(scene.radii[s], scene.materials[s], elements_per_region);
    if (scene.radii.back() < scene.pml.a - 1e-12)
        add_region(scene.pml.a, "vacuum", elements_per_region);
    add_region(scene.pml.b, kPmlMaterial, 2 * elements_per_region);
    add_region(scene.pml.b + scene.pml.ell, kPmlMaterial, 2 * elements_per_region);
    const auto inner = scene.angular_mode >= 1 ? mesh::BoundaryKind::Dirichlet
                                               : mesh::BoundaryKind::Natural;
    return mesh::Mesh1D(breaks, mats, degs, inner, mesh::BoundaryKind::Dirichlet);
}

RadialSystem assemble_radial(const RadialScene &scene, const mesh::Mesh1D &radial, int extra_quad)
{
    radial.validate();
    const int m = scene.angular_mode;
    if (m < 0)
        throw DomainError("angular mode must be >= 0");

    // reuse the 1d DoF layout by assembling with unit coefficients first
    fem1d::Fem1DSystem layout = fem1d::assemble_1d(radial);

    RadialSystem sys;
    sys.dim = layout.dim;
    sys.angular_mode = m;
    sys.dofs = layout.dofs;
    sys.element_dofs = layout.element_dofs;
    sys.mesh = radial;

    std::map<std::string, std::vector<lina::Triplet>> a_trip, m_trip;
    std::vector<lina::Triplet> pml_a_trip, pml_m_trip;
    std::vector<double> phi, dphi;
    for (std::size_t k = 0; k < radial.n_elements(); ++k)
    {
        const auto &e = radial.elements()[k];
        const bool in_pml = (e.material == kPmlMaterial);
        // The ramp coefficients (alpha~/alpha etc.) are rational with complex
        // poles close to the real axis (distance ~ 1/|sigma'|); composite
        // panels keep the p+4 Gauss rule inside its convergence strip.
        const bool in_ramp = in_pml && e.x_left < scene.pml.b - 1e-12;
        const int n_panels = in_ramp ? 8 : 1;
        const auto &basis = mesh::LobattoBasis::get(e.degree);
        const auto &rule = mesh::gauss_legendre(e.degree + 1 + kQuadratureBoost + extra_quad);
        const int nb = e.degree + 1;
        const double jac = 0.5 * e.size();
        std::vector<Cplx> ae(nb * nb, Cplx(0.0)), me(nb * nb, Cplx(0.0));
        for (int panel = 0; panel < n_panels; ++panel)
            for (std::size_t q = 0; q < rule.points.size(); ++q)
            {
                // reference coordinate of this panel point within the element
                const double xi = -1.0 + (2.0 * panel + 1.0 + rule.points[q]) / n_panels;
                const double r = e.mid() + jac * xi;
                basis.eval(xi, phi, dphi);
                Cplx c_stiff(r, 0.0), c_ang(0.0), c_mass(r, 0.0);
                if (m > 0)
                    c_ang = Cplx(static_cast<double>(m) * m / r, 0.0);
                if (in_pml)
                {
                    const PmlCoefficients pml = pml_functions(scene.pml, r);
                    c_stiff = pml.alpha_tilde / pml.alpha * r;
                    if (m > 0)
                        c_ang = pml.alpha / pml.alpha_tilde * (static_cast<double>(m) * m / r);
                    c_mass = pml.alpha * pml.alpha_tilde * r;
                }
                const double wq = rule.weights[q] / n_panels;
                for (int i = 0; i < nb; ++i)
                    for (int j = 0; j <= i; ++j)
                    {
                        ae[i * nb + j] += wq * (c_stiff * dphi[i] * dphi[j] / jac +
                                                c_ang * phi[i] * phi[j] * jac);
                        me[i * nb + j] += wq * c_mass * phi[i] * phi[j] * jac;
                    }
            }
        auto push = [&](std::vector<lina::Triplet> &at, std::vector<lina::Triplet> &mt)
        {
            for (int i = 0; i < nb; ++i)
                for (int j = 0; j < nb; ++j)
                {
                    const int gi = layout.element_dofs[k][i];
                    const int gj = layout.element_dofs[k][j];
                    if (gi < 0 || gj < 0)
                        continue;
                    at.push_back({gi, gj, ae[std::max(i, j) * nb + std::min(i, j)]});
                    mt.push_back({gi, gj, me[std::max(i, j) * nb + std::min(i, j)]});
                }
        };
        if (in_pml)
            push(pml_a_trip, pml_m_trip);
        else
            push(a_trip[e.material], m_trip[e.material]);
    }
    for (auto &kv : a_trip)
        sys.stiffness.emplace(kv.first, lina::SparseMatrix(sys.dim, std::move(kv.second)));
    for (auto &kv : m_trip)
        sys.mass.emplace(kv.first, lina::SparseMatrix(sys.dim, std::move(kv.second)));
    sys.pml_stiffness = lina::SparseMatrix(sys.dim, std::move(pml_a_trip));
    sys.pml_mass = lina::SparseMatrix(sys.dim, std::move(pml_m_trip));
    return sys;
}

nep::RationalNEP build_nep_radial(const RadialSystem &system,
                                  const materials::MaterialTable &table,
                                  Polarization polarization)
{
    nep::RationalNEP problem;
    problem.dim = system.dim;
    for (const auto &kv : system.stiffness)
    {
        problem.matrices.push_back(kv.second);
        problem.coefficients.push_back(fem1d::coeff_rho(table.get(kv.first), polarization));
    }
    for (const auto &kv : system.mass)
    {
        problem.matrices.push_back(kv.second);
        problem.coefficients.push_back(fem1d::coeff_mass(table.get(kv.first), polarization));
    }
    // PML region is vacuum: frozen complex matrices with coefficients (1, -w^2)
    problem.matrices.push_back(system.pml_stiffness);
    problem.coefficients.push_back(nep::NepCoefficient::constant(Cplx(1.0)));
    problem.matrices.push_back(system.pml_mass);
    problem.coefficients.push_back(
        nep::NepCoefficient::polynomial({Cplx(0.0), Cplx(0.0), Cplx(-1.0)}));
    return problem;
}

} // namespace reson::fem_radial
