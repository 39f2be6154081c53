// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "reson/fem_radial.hpp"
#include "reson/nleigs.hpp"
#include "reson/oracles.hpp"

using namespace reson;
using namespace reson::fem_radial;

namespace
{

RadialScene disk_scene(double n1_value, int m)
{
    (void)n1_value;
    RadialScene scene;
    scene.radii = {1.0};
    scene.materials = {"n5"};
    scene.pml = RadialPmlProfile::standard(1.0);
    scene.angular_mode = m;
    scene.polarization = Polarization::TM;
    return scene;
}

materials::MaterialTable disk_table()
{
    auto t = materials::MaterialTable::builtin();
    t.add("n5", materials::PermittivityModel::constant(25.0));
    return t;
}

} // namespace

TEST_CASE("pml stretching functions")
{
    const RadialPmlProfile p = RadialPmlProfile::standard(1.0);
    // identity below a
    const auto inside = pml_functions(p, 0.7);
    CHECK(inside.alpha_tilde == Cplx(1.0, 0.0));
    CHECK(inside.alpha == Cplx(1.0, 0.0));
    CHECK(inside.r_tilde == Cplx(0.7, 0.0));
    // constant branch beyond b
    const auto outside = pml_functions(p, p.b + 0.25);
    CHECK(std::abs(outside.alpha_tilde - Cplx(1.0, p.sigma0)) < 1e-14);
    CHECK(std::abs(outside.alpha - Cplx(1.0, p.sigma0)) < 1e-14);
    // ramp boundary conditions of the quintic
    CHECK(std::abs(p.ramp(p.a)) < 1e-13);
    CHECK(std::abs(p.ramp_derivative(p.a)) < 1e-13);
    CHECK(std::abs(p.ramp(p.b) - p.sigma0) < 1e-12);
    CHECK(std::abs(p.ramp_derivative(p.b)) < 1e-12);
    // continuity of sigma at a and b
    for (const double r0 : {p.a, p.b})
    {
        const auto lo = pml_functions(p, r0 - 1e-9);
        const auto hi = pml_functions(p, r0 + 1e-9);
        CHECK(std::abs(lo.alpha - hi.alpha) < 1e-6); // C^0 of sigma (C^2 of sigma~)
        CHECK(std::abs(lo.alpha_tilde - hi.alpha_tilde) < 1e-8);
    }
    // monotone ramp
    double prev = -1.0;
    for (double t = 0.0; t <= 1.0; t += 0.05)
    {
        const double v = p.ramp(p.a + t * (p.b - p.a));
        CHECK(v >= prev - 1e-13);
        prev = v;
    }
}

TEST_CASE("radial weak-form coefficients in the constant branch")
{
    const RadialPmlProfile p = RadialPmlProfile::standard(1.0);
    const double r = p.b + 0.2;
    const auto c = pml_functions(p, r);
    // alpha~ = alpha beyond b: stiffness coefficient reduces to r
    CHECK(std::abs(c.alpha_tilde / c.alpha - Cplx(1.0)) < 1e-14);
    const Cplx mass_coeff = c.alpha * c.alpha_tilde;
    CHECK(std::abs(mass_coeff - Cplx(1.0, p.sigma0) * Cplx(1.0, p.sigma0)) < 1e-13);
}

TEST_CASE("assembled radial matrices are complex symmetric and quadrature-stable")
{
    const auto scene = disk_scene(5.0, 0);
    const auto m = radial_mesh(scene, 6, 2);
    const auto sys = assemble_radial(scene, m);
    const auto a = sys.pml_stiffness.dense();
    for (int i = 0; i < sys.dim; ++i)
        for (int j = 0; j < i; ++j)
            CHECK(std::abs(a(i, j) - a(j, i)) < 1e-13 * (1.0 + std::abs(a(i, j))));
    // entries stable when the quadrature order is raised from p+4 to p+8
    const auto fine = assemble_radial(scene, m, 4);
    const auto b = fine.pml_stiffness.dense();
    for (int i = 0; i < sys.dim; ++i)
        for (int j = 0; j < sys.dim; ++j)
            CHECK(std::abs(a(i, j) - b(i, j)) < 1e-12 * (1.0 + std::abs(b(i, j))));
}

TEST_CASE("m = 0 and m = 1 differ only in the angular block")
{
    auto scene0 = disk_scene(5.0, 0);
    auto scene1 = disk_scene(5.0, 1);
    const auto mesh0 = radial_mesh(scene0, 4, 2);
    const auto mesh3 = radial_mesh(scene1, 4, 2);
    // note: m >= 1 eliminates the axis DoF, so compare mass blocks through
    // the NEP application on the shared interior instead
    const auto s0 = assemble_radial(scene0, mesh0);
    const auto s1 = assemble_radial(scene1, mesh3);
    CHECK(s0.dim == s1.dim + 1); // Dirichlet at the axis for m = 1
}

TEST_CASE("vacuum-only scene gives a linear-in-w^2 pencil")
{
    RadialScene scene;
    scene.radii = {1.0};
    scene.materials = {"vacuum"};
    scene.pml = RadialPmlProfile::standard(1.0);
    scene.angular_mode = 0;
    const auto m = radial_mesh(scene, 4, 2);
    const auto sys = assemble_radial(scene, m);
    const auto problem = build_nep_radial(sys, disk_table(), Polarization::TM);
    const auto [p, q] = problem.rational_type();
    CHECK(p == 2);
    CHECK(q == 0);
}

TEST_CASE("single disk m = 0: FEM + NLEIGS matches the Bessel relation oracle")
{
    // oracle roots of the TM disk relation near the axis
    const auto roots = oracles::reference_sweep(
        [](Cplx w) { return oracles::disk_relation(5.0, 1.0, 0, Polarization::TM, w); },
        Cplx(0.5, -0.25), Cplx(1.6, -0.005), 24, 1e-12);
    REQUIRE(!roots.empty());
    const Cplx target = roots.front().omega;

    const auto scene = disk_scene(5.0, 0);
    const auto m = radial_mesh(scene, 10, 3);
    const auto sys = assemble_radial(scene, m);
    const auto problem = build_nep_radial(sys, disk_table(), Polarization::TM);
    nleigs::SolverOptions opt;
    opt.nev = 4;
    opt.tol = 1e-9;
    nleigs::NleigsSolver solver(problem, ComplexDisk{target + Cplx(0.02, 0.0), 0.35}, opt);
    const auto report = solver.solve(target + Cplx(0.02, 0.0));
    REQUIRE(!report.pairs.empty());
    double best = 1e300;
    for (const auto &pair : report.pairs)
        best = std::min(best, std::abs(pair.omega - target));
    CHECK(best < 1e-7);
}

TEST_CASE("m >= 1 eigenfunctions vanish at the axis")
{
    const auto roots = oracles::reference_sweep(
        [](Cplx w) { return oracles::disk_relation(5.0, 1.0, 2, Polarization::TM, w); },
        Cplx(0.7, -0.3), Cplx(1.8, -0.005), 24, 1e-12);
    REQUIRE(!roots.empty());
    const Cplx target = roots.front().omega;
    auto scene = disk_scene(5.0, 2);
    const auto m = radial_mesh(scene, 10, 3);
    const auto sys = assemble_radial(scene, m);
    const auto problem = build_nep_radial(sys, disk_table(), Polarization::TM);
    nleigs::SolverOptions opt;
    opt.nev = 3;
    opt.tol = 1e-9;
    nleigs::NleigsSolver solver(problem, ComplexDisk{target, 0.3}, opt);
    const auto report = solver.solve(target + Cplx(0.01, -0.005));
    REQUIRE(!report.pairs.empty());
    const auto &pair = report.pairs.front();
    double max_mag = 0.0;
    for (const auto &c : pair.eigenvector)
        max_mag = std::max(max_mag, std::abs(c));
    // value at the first node: the axis DoF is Dirichlet-eliminated, so the
    // nodal reconstruction there is identically zero
    std::vector<double> phi, dphi;
    mesh::LobattoBasis::get(sys.mesh.elements()[0].degree).eval(-1.0, phi, dphi);
    Cplx at_axis(0.0);
    for (std::size_t i = 0; i < phi.size(); ++i)
    {
        const int gi = sys.element_dofs[0][i];
        if (gi >= 0)
            at_axis += phi[i] * pair.eigenvector[gi];
    }
    CHECK(std::abs(at_axis) < 1e-8 * max_mag);
    // and the m = 2 mode grows like r^2 off the axis: still small at the
    // first interior node
    CHECK(std::abs(pair.eigenvector.front()) < 0.05 * max_mag);
}
