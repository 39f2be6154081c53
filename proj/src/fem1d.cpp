// SPDX-License-Identifier: Apache-2.0

#include "reson/fem1d.hpp"

#include <cmath>
#include <fstream>

namespace reson::fem1d
{

namespace
{

// Global DoF layout: vertex 0, interior DoFs of element 0, vertex 1, ...
// Interior DoFs are element-local, so matrices are banded with bandwidth
// max_j p_j once Dirichlet vertices are eliminated.
struct DofMap
{
    std::vector<std::vector<int>> element_dofs; // full numbering
    std::vector<double> positions;
    int n_full = 0;
};

DofMap build_dof_map(const mesh::Mesh1D &mesh)
{
    DofMap map;
    int next = 0;
    std::vector<int> vertex_ids(mesh.n_elements() + 1);
    for (std::size_t k = 0; k < mesh.n_elements(); ++k)
    {
        const auto &e = mesh.elements()[k];
        if (k == 0)
        {
            vertex_ids[0] = next++;
            map.positions.push_back(e.x_left);
        }
        for (int i = 1; i < e.degree; ++i)
            map.positions.push_back(0.0); // filled below
        next += e.degree - 1;
        vertex_ids[k + 1] = next++;
        map.positions.push_back(e.x_right);
    }
    map.n_full = next;
    map.positions.resize(map.n_full);

    int interior = 0;
    for (std::size_t k = 0; k < mesh.n_elements(); ++k)
    {
        const auto &e = mesh.elements()[k];
        const auto &basis = mesh::LobattoBasis::get(e.degree);
        std::vector<int> dofs(e.degree + 1);
        dofs[0] = vertex_ids[k];
        dofs[e.degree] = vertex_ids[k + 1];
        interior = vertex_ids[k] + 1;
        for (int i = 1; i < e.degree; ++i)
        {
            dofs[i] = interior++;
            map.positions[dofs[i]] = e.mid() + 0.5 * e.size() * basis.nodes()[i];
        }
        map.positions[dofs[0]] = e.x_left;
        map.positions[dofs[e.degree]] = e.x_right;
        map.element_dofs.push_back(std::move(dofs));
    }
    return map;
}

} // namespace

Fem1DSystem assemble_1d(const mesh::Mesh1D &mesh)
{
    return assemble_1d(mesh, 0);
}

Fem1DSystem assemble_1d(const mesh::Mesh1D &mesh, int quadrature_boost)
{
    mesh.validate();
    const DofMap map = build_dof_map(mesh);

    // Dirichlet elimination on marked boundary vertices.
    std::vector<int> to_active(map.n_full);
    int n_active = 0;
    for (int i = 0; i < map.n_full; ++i)
    {
        const bool drop = (i == 0 && mesh.left_bc() == mesh::BoundaryKind::Dirichlet) ||
                          (i == map.n_full - 1 && mesh.right_bc() == mesh::BoundaryKind::Dirichlet);
        to_active[i] = drop ? -1 : n_active++;
    }

    std::map<std::string, std::vector<lina::Triplet>> a_trip, m_trip;
    std::vector<double> phi, dphi;
    for (std::size_t k = 0; k < mesh.n_elements(); ++k)
    {
        const auto &e = mesh.elements()[k];
        const auto &basis = mesh::LobattoBasis::get(e.degree);
        const auto &rule = mesh::gauss_legendre(e.degree + 1 + quadrature_boost);
        const int nb = e.degree + 1;
        const double jac = 0.5 * e.size();
        std::vector<double> ae(nb * nb, 0.0), me(nb * nb, 0.0);
        for (std::size_t q = 0; q < rule.points.size(); ++q)
        {
            basis.eval(rule.points[q], phi, dphi);
            const double wq = rule.weights[q];
            for (int i = 0; i < nb; ++i)
                for (int j = 0; j <= i; ++j)
                {
                    ae[i * nb + j] += wq * dphi[i] * dphi[j] / jac;
                    me[i * nb + j] += wq * phi[i] * phi[j] * jac;
                }
        }
        auto &at = a_trip[e.material];
        auto &mt = m_trip[e.material];
        for (int i = 0; i < nb; ++i)
            for (int j = 0; j < nb; ++j)
            {
                const double av = ae[std::max(i, j) * nb + std::min(i, j)];
                const double mv = me[std::max(i, j) * nb + std::min(i, j)];
                const int gi = to_active[map.element_dofs[k][i]];
                const int gj = to_active[map.element_dofs[k][j]];
                if (gi < 0 || gj < 0)
                    continue;
                at.push_back({gi, gj, Cplx(av, 0.0)});
                mt.push_back({gi, gj, Cplx(mv, 0.0)});
            }
    }

    Fem1DSystem sys;
    sys.mesh = mesh;
    sys.dim = n_active;
    sys.full_to_active = to_active;
    sys.dofs.resize(n_active);
    for (int i = 0; i < map.n_full; ++i)
        if (to_active[i] >= 0)
            sys.dofs[to_active[i]].position = map.positions[i];
    sys.element_dofs.resize(mesh.n_elements());
    for (std::size_t k = 0; k < mesh.n_elements(); ++k)
    {
        sys.element_dofs[k].resize(map.element_dofs[k].size());
        for (std::size_t i = 0; i < map.element_dofs[k].size(); ++i)
            sys.element_dofs[k][i] = to_active[map.element_dofs[k][i]];
    }
    for (auto &kv : a_trip)
        sys.stiffness.emplace(kv.first, lina::SparseMatrix(n_active, std::move(kv.second)));
    for (auto &kv : m_trip)
        sys.mass.emplace(kv.first, lina::SparseMatrix(n_active, std::move(kv.second)));

    std::vector<lina::Triplet> e_trip;
    if (mesh.left_bc() == mesh::BoundaryKind::DtN && to_active[0] >= 0)
        e_trip.push_back({to_active[0], to_active[0], Cplx(1.0, 0.0)});
    if (mesh.right_bc() == mesh::BoundaryKind::DtN && to_active[map.n_full - 1] >= 0)
        e_trip.push_back({to_active[map.n_full - 1], to_active[map.n_full - 1], Cplx(1.0, 0.0)});
    sys.boundary = lina::SparseMatrix(n_active, std::move(e_trip));
    return sys;
}

Cplx Fem1DSystem::eval(const std::vector<Cplx> &u, double x, Cplx *du) const
{
    std::size_t k = 0;
    while (k + 1 < mesh.n_elements() && x > mesh.elements()[k].x_right)
        ++k;
    const auto &e = mesh.elements()[k];
    const double xi = (x - e.mid()) / (0.5 * e.size());
    std::vector<double> phi, dphi;
    mesh::LobattoBasis::get(e.degree).eval(std::min(1.0, std::max(-1.0, xi)), phi, dphi);
    Cplx val(0.0), der(0.0);
    for (int i = 0; i <= e.degree; ++i)
    {
        const int gi = element_dofs[k][i];
        const Cplx ui = (gi >= 0) ? u[gi] : Cplx(0.0);
        val += ui * phi[i];
        der += ui * dphi[i] / (0.5 * e.size());
    }
    if (du)
        *du = der;
    return val;
}

nep::NepCoefficient coeff_rho(const materials::PermittivityModel &m, Polarization pol)
{
    if (pol == Polarization::TM)
        return nep::NepCoefficient::constant(Cplx(1.0));
    if (m.is_constant())
        return nep::NepCoefficient::constant(Cplx(1.0 / m.eps_inf()));
    // TE: 1/eps(omega), poles at the zeros of eps
    nep::NepCoefficient c;
    c.eval = [m](Cplx w) { return 1.0 / m.eval(w); };
    const auto num = m.numerator_coeffs();
    const auto den = m.denominator_coeffs();
    c.num_degree = static_cast<int>(den.size()) - 1;
    c.den_degree = static_cast<int>(num.size()) - 1;
    c.finite_poles = m.all_zeros();
    return c;
}

nep::NepCoefficient coeff_mass(const materials::PermittivityModel &m, Polarization pol)
{
    if (pol == Polarization::TE)
        return nep::NepCoefficient::polynomial({Cplx(0.0), Cplx(0.0), Cplx(-1.0)});
    if (m.is_constant())
        return nep::NepCoefficient::polynomial({Cplx(0.0), Cplx(0.0), Cplx(-m.eps_inf())});
    // TM: -omega^2 eps(omega), poles at the poles of eps
    nep::NepCoefficient c;
    c.eval = [m](Cplx w) { return -w * w * m.eval(w); };
    const auto den = m.denominator_coeffs();
    c.num_degree = static_cast<int>(den.size()) - 1 + 2;
    c.den_degree = static_cast<int>(den.size()) - 1;
    c.finite_poles = m.all_poles();
    return c;
}

nep::RationalNEP build_nep_1d(const Fem1DSystem &system, const materials::MaterialTable &table,
                              Polarization polarization)
{
    nep::RationalNEP problem;
    problem.dim = system.dim;
    for (const auto &kv : system.stiffness)
    {
        problem.matrices.push_back(kv.second);
        problem.coefficients.push_back(coeff_rho(table.get(kv.first), polarization));
    }
    for (const auto &kv : system.mass)
    {
        problem.matrices.push_back(kv.second);
        problem.coefficients.push_back(coeff_mass(table.get(kv.first), polarization));
    }
    // DtN term -i omega rho_0, exterior vacuum: rho_0 = 1 for both cases
    if (system.boundary.nnz() > 0)
    {
        problem.matrices.push_back(system.boundary);
        problem.coefficients.push_back(
            nep::NepCoefficient::polynomial({Cplx(0.0), Cplx(0.0, -1.0)}));
    }
    return problem;
}

void write_matrix_market(const lina::SparseMatrix &a, const std::string &path)
{
    std::ofstream out(path);
    out << "%%MatrixMarket matrix coordinate complex general\n";
    out << a.dim() << " " << a.dim() << " " << a.nnz() << "\n";
    out.precision(17);
    for (int i = 0; i < a.dim(); ++i)
        for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
            out << i + 1 << " " << a.col_idx()[k] + 1 << " " << a.values()[k].real() << " "
                << a.values()[k].imag() << "\n";
}

} // namespace reson::fem1d
