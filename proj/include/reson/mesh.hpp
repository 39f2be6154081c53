// SPDX-License-Identifier: Apache-2.0
//
// 1D meshes with per-element polynomial degree, Gauss-Legendre quadrature
// and the Gauss-Lobatto nodal reference basis.

#ifndef RESON_MESH_HPP
#define RESON_MESH_HPP

#include <string>
#include <vector>

#include "reson/types.hpp"

namespace reson::mesh
{

enum class BoundaryKind
{
    Dirichlet,
    DtN,
    Natural
};

struct Element
{
    double x_left = 0.0, x_right = 0.0;
    int degree = 1;
    std::string material;
    int refine_level = 0; // splits relative to the initial mesh

    double size() const { return x_right - x_left; }
    double mid() const { return 0.5 * (x_left + x_right); }
};

class Mesh1D
{
public:
    Mesh1D() = default;
    // breakpoints strictly increasing; regions[i] = (material, degree) per interval.
    Mesh1D(std::vector<double> breakpoints, std::vector<std::string> materials,
           std::vector<int> degrees, BoundaryKind left, BoundaryKind right);

    const std::vector<Element> &elements() const { return elems_; }
    std::vector<Element> &elements() { return elems_; }
    std::size_t n_elements() const { return elems_.size(); }

    BoundaryKind left_bc() const { return left_; }
    BoundaryKind right_bc() const { return right_; }

    double x_min() const { return elems_.front().x_left; }
    double x_max() const { return elems_.back().x_right; }

    // split element k in two equal halves (degree and material inherited)
    void split(std::size_t k);
    // split every element once
    void refine_uniform();
    void set_uniform_degree(int p);

    // number of H1-conforming DoFs including boundary vertices
    int n_dofs_total() const;

    void validate() const; // MeshInvalid on violation

private:
    std::vector<Element> elems_;
    BoundaryKind left_ = BoundaryKind::Dirichlet;
    BoundaryKind right_ = BoundaryKind::DtN;
};

// n-point Gauss-Legendre rule on [-1, 1].
struct QuadratureRule
{
    std::vector<double> points, weights;
};
const QuadratureRule &gauss_legendre(int n);

// Gauss-Lobatto points on [-1, 1] (p+1 points, degree p) with the weights
// of the associated Lobatto quadrature rule.
const QuadratureRule &gauss_lobatto(int p);

// Nodal Lagrange basis at the Gauss-Lobatto points of degree p.
class LobattoBasis
{
public:
    explicit LobattoBasis(int p);

    int degree() const { return p_; }
    const std::vector<double> &nodes() const { return nodes_; }

    // all p+1 shape functions (and derivatives) at reference coordinate xi
    void eval(double xi, std::vector<double> &phi, std::vector<double> &dphi) const;

    static const LobattoBasis &get(int p); // cached

private:
    int p_ = 1;
    std::vector<double> nodes_;
    std::vector<double> bary_; // barycentric weights
};

} // namespace reson::mesh

#endif // RESON_MESH_HPP
