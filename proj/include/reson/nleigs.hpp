// SPDX-License-Identifier: Apache-2.0
//
// Rational eigensolver: Leja-Bagby interpolation of T(omega), implicit
// block linearization, and a shift-and-invert Krylov-Schur iteration on a
// compact (TOAR-style) basis representation.

#ifndef RESON_NLEIGS_HPP
#define RESON_NLEIGS_HPP

#include <vector>

#include "reson/lina.hpp"
#include "reson/nep.hpp"
#include "reson/types.hpp"

namespace reson::nleigs
{

struct NleigsExpansion
{
    int degree = 0;                 // d
    std::vector<Cplx> nodes;        // sigma_0 .. sigma_d on the boundary of Sigma
    std::vector<Cplx> poles;        // gamma_1 .. gamma_d; infinity encoded below
    std::vector<double> scalings;   // beta_1 .. beta_d (beta_0 = 1)
    ComplexDisk sigma;
    std::vector<std::vector<Cplx>> divided_differences; // [term i][j] = d_i^j

    bool pole_is_infinite(int j) const; // j in 1..d
    std::vector<Cplx> basis(Cplx omega) const; // b_0..b_d
};

inline constexpr int kBoundarySamples = 512;

// Greedy Leja-Bagby selection of nodes/poles/scalings for (Sigma, Gamma).
// Candidate poles are consumed without replacement; the last pole is always
// placed at infinity, as the linearization requires.
NleigsExpansion leja_bagby_points(const ComplexDisk &sigma, std::vector<Cplx> gamma, int degree);

// Fill divided_differences for the problem's scalar coefficients by forward
// substitution through the triangular interpolation conditions.
void scalar_divided_differences(const nep::RationalNEP &problem, NleigsExpansion &expansion);

// max_i over samples of ||F_d(w)x - T(w)x|| / ||T(w)x|| with random probes.
double verify_interpolant(const nep::RationalNEP &problem, const NleigsExpansion &expansion,
                          const std::vector<Cplx> &omega_samples, int probes = 3,
                          unsigned seed = 7u);

struct ResonancePair
{
    Cplx omega{0.0, 0.0};
    std::vector<Cplx> eigenvector;
    double residual = 0.0; // ||T(omega) xi|| / ||xi||, recomputed from T directly
    Cplx shift{0.0, 0.0};
    bool converged = false;
};

struct SolverOptions
{
    int nev = 4;
    double tol = 1e-10;
    int max_restarts = 30;
    int degree = -1; // -1: automatic, max(p, q+1) of the rational type
    unsigned seed = 1234u;
    int keep = -1; // Ritz vectors kept at restart; -1: max(2 nev, nev + 8)
};

struct SolveReport
{
    std::vector<ResonancePair> pairs; // sorted by residual, inside Sigma
    bool all_converged = false;
    int restarts = 0;
    int arnoldi_steps = 0;
    std::size_t basis_complex_count = 0; // peak compact-basis storage
};

class NleigsSolver
{
public:
    NleigsSolver(const nep::RationalNEP &problem, const ComplexDisk &sigma,
                 SolverOptions options = {});

    const NleigsExpansion &expansion() const { return expansion_; }
    const SolverOptions &options() const { return options_; }

    SolveReport solve(Cplx mu) const;

    // k steps of the compact shift-and-invert Arnoldi with no restarts,
    // returning the (k+1) x k Hessenberg matrix. Start vector: the seeded
    // random u in the first block row. Used by the equivalence tests.
    lina::ZMat arnoldi_hessenberg(Cplx mu, int k, std::size_t *basis_complex_count = nullptr) const;

private:
    const nep::RationalNEP &problem_;
    SolverOptions options_;
    NleigsExpansion expansion_;
};

// Dense explicit linearization (test / oracle path, d*N small).
struct DensePencil
{
    lina::ZMat l0, l1;
};
DensePencil build_dense_pencil(const nep::RationalNEP &problem, const NleigsExpansion &expansion);

} // namespace reson::nleigs

#endif // RESON_NLEIGS_HPP
