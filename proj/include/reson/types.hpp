// SPDX-License-Identifier: Apache-2.0

#ifndef RESON_TYPES_HPP
#define RESON_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace reson
{

using Cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Cplx kImag{0.0, 1.0};

// Base class for all recoverable numerical failures.
class Error : public std::runtime_error
{
public:
    explicit Error(const std::string &what) : std::runtime_error(what) {}
};

#define RESON_DEFINE_ERROR(Name)                                  \
    class Name : public Error                                     \
    {                                                             \
    public:                                                       \
        explicit Name(const std::string &what = #Name)            \
            : Error(std::string(#Name) + ": " + what)             \
        {                                                         \
        }                                                         \
    }

RESON_DEFINE_ERROR(PoleProximity);
RESON_DEFINE_ERROR(RootFindingFailure);
RESON_DEFINE_ERROR(DomainError);
RESON_DEFINE_ERROR(NearPoleOfQ);
RESON_DEFINE_ERROR(FormulaPole);
RESON_DEFINE_ERROR(RegionInvalid);
RESON_DEFINE_ERROR(InfeasibleRefinement);
RESON_DEFINE_ERROR(NewtonDivergence);
RESON_DEFINE_ERROR(StrategyInfeasible);
RESON_DEFINE_ERROR(MeshInvalid);
RESON_DEFINE_ERROR(NodeAtPole);
RESON_DEFINE_ERROR(SingularShift);
RESON_DEFINE_ERROR(DegenerateRegion);
RESON_DEFINE_ERROR(DegenerateContrast);
RESON_DEFINE_ERROR(OracleMissing);
RESON_DEFINE_ERROR(UnknownMaterial);

#undef RESON_DEFINE_ERROR

// Closed disk in the complex plane. Used both as eigenvalue search target
// and as root-search region.
struct ComplexDisk
{
    Cplx center{0.0, 0.0};
    double radius = 0.0;

    bool contains(Cplx z, double slack = 0.0) const
    {
        return std::abs(z - center) <= radius + slack;
    }
};

enum class Polarization
{
    TM,
    TE
};

} // namespace reson

#endif // RESON_TYPES_HPP
