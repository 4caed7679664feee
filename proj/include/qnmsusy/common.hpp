#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qnmsusy {

using cplx = std::complex<double>;

constexpr double pi = 3.141592653589793238462643383279502884;

// ---- error types -----------------------------------------------------------

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidParameter : Error { using Error::Error; };
struct SingularPoint : Error { using Error::Error; };
struct BandViolation : Error { using Error::Error; };
struct OverflowError : Error { using Error::Error; };
struct NodeAtPoint : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };
struct NodesPresent : Error { using Error::Error; };
struct NotAnEigenvalue : Error { using Error::Error; };
struct OmegaZeroUnsupported : Error { using Error::Error; };
struct ComplexOmegaSquared : Error { using Error::Error; };
struct Type4NotTabulated : Error { using Error::Error; };
struct PrefactorPole : Error { using Error::Error; };
struct AtModeFrequency : Error { using Error::Error; };
struct DegenerateParameters : Error { using Error::Error; };
struct NodefulGenerator : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct ZeroNorm : Error { using Error::Error; };
struct DegenerateEigenvalue : Error { using Error::Error; };
struct NotADoubleZero : Error { using Error::Error; };
struct NotRealizable : Error { using Error::Error; };
struct NoMerge : Error { using Error::Error; };
struct NonPositiveDensity : Error { using Error::Error; };
struct InsufficientSmoothness : Error { using Error::Error; };
struct AlphaOne : Error { using Error::Error; };
struct BoundStateObstruction : Error { using Error::Error; };

// ---- small helpers ---------------------------------------------------------

inline double sq(double x) { return x * x; }
inline cplx sq(cplx x) { return x * x; }

// Uniform grid of n points on [lo, hi], endpoints included.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    if (n == 1) { g[0] = lo; return g; }
    const double h = (hi - lo) / double(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + h * double(i);
    g.back() = hi;
    return g;
}

}  // namespace qnmsusy
