#pragma once

// Operator family A(m, theta) = -d^2/dx^2 + exp(i theta) |x|^m on L^2(R),
// and the eigen/instability records shared by the other modules.

#include <complex>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace anharm {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct OperatorSpec {
  double m = 2.0;
  double theta = 0.0;
  std::optional<int> k;  // m / 2 for even m, empty for m = 1

  bool is_airy() const { return !k.has_value(); }
  bool selfadjoint() const { return theta == 0.0; }
};

/// Open sector bound min{(m+2)pi/4, (m+2)pi/(2m)} for |theta|.
double sector_bound(double m);

/// Validates (m, theta). Throws Error(unsupported_exponent) unless m is 1 or
/// an even positive integer, Error(sector_violation) unless |theta| is
/// strictly inside the sector bound.
OperatorSpec validate_spec(double m, double theta);

enum class Boundary { dirichlet, neumann };
std::string_view to_string(Boundary bc);

struct HermiteCoeffs {
  Eigen::VectorXcd coeffs;  // unit Euclidean norm
  double scale = 1.0;       // basis functions sqrt(s) h_j(s x)
};

struct AiryParam {
  double mu = 0.0;
  Boundary bc = Boundary::dirichlet;
};

struct ClosedFormHarmonic {
  int n = 1;
};

// Finite-difference eigenvector on the uniform interior grid of [-L, L].
struct GridFunction {
  Eigen::VectorXcd values;
  double half_width = 0.0;
};

using Representation =
    std::variant<HermiteCoeffs, AiryParam, ClosedFormHarmonic, GridFunction>;

struct EigenRecord {
  int n = 1;  // 1-based, nondecreasing |lambda|
  cplx lambda;
  Representation representation;
};

/// Sorts by |lambda|, ties by ascending arg, and renumbers n = 1, 2, ...
void sort_by_modulus(std::vector<EigenRecord>& records);

enum class Method { galerkin, airy, harmonic_exact, ray };
std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

struct InstabilityRecord {
  int n = 1;
  double kappa = 1.0;
  double log_kappa = 0.0;  // kept separately; kappa overflows for large n
  Method method = Method::galerkin;
  double err_estimate = 0.0;
  bool clipped = false;  // raw value fell below 1 and was clipped
  bool denominator_underflow = false;  // kappa unavailable at double precision
  cplx lambda;           // eigenvalue associated with the index, when known
};

}  // namespace anharm
