#ifndef QCSURF_JET_HPP
#define QCSURF_JET_HPP

/// Truncated multivariate Taylor ("jet") arithmetic: dense coefficient
/// storage over all multi-indices |alpha| <= K in m variables. Jets are the
/// sole differentiation engine of the library; every covariant derivative
/// downstream is assembled from jet products and jet partials.
///
/// Coefficients are Taylor coefficients, not derivatives: the stored value
/// at multi-index alpha is  (1/alpha!) * d^alpha f.
///
/// Each jet carries a `valid_order`: the largest total degree whose
/// coefficients are trustworthy. Partial derivatives lower it by one;
/// ring operations take the minimum. Reading a coefficient beyond the
/// valid order throws, which turns silent order-bookkeeping mistakes into
/// hard errors.

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcsurf {

/// Signals that an implicit-function chart cannot be built at this point
/// (the derivative with respect to the solved coordinate is too small).
/// Callers are expected to re-seat the chart on another coordinate.
struct ChartDegeneracy : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shared tables for one (m, K) truncation: multi-index enumeration in
/// graded lexicographic order, the product table, and per-variable
/// derivative tables. Instances are interned; use JetSpace::get.
class JetSpace {
public:
    static const JetSpace& get(int nvars, int order);

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    int size() const { return size_; }

    int degree_of(int idx) const { return degree_[idx]; }
    const std::vector<int>& exponent(int idx) const { return exponents_[idx]; }
    /// First linear index of the given total degree.
    int degree_offset(int d) const { return offsets_[d]; }
    /// Linear index of a multi-index, or -1 if |alpha| > K.
    int index_of(const std::vector<int>& alpha) const;

    struct MulTriple {
        std::uint32_t a, b, c;
    };
    const std::vector<MulTriple>& mul_table() const { return mul_; }

    struct DerivEntry {
        std::uint32_t src, dst;
        double factor;
    };
    const std::vector<DerivEntry>& deriv_table(int var) const { return deriv_[var]; }

private:
    JetSpace(int nvars, int order);

    int nvars_, order_, size_;
    std::vector<std::vector<int>> exponents_;
    std::vector<int> degree_;
    std::vector<int> offsets_;
    std::map<std::vector<int>, int> lookup_;
    std::vector<MulTriple> mul_;
    std::vector<std::vector<DerivEntry>> deriv_;
};

class Jet {
public:
    Jet() = default;
    explicit Jet(const JetSpace& sp);

    static Jet constant(const JetSpace& sp, double value);
    /// The coordinate function (value + 1 * x_var).
    static Jet variable(const JetSpace& sp, int var, double value);

    const JetSpace& space() const { return *sp_; }
    bool empty() const { return sp_ == nullptr; }
    int valid_order() const { return valid_; }

    double value() const;
    /// Raw Taylor coefficient by linear index (checked against valid order).
    double coeff(int idx) const;
    double coeff(const std::vector<int>& alpha) const;
    /// First derivative with respect to chart variable `var`.
    double d1(int var) const;
    /// Second derivative d^2 f / dx_v1 dx_v2 (derivative, not coefficient).
    double d2(int v1, int v2) const;

    double& raw(int idx) { return c_[idx]; }
    double raw(int idx) const { return c_[idx]; }

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator+=(double s);
    Jet& operator-=(double s);
    Jet& operator*=(double s);

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double s) { return a += s; }
    friend Jet operator+(double s, Jet a) { return a += s; }
    friend Jet operator-(Jet a, double s) { return a -= s; }
    friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }
    Jet operator-() const;

    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);

    /// Partial derivative as a jet; valid order drops by one.
    Jet derivative(int var) const;
    /// Copy truncated to a lower order (a cheaper space for deep passes).
    Jet truncated(int new_order) const;

    /// Composition with a scalar function given by its Taylor coefficients
    /// at the jet's constant term: result = sum_j coeffs[j] * (this - c0)^j.
    Jet compose_univariate(const std::vector<double>& coeffs) const;

private:
    void check_same(const Jet& o) const;

    const JetSpace* sp_ = nullptr;
    int valid_ = -1;
    std::vector<double> c_;
};

/// Square root via the univariate Taylor expansion of sqrt about the
/// constant term. Requires a positive constant term.
Jet jet_sqrt(const Jet& a);

/// Real power a^r (r rational or arbitrary real). Requires a positive
/// constant term.
Jet jet_pow(const Jet& a, double r);

struct ImplicitOptions {
    double newton_tol = 1e-13;   // absolute tolerance on F at the base point
    int max_newton = 50;         // scalar Newton iteration cap
    double deriv_threshold = 1e-6;  // |dF/dx_solved| below this is degenerate
    double residual_tol = 1e-12;    // final per-coefficient residual gate
};

/// Newton implicit-function solver in jet space. `build_F` evaluates the
/// defining function on a full coordinate tuple (free coordinates plus the
/// solved one spliced in at `solved_index`); `free_coords` are the jets of
/// the remaining coordinates. Returns the jet of the solved coordinate such
/// that F(coords) = 0 holds through the truncation order. The constant term
/// is found by a scalar Newton iteration started at `initial_guess`.
///
/// Throws ChartDegeneracy when |dF/dx_solved| falls below the threshold and
/// std::runtime_error when Newton fails to converge or the final jet
/// residual exceeds `residual_tol`.
Jet implicit_solve(const std::function<Jet(const std::vector<Jet>&)>& build_F,
                   const std::vector<Jet>& free_coords, int solved_index,
                   double initial_guess, const ImplicitOptions& opts = {});

}  // namespace qcsurf

#endif
