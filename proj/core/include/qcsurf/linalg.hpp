#ifndef QCSURF_LINALG_HPP
#define QCSURF_LINALG_HPP

/// Small helpers for jet-valued vectors and matrices: ambient vectors whose
/// components are jets, the flat metric contraction, the J_s action, chart
/// components of tangent fields, directional derivatives, and a dense
/// Gaussian elimination over the jet ring.

#include <Eigen/Dense>
#include <vector>

#include "qcsurf/hk.hpp"
#include "qcsurf/jet.hpp"

namespace qcsurf {

using JVec = std::vector<Jet>;  // ambient components, size 4(n+1)

inline JVec jvec_zero(const JetSpace& sp, int dim) {
    return JVec(static_cast<std::size_t>(dim), Jet::constant(sp, 0.0));
}

inline JVec jvec_constant(const JetSpace& sp, const Eigen::VectorXd& v) {
    JVec out;
    out.reserve(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(Jet::constant(sp, v[i]));
    return out;
}

inline Eigen::VectorXd jvec_value(const JVec& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i].value();
    return out;
}

/// Flat metric G = Euclidean contraction.
inline Jet dotG(const JVec& u, const JVec& v) {
    Jet s = u[0] * v[0];
    for (std::size_t i = 1; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

inline JVec operator+(const JVec& a, const JVec& b) {
    JVec r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

inline JVec operator-(const JVec& a, const JVec& b) {
    JVec r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

inline JVec scale(const JVec& v, const Jet& s) {
    JVec r;
    r.reserve(v.size());
    for (const Jet& x : v) r.push_back(x * s);
    return r;
}

inline JVec scale(const JVec& v, double s) {
    JVec r = v;
    for (Jet& x : r) x *= s;
    return r;
}

inline void axpy(JVec& y, const Jet& a, const JVec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

inline void axpy(JVec& y, double a, const JVec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += x[i] * a;
}

/// J_s acting blockwise on a jet-valued ambient vector.
inline JVec apply_J(int s, const JVec& v) {
    JVec out = v;
    for (std::size_t l = 0; 4 * l < v.size(); ++l)
        apply_J_block(s, v.data() + 4 * l, out.data() + 4 * l);
    return out;
}

inline JVec jvec_truncated(const JVec& v, int order) {
    JVec out;
    out.reserve(v.size());
    for (const Jet& x : v) out.push_back(x.truncated(order));
    return out;
}

/// Chart components of a tangent jet vector: in a graph chart the free
/// ambient coordinates ARE the chart variables, so the components are the
/// ambient components with the solved coordinate dropped.
inline JVec chart_components(const JVec& v, int solved_index) {
    JVec out;
    out.reserve(v.size() - 1);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (static_cast<int>(i) != solved_index) out.push_back(v[i]);
    return out;
}

/// Directional derivative of a scalar jet field along a tangent field.
inline Jet dir_derivative(const Jet& f, const JVec& dir_chart) {
    Jet s = dir_chart[0] * f.derivative(0);
    for (std::size_t a = 1; a < dir_chart.size(); ++a) s += dir_chart[a] * f.derivative(static_cast<int>(a));
    return s;
}

/// Value of the directional derivative of a scalar jet along a tangent
/// direction given by chart-component values.
inline double dir_derivative_value(const Jet& f, const Eigen::VectorXd& dir_chart) {
    double s = 0.0;
    for (Eigen::Index a = 0; a < dir_chart.size(); ++a) s += dir_chart[a] * f.d1(static_cast<int>(a));
    return s;
}

/// Flat ambient derivative D_dir W of a jet vector field (componentwise
/// directional derivative along the chart coordinates of `dir`).
inline JVec flat_derivative(const JVec& field, const JVec& dir_chart) {
    JVec out;
    out.reserve(field.size());
    for (const Jet& comp : field) out.push_back(dir_derivative(comp, dir_chart));
    return out;
}

/// Solves the square jet-valued linear system M x = rhs by Gaussian
/// elimination with partial pivoting on constant terms. All divisions are
/// jet divisions, so the result is a jet solution of the system.
inline std::vector<Jet> jet_solve(std::vector<std::vector<Jet>> M, std::vector<Jet> rhs) {
    const int n = static_cast<int>(M.size());
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(M[perm[col]][col].raw(0));
        for (int r = col + 1; r < n; ++r) {
            const double mag = std::abs(M[perm[r]][col].raw(0));
            if (mag > best) {
                best = mag;
                piv = r;
            }
        }
        if (best == 0.0) throw std::runtime_error("jet_solve: singular system");
        std::swap(perm[col], perm[piv]);
        const Jet& pivot = M[perm[col]][col];
        for (int r = col + 1; r < n; ++r) {
            Jet factor = M[perm[r]][col] / pivot;
            for (int c2 = col; c2 < n; ++c2) M[perm[r]][c2] -= factor * M[perm[col]][c2];
            rhs[perm[r]] -= factor * rhs[perm[col]];
        }
    }
    std::vector<Jet> x(n, Jet::constant(rhs[0].space(), 0.0));
    for (int row = n - 1; row >= 0; --row) {
        Jet acc = rhs[perm[row]];
        for (int c2 = row + 1; c2 < n; ++c2) acc -= M[perm[row]][c2] * x[c2];
        x[row] = acc / M[perm[row]][row];
    }
    return x;
}

}  // namespace qcsurf

#endif
