#ifndef QCSURF_HK_HPP
#define QCSURF_HK_HPP

/// Quaternion algebra and the flat quaternionic ambient space: the
/// Euclidean metric G on R^{4(n+1)} together with the hypercomplex triple
/// J1, J2, J3 acting blockwise on quaternionic coordinates.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qcsurf {

/// Quaternion over the basis 1, i, j, k with the Hamilton product
/// (i*j = k, j*k = i, k*i = j, i^2 = j^2 = k^2 = -1).
struct Quaternion {
    double w = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Quaternion operator+(const Quaternion& a, const Quaternion& b) {
        return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend Quaternion operator-(const Quaternion& a, const Quaternion& b) {
        return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend Quaternion operator*(const Quaternion& a, const Quaternion& b) {
        return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
                a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
    }
    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
};

inline Quaternion quat_mul(const Quaternion& a, const Quaternion& b) { return a * b; }

/// A point or tangent vector of R^{4(n+1)}, viewed as (q_1, ..., q_n, p)
/// with quaternionic coordinates laid out component-contiguously:
/// coords[4l .. 4l+3] = (w, x, y, z) of the l-th quaternion.
struct AmbientVector {
    Eigen::VectorXd coords;
    int n = 1;  // quaternionic dimension; hypersurface dimension is 4n+3

    AmbientVector() = default;
    AmbientVector(Eigen::VectorXd c, int n_) : coords(std::move(c)), n(n_) {
        if (coords.size() != 4 * (n + 1))
            throw std::invalid_argument("AmbientVector: coords size must be 4(n+1)");
    }
    static AmbientVector zero(int n) {
        return AmbientVector(Eigen::VectorXd::Zero(4 * (n + 1)), n);
    }

    int dim() const { return static_cast<int>(coords.size()); }

    Quaternion quat(int l) const {
        return {coords[4 * l], coords[4 * l + 1], coords[4 * l + 2], coords[4 * l + 3]};
    }
    void set_quat(int l, const Quaternion& q) {
        coords[4 * l] = q.w;
        coords[4 * l + 1] = q.x;
        coords[4 * l + 2] = q.y;
        coords[4 * l + 3] = q.z;
    }
};

/// Convention tag for the action of J_s on quaternionic coordinates.
/// Only left multiplication is implemented; the tag keeps serialized data
/// forward-compatible if a right-multiplication variant is ever added.
enum class JConvention { LeftMultiplication };

/// Applies J_s to one quaternionic block (w,x,y,z) by left multiplication
/// with i, j or k. Works for any ring scalar (double, Jet, ...).
///
///   i*(w,x,y,z) = (-x,  w, -z,  y)
///   j*(w,x,y,z) = (-y,  z,  w, -x)
///   k*(w,x,y,z) = (-z, -y,  x,  w)
template <class T>
void apply_J_block(int s, const T* in, T* out) {
    switch (s) {
        case 1:
            out[0] = -in[1]; out[1] = in[0]; out[2] = -in[3]; out[3] = in[2];
            break;
        case 2:
            out[0] = -in[2]; out[1] = in[3]; out[2] = in[0]; out[3] = -in[1];
            break;
        case 3:
            out[0] = -in[3]; out[1] = -in[2]; out[2] = in[1]; out[3] = in[0];
            break;
        default:
            throw std::invalid_argument("apply_J_block: s must be 1, 2 or 3");
    }
}

/// The flat hyper-Kahler structure of H^{n+1}: metric G = standard Euclidean
/// inner product, complex structures J_s = blockwise left multiplication.
/// The flat Levi-Civita connection D is the coordinate directional
/// derivative and satisfies D J_s = 0.
struct HKStructure {
    int n = 1;
    JConvention convention = JConvention::LeftMultiplication;

    int ambient_dim() const { return 4 * (n + 1); }

    AmbientVector apply_J(int s, const AmbientVector& v) const {
        AmbientVector out = AmbientVector::zero(v.n);
        for (int l = 0; l <= v.n; ++l)
            apply_J_block(s, v.coords.data() + 4 * l, out.coords.data() + 4 * l);
        return out;
    }

    static double metric_G(const AmbientVector& u, const AmbientVector& v) {
        if (u.coords.size() != v.coords.size())
            throw std::invalid_argument("metric_G: dimension mismatch");
        return u.coords.dot(v.coords);
    }
};

/// J_s as a dense matrix, occasionally handy for value-level checks.
inline Eigen::MatrixXd J_matrix(int s, int n) {
    const int d = 4 * (n + 1);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(d, d);
    std::array<double, 4> in{}, out{};
    for (int l = 0; l <= n; ++l)
        for (int col = 0; col < 4; ++col) {
            in = {0, 0, 0, 0};
            in[col] = 1.0;
            apply_J_block(s, in.data(), out.data());
            for (int row = 0; row < 4; ++row) J(4 * l + row, 4 * l + col) = out[row];
        }
    return J;
}

/// Applies J_s in place on a plain Eigen vector (values, not jets).
inline Eigen::VectorXd apply_J(int s, const Eigen::VectorXd& v) {
    Eigen::VectorXd out(v.size());
    for (int l = 0; 4 * l < v.size(); ++l)
        apply_J_block(s, v.data() + 4 * l, out.data() + 4 * l);
    return out;
}

}  // namespace qcsurf

#endif
