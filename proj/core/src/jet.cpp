#include "qcsurf/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace qcsurf {

namespace {

void enumerate_degree(int nvars, int degree, std::vector<int>& current, int pos, int left,
                      std::vector<std::vector<int>>& out) {
    if (pos == nvars - 1) {
        current[pos] = left;
        out.push_back(current);
        return;
    }
    for (int e = left; e >= 0; --e) {
        current[pos] = e;
        enumerate_degree(nvars, degree, current, pos + 1, left - e, out);
    }
}

}  // namespace

JetSpace::JetSpace(int nvars, int order) : nvars_(nvars), order_(order) {
    if (nvars < 1 || order < 0) throw std::invalid_argument("JetSpace: bad (m, K)");

    offsets_.resize(order + 2, 0);
    std::vector<int> current(nvars, 0);
    for (int d = 0; d <= order; ++d) {
        offsets_[d] = static_cast<int>(exponents_.size());
        enumerate_degree(nvars, d, current, 0, d, exponents_);
    }
    size_ = static_cast<int>(exponents_.size());
    offsets_[order + 1] = size_;

    degree_.resize(size_);
    for (int i = 0; i < size_; ++i) {
        int d = 0;
        for (int e : exponents_[i]) d += e;
        degree_[i] = d;
        lookup_[exponents_[i]] = i;
    }

    // Product table: all ordered pairs whose degrees sum to <= K.
    std::vector<int> sum(nvars);
    for (int ia = 0; ia < size_; ++ia) {
        for (int ib = 0; ib < size_; ++ib) {
            if (degree_[ia] + degree_[ib] > order) continue;
            for (int v = 0; v < nvars; ++v) sum[v] = exponents_[ia][v] + exponents_[ib][v];
            const int ic = index_of(sum);
            mul_.push_back({static_cast<std::uint32_t>(ia), static_cast<std::uint32_t>(ib),
                            static_cast<std::uint32_t>(ic)});
        }
    }
    std::sort(mul_.begin(), mul_.end(), [](const MulTriple& x, const MulTriple& y) {
        return std::tie(x.c, x.a, x.b) < std::tie(y.c, y.a, y.b);
    });

    // Derivative tables: (df)[beta] = (beta_v + 1) * f[beta + e_v].
    deriv_.resize(nvars);
    for (int v = 0; v < nvars; ++v) {
        for (int ib = 0; ib < size_; ++ib) {
            if (degree_[ib] >= order) continue;
            sum = exponents_[ib];
            sum[v] += 1;
            const int isrc = index_of(sum);
            deriv_[v].push_back({static_cast<std::uint32_t>(isrc), static_cast<std::uint32_t>(ib),
                                 static_cast<double>(exponents_[ib][v] + 1)});
        }
    }
}

int JetSpace::index_of(const std::vector<int>& alpha) const {
    auto it = lookup_.find(alpha);
    return it == lookup_.end() ? -1 : it->second;
}

const JetSpace& JetSpace::get(int nvars, int order) {
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::unique_ptr<JetSpace>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[{nvars, order}];
    if (!slot) slot.reset(new JetSpace(nvars, order));
    return *slot;
}

Jet::Jet(const JetSpace& sp) : sp_(&sp), valid_(sp.order()), c_(sp.size(), 0.0) {}

Jet Jet::constant(const JetSpace& sp, double value) {
    Jet j(sp);
    j.c_[0] = value;
    return j;
}

Jet Jet::variable(const JetSpace& sp, int var, double value) {
    if (var < 0 || var >= sp.nvars()) throw std::invalid_argument("Jet::variable: bad index");
    Jet j(sp);
    j.c_[0] = value;
    if (sp.order() >= 1) {
        std::vector<int> alpha(sp.nvars(), 0);
        alpha[var] = 1;
        j.c_[sp.index_of(alpha)] = 1.0;
    }
    return j;
}

double Jet::value() const {
    if (!sp_ || valid_ < 0) throw std::logic_error("Jet::value: no trusted coefficients");
    return c_[0];
}

double Jet::coeff(int idx) const {
    if (!sp_) throw std::logic_error("Jet::coeff: empty jet");
    if (sp_->degree_of(idx) > valid_)
        throw std::logic_error("Jet::coeff: degree " + std::to_string(sp_->degree_of(idx)) +
                               " beyond valid order " + std::to_string(valid_));
    return c_[idx];
}

double Jet::coeff(const std::vector<int>& alpha) const {
    const int idx = sp_->index_of(alpha);
    if (idx < 0) throw std::invalid_argument("Jet::coeff: multi-index beyond order");
    return coeff(idx);
}

double Jet::d1(int var) const {
    std::vector<int> alpha(sp_->nvars(), 0);
    alpha[var] = 1;
    return coeff(alpha);
}

double Jet::d2(int v1, int v2) const {
    std::vector<int> alpha(sp_->nvars(), 0);
    alpha[v1] += 1;
    alpha[v2] += 1;
    const double c = coeff(alpha);
    return v1 == v2 ? 2.0 * c : c;
}

void Jet::check_same(const Jet& o) const {
    if (sp_ != o.sp_) throw std::invalid_argument("Jet: operands from different spaces");
}

Jet& Jet::operator+=(const Jet& o) {
    check_same(o);
    for (int i = 0; i < sp_->size(); ++i) c_[i] += o.c_[i];
    valid_ = std::min(valid_, o.valid_);
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    check_same(o);
    for (int i = 0; i < sp_->size(); ++i) c_[i] -= o.c_[i];
    valid_ = std::min(valid_, o.valid_);
    return *this;
}

Jet& Jet::operator+=(double s) {
    c_[0] += s;
    return *this;
}

Jet& Jet::operator-=(double s) {
    c_[0] -= s;
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (double& x : c_) x *= s;
    return *this;
}

Jet Jet::operator-() const {
    Jet r = *this;
    for (double& x : r.c_) x = -x;
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    a.check_same(b);
    Jet r(*a.sp_);
    for (const auto& t : a.sp_->mul_table()) r.c_[t.c] += a.c_[t.a] * b.c_[t.b];
    r.valid_ = std::min(a.valid_, b.valid_);
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    a.check_same(b);
    const double b0 = b.c_[0];
    if (b0 == 0.0) throw std::domain_error("Jet division by jet with zero constant term");
    const int K = b.sp_->order();
    std::vector<double> coeffs(K + 1);
    double p = 1.0 / b0;
    for (int j = 0; j <= K; ++j) {
        coeffs[j] = (j % 2 == 0 ? p : -p);
        p /= b0;
    }
    return a * b.compose_univariate(coeffs);
}

Jet Jet::derivative(int var) const {
    if (var < 0 || var >= sp_->nvars()) throw std::invalid_argument("Jet::derivative: bad index");
    Jet r(*sp_);
    for (const auto& e : sp_->deriv_table(var)) r.c_[e.dst] = e.factor * c_[e.src];
    r.valid_ = std::min(valid_, sp_->order()) - 1;
    return r;
}

Jet Jet::truncated(int new_order) const {
    if (new_order >= sp_->order()) return *this;
    const JetSpace& sp2 = JetSpace::get(sp_->nvars(), new_order);
    Jet r(sp2);
    // Graded ordering makes low-degree coefficients a contiguous prefix.
    std::copy(c_.begin(), c_.begin() + sp2.size(), r.c_.begin());
    r.valid_ = std::min(valid_, new_order);
    return r;
}

Jet Jet::compose_univariate(const std::vector<double>& coeffs) const {
    const int K = sp_->order();
    if (static_cast<int>(coeffs.size()) < K + 1)
        throw std::invalid_argument("compose_univariate: need K+1 coefficients");
    Jet u_hat = *this;
    u_hat.c_[0] = 0.0;  // the deviation from the expansion point
    Jet r = Jet::constant(*sp_, coeffs[K]);
    r.valid_ = valid_;
    for (int j = K - 1; j >= 0; --j) {
        r = r * u_hat;
        r.c_[0] += coeffs[j];
    }
    r.valid_ = valid_;
    return r;
}

Jet jet_sqrt(const Jet& a) {
    const double a0 = a.raw(0);
    if (a0 <= 0.0) throw std::domain_error("jet_sqrt: nonpositive constant term");
    return jet_pow(a, 0.5);
}

Jet jet_pow(const Jet& a, double r) {
    const double a0 = a.raw(0);
    if (a0 <= 0.0) throw std::domain_error("jet_pow: nonpositive constant term");
    const int K = a.space().order();
    // Taylor coefficients of t^r about a0: C(r, j) * a0^(r-j).
    std::vector<double> coeffs(K + 1);
    double binom = 1.0;
    for (int j = 0; j <= K; ++j) {
        coeffs[j] = binom * std::pow(a0, r - j);
        binom *= (r - j) / (j + 1.0);
    }
    return a.compose_univariate(coeffs);
}

Jet implicit_solve(const std::function<Jet(const std::vector<Jet>&)>& build_F,
                   const std::vector<Jet>& free_coords, int solved_index,
                   double initial_guess, const ImplicitOptions& opts) {
    if (free_coords.empty()) throw std::invalid_argument("implicit_solve: no free coordinates");
    const JetSpace& sp = free_coords.front().space();
    const int total = static_cast<int>(free_coords.size()) + 1;
    if (solved_index < 0 || solved_index >= total)
        throw std::invalid_argument("implicit_solve: bad solved index");

    auto assemble = [&](const std::vector<Jet>& free, const Jet& solved) {
        std::vector<Jet> coords;
        coords.reserve(total);
        for (int i = 0, f = 0; i < total; ++i)
            coords.push_back(i == solved_index ? solved : free[f++]);
        return coords;
    };

    // Scalar Newton for the constant term, in a one-variable order-1 space
    // so the derivative with respect to the solved coordinate comes along.
    const JetSpace& line = JetSpace::get(1, 1);
    std::vector<Jet> free_const;
    free_const.reserve(free_coords.size());
    for (const Jet& f : free_coords) free_const.push_back(Jet::constant(line, f.raw(0)));

    double t = initial_guess;
    double dF0 = 0.0;
    bool converged = false;
    for (int it = 0; it < opts.max_newton; ++it) {
        const Jet g = build_F(assemble(free_const, Jet::variable(line, 0, t)));
        const double gv = g.value();
        dF0 = g.d1(0);
        if (std::abs(dF0) < opts.deriv_threshold)
            throw ChartDegeneracy("implicit_solve: |dF/dx_solved| = " + std::to_string(dF0) +
                                  " below threshold");
        if (std::abs(gv) <= opts.newton_tol) {
            converged = true;
            break;
        }
        t -= gv / dF0;
    }
    if (!converged) {
        const Jet g = build_F(assemble(free_const, Jet::variable(line, 0, t)));
        if (std::abs(g.value()) > opts.newton_tol)
            throw std::runtime_error("implicit_solve: Newton did not converge in " +
                                     std::to_string(opts.max_newton) + " iterations");
    }

    // Lift to the full jet space. With the exact constant term and a fixed
    // scalar derivative the update gains at least one trusted degree per
    // sweep, so K+2 sweeps close the truncation order.
    Jet h = Jet::constant(sp, t);
    for (int sweep = 0; sweep < sp.order() + 2; ++sweep) {
        const Jet r = build_F(assemble(free_coords, h));
        h -= r * (1.0 / dF0);
    }

    const Jet residual = build_F(assemble(free_coords, h));
    double worst = 0.0;
    for (int i = 0; i < sp.size(); ++i) worst = std::max(worst, std::abs(residual.raw(i)));
    if (worst > opts.residual_tol)
        throw std::runtime_error("implicit_solve: residual " + std::to_string(worst) +
                                 " above tolerance");
    return h;
}

}  // namespace qcsurf
