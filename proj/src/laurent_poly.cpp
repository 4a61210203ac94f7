#include "whflip/laurent_poly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace whflip {

LaurentPoly::LaurentPoly(cplx c) {
    if (c != 0.0) c_[0] = c;
}

LaurentPoly::LaurentPoly(std::map<int, cplx> coeffs) : c_(std::move(coeffs)) {
    for (auto it = c_.begin(); it != c_.end();) {
        if (it->second == 0.0)
            it = c_.erase(it);
        else
            ++it;
    }
}

LaurentPoly LaurentPoly::monomial(int k, cplx c) { return LaurentPoly(std::map<int, cplx>{{k, c}}); }

int LaurentPoly::low() const { return c_.empty() ? 0 : c_.begin()->first; }
int LaurentPoly::high() const { return c_.empty() ? 0 : c_.rbegin()->first; }

cplx LaurentPoly::coeff(int k) const {
    auto it = c_.find(k);
    return it == c_.end() ? cplx(0.0) : it->second;
}

double LaurentPoly::max_abs() const {
    double m = 0.0;
    for (const auto& [k, c] : c_) m = std::max(m, std::abs(c));
    return m;
}

double LaurentPoly::l1_norm() const {
    double s = 0.0;
    for (const auto& [k, c] : c_) s += std::abs(c);
    return s;
}

cplx LaurentPoly::operator()(cplx z) const {
    if (c_.empty()) return 0.0;
    // Horner over the dense range, then the monomial offset.
    cplx acc = 0.0;
    int lo = low();
    for (int k = high(); k >= lo; --k) acc = acc * z + coeff(k);
    if (lo != 0) acc *= std::pow(z, lo);
    return acc;
}

LaurentPoly LaurentPoly::tilde() const {
    std::map<int, cplx> m;
    for (const auto& [k, c] : c_) m[-k] = c;
    return LaurentPoly(std::move(m));
}

LaurentPoly LaurentPoly::shifted(int s) const {
    std::map<int, cplx> m;
    for (const auto& [k, c] : c_) m[k + s] = c;
    return LaurentPoly(std::move(m));
}

LaurentPoly LaurentPoly::adjoint() const {
    std::map<int, cplx> m;
    for (const auto& [k, c] : c_) m[-k] = std::conj(c);
    return LaurentPoly(std::move(m));
}

LaurentPoly LaurentPoly::conj_coeffs() const {
    std::map<int, cplx> m;
    for (const auto& [k, c] : c_) m[k] = std::conj(c);
    return LaurentPoly(std::move(m));
}

LaurentPoly LaurentPoly::normalized(double scale) const {
    double cut = kCoeffDrop * std::max(scale, max_abs());
    std::map<int, cplx> m;
    for (const auto& [k, c] : c_)
        if (std::abs(c) >= cut) m[k] = c;
    return LaurentPoly(std::move(m));
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r = *this;
    for (auto& [k, c] : r.c_) c = -c;
    return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) { return *this = *this + o; }
LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this = *this - o; }
LaurentPoly& LaurentPoly::operator*=(cplx s) { return *this = s * *this; }

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    std::map<int, cplx> m = a.c_;
    for (const auto& [k, c] : b.c_) m[k] += c;
    return LaurentPoly(std::move(m)).normalized(std::max(a.max_abs(), b.max_abs()));
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::map<int, cplx> m;
    for (const auto& [i, x] : a.c_)
        for (const auto& [j, y] : b.c_) m[i + j] += x * y;
    return LaurentPoly(std::move(m)).normalized(a.max_abs() * b.max_abs());
}

LaurentPoly operator*(cplx s, const LaurentPoly& a) {
    if (s == 0.0) return {};
    std::map<int, cplx> m;
    for (const auto& [k, c] : a.c_) m[k] = s * c;
    return LaurentPoly(std::move(m));
}

double rel_distance(const LaurentPoly& a, const LaurentPoly& b) {
    double scale = std::max({a.max_abs(), b.max_abs(), 1e-300});
    std::map<int, cplx> m = a.c_;
    for (const auto& [k, c] : b.c_) m[k] -= c;
    double d = 0.0;
    for (const auto& [k, c] : m) d = std::max(d, std::abs(c));
    return d / scale;
}

PolyRoots find_roots(const LaurentPoly& p) {
    PolyRoots out;
    if (p.is_zero()) return out;
    int lo = p.low();
    int n = p.high() - lo;
    out.lead = p.coeff(p.high());
    out.zero_order = lo;
    if (n == 0) return out;

    std::vector<cplx> a(n + 1);
    for (int k = 0; k <= n; ++k) a[k] = p.coeff(lo + k);

    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) comp(0, j) = -a[n - 1 - j] / a[n];
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);

    auto eval = [&](cplx z, cplx& dv) {
        cplx v = a[n];
        dv = 0.0;
        for (int k = n - 1; k >= 0; --k) {
            dv = dv * z + v;
            v = v * z + a[k];
        }
        return v;
    };
    for (int i = 0; i < n; ++i) {
        cplx z = es.eigenvalues()[i];
        cplx dv;
        double best = std::abs(eval(z, dv));
        for (int it = 0; it < 3 && best > 0.0; ++it) {
            cplx v = eval(z, dv);
            if (dv == 0.0) break;
            cplx z2 = z - v / dv;
            cplx d2;
            double r2 = std::abs(eval(z2, d2));
            if (!(r2 < best)) break;
            z = z2;
            best = r2;
        }
        out.roots.push_back(z);
    }
    return out;
}

std::vector<cplx> cluster_roots(const std::vector<cplx>& roots, double rel) {
    const std::size_t n = roots.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(roots[i] - roots[j]) <= rel * std::max(1.0, std::abs(roots[i])))
                parent[find(i)] = find(j);
    std::map<std::size_t, std::pair<cplx, int>> acc;
    for (std::size_t i = 0; i < n; ++i) {
        auto& e = acc[find(i)];
        e.first += roots[i];
        e.second += 1;
    }
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = acc[find(i)];
        out[i] = e.first / double(e.second);
    }
    return out;
}

LaurentPoly divide_linear(const LaurentPoly& p, cplx z) {
    if (p.is_zero()) return {};
    int lo = p.low();
    int n = p.high() - lo;
    if (n == 0) return {};
    std::vector<cplx> a(n + 1), q(n);
    for (int k = 0; k <= n; ++k) a[k] = p.coeff(lo + k);
    if (std::abs(z) <= 1.0) {
        q[n - 1] = a[n];
        for (int k = n - 1; k >= 1; --k) q[k - 1] = a[k] + z * q[k];
    } else {
        q[0] = -a[0] / z;
        for (int k = 1; k < n; ++k) q[k] = (q[k - 1] - a[k]) / z;
    }
    std::map<int, cplx> m;
    for (int k = 0; k < n; ++k) m[lo + k] = q[k];
    return LaurentPoly(std::move(m)).normalized(p.max_abs());
}

LaurentPoly poly_from_roots(const std::vector<cplx>& roots, cplx lead) {
    std::vector<cplx> c{lead};
    for (cplx r : roots) {
        std::vector<cplx> d(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            d[k + 1] += c[k];
            d[k] -= r * c[k];
        }
        c = std::move(d);
    }
    std::map<int, cplx> m;
    for (std::size_t k = 0; k < c.size(); ++k) m[int(k)] = c[k];
    return LaurentPoly(std::move(m)).normalized();
}

}  // namespace whflip
