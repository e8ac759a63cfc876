#include "stbclab/constellation.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace stbclab {

Pam pam(int m) {
    if (m < 1) throw ConfigError("pam: M must be >= 1");
    Pam p;
    p.m = m;
    p.points.reserve(m);
    const double base = 2.0 * std::floor(-m / 2.0);
    for (int l = 1; l <= 2 * m - 1; l += 2) p.points.push_back(base + l);
    return p;
}

double pam_mean(const Pam& p) {
    double s = 0;
    for (double v : p.points) s += v;
    return s / static_cast<double>(p.points.size());
}

double pam_variance(const Pam& p) {
    const double mu = pam_mean(p);
    double s = 0;
    for (double v : p.points) s += (v - mu) * (v - mu);
    return s / static_cast<double>(p.points.size());
}

Complex2D qam(int m) {
    Pam p = pam(m);
    Complex2D c;
    c.kind = Complex2DKind::qam;
    c.m_side = m;
    c.points.reserve(static_cast<std::size_t>(m) * m);
    for (double a : p.points)
        for (double b : p.points) c.points.emplace_back(a, b);
    return c;
}

Complex2D hex(int m) {
    Pam p = pam(m);
    const cplx omega = std::exp(cplx(0.0, 2.0 * std::numbers::pi / 3.0));
    Complex2D c;
    c.kind = Complex2DKind::hex;
    c.m_side = m;
    c.points.reserve(static_cast<std::size_t>(m) * m);
    for (double a : p.points)
        for (double b : p.points) c.points.push_back(cplx(a, 0.0) + omega * b);
    return c;
}

Complex2D rotate(const Complex2D& c, double theta) {
    Complex2D out = c;
    out.kind = c.kind == Complex2DKind::hex ? Complex2DKind::hex : Complex2DKind::rotated_qam;
    out.angle = c.angle + theta;
    const cplx w = std::exp(cplx(0.0, theta));
    for (cplx& p : out.points) p *= w;
    return out;
}

double min_pairwise_distance(const Complex2D& c) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.points.size(); ++i)
        for (std::size_t j = i + 1; j < c.points.size(); ++j)
            best = std::min(best, std::abs(c.points[i] - c.points[j]));
    return best;
}

std::uint64_t vector_count(const std::vector<std::vector<double>>& sets, std::uint64_t cap) {
    if (sets.empty()) throw ConfigError("vector enumeration: empty product (no coordinates)");
    std::uint64_t n = 1;
    for (const auto& s : sets) {
        if (s.empty()) throw ConfigError("vector enumeration: a coordinate set is empty");
        if (n > cap / s.size() + 1) n = std::numeric_limits<std::uint64_t>::max();
        else n *= s.size();
        if (n > cap)
            throw CapExceededError("vector enumeration: product of set sizes exceeds cap " +
                                   std::to_string(cap));
    }
    return n;
}

void for_each_vector(const std::vector<std::vector<double>>& sets, std::uint64_t cap,
                     const std::function<void(const std::vector<double>&)>& visit) {
    const std::uint64_t n = vector_count(sets, cap);
    const std::size_t k = sets.size();
    std::vector<std::size_t> idx(k, 0);
    std::vector<double> v(k);
    for (std::size_t i = 0; i < k; ++i) v[i] = sets[i][0];
    for (std::uint64_t c = 0; c < n; ++c) {
        visit(v);
        // odometer increment, last coordinate fastest
        std::size_t i = k;
        while (i-- > 0) {
            if (++idx[i] < sets[i].size()) {
                v[i] = sets[i][idx[i]];
                break;
            }
            idx[i] = 0;
            v[i] = sets[i][0];
        }
    }
}

MixedRadix::MixedRadix(std::vector<std::size_t> radices)
    : radices_(std::move(radices)), digits_(radices_.size(), 0) {
    for (std::size_t r : radices_) {
        if (r == 0) throw ConfigError("mixed radix: zero radix");
        total_ *= r;
    }
}

void MixedRadix::seek(std::uint64_t linear) {
    for (std::size_t i = radices_.size(); i-- > 0;) {
        digits_[i] = static_cast<std::size_t>(linear % radices_[i]);
        linear /= radices_[i];
    }
}

bool MixedRadix::next() {
    for (std::size_t i = radices_.size(); i-- > 0;) {
        if (++digits_[i] < radices_[i]) return true;
        digits_[i] = 0;
    }
    return false;
}

}  // namespace stbclab
