#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "stbclab/common.hpp"

namespace stbclab {

// Regular M-PAM: {2*floor(-M/2) + l, l = 1, 3, ..., 2M-1}. Zero mean and
// spacing 2 for even M; odd M is left-heavy by one step.
struct Pam {
    int m = 0;
    std::vector<double> points;  // ascending
};

Pam pam(int m);

double pam_mean(const Pam& p);
double pam_variance(const Pam& p);

enum class Complex2DKind { qam, hex, rotated_qam };

// Two-dimensional signal set in Cartesian complex form.
struct Complex2D {
    Complex2DKind kind = Complex2DKind::qam;
    int m_side = 0;      // points.size() == m_side^2
    double angle = 0.0;  // radians, 0 if unrotated
    std::vector<cplx> points;
};

Complex2D qam(int m);
Complex2D hex(int m);
Complex2D rotate(const Complex2D& c, double theta);

double min_pairwise_distance(const Complex2D& c);

// Number of vectors in the Cartesian product of the per-coordinate sets.
// Throws CapExceededError (naming the count) when it exceeds cap, and
// ConfigError on an empty product.
std::uint64_t vector_count(const std::vector<std::vector<double>>& sets, std::uint64_t cap);

// Visits every vector of the product, lexicographic in coordinate order
// (coordinate 0 most significant, values in listed order).
void for_each_vector(const std::vector<std::vector<double>>& sets, std::uint64_t cap,
                     const std::function<void(const std::vector<double>&)>& visit);

// Seekable odometer over a mixed-radix index space; lets search loops jump
// to an arbitrary linear position, which keeps parallel partitions exact.
class MixedRadix {
public:
    explicit MixedRadix(std::vector<std::size_t> radices);

    std::uint64_t total() const { return total_; }
    void seek(std::uint64_t linear);
    const std::vector<std::size_t>& digits() const { return digits_; }
    // Advances to the next index vector; returns false after the last one.
    bool next();

private:
    std::vector<std::size_t> radices_;
    std::vector<std::size_t> digits_;
    std::uint64_t total_ = 1;
};

}  // namespace stbclab
