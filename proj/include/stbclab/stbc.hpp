#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stbclab/constellation.hpp"
#include "stbclab/linalg.hpp"

namespace stbclab {

// How the 2k real coordinates are drawn: scaled M-PAM per coordinate, or
// plain integers after a lattice rebase (at level M the concrete point set
// is still the M-PAM integer set).
enum class CoordKind { pam, integer };

// Linear design: codewords are sum_i (s_iI * W_{2i} + s_iQ * W_{2i+1}) with
// real information symbols as coefficients.
struct LinearStbc {
    std::string name;
    std::size_t nt = 0;  // transmit antennas
    std::size_t t = 0;   // channel uses
    std::size_t k = 0;   // complex symbols
    std::vector<CMat> weights;  // 2k matrices, I/Q interleaved, each nt x t
    CoordKind coord_kind = CoordKind::pam;
};

void validate(const LinearStbc& code);

struct GeneratorMatrix {
    RMat g;  // 2*t*nt x 2k; column i = vec_realify(vec(weights[i]))
    std::size_t rank = 0;
};

GeneratorMatrix generator_matrix(const LinearStbc& code);

// Exact rational, reduced.
struct Rational {
    long long num = 0;
    long long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// rank(G) / (2T) complex dimensions per channel use.
Rational code_rate(const LinearStbc& code);

// mu * sum_i (s_iI A_iI + s_iQ A_iQ).
CMat encode(const LinearStbc& code, std::span<const double> s, double mu);

// Keeps only the complex symbols named in `keep` (0-based, both I and Q
// weights). Antennas and block length are unchanged.
LinearStbc puncture(const LinearStbc& code, const std::vector<std::size_t>& keep);

// Re-expresses the design on the lattice with (2k x 2k) generator gl:
// the new generator matrix is G * gl and coordinates become integers.
LinearStbc lattice_rebase(const LinearStbc& code, const RMat& gl);

// Concrete per-coordinate point sets at constellation level M.
std::vector<std::vector<double>> coordinate_sets(const LinearStbc& code, int m);

// Average codeword energy (1/|X|) sum ||X||^2 under independent uniform
// coordinates, computed exactly from first and second PAM moments.
double mean_codeword_energy(const LinearStbc& code, int m, double mu);

// A code family indexed by SNR: constellation level M(SNR) and scaling
// mu(SNR) chosen so the average codeword energy is exactly T * SNR.
struct SchemeConfig {
    LinearStbc code;
    double r = 0.0;  // multiplexing gain
    std::vector<double> snr_grid_db;
    bool even_only = false;  // restrict the M-schedule to even sizes

    int m_at(double snr_linear) const;
    double mu_for(int m, double snr_linear) const;
    double mu_at(double snr_linear) const;
};

SchemeConfig scheme(const LinearStbc& code, double r, std::vector<double> snr_grid_db,
                    bool even_only = false);

double db_to_linear(double db);

// ---- catalog ----

struct CatalogEntry {
    std::string name;
    std::string description;
    std::size_t nt = 0;
    std::size_t t = 0;
    double rate = 0.0;         // complex dimensions per channel use
    std::string nr_note;       // receive-antenna setting the scheme targets
    std::string constellation; // symbol alphabet family
    bool external = false;     // construction not included, metadata only
    std::optional<LinearStbc> code;
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(const std::string& name);
LinearStbc catalog_code(const std::string& name);

LinearStbc alamouti();
LinearStbc golden();
LinearStbc golden_punctured();
// Coordinate-interleaved orthogonal designs, stored with the constellation
// rotation folded into the weights so coordinates are plain M-PAM.
LinearStbc ciod2();
LinearStbc ciod4();
LinearStbc ciod2_with_angle(double theta);
LinearStbc ciod4_with_angle(double theta);
// Alias taking the rotated-QAM view of the same design.
LinearStbc ciod4_rotated_qam();

double ciod_rotation_angle();  // atan(2) / 2

}  // namespace stbclab
