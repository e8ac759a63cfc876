#pragma once

// All numeric tolerances used across the library live here.

namespace stbclab::tol {

// LU determinant: documented relative residual of the factorization.
inline constexpr double det_residual = 1e-10;

// Gram eigenvalues below -gram_clamp * max(1, lambda_max) are an internal
// error; anything in (-clamp, 0) is snapped to 0.
inline constexpr double gram_clamp = 1e-12;

// Householder QR reconstruction contract, ||QR - A|| / ||A||.
inline constexpr double qr_recon = 1e-10;

// Singular values below rank_threshold * sigma_max do not count toward rank.
inline constexpr double rank_threshold = 1e-10;

// Determinants below this are treated as a rank-deficient difference.
inline constexpr double mindet_zero = 1e-12;

// Slope slack when deciding a determinant-exponent criterion verdict.
inline constexpr double criterion_eps = 0.05;

// Water-filling multiplier: residual of the log-sum constraint.
inline constexpr double kkt_residual = 1e-9;

// Agreement required between the water-filling solution and the
// projected-gradient cross-check (relative objective gap).
inline constexpr double crosscheck_gap = 1e-4;

// Real-equivalent channel identity check, vec(HX)~ == Heq * s.
inline constexpr double encode_identity = 1e-10;

}  // namespace stbclab::tol
