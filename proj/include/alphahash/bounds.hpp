#pragma once

// Closed-form space bounds, all in bits (or bits per key for rates).

#include <cstddef>
#include <span>
#include <vector>

namespace alphahash {

struct BoundPoint {
    double alpha = 0.0;
    double mixture_bits_per_key = 0.0;
    double sampling_bits_per_key = 0.0;
};

/// k log2 e + 3: expected length of the perfect scheme with a good index code.
double perfect_length_bound(std::size_t k);

/// lambda(alpha) log2 e: randomizing between perfect and zero-bit hashing.
double mixture_rate_bound(double alpha);

/// D + log2(D + 1) + 5 with D = k log2 k - H(X).
///
/// Entropies below zero are accepted (they arise when a loose lower bound is
/// plugged in); entropies above k log2 k are rejected.
double divergence_length_bound(std::size_t k, double entropy_x);

/// lambda log2 e - lambda log2((1 - lambda/2) / (1 - lambda/2 - (1 - 1/e)(1 - lambda)))
/// at lambda = lambda(alpha); zero for alpha <= 1/e.
double sampling_rate_bound(double alpha);

/// The finite-k leading terms lambda k log2 e - lambda k log2(a / b) with
/// a = 1 - (lambda - 1/k)/2 and b = a - (1 - 1/e)(1 - lambda - 1/k).
double sampling_main_terms(std::size_t k, double alpha);

/// O(log k) residue pinned to the divergence-bound overhead at the largest possible
/// divergence: log2(k log2 k + 1) + 5.
double sampling_residue(std::size_t k);

/// sampling_main_terms + sampling_residue; k >= 2.
double sampling_length_bound(std::size_t k, double alpha);

std::vector<BoundPoint> sweep(std::span<const double> alpha_grid);

/// `points` evenly spaced alphas on [0, 1] (a single point gives alpha = 0).
std::vector<double> uniform_alpha_grid(std::size_t points);

}  // namespace alphahash
