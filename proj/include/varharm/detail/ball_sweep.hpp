#pragma once

#include <vector>

#include "varharm/grid.hpp"

namespace varharm::detail {

/// Largest integer k >= 0 with k*k <= rho2.
int int_reach(double rho2);

/// Sliding window max/min with half-width k along a contiguous array;
/// indices outside [0,n) are ignored (window clipped).
void sliding_max(const double* in, double* out, int n, int k);
void sliding_min(const double* in, double* out, int n, int k);

/// Per-center plain sums of `field` over grid points at squared cell
/// distance <= rho2 (balls clipped by the box). Left-to-right prefix
/// differences per row, rows accumulated in ascending order, so sums over
/// nested balls are monotone in floating point.
std::vector<double> disk_sums(const Grid& g, const std::vector<double>& field, double rho2);

/// Number of grid points at squared cell distance <= rho2 from each center.
std::vector<double> disk_counts(const Grid& g, double rho2);

/// out[p] = max/min of vals[q] over q with squared cell distance(p,q) <= rho2.
std::vector<double> disk_filter_max(const Grid& g, const std::vector<double>& vals, double rho2);
std::vector<double> disk_filter_min(const Grid& g, const std::vector<double>& vals, double rho2);

}  // namespace varharm::detail
