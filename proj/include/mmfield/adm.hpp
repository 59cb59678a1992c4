#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mmfield/field.hpp"
#include "mmfield/gw.hpp"

namespace mmf {

/// One augmented distance matrix: the pairwise distances of a sampled
/// n-tuple together with the sampled field values.
struct AdmSample {
  FiniteMetric r;
  std::vector<TargetPoint> b;
  std::uint64_t seed = 0;
  std::size_t draw_index = 0;
};

/// A seeded multiset of i.i.d. ADM samples of a fixed order.
struct EmpiricalAdm {
  std::size_t order = 0;
  TargetSpace target;
  std::uint64_t seed = 0;
  std::vector<AdmSample> samples;
};

/// Draws `count` i.i.d. order-tuples from the field's measure (with
/// replacement; counter-based RNG keyed by (seed, draw, position)) and maps
/// each through (x_i) -> (d(x_i, x_j), value(x_i)). Bit-identical for equal
/// inputs. Throws InvalidInput if the measure has no mass.
EmpiricalAdm adm_sample(const MMField& f, std::size_t order, std::size_t count,
                        std::uint64_t seed);

/// The ADM metric: max( 1/2 max_ij |r_ij - r'_ij|, max_i d_B(b_i, b'_i) ).
double rho_n(const AdmSample& a, const AdmSample& b, const TargetSpace& target);

/// p-Wasserstein distance between two empirical ADM distributions of the
/// same order with ground cost rho_n (p = inf uses the sup solver).
/// Duplicate samples are collapsed to weighted points first.
double adm_wasserstein(const EmpiricalAdm& dx, const EmpiricalAdm& dy, double p,
                       std::size_t threads = 1);

struct ConvergenceRow {
  std::size_t order = 0;
  double p = 1.0;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  double estimate = 0.0;
  double lower_noise = 0.0;   // 95% bootstrap interval over seeds, per order
  double upper_noise = 0.0;
  std::optional<double> oracle;  // exact d_GW,inf when computable
};

/// For each order in `orders`, runs num_seeds independent estimates (seeds
/// derived from base_seed) of the ADM Wasserstein distance and attaches a
/// bootstrap noise band of the per-order mean. When the exact d_GW,inf
/// oracle fits the size limit its value is reported alongside.
std::vector<ConvergenceRow> convergence_experiment(
    const MMField& fx, const MMField& fy, std::span<const std::size_t> orders,
    std::size_t count, double p, std::uint64_t base_seed,
    std::size_t num_seeds = 5, const GwOptions& gw_opt = {},
    std::size_t threads = 1);

struct ReconstructionResult {
  bool pass = false;
  double estimate = 0.0;
};

/// One-sided finite surrogate of the reconstruction theorem: estimates the
/// order-n ADM Wasserstein distance (p = 1) between the two fields with
/// seeds derived from `seed` and passes iff it is <= tol. Isomorphic fields
/// always pass up to sampling noise; a failure certifies non-isomorphism up
/// to that noise.
ReconstructionResult reconstruction_check(const MMField& fx, const MMField& fy,
                                          std::size_t order, std::size_t count,
                                          std::uint64_t seed, double tol,
                                          std::size_t threads = 1);

/// Fraction of `count` sampled order-tuples whose empirical measure is within
/// eps of the field's measure in p-Wasserstein distance.
double uniformity_fraction(const MMField& f, std::size_t order,
                           std::size_t count, double p, double eps,
                           std::uint64_t seed);

}  // namespace mmf
