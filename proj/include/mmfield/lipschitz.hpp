#pragma once

#include <span>
#include <vector>

#include "mmfield/field.hpp"
#include "mmfield/metric.hpp"

namespace mmf {

/// Sup distance between two equal-length real functions.
double sup_gap(std::span<const double> f, std::span<const double> g);

/// f is 1-Lipschitz: |f(x) - f(y)| <= d(x,y) + tol for all pairs.
bool is_one_lipschitz(std::span<const double> f, const FiniteMetric& m,
                      double tol = kDefaultTol);

/// f satisfies d(x,y) <= f(x) + f(y) + tol for all pairs.
bool is_delta(std::span<const double> f, const FiniteMetric& m,
              double tol = kDefaultTol);

/// Both of the above: f describes a one-point pseudo-metric extension.
bool is_delta1(std::span<const double> f, const FiniteMetric& m,
               double tol = kDefaultTol);

/// Maximal 1-Lipschitz extension of f (given on the index set `a`) to the
/// whole space: x -> min over a of (f(a) + d(a, x)). Throws if `a` is empty
/// or f is not 1-Lipschitz on `a`.
std::vector<double> whitney_mcshane(std::span<const double> f_on_a,
                                    const FiniteMetric& m,
                                    std::span<const std::size_t> a,
                                    double tol = kDefaultTol);

/// Row x of the distance matrix, d(x, .). An isometric embedding into
/// (Delta^1, sup distance).
std::vector<double> kuratowski_row(const FiniteMetric& m, std::size_t x);

/// Coordinatewise maximum of a non-empty family of equal-length functions.
std::vector<double> pointwise_sup(std::span<const std::vector<double>> fs);

/// Candidate one-point extension of a field: distances-to-new-point function
/// plus the value at the new point.
struct OnePointCandidate {
  std::vector<double> f;
  TargetPoint b;
};

enum class MassMode {
  zero_mass,         // new point gets measure 0, others unchanged
  uniform_reweight,  // new point gets 1/(n+1), others scaled by n/(n+1)
};

/// True iff c.f is in Delta^1 of the field's metric and
/// d_B(c.b, value(x)) <= c.f(x) + tol for every point x.
bool field_one_point_feasible(const MMField& f, const OnePointCandidate& c,
                              double tol = kDefaultTol);

/// Extends the field by one point at distances c.f with value c.b. The
/// candidate must be feasible; the result passes validate_field.
MMField field_one_point_extend(const MMField& f, const OnePointCandidate& c,
                               MassMode mode, double tol = kDefaultTol);

}  // namespace mmf
