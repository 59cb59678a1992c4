#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "mmfield/metric.hpp"

namespace mmf {

/// A point of a target space. Euclidean/sup-norm targets use coordinate
/// vectors, finite targets use a point index, Hamming targets use bit words.
using TargetPoint = std::variant<std::vector<double>,   // euclidean / sup-norm
                                 std::size_t,           // finite
                                 std::vector<std::uint8_t>>;  // hamming

/// The codomain B of a field: one of four built-in kinds with an exact
/// distance evaluator. Closed enumeration so the file format stays bit-exact.
class TargetSpace {
 public:
  struct Euclidean { std::size_t dim; };
  struct SupNorm { std::size_t dim; };
  struct Finite { FiniteMetric metric; };
  struct Hamming { std::size_t len; };

  TargetSpace() : kind_(Euclidean{1}) {}
  explicit TargetSpace(Euclidean e) : kind_(e) {}
  explicit TargetSpace(SupNorm s) : kind_(s) {}
  explicit TargetSpace(Finite f) : kind_(std::move(f)) {}
  explicit TargetSpace(Hamming h) : kind_(h) {}

  static TargetSpace euclidean(std::size_t dim) { return TargetSpace(Euclidean{dim}); }
  static TargetSpace sup_norm(std::size_t dim) { return TargetSpace(SupNorm{dim}); }
  static TargetSpace finite(FiniteMetric m) { return TargetSpace(Finite{std::move(m)}); }
  static TargetSpace hamming(std::size_t len) { return TargetSpace(Hamming{len}); }

  /// d_B. Throws InvalidInput if a point is not well-formed for this space.
  double distance(const TargetPoint& a, const TargetPoint& b) const;

  bool well_formed(const TargetPoint& p) const;

  /// Same kind and same parameters (finite kinds compare matrices).
  bool same_space(const TargetSpace& other) const;

  template <class T>
  const T* get_if() const { return std::get_if<T>(&kind_); }

  const std::variant<Euclidean, SupNorm, Finite, Hamming>& kind() const { return kind_; }

 private:
  std::variant<Euclidean, SupNorm, Finite, Hamming> kind_;
};

}  // namespace mmf
