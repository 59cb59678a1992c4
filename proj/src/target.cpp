#include "mmfield/target.hpp"

#include <cmath>

namespace mmf {

namespace {

const std::vector<double>* coords(const TargetPoint& p) {
  return std::get_if<std::vector<double>>(&p);
}

}  // namespace

bool TargetSpace::well_formed(const TargetPoint& p) const {
  if (const auto* e = get_if<Euclidean>()) {
    const auto* c = coords(p);
    return c && c->size() == e->dim;
  }
  if (const auto* s = get_if<SupNorm>()) {
    const auto* c = coords(p);
    return c && c->size() == s->dim;
  }
  if (const auto* f = get_if<Finite>()) {
    const auto* idx = std::get_if<std::size_t>(&p);
    return idx && *idx < f->metric.size();
  }
  const auto* h = get_if<Hamming>();
  const auto* bits = std::get_if<std::vector<std::uint8_t>>(&p);
  if (!bits || bits->size() != h->len) return false;
  for (auto b : *bits)
    if (b > 1) return false;
  return true;
}

double TargetSpace::distance(const TargetPoint& a, const TargetPoint& b) const {
  if (!well_formed(a) || !well_formed(b))
    throw InvalidInput("target point does not match its target space");
  if (get_if<Euclidean>()) {
    const auto& x = *coords(a);
    const auto& y = *coords(b);
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double g = x[k] - y[k];
      s += g * g;
    }
    return std::sqrt(s);
  }
  if (get_if<SupNorm>()) {
    const auto& x = *coords(a);
    const auto& y = *coords(b);
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
      s = std::max(s, std::abs(x[k] - y[k]));
    return s;
  }
  if (const auto* f = get_if<Finite>())
    return f->metric(std::get<std::size_t>(a), std::get<std::size_t>(b));
  const auto& x = std::get<std::vector<std::uint8_t>>(a);
  const auto& y = std::get<std::vector<std::uint8_t>>(b);
  std::size_t diff = 0;
  for (std::size_t k = 0; k < x.size(); ++k) diff += x[k] != y[k];
  return static_cast<double>(diff);
}

bool TargetSpace::same_space(const TargetSpace& other) const {
  if (kind_.index() != other.kind_.index()) return false;
  if (const auto* e = get_if<Euclidean>()) return e->dim == other.get_if<Euclidean>()->dim;
  if (const auto* s = get_if<SupNorm>()) return s->dim == other.get_if<SupNorm>()->dim;
  if (const auto* f = get_if<Finite>()) return f->metric == other.get_if<Finite>()->metric;
  return get_if<Hamming>()->len == other.get_if<Hamming>()->len;
}

}  // namespace mmf
