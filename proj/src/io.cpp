#include "mmfield/io.hpp"

#include <cmath>

#include <json.hpp>

namespace mmf {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

std::pair<std::size_t, std::size_t> line_col(const std::string& text,
                                             std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(e.what(), line, col);
  }
}

std::vector<std::vector<double>> parse_number_rows(const json& j,
                                                   const std::string& what) {
  if (!j.is_array() || j.empty()) fail(what + " must be a non-empty array");
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) fail(what + " rows must be arrays of numbers");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) fail(what + " entries must be numbers");
      r.push_back(v.get<double>());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

FiniteMetric parse_square_matrix(const json& j, const std::string& what) {
  const auto rows = parse_number_rows(j, what);
  for (const auto& r : rows)
    if (r.size() != rows.size()) fail(what + " must be square");
  return FiniteMetric(rows);
}

FiniteMetric metric_from_points(const std::vector<std::vector<double>>& pts,
                                bool sup_norm) {
  const std::size_t n = pts.size();
  const std::size_t dim = pts.front().size();
  for (const auto& p : pts)
    if (p.size() != dim) fail("points must share one dimension");
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double dist = 0.0;
      if (sup_norm) {
        for (std::size_t k = 0; k < dim; ++k)
          dist = std::max(dist, std::abs(pts[i][k] - pts[j][k]));
      } else {
        for (std::size_t k = 0; k < dim; ++k) {
          const double g = pts[i][k] - pts[j][k];
          dist += g * g;
        }
        dist = std::sqrt(dist);
      }
      d[i * n + j] = dist;
      d[j * n + i] = dist;
    }
  return FiniteMetric::from_flat(n, std::move(d));
}

FiniteMetric parse_metric(const json& j) {
  if (!j.is_object()) fail("\"metric\" must be an object");
  if (j.contains("d") && j.contains("points"))
    fail("metric carries both \"d\" and \"points\"; ambiguous");
  const std::string kind = j.value("kind", "");
  if (kind == "explicit") {
    if (!j.contains("d")) fail("explicit metric needs \"d\"");
    return parse_square_matrix(j.at("d"), "metric.d");
  }
  if (kind == "euclidean" || kind == "sup") {
    if (!j.contains("points")) fail(kind + " metric needs \"points\"");
    return metric_from_points(parse_number_rows(j.at("points"), "metric.points"),
                              kind == "sup");
  }
  fail("unknown metric kind \"" + kind + "\"");
}

TargetSpace parse_target(const json& j) {
  if (!j.is_object()) fail("\"target\" must be an object");
  const std::string kind = j.value("kind", "");
  if (kind == "euclidean") return TargetSpace::euclidean(j.at("dim").get<std::size_t>());
  if (kind == "sup") return TargetSpace::sup_norm(j.at("dim").get<std::size_t>());
  if (kind == "finite")
    return TargetSpace::finite(parse_square_matrix(j.at("d"), "target.d"));
  if (kind == "hamming") return TargetSpace::hamming(j.at("len").get<std::size_t>());
  fail("unknown target kind \"" + kind + "\"");
}

TargetPoint parse_value(const json& j, const TargetSpace& target) {
  if (target.get_if<TargetSpace::Euclidean>() || target.get_if<TargetSpace::SupNorm>()) {
    if (!j.is_array()) fail("value must be an array of reals");
    std::vector<double> v;
    for (const auto& e : j) {
      if (!e.is_number()) fail("value entries must be numbers");
      v.push_back(e.get<double>());
    }
    return v;
  }
  if (target.get_if<TargetSpace::Finite>()) {
    if (!j.is_number_unsigned()) fail("value must be a point index");
    return j.get<std::size_t>();
  }
  if (!j.is_array()) fail("value must be an array of bits");
  std::vector<std::uint8_t> bits;
  for (const auto& e : j) {
    if (!e.is_number_integer() || (e.get<int>() != 0 && e.get<int>() != 1))
      fail("hamming values must be 0/1 arrays");
    bits.push_back(static_cast<std::uint8_t>(e.get<int>()));
  }
  return bits;
}

json dump_value(const TargetPoint& v) {
  if (const auto* c = std::get_if<std::vector<double>>(&v)) return json(*c);
  if (const auto* idx = std::get_if<std::size_t>(&v)) return json(*idx);
  return json(std::get<std::vector<std::uint8_t>>(v));
}

json dump_matrix(const FiniteMetric& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json dump_target(const TargetSpace& t) {
  json j;
  if (const auto* e = t.get_if<TargetSpace::Euclidean>()) {
    j["kind"] = "euclidean";
    j["dim"] = e->dim;
  } else if (const auto* s = t.get_if<TargetSpace::SupNorm>()) {
    j["kind"] = "sup";
    j["dim"] = s->dim;
  } else if (const auto* f = t.get_if<TargetSpace::Finite>()) {
    j["kind"] = "finite";
    j["d"] = dump_matrix(f->metric);
  } else {
    j["kind"] = "hamming";
    j["len"] = t.get_if<TargetSpace::Hamming>()->len;
  }
  return j;
}

}  // namespace

MMField parse_field(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) fail("field file must hold a JSON object");
  for (const auto& key : {"metric", "target", "values"})
    if (!j.contains(key)) fail(std::string("field is missing \"") + key + "\"");

  MMField f;
  f.metric = parse_metric(j.at("metric"));
  f.target = parse_target(j.at("target"));

  const auto& jm = j.contains("measure") ? j.at("measure") : json("uniform");
  if (jm.is_string() && jm.get<std::string>() == "uniform") {
    f.measure = uniform_measure(f.metric.size());
  } else if (jm.is_array()) {
    for (const auto& v : jm) {
      if (!v.is_number()) fail("measure entries must be numbers");
      f.measure.push_back(v.get<double>());
    }
    if (f.measure.size() != f.metric.size())
      fail("measure length does not match the metric");
  } else {
    fail("\"measure\" must be an array or \"uniform\"");
  }

  const auto& jv = j.at("values");
  if (!jv.is_array()) fail("\"values\" must be an array");
  if (jv.size() != f.metric.size()) fail("values length does not match the metric");
  for (const auto& v : jv) {
    TargetPoint point = parse_value(v, f.target);
    if (!f.target.well_formed(point)) fail("value does not fit the target space");
    f.values.push_back(std::move(point));
  }
  return f;
}

std::string serialize_field(const MMField& f) {
  json j;
  j["metric"] = {{"kind", "explicit"}, {"d", dump_matrix(f.metric)}};
  j["measure"] = f.measure;
  j["target"] = dump_target(f.target);
  json values = json::array();
  for (const auto& v : f.values) values.push_back(dump_value(v));
  j["values"] = std::move(values);
  return j.dump(2) + "\n";
}

Coupling parse_coupling(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object() || !j.contains("p")) fail("coupling file needs a \"p\" matrix");
  const auto rows = parse_number_rows(j.at("p"), "coupling.p");
  return Coupling{Matrix::from_rows(rows)};
}

std::string serialize_coupling(const Coupling& c) {
  json rows = json::array();
  for (std::size_t i = 0; i < c.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < c.cols(); ++k) row.push_back(c.at(i, k));
    rows.push_back(std::move(row));
  }
  json j;
  j["p"] = std::move(rows);
  return j.dump(2) + "\n";
}

ParsedCandidate parse_candidate(const std::string& text, const TargetSpace& target) {
  const json j = parse_json(text);
  if (!j.is_object()) fail("candidate file must hold a JSON object");
  for (const auto& key : {"f", "b"})
    if (!j.contains(key)) fail(std::string("candidate is missing \"") + key + "\"");

  ParsedCandidate out;
  if (!j.at("f").is_array()) fail("candidate \"f\" must be an array of reals");
  for (const auto& v : j.at("f")) {
    if (!v.is_number()) fail("candidate \"f\" entries must be numbers");
    out.candidate.f.push_back(v.get<double>());
  }
  out.candidate.b = parse_value(j.at("b"), target);

  const std::string mode = j.value("mass_mode", "zero-mass");
  if (mode == "zero-mass")
    out.mode = MassMode::zero_mass;
  else if (mode == "uniform-reweight")
    out.mode = MassMode::uniform_reweight;
  else
    fail("unknown mass_mode \"" + mode + "\"");
  return out;
}

std::string serialize_empirical_adm(const EmpiricalAdm& e) {
  json j;
  j["order"] = e.order;
  j["seed"] = e.seed;
  j["target"] = dump_target(e.target);
  json samples = json::array();
  for (const auto& s : e.samples) {
    json js;
    js["r"] = dump_matrix(s.r);
    json b = json::array();
    for (const auto& v : s.b) b.push_back(dump_value(v));
    js["b"] = std::move(b);
    js["draw"] = s.draw_index;
    samples.push_back(std::move(js));
  }
  j["samples"] = std::move(samples);
  return j.dump(2) + "\n";
}

EmpiricalAdm parse_empirical_adm(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) fail("ADM file must hold a JSON object");
  EmpiricalAdm e;
  e.order = j.at("order").get<std::size_t>();
  e.seed = j.at("seed").get<std::uint64_t>();
  e.target = parse_target(j.at("target"));
  for (const auto& js : j.at("samples")) {
    AdmSample s;
    s.r = parse_square_matrix(js.at("r"), "sample.r");
    for (const auto& v : js.at("b")) s.b.push_back(parse_value(v, e.target));
    s.seed = e.seed;
    s.draw_index = js.value("draw", 0u);
    if (s.r.size() != e.order || s.b.size() != e.order)
      fail("ADM sample does not match the declared order");
    e.samples.push_back(std::move(s));
  }
  if (e.samples.empty()) fail("ADM file holds no samples");
  return e;
}

}  // namespace mmf
