#include "girthlab/report.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace girthlab {

namespace {

Json big(const BigInt& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

Json ratio_json(const CayleyStats& row) {
  if (!row.girth) return nullptr;
  return Json{{"num", row.diameter}, {"den", *row.girth}, {"value", row.dg_ratio()}};
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  // Prefer the short form when it round-trips.
  for (int prec = 6; prec < std::numeric_limits<double>::max_digits10; ++prec) {
    std::ostringstream s;
    s << std::setprecision(prec) << v;
    if (std::stod(s.str()) == v) return s.str();
  }
  return os.str();
}

Json to_json(const ExactMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(big(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const ModMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const GraphSpec& spec) {
  Json j{{"n", spec.n}, {"l", spec.l}, {"a", spec.a}, {"b", spec.b}, {"regime", to_string(spec.regime)}};
  j["q"] = spec.q ? Json(*spec.q) : Json(nullptr);
  j["t"] = spec.t ? Json(*spec.t) : Json(nullptr);
  j["alternative_q"] = spec.alternative_q;
  Json flags = Json::array();
  for (const auto& f : spec.guarantees) flags.push_back({{"guarantee", to_string(f.kind)}, {"clause", f.clause}});
  j["guarantees"] = flags;
  return j;
}

Json to_json(const FreenessReport& r) {
  Json violations = Json::array();
  for (const auto& w : r.violations) violations.push_back(w.str());
  return Json{{"n", r.n},
              {"l", r.l},
              {"a", r.a},
              {"b", r.b},
              {"max_length", r.max_length},
              {"complete_length", r.complete_length},
              {"partial", r.partial},
              {"words_checked", r.words_checked},
              {"violations", violations}};
}

Json to_json(const CayleyStats& row, bool timing) {
  Json j{{"n", row.n}, {"l", row.l}, {"a", row.a}, {"b", row.b}, {"p", row.modulus}};
  if (!row.ok()) {
    j["error"] = row.error;
    j["partial"] = row.partial;
    if (row.partial) {
      j["visited"] = row.order;
      j["diameter_lower_bound"] = row.diameter;
    }
    return j;
  }
  j["order"] = row.order;
  j["full"] = row.generated_full;
  j["degree"] = row.degree;
  j["girth"] = row.girth ? Json(*row.girth) : Json(nullptr);
  j["diameter"] = row.diameter;
  j["dg_ratio"] = ratio_json(row);
  if (timing) j["seconds"] = row.seconds;
  j["peak_bytes"] = row.peak_bytes;
  return j;
}

Json to_json(const GirthBound& b) {
  return Json{{"lambda_max", b.lambda_max}, {"beta_max", b.beta_max},   {"gamma", b.gamma},
              {"gamma_swapped", b.gamma_swapped}, {"p", b.p}, {"bound_raw", b.bound_raw},
              {"bound_reported", b.bound_reported}};
}

Json to_json(const SpectralGapReport& r) {
  return Json{{"degree", r.degree},
              {"order", r.order},
              {"top_eigenvalue", r.top_eigenvalue},
              {"second_eigenvalue", r.second_eigenvalue},
              {"gap", r.normalized_gap},
              {"iterations", r.iterations},
              {"residual", r.residual},
              {"converged", r.converged},
              {"seed", r.seed}};
}

Json to_json(const RecipeReport& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"label", s.label},
                     {"word", s.word.str()},
                     {"value", to_json(s.value)},
                     {"expected", to_json(s.expected)},
                     {"matches", s.matches}});
  return Json{{"steps", steps},
              {"closure_order", r.closure_order},
              {"expected_order", big(r.expected_order)},
              {"closure_partial", r.closure_partial},
              {"full", r.full()}};
}

Json to_json(const SubgroupGenerators& g) {
  Json words = Json::array();
  for (const auto& w : g.generators) words.push_back(w.str());
  return Json{{"index", g.index}, {"rank", g.rank}, {"generators", words}};
}

std::string csv_header(bool with_spectral) {
  std::string h = "p,order,full,girth,diameter,ratio,seconds,peak_bytes";
  if (with_spectral) h += ",second_eigenvalue";
  return h;
}

std::string csv_row(const CayleyStats& row, bool timing, std::optional<double> second, bool with_spectral) {
  std::ostringstream os;
  os << row.modulus << ',';
  if (row.ok()) {
    os << row.order << ',' << (row.generated_full ? "true" : "false") << ',';
    if (row.girth) os << *row.girth;
    os << ',' << row.diameter << ',';
    if (row.girth) os << format_double(row.dg_ratio());
    os << ',';
    if (timing) os << format_double(row.seconds);
    os << ',' << row.peak_bytes;
  } else {
    os << ",,,,,,";
  }
  if (with_spectral) {
    os << ',';
    if (second) os << format_double(*second);
  }
  return os.str();
}

}  // namespace girthlab
