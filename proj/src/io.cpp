#include "sublevel/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sublevel {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string trigpoly_to_json(const TrigPoly& f) {
  json terms = json::array();
  for (const Term& t : f.terms()) {
    terms.push_back({{"omega", t.omega}, {"re", t.coeff.real()}, {"im", t.coeff.imag()}});
  }
  return json{{"terms", terms}}.dump(2);
}

TrigPoly trigpoly_from_json(const std::string& text) {
  json j = json::parse(text);
  if (!j.contains("terms") || !j["terms"].is_array()) {
    throw invalid_input("trigpoly JSON must contain a \"terms\" array");
  }
  std::vector<Term> terms;
  for (const json& t : j["terms"]) {
    Term term;
    term.omega = t.at("omega").get<double>();
    term.coeff = cdouble(t.value("re", 0.0), t.value("im", 0.0));
    terms.push_back(term);
  }
  return TrigPoly(std::move(terms));
}

TrigPoly trigpoly_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open polynomial file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return trigpoly_from_json(ss.str());
  } catch (const json::exception& e) {
    throw invalid_input("bad polynomial JSON in " + path + ": " + e.what());
  }
}

std::string algpoly_to_json(const AlgebraicPoly& p) {
  json coeffs = json::array();
  for (const cdouble& c : p.coefficients()) {
    coeffs.push_back({{"re", c.real()}, {"im", c.imag()}});
  }
  return json{{"coefficients", coeffs}}.dump(2);
}

AlgebraicPoly algpoly_from_json(const std::string& text) {
  json j = json::parse(text);
  if (!j.contains("coefficients") || !j["coefficients"].is_array()) {
    throw invalid_input("polynomial JSON must contain a \"coefficients\" array");
  }
  std::vector<cdouble> coeffs;
  for (const json& c : j["coefficients"]) {
    coeffs.emplace_back(c.value("re", 0.0), c.value("im", 0.0));
  }
  return AlgebraicPoly(std::move(coeffs));
}

std::vector<cdouble> parse_coeff_list(const std::string& text) {
  std::vector<cdouble> coeffs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(item, &pos);
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
      if (pos != item.size()) throw invalid_input("trailing characters in coefficient: " + item);
      coeffs.emplace_back(v, 0.0);
    } catch (const std::invalid_argument&) {
      throw invalid_input("bad coefficient: " + item);
    } catch (const std::out_of_range&) {
      throw invalid_input("coefficient out of range: " + item);
    }
  }
  if (coeffs.empty()) throw invalid_input("empty coefficient list");
  return coeffs;
}

namespace {

void append_meta(std::string& out, const std::vector<std::string>& meta) {
  for (const std::string& m : meta) {
    out += "# ";
    out += m;
    out += "\n";
  }
}

json curve_json_body(const SublevelCurve& c) {
  json rows = json::array();
  for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
    rows.push_back({{"u", c.thresholds[i]},
                    {"j_estimate", c.estimates[i]},
                    {"std_error", c.std_errors[i]}});
  }
  return {{"window", c.window},
          {"samples", c.samples},
          {"seed", c.seed},
          {"periodic", c.periodic},
          {"rows", rows}};
}

}  // namespace

std::string curve_to_csv(const SublevelCurve& c, const std::vector<std::string>& meta) {
  std::string out;
  append_meta(out, meta);
  out += "# window=" + format_double(c.window) + " samples=" + std::to_string(c.samples) +
         " seed=" + std::to_string(c.seed) + " periodic=" + (c.periodic ? "1" : "0") + "\n";
  out += "u,j_estimate,std_error\n";
  for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
    out += format_double(c.thresholds[i]) + "," + format_double(c.estimates[i]) + "," +
           format_double(c.std_errors[i]) + "\n";
  }
  return out;
}

std::string curve_to_json(const SublevelCurve& c) { return curve_json_body(c).dump(2); }

std::string series_to_csv(const BoundConstantSeries& s, const std::vector<std::string>& meta) {
  std::string out;
  append_meta(out, meta);
  out += "# compensation_residue=" + format_double(s.residue) + "\n";
  out += "n,log_cn,cn_over_n\n";
  for (std::size_t i = 0; i < s.n_checkpoints.size(); ++i) {
    out += std::to_string(s.n_checkpoints[i]) + "," + format_double(s.log_cn[i]) + "," +
           format_double(s.ratio[i]) + "\n";
  }
  return out;
}

std::string series_to_json(const BoundConstantSeries& s) {
  json rows = json::array();
  for (std::size_t i = 0; i < s.n_checkpoints.size(); ++i) {
    rows.push_back({{"n", s.n_checkpoints[i]},
                    {"log_cn", s.log_cn[i]},
                    {"cn_over_n", s.ratio[i]}});
  }
  return json{{"compensation_residue", s.residue}, {"rows", rows}}.dump(2);
}

std::string mahler_to_json(const MahlerTriple& t) {
  return json{{"m", t.m},
              {"m_plus", t.m_plus},
              {"m_minus", t.m_minus},
              {"log_m", t.log_m},
              {"log_m_plus", t.log_m_plus},
              {"log_m_minus", t.log_m_minus},
              {"method", to_string(t.method)},
              {"err", t.err}}
      .dump(2);
}

std::string mahler_to_csv(const MahlerTriple& t, const std::vector<std::string>& meta) {
  std::string out;
  append_meta(out, meta);
  out += "m,m_plus,m_minus,log_m,log_m_plus,log_m_minus,method,err\n";
  out += format_double(t.m) + "," + format_double(t.m_plus) + "," + format_double(t.m_minus) +
         "," + format_double(t.log_m) + "," + format_double(t.log_m_plus) + "," +
         format_double(t.log_m_minus) + "," + to_string(t.method) + "," + format_double(t.err) +
         "\n";
  return out;
}

std::string growth_to_csv(const std::vector<GrowthRow>& rows,
                          const std::vector<std::string>& meta) {
  std::string out;
  append_meta(out, meta);
  out += "N,log_mplus_quadrature,log_mplus_sampling,err\n";
  for (const GrowthRow& r : rows) {
    out += std::to_string(r.n) + "," + format_double(r.log_mplus_quadrature) + "," +
           format_double(r.log_mplus_sampling) + "," + format_double(r.err) + "\n";
  }
  return out;
}

std::string growth_to_json(const std::vector<GrowthRow>& rows) {
  json arr = json::array();
  for (const GrowthRow& r : rows) {
    arr.push_back({{"N", r.n},
                   {"log_mplus_quadrature", r.log_mplus_quadrature},
                   {"log_mplus_sampling", r.log_mplus_sampling},
                   {"err", r.err}});
  }
  return json{{"rows", arr}}.dump(2);
}

std::string farey_to_csv(const std::vector<Fraction>& f, const std::vector<std::string>& meta) {
  std::string out;
  append_meta(out, meta);
  out += "a,q,angle\n";
  for (const Fraction& x : f) {
    out += std::to_string(x.num) + "," + std::to_string(x.den) + "," + format_double(x.value()) +
           "\n";
  }
  return out;
}

std::string farey_to_json(const std::vector<Fraction>& f) {
  json arr = json::array();
  for (const Fraction& x : f) {
    arr.push_back({{"a", x.num}, {"q", x.den}, {"angle", x.value()}});
  }
  return json{{"rows", arr}}.dump(2);
}

namespace {

json coeffs_to_json(const std::vector<cdouble>& coeffs) {
  json arr = json::array();
  for (const cdouble& c : coeffs) arr.push_back({{"re", c.real()}, {"im", c.imag()}});
  return arr;
}

}  // namespace

std::string probe_report_to_json(const ProbeReport& r) {
  json violations = json::array();
  for (const ProbeViolation& v : r.violations) {
    violations.push_back({{"coefficients", coeffs_to_json(v.coeffs)},
                          {"log_m_minus", v.log_m_minus},
                          {"left", v.left},
                          {"right", v.right},
                          {"recheck_log_m_minus_roots", v.recheck_log_m_minus_roots},
                          {"recheck_log_m_minus_circle", v.recheck_log_m_minus_circle}});
  }
  return json{{"config",
               {{"n", r.config.n},
                {"trials", r.config.trials},
                {"seed", r.config.seed},
                {"tol", r.config.tol},
                {"real_coeffs", r.config.real_coeffs},
                {"dense_exponents", r.config.dense_exponents}}},
              {"completed", r.completed},
              {"root_failures", r.root_failures},
              {"log_m_minus_left_endpoint", r.log_m_minus_left},
              {"log_m_minus_right_endpoint", r.log_m_minus_right},
              {"min_log_m_minus", r.min_log_m_minus},
              {"median_log_m_minus", r.median_log_m_minus},
              {"max_log_m_minus", r.max_log_m_minus},
              {"flagged", r.flagged},
              {"confirmed", r.confirmed},
              {"endpoint_dev_left", r.endpoint_dev_left},
              {"endpoint_dev_right", r.endpoint_dev_right},
              {"violations", violations}}
      .dump(2);
}

std::string best_constant_to_json(const BestConstantResult& r) {
  return json{{"n", r.n},
              {"trials", r.trials},
              {"probe_value", r.probe_value},
              {"reference_constant", r.reference_constant},
              {"best_u", r.best_u},
              {"best_trial", r.best_trial}}
      .dump(2);
}

}  // namespace sublevel
