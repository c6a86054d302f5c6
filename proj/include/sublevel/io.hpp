#ifndef SUBLEVEL_IO_HPP
#define SUBLEVEL_IO_HPP

#include <string>
#include <vector>

#include "sublevel/cnseq.hpp"
#include "sublevel/experiments.hpp"
#include "sublevel/mahler.hpp"
#include "sublevel/meanmeasure.hpp"
#include "sublevel/trigpoly.hpp"

namespace sublevel {

// Trigonometric polynomial wire format:
//   {"terms": [{"omega": w, "re": a, "im": b}, ...]}   (frequencies ascending)
std::string trigpoly_to_json(const TrigPoly& f);
TrigPoly trigpoly_from_json(const std::string& text);
TrigPoly trigpoly_from_file(const std::string& path);

// Algebraic polynomial: {"coefficients": [{"re": a, "im": b}, ...]} with
// index = exponent, or the compact integer-frequency string "1,0,-1".
std::string algpoly_to_json(const AlgebraicPoly& p);
AlgebraicPoly algpoly_from_json(const std::string& text);
std::vector<cdouble> parse_coeff_list(const std::string& text);

// CSV data rows are deterministic; metadata lives on '#' comment lines
// (a timestamp line, when requested, is excluded from any byte-identity
// guarantee).
std::string curve_to_csv(const SublevelCurve& c, const std::vector<std::string>& meta);
std::string curve_to_json(const SublevelCurve& c);

std::string series_to_csv(const BoundConstantSeries& s, const std::vector<std::string>& meta);
std::string series_to_json(const BoundConstantSeries& s);

std::string mahler_to_json(const MahlerTriple& t);
std::string mahler_to_csv(const MahlerTriple& t, const std::vector<std::string>& meta);

struct GrowthRow {
  int n = 0;
  double log_mplus_quadrature = 0.0;
  double log_mplus_sampling = 0.0;
  double err = 0.0;
};
std::string growth_to_csv(const std::vector<GrowthRow>& rows,
                          const std::vector<std::string>& meta);
std::string growth_to_json(const std::vector<GrowthRow>& rows);

std::string farey_to_csv(const std::vector<Fraction>& f, const std::vector<std::string>& meta);
std::string farey_to_json(const std::vector<Fraction>& f);

std::string probe_report_to_json(const ProbeReport& r);
std::string best_constant_to_json(const BestConstantResult& r);

// Full round-trip double formatting for CSV cells.
std::string format_double(double x);

}  // namespace sublevel

#endif  // SUBLEVEL_IO_HPP
