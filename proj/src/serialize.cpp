#include "klsum/serialize.hpp"

#include <charconv>
#include <ostream>

namespace klsum {

Json to_json(const Complex& z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from_json(const Json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }

namespace {

Json char_list(const std::vector<MultChar>& v) {
  Json out = Json::array();
  for (const auto& c : v) out.push_back(c.index());
  return out;
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json to_json(const ClassificationReport& r) {
  Json dual = Json::array();
  for (const auto& d : r.dualizing) dual.push_back({{"xi", d.xi.index()}, {"tag", to_string(d.tag)}});
  Json witness = nullptr;
  if (r.witness) witness = {{"d", r.witness->d}, {"xis", char_list(r.witness->xis)}};
  return Json{{"lambda_index", r.lambda.index()},
              {"kummer_induced", r.kummer_induced},
              {"witness", witness},
              {"dualizing", dual},
              {"mixed_duality_tags", r.mixed_duality_tags},
              {"nio", r.nio},
              {"cgm", r.cgm}};
}

Json to_json(const TwistResult& r) {
  Json j{{"status", to_string(r.status)}, {"chi0", nullptr}, {"twisted", nullptr}};
  if (r.chi0) j["chi0"] = r.chi0->index();
  if (r.twisted) j["twisted"] = r.twisted->indices();
  return j;
}

Json to_json(const FourierCheck& r) {
  return Json{{"lhs", to_json(r.lhs)}, {"rhs", to_json(r.rhs)}, {"diff", r.diff}};
}

Json to_json(const SumReport& r) {
  return Json{{"sigma_I", to_json(r.sigma_I)},
              {"sigma_II", r.sigma_II},
              {"sigma_II_direct", r.sigma_II_direct ? to_json(*r.sigma_II_direct) : Json(nullptr)},
              {"components", {{"sum_R2", r.sum_R2}, {"sum_K2", r.sum_K2}}},
              {"ratios", {{"sigma_I_over_q", r.ratio_I}, {"sigma_II_over_q32", r.ratio_II}}}};
}

Json to_json(const StratumReport& r) {
  return Json{{"on_diagonal", r.on_diagonal},
              {"deg_P", r.deg_P},
              {"degenerate", r.degenerate},
              {"z_count", r.z_count},
              {"generic", r.generic}};
}

Json scan_summary(const StratumScan& s) {
  Json hist = Json::array();
  for (const auto& [z, n] : s.histogram) hist.push_back({{"z_count", z}, {"count", n}});
  return Json{{"samples", s.reports.size()},
              {"degenerate", s.degenerate},
              {"generic", s.generic},
              {"generic_fraction", s.generic_fraction()},
              {"histogram", hist}};
}

Json to_json(const BoundReport& r) {
  return Json{{"type", r.type == BilinearType::kTypeI ? "I" : "II"},
              {"trivial", r.trivial},
              {"theorem", r.theorem},
              {"range_first", r.range_first},
              {"range_second", r.range_second},
              {"in_range", r.in_range},
              {"computed", optional_json(r.computed)},
              {"ratio_trivial", optional_json(r.ratio_trivial)},
              {"ratio_theorem", optional_json(r.ratio_theorem)}};
}

Json to_json(const ShiftTrace& t) {
  return Json{
      {"shift", {{"s_neq", to_json(t.s_neq)}, {"s_shift", to_json(t.s_shift)}, {"identity_diff", t.shift_identity_diff}}},
      {"square",
       {{"sum", t.square_sum},
        {"diagonal", t.square_diagonal},
        {"identity_diff", t.square_identity_diff},
        {"type_i_form", t.type_i_form},
        {"cauchy_ok", t.cauchy_ok}}},
      {"conditions", {{"2AN_lt_q", t.cond_2AN}, {"2AMplus_lt_q", t.cond_2AMplus}}},
      {"nu",
       {{"sum", t.nu_sum},
        {"bound_l1", t.nu_bound_l1},
        {"bound_l2", t.nu_bound_l2},
        {"first_ok", t.nu_first_ok},
        {"square_sum", t.nu_square_sum},
        {"pair_count", t.nu_pair_count},
        {"square_bound", t.nu_square_bound},
        {"second_ok", t.nu_second_ok},
        {"second_ratio", t.nu_second_ratio}}},
      {"holder", {{"lhs", t.holder_lhs}, {"rhs", t.holder_rhs}, {"ok", t.holder_ok}}},
      {"moment",
       {{"moment_2l", t.moment_2l},
        {"box_sigma_II", t.box_sigma_II},
        {"expansion_diff", t.expansion_diff},
        {"box_abs_sigma_II", t.box_abs_sigma_II}}},
      {"strata",
       {{"available", t.strata_available},
        {"box_size", t.box_size},
        {"diagonal", t.box_diagonal},
        {"subgeneric", t.box_subgeneric},
        {"generic", t.generic},
        {"shape", t.shape},
        {"shape_ratio", t.shape_ratio}}}};
}

Json to_json(const MomentCheck& m) {
  return Json{{"lhs", to_json(m.lhs)}, {"rhs", to_json(m.rhs)}, {"diff", m.diff}, {"lhs_half", to_json(m.lhs_half)}};
}

Json to_json(const AveragedComparison& a) {
  return Json{{"family_size", a.family_size}, {"lhs", a.lhs},       {"rhs", a.rhs},
              {"normalizer", a.normalizer},   {"gap", a.gap},       {"paired_sign_ok", a.paired_sign_ok}};
}

Json to_json(const LadderRow& r) {
  return Json{{"q", r.q},
              {"generic", r.generic},
              {"attempts", r.attempts},
              {"generic_count", r.generic_count},
              {"R_I", r.R_I},
              {"R_II", r.R_II},
              {"sub_count", r.sub_count},
              {"sub_I", r.sub_I},
              {"sub_II", r.sub_II}};
}

Json to_json(const LadderReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back(to_json(row));
  return Json{{"rows", rows},
              {"threshold", r.threshold},
              {"growth_I", r.growth_I},
              {"growth_II", r.growth_II},
              {"trend_I_ok", r.trend_I_ok},
              {"trend_II_ok", r.trend_II_ok},
              {"sub_ok", r.sub_ok},
              {"complete", r.complete}};
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << '\n'; }

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << csv_field(fields[i]);
  }
  out_ << '\n';
}

std::vector<std::string> strata_csv_header(std::size_t l) {
  std::vector<std::string> h;
  for (std::size_t i = 1; i <= 2 * l; ++i) h.push_back("b" + std::to_string(i));
  for (const char* c : {"on_diagonal", "deg_P", "z_count", "generic"}) h.emplace_back(c);
  return h;
}

std::vector<std::string> strata_csv_row(const ParamTuple& b, const StratumReport& r) {
  std::vector<std::string> f;
  for (Elem v : b.values()) f.push_back(std::to_string(v));
  f.push_back(r.on_diagonal ? "1" : "0");
  f.push_back(std::to_string(r.deg_P));
  f.push_back(std::to_string(r.z_count));
  f.push_back(r.generic ? "1" : "0");
  return f;
}

}  // namespace klsum
