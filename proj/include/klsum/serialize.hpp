#pragma once
// JSON and CSV encodings of the library reports. Complex numbers are encoded
// as {"re": ..., "im": ...}; doubles are written in shortest round-trip form.
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "klsum/bilinear.hpp"
#include "klsum/char_props.hpp"
#include "klsum/complete_sums.hpp"
#include "klsum/kloosterman.hpp"
#include "klsum/ladder.hpp"
#include "klsum/strata.hpp"

namespace klsum {

using Json = nlohmann::ordered_json;

Json to_json(const Complex& z);
Complex complex_from_json(const Json& j);

Json to_json(const ClassificationReport& r);
Json to_json(const TwistResult& r);
Json to_json(const FourierCheck& r);
Json to_json(const SumReport& r);
Json to_json(const StratumReport& r);
// Summary only: histogram, generic value and fraction. Rows go through CSV.
Json scan_summary(const StratumScan& s);
Json to_json(const BoundReport& r);
Json to_json(const ShiftTrace& t);
Json to_json(const MomentCheck& m);
Json to_json(const AveragedComparison& a);
Json to_json(const LadderRow& r);
Json to_json(const LadderReport& r);

// Shortest decimal string that reads back to the same double.
std::string format_double(double x);

// RFC 4180 field quoting: fields containing a comma, quote, CR or LF are
// wrapped in quotes with inner quotes doubled.
std::string csv_field(const std::string& s);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  // "# text" line ahead of the header.
  void comment(const std::string& text);
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

std::vector<std::string> strata_csv_header(std::size_t l);
std::vector<std::string> strata_csv_row(const ParamTuple& b, const StratumReport& r);

}  // namespace klsum
