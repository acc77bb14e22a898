#include "klsum/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "klsum/bilinear.hpp"
#include "klsum/char_props.hpp"
#include "klsum/complete_sums.hpp"
#include "klsum/error.hpp"
#include "klsum/field.hpp"
#include "klsum/kloosterman.hpp"
#include "klsum/ladder.hpp"
#include "klsum/random.hpp"
#include "klsum/serialize.hpp"
#include "klsum/strata.hpp"

namespace klsum::cli {

const char* to_string(Status s) {
  switch (s) {
    case Status::kOk: return "ok";
    case Status::kPreconditionFailed: return "precondition-failed";
    case Status::kResourceLimit: return "resource-limit";
    case Status::kCheckFailed: return "check-failed";
    case Status::kInternalError: return "internal-error";
  }
  return "internal-error";
}

int exit_code(Status s) {
  switch (s) {
    case Status::kOk: return 0;
    case Status::kPreconditionFailed: return 2;
    case Status::kResourceLimit: return 3;
    case Status::kCheckFailed: return 4;
    case Status::kInternalError: return 5;
  }
  return 5;
}

namespace {

constexpr double kOracleTol = 1e-9;
constexpr double kMomentTol = 1e-8;

struct RunConfig {
  std::uint64_t q = 0;
  std::uint32_t k = 2;
  std::size_t l = 2;
  std::vector<std::int64_t> chars;
  std::vector<std::int64_t> b;
  std::int64_t scale = 1;
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  std::size_t sub_samples = 100;
  bool exhaustive = false;
  bool direct = false;
  std::uint64_t box = 10;
  bool half_open = false;
  std::string method = "fast";
  std::size_t lambdas = 20;
  std::vector<std::uint64_t> primes{101, 151, 211, 307, 401, 499};
  double exponent = 0.15;
  std::uint64_t M = 10;
  std::uint64_t N = 10;
  std::string type = "II";
  bool shift = false;
  std::uint64_t A = 1;
  std::uint64_t B = 1;
  std::vector<std::int64_t> xi;
  std::vector<std::int64_t> n{1, 2, 3};
  std::string family = "full";
  std::size_t fam_n = 4;
  std::size_t fam_m = 1;
  unsigned threads = 1;
  std::string out;
  std::string format;
  bool timing = false;
  const CLI::Option* l_option = nullptr;  // complete-sum infers l from b when unset
};

// What a subcommand produces. `rows` is used for CSV output only.
struct Outcome {
  Status status = Status::kOk;
  std::string message;
  Json payload = Json::object();
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

using Handler = std::function<void(const RunConfig&, Outcome&)>;

struct Subcommand {
  CLI::App* app;
  Handler handler;
  std::string default_format;
  bool csv = false;
};

// ------------------------------------------------------------------ helpers

CharTuple char_tuple(const FieldPtr& F, const RunConfig& c) {
  if (c.chars.empty()) return CharTuple::trivial(F, c.k);
  if (c.chars.size() != c.k)
    throw DomainError("--chars has " + std::to_string(c.chars.size()) + " entries but --k is " + std::to_string(c.k));
  return CharTuple(F, c.chars);
}

Elem make_scale(const PrimeField& F, std::int64_t a) {
  const Elem s = F.reduce(a);
  if (s == 0) throw DomainError("--scale must be nonzero mod q");
  return s;
}

Json complex_row(std::uint64_t x, Complex z) { return Json{{"x", x}, {"value", to_json(z)}}; }

void fail_if(Outcome& o, bool failed, const std::string& what) {
  if (!failed) return;
  o.status = Status::kCheckFailed;
  o.message += (o.message.empty() ? "" : "; ") + what;
}

// -------------------------------------------------------------- subcommands

void field_info(const RunConfig& c, Outcome& o) {
  auto F = build_field(c.q);
  Json divisors = Json::array();
  for (auto p : prime_divisors(F->order())) divisors.push_back(p);
  o.payload = Json{{"q", F->q()},
                   {"generator", F->generator()},
                   {"order", F->order()},
                   {"order_prime_divisors", divisors},
                   {"quadratic_index", F->order() / 2},
                   {"k", c.k},
                   {"k_divides_order", F->order() % c.k == 0},
                   {"roots_of_unity", F->order() % c.k == 0 ? Json(F->roots_of_unity(c.k)) : Json(nullptr)}};
}

void char_classify(const RunConfig& c, Outcome& o) {
  auto F = build_field(c.q);
  const CharTuple t = char_tuple(F, c);
  o.payload = Json{{"chars", t.indices()}, {"classification", to_json(classify_tuple(t))},
                   {"twist_to_cgm", to_json(twist_to_cgm(t))}};
}

void kl_table(const RunConfig& c, Outcome& o) {
  auto F = build_field(c.q);
  const CharTuple t = char_tuple(F, c);
  const Elem a = make_scale(*F, c.scale);
  if (c.method != "fast" && c.method != "naive") throw DomainError("--method must be fast or naive");
  const KlTable K = c.method == "fast" ? kl_table_fast(t, a) : kl_table_naive(t, a);
  o.header = {"x", "re", "im"};
  Json values = Json::array();
  for (Elem x = 1; x < F->q(); ++x) {
    o.rows.push_back({std::to_string(x), format_double(K(x).real()), format_double(K(x).imag())});
    values.push_back(complex_row(x, K(x)));
  }
  o.payload = Json{{"max_abs", K.max_abs()}, {"values", values}};
}

void kl_verify(const RunConfig& c, Outcome& o) {
  auto F = build_field(c.q);
  const CharTuple t = char_tuple(F, c);
  const Elem a = make_scale(*F, c.scale);
  const KlTable fast = kl_table_fast(t, a);
  const KlTable naive = kl_table_naive(t, a);
  double rel = 0.0;
  for (Elem x = 1; x < F->q(); ++x)
    rel = std::max(rel, std::abs(fast(x) - naive(x)) / std::max(1.0, std::abs(naive(x))));

  // Fourier identity: every lambda when q is small, else a seeded sample.
  std::vector<std::uint64_t> lambdas;
  if (c.lambdas >= F->order()) {
    for (std::uint64_t i = 0; i < F->order(); ++i) lambdas.push_back(i);
  } else {
    Rng rng(c.seed);
    for (std::size_t i = 0; i < c.lambdas; ++i) lambdas.push_back(rng.below(F->order()));
  }
  // The identity is stated for the unscaled table.
  const KlTable base = a == 1 ? fast : kl_table_fast(t);
  double fourier = 0.0;
  for (auto li : lambdas) fourier = std::max(fourier, fourier_identity_check(base, MultChar(F, li)).diff);

  const double fourier_tol = kOracleTol * std::sqrt(static_cast<double>(F->q()));
  const double deligne = fast.max_abs();
  o.payload = Json{{"max_rel_diff", rel},
                   {"tolerance", kOracleTol},
                   {"naive_fast_ok", rel <= kOracleTol},
                   {"max_abs", deligne},
                   {"deligne_ok", deligne <= c.k + kOracleTol},
                   {"fourier_lambdas", lambdas},
                   {"fourier_max_diff", fourier},
                   {"fourier_tolerance", fourier_tol},
                   {"fourier_ok", fourier <= fourier_tol}};
  fail_if(o, rel > kOracleTol, "naive/fast mismatch");
  fail_if(o, deligne > c.k + kOracleTol, "Deligne bound exceeded");
  fail_if(o, fourier > fourier_tol, "Fourier identity mismatch");
}

void complete_sum(const RunConfig& c, Outcome& o) {
  auto F = build_field(c.q);
  const CharTuple t = char_tuple(F, c);
  const Elem a = make_scale(*F, c.scale);
  if (c.b.empty() || c.b.size() % 2) throw DomainError("--b needs an even, nonzero number of entries");
  if (c.b.size() != 2 * c.l)
    throw DomainError("--b has " + std::to_string(c.b.size()) + " entries but --l is " + std::to_string(c.l));
  const ParamTuple b(*F, c.b);
  const KlTable K = kl_table_fast(t, a);
  const SumReport r = sigma_II(K, b, {c.direct, c.threads});

  const double q = F->q(), k = t.size(), l = b.l();
  const double env_I = std::pow(k, 2 * l) * q * q;
  const double env_II = std::pow(k, 4 * l) * q * q * q;
  o.payload = Json{{"b", b.values()}, {"report", to_json(r)},
                   {"envelopes", {{"sigma_I", env_I}, {"sigma_II", env_II}}}};
  fail_if(o, std::abs(r.sigma_I) > env_I || std::abs(r.sigma_II) > env_II, "trivial envelope exceeded");
  if (r.sigma_II_direct) {
    const double diff = std::abs(*r.sigma_II_direct - r.sigma_II);
    const double tol = sigma_II_tolerance(F->q(), r.sum_R2 + r.sum_K2);
    o.payload["direct_diff"] = diff;
    o.payload["direct_tolerance"] = tol;
    fail_if(o, diff > tol, "direct and difference forms disagree");
  }
  try {
    o.payload["stratum"] = to_json(stratum_report(*F, static_cast<std::uint32_t>(t.size()), b));
  } catch (const Error& e) {
    o.payload["stratum"] = nullptr;
    o.payload["stratum_unavailable"] = e.what();
  }
}

void strata_scan(const RunConfig& c, Outcome& o) {
  auto F = build_field(c.q);
  const StratumScan s = stratum_scan(*F, c.k, c.l, {c.exhaustive, c.samples, c.seed}, c.threads);
  o.header = strata_csv_header(c.l);
  Json rows = Json::array();
  for (std::size_t i = 0; i < s.tuples.size(); ++i) {
    o.rows.push_back(strata_csv_row(s.tuples[i], s.reports[i]));
    Json r = to_json(s.reports[i]);
    r["b"] = s.tuples[i].values();
    rows.push_back(r);
  }
  o.payload = Json{{"summary", scan_summary(s)}, {"fibre_degree_bound", fibre_degree_bound(c.k, c.l)},
                   {"rows", rows}};
}

void box_count(const RunConfig& c, Outcome& o) {
  auto F = build_field(c.q);
  const Box box{c.box, c.l, c.half_open};
  const std::uint64_t count = box_count_variety(*F, DiagonalPredicate{}, box);
  const double side = c.half_open ? double(c.box) : double(c.box + 1);
  const double bound = 3.0 * std::pow(double(c.box), double(c.l));
  o.payload = Json{{"predicate", "diagonal"},
                   {"box", c.half_open ? "[B,2B)" : "[B,2B]"},
                   {"box_size", std::pow(side, 2.0 * double(c.l))},
                   {"count", count},
                   {"reference_3B^l", bound},
                   {"within_reference", double(count) <= bound}};
}

void bound_check(const RunConfig& c, Outcome& o) {
  LadderConfig lc;
  lc.primes = c.primes;
  lc.k = c.k;
  lc.chars = c.chars;
  lc.l = c.l;
  lc.samples = c.samples;
  lc.sub_samples = c.sub_samples;
  lc.seed = c.seed;
  lc.growth_exponent = c.exponent;
  lc.threads = c.threads;
  const LadderReport r = prime_ladder(lc);
  o.payload = to_json(r);
  o.header = {"q", "generic", "attempts", "generic_count", "R_I", "R_II", "sub_count", "sub_I", "sub_II"};
  for (const auto& row : r.rows)
    o.rows.push_back({std::to_string(row.q), std::to_string(row.generic), std::to_string(row.attempts),
                      std::to_string(row.generic_count), format_double(row.R_I), format_double(row.R_II),
                      std::to_string(row.sub_count), format_double(row.sub_I), format_double(row.sub_II)});
  if (!r.complete) {
    o.status = Status::kResourceLimit;
    o.message = "sample quotas not reached within the attempt budget";
    return;
  }
  fail_if(o, !r.trend_I_ok, "Sigma_I growth above threshold");
  fail_if(o, !r.trend_II_ok, "Sigma_II growth above threshold");
  fail_if(o, !r.sub_ok, "subgeneric bound exceeded");
}

CoeffSeq random_unit_coeffs(Rng& rng, std::uint64_t n) {
  std::vector<std::uint64_t> idx;
  std::vector<Complex> val;
  for (std::uint64_t i = 1; i <= n; ++i) {
    idx.push_back(i);
    val.push_back(std::polar(1.0, 2 * M_PI * rng.unit()));
  }
  return CoeffSeq(idx, val);
}

void bilinear_bench(const RunConfig& c, Outcome& o) {
  auto F = build_field(c.q);
  const CharTuple t = char_tuple(F, c);
  if (c.type != "I" && c.type != "II") throw DomainError("--type must be I or II");
  if (c.M == 0 || c.N == 0) throw DomainError("--M and --N must be positive");
  const KlTable K = kl_table_fast(t);
  Rng rng(c.seed);
  const CoeffSeq alpha = random_unit_coeffs(rng, c.M);
  const CoeffSeq beta = c.type == "I" ? CoeffSeq::interval_ones(c.N) : random_unit_coeffs(rng, c.N);
  const Complex value = bilinear_form(K, alpha, beta);

  BoundInput in{F->q(), c.M, c.N, alpha.max_index(), static_cast<unsigned>(c.l), alpha.l1(), alpha.l2(),
                beta.l2(), K.max_abs(), std::abs(value)};
  const BoundReport bounds = theorem_bounds(in, c.type == "I" ? BilinearType::kTypeI : BilinearType::kTypeII);
  const double envelope = double(t.size()) * alpha.l1() * beta.l1();
  o.payload = Json{{"value", to_json(value)}, {"abs", std::abs(value)}, {"envelope", envelope},
                   {"bounds", to_json(bounds)}, {"trace", nullptr}};
  fail_if(o, std::abs(value) > envelope * (1 + 1e-12), "envelope exceeded");
  if (c.shift) {
    const ShiftTrace tr = shift_reduction_trace(K, alpha, {c.N, c.A, c.B, c.l, c.threads});
    o.payload["trace"] = to_json(tr);
    fail_if(o, !tr.cauchy_ok, "Cauchy-Schwarz step");
    fail_if(o, !tr.nu_first_ok || !tr.nu_second_ok, "nu moment bound");
    fail_if(o, !tr.holder_ok, "Holder step");
  }
}

void moment_check(const RunConfig& c, Outcome& o) {
  auto F = build_field(c.q);
  std::vector<std::int64_t> xis = c.xi;
  if (xis.empty())
    for (std::int64_t a = 0; a < F->order(); a += 2) xis.push_back(a);
  o.header = {"xi", "n", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "diff"};
  Json rows = Json::array();
  double worst = 0.0;
  for (auto x : xis)
    for (auto n : c.n) {
      const MultChar xi(F, x);
      const Elem ne = F->reduce(n);
      const MomentCheck m = moment_identity_check(xi, ne);
      worst = std::max(worst, m.diff);
      Json r = to_json(m);
      r["xi"] = xi.index();
      r["n"] = ne;
      rows.push_back(r);
      o.rows.push_back({std::to_string(xi.index()), std::to_string(ne), format_double(m.lhs.real()),
                        format_double(m.lhs.imag()), format_double(m.rhs.real()), format_double(m.rhs.imag()),
                        format_double(m.diff)});
    }
  o.payload = Json{{"max_diff", worst}, {"tolerance", kMomentTol}, {"rows", rows}};
  fail_if(o, worst > kMomentTol, "moment identity mismatch");
}

void avg_compare(const RunConfig& c, Outcome& o) {
  auto F = build_field(c.q);
  const CharTuple t = char_tuple(F, c);
  const KlTable K = kl_table_fast(t);
  Family fam;
  if (c.family == "full")
    fam = FullSampleFamily{c.samples, c.seed};
  else if (c.family == "power")
    fam = PowerSumFamily{c.fam_n, c.fam_m};
  else if (c.family == "empty")
    fam = EmptyFamily{};
  else
    throw DomainError("--family must be full, power or empty");
  const AveragedComparison r = averaged_comparison(K, c.l, fam, c.threads);
  o.payload = to_json(r);
  fail_if(o, !r.paired_sign_ok, "paired sign check");
}

// ------------------------------------------------------------- registration

template <class T>
CLI::Option* list_option(CLI::App* app, const std::string& name, std::vector<T>& v, const std::string& help) {
  return app->add_option(name, v, help)->delimiter(',')->expected(0, CLI::detail::expected_max_vector_size);
}

void add_common(CLI::App* app, RunConfig& c) {
  app->add_option("--threads", c.threads, "worker threads (1 is bit-reproducible)")->check(CLI::Range(1u, 256u));
  app->add_option("--out", c.out, "output file; relative paths resolve against $KLSUM_OUTPUT_DIR");
  app->add_option("--format", c.format, "json or csv");
  app->add_flag("--timing", c.timing, "include wall-clock seconds in the output");
}

void add_q(CLI::App* app, RunConfig& c) { app->add_option("--q", c.q, "prime modulus")->required(); }

void add_chars(CLI::App* app, RunConfig& c) {
  app->add_option("--k", c.k, "number of characters")->check(CLI::Range(1u, 64u));
  list_option(app, "--chars", c.chars, "character indices mod q-1, comma separated (default: trivial)");
}

std::vector<Subcommand> register_all(CLI::App& app, RunConfig& c) {
  std::vector<Subcommand> subs;
  auto add = [&](const char* name, const char* help, Handler h, const char* fmt = "json", bool csv = false) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, c);
    subs.push_back({s, std::move(h), fmt, csv});
    return s;
  };

  auto* s = add("field-info", "primitive root and group data of F_q", field_info);
  add_q(s, c);
  s->add_option("--k", c.k, "report k-th roots of unity when k | q-1");

  s = add("char-classify", "Kummer induction, duality, NIO and CGM for a tuple", char_classify);
  add_q(s, c);
  add_chars(s, c);

  s = add("kl-table", "Kl_k(a x) for all x in F_q^x", kl_table, "csv", true);
  add_q(s, c);
  add_chars(s, c);
  s->add_option("--scale", c.scale, "scale a");
  s->add_option("--method", c.method, "fast or naive");

  s = add("kl-verify", "fast vs naive tables, Deligne bound and Fourier identity", kl_verify);
  add_q(s, c);
  add_chars(s, c);
  s->add_option("--scale", c.scale, "scale a");
  s->add_option("--lambdas", c.lambdas, "characters lambda sampled for the Fourier identity");
  s->add_option("--seed", c.seed, "seed for the lambda sample");

  s = add("complete-sum", "Sigma_I and Sigma_II for one shift tuple", complete_sum);
  add_q(s, c);
  add_chars(s, c);
  c.l_option = s->add_option("--l", c.l, "half length of b (default: from --b)")->check(CLI::PositiveNumber);
  list_option(s, "--b", c.b, "shift tuple b_1..b_2l, comma separated")->required();
  s->add_option("--scale", c.scale, "scale a");
  s->add_flag("--direct", c.direct, "also evaluate the direct s1 != s2 form");

  s = add("strata-scan", "z_count of P_b over sampled or all b", strata_scan, "csv", true);
  add_q(s, c);
  s->add_option("--k", c.k, "degree k")->check(CLI::Range(1u, 64u));
  s->add_option("--l", c.l, "half length of b")->check(CLI::PositiveNumber);
  s->add_option("--samples", c.samples, "random tuples");
  s->add_option("--seed", c.seed, "sampler seed");
  s->add_flag("--exhaustive", c.exhaustive, "enumerate all of F_q^{2l}");

  s = add("box-count", "diagonal points in [B,2B]^{2l}", box_count);
  add_q(s, c);
  s->add_option("--l", c.l, "half dimension")->check(CLI::PositiveNumber);
  s->add_option("--B", c.box, "box parameter");
  s->add_flag("--half-open", c.half_open, "use [B,2B) instead of [B,2B]");

  s = add("bound-check", "prime-ladder growth of Sigma_I and Sigma_II", bound_check, "json", true);
  list_option(s, "--primes", c.primes, "prime ladder, comma separated");
  add_chars(s, c);
  s->add_option("--l", c.l, "half length of b")->check(CLI::PositiveNumber);
  s->add_option("--samples", c.samples, "generic tuples per prime")->default_val(100);
  s->add_option("--sub-samples", c.sub_samples, "subgeneric tuples per prime");
  s->add_option("--seed", c.seed, "sampler seed");
  s->add_option("--exponent", c.exponent, "allowed growth exponent");

  s = add("bilinear-bench", "bilinear form against trivial and theorem bounds", bilinear_bench);
  add_q(s, c);
  add_chars(s, c);
  s->add_option("--M", c.M, "alpha supported on 1..M");
  s->add_option("--N", c.N, "beta supported on 1..N");
  s->add_option("--type", c.type, "I (beta = 1) or II");
  s->add_option("--l", c.l, "Holder exponent l")->check(CLI::PositiveNumber);
  s->add_option("--seed", c.seed, "coefficient seed");
  s->add_flag("--shift", c.shift, "trace the shift reduction");
  s->add_option("--A", c.A, "a in [A,2A)");
  s->add_option("--B", c.B, "b in [B,2B)");

  s = add("moment-check", "Gauss-sum moment identity for Kl_3", moment_check, "json", true);
  add_q(s, c);
  list_option(s, "--xi", c.xi, "even character indices (default: all even)");
  list_option(s, "--n", c.n, "nonzero residues n");

  s = add("avg-compare", "averaged comparison of squared sums over a family", avg_compare);
  add_q(s, c);
  add_chars(s, c);
  s->add_option("--l", c.l, "half length of b (full family)");
  s->add_option("--family", c.family, "full, power or empty");
  s->add_option("--samples", c.samples, "tuples in the full family")->default_val(100);
  s->add_option("--seed", c.seed, "sampler seed");
  s->add_option("--n", c.fam_n, "power-sum family: length n");
  s->add_option("--m", c.fam_m, "power-sum family: number of vanishing power sums");
  return subs;
}

Json typed_value(const std::string& s) {
  if (s == "{}") return Json::array();  // CLI11's rendering of an empty vector default
  const Json j = Json::parse(s, nullptr, false);
  return j.is_number() || j.is_boolean() || j.is_array() ? j : Json(s);
}

// Every option of the subcommand with its effective value.
Json config_echo(const CLI::App* app) {
  Json j = Json::object();
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "out" || name == "format" || name == "timing") continue;
    if (opt->get_expected_max() == 0) {
      j[name] = opt->count() > 0;
    } else if (opt->get_expected_max() > 1) {
      Json list = Json::array();
      if (opt->count())
        for (const auto& r : opt->results()) list.push_back(typed_value(r));
      else
        list = typed_value(opt->get_default_str().empty() ? "[]" : opt->get_default_str());
      j[name] = list;
    } else {
      j[name] = typed_value(opt->count() ? opt->results().front() : opt->get_default_str());
    }
  }
  return j;
}

std::filesystem::path resolve_out(const std::string& out) {
  std::filesystem::path p(out);
  if (p.is_relative())
    if (const char* dir = std::getenv("KLSUM_OUTPUT_DIR"); dir && *dir) p = std::filesystem::path(dir) / p;
  return p;
}

std::string render_json(const std::string& name, const Json& config, const Outcome& o,
                        std::optional<double> seconds) {
  Json env{{"schema_version", kSchemaVersion},
           {"artifact_version", kArtifactVersion},
           {"subcommand", name},
           {"config", config},
           {"status", to_string(o.status)},
           {"error", o.message.empty() ? Json(nullptr) : Json(o.message)},
           {"payload", o.payload}};
  if (seconds) env["wall_clock_seconds"] = *seconds;
  return env.dump(2) + "\n";
}

std::string render_csv(const std::string& name, const Json& config, const Outcome& o,
                       std::optional<double> seconds) {
  std::ostringstream s;
  CsvWriter w(s);
  w.comment("schema_version=" + std::to_string(kSchemaVersion));
  w.comment(std::string("artifact_version=") + kArtifactVersion);
  w.comment("subcommand=" + name);
  for (const auto& [key, value] : config.items())
    w.comment(key + "=" + (value.is_string() ? value.get<std::string>() : value.dump()));
  w.comment(std::string("status=") + to_string(o.status));
  if (!o.message.empty()) w.comment("error=" + o.message);
  if (seconds) w.comment("wall_clock_seconds=" + format_double(*seconds));
  if (o.status == Status::kOk || o.status == Status::kCheckFailed) {
    w.row(o.header);
    for (const auto& r : o.rows) w.row(r);
  }
  return s.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app("Generalized hyper-Kloosterman sums over prime fields", "klsum");
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  const std::vector<Subcommand> subs = register_all(app, c);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    err << app.help();
    return code;
  }

  const Subcommand* sub = nullptr;
  for (const auto& s : subs)
    if (s.app->parsed()) sub = &s;
  const std::string name = sub->app->get_name();
  if (c.l_option && c.l_option->count() == 0 && name == "complete-sum") c.l = c.b.size() / 2;
  Json config = config_echo(sub->app);
  if (name == "complete-sum") config["l"] = c.l;
  const std::string format = c.format.empty() ? sub->default_format : c.format;

  Outcome o;
  auto failure = [&](Status st, const char* what) {
    o = Outcome{};
    o.status = st;
    o.message = what;
  };
  const auto start = std::chrono::steady_clock::now();
  try {
    if (format != "json" && format != "csv") throw DomainError("--format must be json or csv");
    if (format == "csv" && !sub->csv) throw DomainError(name + " has no CSV form; use --format json");
    sub->handler(c, o);
  } catch (const DomainError& e) {
    failure(Status::kPreconditionFailed, e.what());
  } catch (const ResourceError& e) {
    failure(Status::kResourceLimit, e.what());
  } catch (const std::exception& e) {
    failure(Status::kInternalError, e.what());
  }
  std::optional<double> seconds;
  if (c.timing) seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string text = format == "csv" ? render_csv(name, config, o, seconds)
                                           : render_json(name, config, o, seconds);
  if (c.out.empty()) {
    out << text;
  } else {
    const auto path = resolve_out(c.out);
    std::ofstream f(path, std::ios::binary);
    if (!(f << text) || !f.flush()) {
      err << "klsum: cannot write " << path.string() << "\n";
      return exit_code(Status::kInternalError);
    }
  }
  if (o.status != Status::kOk) err << "klsum " << name << ": " << to_string(o.status) << ": " << o.message << "\n";
  return exit_code(o.status);
}

}  // namespace klsum::cli
