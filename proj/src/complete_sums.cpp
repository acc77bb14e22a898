#include "klsum/complete_sums.hpp"

#include <cmath>
#include <sstream>

#include "klsum/error.hpp"
#include "klsum/parallel.hpp"
#include "klsum/summation.hpp"

namespace klsum {

ParamTuple::ParamTuple(std::vector<Elem> b) : b_(std::move(b)) {
  if (b_.empty() || b_.size() % 2 != 0) {
    throw DomainError("parameter tuple must have even length 2l >= 2");
  }
}

namespace {

std::vector<Elem> reduce_all(const PrimeField& f, const std::vector<std::int64_t>& b) {
  std::vector<Elem> out;
  out.reserve(b.size());
  for (auto v : b) out.push_back(f.reduce(v));
  return out;
}

struct RowSums {
  CompensatedComplexSum sigma_I;
  CompensatedSum sum_R2;
  CompensatedSum sum_K2;
};

}  // namespace

void bold_k_row(const KlTable& table, Elem r, const ParamTuple& b, std::vector<Complex>& v) {
  const auto& f = table.field();
  const std::size_t l = b.l();
  std::vector<Elem> t(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) t[i] = f.add(r, b[i]);
  v.resize(f.q());
  v[0] = 0.0;
  for (Elem s = 1; s < f.q(); ++s) {
    Complex p{1.0, 0.0};
    for (std::size_t i = 0; i < l; ++i) {
      p *= table(f.mul(s, t[i])) * std::conj(table(f.mul(s, t[i + l])));
    }
    v[s] = p;
  }
}

ParamTuple::ParamTuple(const PrimeField& field, const std::vector<std::int64_t>& b)
    : ParamTuple(reduce_all(field, b)) {}

ParamTuple ParamTuple::translated(const PrimeField& field, Elem c) const {
  std::vector<Elem> out(b_);
  for (auto& v : out) v = field.add(v, c);
  return ParamTuple(std::move(out));
}

Complex bold_k(const KlTable& table, Elem r, const ParamTuple& b) {
  const auto& f = table.field();
  const std::size_t l = b.l();
  Complex p{1.0, 0.0};
  for (std::size_t i = 0; i < l; ++i) {
    p *= table(f.add(r, b[i])) * std::conj(table(f.add(r, b[i + l])));
  }
  return p;
}

KR eval_KR(const KlTable& table, Elem r, const ParamTuple& b) {
  std::vector<Complex> v(table.field().q());
  bold_k_row(table, r, b, v);
  CompensatedComplexSum acc;
  for (std::size_t s = 1; s < v.size(); ++s) acc += v[s];
  return {bold_k(table, r, b), acc.value()};
}

double sigma_II_tolerance(std::uint32_t q, double magnitude) {
  return 1e-6 * std::max(std::pow(static_cast<double>(q), 1.5), std::abs(magnitude));
}

Complex sigma_I(const KlTable& table, const ParamTuple& b, unsigned threads) {
  return sigma_II(table, b, {.with_direct = false, .threads = threads}).sigma_I;
}

SumReport sigma_II(const KlTable& table, const ParamTuple& b, const SumOptions& options) {
  const auto& f = table.field();
  const std::uint32_t q = f.q();
  auto rows = parallel_chunks<RowSums>(q, options.threads, [&](std::size_t begin, std::size_t end) {
    RowSums acc;
    std::vector<Complex> v(q);
    for (std::size_t r = begin; r < end; ++r) {
      bold_k_row(table, static_cast<Elem>(r), b, v);
      CompensatedComplexSum row;
      CompensatedSum k2;
      for (Elem s = 1; s < q; ++s) {
        row += v[s];
        k2 += std::norm(v[s]);
      }
      const Complex R = row.value();
      acc.sigma_I += R;
      acc.sum_R2 += std::norm(R);
      acc.sum_K2 += k2.value();
    }
    return acc;
  });
  RowSums total;
  for (const auto& r : rows) {
    total.sigma_I.merge(r.sigma_I);
    total.sum_R2.merge(r.sum_R2);
    total.sum_K2.merge(r.sum_K2);
  }

  SumReport rep;
  rep.sigma_I = total.sigma_I.value();
  rep.sum_R2 = total.sum_R2.value();
  rep.sum_K2 = total.sum_K2.value();
  rep.sigma_II = rep.sum_R2 - rep.sum_K2;
  rep.ratio_I = std::abs(rep.sigma_I) / q;
  rep.ratio_II = std::abs(rep.sigma_II) / std::pow(static_cast<double>(q), 1.5);

  if (options.with_direct) {
    const Complex direct = sigma_II_direct(table, b);
    rep.sigma_II_direct = direct;
    const double gap = std::abs(direct - Complex{rep.sigma_II, 0.0});
    if (gap > sigma_II_tolerance(q, rep.sigma_II)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "Sigma_II routes disagree: difference form " << rep.sigma_II << ", direct form "
          << direct.real() << (direct.imag() < 0 ? "" : "+") << direct.imag() << "i";
      throw NumericalError(msg.str());
    }
  }
  return rep;
}

Complex sigma_II_direct(const KlTable& table, const ParamTuple& b) {
  const auto& f = table.field();
  const std::uint32_t q = f.q();
  std::vector<Complex> v(q);
  CompensatedComplexSum acc;
  for (Elem r = 0; r < q; ++r) {
    bold_k_row(table, r, b, v);
    for (Elem s1 = 1; s1 < q; ++s1) {
      CompensatedComplexSum inner;
      for (Elem s2 = 1; s2 < q; ++s2) {
        if (s2 != s1) inner += std::conj(v[s2]);
      }
      acc += v[s1] * inner.value();
    }
  }
  return acc.value();
}

}  // namespace klsum
