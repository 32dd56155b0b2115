#include "bhgen/stats.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "bhgen/error.hpp"

namespace bhgen {
namespace {

void require_nonempty(std::span<const double> x, const char* what) {
  if (x.empty()) throw Error(ErrorCode::empty_input, fmt::format("{}: empty sample", what));
}

}  // namespace

Ecdf::Ecdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  require_nonempty(sorted_, "ecdf");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  require_nonempty(a, "ks_two_sample");
  require_nonempty(b, "ks_two_sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    // advance past every copy of the smaller value so ties are compared
    // after both ECDFs have jumped
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::invalid_argument, "pearson: samples differ in length");
  }
  if (a.size() < 2) throw Error(ErrorCode::empty_input, "pearson: need at least two pairs");
  const double n = static_cast<double>(a.size());
  const double ma = pairwise_sum(a) / n;
  const double mb = pairwise_sum(b) / n;
  std::vector<double> saa(a.size()), sbb(a.size()), sab(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    saa[i] = da * da;
    sbb[i] = db * db;
    sab[i] = da * db;
  }
  const double va = pairwise_sum(saa);
  const double vb = pairwise_sum(sbb);
  if (!(va > 0.0) || !(vb > 0.0)) {
    throw Error(ErrorCode::degenerate_variance, "pearson: a sample has zero variance");
  }
  return std::clamp(pairwise_sum(sab) / std::sqrt(va * vb), -1.0, 1.0);
}

MeanStderr mean_stderr(std::span<const double> x) {
  MeanStderr out;
  out.n = x.size();
  if (x.empty()) return out;
  const double n = static_cast<double>(x.size());
  const double m = pairwise_sum(x) / n;
  out.mean = m;
  if (x.size() < 2) return out;
  std::vector<double> sq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - m) * (x[i] - m);
  out.stderr = std::sqrt(pairwise_sum(sq) / (n - 1.0)) / std::sqrt(n);
  return out;
}

double median(std::vector<double> x) {
  if (x.empty()) throw Error(ErrorCode::empty_input, "median: empty sample");
  const std::size_t mid = x.size() / 2;
  std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid), x.end());
  const double upper = x[mid];
  if (x.size() % 2 == 1) return upper;
  const double lower = *std::max_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace bhgen
