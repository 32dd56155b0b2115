#pragma once

#include <optional>
#include <span>
#include <vector>

namespace bhgen {

/// Right-continuous empirical CDF.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> samples);

  double operator()(double x) const;
  std::span<const double> sorted() const noexcept { return sorted_; }
  std::size_t size() const noexcept { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

/// Sup-norm distance between the two ECDFs, computed exactly by merging the
/// sorted samples.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Product-moment correlation of paired samples.
double pearson(std::span<const double> a, std::span<const double> b);

/// Pairwise (tree) summation; the result does not depend on thread count.
double pairwise_sum(std::span<const double> x);

struct MeanStderr {
  std::size_t n = 0;
  std::optional<double> mean;
  /// sample sd / sqrt(n); undefined for n < 2
  std::optional<double> stderr;
};

MeanStderr mean_stderr(std::span<const double> x);

double median(std::vector<double> x);

}  // namespace bhgen
