#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace rrt {

// Replicate-level values plus enough metadata to reproduce them.
struct Sample {
  std::vector<double> values;
  std::string label;
};

// sup-norm distance between the empirical CDF of the sample and a reference
// CDF, evaluated at the sample points with both one-sided gaps.
double ks_statistic(const std::vector<double>& sample,
                    const std::function<double(double)>& cdf);

double ks_two_sample(const std::vector<double>& a, const std::vector<double>& b);

// Pearson statistic sum (O-E)^2/E with E = N * probs. Probabilities must sum
// to 1 within 1e-12 and every expected cell must be positive.
double chi_square(const std::vector<std::int64_t>& counts, const std::vector<double>& probs);

// Half L1 distance between two finitely supported laws.
template <typename K>
double total_variation(const std::map<K, double>& a, const std::map<K, double>& b) {
  double l1 = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      l1 += std::abs(ia->second);
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      l1 += std::abs(ib->second);
      ++ib;
    } else {
      l1 += std::abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return 0.5 * l1;
}

double mean(const std::vector<double>& v);
double median(std::vector<double> v);  // by value: selects in place
double std_error_of_mean(const std::vector<double>& v);

}  // namespace rrt
