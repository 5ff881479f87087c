#include "commnash/random.hpp"

#include <algorithm>
#include <stdexcept>

namespace commnash {

std::vector<double> cumulative_weights(const std::vector<double>& probs) {
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
  }
  return cdf;
}

std::size_t draw_index(const std::vector<double>& cumulative, Rng& rng) {
  if (cumulative.empty() || !(cumulative.back() > 0.0)) {
    throw std::invalid_argument("draw_index: no probability mass");
  }
  const double u = uniform01(rng) * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  auto idx = static_cast<std::size_t>(it - cumulative.begin());
  if (idx >= cumulative.size()) idx = cumulative.size() - 1;
  // Skip zero-width cells that rounding may land on.
  while (idx > 0 && cumulative[idx] == cumulative[idx - 1]) --idx;
  return idx;
}

}  // namespace commnash
