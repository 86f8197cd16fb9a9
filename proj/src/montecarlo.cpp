#include "reflectwalk/montecarlo.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace reflectwalk {

std::optional<McStats> mc_mean(const McAccumulator& acc) {
  if (acc.count < 1) return std::nullopt;
  const double m = static_cast<double>(acc.count);
  McStats s;
  s.mean = acc.sum / m;
  // Population-style variance with divisor M, then divided by M again for the
  // variance of the mean. Clamped against cancellation for near-constant samples.
  s.variance_of_mean = std::max(0.0, (acc.sum_sq / m - s.mean * s.mean) / m);
  s.ci_halfwidth = 2.0 * std::sqrt(s.variance_of_mean);
  return s;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("REFLECTWALK_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
      throw config_error("REFLECTWALK_WORKERS must be a positive integer, got '" +
                         std::string(env) + "'");
    }
    throw config_error("REFLECTWALK_WORKERS must be a positive integer, got '" +
                       std::string(env) + "'");
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace reflectwalk
