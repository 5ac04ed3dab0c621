#ifndef VNE_RNG_H_
#define VNE_RNG_H_

#include <cstdint>
#include <random>

namespace vne {

// Seeded generator with distribution mappings spelled out here, since the
// standard distributions are not required to agree across library vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [lo, hi].
  int UniformInt(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }
  bool Bernoulli(double p) { return Uniform() < p; }
  std::uint64_t Next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vne

#endif  // VNE_RNG_H_
