#include "amdet/rng.hpp"

namespace amdet {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(uint64_t seed) : seed_(seed), engine_(splitmix64(seed)), normal_(0.0, 1.0) {}

Rng Rng::fork(uint64_t stream) const {
  return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x51ed2701)));
}

uint64_t Rng::next_u64() { return engine_(); }

double Rng::uniform() {
  // 53-bit mantissa draw.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() { return normal_(engine_); }

double Rng::gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

int Rng::uniform_int(int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  return dist(engine_);
}

bool Rng::coin() { return (engine_() & 1ULL) != 0; }

}  // namespace amdet
