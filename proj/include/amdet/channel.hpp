#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "amdet/constellation.hpp"
#include "amdet/rng.hpp"
#include "amdet/types.hpp"

namespace amdet {

enum class ChannelKind { UnitGainRandomPhase, RayleighIid, Trace };

ChannelKind channel_kind_from_string(std::string_view name);
std::string_view to_string(ChannelKind k);

/// Channel matrices parsed from a trace CSV.
///
/// Format: header `use,rx,tx,re,im`, then one row per complex channel entry,
/// channel uses numbered from 0. Every use must fill the same rx x tx grid
/// exactly once. Parse failures report the offending line (and field).
class ChannelTrace {
 public:
  static ChannelTrace load(const std::string& path);
  static ChannelTrace parse(std::istream& in, const std::string& name);

  int n_uses() const { return static_cast<int>(uses_.size()); }
  int n_rx() const { return n_rx_; }
  int n_tx() const { return n_tx_; }
  const CMat& use(int idx) const { return uses_.at(idx); }

 private:
  int n_rx_ = 0;
  int n_tx_ = 0;
  std::vector<CMat> uses_;
};

struct ChannelModel {
  ChannelKind kind = ChannelKind::RayleighIid;
  std::shared_ptr<const ChannelTrace> trace;  // required when kind == Trace
};

/// One decoding instance, fully reproducible from `seed`:
/// y = H * tx_symbols + n with n drawn from the recorded seed.
struct ChannelUse {
  CMat h;
  std::vector<uint8_t> tx_bits;
  CVec tx_symbols;
  CVec y;
  double snr_db = kNoiseless;
  uint64_t seed = 0;
};

/// Gray modulation of a bit vector (length divisible by Q) into symbols.
CVec modulate(std::span<const uint8_t> bits, const Constellation& c);

/// Draws an n_r x n_t channel matrix from the model. For traces, a channel
/// use is picked uniformly at random, n_r receive rows are sampled without
/// replacement and the first n_t transmit columns are taken.
CMat gen_channel(const ChannelModel& model, int n_t, int n_r, Rng& rng);

/// y = H v + n. Noise is complex Gaussian with per-receive-antenna power
/// set so that ||Hv||^2 / E||n||^2 equals the requested SNR; snr_db = +inf
/// disables noise exactly.
CVec transmit(const CMat& h, const CVec& v, double snr_db, Rng& rng);

std::vector<uint8_t> random_bits(int n, Rng& rng);

/// Full instance generation: channel, random payload, modulation, AWGN.
ChannelUse make_channel_use(const ChannelModel& model, const Constellation& c,
                            int n_t, int n_r, double snr_db, uint64_t seed);

}  // namespace amdet
