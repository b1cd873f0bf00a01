#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rae/distribution.hpp"
#include "rae/rng.hpp"

namespace rae {

// Finite-blocklength Monte Carlo: LT encoding, incremental peeling, decoding
// trajectories and random-access-expectation estimation.

struct CodedSymbol {
  std::vector<std::uint32_t> support;  // distinct information-symbol indices in [0, k)
  std::uint32_t degree() const { return static_cast<std::uint32_t>(support.size()); }
};

enum class ArrivalModel { sequential, poissonized };

// Draws a degree by inverse CDF and a uniform support set by partial
// Fisher-Yates over a persistent index pool (swaps undone after each draw).
class LtEncoder {
 public:
  LtEncoder(const DegreeDistribution& dist, std::uint32_t k);

  CodedSymbol sample(Xoshiro256& rng);
  std::uint32_t sample_degree(Xoshiro256& rng) const;
  std::uint32_t k() const { return k_; }

 private:
  std::uint32_t k_;
  std::vector<double> cdf_;
  std::vector<std::uint32_t> pool_;
  std::vector<std::uint32_t> swaps_;
};

// Residual bipartite graph of the peeling decoder. Coded symbols live in an
// arena; each undecoded information symbol keeps the list of incident arena
// slots. Ripple symbols (residual degree 1) resolve in FIFO order; the final
// decoded set is independent of that order.
class PeelingState {
 public:
  explicit PeelingState(std::uint32_t k, bool track_payloads = false);

  // Inserts one coded symbol (duplicates are legal) and runs the cascade.
  void insert(const CodedSymbol& symbol, std::uint64_t payload = 0);

  std::uint32_t k() const { return k_; }
  std::uint32_t decoded_count() const { return decoded_count_; }
  bool decoded(std::uint32_t i) const { return decoded_[i] != 0; }
  double undecoded_fraction() const {
    return 1.0 - static_cast<double>(decoded_count_) / static_cast<double>(k_);
  }
  // With payload tracking: the recovered value of symbol i (0 if undecoded).
  std::uint64_t value(std::uint32_t i) const { return values_[i]; }
  // Draw index (1-based) at which symbol i decoded; 0 while undecoded.
  std::uint64_t decode_time(std::uint32_t i) const { return decode_time_[i]; }
  void set_clock(std::uint64_t draws) { clock_ = draws; }

 private:
  struct Slot {
    std::uint32_t residual_degree = 0;
    std::uint32_t index_xor = 0;  // XOR of undecoded neighbor indices
    std::uint64_t payload = 0;
  };

  void cascade();

  std::uint32_t k_;
  bool track_payloads_;
  std::uint32_t decoded_count_ = 0;
  std::uint64_t clock_ = 0;
  std::vector<Slot> slots_;
  std::vector<std::vector<std::uint32_t>> incident_;  // per undecoded info symbol
  std::vector<std::uint8_t> decoded_;
  std::vector<std::uint64_t> values_;
  std::vector<std::uint64_t> decode_time_;
  std::vector<std::uint32_t> ripple_;  // FIFO queue of arena slots
  std::size_t ripple_head_ = 0;
};

struct TrajectoryStats {
  std::uint32_t k = 0;
  std::uint32_t trials = 0;
  std::uint64_t seed = 0;
  ArrivalModel arrival = ArrivalModel::sequential;
  std::vector<double> r_grid;
  std::vector<double> mean_undecoded;  // estimate of 1 - Z_k(r, p)
  double rae_estimate = 0.0;           // tail-sum integral, mean over trials
  double rae_stderr = 0.0;
  double rae_stopping_time = 0.0;  // same quantity via per-symbol stopping times
  double stall_prob = 0.0;         // fraction of trials cut off before full decode
  std::vector<std::vector<double>> trajectories;  // optionally retained per-trial curves
};

struct SimConfig {
  std::uint32_t k = 0;
  std::uint32_t trials = 1;
  std::uint64_t seed = 0;
  ArrivalModel arrival = ArrivalModel::sequential;
  double cutoff_factor = 20.0;    // a trial stops after cutoff_factor * k draws
  std::uint32_t keep_trajectories = 0;
};

// Single decoding trajectory sampled on r_grid. In the sequential model the
// state at grid value r reflects floor(r k) draws; in the poissonized model
// each grid step receives Poisson(k dr) fresh symbols.
std::vector<double> simulate_trajectory(const DegreeDistribution& dist, std::uint32_t k,
                                        const std::vector<double>& r_grid, Xoshiro256& rng,
                                        ArrivalModel arrival);

// Tail-sum RAE estimate over independent trials (deterministic in the seed:
// trial i uses stream (seed, i) and aggregation runs in trial order).
TrajectoryStats estimate_rae(const DegreeDistribution& dist, const SimConfig& config);

// Pointwise mean of trial trajectories on r_grid, plus the RAE estimate.
TrajectoryStats average_decoding_curve(const DegreeDistribution& dist, const SimConfig& config,
                                       const std::vector<double>& r_grid);

// Poisson(lambda) sample (Knuth product method, chunked for large lambda).
std::uint64_t poisson_draw(Xoshiro256& rng, double lambda);

}  // namespace rae
