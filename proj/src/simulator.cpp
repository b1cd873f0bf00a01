#include "rae/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rae/errors.hpp"

namespace rae {

// ---------------------------------------------------------------------------
// Encoder

LtEncoder::LtEncoder(const DegreeDistribution& dist, std::uint32_t k) : k_(k) {
  if (k == 0) throw validation_error("k must be positive");
  if (dist.d() > k)
    throw validation_error("max degree d exceeds blocklength k");
  cdf_.resize(dist.d());
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.d(); ++i) {
    acc += dist.p(i + 1);
    cdf_[i] = acc;
  }
  cdf_.back() = 1.0;
  pool_.resize(k);
  for (std::uint32_t i = 0; i < k; ++i) pool_[i] = i;
}

std::uint32_t LtEncoder::sample_degree(Xoshiro256& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const std::size_t idx = std::min<std::size_t>(it - cdf_.begin(), cdf_.size() - 1);
  return static_cast<std::uint32_t>(idx + 1);
}

CodedSymbol LtEncoder::sample(Xoshiro256& rng) {
  const std::uint32_t w = sample_degree(rng);
  CodedSymbol sym;
  sym.support.resize(w);
  swaps_.resize(w);
  // Partial Fisher-Yates over the persistent pool; swaps are undone in
  // reverse afterwards so each draw is O(w) without resetting the pool.
  for (std::uint32_t j = 0; j < w; ++j) {
    const std::uint32_t r = j + static_cast<std::uint32_t>(rng.below(k_ - j));
    swaps_[j] = r;
    std::swap(pool_[j], pool_[r]);
    sym.support[j] = pool_[j];
  }
  for (std::uint32_t j = w; j-- > 0;) std::swap(pool_[j], pool_[swaps_[j]]);
  return sym;
}

// ---------------------------------------------------------------------------
// Peeling

PeelingState::PeelingState(std::uint32_t k, bool track_payloads)
    : k_(k), track_payloads_(track_payloads) {
  incident_.resize(k);
  decoded_.assign(k, 0);
  decode_time_.assign(k, 0);
  if (track_payloads_) values_.assign(k, 0);
}

void PeelingState::insert(const CodedSymbol& symbol, std::uint64_t payload) {
  ++clock_;
  Slot slot;
  for (const std::uint32_t idx : symbol.support) {
    if (idx >= k_) throw validation_error("coded symbol index out of range");
    if (decoded_[idx]) {
      if (track_payloads_) payload ^= values_[idx];
      continue;
    }
    slot.residual_degree++;
    slot.index_xor ^= idx;
  }
  if (slot.residual_degree == 0) return;  // fully redundant draw
  slot.payload = track_payloads_ ? payload : 0;

  const std::uint32_t sid = static_cast<std::uint32_t>(slots_.size());
  slots_.push_back(slot);
  for (const std::uint32_t idx : symbol.support)
    if (!decoded_[idx]) incident_[idx].push_back(sid);
  if (slot.residual_degree == 1) ripple_.push_back(sid);
  cascade();
}

void PeelingState::cascade() {
  while (ripple_head_ < ripple_.size()) {
    const std::uint32_t sid = ripple_[ripple_head_++];
    Slot& slot = slots_[sid];
    if (slot.residual_degree != 1) continue;  // stale entry
    const std::uint32_t i = slot.index_xor;
    slot.residual_degree = 0;
    if (decoded_[i]) continue;

    decoded_[i] = 1;
    decode_time_[i] = clock_;
    ++decoded_count_;
    if (track_payloads_) values_[i] = slot.payload;

    for (const std::uint32_t sid2 : incident_[i]) {
      Slot& other = slots_[sid2];
      if (other.residual_degree == 0) continue;
      other.residual_degree--;
      other.index_xor ^= i;
      if (track_payloads_) other.payload ^= values_[i];
      if (other.residual_degree == 1) ripple_.push_back(sid2);
    }
    incident_[i].clear();
    incident_[i].shrink_to_fit();
  }
  ripple_.clear();
  ripple_head_ = 0;
}

// ---------------------------------------------------------------------------
// Poisson sampling

namespace {

std::uint64_t poisson_knuth(Xoshiro256& rng, double lambda) {
  const double limit = std::exp(-lambda);
  std::uint64_t n = 0;
  double prod = rng.uniform();
  while (prod > limit) {
    ++n;
    prod *= rng.uniform();
  }
  return n;
}

}  // namespace

std::uint64_t poisson_draw(Xoshiro256& rng, double lambda) {
  if (!(lambda >= 0.0)) throw validation_error("poisson rate must be nonnegative");
  std::uint64_t total = 0;
  while (lambda > 500.0) {
    total += poisson_knuth(rng, 500.0);
    lambda -= 500.0;
  }
  return total + poisson_knuth(rng, lambda);
}

// ---------------------------------------------------------------------------
// Trials

namespace {

struct TrialOutcome {
  double rae_tail = 0.0;      // integral of the undecoded step function
  double rae_stopping = 0.0;  // mean per-symbol stopping time / k
  bool stalled = false;
  std::vector<double> curve;  // undecoded at the requested grid points
};

TrialOutcome run_trial(const DegreeDistribution& dist, std::uint32_t k, double cutoff_factor,
                       ArrivalModel arrival, Xoshiro256& rng, const std::vector<double>& grid) {
  LtEncoder enc(dist, k);
  PeelingState state(k);
  TrialOutcome out;
  out.curve.reserve(grid.size());

  const std::uint64_t max_draws =
      static_cast<std::uint64_t>(std::ceil(cutoff_factor * static_cast<double>(k)));
  const double inv_k = 1.0 / static_cast<double>(k);

  std::uint64_t draws = 0;
  std::size_t gi = 0;
  double now = 0.0;  // continuous time (poissonized); draws/k otherwise
  std::vector<double> draw_times;  // poissonized: arrival time of each draw
  if (arrival == ArrivalModel::poissonized) draw_times.reserve(4 * k);

  while (state.decoded_count() < k && draws < max_draws) {
    const double r_now =
        arrival == ArrivalModel::sequential ? static_cast<double>(draws) * inv_k : now;
    double r_next;
    if (arrival == ArrivalModel::sequential) {
      r_next = static_cast<double>(draws + 1) * inv_k;
    } else {
      r_next = now - std::log(1.0 - rng.uniform()) * inv_k;  // Exp(k) inter-arrival
    }
    // Grid points inside [r_now, r_next) see the current (pre-draw) state.
    while (gi < grid.size() && grid[gi] < r_next - 1e-15) {
      out.curve.push_back(state.undecoded_fraction());
      ++gi;
    }
    out.rae_tail += state.undecoded_fraction() * (r_next - r_now);
    const CodedSymbol sym = enc.sample(rng);
    state.insert(sym);
    ++draws;
    now = r_next;
    if (arrival == ArrivalModel::poissonized) draw_times.push_back(now);
  }
  out.stalled = state.decoded_count() < k;
  while (gi < grid.size()) {
    out.curve.push_back(state.undecoded_fraction());
    ++gi;
  }

  // Per-symbol stopping times; undecoded symbols are charged the cutoff.
  const double cutoff_time = arrival == ArrivalModel::sequential
                                 ? static_cast<double>(draws) * inv_k
                                 : now;
  double tau_sum = 0.0;
  for (std::uint32_t i = 0; i < k; ++i) {
    if (!state.decoded(i)) {
      tau_sum += cutoff_time;
    } else if (arrival == ArrivalModel::sequential) {
      tau_sum += static_cast<double>(state.decode_time(i)) * inv_k;
    } else {
      tau_sum += draw_times[state.decode_time(i) - 1];
    }
  }
  out.rae_stopping = tau_sum * inv_k;
  return out;
}

TrajectoryStats run_trials(const DegreeDistribution& dist, const SimConfig& config,
                           const std::vector<double>& grid) {
  if (config.trials < 1) throw validation_error("need at least one trial");
  TrajectoryStats stats;
  stats.k = config.k;
  stats.trials = config.trials;
  stats.seed = config.seed;
  stats.arrival = config.arrival;
  stats.r_grid = grid;
  stats.mean_undecoded.assign(grid.size(), 0.0);

  double sum = 0.0, sum_sq = 0.0, stop_sum = 0.0;
  std::uint32_t stalls = 0;
  for (std::uint32_t t = 0; t < config.trials; ++t) {
    Xoshiro256 rng(config.seed, t);
    TrialOutcome out = run_trial(dist, config.k, config.cutoff_factor, config.arrival, rng, grid);
    sum += out.rae_tail;
    sum_sq += out.rae_tail * out.rae_tail;
    stop_sum += out.rae_stopping;
    if (out.stalled) ++stalls;
    for (std::size_t i = 0; i < grid.size(); ++i) stats.mean_undecoded[i] += out.curve[i];
    if (t < config.keep_trajectories) stats.trajectories.push_back(std::move(out.curve));
  }
  const double n = static_cast<double>(config.trials);
  stats.rae_estimate = sum / n;
  stats.rae_stopping_time = stop_sum / n;
  stats.stall_prob = static_cast<double>(stalls) / n;
  if (config.trials > 1) {
    const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    stats.rae_stderr = std::sqrt(var / n);
  }
  for (double& v : stats.mean_undecoded) v /= n;
  return stats;
}

}  // namespace

std::vector<double> simulate_trajectory(const DegreeDistribution& dist, std::uint32_t k,
                                        const std::vector<double>& r_grid, Xoshiro256& rng,
                                        ArrivalModel arrival) {
  LtEncoder enc(dist, k);
  PeelingState state(k);
  std::vector<double> curve;
  curve.reserve(r_grid.size());
  if (arrival == ArrivalModel::sequential) {
    std::uint64_t draws = 0;
    for (const double r : r_grid) {
      const auto target = static_cast<std::uint64_t>(std::floor(r * k + 1e-9));
      while (draws < target) {
        state.insert(enc.sample(rng));
        ++draws;
      }
      curve.push_back(state.undecoded_fraction());
    }
  } else {
    double now = 0.0;
    for (const double r : r_grid) {
      if (r > now) {
        const std::uint64_t count = poisson_draw(rng, (r - now) * k);
        for (std::uint64_t c = 0; c < count; ++c) state.insert(enc.sample(rng));
        now = r;
      }
      curve.push_back(state.undecoded_fraction());
    }
  }
  return curve;
}

TrajectoryStats estimate_rae(const DegreeDistribution& dist, const SimConfig& config) {
  return run_trials(dist, config, {});
}

TrajectoryStats average_decoding_curve(const DegreeDistribution& dist, const SimConfig& config,
                                       const std::vector<double>& r_grid) {
  for (std::size_t i = 1; i < r_grid.size(); ++i)
    if (r_grid[i] <= r_grid[i - 1]) throw validation_error("r grid must be increasing");
  return run_trials(dist, config, r_grid);
}

}  // namespace rae
