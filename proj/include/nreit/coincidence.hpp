#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace nreit {

enum class Channel { S1, S2 };

struct TimeTagEvent {
  Channel channel = Channel::S1;
  std::int64_t timestamp_ps = 0;
};

/// Two sorted channels of detector time tags (integer picoseconds).
struct TimeTagStream {
  std::vector<std::int64_t> s1;
  std::vector<std::int64_t> s2;

  static TimeTagStream from_events(const std::vector<TimeTagEvent>& events) {
    TimeTagStream stream;
    for (const auto& e : events)
      (e.channel == Channel::S1 ? stream.s1 : stream.s2).push_back(e.timestamp_ps);
    if (!std::is_sorted(stream.s1.begin(), stream.s1.end()) ||
        !std::is_sorted(stream.s2.begin(), stream.s2.end()))
      throw std::domain_error("TimeTagStream: timestamps must be nondecreasing per channel");
    return stream;
  }
};

struct Histogram {
  std::int64_t bin_width_ps = 1600;  // 1.6 ns resolution
  std::int64_t origin_ps = 0;        // left edge of bin 0
  std::vector<std::int64_t> counts;
  bool empty_channel = false;

  std::int64_t bin_left(std::size_t k) const {
    return origin_ps + static_cast<std::int64_t>(k) * bin_width_ps;
  }
};

/// Histogram of (t_S2 - t_S1) over all pairs within +-window, built with a
/// two-pointer sweep over the sorted channels (no quadratic blowup).
inline Histogram cross_correlate(const TimeTagStream& stream, std::int64_t bin_width_ps,
                                 std::int64_t window_ps) {
  if (bin_width_ps <= 0) throw std::domain_error("cross_correlate: bin_width must be positive");
  if (window_ps <= bin_width_ps)
    throw std::domain_error("cross_correlate: window must exceed bin_width");
  Histogram hist;
  hist.bin_width_ps = bin_width_ps;
  const std::int64_t n_bins = 2 * ((window_ps + bin_width_ps - 1) / bin_width_ps);
  hist.origin_ps = -(n_bins / 2) * bin_width_ps;
  hist.counts.assign(static_cast<std::size_t>(n_bins), 0);
  if (stream.s1.empty() || stream.s2.empty()) {
    hist.empty_channel = true;
    return hist;
  }
  std::size_t lo = 0;
  for (const std::int64_t t1 : stream.s1) {
    while (lo < stream.s2.size() && stream.s2[lo] < t1 - window_ps) ++lo;
    for (std::size_t j = lo; j < stream.s2.size() && stream.s2[j] <= t1 + window_ps; ++j) {
      const std::int64_t dtau = stream.s2[j] - t1;
      const std::int64_t bin = (dtau - hist.origin_ps) / bin_width_ps;
      if (bin >= 0 && bin < n_bins) ++hist.counts[static_cast<std::size_t>(bin)];
    }
  }
  return hist;
}

struct GateCounts {
  std::int64_t counts = 0;
  bool empty_gate_warning = false;
};

/// Sum of bins fully inside [gate_start, gate_end]; partial bins excluded.
inline GateCounts integrate_counts(const Histogram& hist, std::int64_t gate_start_ps,
                                   std::int64_t gate_end_ps) {
  const std::int64_t span_lo = hist.origin_ps;
  const std::int64_t span_hi =
      hist.origin_ps + static_cast<std::int64_t>(hist.counts.size()) * hist.bin_width_ps;
  if (gate_start_ps < span_lo || gate_end_ps > span_hi)
    throw std::domain_error("integrate_counts: gate outside histogram span");
  GateCounts out;
  bool any_bin = false;
  for (std::size_t k = 0; k < hist.counts.size(); ++k) {
    const std::int64_t left = hist.bin_left(k);
    if (left >= gate_start_ps && left + hist.bin_width_ps <= gate_end_ps) {
      out.counts += hist.counts[k];
      any_bin = true;
    }
  }
  out.empty_gate_warning = !any_bin;
  return out;
}

/// Uniform-rate Poisson tag generator (rate in events per second).
inline std::vector<std::int64_t> generate_poisson_tags(double rate_hz, double duration_s,
                                                       std::mt19937_64& rng) {
  if (rate_hz <= 0.0 || duration_s <= 0.0)
    throw std::domain_error("generate_poisson_tags: rate and duration must be positive");
  std::exponential_distribution<double> gap(rate_hz);
  std::vector<std::int64_t> tags;
  double t = 0.0;
  while (true) {
    t += gap(rng);
    if (t >= duration_s) break;
    tags.push_back(static_cast<std::int64_t>(t * 1e12));
  }
  return tags;
}

/// Correlated pair stream: S1 tags Poisson at pair_rate, each S2 partner
/// offset by delay_ps and kept with probability keep_s2 (loss). Optional
/// uncorrelated background on both channels.
inline TimeTagStream generate_correlated_tags(double pair_rate_hz, double duration_s,
                                              std::int64_t delay_ps, double keep_s2,
                                              double background_rate_hz, std::mt19937_64& rng) {
  TimeTagStream stream;
  stream.s1 = generate_poisson_tags(pair_rate_hz, duration_s, rng);
  std::bernoulli_distribution keep(std::clamp(keep_s2, 0.0, 1.0));
  for (const auto t : stream.s1)
    if (keep(rng)) stream.s2.push_back(t + delay_ps);
  if (background_rate_hz > 0.0) {
    auto bg = generate_poisson_tags(background_rate_hz, duration_s, rng);
    stream.s2.insert(stream.s2.end(), bg.begin(), bg.end());
    std::sort(stream.s2.begin(), stream.s2.end());
  }
  return stream;
}

}  // namespace nreit
