#include "flowknn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flowknn/rng.hpp"

namespace flowknn {
namespace {

constexpr std::uint64_t kSynthSalt = 0x53594e54;  // "SYNT"

struct Center {
  double icmp, tcp, udp, diversity;
  double packet_count, mean_size;
};

// Distance used only to keep generated centers apart; count/size coordinates
// are brought to the same order of magnitude as the fractions.
double center_gap(const Center& a, const Center& b) {
  return std::abs(a.icmp - b.icmp) + std::abs(a.tcp - b.tcp) +
         std::abs(a.udp - b.udp) + std::abs(a.diversity - b.diversity) +
         std::abs(a.packet_count - b.packet_count) / 1000.0 +
         std::abs(a.mean_size - b.mean_size) / 1000.0;
}

Center flood_center() { return {0.01, 0.01, 0.97, 0.98, 5000.0, 64.0}; }

Center draw_device_center(Rng& rng) {
  // Dirichlet(1,1,1,1) over (icmp, tcp, udp, other) keeps the three reported
  // shares summing to at most one.
  double w[4];
  double total = 0.0;
  for (double& x : w) {
    x = -std::log(1.0 - rng.next_unit());
    total += x;
  }
  Center c;
  c.icmp = w[0] / total;
  c.tcp = w[1] / total;
  c.udp = w[2] / total;
  c.diversity = rng.next_in(0.05, 0.5);
  c.packet_count = static_cast<double>(rng.next_int_in(20, 400));
  c.mean_size = rng.next_in(60.0, 1200.0);
  return c;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

FeatureVector sample_around(const Center& c, double spread, Rng& rng) {
  const double count_noise = spread * std::max(4.0, 0.25 * c.packet_count);
  const double size_noise = spread * std::max(8.0, 0.25 * c.mean_size);

  double icmp = clamp01(c.icmp + rng.next_in(-spread, spread));
  double tcp = clamp01(c.tcp + rng.next_in(-spread, spread));
  double udp = clamp01(c.udp + rng.next_in(-spread, spread));
  double diversity = c.diversity + rng.next_in(-spread, spread);
  double count = c.packet_count + rng.next_in(-count_noise, count_noise);
  double mean_size = c.mean_size + rng.next_in(-size_noise, size_noise);

  const double share = icmp + tcp + udp;
  if (share > 1.0) {
    icmp /= share;
    tcp /= share;
    udp /= share;
  }

  FeatureVector fv;
  fv.packet_count = static_cast<std::uint64_t>(std::max(1.0, std::round(count)));
  fv.icmp_pct = icmp;
  fv.tcp_pct = tcp;
  fv.udp_pct = udp;
  fv.ip_diversity =
      std::clamp(diversity, 1.0 / static_cast<double>(fv.packet_count), 1.0);
  fv.mean_packet_size = std::max(1.0, mean_size);
  return fv;
}

}  // namespace

Dataset synth_generate(const SynthSpec& spec) {
  if (spec.classes < 2) throw std::invalid_argument("synth: classes must be >= 2");
  if (spec.samples_per_class < 1)
    throw std::invalid_argument("synth: samples_per_class must be >= 1");
  if (!(spec.cluster_spread >= 0.0))
    throw std::invalid_argument("synth: cluster_spread must be >= 0");

  Rng rng(Rng::mix(spec.seed, kSynthSalt));

  // Flood class is the last ordinal; its fixed center takes part in the
  // minimum-gap rejection below.
  std::vector<Center> centers;
  centers.reserve(spec.classes);
  const Center flood = flood_center();
  for (std::uint32_t c = 0; c + 1 < spec.classes; ++c) {
    Center candidate{};
    for (int attempt = 0; attempt < 200; ++attempt) {
      candidate = draw_device_center(rng);
      double nearest = center_gap(candidate, flood);
      for (const Center& prev : centers)
        nearest = std::min(nearest, center_gap(candidate, prev));
      if (nearest >= 0.35) break;
    }
    centers.push_back(candidate);
  }
  centers.push_back(flood);

  Dataset data;
  data.label_table.reserve(spec.classes);
  for (std::uint32_t c = 0; c + 1 < spec.classes; ++c)
    data.label_table.push_back({c, "device-" + std::to_string(c)});
  data.label_table.push_back({spec.classes - 1, "ddos-udp"});

  data.samples.reserve(static_cast<std::size_t>(spec.classes) * spec.samples_per_class);
  for (std::uint32_t c = 0; c < spec.classes; ++c)
    for (std::uint32_t i = 0; i < spec.samples_per_class; ++i)
      data.samples.push_back({sample_around(centers[c], spec.cluster_spread, rng), c});
  return data;
}

}  // namespace flowknn
