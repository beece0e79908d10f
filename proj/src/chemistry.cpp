#include "adrlab/chemistry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "adrlab/errors.hpp"

namespace adrlab {

namespace {

constexpr double kSecondsPerDay = 86400.0;
constexpr double kDawn = 4.0 * 3600.0;
constexpr double kDusk = 20.0 * 3600.0;

double ipow(double x, unsigned n) {
  double r = 1.0;
  for (unsigned i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace

double photolysis_k1(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    std::ostringstream os;
    os << "photolysis_k1: time must be a nonnegative finite number of seconds (got " << t << ")";
    throw InputError(os.str());
  }
  // fmod is exact, so k1(t) == k1(t + 86400) whenever t + 86400 is representable.
  const double second_of_day = std::fmod(t, kSecondsPerDay);
  if (second_of_day < kDawn || second_of_day >= kDusk) return kPhotolysisNight;
  const double hour = second_of_day / 3600.0;
  const double s = std::sin(std::numbers::pi * (hour - 4.0) / 16.0);
  return kPhotolysisDayScale * std::exp(7.0 * std::pow(s, 0.2));
}

double photolysis_k1_max() { return kPhotolysisDayScale * std::exp(7.0); }

double RateSchedule::operator()(double t) const {
  switch (kind) {
    case Kind::constant:
      return scale * value;
    case Kind::photolysis:
      return scale * photolysis_k1(t);
  }
  return 0.0;
}

double RateSchedule::bound() const {
  switch (kind) {
    case Kind::constant:
      return scale * value;
    case Kind::photolysis:
      return scale * photolysis_k1_max();
  }
  return 0.0;
}

ReactionNetwork::ReactionNetwork(std::vector<std::string> species, std::vector<Reaction> reactions,
                                 std::vector<PointSource> sources)
    : species_(std::move(species)), reactions_(std::move(reactions)), sources_(std::move(sources)) {
  const std::size_t s = species_.size();
  if (s == 0) throw ConfigError("chemistry.species", "at least one species is required");
  for (std::size_t kappa = 0; kappa < reactions_.size(); ++kappa) {
    const auto& r = reactions_[kappa];
    const std::string key = "chemistry.reactions[" + std::to_string(kappa) + "]";
    if (r.loss.size() != s || r.gain.size() != s)
      throw ConfigError(key, "loss and gain need one entry per species");
    if (r.rate.kind == RateSchedule::Kind::constant &&
        (!(r.rate.value >= 0.0) || !std::isfinite(r.rate.value)))
      throw ConfigError(key + ".rate", "constant rate must be finite and nonnegative");
    if (!(r.rate.scale > 0.0) || !std::isfinite(r.rate.scale))
      throw ConfigError(key + ".rate", "scale must be positive");
    std::vector<Factor> factors;
    std::vector<Net> net;
    for (std::size_t j = 0; j < s; ++j) {
      if (r.loss[j] > 0) factors.push_back({j, r.loss[j]});
      const double d = static_cast<double>(r.gain[j]) - static_cast<double>(r.loss[j]);
      if (d != 0.0) net.push_back({j, d});
    }
    reactants_.push_back(std::move(factors));
    net_.push_back(std::move(net));
  }
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    if (sources_[i].species >= s)
      throw ConfigError("chemistry.sources[" + std::to_string(i) + "]", "unknown species");
    if (!std::isfinite(sources_[i].rate))
      throw ConfigError("chemistry.sources[" + std::to_string(i) + "]", "rate must be finite");
  }
}

std::vector<double> ReactionNetwork::rate_values(double t) const {
  std::vector<double> h(reactions_.size());
  for (std::size_t kappa = 0; kappa < reactions_.size(); ++kappa) {
    const auto& sched = reactions_[kappa].rate;
    h[kappa] = sched(t);
    if (!(h[kappa] >= 0.0 && h[kappa] <= sched.bound())) {
      std::ostringstream os;
      os << "rate of reaction " << kappa << " at t=" << t << " is " << h[kappa]
         << ", outside its declared bound [0, " << sched.bound() << "]";
      throw NumericError(os.str());
    }
  }
  return h;
}

void ReactionNetwork::accumulate_rates(std::span<const double> h, std::span<const double> c,
                                       std::size_t cell, std::span<double> out) const {
  for (std::size_t kappa = 0; kappa < reactions_.size(); ++kappa) {
    double g = h[kappa];
    for (const Factor& f : reactants_[kappa]) g *= ipow(c[f.species], f.order);
    if (!std::isfinite(g)) {
      std::ostringstream os;
      os << "reaction " << kappa << " produced a non-finite rate at cell " << cell;
      throw NumericError(os.str());
    }
    for (const Net& n : net_[kappa]) out[n.species] += n.coefficient * g;
  }
  for (const PointSource& src : sources_)
    if (src.cell == cell) out[src.species] += src.rate;
}

std::vector<double> reaction_rates(const ReactionNetwork& network, double t,
                                   std::span<const double> c, std::size_t cell) {
  if (c.size() != network.species_count())
    throw InputError("reaction_rates: expected one concentration per species");
  for (std::size_t j = 0; j < c.size(); ++j)
    if (!std::isfinite(c[j]))
      throw InputError("reaction_rates: concentration of species " + std::to_string(j) +
                       " is not finite");
  const auto h = network.rate_values(t);
  std::vector<double> out(c.size(), 0.0);
  network.accumulate_rates(h, c, cell, out);
  return out;
}

HClassification classify_H(const ReactionNetwork& network) {
  bool any_loss = false;
  for (const auto& r : network.reactions()) {
    unsigned total = 0;
    for (unsigned l : r.loss) total += l;
    if (total > 1) return {false, std::nullopt};
    any_loss = any_loss || total == 1;
  }
  return {true, any_loss ? 1 : 0};
}

DbarEstimate compute_dbar(const ReactionNetwork& network) {
  const auto cls = classify_H(network);
  if (!cls.holds)
    throw UnsupportedError(
        "compute_dbar: network has a reaction consuming more than one molecule");
  double gain_sq = 0.0;
  double net_sq = 0.0;
  const std::size_t r = network.reaction_count();
  for (std::size_t j = 0; j < network.species_count(); ++j) {
    for (std::size_t kappa = 0; kappa < r; ++kappa) {
      const double d = network.reactions()[kappa].rate.bound();
      const double g = static_cast<double>(network.gain(j, kappa)) * d;
      const double n =
          (static_cast<double>(network.gain(j, kappa)) - static_cast<double>(network.loss(j, kappa))) *
          d;
      gain_sq += g * g;
      net_sq += n * n;
    }
  }
  const double factor = r > 1 ? std::sqrt(2.0 * static_cast<double>(r - 1)) : 0.0;
  return {factor * std::max(std::sqrt(gain_sq), std::sqrt(net_sq)), *cls.beta};
}

ReactionNetwork ozone_network(double k2, double sigma, std::optional<std::size_t> source_cell) {
  std::vector<Reaction> reactions{
      {{0, 1, 0}, {1, 0, 1}, RateSchedule::photolysis()},
      {{1, 0, 1}, {0, 1, 0}, RateSchedule::constant(k2)},
  };
  std::vector<PointSource> sources;
  if (source_cell) sources.push_back({0, *source_cell, sigma});
  return ReactionNetwork({"NO", "NO2", "O3"}, std::move(reactions), std::move(sources));
}

ReactionNetwork to_cell_units(const ReactionNetwork& network, double volume) {
  if (!(volume > 0.0) || !std::isfinite(volume))
    throw ConfigError("chemistry.cell_volume", "must be positive");
  auto reactions = network.reactions();
  for (auto& r : reactions) {
    int order = 0;
    for (unsigned l : r.loss) order += static_cast<int>(l);
    r.rate.scale *= std::pow(volume, 1 - order);
  }
  auto sources = network.sources();
  for (auto& s : sources) s.rate *= volume;
  return ReactionNetwork(network.species_names(), std::move(reactions), std::move(sources));
}

double chemistry_step_estimate(const ReactionNetwork& network, std::span<const double> c_max,
                               double dt) {
  const std::size_t s = network.species_count();
  std::vector<double> row(s, 0.0);
  for (std::size_t kappa = 0; kappa < network.reaction_count(); ++kappa) {
    const auto& r = network.reactions()[kappa];
    const double d = r.rate.bound();
    // |dg/dc_v| <= d * l_v * cmax_v^(l_v-1) * prod_{mu != v} cmax_mu^(l_mu)
    double dg_sum = 0.0;
    for (std::size_t v = 0; v < s; ++v) {
      if (r.loss[v] == 0) continue;
      double term = d * r.loss[v] * ipow(std::abs(c_max[v]), r.loss[v] - 1);
      for (std::size_t mu = 0; mu < s; ++mu)
        if (mu != v) term *= ipow(std::abs(c_max[mu]), r.loss[mu]);
      dg_sum += term;
    }
    for (std::size_t j = 0; j < s; ++j)
      row[j] += std::abs(static_cast<double>(r.gain[j]) - static_cast<double>(r.loss[j])) * dg_sum;
  }
  double worst = 0.0;
  for (double v : row) worst = std::max(worst, v);
  return dt * worst;
}

}  // namespace adrlab
