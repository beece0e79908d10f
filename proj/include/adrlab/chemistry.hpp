#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace adrlab {

/// Photolysis rate constant of NO2 as a function of time since midnight
/// (seconds). Daytime is the half-open interval [04:00, 20:00); there the
/// rate is 1e-5 * exp(7 * sin(pi * (h - 4) / 16)^0.2), otherwise 1e-40.
/// Throws InputError for negative or non-finite t.
double photolysis_k1(double t);

inline constexpr double kPhotolysisNight = 1e-40;
inline constexpr double kPhotolysisDayScale = 1e-5;
/// Upper bound of photolysis_k1, reached at noon.
double photolysis_k1_max();

/// Time dependence h(t) of one reaction, with its declared bound d.
struct RateSchedule {
  enum class Kind { constant, photolysis };

  Kind kind = Kind::constant;
  double value = 0.0;  // used by Kind::constant
  double scale = 1.0;  // unit-conversion multiplier applied to both h and d

  static RateSchedule constant(double rate) { return {Kind::constant, rate, 1.0}; }
  static RateSchedule photolysis() { return {Kind::photolysis, 0.0, 1.0}; }

  double operator()(double t) const;
  double bound() const;
};

struct Reaction {
  std::vector<unsigned> loss;  // l_{j,kappa}, one entry per species
  std::vector<unsigned> gain;  // r_{j,kappa}, one entry per species
  RateSchedule rate;
};

/// Constant production `rate` of `species` at flat lattice index `cell`.
struct PointSource {
  std::size_t species = 0;
  std::size_t cell = 0;
  double rate = 0.0;
};

/// Mass-action reaction network
///   R_j = sum_k (r_jk - l_jk) h_k(t) prod_v c_v^{l_vk}  (+ point sources).
/// Immutable once built.
class ReactionNetwork {
 public:
  ReactionNetwork() = default;
  ReactionNetwork(std::vector<std::string> species, std::vector<Reaction> reactions,
                  std::vector<PointSource> sources = {});

  std::size_t species_count() const noexcept { return species_.size(); }
  std::size_t reaction_count() const noexcept { return reactions_.size(); }
  const std::vector<std::string>& species_names() const noexcept { return species_; }
  const std::vector<Reaction>& reactions() const noexcept { return reactions_; }
  const std::vector<PointSource>& sources() const noexcept { return sources_; }

  unsigned loss(std::size_t j, std::size_t kappa) const { return reactions_[kappa].loss[j]; }
  unsigned gain(std::size_t j, std::size_t kappa) const { return reactions_[kappa].gain[j]; }

  /// h_k(t) for every reaction. Throws NumericError if a schedule leaves
  /// [0, d_k].
  std::vector<double> rate_values(double t) const;

  /// Adds R(t, c) at `cell` to `out`, given precomputed h values. Hot path
  /// of the 3-D solver; throws NumericError naming the reaction on overflow.
  void accumulate_rates(std::span<const double> h, std::span<const double> c, std::size_t cell,
                        std::span<double> out) const;

  bool has_sources() const noexcept { return !sources_.empty(); }

 private:
  struct Factor {
    std::size_t species;
    unsigned order;
  };
  struct Net {
    std::size_t species;
    double coefficient;
  };
  std::vector<std::string> species_;
  std::vector<Reaction> reactions_;
  std::vector<PointSource> sources_;
  std::vector<std::vector<Factor>> reactants_;
  std::vector<std::vector<Net>> net_;
};

/// Per-species dc/dt at one cell. Uses x^0 = 1, including 0^0.
std::vector<double> reaction_rates(const ReactionNetwork& network, double t,
                                   std::span<const double> c, std::size_t cell);

/// Whether every reaction consumes at most one molecule.
struct HClassification {
  bool holds = false;
  std::optional<int> beta;  // 0: no reaction consumes anything; 1: otherwise
};

HClassification classify_H(const ReactionNetwork& network);

/// Growth-bound constant: ||F(t,z)|| <= dbar * ||z||^beta.
struct DbarEstimate {
  double dbar = 0.0;
  int beta = 0;
};

/// dbar = sqrt(2(r-1)) * max(|(r_jk d_k)|_F, |((r_jk - l_jk) d_k)|_F).
/// Note the factor sqrt(2(r-1)) makes dbar = 0 for single-reaction networks.
/// Throws UnsupportedError when the network is not monomolecular.
DbarEstimate compute_dbar(const ReactionNetwork& network);

/// NO / NO2 / O3 network (species in that order):
///   NO2 + O2 + hv -> NO + O3  (photolysis_k1)
///   NO + O3 -> NO2 + O2       (k2)
/// with an optional NO source of strength sigma at flat index `source_cell`.
ReactionNetwork ozone_network(double k2, double sigma = 0.0,
                              std::optional<std::size_t> source_cell = std::nullopt);

/// Rescales a network written in per-volume concentration units to
/// per-cell amounts for cells of `volume` (same volume unit): source rates
/// gain a factor `volume`, and a reaction consuming L molecules gains
/// volume^(1-L) on its rate. Concentrations must be multiplied by `volume`
/// separately.
ReactionNetwork to_cell_units(const ReactionNetwork& network, double volume);

/// dt times a bound on the reaction Jacobian row sums, using the declared
/// rate bounds and per-species concentration maxima.
double chemistry_step_estimate(const ReactionNetwork& network, std::span<const double> c_max,
                               double dt);

}  // namespace adrlab
