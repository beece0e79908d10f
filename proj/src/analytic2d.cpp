#include "adrlab/analytic2d.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "adrlab/errors.hpp"
#include "adrlab/parallel.hpp"

namespace adrlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kRuleOrder = 8;

struct Nodes {
  std::vector<double> x;
  std::vector<double> w;
};

/// Composite Gauss-Legendre nodes on [0, 1].
Nodes composite_gauss(std::size_t quad_points) {
  using Rule = boost::math::quadrature::gauss<double, kRuleOrder>;
  const auto& abscissa = Rule::abscissa();
  const auto& weights = Rule::weights();
  // Boost stores the nonnegative half of a symmetric rule.
  std::vector<double> ref_x, ref_w;
  for (std::size_t i = abscissa.size(); i-- > 0;) {
    if (abscissa[i] == 0.0) continue;
    ref_x.push_back(-abscissa[i]);
    ref_w.push_back(weights[i]);
  }
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    ref_x.push_back(abscissa[i]);
    ref_w.push_back(weights[i]);
  }
  const std::size_t panels = (quad_points + kRuleOrder - 1) / kRuleOrder;
  const double h = 1.0 / static_cast<double>(panels);
  Nodes out;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = (static_cast<double>(p) + 0.5) * h;
    for (std::size_t q = 0; q < ref_x.size(); ++q) {
      out.x.push_back(mid + 0.5 * h * ref_x[q]);
      out.w.push_back(0.5 * h * ref_w[q]);
    }
  }
  return out;
}

void check_transport(double u, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("transport.k", "must be positive");
  if (!std::isfinite(u)) throw ConfigError("transport.u", "must be finite");
}

/// w_a w_b f(x_a, y_b) e^{-u (x_a + y_b) / 2k}
std::vector<double> weighted_samples(const std::function<double(double, double)>& f, double u,
                                     double k, const Nodes& nodes, std::size_t m,
                                     std::size_t n) {
  const std::size_t q = nodes.x.size();
  std::vector<double> damp(q);
  for (std::size_t a = 0; a < q; ++a) damp[a] = std::exp(-u * nodes.x[a] / (2.0 * k));
  std::vector<double> w(q * q);
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = 0; b < q; ++b) {
      const double v = f(nodes.x[a], nodes.x[b]);
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "non-finite integrand for A(" << m << "," << n << ") at (" << nodes.x[a] << ", "
           << nodes.x[b] << ")";
        throw NumericError(os.str());
      }
      w[a * q + b] = nodes.w[a] * nodes.w[b] * v * damp[a] * damp[b];
    }
  }
  return w;
}

std::size_t checked_quad_points(std::size_t quad_points) {
  if (quad_points < 16) throw ConfigError("series.quad_points", "must be at least 16");
  return quad_points;
}

}  // namespace

double series_eigenvalue(double u, double k, std::size_t m, std::size_t n) {
  const double mm = static_cast<double>(m);
  const double nn = static_cast<double>(n);
  return -k * (mm * mm + nn * nn) * kPi * kPi - u * u / (2.0 * k);
}

SeriesSolution::SeriesSolution(double u, double k, std::size_t m_terms, std::size_t n_terms,
                               std::vector<double> coefficients)
    : u_(u), k_(k), m_(m_terms), n_(n_terms), a_(std::move(coefficients)) {
  check_transport(u, k);
  if (m_ == 0 || n_ == 0) throw ConfigError("series", "truncation orders must be positive");
  if (a_.size() != m_ * n_) throw ConfigError("series", "coefficient count must equal M*N");
  for (double a : a_)
    if (!std::isfinite(a)) throw NumericError("series coefficient is not finite");
  order_.reserve(m_ * n_);
  for (std::size_t m = 1; m <= m_; ++m)
    for (std::size_t n = 1; n <= n_; ++n) order_.emplace_back(m, n);
  std::stable_sort(order_.begin(), order_.end(), [](const auto& l, const auto& r) {
    return l.first * l.first + l.second * l.second < r.first * r.first + r.second * r.second;
  });
}

double SeriesSolution::eigenvalue(std::size_t m, std::size_t n) const {
  return series_eigenvalue(u_, k_, m, n);
}

std::size_t default_quad_points(std::size_t m_terms, std::size_t n_terms) {
  return std::max<std::size_t>(16, kRuleOrder * std::max(m_terms, n_terms));
}

double fourier_coefficient(const std::function<double(double, double)>& f, double u, double k,
                           std::size_t m, std::size_t n, std::size_t quad_points) {
  check_transport(u, k);
  if (m == 0 || n == 0) throw ConfigError("series", "mode numbers start at 1");
  const Nodes nodes = composite_gauss(checked_quad_points(quad_points));
  const auto w = weighted_samples(f, u, k, nodes, m, n);
  const std::size_t q = nodes.x.size();
  std::vector<double> sy(q);
  for (std::size_t b = 0; b < q; ++b) sy[b] = std::sin(static_cast<double>(n) * kPi * nodes.x[b]);
  double sum = 0.0;
  for (std::size_t a = 0; a < q; ++a) {
    const double sx = std::sin(static_cast<double>(m) * kPi * nodes.x[a]);
    double row = 0.0;
    for (std::size_t b = 0; b < q; ++b) row += w[a * q + b] * sy[b];
    sum += sx * row;
  }
  return 4.0 * sum;
}

SeriesSolution build_series(const std::function<double(double, double)>& f, double u, double k,
                            std::size_t m_terms, std::size_t n_terms, std::size_t quad_points,
                            unsigned threads) {
  check_transport(u, k);
  if (m_terms == 0 || n_terms == 0)
    throw ConfigError("series", "truncation orders must be positive");
  if (quad_points == 0) quad_points = default_quad_points(m_terms, n_terms);
  const Nodes nodes = composite_gauss(checked_quad_points(quad_points));
  const std::size_t q = nodes.x.size();
  const auto w = weighted_samples(f, u, k, nodes, m_terms, n_terms);

  std::vector<double> sin_table(std::max(m_terms, n_terms) * q);
  for (std::size_t m = 1; m <= std::max(m_terms, n_terms); ++m)
    for (std::size_t a = 0; a < q; ++a)
      sin_table[(m - 1) * q + a] = std::sin(static_cast<double>(m) * kPi * nodes.x[a]);

  std::vector<double> coeffs(m_terms * n_terms);
  parallel_for(1, m_terms + 1, threads, [&](std::size_t m) {
    // t_b = sum_a sin(m pi x_a) w_ab
    std::vector<double> t(q, 0.0);
    const double* sx = &sin_table[(m - 1) * q];
    for (std::size_t a = 0; a < q; ++a) {
      const double s = sx[a];
      const double* row = &w[a * q];
      for (std::size_t b = 0; b < q; ++b) t[b] += s * row[b];
    }
    for (std::size_t n = 1; n <= n_terms; ++n) {
      const double* sy = &sin_table[(n - 1) * q];
      double sum = 0.0;
      for (std::size_t b = 0; b < q; ++b) sum += t[b] * sy[b];
      coeffs[(m - 1) * n_terms + (n - 1)] = 4.0 * sum;
    }
  });
  return SeriesSolution(u, k, m_terms, n_terms, std::move(coeffs));
}

namespace {

/// A_mn exp(lambda_mn t), in storage layout.
std::vector<double> decayed_coefficients(const SeriesSolution& sol, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("series time must be nonnegative");
  std::vector<double> out(sol.coefficients().size());
  for (std::size_t m = 1; m <= sol.m_terms(); ++m)
    for (std::size_t n = 1; n <= sol.n_terms(); ++n)
      out[(m - 1) * sol.n_terms() + (n - 1)] =
          sol.coefficient(m, n) * std::exp(sol.eigenvalue(m, n) * t);
  return out;
}

double evaluate(const SeriesSolution& sol, const std::vector<double>& decayed, double x,
                double y, std::vector<double>& sx, std::vector<double>& sy) {
  if (x <= 0.0 || x >= 1.0 || y <= 0.0 || y >= 1.0) return 0.0;
  for (std::size_t m = 1; m <= sol.m_terms(); ++m)
    sx[m - 1] = std::sin(static_cast<double>(m) * kPi * x);
  for (std::size_t n = 1; n <= sol.n_terms(); ++n)
    sy[n - 1] = std::sin(static_cast<double>(n) * kPi * y);
  double sum = 0.0;
  for (const auto& [m, n] : sol.summation_order())
    sum += decayed[(m - 1) * sol.n_terms() + (n - 1)] * sx[m - 1] * sy[n - 1];
  const double value = std::exp(sol.u() * (x + y) / (2.0 * sol.k())) * sum;
  if (!std::isfinite(value)) throw NumericError("series evaluation is not finite");
  return value;
}

}  // namespace

double eval_series(const SeriesSolution& sol, double t, double x, double y) {
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0))
    throw InputError("series evaluation point must lie in the unit square");
  const auto decayed = decayed_coefficients(sol, t);
  std::vector<double> sx(sol.m_terms()), sy(sol.n_terms());
  return evaluate(sol, decayed, x, y, sx, sy);
}

Field sample_series(const SeriesSolution& sol, const Grid2D& grid, double t, unsigned threads) {
  if (std::abs(grid.lx() - 1.0) > 1e-12 || std::abs(grid.ly() - 1.0) > 1e-12)
    throw ConfigError("grid", "the analytic solution is defined on the unit square only");
  const auto decayed = decayed_coefficients(sol, t);
  Field field(grid, 1);
  parallel_for(1, grid.ny() - 1, threads, [&](std::size_t j) {
    std::vector<double> sx(sol.m_terms()), sy(sol.n_terms());
    const double y = static_cast<double>(j) * grid.dy();
    for (std::size_t i = 1; i + 1 < grid.nx(); ++i) {
      const double x = static_cast<double>(i) * grid.dx();
      field.at(0, i, j) = evaluate(sol, decayed, x, y, sx, sy);
    }
  });
  return field;
}

}  // namespace adrlab
