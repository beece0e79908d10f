#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "adrlab/grid.hpp"

namespace adrlab {

/// Truncated double sine series solving
///   c_t = k (c_xx + c_yy) - u (c_x + c_y)  on [0,1]^2,  c = 0 on the boundary:
///   c(t,x,y) = sum_{m,n} A_mn exp(lambda_mn t) exp(u (x+y) / 2k) sin(m pi x) sin(n pi y)
/// with lambda_mn = -k (m^2 + n^2) pi^2 - u^2 / 2k.
class SeriesSolution {
 public:
  /// `coefficients` is row-major in m: entry (m-1)*N + (n-1).
  SeriesSolution(double u, double k, std::size_t m_terms, std::size_t n_terms,
                 std::vector<double> coefficients);

  double u() const noexcept { return u_; }
  double k() const noexcept { return k_; }
  std::size_t m_terms() const noexcept { return m_; }
  std::size_t n_terms() const noexcept { return n_; }
  const std::vector<double>& coefficients() const noexcept { return a_; }
  double coefficient(std::size_t m, std::size_t n) const { return a_[(m - 1) * n_ + (n - 1)]; }
  double eigenvalue(std::size_t m, std::size_t n) const;

  /// (m, n) pairs in summation order: increasing m^2 + n^2, ties by m.
  const std::vector<std::pair<std::size_t, std::size_t>>& summation_order() const noexcept {
    return order_;
  }

 private:
  double u_;
  double k_;
  std::size_t m_;
  std::size_t n_;
  std::vector<double> a_;
  std::vector<std::pair<std::size_t, std::size_t>> order_;
};

double series_eigenvalue(double u, double k, std::size_t m, std::size_t n);

/// Default quadrature resolution: 8 nodes per half-wavelength of the
/// highest retained mode.
std::size_t default_quad_points(std::size_t m_terms, std::size_t n_terms);

/// A_mn = 4 * int_0^1 int_0^1 f e^{-u x/2k} e^{-u y/2k} sin(m pi x) sin(n pi y) dx dy,
/// evaluated by tensor-product composite 8-point Gauss-Legendre with
/// `quad_points` nodes per axis (rounded up to a multiple of 8, at least 16).
double fourier_coefficient(const std::function<double(double, double)>& f, double u, double k,
                           std::size_t m, std::size_t n, std::size_t quad_points);

/// All coefficients up to (m_terms, n_terms). quad_points = 0 selects
/// default_quad_points.
SeriesSolution build_series(const std::function<double(double, double)>& f, double u, double k,
                            std::size_t m_terms = 40, std::size_t n_terms = 40,
                            std::size_t quad_points = 0, unsigned threads = 1);

/// Value of the truncated series; exactly 0 on the boundary of the unit square.
double eval_series(const SeriesSolution& sol, double t, double x, double y);

/// eval_series at every node of a unit-square grid (boundary exactly 0).
/// Throws ConfigError for any other extent.
Field sample_series(const SeriesSolution& sol, const Grid2D& grid, double t,
                    unsigned threads = 1);

}  // namespace adrlab
