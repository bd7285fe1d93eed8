#include "pvm/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pvm/errors.hpp"
#include "pvm/transforms.hpp"

namespace pvm {

std::vector<double> trapezoid_weights(int n, double h) {
  std::vector<double> w(static_cast<std::size_t>(n), h);
  if (n > 0) {
    w.front() = 0.5 * h;
    w.back() = 0.5 * h;
  }
  return w;
}

double trapezoid(std::span<const double> values, double h) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double acc = 0.5 * (values.front() + values.back());
  for (std::size_t j = 1; j + 1 < n; ++j) acc += values[j];
  return acc * h;
}

void dz_profile(std::span<const double> in, std::span<double> out, double h, int order) {
  const std::size_t n = in.size();
  if (n < 4) throw DomainError("d_z: need at least 4 z points");
  if (out.size() != n) throw DomainError("d_z: output size mismatch");
  if (order == 1) {
    const double c = 1.0 / (2.0 * h);
    out[0] = c * (-3.0 * in[0] + 4.0 * in[1] - in[2]);
    for (std::size_t j = 1; j + 1 < n; ++j) out[j] = c * (in[j + 1] - in[j - 1]);
    out[n - 1] = c * (3.0 * in[n - 1] - 4.0 * in[n - 2] + in[n - 3]);
  } else if (order == 2) {
    const double c = 1.0 / (h * h);
    out[0] = c * (2.0 * in[0] - 5.0 * in[1] + 4.0 * in[2] - in[3]);
    for (std::size_t j = 1; j + 1 < n; ++j) out[j] = c * (in[j - 1] - 2.0 * in[j] + in[j + 1]);
    out[n - 1] = c * (2.0 * in[n - 1] - 5.0 * in[n - 2] + 4.0 * in[n - 3] - in[n - 4]);
  } else {
    throw DomainError("d_z: order must be 1 or 2");
  }
}

void dz_profile_n(std::span<const double> in, std::span<double> out, double h, int order) {
  if (order < 0) throw DomainError("d_z: negative order");
  std::vector<double> cur(in.begin(), in.end());
  std::vector<double> next(in.size());
  int remaining = order;
  while (remaining > 0) {
    const int step = remaining >= 2 ? 2 : 1;
    dz_profile(cur, next, h, step);
    cur.swap(next);
    remaining -= step;
  }
  std::copy(cur.begin(), cur.end(), out.begin());
}

SpectralField3 d_z(const SpectralField3& f, int order) {
  const Grid& g = f.grid();
  SpectralField3 out(g);
  for (std::size_t m = 0; m < g.mode_count(); ++m) dz_profile(f.profile(m), out.profile(m), g.dz(), order);
  return out;
}

double l2_norm(const SpectralField3& f) { return sobolev_norm(f, 0); }

double l2_norm(const Field2& f) { return lateral_l2(f.grid(), f.data()); }

double lateral_l2(const Grid& grid, std::span<const double> per_mode) {
  double acc = 0.0;
  for (double c : per_mode) acc += c * c;
  return 0.5 * grid.a() * std::sqrt(acc);
}

namespace {

// sum_{a1 + a2 <= r} l1^{2 a1} l2^{2 a2}
double lateral_weight(double l1sq, double l2sq, int r) {
  double total = 0.0;
  double p1 = 1.0;
  for (int a1 = 0; a1 <= r; ++a1) {
    double p2 = 1.0;
    for (int a2 = 0; a1 + a2 <= r; ++a2) {
      total += p1 * p2;
      p2 *= l2sq;
    }
    p1 *= l1sq;
  }
  return total;
}

}  // namespace

double sobolev_norm(const SpectralField3& f, int s) {
  const Grid& g = f.grid();
  if (s < 0) throw DomainError("sobolev_norm: negative order");
  if (s > g.max_order())
    throw DomainError("sobolev_norm: order " + std::to_string(s) + " exceeds max order " +
                      std::to_string(g.max_order()));
  const auto n = static_cast<std::size_t>(g.n_z());
  std::vector<double> deriv(n);
  std::vector<double> sq(n);
  double total = 0.0;
  for (std::size_t m = 0; m < g.mode_count(); ++m) {
    const Mode k = g.mode(m);
    const double l1sq = g.wavenumber(k.k1) * g.wavenumber(k.k1);
    const double l2sq = g.wavenumber(k.k2) * g.wavenumber(k.k2);
    for (int a3 = 0; a3 <= s; ++a3) {
      dz_profile_n(f.profile(m), deriv, g.dz(), a3);
      for (std::size_t j = 0; j < n; ++j) sq[j] = deriv[j] * deriv[j];
      total += lateral_weight(l1sq, l2sq, s - a3) * trapezoid(sq, g.dz());
    }
  }
  return 0.5 * g.a() * std::sqrt(total);
}

double sobolev_norm(const Field2& f, int s) {
  const Grid& g = f.grid();
  if (s < 0) throw DomainError("sobolev_norm: negative order");
  double total = 0.0;
  for (std::size_t m = 0; m < g.mode_count(); ++m) {
    const Mode k = g.mode(m);
    const double w = lateral_weight(g.wavenumber(k.k1) * g.wavenumber(k.k1),
                                    g.wavenumber(k.k2) * g.wavenumber(k.k2), s);
    total += w * f[m] * f[m];
  }
  return 0.5 * g.a() * std::sqrt(total);
}

SpectralField3 collocate(std::span<const SpectralField3* const> inputs, int nodes,
                         const std::function<double(std::span<const double>)>& fn) {
  if (inputs.empty()) throw DomainError("collocate: no inputs");
  const Grid& g = inputs.front()->grid();
  for (const SpectralField3* in : inputs) require_same_grid(g, in->grid(), "collocate");
  const LateralCollocation colloc(g.k_max(), nodes);
  const std::size_t modes = g.mode_count();
  const auto n_nodes = static_cast<std::size_t>(nodes) * static_cast<std::size_t>(nodes);
  const auto nz = static_cast<std::size_t>(g.n_z());
  const std::size_t count = inputs.size();

  SpectralField3 out(g);
  std::vector<double> coeffs(modes);
  std::vector<std::vector<double>> values(count, std::vector<double>(n_nodes));
  std::vector<double> result(n_nodes);
  std::vector<double> args(count);
  for (std::size_t j = 0; j < nz; ++j) {
    for (std::size_t i = 0; i < count; ++i) {
      const auto data = inputs[i]->data();
      for (std::size_t m = 0; m < modes; ++m) coeffs[m] = data[m * nz + j];
      colloc.evaluate(coeffs, values[i]);
    }
    for (std::size_t p = 0; p < n_nodes; ++p) {
      for (std::size_t i = 0; i < count; ++i) args[i] = values[i][p];
      result[p] = fn(args);
    }
    colloc.project(result, coeffs);
    auto data = out.data();
    for (std::size_t m = 0; m < modes; ++m) data[m * nz + j] = coeffs[m];
  }
  return out;
}

SpectralField3 pointwise_product(const SpectralField3& u, const SpectralField3& v) {
  const SpectralField3* inputs[] = {&u, &v};
  return collocate(inputs, padded_nodes(u.grid().k_max()),
                   [](std::span<const double> x) { return x[0] * x[1]; });
}

double product_ratio(const SpectralField3& u, const SpectralField3& v, int s) {
  require_same_grid(u.grid(), v.grid(), "product_ratio");
  const double nu = sobolev_norm(u, s);
  const double nv = sobolev_norm(v, s);
  if (!(nu > 0) || !(nv > 0)) throw DomainError("product_ratio: zero-norm input");
  return sobolev_norm(pointwise_product(u, v), s) / (nu * nv);
}

double collocated_min(const SpectralField3& f) {
  const Grid& g = f.grid();
  const LateralCollocation colloc(g.k_max(), g.k_max());
  const std::size_t modes = g.mode_count();
  const auto nz = static_cast<std::size_t>(g.n_z());
  std::vector<double> coeffs(modes);
  std::vector<double> values(modes);
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < nz; ++j) {
    for (std::size_t m = 0; m < modes; ++m) coeffs[m] = f.data()[m * nz + j];
    colloc.evaluate(coeffs, values);
    for (double x : values) lowest = std::min(lowest, x);
  }
  return lowest;
}

}  // namespace pvm
