#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pvm/field.hpp"

namespace pvm {

/// Composite trapezoid weights on n uniform nodes with spacing h.
std::vector<double> trapezoid_weights(int n, double h);

/// Trapezoid integral of a sampled profile over [0, l_z].
double trapezoid(std::span<const double> values, double h);

/// z derivative of a single profile. order 1 or 2; second-order centred
/// stencils inside, one-sided second-order stencils at both ends.
void dz_profile(std::span<const double> in, std::span<double> out, double h, int order);

/// z derivative of every mode profile.
SpectralField3 d_z(const SpectralField3& f, int order);

/// Derivative of arbitrary order built from the 1st/2nd order stencils.
void dz_profile_n(std::span<const double> in, std::span<double> out, double h, int order);

double l2_norm(const SpectralField3& f);
double l2_norm(const Field2& f);

/// Discrete H^s norm with the unweighted derivative-sum convention:
///   ||f||_{H^s}^2 = sum_{|alpha| <= s} ||D^alpha f||_{L^2}^2.
/// Lateral derivatives are exact on the sine basis (factor (k pi / a)^alpha per
/// direction), z derivatives use finite differences, and the z integral uses
/// the trapezoid rule. Throws DomainError for s above grid.max_order().
double sobolev_norm(const SpectralField3& f, int s);
double sobolev_norm(const Field2& f, int s);

/// L^2(Omega_x) norm of one value per mode, e.g. a trace on Gamma.
double lateral_l2(const Grid& grid, std::span<const double> per_mode);

/// Applies fn to the collocated values of each input at every (node, z)
/// point and projects the result back onto the sine modes. `nodes` sets the
/// lateral collocation grid.
SpectralField3 collocate(std::span<const SpectralField3* const> inputs, int nodes,
                         const std::function<double(std::span<const double>)>& fn);

/// u * v with 3/2 lateral padding.
SpectralField3 pointwise_product(const SpectralField3& u, const SpectralField3& v);

/// ||u v||_{H^s} / (||u||_{H^s} ||v||_{H^s}); rejects zero-norm inputs.
double product_ratio(const SpectralField3& u, const SpectralField3& v, int s);

/// Min over the interpolating collocation nodes (N = k_max) and z points.
double collocated_min(const SpectralField3& f);

}  // namespace pvm
