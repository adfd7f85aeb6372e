#pragma once

#include <iosfwd>
#include <vector>

#include "patchtooth/common.hpp"

namespace patchtooth {

enum class CouplingScheme { Spectral, Lagrangian };

struct CouplingSpec {
  CouplingScheme scheme = CouplingScheme::Spectral;
  int order = 0;  // P, neighbours each side; Lagrangian only

  static CouplingSpec spectral() { return {CouplingScheme::Spectral, 0}; }
  static CouplingSpec lagrangian(int order) { return {CouplingScheme::Lagrangian, order}; }
};

/// Circulant interpolation rows from next-to-edge to edge values:
///   u^I_{n+1} = sum_J right[(J - I) mod N] u^J_1
///   u^I_0     = sum_J left [(J - I) mod N] u^J_n
/// Both rows are independent of the diffusivities and satisfy
/// left[m] == right[-m mod N], which is what keeps the coupled operator
/// symmetric.
struct InterpolationWeights {
  int patches = 0;
  std::vector<double> right;
  std::vector<double> left;

  double right_at(long offset) const { return right[static_cast<std::size_t>(wrap(offset, patches))]; }
  double left_at(long offset) const { return left[static_cast<std::size_t>(wrap(offset, patches))]; }
};

/// Global trigonometric interpolation over the N centred wavenumbers.
/// For even N the unpaired Nyquist shift factor e^{i pi r} is replaced by
/// cos(pi r) so the weights stay real and mirror symmetric.
InterpolationWeights spectral_weights(int patches, double ratio);

/// Fractional shift E^{+-r} expanded in central differences up to delta^{2P},
/// i.e. degree-2P interpolation over the 2P+1 patches nearest each patch.
InterpolationWeights lagrangian_weights(int patches, double ratio, int order);

InterpolationWeights make_weights(const CouplingSpec& coupling, int patches, double ratio);

struct EdgeValues {
  Vector left;   // u_0 for every patch
  Vector right;  // u_{n+1} for every patch
};

/// Edge values from left-next-to-edge (u_1) and right-next-to-edge (u_n) values.
EdgeValues apply_edges_1d(const InterpolationWeights& weights, const Vector& first, const Vector& last);

/// CSV with header "offset,w_right,w_left", one row per offset 0..N-1.
void write_weights_csv(std::ostream& out, const InterpolationWeights& weights);

}  // namespace patchtooth
