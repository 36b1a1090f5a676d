#pragma once

#include <complex>

namespace phsq::detail {

/// Exponential-integrator functions phi_k(z) = sum_j z^j / (j+k)!, k = 1..3,
/// i.e. phi_1 = (e^z - 1)/z, phi_2 = (e^z - 1 - z)/z^2, phi_3 = (e^z - 1 - z - z^2/2)/z^3.
/// Finite at z = 0; used for closed-form time integrals of damped rotations.
struct PhiValues {
  std::complex<double> phi1, phi2, phi3;
};

inline PhiValues phi_functions(std::complex<double> z) {
  PhiValues v;
  if (std::abs(z) < 2.0) {
    // Series for phi_3, then climb with phi_{k} = 1/k! + z phi_{k+1}.
    std::complex<double> term = 1.0 / 6.0, sum = term;
    for (int j = 1; j < 40; ++j) {
      term *= z / double(j + 3);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    v.phi3 = sum;
    v.phi2 = 0.5 + z * v.phi3;
    v.phi1 = 1.0 + z * v.phi2;
  } else {
    v.phi1 = (std::exp(z) - 1.0) / z;
    v.phi2 = (v.phi1 - 1.0) / z;
    v.phi3 = (v.phi2 - 0.5) / z;
  }
  return v;
}

}  // namespace phsq::detail
