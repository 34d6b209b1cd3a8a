// src/sphere.cc

// Copyright 2026  The Wavefield Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABILITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "wavefield/sphere.h"

#include <cmath>
#include <mutex>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include "wavefield/error.h"

namespace wavefield {

int n_terms_for_ka(double ka) {
  if (!(ka >= 0.0)) throw InvalidArgument("ka must be >= 0");
  return static_cast<int>(std::ceil(ka + 10.0 * std::cbrt(ka))) + 10;
}

std::vector<std::complex<double>> sphere_modal_coefficients(double ka,
                                                            int n_terms) {
  if (!std::isfinite(ka) || ka <= 0.0)
    throw InvalidArgument("ka must be finite and > 0");
  if (n_terms < 1) throw InvalidArgument("n_terms must be >= 1");

  // GSL's default handler aborts the process; errors are checked by code.
  static std::once_flag gsl_once;
  std::call_once(gsl_once, [] { gsl_set_error_handler_off(); });

  // Radial derivatives need order n-1, and h0' needs order 1.
  int nmax = std::max(n_terms - 1, 1);
  std::vector<double> jl(nmax + 1), yl(nmax + 1);
  if (gsl_sf_bessel_jl_array(nmax, ka, jl.data()) != GSL_SUCCESS ||
      gsl_sf_bessel_yl_array(nmax, ka, yl.data()) != GSL_SUCCESS)
    throw ConvergenceFailure("spherical Bessel evaluation failed");

  auto h2 = [&](int n) { return std::complex<double>(jl[n], -yl[n]); };
  auto h2_deriv = [&](int n) {
    if (n == 0) return -h2(1);
    return h2(n - 1) - (static_cast<double>(n + 1) / ka) * h2(n);
  };

  const std::complex<double> I(0.0, 1.0);
  const double ka2 = ka * ka;
  std::vector<std::complex<double>> coeffs(n_terms);
  std::complex<double> i_pow = 1.0;
  for (int n = 0; n < n_terms; ++n) {
    coeffs[n] = (2.0 * n + 1.0) * i_pow * (-I / (ka2 * h2_deriv(n)));
    i_pow *= I;
  }
  double bound1 = std::abs(coeffs[n_terms - 1]);
  double bound2 = n_terms > 1 ? std::abs(coeffs[n_terms - 2]) : bound1;
  if (std::max(bound1, bound2) >= 1e-10)
    throw ConvergenceFailure("rigid-sphere series not converged at n_terms=" +
                             std::to_string(n_terms));
  return coeffs;
}

ComplexPressure sphere_modal_sum(
    const std::vector<std::complex<double>> &coeffs, double cos_gamma) {
  if (!std::isfinite(cos_gamma) || std::abs(cos_gamma) > 1.0 + 1e-12)
    throw InvalidArgument("cos_gamma must lie in [-1, 1]");
  double x = std::clamp(cos_gamma, -1.0, 1.0);
  std::complex<double> sum = 0.0;
  double p_prev = 0.0, p_cur = 1.0;  // Legendre P_{n-1}, P_n
  for (size_t n = 0; n < coeffs.size(); ++n) {
    if (n == 1) {
      p_prev = p_cur;
      p_cur = x;
    } else if (n > 1) {
      double p_next = ((2.0 * n - 1.0) * x * p_cur -
                       (static_cast<double>(n) - 1.0) * p_prev) /
                      static_cast<double>(n);
      p_prev = p_cur;
      p_cur = p_next;
    }
    sum += coeffs[n] * p_cur;
  }
  return sum;
}

ComplexPressure sphere_surface_pressure(double ka, double cos_gamma,
                                        int n_terms) {
  if (!std::isfinite(ka) || ka < 0.0)
    throw InvalidArgument("ka must be finite and >= 0");
  if (ka <= 1e-12) {
    if (!std::isfinite(cos_gamma) || std::abs(cos_gamma) > 1.0 + 1e-12)
      throw InvalidArgument("cos_gamma must lie in [-1, 1]");
    if (n_terms < 1) throw InvalidArgument("n_terms must be >= 1");
    return {1.0, 0.0};
  }
  return sphere_modal_sum(sphere_modal_coefficients(ka, n_terms), cos_gamma);
}

}  // namespace wavefield
