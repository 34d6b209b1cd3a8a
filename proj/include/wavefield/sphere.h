// include/wavefield/sphere.h

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

#pragma once

#include <vector>

#include "wavefield/geometry.h"

namespace wavefield {

// Modal truncation order for the rigid-sphere series at a given ka.
int n_terms_for_ka(double ka);

// Coefficients c_n = (2n+1) i^n [ j_n - (j_n'/h_n') h_n ](ka) of the total
// surface pressure on a rigid sphere, with h_n the spherical Hankel function
// of the second kind (outgoing under the e^{+j w t} time convention that
// pairs with the e^{-j k.r} spatial factor). The bracket is evaluated in
// Wronskian form -i / ((ka)^2 h_n'(ka)), which enforces the Neumann boundary
// condition exactly term by term. Coefficients depend only on ka, so one set
// serves every angle at a fixed frequency.
//
// Throws ConvergenceFailure when the trailing coefficients have not decayed
// below 1e-10 (the last TWO are checked because P_n(0) = 0 for odd n lets a
// single final term vanish spuriously), InvalidArgument for bad ka/n_terms.
std::vector<std::complex<double>> sphere_modal_coefficients(double ka,
                                                            int n_terms);

// Legendre-weighted sum of modal coefficients at cos(gamma), gamma being the
// angle between the observation point and the arrival direction.
ComplexPressure sphere_modal_sum(
    const std::vector<std::complex<double>> &coeffs, double cos_gamma);

// Total (incident + scattered) surface pressure for a unit plane wave.
// ka below 1e-12 returns exactly 1 (scattering vanishes with the sphere).
ComplexPressure sphere_surface_pressure(double ka, double cos_gamma,
                                        int n_terms);

}  // namespace wavefield
