#pragma once

namespace kmr {

// Complete elliptic integral of the first kind, parameter convention
// K(m) = int_0^{pi/2} du / sqrt(1 - m sin^2 u), m in [0,1).
double elliptic_K(double m);

// cot(theta/2) for theta in (0, pi/2); always > 1.
double lambda_of_theta(double theta);

// pi / (sin(theta) * K(sin^2 theta)); normalizes the height differential so
// its integral around the unit-circle cycle is 2*pi*i.
double mu_of_theta(double theta);

// -4 mu int_1^lambda dt / sqrt((t^2 - lambda^-2)(lambda^2 - t^2)); the
// vertical period of the cycle around the two upper branch points. Always
// negative. The integrand has an inverse-square-root singularity at
// t = lambda, handled by the double-exponential scheme.
double f1_of_theta(double theta);

}  // namespace kmr
