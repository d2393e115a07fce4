// Log-gamma and sphere/ball measure constants.
#pragma once

namespace kcell {

// Lanczos approximation (g = 7, 9 coefficients), relative error below 1e-13 for x > 0.
double log_gamma(double x);
double gamma_fn(double x);

// Largest relative error of gamma over recurrence and reflection identities on a
// fixed probe grid; used as a startup self-check.
double gamma_self_check();

double sphere_area(int d); // omega_d = H^{d-1}(S^{d-1}), e.g. 2*pi for d=2
double ball_volume(int d); // kappa_d = lambda_d(B^d)

} // namespace kcell
