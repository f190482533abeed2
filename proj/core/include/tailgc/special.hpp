#pragma once

namespace tailgc {

// Regularized upper incomplete gamma function Q(a, x) = Γ(a, x) / Γ(a) for
// a > 0, x ≥ 0. Series expansion for x < a+1, Lentz continued fraction
// otherwise; converges to relative accuracy well below 1e-10 in double
// precision.
double regularized_gamma_q(double a, double x);

// Upper-tail probability of a chi-squared variable with dof degrees of
// freedom: P(X ≥ stat) = Q(dof/2, stat/2). Negative statistics are treated
// as 0 (probability 1).
double chi_squared_upper_tail(double stat, int dof);

// Upper-tail probability of the standard normal: P(Z ≥ z) = erfc(z/√2)/2.
double normal_upper_tail(double z);

}  // namespace tailgc
