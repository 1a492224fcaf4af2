#pragma once

/// Special functions used by the fading and performance closed forms.
/// Only integer shape parameters are supported; every function throws
/// sagin::NumericalDomainError outside its domain.
namespace sagin::specfun {

/// Principal-value exponential integral Ei(x), x != 0.
double exp_integral_ei(double x);

/// E1(x) = -Ei(-x) for x > 0.
double exp_integral_e1(double x);

/// gamma(a, b) for integer a >= 1, b >= 0.
double lower_incomplete_gamma_int(int a, double b);

/// Gamma(a, b) = (a-1)! e^-b sum_{p<a} b^p / p! for integer a >= 1, b >= 0.
double upper_incomplete_gamma_int(int a, double b);

/// (a-1)!
double factorial(int n);

/// Tricomi confluent hypergeometric function at equal parameters,
/// U(a, a; x) = e^x Gamma(1 - a, x), for integer a >= 1 and x > 0.
double tricomi_u_equal(int a, double x);

/// Kummer 1F1(a; 1; z) by its power series (relative tolerance 1e-14).
double kummer_1f1(int a, double z);

/// Laguerre polynomial L_n(x) from its finite sum.
double laguerre(int n, double x);

/// log of the binomial coefficient C(n, k).
double log_binomial(int n, int k);

double binomial(int n, int k);

}  // namespace sagin::specfun
