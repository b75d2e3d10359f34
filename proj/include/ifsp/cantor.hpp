#pragma once

namespace ifsp {

// The Cantor function (the "Devil's staircase") and its generalized inverse.
//
// cantor_cdf is the CDF of the uniform measure on the middle-third Cantor
// set: scan the ternary digits of x; every digit 0 or 2 contributes a binary
// digit 0 or 1, and the first digit equal to 1 (x fell into a removed gap)
// contributes a terminal binary 1 and stops the scan. cantor_quantile is the
// generalized inverse inf{x : F(x) >= u}: binary digits of u map to ternary
// digits 0/2, with ties at dyadic u resolved toward the left plateau edge so
// that the infimum convention (and with it the Galois inequality
// F^-1(u) <= x  <=>  u <= F(x)) holds.
//
// Both walks run on exact 64-bit fixed-point fractions, never on floating
// point: repeated multiply-by-3 in doubles loses a digit of accuracy per
// level and would corrupt digits beyond ~level 30. Inputs are truncated to
// 64 fractional bits (anything smaller is below the 64-digit scan resolution,
// 3^-64 < 2^-101). The quantile's final conversion to double truncates toward
// zero, so cantor_quantile(cantor_cdf(x)) <= x holds exactly, including at
// attractor points where the real-number identity is an equality.
//
// Out-of-range inputs clamp: cantor_cdf is 0 below [0,1] and 1 above;
// cantor_quantile returns the support endpoints at u=0 and u=1.

double cantor_cdf(double x);
double cantor_quantile(double u);

}  // namespace ifsp
