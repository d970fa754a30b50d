#ifndef MNARCOR_NORMAL_HPP
#define MNARCOR_NORMAL_HPP

namespace mnarcor {

// Standard normal density.
double norm_pdf(double x);

// Standard normal cumulative distribution function.
double norm_cdf(double x);

// Standard normal quantile (Wichura's AS241 algorithm, double precision).
// p must lie strictly inside (0, 1).
double norm_quantile(double p);

// Inverse Mills ratio lambda(u) = phi(u) / Phi(-u).
//
// Direct evaluation breaks down for large positive u where both phi(u)
// and Phi(-u) underflow; there the Laplace continued fraction for the
// Mills ratio is used instead. Relative accuracy is ~1e-13 or better
// over |u| <= 40. Throws on NaN input.
double inverse_mills(double u);

}  // namespace mnarcor

#endif
