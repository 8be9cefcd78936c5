#pragma once

namespace xbf {

struct BesselParams {
  double index;
  double start;
};

// Transition density p^{(mu)}(t, x, y) of the Bessel process R^{(mu)}.
double transition_density(const BesselParams &p, double t, double y);
double log_transition_density(const BesselParams &p, double t, double y);

// \int_0^\infty e^{-alpha t} p^{(mu)}(t, x, y) dt.
double green_function(const BesselParams &p, double alpha, double y);

// (I_{|mu|} / I_0)(x y / t).
double hw_conditional_char(double x, double y, double t, double mu);

} // namespace xbf
