#pragma once

#include "pom/estimators/alite.hpp"
#include "pom/estimators/est.hpp"
#include "pom/estimators/flite.hpp"
#include "pom/estimators/fvapor.hpp"
#include "pom/estimators/grid.hpp"
#include "pom/estimators/objectives.hpp"
#include "pom/estimators/tsmc.hpp"

namespace pom {

// Dispatch for the independence-based estimators (tsmc needs a full belief
// and an RNG, so it keeps its own entry point).
inline PomEstimate estimate(Method m, const IndependentGaussianBelief& b,
                            const ConvergenceConfig& cfg) {
  switch (m) {
    case Method::flite: return estimate_flite(b, cfg);
    case Method::alite: return estimate_alite(b, cfg);
    case Method::fvapor: return estimate_fvapor(b, cfg);
    case Method::est: return estimate_est(b, cfg);
    case Method::indep: return estimate_independence(b, cfg);
    case Method::tsmc:
      throw PomError(PomErrc::invalid_config,
                     "tsmc needs a full covariance belief and a seed");
  }
  throw PomError(PomErrc::invalid_config, "unknown method");
}

}  // namespace pom
