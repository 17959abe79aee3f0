#pragma once

#include "sublap/green.hpp"

namespace sublap {

/// Independent fixed-point oracle: damped Newton on
/// F(u) = u - G[u^q dmu] - G[nu] - H_f over the interior nodes, using
/// the dense Green matrix. Requires u_init > 0 wherever mu has mass.
/// Converges to ||F||_inf <= 1e-12 max(1, ||u||_inf); throws
/// numerical_error on Jacobian or line-search failure.
GridFunction newton_oracle(const GreenOperator& G, const GridMeasure& mu, const GridMeasure& nu,
                           const BoundaryData& f, double q, const GridFunction& u_init);

}  // namespace sublap
