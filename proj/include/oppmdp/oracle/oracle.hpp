#pragma once

// Exhaustive solver for the deterministic problem on small finite instances
// without extra constraints (k = 0).
//
// Enumerates every deterministic stationary policy (state, w) -> action,
// averages it over the side-information law into a transition matrix P and
// mean costs, and scores every closed communicating class of P by its
// stationary cost. With finite menus and k = 0 the optimum over the convex
// per-state sets is attained at one of these extreme points.

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "oppmdp/core/finite_instance.hpp"

namespace oppmdp {

struct OracleResult {
  double c0_star = 0.0;
  /// policy[i][w] = menu index chosen in state i under support point w.
  std::vector<std::vector<ActionId>> policy;
  /// The optimal closed class, ascending.
  std::vector<StateIndex> recurrent_class;
  /// Stationary distribution over all n states (zero off the class).
  std::vector<double> stationary;
  std::uint64_t policies_examined = 0;

  nlohmann::json to_json() const;
};

struct OracleOptions {
  std::uint64_t max_policies = 1'000'000;
};

/// Throws InstanceTooLarge beyond the guard and ConfigError when k > 0.
OracleResult solve_unconstrained(const FiniteInstance& instance, const OracleOptions& options = {});

/// Strongly connected components of the support graph of a row-major n x n
/// matrix, each sorted ascending, in order of smallest member.
std::vector<std::vector<StateIndex>> strongly_connected_components(const std::vector<double>& p,
                                                                   std::size_t n);

/// True if no positive-probability edge leaves `cls`.
bool is_closed(const std::vector<double>& p, std::size_t n, const std::vector<StateIndex>& cls);

/// Stationary distribution of P restricted to a closed class (zero
/// elsewhere), from the balance equations with one row replaced by the
/// normalization constraint.
std::vector<double> stationary_on_class(const std::vector<double>& p, std::size_t n,
                                        const std::vector<StateIndex>& cls);

/// Right-hand side of the virtual-cost performance bound:
///   b(1+1/T)/V + V c_max^2 (1+1/T) / (2 alpha) + (c0* + c_max)/T + alpha log(n) / (V T)
/// with b = (3/2)(n + k c_max^2).
double cost_bound_rhs(double c0_star, double v, double alpha, std::uint64_t horizon, std::size_t n,
                      std::size_t k, double c_max);

/// RHS minus the observed gap (mean virtual cost - c0*). Nonnegative when the
/// bound holds.
double check_cost_bound(double mean_virtual_cost, const OracleResult& oracle, double v,
                        double alpha, std::uint64_t horizon, std::size_t n, std::size_t k,
                        double c_max);

}  // namespace oppmdp
