#include "oppmdp/oracle/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace oppmdp {

std::vector<std::vector<StateIndex>> strongly_connected_components(const std::vector<double>& p,
                                                                   std::size_t n) {
  // Tarjan, recursive; n is tiny here.
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<StateIndex> stack;
  std::vector<std::vector<StateIndex>> out;
  int counter = 0;
  std::function<void(StateIndex)> visit = [&](StateIndex v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (StateIndex w = 0; w < n; ++w) {
      if (!(p[v * n + w] > 0.0)) continue;
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<StateIndex> comp;
      StateIndex w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
  };
  for (StateIndex v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

bool is_closed(const std::vector<double>& p, std::size_t n, const std::vector<StateIndex>& cls) {
  std::vector<bool> member(n, false);
  for (StateIndex i : cls) member[i] = true;
  for (StateIndex i : cls)
    for (StateIndex j = 0; j < n; ++j)
      if (!member[j] && p[i * n + j] > 0.0) return false;
  return true;
}

std::vector<double> stationary_on_class(const std::vector<double>& p, std::size_t n,
                                        const std::vector<StateIndex>& cls) {
  const auto m = static_cast<Eigen::Index>(cls.size());
  // Rows: balance equations pi_j - sum_i pi_i p_ij = 0, last replaced by sum pi = 1.
  Eigen::MatrixXd a(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) {
      const double pij = p[cls[c] * n + cls[r]];
      a(r, c) = (r == c ? 1.0 : 0.0) - pij;
    }
  }
  a.row(m - 1).setOnes();
  rhs(m - 1) = 1.0;
  const Eigen::VectorXd sol = a.colPivHouseholderQr().solve(rhs);
  std::vector<double> pi(n, 0.0);
  for (Eigen::Index r = 0; r < m; ++r) pi[cls[r]] = sol(r);
  return pi;
}

OracleResult solve_unconstrained(const FiniteInstance& inst, const OracleOptions& options) {
  if (inst.num_constraints() != 0)
    throw ConfigError("oracle: instances with cost constraints (k >= 1) are not supported");
  const std::size_t n = inst.num_states();
  const std::size_t nw = inst.support_size();
  const auto q = inst.w_probabilities();

  // Mixed-radix counter over (i, w) menu choices.
  std::vector<std::size_t> radix(n * nw);
  std::uint64_t total = 1;
  for (StateIndex i = 0; i < n; ++i) {
    for (std::size_t w = 0; w < nw; ++w) {
      radix[i * nw + w] = inst.menu(i, w).size();
      if (total > options.max_policies / radix[i * nw + w])
        throw InstanceTooLarge("oracle: more than " + std::to_string(options.max_policies) +
                               " deterministic policies");
      total *= radix[i * nw + w];
    }
  }

  OracleResult best;
  best.c0_star = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> digit(n * nw, 0);
  std::vector<double> p(n * n);
  std::vector<double> cbar(n);
  for (std::uint64_t count = 0; count < total; ++count) {
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(cbar.begin(), cbar.end(), 0.0);
    for (StateIndex i = 0; i < n; ++i) {
      for (std::size_t w = 0; w < nw; ++w) {
        const FiniteAction& act = inst.menu(i, w)[digit[i * nw + w]];
        cbar[i] += q[w] * act.costs[0];
        for (StateIndex j = 0; j < n; ++j) p[i * n + j] += q[w] * act.next[j];
      }
    }
    for (const auto& cls : strongly_connected_components(p, n)) {
      if (!is_closed(p, n, cls)) continue;
      const auto pi = stationary_on_class(p, n, cls);
      double value = 0.0;
      for (StateIndex i : cls) value += pi[i] * cbar[i];
      if (value < best.c0_star - 1e-12) {
        best.c0_star = value;
        best.recurrent_class = cls;
        best.stationary = pi;
        best.policy.assign(n, std::vector<ActionId>(nw));
        for (StateIndex i = 0; i < n; ++i)
          for (std::size_t w = 0; w < nw; ++w)
            best.policy[i][w] = static_cast<ActionId>(digit[i * nw + w]);
      }
    }
    for (std::size_t d = 0; d < digit.size(); ++d) {
      if (++digit[d] < radix[d]) break;
      digit[d] = 0;
    }
  }
  best.policies_examined = total;
  if (!std::isfinite(best.c0_star)) throw std::logic_error("oracle: no closed class found");
  return best;
}

nlohmann::json OracleResult::to_json() const {
  return {{"c0_star", c0_star},
          {"policy", policy},
          {"recurrent_class", recurrent_class},
          {"stationary", stationary},
          {"policies_examined", policies_examined}};
}

double cost_bound_rhs(double c0_star, double v, double alpha, std::uint64_t horizon, std::size_t n,
                      std::size_t k, double c_max) {
  const double t = static_cast<double>(horizon);
  const double b = 1.5 * (static_cast<double>(n) + static_cast<double>(k) * c_max * c_max);
  return b * (1.0 + 1.0 / t) / v + v * c_max * c_max * (1.0 + 1.0 / t) / (2.0 * alpha) +
         (c0_star + c_max) / t + alpha * std::log(static_cast<double>(n)) / (v * t);
}

double check_cost_bound(double mean_virtual_cost, const OracleResult& oracle, double v,
                        double alpha, std::uint64_t horizon, std::size_t n, std::size_t k,
                        double c_max) {
  return cost_bound_rhs(oracle.c0_star, v, alpha, horizon, n, k, c_max) -
         (mean_virtual_cost - oracle.c0_star);
}

}  // namespace oppmdp
