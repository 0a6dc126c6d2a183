#include "oppmdp/core/finite_instance.hpp"

#include <cmath>
#include <fstream>

#include "oppmdp/core/simplex.hpp"

namespace oppmdp {

FiniteInstance::FiniteInstance(std::size_t n, std::size_t k, double c_max,
                               std::vector<double> w_probabilities,
                               std::vector<std::vector<std::vector<FiniteAction>>> menus,
                               StateIndex initial_state)
    : n_(n),
      k_(k),
      c_max_(c_max),
      w_probabilities_(std::move(w_probabilities)),
      menus_(std::move(menus)),
      initial_state_(initial_state) {
  if (n_ == 0) throw ConfigError("instance: n must be positive");
  if (!(c_max_ > 0.0) || !std::isfinite(c_max_)) throw ConfigError("instance: c_max must be positive");
  if (w_probabilities_.empty()) throw ConfigError("instance: empty side-information support");
  double total = 0.0;
  for (double q : w_probabilities_) {
    if (!(q >= 0.0)) throw ConfigError("instance: negative side-information probability");
    total += q;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("instance: w_probabilities must sum to 1");
  if (menus_.size() != n_) throw ConfigError("instance: menus must have one entry per state");
  if (initial_state_ >= n_) throw ConfigError("instance: initial_state out of range");

  sparse_.resize(n_);
  for (StateIndex i = 0; i < n_; ++i) {
    const std::string where = "instance: state " + std::to_string(i);
    if (menus_[i].size() != w_probabilities_.size())
      throw ConfigError(where + " needs one menu per side-information value");
    sparse_[i].resize(menus_[i].size());
    for (std::size_t w = 0; w < menus_[i].size(); ++w) {
      if (menus_[i][w].empty()) throw ConfigError(where + " has an empty menu");
      for (const FiniteAction& act : menus_[i][w]) {
        if (act.costs.size() != k_ + 1) throw ConfigError(where + ": costs must have k+1 entries");
        for (double c : act.costs)
          if (!(std::abs(c) <= c_max_)) throw ConfigError(where + ": cost exceeds c_max");
        if (act.next.size() != n_) throw ConfigError(where + ": next must have n entries");
        double row_total = 0.0;
        std::vector<Transition> row;
        for (StateIndex j = 0; j < n_; ++j) {
          const double p = act.next[j];
          if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(where + ": probability outside [0,1]");
          row_total += p;
          if (p > 0.0) row.push_back({j, p});
        }
        if (std::abs(row_total - 1.0) > 1e-12)
          throw ConfigError(where + ": transition row does not sum to 1");
        sparse_[i][w].push_back(std::move(row));
      }
    }
  }
}

void FiniteInstance::actions(StateIndex i, SideInfo w, std::vector<ActionId>& out) const {
  const std::size_t count = menus_[i][w].size();
  out.resize(count);
  for (std::size_t a = 0; a < count; ++a) out[a] = static_cast<ActionId>(a);
}

void FiniteInstance::transitions(StateIndex i, SideInfo w, ActionId a,
                                 std::vector<Transition>& out) const {
  const auto& row = sparse_[i][w][a];
  out.assign(row.begin(), row.end());
}

FiniteInstance::SideInfo FiniteInstance::sample_side_info(RandomStream& rng) const {
  if (w_probabilities_.size() == 1) return 0;
  return sample_state(w_probabilities_, rng.uniform());
}

FiniteInstance FiniteInstance::from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    const auto k = j.value("k", std::size_t{0});
    const auto c_max = j.at("c_max").get<double>();
    auto q = j.at("w_probabilities").get<std::vector<double>>();
    std::vector<std::vector<std::vector<FiniteAction>>> menus;
    for (const auto& state : j.at("menus")) {
      auto& per_w = menus.emplace_back();
      for (const auto& menu : state) {
        auto& acts = per_w.emplace_back();
        for (const auto& a : menu) {
          acts.push_back({a.value("label", std::string{}), a.at("costs").get<std::vector<double>>(),
                          a.at("next").get<std::vector<double>>()});
        }
      }
    }
    return FiniteInstance(n, k, c_max, std::move(q), std::move(menus),
                          j.value("initial_state", StateIndex{0}));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("instance: ") + e.what());
  }
}

FiniteInstance FiniteInstance::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open instance file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("instance " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json FiniteInstance::to_json() const {
  nlohmann::json menus = nlohmann::json::array();
  for (const auto& state : menus_) {
    nlohmann::json per_w = nlohmann::json::array();
    for (const auto& menu : state) {
      nlohmann::json acts = nlohmann::json::array();
      for (const auto& a : menu)
        acts.push_back({{"label", a.label}, {"costs", a.costs}, {"next", a.next}});
      per_w.push_back(std::move(acts));
    }
    menus.push_back(std::move(per_w));
  }
  return {{"n", n_},
          {"k", k_},
          {"c_max", c_max_},
          {"initial_state", initial_state_},
          {"w_probabilities", w_probabilities_},
          {"menus", std::move(menus)}};
}

}  // namespace oppmdp
