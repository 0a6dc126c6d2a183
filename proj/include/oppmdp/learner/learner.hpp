#pragma once

// Layered drift-plus-penalty learner.
//
// Each slot the learner picks a belief pi(t) over basic states from
// information strictly before W(t) (Layer 1), then observes W(t) and picks a
// contingency action for every basic state (Layer 2). The global balance and
// cost constraints are enforced on this virtual system by the queues Q and Z.
// The actual system runs alongside: it applies the contingency action of the
// state it is really in, optionally overridden by the redirect escort.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oppmdp/core/model.hpp"
#include "oppmdp/core/rng.hpp"
#include "oppmdp/core/simplex.hpp"
#include "oppmdp/core/types.hpp"
#include "oppmdp/kernels/kernels.hpp"

namespace oppmdp {

/// Trap detection for the actual system.
struct RedirectConfig {
  double gamma = 1.0 / 1000.0;
  double theta_high = 0.1;
  double theta_low = 1e-5;

  void validate() const;
};

struct LearnerConfig {
  double v = 5.0;
  double alpha = 1000.0;
  std::uint64_t horizon = 1'000'000;
  std::optional<RedirectConfig> redirect;

  void validate() const;
};

struct VirtualQueues {
  VirtualQueues() = default;
  VirtualQueues(std::size_t n, std::size_t k) : q(n, 0.0), z(k, 0.0) {}

  /// ||(Q; Z)||_2
  double norm() const;

  std::vector<double> q;
  std::vector<double> z;
};

struct RedirectState {
  std::vector<double> actual_ema;
  std::vector<double> virtual_ema;
  bool active = false;
  std::uint64_t activations = 0;
};

/// M_i = V G0_i + (Y Q)_i + (G Z)_i over the cached previous-slot matrices.
void layer1_scores(const SlotMatrices& previous, const VirtualQueues& queues, double v,
                   std::span<double> out);

/// Closed-form minimizer of pi^T M + alpha D(pi; prev) over the simplex.
BeliefVector layer1_update(const BeliefVector& prev, const SlotMatrices& previous,
                           const VirtualQueues& queues, double v, double alpha);

/// Q_j += pi^T Y(t-1) y_j and Z_l = max(Z_l + pi^T G(t-1) g_l, 0).
/// `increment` receives pi^T Y(t-1) and must have size n.
void update_queues(VirtualQueues& queues, std::span<const double> pi, const SlotMatrices& previous,
                   std::span<double> increment);

/// V c_{i,0}(w,a) + sum_l Z_l c_{i,l}(w,a) - sum_j Q_j p_{i,j}(w,a)
template <OpportunisticModel M>
double layer2_score(const M& model, StateIndex i, const typename M::SideInfo& w, ActionId a,
                    const VirtualQueues& queues, double v, std::vector<Transition>& row) {
  double score = v * model.cost(i, 0, w, a);
  for (std::size_t l = 0; l < queues.z.size(); ++l) {
    if (queues.z[l] != 0.0) score += queues.z[l] * model.cost(i, l + 1, w, a);
  }
  model.transitions(i, w, a, row);
  for (const Transition& t : row) score -= queues.q[t.next] * t.probability;
  return score;
}

/// Menu action minimizing the Layer-2 score; ties go to the lowest menu index.
template <OpportunisticModel M>
ActionId layer2_select(const M& model, StateIndex i, const typename M::SideInfo& w,
                       const VirtualQueues& queues, double v, std::vector<ActionId>& menu,
                       std::vector<Transition>& row) {
  model.actions(i, w, menu);
  if (menu.empty()) throw ModelError("empty action menu at state " + std::to_string(i));
  ActionId best = menu.front();
  double best_score = layer2_score(model, i, w, best, queues, v, row);
  for (std::size_t m = 1; m < menu.size(); ++m) {
    const double s = layer2_score(model, i, w, menu[m], queues, v, row);
    if (s < best_score) {
      best_score = s;
      best = menu[m];
    }
  }
  return best;
}

template <class SideInfo>
struct SlotRecord {
  std::uint64_t t = 0;
  SideInfo w{};
  double u_draw = 0.0;
  double v_draw = 0.0;
  std::vector<ActionId> actions;

  // Virtual system, current-slot matrices weighted by pi(t).
  double virtual_objective = 0.0;
  std::vector<double> virtual_constraints;
  std::vector<double> balance;  // pi(t)^T Y(t)
  double belief_shift = 0.0;    // ||pi(t) - pi(t-1)||_1

  // Actual system.
  StateIndex actual_state = 0;
  ActionId actual_action = 0;
  double actual_objective = 0.0;
  std::vector<double> actual_constraints;
  StateIndex next_state = 0;
  bool redirected = false;
};

enum class SlotPhase {
  idle,          // between slots
  belief_ready,  // pi(t) fixed, W(t) not yet drawn
  observed,      // W(t) drawn
};

template <OpportunisticModel M>
class Learner {
 public:
  using SideInfo = typename M::SideInfo;

  Learner(const M& model, LearnerConfig config, StateIndex initial_state)
      : model_(&model),
        config_(std::move(config)),
        n_(model.num_states()),
        k_(model.num_constraints()),
        belief_(BeliefVector::uniform(n_)),
        previous_belief_(n_, 1.0 / static_cast<double>(n_)),
        queues_(n_, k_),
        cached_(SlotMatrices::initial(n_, k_, model.cost_bound())),
        current_(n_, k_),
        actual_state_(initial_state),
        scores_(n_, 0.0),
        increment_(n_, 0.0),
        indicator_(n_, 0.0) {
    config_.validate();
    if (initial_state >= n_) throw ConfigError("initial state out of range");
    if (config_.redirect) {
      if constexpr (!EscortingModel<M>) {
        throw ConfigError("redirect mode needs a model with an escort policy");
      }
      redirect_.actual_ema.assign(n_, 0.0);
      redirect_.virtual_ema.assign(n_, 0.0);
    }
    record_.actions.assign(n_, 0);
    record_.virtual_constraints.assign(k_, 0.0);
    record_.actual_constraints.assign(k_, 0.0);
    record_.balance.assign(n_, 0.0);
  }

  /// Runs one slot and returns its record (valid until the next call).
  const SlotRecord<SideInfo>& step(RngStreams& rng) {
    try {
      run_slot(rng);
    } catch (const NumericError& e) {
      phase_ = SlotPhase::idle;
      if (e.slot() >= 0) throw;
      throw NumericError(e.what(), static_cast<std::int64_t>(t_));
    }
    return record_;
  }

  const M& model() const noexcept { return *model_; }
  const LearnerConfig& config() const noexcept { return config_; }
  std::uint64_t slot() const noexcept { return t_; }
  SlotPhase phase() const noexcept { return phase_; }
  const BeliefVector& belief() const noexcept { return belief_; }
  const VirtualQueues& queues() const noexcept { return queues_; }
  const SlotMatrices& cached_matrices() const noexcept { return cached_; }
  StateIndex actual_state() const noexcept { return actual_state_; }
  const RedirectState& redirect_state() const noexcept { return redirect_; }
  const SlotRecord<SideInfo>& last_record() const noexcept { return record_; }

  struct Lookahead {
    BeliefVector belief;   // pi(t) for the next slot t
    VirtualQueues queues;  // Q(t+1), Z(t+1)
    double shift = 0.0;    // ||pi(t) - pi(t-1)||_1
  };

  /// The next slot's Layer-1 decision and queue update without drawing W.
  Lookahead peek_next() const {
    Lookahead out{belief_, queues_, 0.0};
    std::vector<double> scores(n_), increment(n_);
    layer1_scores(cached_, queues_, config_.v, scores);
    out.belief.reweight(scores, config_.alpha);
    update_queues(out.queues, out.belief.probabilities(), cached_, increment);
    out.shift = kernels::l1_distance(out.belief.probabilities(), belief_.probabilities());
    return out;
  }

 private:
  void run_slot(RngStreams& rng) {
    const double v = config_.v;

    // Layer 1: only slot t-1 information.
    std::copy(belief_.probabilities().begin(), belief_.probabilities().end(),
              previous_belief_.begin());
    layer1_scores(cached_, queues_, v, scores_);
    belief_.reweight(scores_, config_.alpha);
    phase_ = SlotPhase::belief_ready;
    const std::span<const double> pi = belief_.probabilities();

    record_.t = t_;
    record_.w = model_->sample_side_info(rng.w);
    record_.u_draw = rng.u.uniform();
    phase_ = SlotPhase::observed;

    // Layer 2 with Q(t), Z(t).
    for (StateIndex i = 0; i < n_; ++i)
      record_.actions[i] = layer2_select(*model_, i, record_.w, queues_, v, menu_, row_);

    build_slot_matrices(*model_, record_.w, std::span<const ActionId>(record_.actions), row_,
                        current_);

    update_queues(queues_, pi, cached_, increment_);

    record_.virtual_objective = kernels::dot(pi, current_.g0);
    for (std::size_t l = 0; l < k_; ++l) {
      double s = 0.0;
      for (StateIndex i = 0; i < n_; ++i) s += pi[i] * current_.g[i * k_ + l];
      record_.virtual_constraints[l] = s;
    }
    kernels::vecmat(pi, current_.y, n_, n_, record_.balance);
    record_.belief_shift = kernels::l1_distance(pi, previous_belief_);

    run_actual(rng, pi);

    std::swap(cached_, current_);
    ++t_;
    phase_ = SlotPhase::idle;
  }

  void run_actual(RngStreams& rng, std::span<const double> pi) {
    const StateIndex s = actual_state_;
    ActionId action = record_.actions[s];
    bool redirected = false;
    if constexpr (EscortingModel<M>) {
      if (config_.redirect) {
        const RedirectConfig& rc = *config_.redirect;
        if (redirect_.active && s == model_->home_state()) redirect_.active = false;
        if (!redirect_.active && s != model_->home_state() &&
            redirect_.actual_ema[s] > rc.theta_high && redirect_.virtual_ema[s] < rc.theta_low) {
          redirect_.active = true;
          ++redirect_.activations;
        }
        if (redirect_.active) {
          action = model_->escort_action(s);
          redirected = true;
        }
      }
    }

    record_.actual_state = s;
    record_.actual_action = action;
    record_.redirected = redirected;
    record_.actual_objective = model_->cost(s, 0, record_.w, action);
    for (std::size_t l = 0; l < k_; ++l)
      record_.actual_constraints[l] = model_->cost(s, l + 1, record_.w, action);
    model_->transitions(s, record_.w, action, row_);
    record_.v_draw = rng.v.uniform();
    record_.next_state = sample_state(std::span<const Transition>(row_), record_.v_draw);

    if (config_.redirect) {
      const double g = config_.redirect->gamma;
      indicator_[s] = 1.0;
      kernels::ema(g, indicator_, redirect_.actual_ema);
      indicator_[s] = 0.0;
      kernels::ema(g, pi, redirect_.virtual_ema);
    }
    actual_state_ = record_.next_state;
  }

  const M* model_;
  LearnerConfig config_;
  std::size_t n_;
  std::size_t k_;

  BeliefVector belief_;
  std::vector<double> previous_belief_;
  VirtualQueues queues_;
  SlotMatrices cached_;
  SlotMatrices current_;
  std::uint64_t t_ = 0;
  SlotPhase phase_ = SlotPhase::idle;

  StateIndex actual_state_;
  RedirectState redirect_;

  SlotRecord<SideInfo> record_;
  std::vector<double> scores_;
  std::vector<double> increment_;
  std::vector<double> indicator_;
  std::vector<ActionId> menu_;
  std::vector<Transition> row_;
};

}  // namespace oppmdp
