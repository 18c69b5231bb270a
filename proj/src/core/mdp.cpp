#include "core/mdp.hpp"

#include <algorithm>
#include <map>

#include "core/error.hpp"

namespace stodi {

const TransitionDistribution& MdpDynamics::transition(int state, int action) const {
  if (state < 1 || state > state_count()) throw_invalid("state " + std::to_string(state) + " out of range");
  if (action < 1 || action > action_count(state))
    throw_invalid("action " + std::to_string(action) + " out of range at state " + std::to_string(state));
  std::uint64_t key = (static_cast<std::uint64_t>(state) << 32) | static_cast<std::uint32_t>(action);
  std::lock_guard<std::mutex> lock(memo_mutex_);
  auto it = memo_.find(key);
  if (it == memo_.end()) {
    auto dist = std::make_unique<TransitionDistribution>(compute_transition(state, action));
    it = memo_.emplace(key, std::move(dist)).first;
  }
  return *it->second;
}

MdpModel attach_reward(MdpModel m, RewardFn r) {
  m.reward = std::move(r);
  return m;
}

std::uint64_t local_action_count(const StochasticDigraph& sd, NodeId i) {
  std::uint64_t count = 1;
  for (int w = 1; w <= sd.h(); ++w) {
    std::size_t options = sd.H(i, w).size();
    if (options == 0)
      throw_precondition("node " + std::to_string(i) + " has no successors in edge set " + std::to_string(w) +
                         "; apply sink augmentation first");
    if (count > (std::uint64_t{1} << 31) / options)
      throw_capacity("action space at node " + std::to_string(i) + " exceeds 2^31 tuples");
    count *= options;
  }
  return count;
}

std::vector<NodeId> local_action_tuple(const StochasticDigraph& sd, NodeId i, int action) {
  std::uint64_t count = local_action_count(sd, i);
  if (action < 1 || static_cast<std::uint64_t>(action) > count)
    throw_invalid("action " + std::to_string(action) + " out of range at node " + std::to_string(i));
  // Mixed-radix decode, last edge set fastest.
  std::vector<NodeId> tuple(static_cast<std::size_t>(sd.h()));
  std::uint64_t rest = static_cast<std::uint64_t>(action) - 1;
  for (int w = sd.h(); w >= 1; --w) {
    const auto& options = sd.H(i, w);
    tuple[static_cast<std::size_t>(w - 1)] = options[rest % options.size()];
    rest /= options.size();
  }
  return tuple;
}

LocalActionSpace local_actions(const StochasticDigraph& sd, NodeId i) {
  if (i < 1 || i > sd.n()) throw_invalid("node " + std::to_string(i) + " out of range");
  std::uint64_t count = local_action_count(sd, i);
  LocalActionSpace out;
  out.node = i;
  out.tuples.reserve(count);
  for (std::uint64_t a = 1; a <= count; ++a)
    out.tuples.push_back(local_action_tuple(sd, i, static_cast<int>(a)));
  return out;
}

namespace {

class LocalMdpDynamics final : public MdpDynamics {
public:
  explicit LocalMdpDynamics(StochasticDigraph sd) : sd_(std::move(sd)) {}
  int state_count() const override { return sd_.n(); }
  int action_count(int state) const override { return static_cast<int>(local_action_count(sd_, state)); }

protected:
  TransitionDistribution compute_transition(int state, int action) const override {
    std::vector<NodeId> tuple = local_action_tuple(sd_, state, action);
    std::map<NodeId, double> agg;
    for (int w = 1; w <= sd_.h(); ++w) {
      double p = sd_.mu(w);
      if (p > 0.0) agg[tuple[static_cast<std::size_t>(w - 1)]] += p;
    }
    TransitionDistribution dist;
    dist.reserve(agg.size());
    for (const auto& [j, p] : agg) dist.push_back({j, p});
    return dist;
  }

private:
  StochasticDigraph sd_;
};

class PsetMdpDynamics final : public MdpDynamics {
public:
  PsetMdpDynamics(TransitionMatrixSet pset, int n) : pset_(std::move(pset)), n_(n) {
    if (pset_.matrices.empty()) throw_invalid("matrix set is empty");
    for (const auto& m : pset_.matrices)
      if (m.rows != static_cast<std::size_t>(n) || m.cols != static_cast<std::size_t>(n))
        throw_invalid("matrix dimensions do not match state count");
  }
  int state_count() const override { return n_; }
  int action_count(int) const override { return static_cast<int>(pset_.matrices.size()); }

protected:
  TransitionDistribution compute_transition(int state, int action) const override {
    const Matrix& P = pset_.matrices[static_cast<std::size_t>(action - 1)];
    TransitionDistribution dist;
    for (int j = 1; j <= n_; ++j) {
      double p = P.at(static_cast<std::size_t>(state - 1), static_cast<std::size_t>(j - 1));
      if (p > 0.0) dist.push_back({j, p});
    }
    return dist;
  }

private:
  TransitionMatrixSet pset_;
  int n_;
};

class DedupDynamics final : public MdpDynamics {
public:
  DedupDynamics(std::shared_ptr<const MdpDynamics> base, std::vector<std::vector<int>> keep)
      : base_(std::move(base)), keep_(std::move(keep)) {}
  int state_count() const override { return base_->state_count(); }
  int action_count(int state) const override {
    return static_cast<int>(keep_[static_cast<std::size_t>(state - 1)].size());
  }

protected:
  TransitionDistribution compute_transition(int state, int action) const override {
    return base_->transition(state, keep_[static_cast<std::size_t>(state - 1)][static_cast<std::size_t>(action - 1)]);
  }

private:
  std::shared_ptr<const MdpDynamics> base_;
  std::vector<std::vector<int>> keep_;  // per state: surviving original action ids
};

}  // namespace

MdpModel local_mdp(const StochasticDigraph& sd) {
  if (!sd.standing_assumption_holds())
    throw_precondition(
        "graph has stranded nodes under positive-probability topologies; apply sink augmentation first");
  return MdpModel{std::make_shared<LocalMdpDynamics>(sd), nullptr};
}

MdpModel global_mdp_from_pset(const TransitionMatrixSet& pset, int n) {
  return MdpModel{std::make_shared<PsetMdpDynamics>(pset, n), nullptr};
}

MdpModel dedup_actions_by_distribution(const MdpModel& m) {
  std::vector<std::vector<int>> keep(static_cast<std::size_t>(m.state_count()));
  for (int i = 1; i <= m.state_count(); ++i) {
    std::vector<TransitionDistribution> seen;
    for (int a = 1; a <= m.action_count(i); ++a) {
      const auto& dist = m.transition(i, a);
      bool duplicate = false;
      for (const auto& s : seen) {
        if (s.size() != dist.size()) continue;
        bool equal = true;
        for (std::size_t t = 0; t < s.size(); ++t)
          if (s[t].next != dist[t].next || s[t].prob != dist[t].prob) {
            equal = false;
            break;
          }
        if (equal) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) {
        seen.push_back(dist);
        keep[static_cast<std::size_t>(i - 1)].push_back(a);
      }
    }
  }
  return MdpModel{std::make_shared<DedupDynamics>(m.dynamics, std::move(keep)), m.reward};
}

}  // namespace stodi
