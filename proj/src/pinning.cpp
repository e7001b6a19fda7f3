#include "h22/pinning.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "h22/error.hpp"

namespace h22 {

Pinning::Pinning(std::vector<double> pi, double epsilon) : pi_(std::move(pi)), epsilon_(epsilon) {
  if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_))
    throw PinningError("pinning strength epsilon must be positive and finite");
  bool any = false;
  for (double v : pi_) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw PinningError("pinning profile entries must be finite and nonnegative");
    any = any || v > 0.0;
  }
  if (!any) throw PinningError("pinning profile must be positive at some vertex");
}

Pinning Pinning::at_vertex(std::size_t n, Vertex x, double weight, double epsilon) {
  if (x >= n) throw PinningError("pinned vertex out of range");
  std::vector<double> pi(n, 0.0);
  pi[x] = weight;
  return Pinning(std::move(pi), epsilon);
}

Pinning Pinning::uniform(std::size_t n, double value, double epsilon) {
  return Pinning(std::vector<double>(n, value), epsilon);
}

double Pinning::eps_sum() const noexcept {
  return std::accumulate(pi_.begin(), pi_.end(), 0.0) * epsilon_;
}

AugmentedGraph::AugmentedGraph(Graph base, Pinning pinning)
    : base_(std::move(base)), pinning_(std::move(pinning)) {
  if (pinning_.size() != base_.vertex_count())
    throw PinningError("pinning profile has " + std::to_string(pinning_.size()) +
                       " entries for a graph with " + std::to_string(base_.vertex_count()) +
                       " vertices");
  edges_ = base_.edges();
  for (Vertex i = 0; i < base_.vertex_count(); ++i) {
    double e = pinning_.eps(i);
    if (e > 0.0) edges_.push_back({i, kRho, e});
  }
}

AugmentedGraph augment(const Graph& g, const Pinning& p) { return AugmentedGraph(g, p); }

}  // namespace h22
