#pragma once

#include "entanglab/ising.hpp"
#include "entanglab/states.hpp"

namespace entanglab {

/// Classical Gibbs weights p(sigma) ∝ exp(sum_bonds J s s + h sum s) over
/// +-1 spins, plus an optional additive phase theta(sigma) =
/// sum_bonds Jhat s s built from a second kernel. The square-root state
/// sqrt(p) e^{i theta} is stoquastic when phase_couplings is empty.
struct GibbsSpec {
  Window window;
  std::vector<Coupling> couplings;
  double field = 0.0;
  std::vector<Coupling> phase_couplings;
};

ProbabilityTable gibbs_measure(const GibbsSpec& spec);

/// theta table over full-window configurations, wrapped into (-pi, pi].
Eigen::VectorXd gibbs_phase(const GibbsSpec& spec);

PureState gibbs_sqrt_state(const GibbsSpec& spec);

}  // namespace entanglab
