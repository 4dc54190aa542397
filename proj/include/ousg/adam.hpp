#pragma once

#include <cstddef>

#include "ousg/nn.hpp"

namespace ousg {

// Adam with standard constants; moments are flat buffers over a net's
// parameters in declaration order.
struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  Vec m, v;
};

AdamState make_adam(std::size_t n_params, double lr = 1e-3);

// One update; bumps the net version so outstanding tapes become stale.
// Throws ShapeError when gradient or moment sizes disagree with the net.
void adam_apply(AdamState& st, GeneratorNet& net, const GeneratorGrads& g);
void adam_apply(AdamState& st, DiscriminatorNet& net, const DiscriminatorGrads& g);

// Flat variant used by tests and small experiments.
void adam_apply_flat(AdamState& st, const std::vector<double*>& params, const Vec& grads);

}  // namespace ousg
