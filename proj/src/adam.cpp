#include "ousg/adam.hpp"

#include <cmath>
#include <string>

#include "ousg/errors.hpp"

namespace ousg {

AdamState make_adam(std::size_t n_params, double lr) {
  AdamState st;
  st.lr = lr;
  st.m.assign(n_params, 0.0);
  st.v.assign(n_params, 0.0);
  return st;
}

namespace {

struct BiasCorrection {
  double c1, c2;
};

BiasCorrection begin_step(AdamState& st) {
  ++st.step;
  const double t = static_cast<double>(st.step);
  return {1.0 / (1.0 - std::pow(st.beta1, t)), 1.0 / (1.0 - std::pow(st.beta2, t))};
}

// Moments on dead-gradient coordinates decay geometrically forever; once they
// reach the subnormal range every later update runs on the FPU's microcode
// slow path. Flushing them to zero keeps the arithmetic on normal values.
constexpr double kMomentFloor = 1e-280;

inline void update_one(AdamState& st, const BiasCorrection& bc, std::size_t k,
                       double& p, double grad) {
  double m = st.beta1 * st.m[k] + (1.0 - st.beta1) * grad;
  double v = st.beta2 * st.v[k] + (1.0 - st.beta2) * grad * grad;
  if (std::abs(m) < kMomentFloor) m = 0.0;
  if (v < kMomentFloor) v = 0.0;
  st.m[k] = m;
  st.v[k] = v;
  const double mhat = m * bc.c1;
  const double vhat = v * bc.c2;
  p -= st.lr * mhat / (std::sqrt(vhat) + st.eps);
}

template <class NetT, class GradT>
void apply_views(AdamState& st, NetT& net, const GradT& g) {
  auto nv = tensor_views(net);
  auto gv = tensor_views(g);
  std::size_t total = 0;
  for (const auto& view : nv) total += view.data->size();
  if (st.m.size() != total)
    throw ShapeError("optimizer state holds " + std::to_string(st.m.size()) +
                     " moments for a net with " + std::to_string(total) + " parameters");
  const BiasCorrection bc = begin_step(st);
  std::size_t k = 0;
  for (std::size_t a = 0; a < nv.size(); ++a) {
    Vec& p = *nv[a].data;
    const Vec& q = *gv[a].data;
    if (p.size() != q.size())
      throw ShapeError(std::string("gradient shape mismatch for ") + nv[a].name);
    for (std::size_t i = 0; i < p.size(); ++i, ++k) update_one(st, bc, k, p[i], q[i]);
  }
  ++net.version;
}

}  // namespace

void adam_apply(AdamState& st, GeneratorNet& net, const GeneratorGrads& g) {
  apply_views(st, net, g);
}

void adam_apply(AdamState& st, DiscriminatorNet& net, const DiscriminatorGrads& g) {
  apply_views(st, net, g);
}

void adam_apply_flat(AdamState& st, const std::vector<double*>& params, const Vec& grads) {
  if (params.size() != grads.size() || st.m.size() != params.size())
    throw ShapeError("adam_apply_flat: parameter, gradient and moment sizes disagree");
  const BiasCorrection bc = begin_step(st);
  for (std::size_t k = 0; k < params.size(); ++k)
    update_one(st, bc, k, *params[k], grads[k]);
}

}  // namespace ousg
