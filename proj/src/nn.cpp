#include "ousg/nn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ousg/errors.hpp"

namespace ousg {

namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double clamp_prob(double p) {
  return std::clamp(p, kProbEps, 1.0 - kProbEps);
}

void fill_uniform(Vec& v, double bound, Rng& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& x : v) x = dist(rng);
}

void init_dense(DenseLayer& l, Rng& rng) {
  const double bound = std::sqrt(1.0 / static_cast<double>(l.in_size()));
  fill_uniform(l.w.data, bound, rng);
  fill_uniform(l.b, bound, rng);
}

// a = W [x; h] + b
void gate_affine(const Matrix& w, const Vec& b, double x, const Vec& h, Vec& out) {
  const std::size_t n = b.size();
  out.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double* row = &w.data[r * w.cols];
    double acc = row[0] * x + b[r];
    for (std::size_t k = 0; k < h.size(); ++k) acc += row[1 + k] * h[k];
    out[r] = acc;
  }
}

// y = W x + b
void dense_affine(const DenseLayer& l, const Vec& x, Vec& y) {
  y.resize(l.out_size());
  for (std::size_t r = 0; r < l.out_size(); ++r) {
    const double* row = &l.w.data[r * l.w.cols];
    double acc = l.b[r];
    for (std::size_t k = 0; k < x.size(); ++k) acc += row[k] * x[k];
    y[r] = acc;
  }
}

// Accumulates dW += dy x^T, db += dy and returns dx = W^T dy.
void dense_backward_into(const DenseLayer& l, const Vec& x, const Vec& dy,
                         DenseLayer& grad, Vec& dx) {
  dx.assign(l.in_size(), 0.0);
  for (std::size_t r = 0; r < l.out_size(); ++r) {
    const double d = dy[r];
    const double* row = &l.w.data[r * l.w.cols];
    double* grow = &grad.w.data[r * grad.w.cols];
    grad.b[r] += d;
    for (std::size_t k = 0; k < l.in_size(); ++k) {
      grow[k] += d * x[k];
      dx[k] += row[k] * d;
    }
  }
}

}  // namespace

GeneratorNet make_generator_zeros(std::size_t input_size, std::size_t lstm_hidden,
                                  std::size_t fc_hidden) {
  GeneratorNet net;
  net.input_size = input_size;
  net.lstm = LstmLayer(lstm_hidden);
  net.fc1 = DenseLayer(fc_hidden, lstm_hidden);
  net.fc2 = DenseLayer(1, fc_hidden);
  return net;
}

GeneratorNet make_generator(std::size_t input_size, std::size_t lstm_hidden,
                            std::size_t fc_hidden, Rng& rng) {
  GeneratorNet net = make_generator_zeros(input_size, lstm_hidden, fc_hidden);
  const double bound = std::sqrt(1.0 / static_cast<double>(1 + lstm_hidden));
  for (Matrix* m : {&net.lstm.wi, &net.lstm.wf, &net.lstm.wo, &net.lstm.wg})
    fill_uniform(m->data, bound, rng);
  for (Vec* b : {&net.lstm.bi, &net.lstm.bf, &net.lstm.bo, &net.lstm.bg})
    fill_uniform(*b, bound, rng);
  std::fill(net.lstm.bf.begin(), net.lstm.bf.end(), 1.0);  // forget-gate stabilizer
  init_dense(net.fc1, rng);
  init_dense(net.fc2, rng);
  return net;
}

DiscriminatorNet make_discriminator_zeros(std::size_t h1, std::size_t h2) {
  DiscriminatorNet net;
  net.fc1 = DenseLayer(h1, 1);
  net.fc2 = DenseLayer(h2, h1);
  net.fc3 = DenseLayer(1, h2);
  return net;
}

DiscriminatorNet make_discriminator(std::size_t h1, std::size_t h2, Rng& rng) {
  DiscriminatorNet net = make_discriminator_zeros(h1, h2);
  init_dense(net.fc1, rng);
  init_dense(net.fc2, rng);
  init_dense(net.fc3, rng);
  return net;
}

GeneratorGrads make_grads(const GeneratorNet& net) {
  GeneratorGrads g;
  g.lstm = LstmLayer(net.lstm.hidden());
  g.fc1 = DenseLayer(net.fc1.out_size(), net.fc1.in_size());
  g.fc2 = DenseLayer(net.fc2.out_size(), net.fc2.in_size());
  g.d_input.assign(net.input_size, 0.0);
  return g;
}

DiscriminatorGrads make_grads(const DiscriminatorNet& net) {
  DiscriminatorGrads g;
  g.fc1 = DenseLayer(net.fc1.out_size(), net.fc1.in_size());
  g.fc2 = DenseLayer(net.fc2.out_size(), net.fc2.in_size());
  g.fc3 = DenseLayer(net.fc3.out_size(), net.fc3.in_size());
  return g;
}

double generator_forward(const GeneratorNet& net, std::span<const double> s,
                         GeneratorTape* tape) {
  if (s.size() != net.input_size)
    throw ShapeError("generator expects " + std::to_string(net.input_size) +
                     " inputs, got " + std::to_string(s.size()));
  const std::size_t hidden = net.lstm.hidden();

  if (tape) {
    tape->input.assign(s.begin(), s.end());
    tape->steps.clear();
    tape->steps.reserve(s.size());
    tape->consumed = false;
    tape->version = net.version;
  }

  // States reset to zero at sequence start.
  Vec h(hidden, 0.0), c(hidden, 0.0);
  Vec ai, af, ao, ag;
  for (double x : s) {
    gate_affine(net.lstm.wi, net.lstm.bi, x, h, ai);
    gate_affine(net.lstm.wf, net.lstm.bf, x, h, af);
    gate_affine(net.lstm.wo, net.lstm.bo, x, h, ao);
    gate_affine(net.lstm.wg, net.lstm.bg, x, h, ag);
    LstmStep st;
    if (tape) {
      st.x = x;
      st.h_prev = h;
      st.c_prev = c;
    }
    for (std::size_t r = 0; r < hidden; ++r) {
      const double gi = sigmoid(ai[r]);
      const double gf = sigmoid(af[r]);
      const double go = sigmoid(ao[r]);
      const double gg = std::tanh(ag[r]);
      const double cr = gf * c[r] + gi * gg;
      const double tc = std::tanh(cr);
      c[r] = cr;
      h[r] = go * tc;
      if (tape) {
        ai[r] = gi;  // reuse buffers to stash post-activation values
        af[r] = gf;
        ao[r] = go;
        ag[r] = gg;
      }
    }
    if (tape) {
      st.i = ai;
      st.f = af;
      st.o = ao;
      st.g = ag;
      st.c = c;
      st.tanh_c.resize(hidden);
      for (std::size_t r = 0; r < hidden; ++r) st.tanh_c[r] = std::tanh(c[r]);
      tape->steps.push_back(std::move(st));
    }
  }

  Vec a1, h1;
  dense_affine(net.fc1, h, a1);
  h1.resize(a1.size());
  for (std::size_t r = 0; r < a1.size(); ++r) h1[r] = a1[r] > 0.0 ? a1[r] : 0.0;
  Vec out;
  dense_affine(net.fc2, h1, out);

  if (tape) {
    tape->h_final = h;
    tape->fc1_pre = a1;
    tape->fc1_out = h1;
    tape->out = out[0];
  }
  return out[0];
}

double discriminator_forward(const DiscriminatorNet& net, double v,
                             DiscriminatorTape* tape) {
  Vec x{v};
  Vec a1, h1, a2, h2, a3;
  dense_affine(net.fc1, x, a1);
  h1.resize(a1.size());
  for (std::size_t r = 0; r < a1.size(); ++r) h1[r] = a1[r] > 0.0 ? a1[r] : 0.0;
  dense_affine(net.fc2, h1, a2);
  h2.resize(a2.size());
  for (std::size_t r = 0; r < a2.size(); ++r) h2[r] = a2[r] > 0.0 ? a2[r] : 0.0;
  dense_affine(net.fc3, h2, a3);
  const double prob = clamp_prob(sigmoid(a3[0]));

  if (tape) {
    tape->input = v;
    tape->a1 = std::move(a1);
    tape->h1 = std::move(h1);
    tape->a2 = std::move(a2);
    tape->h2 = std::move(h2);
    tape->logit = a3[0];
    tape->prob = prob;
    tape->version = net.version;
    tape->consumed = false;
  }
  return prob;
}

GeneratorGrads generator_backward(const GeneratorNet& net, GeneratorTape& tape,
                                  double upstream) {
  if (tape.consumed) throw UsageError("generator tape already consumed");
  if (tape.version != net.version)
    throw UsageError("stale generator tape: weights changed since forward");
  tape.consumed = true;

  const std::size_t hidden = net.lstm.hidden();
  GeneratorGrads g = make_grads(net);

  // fc2 (scalar output), then ReLU, then fc1.
  Vec dout{upstream};
  Vec dh1, da1, dh;
  dense_backward_into(net.fc2, tape.fc1_out, dout, g.fc2, dh1);
  da1.resize(dh1.size());
  for (std::size_t r = 0; r < dh1.size(); ++r)
    da1[r] = tape.fc1_pre[r] > 0.0 ? dh1[r] : 0.0;
  dense_backward_into(net.fc1, tape.h_final, da1, g.fc1, dh);

  // Backprop through time.
  Vec dc(hidden, 0.0);
  Vec dai(hidden), daf(hidden), dao(hidden), dag(hidden), dh_prev(hidden);
  for (std::size_t t = tape.steps.size(); t-- > 0;) {
    const LstmStep& st = tape.steps[t];
    for (std::size_t r = 0; r < hidden; ++r) {
      const double do_r = dh[r] * st.tanh_c[r];
      dao[r] = do_r * st.o[r] * (1.0 - st.o[r]);
      dc[r] += dh[r] * st.o[r] * (1.0 - st.tanh_c[r] * st.tanh_c[r]);
      const double df_r = dc[r] * st.c_prev[r];
      daf[r] = df_r * st.f[r] * (1.0 - st.f[r]);
      const double di_r = dc[r] * st.g[r];
      dai[r] = di_r * st.i[r] * (1.0 - st.i[r]);
      const double dg_r = dc[r] * st.i[r];
      dag[r] = dg_r * (1.0 - st.g[r] * st.g[r]);
    }

    double dx = 0.0;
    std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
    const Matrix* ws[4] = {&net.lstm.wi, &net.lstm.wf, &net.lstm.wo, &net.lstm.wg};
    Matrix* gws[4] = {&g.lstm.wi, &g.lstm.wf, &g.lstm.wo, &g.lstm.wg};
    Vec* gbs[4] = {&g.lstm.bi, &g.lstm.bf, &g.lstm.bo, &g.lstm.bg};
    const Vec* das[4] = {&dai, &daf, &dao, &dag};
    for (int gate = 0; gate < 4; ++gate) {
      const Matrix& w = *ws[gate];
      Matrix& gw = *gws[gate];
      Vec& gb = *gbs[gate];
      const Vec& da = *das[gate];
      for (std::size_t r = 0; r < hidden; ++r) {
        const double d = da[r];
        const double* row = &w.data[r * w.cols];
        double* grow = &gw.data[r * gw.cols];
        gb[r] += d;
        grow[0] += d * st.x;
        dx += row[0] * d;
        for (std::size_t k = 0; k < hidden; ++k) {
          grow[1 + k] += d * st.h_prev[k];
          dh_prev[k] += row[1 + k] * d;
        }
      }
    }
    g.d_input[t] = dx;
    for (std::size_t r = 0; r < hidden; ++r) dc[r] *= st.f[r];
    dh = dh_prev;
  }
  return g;
}

DiscriminatorGrads discriminator_backward(const DiscriminatorNet& net,
                                          DiscriminatorTape& tape, double upstream) {
  if (tape.consumed) throw UsageError("discriminator tape already consumed");
  if (tape.version != net.version)
    throw UsageError("stale discriminator tape: weights changed since forward");
  tape.consumed = true;

  DiscriminatorGrads g = make_grads(net);
  // d prob / d logit with the clamped probability.
  const double dlogit = upstream * tape.prob * (1.0 - tape.prob);

  Vec d3{dlogit};
  Vec dh2, da2, dh1, da1, dx;
  dense_backward_into(net.fc3, tape.h2, d3, g.fc3, dh2);
  da2.resize(dh2.size());
  for (std::size_t r = 0; r < dh2.size(); ++r)
    da2[r] = tape.a2[r] > 0.0 ? dh2[r] : 0.0;
  dense_backward_into(net.fc2, tape.h1, da2, g.fc2, dh1);
  da1.resize(dh1.size());
  for (std::size_t r = 0; r < dh1.size(); ++r)
    da1[r] = tape.a1[r] > 0.0 ? dh1[r] : 0.0;
  Vec x{tape.input};
  dense_backward_into(net.fc1, x, da1, g.fc1, dx);
  g.d_input = dx[0];
  return g;
}

namespace {

template <class NetT, class ViewT>
std::vector<ViewT> generator_views(NetT& net) {
  auto& l = net.lstm;
  const std::size_t h = l.bi.size();
  const std::size_t w = h == 0 ? 0 : 1 + h;
  return {
      {"lstm.wi", h, w, &l.wi.data}, {"lstm.bi", h, 1, &l.bi},
      {"lstm.wf", h, w, &l.wf.data}, {"lstm.bf", h, 1, &l.bf},
      {"lstm.wo", h, w, &l.wo.data}, {"lstm.bo", h, 1, &l.bo},
      {"lstm.wg", h, w, &l.wg.data}, {"lstm.bg", h, 1, &l.bg},
      {"fc1.w", net.fc1.out_size(), net.fc1.in_size(), &net.fc1.w.data},
      {"fc1.b", net.fc1.out_size(), 1, &net.fc1.b},
      {"fc2.w", net.fc2.out_size(), net.fc2.in_size(), &net.fc2.w.data},
      {"fc2.b", net.fc2.out_size(), 1, &net.fc2.b},
  };
}

template <class NetT, class ViewT>
std::vector<ViewT> discriminator_views(NetT& net) {
  return {
      {"fc1.w", net.fc1.out_size(), net.fc1.in_size(), &net.fc1.w.data},
      {"fc1.b", net.fc1.out_size(), 1, &net.fc1.b},
      {"fc2.w", net.fc2.out_size(), net.fc2.in_size(), &net.fc2.w.data},
      {"fc2.b", net.fc2.out_size(), 1, &net.fc2.b},
      {"fc3.w", net.fc3.out_size(), net.fc3.in_size(), &net.fc3.w.data},
      {"fc3.b", net.fc3.out_size(), 1, &net.fc3.b},
  };
}

template <class ViewT>
std::size_t view_param_count(const std::vector<ViewT>& views) {
  std::size_t n = 0;
  for (const auto& v : views) n += v.data->size();
  return n;
}

}  // namespace

std::vector<TensorView> tensor_views(const GeneratorNet& net) {
  return generator_views<const GeneratorNet, TensorView>(net);
}
std::vector<TensorViewMut> tensor_views(GeneratorNet& net) {
  return generator_views<GeneratorNet, TensorViewMut>(net);
}
std::vector<TensorView> tensor_views(const GeneratorGrads& g) {
  return generator_views<const GeneratorGrads, TensorView>(g);
}
std::vector<TensorView> tensor_views(const DiscriminatorNet& net) {
  return discriminator_views<const DiscriminatorNet, TensorView>(net);
}
std::vector<TensorViewMut> tensor_views(DiscriminatorNet& net) {
  return discriminator_views<DiscriminatorNet, TensorViewMut>(net);
}
std::vector<TensorView> tensor_views(const DiscriminatorGrads& g) {
  return discriminator_views<const DiscriminatorGrads, TensorView>(g);
}

std::size_t param_count(const GeneratorNet& net) {
  return view_param_count(tensor_views(net));
}
std::size_t param_count(const DiscriminatorNet& net) {
  return view_param_count(tensor_views(net));
}

namespace {

template <class NetT>
std::vector<double*> collect_ptrs(NetT& net) {
  std::vector<double*> out;
  for (auto& view : tensor_views(net))
    for (double& x : *view.data) out.push_back(&x);
  return out;
}

template <class GradT>
Vec collect_grads(const GradT& g) {
  Vec out;
  for (const auto& view : tensor_views(g))
    out.insert(out.end(), view.data->begin(), view.data->end());
  return out;
}

}  // namespace

std::vector<double*> param_ptrs(GeneratorNet& net) { return collect_ptrs(net); }
std::vector<double*> param_ptrs(DiscriminatorNet& net) { return collect_ptrs(net); }
Vec flat_grads(const GeneratorGrads& g) { return collect_grads(g); }
Vec flat_grads(const DiscriminatorGrads& g) { return collect_grads(g); }

}  // namespace ousg
