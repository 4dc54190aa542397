#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ousg/rng.hpp"

namespace ousg {

using Vec = std::vector<double>;

// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Vec data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// Sigmoid outputs are clamped into [kProbEps, 1 - kProbEps] before any logarithm.
inline constexpr double kProbEps = 1e-7;

struct DenseLayer {
  Matrix w;  // out x in
  Vec b;     // out

  DenseLayer() = default;
  DenseLayer(std::size_t out, std::size_t in) : w(out, in), b(out, 0.0) {}
  std::size_t in_size() const { return w.cols; }
  std::size_t out_size() const { return w.rows; }
};

// Gate weights for scalar-per-step input: each matrix is hidden x (1 + hidden),
// column 0 multiplies the step input, the rest multiply the previous hidden state.
// Gate order throughout: input, forget, output, candidate.
struct LstmLayer {
  Matrix wi, wf, wo, wg;
  Vec bi, bf, bo, bg;

  LstmLayer() = default;
  explicit LstmLayer(std::size_t hidden)
      : wi(hidden, 1 + hidden), wf(hidden, 1 + hidden),
        wo(hidden, 1 + hidden), wg(hidden, 1 + hidden),
        bi(hidden, 0.0), bf(hidden, 0.0), bo(hidden, 0.0), bg(hidden, 0.0) {}
  std::size_t hidden() const { return bi.size(); }
};

// Predicts one scalar from a conditioning vector consumed by the LSTM as a
// sequence of scalars (sequence length == input_size), final hidden state
// through fc1 (ReLU) then fc2 (linear, scalar output).
struct GeneratorNet {
  std::size_t input_size = 0;
  LstmLayer lstm;
  DenseLayer fc1, fc2;
  std::uint64_t version = 0;  // bumped on every weight update; tapes check it
};

// Scalar in, probability out: fc1 -> ReLU -> fc2 -> ReLU -> fc3 -> sigmoid.
struct DiscriminatorNet {
  DenseLayer fc1, fc2, fc3;
  std::uint64_t version = 0;
};

// ---- forward tapes ----------------------------------------------------------

struct LstmStep {
  double x = 0.0;
  Vec h_prev, c_prev;
  Vec i, f, o, g;  // post-activation gate values
  Vec c, tanh_c;
};

struct GeneratorTape {
  Vec input;
  std::vector<LstmStep> steps;
  Vec h_final;
  Vec fc1_pre, fc1_out;
  double out = 0.0;
  std::uint64_t version = 0;
  bool consumed = false;
};

struct DiscriminatorTape {
  double input = 0.0;
  Vec a1, h1;  // fc1 pre-activation / post-ReLU
  Vec a2, h2;
  double logit = 0.0;
  double prob = 0.0;  // clamped
  std::uint64_t version = 0;
  bool consumed = false;
};

// ---- gradients --------------------------------------------------------------

// Layer structs double as gradient storage (same shapes).
struct GeneratorGrads {
  LstmLayer lstm;
  DenseLayer fc1, fc2;
  Vec d_input;  // d out / d s, one entry per conditioning element
};

struct DiscriminatorGrads {
  DenseLayer fc1, fc2, fc3;
  double d_input = 0.0;
};

// ---- construction -----------------------------------------------------------

// Weights and biases uniform in +-sqrt(1/fan_in); LSTM forget bias set to +1.
GeneratorNet make_generator(std::size_t input_size, std::size_t lstm_hidden,
                            std::size_t fc_hidden, Rng& rng);
DiscriminatorNet make_discriminator(std::size_t h1, std::size_t h2, Rng& rng);

// Zero-initialized variants (persistence, gradient buffers).
GeneratorNet make_generator_zeros(std::size_t input_size, std::size_t lstm_hidden,
                                  std::size_t fc_hidden);
DiscriminatorNet make_discriminator_zeros(std::size_t h1, std::size_t h2);
GeneratorGrads make_grads(const GeneratorNet& net);
DiscriminatorGrads make_grads(const DiscriminatorNet& net);

// ---- forward / backward -----------------------------------------------------

// Scalar prediction; fills *tape when given. Throws ShapeError when
// s.size() != net.input_size. Does not mutate the net.
double generator_forward(const GeneratorNet& net, std::span<const double> s,
                         GeneratorTape* tape = nullptr);

// Probability in (0, 1); fills *tape when given.
double discriminator_forward(const DiscriminatorNet& net, double v,
                             DiscriminatorTape* tape = nullptr);

// Gradients of (upstream * output) w.r.t. every parameter and the input.
// A tape may be consumed once and only against the weights that produced it;
// violations throw UsageError.
GeneratorGrads generator_backward(const GeneratorNet& net, GeneratorTape& tape,
                                  double upstream);
DiscriminatorGrads discriminator_backward(const DiscriminatorNet& net,
                                          DiscriminatorTape& tape, double upstream);

// ---- parameter enumeration --------------------------------------------------

// Tensors in declaration order; the one canonical ordering used by the
// optimizer, persistence, and the gradient checks.
struct TensorView {
  const char* name;
  std::size_t rows, cols;
  const Vec* data;
};
struct TensorViewMut {
  const char* name;
  std::size_t rows, cols;
  Vec* data;
};

std::vector<TensorView> tensor_views(const GeneratorNet& net);
std::vector<TensorViewMut> tensor_views(GeneratorNet& net);
std::vector<TensorView> tensor_views(const GeneratorGrads& g);
std::vector<TensorView> tensor_views(const DiscriminatorNet& net);
std::vector<TensorViewMut> tensor_views(DiscriminatorNet& net);
std::vector<TensorView> tensor_views(const DiscriminatorGrads& g);

std::size_t param_count(const GeneratorNet& net);
std::size_t param_count(const DiscriminatorNet& net);

// Pointers to every parameter in declaration order (test and tooling path).
std::vector<double*> param_ptrs(GeneratorNet& net);
std::vector<double*> param_ptrs(DiscriminatorNet& net);

// Gradients flattened in the same order.
Vec flat_grads(const GeneratorGrads& g);
Vec flat_grads(const DiscriminatorGrads& g);

}  // namespace ousg
