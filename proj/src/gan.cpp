#include "ousg/gan.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ousg/errors.hpp"

namespace ousg {

namespace {

inline double clamp_prob(double p) { return std::clamp(p, kProbEps, 1.0 - kProbEps); }

void require_unfrozen(const GanLevel& level) {
  if (level.frozen)
    throw UsageError("level " + std::to_string(level.index) + " is frozen");
}

void accumulate(DenseLayer& into, const DenseLayer& from) {
  for (std::size_t k = 0; k < into.w.data.size(); ++k) into.w.data[k] += from.w.data[k];
  for (std::size_t k = 0; k < into.b.size(); ++k) into.b[k] += from.b[k];
}

}  // namespace

GanLevel make_gan_level(std::size_t index, const NetSizes& sizes, double lr, Rng& rng) {
  if (index == 0) throw ConfigError("level index must be >= 1");
  GanLevel level;
  level.index = index;
  level.gen = make_generator(index, sizes.lstm_hidden, sizes.gen_fc, rng);
  level.disc = make_discriminator(sizes.disc_h1, sizes.disc_h2, rng);
  level.gen_opt = make_adam(param_count(level.gen), lr);
  level.disc_opt = make_adam(param_count(level.disc), lr);
  return level;
}

double predict(const GanLevel& level, std::span<const double> s) {
  return generator_forward(level.gen, s);
}

double discriminator_loss(double p_real, double p_fake) {
  return -(std::log(clamp_prob(p_real)) + std::log(1.0 - clamp_prob(p_fake)));
}

double generator_loss(double p_fake, double pred, double target) {
  const double diff = pred - target;
  return std::log(1.0 - clamp_prob(p_fake)) + diff * diff;
}

double discriminator_step(GanLevel& level, double x_real, double x_fake) {
  require_unfrozen(level);
  DiscriminatorTape tape_real, tape_fake;
  const double p_real = discriminator_forward(level.disc, x_real, &tape_real);
  const double p_fake = discriminator_forward(level.disc, x_fake, &tape_fake);
  const double loss = discriminator_loss(p_real, p_fake);

  // dL/dp_real = -1/p_real, dL/dp_fake = 1/(1 - p_fake)
  DiscriminatorGrads grads = discriminator_backward(level.disc, tape_real, -1.0 / p_real);
  const DiscriminatorGrads fake = discriminator_backward(level.disc, tape_fake, 1.0 / (1.0 - p_fake));
  accumulate(grads.fc1, fake.fc1);
  accumulate(grads.fc2, fake.fc2);
  accumulate(grads.fc3, fake.fc3);
  adam_apply(level.disc_opt, level.disc, grads);
  return loss;
}

StepReport train_step(GanLevel& level, std::span<const double> s, double x_real) {
  require_unfrozen(level);

  // The projection; the tape stays valid through the discriminator update
  // because only discriminator weights change.
  GeneratorTape gen_tape;
  const double pred = generator_forward(level.gen, s, &gen_tape);

  StepReport report;
  report.prediction = pred;
  report.disc_loss = discriminator_step(level, x_real, pred);

  // Generator update through the freshly updated discriminator. Gradients
  // flow through the discriminator's input only; its weights are untouched.
  DiscriminatorTape disc_tape;
  const double p_fake = discriminator_forward(level.disc, pred, &disc_tape);
  report.gen_loss = generator_loss(p_fake, pred, x_real);
  const DiscriminatorGrads through =
      discriminator_backward(level.disc, disc_tape, -1.0 / (1.0 - p_fake));
  const double d_pred = through.d_input + 2.0 * (pred - x_real);
  const GeneratorGrads grads = generator_backward(level.gen, gen_tape, d_pred);
  adam_apply(level.gen_opt, level.gen, grads);

  const double diff = pred - x_real;
  report.sq_err = diff * diff;
  return report;
}

}  // namespace ousg
