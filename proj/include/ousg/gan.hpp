#pragma once

#include <cstddef>
#include <span>

#include "ousg/adam.hpp"
#include "ousg/nn.hpp"
#include "ousg/rng.hpp"

namespace ousg {

struct NetSizes {
  std::size_t lstm_hidden = 32;
  std::size_t gen_fc = 32;
  std::size_t disc_h1 = 64;
  std::size_t disc_h2 = 64;
};

// One level of the hierarchy: the level index equals the generator's input
// size (level i conditions on i values). Frozen levels reject updates.
struct GanLevel {
  std::size_t index = 0;
  GeneratorNet gen;
  DiscriminatorNet disc;
  AdamState gen_opt, disc_opt;
  bool frozen = false;
};

GanLevel make_gan_level(std::size_t index, const NetSizes& sizes, double lr, Rng& rng);

// Prediction x̂(t+index) from the conditioning vector; pure.
double predict(const GanLevel& level, std::span<const double> s);

// -(log p_real + log(1 - p_fake)); inputs are clamped before the logarithms.
double discriminator_loss(double p_real, double p_fake);

// log(1 - p_fake) + (pred - target)^2.
double generator_loss(double p_fake, double pred, double target);

struct StepReport {
  double disc_loss = 0.0;
  double gen_loss = 0.0;
  double sq_err = 0.0;
  double prediction = 0.0;
};

// One discriminator update on (x_real, detached prediction), then one
// generator update on the generator loss evaluated through the updated
// discriminator. Throws UsageError on a frozen level.
StepReport train_step(GanLevel& level, std::span<const double> s, double x_real);

// Discriminator-only update; returns the discriminator loss.
double discriminator_step(GanLevel& level, double x_real, double x_fake);

}  // namespace ousg
