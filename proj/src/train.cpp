#include "dv/train.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dv/errors.hpp"

namespace dv::nn {

Model Model::create(const GeneratorConfig& g, const DiscriminatorConfig& d,
                    const RefinerConfig& r, uint64_t seed) {
  Rng rng(seed);
  Model m;
  m.gen_cfg = g;
  m.disc_cfg = d;
  m.refiner_cfg = r;
  m.gen = std::make_unique<GeneratorNet>(g, rng);
  m.disc = std::make_unique<DiscriminatorNet>(d, rng);
  m.refiner = std::make_unique<RefinerNet>(r, rng);
  return m;
}

Tensor4 Model::synthesize(const Tensor4& depth) {
  return refiner->refine(gen->forward(depth), depth);
}

std::vector<Param*> Model::generator_side_params() {
  std::vector<Param*> out = gen->params();
  for (Param* p : refiner->params()) out.push_back(p);
  return out;
}

GanTrainer::GanTrainer(Model* model, const AdamConfig& adam, const LossWeights& weights)
    : model_(model),
      weights_(weights),
      opt_g_(model->generator_side_params(), adam),
      opt_d_(model->disc->params(), adam) {}

LossRecord GanTrainer::step(const Tensor4& depth, const Tensor4& target) {
  if (depth.n == 0) throw std::invalid_argument("gan_train_step: empty batch");
  if (target.n != depth.n || target.h != depth.h || target.w != depth.w) {
    throw std::invalid_argument("gan_train_step: target " + target.shape_str() +
                                " does not pair with depth " + depth.shape_str());
  }
  LossRecord rec;

  // Synthesize once; the caches stay live for the generator-side backward.
  const Tensor4 fake = model_->refiner->refine(model_->gen->forward(depth), depth);

  // Discriminator step: real pairs labeled 1, detached fakes labeled 0.
  opt_d_.zero_grad();
  {
    const Tensor4 logits_real = model_->disc->forward(concat_forward(depth, target));
    LossGrad real = bce_with_logits(logits_real, 1.0);
    for (double& g : real.grad.data) g *= 0.5;
    model_->disc->backward(real.grad, /*accumulate_params=*/true, /*want_gx=*/false);

    const Tensor4 logits_fake = model_->disc->forward(concat_forward(depth, fake));
    LossGrad fk = bce_with_logits(logits_fake, 0.0);
    for (double& g : fk.grad.data) g *= 0.5;
    model_->disc->backward(fk.grad, /*accumulate_params=*/true, /*want_gx=*/false);

    rec.d_loss = 0.5 * (real.loss + fk.loss);
    opt_d_.step();
  }

  // Generator + refiner step against the updated discriminator.
  opt_g_.zero_grad();
  {
    const Tensor4 fake_in = concat_forward(depth, fake);
    const Tensor4 logits = model_->disc->forward(fake_in);
    LossGrad adv = bce_with_logits(logits, 1.0);
    rec.g_adv = adv.loss;
    for (double& g : adv.grad.data) g *= weights_.adversarial;
    const Tensor4 g_in =
        model_->disc->backward(adv.grad, /*accumulate_params=*/false, /*want_gx=*/true);
    Tensor4 g_fake;
    concat_backward(g_in, depth.c, nullptr, &g_fake);

    LossGrad l1 = l1_loss(fake, target);
    rec.g_l1 = l1.loss;
    for (size_t i = 0; i < g_fake.data.size(); ++i) {
      g_fake.data[i] += weights_.lambda_l1 * l1.grad.data[i];
    }

    const Tensor4 g_gen_out = model_->refiner->backward(g_fake);
    model_->gen->backward(g_gen_out);
    opt_g_.step();
  }

  ++steps_;
  if (!std::isfinite(rec.d_loss) || !std::isfinite(rec.g_adv) || !std::isfinite(rec.g_l1)) {
    throw DivergenceError("training diverged at step " + std::to_string(steps_));
  }
  return rec;
}

double held_out_l1(Model& model, const std::vector<Tensor4>& depths,
                   const std::vector<Tensor4>& targets, bool use_refiner) {
  if (depths.size() != targets.size() || depths.empty()) {
    throw std::invalid_argument("held_out_l1: need equally many depth/target pairs");
  }
  double sum = 0.0;
  for (size_t i = 0; i < depths.size(); ++i) {
    Tensor4 out = model.gen->forward(depths[i]);
    if (use_refiner) out = model.refiner->refine(out, depths[i]);
    sum += l1_loss(out, targets[i]).loss;
  }
  return sum / static_cast<double>(depths.size());
}

}  // namespace dv::nn
