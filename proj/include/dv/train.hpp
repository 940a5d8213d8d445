#pragma once

#include <memory>
#include <vector>

#include "dv/nets.hpp"
#include "dv/optim.hpp"

namespace dv::nn {

struct LossWeights {
  double lambda_l1 = 100.0;
  double adversarial = 1.0;
};

struct LossRecord {
  double d_loss = 0.0;
  double g_adv = 0.0;
  double g_l1 = 0.0;
};

// The three jointly trained networks plus everything a weight file must
// capture to reproduce them.
struct Model {
  GeneratorConfig gen_cfg;
  DiscriminatorConfig disc_cfg;
  RefinerConfig refiner_cfg;
  std::unique_ptr<GeneratorNet> gen;
  std::unique_ptr<DiscriminatorNet> disc;
  std::unique_ptr<RefinerNet> refiner;

  static Model create(const GeneratorConfig& g, const DiscriminatorConfig& d,
                      const RefinerConfig& r, uint64_t seed);

  // Generator followed by the iterative refiner; the full synthesis path.
  Tensor4 synthesize(const Tensor4& depth);
  std::vector<Param*> generator_side_params();  // generator + refiner
};

// Alternating updates: one discriminator Adam step on (real,fake) pairs, one
// generator+refiner Adam step on the adversarial + weighted-L1 objective.
// depth/target are (N,1,H,W)/(N,3,H,W) tensors in [-1,1].
class GanTrainer {
 public:
  GanTrainer(Model* model, const AdamConfig& adam, const LossWeights& weights);

  LossRecord step(const Tensor4& depth, const Tensor4& target);

  Adam& gen_opt() { return opt_g_; }
  Adam& disc_opt() { return opt_d_; }
  int64_t steps_done() const { return steps_; }
  const LossWeights& weights() const { return weights_; }

 private:
  Model* model_;
  LossWeights weights_;
  Adam opt_g_;
  Adam opt_d_;
  int64_t steps_ = 0;
};

// Mean per-pair L1 between synthesized and target images, forward only.
double held_out_l1(Model& model, const std::vector<Tensor4>& depths,
                   const std::vector<Tensor4>& targets, bool use_refiner = true);

}  // namespace dv::nn
