#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dv/train.hpp"

namespace dv::nn {

// DVNN weight file: magic "DVNN", u32 format version, u32 length + canonical
// JSON config block, parameter blobs (float64 little-endian, declaration
// order: generator, discriminator, refiner), optional Adam moments, trailing
// CRC32 over everything before it.
inline constexpr uint32_t kWeightFormatVersion = 1;

struct Checkpoint {
  Model model;
  AdamConfig adam_cfg;
  double max_range = 100.0;
  int gen_size = 64;
  uint32_t depth_encoding_version = 0;
  uint32_t resize_version = 0;
  uint64_t seed = 0;
  // Optimizer state, aligned with generator_side_params() / disc params.
  bool has_opt_state = false;
  std::vector<Tensor4> g_m, g_v, d_m, d_v;
  int64_t g_t = 0;
  int64_t d_t = 0;
};

void save_checkpoint(const std::string& path, Model& model, const AdamConfig& adam,
                     double max_range, int gen_size, uint64_t seed,
                     GanTrainer* trainer = nullptr);

Checkpoint load_checkpoint(const std::string& path);

// Installs saved Adam moments and step counters into a fresh trainer.
void restore_trainer_state(Checkpoint& ckpt, GanTrainer& trainer);

// Throws ConfigError naming the first differing field.
void require_matching_arch(const Checkpoint& ckpt, const GeneratorConfig& gen,
                           const DiscriminatorConfig& disc, const RefinerConfig& refiner);

}  // namespace dv::nn
