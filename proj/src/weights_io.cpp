#include "dv/weights_io.hpp"

#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>

#include "dv/densify.hpp"
#include "dv/errors.hpp"
#include "dv/hash.hpp"
#include "dv/resize.hpp"

namespace dv::nn {

namespace {

using nlohmann::json;

void append_u32(std::string& buf, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
               static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  buf.append(b, 4);
}

void append_tensor(std::string& buf, const Tensor4& t) {
  buf.append(reinterpret_cast<const char*>(t.data.data()), t.data.size() * sizeof(double));
}

struct Reader {
  const std::string& buf;
  size_t pos = 0;

  void need(size_t n, const char* what) const {
    if (pos + n > buf.size()) throw IoError(std::string("weight file truncated at ") + what);
  }
  uint32_t u32(const char* what) {
    need(4, what);
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(buf[pos + i]);
    pos += 4;
    return v;
  }
  void tensor(Tensor4& t, const char* what) {
    need(t.data.size() * sizeof(double), what);
    std::memcpy(t.data.data(), buf.data() + pos, t.data.size() * sizeof(double));
    pos += t.data.size() * sizeof(double);
  }
};

json arch_json(const Model& m) {
  return json{
      {"gen",
       {{"in_channels", m.gen_cfg.in_channels},
        {"out_channels", m.gen_cfg.out_channels},
        {"base_width", m.gen_cfg.base_width},
        {"levels", m.gen_cfg.levels}}},
      {"disc",
       {{"in_channels", m.disc_cfg.in_channels},
        {"base_width", m.disc_cfg.base_width},
        {"n_down", m.disc_cfg.n_down}}},
      {"refiner",
       {{"hidden_width", m.refiner_cfg.hidden_width},
        {"iterations", m.refiner_cfg.iterations}}},
  };
}

}  // namespace

void save_checkpoint(const std::string& path, Model& model, const AdamConfig& adam,
                     double max_range, int gen_size, uint64_t seed, GanTrainer* trainer) {
  json meta = arch_json(model);
  meta["adam"] = {{"lr", adam.lr}, {"beta1", adam.beta1}, {"beta2", adam.beta2}, {"eps", adam.eps}};
  meta["max_range"] = max_range;
  meta["gen_size"] = gen_size;
  meta["seed"] = seed;
  meta["depth_encoding_version"] = kDepthEncodingVersion;
  meta["resize_version"] = kResizeVersion;
  meta["has_opt_state"] = trainer != nullptr;
  if (trainer) {
    meta["g_t"] = trainer->gen_opt().t();
    meta["d_t"] = trainer->disc_opt().t();
  }
  const std::string cfg = meta.dump();

  std::string buf;
  buf.append("DVNN", 4);
  append_u32(buf, kWeightFormatVersion);
  append_u32(buf, static_cast<uint32_t>(cfg.size()));
  buf.append(cfg);
  for (Param* p : model.generator_side_params()) append_tensor(buf, p->value);
  for (Param* p : model.disc->params()) append_tensor(buf, p->value);
  if (trainer) {
    auto dump_state = [&buf](Adam& opt) {
      for (size_t i = 0; i < opt.params().size(); ++i) {
        append_tensor(buf, opt.moment1()[i]);
        append_tensor(buf, opt.moment2()[i]);
      }
    };
    dump_state(trainer->gen_opt());
    dump_state(trainer->disc_opt());
  }
  append_u32(buf, crc32(buf.data(), buf.size()));

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (buf.size() < 12 || std::memcmp(buf.data(), "DVNN", 4) != 0) {
    throw IoError(path + ": not a DVNN weight file");
  }
  if (buf.size() < 16) throw IoError(path + ": weight file truncated");
  uint32_t file_crc = 0;
  for (int i = 3; i >= 0; --i) {
    file_crc = (file_crc << 8) | static_cast<unsigned char>(buf[buf.size() - 4 + i]);
  }
  if (crc32(buf.data(), buf.size() - 4) != file_crc) {
    throw IoError(path + ": checksum mismatch (truncated or corrupt weight file)");
  }

  Reader r{buf, 4};
  const uint32_t version = r.u32("format version");
  if (version != kWeightFormatVersion) {
    throw IoError(path + ": unsupported weight format version " + std::to_string(version));
  }
  const uint32_t json_len = r.u32("config length");
  r.need(json_len, "config block");
  json meta;
  try {
    meta = json::parse(buf.substr(r.pos, json_len));
  } catch (const json::exception& e) {
    throw IoError(path + ": bad config block: " + e.what());
  }
  r.pos += json_len;

  Checkpoint ckpt;
  try {
    GeneratorConfig g{meta.at("gen").at("in_channels"), meta.at("gen").at("out_channels"),
                      meta.at("gen").at("base_width"), meta.at("gen").at("levels")};
    DiscriminatorConfig d{meta.at("disc").at("in_channels"), meta.at("disc").at("base_width"),
                          meta.at("disc").at("n_down")};
    RefinerConfig rf{meta.at("refiner").at("hidden_width"), meta.at("refiner").at("iterations")};
    ckpt.model = Model::create(g, d, rf, 0);
    ckpt.adam_cfg.lr = meta.at("adam").at("lr");
    ckpt.adam_cfg.beta1 = meta.at("adam").at("beta1");
    ckpt.adam_cfg.beta2 = meta.at("adam").at("beta2");
    ckpt.adam_cfg.eps = meta.at("adam").at("eps");
    ckpt.max_range = meta.at("max_range");
    ckpt.gen_size = meta.at("gen_size");
    ckpt.seed = meta.at("seed");
    ckpt.depth_encoding_version = meta.at("depth_encoding_version");
    ckpt.resize_version = meta.at("resize_version");
    ckpt.has_opt_state = meta.at("has_opt_state");
    if (ckpt.has_opt_state) {
      ckpt.g_t = meta.at("g_t");
      ckpt.d_t = meta.at("d_t");
    }
  } catch (const json::exception& e) {
    throw IoError(path + ": config block missing field: " + e.what());
  }
  if (ckpt.depth_encoding_version != kDepthEncodingVersion) {
    throw IoError(path + ": depth encoding version " +
                  std::to_string(ckpt.depth_encoding_version) + " != supported " +
                  std::to_string(kDepthEncodingVersion));
  }

  for (Param* p : ckpt.model.generator_side_params()) r.tensor(p->value, "generator params");
  for (Param* p : ckpt.model.disc->params()) r.tensor(p->value, "discriminator params");
  if (ckpt.has_opt_state) {
    auto read_state = [&](std::vector<Param*> params, std::vector<Tensor4>& m,
                          std::vector<Tensor4>& v) {
      for (Param* p : params) {
        Tensor4 tm = Tensor4::zeros_like(p->value);
        Tensor4 tv = Tensor4::zeros_like(p->value);
        r.tensor(tm, "optimizer state");
        r.tensor(tv, "optimizer state");
        m.push_back(std::move(tm));
        v.push_back(std::move(tv));
      }
    };
    read_state(ckpt.model.generator_side_params(), ckpt.g_m, ckpt.g_v);
    read_state(ckpt.model.disc->params(), ckpt.d_m, ckpt.d_v);
  }
  if (r.pos != buf.size() - 4) {
    throw IoError(path + ": trailing bytes in weight file");
  }
  return ckpt;
}

void restore_trainer_state(Checkpoint& ckpt, GanTrainer& trainer) {
  if (!ckpt.has_opt_state) return;
  trainer.gen_opt().moment1() = ckpt.g_m;
  trainer.gen_opt().moment2() = ckpt.g_v;
  trainer.gen_opt().set_t(ckpt.g_t);
  trainer.disc_opt().moment1() = ckpt.d_m;
  trainer.disc_opt().moment2() = ckpt.d_v;
  trainer.disc_opt().set_t(ckpt.d_t);
}

namespace {

template <typename T>
void check_field(const std::string& name, const T& got, const T& expected) {
  if (!(got == expected)) {
    throw ConfigError("architecture mismatch in field '" + name + "': weight file has " +
                      std::to_string(got) + ", expected " + std::to_string(expected));
  }
}

}  // namespace

void require_matching_arch(const Checkpoint& ckpt, const GeneratorConfig& gen,
                           const DiscriminatorConfig& disc, const RefinerConfig& refiner) {
  check_field("gen.in_channels", ckpt.model.gen_cfg.in_channels, gen.in_channels);
  check_field("gen.out_channels", ckpt.model.gen_cfg.out_channels, gen.out_channels);
  check_field("gen.base_width", ckpt.model.gen_cfg.base_width, gen.base_width);
  check_field("gen.levels", ckpt.model.gen_cfg.levels, gen.levels);
  check_field("disc.in_channels", ckpt.model.disc_cfg.in_channels, disc.in_channels);
  check_field("disc.base_width", ckpt.model.disc_cfg.base_width, disc.base_width);
  check_field("disc.n_down", ckpt.model.disc_cfg.n_down, disc.n_down);
  check_field("refiner.hidden_width", ckpt.model.refiner_cfg.hidden_width, refiner.hidden_width);
  check_field("refiner.iterations", ckpt.model.refiner_cfg.iterations, refiner.iterations);
}

}  // namespace dv::nn
