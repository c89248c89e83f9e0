// Copyright 2026 The sitsmon authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/siu_net.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "core/common.hpp"

namespace sitsmon {

namespace {

constexpr char kWeightsMagic[8] = {'S', 'M', 'W', '1', '\n', 0, 0, 0};

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

// Per-batch input/target assembly.
void assemble_batch(const std::vector<PatchSample>& samples,
                    const std::vector<std::size_t>& order, std::size_t begin,
                    std::size_t end, EncodingMode mode, int grid_rows,
                    int grid_cols, Tensor* x, Tensor* target) {
  const PatchSample& first = samples[order[begin]];
  const int c = first.baseline_patch.dim(0);
  const int s = first.baseline_patch.dim(1);
  const int e = encoding_channel_count(mode);
  const int n = static_cast<int>(end - begin);

  *x = Tensor({n, c + e, s, s});
  *target = Tensor({n, c, s, s});
  const std::size_t plane = static_cast<std::size_t>(s) * s;
  for (int i = 0; i < n; ++i) {
    const PatchSample& smp = samples[order[begin + static_cast<std::size_t>(i)]];
    float* xi = x->data() + static_cast<std::size_t>(i) * (c + e) * plane;
    std::copy_n(smp.baseline_patch.data(), static_cast<std::size_t>(c) * plane, xi);
    const auto vals = conditioning_values(smp.day_of_year, smp.row, smp.col,
                                          grid_rows, grid_cols, mode);
    for (int k = 0; k < e; ++k) {
      float* dst = xi + (static_cast<std::size_t>(c) + k) * plane;
      std::fill(dst, dst + plane, static_cast<float>(vals[static_cast<std::size_t>(k)]));
    }
    std::copy_n(smp.target_patch.data(), static_cast<std::size_t>(c) * plane,
                target->data() + static_cast<std::size_t>(i) * c * plane);
  }
}

class Adam {
 public:
  Adam(std::vector<nn::Param<float>*> params, const TrainHyperparams& hp)
      : params_(std::move(params)), hp_(hp) {}

  void step(double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(hp_.beta1, t_);
    const double bc2 = 1.0 - std::pow(hp_.beta2, t_);
    for (auto* p : params_) {
      for (std::size_t i = 0; i < p->value.size(); ++i) {
        const double g = p->grad[i];
        const double m = hp_.beta1 * p->adam_m[i] + (1.0 - hp_.beta1) * g;
        const double v = hp_.beta2 * p->adam_v[i] + (1.0 - hp_.beta2) * g * g;
        p->adam_m[i] = static_cast<float>(m);
        p->adam_v[i] = static_cast<float>(v);
        p->value[i] -= static_cast<float>(lr * (m / bc1) /
                                          (std::sqrt(v / bc2) + hp_.adam_eps));
      }
    }
  }

 private:
  std::vector<nn::Param<float>*> params_;
  TrainHyperparams hp_;
  long t_ = 0;
};

double batched_val_loss(SiuNet& model, const std::vector<PatchSample>& val,
                        const TrainHyperparams& hp, EncodingMode mode,
                        int grid_rows, int grid_cols) {
  std::vector<std::size_t> order(val.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t b = 0; b < val.size(); b += static_cast<std::size_t>(hp.batch_size)) {
    const std::size_t end = std::min(val.size(), b + static_cast<std::size_t>(hp.batch_size));
    Tensor x, target;
    assemble_batch(val, order, b, end, mode, grid_rows, grid_cols, &x, &target);
    Tensor y = model.forward(x);
    sum += l1_loss(y, target) * static_cast<double>(end - b);
    count += end - b;
  }
  return sum / static_cast<double>(count);
}

}  // namespace

Tensor make_model_input(const Tensor& baseline_patch,
                        const std::vector<double>& cond_values) {
  const int c = baseline_patch.dim(0);
  const int s = baseline_patch.dim(1);
  const int e = static_cast<int>(cond_values.size());
  Tensor x({1, c + e, s, s});
  const std::size_t plane = static_cast<std::size_t>(s) * s;
  std::copy_n(baseline_patch.data(), static_cast<std::size_t>(c) * plane, x.data());
  for (int k = 0; k < e; ++k) {
    float* dst = x.data() + (static_cast<std::size_t>(c) + k) * plane;
    std::fill(dst, dst + plane, static_cast<float>(cond_values[static_cast<std::size_t>(k)]));
  }
  return x;
}

double l1_loss(const Tensor& pred, const Tensor& target, Tensor* grad) {
  if (!pred.same_shape(target)) throw InvalidArgument("l1_loss: shape mismatch");
  if (grad) *grad = Tensor(pred.shape());
  const double inv = 1.0 / static_cast<double>(pred.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = static_cast<double>(pred[i]) - target[i];
    sum += std::abs(d);
    if (grad)
      (*grad)[i] = static_cast<float>((d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0)) * inv);
  }
  return sum * inv;
}

TrainingHistory train_model(SiuNet& model,
                            const std::vector<PatchSample>& train_samples,
                            const std::vector<PatchSample>& val_samples,
                            const TrainHyperparams& hp, EncodingMode enc_mode,
                            int grid_rows, int grid_cols) {
  hp.validate();
  if (train_samples.empty() || val_samples.empty())
    throw InvalidArgument("train: empty train or val set");

  Adam opt(model.parameters(), hp);
  Rng shuffle_rng(hp.seed ^ 0x9e3779b97f4a7c15ull);

  double lr = hp.lr_init;
  double best_val = std::numeric_limits<double>::infinity();
  int stale_epochs = 0;
  TrainingHistory history;

  std::vector<std::size_t> order(train_samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t seen = 0;
    std::size_t batch_index = 0;
    for (std::size_t b = 0; b < order.size();
         b += static_cast<std::size_t>(hp.batch_size), ++batch_index) {
      const std::size_t end =
          std::min(order.size(), b + static_cast<std::size_t>(hp.batch_size));
      Tensor x, target;
      assemble_batch(train_samples, order, b, end, enc_mode, grid_rows,
                     grid_cols, &x, &target);
      Tensor y = model.forward(x);
      Tensor grad;
      const double loss = l1_loss(y, target, &grad);
      if (!std::isfinite(loss))
        throw DataError("non-finite training loss at epoch " +
                        std::to_string(epoch) + ", batch " +
                        std::to_string(batch_index));
      model.zero_grad();
      model.backward(grad);
      opt.step(lr);
      loss_sum += loss * static_cast<double>(end - b);
      seen += end - b;
    }

    EpochStats stats;
    stats.train_loss = loss_sum / static_cast<double>(seen);
    stats.val_loss = batched_val_loss(model, val_samples, hp, enc_mode, grid_rows, grid_cols);
    stats.lr = lr;
    history.push_back(stats);

    if (stats.val_loss < best_val) {
      best_val = stats.val_loss;
      stale_epochs = 0;
    } else if (++stale_epochs >= hp.lr_patience) {
      lr = std::max(lr * hp.lr_factor, hp.lr_min);
      stale_epochs = 0;
    }
  }
  return history;
}

Tensor generate_image(SiuNet& model, const BaselineImage& baseline,
                      int day_of_year, EncodingMode enc_mode) {
  const ModelConfig& cfg = model.config();
  const int c = baseline.bands.dim(0);
  const int h = baseline.bands.dim(1);
  const int w = baseline.bands.dim(2);
  const int s = cfg.patch;
  if (c != cfg.in_channels)
    throw InvalidArgument("generate_image: channel count mismatch with model");
  if (h % s != 0 || w % s != 0)
    throw InvalidArgument("generate_image: baseline not divisible by patch size");

  const int gh = h / s, gw = w / s;
  const int e = encoding_channel_count(enc_mode);
  const int total = gh * gw;
  const int chunk = 32;
  // Tiles carry s/4 pixels of surrounding image context on each side
  // (reflect-101 at the image border); only the central s x s of each
  // prediction is kept. Convolution padding then never touches the kept
  // region, so the stitched prediction has no seams at patch borders.
  const int pad = s / 4;
  const int t = s + 2 * pad;
  const std::size_t tile_plane = static_cast<std::size_t>(t) * t;
  const std::size_t plane = static_cast<std::size_t>(s) * s;

  const auto reflect = [](int i, int n) {
    while (i < 0 || i >= n) i = i < 0 ? -i : 2 * (n - 1) - i;
    return i;
  };

  std::vector<Tensor> patches(static_cast<std::size_t>(total));
  for (int begin = 0; begin < total; begin += chunk) {
    const int n = std::min(chunk, total - begin);
    Tensor x({n, c + e, t, t});
    for (int i = 0; i < n; ++i) {
      const int pr = (begin + i) / gw;
      const int pc = (begin + i) % gw;
      float* xi = x.data() + static_cast<std::size_t>(i) * (c + e) * tile_plane;
      for (int cc = 0; cc < c; ++cc)
        for (int y = 0; y < t; ++y) {
          const int sy = reflect(pr * s - pad + y, h);
          float* row = xi + (static_cast<std::size_t>(cc) * t + y) * t;
          for (int z = 0; z < t; ++z)
            row[z] = baseline.bands.at3(cc, sy, reflect(pc * s - pad + z, w));
        }
      const auto vals =
          conditioning_values(day_of_year, pr, pc, gh, gw, enc_mode);
      for (int k = 0; k < e; ++k) {
        float* dst = xi + (static_cast<std::size_t>(c) + k) * tile_plane;
        std::fill(dst, dst + tile_plane,
                  static_cast<float>(vals[static_cast<std::size_t>(k)]));
      }
    }
    Tensor y = model.forward(x);
    for (int i = 0; i < n; ++i) {
      Tensor p({c, s, s});
      const float* yi = y.data() + static_cast<std::size_t>(i) * c * tile_plane;
      for (int cc = 0; cc < c; ++cc)
        for (int yy = 0; yy < s; ++yy)
          std::copy_n(
              yi + (static_cast<std::size_t>(cc) * t + pad + yy) * t + pad, s,
              p.data() + (static_cast<std::size_t>(cc) * s + yy) * s);
      patches[static_cast<std::size_t>(begin + i)] = std::move(p);
    }
  }
  return stitch_patches(patches, gh, gw);
}

std::vector<float> probe_forward(SiuNet& model) {
  const ModelConfig& cfg = model.config();
  const int s = cfg.patch;
  Tensor x({1, cfg.in_channels + cfg.enc_channels, s, s});
  Rng rng(0x5eedf00dull);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = static_cast<float>(rng.uniform());
  Tensor y = model.forward(x);
  // 16 samples strided across the whole output so every channel block is
  // covered by the reload verification.
  const std::size_t n = std::min<std::size_t>(16, y.size());
  std::vector<float> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = y[i * (y.size() - 1) / (n > 1 ? n - 1 : 1)];
  return out;
}

void save_checkpoint(const std::string& weights_path,
                     const std::string& manifest_path, SiuNet& model,
                     const Checkpoint& meta) {
  const auto params = model.parameters();
  const std::string tmp = weights_path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint: " + tmp);
    out.write(kWeightsMagic, sizeof(kWeightsMagic));
    write_u32(out, static_cast<std::uint32_t>(params.size()));
    for (const auto* p : params) {
      write_u32(out, static_cast<std::uint32_t>(p->name.size()));
      out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
      write_u32(out, static_cast<std::uint32_t>(p->value.shape().size()));
      for (int d : p->value.shape()) write_u32(out, static_cast<std::uint32_t>(d));
      out.write(reinterpret_cast<const char*>(p->value.data()),
                static_cast<std::streamsize>(p->value.size() * sizeof(float)));
    }
    if (!out) throw IoError("short write: " + tmp);
  }
  std::filesystem::rename(tmp, weights_path);

  nlohmann::json j;
  j["format_version"] = 1;
  j["model"] = {{"in_channels", meta.config.in_channels},
                {"enc_channels", meta.config.enc_channels},
                {"widths", meta.config.widths},
                {"patch", meta.config.patch}};
  j["encoding_mode"] = encoding_mode_name(meta.encoding_mode);
  j["encoding_order"] = encoding_channel_names(meta.encoding_mode);
  j["norm_stats_digest"] = meta.norm_stats_digest;
  j["init"] = "uniform_fan_in";
  j["init_seed"] = meta.init_seed;
  j["parameter_count"] = model.count_parameters();
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& e : meta.history)
    hist.push_back({{"train_loss", e.train_loss},
                    {"val_loss", e.val_loss},
                    {"lr", e.lr}});
  j["history"] = hist;
  // Probe outputs stored as raw float bits so reloads can be checked
  // bit-exactly.
  std::vector<std::uint32_t> probe_bits;
  for (float v : meta.probe_output) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    probe_bits.push_back(bits);
  }
  j["probe_bits"] = probe_bits;

  const std::string mtmp = manifest_path + ".tmp";
  {
    std::ofstream out(mtmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write manifest: " + mtmp);
    out << j.dump(2) << "\n";
  }
  std::filesystem::rename(mtmp, manifest_path);
}

std::pair<std::unique_ptr<SiuNet>, Checkpoint> load_checkpoint(
    const std::string& weights_path, const std::string& manifest_path) {
  std::ifstream min(manifest_path);
  if (!min) throw StateError("missing checkpoint manifest: " + manifest_path);
  nlohmann::json j;
  min >> j;

  Checkpoint meta;
  meta.config.in_channels = j.at("model").at("in_channels").get<int>();
  meta.config.enc_channels = j.at("model").at("enc_channels").get<int>();
  const auto widths = j.at("model").at("widths").get<std::vector<int>>();
  if (widths.size() != 3) throw StateError("manifest: bad widths");
  std::copy(widths.begin(), widths.end(), meta.config.widths.begin());
  meta.config.patch = j.at("model").at("patch").get<int>();
  meta.encoding_mode = encoding_mode_from_name(j.at("encoding_mode").get<std::string>());
  meta.norm_stats_digest = j.at("norm_stats_digest").get<std::string>();
  meta.init_seed = j.value("init_seed", 0ull);
  for (const auto& e : j.at("history")) {
    meta.history.push_back({e.at("train_loss").get<double>(),
                            e.at("val_loss").get<double>(),
                            e.at("lr").get<double>()});
  }
  std::vector<float> probe;
  for (std::uint32_t bits : j.at("probe_bits").get<std::vector<std::uint32_t>>()) {
    float v;
    std::memcpy(&v, &bits, sizeof(v));
    probe.push_back(v);
  }
  meta.probe_output = probe;

  auto model = std::make_unique<SiuNet>(meta.config, meta.init_seed);

  std::ifstream in(weights_path, std::ios::binary);
  if (!in) throw StateError("missing checkpoint weights: " + weights_path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (std::memcmp(magic, kWeightsMagic, sizeof(magic)) != 0)
    throw StateError("bad checkpoint magic: " + weights_path);
  const std::uint32_t n_params = read_u32(in);
  auto params = model->parameters();
  if (n_params != params.size())
    throw StateError("checkpoint parameter count mismatch");
  for (auto* p : params) {
    const std::uint32_t name_len = read_u32(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    if (name != p->name)
      throw StateError("checkpoint parameter order mismatch: " + name);
    const std::uint32_t ndims = read_u32(in);
    std::vector<int> dims(ndims);
    for (auto& d : dims) d = static_cast<int>(read_u32(in));
    if (dims != p->value.shape())
      throw StateError("checkpoint parameter shape mismatch: " + name);
    in.read(reinterpret_cast<char*>(p->value.data()),
            static_cast<std::streamsize>(p->value.size() * sizeof(float)));
  }
  if (!in) throw StateError("truncated checkpoint: " + weights_path);

  const std::vector<float> now = probe_forward(*model);
  if (now.size() != probe.size() ||
      std::memcmp(now.data(), probe.data(), now.size() * sizeof(float)) != 0)
    throw StateError("checkpoint reload verification failed (probe mismatch)");

  return {std::move(model), std::move(meta)};
}

}  // namespace sitsmon
