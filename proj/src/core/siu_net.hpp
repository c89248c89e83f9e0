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

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "core/encodings.hpp"
#include "core/nn.hpp"
#include "core/sits.hpp"
#include "core/tensor.hpp"

namespace sitsmon {

struct ModelConfig {
  int in_channels = 10;
  int enc_channels = 4;
  std::array<int, 3> widths = {32, 64, 128};
  int patch = 32;

  void validate() const {
    if (in_channels < 1) throw InvalidArgument("model: in_channels < 1");
    if (enc_channels < 1) throw InvalidArgument("model: enc_channels < 1");
    if (!(widths[0] < widths[1] && widths[1] < widths[2]))
      throw InvalidArgument("model: widths must be strictly increasing");
    if (patch < 4 || patch % 4 != 0)
      throw InvalidArgument("model: patch must be divisible by 4");
  }
};

struct TrainHyperparams {
  int epochs = 20;
  int batch_size = 32;
  double lr_init = 1e-4;
  double lr_factor = 0.1;
  int lr_patience = 3;
  double lr_min = 1e-7;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 42;

  void validate() const {
    if (epochs < 1 || batch_size < 1 || lr_patience < 1)
      throw InvalidArgument("hyperparams: counts must be positive");
    if (!(lr_init > 0.0 && lr_factor > 0.0 && lr_min > 0.0))
      throw InvalidArgument("hyperparams: rates must be positive");
    if (lr_min > lr_init) throw InvalidArgument("hyperparams: lr_min > lr_init");
  }
};

struct EpochStats {
  double train_loss = 0.0;
  double val_loss = 0.0;
  double lr = 0.0;
};

using TrainingHistory = std::vector<EpochStats>;

// Conditional UNet translating a baseline patch plus constant conditioning
// planes into the expected patch for a day of the year.
//
// Layout (widths w1 < w2 < w3, s = patch size, C = image channels,
// E = conditioning channels):
//   input  (C+E) @ s      -> double conv -> f1 (w1 @ s)
//   pool f1               -> double conv -> f2 (w2 @ s/2)
//   pool f2               -> double conv -> f3 (w3 @ s/4)
//   up f3, cat [f2, enc]  -> double conv -> g1 (w2 @ s/2)
//   up g1, cat [f1, enc]  -> double conv -> g2 (w1 @ s)
//   cat [g2, input]       -> 1x1 conv    -> C @ s
template <typename T>
class SiuNetT {
 public:
  SiuNetT(const ModelConfig& cfg, std::uint64_t init_seed) : cfg_(cfg) {
    cfg_.validate();
    const int c_in = cfg_.in_channels + cfg_.enc_channels;
    const int w1 = cfg_.widths[0], w2 = cfg_.widths[1], w3 = cfg_.widths[2];
    enc1a_ = make_conv("enc1a", c_in, w1, 3);
    enc1b_ = make_conv("enc1b", w1, w1, 3);
    enc2a_ = make_conv("enc2a", w1, w2, 3);
    enc2b_ = make_conv("enc2b", w2, w2, 3);
    enc3a_ = make_conv("enc3a", w2, w3, 3);
    enc3b_ = make_conv("enc3b", w3, w3, 3);
    dec1a_ = make_conv("dec1a", w3 + w2 + cfg_.enc_channels, w2, 3);
    dec1b_ = make_conv("dec1b", w2, w2, 3);
    dec2a_ = make_conv("dec2a", w2 + w1 + cfg_.enc_channels, w1, 3);
    dec2b_ = make_conv("dec2b", w1, w1, 3);
    final_ = make_conv("final", w1 + c_in, cfg_.in_channels, 1);

    Rng rng(init_seed);
    for (auto* conv : convs_) conv->init(rng);
  }

  const ModelConfig& config() const { return cfg_; }

  std::vector<nn::Param<T>*> parameters() {
    std::vector<nn::Param<T>*> out;
    for (auto* conv : convs_) {
      out.push_back(&conv->weight());
      out.push_back(&conv->bias());
    }
    return out;
  }

  std::size_t count_parameters() {
    std::size_t n = 0;
    for (auto* p : parameters()) n += p->value.size();
    return n;
  }

  void zero_grad() {
    for (auto* p : parameters()) p->grad.fill(T(0));
  }

  // x: N x (C+E) x s x s, conditioning planes last. The conditioning values
  // are constant per sample, so their lower-resolution copies for the
  // up-block concatenations are read from pixel (0, 0).
  TensorT<T> forward(const TensorT<T>& x) {
    const int n = x.dim(0);
    const int s = x.dim(2);
    const int c = cfg_.in_channels, e = cfg_.enc_channels;
    if (x.dim(1) != c + e)
      throw InvalidArgument("forward: expected " + std::to_string(c + e) +
                            " input channels");

    input_ = x;
    enc_half_ = TensorT<T>({n, e, s / 2, s / 2});
    const std::size_t half_plane =
        static_cast<std::size_t>(s / 2) * (s / 2);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < e; ++k) {
        const T v = x.at4(i, c + k, 0, 0);
        T* dst = enc_half_.data() +
                 (static_cast<std::size_t>(i) * e + k) * half_plane;
        std::fill(dst, dst + half_plane, v);
      }

    f1_ = act1b_.forward(enc1b_->forward(act1a_.forward(enc1a_->forward(x))));
    f2_ = act2b_.forward(
        enc2b_->forward(act2a_.forward(enc2a_->forward(pool1_.forward(f1_)))));
    f3_ = act3b_.forward(
        enc3b_->forward(act3a_.forward(enc3a_->forward(pool2_.forward(f2_)))));

    TensorT<T> up1 = ups1_.forward(f3_);
    TensorT<T> cat1 = nn::concat_channels<T>({&up1, &f2_, &enc_half_});
    TensorT<T> g1 = act4b_.forward(
        dec1b_->forward(act4a_.forward(dec1a_->forward(cat1))));

    TensorT<T> up2 = ups2_.forward(g1);
    TensorT<T> enc_full = nn::slice_channels(x, c, e);
    TensorT<T> cat2 = nn::concat_channels<T>({&up2, &f1_, &enc_full});
    TensorT<T> g2 = act5b_.forward(
        dec2b_->forward(act5a_.forward(dec2a_->forward(cat2))));

    TensorT<T> cat3 = nn::concat_channels<T>({&g2, &input_});
    return final_->forward(cat3);
  }

  // dy: N x C x s x s. Accumulates parameter gradients.
  void backward(const TensorT<T>& dy) {
    const int w1 = cfg_.widths[0], w2 = cfg_.widths[1], w3 = cfg_.widths[2];

    TensorT<T> dcat3 = final_->backward(dy);
    TensorT<T> dg2 = nn::slice_channels(dcat3, 0, w1);

    TensorT<T> dcat2 =
        dec2a_->backward(act5a_.backward(dec2b_->backward(act5b_.backward(dg2))));
    TensorT<T> dup2 = nn::slice_channels(dcat2, 0, w2);
    TensorT<T> df1 = nn::slice_channels(dcat2, w2, w1);

    TensorT<T> dg1 = ups2_.backward(dup2);
    TensorT<T> dcat1 =
        dec1a_->backward(act4a_.backward(dec1b_->backward(act4b_.backward(dg1))));
    TensorT<T> dup1 = nn::slice_channels(dcat1, 0, w3);
    TensorT<T> df2 = nn::slice_channels(dcat1, w3, w2);

    TensorT<T> df3 = ups1_.backward(dup1);
    TensorT<T> dpool2 =
        enc3a_->backward(act3a_.backward(enc3b_->backward(act3b_.backward(df3))));
    // f2 feeds both the second down-block and the first up-block concat.
    {
      TensorT<T> extra = pool2_.backward(dpool2);
      for (std::size_t i = 0; i < df2.size(); ++i) df2[i] += extra[i];
    }
    TensorT<T> dpool1 =
        enc2a_->backward(act2a_.backward(enc2b_->backward(act2b_.backward(df2))));
    {
      TensorT<T> extra = pool1_.backward(dpool1);
      for (std::size_t i = 0; i < df1.size(); ++i) df1[i] += extra[i];
    }
    enc1a_->backward(act1a_.backward(enc1b_->backward(act1b_.backward(df1))),
                     /*need_dx=*/false);
  }

 private:
  nn::Conv2d<T>* make_conv(const char* name, int cin, int cout, int k) {
    owned_.push_back(std::make_unique<nn::Conv2d<T>>(name, cin, cout, k));
    convs_.push_back(owned_.back().get());
    return owned_.back().get();
  }

  ModelConfig cfg_;

  // Convs are owned in creation order; named pointers below alias them.
  std::vector<std::unique_ptr<nn::Conv2d<T>>> owned_;
  std::vector<nn::Conv2d<T>*> convs_;

  nn::Conv2d<T>* enc1a_ = nullptr;
  nn::Conv2d<T>* enc1b_ = nullptr;
  nn::Conv2d<T>* enc2a_ = nullptr;
  nn::Conv2d<T>* enc2b_ = nullptr;
  nn::Conv2d<T>* enc3a_ = nullptr;
  nn::Conv2d<T>* enc3b_ = nullptr;
  nn::Conv2d<T>* dec1a_ = nullptr;
  nn::Conv2d<T>* dec1b_ = nullptr;
  nn::Conv2d<T>* dec2a_ = nullptr;
  nn::Conv2d<T>* dec2b_ = nullptr;
  nn::Conv2d<T>* final_ = nullptr;

  nn::Gelu<T> act1a_, act1b_, act2a_, act2b_, act3a_, act3b_;
  nn::Gelu<T> act4a_, act4b_, act5a_, act5b_;
  nn::MaxPool2<T> pool1_, pool2_;
  nn::Upsample2<T> ups1_, ups2_;

  TensorT<T> input_, enc_half_, f1_, f2_, f3_;
};

using SiuNet = SiuNetT<float>;

// Assembles a model input block: baseline patch channels followed by the
// constant conditioning planes.
Tensor make_model_input(const Tensor& baseline_patch,
                        const std::vector<double>& cond_values);

// L1 loss and its (sub)gradient; sign(0) taken as 0.
double l1_loss(const Tensor& pred, const Tensor& target, Tensor* grad = nullptr);

struct Checkpoint {
  ModelConfig config;
  EncodingMode encoding_mode = EncodingMode::kFull;
  std::string norm_stats_digest;
  TrainingHistory history;
  std::uint64_t init_seed = 0;
  std::vector<float> probe_output;  // forward regression vector for reloads
};

// Trains in place; returns per-epoch history. Aborts with DataError naming
// the batch if the loss goes non-finite.
TrainingHistory train_model(SiuNet& model,
                            const std::vector<PatchSample>& train_samples,
                            const std::vector<PatchSample>& val_samples,
                            const TrainHyperparams& hp, EncodingMode enc_mode,
                            int grid_rows, int grid_cols);

// Runs the model patch-wise over a full baseline image for one day of the
// year and stitches the predictions back together (row-major).
Tensor generate_image(SiuNet& model, const BaselineImage& baseline,
                      int day_of_year, EncodingMode enc_mode);

// Deterministic probe: forward on a fixed seeded input, first 16 outputs.
std::vector<float> probe_forward(SiuNet& model);

void save_checkpoint(const std::string& weights_path,
                     const std::string& manifest_path, SiuNet& model,
                     const Checkpoint& meta);

// Loads weights + manifest; verifies the probe regression vector bit-exactly.
std::pair<std::unique_ptr<SiuNet>, Checkpoint> load_checkpoint(
    const std::string& weights_path, const std::string& manifest_path);

}  // namespace sitsmon
