// Copyright 2026 The piperate Authors.
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

// Bidirectional LSTM sequence labeler: word and dictionary-feature
// embeddings, forward and backward LSTMs, a per-token softmax over the IO
// tags, and batched backpropagation through time with Adam.

#ifndef PIPERATE_BILSTM_H_
#define PIPERATE_BILSTM_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "piperate/linalg.h"
#include "piperate/tags.h"

namespace piperate {

struct TaggerHyperparameters {
  std::size_t word_dim = 200;
  std::size_t dict_dim = 100;
  std::size_t hidden = 300;
  std::size_t num_tags = kNumTags;
  std::size_t batch_size = 100;
  std::size_t epochs = 10;
  double learning_rate = 0.005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Global gradient-norm clip; 0 disables clipping.
  double clip_norm = 0.0;
  // Embeddings are drawn uniformly from [-init_range, init_range].
  double init_range = 0.1;

  std::size_t input_dim() const { return word_dim + dict_dim; }
  friend bool operator==(const TaggerHyperparameters&, const TaggerHyperparameters&) = default;
};

// Gate blocks are stacked in the order input, forget, output, candidate.
struct LstmParams {
  Matrix wx;    // 4H x I
  Matrix wh;    // 4H x H
  Matrix bias;  // 1 x 4H

  std::size_t hidden() const { return wh.cols; }
  std::size_t input() const { return wx.cols; }
  friend bool operator==(const LstmParams&, const LstmParams&) = default;
};

LstmParams make_lstm_params(std::size_t input, std::size_t hidden);

class Vocabulary {
 public:
  static constexpr std::size_t kUnk = 0;
  static constexpr std::string_view kUnkToken = "<unk>";

  Vocabulary();
  explicit Vocabulary(const std::vector<std::string>& words);

  std::size_t id(const std::string& word) const;
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.words_ == b.words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct TaggerModel {
  TaggerHyperparameters hyper;
  Vocabulary vocab;
  Matrix word_embeddings;  // |V| x word_dim, row 0 is UNK
  Matrix dict_embeddings;  // 4 x dict_dim
  LstmParams forward;
  LstmParams backward;
  Matrix w_out;  // num_tags x 2H
  Matrix b_out;  // 1 x num_tags
  std::uint64_t rng_seed = 0;

  static TaggerModel initialize(const TaggerHyperparameters& hyper, Vocabulary vocab, std::uint64_t seed);
  // Every parameter zero.
  static TaggerModel zeros(const TaggerHyperparameters& hyper, Vocabulary vocab);

  std::vector<Matrix*> parameters();
  std::vector<const Matrix*> parameters() const;
  static const std::vector<std::string>& parameter_names();
  bool finite() const;

  std::string serialize() const;
  static TaggerModel deserialize(std::string_view bytes);
  void save(const std::filesystem::path& path) const;
  static TaggerModel load(const std::filesystem::path& path);

  friend bool operator==(const TaggerModel&, const TaggerModel&) = default;
};

struct LstmState {
  std::vector<double> h;
  std::vector<double> c;
};

// One LSTM step. Throws NumericalError if the result is not finite.
LstmState lstm_step(std::span<const double> x, std::span<const double> h_prev, std::span<const double> c_prev,
                    const LstmParams& params);

// Concatenation of the word row (UNK for unknown words) and the
// dictionary-feature row.
std::vector<double> embed(const std::string& word, Tag dict_feature, const TaggerModel& model);

// Runs both directions over a sequence of input vectors and returns
// [forward_t, backward_t] per position. Throws EmptySequence on empty input.
std::vector<std::vector<double>> bilstm_forward(const std::vector<std::vector<double>>& inputs,
                                                const TaggerModel& model);

// One training sentence: normalized words, dictionary features and gold
// tags, all the same length.
struct TrainingExample {
  std::vector<std::string> words;
  std::vector<Tag> features;
  std::vector<Tag> tags;
};

// Argmax tags (lowest index wins ties) for one sentence.
std::vector<Tag> predict(const TaggerModel& model, const std::vector<std::string>& words,
                         const std::vector<Tag>& features);

// Per-token logits, exposed for tests.
Matrix logits(const TaggerModel& model, const std::vector<std::string>& words, const std::vector<Tag>& features);

// Mean per-token cross-entropy over the examples. When `gradients` is
// given it must have the model's shape and receives d(loss)/d(param),
// overwriting its contents.
double loss_and_gradients(const TaggerModel& model, std::span<const TrainingExample> batch,
                          TaggerModel* gradients = nullptr);

struct TrainResult {
  TaggerModel model;
  // Loss over the training corpus before the first update.
  double initial_loss = 0.0;
  // Token-weighted mean batch loss for each epoch.
  std::vector<double> epoch_losses;
};

using EpochCallback = std::function<void(std::size_t epoch, double loss)>;

// Builds the vocabulary from the corpus and trains with Adam on shuffled
// mini-batches. Deterministic for a fixed seed and kernel ISA.
TrainResult train(const std::vector<TrainingExample>& corpus, const TaggerHyperparameters& hyper,
                  std::uint64_t seed, const EpochCallback& on_epoch = {});

}  // namespace piperate

#endif  // PIPERATE_BILSTM_H_
