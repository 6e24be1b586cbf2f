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

#include "piperate/bilstm.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>
#include <utility>

#include "piperate/corpus.h"
#include "piperate/error.h"
#include "piperate/random.h"

namespace piperate {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Sequences in a batch run in lockstep, sorted by decreasing length, so the
// sequences still active at step t are always a prefix of the batch. Both
// directions start at t = 0; the backward direction reads position
// len - 1 - t. Per-step state is packed: row offset[t] + b holds sorted
// sequence b at step t.
struct BatchLayout {
  std::vector<std::size_t> order;       // sorted slot -> sequence index
  std::vector<std::size_t> slot_of;     // sequence index -> sorted slot
  std::vector<std::size_t> lengths;     // per sorted slot
  std::vector<std::size_t> active;      // per step
  std::vector<std::size_t> offset;      // per step, plus the total
  std::size_t steps = 0;

  std::size_t total() const { return offset.back(); }
  std::size_t row(std::size_t t, std::size_t slot) const { return offset[t] + slot; }
  std::size_t position(std::size_t t, std::size_t slot, bool reverse) const {
    return reverse ? lengths[slot] - 1 - t : t;
  }
};

BatchLayout make_layout(const std::vector<std::size_t>& lengths) {
  BatchLayout L;
  L.order.resize(lengths.size());
  std::iota(L.order.begin(), L.order.end(), 0);
  std::stable_sort(L.order.begin(), L.order.end(),
                   [&](std::size_t a, std::size_t b) { return lengths[a] > lengths[b]; });
  L.slot_of.resize(lengths.size());
  for (std::size_t s = 0; s < L.order.size(); ++s) {
    L.slot_of[L.order[s]] = s;
    L.lengths.push_back(lengths[L.order[s]]);
  }
  L.steps = L.lengths.empty() ? 0 : L.lengths.front();
  L.offset.push_back(0);
  for (std::size_t t = 0; t < L.steps; ++t) {
    std::size_t n = 0;
    while (n < L.lengths.size() && L.lengths[n] > t) ++n;
    L.active.push_back(n);
    L.offset.push_back(L.offset.back() + n);
  }
  return L;
}

struct DirectionTrace {
  Matrix x;       // N x I
  Matrix gates;   // N x 4H, after the nonlinearities
  Matrix c;       // N x H
  Matrix tanh_c;  // N x H
  Matrix h;       // N x H
};

// Writes the input vector for (sequence, position) into `out`.
using InputFn = std::function<void(std::size_t seq, std::size_t pos, double* out)>;

void run_direction(const BatchLayout& L, const InputFn& input, const LstmParams& p, bool reverse,
                   DirectionTrace& tr) {
  const std::size_t H = p.hidden();
  const std::size_t I = p.input();
  const std::size_t G = 4 * H;
  const std::size_t N = L.total();

  tr.x.resize(N, I);
  for (std::size_t t = 0; t < L.steps; ++t) {
    for (std::size_t b = 0; b < L.active[t]; ++b) {
      input(L.order[b], L.position(t, b, reverse), tr.x.row(L.row(t, b)));
    }
  }
  tr.gates.resize(N, G);
  tr.c.resize(N, H);
  tr.tanh_c.resize(N, H);
  tr.h.resize(N, H);
  if (N == 0) return;
  gemm_abt(tr.x.data.data(), p.wx.data.data(), tr.gates.data.data(), N, G, I, false);

  const double* bias = p.bias.row(0);
  for (std::size_t t = 0; t < L.steps; ++t) {
    const std::size_t n = L.active[t];
    const std::size_t off = L.offset[t];
    if (t > 0) {
      gemm_abt(tr.h.row(L.offset[t - 1]), p.wh.data.data(), tr.gates.row(off), n, G, H, true);
    }
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t r = off + b;
      double* a = tr.gates.row(r);
      const double* c_prev = t > 0 ? tr.c.row(L.offset[t - 1] + b) : nullptr;
      double* c = tr.c.row(r);
      double* tc = tr.tanh_c.row(r);
      double* h = tr.h.row(r);
      bool ok = true;
      for (std::size_t j = 0; j < H; ++j) {
        const double ig = sigmoid(a[j] + bias[j]);
        const double fg = sigmoid(a[H + j] + bias[H + j]);
        const double og = sigmoid(a[2 * H + j] + bias[2 * H + j]);
        const double gg = std::tanh(a[3 * H + j] + bias[3 * H + j]);
        a[j] = ig;
        a[H + j] = fg;
        a[2 * H + j] = og;
        a[3 * H + j] = gg;
        c[j] = fg * (c_prev ? c_prev[j] : 0.0) + ig * gg;
        tc[j] = std::tanh(c[j]);
        h[j] = og * tc[j];
        ok = ok && std::isfinite(c[j]) && std::isfinite(h[j]);
      }
      if (!ok) throw Error(ErrorCode::kNumericalError, "non-finite LSTM state");
    }
  }
}

// Backpropagates dH (N x H, packed like the trace) through one direction.
// Accumulates parameter gradients into `grads` and writes d(loss)/d(input)
// into dx (N x I).
void backward_direction(const BatchLayout& L, const LstmParams& p, const DirectionTrace& tr, const Matrix& dH,
                        LstmParams& grads, Matrix& dx) {
  const std::size_t H = p.hidden();
  const std::size_t I = p.input();
  const std::size_t G = 4 * H;
  const std::size_t N = L.total();
  dx.resize(N, I);
  if (N == 0) return;

  Matrix dA(N, G);
  const std::size_t width = L.active[0];
  Matrix dh_next(width, H), dc_next(width, H), dh_prev(width, H), dc_prev(width, H);

  for (std::size_t t = L.steps; t-- > 0;) {
    const std::size_t n = L.active[t];
    const std::size_t off = L.offset[t];
    const std::size_t n_next = t + 1 < L.steps ? L.active[t + 1] : 0;
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t r = off + b;
      const double* gates = tr.gates.row(r);
      const double* tc = tr.tanh_c.row(r);
      const double* c_prev = t > 0 ? tr.c.row(L.offset[t - 1] + b) : nullptr;
      const double* dh_in = dH.row(r);
      const bool carry = b < n_next;
      double* da = dA.row(r);
      double* dcp = dc_prev.row(b);
      for (std::size_t j = 0; j < H; ++j) {
        const double ig = gates[j];
        const double fg = gates[H + j];
        const double og = gates[2 * H + j];
        const double gg = gates[3 * H + j];
        const double dh = dh_in[j] + (carry ? dh_next(b, j) : 0.0);
        const double dc = dh * og * (1.0 - tc[j] * tc[j]) + (carry ? dc_next(b, j) : 0.0);
        const double cp = c_prev ? c_prev[j] : 0.0;
        da[j] = dc * gg * ig * (1.0 - ig);
        da[H + j] = dc * cp * fg * (1.0 - fg);
        da[2 * H + j] = dh * tc[j] * og * (1.0 - og);
        da[3 * H + j] = dc * ig * (1.0 - gg * gg);
        dcp[j] = dc * fg;
      }
    }
    if (t > 0) {
      std::fill(dh_prev.data.begin(), dh_prev.data.begin() + static_cast<std::ptrdiff_t>(n * H), 0.0);
      gemm_ab_acc(dA.row(off), p.wh.data.data(), dh_prev.data.data(), n, H, G);
    }
    std::swap(dh_next, dh_prev);
    std::swap(dc_next, dc_prev);
  }

  // Recurrent weights see h_{t-1}, which exists only for t >= 1.
  const std::size_t first = L.active[0];
  if (N > first) {
    Matrix h_prev(N - first, H);
    for (std::size_t t = 1; t < L.steps; ++t) {
      for (std::size_t b = 0; b < L.active[t]; ++b) {
        std::copy_n(tr.h.row(L.offset[t - 1] + b), H, h_prev.row(L.offset[t] - first + b));
      }
    }
    gemm_atb_acc(dA.row(first), h_prev.data.data(), grads.wh.data.data(), G, H, N - first);
  }
  gemm_atb_acc(dA.data.data(), tr.x.data.data(), grads.wx.data.data(), G, I, N);
  double* db = grads.bias.row(0);
  for (std::size_t r = 0; r < N; ++r) {
    const double* da = dA.row(r);
    for (std::size_t j = 0; j < G; ++j) db[j] += da[j];
  }
  gemm_ab_acc(dA.data.data(), p.wx.data.data(), dx.data.data(), N, I, G);
}

struct Encoded {
  std::vector<std::size_t> ids;
  std::vector<int> features;
  std::vector<int> tags;
};

Encoded encode(const Vocabulary& vocab, const std::vector<std::string>& words, const std::vector<Tag>& features,
               const std::vector<Tag>* tags) {
  if (words.size() != features.size() || (tags && tags->size() != words.size())) {
    throw Error(ErrorCode::kAlignmentError, "words, features and tags differ in length");
  }
  Encoded e;
  for (const auto& w : words) e.ids.push_back(vocab.id(w));
  for (Tag f : features) e.features.push_back(static_cast<int>(f));
  if (tags) {
    for (Tag t : *tags) e.tags.push_back(static_cast<int>(t));
  }
  return e;
}

// Forward (and optionally backward) pass over a batch of encoded sentences.
struct BatchPass {
  BatchLayout layout;
  DirectionTrace fwd;
  DirectionTrace bwd;
  std::vector<std::size_t> token_offset;  // per sequence, plus total
  Matrix hcat;                            // tokens x 2H
  Matrix logits;                          // tokens x num_tags

  void run(const TaggerModel& model, const std::vector<const Encoded*>& batch) {
    std::vector<std::size_t> lengths;
    token_offset.assign(1, 0);
    for (const Encoded* e : batch) {
      if (e->ids.empty()) throw Error(ErrorCode::kEmptySequence, "empty sentence");
      lengths.push_back(e->ids.size());
      token_offset.push_back(token_offset.back() + e->ids.size());
    }
    layout = make_layout(lengths);
    const std::size_t wd = model.hyper.word_dim;
    const std::size_t dd = model.hyper.dict_dim;
    const InputFn input = [&](std::size_t seq, std::size_t pos, double* out) {
      std::copy_n(model.word_embeddings.row(batch[seq]->ids[pos]), wd, out);
      std::copy_n(model.dict_embeddings.row(static_cast<std::size_t>(batch[seq]->features[pos])), dd, out + wd);
    };
    run_direction(layout, input, model.forward, false, fwd);
    run_direction(layout, input, model.backward, true, bwd);
    concat_outputs(model.hyper.hidden, batch.size());
    const std::size_t T = model.hyper.num_tags;
    logits.resize(hcat.rows, T);
    gemm_abt(hcat.data.data(), model.w_out.data.data(), logits.data.data(), hcat.rows, T, hcat.cols, false);
    for (std::size_t r = 0; r < logits.rows; ++r) {
      for (std::size_t k = 0; k < T; ++k) logits(r, k) += model.b_out(0, k);
    }
  }

  void concat_outputs(std::size_t H, std::size_t n_seq) {
    hcat.resize(token_offset.back(), 2 * H);
    for (std::size_t s = 0; s < n_seq; ++s) {
      const std::size_t slot = layout.slot_of[s];
      const std::size_t len = layout.lengths[slot];
      for (std::size_t p = 0; p < len; ++p) {
        double* out = hcat.row(token_offset[s] + p);
        std::copy_n(fwd.h.row(layout.row(p, slot)), H, out);
        std::copy_n(bwd.h.row(layout.row(len - 1 - p, slot)), H, out + H);
      }
    }
  }

  // Returns the summed cross-entropy. With `grads`, accumulates gradients of
  // (sum / scale_tokens).
  double loss(const TaggerModel& model, const std::vector<const Encoded*>& batch, TaggerModel* grads,
              double scale_tokens) {
    const std::size_t T = model.hyper.num_tags;
    const std::size_t H = model.hyper.hidden;
    double total = 0.0;
    Matrix dlogits(logits.rows, T);
    for (std::size_t s = 0; s < batch.size(); ++s) {
      for (std::size_t p = 0; p < batch[s]->ids.size(); ++p) {
        const std::size_t r = token_offset[s] + p;
        const double* z = logits.row(r);
        const double zmax = *std::max_element(z, z + T);
        double sum = 0.0;
        for (std::size_t k = 0; k < T; ++k) sum += std::exp(z[k] - zmax);
        const double lse = zmax + std::log(sum);
        const auto gold = static_cast<std::size_t>(batch[s]->tags[p]);
        total += lse - z[gold];
        for (std::size_t k = 0; k < T; ++k) {
          dlogits(r, k) = (std::exp(z[k] - lse) - (k == gold ? 1.0 : 0.0)) / scale_tokens;
        }
      }
    }
    if (!std::isfinite(total)) throw Error(ErrorCode::kNumericalError, "non-finite loss");
    if (!grads) return total;

    const std::size_t n_tok = logits.rows;
    gemm_atb_acc(dlogits.data.data(), hcat.data.data(), grads->w_out.data.data(), T, 2 * H, n_tok);
    for (std::size_t r = 0; r < n_tok; ++r) {
      for (std::size_t k = 0; k < T; ++k) grads->b_out(0, k) += dlogits(r, k);
    }
    Matrix dhcat(n_tok, 2 * H);
    gemm_ab_acc(dlogits.data.data(), model.w_out.data.data(), dhcat.data.data(), n_tok, 2 * H, T);

    Matrix dh_f(layout.total(), H), dh_b(layout.total(), H);
    for (std::size_t s = 0; s < batch.size(); ++s) {
      const std::size_t slot = layout.slot_of[s];
      const std::size_t len = layout.lengths[slot];
      for (std::size_t p = 0; p < len; ++p) {
        const double* d = dhcat.row(token_offset[s] + p);
        std::copy_n(d, H, dh_f.row(layout.row(p, slot)));
        std::copy_n(d + H, H, dh_b.row(layout.row(len - 1 - p, slot)));
      }
    }
    Matrix dx_f, dx_b;
    backward_direction(layout, model.forward, fwd, dh_f, grads->forward, dx_f);
    backward_direction(layout, model.backward, bwd, dh_b, grads->backward, dx_b);

    const std::size_t wd = model.hyper.word_dim;
    const std::size_t dd = model.hyper.dict_dim;
    const auto scatter = [&](const Matrix& dx, bool reverse) {
      for (std::size_t t = 0; t < layout.steps; ++t) {
        for (std::size_t b = 0; b < layout.active[t]; ++b) {
          const Encoded* e = batch[layout.order[b]];
          const std::size_t pos = layout.position(t, b, reverse);
          const double* d = dx.row(layout.row(t, b));
          double* gw = grads->word_embeddings.row(e->ids[pos]);
          double* gd = grads->dict_embeddings.row(static_cast<std::size_t>(e->features[pos]));
          for (std::size_t j = 0; j < wd; ++j) gw[j] += d[j];
          for (std::size_t j = 0; j < dd; ++j) gd[j] += d[wd + j];
        }
      }
    };
    scatter(dx_f, false);
    scatter(dx_b, true);
    return total;
  }
};

void fill_uniform(Matrix& m, Rng& rng, double range) {
  for (double& v : m.data) v = rng.uniform(-range, range);
}

// Little-endian binary container for the model file.
class Writer {
 public:
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u64(s.size());
    out_.append(s);
  }
  void bytes(std::string_view s) { out_.append(s); }
  void matrix(const std::string& name, const Matrix& m) {
    str(name);
    u64(m.rows);
    u64(m.cols);
    for (double v : m.data) f64(v);
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint64_t n = u64();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  void expect(std::string_view magic) {
    need(magic.size());
    if (in_.substr(pos_, magic.size()) != magic) throw Error(ErrorCode::kModelFormatError, "bad magic");
    pos_ += magic.size();
  }
  void matrix(const std::string& name, Matrix& m) {
    if (str() != name) throw Error(ErrorCode::kModelFormatError, "expected tensor " + name);
    const std::uint64_t rows = u64();
    const std::uint64_t cols = u64();
    if (rows != m.rows || cols != m.cols) throw Error(ErrorCode::kModelFormatError, "shape mismatch for " + name);
    for (double& v : m.data) v = f64();
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::uint64_t n) const {
    if (in_.size() - pos_ < n) throw Error(ErrorCode::kModelFormatError, "truncated model file");
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

constexpr std::string_view kMagic = "PIPERATE-BILSTM\n";
constexpr std::uint64_t kFormatVersion = 1;

}  // namespace

LstmParams make_lstm_params(std::size_t input, std::size_t hidden) {
  LstmParams p;
  p.wx.resize(4 * hidden, input);
  p.wh.resize(4 * hidden, hidden);
  p.bias.resize(1, 4 * hidden);
  return p;
}

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(const std::vector<std::string>& words) {
  words_.emplace_back(kUnkToken);
  index_.emplace(kUnkToken, kUnk);
  for (const auto& w : words) {
    if (index_.emplace(w, words_.size()).second) words_.push_back(w);
  }
}

std::size_t Vocabulary::id(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? kUnk : it->second;
}

TaggerModel TaggerModel::zeros(const TaggerHyperparameters& hyper, Vocabulary vocab) {
  TaggerModel m;
  m.hyper = hyper;
  m.vocab = std::move(vocab);
  m.word_embeddings.resize(m.vocab.size(), hyper.word_dim);
  m.dict_embeddings.resize(kNumTags, hyper.dict_dim);
  m.forward = make_lstm_params(hyper.input_dim(), hyper.hidden);
  m.backward = make_lstm_params(hyper.input_dim(), hyper.hidden);
  m.w_out.resize(hyper.num_tags, 2 * hyper.hidden);
  m.b_out.resize(1, hyper.num_tags);
  return m;
}

TaggerModel TaggerModel::initialize(const TaggerHyperparameters& hyper, Vocabulary vocab, std::uint64_t seed) {
  TaggerModel m = zeros(hyper, std::move(vocab));
  m.rng_seed = seed;
  Rng rng(Rng::derive(seed, 0));
  fill_uniform(m.word_embeddings, rng, hyper.init_range);
  fill_uniform(m.dict_embeddings, rng, hyper.init_range);
  const double lstm_range = 1.0 / std::sqrt(static_cast<double>(hyper.hidden));
  for (LstmParams* p : {&m.forward, &m.backward}) {
    fill_uniform(p->wx, rng, lstm_range);
    fill_uniform(p->wh, rng, lstm_range);
  }
  fill_uniform(m.w_out, rng, 1.0 / std::sqrt(static_cast<double>(2 * hyper.hidden)));
  return m;
}

std::vector<Matrix*> TaggerModel::parameters() {
  return {&word_embeddings, &dict_embeddings, &forward.wx, &forward.wh,   &forward.bias,
          &backward.wx,     &backward.wh,     &backward.bias, &w_out, &b_out};
}

std::vector<const Matrix*> TaggerModel::parameters() const {
  return {&word_embeddings, &dict_embeddings, &forward.wx, &forward.wh,   &forward.bias,
          &backward.wx,     &backward.wh,     &backward.bias, &w_out, &b_out};
}

const std::vector<std::string>& TaggerModel::parameter_names() {
  static const std::vector<std::string> kNames = {
      "word_embeddings", "dict_embeddings", "forward.wx",    "forward.wh", "forward.bias",
      "backward.wx",     "backward.wh",     "backward.bias", "w_out",      "b_out"};
  return kNames;
}

bool TaggerModel::finite() const {
  for (const Matrix* m : parameters()) {
    for (double v : m->data) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

std::string TaggerModel::serialize() const {
  Writer w;
  w.bytes(kMagic);
  w.u64(kFormatVersion);
  w.u64(hyper.word_dim);
  w.u64(hyper.dict_dim);
  w.u64(hyper.hidden);
  w.u64(hyper.num_tags);
  w.u64(hyper.batch_size);
  w.u64(hyper.epochs);
  w.f64(hyper.learning_rate);
  w.f64(hyper.beta1);
  w.f64(hyper.beta2);
  w.f64(hyper.epsilon);
  w.f64(hyper.clip_norm);
  w.f64(hyper.init_range);
  w.u64(rng_seed);
  // Row 0 (UNK) is implicit.
  w.u64(vocab.size() - 1);
  for (std::size_t i = 1; i < vocab.size(); ++i) w.str(vocab.words()[i]);
  const auto params = parameters();
  const auto& names = parameter_names();
  w.u64(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) w.matrix(names[i], *params[i]);
  return w.take();
}

TaggerModel TaggerModel::deserialize(std::string_view bytes) {
  Reader r(bytes);
  r.expect(kMagic);
  if (r.u64() != kFormatVersion) throw Error(ErrorCode::kModelFormatError, "unsupported model version");
  TaggerHyperparameters h;
  h.word_dim = r.u64();
  h.dict_dim = r.u64();
  h.hidden = r.u64();
  h.num_tags = r.u64();
  h.batch_size = r.u64();
  h.epochs = r.u64();
  h.learning_rate = r.f64();
  h.beta1 = r.f64();
  h.beta2 = r.f64();
  h.epsilon = r.f64();
  h.clip_norm = r.f64();
  h.init_range = r.f64();
  if (h.num_tags != kNumTags || h.hidden == 0 || h.word_dim == 0 || h.dict_dim == 0) {
    throw Error(ErrorCode::kModelFormatError, "invalid dimensions");
  }
  const std::uint64_t seed = r.u64();
  const std::uint64_t n_words = r.u64();
  std::vector<std::string> words;
  for (std::uint64_t i = 0; i < n_words; ++i) words.push_back(r.str());
  TaggerModel m = zeros(h, Vocabulary(words));
  if (m.vocab.size() != n_words + 1) throw Error(ErrorCode::kModelFormatError, "duplicate vocabulary entry");
  m.rng_seed = seed;
  const auto params = m.parameters();
  const auto& names = parameter_names();
  if (r.u64() != params.size()) throw Error(ErrorCode::kModelFormatError, "tensor count mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) r.matrix(names[i], *params[i]);
  if (!r.done()) throw Error(ErrorCode::kModelFormatError, "trailing bytes");
  if (!m.finite()) throw Error(ErrorCode::kNumericalError, "model contains non-finite parameters");
  return m;
}

void TaggerModel::save(const std::filesystem::path& path) const { write_file(path, serialize()); }

TaggerModel TaggerModel::load(const std::filesystem::path& path) { return deserialize(read_file(path)); }

LstmState lstm_step(std::span<const double> x, std::span<const double> h_prev, std::span<const double> c_prev,
                    const LstmParams& params) {
  const std::size_t H = params.hidden();
  const std::size_t I = params.input();
  if (x.size() != I || h_prev.size() != H || c_prev.size() != H) {
    throw Error(ErrorCode::kInvalidArgument, "lstm_step dimension mismatch");
  }
  std::vector<double> a(4 * H);
  gemm_abt(x.data(), params.wx.data.data(), a.data(), 1, 4 * H, I, false);
  gemm_abt(h_prev.data(), params.wh.data.data(), a.data(), 1, 4 * H, H, true);
  LstmState s{std::vector<double>(H), std::vector<double>(H)};
  const double* bias = params.bias.row(0);
  for (std::size_t j = 0; j < H; ++j) {
    const double ig = sigmoid(a[j] + bias[j]);
    const double fg = sigmoid(a[H + j] + bias[H + j]);
    const double og = sigmoid(a[2 * H + j] + bias[2 * H + j]);
    const double gg = std::tanh(a[3 * H + j] + bias[3 * H + j]);
    s.c[j] = fg * c_prev[j] + ig * gg;
    s.h[j] = og * std::tanh(s.c[j]);
    if (!std::isfinite(s.c[j]) || !std::isfinite(s.h[j])) {
      throw Error(ErrorCode::kNumericalError, "non-finite LSTM state");
    }
  }
  return s;
}

std::vector<double> embed(const std::string& word, Tag dict_feature, const TaggerModel& model) {
  const std::size_t wd = model.hyper.word_dim;
  const std::size_t dd = model.hyper.dict_dim;
  std::vector<double> out(wd + dd);
  std::copy_n(model.word_embeddings.row(model.vocab.id(word)), wd, out.begin());
  std::copy_n(model.dict_embeddings.row(static_cast<std::size_t>(dict_feature)), dd,
              out.begin() + static_cast<std::ptrdiff_t>(wd));
  return out;
}

std::vector<std::vector<double>> bilstm_forward(const std::vector<std::vector<double>>& inputs,
                                                const TaggerModel& model) {
  if (inputs.empty()) throw Error(ErrorCode::kEmptySequence, "bilstm_forward on empty sequence");
  const std::size_t I = model.hyper.input_dim();
  for (const auto& v : inputs) {
    if (v.size() != I) throw Error(ErrorCode::kInvalidArgument, "input vector has wrong dimension");
  }
  const BatchLayout layout = make_layout({inputs.size()});
  const InputFn input = [&](std::size_t, std::size_t pos, double* out) { std::copy_n(inputs[pos].data(), I, out); };
  DirectionTrace fwd, bwd;
  run_direction(layout, input, model.forward, false, fwd);
  run_direction(layout, input, model.backward, true, bwd);
  const std::size_t H = model.hyper.hidden;
  const std::size_t len = inputs.size();
  std::vector<std::vector<double>> out(len, std::vector<double>(2 * H));
  for (std::size_t p = 0; p < len; ++p) {
    std::copy_n(fwd.h.row(layout.row(p, 0)), H, out[p].begin());
    std::copy_n(bwd.h.row(layout.row(len - 1 - p, 0)), H, out[p].begin() + static_cast<std::ptrdiff_t>(H));
  }
  return out;
}

Matrix logits(const TaggerModel& model, const std::vector<std::string>& words, const std::vector<Tag>& features) {
  const Encoded e = encode(model.vocab, words, features, nullptr);
  BatchPass pass;
  pass.run(model, {&e});
  return pass.logits;
}

std::vector<Tag> predict(const TaggerModel& model, const std::vector<std::string>& words,
                         const std::vector<Tag>& features) {
  if (words.empty()) return {};
  const Matrix z = logits(model, words, features);
  std::vector<Tag> tags;
  for (std::size_t r = 0; r < z.rows; ++r) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < z.cols; ++k) {
      if (z(r, k) > z(r, best)) best = k;
    }
    tags.push_back(static_cast<Tag>(best));
  }
  return tags;
}

double loss_and_gradients(const TaggerModel& model, std::span<const TrainingExample> batch, TaggerModel* gradients) {
  if (batch.empty()) throw Error(ErrorCode::kInvalidArgument, "empty batch");
  std::vector<Encoded> encoded;
  for (const auto& ex : batch) encoded.push_back(encode(model.vocab, ex.words, ex.features, &ex.tags));
  std::vector<const Encoded*> ptrs;
  std::size_t tokens = 0;
  for (const auto& e : encoded) {
    ptrs.push_back(&e);
    tokens += e.ids.size();
  }
  if (gradients) {
    *gradients = TaggerModel::zeros(model.hyper, model.vocab);
  }
  BatchPass pass;
  pass.run(model, ptrs);
  return pass.loss(model, ptrs, gradients, static_cast<double>(tokens)) / static_cast<double>(tokens);
}

TrainResult train(const std::vector<TrainingExample>& corpus, const TaggerHyperparameters& hyper, std::uint64_t seed,
                  const EpochCallback& on_epoch) {
  if (corpus.empty()) throw Error(ErrorCode::kInvalidArgument, "empty training corpus");
  if (hyper.batch_size == 0) throw Error(ErrorCode::kInvalidArgument, "batch size must be positive");
  std::vector<std::string> words;
  for (const auto& ex : corpus) {
    if (ex.words.empty() || ex.words.size() != ex.tags.size() || ex.words.size() != ex.features.size()) {
      throw Error(ErrorCode::kAlignmentError, "training sentence with misaligned or missing tags");
    }
    words.insert(words.end(), ex.words.begin(), ex.words.end());
  }
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());

  TrainResult result;
  TaggerModel& model = result.model;
  model = TaggerModel::initialize(hyper, Vocabulary(words), seed);

  std::vector<Encoded> encoded;
  encoded.reserve(corpus.size());
  for (const auto& ex : corpus) encoded.push_back(encode(model.vocab, ex.words, ex.features, &ex.tags));

  const auto make_batch = [&](const std::vector<std::size_t>& idx, std::size_t begin, std::size_t end) {
    std::vector<const Encoded*> batch;
    for (std::size_t i = begin; i < end; ++i) batch.push_back(&encoded[idx[i]]);
    return batch;
  };
  const auto count_tokens = [](const std::vector<const Encoded*>& batch) {
    std::size_t n = 0;
    for (const Encoded* e : batch) n += e->ids.size();
    return n;
  };

  std::vector<std::size_t> order(encoded.size());
  std::iota(order.begin(), order.end(), 0);
  {
    double sum = 0.0;
    std::size_t tokens = 0;
    for (std::size_t b = 0; b < order.size(); b += hyper.batch_size) {
      const auto batch = make_batch(order, b, std::min(order.size(), b + hyper.batch_size));
      BatchPass pass;
      pass.run(model, batch);
      sum += pass.loss(model, batch, nullptr, 1.0);
      tokens += count_tokens(batch);
    }
    result.initial_loss = sum / static_cast<double>(tokens);
  }

  TaggerModel grads = TaggerModel::zeros(hyper, model.vocab);
  const auto params = model.parameters();
  const auto grad_params = grads.parameters();
  std::vector<std::vector<double>> m1, m2;
  for (const Matrix* p : params) {
    m1.emplace_back(p->size(), 0.0);
    m2.emplace_back(p->size(), 0.0);
  }
  Rng rng(Rng::derive(seed, 1));
  std::uint64_t step = 0;

  for (std::size_t epoch = 1; epoch <= hyper.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_sum = 0.0;
    std::size_t epoch_tokens = 0;
    for (std::size_t b = 0; b < order.size(); b += hyper.batch_size) {
      const auto batch = make_batch(order, b, std::min(order.size(), b + hyper.batch_size));
      const std::size_t tokens = count_tokens(batch);
      for (Matrix* g : grad_params) g->fill(0.0);
      BatchPass pass;
      pass.run(model, batch);
      epoch_sum += pass.loss(model, batch, &grads, static_cast<double>(tokens));
      epoch_tokens += tokens;

      double scale = 1.0;
      if (hyper.clip_norm > 0.0) {
        double norm2 = 0.0;
        for (const Matrix* g : grad_params) {
          for (double v : g->data) norm2 += v * v;
        }
        const double norm = std::sqrt(norm2);
        if (norm > hyper.clip_norm) scale = hyper.clip_norm / norm;
      }

      ++step;
      const double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(step));
      for (std::size_t k = 0; k < params.size(); ++k) {
        double* p = params[k]->data.data();
        const double* g = grad_params[k]->data.data();
        double* mk = m1[k].data();
        double* vk = m2[k].data();
        for (std::size_t i = 0; i < params[k]->size(); ++i) {
          const double gi = g[i] * scale;
          mk[i] = hyper.beta1 * mk[i] + (1.0 - hyper.beta1) * gi;
          vk[i] = hyper.beta2 * vk[i] + (1.0 - hyper.beta2) * gi * gi;
          p[i] -= hyper.learning_rate * (mk[i] / bc1) / (std::sqrt(vk[i] / bc2) + hyper.epsilon);
        }
      }
    }
    const double loss = epoch_sum / static_cast<double>(epoch_tokens);
    result.epoch_losses.push_back(loss);
    if (on_epoch) on_epoch(epoch, loss);
  }
  if (!model.finite()) throw Error(ErrorCode::kNumericalError, "training diverged");
  return result;
}

}  // namespace piperate
