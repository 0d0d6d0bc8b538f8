// Copyright 2026 The entail-forge Authors.
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

#include "entail_forge/embed.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <thread>

#include "entail_forge/binary_io.h"
#include "entail_forge/error.h"
#include "entail_forge/random.h"

namespace entail_forge::embed {
namespace {

constexpr std::string_view kModelMagic = "EFPVDBOW";
constexpr std::string_view kVectorsMagic = "EFDOCVEC";
constexpr std::uint32_t kFormatVersion = 1;

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// -log sigma(x), stable for large |x|.
double neg_log_sigmoid(double x) {
  if (x >= 0) return std::log1p(std::exp(-x));
  return -x + std::log1p(std::exp(x));
}

// Relaxed atomic access for the shared output matrix in parallel mode.
template <bool kAtomic>
float load(const float& x) {
  if constexpr (kAtomic) {
    return std::atomic_ref<const float>(x).load(std::memory_order_relaxed);
  } else {
    return x;
  }
}

template <bool kAtomic>
void store(float& x, float v) {
  if constexpr (kAtomic) {
    std::atomic_ref<float>(x).store(v, std::memory_order_relaxed);
  } else {
    x = v;
  }
}

template <bool kAtomic>
double step_kernel(std::span<float> para,
                   std::span<const std::span<float>> outputs, float lr,
                   std::span<float> scratch) {
  const std::size_t dim = para.size();
  std::fill(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(dim),
            0.0f);
  double loss = 0.0;
  for (std::size_t t = 0; t < outputs.size(); ++t) {
    std::span<float> out = outputs[t];
    double score = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      score += static_cast<double>(para[i]) * load<kAtomic>(out[i]);
    }
    const double label = t == 0 ? 1.0 : 0.0;
    loss += t == 0 ? neg_log_sigmoid(score) : neg_log_sigmoid(-score);
    const auto g = static_cast<float>(sigmoid(score) - label);
    for (std::size_t i = 0; i < dim; ++i) {
      const float o = load<kAtomic>(out[i]);
      scratch[i] += g * o;
      store<kAtomic>(out[i], o - lr * g * para[i]);
    }
  }
  for (std::size_t i = 0; i < dim; ++i) para[i] -= lr * scratch[i];
  return loss;
}

std::size_t draw_noise(Rng& rng, const std::vector<double>& cdf) {
  const double u = rng.uniform01() * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<std::size_t>(it - cdf.begin());
}

DocVector mean_vector(std::string id, const EmbeddingModel& model,
                      const EmbeddingModel::ArticleRows& rows) {
  std::vector<std::span<const float>> used;
  for (std::size_t r = rows.first; r < rows.first + rows.count; ++r) {
    if (model.paragraph_trained(r)) used.push_back(model.paragraph_vector(r));
  }
  return normalized_mean(std::move(id), used);
}

}  // namespace

DocVector normalized_mean(std::string article_id,
                          std::span<const std::span<const float>> paragraphs) {
  if (paragraphs.empty()) {
    throw DataError("article_vector: article \"" + article_id +
                    "\" has no embedded paragraphs");
  }
  DenseVector mean(paragraphs.front().size(), 0.0);
  for (const auto& v : paragraphs) {
    if (v.size() != mean.size()) {
      throw InvariantError("article_vector: paragraph dimension mismatch");
    }
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += v[i];
  }
  for (double& x : mean) x /= static_cast<double>(paragraphs.size());
  DocVector out;
  out.article_id = std::move(article_id);
  out.is_degenerate = !normalize(mean);
  out.components = std::move(mean);
  return out;
}

void PvDbowParams::validate() const {
  if (dim < 2) throw UsageError("pvdbow: dim must be >= 2");
  if (negatives < 1) throw UsageError("pvdbow: negatives must be >= 1");
  if (epochs < 1) throw UsageError("pvdbow: epochs must be >= 1");
  if (!(lr_end > 0.0) || !(lr_start > lr_end)) {
    throw UsageError("pvdbow: need lr_start > lr_end > 0");
  }
  if (!(noise_exponent >= 0.0)) {
    throw UsageError("pvdbow: noise_exponent must be >= 0");
  }
  if (threads < 1) throw UsageError("pvdbow: threads must be >= 1");
}

NegativeSamplingLoss negative_sampling_loss_grad(
    std::span<const double> v, std::span<const double> u_pos,
    const std::vector<std::span<const double>>& u_negs) {
  const std::size_t dim = v.size();
  if (u_pos.size() != dim) {
    throw InvariantError("negative_sampling_loss_grad: dimension mismatch");
  }
  for (const auto& u : u_negs) {
    if (u.size() != dim) {
      throw InvariantError("negative_sampling_loss_grad: dimension mismatch");
    }
  }
  NegativeSamplingLoss r;
  r.grad_v.assign(dim, 0.0);

  const double s_pos = dot(v, u_pos);
  r.loss = neg_log_sigmoid(s_pos);
  const double g_pos = sigmoid(s_pos) - 1.0;
  r.grad_pos.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    r.grad_v[i] += g_pos * u_pos[i];
    r.grad_pos[i] = g_pos * v[i];
  }
  for (const auto& u : u_negs) {
    const double s = dot(v, u);
    r.loss += neg_log_sigmoid(-s);
    const double g = sigmoid(s);
    DenseVector grad(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      r.grad_v[i] += g * u[i];
      grad[i] = g * v[i];
    }
    r.grad_negs.push_back(std::move(grad));
  }
  return r;
}

double negative_sampling_step(std::span<float> paragraph,
                              std::span<const std::span<float>> outputs,
                              float lr, std::span<float> scratch) {
  for (const auto& out : outputs) {
    if (out.size() != paragraph.size()) {
      throw InvariantError("negative_sampling_step: dimension mismatch");
    }
  }
  if (scratch.size() < paragraph.size()) {
    throw InvariantError("negative_sampling_step: scratch too small");
  }
  return step_kernel<false>(paragraph, outputs, lr, scratch);
}

std::vector<double> noise_distribution(const textproc::Vocabulary& vocab,
                                       double exponent) {
  std::vector<double> p(vocab.size());
  double total = 0.0;
  for (std::uint32_t i = 0; i < vocab.size(); ++i) {
    p[i] = std::pow(static_cast<double>(vocab.corpus_count(i)), exponent);
    total += p[i];
  }
  if (total > 0.0) {
    for (double& x : p) x /= total;
  }
  return p;
}

std::span<const float> EmbeddingModel::paragraph_vector(std::size_t row) const {
  if (row >= n_paragraphs()) throw InvariantError("paragraph row out of range");
  return {paragraphs_.data() + row * dim(), dim()};
}

std::span<const float> EmbeddingModel::word_vector(std::size_t word_id) const {
  if (word_id >= vocab_.size()) throw InvariantError("word id out of range");
  return {words_.data() + word_id * dim(), dim()};
}

const EmbeddingModel::ArticleRows* EmbeddingModel::find_article(
    std::string_view id) const {
  auto it = article_index_.find(std::string(id));
  if (it == article_index_.end()) return nullptr;
  return &article_rows_[it->second];
}

bool operator==(const EmbeddingModel& a, const EmbeddingModel& b) {
  auto same_params = [](const PvDbowParams& x, const PvDbowParams& y) {
    return x.dim == y.dim && x.negatives == y.negatives &&
           x.epochs == y.epochs && x.lr_start == y.lr_start &&
           x.lr_end == y.lr_end && x.min_count == y.min_count &&
           x.noise_exponent == y.noise_exponent && x.seed == y.seed;
  };
  auto same_rows = [](const auto& x, const auto& y) {
    return x.size() == y.size() &&
           std::equal(x.begin(), x.end(), y.begin(),
                      [](const EmbeddingModel::ArticleRows& l, const EmbeddingModel::ArticleRows& r) {
                        return l.first == r.first && l.count == r.count;
                      });
  };
  return same_params(a.params_, b.params_) &&
         a.vocab_.terms() == b.vocab_.terms() &&
         a.article_ids_ == b.article_ids_ &&
         same_rows(a.article_rows_, b.article_rows_) &&
         a.trained_ == b.trained_ && a.paragraphs_ == b.paragraphs_ &&
         a.words_ == b.words_ && a.noise_ == b.noise_ &&
         a.epoch_losses_ == b.epoch_losses_;
}

EmbeddingModel train_pvdbow(const std::vector<TokenizedArticle>& corpus,
                            const PvDbowParams& params) {
  params.validate();
  if (corpus.empty()) throw DataError("train_pvdbow: empty corpus");

  EmbeddingModel model;
  model.params_ = params;

  std::vector<const textproc::TokenList*> paragraph_tokens;
  std::vector<textproc::TokenList> docs;
  for (const auto& article : corpus) {
    if (!model.article_index_.emplace(article.id, model.article_ids_.size())
             .second) {
      throw DataError("train_pvdbow: duplicate article id \"" + article.id +
                      "\"");
    }
    model.article_ids_.push_back(article.id);
    model.article_rows_.push_back({docs.size(), article.paragraphs.size()});
    for (const auto& p : article.paragraphs) docs.push_back(p);
  }
  if (docs.empty()) throw DataError("train_pvdbow: corpus has no paragraphs");
  model.vocab_ = textproc::Vocabulary::build(docs, params.min_count);
  if (model.vocab_.empty()) {
    throw DataError("train_pvdbow: vocabulary empty after min_count=" +
                    std::to_string(params.min_count));
  }

  // Word ids per paragraph, dropping out-of-vocabulary tokens.
  std::vector<std::vector<std::uint32_t>> positions(docs.size());
  std::uint64_t total_positions = 0;
  model.trained_.assign(docs.size(), 0);
  for (std::size_t r = 0; r < docs.size(); ++r) {
    for (const auto& tok : docs[r]) {
      if (auto id = model.vocab_.find(tok)) positions[r].push_back(*id);
    }
    model.trained_[r] = positions[r].empty() ? 0 : 1;
    total_positions += positions[r].size();
  }

  const std::size_t dim = params.dim;
  Rng rng(params.seed);
  model.paragraphs_.resize(docs.size() * dim);
  const double half_width = 0.5 / static_cast<double>(dim);
  for (float& x : model.paragraphs_) {
    x = static_cast<float>(rng.uniform(-half_width, half_width));
  }
  model.words_.assign(model.vocab_.size() * dim, 0.0f);
  model.noise_ = noise_distribution(model.vocab_, params.noise_exponent);
  std::vector<double> cdf(model.noise_.size());
  std::partial_sum(model.noise_.begin(), model.noise_.end(), cdf.begin());

  const double total_steps =
      static_cast<double>(total_positions) * static_cast<double>(params.epochs);
  auto lr_at = [&](double done) {
    const double frac = total_steps > 0 ? std::min(1.0, done / total_steps) : 0;
    return static_cast<float>(params.lr_start -
                              (params.lr_start - params.lr_end) * frac);
  };

  // Trains the paragraphs order[begin, end) once; returns the summed loss.
  auto run_range = [&]<bool kAtomic>(const std::vector<std::size_t>& order,
                                     std::size_t begin, std::size_t end,
                                     Rng& local_rng, std::atomic<std::uint64_t>& done) {
    std::vector<float> scratch(dim);
    std::vector<std::span<float>> outputs;
    outputs.reserve(params.negatives + 1);
    double loss = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t r = order[k];
      std::span<float> para(model.paragraphs_.data() + r * dim, dim);
      for (std::uint32_t word : positions[r]) {
        const float lr =
            lr_at(static_cast<double>(done.fetch_add(1, std::memory_order_relaxed)));
        outputs.clear();
        outputs.emplace_back(model.words_.data() + std::size_t{word} * dim, dim);
        for (std::size_t n = 0; n < params.negatives; ++n) {
          const std::size_t noise_word = draw_noise(local_rng, cdf);
          if (noise_word == word) continue;
          outputs.emplace_back(model.words_.data() + noise_word * dim, dim);
        }
        loss += step_kernel<kAtomic>(para, outputs, lr, scratch);
      }
    }
    return loss;
  };

  std::vector<std::size_t> order(docs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::atomic<std::uint64_t> done{0};
  const bool parallel = !params.deterministic && params.threads > 1;
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    if (!parallel) {
      epoch_loss = run_range.template operator()<false>(order, 0, order.size(),
                                                        rng, done);
    } else {
      const auto workers = static_cast<std::size_t>(params.threads);
      std::vector<double> losses(workers, 0.0);
      std::vector<std::thread> pool;
      const std::size_t chunk = (order.size() + workers - 1) / workers;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          Rng local(params.seed ^ (0x9e3779b97f4a7c15ULL * (epoch * workers + w + 1)));
          const std::size_t begin = std::min(order.size(), w * chunk);
          const std::size_t end = std::min(order.size(), begin + chunk);
          losses[w] =
              run_range.template operator()<true>(order, begin, end, local, done);
        });
      }
      for (auto& t : pool) t.join();
      epoch_loss = std::accumulate(losses.begin(), losses.end(), 0.0);
    }
    model.epoch_losses_.push_back(
        total_positions > 0 ? epoch_loss / static_cast<double>(total_positions)
                            : 0.0);
  }
  return model;
}

DocVector article_vector(const EmbeddingModel& model,
                         const ingest::Article& article) {
  const auto* rows = model.find_article(article.id);
  if (rows == nullptr) {
    throw DataError("article_vector: article \"" + article.id +
                    "\" was not in training");
  }
  if (rows->count != article.paragraphs.size()) {
    throw InvariantError("article_vector: paragraph count of \"" + article.id +
                         "\" differs from training");
  }
  return mean_vector(article.id, model, *rows);
}

DocVector article_vector(const EmbeddingModel& model,
                         std::string_view article_id) {
  const auto* rows = model.find_article(article_id);
  if (rows == nullptr) {
    throw DataError("article_vector: article \"" + std::string(article_id) +
                    "\" was not in training");
  }
  return mean_vector(std::string(article_id), model, *rows);
}

DocVectorMap embed_corpus_pvdbow(const EmbeddingModel& model) {
  DocVectorMap out;
  for (const auto& id : model.article_ids()) {
    const auto* rows = model.find_article(id);
    bool any = false;
    for (std::size_t r = rows->first; r < rows->first + rows->count; ++r) {
      any = any || model.paragraph_trained(r);
    }
    if (any) {
      out.emplace(id, mean_vector(id, model, *rows));
    } else {
      out.emplace(id, DocVector{id, DenseVector(model.dim(), 0.0), true});
    }
  }
  return out;
}

DocVectorMap embed_corpus_tfidf(const std::vector<TokenizedArticle>& articles,
                                const textproc::Vocabulary& vocab) {
  DocVectorMap out;
  for (const auto& article : articles) {
    textproc::TokenList all;
    for (const auto& p : article.paragraphs) all.insert(all.end(), p.begin(), p.end());
    SparseVector v = textproc::tfidf_vector(all, vocab);
    const bool degenerate = v.is_zero;
    out.insert_or_assign(article.id,
                         DocVector{article.id, std::move(v), degenerate});
  }
  return out;
}

void EmbeddingModel::save(std::ostream& out) const {
  BinaryWriter w(out);
  w.magic(kModelMagic);
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(params_.dim));
  w.u32(static_cast<std::uint32_t>(params_.negatives));
  w.u32(static_cast<std::uint32_t>(params_.epochs));
  w.f64(params_.lr_start);
  w.f64(params_.lr_end);
  w.u64(params_.min_count);
  w.f64(params_.noise_exponent);
  w.u64(params_.seed);

  w.u64(vocab_.n_docs());
  w.u64(vocab_.total_token_count());
  w.u64(vocab_.size());
  for (std::uint32_t i = 0; i < vocab_.size(); ++i) {
    w.str(vocab_.term(i));
    w.u64(vocab_.df(i));
    w.u64(vocab_.corpus_count(i));
  }

  w.u64(article_ids_.size());
  for (std::size_t a = 0; a < article_ids_.size(); ++a) {
    w.str(article_ids_[a]);
    w.u64(article_rows_[a].first);
    w.u64(article_rows_[a].count);
  }
  w.u64(trained_.size());
  for (auto t : trained_) w.u8(t);
  for (float x : paragraphs_) w.f32(x);
  for (float x : words_) w.f32(x);
  for (double x : noise_) w.f64(x);
  w.u64(epoch_losses_.size());
  for (double x : epoch_losses_) w.f64(x);
  if (!out) throw DataError("failed writing embedding model");
}

EmbeddingModel EmbeddingModel::load(std::istream& in,
                                    const std::string& source_name) {
  BinaryReader r(in, source_name);
  r.expect_magic(kModelMagic);
  if (r.u32() != kFormatVersion) {
    throw DataError(source_name + ": unsupported model version");
  }
  EmbeddingModel m;
  m.params_.dim = r.u32();
  m.params_.negatives = r.u32();
  m.params_.epochs = r.u32();
  m.params_.lr_start = r.f64();
  m.params_.lr_end = r.f64();
  m.params_.min_count = r.u64();
  m.params_.noise_exponent = r.f64();
  m.params_.seed = r.u64();

  const std::uint64_t n_docs = r.u64();
  const std::uint64_t total_tokens = r.u64();
  const std::uint64_t n_terms = r.u64();
  std::vector<std::string> terms(n_terms);
  std::vector<std::uint64_t> df(n_terms);
  std::vector<std::uint64_t> cf(n_terms);
  for (std::uint64_t i = 0; i < n_terms; ++i) {
    terms[i] = r.str();
    df[i] = r.u64();
    cf[i] = r.u64();
  }
  m.vocab_ = textproc::Vocabulary::from_parts(std::move(terms), std::move(df),
                                              std::move(cf), n_docs, total_tokens);

  const std::uint64_t n_articles = r.u64();
  for (std::uint64_t a = 0; a < n_articles; ++a) {
    std::string id = r.str();
    ArticleRows rows;
    rows.first = r.u64();
    rows.count = r.u64();
    m.article_index_.emplace(id, m.article_ids_.size());
    m.article_ids_.push_back(std::move(id));
    m.article_rows_.push_back(rows);
  }
  const std::uint64_t n_rows = r.u64();
  m.trained_.resize(n_rows);
  for (auto& t : m.trained_) t = r.u8();
  m.paragraphs_.resize(n_rows * m.params_.dim);
  for (float& x : m.paragraphs_) x = r.f32();
  m.words_.resize(n_terms * m.params_.dim);
  for (float& x : m.words_) x = r.f32();
  m.noise_.resize(n_terms);
  for (double& x : m.noise_) x = r.f64();
  m.epoch_losses_.resize(r.u64());
  for (double& x : m.epoch_losses_) x = r.f64();
  return m;
}

void save_doc_vectors(std::ostream& out, const DocVectorMap& vectors) {
  BinaryWriter w(out);
  w.magic(kVectorsMagic);
  w.u32(kFormatVersion);
  w.u64(vectors.size());
  for (const auto& [id, v] : vectors) {
    w.str(id);
    w.u8(v.is_degenerate ? 1 : 0);
    w.vec(v.components);
  }
  if (!out) throw DataError("failed writing document vectors");
}

DocVectorMap load_doc_vectors(std::istream& in, const std::string& source_name) {
  BinaryReader r(in, source_name);
  r.expect_magic(kVectorsMagic);
  if (r.u32() != kFormatVersion) {
    throw DataError(source_name + ": unsupported vectors version");
  }
  DocVectorMap out;
  const std::uint64_t n = r.u64();
  for (std::uint64_t i = 0; i < n; ++i) {
    DocVector v;
    v.article_id = r.str();
    v.is_degenerate = r.u8() != 0;
    v.components = r.vec();
    std::string id = v.article_id;
    out.emplace(std::move(id), std::move(v));
  }
  return out;
}

void save_doc_vectors(const std::filesystem::path& path,
                      const DocVectorMap& vectors) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  save_doc_vectors(out, vectors);
}

DocVectorMap load_doc_vectors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read vectors file: " + path.string());
  return load_doc_vectors(in, path.string());
}

}  // namespace entail_forge::embed
