#include "bitext/nmt/trainer.hpp"

#include <cmath>
#include <numeric>

#include "graph.hpp"

namespace bitext::nmt {

void TrainConfig::validate() const {
  if (batch_size == 0 || epochs == 0 || max_len == 0) {
    throw ConfigError("train config: batch_size, epochs and max_len must be positive");
  }
  if (!(lr > 0.0) || !(clip_norm > 0.0)) throw ConfigError("train config: lr and clip_norm must be positive");
  if (!(rho > 0.0 && rho < 1.0) || !(eps > 0.0)) throw ConfigError("train config: need 0 < rho < 1, eps > 0");
}

nlohmann::json TrainConfig::to_json() const {
  return {{"batch_size", batch_size}, {"lr", lr},
          {"rho", rho},               {"eps", eps},
          {"clip_norm", clip_norm},   {"epochs", epochs},
          {"max_steps", max_steps},   {"seed", seed},
          {"checkpoint_every", checkpoint_every},
          {"max_len", max_len},       {"target_loss", target_loss}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.batch_size = j.value("batch_size", c.batch_size);
  c.lr = j.value("lr", c.lr);
  c.rho = j.value("rho", c.rho);
  c.eps = j.value("eps", c.eps);
  c.clip_norm = j.value("clip_norm", c.clip_norm);
  c.epochs = j.value("epochs", c.epochs);
  c.max_steps = j.value("max_steps", c.max_steps);
  c.seed = j.value("seed", c.seed);
  c.checkpoint_every = j.value("checkpoint_every", c.checkpoint_every);
  c.max_len = j.value("max_len", c.max_len);
  c.target_loss = j.value("target_loss", c.target_loss);
  return c;
}

template <typename Real>
std::optional<TrainPair> make_train_pair(const NmtModel<Real>& model, std::string_view source_text,
                                         std::string_view target_text,
                                         const std::string& target_lang, std::size_t max_len) {
  auto src = text::bpe_apply(model.bpe(), text::tokenize(source_text));
  auto tgt = text::bpe_apply(model.bpe(), text::tokenize(target_text));
  if (src.tokens.empty() || tgt.tokens.empty()) return std::nullopt;
  if (src.tokens.size() > max_len || tgt.tokens.size() > max_len) return std::nullopt;
  return TrainPair{text::encode(model.vocab(), src, target_lang), text::encode(model.vocab(), tgt)};
}

namespace {

std::size_t target_tokens(std::span<const TrainPair> batch) {
  std::size_t n = 0;
  for (const auto& p : batch) n += p.target.size();
  return n;
}

}  // namespace

template <typename Real>
double batch_loss(const NmtModel<Real>& model, std::span<const TrainPair> batch) {
  if (batch.empty()) throw EmptyInputError("batch_loss: empty batch");
  double total = 0.0;
  for (const auto& p : batch) total += detail::sentence_loss_no_grad(model, p.source, p.target);
  return total / static_cast<double>(target_tokens(batch));
}

template <typename Real>
double batch_loss_and_grad(NmtModel<Real>& model, std::span<const TrainPair> batch) {
  if (batch.empty()) throw EmptyInputError("batch_loss_and_grad: empty batch");
  const std::size_t tokens = target_tokens(batch);
  const Real scale = Real(1) / static_cast<Real>(tokens);
  double total = 0.0;
  for (const auto& p : batch) total += detail::sentence_loss(model, p.source, p.target, scale);
  return total / static_cast<double>(tokens);
}

template <typename Real>
double train_batch(NmtModel<Real>& model, std::span<const TrainPair> batch, const TrainConfig& cfg,
                   std::size_t step) {
  model.zero_grad();
  const double loss = batch_loss_and_grad(model, batch);
  if (!std::isfinite(loss)) {
    throw DivergenceError("training diverged at step " + std::to_string(step) + ": loss is not finite");
  }
  auto params = model.params();
  num::clip_global_norm<Real>(params, cfg.clip_norm);
  const num::AdadeltaConfig opt{cfg.rho, cfg.eps, cfg.lr};
  try {
    for (auto* p : params) num::adadelta_step(*p, opt);
  } catch (const DivergenceError& e) {
    throw DivergenceError("training diverged at step " + std::to_string(step) + ": " + e.what());
  }
  return loss;
}

template <typename Real>
TrainResult train(NmtModel<Real>& model, std::vector<TrainPair> pairs, const TrainConfig& cfg,
                  const TrainHooks& hooks) {
  cfg.validate();
  std::erase_if(pairs, [&](const TrainPair& p) {
    return p.source.size() > cfg.max_len + 2 || p.target.size() > cfg.max_len + 1;
  });
  if (pairs.empty()) throw EmptyInputError("train: no usable training pairs");

  num::Rng rng(cfg.seed);
  std::vector<std::size_t> order(pairs.size());
  TrainResult result;
  std::vector<TrainPair> batch;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_sum = 0.0;
    std::size_t epoch_batches = 0;
    bool stop = false;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      batch.clear();
      for (std::size_t i = start; i < std::min(order.size(), start + cfg.batch_size); ++i) {
        batch.push_back(pairs[order[i]]);
      }
      const double loss = train_batch(model, std::span<const TrainPair>(batch), cfg, result.steps);
      ++result.steps;
      result.step_losses.push_back(loss);
      epoch_sum += loss;
      ++epoch_batches;
      if (hooks.on_step) hooks.on_step(result.steps, loss);
      if (cfg.checkpoint_every && result.steps % cfg.checkpoint_every == 0 && hooks.on_checkpoint) {
        hooks.on_checkpoint(result.steps);
      }
      if (cfg.max_steps && result.steps >= cfg.max_steps) {
        stop = true;
        break;
      }
    }
    ++result.epochs;
    result.last_epoch_loss = epoch_sum / static_cast<double>(epoch_batches);
    result.epoch_losses.push_back(result.last_epoch_loss);
    if (stop || (cfg.target_loss > 0.0 && result.last_epoch_loss < cfg.target_loss)) break;
  }
  if (hooks.on_checkpoint && (!cfg.checkpoint_every || result.steps % cfg.checkpoint_every != 0)) {
    hooks.on_checkpoint(result.steps);
  }
  return result;
}

#define BITEXT_TRAIN_INSTANTIATE(R)                                                                \
  template std::optional<TrainPair> make_train_pair(const NmtModel<R>&, std::string_view,          \
                                                    std::string_view, const std::string&,          \
                                                    std::size_t);                                  \
  template double batch_loss(const NmtModel<R>&, std::span<const TrainPair>);                      \
  template double batch_loss_and_grad(NmtModel<R>&, std::span<const TrainPair>);                   \
  template double train_batch(NmtModel<R>&, std::span<const TrainPair>, const TrainConfig&,        \
                              std::size_t);                                                        \
  template TrainResult train(NmtModel<R>&, std::vector<TrainPair>, const TrainConfig&,             \
                             const TrainHooks&);

BITEXT_TRAIN_INSTANTIATE(float)
BITEXT_TRAIN_INSTANTIATE(double)
#undef BITEXT_TRAIN_INSTANTIATE

}  // namespace bitext::nmt
