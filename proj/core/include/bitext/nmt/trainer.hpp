#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bitext/nmt/model.hpp"

namespace bitext::nmt {

struct TrainPair {
  std::vector<TokenId> source;  // tag first, <eos> last
  std::vector<TokenId> target;  // <eos> last
};

struct TrainConfig {
  std::size_t batch_size = 16;
  double lr = 1e-4;
  double rho = 0.95;
  double eps = 1e-6;
  double clip_norm = 1.0;
  std::size_t epochs = 1;
  std::size_t max_steps = 0;         // 0: no limit
  std::uint64_t seed = 1;
  std::size_t checkpoint_every = 0;  // 0: only at the end
  std::size_t max_len = text::kDefaultMaxSentenceLength;
  double target_loss = 0.0;          // stop after an epoch whose mean loss is below this

  void validate() const;
  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

// Builds a tagged training pair from raw parallel text; std::nullopt when
// either side exceeds max_len subword tokens.
template <typename Real>
std::optional<TrainPair> make_train_pair(const NmtModel<Real>& model, std::string_view source_text,
                                         std::string_view target_text,
                                         const std::string& target_lang, std::size_t max_len);

// Mean token cross-entropy of the batch without touching gradients.
template <typename Real>
double batch_loss(const NmtModel<Real>& model, std::span<const TrainPair> batch);

// Mean token cross-entropy; gradients of that mean are accumulated into the
// model's Params (call model.zero_grad() first for a clean gradient).
template <typename Real>
double batch_loss_and_grad(NmtModel<Real>& model, std::span<const TrainPair> batch);

// Forward, backward, global-norm clipping and one Adadelta update.
// Throws DivergenceError naming `step` when the loss is not finite.
template <typename Real>
double train_batch(NmtModel<Real>& model, std::span<const TrainPair> batch, const TrainConfig& cfg,
                   std::size_t step = 0);

struct TrainResult {
  std::size_t steps = 0;
  std::size_t epochs = 0;
  double last_epoch_loss = 0.0;
  std::vector<double> step_losses;
  std::vector<double> epoch_losses;
};

struct TrainHooks {
  std::function<void(std::size_t step, double loss)> on_step;
  std::function<void(std::size_t step)> on_checkpoint;
};

// Epoch loop with a seeded shuffle of `pairs` per epoch. Pairs longer than
// cfg.max_len are dropped.
template <typename Real>
TrainResult train(NmtModel<Real>& model, std::vector<TrainPair> pairs, const TrainConfig& cfg,
                  const TrainHooks& hooks = {});

}  // namespace bitext::nmt
