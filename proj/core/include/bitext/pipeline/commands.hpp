#pragma once

#include <ostream>

#include "bitext/pipeline/config.hpp"

namespace bitext::pipeline {

// Each stage reads only files written by earlier stages and writes its
// reports under cfg.paths. Progress goes to `log`. Failures are thrown.
//
// corpus/train/<lang>.txt                 parallel training text (synth)
// corpus/test/<lang>.txt, <lang>.semrel.txt, scores.tsv
// corpus/mine/<src>.txt, <tgt>.txt, gold.tsv
// models/bpe.txt, vocab.txt               (bpe)
// models/ckpt-<step>.btf, train_report.json (train)
// out/embeddings.tsv                      (embed)
// out/stats.json, stats.tsv               (stats)
// out/projection.tsv                      (project)
// out/features.tsv, length_model.json     (features)
// out/model-<scenario>-<clf>.json, fit-<scenario>-<clf>.json (fit)
// out/mined-<scenario>-<clf>.tsv          (mine)
// out/eval-<scenario>-<clf>.json, extraction.tsv (eval)
void cmd_synth(const PipelineConfig& cfg, std::ostream& log);
void cmd_bpe(const PipelineConfig& cfg, std::ostream& log);
void cmd_train(const PipelineConfig& cfg, std::ostream& log);
void cmd_embed(const PipelineConfig& cfg, std::ostream& log);
void cmd_stats(const PipelineConfig& cfg, std::ostream& log);
void cmd_project(const PipelineConfig& cfg, std::ostream& log);
void cmd_features(const PipelineConfig& cfg, std::ostream& log);
void cmd_fit(const PipelineConfig& cfg, std::ostream& log);
void cmd_mine(const PipelineConfig& cfg, std::ostream& log);
void cmd_eval(const PipelineConfig& cfg, std::ostream& log);

}  // namespace bitext::pipeline
