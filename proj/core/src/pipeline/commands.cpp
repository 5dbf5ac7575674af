#include "bitext/pipeline/commands.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "bitext/classify/cross_validation.hpp"
#include "bitext/classify/ensemble.hpp"
#include "bitext/classify/gradient_boosting.hpp"
#include "bitext/classify/metrics.hpp"
#include "bitext/classify/model_io.hpp"
#include "bitext/classify/svm.hpp"
#include "bitext/classify/threshold.hpp"
#include "bitext/corpus/sampling.hpp"
#include "bitext/corpus/synthetic.hpp"
#include "bitext/features/length_model.hpp"
#include "bitext/nmt/trainer.hpp"
#include "bitext/simspace/embedding.hpp"
#include "bitext/simspace/projection.hpp"
#include "bitext/simspace/stats.hpp"
#include "bitext/textproc/bpe.hpp"
#include "bitext/textproc/vocabulary.hpp"
#include "common.hpp"

namespace bitext::pipeline {

using namespace detail;
using nlohmann::json;

namespace {

bool has_language(const PipelineConfig& cfg, const std::string& l) {
  const auto& ls = cfg.languages();
  return std::find(ls.begin(), ls.end(), l) != ls.end();
}

corpus::MonoCorpus slice(const corpus::MonoCorpus& m, std::size_t lo, std::size_t hi) {
  corpus::MonoCorpus out(m.language());
  for (std::size_t i = lo; i < hi; ++i) out.add(m.sentences()[i].id, m.sentences()[i].text);
  return out;
}

// Unrelated partner of every test index: a seeded shuffle read as a cycle,
// so no sentence is paired with its own translation.
std::vector<std::size_t> unrel_partners(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  num::Rng rng = num::Rng(seed).fork(0x756e72);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::size_t> partner(n);
  for (std::size_t k = 0; k < n; ++k) partner[order[k]] = order[(k + 1) % n];
  return partner;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) return cols;
    start = tab + 1;
  }
}

std::string join_vector(std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += fmt(v[i]);
  }
  return s;
}

std::vector<corpus::MonoCorpus> read_parallel(const PipelineConfig& cfg, bool test) {
  std::vector<corpus::MonoCorpus> out;
  for (const auto& l : cfg.languages()) {
    const auto path = test ? test_file(cfg, l) : train_file(cfg, l);
    require_file(path, test ? "test corpus" : "training corpus");
    out.push_back(corpus::read_mono(path, l));
    if (out.back().size() != out.front().size()) {
      throw IntegrityError(path.string() + " has " + std::to_string(out.back().size()) + " sentences, " +
                           cfg.languages().front() + " has " + std::to_string(out.front().size()));
    }
  }
  return out;
}

json dump_stats(const std::optional<sim::SimStats>& s) { return s ? s->to_json() : json(nullptr); }

}  // namespace

// ---------------------------------------------------------------- synth

void cmd_synth(const PipelineConfig& cfg, std::ostream& log) {
  const auto& s = cfg.synth;
  for (const auto& l : {cfg.mining.src, cfg.mining.tgt}) {
    if (!has_language(cfg, l)) throw ConfigError("mining language '" + l + "' is not a synthetic language");
  }
  corpus::SynthSpec spec = s.spec;
  spec.seed = cfg.seed;
  spec.sentences = s.train_sentences + s.test_sentences + s.mine_sentences + 2 * s.mine_distractors;
  const auto syn = corpus::generate_synthetic(spec);

  const std::size_t test_lo = s.train_sentences, test_hi = test_lo + s.test_sentences;
  const std::size_t mine_hi = test_hi + s.mine_sentences;
  const std::size_t distract_hi = mine_hi + s.mine_distractors;

  for (const auto& l : cfg.languages()) {
    corpus::write_mono(train_file(cfg, l), slice(syn.mono.at(l), 0, test_lo));
    corpus::write_mono(test_file(cfg, l), slice(syn.mono.at(l), test_lo, test_hi));
    corpus::write_mono(semrel_file(cfg, l), slice(syn.semrel.at(l), test_lo, test_hi));
  }

  // Graded pairs: translations score 1, related variants the fraction of
  // concepts they keep, shuffled pairs 0.
  const auto partner = unrel_partners(s.test_sentences, cfg.seed);
  std::string scores;
  const auto& langs = cfg.languages();
  for (std::size_t ai = 0; ai < langs.size(); ++ai) {
    for (std::size_t bi = ai + 1; bi < langs.size(); ++bi) {
      const auto& a = langs[ai];
      const auto& b = langs[bi];
      for (std::size_t k = 0; k < s.test_sentences; ++k) {
        const std::size_t i = test_lo + k;
        const auto& base = syn.concepts[i];
        const auto& rel = syn.semrel_concepts[i];
        std::size_t kept = 0;
        for (std::size_t p = 0; p < base.size(); ++p) kept += base[p] == rel[p];
        const auto src = corpus::SynthCorpus::sentence_id(a, i);
        scores += src + "\t" + corpus::SynthCorpus::sentence_id(b, i) + "\t1\n";
        scores += src + "\t" + corpus::SynthCorpus::semrel_id(b, i) + "\t" +
                  fmt(static_cast<double>(kept) / static_cast<double>(base.size())) + "\n";
        scores += src + "\t" + corpus::SynthCorpus::sentence_id(b, test_lo + partner[k]) + "\t0\n";
      }
    }
  }
  corpus::write_file(scores_file(cfg), scores);

  const auto& ms = cfg.mining.src;
  const auto& mt = cfg.mining.tgt;
  corpus::MonoCorpus src = slice(syn.mono.at(ms), test_hi, mine_hi);
  corpus::MonoCorpus tgt = slice(syn.mono.at(mt), test_hi, mine_hi);
  // Distractors: sentences present on one side only.
  for (std::size_t i = mine_hi; i < distract_hi; ++i) {
    const auto& x = syn.mono.at(ms).sentences()[i];
    src.add(x.id, x.text);
  }
  for (std::size_t i = distract_hi; i < spec.sentences; ++i) {
    const auto& x = syn.mono.at(mt).sentences()[i];
    tgt.add(x.id, x.text);
  }
  corpus::GoldPairs gold;
  for (std::size_t i = test_hi; i < mine_hi; ++i) {
    gold.emplace_back(corpus::SynthCorpus::sentence_id(ms, i), corpus::SynthCorpus::sentence_id(mt, i));
  }
  corpus::write_mono(mine_file(cfg, ms), src);
  corpus::write_mono(mine_file(cfg, mt), tgt);
  corpus::write_gold(gold_file(cfg), gold);
  corpus::write_file(cfg.paths.corpus / "synth.json", spec.to_json().dump(2) + "\n");
  log << "synth: " << langs.size() << " languages, " << s.train_sentences << " training, " << s.test_sentences
      << " test, " << gold.size() << " gold mining pairs\n";
}

// ---------------------------------------------------------------- bpe

void cmd_bpe(const PipelineConfig& cfg, std::ostream& log) {
  std::vector<text::TokenSeq> seqs;
  for (const auto& l : cfg.languages()) {
    require_file(train_file(cfg, l), "training corpus");
    const auto mono = corpus::read_mono(train_file(cfg, l), l);
    for (const auto& s : mono.sentences()) seqs.push_back(text::tokenize(s.text, l));
  }
  if (seqs.empty()) throw EmptyInputError("no training sentences");
  const auto bpe = text::bpe_learn(seqs, cfg.bpe.merges);
  std::vector<text::TokenSeq> segmented;
  segmented.reserve(seqs.size());
  for (const auto& s : seqs) segmented.push_back(text::bpe_apply(bpe, s));
  const auto vocab = text::Vocabulary::build(segmented, cfg.languages(), cfg.bpe.vocab_size);
  std::filesystem::create_directories(cfg.paths.models);
  text::write_bpe(bpe_file(cfg), bpe);
  text::write_vocabulary(vocab_file(cfg), vocab);
  log << "bpe: " << bpe.size() << " merges, vocabulary of " << vocab.size() << "\n";
}

// ---------------------------------------------------------------- train

namespace {

template <typename Real>
void train_with(const PipelineConfig& cfg, const text::BpeModel& bpe, const text::Vocabulary& vocab,
                const std::vector<corpus::MonoCorpus>& sides, std::ostream& log) {
  const nmt::ModelDims dims{cfg.embed_dim, cfg.hidden_dim, vocab.size()};
  nmt::NmtModel<Real> model(dims, vocab, bpe, cfg.seed);

  std::vector<nmt::TrainPair> pairs;
  std::size_t dropped = 0;
  const auto& langs = cfg.languages();
  for (std::size_t a = 0; a < langs.size(); ++a) {
    for (std::size_t b = 0; b < langs.size(); ++b) {
      if (a == b) continue;
      for (std::size_t i = 0; i < sides[a].size(); ++i) {
        auto p = nmt::make_train_pair(model, sides[a].sentences()[i].text, sides[b].sentences()[i].text,
                                      langs[b], cfg.train.max_len);
        if (p) pairs.push_back(std::move(*p));
        else ++dropped;
      }
    }
  }
  if (pairs.empty()) throw EmptyInputError("no training pair within max_len");

  std::filesystem::create_directories(cfg.paths.models);
  for (const auto& [step, path] : list_checkpoints(cfg.paths.models)) std::filesystem::remove(path);

  nmt::TrainConfig tc = cfg.train;
  tc.seed = cfg.seed;
  json checkpoints = json::array();
  nmt::TrainHooks hooks;
  double last_loss = 0.0;
  hooks.on_step = [&](std::size_t step, double loss) {
    last_loss = loss;
    if (step % 500 == 0) log << "train: step " << step << " loss " << loss << "\n";
  };
  hooks.on_checkpoint = [&](std::size_t step) {
    const auto name = nmt::checkpoint_name(step);
    nmt::save_model(cfg.paths.models / name, model);
    checkpoints.push_back({{"name", name}, {"step", step}, {"batch_loss", last_loss}});
  };
  log << "train: " << pairs.size() << " pairs (" << dropped << " over max_len), "
      << num::to_string(std::is_same_v<Real, float> ? num::Precision::f32 : num::Precision::f64) << "\n";
  const auto result = nmt::train(model, pairs, tc, hooks);

  json report;
  report["precision"] = num::to_string(std::is_same_v<Real, float> ? num::Precision::f32 : num::Precision::f64);
  report["dims"] = {{"embed", dims.embed}, {"hidden", dims.hidden}, {"vocab", dims.vocab}};
  report["pairs"] = pairs.size();
  report["dropped"] = dropped;
  report["steps"] = result.steps;
  report["epochs"] = result.epochs;
  report["epoch_losses"] = result.epoch_losses;
  report["last_epoch_loss"] = result.last_epoch_loss;
  report["reached_target"] = tc.target_loss > 0.0 && result.last_epoch_loss < tc.target_loss;
  report["checkpoints"] = checkpoints;
  report["train"] = tc.to_json();
  corpus::write_file(cfg.paths.models / "train_report.json", report.dump(2) + "\n");
  log << "train: " << result.epochs << " epochs, " << result.steps << " steps, last epoch loss "
      << result.last_epoch_loss << "\n";
}

}  // namespace

void cmd_train(const PipelineConfig& cfg, std::ostream& log) {
  require_file(bpe_file(cfg), "BPE model");
  require_file(vocab_file(cfg), "vocabulary");
  const auto bpe = text::read_bpe(bpe_file(cfg));
  const auto vocab = text::read_vocabulary(vocab_file(cfg));
  for (const auto& l : cfg.languages()) vocab.tag_id(l);
  const auto sides = read_parallel(cfg, false);
  if (num::precision_from_env(cfg.precision) == num::Precision::f32) {
    train_with<float>(cfg, bpe, vocab, sides, log);
  } else {
    train_with<double>(cfg, bpe, vocab, sides, log);
  }
}

// ---------------------------------------------------------------- embed

void cmd_embed(const PipelineConfig& cfg, std::ostream& log) {
  const auto ckpt = resolve_checkpoint(cfg);
  const auto tests = read_parallel(cfg, true);
  const std::vector<std::string> tags =
      cfg.stats.tag == "auto" ? cfg.languages() : std::vector<std::string>{cfg.stats.tag};
  std::string out;
  with_model(ckpt, [&](const auto& model) {
    for (const auto& mono : tests) {
      for (const auto& s : mono.sentences()) {
        for (const auto& tag : tags) {
          const auto e = sim::embed_sentence(model, s.text, mono.language(), tag, cfg.stats.pooling);
          out += s.id + "\t" + mono.language() + "\t" + tag + "\t" + join_vector(e.vector) + "\n";
        }
      }
    }
  });
  corpus::write_file(cfg.paths.out / "embeddings.tsv", out);
  log << "embed: " << checkpoint_label(ckpt) << ", " << tests.size() * tests.front().size() * tags.size()
      << " rows\n";
}

// ---------------------------------------------------------------- stats

namespace {

struct ScoreRow {
  std::string src;
  std::string tgt;
  double score = 0.0;
};

std::vector<ScoreRow> read_scores(const std::filesystem::path& path) {
  std::vector<ScoreRow> rows;
  std::istringstream in(corpus::read_file(path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cols = split_tabs(line);
    if (cols.size() != 3) throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected 3 columns");
    try {
      std::size_t used = 0;
      const double v = std::stod(cols[2], &used);
      if (used != cols[2].size()) throw std::invalid_argument("trailing");
      rows.push_back({cols[0], cols[1], v});
    } catch (const std::exception&) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": bad score '" + cols[2] + "'");
    }
  }
  return rows;
}

bool has_prefix(const std::string& id, const std::string& lang) { return id.rfind(lang + "-", 0) == 0; }

}  // namespace

void cmd_stats(const PipelineConfig& cfg, std::ostream& log) {
  std::vector<std::filesystem::path> ckpts;
  if (cfg.checkpoint) {
    ckpts.push_back(resolve_checkpoint(cfg));
  } else {
    for (const auto& [step, p] : list_checkpoints(cfg.paths.models)) ckpts.push_back(p);
  }
  if (ckpts.empty()) throw ConfigError("no checkpoint in " + cfg.paths.models.string() + " (run train first)");

  const auto tests = read_parallel(cfg, true);
  const auto& langs = cfg.languages();
  std::vector<std::optional<corpus::MonoCorpus>> semrel(langs.size());
  for (std::size_t i = 0; i < langs.size(); ++i) {
    if (std::filesystem::is_regular_file(semrel_file(cfg, langs[i]))) {
      semrel[i] = corpus::read_mono(semrel_file(cfg, langs[i]), langs[i]);
    }
  }
  std::vector<ScoreRow> scores;
  if (std::filesystem::is_regular_file(scores_file(cfg))) scores = read_scores(scores_file(cfg));
  const std::size_t n = tests.front().size();
  const auto partner = unrel_partners(n, cfg.seed);

  json rows = json::array();
  std::string tsv =
      "checkpoint\tsrc\ttgt\ttag\ttrad\ttrad_std\tsemrel\tsemrel_std\tunrel\tunrel_std\ttagpair\ttagpair_std\t"
      "delta_tr_ur\tdelta_sigma\tpearson\n";
  for (const auto& ckpt : ckpts) {
    with_model(ckpt, [&](const auto& model) {
      for (std::size_t ai = 0; ai < langs.size(); ++ai) {
        for (std::size_t bi = ai + 1; bi < langs.size(); ++bi) {
          const auto& a = langs[ai];
          const auto& b = langs[bi];
          const auto [tag_a, tag_b] = pair_tags(cfg, a, b);
          std::string other;
          for (const auto& l : langs) {
            if (l != a && l != tag_a) {
              other = l;
              break;
            }
          }
          if (other.empty()) other = a;

          std::map<std::string, sim::SentenceEmbedding> emb;
          auto embed = [&](const corpus::Sentence& s, const std::string& lang, const std::string& tag) {
            auto it = emb.find(s.id);
            if (it == emb.end()) {
              it = emb.emplace(s.id, sim::embed_sentence(model, s.text, lang, tag, cfg.stats.pooling)).first;
            }
            return it->second;
          };
          std::vector<double> trad, rel, unrel, tagpair;
          for (std::size_t i = 0; i < n; ++i) {
            const auto ea = embed(tests[ai].sentences()[i], a, tag_a);
            trad.push_back(sim::cosine(ea, embed(tests[bi].sentences()[i], b, tag_b)));
            unrel.push_back(sim::cosine(ea, embed(tests[bi].sentences()[partner[i]], b, tag_b)));
            if (semrel[bi]) rel.push_back(sim::cosine(ea, embed(semrel[bi]->sentences().at(i), b, tag_b)));
            tagpair.push_back(sim::tag_pair_similarity(model, tests[ai].sentences()[i].text, a, {tag_a, other},
                                                       cfg.stats.pooling));
          }
          const auto st = sim::sim_stats(trad, sim::Category::trad);
          const auto su = sim::sim_stats(unrel, sim::Category::unrel);
          const auto sp = sim::sim_stats(tagpair, sim::Category::tagpair);
          std::optional<sim::SimStats> ss;
          if (semrel[bi]) ss = sim::sim_stats(rel, sim::Category::semrel);
          const auto d = sim::delta_tr_ur(st, su);

          std::optional<double> r;
          std::vector<double> sims, gold;
          for (const auto& row : scores) {
            if (!has_prefix(row.src, a) || !has_prefix(row.tgt, b)) continue;
            auto find = [&](const std::string& id, std::size_t li) -> const corpus::Sentence& {
              if (auto k = tests[li].find(id)) return tests[li].sentences()[*k];
              if (semrel[li]) {
                if (auto k = semrel[li]->find(id)) return semrel[li]->sentences()[*k];
              }
              throw IntegrityError(scores_file(cfg).string() + ": unknown sentence id " + id);
            };
            sims.push_back(sim::cosine(embed(find(row.src, ai), a, tag_a), embed(find(row.tgt, bi), b, tag_b)));
            gold.push_back(row.score);
          }
          if (sims.size() >= 2) r = sim::pearson(sims, gold);

          const auto label = checkpoint_label(ckpt);
          const std::string tag_text = tag_a == tag_b ? tag_a : tag_a + "/" + tag_b;
          rows.push_back({{"checkpoint", label},
                          {"src", a},
                          {"tgt", b},
                          {"tag", tag_text},
                          {"trad", st.to_json()},
                          {"semrel", dump_stats(ss)},
                          {"unrel", su.to_json()},
                          {"tagpair", sp.to_json()},
                          {"tagpair_tags", {tag_a, other}},
                          {"delta_tr_ur", {{"delta", d.delta}, {"sigma", d.sigma}}},
                          {"pearson", r ? json(*r) : json(nullptr)}});
          tsv += label + "\t" + a + "\t" + b + "\t" + tag_text + "\t" + fmt(st.mean) + "\t" + fmt(st.std) + "\t" +
                 (ss ? fmt(ss->mean) : "") + "\t" + (ss ? fmt(ss->std) : "") + "\t" + fmt(su.mean) + "\t" +
                 fmt(su.std) + "\t" + fmt(sp.mean) + "\t" + fmt(sp.std) + "\t" + fmt(d.delta) + "\t" +
                 fmt(d.sigma) + "\t" + (r ? fmt(*r) : "") + "\n";
          log << "stats: " << label << " " << a << "-" << b << " trad " << st.mean << " unrel " << su.mean
              << " delta " << d.delta << "\n";
        }
      }
    });
  }
  corpus::write_file(cfg.paths.out / "stats.json", json{{"rows", rows}}.dump(2) + "\n");
  corpus::write_file(cfg.paths.out / "stats.tsv", tsv);
}

// ---------------------------------------------------------------- project

void cmd_project(const PipelineConfig& cfg, std::ostream& log) {
  const auto ckpt = resolve_checkpoint(cfg);
  const auto tests = read_parallel(cfg, true);
  const std::size_t k = std::min(cfg.project.per_language, tests.front().size());
  std::vector<std::string> ids;
  std::vector<std::vector<double>> vecs;
  with_model(ckpt, [&](const auto& model) {
    for (const auto& mono : tests) {
      // Auto tagging uses the first other language for every sentence.
      std::string tag = cfg.stats.tag;
      if (tag == "auto") {
        for (const auto& l : cfg.languages()) {
          if (l != mono.language()) {
            tag = l;
            break;
          }
        }
      }
      for (std::size_t i = 0; i < k; ++i) {
        const auto& s = mono.sentences()[i];
        ids.push_back(s.id);
        vecs.push_back(sim::embed_sentence(model, s.text, mono.language(), tag, cfg.stats.pooling).vector);
      }
    }
  });
  num::Matrix data(vecs.size(), vecs.front().size());
  for (std::size_t r = 0; r < vecs.size(); ++r) std::copy(vecs[r].begin(), vecs[r].end(), data.row(r).begin());
  auto opts = cfg.project.tsne;
  opts.seed = cfg.seed;
  const auto proj = sim::project_2d(data, cfg.project.method, opts);
  std::string out;
  for (std::size_t r = 0; r < ids.size(); ++r) {
    out += ids[r] + "\t" + fmt(proj.points(r, 0)) + "\t" + fmt(proj.points(r, 1)) + "\n";
  }
  corpus::write_file(cfg.paths.out / "projection.tsv", out);
  log << "project: " << ids.size() << " points\n";
}

// ---------------------------------------------------------------- features

void cmd_features(const PipelineConfig& cfg, std::ostream& log) {
  const auto& ms = cfg.mining.src;
  const auto& mt = cfg.mining.tgt;
  require_file(mine_file(cfg, ms), "mining corpus");
  require_file(mine_file(cfg, mt), "mining corpus");
  require_file(gold_file(cfg), "gold standard");
  const auto data = corpus::read_bucc(mine_file(cfg, ms), mine_file(cfg, mt), gold_file(cfg));
  const auto balanced = corpus::build_balanced(data.gold, data.src, data.tgt, cfg.seed);
  const auto parts = corpus::split(balanced, cfg.mining.split, cfg.seed);

  std::vector<std::pair<std::string, std::string>> positives;
  for (const auto& p : parts.train) {
    if (p.label == 1) positives.emplace_back(data.src.text(p.src_id), data.tgt.text(p.tgt_id));
  }
  const auto lm = feat::fit_length_model(positives, ms, mt);

  std::optional<std::filesystem::path> ckpt;
  if (cfg.checkpoint || !list_checkpoints(cfg.paths.models).empty()) ckpt = resolve_checkpoint(cfg);
  if (!ckpt && cfg.scenario != feat::Scenario::comp) {
    throw ConfigError("scenario " + feat::to_string(cfg.scenario) + " needs a checkpoint (run train first)");
  }

  std::map<std::string, std::vector<double>> src_emb, tgt_emb;
  if (ckpt) {
    const auto [tag_s, tag_t] = pair_tags(cfg, ms, mt);
    with_model(*ckpt, [&](const auto& model) {
      for (const auto* part : {&parts.train, &parts.ensemble_train, &parts.heldout}) {
        for (const auto& p : *part) {
          if (!src_emb.count(p.src_id)) {
            src_emb[p.src_id] =
                sim::embed_sentence(model, data.src.text(p.src_id), ms, tag_s, cfg.stats.pooling).vector;
          }
          if (!tgt_emb.count(p.tgt_id)) {
            tgt_emb[p.tgt_id] =
                sim::embed_sentence(model, data.tgt.text(p.tgt_id), mt, tag_t, cfg.stats.pooling).vector;
          }
        }
      }
    });
  }

  std::vector<FeatureRow> rows;
  auto add = [&](const std::vector<corpus::LabeledPair>& part, const std::string& name) {
    for (const auto& p : part) {
      std::optional<double> ctx;
      if (ckpt) ctx = sim::cosine(src_emb.at(p.src_id), tgt_emb.at(p.tgt_id));
      rows.push_back({name, p.src_id, p.tgt_id, p.label,
                      feat::assemble(data.src.text(p.src_id), data.tgt.text(p.tgt_id), lm, ctx)});
    }
  };
  add(parts.train, "train");
  add(parts.ensemble_train, "ensemble_train");
  add(parts.heldout, "heldout");
  corpus::write_file(features_file(cfg), format_features(rows));
  corpus::write_file(cfg.paths.out / "length_model.json", lm.to_json().dump(2) + "\n");
  log << "features: " << rows.size() << " pairs (" << parts.train.size() << "/" << parts.ensemble_train.size()
      << "/" << parts.heldout.size() << ")" << (ckpt ? ", ctx from " + checkpoint_label(*ckpt) : "") << "\n";
}

// ---------------------------------------------------------------- fit

namespace {

cls::Dataset dataset_for(const std::vector<FeatureRow>& rows, const std::string& split, feat::Scenario scenario) {
  cls::Dataset ds;
  ds.feature_names = feat::feature_names(scenario);
  for (const auto& r : rows) {
    if (split != "all" && r.split != split) continue;
    ds.add(r.src_id + "|" + r.tgt_id, feat::to_vector(r.features, scenario), r.label);
  }
  return ds;
}

json metrics_json(const cls::Classifier& model, const cls::Dataset& ds) {
  std::vector<int> pred;
  pred.reserve(ds.rows());
  for (const auto& x : ds.x) pred.push_back(model.predict(x));
  auto j = cls::to_json(cls::prf1(pred, ds.y));
  j["accuracy"] = cls::accuracy(pred, ds.y);
  j["rows"] = ds.rows();
  return j;
}

cls::FitFn fit_function(const PipelineConfig& cfg) {
  auto gb = cfg.gb;
  gb.seed = cfg.seed;
  auto svm = cfg.svm;
  svm.seed = cfg.seed;
  switch (cfg.classifier) {
    case ClassifierKind::thrs:
      return [](const cls::Dataset& d) { return std::make_unique<cls::ThresholdModel>(cls::threshold_fit(d)); };
    case ClassifierKind::gb:
      return [gb](const cls::Dataset& d) { return std::make_unique<cls::GbModel>(cls::gb_fit(d, gb)); };
    case ClassifierKind::svm:
      return [svm](const cls::Dataset& d) { return std::make_unique<cls::SvmModel>(cls::svm_fit(d, svm)); };
    case ClassifierKind::ens:
      return [gb, svm](const cls::Dataset& d) {
        std::vector<std::shared_ptr<const cls::Classifier>> members;
        members.push_back(std::make_shared<cls::GbModel>(cls::gb_fit(d, gb)));
        members.push_back(std::make_shared<cls::SvmModel>(cls::svm_fit(d, svm)));
        return std::make_unique<cls::EnsembleModel>(std::move(members));
      };
  }
  throw ConfigError("unknown classifier");
}

}  // namespace

void cmd_fit(const PipelineConfig& cfg, std::ostream& log) {
  if (cfg.classifier == ClassifierKind::thrs && cfg.scenario != feat::Scenario::ctx) {
    throw UsageError("the threshold classifier needs scenario ctx, got " + feat::to_string(cfg.scenario));
  }
  require_file(features_file(cfg), "feature table");
  const auto rows = parse_features(corpus::read_file(features_file(cfg)), features_file(cfg).string());
  const auto train = dataset_for(rows, "train", cfg.scenario);
  if (train.rows() == 0) throw EmptyInputError(features_file(cfg).string() + " has no training rows");
  const auto fit = fit_function(cfg);
  const auto model = fit(train);
  std::filesystem::create_directories(cfg.paths.out);
  cls::save_classifier(*model, model_file(cfg));

  json report;
  report["scenario"] = feat::to_string(cfg.scenario);
  report["model"] = to_string(cfg.classifier);
  report["features"] = feat::feature_names(cfg.scenario);
  report["train"] = metrics_json(*model, train);
  const auto validation = dataset_for(rows, "ensemble_train", cfg.scenario);
  report["validation"] = validation.rows() ? metrics_json(*model, validation) : json(nullptr);
  if (const auto* t = dynamic_cast<const cls::ThresholdModel*>(model.get())) {
    report["threshold"] = t->threshold();
    report["warning"] = t->warning();
  }
  if (cfg.mining.cv_folds > 0) report["cv"] = cls::kfold_cv(train, cfg.mining.cv_folds, fit, cfg.seed).to_json();
  const auto name = "fit-" + feat::to_string(cfg.scenario) + "-" + to_string(cfg.classifier) + ".json";
  corpus::write_file(cfg.paths.out / name, report.dump(2) + "\n");
  log << "fit: " << to_string(cfg.classifier) << " on " << feat::to_string(cfg.scenario) << ", training F1 "
      << report["train"]["F1"].get<double>() << "\n";
}

// ---------------------------------------------------------------- mine

void cmd_mine(const PipelineConfig& cfg, std::ostream& log) {
  require_file(model_file(cfg), "classifier (run fit first)");
  require_file(features_file(cfg), "feature table");
  const auto model = cls::load_classifier(model_file(cfg));
  const auto rows = parse_features(corpus::read_file(features_file(cfg)), features_file(cfg).string());
  std::string out;
  std::size_t kept = 0, total = 0;
  for (const auto& r : rows) {
    if (cfg.mining.mine_split != "all" && r.split != cfg.mining.mine_split) continue;
    const auto x = feat::to_vector(r.features, cfg.scenario);
    const int pred = model->predict(x);
    out += r.src_id + "\t" + r.tgt_id + "\t" + fmt(model->predict_proba(x)) + "\t" + std::to_string(pred) + "\n";
    kept += pred;
    ++total;
  }
  if (total == 0) throw EmptyInputError("no candidate pairs in split " + cfg.mining.mine_split);
  corpus::write_file(mined_file(cfg), out);
  log << "mine: " << kept << " of " << total << " candidate pairs classified parallel\n";
}

// ---------------------------------------------------------------- eval

void cmd_eval(const PipelineConfig& cfg, std::ostream& log) {
  if (!std::filesystem::is_regular_file(gold_file(cfg))) {
    throw ConfigError("gold standard withheld: " + gold_file(cfg).string() + " not found");
  }
  require_file(mined_file(cfg), "mined pairs (run mine first)");
  const auto gold_pairs = corpus::read_gold(gold_file(cfg));
  const std::set<std::pair<std::string, std::string>> gold(gold_pairs.begin(), gold_pairs.end());

  std::istringstream in(corpus::read_file(mined_file(cfg)));
  std::string line;
  std::size_t lineno = 0;
  std::vector<int> pred, truth;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cols = split_tabs(line);
    if (cols.size() != 4 || (cols[3] != "0" && cols[3] != "1")) {
      throw ParseError(mined_file(cfg).string() + ":" + std::to_string(lineno) + ": malformed row");
    }
    pred.push_back(cols[3] == "1");
    truth.push_back(gold.count({cols[0], cols[1]}) ? 1 : 0);
  }
  if (pred.empty()) throw EmptyInputError(mined_file(cfg).string() + " is empty");
  const auto c = cls::confusion(pred, truth);
  const auto m = cls::prf1(c);
  json report = cls::to_json(m);
  report["scenario"] = feat::to_string(cfg.scenario);
  report["model"] = to_string(cfg.classifier);
  report["accuracy"] = cls::accuracy(pred, truth);
  report["rows"] = pred.size();
  report["confusion"] = {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
  const auto name = "eval-" + feat::to_string(cfg.scenario) + "-" + to_string(cfg.classifier) + ".json";
  corpus::write_file(cfg.paths.out / name, report.dump(2) + "\n");

  // One row per evaluated scenario/classifier found in out/.
  std::vector<std::filesystem::path> reports;
  for (const auto& e : std::filesystem::directory_iterator(cfg.paths.out)) {
    const auto fn = e.path().filename().string();
    if (fn.rfind("eval-", 0) == 0 && e.path().extension() == ".json") reports.push_back(e.path());
  }
  std::sort(reports.begin(), reports.end());
  std::string table = "scenario\tmodel\tP\tR\tF1\n";
  for (const auto& p : reports) {
    const auto j = json::parse(corpus::read_file(p));
    table += j.at("scenario").get<std::string>() + "\t" + j.at("model").get<std::string>() + "\t" +
             fmt(j.at("P").get<double>()) + "\t" + fmt(j.at("R").get<double>()) + "\t" +
             fmt(j.at("F1").get<double>()) + "\n";
  }
  corpus::write_file(cfg.paths.out / "extraction.tsv", table);
  log << "eval: " << feat::to_string(cfg.scenario) << "/" << to_string(cfg.classifier) << " P " << m.precision
      << " R " << m.recall << " F1 " << m.f1 << "\n";
}

}  // namespace bitext::pipeline
