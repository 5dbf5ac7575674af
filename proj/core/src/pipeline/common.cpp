#include "common.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "bitext/numkit/matrix.hpp"

namespace bitext::pipeline::detail {

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

fs::path train_file(const PipelineConfig& c, const std::string& lang) {
  return c.paths.corpus / "train" / (lang + ".txt");
}
fs::path test_file(const PipelineConfig& c, const std::string& lang) {
  return c.paths.corpus / "test" / (lang + ".txt");
}
fs::path semrel_file(const PipelineConfig& c, const std::string& lang) {
  return c.paths.corpus / "test" / (lang + ".semrel.txt");
}
fs::path scores_file(const PipelineConfig& c) { return c.paths.corpus / "test" / "scores.tsv"; }
fs::path mine_file(const PipelineConfig& c, const std::string& lang) {
  return c.paths.corpus / "mine" / (lang + ".txt");
}
fs::path gold_file(const PipelineConfig& c) { return c.paths.corpus / "mine" / "gold.tsv"; }
fs::path bpe_file(const PipelineConfig& c) { return c.paths.models / "bpe.txt"; }
fs::path vocab_file(const PipelineConfig& c) { return c.paths.models / "vocab.txt"; }
fs::path features_file(const PipelineConfig& c) { return c.paths.out / "features.tsv"; }
fs::path model_file(const PipelineConfig& c) {
  return c.paths.out / ("model-" + feat::to_string(c.scenario) + "-" + to_string(c.classifier) + ".json");
}
fs::path mined_file(const PipelineConfig& c) {
  return c.paths.out / ("mined-" + feat::to_string(c.scenario) + "-" + to_string(c.classifier) + ".tsv");
}

void require_file(const fs::path& p, const std::string& what) {
  if (!fs::is_regular_file(p)) throw ConfigError(what + " not found: " + p.string());
}

std::vector<std::pair<std::size_t, fs::path>> list_checkpoints(const fs::path& models) {
  std::vector<std::pair<std::size_t, fs::path>> out;
  if (!fs::is_directory(models)) return out;
  for (const auto& entry : fs::directory_iterator(models)) {
    const auto name = entry.path().filename().string();
    if (name.size() <= 9 || name.rfind("ckpt-", 0) != 0 || entry.path().extension() != ".btf") continue;
    const auto digits = name.substr(5, name.size() - 9);
    std::size_t step = 0;
    const auto r = std::from_chars(digits.data(), digits.data() + digits.size(), step);
    if (r.ec != std::errc{} || r.ptr != digits.data() + digits.size()) continue;
    out.emplace_back(step, entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

fs::path resolve_checkpoint(const PipelineConfig& c) {
  if (c.checkpoint) {
    require_file(*c.checkpoint, "checkpoint");
    return *c.checkpoint;
  }
  const auto all = list_checkpoints(c.paths.models);
  if (all.empty()) throw ConfigError("no checkpoint in " + c.paths.models.string() + " (run train first)");
  return all.back().second;
}

std::string checkpoint_label(const fs::path& p) { return p.stem().string(); }

std::pair<std::string, std::string> pair_tags(const PipelineConfig& c, const std::string& a,
                                              const std::string& b) {
  if (c.stats.tag != "auto") return {c.stats.tag, c.stats.tag};
  for (const auto& l : c.languages()) {
    if (l != a && l != b) return {l, l};
  }
  return {b, a};
}

namespace {

constexpr const char* kFeatureHeader =
    "split\tsrc_id\ttgt_id\tlabel\tngram_cos\tcognate_cos\tsrc_tokens\ttgt_tokens\tsrc_chars\t"
    "tgt_chars\tlength_factor\tctx_cos";

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError(where + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

std::string format_features(const std::vector<FeatureRow>& rows) {
  std::string out = std::string(kFeatureHeader) + "\n";
  for (const auto& r : rows) {
    const auto& f = r.features;
    out += r.split + "\t" + r.src_id + "\t" + r.tgt_id + "\t" + std::to_string(r.label);
    for (double v : {f.ngram_cos, f.cognate_cos, f.src_tokens, f.tgt_tokens, f.src_chars, f.tgt_chars,
                     f.length_factor}) {
      out += "\t" + fmt(v);
    }
    out += "\t" + (f.ctx_cos ? fmt(*f.ctx_cos) : std::string());
    out += "\n";
  }
  return out;
}

std::vector<FeatureRow> parse_features(std::string_view content, const std::string& source) {
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t lineno = 0;
  std::vector<FeatureRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    const auto where = source + ":" + std::to_string(lineno);
    if (lineno == 1) {
      if (line != kFeatureHeader) throw ParseError(where + ": unexpected feature header");
      continue;
    }
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 12) throw ParseError(where + ": expected 12 columns, got " + std::to_string(cols.size()));
    FeatureRow r;
    r.split = cols[0];
    r.src_id = cols[1];
    r.tgt_id = cols[2];
    if (cols[3] != "0" && cols[3] != "1") throw ParseError(where + ": label must be 0 or 1");
    r.label = cols[3] == "1" ? 1 : 0;
    auto& f = r.features;
    f.ngram_cos = parse_double(cols[4], where);
    f.cognate_cos = parse_double(cols[5], where);
    f.src_tokens = parse_double(cols[6], where);
    f.tgt_tokens = parse_double(cols[7], where);
    f.src_chars = parse_double(cols[8], where);
    f.tgt_chars = parse_double(cols[9], where);
    f.length_factor = parse_double(cols[10], where);
    if (!cols[11].empty()) f.ctx_cos = parse_double(cols[11], where);
    rows.push_back(std::move(r));
  }
  if (lineno == 0) throw ParseError(source + ": empty feature file");
  return rows;
}

}  // namespace bitext::pipeline::detail
