#include "bitext/corpus/bucc.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "bitext/error.hpp"

namespace bitext::corpus {

void MonoCorpus::add(std::string id, std::string text) {
  if (language_.empty()) {
    const auto dash = id.find('-');
    if (dash == std::string::npos || dash == 0) throw ParseError("sentence id '" + id + "' lacks a language prefix");
    language_ = id.substr(0, dash);
  }
  if (id.size() <= language_.size() + 1 || id.compare(0, language_.size(), language_) != 0 ||
      id[language_.size()] != '-') {
    throw ParseError("sentence id '" + id + "' does not start with '" + language_ + "-'");
  }
  if (!index_.emplace(id, sentences_.size()).second) throw ParseError("duplicate sentence id '" + id + "'");
  sentences_.push_back({std::move(id), std::move(text)});
}

std::optional<std::size_t> MonoCorpus::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& MonoCorpus::text(std::string_view id) const {
  auto i = find(id);
  if (!i) throw IntegrityError("unknown sentence id '" + std::string(id) + "' in " + language_ + " corpus");
  return sentences_[*i].text;
}

namespace {

template <typename F>
void for_each_line(std::string_view content, F&& f) {
  std::size_t line_no = 0, pos = 0;
  while (pos < content.size()) {
    auto end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    f(content.substr(pos, end - pos), ++line_no);
    pos = end + 1;
  }
}

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

}  // namespace

MonoCorpus parse_mono(std::string_view content, std::string language, const std::string& source) {
  MonoCorpus c(std::move(language));
  for_each_line(content, [&](std::string_view line, std::size_t no) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw ParseError(where(source, no) + "expected 'id<TAB>sentence'");
    }
    try {
      c.add(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
    } catch (const ParseError& e) {
      throw ParseError(where(source, no) + e.what());
    }
  });
  return c;
}

GoldPairs parse_gold(std::string_view content, const std::string& source) {
  GoldPairs g;
  std::set<std::pair<std::string, std::string>> seen;
  for_each_line(content, [&](std::string_view line, std::size_t no) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string_view::npos) {
      throw ParseError(where(source, no) + "expected 'src_id<TAB>tgt_id'");
    }
    std::pair<std::string, std::string> p{std::string(line.substr(0, tab)), std::string(line.substr(tab + 1))};
    if (!seen.insert(p).second) {
      throw ParseError(where(source, no) + "duplicate gold pair " + p.first + " / " + p.second);
    }
    g.push_back(std::move(p));
  });
  return g;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

MonoCorpus read_mono(const std::filesystem::path& path, std::string language) {
  return parse_mono(read_file(path), std::move(language), path.string());
}

GoldPairs read_gold(const std::filesystem::path& path) { return parse_gold(read_file(path), path.string()); }

void check_gold(const GoldPairs& gold, const MonoCorpus& src, const MonoCorpus& tgt) {
  for (const auto& [s, t] : gold) {
    if (!src.find(s)) throw IntegrityError("gold pair references unknown source id '" + s + "'");
    if (!tgt.find(t)) throw IntegrityError("gold pair references unknown target id '" + t + "'");
  }
}

BuccData read_bucc(const std::filesystem::path& src, const std::filesystem::path& tgt,
                   const std::filesystem::path& gold) {
  BuccData d{read_mono(src), read_mono(tgt), read_gold(gold)};
  check_gold(d.gold, d.src, d.tgt);
  return d;
}

std::string format_mono(const MonoCorpus& c) {
  std::string out;
  for (const auto& s : c.sentences()) {
    out += s.id;
    out += '\t';
    out += s.text;
    out += '\n';
  }
  return out;
}

std::string format_gold(const GoldPairs& g) {
  std::string out;
  for (const auto& [s, t] : g) {
    out += s;
    out += '\t';
    out += t;
    out += '\n';
  }
  return out;
}

void write_mono(const std::filesystem::path& path, const MonoCorpus& c) { write_file(path, format_mono(c)); }
void write_gold(const std::filesystem::path& path, const GoldPairs& g) { write_file(path, format_gold(g)); }

}  // namespace bitext::corpus
