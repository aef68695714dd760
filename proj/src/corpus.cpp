// Copyright 2026 The XLT Authors.
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

#include "xlt/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "xlt/common.hpp"
#include "xlt/stats.hpp"
#include "xlt/text.hpp"

namespace fs = std::filesystem;

namespace xlt::corpus {

const char* split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "?";
}

Split split_from_name(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "dev") return Split::kDev;
  if (name == "test") return Split::kTest;
  throw ValidationError("unknown split name: " + name);
}

size_t Corpus::total_size() const {
  size_t n = 0;
  for (const auto& s : splits) n += s.size();
  return n;
}

void Corpus::validate() const {
  std::set<std::string> ids;
  for (const auto& split : splits) {
    for (const auto& ex : split) {
      if (!ids.insert(ex.id).second) {
        throw ValidationError("corpus " + name + ": duplicate id " + ex.id);
      }
      if (ex.language != language || ex.domain != domain) {
        throw ValidationError("corpus " + name + ": example " + ex.id +
                              " disagrees on language/domain");
      }
      if (ex.text.empty()) {
        throw ValidationError("corpus " + name + ": example " + ex.id +
                              " has empty text");
      }
    }
  }
}

size_t SplitSizes::of(Split s) const {
  switch (s) {
    case Split::kTrain: return train;
    case Split::kDev: return dev;
    case Split::kTest: return test;
  }
  return 0;
}

namespace {

std::string tsv_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tsv_unescape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      switch (s[i + 1]) {
        case 't': out += '\t'; ++i; continue;
        case 'n': out += '\n'; ++i; continue;
        case 'r': out += '\r'; ++i; continue;
        case '\\': out += '\\'; ++i; continue;
        default: break;
      }
    }
    out += s[i];
  }
  return out;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::vector<LabeledExample> read_canonical_tsv(const std::string& path,
                                               const std::string& language,
                                               const std::string& domain) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open: " + path);
  std::vector<LabeledExample> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cols = strings::split(line, '\t');
    if (lineno == 1 && cols.size() == 3 && cols[0] == "id") continue;  // header
    if (cols.size() != 3) {
      throw ValidationError(path + " line " + std::to_string(lineno) +
                            ": expected id<TAB>text<TAB>label");
    }
    LabeledExample ex;
    ex.id = cols[0];
    ex.text = tsv_unescape(cols[1]);
    ex.label = cols[2];
    ex.language = language;
    ex.domain = domain;
    if (ex.text.empty()) {
      throw ValidationError(path + " line " + std::to_string(lineno) +
                            ": empty text");
    }
    out.push_back(std::move(ex));
  }
  return out;
}

void write_canonical_tsv(const std::string& path,
                         const std::vector<LabeledExample>& examples) {
  std::ostringstream out;
  out << "id\ttext\tlabel\n";
  for (const auto& ex : examples) {
    out << ex.id << '\t' << tsv_escape(ex.text) << '\t' << ex.label << '\n';
  }
  write_file(path, out.str());
}

Corpus read_corpus_dir(const std::string& dir, const std::string& name,
                       const std::string& language, const std::string& domain) {
  Corpus c;
  c.name = name;
  c.language = language;
  c.domain = domain;
  c.provenance = "loaded from " + dir;
  for (Split s : kAllSplits) {
    const std::string path =
        (fs::path(dir) / (std::string(split_name(s)) + ".tsv")).string();
    c.split(s) = read_canonical_tsv(path, language, domain);
  }
  c.validate();
  return c;
}

void write_corpus_dir(const std::string& dir, const Corpus& corpus) {
  fs::create_directories(dir);
  for (Split s : kAllSplits) {
    const std::string path =
        (fs::path(dir) / (std::string(split_name(s)) + ".tsv")).string();
    write_canonical_tsv(path, corpus.split(s));
  }
}

std::vector<std::string> parse_csv_line(const std::string& line) {
  std::vector<std::string> cols;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else {
      if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        cols.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
  }
  cols.push_back(cur);
  return cols;
}

namespace {

std::string binary_label(const std::string& raw, const std::string& where) {
  const std::string v = strings::trim(raw);
  if (v == "1") return std::string(kHateful);
  if (v == "0") return std::string(kNonHateful);
  throw ValidationError(where + ": expected binary label 0/1, got '" + raw +
                        "'");
}

}  // namespace

std::vector<LabeledExample> convert_hateval_csv(const std::string& path,
                                                const std::string& language,
                                                const std::string& domain) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open: " + path);
  std::vector<LabeledExample> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cols = parse_csv_line(line);
    if (lineno == 1 && !cols.empty() && strings::lower_ascii(cols[0]) == "id") {
      continue;
    }
    if (cols.size() < 3) {
      throw ValidationError(path + " line " + std::to_string(lineno) +
                            ": expected id,text,HS[,TR,AG]");
    }
    LabeledExample ex;
    ex.id = cols[0];
    ex.text = cols[1];
    ex.label = binary_label(cols[2], path + " line " + std::to_string(lineno));
    ex.language = language;
    ex.domain = domain;
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<LabeledExample> convert_ami_tsv(const std::string& path,
                                            const std::string& language,
                                            const std::string& domain) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open: " + path);
  std::vector<LabeledExample> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cols = strings::split(line, '\t');
    if (lineno == 1 && !cols.empty() && strings::lower_ascii(cols[0]) == "id") {
      continue;
    }
    if (cols.size() < 3) {
      throw ValidationError(path + " line " + std::to_string(lineno) +
                            ": expected id<TAB>text<TAB>misogynous");
    }
    LabeledExample ex;
    ex.id = cols[0];
    ex.text = tsv_unescape(cols[1]);
    ex.label = binary_label(cols[2], path + " line " + std::to_string(lineno));
    ex.language = language;
    ex.domain = domain;
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<LabeledExample> convert_haspeede_tsv(const std::string& path,
                                                 const std::string& language,
                                                 const std::string& domain) {
  // Same shape as AMI: id, text, 0/1.
  return convert_ami_tsv(path, language, domain);
}

Corpus merge_and_resplit(const Corpus& corpus, const SplitSizes& sizes,
                         uint64_t seed) {
  std::vector<LabeledExample> pool;
  pool.reserve(corpus.total_size());
  for (Split s : kAllSplits) {
    const auto& v = corpus.split(s);
    pool.insert(pool.end(), v.begin(), v.end());
  }
  if (sizes.total() > pool.size()) {
    throw ValidationError(
        "merge_and_resplit: requested " + std::to_string(sizes.total()) +
        " examples but only " + std::to_string(pool.size()) +
        " available (deficit " + std::to_string(sizes.total() - pool.size()) +
        ")");
  }
  Rng rng(seed);
  rng.shuffle(pool);

  Corpus out;
  out.name = corpus.name;
  out.language = corpus.language;
  out.domain = corpus.domain;
  out.provenance = corpus.provenance + "; resplit seed=" + std::to_string(seed);
  size_t cursor = 0;
  for (Split s : kAllSplits) {
    const size_t n = sizes.of(s);
    out.split(s).assign(pool.begin() + static_cast<ptrdiff_t>(cursor),
                        pool.begin() + static_cast<ptrdiff_t>(cursor + n));
    cursor += n;
  }
  return out;
}

double hate_ratio(const std::vector<LabeledExample>& examples,
                  const std::string& positive_label) {
  if (examples.empty()) throw ValidationError("hate_ratio: empty example list");
  size_t pos = 0;
  for (const auto& ex : examples) {
    if (ex.label == positive_label) ++pos;
  }
  return static_cast<double>(pos) / static_cast<double>(examples.size());
}

size_t default_length(const LabeledExample& ex) {
  return text::token_count(text::normalize_tweet(ex.text));
}

size_t SubsampleReport::total_attempts() const {
  size_t n = 0;
  for (const auto& r : per_split) n += r.attempts;
  return n;
}

std::string SubsampleReport::to_key_value_text() const {
  std::ostringstream out;
  out << "attempts_total = " << total_attempts() << "\n";
  for (Split s : kAllSplits) {
    const auto& r = per_split[static_cast<size_t>(s)];
    const char* name = split_name(s);
    out << name << ".attempts = " << r.attempts << "\n";
    out << name << ".ks_statistic = " << r.ks_stat << "\n";
    out << name << ".ks_pvalue = " << r.ks_pvalue << "\n";
    out << name << ".label_ratio_delta = " << r.ratio_delta << "\n";
    out << name << ".accepted = " << (r.accepted ? "true" : "false") << "\n";
  }
  return out.str();
}

Corpus comparable_subsample(const Corpus& corpus,
                            const SamplingConstraints& constraints,
                            const LengthFn& length_fn,
                            SubsampleReport* report) {
  if (constraints.max_attempts < 1) {
    throw ValidationError("comparable_subsample: max_attempts must be >= 1");
  }
  for (Split s : kAllSplits) {
    if (constraints.target_sizes.of(s) > corpus.split(s).size()) {
      throw ValidationError(
          std::string("comparable_subsample: target ") + split_name(s) +
          " size " + std::to_string(constraints.target_sizes.of(s)) +
          " exceeds source size " + std::to_string(corpus.split(s).size()));
    }
    if (constraints.target_sizes.of(s) == 0) {
      throw ValidationError("comparable_subsample: target sizes must be >= 1");
    }
  }

  Corpus out;
  out.name = corpus.name;
  out.language = corpus.language;
  out.domain = corpus.domain;
  out.provenance = corpus.provenance + "; comparable subsample seed=" +
                   std::to_string(constraints.rng_seed);
  SubsampleReport local_report;

  for (Split s : kAllSplits) {
    const auto& source = corpus.split(s);
    const size_t target = constraints.target_sizes.of(s);
    std::vector<double> source_lengths;
    source_lengths.reserve(source.size());
    for (const auto& ex : source) {
      source_lengths.push_back(static_cast<double>(length_fn(ex)));
    }
    const double source_ratio = hate_ratio(source, constraints.positive_label);

    Rng split_rng = Rng(constraints.rng_seed).fork(split_name(s));
    SplitSampleReport best;
    std::vector<size_t> best_indices;

    std::vector<size_t> indices(source.size());
    for (size_t attempt = 1; attempt <= constraints.max_attempts; ++attempt) {
      std::iota(indices.begin(), indices.end(), size_t{0});
      // Partial Fisher-Yates: the first `target` entries are the draw.
      for (size_t i = 0; i < target; ++i) {
        const size_t j = i + static_cast<size_t>(
                                 split_rng.below(indices.size() - i));
        std::swap(indices[i], indices[j]);
      }
      std::vector<size_t> drawn(indices.begin(),
                                indices.begin() + static_cast<ptrdiff_t>(target));
      std::sort(drawn.begin(), drawn.end());  // keep source order

      std::vector<double> lengths;
      lengths.reserve(target);
      size_t pos = 0;
      for (size_t idx : drawn) {
        lengths.push_back(source_lengths[idx]);
        if (source[idx].label == constraints.positive_label) ++pos;
      }
      SplitSampleReport r;
      r.attempts = attempt;
      r.ks_stat = stats::ks_statistic(lengths, source_lengths);
      r.ks_pvalue =
          stats::ks_two_sample_pvalue(r.ks_stat, target, source.size());
      r.ratio_delta = std::fabs(static_cast<double>(pos) /
                                    static_cast<double>(target) -
                                source_ratio);
      r.accepted = r.ks_pvalue >= constraints.ks_threshold &&
                   r.ratio_delta <= constraints.label_ratio_tolerance;

      const bool improves =
          best_indices.empty() ||
          std::make_pair(r.ks_pvalue, -r.ratio_delta) >
              std::make_pair(best.ks_pvalue, -best.ratio_delta);
      if (improves) {
        best = r;
        best_indices = drawn;
      }
      if (r.accepted) {
        best = r;
        best_indices = std::move(drawn);
        break;
      }
    }

    if (!best.accepted) {
      std::ostringstream msg;
      msg << "comparable_subsample: split " << split_name(s)
          << " unsatisfiable within " << constraints.max_attempts
          << " attempts; best ks_pvalue=" << best.ks_pvalue
          << " (threshold " << constraints.ks_threshold << ")"
          << ", best ratio_delta=" << best.ratio_delta << " (tolerance "
          << constraints.label_ratio_tolerance << ")";
      throw RuntimeFailure(msg.str());
    }

    auto& dest = out.split(s);
    dest.reserve(target);
    for (size_t idx : best_indices) dest.push_back(source[idx]);
    local_report.per_split[static_cast<size_t>(s)] = best;
  }

  if (report) *report = local_report;
  return out;
}

}  // namespace xlt::corpus
