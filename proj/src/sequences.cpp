#include "oc4seq/sequences.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <random>

#include "oc4seq/errors.hpp"
#include "oc4seq/io.hpp"

namespace oc4seq {

const char* to_string(Label label) {
  return label == Label::kAbnormal ? "abnormal" : "normal";
}

EventVocab::EventVocab(std::size_t size) : size_(size) {
  if (size < 2) throw ConfigError("vocabulary needs at least one event id");
}

std::vector<EventSequence> parse_sequences(const std::string& text,
                                           const std::string& name,
                                           Label label) {
  std::vector<EventSequence> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    EventSequence seq;
    std::size_t token_no = 0;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      ++token_no;
      std::string_view tok = line.substr(i, j - i);
      EventId value = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (ec == std::errc::result_out_of_range) {
        throw ParseError(name, line_no, token_no,
                         "event id out of range '" + std::string(tok) + "'");
      }
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(name, line_no, token_no,
                         "expected a non-negative integer, got '" +
                             std::string(tok) + "'");
      }
      seq.events.push_back(value);
      i = j;
    }
    if (seq.events.empty()) continue;
    seq.id = name + ":" + std::to_string(line_no);
    seq.label = label;
    out.push_back(std::move(seq));
  }
  if (out.empty()) throw DataError(name + ": no sequences in file");
  return out;
}

std::vector<EventSequence> load_sequences(const std::filesystem::path& path,
                                          Label label) {
  return parse_sequences(io::read_file(path), path.filename().string(), label);
}

std::string format_sequences(std::span<const EventSequence> seqs) {
  std::string out;
  for (const auto& seq : seqs) {
    for (std::size_t i = 0; i < seq.events.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(seq.events[i]);
    }
    out += '\n';
  }
  return out;
}

void save_sequences(const std::filesystem::path& path,
                    std::span<const EventSequence> seqs) {
  io::write_atomic(path, format_sequences(seqs));
}

EventVocab build_vocab(std::span<const EventSequence> train) {
  if (train.empty()) throw DataError("cannot build a vocabulary from no sequences");
  EventId max_id = 0;
  for (const auto& seq : train) {
    for (EventId e : seq.events) {
      if (e == EventVocab::kUnknown) {
        throw DataError(seq.id + ": event id 0 is reserved and may not appear in training data");
      }
      max_id = std::max(max_id, e);
    }
  }
  return EventVocab(static_cast<std::size_t>(max_id) + 1);
}

namespace {

// floor(0.3 * n) in integer arithmetic.
std::size_t validation_share(std::size_t n) { return n * 3 / 10; }

}  // namespace

DatasetSplit split_dataset(std::span<const EventSequence> normals,
                           std::span<const EventSequence> abnormals,
                           std::size_t n_train, std::uint64_t seed) {
  if (n_train >= normals.size()) {
    throw ConfigError("n_train (" + std::to_string(n_train) +
                      ") must be smaller than the number of normal sequences (" +
                      std::to_string(normals.size()) + ")");
  }
  std::mt19937_64 rng(seed);
  DatasetSplit split;
  split.seed = seed;

  std::vector<std::size_t> order(normals.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < n_train; ++i) split.train.push_back(normals[order[i]]);

  std::vector<std::size_t> rest(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                                order.end());
  std::shuffle(rest.begin(), rest.end(), rng);
  const std::size_t n_val = validation_share(rest.size());
  for (std::size_t i = 0; i < rest.size(); ++i) {
    (i < n_val ? split.val : split.test).push_back(normals[rest[i]]);
  }

  std::vector<std::size_t> ab(abnormals.size());
  std::iota(ab.begin(), ab.end(), 0);
  std::shuffle(ab.begin(), ab.end(), rng);
  const std::size_t ab_val = validation_share(ab.size());
  for (std::size_t i = 0; i < ab.size(); ++i) {
    (i < ab_val ? split.val : split.test).push_back(abnormals[ab[i]]);
  }
  return split;
}

std::size_t window_count(std::size_t n, std::size_t m) {
  return n >= m ? n - m + 1 : 1;
}

std::vector<std::span<const EventId>> windows(const EventSequence& seq,
                                              std::size_t m) {
  if (m == 0) throw ConfigError("window size must be positive");
  if (seq.events.empty()) throw DataError(seq.id + ": empty sequence");
  const std::span<const EventId> all(seq.events);
  if (all.size() < m) return {all};
  std::vector<std::span<const EventId>> out;
  out.reserve(all.size() - m + 1);
  for (std::size_t start = 0; start + m <= all.size(); ++start) {
    out.push_back(all.subspan(start, m));
  }
  return out;
}

}  // namespace oc4seq
