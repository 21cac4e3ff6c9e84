#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace oc4seq {

using EventId = std::uint32_t;

enum class Label { kNormal, kAbnormal };

const char* to_string(Label label);

/// One discrete event sequence, the unit of detection.
struct EventSequence {
  std::string id;
  std::vector<EventId> events;
  Label label = Label::kNormal;

  std::size_t length() const noexcept { return events.size(); }
  bool abnormal() const noexcept { return label == Label::kAbnormal; }
};

/// Event vocabulary learned from the training set. Id 0 is reserved for
/// events never seen at training time.
class EventVocab {
 public:
  static constexpr EventId kUnknown = 0;

  explicit EventVocab(std::size_t size);

  std::size_t size() const noexcept { return size_; }

  /// Maps out-of-range ids to kUnknown.
  EventId map(EventId id) const noexcept { return id < size_ ? id : kUnknown; }

 private:
  std::size_t size_;
};

struct DatasetSplit {
  std::vector<EventSequence> train;
  std::vector<EventSequence> val;
  std::vector<EventSequence> test;
  std::uint64_t seed = 0;
};

/// Parses one sequence per non-empty line of whitespace separated ids.
/// Sequence ids are "<filename>:<line>".
std::vector<EventSequence> load_sequences(const std::filesystem::path& path,
                                          Label label);

/// Same parser over an in-memory buffer; `name` is used for ids and errors.
std::vector<EventSequence> parse_sequences(const std::string& text,
                                           const std::string& name,
                                           Label label);

std::string format_sequences(std::span<const EventSequence> seqs);

/// Writes atomically (temp file + rename).
void save_sequences(const std::filesystem::path& path,
                    std::span<const EventSequence> seqs);

EventVocab build_vocab(std::span<const EventSequence> train);

/// Fraction of held-out items routed to validation (floor), rest to test.
inline constexpr double kValidationFraction = 0.3;

/// One-class split: `n_train` normals go to train; the remaining normals and
/// all abnormals are each shuffled and divided 3/7 into validation/test.
DatasetSplit split_dataset(std::span<const EventSequence> normals,
                           std::span<const EventSequence> abnormals,
                           std::size_t n_train, std::uint64_t seed);

/// Sliding windows of size m. A sequence shorter than m yields one window
/// holding the whole sequence.
std::vector<std::span<const EventId>> windows(const EventSequence& seq,
                                              std::size_t m);

/// max(1, n - m + 1)
std::size_t window_count(std::size_t n, std::size_t m);

}  // namespace oc4seq
