#include <doctest.h>

#include <filesystem>
#include <random>
#include <set>

#include "oc4seq/errors.hpp"
#include "oc4seq/io.hpp"
#include "oc4seq/sequences.hpp"

using namespace oc4seq;
namespace fs = std::filesystem;

namespace {

std::vector<EventSequence> make_seqs(std::size_t n, Label label, const std::string& tag) {
  std::vector<EventSequence> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].id = tag + ":" + std::to_string(i + 1);
    out[i].events = {static_cast<EventId>(i % 7 + 1), 2, 3};
    out[i].label = label;
  }
  return out;
}

}  // namespace

TEST_CASE("parse_sequences reads one sequence per line") {
  const auto seqs = parse_sequences("5 3 3 9\n7\n", "f.txt", Label::kNormal);
  REQUIRE(seqs.size() == 2);
  CHECK(seqs[0].events == std::vector<EventId>{5, 3, 3, 9});
  CHECK(seqs[0].length() == 4);
  CHECK(seqs[0].id == "f.txt:1");
  CHECK(seqs[1].events == std::vector<EventId>{7});
  CHECK(seqs[1].length() == 1);
}

TEST_CASE("parse_sequences skips blank lines, accepts CRLF and tabs") {
  const auto seqs = parse_sequences("1 2\r\n\r\n  \n3\t4 \r\n", "x", Label::kAbnormal);
  REQUIRE(seqs.size() == 2);
  CHECK(seqs[1].events == std::vector<EventId>{3, 4});
  CHECK(seqs[1].id == "x:4");
  CHECK(seqs[1].abnormal());
}

TEST_CASE("parse_sequences reports the line and token of a bad id") {
  try {
    parse_sequences("5 x 3\n", "bad.txt", Label::kNormal);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 2);
  }
  CHECK_THROWS_AS(parse_sequences("1 2\n3 -4\n", "n", Label::kNormal), ParseError);
  CHECK_THROWS_AS(parse_sequences("1 2.5\n", "n", Label::kNormal), ParseError);
  CHECK_THROWS_AS(parse_sequences("99999999999999\n", "n", Label::kNormal), ParseError);
}

TEST_CASE("empty file is an error") {
  CHECK_THROWS_AS(parse_sequences("", "e", Label::kNormal), DataError);
  CHECK_THROWS_AS(parse_sequences("\n \n", "e", Label::kNormal), DataError);
}

TEST_CASE("save then load is the identity on event lists") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<EventId> id(0, 500);
  std::uniform_int_distribution<std::size_t> len(1, 30);
  std::vector<EventSequence> seqs(40);
  for (auto& s : seqs) {
    s.events.resize(len(rng));
    for (auto& e : s.events) e = id(rng);
  }
  const fs::path dir = fs::temp_directory_path() / "oc4seq_seq_test";
  fs::create_directories(dir);
  save_sequences(dir / "s.txt", seqs);
  const auto back = load_sequences(dir / "s.txt", Label::kNormal);
  REQUIRE(back.size() == seqs.size());
  for (std::size_t i = 0; i < seqs.size(); ++i) CHECK(back[i].events == seqs[i].events);
  CHECK(back[3].id == "s.txt:4");
  fs::remove_all(dir);
}

TEST_CASE("build_vocab is max id + 1") {
  std::vector<EventSequence> train(2);
  train[0].events = {1, 2};
  train[1].events = {5, 1};
  CHECK(build_vocab(train).size() == 6);
  train = {EventSequence{"a", {1}, Label::kNormal}};
  CHECK(build_vocab(train).size() == 2);
  CHECK_THROWS_AS(build_vocab(std::vector<EventSequence>{}), DataError);

  const EventVocab v(6);
  CHECK(v.map(5) == 5);
  CHECK(v.map(6) == EventVocab::kUnknown);
  CHECK(v.map(1000) == EventVocab::kUnknown);
}

TEST_CASE("build_vocab rejects the reserved id in training data") {
  std::vector<EventSequence> train{EventSequence{"a", {1, 0, 2}, Label::kNormal}};
  CHECK_THROWS_AS(build_vocab(train), DataError);
}

TEST_CASE("split_dataset on the BGL counts") {
  // 9,543 normal / 985 abnormal sequences.
  const auto normals = make_seqs(9543, Label::kNormal, "n");
  const auto abnormals = make_seqs(985, Label::kAbnormal, "a");
  const auto split = split_dataset(normals, abnormals, 6543, 42);
  auto count = [](const std::vector<EventSequence>& v, Label l) {
    return std::count_if(v.begin(), v.end(), [&](const auto& s) { return s.label == l; });
  };
  CHECK(split.train.size() == 6543);
  CHECK(count(split.val, Label::kNormal) == 900);
  CHECK(count(split.test, Label::kNormal) == 2100);
  CHECK(count(split.val, Label::kAbnormal) == 295);
  CHECK(count(split.test, Label::kAbnormal) == 690);
}

TEST_CASE("split_dataset 3/7 ratio and errors") {
  const auto normals = make_seqs(10, Label::kNormal, "n");
  const auto split = split_dataset(normals, {}, 0, 1);
  CHECK(split.train.empty());
  CHECK(split.val.size() == 3);
  CHECK(split.test.size() == 7);
  CHECK_THROWS_AS(split_dataset(normals, {}, 10, 1), ConfigError);
  CHECK_THROWS_AS(split_dataset(normals, {}, 11, 1), ConfigError);
}

TEST_CASE("split_dataset is deterministic, partitions, and keeps train normal") {
  const auto normals = make_seqs(137, Label::kNormal, "n");
  const auto abnormals = make_seqs(41, Label::kAbnormal, "a");
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto a = split_dataset(normals, abnormals, 60, seed);
    const auto b = split_dataset(normals, abnormals, 60, seed);
    std::vector<std::string> ids_a, ids_b;
    for (const auto* part : {&a.train, &a.val, &a.test}) {
      for (const auto& s : *part) ids_a.push_back(s.id);
    }
    for (const auto* part : {&b.train, &b.val, &b.test}) {
      for (const auto& s : *part) ids_b.push_back(s.id);
    }
    CHECK(ids_a == ids_b);
    CHECK(a.train.size() + a.val.size() + a.test.size() == normals.size() + abnormals.size());
    CHECK(std::set<std::string>(ids_a.begin(), ids_a.end()).size() == ids_a.size());
    for (const auto& s : a.train) CHECK_FALSE(s.abnormal());
  }
  const auto x = split_dataset(normals, abnormals, 60, 1);
  const auto y = split_dataset(normals, abnormals, 60, 2);
  bool differs = false;
  for (std::size_t i = 0; i < x.train.size(); ++i) differs |= x.train[i].id != y.train[i].id;
  CHECK(differs);
}

TEST_CASE("windows") {
  EventSequence seq{"s", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, Label::kNormal};
  const auto w = windows(seq, 3);
  REQUIRE(w.size() == 8);
  CHECK(std::vector<EventId>(w.front().begin(), w.front().end()) == std::vector<EventId>{1, 2, 3});
  CHECK(std::vector<EventId>(w.back().begin(), w.back().end()) == std::vector<EventId>{8, 9, 10});

  EventSequence three{"t", {4, 5, 6}, Label::kNormal};
  REQUIRE(windows(three, 3).size() == 1);
  CHECK(windows(three, 3)[0].size() == 3);

  EventSequence two{"u", {4, 5}, Label::kNormal};
  REQUIRE(windows(two, 3).size() == 1);
  CHECK(windows(two, 3)[0].size() == 2);

  CHECK_THROWS_AS(windows(seq, 0), ConfigError);
}

TEST_CASE("window starts cover 1..N-M+1 exactly once") {
  for (std::size_t n = 1; n <= 20; ++n) {
    EventSequence seq{"s", std::vector<EventId>(n, 1), Label::kNormal};
    for (std::size_t m = 1; m <= 12; ++m) {
      const auto w = windows(seq, m);
      CHECK(w.size() == std::max<std::size_t>(1, n >= m ? n - m + 1 : 1));
      CHECK(w.size() == window_count(n, m));
      for (std::size_t i = 0; i < w.size(); ++i) {
        CHECK(w[i].data() == seq.events.data() + i);
        CHECK(w[i].size() == std::min(n, m));
      }
    }
  }
}
