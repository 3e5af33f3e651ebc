#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "seqkd/codec.hpp"
#include "seqkd/io.hpp"

#include "oracles.hpp"

using namespace seqkd;

namespace {

const double kInvSqrt2 = std::sqrt(0.5);

bool in_alphabet(StateLetter l, int bit) {
  return bit == 0 ? (l == StateLetter::A || l == StateLetter::B)
                  : (l == StateLetter::C || l == StateLetter::D);
}

}  // namespace

TEST_CASE("generate_pair is deterministic, alphabet-correct and balanced") {
  Rng a(123), b(123), c(124);
  auto pair1 = generate_pair(200, a);
  auto pair2 = generate_pair(200, b);
  auto pair3 = generate_pair(200, c);
  CHECK(pair1.s0 == pair2.s0);
  CHECK(pair1.s1 == pair2.s1);
  CHECK(pair1.s0 != pair3.s0);

  Rng rng(5);
  auto big = generate_pair(100000, rng);
  std::size_t count_a = 0, count_c = 0;
  for (std::size_t i = 0; i < big.length(); ++i) {
    CHECK(in_alphabet(big.s0[i], 0));
    CHECK(in_alphabet(big.s1[i], 1));
    if (big.s0[i] == StateLetter::A) ++count_a;
    if (big.s1[i] == StateLetter::C) ++count_c;
  }
  double half_width = 4.0 * std::sqrt(0.25 * 100000.0);  // 4 sigma on the count
  CHECK(std::abs(static_cast<double>(count_a) - 50000.0) < half_width);
  CHECK(std::abs(static_cast<double>(count_c) - 50000.0) < half_width);
}

TEST_CASE("regular_pair puts A at even and C at odd events") {
  auto pair = regular_pair(6);
  // events are 1-indexed, so position 0 is event 1 (odd)
  for (std::size_t i = 0; i < 6; ++i) {
    bool even_event = (i + 1) % 2 == 0;
    CHECK(pair.s0[i] == (even_event ? StateLetter::A : StateLetter::B));
    CHECK(pair.s1[i] == (even_event ? StateLetter::D : StateLetter::C));
  }
}

TEST_CASE("pair text round trip") {
  Rng rng(17);
  auto pair = generate_pair(40, rng);
  auto back = OperatingSequencePair::from_text(pair.to_text());
  CHECK(back.s0 == pair.s0);
  CHECK(back.s1 == pair.s1);
}

TEST_CASE("letter preparation per variant") {
  PhotonState b = prepare_letter(StateLetter::B, VariantId::V1);
  REQUIRE(b.branches().size() == 2);
  CHECK(b.find("r")->polarization == Angle(0.0));
  CHECK(b.find("s")->polarization == Angle(90.0));
  CHECK(std::abs(b.find("r")->amplitude) == doctest::Approx(kInvSqrt2).epsilon(1e-15));
  CHECK(std::abs(b.find("s")->amplitude) == doctest::Approx(kInvSqrt2).epsilon(1e-15));

  PhotonState c = prepare_letter(StateLetter::C, VariantId::V1);
  CHECK(c.find("s")->polarization == Angle(45.0));

  PhotonState c2 = prepare_letter(StateLetter::C, VariantId::V2);
  REQUIRE(c2.branches().size() == 1);
  CHECK(c2.find("s")->polarization == Angle(45.0));

  // V3 renames the alphabets: {0,45} for bit 0, {90,135} for bit 1
  CHECK(prepare_letter(StateLetter::B, VariantId::V3).find("s")->polarization == Angle(45.0));
  CHECK(prepare_letter(StateLetter::C, VariantId::V3).find("s")->polarization == Angle(90.0));
}

TEST_CASE("encode_bit follows the sequence; V0 follows parity") {
  Rng rng(1);
  auto pair = generate_pair(16, rng);
  auto train = encode_bit(1, pair, VariantId::V1, nullptr);
  REQUIRE(train.size() == 16);
  for (std::size_t i = 0; i < 16; ++i)
    CHECK(train[i].find("s")->polarization == letter_polarization(pair.s1[i]));

  auto v0_train = encode_bit(0, pair, VariantId::V0, nullptr);
  for (std::size_t i = 0; i < 16; ++i) {
    REQUIRE(v0_train[i].branches().size() == 1);
    bool even_event = (i + 1) % 2 == 0;
    CHECK(v0_train[i].branches()[0].polarization == (even_event ? Angle(0.0) : Angle(45.0)));
  }
  auto v0_train1 = encode_bit(1, pair, VariantId::V0, nullptr);
  for (std::size_t i = 0; i < 16; ++i) {
    bool even_event = (i + 1) % 2 == 0;
    CHECK(v0_train1[i].branches()[0].polarization == (even_event ? Angle(45.0) : Angle(0.0)));
  }
}

TEST_CASE("measurement pass and the beta statistics") {
  Rng rng(2);
  CHECK(measure_sequence({}, MeasurePolicy::random_settings(), rng).empty());

  auto pair = generate_pair(4, rng);
  auto photons = encode_bit(0, pair, VariantId::V1, &rng);
  CHECK_THROWS_AS(
      measure_sequence(photons, MeasurePolicy::predetermined({DASetting::DA0}), rng), Error);

  // beta records come at rate 1/8 per setting: aggregate over many sequences
  const std::size_t n = 400, reps = 50;
  std::size_t beta_da0 = 0, beta_da1 = 0, total = 0;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    auto p = generate_pair(n, rng);
    auto train = encode_bit(rep % 2, p, VariantId::V1, &rng);
    auto records = measure_sequence(train, MeasurePolicy::random_settings(), rng);
    REQUIRE(records.size() == n);
    auto reduced = reduce(records);
    for (const auto& r : reduced) {
      CHECK(r.result == ResultClass::Beta);
      (r.setting == DASetting::DA0 ? beta_da0 : beta_da1) += 1;
    }
    total += n;
  }
  double expect = static_cast<double>(total) / 8.0;
  double width = 3.0 * std::sqrt(static_cast<double>(total) * (1.0 / 8.0) * (7.0 / 8.0));
  CHECK(std::abs(static_cast<double>(beta_da0) - expect) < width);
  CHECK(std::abs(static_cast<double>(beta_da1) - expect) < width);
  // retained fraction ~ 1/4 overall
  double retained = static_cast<double>(beta_da0 + beta_da1) / static_cast<double>(total);
  CHECK(std::abs(retained - 0.25) < oracle::sigma3(0.25, total));
}

TEST_CASE("forbidden letters derived from the Born rule") {
  for (DASetting setting : {DASetting::DA0, DASetting::DA1}) {
    std::set<StateLetter> derived;
    for (StateLetter l : {StateLetter::A, StateLetter::B, StateLetter::C, StateLetter::D}) {
      auto dist = outcome_distribution(prepare_letter(l, VariantId::V1), analyzer_bank(setting));
      if (dist.prob(Outcome::click("s")) == 0.0) derived.insert(l);
    }
    CHECK(derived == forbidden_letters(setting));
  }
  CHECK(forbidden_letters(DASetting::DA0) == std::set<StateLetter>{StateLetter::B});
  CHECK(forbidden_letters(DASetting::DA1) == std::set<StateLetter>{StateLetter::D});
}

TEST_CASE("correlation tests: honest consistency and wrong-hypothesis falsification") {
  Rng rng(9);

  // vacuous on empty evidence
  auto empty_pair = generate_pair(10, rng);
  CHECK(correlation_test({}, 0, empty_pair).consistent);
  CHECK(correlation_test({}, 1, empty_pair).consistent);

  // honest transmissions never contradict the true hypothesis
  for (int rep = 0; rep < 30; ++rep) {
    auto pair = generate_pair(200, rng);
    int bit = rep % 2;
    auto photons = encode_bit(bit, pair, VariantId::V1, &rng);
    auto reduced = reduce(measure_sequence(photons, MeasurePolicy::random_settings(), rng));
    auto result = correlation_test(reduced, bit, pair);
    CHECK(result.consistent);
    CHECK(result.contradictions == 0);
  }

  // the wrong hypothesis is falsified at the oracle's per-record rate
  for (int bit : {0, 1}) {
    std::size_t records = 0, falsified = 0;
    while (records < 40000) {
      auto pair = generate_pair(200, rng);
      auto photons = encode_bit(bit, pair, VariantId::V1, &rng);
      auto reduced = reduce(measure_sequence(photons, MeasurePolicy::random_settings(), rng));
      records += reduced.size();
      falsified += correlation_test(reduced, 1 - bit, pair).contradictions;
    }
    double q = oracle::wrong_hypothesis_falsification_per_record(bit);
    CHECK(q == doctest::Approx(0.25).epsilon(1e-12));
    double freq = static_cast<double>(falsified) / static_cast<double>(records);
    CHECK(std::abs(freq - q) < oracle::sigma3(q, records));
  }
}

TEST_CASE("recover_bit soundness") {
  Rng rng(21);
  for (int rep = 0; rep < 40; ++rep) {
    auto pair = generate_pair(400, rng);
    int bit = rep % 2;
    auto photons = encode_bit(bit, pair, VariantId::V1, &rng);
    auto records = measure_sequence(photons, MeasurePolicy::random_settings(), rng);
    BitDecision d = recover_bit(records, pair);
    CHECK(d == (bit ? BitDecision::One : BitDecision::Zero));
  }

  auto pair = generate_pair(50, rng);
  CHECK(recover_bit({}, pair) == BitDecision::Ambiguous);

  // a train of single-path horizontal photons produces beta records at every
  // DA0 position and half the DA1 positions, hitting forbidden letters of
  // both hypotheses almost surely
  std::vector<PhotonState> junk;
  for (int i = 0; i < 400; ++i)
    junk.push_back(PhotonState::make({{"s", Angle(0.0), 1.0}}));
  auto pair2 = generate_pair(400, rng);
  auto records = measure_sequence(junk, MeasurePolicy::random_settings(), rng);
  CHECK(recover_bit(records, pair2) == BitDecision::Contradiction);

  // empirical soundness of the wrong hypothesis surviving k records matches
  // (1-q)^k: with ~n/4 records the wrong hypothesis essentially never survives
  std::size_t ambiguous = 0;
  const int trials = 200;
  for (int rep = 0; rep < trials; ++rep) {
    auto p = generate_pair(400, rng);
    auto photons = encode_bit(0, p, VariantId::V1, &rng);
    auto rec = measure_sequence(photons, MeasurePolicy::random_settings(), rng);
    if (recover_bit(rec, p) == BitDecision::Ambiguous) ++ambiguous;
  }
  CHECK(ambiguous == 0);  // survival prob ~ (3/4)^100
}

TEST_CASE("predetermined recovery for the single-path variants") {
  Rng rng(33);
  for (VariantId v : {VariantId::V2, VariantId::V3}) {
    for (int rep = 0; rep < 20; ++rep) {
      auto pair = generate_pair(300, rng);
      int bit = rep % 2;
      auto photons = encode_bit(bit, pair, v, &rng);
      BitDecision d = recover_predetermined(photons, pair, v, rng);
      if (bit == 0)
        CHECK(d == BitDecision::Zero);  // matched projections always click
      else
        CHECK(d == BitDecision::One);  // false accept prob <= (3/4)^300
    }
  }
}

TEST_CASE("v0 decision") {
  Rng rng(44);
  auto pair = regular_pair(40);
  for (int rep = 0; rep < 20; ++rep) {
    auto photons0 = encode_bit(0, pair, VariantId::V0, &rng);
    CHECK(v0_decide(photons0, rng) == BitDecision::Zero);
    auto photons1 = encode_bit(1, pair, VariantId::V0, &rng);
    CHECK(v0_decide(photons1, rng) == BitDecision::One);  // error prob 2^-20
  }
}

TEST_CASE("joint probability tables take the exact protocol values") {
  const double q = 0.25, e = 0.125;
  const std::array<std::array<double, 3>, 4> expected_da0 = {
      {{q, q, 0.0}, {q, 0.0, q}, {q, e, e}, {q, e, e}}};
  const std::array<std::array<double, 3>, 4> expected_da1 = {
      {{q, e, e}, {q, e, e}, {q, q, 0.0}, {q, 0.0, q}}};

  auto da0 = table_joint_probabilities(DASetting::DA0);
  auto da1 = table_joint_probabilities(DASetting::DA1);
  for (int row = 0; row < 4; ++row) {
    double sum0 = 0.0, sum1 = 0.0;
    for (int col = 0; col < 3; ++col) {
      CHECK(da0[row][col] == expected_da0[row][col]);
      CHECK(da1[row][col] == expected_da1[row][col]);
      sum0 += da0[row][col];
      sum1 += da1[row][col];
    }
    CHECK(sum0 == 0.5);
    CHECK(sum1 == 0.5);
  }
  CHECK(da0[1][1] == 0.0);  // beta zero at (B, DA0)
  CHECK(da1[3][1] == 0.0);  // beta zero at (D, DA1)

  // independent oracle cross-check of every cell
  for (int row = 0; row < 4; ++row) {
    auto probs0 = oracle::letter_class_probs(row, 0.0);
    auto probs1 = oracle::letter_class_probs(row, 45.0);
    CHECK(da0[row][0] == doctest::Approx(0.5 * probs0.alpha).epsilon(1e-15));
    CHECK(da0[row][1] == doctest::Approx(0.5 * probs0.beta).epsilon(1e-15));
    CHECK(da0[row][2] == doctest::Approx(0.5 * probs0.gamma).epsilon(1e-15));
    CHECK(da1[row][1] == doctest::Approx(0.5 * probs1.beta).epsilon(1e-15));
  }
}

TEST_CASE("all renderings agree on the table values") {
  json j = tables_to_json();
  auto da0 = table_joint_probabilities(DASetting::DA0);
  const char* letters[4] = {"A", "B", "C", "D"};
  const char* classes[3] = {"alpha", "beta", "gamma"};
  for (int row = 0; row < 4; ++row)
    for (int col = 0; col < 3; ++col)
      CHECK(j["DA0"][letters[row]][classes[col]].get<double>() == da0[row][col]);
  CHECK(j["DA0"]["A"]["conclusive_beta"].get<bool>());
  CHECK(!j["DA0"]["B"]["conclusive_beta"].get<bool>());
  CHECK(j["DA1"]["C"]["conclusive_beta"].get<bool>());

  std::string csv = render_tables_csv();
  CHECK(csv.find("DA0,A,0.25,0.25,0\n") != std::string::npos);
  CHECK(csv.find("DA0,B,0.25,0,0.25\n") != std::string::npos);
  CHECK(csv.find("DA1,D,0.25,0,0.25\n") != std::string::npos);
  CHECK(csv.find("DA1,C,0.25,0.25,0\n") != std::string::npos);

  std::string pretty = render_tables_pretty();
  CHECK(pretty.find("1/4") != std::string::npos);
  CHECK(pretty.find("1/8") != std::string::npos);
  CHECK(pretty.find("1/4*") != std::string::npos);
}
