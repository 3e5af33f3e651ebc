#include "seqkd/variants.hpp"

#include <algorithm>
#include <limits>

#include "seqkd/parallel.hpp"
#include "seqkd/split.hpp"

namespace seqkd {

BitDecision v0_roundtrip(std::size_t n, int bit, Rng& rng) {
  if (n < 2) throw Error(Errc::ConfigInvalid, "V0 round trip needs n >= 2");
  OperatingSequencePair pair = regular_pair(n);  // V0 only uses the length
  std::vector<PhotonState> photons = encode_bit(bit, pair, VariantId::V0, nullptr);
  return v0_decide(photons, rng);
}

double channelA_demo(std::size_t trials, Rng& rng, Angle analyzer) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    int bit = rng.coin() ? 1 : 0;
    PhotonState photon = PhotonState::make({{"s", Angle(bit ? 90.0 : 0.0), 1.0}});
    AnalyzerBank bank{{"s", analyzer}};
    int guess = sample_outcome(photon, bank, rng).clicked ? 0 : 1;
    if (guess == bit) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

double channelB_expected_accuracy(Angle analyzer) {
  double p0 = cos2_between(analyzer, Angle(0.0));
  double p1 = cos2_between(analyzer, Angle(45.0));
  // better of the two click->bit mappings
  return std::max(0.5 * (p0 + 1.0 - p1), 0.5 * (1.0 - p0 + p1));
}

double channelB_demo(std::size_t trials, Rng& rng, Angle analyzer) {
  double p0 = cos2_between(analyzer, Angle(0.0));
  double p1 = cos2_between(analyzer, Angle(45.0));
  int click_means = p0 >= p1 ? 0 : 1;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    int bit = rng.coin() ? 1 : 0;
    PhotonState photon = PhotonState::make({{"s", Angle(bit ? 45.0 : 0.0), 1.0}});
    AnalyzerBank bank{{"s", analyzer}};
    bool clicked = sample_outcome(photon, bank, rng).clicked;
    int guess = clicked ? click_means : 1 - click_means;
    if (guess == bit) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

Angle channelB_best_analyzer(std::size_t grid_steps) {
  Angle best(0.0);
  double best_acc = 0.0;
  for (std::size_t i = 0; i < grid_steps; ++i) {
    Angle a(180.0 * static_cast<double>(i) / static_cast<double>(grid_steps));
    double acc = channelB_expected_accuracy(a);
    if (acc > best_acc) {
      best_acc = acc;
      best = a;
    }
  }
  return best;
}

std::pair<DensityMatrix, DensityMatrix> variant_densities(VariantId variant, std::size_t m) {
  if (variant == VariantId::V1) {
    BasisSpec basis = BasisSpec::standard(m);
    std::vector<std::pair<PhotonState, double>> e0, e1;
    if (m == 2) {
      e0 = {{prepare_letter(StateLetter::A, variant), 0.5},
            {prepare_letter(StateLetter::B, variant), 0.5}};
      e1 = {{prepare_letter(StateLetter::C, variant), 0.5},
            {prepare_letter(StateLetter::D, variant), 0.5}};
    } else {
      PathLabel carrying = path_label(m - 1);
      e0 = {{prepare_split_letter(StateLetter::A, m, carrying), 0.5},
            {prepare_split_letter(StateLetter::B, m, carrying), 0.5}};
      e1 = {{prepare_split_letter(StateLetter::C, m, carrying), 0.5},
            {prepare_split_letter(StateLetter::D, m, carrying), 0.5}};
    }
    return {density_of(e0, basis, true), density_of(e1, basis, true)};
  }
  BasisSpec basis({{"s", Angle(0.0)}, {"s", Angle(90.0)}});
  std::vector<std::pair<PhotonState, double>> e0 = {
      {prepare_letter(StateLetter::A, variant), 0.5},
      {prepare_letter(StateLetter::B, variant), 0.5}};
  std::vector<std::pair<PhotonState, double>> e1 = {
      {prepare_letter(StateLetter::C, variant), 0.5},
      {prepare_letter(StateLetter::D, variant), 0.5}};
  return {density_of(e0, basis, true), density_of(e1, basis, true)};
}

namespace {

double honest_accuracy(VariantId variant, std::size_t trials, std::size_t n, std::uint64_t seed,
                       bool parallel) {
  std::vector<unsigned char> hits(trials, 0);
  run_indexed(trials, parallel, [&](std::size_t t) {
    Rng rng(Rng::mix(seed, t));
    OperatingSequencePair pair = generate_pair(n, rng);
    int bit = rng.coin() ? 1 : 0;
    std::vector<PhotonState> photons = encode_bit(bit, pair, variant, &rng);
    BitDecision decision;
    if (variant == VariantId::V1)
      decision = recover_bit(measure_sequence(photons, MeasurePolicy::random_settings(), rng), pair);
    else if (variant == VariantId::V0)
      decision = v0_decide(photons, rng);
    else
      decision = recover_predetermined(photons, pair, variant, rng);
    int recovered = decision == BitDecision::One ? 1 : (decision == BitDecision::Zero ? 0 : -1);
    hits[t] = recovered == bit ? 1 : 0;
  });
  std::size_t total = 0;
  for (auto h : hits) total += h;
  return static_cast<double>(total) / static_cast<double>(trials);
}

}  // namespace

VariantReport variant_security_report(VariantId variant, std::size_t trials, std::size_t n,
                                      std::uint64_t seed, bool parallel) {
  if (trials < 1) throw Error(Errc::ConfigInvalid, "report needs trials >= 1");
  VariantReport report;
  report.id = variant;
  report.eve_alphabet_accuracy = std::numeric_limits<double>::quiet_NaN();
  report.lucky_basis_disturbance = std::numeric_limits<double>::quiet_NaN();

  auto [rho0, rho1] = variant_densities(variant);
  report.rho_distance = trace_distance(rho0, rho1);
  report.honest_accuracy = honest_accuracy(variant, trials, n, Rng::mix(seed, 1), parallel);

  const std::size_t photons = std::max<std::size_t>(trials * 10, 10000);
  switch (variant) {
    case VariantId::V1: {
      EveStrategy eve = EveStrategy::random_da();
      report.eve_bit_accuracy =
          eve_accuracy_experiment(variant, eve, trials, n, Rng::mix(seed, 2), parallel).bit_accuracy;
      report.disturbance =
          feedback_failure_experiment(variant, eve, photons, Rng::mix(seed, 3), parallel);
      break;
    }
    case VariantId::V2: {
      // Eve measures in the S0 alphabet's basis: lucky on bit-0 sequences,
      // wrong on bit-1 sequences
      EveStrategy eve = EveStrategy::fixed_basis_at(Angle(0.0));
      EveAccuracy acc = eve_accuracy_experiment(variant, eve, trials, n, Rng::mix(seed, 2), parallel);
      report.eve_bit_accuracy = acc.bit_accuracy;
      report.eve_alphabet_accuracy = acc.alphabet_accuracy;
      report.lucky_basis_disturbance = feedback_failure_experiment(
          variant, eve, photons, Rng::mix(seed, 3), parallel, {StateLetter::A, StateLetter::B});
      report.disturbance = feedback_failure_experiment(
          variant, eve, photons, Rng::mix(seed, 4), parallel, {StateLetter::C, StateLetter::D});
      break;
    }
    case VariantId::V3: {
      EveStrategy eve = EveStrategy::distinguish_density();
      report.eve_bit_accuracy =
          eve_accuracy_experiment(variant, eve, trials, n, Rng::mix(seed, 2), parallel).bit_accuracy;
      report.disturbance =
          feedback_failure_experiment(variant, eve, photons, Rng::mix(seed, 3), parallel);
      break;
    }
    case VariantId::V0:
      break;
  }
  return report;
}

}  // namespace seqkd
