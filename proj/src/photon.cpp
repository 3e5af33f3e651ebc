#include "seqkd/photon.hpp"

#include <algorithm>
#include <cmath>

namespace seqkd {
namespace {

constexpr double kTwoPi = 6.28318530717958647692;

double norm_sq(const std::vector<Branch>& branches) {
  double total = 0.0;
  for (const auto& b : branches) total += std::norm(b.amplitude);
  return total;
}

}  // namespace

PathLabel path_label(std::size_t index) {
  static const char* kCanonical[] = {"r", "s", "t"};
  if (index < 3) return kCanonical[index];
  return "p" + std::to_string(index);
}

PhotonState PhotonState::make(std::vector<Branch> branches) {
  if (branches.empty()) throw Error(Errc::EmptyState, "photon state needs at least one branch");
  for (std::size_t i = 0; i < branches.size(); ++i)
    for (std::size_t j = i + 1; j < branches.size(); ++j)
      if (branches[i].path == branches[j].path)
        throw Error(Errc::DuplicatePath, "duplicate path '" + branches[i].path + "'");
  double total = norm_sq(branches);
  if (total <= 0.0) throw Error(Errc::ZeroNorm, "state has zero norm");
  double scale = 1.0 / std::sqrt(total);
  for (auto& b : branches) b.amplitude *= scale;
  return PhotonState(std::move(branches));
}

const Branch* PhotonState::find(const PathLabel& path) const {
  for (const auto& b : branches_)
    if (b.path == path) return &b;
  return nullptr;
}

PhotonState PhotonState::rotated(const PathLabel& path, Angle delta) const {
  if (!find(path)) throw Error(Errc::UnknownPath, "no branch on path '" + path + "'");
  std::vector<Branch> out = branches_;
  for (auto& b : out)
    if (b.path == path) b.polarization = b.polarization + delta;
  return PhotonState(std::move(out));
}

PhotonState PhotonState::with_random_phases(Rng& rng) const {
  std::vector<Branch> out = branches_;
  for (auto& b : out) b.amplitude *= std::polar(1.0, rng.uniform(0.0, kTwoPi));
  return PhotonState(std::move(out));
}

AnalyzerBank::AnalyzerBank(std::initializer_list<std::pair<PathLabel, Angle>> entries)
    : entries_(entries) {}

void AnalyzerBank::set(const PathLabel& path, Angle orientation) {
  for (auto& e : entries_)
    if (e.first == path) {
      e.second = orientation;
      return;
    }
  entries_.emplace_back(path, orientation);
}

const std::optional<Angle> AnalyzerBank::find(const PathLabel& path) const {
  for (const auto& e : entries_)
    if (e.first == path) return e.second;
  return std::nullopt;
}

double OutcomeDistribution::prob(const Outcome& o) const {
  for (const auto& e : entries)
    if (e.first == o) return e.second;
  return 0.0;
}

double OutcomeDistribution::total() const {
  double t = 0.0;
  for (const auto& e : entries) t += e.second;
  return t;
}

OutcomeDistribution outcome_distribution(const PhotonState& state, const AnalyzerBank& bank) {
  // weights are renormalized by the actual squared norm so that equal
  // amplitudes give exactly dyadic probabilities
  double total = norm_sq(state.branches());
  OutcomeDistribution dist;
  double clicks = 0.0;
  for (const auto& [path, orientation] : bank.entries()) {
    const Branch* b = state.find(path);
    if (!b) continue;
    double p = (std::norm(b->amplitude) / total) * cos2_between(orientation, b->polarization);
    dist.entries.emplace_back(Outcome::click(path), p);
    clicks += p;
  }
  double rest = 1.0 - clicks;
  if (rest < 0.0) rest = 0.0;
  dist.entries.emplace_back(Outcome::no_click(), rest);
  return dist;
}

Outcome sample_outcome(const PhotonState& state, const AnalyzerBank& bank, Rng& rng) {
  OutcomeDistribution dist = outcome_distribution(state, bank);
  double u = rng.uniform();
  double acc = 0.0;
  for (const auto& [outcome, p] : dist.entries) {
    acc += p;
    if (u < acc) return outcome;
  }
  return Outcome::no_click();
}

BasisSpec::BasisSpec(std::vector<std::pair<PathLabel, Angle>> vectors) : vectors_(std::move(vectors)) {
  // validate: exactly two orthogonal angles per path
  std::vector<PathLabel> seen;
  for (const auto& [path, angle] : vectors_) {
    if (std::find(seen.begin(), seen.end(), path) != seen.end()) continue;
    seen.push_back(path);
    std::vector<Angle> angles;
    for (const auto& [p2, a2] : vectors_)
      if (p2 == path) angles.push_back(a2);
    if (angles.size() != 2 || cos2_between(angles[0], angles[1]) != 0.0)
      throw Error(Errc::BasisIncomplete,
                  "basis must hold exactly two orthogonal angles per path (path '" + path + "')");
  }
}

BasisSpec BasisSpec::standard(std::size_t num_paths) {
  std::vector<std::pair<PathLabel, Angle>> v;
  for (std::size_t i = 0; i < num_paths; ++i) {
    v.emplace_back(path_label(i), Angle(0.0));
    v.emplace_back(path_label(i), Angle(90.0));
  }
  return BasisSpec(std::move(v));
}

Eigen::VectorXcd state_vector(const PhotonState& state, const BasisSpec& basis) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  for (const auto& b : state.branches()) {
    bool covered = false;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const auto& [path, angle] = basis.vectors()[j];
      if (path != b.path) continue;
      v[static_cast<Eigen::Index>(j)] += b.amplitude * cos_between(b.polarization, angle);
      covered = true;
    }
    if (!covered)
      throw Error(Errc::BasisIncomplete, "basis has no vectors for path '" + b.path + "'");
  }
  return v;
}

DensityMatrix density_of(const std::vector<std::pair<PhotonState, double>>& ensemble,
                         const BasisSpec& basis, bool incoherent_paths) {
  double wsum = 0.0;
  for (const auto& [state, w] : ensemble) {
    if (w < 0.0) throw Error(Errc::BadWeights, "negative ensemble weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9) throw Error(Errc::BadWeights, "ensemble weights must sum to 1");

  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [state, w] : ensemble) {
    Eigen::VectorXcd v = state_vector(state, basis);
    rho += w * (v * v.adjoint());
  }
  if (incoherent_paths) {
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j)
        if (basis.vectors()[static_cast<std::size_t>(i)].first !=
            basis.vectors()[static_cast<std::size_t>(j)].first)
          rho(i, j) = 0.0;
  }
  return DensityMatrix{basis, std::move(rho)};
}

double overlap_probability(const PhotonState& state, const PhotonState& expected) {
  std::vector<PathLabel> paths;
  for (const auto& b : state.branches())
    if (std::find(paths.begin(), paths.end(), b.path) == paths.end()) paths.push_back(b.path);
  for (const auto& b : expected.branches())
    if (std::find(paths.begin(), paths.end(), b.path) == paths.end()) paths.push_back(b.path);

  Amplitude dot = 0.0;
  for (const auto& p : paths) {
    const Branch* a = state.find(p);
    const Branch* e = expected.find(p);
    if (!a || !e) continue;
    // components of each branch on the path's {0, 90} axes
    Amplitude ax = a->amplitude * cos_between(a->polarization, Angle(0.0));
    Amplitude ay = a->amplitude * sin_between(a->polarization, Angle(0.0));
    Amplitude ex = e->amplitude * cos_between(e->polarization, Angle(0.0));
    Amplitude ey = e->amplitude * sin_between(e->polarization, Angle(0.0));
    dot += std::conj(ex) * ax + std::conj(ey) * ay;
  }
  // renormalize by the actual squared norms so identical states overlap at
  // exactly 1 despite rounding in the stored amplitudes
  double p = std::norm(dot) / (norm_sq(state.branches()) * norm_sq(expected.branches()));
  return std::min(1.0, std::max(0.0, p));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  Eigen::MatrixXcd diff = a.mat - b.mat;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace seqkd
