#include "seqkd/io.hpp"

#include <cmath>
#include <sstream>

namespace seqkd {
namespace {

const char* kLetterNames[4] = {"A", "B", "C", "D"};
const char* kClassNames[3] = {"alpha", "beta", "gamma"};

json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

std::string format_prob(double v) {
  // the table entries are dyadic rationals; print them as exact fractions
  if (v == 0.0) return "0";
  if (v == 0.25) return "1/4";
  if (v == 0.125) return "1/8";
  if (v == 0.5) return "1/2";
  std::ostringstream os;
  os << v;
  return os.str();
}

bool conclusive_beta(DASetting setting, int row) {
  // the beta cell that pins the state exactly: |A> under DA0, |C> under DA1
  return (setting == DASetting::DA0 && row == 0) || (setting == DASetting::DA1 && row == 2);
}

}  // namespace

json density_to_json(const DensityMatrix& dm) {
  json basis = json::array();
  for (const auto& [path, angle] : dm.basis.vectors())
    basis.push_back(json::array({path, angle.degrees()}));
  json rows = json::array();
  for (Eigen::Index i = 0; i < dm.mat.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < dm.mat.cols(); ++j)
      row.push_back(json::array({dm.mat(i, j).real(), dm.mat(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return json{{"basis", basis}, {"rows", rows}};
}

json distribution_to_json(const OutcomeDistribution& dist) {
  json entries = json::array();
  for (const auto& [outcome, p] : dist.entries) {
    json e{{"probability", p}};
    if (outcome.clicked)
      e["click"] = outcome.path;
    else
      e["click"] = nullptr;
    entries.push_back(std::move(e));
  }
  return json{{"entries", entries}};
}

json transcript_event_to_json(const TranscriptEvent& event) {
  json j{{"index", event.index}};
  switch (event.type) {
    case TranscriptEvent::Type::BitSent:
      j["event"] = "bit_sent";
      j["bit"] = event.bit;
      break;
    case TranscriptEvent::Type::BitRecovered:
      j["event"] = "bit_recovered";
      j["decision"] = decision_name(event.decision);
      break;
    case TranscriptEvent::Type::FeedbackSent:
      j["event"] = "feedback_sent";
      break;
    case TranscriptEvent::Type::FeedbackVerified:
      j["event"] = "feedback_verified";
      j["pass"] = event.pass;
      break;
    case TranscriptEvent::Type::Aborted:
      j["event"] = "aborted";
      j["reason"] = event.reason;
      break;
    case TranscriptEvent::Type::EveTapped:
      j["event"] = "eve_tapped";
      j["leg"] = event.leg;
      break;
  }
  return j;
}

std::string transcript_to_jsonl(const std::vector<TranscriptEvent>& transcript) {
  std::string out;
  for (const auto& event : transcript) {
    out += transcript_event_to_json(event).dump();
    out += '\n';
  }
  return out;
}

json session_result_to_json(const SessionResult& result) {
  json j{{"alice_key", result.alice_key},
         {"bob_key", result.bob_key},
         {"stats",
          {{"beta_da0", result.stats.beta_da0},
           {"beta_da1", result.stats.beta_da1},
           {"records", result.stats.records},
           {"contradictions", result.stats.contradictions},
           {"verification_failures", result.stats.verification_failures},
           {"feedback_checks", result.stats.feedback_checks}}}};
  if (result.aborted_at) {
    j["aborted_at"] = *result.aborted_at;
    j["abort_reason"] = result.abort_reason;
  } else {
    j["aborted_at"] = nullptr;
  }
  return j;
}

json detection_summary_to_json(const DetectionSummary& summary) {
  return json{{"trials", summary.trials},
              {"aborts", summary.aborts},
              {"abort_rate", summary.abort_rate},
              {"mean_abort_index", summary.mean_abort_index},
              {"aborted_by_index_5", summary.aborted_by_index_5},
              {"verification_failure_rate", summary.verification_failure_rate},
              {"completed_bits", summary.completed_bits}};
}

json eve_accuracy_to_json(const EveAccuracy& acc) {
  return json{{"bits", acc.bits},
              {"bit_accuracy", acc.bit_accuracy},
              {"alphabet_accuracy", number_or_null(acc.alphabet_accuracy)}};
}

json variant_report_to_json(const VariantReport& report) {
  return json{{"variant", variant_name(report.id)},
              {"honest_accuracy", report.honest_accuracy},
              {"eve_bit_accuracy", report.eve_bit_accuracy},
              {"eve_alphabet_accuracy", number_or_null(report.eve_alphabet_accuracy)},
              {"disturbance", report.disturbance},
              {"lucky_basis_disturbance", number_or_null(report.lucky_basis_disturbance)},
              {"rho_trace_distance", report.rho_distance}};
}

json partial_key_to_json(const PartialKey& key) {
  json bits = json::object();
  for (const auto& [index, bit] : key.bits) bits[std::to_string(index)] = bit;
  return json{{"bits", bits}};
}

PartialKey partial_key_from_json(const json& j) {
  PartialKey key;
  for (const auto& [index, bit] : j.at("bits").items())
    key.bits[std::stoull(index)] = bit.get<int>();
  return key;
}

json split_output_to_json(const SplitOutput& out) {
  json partials = json::object();
  for (const auto& [receiver, partial] : out.partials)
    partials[receiver] = partial_key_to_json(partial);
  return json{{"alice_key", out.alice_key},
              {"schedule", out.schedule},
              {"partials", partials},
              {"qa_failures", out.qa_failures}};
}

std::string render_tables_pretty() {
  std::ostringstream os;
  for (DASetting setting : {DASetting::DA0, DASetting::DA1}) {
    auto table = table_joint_probabilities(setting);
    os << "Joint probabilities, DA at (0_r : " << (setting == DASetting::DA0 ? "0" : "45")
       << "_s)\n";
    os << "state   alpha   beta    gamma\n";
    for (int row = 0; row < 4; ++row) {
      os << "|" << kLetterNames[row] << ">     ";
      for (int col = 0; col < 3; ++col) {
        std::string cell = format_prob(table[row][col]);
        if (col == 1 && conclusive_beta(setting, row)) cell += "*";
        os << cell;
        for (std::size_t pad = cell.size(); pad < 8; ++pad) os << ' ';
      }
      os << '\n';
    }
    os << "* only this result (beta) is conclusive\n\n";
  }
  return os.str();
}

std::string render_tables_csv() {
  std::ostringstream os;
  os << "setting,state,alpha,beta,gamma\n";
  for (DASetting setting : {DASetting::DA0, DASetting::DA1}) {
    auto table = table_joint_probabilities(setting);
    for (int row = 0; row < 4; ++row) {
      os << (setting == DASetting::DA0 ? "DA0" : "DA1") << ',' << kLetterNames[row];
      for (int col = 0; col < 3; ++col) os << ',' << table[row][col];
      os << '\n';
    }
  }
  return os.str();
}

json tables_to_json() {
  json out = json::object();
  for (DASetting setting : {DASetting::DA0, DASetting::DA1}) {
    auto table = table_joint_probabilities(setting);
    json rows = json::object();
    for (int row = 0; row < 4; ++row) {
      json cells = json::object();
      for (int col = 0; col < 3; ++col) cells[kClassNames[col]] = table[row][col];
      cells["conclusive_beta"] = conclusive_beta(setting, row);
      rows[kLetterNames[row]] = std::move(cells);
    }
    out[setting == DASetting::DA0 ? "DA0" : "DA1"] = std::move(rows);
  }
  return out;
}

}  // namespace seqkd
