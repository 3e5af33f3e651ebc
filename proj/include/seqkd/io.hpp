#pragma once

#include <string>

#include <json.hpp>

#include "seqkd/codec.hpp"
#include "seqkd/photon.hpp"
#include "seqkd/session.hpp"
#include "seqkd/split.hpp"
#include "seqkd/variants.hpp"

namespace seqkd {

using nlohmann::json;

json density_to_json(const DensityMatrix& dm);
json distribution_to_json(const OutcomeDistribution& dist);

json transcript_event_to_json(const TranscriptEvent& event);
/// One event per line.
std::string transcript_to_jsonl(const std::vector<TranscriptEvent>& transcript);

json session_result_to_json(const SessionResult& result);
json detection_summary_to_json(const DetectionSummary& summary);
json eve_accuracy_to_json(const EveAccuracy& acc);
json variant_report_to_json(const VariantReport& report);
json partial_key_to_json(const PartialKey& key);
PartialKey partial_key_from_json(const json& j);
json split_output_to_json(const SplitOutput& out);

/// Both DA tables. The conclusive beta cells are the ones the asterisk marks.
std::string render_tables_pretty();
std::string render_tables_csv();
json tables_to_json();

}  // namespace seqkd
