// Command-line front end: tables, density, qkd, split, eve, variants, merge.
// Every run is reproducible from its flags (or JSON config file) alone.
// Exit codes: 0 success, 1 usage/config error, 2 QKD session aborted due to
// detected tampering.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "seqkd/io.hpp"

namespace {

using seqkd::json;

constexpr int kSchemaVersion = 1;

json load_config_file(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::ifstream in(argv[i + 1]);
      if (!in) throw seqkd::Error(seqkd::Errc::ConfigInvalid,
                                  std::string("cannot open config file ") + argv[i + 1]);
      json j;
      in >> j;
      return j;
    }
  }
  return json::object();
}

template <class T>
void from_config(const json& cfg, const char* key, T& out) {
  if (cfg.contains(key)) out = cfg.at(key).get<T>();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw seqkd::Error(seqkd::Errc::ConfigInvalid, "cannot write to " + path);
  out << content;
}

json with_metadata(const std::string& command, json config, json results) {
  return json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"config", std::move(config)},
              {"results", std::move(results)}};
}

std::string csv_from_summary(const seqkd::DetectionSummary& s) {
  std::ostringstream os;
  os << "trials,aborts,abort_rate,mean_abort_index,aborted_by_index_5,"
        "verification_failure_rate,completed_bits\n";
  os << s.trials << ',' << s.aborts << ',' << s.abort_rate << ',' << s.mean_abort_index << ','
     << s.aborted_by_index_5 << ',' << s.verification_failure_rate << ',' << s.completed_bits
     << '\n';
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sequence-coding QKD protocol simulator"};
  app.require_subcommand(1);

  json file_cfg;
  try {
    file_cfg = load_config_file(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::string config_path, out_path, format = "json", variant = "V1", eve = "none";
  std::size_t n = 400, bits = 100, paths = 2, trials = 100;
  std::uint64_t seed = 0;
  bool serial = false;
  std::string transcript_path;

  from_config(file_cfg, "n", n);
  from_config(file_cfg, "bits", bits);
  from_config(file_cfg, "paths", paths);
  from_config(file_cfg, "trials", trials);
  from_config(file_cfg, "seed", seed);
  from_config(file_cfg, "variant", variant);
  from_config(file_cfg, "eve", eve);
  from_config(file_cfg, "format", format);
  from_config(file_cfg, "out", out_path);

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file mirroring flag names");
    cmd->add_option("--n", n, "photons per sequence");
    cmd->add_option("--bits", bits, "key bits (N)");
    cmd->add_option("--variant", variant, "protocol variant V0|V1|V2|V3");
    cmd->add_option("--eve", eve, "eavesdropper: none|random-da|fixed:<deg>|density");
    cmd->add_option("--paths", paths, "number of split paths (m)");
    cmd->add_option("--trials", trials, "independent trials");
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--out", out_path, "output path ('-' = stdout)");
    cmd->add_option("--format", format, "json|csv|pretty")
        ->check(CLI::IsMember({"json", "csv", "pretty"}));
    cmd->add_flag("--serial", serial, "disable the parallel trial runner");
  };

  CLI::App* cmd_tables = app.add_subcommand("tables", "joint probability tables for DA0 and DA1");
  add_common(cmd_tables);

  CLI::App* cmd_density =
      app.add_subcommand("density", "sequence ensemble density matrices and their distance");
  add_common(cmd_density);

  CLI::App* cmd_qkd = app.add_subcommand("qkd", "run one QKD session");
  add_common(cmd_qkd);
  cmd_qkd->add_option("--transcript", transcript_path, "write the event log as JSON lines");

  CLI::App* cmd_split = app.add_subcommand("split", "multi-receiver key-splitting session");
  add_common(cmd_split);

  CLI::App* cmd_eve = app.add_subcommand("eve", "eavesdropping detection experiment");
  add_common(cmd_eve);

  CLI::App* cmd_variants = app.add_subcommand("variants", "security contrast of V1, V2 and V3");
  add_common(cmd_variants);

  CLI::App* cmd_merge = app.add_subcommand("merge", "merge partial keys from split receivers");
  add_common(cmd_merge);
  std::vector<std::string> merge_files;
  cmd_merge->add_option("files", merge_files, "partial key JSON files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    const bool parallel = !serial;
    json flags{{"n", n},         {"bits", bits},   {"paths", paths}, {"trials", trials},
               {"seed", seed},   {"variant", variant}, {"eve", eve}, {"format", format}};

    if (*cmd_tables) {
      if (format == "csv")
        write_output(out_path, seqkd::render_tables_csv());
      else if (format == "pretty")
        write_output(out_path, seqkd::render_tables_pretty());
      else
        write_output(out_path,
                     with_metadata("tables", flags, seqkd::tables_to_json()).dump(2) + "\n");
      return 0;
    }

    if (*cmd_density) {
      auto [rho0, rho1] =
          seqkd::variant_densities(seqkd::variant_from_name(variant), paths);
      double distance = seqkd::trace_distance(rho0, rho1);
      json results{{"rho0", seqkd::density_to_json(rho0)},
                   {"rho1", seqkd::density_to_json(rho1)},
                   {"trace_distance", distance},
                   {"equal", distance <= 1e-12}};
      write_output(out_path, with_metadata("density", flags, results).dump(2) + "\n");
      return 0;
    }

    if (*cmd_qkd) {
      seqkd::SessionConfig cfg;
      cfg.n = n;
      cfg.bits = bits;
      cfg.variant = seqkd::variant_from_name(variant);
      cfg.eve = seqkd::eve_strategy_from_name(eve);
      cfg.seed = seed;
      seqkd::SessionOutput output = seqkd::run_session(cfg);
      write_output(out_path, with_metadata("qkd", flags,
                                           seqkd::session_result_to_json(output.result))
                                     .dump(2) +
                                 "\n");
      if (!transcript_path.empty())
        write_output(transcript_path, seqkd::transcript_to_jsonl(output.transcript));
      return output.result.aborted_at ? 2 : 0;
    }

    if (*cmd_split) {
      seqkd::SplitConfig cfg;
      cfg.paths = paths;
      cfg.n = n;
      cfg.bits = bits;
      cfg.seed = seed;
      seqkd::SplitOutput output = seqkd::run_split_session(cfg);
      write_output(out_path,
                   with_metadata("split", flags, seqkd::split_output_to_json(output)).dump(2) +
                       "\n");
      return 0;
    }

    if (*cmd_eve) {
      seqkd::SessionConfig cfg;
      cfg.n = n;
      cfg.bits = bits;
      cfg.variant = seqkd::variant_from_name(variant);
      cfg.eve = seqkd::eve_strategy_from_name(eve);
      cfg.seed = seed;
      seqkd::DetectionSummary summary = seqkd::detection_experiment(cfg, trials, parallel);
      if (format == "csv")
        write_output(out_path, csv_from_summary(summary));
      else
        write_output(out_path, with_metadata("eve", flags,
                                             seqkd::detection_summary_to_json(summary))
                                       .dump(2) +
                                   "\n");
      return 0;
    }

    if (*cmd_variants) {
      json reports = json::array();
      for (auto v : {seqkd::VariantId::V1, seqkd::VariantId::V2, seqkd::VariantId::V3})
        reports.push_back(seqkd::variant_report_to_json(
            seqkd::variant_security_report(v, trials, n, seed, parallel)));
      write_output(out_path, with_metadata("variants", flags, reports).dump(2) + "\n");
      return 0;
    }

    if (*cmd_merge) {
      std::map<seqkd::PathLabel, seqkd::PartialKey> partials;
      for (std::size_t i = 0; i < merge_files.size(); ++i) {
        std::ifstream in(merge_files[i]);
        if (!in)
          throw seqkd::Error(seqkd::Errc::ConfigInvalid, "cannot open " + merge_files[i]);
        json j;
        in >> j;
        partials[seqkd::path_label(i)] = seqkd::partial_key_from_json(j);
      }
      seqkd::MergeResult merged = seqkd::merge(partials, bits);
      json results{{"missing", merged.missing}, {"conflicts", merged.conflicts}};
      if (merged.key) results["key"] = *merged.key;
      write_output(out_path, with_metadata("merge", flags, results).dump(2) + "\n");
      return merged.key ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
