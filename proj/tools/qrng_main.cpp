#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qrng/bit_sequence.hpp"
#include "qrng/config.hpp"
#include "qrng/errors.hpp"
#include "qrng/extractor.hpp"
#include "qrng/nist/battery.hpp"
#include "qrng/pipeline.hpp"
#include "qrng/stat_tests.hpp"
#include "qrng/timetag_io.hpp"
#include "qrng/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// exit codes: 0 success, 1 usage error, 2 data/format error, 3 battery failed
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitBatteryFailed = 3;

struct CommonOptions {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  std::string format = "json";
};

qrng::PipelineConfig effective_config(const CommonOptions& opts) {
  auto config = opts.config_path.empty()
                    ? qrng::default_pipeline_config()
                    : qrng::load_config(opts.config_path);
  if (opts.seed_set) config.master_seed = opts.seed;
  return config;
}

json tool_header(const qrng::PipelineConfig& config) {
  char hash[19];
  std::snprintf(hash, sizeof hash, "0x%016llx",
                static_cast<unsigned long long>(qrng::config_hash(config)));
  return {{"name", qrng::kToolName},
          {"version", qrng::kToolVersion},
          {"config_hash", hash}};
}

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_out = true) {
  cmd->add_option("--config", opts.config_path,
                  "JSON config (defaults to the built-in reference profile)");
  cmd->add_option("--seed", opts.seed, "override the master seed")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
  if (with_out)
    cmd->add_option("--out", opts.out, "output path or prefix")->required();
  cmd->add_option("--format", opts.format, "report format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
}

int cmd_simulate(const CommonOptions& opts) {
  const auto config = effective_config(opts);
  const auto summary = qrng::simulate_to_file(config, opts.out);
  std::cout << "wrote " << summary.record_count << " records to " << opts.out
            << " (" << summary.achieved_rate_hz << " records/s)\n";
  return kExitOk;
}

int cmd_extract(const std::string& qttag_path, const CommonOptions& opts) {
  qrng::BitSequence bits;
  const std::uint64_t count = qrng::timetag::for_each_record(
      qttag_path,
      [&bits](qrng::timetag::TimeTagRecord r) { bits.append(r.channel); });
  bits.save(opts.out);
  std::cout << "extracted " << count << " bits to " << opts.out << "\n";
  return kExitOk;
}

int cmd_postprocess(const std::string& bits_path, const CommonOptions& opts) {
  const auto config = effective_config(opts);
  const auto input = qrng::BitSequence::load(bits_path);
  auto [output, report] =
      qrng::extract::extract_pipeline(input, config.extractor);
  output.save(opts.out);

  json chunks = json::array();
  for (const auto& c : report.chunks)
    chunks.push_back({{"input_bits", c.input_bits}, {"output_bits", c.output_bits}});
  const json j = {{"tool", tool_header(config)},
                  {"rng_algorithm", qrng::kRngAlgorithmId},
                  {"chunk_size_bits", report.chunk_size_bits},
                  {"recursion_depth_limit", report.recursion_depth_limit},
                  {"shuffle_seed", report.shuffle_seed},
                  {"total_input_bits", report.total_input_bits},
                  {"total_output_bits", report.total_output_bits},
                  {"mean_complete_chunk_output_bits",
                   report.mean_complete_chunk_output_bits},
                  {"chunks", chunks}};
  qrng::write_file_atomic(opts.out + ".report.json", j.dump(2) + "\n");
  std::cout << "postprocessed " << report.total_input_bits << " -> "
            << report.total_output_bits << " bits ("
            << (report.total_input_bits
                    ? static_cast<double>(report.total_output_bits) /
                          static_cast<double>(report.total_input_bits)
                    : 0.0)
            << " yield) to " << opts.out << "\n";
  return kExitOk;
}

int cmd_analyze(const std::string& bits_path, const CommonOptions& opts) {
  const auto config = effective_config(opts);
  const auto bits = qrng::BitSequence::load(bits_path);

  const auto autocorr = qrng::stats::autocorrelation(bits);
  const auto histogram = qrng::stats::block_histogram(bits);
  const auto runs = qrng::stats::run_lengths(bits);
  const auto [zeros, ones] = qrng::stats::single_bit_proportions(bits);
  const double entropy = qrng::stats::block_entropy_bits(bits);
  const double pi_estimate = qrng::stats::estimate_pi(bits);

  qrng::stats::write_autocorrelation_csv(opts.out + ".autocorrelation.csv",
                                         autocorr);
  qrng::stats::write_block_histogram_csv(opts.out + ".block_histogram.csv",
                                         histogram);
  qrng::stats::write_run_lengths_csv(opts.out + ".run_lengths.csv", runs);

  double max_abs_autocorr = 0.0;
  for (double c : autocorr.coefficients)
    max_abs_autocorr = std::max(max_abs_autocorr, std::abs(c));

  const json j = {{"tool", tool_header(config)},
                  {"bits", bits.size()},
                  {"mean", histogram.mean},
                  {"entropy_bits", entropy},
                  {"pi_estimate", pi_estimate},
                  {"zeros_fraction", zeros},
                  {"ones_fraction", ones},
                  {"autocorrelation_max_abs", max_abs_autocorr},
                  {"run_length_slopes",
                   {{"zeros",
                     {{"slope", runs.zeros_fit.slope},
                      {"std_error", runs.zeros_fit.std_error}}},
                    {"ones",
                     {{"slope", runs.ones_fit.slope},
                      {"std_error", runs.ones_fit.std_error}}}}}};
  qrng::write_file_atomic(opts.out + ".summary.json", j.dump(2) + "\n");
  std::cout << "mean " << histogram.mean << ", entropy " << entropy
            << " bits, pi " << pi_estimate << "\n";
  return kExitOk;
}

int cmd_nist(const std::string& bits_path, const CommonOptions& opts) {
  const auto config = effective_config(opts);
  const auto bits = qrng::BitSequence::load(bits_path);
  const auto result = qrng::nist::run_battery(bits, config.battery);

  json j = qrng::nist::battery_to_json(result);
  j["tool"] = tool_header(config);
  qrng::write_file_atomic(opts.out + ".nist.json", j.dump(2) + "\n");
  const std::string text = qrng::nist::format_battery_text(result);
  qrng::write_file_atomic(opts.out + ".nist.txt", text);
  std::cout << text;
  return result.all_pass ? kExitOk : kExitBatteryFailed;
}

int cmd_report(const std::string& run_dir, const CommonOptions& opts) {
  json aggregate;
  aggregate["tool"] = tool_header(effective_config(opts));
  json documents = json::object();
  for (const auto& entry : fs::directory_iterator(run_dir)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (!name.ends_with(".json")) continue;
    std::ifstream in(entry.path());
    json doc;
    try {
      in >> doc;
    } catch (const json::exception&) {
      continue;  // unrelated JSON artifacts are skipped
    }
    documents[name] = std::move(doc);
  }
  if (documents.empty())
    throw qrng::format_error("report: no JSON documents found in " + run_dir);
  aggregate["documents"] = std::move(documents);

  if (opts.format == "text") {
    std::string text = "run report (" + std::string(qrng::kToolName) + " " +
                       qrng::kToolVersion + ")\n";
    for (const auto& [name, _] : aggregate["documents"].items())
      text += "  - " + name + "\n";
    qrng::write_file_atomic(opts.out, text);
  } else {
    qrng::write_file_atomic(opts.out, aggregate.dump(2) + "\n");
  }
  std::cout << "aggregated " << aggregate["documents"].size()
            << " documents into " << opts.out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"branching-path quantum RNG simulator and analysis pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version",
                       std::string(qrng::kToolName) + " " + qrng::kToolVersion);

  CommonOptions sim_opts;
  auto* sim = app.add_subcommand("simulate",
                                 "simulate the source and write a .qttag file");
  add_common(sim, sim_opts);

  CommonOptions ext_opts;
  std::string ext_in;
  auto* ext = app.add_subcommand("extract", "raw bits from a .qttag file");
  ext->add_option("qttag", ext_in, "input .qttag path")->required();
  add_common(ext, ext_opts);

  CommonOptions post_opts;
  std::string post_in;
  auto* post = app.add_subcommand("postprocess",
                                  "shuffle + recursive pair extraction");
  post->add_option("bits", post_in, "input QBITS001 path")->required();
  add_common(post, post_opts);

  CommonOptions ana_opts;
  std::string ana_in;
  auto* ana = app.add_subcommand("analyze", "characterization battery");
  ana->add_option("bits", ana_in, "input QBITS001 path")->required();
  add_common(ana, ana_opts);

  CommonOptions nist_opts;
  std::string nist_in;
  auto* nist = app.add_subcommand("nist", "statistical test battery");
  nist->add_option("bits", nist_in, "input QBITS001 path")->required();
  add_common(nist, nist_opts);

  CommonOptions rep_opts;
  std::string rep_dir;
  auto* rep = app.add_subcommand("report", "aggregate prior outputs");
  rep->add_option("dir", rep_dir, "directory with prior outputs")->required();
  add_common(rep, rep_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_opts);
    if (ext->parsed()) return cmd_extract(ext_in, ext_opts);
    if (post->parsed()) return cmd_postprocess(post_in, post_opts);
    if (ana->parsed()) return cmd_analyze(ana_in, ana_opts);
    if (nist->parsed()) return cmd_nist(nist_in, nist_opts);
    if (rep->parsed()) return cmd_report(rep_dir, rep_opts);
  } catch (const qrng::format_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const qrng::input_size_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
