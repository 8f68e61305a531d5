// Command-line front end: gen-synthetic / train / score / eval / ablate over
// a key-value config file, plus a check-format grammar validator.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hoirl/errors.hpp"
#include "hoirl/grammar.hpp"
#include "hoirl/jsonl.hpp"
#include "hoirl/pipeline.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> judge;
  std::optional<std::string> dataset;
  std::optional<std::string> predictions;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "key-value config file");
  cmd->add_option("--seed", o.seed, "override the config seed");
  cmd->add_option("--out-dir", o.out_dir, "override the output directory");
  cmd->add_option("--judge", o.judge, "reasoning judge: reference or external")
      ->check(CLI::IsMember({"reference", "external"}));
  cmd->add_option("--dataset", o.dataset, "ground-truth JSONL file");
  cmd->add_option("--predictions", o.predictions, "predictions / raw-output JSONL file");
}

hoirl::RunConfig resolve_config(const Overrides& o) {
  hoirl::RunConfig c =
      o.config_path.empty() ? hoirl::RunConfig{} : hoirl::load_config(o.config_path);

  // Precedence: config file < environment < command line.
  if (const char* ep = std::getenv("HOIRL_JUDGE_ENDPOINT")) c.external_judge.endpoint = ep;
  if (const char* ms = std::getenv("HOIRL_JUDGE_TIMEOUT_MS"))
    c.external_judge.timeout_ms = std::atoi(ms);

  if (o.seed) c.seed = *o.seed;
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.judge)
    c.judge = *o.judge == "external" ? hoirl::JudgeKind::external : hoirl::JudgeKind::reference;
  if (o.dataset) c.dataset = *o.dataset;
  if (o.predictions) c.predictions = *o.predictions;

  c.grpo.rng_seed = c.seed;
  c.scene.rng_seed = c.seed;
  if (auto issues = hoirl::validate(c); !issues.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& i : issues) msg += "\n  - " + i;
    throw hoirl::ConfigError(msg);
  }
  return c;
}

int cmd_check_format(const std::string& input) {
  std::string text;
  if (input == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    text = buf.str();
  } else {
    std::ifstream in(input, std::ios::binary);
    if (!in) {
      std::cerr << "cannot open " << input << "\n";
      return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  const hoirl::StructuredOutput out = hoirl::parse_output(text);
  if (!out.format_valid) {
    std::cout << "invalid\n";
    return 1;
  }
  std::cout << "valid: " << out.trace.size() << " step(s), " << out.triplets.size()
            << " triplet(s)\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-reward policy optimization for structured interaction prediction"};
  app.require_subcommand(1);

  Overrides o;
  auto* gen = app.add_subcommand("gen-synthetic", "write synthetic scenes as a JSONL dataset");
  auto* train = app.add_subcommand("train", "optimize a template policy on the seeded task");
  auto* score = app.add_subcommand("score", "score raw outputs against ground truth");
  auto* eval = app.add_subcommand("eval", "compute corpus metrics for a predictions file");
  auto* ablate = app.add_subcommand("ablate", "rerun training with reward terms removed");
  for (auto* cmd : {gen, train, score, eval, ablate}) add_common_options(cmd, o);

  auto* check = app.add_subcommand("check-format", "validate one output against the grammar");
  std::string check_input;
  check->add_option("input", check_input, "file to validate, or - for stdin")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check_format(check_input);

    const hoirl::RunConfig c = resolve_config(o);
    if (gen->parsed()) {
      const auto result = hoirl::run_gen(c);
      std::cout << "wrote " << result.samples.size() << " scene(s) to " << result.dataset_path
                << "\n";
    } else if (train->parsed()) {
      const auto result = hoirl::run_train(c);
      std::cout << "trained " << c.grpo.iterations << " iteration(s) on "
                << result.scene.sample_id << "\n"
                << "expected reward " << result.final_expected_reward << " (best point-mass "
                << result.optimal_reward << ")\n"
                << "wrote " << result.history_path << ", " << result.params_path << ", "
                << result.predictions_path << "\n";
    } else if (score->parsed()) {
      const auto result = hoirl::run_score(c);
      for (const auto& e : result.errors) std::cerr << "warning: " << e << "\n";
      std::cout << "scored " << result.scored << " output(s) into " << result.scores_path << "\n";
    } else if (eval->parsed()) {
      const auto result = hoirl::run_eval(c);
      std::cout << hoirl::format_report_table(result.report) << "wrote " << result.report_path
                << "\n";
    } else if (ablate->parsed()) {
      const auto rows = hoirl::run_ablate(c);
      std::cout << hoirl::format_ablation_table(rows);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
