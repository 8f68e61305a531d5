// Tests for the plain-text run configuration: defaults, key coverage, seed
// fan-out, and the error reporting contract (origin plus line number on every
// parse failure, aggregated validation messages after a structurally clean
// parse).

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "hoirl/config.hpp"
#include "hoirl/errors.hpp"

using namespace hoirl;

namespace {

// Runs the parser and hands back the ConfigError message, failing the test if
// no error was thrown.
std::string error_of(const std::string& text) {
  try {
    parse_config_text(text, "test.cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  FAIL("expected ConfigError for:\n" << text);
  return {};
}

} // namespace

TEST_CASE("empty and comment-only configs yield the defaults") {
  for (const std::string& text : {std::string(""), std::string("# nothing here\n\n  \n# more\n")}) {
    const RunConfig c = parse_config_text(text, "inline");
    CHECK(c.judge == JudgeKind::reference);
    CHECK(c.seed == 0);
    CHECK(c.gen_count == 8);
    CHECK(c.out_dir == ".");
    CHECK(c.dataset.empty());
    CHECK(c.rewards.w_det == 0.25);
    CHECK(c.rewards.delta == 0.1);
    CHECK(c.grpo.group_size == 8);
    CHECK(c.grpo.clip_epsilon == 0.2);
    CHECK(c.grpo.iterations == 100);
    CHECK(c.scene.grid_resolution == 8);
    CHECK(c.scene.n_objects == 1);
    CHECK(validate(c).empty());
  }
}

TEST_CASE("every recognized key round-trips into the config") {
  const std::string text =
      "# full sweep\n"
      "seed = 77\n"
      "dataset = data/train.jsonl\n"
      "predictions = out/preds.jsonl\n"
      "out_dir = runs/a\n"
      "gen_count = 3\n"
      "judge = external\n"
      "judge.endpoint = http://127.0.0.1:9000/judge\n"
      "judge.timeout_ms = 250\n"
      "judge.max_inflight = 4\n"
      "reward.beta_det = 0.25\n"
      "reward.gamma = 0.75\n"
      "reward.lambda_cot = 0.4\n"
      "reward.delta = 0.2\n"
      "reward.iou_threshold = 0.5\n"
      "reward.w_format = 0.1\n"
      "reward.w_det = 0.2\n"
      "reward.w_int = 0.3\n"
      "reward.w_cot = 0.4\n"
      "reward.grm_group_size = 3\n"
      "grpo.group_size = 4\n"
      "grpo.clip_epsilon = 0.1\n"
      "grpo.beta_kl = 0.02\n"
      "grpo.learning_rate = 0.25\n"
      "grpo.iterations = 12\n"
      "grpo.std_guard = 1e-7\n"
      "scene.grid_resolution = 16\n"
      "scene.n_objects = 2\n"
      "scene.verbs = walk, sit on ,ride\n"
      "scene.objects = bicycle,dining table\n"
      "scene.boxes_per_side = 5\n"
      "scene.template_cap = 64\n";
  const RunConfig c = parse_config_text(text, "inline");
  CHECK(c.seed == 77);
  CHECK(c.dataset == "data/train.jsonl");
  CHECK(c.predictions == "out/preds.jsonl");
  CHECK(c.out_dir == "runs/a");
  CHECK(c.gen_count == 3);
  CHECK(c.judge == JudgeKind::external);
  CHECK(c.external_judge.endpoint == "http://127.0.0.1:9000/judge");
  CHECK(c.external_judge.timeout_ms == 250);
  CHECK(c.external_judge.max_inflight == 4);
  CHECK(c.rewards.beta_det == 0.25);
  CHECK(c.rewards.gamma == 0.75);
  CHECK(c.rewards.lambda_cot == 0.4);
  CHECK(c.rewards.delta == 0.2);
  CHECK(c.rewards.w_format == 0.1);
  CHECK(c.rewards.w_det == 0.2);
  CHECK(c.rewards.w_int == 0.3);
  CHECK(c.rewards.w_cot == 0.4);
  CHECK(c.rewards.grm_group_size == 3);
  CHECK(c.grpo.group_size == 4);
  CHECK(c.grpo.clip_epsilon == 0.1);
  CHECK(c.grpo.beta_kl == 0.02);
  CHECK(c.grpo.learning_rate == 0.25);
  CHECK(c.grpo.iterations == 12);
  CHECK(c.grpo.std_guard == 1e-7);
  CHECK(c.scene.grid_resolution == 16);
  CHECK(c.scene.n_objects == 2);
  // Comma lists are trimmed per item.
  CHECK((c.scene.verb_vocabulary == std::vector<std::string>{"walk", "sit on", "ride"}));
  CHECK((c.scene.object_vocabulary == std::vector<std::string>{"bicycle", "dining table"}));
  CHECK(c.scene.boxes_per_side == 5);
  CHECK(c.scene.template_cap == 64);
  CHECK(validate(c).empty());
}

TEST_CASE("the single seed drives both the optimizer and the scene generator") {
  const RunConfig c = parse_config_text("seed = 123456789\n", "inline");
  CHECK(c.grpo.rng_seed == 123456789);
  CHECK(c.scene.rng_seed == 123456789);
  // Even the default seed fans out.
  const RunConfig d = parse_config_text("", "inline");
  CHECK(d.grpo.rng_seed == 0);
  CHECK(d.scene.rng_seed == 0);
}

TEST_CASE("parse failures carry the origin and line number") {
  SUBCASE("unknown key, including near-misses of real keys") {
    const std::string msg = error_of("seed = 1\ngrpo.betta_kl = 0.04\n");
    CHECK(msg.find("test.cfg:2") != std::string::npos);
    CHECK(msg.find("unknown key 'grpo.betta_kl'") != std::string::npos);
  }
  SUBCASE("duplicate key") {
    const std::string msg = error_of("seed = 1\n# pad\nseed = 2\n");
    CHECK(msg.find("test.cfg:3") != std::string::npos);
    CHECK(msg.find("duplicate key 'seed'") != std::string::npos);
  }
  SUBCASE("line without an equals sign") {
    const std::string msg = error_of("foo\n");
    CHECK(msg.find("test.cfg:1") != std::string::npos);
    CHECK(msg.find("expected 'key = value'") != std::string::npos);
  }
  SUBCASE("missing key") {
    CHECK(error_of("= 5\n").find("missing key") != std::string::npos);
  }
  SUBCASE("missing value") {
    CHECK(error_of("seed =\n").find("missing value for key 'seed'") != std::string::npos);
  }
  SUBCASE("non-numeric value for a numeric key") {
    const std::string msg = error_of("grpo.iterations = soon\n");
    CHECK(msg.find("test.cfg:1") != std::string::npos);
    CHECK(msg.find("'soon' is not an integer") != std::string::npos);
  }
  SUBCASE("malformed double") {
    CHECK(error_of("reward.gamma = 0.5x\n").find("is not a number") != std::string::npos);
  }
  SUBCASE("negative seed") {
    CHECK(error_of("seed = -3\n").find("not an unsigned integer") != std::string::npos);
  }
  SUBCASE("bad judge kind") {
    CHECK(error_of("judge = oracle\n").find("judge must be 'reference' or 'external'") !=
          std::string::npos);
  }
  SUBCASE("empty label inside a list") {
    CHECK(error_of("scene.verbs = walk,,ride\n").find("empty label") != std::string::npos);
  }
  SUBCASE("comments are whole-line only, so a trailing comment corrupts the value") {
    CHECK(error_of("reward.gamma = 0.5 # half\n").find("is not a number") != std::string::npos);
  }
}

TEST_CASE("validation violations are aggregated after parsing") {
  SUBCASE("out-of-range reward blend names the reward section") {
    const std::string msg = error_of("reward.lambda_cot = 1.5\n");
    CHECK(msg.find("invalid configuration") != std::string::npos);
    CHECK(msg.find("reward:") != std::string::npos);
    CHECK(msg.find("lambda_cot") != std::string::npos);
  }
  SUBCASE("changing one weight alone breaks the sum-to-one contract") {
    const std::string msg = error_of("reward.w_det = 0.5\n");
    CHECK(msg.find("reward:") != std::string::npos);
  }
  SUBCASE("the iou threshold is pinned at 0.5") {
    CHECK(error_of("reward.iou_threshold = 0.4\n").find("reward:") != std::string::npos);
  }
  SUBCASE("external judge needs an endpoint") {
    const std::string msg = error_of("judge = external\n");
    CHECK(msg.find("judge.endpoint is empty") != std::string::npos);
  }
  SUBCASE("multiple violations are reported together") {
    const std::string msg = error_of("grpo.group_size = 1\nscene.n_objects = 0\n");
    CHECK(msg.find("grpo:") != std::string::npos);
    CHECK(msg.find("scene:") != std::string::npos);
  }
  SUBCASE("gen_count must be positive") {
    CHECK(error_of("gen_count = 0\n").find("gen_count") != std::string::npos);
  }
}

TEST_CASE("load_config reads files and reports unreadable paths") {
  const std::string path = "test_config_roundtrip.cfg";
  {
    std::ofstream out(path, std::ios::binary);
    out << "seed = 9\ngen_count = 2\n";
  }
  const RunConfig c = load_config(path);
  CHECK(c.seed == 9);
  CHECK(c.gen_count == 2);
  std::remove(path.c_str());

  CHECK_THROWS_WITH_AS(load_config("does-not-exist.cfg"),
                       "cannot open config file: does-not-exist.cfg", ConfigError);
}
