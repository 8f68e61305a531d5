// Tests for the JSONL readers and writers: value-exact round trips through
// real files, byte-stable serialized output, blank-line tolerance, and the
// "path:line:" error context that every reader failure must carry.

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hoirl/errors.hpp"
#include "hoirl/jsonl.hpp"
#include "hoirl/types.hpp"

using namespace hoirl;

namespace {

HoiTriplet triplet(const std::string& verb, const std::string& object, const BoundingBox& h,
                   const BoundingBox& o) {
  HoiTriplet t;
  t.subject_label = "human";
  t.verb_label = verb;
  t.object_label = object;
  t.human_box = h;
  t.object_box = o;
  return t;
}

GroundTruthSample sample(const std::string& id, AnnotationScheme scheme, Split split,
                         std::vector<HoiTriplet> gt) {
  GroundTruthSample s;
  s.sample_id = id;
  s.query = "please identify the interaction in " + id;
  s.annotation_scheme = scheme;
  s.split = split;
  s.gt_triplets = std::move(gt);
  return s;
}

// Writes raw text to a scratch file and returns its path.
std::string write_file(const std::string& name, const std::string& text) {
  std::ofstream out(name, std::ios::binary | std::ios::trunc);
  out << text;
  return name;
}

// Captures the reader's IoError message, failing if nothing was thrown.
template <typename Fn>
std::string read_error(Fn reader) {
  try {
    reader();
  } catch (const IoError& e) {
    return e.what();
  }
  FAIL("expected IoError");
  return {};
}

} // namespace

TEST_CASE("ground-truth samples survive a file round trip exactly") {
  const std::vector<GroundTruthSample> samples = {
      sample("a", AnnotationScheme::fine_grained, Split::seen,
             {triplet("hold", "cup", {0.0, 0.0, 0.5, 0.5}, {0.5, 0.5, 1.0, 1.0}),
              triplet("ride", "bicycle", {0.25, 0.125, 0.75, 0.875}, {0.0, 0.5, 0.375, 1.0})}),
      sample("b", AnnotationScheme::open_vocabulary, Split::unseen,
             {triplet("sit on", "dining table", {0.1, 0.2, 0.3, 0.4}, {0.6, 0.7, 0.8, 0.9})}),
  };
  const std::string path = "test_jsonl_dataset.jsonl";
  write_dataset(path, samples);
  const auto back = read_dataset(path);
  REQUIRE(back.size() == samples.size());
  CHECK(back[0] == samples[0]);
  CHECK(back[1] == samples[1]);
  std::remove(path.c_str());
}

TEST_CASE("serialized sample lines are byte-stable") {
  const GroundTruthSample s = sample(
      "synth-1", AnnotationScheme::precise, Split::seen,
      {triplet("hold", "cup", {0.0, 0.0, 0.5, 0.5}, {0.5, 0.5, 1.0, 1.0})});
  // Field order, double formatting, and escaping are part of the contract:
  // re-serializing unchanged data must reproduce the file byte for byte.
  const std::string expected =
      R"({"sample_id":"synth-1","query":"please identify the interaction in synth-1",)"
      R"("annotation_scheme":"precise","split":"seen",)"
      R"("gt":[{"subject":"human","verb":"hold","object":"cup",)"
      R"("human_box":[0.0,0.0,0.5,0.5],"object_box":[0.5,0.5,1.0,1.0]}]})";
  CHECK(to_json_line(s) == expected);
  CHECK(to_json_line(sample_from_json(expected)) == expected);
}

TEST_CASE("predictions and raw outputs round-trip") {
  const std::vector<PredictionRecord> preds = {
      {"a", {triplet("hold", "cup", {0.0, 0.0, 0.5, 0.5}, {0.5, 0.5, 1.0, 1.0})}},
      {"b", {}}, // a sample the model produced no triplets for
  };
  const std::string ppath = "test_jsonl_preds.jsonl";
  write_predictions(ppath, preds);
  CHECK(read_predictions(ppath) == preds);
  std::remove(ppath.c_str());

  const std::vector<RawOutputRecord> raws = {
      {"a", "<think>\nthe human will hold the cup\n</think>\n<answer>\n</answer>"},
      {"b", "not even close to the grammar"},
  };
  const std::string rpath = "test_jsonl_raw.jsonl";
  write_raw_outputs(rpath, raws);
  CHECK(read_raw_outputs(rpath) == raws);
  // Newlines inside output_text must be escaped, keeping one record per line.
  CHECK(to_json_line(raws[0]).find('\n') == std::string::npos);
  std::remove(rpath.c_str());
}

TEST_CASE("training history round-trips field by field") {
  std::vector<IterationStats> history(3);
  for (int i = 0; i < 3; ++i) {
    history[i].iteration = i;
    history[i].mean_reward = 0.25 * (i + 1);
    history[i].objective = -0.125 + 0.5 * i;
    history[i].mean_kl = 0.001953125 * i;
    history[i].wall_ms = 1.5 + i;
  }
  const std::string path = "test_jsonl_history.jsonl";
  write_history(path, history);
  const auto back = read_history(path);
  REQUIRE(back.size() == history.size());
  for (std::size_t i = 0; i < history.size(); ++i) {
    CHECK(back[i].iteration == history[i].iteration);
    CHECK(back[i].mean_reward == history[i].mean_reward);
    CHECK(back[i].objective == history[i].objective);
    CHECK(back[i].mean_kl == history[i].mean_kl);
    CHECK(back[i].wall_ms == history[i].wall_ms);
  }
  std::remove(path.c_str());
}

TEST_CASE("parameter vectors round-trip through a single JSON document") {
  const std::vector<double> params = {0.0, -1.25, 3.0, 0.0001220703125};
  const std::string path = "test_jsonl_params.json";
  write_params(path, params);
  CHECK(read_params(path) == params);
  std::remove(path.c_str());

  CHECK(read_error([] { read_params("no-such-params.json"); }).find("cannot open") !=
        std::string::npos);
  const std::string bad = write_file("test_jsonl_params_bad.json", "{\"params\": [1, \"x\"]}\n");
  CHECK(read_error([&] { read_params(bad); }).find("must hold numbers") != std::string::npos);
  std::remove(bad.c_str());
}

TEST_CASE("score lines carry the full reward breakdown") {
  RewardBreakdown b;
  b.r_format = 1.0;
  b.r_det = 0.75;
  b.r_int = 0.5;
  b.r_cot = 0.75;
  b.r_iou = 0.5;
  b.r_reg = 1.0;
  b.r_act = 1.0;
  b.r_obj = 0.0;
  b.r_prm = 0.75;
  b.r_grm = 0.75;
  b.composite = 0.75;
  const auto j = nlohmann::json::parse(breakdown_to_json_line("synth-2", b));
  CHECK(j.at("sample_id") == "synth-2");
  CHECK(j.at("r_det").get<double>() == 0.75);
  CHECK(j.at("r_obj").get<double>() == 0.0);
  CHECK(j.at("composite").get<double>() == 0.75);
  CHECK(j.size() == 12); // sample_id + 11 reward fields, nothing extra
}

TEST_CASE("readers skip blank lines") {
  const GroundTruthSample s = sample(
      "pad", AnnotationScheme::precise, Split::seen,
      {triplet("hold", "cup", {0.0, 0.0, 0.5, 0.5}, {0.5, 0.5, 1.0, 1.0})});
  const std::string path =
      write_file("test_jsonl_blank.jsonl", "\n   \n" + to_json_line(s) + "\n\n");
  const auto back = read_dataset(path);
  REQUIRE(back.size() == 1);
  CHECK(back[0] == s);
  std::remove(path.c_str());
}

TEST_CASE("reader failures name the file and line") {
  const GroundTruthSample s = sample(
      "ok", AnnotationScheme::precise, Split::seen,
      {triplet("hold", "cup", {0.0, 0.0, 0.5, 0.5}, {0.5, 0.5, 1.0, 1.0})});

  SUBCASE("unparseable JSON") {
    const std::string path =
        write_file("test_jsonl_err1.jsonl", to_json_line(s) + "\n{not json\n");
    const std::string msg = read_error([&] { read_dataset(path); });
    CHECK(msg.find("test_jsonl_err1.jsonl:2:") != std::string::npos);
    CHECK(msg.find("invalid JSON") != std::string::npos);
    std::remove(path.c_str());
  }
  SUBCASE("missing field") {
    const std::string path =
        write_file("test_jsonl_err2.jsonl", "{\"sample_id\":\"x\"}\n");
    const std::string msg = read_error([&] { read_dataset(path); });
    CHECK(msg.find("test_jsonl_err2.jsonl:1:") != std::string::npos);
    CHECK(msg.find("missing field 'query'") != std::string::npos);
    std::remove(path.c_str());
  }
  SUBCASE("wrong box arity") {
    std::string line = to_json_line(s);
    const auto pos = line.find("[0.0,0.0,0.5,0.5]");
    REQUIRE(pos != std::string::npos);
    line.replace(pos, std::string("[0.0,0.0,0.5,0.5]").size(), "[0.0,0.0,0.5]");
    const std::string path = write_file("test_jsonl_err3.jsonl", line + "\n");
    const std::string msg = read_error([&] { read_dataset(path); });
    CHECK(msg.find("4-element array") != std::string::npos);
    std::remove(path.c_str());
  }
  SUBCASE("sample that fails semantic validation") {
    GroundTruthSample bad = s;
    bad.gt_triplets[0].human_box = {0.9, 0.9, 0.1, 0.1}; // reversed corners
    const std::string path = write_file("test_jsonl_err4.jsonl", to_json_line(bad) + "\n");
    const std::string msg = read_error([&] { read_dataset(path); });
    CHECK(msg.find("test_jsonl_err4.jsonl:1:") != std::string::npos);
    CHECK(msg.find("invalid sample 'ok'") != std::string::npos);
    std::remove(path.c_str());
  }
  SUBCASE("unknown enum value") {
    std::string line = to_json_line(s);
    const auto pos = line.find("\"precise\"");
    REQUIRE(pos != std::string::npos);
    line.replace(pos, 9, "\"vague\"");
    const std::string path = write_file("test_jsonl_err5.jsonl", line + "\n");
    const std::string msg = read_error([&] { read_dataset(path); });
    CHECK(msg.find("unknown annotation_scheme 'vague'") != std::string::npos);
    std::remove(path.c_str());
  }
  SUBCASE("missing file") {
    CHECK(read_error([] { read_predictions("no-such-file.jsonl"); }).find("cannot open") !=
          std::string::npos);
  }
  SUBCASE("non-finite number in history") {
    const std::string path = write_file(
        "test_jsonl_err6.jsonl",
        "{\"iter\":0,\"mean_reward\":null,\"objective\":0.0,\"mean_kl\":0.0,\"wall_ms\":1.0}\n");
    const std::string msg = read_error([&] { read_history(path); });
    CHECK(msg.find("'mean_reward' must be a number") != std::string::npos);
    std::remove(path.c_str());
  }
}

TEST_CASE("evaluation reports serialize to parseable JSON") {
  EvalReport report;
  report.overall = {0.75, 0.5, 1.0, 0.5, 2};
  report.by_split[Split::seen] = {1.0, 1.0, 1.0, 1.0, 1};
  report.by_scheme[AnnotationScheme::precise] = {0.75, 0.5, 1.0, 0.5, 2};
  report.rows.push_back({"a", Split::seen, AnnotationScheme::precise, {1.0, 1.0, 1.0, true}});
  report.rows.push_back({"b", Split::unseen, AnnotationScheme::precise, {0.5, 0.0, 1.0, false}});
  report.errors.push_back("c: no prediction for this sample");

  const auto j = nlohmann::json::parse(report_to_json(report));
  CHECK(j.at("overall").at("h_miou").get<double>() == 0.75);
  CHECK(j.at("overall").at("n_samples").get<int>() == 2);
  CHECK(j.at("by_split").at("seen").at("map_rate").get<double>() == 1.0);
  CHECK(j.at("by_scheme").at("precise").at("a_acc").get<double>() == 1.0);
  REQUIRE(j.at("rows").size() == 2);
  CHECK(j.at("rows")[0].at("sample_id") == "a");
  CHECK(j.at("rows")[1].at("map_pass").get<bool>() == false);
  REQUIRE(j.at("errors").size() == 1);
  CHECK(j.at("errors")[0] == "c: no prediction for this sample");
}
