#include <doctest.h>

#include <cmath>
#include <random>

#include "hoirl/types.hpp"

using namespace hoirl;

TEST_CASE("box_area") {
  CHECK(box_area({0.0, 0.0, 1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(box_area({0.25, 0.25, 0.75, 0.5}) == doctest::Approx(0.125));
  CHECK(box_area({0.5, 0.5, 0.5, 0.5}) == doctest::Approx(0.0));
}

TEST_CASE("bounding box validation") {
  CHECK(validate(BoundingBox{0.0, 0.0, 1.0, 1.0}).empty());
  CHECK(validate(BoundingBox{0.1, 0.2, 0.3, 0.4}).empty());

  CHECK(!validate(BoundingBox{0.5, 0.0, 0.5, 1.0}).empty()); // zero width
  CHECK(!validate(BoundingBox{0.6, 0.0, 0.4, 1.0}).empty()); // reversed x
  CHECK(!validate(BoundingBox{0.0, 0.8, 1.0, 0.2}).empty()); // reversed y
  CHECK(!validate(BoundingBox{-0.1, 0.0, 1.0, 1.0}).empty());
  CHECK(!validate(BoundingBox{0.0, 0.0, 1.2, 1.0}).empty());
  CHECK(!validate(BoundingBox{0.0, 0.0, std::nan(""), 1.0}).empty());
}

TEST_CASE("validation never throws on fuzzed inputs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> wild(-3.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    BoundingBox b{wild(rng), wild(rng), wild(rng), wild(rng)};
    if (i % 17 == 0) b.x_max = std::numeric_limits<double>::infinity();
    if (i % 23 == 0) b.y_min = std::nan("");
    CHECK_NOTHROW((void)validate(b));

    HoiTriplet t{i % 3 ? "human" : "", "hold", i % 5 ? "cup" : " ", b, b};
    CHECK_NOTHROW((void)validate(t));
  }
}

TEST_CASE("triplet validation") {
  HoiTriplet t{"human", "hold", "cup", {0.0, 0.0, 0.5, 0.5}, {0.5, 0.5, 1.0, 1.0}};
  CHECK(validate(t).empty());

  t.verb_label = "   ";
  CHECK(!validate(t).empty());
  t.verb_label = "hold";
  t.human_box = {0.9, 0.0, 0.1, 1.0};
  CHECK(!validate(t).empty());

  // the subject label must be a human synonym (case-insensitively)
  HoiTriplet dog{"dog", "hold", "cup", {0.0, 0.0, 0.5, 0.5}, {0.5, 0.5, 1.0, 1.0}};
  CHECK(!validate(dog).empty());
  CHECK(validate(dog, {"dog"}).empty());
  HoiTriplet person{"Person", "hold", "cup", {0.0, 0.0, 0.5, 0.5}, {0.5, 0.5, 1.0, 1.0}};
  CHECK(validate(person).empty());
}

TEST_CASE("enum round trips") {
  for (auto s : {AnnotationScheme::fine_grained, AnnotationScheme::precise,
                 AnnotationScheme::open_vocabulary}) {
    auto back = annotation_scheme_from_string(to_string(s));
    REQUIRE(back.has_value());
    CHECK(*back == s);
  }
  for (auto s : {Split::seen, Split::unseen}) {
    auto back = split_from_string(to_string(s));
    REQUIRE(back.has_value());
    CHECK(*back == s);
  }
  CHECK(!annotation_scheme_from_string("bogus").has_value());
  CHECK(!split_from_string("").has_value());
}

TEST_CASE("ground-truth sample validation") {
  GroundTruthSample s;
  s.sample_id = "s1";
  s.query = "what is the interaction?";
  s.gt_triplets = {{"human", "hold", "cup", {0.0, 0.0, 0.5, 0.5}, {0.5, 0.5, 1.0, 1.0}}};
  CHECK(validate(s).empty());

  s.sample_id = "";
  CHECK(!validate(s).empty());
  s.sample_id = "s1";
  s.gt_triplets.clear();
  CHECK(!validate(s).empty());
}

TEST_CASE("reward weights validation") {
  RewardWeights w;
  CHECK(validate(w).empty()); // defaults are a valid equal-weight mix

  SUBCASE("composite weights must sum to 1") {
    w.w_det = 0.5;
    CHECK(!validate(w).empty());
  }
  SUBCASE("blends live in [0,1]") {
    w.beta_det = 1.5;
    CHECK(!validate(w).empty());
  }
  SUBCASE("lambda out of range") {
    w.lambda_cot = -0.1;
    CHECK(!validate(w).empty());
  }
  SUBCASE("delta must be positive") {
    w.delta = 0.0;
    CHECK(!validate(w).empty());
  }
  SUBCASE("group size at least 1") {
    w.grm_group_size = 0;
    CHECK(!validate(w).empty());
  }
  SUBCASE("non-equal but normalized weights are fine") {
    w.w_format = 0.1;
    w.w_det = 0.4;
    w.w_int = 0.3;
    w.w_cot = 0.2;
    CHECK(validate(w).empty());
  }
}

TEST_CASE("optimizer config validation") {
  GrpoConfig c;
  CHECK(validate(c).empty());

  c.group_size = 1;
  CHECK(!validate(c).empty());
  c.group_size = 2;
  c.iterations = -1;
  CHECK(!validate(c).empty());
  c.iterations = 0; // zero iterations is a legal no-op run
  CHECK(validate(c).empty());
  c.clip_epsilon = 0.0;
  CHECK(!validate(c).empty());
}

TEST_CASE("label helpers") {
  CHECK(trim("  hold ") == "hold");
  CHECK(trim("\t\n") == "");
  CHECK(trim("a b") == "a b");
  CHECK(lower("HoLD") == "hold");
  CHECK(labels_equal(" Hold ", "hold"));
  CHECK(labels_equal("CUP", "cup"));
  CHECK(!labels_equal("cup", "cups"));
  CHECK(!labels_equal("", "cup"));
}

TEST_CASE("reward breakdown consistency checks") {
  RewardWeights w;
  RewardBreakdown b; // all-zero: gated malformed output
  CHECK(validate(b, w).empty());

  b.r_format = 1.0;
  b.r_iou = 1.0;
  b.r_reg = 0.5;
  b.r_det = 0.75;
  b.r_act = b.r_obj = b.r_int = 1.0;
  b.r_prm = b.r_grm = b.r_cot = 1.0;
  b.composite = 0.25 * (1.0 + 0.75 + 1.0 + 1.0);
  CHECK(validate(b, w).empty());

  SUBCASE("blend identity enforced") {
    b.r_det = 0.9; // no longer beta_det*r_iou + (1-beta_det)*r_reg
    CHECK(!validate(b, w).empty());
  }
  SUBCASE("gating enforced") {
    b.r_format = 0.0;
    CHECK(!validate(b, w).empty());
  }
  SUBCASE("range enforced") {
    b.r_prm = 1.2;
    CHECK(!validate(b, w).empty());
  }
}

TEST_CASE("group sample ratio consistency") {
  GroupSample s;
  s.logp_current = -1.0;
  s.logp_old = -1.5;
  s.ratio = std::exp(0.5);
  CHECK(validate(s).empty());
  s.ratio = 2.0;
  CHECK(!validate(s).empty());
  s.ratio = -1.0;
  CHECK(!validate(s).empty());
}

TEST_CASE("structured output shape follows its validity flag") {
  StructuredOutput o;
  o.raw_text = "garbage";
  CHECK(validate(o).empty()); // invalid output carries nothing parsed

  o.trace.steps = {"left-over step"};
  CHECK(!validate(o).empty()); // parsed fields without format_valid

  o.trace.steps.clear();
  o.format_valid = true;
  CHECK(!validate(o).empty()); // valid output must carry steps and triplets

  o.trace.steps = {"a step"};
  o.triplets = {{"human", "hold", "cup", {0.0, 0.0, 0.5, 0.5}, {0.5, 0.5, 1.0, 1.0}}};
  CHECK(validate(o).empty());
}

TEST_CASE("default human synonyms include the obvious ones") {
  const auto& syn = default_human_synonyms();
  auto has = [&](const std::string& s) {
    for (const auto& x : syn)
      if (labels_equal(x, s)) return true;
    return false;
  };
  CHECK(has("human"));
  CHECK(has("person"));
}
