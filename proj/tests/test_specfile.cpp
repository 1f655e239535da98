#include <cmath>
#include <sstream>

#include "doctest.h"
#include "metallic/errors.hpp"
#include "metallic/specfile.hpp"
#include "metallic/zoo.hpp"

using namespace mk;

namespace {

const char* kFlatJm = R"(dimension = 2
p = 0
q = 2
structure = JM
grid = 2
random = 0

[bounds]
0 = -1, 1
1 = -1, 1

[metric]
0 0 = 1
1 1 = 1

[JM]
1 0 = sqrt(3)
0 1 = -sqrt(3)
)";

std::pair<std::size_t, std::size_t> error_position(const std::string& text) {
  try {
    parse_spec(text, "t.spec");
  } catch (const SpecError& e) {
    CHECK(e.file() == "t.spec");
    return {e.line(), e.column()};
  }
  FAIL("expected a SpecError for:\n" << text);
  return {0, 0};
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("the shipped malformed spec reports line and column") {
  try {
    load_spec(std::string(METALLIC_SPECS_DIR) + "/bad.spec");
    FAIL("bad.spec parsed");
  } catch (const SpecError& e) {
    CHECK(e.line() == 13);
    CHECK(e.column() == 16);
    CHECK(std::string(e.what()).find("bad.spec:13:16") != std::string::npos);
  }
  CHECK_THROWS_AS(load_spec("/nonexistent/file.spec"), SpecError);
}

TEST_CASE("header and table errors") {
  const std::string ok = kFlatJm;
  CHECK_NOTHROW(parse_spec(ok));
  CHECK(error_position(replace(ok, "q = 2", "q = two")) == std::pair<std::size_t, std::size_t>{3, 5});
  CHECK(error_position(replace(ok, "grid = 2", "grid = 0")).first == 5);
  CHECK(error_position(replace(ok, "random = 0", "colour = red")).first == 6);
  CHECK(error_position(replace(ok, "q = 2", "q = 2\nq = 3")).first == 4);
  CHECK(error_position(replace(ok, "1 1 = 1", "0 0 = 2")).first == 14);
  CHECK(error_position(replace(ok, "1 1 = 1", "1 2 = 1")).first == 14);
  CHECK(error_position(replace(ok, "[JM]", "[K]")).first == 16);
  CHECK(error_position(replace(ok, "1 = -1, 1\n", "1 = 1, -1\n")).first == 10);
  CHECK(error_position(replace(ok, "0 0 = 1\n", "0 0 = x2\n")).first == 13);
  CHECK(error_position(replace(ok, "0 0 = 1\n", "0 0 = (1\n")).first == 13);
  CHECK_THROWS_AS(parse_spec(replace(ok, "dimension = 2\n", "")), SpecError);
  CHECK_THROWS_AS(parse_spec(replace(ok, "[metric]\n0 0 = 1\n1 1 = 1\n", "")), SpecError);
}

TEST_CASE("render and parse reach a fixpoint") {
  for (const char* name : {"flat-k1", "flat-k2", "flat-k3", "torus", "s2"}) {
    CAPTURE(name);
    const auto spec = load_spec(std::string(METALLIC_SPECS_DIR) + "/" + name + ".spec");
    const auto text = render_spec(spec);
    CHECK(render_spec(parse_spec(text)) == text);
  }
  const auto jm = parse_spec(kFlatJm);
  CHECK(render_spec(parse_spec(render_spec(jm))) == render_spec(jm));
}

TEST_CASE("mirrored specs reproduce the built-in verdicts") {
  for (const char* name : {"flat-k1", "flat-k2", "flat-k3", "torus", "s2"}) {
    CAPTURE(name);
    const auto fx = zoo::make(name);
    const auto spec = parse_spec(*fx.mirrored_spec);
    const auto bundle = build_bundle(spec);
    const auto from_spec = classify(bundle, {}, spec.thresholds());
    const auto built_in = classify(fx.bundle, {}, {});
    CHECK(from_spec.verdict == fx.expected);
    CHECK(from_spec.verdict == built_in.verdict);
    for (std::size_t i = 0; i < built_in.residuals.size(); ++i)
      CHECK(std::abs(from_spec.residuals[i].value - built_in.residuals[i].value) < 1e-9);
  }
}

TEST_CASE("structures given directly as J_M") {
  const auto spec = parse_spec(kFlatJm);
  CHECK(spec.structure_is_jm);
  const auto bundle = build_bundle(spec);
  const Point x{0.1, 0.2};
  CHECK(std::abs(bundle.jm()(x).matrix()(1, 0) - std::sqrt(3.0)) < 1e-15);
  CHECK(classify(bundle, {}, {}).verdict == Verdict::MetallicKahler);

  // J_M that violates J_M² = pJ_M - (3q/2)I
  const auto wrong = parse_spec(replace(kFlatJm, "1 0 = sqrt(3)", "1 0 = 2"));
  try {
    build_bundle(wrong);
    FAIL("inconsistent structure accepted");
  } catch (const SpecError& e) {
    CHECK(e.line() == 18);
  }
}

TEST_CASE("sampling and tolerance overrides") {
  auto text = replace(kFlatJm, "random = 0", "random = 0\nseed = 7\ntol_d1 = 1e-6\nh = 2e-3");
  text += "\n[points]\nhere = 0.25, -0.5\n";
  const auto spec = parse_spec(text);
  CHECK(spec.sampling.seed == 7);
  CHECK(spec.sampling.grid == 2);
  REQUIRE(spec.step.has_value());
  CHECK(*spec.step == 2e-3);
  const auto tol = spec.thresholds();
  CHECK(tol.d1 == 1e-6);
  CHECK(tol.alg == Thresholds{}.alg);
  REQUIRE(spec.sampling.named.size() == 1);
  CHECK(spec.sampling.named[0].x == Point{0.25, -0.5});
  CHECK(render_spec(parse_spec(render_spec(spec))) == render_spec(spec));
}

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}
