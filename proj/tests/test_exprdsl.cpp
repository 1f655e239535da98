#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "metallic/dsl.hpp"
#include "metallic/errors.hpp"

using mk::dsl::parse;
using mk::dsl::render;

namespace {

double ev(const std::string& s, std::vector<double> x = {}) { return parse(s).eval(x); }

/// Random expression text with its value computed alongside, so the parser
/// is checked against an evaluator that never sees the text.
struct Gen {
  std::mt19937_64 rng;
  std::vector<double> x;

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  std::pair<std::string, double> leaf() {
    if (pick(2) == 0) {
      const int i = pick(static_cast<int>(x.size()));
      return {"x" + std::to_string(i), x[static_cast<std::size_t>(i)]};
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", uniform(0.1, 3.0));
    return {buf, std::strtod(buf, nullptr)};
  }

  std::pair<std::string, double> node(int depth) {
    if (depth == 0) return leaf();
    switch (pick(8)) {
      case 0: {
        auto [a, va] = node(depth - 1);
        auto [b, vb] = node(depth - 1);
        return {"(" + a + " + " + b + ")", va + vb};
      }
      case 1: {
        auto [a, va] = node(depth - 1);
        auto [b, vb] = node(depth - 1);
        return {"(" + a + " - " + b + ")", va - vb};
      }
      case 2: {
        auto [a, va] = node(depth - 1);
        auto [b, vb] = node(depth - 1);
        return {"(" + a + " * " + b + ")", va * vb};
      }
      case 3: {
        auto [a, va] = node(depth - 1);
        auto [b, vb] = node(depth - 1);
        return {"(" + a + " / (1 + " + b + "^2))", va / (1.0 + std::pow(vb, 2.0))};
      }
      case 4: {
        auto [a, va] = node(depth - 1);
        return {"sin(" + a + ")", std::sin(va)};
      }
      case 5: {
        auto [a, va] = node(depth - 1);
        return {"cos(" + a + ")", std::cos(va)};
      }
      case 6: {
        auto [a, va] = node(depth - 1);
        return {"(-" + a + ")", -va};
      }
      default: {
        auto [a, va] = node(depth - 1);
        return {"sqrt(1 + " + a + "^2)", std::sqrt(1.0 + std::pow(va, 2.0))};
      }
    }
  }
};

}  // namespace

TEST_CASE("literals, coordinates and constants") {
  CHECK(ev("42") == 42.0);
  CHECK(ev("1.5e2") == 150.0);
  CHECK(ev(".25") == 0.25);
  CHECK(ev("pi") == std::numbers::pi);
  CHECK(ev("e") == std::numbers::e);
  CHECK(ev("x3", {1, 2, 3, 4}) == 4.0);
  CHECK(ev("x + y + z + w", {1, 10, 100, 1000}) == 1111.0);
}

TEST_CASE("precedence and associativity") {
  CHECK(ev("2 + 3 * 4") == 14.0);
  CHECK(ev("2 ^ 3 ^ 2") == 512.0);
  CHECK(ev("-x0^2", {3.0}) == -9.0);
  CHECK(ev("2^-1") == 0.5);
  CHECK(ev("8 / 4 / 2") == 1.0);
  CHECK(ev("10 - 4 - 3") == 3.0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 50; ++k) {
    char buf[160];
    const double a = u(rng), b = u(rng), c = u(rng);
    std::snprintf(buf, sizeof buf, "%.17g", a);
    const std::string sa = buf;
    std::snprintf(buf, sizeof buf, "%.17g", b);
    const std::string sb = buf;
    std::snprintf(buf, sizeof buf, "%.17g", c);
    const std::string sc = buf;
    const std::string wrap_b = "(" + sb + ")", wrap_c = "(" + sc + ")";
    CHECK(ev(sa + "+" + wrap_b + "*" + wrap_c) == ev(sa + "+(" + wrap_b + "*" + wrap_c + ")"));
  }
}

TEST_CASE("functions") {
  CHECK(ev("sin(0)") == 0.0);
  CHECK(ev("cos(0)") == 1.0);
  CHECK(ev("exp(0)") == 1.0);
  CHECK(ev("ln(e)") == doctest::Approx(1.0));
  CHECK(ev("sqrt(16)") == 4.0);
  CHECK(ev("sinh(0) + cosh(0) + tan(0)") == 1.0);
}

TEST_CASE("parse errors carry 1-based offsets") {
  auto offset_of = [](const std::string& s) -> std::size_t {
    try {
      parse(s);
    } catch (const mk::ParseError& e) {
      return e.offset();
    }
    return 0;
  };
  CHECK(offset_of("1 + * 2") == 5);
  CHECK(offset_of("(1 + 2") == 7);
  CHECK(offset_of("foo(1)") == 1);
  CHECK(offset_of("") == 1);
  CHECK(offset_of("1 2") == 3);
  CHECK(offset_of("sin(1, 2)") > 0);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(ev("ln(0)"), mk::DomainError);
  CHECK_THROWS_AS(ev("sqrt(-1)"), mk::DomainError);
  CHECK_THROWS_AS(ev("1/(x0 - x0)", {2.0}), mk::DomainError);
  CHECK_THROWS_AS(ev("(-2)^0.5"), mk::DomainError);
  CHECK(ev("(-2)^3") == -8.0);
  CHECK_THROWS_AS(ev("x2", {1.0}), mk::Error);
}

TEST_CASE("max coordinate") {
  CHECK(parse("1 + 2").max_coordinate() == -1);
  CHECK(parse("x0 * sin(x5) + y").max_coordinate() == 5);
}

TEST_CASE("render, parse and evaluate agree on 100 random expressions") {
  Gen g{std::mt19937_64(2024), {0.3, -0.7, 1.1, 0.05}};
  for (int k = 0; k < 100; ++k) {
    const auto [text, expected] = g.node(1 + k % 5);
    CAPTURE(text);
    const auto e = parse(text);
    const double v = e.eval(g.x);
    const double scale = std::max(1.0, std::abs(expected));
    CHECK(std::abs(v - expected) <= 1e-15 * scale);
    const auto again = parse(render(e));
    CHECK(std::abs(again.eval(g.x) - v) <= 1e-15 * std::max(1.0, std::abs(v)));
    CHECK(render(again) == render(e));
  }
}

TEST_CASE("concurrent evaluation of one tree") {
  const auto e = parse("sin(x0) * exp(x1) + sqrt(1 + x0^2)");
  std::vector<double> out(64);
#pragma omp parallel for
  for (int i = 0; i < 64; ++i) {
    const double x[2] = {0.01 * i, -0.02 * i};
    out[static_cast<std::size_t>(i)] = e.eval(x);
  }
  for (int i = 0; i < 64; ++i) {
    const double x0 = 0.01 * i, x1 = -0.02 * i;
    CHECK(out[static_cast<std::size_t>(i)] == std::sin(x0) * std::exp(x1) + std::sqrt(1 + std::pow(x0, 2.0)));
  }
}
