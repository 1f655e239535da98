// Serial reference vs OpenMP kernels on the heavier pipeline stages.
//
//   bench_frames [points] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "metallic/identities.hpp"
#include "metallic/zoo.hpp"

using namespace mk;

namespace {

template <class F>
double best_ms(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void row(const char* stage, const char* fixture, double serial, double parallel) {
  std::printf("%-22s %-6s %10.2f %10.2f %8.2fx\n", stage, fixture, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const int random = argc > 1 ? std::atoi(argv[1]) : 64;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  std::printf("threads %d, %d random points per fixture, best of %d\n\n", par::max_threads(), random, repeats);
  std::printf("%-22s %-6s %10s %10s %9s\n", "stage", "chart", "serial ms", "omp ms", "speedup");

  for (const char* name : {"s2", "s6"}) {
    auto fx = zoo::make(name);
    Chart chart = fx.bundle.chart();
    chart.policy().random = random;
    const auto pts = sample_points(chart);

    for (Depth d : {Depth::First, Depth::Second}) {
      const std::string stage = std::string("frames depth ") + std::to_string(static_cast<int>(d));
      const double s = best_ms(repeats, [&] { evaluate_frames(fx.bundle, pts, {}, d, par::Exec::Serial); });
      const double p = best_ms(repeats, [&] { evaluate_frames(fx.bundle, pts, {}, d, par::Exec::Parallel); });
      row(stage.c_str(), name, s, p);
    }

    const auto ev = evaluate(fx.bundle, {}, {}, Depth::Second);
    const double s = best_ms(repeats, [&] { run_identities(ev, Suite::All, par::Exec::Serial); });
    const double p = best_ms(repeats, [&] { run_identities(ev, Suite::All, par::Exec::Parallel); });
    row("identity suite", name, s, p);
  }
  return 0;
}
