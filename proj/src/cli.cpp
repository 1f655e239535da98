#include "metallic/cli.hpp"

#include <chrono>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "metallic/errors.hpp"
#include "metallic/report.hpp"
#include "metallic/specfile.hpp"
#include "metallic/zoo.hpp"

namespace mk::cli {

namespace {

struct Options {
  std::string spec_path;
  std::string zoo;
  std::string format = "text";
  std::optional<std::uint64_t> seed;
  std::optional<double> h;
  std::optional<double> tol_alg, tol_d1, tol_d2, tol_d3;
  std::optional<double> p, q;
  std::string suite = "all";
  std::string point;
};

/// Everything a command needs once the input has been resolved.
struct Loaded {
  std::unique_ptr<StructureBundle> bundle;
  std::string kind;
  std::string name;
  std::string hash;
  Thresholds tol;
  SchemeSet schemes;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError(path, 0, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Loaded load(const Options& o) {
  if (o.spec_path.empty() == o.zoo.empty()) throw UsageError("give exactly one of a spec file or --zoo <name>");
  Loaded l;
  std::optional<double> step;
  Thresholds base;
  if (!o.zoo.empty()) {
    MetallicParams prm;
    if (o.p) prm.p = *o.p;
    if (o.q) prm.q = *o.q;
    try {
      validate(prm);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    auto fx = zoo::make(o.zoo, prm);
    l.kind = "zoo";
    l.name = o.zoo;
    l.hash = fnv1a_hex(fx.mirrored_spec ? *fx.mirrored_spec
                                        : "zoo:" + o.zoo + ":" + std::to_string(prm.p) + ":" + std::to_string(prm.q));
    l.bundle = std::make_unique<StructureBundle>(std::move(fx.bundle));
  } else {
    if (o.p || o.q) throw UsageError("--p and --q apply only to --zoo; a spec file carries its own parameters");
    const std::string text = read_file(o.spec_path);
    const ManifoldSpec spec = parse_spec(text, o.spec_path);
    l.kind = "file";
    l.name = o.spec_path;
    l.hash = fnv1a_hex(text);
    l.bundle = std::make_unique<StructureBundle>(build_bundle(spec));
    base = spec.thresholds();
    step = spec.step;
  }
  if (o.seed) l.bundle->chart().policy().seed = *o.seed;
  if (o.h) step = *o.h;
  if (step && !(*step > 0.0)) throw UsageError("--h must be positive");
  l.schemes = step ? SchemeSet::with_base_step(*step) : SchemeSet{};
  if (o.tol_alg) base.alg = *o.tol_alg;
  if (o.tol_d1) base.d1 = *o.tol_d1;
  if (o.tol_d2) base.d2 = *o.tol_d2;
  if (o.tol_d3) base.d3 = *o.tol_d3;
  l.tol = base;
  return l;
}

Report header(const std::string& command, const Loaded& l) {
  Report r;
  r.command = command;
  r.source_kind = l.kind;
  r.source = l.name;
  r.spec_hash = l.hash;
  r.p = l.bundle->params().p;
  r.q = l.bundle->params().q;
  r.seed = l.bundle->chart().policy().seed;
  r.step = l.schemes.first.h;
  r.tolerances = l.tol;
  return r;
}

Point parse_point(const std::string& csv, int dim) {
  Point x;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("--point: '" + item + "' is not a number");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos)
      throw UsageError("--point: '" + item + "' is not a number");
    x.push_back(v);
  }
  if (static_cast<int>(x.size()) != dim)
    throw UsageError("--point needs " + std::to_string(dim) + " coordinates, got " + std::to_string(x.size()));
  return x;
}

Report cmd_classify(const Options& o) {
  const Loaded l = load(o);
  Report r = header("classify", l);
  const auto frames = evaluate_frames(*l.bundle, sample_points(l.bundle->chart()), l.schemes, Depth::First,
                                      par::Exec::Parallel);
  r.points = static_cast<int>(frames.size());
  r.classification = make_classification_block(classify(frames, l.bundle->params(), l.tol));
  return r;
}

Report cmd_verify(const Options& o) {
  const auto suite = suite_from_name(o.suite);
  if (!suite) throw UsageError("unknown suite '" + o.suite + "'");
  const Loaded l = load(o);
  Report r = header("verify", l);
  r.suite = o.suite;
  const Depth depth = *suite == Suite::Connections ? Depth::First
                      : *suite == Suite::Nearly    ? Depth::Second
                                                   : Depth::Third;
  const Evaluation ev = evaluate(*l.bundle, l.schemes, l.tol, depth);
  r.points = static_cast<int>(ev.frames.size());
  r.classification = make_classification_block(ev.cls);
  for (const auto& res : run_identities(ev, *suite)) r.identities.push_back(make_identity_row(res));
  if (*suite == Suite::All || *suite == Suite::Connections)
    r.connections = make_connection_block(connection_report(ev));
  return r;
}

Report cmd_curvature(const Options& o) {
  const Loaded l = load(o);
  Report r = header("curvature", l);
  const Point x = parse_point(o.point, l.bundle->dim());
  const Chart& chart = l.bundle->chart();
  if (!chart.contains(x, chart.policy().margin))
    throw BoundaryError("point lies outside the chart interior (margin " + std::to_string(chart.policy().margin) + ")");
  const PointFrame fr = evaluate_frame(*l.bundle, x, l.schemes, Depth::Second);
  const auto star = star_curvature(fr);
  CurvatureBlock c;
  c.point = x;
  c.riemann = shaped(fr.curv.lowered);
  c.ricci = shaped(fr.curv.ricci);
  c.scalar = sig6(fr.curv.scalar);
  c.h = shaped(star.h);
  c.ricci_star = shaped(star.s_star);
  c.scalar_star = sig6(star.scalar_star);
  c.nabla_j_sq = sig6(star.nabla_j_sq);
  r.points = 1;
  r.curvature = std::move(c);
  return r;
}

void add_common(CLI::App* cmd, Options& o, bool needs_point) {
  cmd->add_option("spec", o.spec_path, "manifold spec file");
  cmd->add_option("--zoo", o.zoo, "built-in fixture")->check(CLI::IsMember(zoo::names()));
  cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--seed", o.seed, "sampling seed");
  cmd->add_option("--h", o.h, "base finite-difference step");
  cmd->add_option("--tol-alg", o.tol_alg, "algebraic tolerance");
  cmd->add_option("--tol-d1", o.tol_d1, "first-derivative tolerance");
  cmd->add_option("--tol-d2", o.tol_d2, "second-derivative tolerance");
  cmd->add_option("--tol-d3", o.tol_d3, "third-derivative tolerance");
  cmd->add_option("--p", o.p, "metallic parameter p (zoo only)");
  cmd->add_option("--q", o.q, "metallic parameter q (zoo only)");
  if (needs_point) cmd->add_option("--point", o.point, "comma-separated coordinates")->required();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks for metallic Kähler and nearly metallic Kähler structures", "metallic"};
  app.set_help_flag("--help", "print help");  // frees -h; --h is the step option
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Options o;
  auto* classify_cmd = app.add_subcommand("classify", "classify a structure");
  auto* verify_cmd = app.add_subcommand("verify", "run identity suites");
  auto* curvature_cmd = app.add_subcommand("curvature", "curvature and star curvature at a point");
  add_common(classify_cmd, o, false);
  add_common(verify_cmd, o, false);
  verify_cmd->add_option("--suite", o.suite, "all | metallic | nearly | connections")
      ->check(CLI::IsMember({"all", "metallic", "nearly", "connections"}));
  add_common(curvature_cmd, o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  try {
    if (*classify_cmd) r = cmd_classify(o);
    else if (*verify_cmd) r = cmd_verify(o);
    else r = cmd_curvature(o);
  } catch (const SpecError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const DomainError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalError;
  }
  r.summary = summarize(r);
  r.exit_code = r.summary.failed > 0 ? kIdentityFailure : kOk;
  r.timing_ms = sig6(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  out << (o.format == "json" ? to_json(r) : to_text(r));
  return r.exit_code;
}

}  // namespace mk::cli
