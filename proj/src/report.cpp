#include "metallic/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "json.hpp"

#include "metallic/errors.hpp"

namespace mk {

using json = nlohmann::ordered_json;

double sig6(double v) {
  if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::strtod(buf, nullptr);
}

ShapedArray shaped(const Tensor& t) {
  ShapedArray a;
  a.shape.assign(static_cast<std::size_t>(t.rank()), t.dim());
  for (double v : t.data()) a.data.push_back(sig6(v));
  return a;
}

ShapedArray shaped(const Mat& m) {
  ShapedArray a;
  a.shape = {static_cast<int>(m.rows()), static_cast<int>(m.cols())};
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a.data.push_back(sig6(m(i, j)));
  return a;
}

ClassificationBlock make_classification_block(const ClassificationReport& cls) {
  ClassificationBlock b;
  b.verdict = verdict_name(cls.verdict);
  b.hermitian = cls.hermitian;
  b.almost_kahler = cls.almost_kahler;
  b.metallic_kahler = cls.metallic_kahler;
  b.nearly = cls.nearly;
  b.parallel_consistent = cls.parallel_consistent;
  b.near_boundary = !cls.near_boundary().empty();
  for (const auto& e : cls.residuals)
    b.residuals.push_back({e.name, sig6(e.value), sig6(e.threshold), e.pass, e.near_boundary});
  return b;
}

IdentityRow make_identity_row(const IdentityResult& r) {
  return {r.id,           r.tier,           status_name(r.status), sig6(r.tolerance), sig6(r.max_residual),
          sig6(r.scale), sig6(r.relative), r.note};
}

ConnectionBlock make_connection_block(const ConnectionReport& rep) {
  ConnectionBlock b;
  for (auto row : rep.rows) {
    for (double* v : {&row.nabla_omega, &row.nabla_g, &row.torsion_norm, &row.deformation_norm, &row.symmetry,
                      &row.expansion})
      *v = sig6(*v);
    b.rows.push_back(std::move(row));
  }
  if (rep.deformation_ratio_residual) b.deformation_ratio_residual = sig6(*rep.deformation_ratio_residual);
  for (const auto& c : rep.checks) b.checks.push_back(make_identity_row(c));
  return b;
}

Summary summarize(const Report& r) {
  Summary s;
  auto add = [&s](const IdentityRow& row) {
    if (row.status == "pass") ++s.passed;
    else if (row.status == "fail") ++s.failed;
    else if (row.status == "skipped") ++s.skipped;
    else ++s.reported;
  };
  for (const auto& row : r.identities) add(row);
  if (r.connections)
    for (const auto& row : r.connections->checks) add(row);
  s.checked = s.passed + s.failed;
  return s;
}

namespace {

json to_j(const ShapedArray& a) { return json{{"shape", a.shape}, {"data", a.data}}; }

ShapedArray shaped_from(const json& j) {
  return {j.at("shape").get<std::vector<int>>(), j.at("data").get<std::vector<double>>()};
}

json to_j(const IdentityRow& r) {
  return json{{"id", r.id},
              {"tier", r.tier},
              {"status", r.status},
              {"tolerance", r.tolerance},
              {"max_residual", r.max_residual},
              {"scale", r.scale},
              {"relative", r.relative},
              {"note", r.note}};
}

IdentityRow identity_from(const json& j) {
  return {j.at("id").get<std::string>(),     j.at("tier").get<std::string>(),  j.at("status").get<std::string>(),
          j.at("tolerance").get<double>(),   j.at("max_residual").get<double>(), j.at("scale").get<double>(),
          j.at("relative").get<double>(),    j.at("note").get<std::string>()};
}

json to_j(const ConnectionRow& r) {
  return json{{"name", r.name},
              {"status", r.status},
              {"nabla_omega", r.nabla_omega},
              {"nabla_g", r.nabla_g},
              {"torsion", r.torsion_norm},
              {"deformation", r.deformation_norm},
              {"symmetry", r.symmetry},
              {"expansion", r.expansion},
              {"note", r.note}};
}

ConnectionRow connection_row_from(const json& j) {
  ConnectionRow r;
  r.name = j.at("name").get<std::string>();
  r.status = j.at("status").get<std::string>();
  r.nabla_omega = j.at("nabla_omega").get<double>();
  r.nabla_g = j.at("nabla_g").get<double>();
  r.torsion_norm = j.at("torsion").get<double>();
  r.deformation_norm = j.at("deformation").get<double>();
  r.symmetry = j.at("symmetry").get<double>();
  r.expansion = j.at("expansion").get<double>();
  r.note = j.at("note").get<std::string>();
  return r;
}

template <class T, class F>
json array_of(const std::vector<T>& v, F f) {
  json a = json::array();
  for (const auto& x : v) a.push_back(f(x));
  return a;
}

}  // namespace

std::string to_json(const Report& r) {
  json j;
  j["tool"] = "metallic";
  j["version"] = r.version;
  j["command"] = r.command;
  j["source"] = {{"kind", r.source_kind}, {"name", r.source}};
  j["spec_hash"] = r.spec_hash;
  j["params"] = {{"p", r.p}, {"q", r.q}};
  j["sampling"] = {{"seed", r.seed}, {"points", r.points}};
  j["step"] = r.step;
  j["tolerances"] = {{"alg", r.tolerances.alg}, {"d1", r.tolerances.d1}, {"d2", r.tolerances.d2}, {"d3", r.tolerances.d3}};
  if (r.classification) {
    const auto& c = *r.classification;
    j["classification"] = {{"verdict", c.verdict},
                           {"hermitian", c.hermitian},
                           {"almost_kahler", c.almost_kahler},
                           {"metallic_kahler", c.metallic_kahler},
                           {"nearly", c.nearly},
                           {"parallel_consistent", c.parallel_consistent},
                           {"near_boundary", c.near_boundary},
                           {"residuals", array_of(c.residuals, [](const ResidualRow& e) {
                              return json{{"name", e.name},
                                          {"value", e.value},
                                          {"threshold", e.threshold},
                                          {"pass", e.pass},
                                          {"near_boundary", e.near_boundary}};
                            })}};
  }
  if (r.suite) j["suite"] = *r.suite;
  j["identities"] = array_of(r.identities, [](const IdentityRow& x) { return to_j(x); });
  if (r.connections) {
    const auto& c = *r.connections;
    j["connections"] = {
        {"rows", array_of(c.rows, [](const ConnectionRow& x) { return to_j(x); })},
        {"deformation_ratio_residual",
         c.deformation_ratio_residual ? json(*c.deformation_ratio_residual) : json(nullptr)},
        {"checks", array_of(c.checks, [](const IdentityRow& x) { return to_j(x); })}};
  }
  if (r.curvature) {
    const auto& c = *r.curvature;
    j["curvature"] = {{"point", c.point},           {"riemann", to_j(c.riemann)},
                      {"ricci", to_j(c.ricci)},     {"scalar", c.scalar},
                      {"h", to_j(c.h)},             {"ricci_star", to_j(c.ricci_star)},
                      {"scalar_star", c.scalar_star}, {"nabla_j_sq", c.nabla_j_sq}};
  }
  j["summary"] = {{"checked", r.summary.checked},
                  {"passed", r.summary.passed},
                  {"failed", r.summary.failed},
                  {"skipped", r.summary.skipped},
                  {"reported", r.summary.reported}};
  j["exit_code"] = r.exit_code;
  j["timing"] = {{"total_ms", r.timing_ms}};
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  const json j = json::parse(text);
  Report r;
  r.version = j.at("version").get<std::string>();
  r.command = j.at("command").get<std::string>();
  r.source_kind = j.at("source").at("kind").get<std::string>();
  r.source = j.at("source").at("name").get<std::string>();
  r.spec_hash = j.at("spec_hash").get<std::string>();
  r.p = j.at("params").at("p").get<double>();
  r.q = j.at("params").at("q").get<double>();
  r.seed = j.at("sampling").at("seed").get<std::uint64_t>();
  r.points = j.at("sampling").at("points").get<int>();
  r.step = j.at("step").get<double>();
  const auto& t = j.at("tolerances");
  r.tolerances = {t.at("alg").get<double>(), t.at("d1").get<double>(), t.at("d2").get<double>(),
                  t.at("d3").get<double>()};
  if (j.contains("classification")) {
    const auto& c = j.at("classification");
    ClassificationBlock b;
    b.verdict = c.at("verdict").get<std::string>();
    b.hermitian = c.at("hermitian").get<bool>();
    b.almost_kahler = c.at("almost_kahler").get<bool>();
    b.metallic_kahler = c.at("metallic_kahler").get<bool>();
    b.nearly = c.at("nearly").get<bool>();
    b.parallel_consistent = c.at("parallel_consistent").get<bool>();
    b.near_boundary = c.at("near_boundary").get<bool>();
    for (const auto& e : c.at("residuals"))
      b.residuals.push_back({e.at("name").get<std::string>(), e.at("value").get<double>(),
                             e.at("threshold").get<double>(), e.at("pass").get<bool>(),
                             e.at("near_boundary").get<bool>()});
    r.classification = std::move(b);
  }
  if (j.contains("suite")) r.suite = j.at("suite").get<std::string>();
  for (const auto& x : j.at("identities")) r.identities.push_back(identity_from(x));
  if (j.contains("connections")) {
    const auto& c = j.at("connections");
    ConnectionBlock b;
    for (const auto& x : c.at("rows")) b.rows.push_back(connection_row_from(x));
    if (!c.at("deformation_ratio_residual").is_null())
      b.deformation_ratio_residual = c.at("deformation_ratio_residual").get<double>();
    for (const auto& x : c.at("checks")) b.checks.push_back(identity_from(x));
    r.connections = std::move(b);
  }
  if (j.contains("curvature")) {
    const auto& c = j.at("curvature");
    CurvatureBlock b;
    b.point = c.at("point").get<std::vector<double>>();
    b.riemann = shaped_from(c.at("riemann"));
    b.ricci = shaped_from(c.at("ricci"));
    b.scalar = c.at("scalar").get<double>();
    b.h = shaped_from(c.at("h"));
    b.ricci_star = shaped_from(c.at("ricci_star"));
    b.scalar_star = c.at("scalar_star").get<double>();
    b.nabla_j_sq = c.at("nabla_j_sq").get<double>();
    r.curvature = std::move(b);
  }
  const auto& s = j.at("summary");
  r.summary = {s.at("checked").get<int>(), s.at("passed").get<int>(), s.at("failed").get<int>(),
               s.at("skipped").get<int>(), s.at("reported").get<int>()};
  r.exit_code = j.at("exit_code").get<int>();
  r.timing_ms = j.at("timing").at("total_ms").get<double>();
  return r;
}

namespace {

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string pad(std::string s, std::size_t w) {
  // Column widths count code points so that ∇ and friends line up.
  std::size_t cps = 0;
  for (unsigned char ch : s) cps += (ch & 0xC0) != 0x80;
  if (cps < w) s.append(w - cps, ' ');
  return s;
}

void print_matrix(std::ostringstream& os, const char* label, const ShapedArray& a) {
  os << label << ":\n";
  if (a.shape.size() != 2) return;
  const int n = a.shape[0], m = a.shape[1];
  for (int i = 0; i < n; ++i) {
    os << "  ";
    for (int k = 0; k < m; ++k) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%13.6g", a.data[static_cast<std::size_t>(i * m + k)]);
      os << buf;
    }
    os << "\n";
  }
}

void identity_table(std::ostringstream& os, const std::vector<IdentityRow>& rows) {
  os << "  " << pad("id", 34) << pad("status", 10) << pad("relative", 14) << pad("tolerance", 12) << "note\n";
  for (const auto& r : rows)
    os << "  " << pad(r.id, 34) << pad(r.status, 10) << pad(g6(r.relative), 14) << pad(g6(r.tolerance), 12)
       << r.note << "\n";
}

}  // namespace

std::string to_text(const Report& r) {
  std::ostringstream os;
  os << "metallic " << r.version << "  " << r.command << "  " << r.source_kind << ":" << r.source << "\n";
  os << "spec hash " << r.spec_hash << "  p = " << g6(r.p) << "  q = " << g6(r.q) << "  seed " << r.seed
     << "  points " << r.points << "  h = " << g6(r.step) << "\n";
  if (r.classification) {
    const auto& c = *r.classification;
    os << "\nverdict: " << c.verdict << (c.near_boundary ? "  (near a threshold)" : "") << "\n";
    os << "  " << pad("residual", 24) << pad("value", 14) << pad("threshold", 12) << "pass\n";
    for (const auto& e : c.residuals)
      os << "  " << pad(e.name, 24) << pad(g6(e.value), 14) << pad(g6(e.threshold), 12) << (e.pass ? "yes" : "no")
         << (e.near_boundary ? "  near boundary" : "") << "\n";
  }
  if (!r.identities.empty()) {
    os << "\nidentities" << (r.suite ? " (suite " + *r.suite + ")" : std::string{}) << ":\n";
    identity_table(os, r.identities);
  }
  if (r.connections) {
    const auto& c = *r.connections;
    os << "\nconnections:\n";
    os << "  " << pad("name", 20) << pad("status", 13) << pad("nabla_omega", 12) << pad("nabla_g", 12) << pad("torsion", 12)
       << pad("deformation", 12) << pad("symmetry", 12) << "\n";
    for (const auto& row : c.rows)
      os << "  " << pad(row.name, 20) << pad(row.status, 13) << pad(g6(row.nabla_omega), 12) << pad(g6(row.nabla_g), 12)
         << pad(g6(row.torsion_norm), 12) << pad(g6(row.deformation_norm), 12) << pad(g6(row.symmetry), 12) << "\n";
    if (c.deformation_ratio_residual) os << "  deformation ratio residual " << g6(*c.deformation_ratio_residual) << "\n";
    identity_table(os, c.checks);
  }
  if (r.curvature) {
    const auto& c = *r.curvature;
    os << "\ncurvature at (";
    for (std::size_t i = 0; i < c.point.size(); ++i) os << (i ? ", " : "") << g6(c.point[i]);
    os << ")\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", c.scalar);
    os << "scalar: " << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.6f", c.scalar_star);
    os << "scalar*: " << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.6f", c.nabla_j_sq);
    os << "|∇J_M|^2: " << buf << "\n";
    print_matrix(os, "Ricci", c.ricci);
    print_matrix(os, "H", c.h);
    print_matrix(os, "Ricci*", c.ricci_star);
    os << "Riemann R(k,j,i,l), nonzero components:\n";
    const int n = c.riemann.shape.empty() ? 0 : c.riemann.shape[0];
    std::size_t idx = 0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          for (int l = 0; l < n; ++l, ++idx)
            if (std::abs(c.riemann.data[idx]) > 1e-9)
              os << "  " << k << j << i << l << "  " << g6(c.riemann.data[idx]) << "\n";
  }
  if (r.suite) os << "\nsummary: " << r.summary.passed << " passed, " << r.summary.failed << " failed, " << r.summary.skipped
     << " skipped, " << r.summary.reported << " reported\n";
  return os.str();
}

}  // namespace mk
