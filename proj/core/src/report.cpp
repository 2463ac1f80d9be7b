#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "donsker/harness.hpp"

namespace donsker {

namespace {

std::string g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);  // binary: no newline surprises
  if (!out) {
    throw std::runtime_error("cannot write report file '" + path.string() +
                             "'");
  }
  return out;
}

std::string overlay_filename(const CheckResult& cr) {
  return "cdf_" + std::string(to_string(cr.suite)) + "_" + cr.check + "_n" +
         std::to_string(cr.n) + ".csv";
}

void write_overlays(const ExperimentResult& result,
                    const std::filesystem::path& dir) {
  for (const auto& cr : result.checks) {
    if (cr.overlay.empty()) continue;
    auto out = open_out(dir / overlay_filename(cr));
    out << "x,empirical,oracle\n";
    for (const auto& p : cr.overlay) {
      out << g17(p.x) << ',' << g17(p.empirical) << ',' << g17(p.oracle)
          << '\n';
    }
  }
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["name"] = cfg.name;
  j["distribution"] = to_string(cfg.distribution.kind);
  j["sigma"] = cfg.distribution.sigma;
  j["n_list"] = cfg.n_list;
  j["grid_size"] = cfg.grid_size;
  j["schedule"] = to_string(cfg.schedule.kind);
  if (cfg.schedule.kind == ScheduleKind::fixed_k) j["k"] = cfg.schedule.k;
  if (cfg.schedule.kind == ScheduleKind::power_law) j["r"] = cfg.schedule.r;
  j["selection"] = to_string(cfg.selection);
  j["replications"] = cfg.replications;
  j["seed"] = cfg.seed;
  std::vector<std::string> suites;
  for (auto s : cfg.suites) suites.emplace_back(to_string(s));
  j["suites"] = suites;
  return j;
}

}  // namespace

void emit_report(const ExperimentResult& result, ReportFormat format,
                 const std::string& out_file) {
  const std::filesystem::path path(out_file);

  if (format == ReportFormat::csv) {
    auto out = open_out(path);
    out << "suite,n,k_star,statistic,threshold,verdict\n";
    for (const auto& cr : result.checks) {
      out << to_string(cr.suite) << ',' << cr.n << ',' << cr.k_star << ','
          << g17(cr.report.statistic) << ',' << g17(cr.report.threshold) << ','
          << to_string(cr.report.verdict) << '\n';
    }
  } else {
    nlohmann::json j;
    j["config"] = config_json(result.config);
    j["complete"] = result.complete;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& cr : result.checks) {
      nlohmann::json c;
      c["suite"] = to_string(cr.suite);
      c["check"] = cr.check;
      c["n"] = cr.n;
      c["k_star"] = cr.k_star;
      c["statistic"] = cr.report.statistic;
      c["threshold"] = cr.report.threshold;
      c["n_samples"] = cr.report.n_samples;
      c["verdict"] = to_string(cr.report.verdict);
      c["expected"] = to_string(cr.expected);
      c["context"] = cr.report.context;
      checks.push_back(std::move(c));
    }
    j["checks"] = std::move(checks);
    auto out = open_out(path);
    out << j.dump(2) << '\n';
  }

  write_overlays(result,
                 path.has_parent_path() ? path.parent_path()
                                        : std::filesystem::path("."));
}

void print_summary(const ExperimentResult& result, std::ostream& os) {
  for (const auto& cr : result.checks) {
    const bool ok = cr.as_expected();
    os << (ok ? "[PASS] " : "[FAIL] ") << to_string(cr.suite) << '/'
       << cr.check << " n=" << cr.n << " k*=" << cr.k_star
       << " stat=" << cr.report.statistic << " thr=" << cr.report.threshold
       << " verdict=" << to_string(cr.report.verdict);
    if (cr.expected == Verdict::fail) os << " (rejection expected)";
    os << '\n';
  }
  if (!result.complete) os << "[WARN] result flagged incomplete\n";
}

}  // namespace donsker
