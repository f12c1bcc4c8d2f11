// rankrange: rank-k numerical ranges of unitary matrices from the command line.
//
//   rankrange spectrum INPUT
//   rankrange region   INPUT --k K [--out F] [--svg F]
//   rankrange member   INPUT --k K --lambda RE,IM [--oracle]
//   rankrange project  INPUT --k K [--lambda RE,IM] [--out F] [--svg F]
//   rankrange verify   PROJECTOR --matrix INPUT
//   rankrange demo     [--seed N] [--out F] [--oracle] [--timing]
//
// INPUT is a matrix {"n","re","im"} or spectrum {"phases"} JSON file.
// Exit status: 0 ok, 1 usage/parse, 2 mathematical rejection, 3 internal.

#include <rankrange/demo.hpp>
#include <rankrange/io.hpp>
#include <rankrange/rankrange.hpp>
#include <rankrange/svg.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace rr = rankrange;

namespace {

struct RunConfig {
  std::string input;
  std::string matrix_path;
  int k = 0;
  std::string lambda_text;
  double tol = 0.0;
  std::uint64_t seed = 42;
  int repetitions = 4;
  std::string out;
  std::string svg;
  bool oracle = false;
  bool timing = false;
};

double default_tol() {
  if (const char* env = std::getenv("RANKRANGE_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0))
      throw rr::Error(rr::ErrorCode::ParseError, "RANKRANGE_TOL must be a positive number");
    return v;
  }
  return rr::kDefaultMembershipTol;
}

rr::Complex parse_lambda(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw rr::Error(rr::ErrorCode::ParseError, "--lambda expects RE,IM");
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v))
      throw rr::Error(rr::ErrorCode::ParseError, "bad number in --lambda: '" + s + "'");
    return v;
  };
  return {number(text.substr(0, comma)), number(text.substr(comma + 1))};
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else rr::io::write_text_file(path, text);
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

void print_residuals(const rr::ResidualReport& r) {
  std::printf("hermitian   %.3e\nidempotent  %.3e\ntrace       %.3e\ncompression %.3e\n%s\n",
              r.hermitian, r.idempotent, r.trace, r.compression, r.pass ? "pass" : "FAIL");
}

int cmd_spectrum(const RunConfig& c) {
  const auto es = rr::io::eigensystem_from_json(rr::io::read_json_file(c.input), c.tol);
  if (!c.out.empty()) rr::io::write_text_file(c.out, rr::io::dump(rr::io::spectrum_to_json(es)));
  for (double t : es.phases()) std::cout << fmt(t) << '\n';
  return 0;
}

int cmd_region(const RunConfig& c) {
  const auto es = rr::io::eigensystem_from_json(rr::io::read_json_file(c.input), c.tol);
  const auto region = rr::build_region(es, c.k);
  emit(c.out, rr::io::dump(rr::io::region_to_json(region)));
  if (!c.svg.empty()) rr::io::write_text_file(c.svg, rr::render_svg(es, region));
  return 0;
}

int cmd_member(const RunConfig& c) {
  const auto es = rr::io::eigensystem_from_json(rr::io::read_json_file(c.input), c.tol);
  const auto z = parse_lambda(c.lambda_text);
  const auto verdict = rr::contains(rr::build_region(es, c.k), z, c.tol);
  std::cout << rr::to_string(verdict) << '\n';
  if (c.oracle) {
    const auto o = rr::brute_force_contains(es, c.k, z, c.tol);
    std::cout << "oracle: " << rr::to_string(o) << '\n';
    const bool clash = (verdict == rr::Verdict::Inside && o == rr::Verdict::Outside) ||
                       (verdict == rr::Verdict::Outside && o == rr::Verdict::Inside);
    if (clash) {
      std::cerr << "error: chord test and brute-force oracle disagree\n";
      return 3;
    }
  }
  return 0;
}

int cmd_project(const RunConfig& c) {
  const auto es = rr::io::eigensystem_from_json(rr::io::read_json_file(c.input), c.tol);
  std::optional<rr::Complex> z;
  if (!c.lambda_text.empty()) {
    z = parse_lambda(c.lambda_text);
  } else {
    if (!rr::supported_dimension(es.dim(), c.k))
      throw rr::Error(rr::ErrorCode::UnsupportedDimension,
                      "(N, k) = (" + std::to_string(es.dim()) + ", " + std::to_string(c.k) +
                          ") is not supported");
    z = rr::interior_point(rr::build_region(es, c.k));
    if (!z) throw rr::Error(rr::ErrorCode::EmptyRegion, "region has no interior point");
    std::cerr << "lambda = " << fmt(z->real()) << "," << fmt(z->imag()) << " (interior point)\n";
  }
  const auto p = rr::construct_projector(es, c.k, *z, c.tol);
  std::cout << "case        " << rr::to_string(p.plan.dimension_case) << "\n"
            << "method      " << rr::to_string(p.method) << "\n";
  print_residuals(p.residuals);
  if (!c.out.empty()) rr::io::write_text_file(c.out, rr::io::dump(rr::io::projector_to_json(p)));
  if (!c.svg.empty())
    rr::io::write_text_file(c.svg, rr::render_svg(es, rr::build_region(es, c.k), *z));
  return p.residuals.pass ? 0 : 3;
}

int cmd_verify(const RunConfig& c) {
  const auto pf = rr::io::projector_from_json(rr::io::read_json_file(c.input));
  const auto es = rr::io::eigensystem_from_json(rr::io::read_json_file(c.matrix_path));
  const rr::Matrix& sigma = es.matrix();
  const auto r = rr::verify_projector(pf.matrix, sigma, pf.target, pf.k, c.tol);
  print_residuals(r);
  return r.pass ? 0 : 2;
}

int cmd_demo(const RunConfig& c) {
  rr::DemoOptions opt;
  opt.seed = c.seed;
  opt.repetitions = c.repetitions;
  opt.timing = c.timing;
  opt.oracle = c.oracle;
  std::ostringstream stream;
  const auto summary = rr::run_demo(
      opt, [&](const rr::DemoRecord& r) { stream << rr::demo_record_to_json(r).dump() << '\n'; });
  emit(c.out, stream.str());
  std::cerr << "demo seed " << c.seed << ": " << summary.passed << " passed, " << summary.failed
            << " failed, " << summary.skipped << " skipped of " << summary.total << '\n';
  return summary.failed == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-k numerical ranges of unitary matrices"};
  app.require_subcommand(1);
  RunConfig cfg;
  double tol_flag = 0.0;

  auto add_tol = [&](CLI::App* sub) {
    sub->add_option("--tol", tol_flag, "Tolerance (default 1e-9 or $RANKRANGE_TOL)")
        ->check(CLI::PositiveNumber);
  };
  auto add_input = [&](CLI::App* sub, const char* what) {
    sub->add_option("input", cfg.input, what)->required();
  };

  auto* spectrum = app.add_subcommand("spectrum", "Print sorted eigenphases");
  add_input(spectrum, "Matrix or spectrum JSON");
  spectrum->add_option("--out", cfg.out, "Also write spectrum JSON here");
  add_tol(spectrum);

  auto* region = app.add_subcommand("region", "Write the chord constraints of Omega_k");
  add_input(region, "Matrix or spectrum JSON");
  region->add_option("--k", cfg.k, "Rank")->required();
  region->add_option("--out", cfg.out, "Region JSON (default stdout)");
  region->add_option("--svg", cfg.svg, "SVG picture of the region");
  add_tol(region);

  auto* member = app.add_subcommand("member", "Classify lambda against Omega_k");
  add_input(member, "Matrix or spectrum JSON");
  member->add_option("--k", cfg.k, "Rank")->required();
  member->add_option("--lambda", cfg.lambda_text, "Target RE,IM")->required();
  member->add_flag("--oracle", cfg.oracle, "Cross-check with the brute-force oracle");
  add_tol(member);

  auto* project = app.add_subcommand("project", "Construct P with P sigma P = lambda P");
  add_input(project, "Matrix or spectrum JSON");
  project->add_option("--k", cfg.k, "Rank")->required();
  project->add_option("--lambda", cfg.lambda_text, "Target RE,IM (default: an interior point)");
  project->add_option("--out", cfg.out, "Projector JSON");
  project->add_option("--svg", cfg.svg, "SVG picture of the region and target");
  add_tol(project);

  auto* verify = app.add_subcommand("verify", "Re-check a projector JSON against a matrix");
  add_input(verify, "Projector JSON");
  verify->add_option("--matrix", cfg.matrix_path, "Matrix or spectrum JSON")->required();
  add_tol(verify);

  auto* demo = app.add_subcommand("demo", "Run the seeded battery; JSON lines per instance");
  demo->add_option("--seed", cfg.seed, "Seed for std::mt19937_64");
  demo->add_option("--reps", cfg.repetitions, "Spectra per size")->check(CLI::PositiveNumber);
  demo->add_option("--out", cfg.out, "Record stream (default stdout)");
  demo->add_flag("--oracle", cfg.oracle, "Cross-check targets with the brute-force oracle");
  demo->add_flag("--timing", cfg.timing, "Add wall_ms to records");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    cfg.tol = tol_flag > 0.0 ? tol_flag : default_tol();
    if (*spectrum) return cmd_spectrum(cfg);
    if (*region) return cmd_region(cfg);
    if (*member) return cmd_member(cfg);
    if (*project) return cmd_project(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*demo) return cmd_demo(cfg);
  } catch (const rr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return rr::exit_status(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
