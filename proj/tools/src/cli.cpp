#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nodal/bubbles.hpp"
#include "nodal/errors.hpp"
#include "nodal/report_io.hpp"
#include "nodal/verify.hpp"

namespace nodal::cli {

double default_tolerance() {
  const char* env = std::getenv("NODAL_TOL");
  if (env == nullptr || *env == '\0') return radial::kDefaultTol;
  const auto vals = io::parse_real_list(env);
  if (vals.size() != 1 || !(vals[0] > 0.0)) {
    throw DomainError(fmt::format("NODAL_TOL must be a positive number, got '{}'", env));
  }
  return vals[0];
}

namespace {

enum class Format { csv, json };

struct Common {
  std::string format = "csv";
  std::string output;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--output,-o", c.output, "Write to this file instead of stdout");
}

Format format_of(const Common& c) { return c.format == "json" ? Format::json : Format::csv; }

void emit_json(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << '\n'; }

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sharp constants and finite-p verification for planar Lane-Emden/Henon problems",
               "nodal"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "nodal 0.1.0");

  // constants
  int c_m = 25;
  double c_alpha = 0.0;
  Common c_common;
  auto* constants_cmd = app.add_subcommand("constants", "Limit constants for m nodal regions");
  constants_cmd->add_option("--m", c_m, "Number of nodal regions")->required();
  constants_cmd->add_option("--alpha", c_alpha, "Weight exponent");
  add_common(constants_cmd, c_common);

  // bounds
  int b_kmax = 100;
  int b_mmax = 100;
  Common b_common;
  auto* bounds_cmd = app.add_subcommand("bounds", "Theta, sup-norm and Morse bound checks");
  bounds_cmd->add_option("--kmax", b_kmax, "Largest theta index")->required();
  bounds_cmd->add_option("--mmax", b_mmax, "Largest m")->required();
  add_common(bounds_cmd, b_common);

  // solve
  double s_p = 0.0;
  double s_alpha = 0.0;
  int s_m = 1;
  std::string s_bc = "dirichlet";
  int s_samples = 0;
  Common s_common;
  auto* solve_cmd = app.add_subcommand("solve", "Solve the radial problem at finite p");
  solve_cmd->add_option("--p", s_p, "Exponent p > 1")->required();
  solve_cmd->add_option("--alpha", s_alpha, "Weight exponent");
  solve_cmd->add_option("--m", s_m, "Number of nodal regions")->required();
  solve_cmd->add_option("--bc", s_bc, "Boundary condition")
      ->check(CLI::IsMember({"dirichlet", "neumann", "plane"}));
  solve_cmd->add_option("--samples", s_samples, "Number of profile samples");
  add_common(solve_cmd, s_common);

  // verify
  int v_m = 1;
  double v_alpha = 0.0;
  std::string v_bc = "dirichlet";
  std::string v_p;
  bool v_profiles = false;
  Common v_common;
  auto* verify_cmd = app.add_subcommand("verify", "Convergence reports against the limits");
  verify_cmd->add_option("--m", v_m, "Number of nodal regions")->required();
  verify_cmd->add_option("--alpha", v_alpha, "Weight exponent");
  verify_cmd->add_option("--bc", v_bc, "Boundary condition")
      ->check(CLI::IsMember({"dirichlet", "neumann", "plane"}));
  verify_cmd->add_option("--p", v_p, "Comma-separated increasing exponents")->required();
  verify_cmd->add_flag("--profiles", v_profiles,
                       "Add Green-profile and bubble sup-error reports (Dirichlet)");
  add_common(verify_cmd, v_common);

  // bubble
  int u_i = 0;
  double u_alpha = 0.0;
  double u_rmin = 0.0;
  double u_rmax = 20.0;
  int u_n = 101;
  Common u_common;
  auto* bubble_cmd = app.add_subcommand("bubble", "Sample a limit bubble and check its mass");
  bubble_cmd->add_option("--i", u_i, "Bubble index")->required();
  bubble_cmd->add_option("--alpha", u_alpha, "Weight exponent");
  bubble_cmd->add_option("--rmin", u_rmin, "Smallest radius");
  bubble_cmd->add_option("--rmax", u_rmax, "Largest radius");
  bubble_cmd->add_option("--n", u_n, "Number of samples");
  add_common(bubble_cmd, u_common);

  // sweep
  std::string w_config;
  Common w_common;
  auto* sweep_cmd = app.add_subcommand("sweep", "Batch verification over a parameter grid");
  sweep_cmd->add_option("--config", w_config, "Sweep configuration file")->required();
  add_common(sweep_cmd, w_common);

  std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  // Each branch writes into `buffer`; it is flushed only on success.
  std::ostringstream buffer;
  const Common* common = nullptr;
  std::function<void()> action;

  if (*constants_cmd) {
    common = &c_common;
    action = [&] {
      require(c_m >= 1, "--m must be >= 1");
      require(c_alpha >= 0.0, "--alpha must be >= 0");
      if (format_of(c_common) == Format::json) {
        emit_json(buffer, io::constants_json(c_m, c_alpha));
      } else {
        io::write_constants_csv(buffer, c_m, c_alpha);
      }
    };
  } else if (*bounds_cmd) {
    common = &b_common;
    action = [&] {
      require(b_kmax >= 1 && b_mmax >= 1, "--kmax and --mmax must be >= 1");
      require(b_kmax <= 10'000'000 && b_mmax <= 10'000'000, "--kmax/--mmax too large");
      if (format_of(b_common) == Format::json) {
        emit_json(buffer, io::bounds_json(b_kmax, b_mmax));
      } else {
        io::write_bounds_csv(buffer, b_kmax, b_mmax);
      }
    };
  } else if (*solve_cmd) {
    common = &s_common;
    action = [&] {
      require(s_p > 1.0, "--p must be > 1");
      require(s_alpha >= 0.0, "--alpha must be >= 0");
      require(s_m >= 1, "--m must be >= 1");
      require(s_samples >= 0 && s_samples != 1, "--samples must be 0 or >= 2");
      const auto bc = verify::parse_problem(s_bc);
      require(bc != verify::Problem::neumann || s_m >= 2, "Neumann solutions need --m >= 2");
      const auto res = io::solve(s_p, s_alpha, s_m, bc, default_tolerance());
      if (format_of(s_common) == Format::json) {
        emit_json(buffer, io::solution_json(res, s_samples));
      } else {
        io::write_solution_csv(buffer, res, s_samples);
      }
    };
  } else if (*verify_cmd) {
    common = &v_common;
    action = [&] {
      require(v_m >= 1, "--m must be >= 1");
      require(v_alpha >= 0.0, "--alpha must be >= 0");
      const auto bc = verify::parse_problem(v_bc);
      require(bc != verify::Problem::neumann || v_m >= 2, "Neumann solutions need --m >= 2");
      require(!v_profiles || bc == verify::Problem::dirichlet,
              "--profiles applies to Dirichlet only");
      const auto ps = io::parse_real_list(v_p);
      verify::VerifyOptions opt;
      opt.tol = default_tolerance();
      auto reps = verify::convergence_report(v_m, v_alpha, bc, ps, opt);
      if (v_profiles) {
        auto extra = verify::profile_reports(v_m, v_alpha, ps, opt);
        reps.insert(reps.end(), extra.begin(), extra.end());
      }
      if (format_of(v_common) == Format::json) {
        emit_json(buffer, io::convergence_json(reps, opt.tol));
      } else {
        io::write_convergence_csv(buffer, reps);
      }
    };
  } else if (*bubble_cmd) {
    common = &u_common;
    action = [&] {
      require(u_i >= 0, "--i must be >= 0");
      require(u_alpha >= 0.0, "--alpha must be >= 0");
      require(u_rmin >= 0.0 && u_rmax > u_rmin, "need 0 <= --rmin < --rmax");
      require(u_n >= 2, "--n must be >= 2");
      const auto spec = bubbles::make_bubble(u_i, u_alpha);
      const auto samples = bubbles::sample_profile(spec, u_rmin, u_rmax, u_n);
      const auto checks = io::bubble_checks(spec);
      if (format_of(u_common) == Format::json) {
        emit_json(buffer, io::bubble_json(checks, samples));
      } else {
        io::write_bubble_csv(buffer, samples);
        io::write_bubble_summary(err, checks);
      }
    };
  } else if (*sweep_cmd) {
    common = &w_common;
    action = [&] {
      std::ifstream in(w_config);
      require(static_cast<bool>(in), fmt::format("cannot read sweep config '{}'", w_config));
      const auto cfg = io::parse_sweep_config(in, default_tolerance());
      const auto reps = verify::run_sweep(cfg);
      if (format_of(w_common) == Format::json) {
        emit_json(buffer, io::convergence_json(reps, cfg.tol));
      } else {
        io::write_convergence_csv(buffer, reps);
      }
    };
  }

  try {
    action();
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const QuadratureError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }

  if (common->output.empty()) {
    out << buffer.str();
    out.flush();
    return kOk;
  }
  std::ofstream file(common->output, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot write output file '" << common->output << "'\n";
    return kValidation;
  }
  file << buffer.str();
  file.close();
  if (!file) {
    err << "error: failed writing output file '" << common->output << "'\n";
    return kValidation;
  }
  return kOk;
}

}  // namespace nodal::cli
