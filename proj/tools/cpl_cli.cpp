// cpl: command-line front end.
//   cpl rnt-report --n 3 --m 1 --q 0.5
//   cpl imcf-run --n 3 --shape spheroid --a 1 --c 2 --t-end 1 --csv flow.csv
//   cpl verify --data samples/data/rnt_n4.dat
//   cpl sweep --n 3,4,5 --m 1 --q 0,0.5,0.99 --jobs 4
// Exit codes: 0 ok, 2 input error, 3 flow breakdown, 4 energy condition violated.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cpl/cpl.hpp"

namespace {

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw cpl::FormatError("cannot write '" + path + "'");
  os << text;
}

std::string dump(const cpl::Json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Charged Penrose-type inequalities: exact data, inverse mean curvature flow, certificates"};
  app.require_subcommand(1);

  // rnt-report
  auto* rnt = app.add_subcommand("rnt-report", "closed-form report for Reissner-Nordstrom-Tangherlini data");
  int rnt_n = 3;
  double rnt_m = 1.0, rnt_q = 0.0;
  int rnt_samples = 16;
  std::string rnt_out;
  rnt->add_option("--n", rnt_n, "dimension of the slice (>= 3)")->required();
  rnt->add_option("--m", rnt_m, "mass parameter")->required();
  rnt->add_option("--q", rnt_q, "charge parameter")->required();
  rnt->add_option("--samples", rnt_samples, "number of sample radii");
  rnt->add_option("--out", rnt_out, "JSON output path (default stdout)");

  // imcf-run
  auto* flow = app.add_subcommand("imcf-run", "inverse mean curvature flow of a star-shaped surface");
  cpl::FlowConfig fc;
  std::string shape = "sphere", mode = "axisymmetric", csv_out, summary_out;
  flow->add_option("--n", fc.n, "dimension of the ambient space");
  flow->add_option("--res", fc.resolution, "polar node count (default 128 or CPL_DEFAULT_RES)");
  flow->add_option("--mode", mode, "grid mode: axisymmetric | full (n = 3 only)");
  flow->add_option("--shape", shape, "sphere | spheroid | convex | star | file");
  flow->add_option("--radius", fc.radius, "sphere radius");
  flow->add_option("--a", fc.a, "spheroid equatorial semi-axis");
  flow->add_option("--c", fc.c, "spheroid polar semi-axis");
  flow->add_option("--seed", fc.seed, "seed of the random surface corpus");
  flow->add_option("--index", fc.index, "surface index within the corpus");
  flow->add_option("--surface", fc.surface_file, "surface table (shape = file)");
  flow->add_option("--charge", fc.charge, "charge of the Coulomb field used for the flux chain");
  flow->add_option("--t-end", fc.t_end, "final flow time");
  flow->add_option("--dt", fc.dt, "time step");
  flow->add_option("--sample-every", fc.sample_every, "steps between CSV rows");
  flow->add_option("--min-step", fc.options.min_stable_step, "breakdown threshold for the stable step");
  flow->add_option("--csv", csv_out, "CSV time series path (default stdout)");
  flow->add_option("--summary", summary_out, "JSON summary path (default: not written)");

  // verify
  auto* ver = app.add_subcommand("verify", "certificates for a data definition file");
  cpl::VerifyConfig vc;
  std::string ver_mode = "axisymmetric", ver_out;
  ver->add_option("--data", vc.data_file, "data definition file")->required();
  ver->add_option("--res", vc.resolution, "horizon grid resolution (default 128 or CPL_DEFAULT_RES)");
  ver->add_option("--mode", ver_mode, "horizon grid mode");
  ver->add_option("--out", ver_out, "JSON output path (default stdout)");

  // sweep
  auto* sw = app.add_subcommand("sweep", "closed-form certificates over a parameter grid");
  cpl::SweepConfig sc;
  std::string sw_out;
  sw->add_option("--n", sc.n, "dimensions")->delimiter(',');
  sw->add_option("--m", sc.m, "masses")->delimiter(',');
  sw->add_option("--q", sc.q, "charges")->delimiter(',');
  sw->add_option("--jobs", sc.jobs, "worker threads");
  sw->add_option("--out", sw_out, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cpl::kExitInputError;
  }

  try {
    if (*rnt) {
      cpl::RntReportConfig cfg;
      cfg.params = cpl::RntParams(rnt_n, rnt_m, rnt_q);
      cfg.samples = rnt_samples;
      write_text(rnt_out, dump(cpl::rnt_report(cfg)));
      return cpl::kExitOk;
    }
    if (*flow) {
      fc.shape = cpl::parse_shape(shape);
      fc.mode = cpl::parse_grid_mode(mode);
      const auto out = cpl::imcf_run(fc);
      write_text(csv_out, out.csv);
      if (!summary_out.empty()) write_text(summary_out, dump(out.document));
      if (out.exit_code != cpl::kExitOk) std::cerr << "error: " << out.message << "\n";
      return out.exit_code;
    }
    if (*ver) {
      vc.mode = cpl::parse_grid_mode(ver_mode);
      const auto out = cpl::verify(vc);
      write_text(ver_out, dump(out.document));
      if (out.exit_code != cpl::kExitOk) std::cerr << "error: " << out.message << "\n";
      return out.exit_code;
    }
    if (*sw) {
      write_text(sw_out, cpl::sweep_csv(cpl::sweep_rows(sc)));
      return cpl::kExitOk;
    }
  } catch (const cpl::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cpl::kExitInputError;
  } catch (const cpl::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cpl::kExitInputError;
  } catch (const cpl::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cpl::kExitInputError;
  } catch (const cpl::DecayError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cpl::kExitInputError;
  } catch (const cpl::FlowBreakdownError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cpl::kExitFlowBreakdown;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return cpl::kExitInputError;
}
