#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cpl/commands.hpp"

using namespace cpl;
namespace fs = std::filesystem;

namespace {

const fs::path kData = CPL_SAMPLE_DATA;

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "cpl_tests";
  fs::create_directories(dir);
  return dir / name;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CPL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

// --- data definitions ------------------------------------------------------------

TEST(DataDefinition, ParsesAllKeys) {
  std::istringstream in(
      "# comment\n n = 4 \nprofile = rnt-perturbed  # trailing\nm = 2\nq = 1\nperturb_amplitude = 0.1\n"
      "perturb_width = 3\nfield = rnt\nfield_scale = 0.9\nhorizon = spheroid\nhorizon_aspect = 1.2\n");
  const auto d = parse_data_definition(in);
  EXPECT_EQ(d.n, 4);
  EXPECT_EQ(d.profile, ProfileKind::rnt_perturbed);
  EXPECT_EQ(d.m, 2.0);
  EXPECT_EQ(d.perturb_width, 3.0);
  EXPECT_TRUE(d.spheroidal_horizon);
  EXPECT_DOUBLE_EQ(data_charge(d), 0.9);
}

TEST(DataDefinition, RejectsMalformedInput) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return parse_data_definition(in);
  };
  EXPECT_THROW(parse("profile = rnt\nm = 1\n"), FormatError);                    // missing n
  EXPECT_THROW(parse("n = 3\nprofile = rnt\nm = 1\ncolour = red\n"), FormatError);  // unknown key
  EXPECT_THROW(parse("n = 3\nn = 4\nprofile = rnt\nm = 1\n"), FormatError);      // duplicate
  EXPECT_THROW(parse("n = 3\nprofile = rnt\nm = abc\n"), FormatError);
  EXPECT_THROW(parse("n = 3.5\nprofile = rnt\nm = 1\n"), FormatError);
  EXPECT_THROW(parse("n = 3\nprofile = spline\nm = 1\n"), FormatError);
  EXPECT_THROW(parse("n = 3\nprofile = rnt\nm = 1\nfield = magnetic\n"), FormatError);
  EXPECT_THROW(parse("n = 3\nprofile rnt\n"), FormatError);
  EXPECT_THROW(parse("n = 3\nprofile = table\n"), FormatError);  // table needs a path and r_start
}

TEST(DataDefinition, SampleFilesLoad) {
  for (const char* f : {"rnt_n4.dat", "rnt_n4_field09.dat", "rnt_n4_field11.dat", "rnt_perturbed_n3.dat",
                        "spheroid_horizon_n3.dat", "table_n3.dat"}) {
    const auto d = read_data_definition(kData / f);
    EXPECT_NO_THROW(build_graph(d)) << f;
  }
  EXPECT_THROW(read_data_definition(kData / "missing.dat"), FormatError);
}

// --- surface tables ----------------------------------------------------------------

TEST(SurfaceTable, RoundTripIsExact) {
  for (auto g : {SphereGrid::axisymmetric(4, 12), SphereGrid::full(6, 12)}) {
    const auto s = random_convex_surface(g, 1, 2);
    const auto field = sample_field(s, radial_field(g.dimension(), 0.3));
    std::stringstream io;
    write_surface(io, s, &field);
    const auto back = read_surface(io);
    ASSERT_TRUE(back.field.has_value());
    EXPECT_TRUE(back.surface.grid().same_layout(g));
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_EQ(back.surface.rho()[i], s.rho()[i]);
      EXPECT_EQ((*back.field)[i][1], field[i][1]);
    }
  }
}

TEST(SurfaceTable, RejectsBadTables) {
  const auto g = SphereGrid::axisymmetric(3, 6);
  std::stringstream ok;
  write_surface(ok, make_sphere(g, 1.0));
  const std::string text = ok.str();

  std::string neg = text;
  neg.replace(neg.rfind(' ') + 1, std::string::npos, "-1\n");
  std::istringstream a(neg);
  EXPECT_THROW(read_surface(a), ParameterError);  // rho <= 0

  std::istringstream b(text.substr(0, text.rfind('\n', text.size() - 2) + 1));
  EXPECT_THROW(read_surface(b), FormatError);  // one node short

  std::string shifted = text;
  const auto first_row = shifted.find("\n0.") + 1;
  shifted.replace(first_row, 1, "1");
  std::istringstream c(shifted);
  EXPECT_THROW(read_surface(c), FormatError);  // angle off the grid

  std::istringstream d("# n = 3\n0 0 1\n");
  EXPECT_THROW(read_surface(d), FormatError);  // header incomplete
}

// --- commands ------------------------------------------------------------------------

TEST(Commands, RntReport) {
  RntReportConfig cfg;
  cfg.params = RntParams(3, 1, 0);
  auto j = rnt_report(cfg);
  EXPECT_DOUBLE_EQ(j["r_plus"].get<double>(), 2.0);
  cfg.params = RntParams(3, 1, 0.5);
  j = rnt_report(cfg);
  EXPECT_NEAR(j["penrose"]["slack"].get<double>(), 0.0, 1e-12);
  EXPECT_EQ(j["lapse_samples"].size(), 16u);
  EXPECT_EQ(j["lapse_samples"][0]["lapse"].get<double>(), 0.0);
  EXPECT_TRUE(j["embedding"]["available"].get<bool>());
  cfg.params = RntParams(4, 1, 1);
  j = rnt_report(cfg);
  EXPECT_FALSE(j["embedding"]["available"].get<bool>());
  EXPECT_TRUE(j["extremal"].get<bool>());
  cfg.params = RntParams(3, 1, 2);
  EXPECT_THROW(rnt_report(cfg), ParameterError);
}

TEST(Commands, VerifyRntData) {
  VerifyConfig cfg;
  cfg.data_file = (kData / "rnt_n4.dat").string();
  cfg.resolution = 32;
  const auto out = verify(cfg);
  EXPECT_EQ(out.exit_code, kExitOk);
  EXPECT_NEAR(out.document["mass"]["total"].get<double>(), 2.0, 1e-6);
  EXPECT_TRUE(out.document["all_pass"].get<bool>());
  for (const auto& c : out.document["certificates"]) EXPECT_EQ(c["verdict"], "pass") << c["name"];
}

TEST(Commands, VerifyScaledCharge) {
  VerifyConfig cfg;
  cfg.resolution = 32;
  cfg.data_file = (kData / "rnt_n4_field09.dat").string();
  const auto weak = verify(cfg);
  EXPECT_EQ(weak.exit_code, kExitOk);
  for (const auto& c : weak.document["certificates"])
    if (c["name"] == "penrose") EXPECT_GT(c["slack"].get<double>(), 1e-3);

  cfg.data_file = (kData / "rnt_n4_field11.dat").string();
  const auto strong = verify(cfg);
  EXPECT_EQ(strong.exit_code, kExitEnergyCondition);
  EXPECT_FALSE(strong.document["energy_condition"]["passed"].get<bool>());
  EXPECT_EQ(strong.document["energy_condition"]["residual_profile"].size(), 400u);
  EXPECT_FALSE(strong.document.contains("certificates"));
}

TEST(Commands, ImcfRunSphereAndSpheroid) {
  FlowConfig cfg;
  cfg.n = 3;
  cfg.resolution = 16;
  cfg.t_end = 0.5;
  cfg.dt = 1e-2;
  cfg.sample_every = 5;
  auto out = imcf_run(cfg);
  EXPECT_EQ(out.exit_code, kExitOk);
  // M column constant on the sphere
  std::istringstream csv(out.csv);
  std::string line;
  std::getline(csv, line);
  double m0 = 0.0;
  int rows = 0;
  while (std::getline(csv, line)) {
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
    const double m = std::stod(cols[4]);
    if (rows++ == 0) m0 = m;
    EXPECT_NEAR(m, m0, 1e-10 * m0);
  }
  EXPECT_EQ(rows, 11);

  cfg.n = 4;
  cfg.shape = InitialShape::spheroid;
  out = imcf_run(cfg);
  EXPECT_EQ(out.document["monotonicity"]["verdict"], "pass");
  EXPECT_LE(out.document["monotonicity"]["max_increase"].get<double>(), 1e-8);
  EXPECT_TRUE(out.document["flux_chain"]["ordered"].get<bool>());
}

TEST(Commands, ImcfRunBreakdownKeepsPartialOutput) {
  FlowConfig cfg;
  cfg.resolution = 16;
  cfg.shape = InitialShape::spheroid;
  cfg.t_end = 0.5;
  cfg.dt = 1e-2;
  cfg.options.min_stable_step = 1.0;
  const auto out = imcf_run(cfg);
  EXPECT_EQ(out.exit_code, kExitFlowBreakdown);
  EXPECT_FALSE(out.document["completed"].get<bool>());
  EXPECT_EQ(out.csv.rfind("t,area,intH,roundness,M,I0,I1,I2\n0,", 0), 0u);
}

TEST(Commands, ImcfRunRejectsBadInput) {
  FlowConfig cfg;
  cfg.resolution = 16;
  cfg.dt = 0.0;
  EXPECT_THROW(imcf_run(cfg), ParameterError);
  cfg.dt = 1e-2;
  cfg.shape = InitialShape::file;
  EXPECT_THROW(imcf_run(cfg), ParameterError);
  EXPECT_THROW(parse_shape("torus"), ParameterError);
}

TEST(Commands, SweepRows) {
  SweepConfig cfg;
  cfg.n = {3, 4, 5};
  cfg.m = {1.0};
  cfg.q = {0.0, 0.5, 0.99};
  const auto rows = sweep_rows(cfg);
  ASSERT_EQ(rows.size(), 9u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.error.empty());
    EXPECT_NEAR(r.penrose, 0.0, 1e-10);
  }
  EXPECT_EQ(rows[3].n, 4);  // n-major order

  cfg.q = {1.0, 2.0};
  cfg.jobs = 3;
  const auto edge = sweep_rows(cfg);
  EXPECT_TRUE(edge[0].extremal);
  EXPECT_FALSE(edge[0].embedding_height.has_value());
  EXPECT_NE(edge[1].error.find("naked singularity"), std::string::npos);
  const std::string csv = sweep_csv(edge);
  EXPECT_NE(csv.find(",n/a,"), std::string::npos);

  SweepConfig serial = cfg;
  serial.jobs = 1;
  EXPECT_EQ(sweep_csv(sweep_rows(serial)), csv);
  cfg.n.clear();
  EXPECT_THROW(sweep_rows(cfg), ParameterError);
}

// --- the executable -------------------------------------------------------------------

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("rnt-report --n 3 --m 1 --q 0.5"), 0);
  EXPECT_EQ(run_cli("rnt-report --n 3 --m 1 --q 2"), 2);
  EXPECT_EQ(run_cli("rnt-report --n 2 --m 1 --q 0"), 2);
  EXPECT_EQ(run_cli("rnt-report --m 1"), 2);
  EXPECT_EQ(run_cli("sweep --m 1 --q 0"), 2);
  EXPECT_EQ(run_cli("verify --data " + (kData / "rnt_n4_field11.dat").string() + " --res 16"), 4);
  EXPECT_EQ(run_cli("verify --data /nonexistent.dat"), 2);
  EXPECT_EQ(run_cli("imcf-run --res 16 --shape spheroid --t-end 0.1 --dt 0.01 --min-step 1 --csv " +
                    temp_path("breakdown.csv").string()),
            3);
  std::ifstream partial(temp_path("breakdown.csv"));
  std::string header;
  std::getline(partial, header);
  EXPECT_EQ(header, "t,area,intH,roundness,M,I0,I1,I2");
}

TEST(Cli, NonPositiveRadiusInSurfaceFile) {
  const auto g = SphereGrid::axisymmetric(3, 8);
  std::ostringstream os;
  write_surface(os, make_sphere(g, 1.0));
  std::string text = os.str();
  text.replace(text.rfind(' ') + 1, std::string::npos, "0\n");
  const auto path = temp_path("bad_surface.txt");
  std::ofstream(path) << text;
  EXPECT_EQ(run_cli("imcf-run --n 3 --shape file --surface " + path.string() + " --t-end 0.1 --dt 0.01"), 2);
}
