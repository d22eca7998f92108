#include <cerrno>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <system_error>

#include "CLI11.hpp"
#include "ldmp/bench/experiments.hpp"
#include "ldmp/bench/serve.hpp"
#include "ldmp/planner/demonstration.hpp"

namespace fs = std::filesystem;
using namespace ldmp;

namespace {

constexpr int kExitAcceptance = 1;
constexpr int kExitUsage = 2;
constexpr int kExitEnvironment = 3;

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_file(path, j.dump(2) + "\n"); }

std::string pct(double r) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.0f%%", r * 100);
  return buf;
}

std::string fixed(double v, int digits = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<bench::Benchmark> benchmarks_from(const std::string& s) {
  if (s == "all") return {bench::Benchmark::B1, bench::Benchmark::B2, bench::Benchmark::B3};
  return {bench::benchmark_from_string(s)};
}

std::vector<sim::Level> levels_from(std::string s) {
  if (s == "all") return {sim::Level::L1, sim::Level::L2, sim::Level::L3, sim::Level::L4};
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return {sim::level_from_string(s)};
}

struct GeneralizeArgs {
  std::string benchmark;
  int count = 100;
  std::uint64_t seed = 7;
  std::string out = "out";
  bool check = false;
};

int cmd_generalize(const GeneralizeArgs& a) {
  bool ok = true;
  for (auto b : benchmarks_from(a.benchmark)) {
    const auto setup = exec::load_setup(bench::demo_path(b));
    const auto r = bench::run_generalize(setup, b, a.count, a.seed);
    const std::string stem = std::string("generalize_") + bench::to_string(b);
    write_json(fs::path(a.out) / (stem + ".json"), bench::to_json(r));
    write_file(fs::path(a.out) / (stem + ".csv"), bench::to_csv(r));
    write_json(fs::path(a.out) / ("timing_" + stem + ".json"), bench::timing_json(r));
    std::cout << bench::to_string(b) << ": linear " << pct(r.rate(&bench::GeneralizeTask::linear)) << ", logic-dmp "
              << pct(r.rate(&bench::GeneralizeTask::logic)) << ", full " << pct(r.rate(&bench::GeneralizeTask::full))
              << ", median expansions " << r.median_logic_expansions() << " / " << r.median_full_expansions()
              << " (ratio " << fixed(r.expansion_ratio()) << "; L3/L4 only " << r.novel_median_expansions().first
              << " / " << r.novel_median_expansions().second << ")\n";
    if (a.check) {
      const double lin = r.rate(&bench::GeneralizeTask::linear);
      const double limit = b == bench::Benchmark::B1 ? 0.7 : 1.0;
      ok = ok && r.rate(&bench::GeneralizeTask::logic) == 1.0 && r.rate(&bench::GeneralizeTask::full) == 1.0 &&
           lin >= 0.1 && lin <= 0.5 && r.expansion_ratio() <= limit && r.wall_seconds < 120.0;
    }
  }
  return ok ? 0 : kExitAcceptance;
}

struct ReactArgs {
  std::string benchmark;
  std::string level = "all";
  int count = 10;
  std::uint64_t seed = 7;
  std::string out = "out";
  bool check = false;
};

int cmd_react(const ReactArgs& a) {
  bool ok = true;
  for (auto b : benchmarks_from(a.benchmark)) {
    const auto setup = exec::load_setup(bench::demo_path(b));
    for (auto level : levels_from(a.level)) {
      const auto r = bench::run_react(setup, b, level, a.count, a.seed);
      const std::string stem = std::string("react_") + bench::to_string(b) + "_" + sim::to_string(level);
      write_json(fs::path(a.out) / (stem + ".json"), bench::to_json(r));
      write_file(fs::path(a.out) / (stem + ".csv"), bench::to_csv(r));
      write_json(fs::path(a.out) / ("timing_" + stem + ".json"), bench::timing_json(r));
      const auto ls = r.sim_time(&bench::ReactTask::logic), rs = r.sim_time(&bench::ReactTask::rlds);
      std::cout << bench::to_string(b) << " " << sim::to_string(level) << ": linear "
                << pct(r.rate(&bench::ReactTask::linear)) << ", rlds-lite " << pct(r.rate(&bench::ReactTask::rlds))
                << ", logic-dmp " << pct(r.rate(&bench::ReactTask::logic)) << ", sim-time logic-dmp "
                << fixed(ls.mean, 2) << "+-" << fixed(ls.std, 2) << " s";
      if (rs.n > 0) std::cout << ", rlds-lite " << fixed(rs.mean, 2) << "+-" << fixed(rs.std, 2) << " s";
      std::cout << "\n";
      if (a.check) {
        const bool l1 = level == sim::Level::L1, l12 = l1 || level == sim::Level::L2;
        ok = ok && r.rate(&bench::ReactTask::linear) == (l1 ? 1.0 : 0.0) &&
             r.rate(&bench::ReactTask::rlds) == (l12 ? 1.0 : 0.0) && r.rate(&bench::ReactTask::logic) == 1.0;
      }
    }
  }
  return ok ? 0 : kExitAcceptance;
}

int cmd_viapoint(const std::string& goal, const std::string& out) {
  std::vector<bench::ViaGoal> goals;
  if (goal == "all") {
    goals = bench::via_goals();
  } else {
    goals.push_back(bench::via_goal(goal));
  }
  bool ok = true;
  for (const auto& g : goals) {
    const auto r = bench::run_viapoint(g);
    write_json(fs::path(out) / ("viapoint_" + g.id + ".json"), bench::to_json(r));
    write_file(fs::path(out) / ("viapoint_" + g.id + ".csv"), bench::to_csv(r));
    std::cout << g.id << ": lqt-cp via miss " << fixed(r.lqt_miss[0], 4) << " / " << fixed(r.lqt_miss[1], 4)
              << (r.lqt_pass() ? " pass" : " FAIL") << "; dmp via miss " << fixed(r.dmp_miss[0], 4) << " / "
              << fixed(r.dmp_miss[1], 4) << (r.dmp_pass() ? " pass" : " miss") << "; hook pick end error lqt-cp "
              << r.hook_lqt_error << ", dmp " << r.hook_dmp_error << "\n";
    ok = ok && r.lqt_pass() && r.hook_lqt_error <= 1e-3 && r.hook_dmp_error <= 1e-3;
  }
  return ok ? 0 : kExitAcceptance;
}

struct ServeArgs {
  std::string world, demo, journal, report, host = "127.0.0.1";
  int port = 8765;
  int budget = 60;
};

int cmd_serve(const ServeArgs& a) {
  bench::ServeOptions o;
  o.demo = a.demo;
  if (!a.world.empty()) o.world = fs::path(a.world);
  o.host = a.host;
  o.port = a.port;
  o.run.budget = a.budget;
  o.on_listen = [&](int port) { std::cout << "listening on " << a.host << ":" << port << std::endl; };
  const auto out = bench::serve(o);
  const auto report = exec::to_json(out.report, true);
  if (!a.journal.empty()) write_json(a.journal, out.journal);
  if (!a.report.empty()) {
    write_json(a.report, report);
  } else {
    std::cout << report.dump() << std::endl;
  }
  return 0;
}

int cmd_replay(const std::string& demo, const std::string& journal, const std::string& report) {
  const auto setup = exec::load_setup(demo);
  const auto r = bench::replay_journal(setup, planner::read_json(journal));
  const auto j = exec::to_json(r, false);
  if (!report.empty()) {
    write_json(report, j);
  } else {
    std::cout << j.dump() << std::endl;
  }
  return r.success ? 0 : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Logic-DMP sandbox: demonstration-guided task planning with LQT-CP motion"};
  app.require_subcommand(1);
  int code = 0;

  GeneralizeArgs gen;
  auto* g = app.add_subcommand("generalize", "random-start generalization over Linear, full planner and Logic-DMP");
  g->add_option("--benchmark", gen.benchmark, "b1, b2, b3 or all")->required();
  g->add_option("--count", gen.count, "tasks per benchmark")->check(CLI::NonNegativeNumber);
  g->add_option("--seed", gen.seed, "suite seed");
  g->add_option("--out", gen.out, "output directory");
  g->add_flag("--check", gen.check, "exit 1 unless the expected success pattern holds");
  g->callback([&] { code = cmd_generalize(gen); });

  ReactArgs rea;
  auto* r = app.add_subcommand("react", "scripted disturbance suites over Linear, RLDS-lite and Logic-DMP");
  r->add_option("--benchmark", rea.benchmark, "b1, b2, b3 or all")->required();
  r->add_option("--level", rea.level, "l1..l4 or all");
  r->add_option("--count", rea.count, "tasks per level")->check(CLI::NonNegativeNumber);
  r->add_option("--seed", rea.seed, "suite seed");
  r->add_option("--out", rea.out, "output directory");
  r->add_flag("--check", rea.check, "exit 1 unless the expected success pattern holds");
  r->callback([&] { code = cmd_react(rea); });

  std::string goal, via_out = "out";
  auto* v = app.add_subcommand("viapoint", "LQT-CP vs classical DMP on the hook pulling task");
  v->add_option("--goal", goal, "red, green, blue, demo or all")->required();
  v->add_option("--out", via_out, "output directory");
  v->callback([&] { code = cmd_viapoint(goal, via_out); });

  ServeArgs srv;
  auto* s = app.add_subcommand("serve", "live session over newline-delimited JSON on a TCP socket");
  s->add_option("--demo", srv.demo, "demo.json")->required();
  s->add_option("--world", srv.world, "start world (defaults to the demo's)");
  s->add_option("--port", srv.port, "TCP port, 0 for any")->check(CLI::Range(0, 65535));
  s->add_option("--host", srv.host, "IPv4 address to bind");
  s->add_option("--journal", srv.journal, "write the command journal here on exit");
  s->add_option("--report", srv.report, "write the RunReport here instead of stdout");
  s->add_option("--budget", srv.budget, "action budget")->check(CLI::PositiveNumber);
  s->callback([&] { code = cmd_serve(srv); });

  std::string rp_demo, rp_journal, rp_report;
  auto* rp = app.add_subcommand("replay", "re-run a serve journal offline");
  rp->add_option("--demo", rp_demo, "demo.json")->required();
  rp->add_option("--journal", rp_journal, "journal written by serve")->required();
  rp->add_option("--report", rp_report, "write the RunReport here instead of stdout");
  rp->callback([&] { code = cmd_replay(rp_demo, rp_journal, rp_report); });

  auto* exp = app.add_subcommand("export", "regenerate the demonstrated motion segments");
  std::string root = bench::data_dir().string();
  exp->add_option("--root", root, "data directory");
  exp->callback([&] {
    for (auto b : {bench::Benchmark::B1, bench::Benchmark::B2, bench::Benchmark::B3}) bench::export_motions(b, root);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  } catch (const bench::PortBusy& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEnvironment;
  }
  return code;
}
