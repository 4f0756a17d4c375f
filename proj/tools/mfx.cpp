// command-line runner: every check in the library as a reproducible command
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "mfx/engine.hpp"

using namespace mfx;

namespace {

std::string default_fixture_dir() {
  if (const char* env = std::getenv("MFX_FIXTURES")) return env;
  std::string src = std::string(MFX_SOURCE_DIR) + "/fixtures";
  if (std::filesystem::exists(src)) return src;
  return "fixtures";
}

int emit(Report& rep, const std::string& command, const std::string& out_path, long long ms) {
  Report top("mfx run");
  top.put("command", command);
  top.children.push_back(rep);
  bool pass = rep.all_pass();
  top.put("result", pass ? "pass" : "fail");
  top.put("timing_ms", ms);  // excluded from the determinism contract
  std::string text = top.str();
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream of(out_path);
    of << text;
  }
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact engine for newforms mod p in squarefree level"};
  app.require_subcommand(1);

  std::string fixture_dir = default_fixture_dir();
  std::string out_path;
  app.add_option("--fixtures", fixture_dir, "fixture pack directory");
  app.add_option("--out", out_path, "write the report to a file");

  long level = 15, N = 5, ell = 3, p = 7;
  int weight = 4, k = 4, kmax = 24, kappa = 0, degree = 6, rmax = 13;
  std::string ring = "Q";
  bool full = false;

  auto* sp_cmd = app.add_subcommand("space", "build a space and print dimensions and provenance");
  sp_cmd->add_option("--level", level)->required();
  sp_cmd->add_option("--weight", weight)->required();
  sp_cmd->add_option("--ring", ring, "Q | Z | F<p>");
  int prec_opt = 0;
  sp_cmd->add_option("--prec", prec_opt);
  sp_cmd->add_flag("--full", full, "full space M_k instead of cuspforms");

  auto* verify = app.add_subcommand("verify", "run a named check suite");
  std::string suite;
  verify->add_option("suite", suite,
                     "identities | newformthm | keyker | levelraising | span | "
                     "filtration-standard | filtration-monsky | duality")
      ->required();
  verify->add_option("--N", N);
  verify->add_option("--ell", ell);
  verify->add_option("--p", p);
  verify->add_option("--k", k);
  verify->add_option("--kmax", kmax);
  verify->add_option("--kappa", kappa);
  verify->add_option("--R", rmax, "probe primes up to this bound");
  verify->add_option("--d", degree, "word degree / duality degree");
  bool graded = false;
  verify->add_flag("--graded", graded, "use the all-weights graded space");

  auto* ex_cmd = app.add_subcommand("examples", "replay a worked example end to end");
  std::string example_name;
  ex_cmd->add_option("name", example_name, "mod5-level3 | mod7-level15")->required();

  auto* fx_cmd = app.add_subcommand("fixtures", "validate the shipped fixture pack");

  CLI11_PARSE(app, argc, argv);

  std::string command;
  for (int i = 1; i < argc; ++i) command += std::string(i > 1 ? " " : "") + argv[i];

  auto t0 = std::chrono::steady_clock::now();
  try {
    FixturePack pack = load_pack(fixture_dir);
    Report rep;
    if (sp_cmd->parsed()) {
      rep = run_space_cmd(level, weight, ring, prec_opt, !full, pack);
    } else if (ex_cmd->parsed()) {
      if (example_name == "mod5-level3")
        rep = run_example_mod5_level3(pack);
      else if (example_name == "mod7-level15")
        rep = run_example_mod7_level15(pack);
      else {
        std::cerr << "unknown example '" << example_name << "' (mod5-level3 | mod7-level15)\n";
        return 2;
      }
    } else if (fx_cmd->parsed()) {
      rep = run_fixture_validation(pack);
    } else if (verify->parsed()) {
      if (suite == "identities") {
        if (graded)
          rep = run_identities_graded(build_graded_ctx(N, ell, p, kappa, kmax, pack, false,
                                                       verify->count("--R") ? rmax : 2, false));
        else
          rep = run_identities_q(N, ell, k, pack);
      } else if (suite == "newformthm") {
        if (graded)
          rep = run_newformthm_graded(build_graded_ctx(N, ell, p, kappa, kmax, pack, true,
                                                       verify->count("--R") ? rmax : 1, false));
        else if (verify->count("--p"))
          rep = run_newformthm_fixed(N, ell, p, k, pack);
        else
          rep = run_newformthm_q(N, ell, k, pack);
      } else if (suite == "keyker") {
        rep = run_keyker(pack);
      } else if (suite == "levelraising") {
        rep = run_levelraising(pack);
      } else if (suite == "span") {
        rep = run_span(pack);
      } else if (suite == "filtration-standard") {
        rep = run_filtration(N, ell, p, kappa, kmax, pack, false, degree);
      } else if (suite == "filtration-monsky") {
        rep = run_filtration(N, ell, p, kappa, kmax, pack, true, degree);
      } else if (suite == "duality") {
        rep = run_duality(p, degree, pack);
      } else {
        std::cerr << "unknown suite '" << suite << "'\n";
        return 2;
      }
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    return emit(rep, command, out_path, ms);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
