#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "lbjet/classifier.hpp"
#include "lbjet/expo2_check.hpp"
#include "lbjet/foliation.hpp"
#include "lbjet/parser.hpp"
#include "lbjet/truncation.hpp"
#include "lbjet_cli/cli_error.hpp"
#include "lbjet_cli/commands.hpp"
#include "lbjet_cli/spec_file.hpp"

using namespace lbjet::cli;

int main(int argc, char** argv) {
  CLI::App app{"lbjet: Lie-Baecklund fields on jet bundles"};
  app.require_subcommand(1);
  GlobalOptions g;
  std::string json_path;
  app.option_defaults()->always_capture_default();
  app.add_option("--seed", g.seed, "RNG seed for sampled checks");
  app.add_option("--samples", g.samples, "Sample count for numeric checks")->check(CLI::PositiveNumber);
  app.add_option("--tol", g.tol, "Numeric residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--json", json_path, "Write the JSON report here");

  std::string spec;
  auto* check = app.add_subcommand("check", "Classify a field or eps0 candidates");
  check->add_option("spec", spec, "Spec file")->required();

  int order = 2;
  auto* prolong = app.add_subcommand("prolong", "Print eta and eps components");
  prolong->add_option("spec", spec)->required();
  prolong->add_option("--order", order);

  auto* truncate = app.add_subcommand("truncate", "Split and print the truncated fields");
  truncate->add_option("spec", spec)->required();
  truncate->add_option("--order", order);

  FlowArgs fa;
  auto* flow = app.add_subcommand("flow", "Evaluate the flow at a point");
  flow->add_option("spec", spec)->required();
  flow->add_option("--t", fa.t, "Flow time (rational)");
  flow->add_option("--point", fa.point, "x, y0_1.., y1_1.., ...");
  flow->add_option("--mode", fa.mode)->check(CLI::IsMember({"closed", "rk4"}));
  flow->add_option("--order", fa.order);
  flow->add_option("--step", fa.h, "RK4 step")->check(CLI::PositiveNumber);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Emit a spec for a foliation field");
  construct->add_option("--family", ca.family)->required()->check(CLI::IsMember({"radial", "affine", "general"}));
  construct->add_option("--F1", ca.F1, "Primitive of f1, in l")->required();
  construct->add_option("--g", ca.g, "xi profile, in l");
  construct->add_option("--gamma", ca.gamma);
  construct->add_option("--lambda", ca.lambda, "Leaf coordinate over u1[1], u2[1]");
  construct->add_option("--slope", ca.slope, "Leaf slope m, in l");
  construct->add_option("--q0", ca.q0, "Leaf intercept, in l");
  construct->add_flag("--printed", ca.printed, "Affine: uncorrected f2");
  construct->add_option("--name", ca.name);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run the identity and flow property checks");
  verify->add_option("spec", spec)->required();
  verify->add_option("--order", va.order);
  verify->add_option("--germ", va.germ, "Profiles in x1, separated by ';'");
  verify->add_option("--a", va.a, "Germ window start");
  verify->add_option("--b", va.b, "Germ window end");
  verify->add_option("--t", va.t, "Germ flow time");
  verify->add_option("--points", va.points)->check(CLI::Range(2, 100000));
  verify->add_option("--csv", va.csv_path, "Write the germ samples as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  CommandResult r;
  try {
    if (*check) r = cmd_check(spec, g);
    else if (*prolong) r = cmd_prolong(spec, order, g);
    else if (*truncate) r = cmd_truncate(spec, order, g);
    else if (*flow) r = cmd_flow(spec, fa, g);
    else if (*construct) r = cmd_construct(ca, g);
    else r = cmd_verify(spec, va, g);
  } catch (const SpecError& e) {
    std::cerr << "error: " << spec;
    if (e.line() > 0) std::cerr << ":" << e.line();
    std::cerr << ": " << e.what() << "\n";
    return kExitInputError;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const lbjet::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const lbjet::SignatureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const lbjet::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const lbjet::NonPolynomialError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  std::cout << r.text;
  if (!json_path.empty()) {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << json_path << "\n";
      return kExitInputError;
    }
    out << r.report.dump(2) << "\n";
  }
  return r.exit_code;
}
