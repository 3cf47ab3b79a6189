// invlift command-line interface: evaluate catalog invariants on JSON
// records and run the verification suites.
//
// Exit codes: 0 success, 1 verification failure, 2 input parse error,
// 3 input validation error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "invlift/invlift.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitParseError = 2;
constexpr int kExitValidationError = 3;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invlift::ParseError("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invlift::ParseError("cannot open output file '" + path + "'");
  out << content;
}

bool wants_csv(const std::string& path) {
  return path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
}

int run_catalog(const std::string& output) {
  write_output(output, invlift::catalog_listing().dump(2) + "\n");
  return kExitOk;
}

int run_eval(const std::string& config_key, const std::string& input, const std::string& output) {
  const invlift::CatalogEntry& entry = invlift::catalog_entry(config_key);
  invlift::Json doc;
  try {
    doc = invlift::Json::parse(read_input(input));
  } catch (const nlohmann::json::exception& e) {
    throw invlift::ParseError(std::string("invalid JSON: ") + e.what());
  }
  const invlift::EvalRequest req = invlift::parse_eval_request(doc, entry.config);
  if (req.config_key && *req.config_key != config_key)
    throw invlift::ParseError("request config '" + *req.config_key +
                              "' does not match --config '" + config_key + "'");
  if (wants_csv(output)) {
    write_output(output, invlift::eval_csv(entry, req.records));
  } else {
    write_output(output, invlift::eval_response(entry, req.records).dump(2) + "\n");
  }
  return kExitOk;
}

int run_verify(const invlift::VerifyOptions& opt, const std::string& output) {
  bool pass = false;
  const invlift::Json report = invlift::run_verify(opt, pass);
  write_output(output, report.dump(2) + "\n");
  return pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Separating invariants on product spaces via stabilizer reduction"};
  app.require_subcommand(1);

  auto* cmd_catalog = app.add_subcommand("catalog", "List the configuration catalog");
  std::string catalog_output = "-";
  cmd_catalog->add_option("--output", catalog_output, "Output file, '-' for stdout");

  auto* cmd_eval = app.add_subcommand("eval", "Evaluate invariants on a JSON request");
  std::string eval_config, eval_input, eval_output = "-";
  cmd_eval->add_option("--config", eval_config, "Configuration key, e.g. SE3/R3/pos-ori")
      ->required();
  cmd_eval->add_option("--input", eval_input, "Input file, '-' for stdin")->required();
  cmd_eval->add_option("--output", eval_output,
                       "Output file ('-' for stdout; '.csv' suffix selects CSV)");

  auto* cmd_verify = app.add_subcommand("verify", "Run a verification suite");
  invlift::VerifyOptions vopt;
  std::string verify_output = "-";
  double tol_flag = -1.0;
  cmd_verify
      ->add_option("--suite", vopt.suite,
                   "invariance|separation|canonicalizer|cross-reduction|chain")
      ->required();
  cmd_verify->add_option("--config", vopt.config_key, "Catalog key or 'all'");
  cmd_verify->add_option("--seed", vopt.seed, "Master seed (default 0)");
  cmd_verify->add_option("--trials", vopt.trials, "Trials / pairs per population (default 1000)");
  cmd_verify->add_option("--tol", tol_flag, "Override the suite tolerance");
  cmd_verify->add_option("--output", verify_output, "Output file, '-' for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParseError;
  }

  try {
    if (cmd_catalog->parsed()) return run_catalog(catalog_output);
    if (cmd_eval->parsed()) return run_eval(eval_config, eval_input, eval_output);
    if (tol_flag >= 0.0) vopt.tolerance = tol_flag;
    return run_verify(vopt, verify_output);
  } catch (const invlift::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const invlift::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const invlift::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidationError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitParseError;
  }
}
