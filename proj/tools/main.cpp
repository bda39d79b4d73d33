#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using gibbsrec::cli::Format;
using gibbsrec::cli::RunConfig;

struct Options {
  RunConfig run;
  std::string format = "csv";
  std::string out;
  std::string state;
  std::vector<double> spectrum;
  std::string phi;
  std::vector<double> amplitudes;
  std::vector<double> amplitudes_im;
  double epsilon = 0.1;
  std::string method = "gibbs";
  unsigned n = 0;
  std::vector<double> exponents;
  std::size_t random_count = 0;
};

// Each command has its own default sample count, applied after parsing when
// --samples was not given.
std::map<const CLI::App*, std::uint64_t> sample_defaults;

void add_run_flags(CLI::App* cmd, Options& opt, std::uint64_t default_samples) {
  sample_defaults[cmd] = default_samples;
  cmd->add_option("--seed", opt.run.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--samples,-N", opt.run.samples,
                  "Monte Carlo sample count (default " + std::to_string(default_samples) + ")");
  cmd->add_option("--shards", opt.run.shards, "independent substreams")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_output_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--out,-o", opt.out, "output path (stdout when omitted)");
  cmd->add_option("--format", opt.format, "csv or struct")
      ->check(CLI::IsMember({"csv", "struct"}))
      ->capture_default_str();
}

void add_state_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--state", opt.state, "density matrix interchange file");
  cmd->add_option("--spectrum", opt.spectrum, "diagonal state, e.g. 0.25,0.75")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gibbs ensembles of pure states and a-posteriori relative entropy"};
  app.require_subcommand(1);
  Options opt;

  auto* distance = app.add_subcommand("distance", "a-posteriori distance D(rho, phi)");
  add_state_flags(distance, opt);
  add_output_flags(distance, opt);
  distance->add_option("--phi", opt.phi, "pure state interchange file");
  distance->add_option("--amplitudes", opt.amplitudes, "inline real parts of phi")->delimiter(',');
  distance->add_option("--amplitudes-im", opt.amplitudes_im, "inline imaginary parts of phi")
      ->delimiter(',');

  auto* reconstruct = app.add_subcommand("reconstruct", "Monte Carlo reconstruction vs exact target");
  add_state_flags(reconstruct, opt);
  add_output_flags(reconstruct, opt);
  add_run_flags(reconstruct, opt, 100000);
  reconstruct->add_option("--epsilon", opt.epsilon, "white-noise fraction in (0, 1]")
      ->capture_default_str();
  reconstruct->add_option("--method", opt.method, "gibbs or importance")
      ->check(CLI::IsMember({"gibbs", "importance"}))
      ->capture_default_str();

  auto* sample = app.add_subcommand("sample-gibbs", "draw states from the Gibbs ensemble");
  add_state_flags(sample, opt);
  add_output_flags(sample, opt);
  add_run_flags(sample, opt, 1000);
  sample->add_option("--epsilon", opt.epsilon, "white-noise fraction in (0, 1]")
      ->capture_default_str();

  auto* moments = app.add_subcommand("moments-check", "sphere moments: closed form vs Monte Carlo");
  add_output_flags(moments, opt);
  add_run_flags(moments, opt, 100000);
  auto* n_opt = moments->add_option("--n", opt.n, "dimension");
  auto* a_opt = moments->add_option("--a", opt.exponents, "exponents a_1..a_n")->delimiter(',');
  auto* random_opt = moments->add_option("--random", opt.random_count, "random exponent vectors");
  random_opt->excludes(a_opt)->excludes(n_opt);

  auto* torus = app.add_subcommand("torus-check", "torus ensemble average vs rho");
  add_state_flags(torus, opt);
  add_output_flags(torus, opt);
  add_run_flags(torus, opt, 10000);

  auto* example = app.add_subcommand("example", "rho = diag(1/4, 3/4): three ensemble expansions");
  add_output_flags(example, opt);
  add_run_flags(example, opt, 500);
  example->add_option("--epsilon", opt.epsilon, "white-noise fraction for the Gibbs panel")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  for (const auto& [cmd, samples] : sample_defaults) {
    if (cmd->parsed() && cmd->count("--samples") == 0) opt.run.samples = samples;
  }

  try {
    opt.run.format = opt.format == "struct" ? Format::Struct : Format::Csv;
    gibbsrec::cli::CommandOutput result;
    if (*distance) {
      const auto rho = gibbsrec::cli::load_state(opt.state, opt.spectrum);
      const auto phi = gibbsrec::cli::load_phi(opt.phi, opt.amplitudes, opt.amplitudes_im);
      result = gibbsrec::cli::cmd_distance(rho, phi, opt.run.format);
    } else if (*reconstruct) {
      const auto rho = gibbsrec::cli::load_state(opt.state, opt.spectrum);
      const auto method = opt.method == "importance"
                              ? gibbsrec::cli::ReconstructMethod::Importance
                              : gibbsrec::cli::ReconstructMethod::Gibbs;
      result = gibbsrec::cli::cmd_reconstruct(rho, opt.epsilon, opt.run, method);
    } else if (*sample) {
      const auto rho = gibbsrec::cli::load_state(opt.state, opt.spectrum);
      result = gibbsrec::cli::cmd_sample_gibbs(rho, opt.epsilon, opt.run);
    } else if (*moments) {
      std::vector<gibbsrec::MomentExponents> cases;
      if (opt.random_count > 0) {
        cases = gibbsrec::cli::random_exponents(opt.random_count, opt.run.seed);
      } else {
        if (opt.exponents.empty()) {
          throw gibbsrec::Error(gibbsrec::ErrorKind::InvalidArgument, "give --a or --random");
        }
        if (opt.n != 0 && opt.n != opt.exponents.size()) {
          throw gibbsrec::Error(gibbsrec::ErrorKind::LengthMismatch,
                                "--n does not match the number of exponents");
        }
        cases.emplace_back(opt.exponents);
      }
      result = gibbsrec::cli::cmd_moments_check(cases, opt.run);
    } else if (*torus) {
      const auto rho = gibbsrec::cli::load_state(opt.state, opt.spectrum);
      result = gibbsrec::cli::cmd_torus_check(rho, opt.run);
    } else if (*example) {
      result = gibbsrec::cli::cmd_example(opt.epsilon, opt.run);
    }

    for (const auto& line : result.diagnostics) std::cerr << line << '\n';
    if (opt.out.empty()) {
      std::cout << result.text;
    } else {
      gibbsrec::cli::write_atomically(opt.out, result.text);
    }
  } catch (const gibbsrec::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == gibbsrec::ErrorKind::EpsilonOutOfRange ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
