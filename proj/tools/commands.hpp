#pragma once

// Command implementations behind the `gibbsrec` executable. Each command
// renders its full output into a string so that results are byte-identical
// for identical (command, config, seed, shards); timing and warnings go to a
// separate diagnostics channel.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "gibbsrec/gibbsrec.hpp"
#include "gibbsrec/io.hpp"

namespace gibbsrec::cli {

enum class Format { Csv, Struct };

struct RunConfig {
  std::uint64_t seed = 42;
  std::uint64_t samples = 100000;
  unsigned shards = 4;
  Format format = Format::Csv;
};

struct CommandOutput {
  std::string text;
  std::vector<std::string> diagnostics;
};

/// Shortest round-trip decimal; infinities as `+inf` / `-inf`.
inline std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  return fmt::format("{}", x);
}

inline std::string num(ExtendedReal x) { return num(x.value()); }

inline std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

// ---------------------------------------------------------------- inputs

/// State from an interchange file, or diag(spectrum) when `path` is empty.
inline DensityOperator load_state(const std::string& path, const std::vector<double>& spectrum) {
  if (!path.empty() && !spectrum.empty()) {
    throw Error(ErrorKind::InvalidArgument, "give either --state or --spectrum, not both");
  }
  if (!path.empty()) return validate_density(io::to_matrix(io::read_document(path)));
  if (spectrum.empty()) throw Error(ErrorKind::InvalidArgument, "missing --state or --spectrum");
  RealVector p(static_cast<Index>(spectrum.size()));
  for (std::size_t k = 0; k < spectrum.size(); ++k) p(static_cast<Index>(k)) = spectrum[k];
  return diagonal_state(p);
}

inline PureState load_phi(const std::string& path, const std::vector<double>& re,
                          const std::vector<double>& im) {
  if (!path.empty()) return PureState::from_amplitudes(io::to_vector(io::read_document(path)), 1e-10);
  if (re.empty()) throw Error(ErrorKind::InvalidArgument, "missing --phi or --amplitudes");
  if (!im.empty() && im.size() != re.size()) {
    throw Error(ErrorKind::LengthMismatch, "--amplitudes and --amplitudes-im lengths differ");
  }
  Vector v(static_cast<Index>(re.size()));
  for (std::size_t k = 0; k < re.size(); ++k) {
    v(static_cast<Index>(k)) = Complex(re[k], im.empty() ? 0.0 : im[k]);
  }
  return PureState::from_amplitudes(std::move(v), 1e-10);
}

/// Writes to a sibling temp file and renames on success, so a failed run never
/// leaves a partial output file behind.
inline void write_atomically(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw Error(ErrorKind::InvalidArgument, "write to " + tmp.string() + " failed");
    }
  }
  std::filesystem::rename(tmp, path);
}

namespace detail {

inline std::string elapsed_since(std::chrono::steady_clock::time_point start) {
  const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
  return fmt::format("wall time {:.3f} s", dt.count());
}

inline std::string join(std::span<const double> xs, const char* sep) {
  std::string out;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k) out += sep;
    out += num(xs[k]);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------- distance

inline CommandOutput cmd_distance(const DensityOperator& rho, const PureState& phi, Format format) {
  if (rho.dim() != phi.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "state and phi dimensions differ");
  }
  const auto dec = spectral_decompose(rho);
  const auto breakdown = a_posteriori_breakdown(dec, phi);
  const auto lueders = lueders_state(dec, validate_density(projector(phi), 1e-10));
  const auto relative = quantum_relative_entropy(rho, lueders);

  CommandOutput out;
  if (dec.degenerate()) {
    out.diagnostics.push_back(
        "warning: rho has a degenerate spectrum; the distance depends on the eigenbasis chosen "
        "inside degenerate eigenspaces");
  }
  if (format == Format::Struct) {
    nlohmann::json terms = nlohmann::json::array();
    for (std::size_t k = 0; k < breakdown.terms.size(); ++k) {
      const auto& t = breakdown.terms[k];
      terms.push_back({{"k", k},
                       {"p", t.probability},
                       {"t", t.squared_overlap},
                       {"term", io::real_json(t.contribution.value())}});
    }
    nlohmann::json doc = {{"command", "distance"},
                          {"distance", io::real_json(breakdown.total.value())},
                          {"relative_entropy_to_lueders", io::real_json(relative.value())},
                          {"lueders_state", io::matrix_json(lueders.matrix())},
                          {"terms", terms}};
    out.text = dump(doc);
    return out;
  }
  std::string csv = "record,i,j,p,t,value,value_im\n";
  csv += fmt::format("distance,,,,,{},\n", num(breakdown.total));
  csv += fmt::format("relative_entropy_to_lueders,,,,,{},\n", num(relative));
  for (std::size_t k = 0; k < breakdown.terms.size(); ++k) {
    const auto& t = breakdown.terms[k];
    csv += fmt::format("term,{},,{},{},{},\n", k, num(t.probability), num(t.squared_overlap),
                       num(t.contribution));
  }
  const Matrix& l = lueders.matrix();
  for (Index i = 0; i < l.rows(); ++i) {
    for (Index j = 0; j < l.cols(); ++j) {
      csv += fmt::format("lueders,{},{},,,{},{}\n", i, j, num(l(i, j).real()), num(l(i, j).imag()));
    }
  }
  out.text = std::move(csv);
  return out;
}

// ---------------------------------------------------------------- reconstruct

enum class ReconstructMethod { Gibbs, Importance };

inline CommandOutput cmd_reconstruct(const DensityOperator& rho, double epsilon,
                                     const RunConfig& config,
                                     ReconstructMethod method = ReconstructMethod::Gibbs) {
  const auto start = std::chrono::steady_clock::now();
  const GibbsParams params(rho, epsilon);
  const Matrix target = reconstruct_exact(rho, epsilon).matrix();
  const SeededStream rng(config.seed);
  const MatrixEstimate est = method == ReconstructMethod::Gibbs
                                 ? reconstruct_mc(params, config.samples, rng, config.shards)
                                 : reconstruct_importance(params, config.samples, rng, config.shards);
  const RealMatrix z = est.z_scores(target);
  const bool pass = z.maxCoeff() <= 3.0;

  CommandOutput out;
  if (params.near_singular()) {
    out.diagnostics.push_back("warning: rho is nearly singular; Dirichlet components are flat");
  }
  const char* method_name = method == ReconstructMethod::Gibbs ? "gibbs" : "importance";
  if (config.format == Format::Struct) {
    nlohmann::json doc = {{"command", "reconstruct"},
                          {"method", method_name},
                          {"epsilon", epsilon},
                          {"samples", est.samples},
                          {"seed", config.seed},
                          {"shards", config.shards},
                          {"target", io::matrix_json(target)},
                          {"estimate", io::matrix_json(est.mean)},
                          {"standard_errors", io::real_matrix_json(est.standard_errors)},
                          {"z_scores", io::real_matrix_json(z)},
                          {"max_abs_z", io::real_json(z.maxCoeff())},
                          {"pass", pass}};
    out.text = dump(doc);
  } else {
    std::string csv = "i,j,target_re,target_im,estimate_re,estimate_im,standard_error,z,pass\n";
    for (Index i = 0; i < target.rows(); ++i) {
      for (Index j = 0; j < target.cols(); ++j) {
        csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", i, j, num(target(i, j).real()),
                           num(target(i, j).imag()), num(est.mean(i, j).real()),
                           num(est.mean(i, j).imag()), num(est.standard_errors(i, j)),
                           num(z(i, j)), z(i, j) <= 3.0 ? "pass" : "fail");
      }
    }
    out.text = std::move(csv);
  }
  out.diagnostics.push_back(fmt::format("reconstruct ({}): max |z| = {:.3f}, {}", method_name,
                                        z.maxCoeff(), detail::elapsed_since(start)));
  return out;
}

// ---------------------------------------------------------------- sample-gibbs

inline CommandOutput cmd_sample_gibbs(const DensityOperator& rho, double epsilon,
                                      const RunConfig& config) {
  const GibbsParams params(rho, epsilon);
  const Index n = params.dim();
  SeededStream rng(config.seed);
  const double log_k = log_normalization_K(params);

  CommandOutput out;
  if (params.near_singular()) {
    out.diagnostics.push_back("warning: rho is nearly singular; Dirichlet components are flat");
  }
  nlohmann::json rows = nlohmann::json::array();
  std::string csv = "index";
  for (Index k = 0; k < n; ++k) csv += fmt::format(",re_{0},im_{0}", k);
  for (Index k = 0; k < n; ++k) csv += fmt::format(",t_{}", k);
  csv += ",log_density\n";

  for (std::uint64_t s = 0; s < config.samples; ++s) {
    const PureState phi = sample_gibbs(params, rng);
    const RealVector t = eigenbasis_weights(params.decomposition(), phi);
    const double log_density = gibbs_log_density(params, phi);
    if (config.format == Format::Struct) {
      rows.push_back({{"state", io::vector_json(phi.amplitudes())},
                      {"t", std::vector<double>(t.begin(), t.end())},
                      {"log_density", io::real_json(log_density)}});
      continue;
    }
    csv += std::to_string(s);
    for (Index k = 0; k < n; ++k) {
      csv += fmt::format(",{},{}", num(phi[k].real()), num(phi[k].imag()));
    }
    for (Index k = 0; k < n; ++k) csv += "," + num(t(k));
    csv += "," + num(log_density) + "\n";
  }
  if (config.format == Format::Struct) {
    const auto& p = params.decomposition().eigenvalues;
    nlohmann::json doc = {{"command", "sample-gibbs"},
                          {"epsilon", epsilon},
                          {"beta", params.beta()},
                          {"log_normalization", log_k},
                          {"eigenvalues", std::vector<double>(p.begin(), p.end())},
                          {"eigenbasis", io::matrix_json(params.decomposition().eigenvectors)},
                          {"seed", config.seed},
                          {"samples", rows}};
    out.text = dump(doc);
  } else {
    out.text = std::move(csv);
  }
  return out;
}

// ---------------------------------------------------------------- moments-check

/// `count` exponent vectors with n in {2, 3, 4} and a_k uniform in [0, 4).
inline std::vector<MomentExponents> random_exponents(std::size_t count, std::uint64_t seed) {
  SeededStream rng(derive_seed(seed, 0xE7));
  std::vector<MomentExponents> out;
  out.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    const auto n = 2 + static_cast<std::size_t>(rng.uniform() * 3.0);
    std::vector<double> a(n);
    for (auto& x : a) x = 4.0 * rng.uniform();
    out.emplace_back(std::move(a));
  }
  return out;
}

inline CommandOutput cmd_moments_check(const std::vector<MomentExponents>& cases,
                                       const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  CommandOutput out;
  nlohmann::json rows = nlohmann::json::array();
  std::string csv = "n,exponents,closed_form,recurrence,mc_estimate,standard_error,z\n";
  for (std::size_t r = 0; r < cases.size(); ++r) {
    const auto& a = cases[r];
    const double closed = closed_form_moment(a);
    const bool has_rec = a.dim() >= 2;
    const double rec = has_rec ? moment_recurrence_rhs(a) : 0.0;
    const SeededStream rng(derive_seed(config.seed, r));
    const ScalarEstimate mc = mc_moment(a, config.samples, rng, config.shards);
    const double z = mc.z_score(closed);
    if (config.format == Format::Struct) {
      rows.push_back({{"n", a.dim()},
                      {"exponents", std::vector<double>(a.values().begin(), a.values().end())},
                      {"closed_form", closed},
                      {"recurrence", has_rec ? nlohmann::json(rec) : nlohmann::json(nullptr)},
                      {"mc_estimate", mc.estimate},
                      {"standard_error", mc.standard_error},
                      {"z", io::real_json(z)}});
    } else {
      csv += fmt::format("{},{},{},{},{},{},{}\n", a.dim(), detail::join(a.values(), ";"),
                         num(closed), has_rec ? num(rec) : std::string("NA"), num(mc.estimate),
                         num(mc.standard_error), num(z));
    }
  }
  if (config.format == Format::Struct) {
    nlohmann::json doc = {{"command", "moments-check"},
                          {"samples", config.samples},
                          {"seed", config.seed},
                          {"shards", config.shards},
                          {"rows", rows}};
    out.text = dump(doc);
  } else {
    out.text = std::move(csv);
  }
  out.diagnostics.push_back("moments-check: " + detail::elapsed_since(start));
  return out;
}

// ---------------------------------------------------------------- torus-check

inline CommandOutput cmd_torus_check(const DensityOperator& rho, const RunConfig& config) {
  const auto dec = spectral_decompose(rho);
  const MatrixEstimate est = torus_mc(dec, config.samples, SeededStream(config.seed), config.shards);
  const auto& p = dec.eigenvalues;
  const double n_samples = static_cast<double>(est.samples);

  CommandOutput out;
  if (dec.degenerate()) {
    out.diagnostics.push_back("warning: degenerate spectrum; using the computed eigenbasis");
  }
  nlohmann::json rows = nlohmann::json::array();
  std::string csv = "i,j,target,estimate_re,estimate_im,standard_error,bound,pass\n";
  bool all_pass = true;
  for (Index i = 0; i < est.dim(); ++i) {
    for (Index j = 0; j < est.dim(); ++j) {
      const double target = i == j ? p(i) : 0.0;
      const double dev = std::abs(est.mean(i, j) - Complex(target, 0.0));
      const double bound = i == j ? 1e-14 : 3.0 * std::sqrt(p(i) * p(j) / n_samples);
      const bool pass = dev <= bound;
      all_pass = all_pass && pass;
      if (config.format == Format::Struct) {
        rows.push_back({{"i", i},
                        {"j", j},
                        {"target", target},
                        {"estimate", {est.mean(i, j).real(), est.mean(i, j).imag()}},
                        {"standard_error", est.standard_errors(i, j)},
                        {"bound", bound},
                        {"pass", pass}});
      } else {
        csv += fmt::format("{},{},{},{},{},{},{},{}\n", i, j, num(target),
                           num(est.mean(i, j).real()), num(est.mean(i, j).imag()),
                           num(est.standard_errors(i, j)), num(bound), pass ? "pass" : "fail");
      }
    }
  }
  if (config.format == Format::Struct) {
    nlohmann::json doc = {{"command", "torus-check"},
                          {"basis", "eigenbasis"},
                          {"eigenvalues", std::vector<double>(p.begin(), p.end())},
                          {"samples", est.samples},
                          {"seed", config.seed},
                          {"shards", config.shards},
                          {"entries", rows},
                          {"pass", all_pass}};
    out.text = dump(doc);
  } else {
    out.text = std::move(csv);
  }
  return out;
}

// ---------------------------------------------------------------- example

/// Weight exp(-beta D) of the real unit vector (cos angle, sin angle) for
/// rho = diag(p1, p2) on the real plane; zero where D is infinite.
inline double real_circle_weight(double p1, double p2, double beta, double angle) {
  const double t1 = std::cos(angle) * std::cos(angle);
  const double t2 = std::sin(angle) * std::sin(angle);
  if (t1 <= kSupportTolerance || t2 <= kSupportTolerance) return 0.0;
  const double d = p1 * std::log(p1 / t1) + p2 * std::log(p2 / t2);
  return std::exp(-beta * d);
}

/// Data for the three expansions of rho = diag(1/4, 3/4) on the real plane:
/// the classical two-point ensemble, the four-vector uniform ensemble, and a
/// seeded cloud of angles on the unit circle with Gibbs weights exp(-beta D).
inline CommandOutput cmd_example(double epsilon, const RunConfig& config) {
  check_epsilon(epsilon, /*allow_one=*/true);
  constexpr double p1 = 0.25;
  constexpr double p2 = 0.75;
  const double beta = 2.0 * (1.0 - epsilon) / epsilon;
  const auto uniform = discrete_real_ensemble(p1, p2);
  SeededStream rng(config.seed);

  struct Row {
    const char* panel;
    std::size_t index;
    double x, y, angle, weight;
  };
  std::vector<Row> rows;
  rows.push_back({"classical", 0, 1.0, 0.0, 0.0, p1});
  rows.push_back({"classical", 1, 0.0, 1.0, std::numbers::pi / 2.0, p2});
  for (std::size_t k = 0; k < uniform.vectors.size(); ++k) {
    const auto& v = uniform.vectors[k];
    rows.push_back({"uniform", k, v.x(), v.y(), std::atan2(v.y(), v.x()), 0.25});
  }
  for (std::uint64_t s = 0; s < config.samples; ++s) {
    const double angle = rng.phase();
    rows.push_back({"gibbs", static_cast<std::size_t>(s), std::cos(angle), std::sin(angle), angle,
                    real_circle_weight(p1, p2, beta, angle)});
  }

  CommandOutput out;
  if (config.format == Format::Struct) {
    nlohmann::json panels = nlohmann::json::object();
    for (const auto& r : rows) {
      panels[r.panel].push_back(
          {{"index", r.index}, {"x", r.x}, {"y", r.y}, {"angle", r.angle}, {"weight", r.weight}});
    }
    nlohmann::json doc = {{"command", "example"},
                          {"rho", io::matrix_json(diagonal_state((RealVector(2) << p1, p2).finished()).matrix())},
                          {"epsilon", epsilon},
                          {"beta", beta},
                          {"seed", config.seed},
                          {"uniform_average", io::real_matrix_json(uniform.average_projector)},
                          {"panels", panels}};
    out.text = dump(doc);
  } else {
    std::string csv = "panel,index,x,y,angle,weight\n";
    for (const auto& r : rows) {
      csv += fmt::format("{},{},{},{},{},{}\n", r.panel, r.index, num(r.x), num(r.y), num(r.angle),
                         num(r.weight));
    }
    out.text = std::move(csv);
  }
  return out;
}

}  // namespace gibbsrec::cli
