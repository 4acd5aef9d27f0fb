#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hv/errors.hpp"
#include "hv/quantum.hpp"

namespace hv::cli {

/// Malformed or inconsistent problem file.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// Overridable through the "tolerances" block of a problem file.
struct Tolerances {
  double hermitian = linalg::kHermitianTol;
  double cluster = linalg::kClusterTol;
  double snap = quantum::kSnapTol;
  double commute = linalg::kCommuteTol;
  double weight_floor = 1e-12;
  double roundtrip = 1e-8;
  double pushforward = 1e-10;
  double integral = 1e-9;
  double classical_bound = 1e-9;
  double homomorphism = 1e-8;
  double deviation_sigmas = 4.0;
};

struct Experiment {
  std::string command;
  nlohmann::json args;
};

/// Named operators, states, Borel sets and functions plus the experiments
/// that reference them. Every operator passed the Hermitian check on load
/// and every name referenced by an experiment resolves.
struct ProblemFile {
  std::size_t dimension = 0;
  Tolerances tolerances;
  std::map<std::string, linalg::HermitianOperator> operators;
  std::map<std::string, quantum::PureState> states;
  std::map<std::string, quantum::BorelSet> borel_sets;
  std::map<std::string, quantum::PiecewiseAffineFunction> functions;
  std::vector<Experiment> experiments;
  /// "sha256:<hex>" of the raw file bytes.
  std::string digest;

  const linalg::HermitianOperator& op(const std::string& name) const;
  const quantum::PureState& state(const std::string& name) const;
  const quantum::BorelSet& borel(const std::string& name) const;
  const quantum::PiecewiseAffineFunction& function(const std::string& name) const;
};

ProblemFile parse_problem(std::string_view text);
ProblemFile load_problem(const std::filesystem::path& path);

std::string sha256_hex(std::string_view bytes);

}  // namespace hv::cli
