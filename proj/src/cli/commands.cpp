#include "hv/cli/commands.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

#include "hv/bell.hpp"
#include "hv/hidden.hpp"

namespace hv::cli {

using nlohmann::json;

namespace {

std::string name_arg(const json& args, const char* key) {
  if (!args.contains(key) || !args.at(key).is_string())
    throw LoadError(std::string("experiment is missing '") + key + "'");
  return args.at(key).get<std::string>();
}

std::optional<std::uint64_t> uint_arg(const json& args, const char* key) {
  if (!args.contains(key)) return std::nullopt;
  const auto& v = args.at(key);
  if (!v.is_number_unsigned())
    throw LoadError(std::string("experiment field '") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

linalg::EighOptions eigh_options(const Tolerances& tol) {
  linalg::EighOptions o;
  o.cluster_tol = tol.cluster;
  return o;
}

std::shared_ptr<const linalg::SpectralDecomposition> decompose(const ProblemFile& pf, const std::string& name) {
  return std::make_shared<const linalg::SpectralDecomposition>(linalg::eigh(pf.op(name), eigh_options(pf.tolerances)));
}

hidden::ClassicalObservable observable(const ProblemFile& pf, const json& args) {
  std::optional<quantum::PiecewiseAffineFunction> g;
  if (args.contains("function")) g = pf.function(name_arg(args, "function"));
  return hidden::ClassicalObservable(decompose(pf, name_arg(args, "operator")), g);
}

// Names of the experiment's inputs, echoed into its report section.
json echo(const json& args, std::initializer_list<const char*> keys) {
  json out = json::object();
  for (const char* k : keys)
    if (args.contains(k)) out[k] = args.at(k);
  return out;
}

linalg::Projector projector_arg(const ProblemFile& pf, const json& args, const char* key) {
  const auto name = name_arg(args, key);
  try {
    return linalg::Projector(pf.op(name).matrix());
  } catch (const NotProjector& e) {
    throw LoadError("operator '" + name + "' used as " + key + ": " + e.what());
  }
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), r.ptr);
}

json cmd_spectra(const ProblemFile& pf, const json& args) {
  const auto& op = pf.op(name_arg(args, "operator"));
  const auto dec = linalg::eigh(op, eigh_options(pf.tolerances));
  json traces = json::array();
  for (const auto& p : dec.projectors) traces.push_back(p.matrix().trace().real());
  const double residual = linalg::max_abs_diff(dec.reconstruct(), op.matrix());

  json out = echo(args, {"operator"});
  out["dimension"] = dec.dim;
  out["eigenvalues"] = dec.eigenvalues;
  out["multiplicities"] = dec.multiplicities();
  out["projector_traces"] = traces;
  out["reconstruction_residual"] = residual;
  out["passed"] = residual <= pf.tolerances.roundtrip;
  return out;
}

json cmd_prob(const ProblemFile& pf, const json& args) {
  const auto dec = decompose(pf, name_arg(args, "operator"));
  const auto& h = pf.state(name_arg(args, "state"));
  const auto& b = pf.borel(name_arg(args, "borel"));
  const double snap = pf.tolerances.snap;

  const double p = quantum::prob(*dec, h, b, snap);
  const double pc = quantum::prob(*dec, h, b.complement(), snap);
  // The same number read off the hidden fiber.
  const double mu = hidden::fiber_measure(hidden::proposition_from(dec, b), h, pf.tolerances.weight_floor);

  json out = echo(args, {"operator", "state", "borel"});
  out["probability"] = p;
  out["complement_probability"] = pc;
  out["fiber_measure"] = mu;
  out["expectation"] = quantum::expectation(*dec, h);
  out["additivity_residual"] = std::abs(p + pc - 1.0);
  out["fiber_residual"] = std::abs(mu - p);
  out["passed"] = std::abs(p + pc - 1.0) <= pf.tolerances.integral && std::abs(mu - p) <= pf.tolerances.integral;
  return out;
}

json cmd_quantile(const ProblemFile& pf, const json& args) {
  const auto obs = observable(pf, args);
  const auto& h = pf.state(name_arg(args, "state"));
  const auto& tol = pf.tolerances;
  const auto law = obs.law(h, tol.weight_floor);

  json atoms = json::array();
  double pushforward = 0.0;
  for (std::size_t k = 0; k < law.atoms(); ++k) {
    const double v = law.values()[k];
    // pi(g(T), [h], {v}) computed on the quantum side.
    const auto pre = obs.post() ? quantum::borel_preimage(*obs.post(), quantum::BorelSet::point(v))
                                : quantum::BorelSet::point(v);
    const double predicted = quantum::prob(obs.backing(), h, pre, tol.snap);
    pushforward = std::max(pushforward, std::abs(law.weight(k) - predicted));
    atoms.push_back({{"value", v},
                     {"cut_lo", law.cuts()[k]},
                     {"cut_hi", law.cuts()[k + 1]},
                     {"weight", law.weight(k)},
                     {"predicted", predicted}});
  }

  const auto id = quantum::PiecewiseAffineFunction::identity();
  const double fiber_mean = hidden::integrate_fiber(id, obs, h);
  const double quantum_mean =
      obs.post() ? quantum::quadratic_form(quantum::functional_calculus(obs.backing(), *obs.post()).matrix(), h)
                 : quantum::expectation(obs.backing(), h);
  const double mean_residual = std::abs(fiber_mean - quantum_mean);

  json out = echo(args, {"operator", "state", "function"});
  out["atoms"] = atoms;
  out["pushforward_residual"] = pushforward;
  out["fiber_expectation"] = fiber_mean;
  out["quantum_expectation"] = quantum_mean;
  out["expectation_residual"] = mean_residual;
  out["passed"] = pushforward <= tol.pushforward && mean_residual <= tol.integral;
  return out;
}

json cmd_verify(const ProblemFile& pf, const json& args, const RunOptions& opts) {
  const auto obs = observable(pf, args);
  const auto state_name = name_arg(args, "state");
  const auto& h = pf.state(state_name);

  std::uint64_t seed = 0;
  if (opts.seed) {
    seed = *opts.seed;
  } else if (auto s = uint_arg(args, "seed")) {
    seed = *s;
  } else if (opts.env_seed) {
    seed = *opts.env_seed;
  }
  const std::uint64_t n = opts.samples ? *opts.samples : uint_arg(args, "samples").value_or(kDefaultSamples);
  if (n < 1) throw LoadError("verify needs at least one sample");

  const auto rep = hidden::sample(obs, h, n, seed, name_arg(args, "operator"), opts.workers);
  const double sigmas = pf.tolerances.deviation_sigmas;
  json budget = json::array();
  bool ok = true;
  for (std::size_t k = 0; k < rep.outcomes.size(); ++k) {
    const double p = rep.predicted[k];
    const double b = sigmas * std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
    budget.push_back(b);
    // Budget collapses to 0 for p in {0, 1}; rounding noise in p is allowed.
    ok = ok && std::abs(rep.empirical[k] - p) <= b + pf.tolerances.pushforward;
  }

  json out = echo(args, {"operator", "state", "function"});
  out["seed"] = seed;
  out["samples"] = n;
  out["outcomes"] = rep.outcomes;
  out["counts"] = rep.counts;
  out["empirical"] = rep.empirical;
  out["predicted"] = rep.predicted;
  out["budget"] = budget;
  out["max_abs_deviation"] = rep.max_abs_deviation;
  out["chi_square"] = rep.chi_square;
  out["passed"] = ok;
  return out;
}

json cmd_roundtrip(const ProblemFile& pf, const json& args) {
  const auto dec = decompose(pf, name_arg(args, "operator"));
  const auto& t = pf.op(name_arg(args, "operator"));
  const hidden::ClassicalObservable f(dec);
  const double tol = pf.tolerances.roundtrip;

  const double r1 = linalg::max_abs_diff(hidden::tau(f).matrix(), t.matrix());
  json out = echo(args, {"operator", "function"});
  out["tau_residual"] = r1;
  bool ok = r1 <= tol;
  if (args.contains("function")) {
    const auto& g = pf.function(name_arg(args, "function"));
    const double r2 = linalg::max_abs_diff(hidden::tau(hidden::compose(g, f)).matrix(),
                                           quantum::functional_calculus(*dec, g).matrix());
    out["composition_residual"] = r2;
    ok = ok && r2 <= tol;
  }
  out["passed"] = ok;
  return out;
}

json cmd_chsh(const ProblemFile& pf, const json& args) {
  const std::array<const char*, 4> keys{"E1", "E2", "F1", "F2"};
  std::array<linalg::Projector, 4> p{projector_arg(pf, args, keys[0]), projector_arg(pf, args, keys[1]),
                                     projector_arg(pf, args, keys[2]), projector_arg(pf, args, keys[3])};
  const auto& h = pf.state(name_arg(args, "state"));
  const auto& tol = pf.tolerances;

  const auto r = bell::chsh(bell::ChshConfig(p[0], p[1], p[2], p[3], h));
  const bool bound = r.value <= 2.0 + tol.classical_bound;

  json out = echo(args, {"E1", "E2", "F1", "F2", "state"});
  out["correlations"] = {{r.correlations[0][0], r.correlations[0][1]}, {r.correlations[1][0], r.correlations[1][1]}};
  out["value"] = r.value;
  out["classical_bound_respected"] = bound;
  bool ok = bound;

  // Commutation against the boolean structure, pair by pair.
  json pairs = json::array();
  bool consistent = true;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const auto& e = p[static_cast<std::size_t>(i)];
      const auto& f = p[static_cast<std::size_t>(2 + j)];
      json pr{{"pair", std::string(keys[static_cast<std::size_t>(i)]) + keys[static_cast<std::size_t>(2 + j)]},
              {"commutes", linalg::commutes(e, f, tol.commute)}};
      try {
        const auto [a, b] = bell::joint_propositions(e, f);
        const auto hc = bell::check_boolean_homomorphism(a, b, tol.homomorphism);
        pr["joint_propositions"] = true;
        pr["homomorphism"] = hc.homomorphism;
        pr["homomorphism_residual"] = hc.max_residual;
        pr["consistent"] = hc.homomorphism && hc.commutes;
      } catch (const NotCommuting&) {
        pr["joint_propositions"] = false;
        pr["consistent"] = !pr["commutes"].get<bool>();
      }
      consistent = consistent && pr["consistent"].get<bool>();
      pairs.push_back(std::move(pr));
    }
  }
  out["pairs"] = pairs;
  out["commutation_consistent"] = consistent;
  ok = ok && consistent;

  json joint;
  try {
    const auto q = bell::joint_quadruple(p[0], p[1], p[2], p[3]);
    const auto fs = bell::classical_chsh_functions(q, h);
    const auto& cuts = fs[0][0].cuts;
    bool pointwise = true;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      if (!(cuts[k + 1] > cuts[k])) continue;
      const double s = std::abs(fs[0][0].values[k] - fs[0][1].values[k]) +
                       std::abs(fs[1][0].values[k] + fs[1][1].values[k]);
      pointwise = pointwise && s == 2.0;
    }
    double corr_err = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        corr_err = std::max(corr_err, std::abs(fs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].integral() -
                                               r.correlations[i][j]));
    const double integrated =
        std::abs(fs[0][0].integral() - fs[0][1].integral()) + std::abs(fs[1][0].integral() + fs[1][1].integral());
    joint = {{"admitted", true},
             {"fiber_cells", cuts.size() - 1},
             {"pointwise_identity", pointwise},
             {"integrated_value", integrated},
             {"correlation_residual", corr_err}};
    ok = ok && pointwise && integrated <= 2.0 + tol.classical_bound && corr_err <= tol.integral;
  } catch (const NotCommuting& e) {
    joint = {{"admitted", false}, {"reason", e.what()}};
  }
  out["joint_representation"] = joint;
  out["passed"] = ok;
  return out;
}

json run_command(const ProblemFile& pf, const std::string& command, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  json results = json::array();
  bool passed = true;
  std::size_t index = 0;
  for (const auto& ex : pf.experiments) {
    ++index;
    if (ex.command != command) continue;
    json section;
    if (command == "spectra") section = cmd_spectra(pf, ex.args);
    else if (command == "prob") section = cmd_prob(pf, ex.args);
    else if (command == "quantile") section = cmd_quantile(pf, ex.args);
    else if (command == "verify") section = cmd_verify(pf, ex.args, opts);
    else if (command == "roundtrip") section = cmd_roundtrip(pf, ex.args);
    else if (command == "chsh") section = cmd_chsh(pf, ex.args);
    else throw LoadError("unknown command '" + command + "'");
    section["experiment"] = index - 1;
    passed = passed && section["passed"].get<bool>();
    results.push_back(std::move(section));
  }
  if (results.empty()) throw LoadError("no '" + command + "' experiment in the problem file");

  const auto& t = pf.tolerances;
  json report{{"tool", "hv"},
              {"version", kToolVersion},
              {"command", command},
              {"input_digest", pf.digest},
              {"tolerances",
               {{"hermitian", t.hermitian},
                {"cluster", t.cluster},
                {"snap", t.snap},
                {"commute", t.commute},
                {"weight_floor", t.weight_floor},
                {"roundtrip", t.roundtrip},
                {"pushforward", t.pushforward},
                {"integral", t.integral},
                {"classical_bound", t.classical_bound},
                {"homomorphism", t.homomorphism},
                {"deviation_sigmas", t.deviation_sigmas}}},
              {"results", results},
              {"passed", passed}};
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
  report["timing"] = {{"wall_seconds", wall.count()}};
  return report;
}

json payload(const json& report) {
  json out = report;
  out.erase("timing");
  return out;
}

std::string to_csv(const json& report) {
  const auto command = report.at("command").get<std::string>();
  std::ostringstream os;
  auto num = [](const json& v) { return format_double(v.get<double>()); };
  if (command == "spectra") {
    os << "experiment,operator,eigenvalue,multiplicity,projector_trace\n";
    for (const auto& r : report.at("results"))
      for (std::size_t k = 0; k < r.at("eigenvalues").size(); ++k)
        os << r.at("experiment").get<std::size_t>() << ',' << r.at("operator").get<std::string>() << ','
           << num(r.at("eigenvalues")[k]) << ',' << r.at("multiplicities")[k].get<std::size_t>() << ','
           << num(r.at("projector_traces")[k]) << '\n';
  } else if (command == "quantile") {
    os << "experiment,operator,state,value,cut_lo,cut_hi,weight,predicted\n";
    for (const auto& r : report.at("results"))
      for (const auto& a : r.at("atoms"))
        os << r.at("experiment").get<std::size_t>() << ',' << r.at("operator").get<std::string>() << ','
           << r.at("state").get<std::string>() << ',' << num(a.at("value")) << ',' << num(a.at("cut_lo")) << ','
           << num(a.at("cut_hi")) << ',' << num(a.at("weight")) << ',' << num(a.at("predicted")) << '\n';
  } else if (command == "verify") {
    os << "experiment,operator,state,seed,samples,outcome,count,empirical,predicted,budget\n";
    for (const auto& r : report.at("results"))
      for (std::size_t k = 0; k < r.at("outcomes").size(); ++k)
        os << r.at("experiment").get<std::size_t>() << ',' << r.at("operator").get<std::string>() << ','
           << r.at("state").get<std::string>() << ',' << r.at("seed").get<std::uint64_t>() << ','
           << r.at("samples").get<std::uint64_t>() << ',' << num(r.at("outcomes")[k]) << ','
           << r.at("counts")[k].get<std::uint64_t>() << ',' << num(r.at("empirical")[k]) << ','
           << num(r.at("predicted")[k]) << ',' << num(r.at("budget")[k]) << '\n';
  } else {
    throw LoadError("csv output is only available for spectra, quantile and verify");
  }
  return os.str();
}

}  // namespace hv::cli
