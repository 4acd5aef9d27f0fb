#include "hv/cli/problem.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hv::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kCommands{"spectra", "prob", "quantile", "verify", "roundtrip", "chsh"};

// Keys of an experiment block that name an entry of a given table.
const std::map<std::string, std::string> kNameKeys{
    {"operator", "operators"}, {"state", "states"},    {"borel", "borel_sets"}, {"function", "functions"},
    {"E1", "operators"},       {"E2", "operators"},     {"F1", "operators"},     {"F2", "operators"}};

double as_real(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return quantum::kInf;
    if (s == "-inf") return -quantum::kInf;
  }
  throw LoadError(where + ": expected a number");
}

linalg::Complex as_complex(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw LoadError(where + ": expected a complex number [re, im]");
}

linalg::ComplexMatrix parse_matrix(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_array() || j.size() != n) throw LoadError(where + ": expected " + std::to_string(n) + " rows");
  linalg::ComplexMatrix m(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!j[r].is_array() || j[r].size() != n)
      throw LoadError(where + ": row " + std::to_string(r) + " must have " + std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = as_complex(j[r][c], where);
  }
  return m;
}

quantum::BorelSet parse_borel(const json& j, const std::string& where) {
  if (!j.is_array()) throw LoadError(where + ": Borel set must be a list of intervals");
  std::vector<quantum::Interval> parts;
  for (const auto& iv : j) {
    if (iv.contains("point")) {
      const double x = as_real(iv.at("point"), where);
      parts.push_back({x, x, true, true});
      continue;
    }
    quantum::Interval out;
    out.lo = iv.contains("lo") ? as_real(iv.at("lo"), where) : -quantum::kInf;
    out.hi = iv.contains("hi") ? as_real(iv.at("hi"), where) : quantum::kInf;
    out.lo_closed = iv.value("lo_closed", false);
    out.hi_closed = iv.value("hi_closed", false);
    parts.push_back(out);
  }
  return quantum::BorelSet(std::move(parts));
}

std::vector<double> real_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw LoadError(where + ": expected a list of numbers");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(as_real(x, where));
  return out;
}

quantum::PiecewiseAffineFunction parse_function(const json& j, const std::string& where) {
  if (j.contains("affine")) {
    const auto a = real_list(j.at("affine"), where);
    if (a.size() != 2) throw LoadError(where + ": affine needs [slope, intercept]");
    return quantum::PiecewiseAffineFunction::affine(a[0], a[1]);
  }
  if (j.contains("interpolate")) {
    const auto xs = real_list(j.at("interpolate").at("x"), where);
    const auto ys = real_list(j.at("interpolate").at("y"), where);
    return quantum::PiecewiseAffineFunction::interpolate(xs, ys);
  }
  std::vector<quantum::AffinePiece> pieces;
  for (const auto& p : j.at("pieces")) {
    const auto sp = real_list(p, where);
    if (sp.size() != 2) throw LoadError(where + ": each piece is [slope, intercept]");
    pieces.push_back({sp[0], sp[1]});
  }
  return {real_list(j.value("breakpoints", json::array()), where), std::move(pieces),
          real_list(j.value("values", json::array()), where)};
}

Tolerances parse_tolerances(const json& j) {
  Tolerances t;
  const std::map<std::string, double*> slots{{"hermitian", &t.hermitian},
                                             {"cluster", &t.cluster},
                                             {"snap", &t.snap},
                                             {"commute", &t.commute},
                                             {"weight_floor", &t.weight_floor},
                                             {"roundtrip", &t.roundtrip},
                                             {"pushforward", &t.pushforward},
                                             {"integral", &t.integral},
                                             {"classical_bound", &t.classical_bound},
                                             {"homomorphism", &t.homomorphism},
                                             {"deviation_sigmas", &t.deviation_sigmas}};
  for (const auto& [key, value] : j.items()) {
    const auto it = slots.find(key);
    if (it == slots.end()) throw LoadError("tolerances: unknown key '" + key + "'");
    const double v = as_real(value, "tolerances." + key);
    if (!(v > 0)) throw LoadError("tolerances." + key + " must be positive");
    *it->second = v;
  }
  return t;
}

template <typename Map>
const typename Map::mapped_type& lookup(const Map& m, const std::string& name, const char* table) {
  const auto it = m.find(name);
  if (it == m.end()) throw LoadError(std::string("unknown ") + table + " '" + name + "'");
  return it->second;
}

}  // namespace

const linalg::HermitianOperator& ProblemFile::op(const std::string& name) const {
  return lookup(operators, name, "operator");
}
const quantum::PureState& ProblemFile::state(const std::string& name) const { return lookup(states, name, "state"); }
const quantum::BorelSet& ProblemFile::borel(const std::string& name) const {
  return lookup(borel_sets, name, "Borel set");
}
const quantum::PiecewiseAffineFunction& ProblemFile::function(const std::string& name) const {
  return lookup(functions, name, "function");
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xf];
  }
  return out;
}

ProblemFile parse_problem(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw LoadError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw LoadError("problem file must be a JSON object");

  ProblemFile pf;
  pf.digest = "sha256:" + sha256_hex(text);
  try {
    const auto dim = root.at("dimension").get<long long>();
    if (dim < 1) throw LoadError("dimension must be positive");
    pf.dimension = static_cast<std::size_t>(dim);
    if (root.contains("tolerances")) pf.tolerances = parse_tolerances(root.at("tolerances"));
    auto table = [&](const char* key) -> const json& {
      static const json kEmpty = json::object();
      if (!root.contains(key)) return kEmpty;
      if (!root.at(key).is_object()) throw LoadError(std::string(key) + " must be an object of named entries");
      return root.at(key);
    };

    for (const auto& [name, m] : table("operators").items()) {
      const std::string where = "operators." + name;
      try {
        pf.operators.emplace(name, linalg::HermitianOperator(parse_matrix(m, pf.dimension, where),
                                                             pf.tolerances.hermitian));
      } catch (const NotHermitian& e) {
        throw LoadError(where + ": " + e.what());
      }
    }
    for (const auto& [name, v] : table("states").items()) {
      const std::string where = "states." + name;
      if (!v.is_array() || v.size() != pf.dimension)
        throw LoadError(where + ": expected " + std::to_string(pf.dimension) + " components");
      linalg::ComplexVector h;
      for (const auto& z : v) h.push_back(as_complex(z, where));
      try {
        pf.states.emplace(name, quantum::PureState(std::move(h)));
      } catch (const OutOfDomain& e) {
        throw LoadError(where + ": " + e.what());
      }
    }
    for (const auto& [name, b] : table("borel_sets").items())
      pf.borel_sets.emplace(name, parse_borel(b, "borel_sets." + name));
    for (const auto& [name, f] : table("functions").items()) {
      try {
        pf.functions.emplace(name, parse_function(f, "functions." + name));
      } catch (const OutOfDomain& e) {
        throw LoadError("functions." + name + ": " + e.what());
      }
    }

    const json experiments = root.value("experiments", json::array());
    for (const auto& ex : experiments) {
      const auto cmd = ex.at("command").get<std::string>();
      if (!kCommands.count(cmd)) throw LoadError("unknown experiment command '" + cmd + "'");
      for (const auto& [key, table] : kNameKeys) {
        if (!ex.contains(key)) continue;
        const auto name = ex.at(key).get<std::string>();
        if (table == "operators") pf.op(name);
        if (table == "states") pf.state(name);
        if (table == "borel_sets") pf.borel(name);
        if (table == "functions") pf.function(name);
      }
      pf.experiments.push_back({cmd, ex});
    }
  } catch (const json::exception& e) {
    throw LoadError(std::string("malformed problem file: ") + e.what());
  }
  return pf;
}

ProblemFile load_problem(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

}  // namespace hv::cli
