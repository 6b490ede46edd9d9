#pragma once

#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mkp/bounds.hpp"
#include "mkp/game.hpp"
#include "mkp/linalg.hpp"
#include "mkp/mub.hpp"
#include "mkp/search.hpp"

namespace mkp {

using json = nlohmann::json;

// Complex numbers travel as two-element [re, im] arrays everywhere.
inline json complex_to_json(const Complex& z) {
  return json::array({z.real(), z.imag()});
}

inline Complex complex_from_json(const json& j, const char* where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    std::ostringstream os;
    os << where << ": expected a complex number as [re, im]";
    throw std::invalid_argument(os.str());
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

inline json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

inline Vector vector_from_json(const json& j, const char* where) {
  if (!j.is_array() || j.empty()) {
    std::ostringstream os;
    os << where << ": expected a nonempty array of [re, im] pairs";
    throw std::invalid_argument(os.str());
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], where);
  return v;
}

// list of basis vectors; vector j is column j of the Basis matrix
inline json basis_to_json(const Basis& b) {
  json out = json::array();
  for (int j = 0; j < b.dim(); ++j) out.push_back(vector_to_json(b.column(j)));
  return out;
}

inline Basis basis_from_json(const json& j, const char* where, int label = 0) {
  if (!j.is_array() || j.empty()) {
    std::ostringstream os;
    os << where << ": expected an array of vectors";
    throw std::invalid_argument(os.str());
  }
  const int d = static_cast<int>(j.size());
  Matrix m(d, d);
  for (int col = 0; col < d; ++col) {
    Vector v = vector_from_json(j[static_cast<std::size_t>(col)], where);
    if (v.size() != d) {
      std::ostringstream os;
      os << where << ": vector " << col + 1 << " has dimension " << v.size()
         << ", expected " << d;
      throw std::invalid_argument(os.str());
    }
    m.col(col) = v;
  }
  return Basis(std::move(m), label);
}

inline json mub_to_json(const MubFamily& fam) {
  json bases = json::array();
  for (const Basis& b : fam.bases) bases.push_back(basis_to_json(b));
  return json{{"d", fam.d}, {"bases", std::move(bases)}};
}

inline MubFamily mub_from_json(const json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("bases"))
    throw std::invalid_argument("mub family: expected {\"d\":..., \"bases\":[...]}");
  MubFamily fam;
  fam.d = j.at("d").get<int>();
  const json& bases = j.at("bases");
  if (!bases.is_array() || static_cast<int>(bases.size()) != fam.d + 1)
    throw std::invalid_argument("mub family: expected d+1 bases");
  int mu = 0;
  for (const json& b : bases)
    fam.bases.push_back(basis_from_json(b, "mub family basis", mu++));
  return fam;
}

inline json vector_set_to_json(const VectorSet& vs) {
  json vectors = json::array();
  for (const Ket& k : vs.kets()) vectors.push_back(vector_to_json(k.vec()));
  return json{{"d", vs.dim()}, {"vectors", std::move(vectors)}};
}

inline VectorSet vector_set_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vectors"))
    throw std::invalid_argument("vector set: expected {\"d\":..., \"vectors\":[...]}");
  const json& vecs = j.at("vectors");
  if (!vecs.is_array() || vecs.empty())
    throw std::invalid_argument("vector set: need at least one vector");
  std::vector<Ket> kets;
  int index = 0;
  for (const json& v : vecs) {
    Vector vec = vector_from_json(v, "vector set");
    double norm = vec.norm();
    if (std::abs(norm - 1.0) > kUnitNormTol) {
      std::ostringstream os;
      os << "vector set: vector " << index + 1 << " has norm " << norm
         << ", expected 1";
      throw std::invalid_argument(os.str());
    }
    kets.emplace_back(std::move(vec));
    ++index;
  }
  VectorSet vs(std::move(kets));
  if (j.contains("d") && j.at("d").get<int>() != vs.dim())
    throw std::invalid_argument("vector set: declared d does not match the vectors");
  return vs;
}

// serialized guesses are 1-based j and k, mu stays 0-based
inline json decision_to_json(const DecisionTable& s) {
  json table = json::array();
  for (int mu = 0; mu <= s.d; ++mu) {
    json col = json::array();
    for (int k = 0; k < s.d; ++k) col.push_back(s(k, mu) + 1);
    table.push_back(std::move(col));
  }
  return json{{"d", s.d}, {"table", std::move(table)}};
}

inline DecisionTable decision_from_json(const json& j, int expected_d) {
  const json* table = nullptr;
  if (j.is_array()) {
    table = &j;
  } else if (j.is_object() && j.contains("table")) {
    table = &j.at("table");
  } else {
    throw std::invalid_argument("decision: expected an array of guess columns");
  }
  DecisionTable s;
  s.d = expected_d;
  if (static_cast<int>(table->size()) != expected_d + 1)
    throw std::invalid_argument("decision: expected d+1 columns (mu = 0..d)");
  for (const json& col : *table) {
    std::vector<int> guesses;
    if (!col.is_array() || static_cast<int>(col.size()) != expected_d)
      throw std::invalid_argument("decision: each column needs d entries");
    for (const json& g : col) {
      int v = g.get<int>();
      if (v < 1 || v > expected_d)
        throw std::invalid_argument("decision: guess out of range 1..d");
      guesses.push_back(v - 1);
    }
    s.guess.push_back(std::move(guesses));
  }
  return s;
}

inline json report_to_json(const GameReport& rep) {
  return json{{"total", rep.total},
              {"per_mu", rep.per_mu},
              {"decision", decision_to_json(rep.decision)}};
}

// A full strategy: input state, control basis, MUB family, and optionally
// an explicit decision table.
struct Strategy {
  int d;
  DensityOperator rho;
  Basis chi;
  MubFamily mubs;
  std::optional<DecisionTable> decision;
};

inline json strategy_to_json(const Strategy& s) {
  json rho;
  if (s.rho.witness()) {
    rho = json{{"pure", vector_to_json(s.rho.witness()->vec())}};
  } else {
    json rows = json::array();
    for (int r = 0; r < s.d; ++r) {
      json row = json::array();
      for (int c = 0; c < s.d; ++c)
        row.push_back(complex_to_json(s.rho.matrix()(r, c)));
      rows.push_back(std::move(row));
    }
    rho = json{{"matrix", std::move(rows)}};
  }
  json out{{"d", s.d}, {"rho", std::move(rho)}, {"chi", basis_to_json(s.chi)}};
  out["mub"] = "builtin";
  if (s.decision) out["decision"] = decision_to_json(*s.decision);
  return out;
}

inline Strategy strategy_from_json(const json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("rho") || !j.contains("chi"))
    throw std::invalid_argument(
        "strategy: expected {\"d\":..., \"rho\":..., \"chi\":..., \"mub\":...}");
  const int d = j.at("d").get<int>();
  if (d < 2) throw std::invalid_argument("strategy: need d >= 2");

  const json& jr = j.at("rho");
  std::optional<DensityOperator> rho;
  if (jr.is_object() && jr.contains("pure")) {
    Vector v = vector_from_json(jr.at("pure"), "strategy rho");
    double norm = v.norm();
    if (std::abs(norm - 1.0) > kUnitNormTol) {
      std::ostringstream os;
      os << "strategy rho: pure state norm deviates from 1 by "
         << std::abs(norm - 1.0);
      throw std::invalid_argument(os.str());
    }
    rho = DensityOperator::pure(Ket(std::move(v)));
  } else if (jr.is_object() && jr.contains("matrix")) {
    const json& rows = jr.at("matrix");
    if (!rows.is_array() || static_cast<int>(rows.size()) != d)
      throw std::invalid_argument("strategy rho: matrix needs d rows");
    Matrix m(d, d);
    for (int r = 0; r < d; ++r) {
      const json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != d)
        throw std::invalid_argument("strategy rho: matrix rows need d entries");
      for (int c = 0; c < d; ++c)
        m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)], "strategy rho");
    }
    rho = DensityOperator(std::move(m));  // validates Hermitian/trace/PSD
  } else {
    throw std::invalid_argument("strategy rho: expected {\"pure\":...} or {\"matrix\":...}");
  }

  Basis chi = basis_from_json(j.at("chi"), "strategy chi");
  if (chi.dim() != d)
    throw std::invalid_argument("strategy chi: dimension does not match d");
  double dev = chi.orthonormality_deviation();
  if (dev > kOrthonormalTol) {
    std::ostringstream os;
    os << "strategy chi: basis is not orthonormal (Gram deviation " << dev << ")";
    throw std::invalid_argument(os.str());
  }

  MubFamily mubs = (!j.contains("mub") || (j.at("mub").is_string() &&
                                           j.at("mub").get<std::string>() == "builtin"))
                       ? mub_family(d)
                       : mub_from_json(j.at("mub"));
  if (mubs.d != d)
    throw std::invalid_argument("strategy mub: dimension does not match d");

  std::optional<DecisionTable> decision;
  if (j.contains("decision")) decision = decision_from_json(j.at("decision"), d);

  return Strategy{d, std::move(*rho), std::move(chi), std::move(mubs),
                  std::move(decision)};
}

inline json certificate_to_json(const TheoremCertificate& c) {
  return json{{"d", c.d},
              {"p_value", c.p_value},
              {"intermediate", c.intermediate},
              {"bound", c.bound},
              {"per_k_norms", c.per_k_norms},
              {"slack_intermediate", c.slack_intermediate},
              {"slack_bound", c.slack_bound}};
}

inline json summary_to_json(const ScanSummary& s) {
  json out{{"d", s.d},
           {"trials", s.trials},
           {"master_seed", s.master_seed},
           {"measurement_distribution", "haar"},
           {"bound", s.bound},
           {"max_probability", s.max_probability},
           {"mean_probability", s.mean_probability},
           {"exceed_count", s.exceed_count}};
  if (s.theorem_check) out["theorem_check"] = *s.theorem_check;
  return out;
}

// header + one row per trial, LF endings, probabilities at 17 significant
// digits so rows round-trip the exact double
inline std::string scan_records_to_csv(const std::vector<ScanRecord>& records) {
  std::string out = "trial,seed,probability,exceeds\n";
  char buf[64];
  for (const ScanRecord& r : records) {
    std::snprintf(buf, sizeof buf, "%.17g", r.probability);
    out += std::to_string(r.trial);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += buf;
    out += ',';
    out += r.exceeds ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace mkp
