// JSON serialization of jobs and stage outputs.
//
// Every stage writes an envelope {"schema_version", "kind", "job", ...} and
// every stage accepts any envelope that carries the fields it needs, so the
// output of one subcommand can be fed unchanged into the next.
#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qdes/construct.hpp"
#include "qdes/group.hpp"
#include "qdes/orbits.hpp"
#include "qdes/params.hpp"
#include "qdes/refine.hpp"
#include "qdes/tactical.hpp"

namespace qdes::io {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

/// A search job: design parameters plus the generator matrices of the
/// prescribed group, as read from an input file.
struct JobSpec {
  int v = 0;
  int k = 0;
  std::int64_t lambda2 = 0;
  int q = 0;
  std::vector<Mat> generators;
  bool full_length_orbits = false;

  FieldSpec field() const { return FieldSpec(q, v); }
};

namespace detail {

inline const json& require(const json& j, const char* key,
                           const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw InputError("missing field '" + std::string(key) + "' in " + where);
  return *it;
}

inline std::int64_t require_int(const json& j, const char* key,
                                const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number_integer())
    throw InputError("field '" + std::string(key) + "' in " + where +
                     " must be an integer");
  return v.get<std::int64_t>();
}

}  // namespace detail

inline json vec_to_json(const Vec& v) {
  json a = json::array();
  for (coord_t c : v) a.push_back(static_cast<int>(c));
  return a;
}

inline json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows; ++i) rows.push_back(vec_to_json(m.row(i)));
  return rows;
}

inline json subspace_to_json(const Subspace& s) {
  json rows = json::array();
  for (int i = 0; i < s.dim; ++i) rows.push_back(vec_to_json(s.row(i)));
  return rows;
}

inline Vec vec_from_json(const json& j, int v, int q, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != v)
    throw InputError("expected a length-" + std::to_string(v) + " vector in " +
                     where);
  Vec out(v);
  for (int i = 0; i < v; ++i) {
    if (!j[i].is_number_integer())
      throw InputError("non-integer vector entry in " + where);
    std::int64_t e = j[i].get<std::int64_t>();
    if (e < 0 || e >= q)
      throw InputError("vector entry out of field range in " + where);
    out[i] = static_cast<coord_t>(e);
  }
  return out;
}

inline Mat mat_from_json(const json& j, int v, int q, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != v)
    throw InputError("expected a " + std::to_string(v) + "x" +
                     std::to_string(v) + " matrix in " + where);
  Mat m(v, v);
  for (int i = 0; i < v; ++i) {
    Vec row = vec_from_json(j[i], v, q, where + ", row " + std::to_string(i + 1));
    for (int c = 0; c < v; ++c) m.at(i, c) = row[c];
  }
  return m;
}

inline Subspace subspace_from_json(const json& j, const FieldSpec& f,
                                   const std::string& where) {
  if (!j.is_array()) throw InputError("expected a basis array in " + where);
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < j.size(); ++i)
    rows.push_back(vec_from_json(j[i], f.v, f.q,
                                 where + ", basis row " + std::to_string(i + 1)));
  Subspace s = rref(f, rows);
  if (s.dim != static_cast<int>(rows.size()))
    throw InputError("basis rows are linearly dependent in " + where);
  return s;
}

inline JobSpec job_from_json(const json& root) {
  const json& j = root.contains("job") ? root.at("job") : root;
  const json& design = detail::require(j, "design", "job");
  JobSpec job;
  job.q = static_cast<int>(detail::require_int(design, "q", "design"));
  job.v = static_cast<int>(detail::require_int(design, "v", "design"));
  job.k = static_cast<int>(detail::require_int(design, "k", "design"));
  job.lambda2 = detail::require_int(design, "lambda2", "design");
  (void)job.field();  // validates q prime and v >= 1 up front

  const json& gens = detail::require(j, "generators", "job");
  if (!gens.is_array()) throw InputError("'generators' must be an array");
  for (std::size_t i = 0; i < gens.size(); ++i)
    job.generators.push_back(mat_from_json(
        gens[i], job.v, job.q, "generator " + std::to_string(i + 1)));

  if (j.contains("options")) {
    const json& opt = j.at("options");
    if (opt.contains("full_length_orbits"))
      job.full_length_orbits = opt.at("full_length_orbits").get<bool>();
  }
  return job;
}

inline json job_to_json(const JobSpec& job) {
  json design{{"q", job.q}, {"v", job.v}, {"k", job.k},
              {"lambda2", job.lambda2}};
  json gens = json::array();
  for (const auto& g : job.generators) gens.push_back(mat_to_json(g));
  json j{{"design", design}, {"generators", gens}};
  if (job.full_length_orbits)
    j["options"] = json{{"full_length_orbits", true}};
  return j;
}

inline json envelope(const std::string& kind, const JobSpec& job) {
  return json{{"schema_version", kSchemaVersion},
              {"kind", kind},
              {"job", job_to_json(job)}};
}

inline json params_to_json(const DesignParams& p) {
  return json{{"lambda1", p.lambda1},
              {"lambda2", p.lambda2},
              {"b", p.b},
              {"phi", p.phi},
              {"block_point_count", p.block_point_count()}};
}

inline json matrix_to_json(const TacticalMatrix& m) {
  json rho = json::array(), kappa = json::array();
  for (int i = 0; i < m.m(); ++i) {
    json r = json::array(), ka = json::array();
    for (int j = 0; j < m.n(); ++j) {
      r.push_back(m.rho_at(i, j));
      ka.push_back(m.kappa_at(i, j));
    }
    rho.push_back(std::move(r));
    kappa.push_back(std::move(ka));
  }
  return json{{"sizes", m.sizes},
              {"lengths", m.lengths},
              {"rho", rho},
              {"kappa", kappa}};
}

inline TacticalMatrix matrix_from_json(const json& j, const std::string& where) {
  TacticalMatrix m;
  for (const auto& s : detail::require(j, "sizes", where))
    m.sizes.push_back(s.get<std::int64_t>());
  for (const auto& s : detail::require(j, "lengths", where))
    m.lengths.push_back(s.get<std::int64_t>());
  const json& rho = detail::require(j, "rho", where);
  const json& kappa = detail::require(j, "kappa", where);
  if (rho.size() != m.sizes.size() || kappa.size() != m.sizes.size())
    throw InputError("matrix row count mismatch in " + where);
  for (const auto& row : rho) {
    if (row.size() != m.lengths.size())
      throw InputError("matrix column count mismatch in " + where);
    for (const auto& e : row) m.rho.push_back(e.get<std::int64_t>());
  }
  for (const auto& row : kappa)
    for (const auto& e : row) m.kappa.push_back(e.get<std::int64_t>());
  return m;
}

/// Third-point table as sparse (l, r, s, count) quadruples, 1-based indices,
/// zeros omitted.
inline json table_to_json(const ThirdPointTable& t) {
  json entries = json::array();
  for (int l = 0; l < t.m; ++l)
    for (int r = 0; r < t.m; ++r)
      for (int s = 0; s < t.m; ++s)
        if (t.at(l, r, s) != 0)
          entries.push_back(json::array({l + 1, r + 1, s + 1, t.at(l, r, s)}));
  return json{{"classes", t.m}, {"entries", entries}};
}

inline json design_to_json(const DesignInstance& d) {
  json blocks = json::array();
  for (const auto& b : d.blocks) blocks.push_back(subspace_to_json(b));
  return json{{"selected_orbits", d.selected_orbits}, {"blocks", blocks}};
}

inline std::vector<Subspace> blocks_from_json(const json& j, const FieldSpec& f,
                                              const std::string& where) {
  std::vector<Subspace> blocks;
  for (std::size_t i = 0; i < j.size(); ++i)
    blocks.push_back(subspace_from_json(
        j[i], f, where + ", block " + std::to_string(i + 1)));
  return blocks;
}

inline json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
}

inline void write_output(const json& j, const std::optional<std::string>& path) {
  if (path) {
    std::ofstream out(*path);
    if (!out) throw InputError("cannot open output file: " + *path);
    out << j.dump(2) << '\n';
  } else {
    std::ostringstream ss;
    ss << j.dump(2) << '\n';
    std::fputs(ss.str().c_str(), stdout);
  }
}

}  // namespace qdes::io
