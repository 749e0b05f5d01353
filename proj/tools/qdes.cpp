// qdes: existence tests and construction for 2-(v,k,lambda2;q) designs over
// finite fields with a prescribed automorphism group.
//
// Pipeline stages, each also available as its own subcommand:
//   params -> orbits -> sigma -> enumerate -> filter -> construct -> verify
// Every stage writes JSON that downstream stages accept unchanged.
// Exit codes: 0 success, 1 inadmissible parameters or empty result,
// 2 malformed input.
#include <atomic>
#include <cstdio>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "qdes/construct.hpp"
#include "qdes/io.hpp"
#include "qdes/orbits.hpp"
#include "qdes/refine.hpp"
#include "qdes/tactical.hpp"

namespace {

using namespace qdes;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNoResult = 1;
constexpr int kExitInputError = 2;

struct Options {
  std::string input;
  std::optional<std::string> output;
  int jobs = 1;
  std::int64_t limit = 1;
  bool full_length_orbits = false;
  bool verbose = false;
};

void info(const Options& opt, const std::string& msg) {
  if (opt.verbose) std::fprintf(stderr, "qdes: %s\n", msg.c_str());
}

// Lazily computed shared state across stages.
struct Stage {
  Options opt;
  io::JobSpec job;

  Stage(const Options& o, const json& root)
      : opt(o), job(io::job_from_json(root)) {
    if (o.full_length_orbits) job.full_length_orbits = true;
  }

  DesignParams params() {
    if (!params_) {
      params_ = derive_params(job.v, job.k, job.lambda2, job.q);
      info(opt, "lambda1 = " + std::to_string(params_->lambda1) +
                    ", b = " + std::to_string(params_->b) +
                    ", phi = " + std::to_string(params_->phi));
    }
    return *params_;
  }

  const MatrixGroup& group() {
    if (!group_) {
      group_ = close_group(job.field(), job.generators);
      info(opt, "group order " + std::to_string(group_->order()));
    }
    return *group_;
  }

  const PointOrbitPartition& points() {
    if (!points_) {
      points_ = point_orbits(group());
      info(opt, std::to_string(points_->count()) + " point classes");
    }
    return *points_;
  }

  const ThirdPointTable& table() {
    if (!table_) table_ = third_point_table(points());
    return *table_;
  }

  const KramerMesnerSystem& km() {
    if (!km_) {
      km_ = build_km_system(group(), params());
      info(opt, std::to_string(km_->blocks.count()) + " block orbits, " +
                    std::to_string(km_->two_spaces.count()) +
                    " 2-space orbits");
    }
    return *km_;
  }

 private:
  std::optional<DesignParams> params_;
  std::optional<MatrixGroup> group_;
  std::optional<PointOrbitPartition> points_;
  std::optional<ThirdPointTable> table_;
  std::optional<KramerMesnerSystem> km_;
};

json orbits_payload(Stage& st) {
  const auto& pts = st.points();
  json point_classes = json::array();
  for (int i = 0; i < pts.count(); ++i) {
    json members = json::array();
    for (int id : pts.orbits[i])
      members.push_back(io::vec_to_json(pts.points[id]));
    point_classes.push_back(json{{"size", pts.size_of(i)},
                                 {"representative",
                                  io::vec_to_json(pts.representative(i))},
                                 {"members", members}});
  }
  const auto& km = st.km();
  json block_classes = json::array();
  for (int k = 0; k < km.blocks.count(); ++k)
    block_classes.push_back(
        json{{"length", km.blocks.length_of(k)},
             {"representative",
              io::subspace_to_json(km.blocks.representative(k))}});
  return json{{"point_classes", point_classes},
              {"block_classes", block_classes},
              {"group_order", st.group().order()}};
}

// Profiles for the standalone enumerate subcommand: arithmetic candidates
// restricted by the flags.
std::vector<BlockOrbitProfile> enumerate_profiles(Stage& st) {
  ProfileOptions po;
  po.full_length_only = st.job.full_length_orbits;
  return candidate_profiles(st.params(), st.group().order(), po);
}

struct EnumerateResult {
  std::vector<BlockOrbitProfile> profiles;
  std::vector<TacticalMatrix> matrices;
};

EnumerateResult run_enumeration(Stage& st,
                                const std::vector<BlockOrbitProfile>& profiles) {
  EnumerateResult out;
  out.profiles = profiles;
  for (const auto& profile : profiles) {
    SearchStats stats;
    auto mats = enumerate_rho(st.params(), st.points().sizes(), profile,
                              st.opt.jobs, &stats);
    info(st.opt, "profile of " + std::to_string(profile.n()) + " classes: " +
                     std::to_string(mats.size()) + " matrices, " +
                     std::to_string(stats.nodes) + " nodes");
    for (auto& m : mats) out.matrices.push_back(std::move(m));
  }
  return out;
}

json matrices_payload(const EnumerateResult& r) {
  json profiles = json::array();
  for (const auto& p : r.profiles) profiles.push_back(p.lengths);
  json mats = json::array();
  for (const auto& m : r.matrices) mats.push_back(io::matrix_to_json(m));
  return json{{"profiles_considered", profiles}, {"matrices", mats}};
}

std::vector<TacticalMatrix> matrices_from_input(const json& root) {
  std::vector<TacticalMatrix> out;
  int index = 0;
  if (root.contains("accepted")) {
    for (const auto& j : root.at("accepted"))
      out.push_back(
          io::matrix_from_json(j, "matrix " + std::to_string(++index)));
  } else if (root.contains("matrices")) {
    for (const auto& j : root.at("matrices"))
      out.push_back(
          io::matrix_from_json(j, "matrix " + std::to_string(++index)));
  } else {
    throw InputError("input carries no 'matrices' or 'accepted' list");
  }
  return out;
}

json filter_payload(const FilterReport& report) {
  json accepted = json::array(), rejected = json::array();
  for (const auto& m : report.accepted)
    accepted.push_back(io::matrix_to_json(m));
  for (const auto& r : report.rejected) {
    json v{{"l", r.violation.l + 1},
           {"r", r.violation.r + 1},
           {"s", r.violation.s + 1},
           {"lower", r.violation.lower},
           {"upper", r.violation.upper},
           {"value_num", r.violation.value.num()},
           {"value_den", r.violation.value.den()}};
    rejected.push_back(
        json{{"matrix", io::matrix_to_json(r.matrix)}, {"violation", v}});
  }
  return json{{"accepted", accepted}, {"rejected", rejected}};
}

struct ConstructResult {
  struct Entry {
    int matrix_index;
    DesignInstance design;
    bool verified;
  };
  std::vector<Entry> entries;
};

// Searches every candidate, trying each concrete binding of interchangeable
// point classes. Candidates are distributed over worker threads; results
// are merged in candidate order.
ConstructResult run_construction(Stage& st,
                                 const std::vector<TacticalMatrix>& candidates) {
  const auto& km = st.km();
  const DesignParams params = st.params();
  std::vector<std::vector<DesignInstance>> found(candidates.size());

  auto handle = [&](std::size_t idx) {
    const auto& cand = candidates[idx];
    std::vector<TacticalMatrix> assignments;
    try {
      assignments = expand_row_assignments(cand);
    } catch (const LimitError&) {
      assignments = {cand};  // too many bindings to expand; try as given
    }
    for (const auto& bound_cand : assignments) {
      if (st.opt.limit > 0 &&
          static_cast<std::int64_t>(found[idx].size()) >= st.opt.limit)
        break;
      std::int64_t remaining =
          st.opt.limit > 0
              ? st.opt.limit - static_cast<std::int64_t>(found[idx].size())
              : 0;
      auto designs = search_designs(km, bound_cand, remaining);
      for (auto& d : designs) found[idx].push_back(std::move(d));
    }
  };

  if (st.opt.jobs <= 1 || candidates.size() <= 1) {
    for (std::size_t i = 0; i < candidates.size(); ++i) handle(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::size_t workers =
        std::min<std::size_t>(st.opt.jobs, candidates.size());
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w)
      threads.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < candidates.size();
             i = next.fetch_add(1))
          handle(i);
      });
    for (auto& t : threads) t.join();
  }

  ConstructResult out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (auto& d : found[i]) {
      bool ok = verify_design(params, d.blocks).valid;
      out.entries.push_back({static_cast<int>(i), std::move(d), ok});
    }
  }
  return out;
}

json construct_payload(const ConstructResult& r) {
  json designs = json::array();
  for (const auto& e : r.entries) {
    json d = io::design_to_json(e.design);
    d["matrix_index"] = e.matrix_index;
    d["verified"] = e.verified;
    designs.push_back(std::move(d));
  }
  return json{{"designs", designs}};
}

int cmd_params(Stage& st) {
  json out = io::envelope("params", st.job);
  try {
    out["params"] = io::params_to_json(st.params());
    out["admissible"] = true;
    io::write_output(out, st.opt.output);
    return kExitOk;
  } catch (const InadmissibleError& e) {
    out["admissible"] = false;
    out["failure"] = json{{"lambda1_remainder", e.lambda1_remainder},
                          {"b_remainder", e.b_remainder}};
    io::write_output(out, st.opt.output);
    return kExitNoResult;
  }
}

int cmd_orbits(Stage& st) {
  json out = io::envelope("orbits", st.job);
  out["params"] = io::params_to_json(st.params());
  out["orbits"] = orbits_payload(st);
  io::write_output(out, st.opt.output);
  return kExitOk;
}

int cmd_sigma(Stage& st) {
  json out = io::envelope("sigma", st.job);
  out["sigma"] = io::table_to_json(st.table());
  io::write_output(out, st.opt.output);
  return kExitOk;
}

int cmd_enumerate(Stage& st) {
  auto result = run_enumeration(st, enumerate_profiles(st));
  json out = io::envelope("matrices", st.job);
  out["params"] = io::params_to_json(st.params());
  out["point_class_sizes"] = st.points().sizes();
  out.update(matrices_payload(result));
  io::write_output(out, st.opt.output);
  return result.matrices.empty() ? kExitNoResult : kExitOk;
}

int cmd_filter(Stage& st, const json& root) {
  auto mats = matrices_from_input(root);
  FilterReport report =
      filter_matrices(mats, st.params(), st.points().sizes(), st.table());
  json out = io::envelope("filter", st.job);
  out.update(filter_payload(report));
  io::write_output(out, st.opt.output);
  return report.accepted.empty() ? kExitNoResult : kExitOk;
}

int cmd_construct(Stage& st, const json& root) {
  auto mats = matrices_from_input(root);
  auto result = run_construction(st, mats);
  json out = io::envelope("designs", st.job);
  out.update(construct_payload(result));
  io::write_output(out, st.opt.output);
  return result.entries.empty() ? kExitNoResult : kExitOk;
}

int cmd_verify(Stage& st, const json& root) {
  const FieldSpec f = st.job.field();
  std::vector<std::vector<Subspace>> items;
  if (root.contains("designs")) {
    int index = 0;
    for (const auto& d : root.at("designs")) {
      ++index;
      items.push_back(io::blocks_from_json(
          io::detail::require(d, "blocks", "design " + std::to_string(index)),
          f, "design " + std::to_string(index)));
    }
  } else if (root.contains("blocks")) {
    items.push_back(io::blocks_from_json(root.at("blocks"), f, "blocks"));
  } else {
    throw InputError("input carries no 'designs' or 'blocks' to verify");
  }

  json results = json::array();
  bool all_valid = !items.empty();
  for (const auto& blocks : items) {
    VerifyReport rep = verify_design(st.params(), blocks);
    all_valid = all_valid && rep.valid;
    json violations = json::array();
    for (const auto& v : rep.violations) {
      json entry{{"what", v.what},
                 {"expected", v.expected},
                 {"actual", v.actual}};
      if (v.where.dim > 0) entry["where"] = io::subspace_to_json(v.where);
      violations.push_back(std::move(entry));
    }
    results.push_back(json{{"valid", rep.valid}, {"violations", violations}});
  }
  json out = io::envelope("verify", st.job);
  out["results"] = results;
  io::write_output(out, st.opt.output);
  return all_valid ? kExitOk : kExitNoResult;
}

int cmd_pipeline(Stage& st) {
  json out = io::envelope("pipeline", st.job);
  try {
    st.params();
  } catch (const InadmissibleError& e) {
    out["admissible"] = false;
    out["failure"] = json{{"lambda1_remainder", e.lambda1_remainder},
                          {"b_remainder", e.b_remainder}};
    io::write_output(out, st.opt.output);
    return kExitNoResult;
  }
  out["admissible"] = true;
  out["params"] = io::params_to_json(st.params());
  out["orbits"] = orbits_payload(st);
  if (st.job.q == 2) out["sigma"] = io::table_to_json(st.table());

  // Block class profiles realizable by the actual orbit lengths.
  std::vector<BlockOrbitProfile> profiles;
  if (st.job.full_length_orbits) {
    ProfileOptions po;
    po.full_length_only = true;
    profiles = candidate_profiles(st.params(), st.group().order(), po);
  } else {
    profiles =
        profiles_from_orbit_lengths(st.km().blocks.lengths(), st.params().b);
  }
  auto enumerated = run_enumeration(st, profiles);
  out.update(matrices_payload(enumerated));

  std::vector<TacticalMatrix> survivors;
  if (st.job.q == 2) {
    FilterReport report = filter_matrices(enumerated.matrices, st.params(),
                                          st.points().sizes(), st.table());
    out.update(filter_payload(report));
    survivors = report.accepted;
  } else {
    survivors = enumerated.matrices;
  }

  auto constructed = run_construction(st, survivors);
  out.update(construct_payload(constructed));

  bool all_verified = true;
  for (const auto& e : constructed.entries) all_verified &= e.verified;
  out["summary"] =
      json{{"matrices", enumerated.matrices.size()},
           {"accepted", survivors.size()},
           {"designs", constructed.entries.size()},
           {"all_designs_verified", all_verified}};
  io::write_output(out, st.opt.output);
  return (!constructed.entries.empty() && all_verified) ? kExitOk
                                                        : kExitNoResult;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tactical decomposition search for designs over finite fields"};
  app.require_subcommand(1);

  Options opt;
  std::string output;
  auto add_common = [&](CLI::App* sub, bool has_limit) {
    sub->add_option("--input", opt.input, "input JSON file")->required();
    sub->add_option("--output", output,
                    "output file (default: standard output)");
    sub->add_option("--jobs", opt.jobs, "worker threads")
        ->check(CLI::PositiveNumber);
    if (has_limit)
      sub->add_option("--limit", opt.limit,
                      "designs per candidate matrix, 0 = all");
    sub->add_flag("--full-length-orbits", opt.full_length_orbits,
                  "only block classes of length |G|");
    sub->add_flag("--verbose", opt.verbose, "progress to standard error");
  };

  auto* c_params = app.add_subcommand("params", "derive design parameters");
  auto* c_orbits = app.add_subcommand("orbits", "point and block orbits");
  auto* c_sigma = app.add_subcommand("sigma", "third-point table (q = 2)");
  auto* c_enum = app.add_subcommand("enumerate", "decomposition matrices");
  auto* c_filter = app.add_subcommand("filter", "triple-bound filter (q = 2)");
  auto* c_construct =
      app.add_subcommand("construct", "designs from candidate matrices");
  auto* c_verify = app.add_subcommand("verify", "check a design file");
  auto* c_pipeline = app.add_subcommand("pipeline", "all stages in order");
  for (auto* sub : {c_params, c_orbits, c_sigma, c_enum, c_filter})
    add_common(sub, false);
  add_common(c_construct, true);
  add_common(c_verify, false);
  add_common(c_pipeline, true);

  CLI11_PARSE(app, argc, argv);
  if (!output.empty()) opt.output = output;

  try {
    json root = qdes::io::parse_file(opt.input);
    Stage st(opt, root);
    if (c_params->parsed()) return cmd_params(st);
    if (c_orbits->parsed()) return cmd_orbits(st);
    if (c_sigma->parsed()) return cmd_sigma(st);
    if (c_enum->parsed()) return cmd_enumerate(st);
    if (c_filter->parsed()) return cmd_filter(st, root);
    if (c_construct->parsed()) return cmd_construct(st, root);
    if (c_verify->parsed()) return cmd_verify(st, root);
    if (c_pipeline->parsed()) return cmd_pipeline(st);
    return kExitInputError;
  } catch (const qdes::InadmissibleError& e) {
    std::fprintf(stderr, "qdes: %s\n", e.what());
    return kExitNoResult;
  } catch (const qdes::Error& e) {
    std::fprintf(stderr, "qdes: %s\n", e.what());
    return kExitInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qdes: %s\n", e.what());
    return kExitInputError;
  }
}
