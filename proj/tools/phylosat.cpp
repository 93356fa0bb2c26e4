#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "phylosat/io.hpp"
#include "phylosat/phylosat.hpp"

using namespace phylosat;
using io::json;

namespace {

// Exit codes.
enum Exit : int {
  kOk = 0,
  kUsage = 2,
  kMalformed = 3,
  kInvalidRelation = 4,
  kRejected = 5,
  kEngineFailure = 6,
  kBudget = 7,
  kInvalidTree = 8,
  kGoldenMismatch = 9,
};

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Malformed: return kMalformed;
    case ErrorKind::ModulusMismatch:
    case ErrorKind::NonZeroSum:
    case ErrorKind::LeafCountMismatch:
    case ErrorKind::TallyMismatch:
    case ErrorKind::DegreeMismatch: return kInvalidRelation;
    case ErrorKind::NotNormalized:
    case ErrorKind::InternalContradiction:
    case ErrorKind::IterationLimit: return kEngineFailure;
    case ErrorKind::BudgetExceeded:
    case ErrorKind::Exhausted: return kBudget;
    case ErrorKind::InvalidTree: return kInvalidTree;
  }
  return kEngineFailure;
}

struct Options {
  std::string format = "json";
  bool pretty() const { return format == "pretty"; }
};

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_flows_enum(const Options& opt, int r, int modulus) {
  const auto flows = enumerate_flows(r, modulus);
  if (opt.pretty()) {
    for (const auto& f : flows) std::cout << notation(f) << '\n';
    std::cout << "count: " << flows.size() << '\n';
  } else {
    emit({{"r", r}, {"modulus", modulus}, {"count", flows.size()}, {"flows", io::to_json(flows)}});
  }
  return kOk;
}

int cmd_relation_check(const Options& opt, const std::string& file) {
  const json j = io::read_file(file);
  try {
    const Relation rel = io::relation_from_json(j);
    const auto [canceled, common] = cancel_common(rel);
    if (opt.pretty()) {
      std::cout << "valid relation of degree " << rel.degree() << " (" << canceled.degree()
                << " after cancellation), grading " << grading(rel) << '\n';
    } else {
      emit({{"valid", true},
            {"degree", rel.degree()},
            {"canceled_degree", canceled.degree()},
            {"grading", grading(rel)}});
    }
    return kOk;
  } catch (const Error& e) {
    if (opt.pretty()) {
      std::cout << "invalid: " << e.what() << '\n';
    } else {
      emit({{"valid", false}, {"error", to_string(e.kind())}, {"message", e.what()}});
    }
    return exit_code(e.kind());
  }
}

int cmd_reduce(const Options& opt, const std::string& file, const std::string& out) {
  const Relation rel = io::relation_from_json(io::read_file(file));
  const Certificate cert = reduce(rel);
  const VerifyReport rep = verify(cert);
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw Error(ErrorKind::Malformed, "cannot write " + out);
    os << io::to_json(cert).dump(2) << '\n';
  }
  if (opt.pretty()) {
    for (const auto& s : cert.steps) std::cout << notation(s) << '\n';
    std::cout << "n=" << rep.stats.n << " quadrics=" << rep.stats.quadrics
              << " cubics=" << rep.stats.cubics << " deletes=" << rep.stats.deletes << '\n';
  } else if (out.empty()) {
    emit(io::to_json(cert));
  } else {
    emit(io::to_json(rep.stats));
  }
  if (!rep.accepted) {
    std::cerr << "produced certificate fails verification: " << rep.message << '\n';
    return kEngineFailure;
  }
  return kOk;
}

int cmd_verify(const Options& opt, const std::string& file) {
  const Certificate cert = io::certificate_from_json(io::read_file(file));
  const VerifyReport rep = verify(cert);
  if (opt.pretty()) {
    if (rep.accepted) {
      std::cout << "accepted: n=" << rep.stats.n << " quadrics=" << rep.stats.quadrics
                << " cubics=" << rep.stats.cubics << '\n';
    } else {
      std::cout << "rejected at step " << *rep.failing_step << ", clause (" << *rep.clause
                << "): " << rep.message << '\n'
                << "  state: " << notation(rep.left_at_failure) << " = "
                << notation(rep.right_at_failure) << '\n';
    }
  } else {
    emit(io::to_json(rep));
  }
  return rep.accepted ? kOk : kRejected;
}

/// Runs `work(i)` for i in [0, count) on `jobs` threads; results are stored by
/// index so the outcome does not depend on the thread count.
template <class Result, class Work>
std::vector<Result> run_indexed(std::size_t count, int jobs, Work work) {
  std::vector<Result> results(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) results[i] = work(i);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return results;
}

int cmd_oracle_fibers(const Options& opt, int r, int max_degree, int padding, int move_degree,
                      int modulus, int jobs) {
  json per_degree = json::array();
  bool all_connected = true;
  for (int d = 2; d <= max_degree; ++d) {
    const auto fibers = all_fibers(r, d, modulus);
    const auto results = run_indexed<Connectivity>(fibers.size(), jobs, [&](std::size_t i) {
      return fiber_connected(fibers[i], move_degree, padding);
    });
    int connected = 0;
    json bad = json::array();
    for (std::size_t i = 0; i < fibers.size(); ++i) {
      if (results[i].connected) {
        ++connected;
      } else if (bad.size() < 10) {
        bad.push_back({{"members", fibers[i].members.size()}, {"components", results[i].components},
                       {"example", io::to_json(fibers[i].members.front())}});
      }
    }
    all_connected = all_connected && connected == static_cast<int>(fibers.size());
    per_degree.push_back({{"degree", d},
                          {"fibers", fibers.size()},
                          {"connected", connected},
                          {"disconnected_examples", bad}});
  }
  if (opt.pretty()) {
    for (const auto& e : per_degree) {
      std::cout << "degree " << e["degree"] << ": " << e["connected"] << "/" << e["fibers"]
                << " fibers connected\n";
    }
    std::cout << "(evidence at the tested degrees only)\n";
  } else {
    emit({{"r", r},
          {"modulus", modulus},
          {"move_degree", move_degree},
          {"padding", padding},
          {"all_connected", all_connected},
          {"per_degree", per_degree},
          {"note", "evidence at the tested degrees only"}});
  }
  return kOk;
}

int cmd_oracle_min_padding(const Options& opt, const std::string& file, int cap, int move_degree) {
  const Relation rel = cancel_common(io::relation_from_json(io::read_file(file))).first;
  const auto k = min_padding(rel, move_degree, cap);
  if (opt.pretty()) {
    if (k) {
      std::cout << "min padding: " << *k << '\n';
    } else {
      std::cout << "none <= " << cap << '\n';
    }
  } else {
    emit({{"min_padding", k ? json(*k) : json(nullptr)}, {"cap", cap}, {"move_degree", move_degree}});
  }
  return kOk;
}

struct FuzzOutcome {
  bool ok = false;
  int n = 0;
  std::string error;
};

int cmd_fuzz(const Options& opt, int r, int max_degree, int count, std::uint64_t seed, int jobs) {
  if (max_degree < 2) throw Error(ErrorKind::Malformed, "--degree must be at least 2");
  const auto results = run_indexed<FuzzOutcome>(static_cast<std::size_t>(count), jobs, [&](std::size_t i) {
    const std::uint64_t s = seed + i;
    const int d = 2 + static_cast<int>(s % static_cast<std::uint64_t>(max_degree - 1));
    FuzzOutcome o;
    try {
      const Certificate cert = reduce(random_relation(r, d, s));
      const VerifyReport rep = verify(cert);
      o.ok = rep.accepted;
      o.n = cert.n;
      if (!rep.accepted) o.error = "rejected: " + rep.message;
    } catch (const Error& e) {
      o.error = e.what();
    }
    return o;
  });
  std::map<int, int> hist;
  std::map<std::string, int> errors;
  int ok = 0;
  for (const auto& o : results) {
    if (o.ok) {
      ++ok;
      ++hist[o.n];
    } else {
      ++errors[o.error];
    }
  }
  if (opt.pretty()) {
    std::cout << ok << "/" << count << " reduced and verified\n";
    for (const auto& [n, c] : hist) std::cout << "  n=" << n << ": " << c << '\n';
    for (const auto& [e, c] : errors) std::cout << "  failure x" << c << ": " << e << '\n';
  } else {
    json h = json::object();
    for (const auto& [n, c] : hist) h[std::to_string(n)] = c;
    emit({{"r", r}, {"max_degree", max_degree}, {"count", count}, {"seed", seed},
          {"accepted", ok}, {"n_histogram", h}, {"failures", errors}});
  }
  return ok == count ? kOk : kEngineFailure;
}

int cmd_golden(const Options& opt) {
  bool all = true;
  json report = json::array();
  auto run = [&](const std::string& name, const Relation& rel, auto expect) {
    const Certificate cert = reduce(rel);
    const VerifyReport rep = verify(cert);
    const std::vector<std::string> problems = expect(cert, rep);
    const bool pass = rep.accepted && problems.empty();
    all = all && pass;
    std::ostringstream line;
    line << name << ": quadrics=" << rep.stats.quadrics << ", n=" << cert.n;
    std::cout << line.str() << " (cubics=" << rep.stats.cubics << ", verified=" << (rep.accepted ? "yes" : "no")
              << ")" << (pass ? "" : "  MISMATCH") << '\n';
    for (const auto& p : problems) std::cout << "  missing: " << p << '\n';
    if (opt.pretty()) {
      for (const auto& s : cert.steps) std::cout << "    " << notation(s) << '\n';
    }
    report.push_back({{"name", name}, {"summary", line.str()}, {"pass", pass}, {"problems", problems},
                      {"stats", io::to_json(rep.stats)}});
  };
  run("Example 2.6", golden::example_2_6(), [](const Certificate& c, const VerifyReport&) {
    auto problems = golden::missing_2_6_landmarks(c);
    if (c.n > 2) problems.push_back("n above 2");
    return problems;
  });
  run("Example 2.8", golden::example_2_8(), [](const Certificate& c, const VerifyReport& rep) {
    std::vector<std::string> problems;
    if (c.n != 0) problems.push_back("n=0");
    if (rep.stats.quadrics != 4) problems.push_back("exactly 4 quadrics");
    if (rep.stats.cubics != 0) problems.push_back("no cubics");
    return problems;
  });
  if (!opt.pretty()) emit({{"golden", report}, {"all_pass", all}});
  return all ? kOk : kGoldenMismatch;
}

int cmd_tree_extend(const Options& opt, const std::string& rel_file, const std::string& tree_file,
                    int vertex) {
  const Relation rel = io::relation_from_json(io::read_file(rel_file));
  const Tree tree = io::tree_from_json(io::read_file(tree_file));
  if (vertex < 0) {
    for (int v = 0; v < tree.vertices() && vertex < 0; ++v)
      if (tree.degree(v) == rel.leaves()) vertex = v;
    if (vertex < 0) throw Error(ErrorKind::InvalidTree, "no vertex with a matching star");
  }
  const TreeRelation ext = extend_relation(rel, tree, vertex);
  const bool ok = check_tree_relation(tree, ext);
  if (opt.pretty()) {
    std::cout << "extended at vertex " << vertex << ": " << (ok ? "valid" : "INVALID") << '\n';
  } else {
    json out = io::to_json(ext);
    out["vertex"] = vertex;
    out["valid"] = ok;
    emit(out);
  }
  return ok ? kOk : kEngineFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduction certificates for Z3 claw-tree invariants"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "pretty"}));

  int r = 3, modulus = 3, max_degree = 3, padding = 0, move_degree = 3, cap = 3, count = 100,
      jobs = 1, vertex = -1, degree = 5;
  std::uint64_t seed = 1;
  std::string file, out, tree_file;

  auto* flows = app.add_subcommand("flows", "Flow utilities")->require_subcommand(1)->fallthrough();
  auto* flows_enum = flows->add_subcommand("enum", "List all flows on K_{1,r}");
  flows_enum->add_option("--r", r, "Number of leaves")->required()->check(CLI::Range(1, 12));
  flows_enum->add_option("--modulus", modulus)->check(CLI::Range(2, 7));

  auto* relation = app.add_subcommand("relation", "Relation utilities")->require_subcommand(1)->fallthrough();
  auto* relation_check = relation->add_subcommand("check", "Validate a relation file");
  relation_check->add_option("FILE", file)->required();

  auto* reduce_cmd = app.add_subcommand("reduce", "Reduce a relation to a certificate");
  reduce_cmd->add_option("FILE", file)->required();
  reduce_cmd->add_option("--out", out, "Write the certificate here");

  auto* verify_cmd = app.add_subcommand("verify", "Verify a certificate");
  verify_cmd->add_option("CERT", file)->required();

  auto* oracle = app.add_subcommand("oracle", "Brute-force fiber checks")->require_subcommand(1)->fallthrough();
  auto* fibers = oracle->add_subcommand("fibers", "Connectivity of all fibers");
  fibers->add_option("--r", r)->required()->check(CLI::Range(1, 6));
  fibers->add_option("--max-degree", max_degree)->required()->check(CLI::Range(2, 6));
  fibers->add_option("--padding", padding)->check(CLI::Range(0, 6));
  fibers->add_option("--move-degree", move_degree)->check(CLI::Range(2, 4));
  fibers->add_option("--modulus", modulus)->check(CLI::Range(2, 3));
  fibers->add_option("--jobs", jobs)->check(CLI::Range(1, 256));
  auto* minpad = oracle->add_subcommand("min-padding", "Least padding joining the two sides");
  minpad->add_option("FILE", file)->required();
  minpad->add_option("--cap", cap)->required()->check(CLI::Range(0, 8));
  minpad->add_option("--move-degree", move_degree)->check(CLI::Range(2, 4));

  auto* fuzz = app.add_subcommand("fuzz", "Reduce and verify random relations");
  fuzz->add_option("--r", r)->required()->check(CLI::Range(2, 8));
  fuzz->add_option("--degree", degree, "Maximum degree")->required()->check(CLI::Range(2, 8));
  fuzz->add_option("--count", count)->required()->check(CLI::Range(1, 10'000'000));
  fuzz->add_option("--seed", seed)->required();
  fuzz->add_option("--jobs", jobs)->check(CLI::Range(1, 256));

  auto* golden_cmd = app.add_subcommand("golden", "Replay the worked examples");

  auto* tree = app.add_subcommand("tree", "Tree utilities")->require_subcommand(1)->fallthrough();
  auto* extend_cmd = tree->add_subcommand("extend", "Extend a star relation to a tree");
  extend_cmd->add_option("STAR_REL", file)->required();
  extend_cmd->add_option("TREE", tree_file)->required();
  extend_cmd->add_option("--vertex", vertex, "Star vertex (default: first vertex of matching degree)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*flows_enum) return cmd_flows_enum(opt, r, modulus);
    if (*relation_check) return cmd_relation_check(opt, file);
    if (*reduce_cmd) return cmd_reduce(opt, file, out);
    if (*verify_cmd) return cmd_verify(opt, file);
    if (*fibers) return cmd_oracle_fibers(opt, r, max_degree, padding, move_degree, modulus, jobs);
    if (*minpad) return cmd_oracle_min_padding(opt, file, cap, move_degree);
    if (*fuzz) return cmd_fuzz(opt, r, degree, count, seed, jobs);
    if (*golden_cmd) return cmd_golden(opt);
    if (*extend_cmd) return cmd_tree_extend(opt, file, tree_file, vertex);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error (Malformed): " << e.what() << '\n';
    return kMalformed;
  }
  return kUsage;
}
