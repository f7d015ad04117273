// Command line surface: classification runs, single extension steps, code
// invariants, MacWilliams transforms, and verification against the bundled
// reference tables.
//
// Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 incomplete
// (node budget exhausted somewhere).

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "linclass/linclass.hpp"

using namespace linclass;

namespace {

constexpr uint64_t kDefaultBudget = 10'000'000;

uint64_t env_budget_default() {
  if (const char* env = std::getenv("LINCODE_BUDGET_NODES")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefaultBudget;
}

std::vector<int> parse_weights(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError("bad number in list: " + item);
    }
  }
  return out;
}

struct WeightFlags {
  int d = 0;
  bool even = false;
  std::string weights;

  std::vector<int> resolve(int nmax) const {
    if (!weights.empty()) {
      if (d || even) throw CLI::ValidationError("--weights excludes --d/--even");
      return parse_weights(weights);
    }
    if (!d) throw CLI::ValidationError("one of --d or --weights is required");
    return weights_for_min_distance(d, nmax, even ? 2 : 1);
  }
};

void add_weight_flags(CLI::App* cmd, WeightFlags& wf) {
  cmd->add_option("--d", wf.d, "minimum distance (weights d..nmax)");
  cmd->add_flag("--even", wf.even, "restrict to even weights (with --d)");
  cmd->add_option("--weights", wf.weights, "explicit comma separated weight set");
}

void print_count_tables(std::ostream& os, const ClassificationResult& result, int nmax, int kmax,
                        bool cumulative) {
  std::map<CellKey, uint64_t> shown;
  for (const auto& [key, cell] : result.cells) shown[key] = cell.count;
  if (cumulative) {
    for (auto& [key, value] : shown) {
      uint64_t sum = 0;
      for (int n = 1; n <= key.n; ++n) sum += result.count(n, key.k);
      value = sum;
    }
  }
  os << (cumulative ? "cumulative counts [<=n,k]\n" : "counts [n,k]\n");
  os << std::setw(5) << "n\\k";
  for (int k = 1; k <= kmax; ++k) os << std::setw(9) << k;
  os << '\n';
  for (int n = 1; n <= nmax; ++n) {
    bool any = false;
    for (int k = 1; k <= kmax && !any; ++k) any = shown.count({n, k});
    if (!any) continue;
    os << std::setw(5) << n;
    for (int k = 1; k <= kmax; ++k) {
      auto it = shown.find({n, k});
      if (it == shown.end())
        os << std::setw(9) << '-';
      else
        os << std::setw(9) << it->second;
    }
    os << '\n';
  }
  os << "\nn\tk\tcount\tcomplete\n";
  for (const auto& [key, count] : shown)
    os << key.n << '\t' << key.k << '\t' << count << '\t'
       << (result.complete(key.n, key.k) ? 1 : 0) << '\n';
}

int run_classify(const ClassificationTask& task_in, const WeightFlags& wf, bool cumulative) {
  ClassificationTask task = task_in;
  task.weights = wf.resolve(task.nmax);
  ClassificationResult result = classify(task);
  print_count_tables(std::cout, result, task.nmax, task.kmax, cumulative);
  if (!task.outdir.empty()) {
    std::ofstream counts(std::filesystem::path(task.outdir) / "counts.tsv");
    counts << "n\tk\tcount\tcomplete\n";
    for (const auto& [key, cell] : result.cells)
      counts << key.n << '\t' << key.k << '\t' << cell.count << '\t' << (cell.complete ? 1 : 0)
             << '\n';
  }
  return result.all_complete() ? 0 : 3;
}

int run_extend(const std::string& in, const std::string& out, int r, const WeightFlags& wf,
               bool no_canonical, bool no_lex, uint64_t budget) {
  CodeArchive parents = read_archive(in);
  WeightSpec ws = WeightSpec::make(wf.resolve(parents.n + r));
  std::vector<LinearCode> children;
  bool complete = parents.complete;
  for (const auto& parent : parents.codes) {
    if (!no_canonical && parent.min_col_mult() < r) continue;
    ExtensionProblem prob;
    prob.parent = &parent;
    prob.r = r;
    prob.weights = ws;
    prob.canonical = !no_canonical;
    prob.lex = !no_lex;
    prob.budget_nodes = budget;
    ExtendResult res = extend(prob);
    complete = complete && res.complete;
    for (auto& c : res.children) children.push_back(std::move(c));
  }
  CodeArchive ar;
  ar.q = parents.q;
  ar.n = parents.n + r;
  ar.k = parents.k + 1;
  ar.codes = dedupe(children);
  ar.complete = complete;
  if (out.empty())
    std::cout << serialize_archive(ar);
  else
    write_archive(out, ar);
  return complete ? 0 : 3;
}

int run_invariants(const std::string& in, int delta, bool minimal, bool aut) {
  CodeArchive ar = read_archive(in);
  int idx = 0;
  for (const auto& code : ar.codes) {
    ++idx;
    WeightEnumerator we = weight_enumerator(code);
    std::cout << "code " << idx << ": [" << code.n() << ',' << code.k() << "]_" << code.q()
              << "\n  weights:";
    for (int i = 0; i <= we.n(); ++i)
      if (we.a[i]) std::cout << ' ' << i << ':' << we.a[i];
    std::cout << "\n  min-mult: " << code.min_col_mult() << "  max-mult: " << code.max_col_mult()
              << "  projective: " << (is_projective(code) ? "yes" : "no") << '\n';
    if (delta > 0)
      std::cout << "  " << delta << "-divisible: " << (is_divisible(we, delta) ? "yes" : "no")
                << '\n';
    if (minimal) {
      try {
        std::cout << "  minimal-codewords: " << minimal_codewords_count(code) << '\n';
      } catch (const Error& e) {
        std::cerr << "warning: code " << idx << ": " << e.what() << '\n';
      }
    }
    if (aut) {
      try {
        std::cout << "  automorphism-order: " << automorphism_order(code) << '\n';
      } catch (const ScaleExceeded& e) {
        std::cerr << "warning: code " << idx << ": " << e.what() << '\n';
      }
    }
  }
  return 0;
}

int run_macwilliams(int q, int k, int n, const std::string& avec, bool check) {
  WeightEnumerator we;
  if (avec.find(':') != std::string::npos) {
    if (n <= 0) throw CLI::ValidationError("sparse --a needs --n");
    we.a.assign(n + 1, 0);
    std::stringstream ss(avec);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto colon = item.find(':');
      int i;
      uint64_t v;
      try {
        i = std::stoi(item.substr(0, colon));
        v = std::stoull(item.substr(colon + 1));
      } catch (const std::exception&) {
        throw CLI::ValidationError("bad sparse A entry: " + item);
      }
      if (i < 0 || i > n) throw CLI::ValidationError("A index out of range");
      we.a[i] = v;
    }
  } else {
    for (int x : parse_weights(avec)) we.a.push_back(static_cast<uint64_t>(x));
    if (n > 0 && n + 1 != static_cast<int>(we.a.size()))
      throw CLI::ValidationError("--n disagrees with the dense A vector");
  }
  DualWeightDistribution dual;
  try {
    dual = macwilliams_transform(we, q, k);
  } catch (const InconsistentInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  for (int j = 0; j <= dual.n(); ++j)
    if (dual.b[j] != 0) std::cout << "B[" << j << "] = " << dual.b[j] << '\n';
  if (check) {
    bool ok = power_moments_hold(we, dual, q, k);
    std::cout << "power-moments: " << (ok ? "ok" : "violated") << '\n';
    if (!ok) return 1;
  }
  return 0;
}

struct TableEntry {
  int n, k;
  uint64_t value;
};

std::vector<TableEntry> read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open data table: " + path.string());
  std::vector<TableEntry> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    TableEntry e{};
    if (ss >> e.n >> e.k >> e.value) rows.push_back(e);
  }
  return rows;
}

int verify_counts(const std::string& name, const ClassificationResult& result,
                  const std::vector<TableEntry>& expect, int& mismatches) {
  int checked = 0;
  for (const auto& e : expect) {
    uint64_t got = result.count(e.n, e.k);
    ++checked;
    if (got != e.value) {
      ++mismatches;
      std::cout << name << ": [" << e.n << ',' << e.k << "] expected " << e.value << " got " << got
                << '\n';
    }
  }
  return checked;
}

int run_verify(const std::vector<std::string>& suites, const std::string& data_dir, int nmax_opt,
               uint64_t budget, int shards) {
  int mismatches = 0;
  bool partial = false;
  auto has = [&](const std::string& s) {
    return suites.empty() ||
           std::find(suites.begin(), suites.end(), s) != suites.end() ||
           std::find(suites.begin(), suites.end(), "all") != suites.end();
  };

  if (has("table1-small")) {
    auto expect = read_table(std::filesystem::path(data_dir) / "table1_small.tsv");
    int nmax = nmax_opt > 0 ? std::min(nmax_opt, 12) : 12;
    ClassificationTask task;
    task.q = 2;
    task.weights = weights_for_min_distance(3, nmax);
    task.nmax = nmax;
    task.kmax = nmax;
    task.budget_nodes = budget;
    task.shards = shards;
    ClassificationResult r = classify(task);
    partial = partial || !r.all_complete();
    std::vector<TableEntry> trimmed;
    for (auto& e : expect)
      if (e.n <= nmax) trimmed.push_back(e);
    int checked = verify_counts("table1-small", r, trimmed, mismatches);
    std::cout << "table1-small: " << checked << " entries checked\n";
  }
  if (has("formula-k2")) {
    int nmax = nmax_opt > 0 ? nmax_opt : 16;
    ClassificationTask task;
    task.q = 2;
    task.weights = weights_for_min_distance(3, nmax);
    task.nmax = nmax;
    task.kmax = 2;
    task.budget_nodes = budget;
    task.shards = shards;
    ClassificationResult r = classify(task);
    partial = partial || !r.all_complete();
    K2Report rep = verify_k2_formula(r, 5, nmax);
    for (const auto& row : rep.rows)
      if (!row.match) {
        ++mismatches;
        std::cout << "formula-k2: n=" << row.n << " expected " << row.formula << " got "
                  << row.classified << '\n';
      }
    std::cout << "formula-k2: n=5.." << nmax << " checked\n";
  }
  if (has("table4-k2")) {
    auto expect = read_table(std::filesystem::path(data_dir) / "table4_k2.tsv");
    ClassificationTask task;
    task.q = 3;
    task.weights = {9, 18, 27, 36, 45, 54};
    task.nmax = 45;
    task.kmax = 3;
    task.budget_nodes = budget;
    task.shards = shards;
    ClassificationResult r = classify(task);
    partial = partial || !r.all_complete();
    int checked = verify_counts("table4-k2", r, expect, mismatches);
    std::cout << "table4-k2: " << checked << " entries checked\n";
  }
  if (has("table5-small")) {
    auto expect = read_table(std::filesystem::path(data_dir) / "table5_small.tsv");
    int nmax = nmax_opt > 0 ? std::min(nmax_opt, 10) : 10;
    MinimalCodewordsTable table = min_minimal_codewords_table(2, nmax, nmax, budget, shards);
    partial = partial || !table.complete;
    int checked = 0;
    for (const auto& e : expect) {
      if (e.n > nmax) continue;
      ++checked;
      auto it = table.values.find({e.n, e.k});
      uint64_t got = it == table.values.end() ? 0 : it->second;
      if (got != e.value) {
        ++mismatches;
        std::cout << "table5-small: m(" << e.n << ',' << e.k << ") expected " << e.value << " got "
                  << got << '\n';
      }
    }
    for (const auto& [key, value] : table.values) {
      if (key.n < 3 || key.n > nmax || key.k < 2) continue;
      bool listed = false;
      for (const auto& e : expect) listed = listed || (e.n == key.n && e.k == key.k);
      if (!listed) {
        ++mismatches;
        std::cout << "table5-small: unexpected entry m(" << key.n << ',' << key.k << ") = " << value
                  << '\n';
      }
    }
    std::cout << "table5-small: " << checked << " entries checked\n";
  }

  if (mismatches) {
    std::cout << "verification FAILED: " << mismatches << " mismatches\n";
    return 1;
  }
  if (partial) {
    std::cout << "verification incomplete: budget exhausted\n";
    return 3;
  }
  std::cout << "verification passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"classification of linear codes over small fields by lattice point extension"};
  app.require_subcommand(1);
  uint64_t budget = env_budget_default();

  // classify
  auto* cmd_classify = app.add_subcommand("classify", "classify [n,k,W]_q codes");
  ClassificationTask task;
  WeightFlags cw;
  bool cumulative = false;
  add_weight_flags(cmd_classify, cw);
  cmd_classify->add_option("--q", task.q, "field order")->required();
  cmd_classify->add_option("--nmax", task.nmax, "maximum length")->required();
  cmd_classify->add_option("--kmax", task.kmax, "maximum dimension")->required();
  cmd_classify->add_flag("--projective", task.projective, "cap column multiplicities at 1");
  cmd_classify->add_option("--max-mult", task.max_mult, "cap column multiplicities");
  cmd_classify->add_option("--max-redundancy", task.max_redundancy,
                           "only classify cells with n-k at most this");
  cmd_classify->add_option("--shards", task.shards, "parallel shards per parent cell");
  cmd_classify->add_option("--out", task.outdir, "directory for per-cell archives");
  cmd_classify->add_flag("--count-only", task.count_only, "drop archives once counted");
  cmd_classify->add_option("--budget-nodes", budget, "search node budget per extension");
  cmd_classify->add_flag("--cumulative", cumulative, "also report cumulative [<=n,k] counts");
  bool no_canonical = false, no_lex = false;
  cmd_classify->add_flag("--no-canonical", no_canonical, "disable canonical lengthening");
  cmd_classify->add_flag("--no-lex", no_lex, "disable lexicographical lengthening");

  // extend
  auto* cmd_extend = app.add_subcommand("extend", "extend an archive of parents one dimension");
  std::string ext_in, ext_out;
  int ext_r = 1;
  WeightFlags ew;
  bool ext_no_canonical = false, ext_no_lex = false;
  cmd_extend->add_option("--in", ext_in, "parent archive")->required();
  cmd_extend->add_option("--out", ext_out, "child archive (default stdout)");
  cmd_extend->add_option("--r", ext_r, "extension multiplicity")->required();
  add_weight_flags(cmd_extend, ew);
  cmd_extend->add_flag("--no-canonical", ext_no_canonical, "disable canonical lengthening");
  cmd_extend->add_flag("--no-lex", ext_no_lex, "disable lexicographical lengthening");
  cmd_extend->add_option("--budget-nodes", budget, "search node budget per extension");

  // invariants
  auto* cmd_inv = app.add_subcommand("invariants", "report invariants of archived codes");
  std::string inv_in;
  int inv_delta = 0;
  bool inv_minimal = false, inv_aut = false;
  cmd_inv->add_option("--in", inv_in, "code archive")->required();
  cmd_inv->add_option("--delta", inv_delta, "check divisibility by this");
  cmd_inv->add_flag("--minimal", inv_minimal, "count minimal codewords");
  cmd_inv->add_flag("--aut", inv_aut, "compute automorphism group order");

  // macwilliams
  auto* cmd_mw = app.add_subcommand("macwilliams", "dual weight distribution of an A vector");
  int mw_q = 2, mw_k = 0, mw_n = 0;
  std::string mw_a;
  bool mw_check = false;
  cmd_mw->add_option("--q", mw_q, "field order")->required();
  cmd_mw->add_option("--k", mw_k, "code dimension")->required();
  cmd_mw->add_option("--n", mw_n, "code length (for sparse --a)");
  cmd_mw->add_option("--a", mw_a, "A vector: dense 1,0,0,7,... or sparse 0:1,45:588")->required();
  cmd_mw->add_flag("--check", mw_check, "verify the first four power moments");

  // verify-tables
  auto* cmd_verify = app.add_subcommand("verify-tables", "check classifications against bundled tables");
  std::vector<std::string> suites;
  std::string data_dir = "data";
  int verify_nmax = 0, verify_shards = 1;
  cmd_verify->add_option("--suite", suites,
                         "table1-small, formula-k2, table4-k2, table5-small, or all");
  cmd_verify->add_option("--data", data_dir, "data directory");
  cmd_verify->add_option("--nmax", verify_nmax, "override the default range");
  cmd_verify->add_option("--shards", verify_shards, "parallel shards");
  cmd_verify->add_option("--budget-nodes", budget, "search node budget per extension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*cmd_classify) {
      task.budget_nodes = budget;
      task.canonical = !no_canonical;
      task.lex = !no_lex;
      return run_classify(task, cw, cumulative);
    }
    if (*cmd_extend)
      return run_extend(ext_in, ext_out, ext_r, ew, ext_no_canonical, ext_no_lex, budget);
    if (*cmd_inv) return run_invariants(inv_in, inv_delta, inv_minimal, inv_aut);
    if (*cmd_mw) return run_macwilliams(mw_q, mw_k, mw_n, mw_a, mw_check);
    if (*cmd_verify) return run_verify(suites, data_dir, verify_nmax, budget, verify_shards);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const EnvelopeViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ScaleExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const InconsistentInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
