#include "capk/cli.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "capk/report.hpp"

namespace capk {

namespace fs = std::filesystem;

// ---------------------------------------------------------------- suites

SuiteResult verify_six_term(std::uint64_t seed, int trials, int max_entry, int max_size) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(1, max_size), entry(-max_entry, max_entry);
  auto random_hom = [&](std::size_t a, std::size_t b) {
    IntMatrix m(b, a);
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < a; ++j) m(i, j) = entry(rng);
    return GroupHom(FgAbelianGroup::free(a), FgAbelianGroup::free(b), m);
  };
  auto small = [](const FgAbelianGroup& g) { return g.is_finite() && *g.order() <= (1u << 16); };
  SuiteResult res;
  for (int t = 0; t < trials; ++t) {
    std::size_t a = size(rng), b = size(rng), c = size(rng);
    GroupHom f = random_hom(a, b), g = random_hom(b, c);
    SixTermSequence s = six_term(f, g);
    bool ok = s.exact;
    // six_term already lists the elements of every small finite middle node.
    for (std::size_t i = 1; i < 5; ++i) {
      const auto& mid = s.groups[i];
      if (small(mid)) ++res.enumerated_nodes;
    }
    // Finite ends: injectivity and surjectivity by listing.
    if (ok && small(s.groups[0])) {
      std::set<Vec> seen;
      for (const auto& x : s.groups[0].elements()) seen.insert(s.groups[1].reduce(s.maps[0](x)));
      ok = seen.size() == s.groups[0].elements().size();
      ++res.enumerated_nodes;
    }
    if (ok && small(s.groups[5]) && small(s.groups[4])) {
      std::set<Vec> seen;
      for (const auto& x : s.groups[4].elements()) seen.insert(s.groups[5].reduce(s.maps[4](x)));
      ok = seen.size() == s.groups[5].elements().size();
      ++res.enumerated_nodes;
    }
    res.trials++;
    if (ok) res.exact++;
    else res.failures.push_back("trial " + std::to_string(t) + ": f = " + f.matrix().to_string() +
                                ", g = " + g.matrix().to_string());
  }
  return res;
}

SuiteResult verify_cool(std::uint64_t seed, int trials, std::size_t max_order) {
  std::mt19937_64 rng(seed);
  SuiteResult res;
  for (int t = 0; t < trials; ++t) {
    CyclicModule m = random_order2_module(rng, max_order);
    CoolSequence s = cool_sequence(m);
    bool ok = s.exact;
    for (std::size_t i = 1; i < 3 && ok; ++i) {
      auto e = exact_by_enumeration(s.maps[i - 1], s.maps[i]);
      if (!e) continue;
      ++res.enumerated_nodes;
      ok = *e;
    }
    FgAbelianGroup brute = h1_bruteforce(m, max_order);
    ok = ok && h1(m).group == brute && s.terms[2] == brute;
    res.trials++;
    if (ok) res.exact++;
    else res.failures.push_back("trial " + std::to_string(t) + ": M = " + m.group.to_string() +
                                ", sigma = " + m.sigma.matrix().to_string());
  }
  return res;
}

namespace {

// ---------------------------------------------------------------- cache

std::string sha256_hex(const std::string& s) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(s.data(), s.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

class Cache {
 public:
  explicit Cache(std::optional<fs::path> dir) : dir_(std::move(dir)) {
    if (dir_) fs::create_directories(*dir_);
  }

  // Returns the cached payload or computes, stores and returns it.
  std::string get(const std::string& material, const std::function<std::string()>& compute) {
    if (!dir_) return compute();
    std::string key = sha256_hex(material);
    fs::path file = *dir_ / (key + ".json");
    if (fs::exists(file)) {
      if (auto p = read(file, key)) return *p;
      note("cache entry " + key + " failed validation; recomputed");
    }
    std::string payload = compute();
    write(file, key, material, payload);
    return payload;
  }

  std::vector<std::string> notes() const {
    std::lock_guard<std::mutex> lock(mu_);
    return notes_;
  }

 private:
  std::optional<std::string> read(const fs::path& file, const std::string& key) const {
    std::ifstream in(file, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    Json j = Json::parse(ss.str(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    if (j.value("version", "") != kVersion || j.value("key", "") != key) return std::nullopt;
    if (!j.contains("payload") || !j["payload"].is_string()) return std::nullopt;
    std::string payload = j["payload"].get<std::string>();
    if (j.value("payload_sha256", "") != sha256_hex(payload)) return std::nullopt;
    return payload;
  }

  void write(const fs::path& file, const std::string& key, const std::string& material,
             const std::string& payload) {
    Json j;
    j["version"] = kVersion;
    j["key"] = key;
    j["material"] = material;
    j["payload"] = payload;
    j["payload_sha256"] = sha256_hex(payload);
    std::ostringstream name;
    name << key << ".tmp." << ::getpid() << "." << std::hash<std::thread::id>{}(std::this_thread::get_id());
    fs::path tmp = *dir_ / name.str();
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << j.dump();
      if (!out) {
        note("cache write failed for " + key);
        return;
      }
    }
    std::error_code ec;
    fs::rename(tmp, file, ec);
    if (ec) {
      fs::remove(tmp, ec);
      note("cache rename failed for " + key);
    }
  }

  void note(const std::string& s) {
    std::lock_guard<std::mutex> lock(mu_);
    notes_.push_back(s);
  }

  std::optional<fs::path> dir_;
  mutable std::mutex mu_;
  std::vector<std::string> notes_;
};

// ---------------------------------------------------------------- inputs

std::vector<long> parse_sigma(const std::string& spec) {
  std::vector<long> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
    if (tok.empty() || tok == "inf") continue;
    long p = 0;
    try {
      std::size_t used = 0;
      p = std::stol(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw DomainError("Sigma entry '" + tok + "' is neither 'inf' nor an integer");
    }
    if (p < 2 || !is_prime(static_cast<int64_t>(p))) throw DomainError("Sigma entry " + tok + " is not a prime");
    out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string sigma_key(const std::vector<long>& s) {
  std::string out = "inf";
  for (long p : s) out += "," + std::to_string(p);
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw DomainError(path + " is not valid JSON");
  return j;
}

// ---------------------------------------------------------------- commands

Json classgroup_doc(long m) {
  QuadraticFieldData f = field_data(m);
  Json j = class_group_json(f, class_group(f));
  if (f.disc > 0) j["fundamental_unit"] = to_json(f, fundamental_unit(f));
  return j;
}

Json capitulate_doc(long f, long adjoin, const std::vector<long>& sigma, long bound) {
  return report_json(corollary_lac_report(make_extension(f, adjoin, sigma), bound));
}

Json cohomology_doc(const CyclicModule& m) {
  Json j;
  j["module"] = module_json(m);
  j["fixed_points"] = to_json(fixed_points(m).source());
  j["tate_h0"] = to_json(tate_h0(m).group);
  j["tate_h_minus1"] = to_json(tate_h_minus1(m).group);
  j["h1"] = to_json(h1(m).group);
  j["psi_quotient"] = to_json(psi_n(m, m.order_n).quotient.group);
  auto o = m.group.order();
  if (o && *o <= 4096) j["h1_enumerated"] = to_json(h1_bruteforce(m, 4096));
  if (m.order_n == 2) j["lac"] = lac_json(lac_terms(m));
  return j;
}

Json suite_doc(const std::string& suite, const SuiteResult& r, std::uint64_t seed) {
  Json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["trials"] = r.trials;
  j["exact"] = r.exact;
  j["enumerated_nodes"] = r.enumerated_nodes;
  j["failures"] = r.failures;
  return j;
}

// ---------------------------------------------------------------- tables

std::string str(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

std::string classgroup_table(const Json& j) {
  std::string s = "D = " + str(j["field"]["disc"]) + ", h = " + str(j["h"]) + ", structure " +
                  str(j["group"]["structure"]);
  if (j.contains("fundamental_unit")) s += ", unit " + str(j["fundamental_unit"]["text"]);
  return s + "\n";
}

std::string units_table(const Json& j) {
  std::string s = "structure " + str(j["group"]["structure"]) + "\n";
  s += "torsion order " + str(j["torsion"]["order"]) + ", generator " + str(j["torsion"]["generator"]["text"]) + "\n";
  for (const auto& g : j["free_generators"]) s += "free " + str(g["text"]) + "\n";
  if (j.contains("index_over_subfields")) s += "index over subfield units " + str(j["index_over_subfields"]) + "\n";
  return s;
}

std::string lac_line(const Json& l) {
  std::string s;
  for (std::size_t i = 0; i < l["terms"].size(); ++i) {
    if (i) s += " -> ";
    s += str(l["terms"][i]["structure"]);
  }
  return "0 -> " + s + " -> 0, exact " + str(l["exact"]) + ", order identity " + str(l["order_identity"]);
}

std::string report_table(const Json& j) {
  const Json& e = j["extension"];
  std::string s;
  s += "K = Q(sqrt " + str(e["K"]["m"][0]) + ", sqrt " + str(e["K"]["m"][1]) + "), disc " + str(e["K"]["disc"]) + "\n";
  s += "F = Q(sqrt " + str(e["F"]["m"]) + "), Sigma = " + sigma_key(e["sigma"]["rational_primes"].get<std::vector<long>>()) + "\n";
  s += "Cl_Sigma(F) = " + str(j["cl_sigma_F"]["group"]["structure"]) + "\n";
  s += "units of K = " + str(j["unit_module"]["group"]["structure"]) + "\n";
  s += "Ker j: H^1 " + str(j["ker_j"]["h1"]["structure"]) + ", norm kernel " +
       str(j["ker_j"]["norm_kernel"]["structure"]) + ", direct " + str(j["ker_j"]["direct"]["generated"]["structure"]) +
       " (" + str(j["ker_j"]["direct"]["status"]) + ")\n";
  s += lac_line(j["lac"]) + "\n";
  s += "consistent " + str(j["consistent"]) + "\n";
  for (const auto& d : j["diagnostics"]) s += "  " + str(d) + "\n";
  return s;
}

std::string cohomology_table(const Json& j) {
  if (j.contains("input")) {
    return "A(F) = " + str(j["fixed_points"]["structure"]) + ", claim matches " + str(j["claim_matches"]) + "\n" +
           lac_line(j["lac"]) + "\n";
  }
  std::string s = "M = " + str(j["module"]["group"]["structure"]) + "\n";
  for (const char* k : {"fixed_points", "tate_h0", "tate_h_minus1", "h1", "psi_quotient", "h1_enumerated"})
    if (j.contains(k)) s += std::string(k) + " = " + str(j[k]["structure"]) + "\n";
  if (j.contains("lac")) s += lac_line(j["lac"]) + "\n";
  return s;
}

std::string suite_table(const Json& j) {
  return str(j["suite"]) + ": " + str(j["exact"]) + "/" + str(j["trials"]) + " exact\n";
}

std::string sweep_table(const Json& j) {
  std::string s;
  for (const auto& it : j["items"]) {
    s += "f = " + str(it["f"]) + ", adjoin = " + str(it["adjoin"]) + ": ";
    if (it.contains("error")) s += "error " + str(it["error"]["class"]) + "\n";
    else s += "Ker j " + str(it["report"]["ker_j"]["h1"]["structure"]) + ", consistent " + str(it["report"]["consistent"]) + "\n";
  }
  for (const auto& it : j["skipped"])
    s += "f = " + str(it["f"]) + ", adjoin = " + str(it["adjoin"]) + ": skipped, " + str(it["reason"]) + "\n";
  const Json& t = j["summary"];
  s += str(t["reports"]) + " reports, " + str(t["consistent"]) + " consistent, " + str(t["errors"]) + " errors, " +
       str(t["skipped"]) + " skipped\n";
  return s;
}

// ---------------------------------------------------------------- sweep

struct SweepItem {
  long f, adjoin;
};

Json run_sweep(long f_min, long f_max, long a_min, long a_max, long max_disc, long bound, int workers,
               Cache& cache, bool& inconsistent) {
  if (f_max - f_min > 100000 || a_max - a_min > 100000) throw BoundExceeded("sweep range too large");
  std::vector<SweepItem> todo;
  Json skipped = Json::array();
  auto skip = [&](long f, long a, const std::string& why) {
    skipped.push_back({{"f", f}, {"adjoin", a}, {"reason", why}});
  };
  for (long f = f_min; f <= f_max; ++f)
    for (long a = a_min; a <= a_max; ++a) {
      if (f == 0 || a == 0 || f == 1 || a == 1 || f == a) {
        skip(f, a, "degenerate pair");
        continue;
      }
      if (!is_squarefree(f) || !is_squarefree(a)) {
        skip(f, a, "not squarefree");
        continue;
      }
      long m3 = static_cast<long>(squarefree_part(static_cast<int64_t>(f) * a));
      if (m3 == 1) {
        skip(f, a, "degenerate pair");
        continue;
      }
      Int disc = abs(field_data(f).disc * field_data(a).disc * field_data(m3).disc);
      if (disc > max_disc) {
        skip(f, a, "discriminant " + disc.get_str() + " exceeds " + std::to_string(max_disc));
        continue;
      }
      todo.push_back({f, a});
    }

  std::vector<Json> results(todo.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i; (i = next.fetch_add(1)) < todo.size();) {
      const SweepItem& it = todo[i];
      Json item;
      item["f"] = it.f;
      item["adjoin"] = it.adjoin;
      try {
        std::vector<long> sigma = ramified_primes(field_data(it.f, it.adjoin), 0);
        item["sigma"] = sigma;
        std::string material = std::string(kVersion) + "|capitulate|f=" + std::to_string(it.f) +
                               ";adjoin=" + std::to_string(it.adjoin) + ";sigma=" + sigma_key(sigma) +
                               "|" + std::to_string(bound);
        item["report"] = Json::parse(cache.get(material, [&] { return dump(capitulate_doc(it.f, it.adjoin, sigma, bound)); }));
      } catch (const Error& e) {
        item["error"] = {{"class", e.error_class()}, {"message", e.what()}};
      } catch (const std::exception& e) {
        item["error"] = {{"class", "error"}, {"message", e.what()}};
      }
      results[i] = std::move(item);
    }
  };
  int n = std::max(1, std::min<int>(workers, static_cast<int>(todo.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  Json j;
  j["items"] = Json::array();
  long consistent = 0, errors = 0;
  std::map<std::string, long> orders;
  for (auto& r : results) {
    if (r.contains("error")) {
      ++errors;
      if (r["error"]["class"] == "inconsistency") inconsistent = true;
    } else if (r["report"]["consistent"].get<bool>()) {
      ++consistent;
      orders[str(r["report"]["ker_j"]["h1"]["order"])]++;
    } else {
      inconsistent = true;
    }
    j["items"].push_back(std::move(r));
  }
  j["skipped"] = skipped;
  Json s;
  s["reports"] = static_cast<long>(results.size()) - errors;
  s["consistent"] = consistent;
  s["errors"] = errors;
  s["skipped"] = skipped.size();
  s["all_consistent"] = !inconsistent && errors == 0;
  s["ker_j_orders"] = orders;
  s["range"] = {{"f", {f_min, f_max}}, {"adjoin", {a_min, a_max}}, {"max_disc", max_disc}};
  j["summary"] = s;
  return j;
}

}  // namespace

// ---------------------------------------------------------------- front end

CliResult run_cli(const std::vector<std::string>& args) {
  CliResult res;
  CLI::App app{"capkern: class groups, unit groups and capitulation in biquadratic fields", "capkern"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  bool as_json = false, as_table = false, timing = false;
  std::string cache_dir, output;
  long bound = 4000000;
  app.add_flag("--json", as_json, "JSON output (canonical)");
  app.add_flag("--table", as_table, "table output");
  app.add_option("--cache-dir", cache_dir, "cache directory (default: $CAPKERN_CACHE_DIR)");
  app.add_option("--bound", bound, "search node cap for principality searches")->check(CLI::PositiveNumber);
  app.add_option("--output", output, "write the document to a file");
  app.add_flag("--timing", timing, "report elapsed time on stderr");

  long m = 0, f = 0, adjoin = 0;
  std::string sigma_spec = "inf";

  auto* cg = app.add_subcommand("classgroup", "class group of Q(sqrt m)");
  cg->add_option("--m", m, "squarefree m")->required();

  auto* un = app.add_subcommand("units", "unit group of Q(sqrt m) or Q(sqrt f, sqrt adjoin)");
  auto* su = app.add_subcommand("sunits", "Sigma-unit group of Q(sqrt m) or Q(sqrt f, sqrt adjoin)");
  for (auto* c : {un, su}) {
    auto* om = c->add_option("--m", m, "squarefree m of a quadratic field");
    auto* of = c->add_option("--f", f, "first quadratic subfield");
    auto* oa = c->add_option("--adjoin", adjoin, "second quadratic subfield");
    om->excludes(of)->excludes(oa);
    of->needs(oa);
    oa->needs(of);
  }
  su->add_option("--sigma", sigma_spec, "inf plus rational primes, e.g. inf,2,3");

  std::string module_file, mw_file;
  auto* co = app.add_subcommand("cohomology", "cohomology of a cyclic module read from JSON");
  auto* omod = co->add_option("--module", module_file, "module file");
  auto* omw = co->add_option("--mordell-weil", mw_file, "Mordell-Weil input file");
  omod->excludes(omw);
  co->require_option(1);

  auto* ca = app.add_subcommand("capitulate", "capitulation kernel of Q(sqrt f, sqrt adjoin) / Q(sqrt f)");
  ca->add_option("--f", f, "base field Q(sqrt f)")->required();
  ca->add_option("--adjoin", adjoin, "adjoined square root")->required();
  ca->add_option("--sigma", sigma_spec, "inf plus rational primes, e.g. inf,2,3");

  std::string suite;
  int trials = 1000;
  std::size_t max_order = 4096;
  std::uint64_t seed = 1;
  auto* ve = app.add_subcommand("verify", "randomized exactness suites");
  ve->add_option("suite", suite, "six-term or cool")->required()->check(CLI::IsMember({"six-term", "cool"}));
  ve->add_option("--trials", trials, "number of trials")->check(CLI::Range(0, 10000000));
  ve->add_option("--max-order", max_order, "largest module order")->check(CLI::Range(1, 1 << 20));
  ve->add_option("--seed", seed, "random seed");

  long f_min = 0, f_max = -1, a_min = 0, a_max = -1, a_one = 0, max_disc = 100000;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* sw = app.add_subcommand("sweep", "capitulation reports over a range of extensions");
  sw->add_option("--f-min", f_min)->required();
  sw->add_option("--f-max", f_max)->required();
  auto* oamin = sw->add_option("--adjoin-min", a_min);
  auto* oamax = sw->add_option("--adjoin-max", a_max);
  auto* oa1 = sw->add_option("--adjoin", a_one, "single adjoined square root");
  oa1->excludes(oamin)->excludes(oamax);
  oamin->needs(oamax);
  oamax->needs(oamin);
  sw->add_option("--max-disc", max_disc, "skip fields with |disc K| above this")->check(CLI::PositiveNumber);
  sw->add_option("--workers", workers, "concurrent workers")->check(CLI::Range(1, 256));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    int code = app.exit(e, out, err);
    res.out = out.str();
    res.err = err.str();
    res.code = code == 0 ? kOk : kUsage;
    return res;
  }
  if (as_json && as_table) {
    res.err = "--json and --table are mutually exclusive\n";
    res.code = kUsage;
    return res;
  }
  if (sw->parsed() && oa1->count()) a_min = a_max = a_one;
  if (sw->parsed() && !oa1->count() && !oamin->count()) {
    res.err = "sweep needs --adjoin or --adjoin-min/--adjoin-max\n";
    res.code = kUsage;
    return res;
  }
  if (cache_dir.empty())
    if (const char* env = std::getenv("CAPKERN_CACHE_DIR")) cache_dir = env;

  auto start = std::chrono::steady_clock::now();
  try {
    Cache cache(cache_dir.empty() ? std::nullopt : std::optional<fs::path>(cache_dir));
    auto cached = [&](const std::string& cmd, const std::string& params, const std::function<Json()>& compute) {
      std::string material = std::string(kVersion) + "|" + cmd + "|" + params + "|" + std::to_string(bound);
      return Json::parse(cache.get(material, [&] { return dump(compute()); }));
    };
    Json doc;
    std::function<std::string(const Json&)> table;
    bool table_default = false;
    bool bad = false;

    if (cg->parsed()) {
      doc = cached("classgroup", "m=" + std::to_string(m), [&] { return classgroup_doc(m); });
      table = classgroup_table;
      table_default = true;
    } else if (un->parsed() || su->parsed()) {
      std::vector<long> sigma = su->parsed() ? parse_sigma(sigma_spec) : std::vector<long>{};
      std::string cmd = un->parsed() ? "units" : "sunits";
      if (un->get_option("--m")->count() || su->get_option("--m")->count()) {
        doc = cached(cmd, "m=" + std::to_string(m) + ";sigma=" + sigma_key(sigma), [&] {
          QuadraticFieldData F = field_data(m);
          return units_json(s_unit_group(F, primes_above(F, sigma)));
        });
      } else if (un->get_option("--f")->count() || su->get_option("--f")->count()) {
        doc = cached(cmd, "f=" + std::to_string(f) + ";adjoin=" + std::to_string(adjoin) + ";sigma=" + sigma_key(sigma),
                     [&] { return units_json(s_unit_group(field_data(f, adjoin), sigma)); });
      } else {
        res.err = cmd + " needs --m or --f/--adjoin\n";
        res.code = kUsage;
        return res;
      }
      table = units_table;
    } else if (co->parsed()) {
      if (!module_file.empty()) {
        doc = cohomology_doc(module_from_json(read_json_file(module_file)));
      } else {
        MordellWeilInput in = mordell_weil_from_json(read_json_file(mw_file));
        MordellWeilReport r = mordell_weil_sequence(in);
        doc = mordell_weil_json(in, r);
        bad = !r.claim_matches || !r.lac.seq.exact;
      }
      table = cohomology_table;
    } else if (ca->parsed()) {
      std::vector<long> sigma = parse_sigma(sigma_spec);
      doc = cached("capitulate",
                   "f=" + std::to_string(f) + ";adjoin=" + std::to_string(adjoin) + ";sigma=" + sigma_key(sigma),
                   [&] { return capitulate_doc(f, adjoin, sigma, bound); });
      bad = !doc["consistent"].get<bool>();
      table = report_table;
    } else if (ve->parsed()) {
      SuiteResult r = suite == "six-term" ? verify_six_term(seed, trials) : verify_cool(seed, trials, max_order);
      doc = suite_doc(suite, r, seed);
      bad = r.exact != r.trials;
      table = suite_table;
      table_default = true;
    } else if (sw->parsed()) {
      doc = run_sweep(f_min, f_max, a_min, a_max, max_disc, bound, workers, cache, bad);
      table = sweep_table;
    }

    bool use_table = as_table || (table_default && !as_json);
    std::string text = use_table ? table(doc) : dump(doc);
    if (!output.empty()) {
      std::ofstream out(output, std::ios::binary | std::ios::trunc);
      out << text;
      if (!out) throw DomainError("cannot write " + output);
    } else {
      res.out = text;
    }
    for (const auto& n : cache.notes()) res.err += "warning: " + n + "\n";
    if (bad) res.code = kInconsistent;
  } catch (const Error& e) {
    Json j{{"error", e.error_class()}, {"message", e.what()}};
    res.err += j.dump() + "\n";
    const std::string& c = e.error_class();
    res.code = c == "domain_error" || c == "shape_error" ? kDomain
             : c == "bound_exceeded"                     ? kBound
             : c == "inconsistency"                      ? kInconsistent
             : c == "unsupported"                        ? kUnsupported
                                                         : kFailure;
  } catch (const std::exception& e) {
    res.err += Json{{"error", "error"}, {"message", e.what()}}.dump() + "\n";
    res.code = kFailure;
  }
  if (timing) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    res.err += Json{{"elapsed_ms", ms}}.dump() + "\n";
  }
  return res;
}

}  // namespace capk
