#include "girthlab/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "girthlab/cayley.hpp"
#include "girthlab/error.hpp"
#include "girthlab/params.hpp"
#include "girthlab/primes.hpp"
#include "girthlab/report.hpp"
#include "girthlab/spectral.hpp"
#include "girthlab/words.hpp"

namespace girthlab::cli {

namespace {

struct Common {
  unsigned threads = 0;
  std::uint64_t memory_budget = default_memory_budget();
  std::string format;
  std::string output;
  std::uint64_t seed = SpectralOptions{}.seed;
  bool timing = false;
};

struct SpecArgs {
  int n = 2;
  std::int64_t l = 1;
  long a = 2;
  long b = 2;
  std::uint64_t p = 0;

  FamilySpec family() const { return FamilySpec{n, l, a, b}; }
};

struct Result {
  Json json;
  std::string raw;  // csv or dot payload
  int code = kOk;
};

void add_spec(CLI::App* sub, SpecArgs& s, bool need_p) {
  sub->add_option("--n", s.n, "matrix dimension")->required();
  sub->add_option("--l", s.l, "power applied to both generators")->capture_default_str();
  sub->add_option("--a", s.a, "superdiagonal entry of A")->required();
  sub->add_option("--b", s.b, "subdiagonal entry of B")->required();
  if (need_p) sub->add_option("--p", s.p, "modulus")->required();
}

Json header(const std::string& command) { return Json{{"schema_version", kSchemaVersion}, {"command", command}}; }

Json spec_fields(const SpecArgs& s) {
  Json j{{"n", s.n}, {"l", s.l}, {"a", s.a}, {"b", s.b}};
  if (s.p) j["p"] = s.p;
  return j;
}

void merge(Json& into, const Json& from) {
  for (auto it = from.begin(); it != from.end(); ++it) into[it.key()] = it.value();
}

std::vector<std::uint64_t> parse_primes(const std::string& text, const SpecArgs& s, bool skip_one) {
  PrimeSelector sel;
  const auto dots = text.find("..");
  try {
    if (dots != std::string::npos) {
      sel.lo = std::stoull(text.substr(0, dots));
      sel.hi = std::stoull(text.substr(dots + 2));
    } else {
      std::stringstream ss(text);
      for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) sel.explicit_list.push_back(std::stoull(item));
    }
  } catch (const std::logic_error&) {
    throw ParameterError("cannot parse prime selection '" + text + "'; use lo..hi or p1,p2,...");
  }
  sel.skip_divisors_of = {s.a, s.b};
  if (skip_one) sel.skip_congruent_one = {s.a, s.b};
  return prime_iter(sel);
}

std::string render_text(const Json& j) {
  std::ostringstream os;
  for (auto it = j.begin(); it != j.end(); ++it) {
    os << it.key() << ": ";
    if (it.value().is_string())
      os << it.value().get<std::string>();
    else
      os << it.value().dump();
    os << '\n';
  }
  return os.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cayley graphs of SL_n over Z/mZ: girth, diameter, generation, freeness and spectral bounds",
               "girthlab"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("--threads", c.threads, "worker threads, 0 = hardware parallelism");
  app.add_option("--memory-budget", c.memory_budget, "BFS memory budget (bytes, or e.g. 4GB)")
      ->transform(CLI::AsSizeValue(false));
  app.add_option("--format", c.format, "json, csv, dot or text")
      ->check(CLI::IsMember({"json", "csv", "dot", "text"}));
  app.add_option("-o,--output", c.output, "write to this path instead of stdout");
  app.add_option("--seed", c.seed, "seed for spectral start vectors");
  app.add_flag("--timing", c.timing, "include wall-clock seconds in reports");

  SpecArgs s;
  auto* validate_cmd = app.add_subcommand("validate", "classify (n, l, a, b) against the parameter rules");
  add_spec(validate_cmd, s, false);

  auto* construct_cmd = app.add_subcommand("construct", "print A^l and B^l (exact, or mod p)");
  construct_cmd->add_option("--n", s.n)->required();
  construct_cmd->add_option("--l", s.l);
  construct_cmd->add_option("--a", s.a)->required();
  construct_cmd->add_option("--b", s.b)->required();
  construct_cmd->add_option("--p", s.p, "reduce modulo p");

  auto* girth_cmd = app.add_subcommand("girth", "girth of Cay(<A_p^l, B_p^l>)");
  add_spec(girth_cmd, s, true);
  auto* diameter_cmd = app.add_subcommand("diameter", "diameter and order of Cay(<A_p^l, B_p^l>)");
  add_spec(diameter_cmd, s, true);

  std::string primes_text;
  bool skip_one = false;
  bool with_spectral = false;
  std::uint64_t order_limit = SpectralOptions{}.order_limit;
  auto* table_cmd = app.add_subcommand("dg-table", "per-prime order, girth, diameter and ratio");
  add_spec(table_cmd, s, false);
  table_cmd->add_option("--primes", primes_text, "lo..hi or p1,p2,...")->required();
  table_cmd->add_flag("--skip-congruent-one", skip_one, "also skip p with a ≡ 1 or b ≡ 1 (mod p)");
  table_cmd->add_flag("--spectral", with_spectral, "append the second adjacency eigenvalue");
  table_cmd->add_option("--order-limit", order_limit, "largest group enumerated for --spectral");

  auto* bound_cmd = app.add_subcommand("bound", "spectral girth lower bound");
  add_spec(bound_cmd, s, true);

  auto* spectral_cmd = app.add_subcommand("spectral", "second adjacency eigenvalue");
  add_spec(spectral_cmd, s, true);
  spectral_cmd->add_option("--order-limit", order_limit);

  auto* verify_cmd = app.add_subcommand("verify", "check a claim computationally");
  verify_cmd->require_subcommand(1);
  int max_length = 10;
  std::uint64_t word_budget = ScanOptions{}.word_budget;
  auto* freeness_cmd = verify_cmd->add_subcommand("freeness", "scan for identity words over Z");
  freeness_cmd->add_option("--n", s.n)->required();
  freeness_cmd->add_option("--l", s.l);
  freeness_cmd->add_option("--a", s.a)->required();
  freeness_cmd->add_option("--b", s.b)->required();
  freeness_cmd->add_option("--max-length", max_length)->capture_default_str();
  freeness_cmd->add_option("--word-budget", word_budget)->capture_default_str();

  auto* generation_cmd = verify_cmd->add_subcommand("generation", "compare the closure order with |SL_n(F_p)|");
  add_spec(generation_cmd, s, true);

  auto* recipe_cmd = verify_cmd->add_subcommand("recipe", "replay a generation recipe");
  recipe_cmd->require_subcommand(1);
  auto* sl3_cmd = recipe_cmd->add_subcommand("sl3", "mod-3 recipe for A^4, B^4 in dimension 3");
  sl3_cmd->add_option("--a", s.a)->required();
  sl3_cmd->add_option("--b", s.b)->required();
  std::uint64_t q = 3;
  int t = 1;
  auto* qt_cmd = recipe_cmd->add_subcommand("qt", "recipe for the unit pair in SL_{q^t+1}(F_q)");
  qt_cmd->add_option("--q", q)->required();
  qt_cmd->add_option("--t", t)->required();

  std::optional<std::uint64_t> alpha, beta, lucas_n_opt;
  int count = 3;
  auto* lucas_cmd = verify_cmd->add_subcommand("lucas", "digitwise binomials and admissible exponents");
  lucas_cmd->add_option("--alpha", alpha);
  lucas_cmd->add_option("--beta", beta);
  lucas_cmd->add_option("--q", q)->required();
  lucas_cmd->add_option("--n", lucas_n_opt, "list admissible exponents for this dimension");
  lucas_cmd->add_option("--count", count)->capture_default_str();

  int index = 1;
  auto* subgroup_cmd = app.add_subcommand("subgroup-gens", "Reidemeister–Schreier generators of an index-m subgroup");
  subgroup_cmd->add_option("--m", index)->required();
  subgroup_cmd->add_option("--n", s.n, "with --p: evaluate the generators");
  subgroup_cmd->add_option("--l", s.l);
  subgroup_cmd->add_option("--a", s.a);
  subgroup_cmd->add_option("--b", s.b);
  subgroup_cmd->add_option("--p", s.p);

  auto* dot_cmd = app.add_subcommand("export-dot", "Graphviz export (order ≤ 10000)");
  add_spec(dot_cmd, s, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  ExploreOptions eopts{c.memory_budget, c.threads};
  Result r;
  std::string command;
  std::string default_format = "json";

  try {
    if (validate_cmd->parsed()) {
      command = "validate";
      r.json = header(command);
      merge(r.json, to_json(validate(s.n, s.l, s.a, s.b)));
    } else if (construct_cmd->parsed()) {
      command = "construct";
      r.json = header(command);
      merge(r.json, spec_fields(s));
      const auto [a, b] = unitriangular_pair(s.n, s.a, s.b);
      const ExactMatrix al = power_closed_form(a, s.l);
      const ExactMatrix bl = power_closed_form(b, s.l);
      if (s.p) {
        r.json["X"] = to_json(reduce(al, s.p));
        r.json["Y"] = to_json(reduce(bl, s.p));
      } else {
        r.json["X"] = to_json(al);
        r.json["Y"] = to_json(bl);
      }
    } else if (girth_cmd->parsed() || diameter_cmd->parsed()) {
      command = girth_cmd->parsed() ? "girth" : "diameter";
      r.json = header(command);
      merge(r.json, spec_fields(s));
      const auto gens = family_generators(s.family(), s.p);
      try {
        if (girth_cmd->parsed()) {
          r.json["girth"] = girth(gens, eopts);
        } else {
          const Exploration e = explore(SymmetricGenerators(gens, true), eopts);
          r.json["order"] = e.order;
          r.json["diameter"] = e.diameter;
        }
      } catch (const BudgetExceeded& e) {
        r.json["partial"] = true;
        r.json["error"] = e.what();
        r.json["depth_reached"] = e.depth_reached();
        r.json["visited"] = e.visited();
        r.code = kBudget;
      }
    } else if (table_cmd->parsed()) {
      command = "dg-table";
      default_format = "csv";
      const auto primes = parse_primes(primes_text, s, skip_one);
      if (primes.empty()) err << "warning: no primes selected\n";
      const auto rows = dg_table(s.family(), primes, eopts);
      std::vector<std::optional<double>> second(rows.size());
      if (with_spectral) {
        SpectralOptions so;
        so.order_limit = order_limit;
        so.seed = c.seed;
        so.explore = eopts;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (!rows[i].ok()) continue;
          try {
            second[i] = second_eigenvalue(family_generators(s.family(), rows[i].modulus), so).second_eigenvalue;
          } catch (const Error& e) {
            err << "p=" << rows[i].modulus << ": spectral: " << e.what() << '\n';
          }
        }
      }
      std::ostringstream csv;
      csv << csv_header(with_spectral) << '\n';
      r.json = header(command);
      merge(r.json, spec_fields(s));
      if (with_spectral) r.json["seed"] = c.seed;
      Json arr = Json::array();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        csv << csv_row(rows[i], c.timing, second[i], with_spectral) << '\n';
        Json row = to_json(rows[i], c.timing);
        if (with_spectral) row["second_eigenvalue"] = second[i] ? Json(*second[i]) : Json(nullptr);
        arr.push_back(row);
        if (!rows[i].ok()) err << "p=" << rows[i].modulus << ": " << rows[i].error << '\n';
        if (rows[i].partial) r.code = kBudget;
      }
      r.json["rows"] = arr;
      r.raw = csv.str();
    } else if (bound_cmd->parsed()) {
      command = "bound";
      r.json = header(command);
      merge(r.json, spec_fields(s));
      merge(r.json, to_json(girth_lower_bound(s.family(), s.p)));
    } else if (spectral_cmd->parsed()) {
      command = "spectral";
      r.json = header(command);
      merge(r.json, spec_fields(s));
      SpectralOptions so;
      so.order_limit = order_limit;
      so.seed = c.seed;
      so.explore = eopts;
      merge(r.json, to_json(second_eigenvalue(family_generators(s.family(), s.p), so)));
    } else if (freeness_cmd->parsed()) {
      command = "verify freeness";
      r.json = header(command);
      ScanOptions so;
      so.word_budget = word_budget;
      so.threads = c.threads;
      const FreenessReport rep = freeness_scan(s.n, s.l, s.a, s.b, max_length, so);
      merge(r.json, to_json(rep));
      bool guaranteed = false;
      if (s.n >= 2 && s.l >= 1 && s.a >= 2 && s.b >= 2)
        guaranteed = validate(s.n, s.l, s.a, s.b).has(Guarantee::Freeness);
      r.json["guaranteed"] = guaranteed;
      if (guaranteed && !rep.violations.empty()) {
        err << "verification failure: identity word found for a tuple with the freeness guarantee\n";
        r.code = kVerification;
      } else if (rep.partial) {
        r.code = kBudget;
      }
    } else if (generation_cmd->parsed()) {
      command = "verify generation";
      r.json = header(command);
      merge(r.json, spec_fields(s));
      try {
        const std::uint64_t order = closure(family_generators(s.family(), s.p), eopts);
        r.json["order"] = order;
        const bool prime = is_prime(s.p);
        r.json["full"] = prime ? Json(BigInt(static_cast<unsigned long>(order)) == group_order_sl(s.n, s.p))
                               : Json(nullptr);
        if (prime) r.json["expected_order"] = group_order_sl(s.n, s.p).get_str();
        // Full generation is asserted for every prime only in dimension 2 with l = 1.
        const bool asserted = prime && s.n == 2 && s.l == 1 && s.a >= 2 && s.b >= 2;
        r.json["asserted"] = asserted;
        if (asserted && !r.json["full"].get<bool>()) {
          err << "verification failure: closure is a proper subgroup\n";
          r.code = kVerification;
        }
      } catch (const BudgetExceeded& e) {
        r.json["partial"] = true;
        r.json["visited"] = e.visited();
        r.json["depth_reached"] = e.depth_reached();
        r.code = kBudget;
      }
    } else if (sl3_cmd->parsed() || qt_cmd->parsed()) {
      command = sl3_cmd->parsed() ? "verify recipe sl3" : "verify recipe qt";
      r.json = header(command);
      const RecipeReport rep = sl3_cmd->parsed() ? replay_recipe_sl3_mod3(s.a, s.b, eopts)
                                                 : replay_recipe_qt(q, t, eopts);
      merge(r.json, to_json(rep));
      if (rep.closure_partial) r.code = kBudget;
    } else if (lucas_cmd->parsed()) {
      command = "verify lucas";
      r.json = header(command);
      r.json["q"] = q;
      bool ok = true;
      if (alpha || beta) {
        if (!alpha || !beta) throw ParameterError("--alpha and --beta go together");
        const std::uint64_t digitwise = lucas_binom_mod(*alpha, *beta, q);
        BigInt direct;
        mpz_bin_uiui(direct.get_mpz_t(), *alpha, *beta);
        const std::uint64_t expected = BigInt(direct % static_cast<unsigned long>(q)).get_ui();
        r.json["alpha"] = *alpha;
        r.json["beta"] = *beta;
        r.json["lucas"] = digitwise;
        r.json["direct"] = expected;
        ok = ok && digitwise == expected;
      }
      if (lucas_n_opt) {
        const int n = static_cast<int>(*lucas_n_opt);
        const auto ks = admissible_exponents(n, q, count);
        const auto [a, b] = unitriangular_pair(n, 1, 1);
        const ModMatrix aq = reduce(a, q);
        Json list = Json::array();
        for (std::uint64_t k : ks) {
          bool digits = true;
          for (int i = 2; i <= n - 1; ++i) digits = digits && lucas_binom_mod(k, static_cast<std::uint64_t>(i), q) == 0;
          const bool fixes = reduce(power_closed_form(a, static_cast<std::int64_t>(k)), q) == aq;
          list.push_back({{"k", k}, {"binomials_vanish", digits}, {"reduces_to_unit_pair", fixes}});
          ok = ok && digits && fixes;
        }
        r.json["n"] = n;
        r.json["admissible_exponents"] = list;
      }
      r.json["ok"] = ok;
      if (!ok) r.code = kVerification;
    } else if (subgroup_cmd->parsed()) {
      command = "subgroup-gens";
      r.json = header(command);
      const SubgroupGenerators g = schreier_generators(index);
      merge(r.json, to_json(g));
      const auto idx = stallings_index(g.generators);
      r.json["stallings_index"] = idx ? Json(*idx) : Json(nullptr);
      if (s.p) {
        const auto base = family_generators(s.family(), s.p);
        std::vector<ModMatrix> images;
        for (const Word& w : g.generators) images.push_back(eval_word_mod(w, base[0], base[1]));
        Json img = spec_fields(s);
        merge(img, to_json(cayley_stats(images, eopts), c.timing));
        r.json["images"] = img;
      }
    } else if (dot_cmd->parsed()) {
      command = "export-dot";
      default_format = "dot";
      r.raw = export_dot(family_generators(s.family(), s.p), eopts);
    }
  } catch (const VerificationFailure& e) {
    err << "verification failure: " << e.what() << '\n';
    return kVerification;
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << '\n';
    return kBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  const std::string format = c.format.empty() ? default_format : c.format;
  const bool raw_only = command == "export-dot";
  if ((format == "csv" && command != "dg-table") || (format == "dot") != raw_only) {
    err << "error: format '" << format << "' is not available for " << command << '\n';
    return kUsage;
  }
  std::string payload;
  if (format == "json")
    payload = r.json.dump(2) + "\n";
  else if (format == "text")
    payload = render_text(r.json);
  else
    payload = r.raw;

  if (c.output.empty()) {
    out << payload;
  } else {
    std::ofstream file(c.output, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << c.output << '\n';
      return kUsage;
    }
    file << payload;
  }
  return r.code;
}

}  // namespace girthlab::cli
