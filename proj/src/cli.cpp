#include "wittlab/cli.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "wittlab/acceptance.hpp"
#include "wittlab/error.hpp"
#include "wittlab/invariants.hpp"
#include "wittlab/quotients.hpp"
#include "wittlab/symmetry.hpp"
#include "wittlab/zeta.hpp"

namespace wittlab::cli {

namespace {

const std::map<std::string, std::vector<std::string>>& param_table() {
  static const std::map<std::string, std::vector<std::string>> t = {
      {"general", {"a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8",
                   "b9", "b10", "b11", "b12"}},
      {"nf", {"a3", "b2", "b3", "b6", "b8", "b9", "b10", "b11", "b12"}},
      {"r", {"b2", "b3", "b6", "b8"}},
      {"rres", {"b2", "b6", "b8"}},
      {"s", {"b2", "b3", "b8"}},
  };
  return t;
}

// Named parameters of a family, zero when absent.
std::map<std::string, Fel> read_params(const json& params, const std::string& family, const FieldCtx& f) {
  const auto& names = param_table().at(family);
  std::map<std::string, Fel> out;
  for (const auto& n : names) out.emplace(n, f.zero());
  if (params.is_null()) return out;
  if (!params.is_object()) throw ValidationError("\"params\" must be an object");
  for (const auto& [key, value] : params.items()) {
    if (!out.count(key)) throw ValidationError("unknown parameter \"" + key + "\" for family " + family);
    if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0)) {
      throw ValidationError("parameter \"" + key + "\" must be a non-negative integer (bits)");
    }
    const auto bits = value.get<std::uint64_t>();
    if (bits >= f.size()) {
      throw ValidationError("parameter \"" + key + "\" = " + std::to_string(bits) + " is not in GF(2^" +
                            std::to_string(f.degree()) + ")");
    }
    out[key] = f(static_cast<std::uint32_t>(bits));
  }
  return out;
}

json int128_json(Int128 v) {
  if (v >= INT64_MIN && v <= INT64_MAX) return json(static_cast<std::int64_t>(v));
  return json(wittlab::to_string(v));
}

json matrix_bits(const FieldMatrix& m) { return json(m.to_bits()); }

json slopes_json(const NewtonPolygon& np) {
  json out = json::array();
  for (const auto& s : np.slopes) {
    const std::string q = s.den == 1 ? std::to_string(s.num) : std::to_string(s.num) + "/" + std::to_string(s.den);
    out.push_back(json::array({q, s.multiplicity}));
  }
  return out;
}

json bits_list(const std::vector<Fel>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(x.bits());
  return out;
}

FamilyS require_s(const CurveSpec& spec) {
  if (spec.s) return *spec.s;
  if (spec.r && spec.r->b6 == spec.r->b3 * spec.r->b3 && !spec.r->b3.is_zero()) {
    return FamilyS(spec.r->b2, spec.r->b3, spec.r->b8);
  }
  throw ValidationError("this command needs an S-family curve (family \"s\", or \"r\" with b6 = b3^2, b3 != 0)");
}

struct Filter {
  enum class Kind { Eq, Ne, SquareEq, SquareNe } kind;
  std::string lhs, rhs;
  std::uint32_t value = 0;
};

// name=v, name!=v, b6=b3^2, b6!=b3^2
Filter parse_filter(const std::string& text, const std::vector<std::string>& names) {
  const auto ne = text.find("!=");
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ValidationError("filter \"" + text + "\" needs = or !=");
  const bool negated = ne != std::string::npos;
  const std::string lhs = text.substr(0, negated ? ne : eq);
  const std::string rhs = text.substr(negated ? ne + 2 : eq + 1);
  auto known = [&](const std::string& n) { return std::find(names.begin(), names.end(), n) != names.end(); };
  if (!known(lhs)) throw ValidationError("filter \"" + text + "\": unknown parameter " + lhs);
  Filter f;
  f.lhs = lhs;
  if (rhs.size() > 2 && rhs.substr(rhs.size() - 2) == "^2") {
    f.rhs = rhs.substr(0, rhs.size() - 2);
    if (!known(f.rhs)) throw ValidationError("filter \"" + text + "\": unknown parameter " + f.rhs);
    f.kind = negated ? Filter::Kind::SquareNe : Filter::Kind::SquareEq;
    return f;
  }
  try {
    std::size_t used = 0;
    f.value = static_cast<std::uint32_t>(std::stoul(rhs, &used));
    if (used != rhs.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ValidationError("filter \"" + text + "\": right side must be bits or <param>^2");
  }
  f.kind = negated ? Filter::Kind::Ne : Filter::Kind::Eq;
  return f;
}

bool family_member(const std::string& family, const std::map<std::string, std::uint32_t>& p) {
  if (family == "s") return p.at("b3") != 0;
  if (family == "r") return p.at("b6") != 0;
  if (family == "rres") return p.at("b2") != 0 && p.at("b6") != 0;
  return true;
}

std::map<std::string, std::uint32_t> named(const std::vector<std::string>& names, const std::vector<std::uint32_t>& t) {
  std::map<std::string, std::uint32_t> out;
  for (std::size_t i = 0; i < names.size(); ++i) out[names[i]] = t[i];
  return out;
}

CurveSpec spec_from_tuple(const ScanOptions& o, const std::vector<std::uint32_t>& t) {
  json params = json::object();
  const auto& names = family_params(o.family);
  for (std::size_t i = 0; i < names.size(); ++i) params[names[i]] = t[i];
  return parse_curve_spec(json{{"field_degree", o.field_degree}, {"family", o.family}, {"params", params}});
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double points_up_to(int k, int m_max) {
  double s = 0;
  for (int m = 1; m <= m_max; ++m) s += std::ldexp(1.0, k * m);
  return s;
}

}  // namespace

// --- curve specs ------------------------------------------------------------------

CurveModel CurveSpec::curve() const {
  if (general) return to_curve(*general);
  if (nf) return to_curve(*nf);
  if (r) return to_curve(*r);
  if (rres) return to_curve(*rres);
  if (s) return to_curve(*s);
  return *explicit_curve;
}

std::optional<FamilyR> CurveSpec::as_r() const {
  if (r) return r;
  if (s) return s->to_r();
  return std::nullopt;
}

CurveSpec parse_curve_spec(const json& doc, std::optional<int> default_degree) {
  if (!doc.is_object()) throw ValidationError("curve spec must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "field_degree" && key != "family" && key != "params" && key != "quadrics") {
      throw ValidationError("unknown key \"" + key + "\" in curve spec");
    }
  }
  CurveSpec spec;
  if (doc.contains("field_degree")) {
    if (!doc["field_degree"].is_number_integer()) throw ValidationError("\"field_degree\" must be an integer");
    spec.field_degree = doc["field_degree"].get<int>();
  } else if (default_degree) {
    spec.field_degree = *default_degree;
  } else {
    throw ValidationError("curve spec needs \"field_degree\"");
  }
  if (spec.field_degree < 1) throw ValidationError("\"field_degree\" must be at least 1");
  const FieldCtx& f = FieldCtx::get(spec.field_degree);
  if (!doc.contains("family") || !doc["family"].is_string()) throw ValidationError("curve spec needs a \"family\" string");
  spec.family = doc["family"].get<std::string>();
  const json params = doc.value("params", json());

  if (spec.family == "explicit") {
    if (!params.is_null()) throw ValidationError("family \"explicit\" takes \"quadrics\", not \"params\"");
    if (!doc.contains("quadrics") || !doc["quadrics"].is_array() || doc["quadrics"].size() != 3) {
      throw ValidationError("family \"explicit\" needs \"quadrics\": three strings");
    }
    std::vector<QForm> qs;
    for (const auto& q : doc["quadrics"]) {
      if (!q.is_string()) throw ValidationError("quadrics must be strings");
      qs.push_back(parse_quadric(q.get<std::string>(), f));
    }
    spec.explicit_curve.emplace(qs[0], qs[1], qs[2]);
    return spec;
  }
  if (doc.contains("quadrics")) throw ValidationError("\"quadrics\" is only for family \"explicit\"");
  if (!param_table().count(spec.family)) {
    throw ValidationError("unknown family \"" + spec.family + "\" (general, nf, r, rres, s, explicit)");
  }
  const auto p = read_params(params, spec.family, f);
  if (spec.family == "general") {
    FamilyGeneral g(f);
    for (int i = 1; i <= 8; ++i) g.a(i) = p.at("a" + std::to_string(i));
    for (int j = 1; j <= 12; ++j) g.b(j) = p.at("b" + std::to_string(j));
    spec.general = g;
  } else if (spec.family == "nf") {
    FamilyNF nf(f);
    nf.a3 = p.at("a3"), nf.b2 = p.at("b2"), nf.b3 = p.at("b3"), nf.b6 = p.at("b6"), nf.b8 = p.at("b8");
    nf.b9 = p.at("b9"), nf.b10 = p.at("b10"), nf.b11 = p.at("b11"), nf.b12 = p.at("b12");
    spec.nf = nf;
  } else if (spec.family == "r") {
    spec.r.emplace(p.at("b2"), p.at("b3"), p.at("b6"), p.at("b8"));
  } else if (spec.family == "rres") {
    spec.rres.emplace(p.at("b2"), p.at("b6"), p.at("b8"));
  } else {
    spec.s.emplace(p.at("b2"), p.at("b3"), p.at("b8"));
  }
  return spec;
}

// --- reports ----------------------------------------------------------------------

json report_invariants(const CurveSpec& spec) {
  const CurveModel c = spec.curve();
  const HWMatrix h = hasse_witt(c);
  return json{{"field_degree", spec.field_degree},
              {"hasse_witt", matrix_bits(h)},
              {"p_rank", p_rank(h)},
              {"a_number", a_number(h)}};
}

json report_zeta(const CurveSpec& spec, int m_max, int workers) {
  if (m_max < 5) throw ValidationError("zeta needs --n-max >= 5 (the genus)");
  const CountVector v = count_vector(spec.curve(), m_max, workers);
  const LPoly l = l_polynomial(v, 5);
  const NewtonPolygon np = newton_polygon(l);
  json lp = json::array();
  for (const auto& c : l.c) lp.push_back(int128_json(c));
  return json{{"q", v.q()},
              {"counts", v.counts},
              {"l_poly", lp},
              {"newton_slopes", slopes_json(np)},
              {"supersingular", is_supersingular(np)}};
}

json report_aut(const CurveSpec& spec) {
  const auto r = spec.as_r();
  if (!r) throw ValidationError("aut needs an R- or S-family curve");
  const AutGroup g = automorphisms_R(*r);
  json gens = json::array();
  for (const auto& m : g.generators()) gens.push_back(matrix_bits(m.matrix()));
  return json{{"order", g.order},
              {"classification", to_string(g.classification)},
              {"field_degree", g.ctx->degree()},
              {"generators", gens}};
}

json report_quotients(const CurveSpec& spec, int workers) {
  const FamilyS s = require_s(spec);
  const EtaQuotient a = quotient_eta(s, EtaWhich::Eta);
  const EtaQuotient b = quotient_eta(s, EtaWhich::IotaEta);
  return json{{"elliptic", quotient_iota(s).to_string()},
              {"genus2_eta", {{"F", bits_list(a.model.f)}}},
              {"genus2_ieta", {{"F", bits_list(b.model.f)}}},
              {"g2", a.g2.bits()},
              {"field_degree", a.result_ctx->degree()},
              {"decomposition_ok", decomposition_check(s, workers)}};
}

json report_reduce(const CurveSpec& spec) {
  const FamilyGeneral g = spec.general ? *spec.general : to_general_form(spec.curve());
  const Reduction red = reduce_to_normal_form(g);
  const FamilyNF& n = red.nf;
  json nf = {{"a3", n.a3.bits()},   {"b2", n.b2.bits()},   {"b3", n.b3.bits()},
             {"b6", n.b6.bits()},   {"b8", n.b8.bits()},   {"b9", n.b9.bits()},
             {"b10", n.b10.bits()}, {"b11", n.b11.bits()}, {"b12", n.b12.bits()}};
  return json{{"nf", nf}, {"transform", matrix_bits(red.transform)}, {"result_field_degree", red.result_ctx->degree()}};
}

// --- scan -------------------------------------------------------------------------

std::vector<std::string> family_params(const std::string& family) {
  const auto it = param_table().find(family);
  if (it == param_table().end() || family == "general") {
    throw ValidationError("scan family must be one of nf, r, rres, s");
  }
  return it->second;
}

std::vector<std::vector<std::uint32_t>> scan_grid(const ScanOptions& o) {
  const auto names = family_params(o.family);
  const FieldCtx& f = FieldCtx::get(o.field_degree);
  std::vector<Filter> filters;
  for (const auto& w : o.where) filters.push_back(parse_filter(w, names));
  for (const auto& flt : filters) {
    if ((flt.kind == Filter::Kind::Eq || flt.kind == Filter::Kind::Ne) && flt.value >= f.size()) {
      throw ValidationError("filter value " + std::to_string(flt.value) + " is not in the field");
    }
  }
  const double total = std::pow(static_cast<double>(f.size()), static_cast<double>(names.size()));
  if (total > 1e8) throw BudgetError("grid has " + std::to_string(static_cast<long long>(total)) + " tuples");

  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> t(names.size(), 0);
  while (true) {
    const auto p = named(names, t);
    bool keep = family_member(o.family, p);
    for (const auto& flt : filters) {
      if (!keep) break;
      const std::uint32_t lhs = p.at(flt.lhs);
      switch (flt.kind) {
        case Filter::Kind::Eq: keep = lhs == flt.value; break;
        case Filter::Kind::Ne: keep = lhs != flt.value; break;
        case Filter::Kind::SquareEq: keep = lhs == f.sqr(p.at(flt.rhs)); break;
        case Filter::Kind::SquareNe: keep = lhs != f.sqr(p.at(flt.rhs)); break;
      }
    }
    if (keep) out.push_back(t);
    // odometer, last parameter fastest
    std::size_t i = t.size();
    while (i > 0 && ++t[i - 1] == f.size()) t[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

std::string scan_header(const ScanOptions& o) {
  std::string h = "family";
  for (const auto& n : family_params(o.family)) h += "," + n;
  h += ",smooth,p_rank,a_number,slopes,aut_order,decomposition_ok";
  if (o.timing) h += ",wall_ms";
  return h;
}

std::string scan_row(const ScanOptions& o, const std::vector<std::uint32_t>& t) {
  const auto t0 = std::chrono::steady_clock::now();
  const CurveSpec spec = spec_from_tuple(o, t);
  const CurveModel c = spec.curve();
  std::ostringstream row;
  row << o.family;
  for (auto v : t) row << ',' << v;
  const auto verdict = smoothness_scan(c, o.n_max);
  const HWMatrix h = hasse_witt(c);
  row << ',' << (verdict.singular ? 0 : 1) << ',' << p_rank(h) << ',' << a_number(h) << ',';
  if (!verdict.singular) {
    row << newton_polygon(l_polynomial(count_vector(c, 5), 5)).to_string();
  }
  row << ',';
  if (!verdict.singular && spec.as_r()) row << automorphisms_R(*spec.as_r()).order;
  row << ',';
  if (!verdict.singular && spec.s) {
    try {
      row << (decomposition_check(*spec.s) ? "true" : "false");
    } catch (const FieldCapError&) {
      row << "cap";
    }
  }
  if (o.timing) {
    row << ',' << std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  }
  return row.str();
}

double scan_cost(const ScanOptions& o, std::size_t tuples) {
  return static_cast<double>(tuples) * (points_up_to(o.field_degree, o.n_max) + points_up_to(o.field_degree, 5));
}

void run_scan(const ScanOptions& o, const std::optional<std::string>& previous, std::ostream& out) {
  if (5 * o.field_degree > kMaxFieldDegree) throw FieldCapError("scan counts to m = 5, which needs 5k <= 20");
  if (o.n_max < 1 || o.n_max * o.field_degree > kMaxFieldDegree) {
    throw FieldCapError("--n-max * field degree must be between 1 and 20");
  }
  const auto grid = scan_grid(o);
  const std::string header = scan_header(o);
  const std::size_t width = split_csv_line(header).size();
  const std::size_t nparams = family_params(o.family).size();

  // complete rows of an earlier run, keyed by their tuple
  std::map<std::vector<std::uint32_t>, std::string> done;
  if (previous && !previous->empty()) {
    std::istringstream in(*previous);
    std::string line;
    if (!std::getline(in, line) || line != header) throw ValidationError("resume file has a different header");
    const bool complete_last = previous->back() == '\n';
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    if (!complete_last && !lines.empty()) lines.pop_back();  // interrupted mid-write
    for (const auto& l : lines) {
      const auto cells = split_csv_line(l);
      if (cells.size() != width || cells[0] != o.family) throw ValidationError("corrupt resume row: " + l);
      std::vector<std::uint32_t> key;
      try {
        for (std::size_t i = 1; i <= nparams; ++i) key.push_back(static_cast<std::uint32_t>(std::stoul(cells[i])));
      } catch (const std::exception&) {
        throw ValidationError("corrupt resume row: " + l);
      }
      done.emplace(std::move(key), l);
    }
  }

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!done.count(grid[i])) todo.push_back(i);
  }
  const double cost = scan_cost(o, todo.size());
  if (cost > o.budget) {
    std::ostringstream msg;
    msg << "estimated cost " << cost << " point visits for " << todo.size() << " tuples exceeds the budget " << o.budget;
    throw BudgetError(msg.str());
  }

  std::vector<std::optional<std::string>> rows(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto it = done.find(grid[i]);
    if (it != done.end()) rows[i] = it->second;
  }

  out << header << '\n' << std::flush;
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  auto work = [&] {
    while (true) {
      const std::size_t j = next.fetch_add(1);
      if (j >= todo.size()) return;
      std::string line;
      try {
        line = scan_row(o, grid[todo[j]]);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = todo.size();
        cv.notify_all();
        return;
      }
      std::lock_guard lock(mu);
      rows[todo[j]] = std::move(line);
      cv.notify_all();
    }
  };
  const int workers = std::max(1, std::min(o.workers, 64));
  std::vector<std::thread> pool;
  if (workers > 1) {
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  // rows go out in grid order as soon as the prefix is complete
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (workers == 1 && !rows[i]) {
      const std::size_t j = next.fetch_add(1);
      rows[todo[j]] = scan_row(o, grid[todo[j]]);
    }
    std::unique_lock lock(mu);
    cv.wait(lock, [&] { return rows[i].has_value() || failure != nullptr; });
    if (failure) break;
    out << *rows[i] << '\n' << std::flush;
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// --- entry point --------------------------------------------------------------------

namespace {

json read_json_input(const std::string& path, const std::string& inline_json) {
  std::string text;
  if (!inline_json.empty()) {
    text = inline_json;
  } else if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("curve spec is not valid JSON: ") + e.what(), e.byte);
  }
}

std::optional<std::string> read_file_if_exists(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double default_budget() {
  if (const char* env = std::getenv("WITTLAB_BUDGET")) {
    try {
      return std::stod(env);
    } catch (const std::exception&) {
      throw ValidationError(std::string("WITTLAB_BUDGET is not a number: ") + env);
    }
  }
  return 1e10;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"wittlab: genus-5 curves on the cone X^2 + YZ in characteristic 2"};
  app.require_subcommand(1);
  app.fallthrough();

  int field_degree = 0;
  int n_max = 0;
  int workers = 1;
  double budget = -1;
  std::string resume, out_path;
  bool as_json = false, as_csv = false, timing = false;
  app.add_option("--field-degree", field_degree, "k of GF(2^k); default for specs without field_degree")
      ->check(CLI::Range(1, kMaxFieldDegree));
  app.add_option("--n-max", n_max, "smoothness scan bound (scan, default 4) or count depth (zeta, default 5)")
      ->check(CLI::Range(1, kMaxFieldDegree));
  app.add_option("--workers", workers, "worker threads")->check(CLI::Range(1, 64));
  app.add_option("--budget", budget, "refuse scans estimated above this many point visits (env WITTLAB_BUDGET)");
  app.add_option("--resume", resume, "CSV of an earlier scan whose rows are kept");
  app.add_flag("--json", as_json, "JSON output");
  app.add_flag("--csv", as_csv, "CSV output (scan)");
  app.add_option("--out", out_path, "write output to this file");
  app.add_flag("--timing", timing, "add wall-clock columns");

  std::string spec_path = "-", spec_json;
  auto add_curve_command = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("spec", spec_path, "curve spec JSON file, - for stdin");
    sub->add_option("--spec-json", spec_json, "curve spec given inline");
    return sub;
  };
  CLI::App* inv = add_curve_command("invariants", "Hasse-Witt matrix, 2-rank and a-number");
  CLI::App* zeta = add_curve_command("zeta", "point counts, L-polynomial and Newton slopes");
  CLI::App* aut = add_curve_command("aut", "automorphism group of an R or S curve");
  CLI::App* quo = add_curve_command("quotients", "quotients of an S curve and the L-polynomial splitting");
  CLI::App* red = add_curve_command("reduce", "normal form of a general curve");
  CLI::App* scan = app.add_subcommand("scan", "sweep a parameter family and write one CSV row per tuple");
  std::string scan_family;
  std::vector<std::string> where;
  scan->add_option("family", scan_family, "nf, r, rres or s")->required();
  scan->add_option("--where", where, "filters: name=bits, name!=bits, name=other^2, name!=other^2");
  CLI::App* verify = app.add_subcommand("verify", "run an acceptance suite");
  std::string suite;
  verify->add_option("suite", suite, "one of: " + [] {
    std::string s;
    for (const auto& n : acceptance::suite_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }())->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }

  std::ofstream file;
  std::optional<std::string> previous;
  std::ostream* sink = &out;
  try {
    if (as_json && as_csv) throw ValidationError("--json and --csv are exclusive");
    if (!resume.empty()) {
      previous = read_file_if_exists(resume);
      if (!previous) throw ValidationError("cannot read resume file " + resume);
    }
    if (!out_path.empty()) {
      file.open(out_path, std::ios::binary | std::ios::trunc);
      if (!file) throw ValidationError("cannot write " + out_path);
      sink = &file;
    }
    const std::optional<int> deg = field_degree > 0 ? std::optional<int>(field_degree) : std::nullopt;
    auto spec = [&] { return parse_curve_spec(read_json_input(spec_path, spec_json), deg); };
    auto emit = [&](json j, double seconds) {
      if (as_csv) throw ValidationError("--csv is only available for scan");
      if (timing) j["seconds"] = seconds;
      *sink << j.dump() << '\n';
    };
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

    if (inv->parsed()) {
      emit(report_invariants(spec()), elapsed());
    } else if (zeta->parsed()) {
      const CurveSpec s = spec();
      const int m = n_max > 0 ? n_max : 5;
      const double cost = points_up_to(s.field_degree, m);
      const double limit = budget >= 0 ? budget : default_budget();
      if (cost > limit) throw BudgetError("counting to m = " + std::to_string(m) + " exceeds the budget");
      emit(report_zeta(s, m, workers), elapsed());
    } else if (aut->parsed()) {
      emit(report_aut(spec()), elapsed());
    } else if (quo->parsed()) {
      emit(report_quotients(spec(), workers), elapsed());
    } else if (red->parsed()) {
      emit(report_reduce(spec()), elapsed());
    } else if (scan->parsed()) {
      ScanOptions o;
      o.family = scan_family;
      o.field_degree = field_degree > 0 ? field_degree : 2;
      o.n_max = n_max > 0 ? n_max : 4;
      o.workers = workers;
      o.where = where;
      o.timing = timing;
      o.budget = budget >= 0 ? budget : default_budget();
      if (as_json) {
        std::ostringstream csv;
        run_scan(o, previous, csv);
        std::istringstream in(csv.str());
        std::string line;
        std::getline(in, line);
        const auto cols = split_csv_line(line);
        json rows = json::array();
        while (std::getline(in, line)) {
          const auto cells = split_csv_line(line);
          json row = json::object();
          for (std::size_t i = 0; i < cols.size(); ++i) row[cols[i]] = cells[i];
          rows.push_back(row);
        }
        *sink << rows.dump() << '\n';
      } else {
        run_scan(o, previous, *sink);
      }
    } else if (verify->parsed()) {
      const auto ids = acceptance::suite_criteria(suite);
      if (!ids) throw ValidationError("unknown suite \"" + suite + "\"");
      acceptance::Options opts;
      opts.workers = workers;
      const auto results = acceptance::run(*ids, opts);
      bool all = true;
      for (const auto& r : results) {
        *sink << acceptance::format_line(r) << '\n';
        all = all && r.pass;
      }
      return all ? kOk : kCheckFailed;
    }
  } catch (const FieldCapError& e) {
    err << "error: " << e.what() << '\n';
    return kResourceCap;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << '\n';
    return kResourceCap;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const InconsistentCountsError& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}

}  // namespace wittlab::cli
