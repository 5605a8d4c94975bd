#include "instanton/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <tuple>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "instanton/expression.hpp"

namespace instanton::cli {

using cohomology::DimensionReport;
using nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Parses [+-]digits or [+-]digits/digits; returns the offending offset on failure.
std::optional<std::size_t> parse_rational(const std::string& s, Rational& out) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  const std::size_t num_start = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == num_start) return i;
  std::string text = s.substr(s[0] == '+' ? 1 : 0, i - (s[0] == '+' ? 1 : 0));
  if (i < s.size() && s[i] == '/') {
    ++i;
    const std::size_t den_start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == den_start) return i;
    const std::string den = s.substr(den_start, i - den_start);
    if (den.find_first_not_of('0') == std::string::npos) return den_start;
    text += "/" + den;
  }
  if (i != s.size()) return i;
  out.set_str(text, 10);
  out.canonicalize();
  return std::nullopt;
}

std::string format_name(Format f) {
  switch (f) {
    case Format::Json: return "json";
    case Format::Csv: return "csv";
    case Format::Text: return "text";
  }
  return "json";
}

ordered_json alpha_json(const std::vector<Rational>& alpha) {
  ordered_json a = ordered_json::array();
  for (const auto& q : alpha) a.push_back(q.get_str());
  return a;
}

double shown_ms(const DimensionReport& r, bool timing) {
  return timing ? std::round(r.elapsed_ms * 1000.0) / 1000.0 : 0.0;
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

unsigned default_jobs(std::size_t cells) {
  if (const char* env = std::getenv("INSTANTON_EXT2_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(cells, hw)));
}

}  // namespace

void RunConfig::validate() const {
  if (n.lo > n.hi || k.lo > k.hi) throw ConfigError("ranges must be nonempty");
  if (n.lo < 1) throw ConfigError("n must be >= 1");
  if (k.lo < 2) throw ConfigError("k must be >= 2");
  if (samples < 1) throw ConfigError("samples must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (alpha.kind != AlphaSource::Kind::Random) {
    if (exactla::is_zero_vector(alpha.values)) throw ConfigError("alpha must be nonzero");
    for (int nn = n.lo; nn <= n.hi; ++nn)
      for (int kk = k.lo; kk <= k.hi; ++kk)
        if (alpha.values.size() != maps::MonadSpec::alpha_length(nn, kk))
          throw ConfigError("alpha has " + std::to_string(alpha.values.size()) + " coefficients but cell (n=" +
                            std::to_string(nn) + ", k=" + std::to_string(kk) + ") needs 2n+2k-1 = " +
                            std::to_string(maps::MonadSpec::alpha_length(nn, kk)));
  }
}

Range parse_range(const std::string& text) {
  const std::string t = trim(text);
  auto to_int = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 6)
      throw ConfigError("bad range '" + text + "': expected A or A..B with nonnegative integers");
    return std::stoi(s);
  };
  const auto dots = t.find("..");
  if (dots == std::string::npos) {
    const int v = to_int(t);
    return {v, v};
  }
  const Range r{to_int(t.substr(0, dots)), to_int(t.substr(dots + 2))};
  if (r.lo > r.hi) throw ConfigError("bad range '" + text + "': empty");
  return r;
}

std::vector<Rational> parse_alpha_list(const std::string& text) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const std::string raw = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const std::string item = trim(raw);
    Rational q;
    if (item.empty() || parse_rational(item, q))
      throw ConfigError("bad alpha list entry '" + item + "' at offset " + std::to_string(start));
    out.push_back(q);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<Rational> parse_alpha_text(const std::string& text) {
  std::vector<Rational> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t");
    const std::string item = line.substr(first, last - first + 1);
    Rational q;
    if (const auto bad = parse_rational(item, q))
      throw ConfigError("alpha file line " + std::to_string(lineno) + ", column " + std::to_string(first + *bad + 1) +
                        ": expected an integer or p/q, got '" + item + "'");
    out.push_back(q);
  }
  return out;
}

std::vector<Rational> read_alpha_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open alpha file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_alpha_text(ss.str());
}

std::vector<DimensionReport> run_grid(const RunConfig& config) {
  config.validate();
  struct Cell {
    int n, k;
  };
  std::vector<Cell> cells;
  for (int n = config.n.lo; n <= config.n.hi; ++n)
    for (int k = config.k.lo; k <= config.k.hi; ++k) cells.push_back({n, k});

  auto run_cell = [&](const Cell& c, unsigned inner_jobs) {
    const std::uint64_t seed = cohomology::cell_seed(config.seed, c.n, c.k);
    maps::MonadSpec spec;
    if (config.alpha.kind == AlphaSource::Kind::Random) {
      std::mt19937_64 rng(seed);
      spec = maps::MonadSpec::random(c.n, c.k, rng);
    } else {
      spec = {c.n, c.k, config.alpha.values};
    }
    cohomology::VerifyOptions opts;
    opts.seed = seed + 1;
    opts.samples = config.samples;
    opts.jobs = inner_jobs;
    return cohomology::full_verification(spec, opts);
  };

  std::vector<DimensionReport> reports(cells.size());
  const unsigned jobs = std::max(1u, config.jobs);
  if (jobs == 1 || cells.size() == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) reports[i] = run_cell(cells[i], jobs);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    for (unsigned t = 0; t < std::min<std::size_t>(jobs, cells.size()); ++t)
      workers.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) reports[i] = run_cell(cells[i], 1);
      }));
    for (auto& w : workers) w.get();
  }
  std::sort(reports.begin(), reports.end(),
            [](const DimensionReport& a, const DimensionReport& b) { return std::tie(a.n, a.k) < std::tie(b.n, b.k); });
  return reports;
}

nlohmann::ordered_json config_to_json(const RunConfig& config) {
  ordered_json c;
  c["n"] = {config.n.lo, config.n.hi};
  c["k"] = {config.k.lo, config.k.hi};
  switch (config.alpha.kind) {
    case AlphaSource::Kind::Random: c["alpha"] = "random"; break;
    case AlphaSource::Kind::File: c["alpha"] = {{"file", config.alpha.path}, {"values", alpha_json(config.alpha.values)}}; break;
    case AlphaSource::Kind::List: c["alpha"] = alpha_json(config.alpha.values); break;
  }
  c["seed"] = config.seed;
  c["samples"] = config.samples;
  c["format"] = format_name(config.format);
  c["jobs"] = config.jobs;
  return c;
}

nlohmann::ordered_json report_to_json(const DimensionReport& r, bool timing) {
  ordered_json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["pass"] = r.pass();
  j["ext2_formula"] = r.ext2_formula;
  j["ext2_computed"] = r.ext2_computed;
  j["ext1_formula"] = r.ext1_formula;
  j["euler"] = r.euler;
  j["char_match"] = r.character_match;
  j["monad"] = {{"complex_zero", r.monad.complex_zero},
                {"fiber_a_full", r.monad.fiber_a_full},
                {"fiber_b_full", r.monad.fiber_b_full},
                {"samples", r.monad.samples},
                {"curve_samples", r.monad.curve_samples},
                {"evidence", "sampled"},
                {"dims", {r.dim_a, r.dim_b, r.dim_c}}};
  j["ranks"] = {{"phi", r.phi_rank}, {"epsilon", r.epsilon_rank}};
  j["kernel_of_phi"] = r.phi_kernel_dim;
  j["checks"] = {{"cross_construction", r.cross_construction},
                 {"epsilon_in_kernel", r.epsilon_in_kernel},
                 {"reduction", r.reduction_ok},
                 {"chern", r.chern_ok}};
  j["alpha"] = alpha_json(r.alpha);
  j["failures"] = r.failures;
  j["elapsed_ms"] = shown_ms(r, timing);
  return j;
}

nlohmann::ordered_json verify_document(const RunConfig& config, const std::vector<DimensionReport>& reports) {
  ordered_json doc;
  doc["schema"] = kSchemaVersion;
  doc["config"] = config_to_json(config);
  ordered_json cells = ordered_json::array();
  for (const auto& r : reports) cells.push_back(report_to_json(r, config.timing));
  doc["cells"] = std::move(cells);
  return doc;
}

void write_verify_csv(std::ostream& out, const std::vector<DimensionReport>& reports, bool timing) {
  out << "n,k,pass,ext2_formula,ext2_computed,ext1_formula,euler,char_match,complex_zero,fiber_a_full,"
         "fiber_b_full,samples,phi_rank,eps_rank,elapsed_ms\n";
  for (const auto& r : reports) {
    out << r.n << ',' << r.k << ',' << yes_no(r.pass()) << ',' << r.ext2_formula << ',' << r.ext2_computed << ','
        << r.ext1_formula << ',' << r.euler << ',' << yes_no(r.character_match) << ',' << yes_no(r.monad.complex_zero)
        << ',' << yes_no(r.monad.fiber_a_full) << ',' << yes_no(r.monad.fiber_b_full) << ',' << r.monad.samples << ','
        << r.phi_rank << ',' << r.epsilon_rank << ',' << ordered_json(shown_ms(r, timing)).dump() << '\n';
  }
}

void write_table_csv(std::ostream& out, const std::vector<DimensionReport>& reports, bool timing) {
  out << "n,k,ext2_formula,ext2_computed,ext1_formula,euler,char_match,phi_rank,eps_rank,elapsed_ms\n";
  for (const auto& r : reports) {
    out << r.n << ',' << r.k << ',' << r.ext2_formula << ',' << r.ext2_computed << ',' << r.ext1_formula << ','
        << r.euler << ',' << yes_no(r.character_match) << ',' << r.phi_rank << ',' << r.epsilon_rank << ','
        << ordered_json(shown_ms(r, timing)).dump() << '\n';
  }
}

namespace {

ordered_json table_json(const std::vector<DimensionReport>& reports, bool timing) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json j;
    j["n"] = r.n;
    j["k"] = r.k;
    j["ext2_formula"] = r.ext2_formula;
    j["ext2_computed"] = r.ext2_computed;
    j["ext1_formula"] = r.ext1_formula;
    j["euler"] = r.euler;
    j["char_match"] = r.character_match;
    j["phi_rank"] = r.phi_rank;
    j["eps_rank"] = r.epsilon_rank;
    j["elapsed_ms"] = shown_ms(r, timing);
    rows.push_back(std::move(j));
  }
  return rows;
}

void write_text(std::ostream& out, const std::vector<DimensionReport>& reports, bool timing) {
  for (const auto& r : reports) {
    out << "n=" << r.n << " k=" << r.k << ": " << (r.pass() ? "PASS" : "FAIL") << "  ext2 " << r.ext2_computed
        << " (formula " << r.ext2_formula << ")  ext1 " << r.ext1_formula << "  euler " << r.euler
        << "  rank Phi^v " << r.phi_rank << "  rank eps " << r.epsilon_rank;
    if (timing) out << "  " << std::fixed << std::setprecision(1) << r.elapsed_ms << " ms" << std::defaultfloat;
    out << '\n';
    for (const auto& f : r.failures) out << "    failure: " << f << '\n';
  }
}

struct GridOptions {
  std::string n = "2";
  std::string k = "3";
  std::string alpha = "random";
  std::uint64_t seed = 0;
  long long samples = 20;
  std::string format;
  long long jobs = 0;
  bool no_timing = false;
};

void add_grid_options(CLI::App* cmd, GridOptions& o) {
  cmd->add_option("--n", o.n, "n or range A..B (P^{2n+1})");
  cmd->add_option("--k", o.k, "instanton number or range A..B");
  cmd->add_option("--alpha", o.alpha, "random | comma list of rationals | @file");
  cmd->add_option("--seed", o.seed, "seed for random alpha and sample points");
  cmd->add_option("--samples", o.samples, "random points per fiber check");
  cmd->add_option("--format", o.format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
  cmd->add_option("--jobs", o.jobs, "worker threads (default: $INSTANTON_EXT2_JOBS or cores)");
  cmd->add_flag("--no-timing", o.no_timing, "report elapsed_ms as 0 for byte-comparable output");
}

RunConfig make_config(const GridOptions& o, Format default_format) {
  RunConfig c;
  c.n = parse_range(o.n);
  c.k = parse_range(o.k);
  if (o.alpha == "random") {
    c.alpha.kind = AlphaSource::Kind::Random;
  } else if (!o.alpha.empty() && o.alpha.front() == '@') {
    c.alpha.kind = AlphaSource::Kind::File;
    c.alpha.path = o.alpha.substr(1);
    c.alpha.values = read_alpha_file(c.alpha.path);
  } else {
    c.alpha.kind = AlphaSource::Kind::List;
    c.alpha.values = parse_alpha_list(o.alpha);
  }
  c.seed = o.seed;
  if (o.samples < 1) throw ConfigError("samples must be >= 1");
  c.samples = static_cast<std::size_t>(o.samples);
  c.format = o.format.empty() ? default_format
             : o.format == "csv" ? Format::Csv
             : o.format == "text" ? Format::Text
                                  : Format::Json;
  const std::size_t cells = static_cast<std::size_t>(c.n.hi - c.n.lo + 1) * static_cast<std::size_t>(c.k.hi - c.k.lo + 1);
  if (o.jobs < 0) throw ConfigError("jobs must be >= 1");
  c.jobs = o.jobs > 0 ? static_cast<unsigned>(o.jobs) : default_jobs(cells);
  c.timing = !o.no_timing;
  c.validate();
  return c;
}

bool all_pass(const std::vector<DimensionReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const DimensionReport& r) { return r.pass(); });
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact verification of Ext^2(E,E) for special symplectic instanton bundles"};
  app.require_subcommand(1);

  GridOptions verify_opts;
  auto* verify = app.add_subcommand("verify", "verify every (n,k) cell and emit one report per cell");
  add_grid_options(verify, verify_opts);

  GridOptions table_opts;
  auto* table = app.add_subcommand("table", "tabulate formulas against computed dimensions");
  add_grid_options(table, table_opts);

  std::string expression;
  std::string decompose_format = "text";
  auto* decompose = app.add_subcommand("decompose", "decompose a space expression into irreducibles S_m");
  decompose->add_option("expression", expression, "e.g. \"S(1)*S(1)\" or \"S(0)*S(0)*Sym2(V(0))\"")->required();
  decompose->add_option("--format", decompose_format, "json | text")->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (decompose->parsed()) {
      const rep::Character c = rep::expression_character(expression);
      const auto irreps = rep::decompose_character(c);
      if (decompose_format == "json") {
        ordered_json j;
        j["schema"] = kSchemaVersion;
        j["expression"] = expression;
        ordered_json parts = ordered_json::object();
        for (auto it = irreps.rbegin(); it != irreps.rend(); ++it) parts["S_" + std::to_string(it->first)] = it->second;
        j["irreducibles"] = parts;
        j["dimension"] = c.dimension();
        out << j.dump(2) << '\n';
      } else {
        out << rep::format_decomposition(irreps) << '\n' << "dimension " << c.dimension() << '\n';
      }
      return kExitOk;
    }

    const bool is_table = table->parsed();
    const RunConfig config = make_config(is_table ? table_opts : verify_opts, is_table ? Format::Csv : Format::Json);
    const auto reports = run_grid(config);
    if (is_table) {
      if (config.format == Format::Json) out << table_json(reports, config.timing).dump(2) << '\n';
      else if (config.format == Format::Csv) write_table_csv(out, reports, config.timing);
      else write_text(out, reports, config.timing);
    } else {
      if (config.format == Format::Json) out << verify_document(config, reports).dump(2) << '\n';
      else if (config.format == Format::Csv) write_verify_csv(out, reports, config.timing);
      else write_text(out, reports, config.timing);
    }
    return all_pass(reports) ? kExitOk : kExitFailed;
  } catch (const rep::ExpressionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const maps::InvalidSpec& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailed;
  }
}

}  // namespace instanton::cli
