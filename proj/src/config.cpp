#include "ruelle/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ruelle/example_system.hpp"

namespace ruelle {

std::string_view extension(OutputFormat f) { return f == OutputFormat::Tabular ? "csv" : "json"; }

OutputFormat parse_format(std::string_view name) {
  if (name == "tabular")
    return OutputFormat::Tabular;
  if (name == "structured")
    return OutputFormat::Structured;
  throw ConfigError("format must be 'tabular' or 'structured', got '" + std::string(name) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos)
      return out;
    s.remove_prefix(comma + 1);
  }
}

struct Entry {
  std::string value;
  std::size_t line = 0;
  std::size_t value_column = 0;
};

class Reader {
public:
  Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(std::size_t line, const std::string &where, const std::string &msg) const {
    std::ostringstream os;
    os << source_ << ':' << line << ": " << where << ": " << msg;
    throw ConfigError(os.str());
  }

  [[noreturn]] void fail(const std::string &section, const std::string &key, const Entry &e,
                         const std::string &msg) const {
    fail(e.line, "[" + section + "] " + key, msg);
  }

  double real(const std::string &section, const std::string &key, const Entry &e) const {
    return real_token(section, key, e, e.value);
  }

  double real_token(const std::string &section, const std::string &key, const Entry &e, std::string_view tok) const {
    double v = 0.0;
    tok = trim(tok);
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
      fail(section, key, e, "expected a real number, got '" + std::string(tok) + "'");
    return v;
  }

  std::size_t count(const std::string &section, const std::string &key, const Entry &e, std::size_t lo,
                    std::size_t hi) const {
    return count_token(section, key, e, e.value, lo, hi);
  }

  std::size_t count_token(const std::string &section, const std::string &key, const Entry &e, std::string_view tok,
                          std::size_t lo, std::size_t hi) const {
    std::uint64_t v = 0;
    tok = trim(tok);
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      fail(section, key, e, "expected a non-negative integer, got '" + std::string(tok) + "'");
    if (v < lo || v > hi)
      fail(section, key, e, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
    return static_cast<std::size_t>(v);
  }

  RealFunction expression(const std::string &section, const std::string &key, const Entry &e) const {
    try {
      return RealFunction::parse(e.value);
    } catch (const ParseError &err) {
      fail(section, key, e, "offset " + std::to_string(err.offset()) + " (column " +
                                std::to_string(e.value_column + err.offset() + 1) + "): " + err.what());
    }
  }

private:
  std::string source_;
};

// Keys of the form "name.N" collected into a dense one-based list.
template <typename T, typename Make>
std::vector<std::optional<T>> indexed(const Reader &rd, const std::string &section,
                                      const std::map<std::string, Entry> &entries, const std::string &prefix,
                                      Make &&make) {
  std::map<std::size_t, std::optional<T>> found;
  for (const auto &[key, e] : entries) {
    if (key.rfind(prefix + ".", 0) != 0)
      continue;
    const std::string idx = key.substr(prefix.size() + 1);
    const std::size_t n = rd.count_token(section, key, e, idx, 1, 1u << 16);
    found[n] = make(key, e);
  }
  std::vector<std::optional<T>> out;
  for (const auto &[n, v] : found) {
    if (n != out.size() + 1)
      throw ConfigError("[" + section + "] " + prefix + " entries must be numbered 1.." +
                        std::to_string(found.size()) + " without gaps");
    out.push_back(v);
  }
  return out;
}

} // namespace

RunConfig parse_config(std::string_view text, std::string source) {
  Reader rd(source);
  std::map<std::string, std::map<std::string, Entry>> sections;
  std::string current;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    const auto hash = raw.find('#');
    std::string_view line = trim(raw.substr(0, hash));
    if (line.empty())
      continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        rd.fail(line_no, "section header", "missing ']'");
      current = std::string(trim(line.substr(1, line.size() - 2)));
      static const std::set<std::string> known{"system", "example", "grid",     "attractor", "radius",
                                               "check",  "eigen",   "converge", "run"};
      if (!known.count(current))
        rd.fail(line_no, "section header", "unknown section [" + current + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      rd.fail(line_no, current.empty() ? "top level" : "[" + current + "]", "expected 'key = value'");
    if (current.empty())
      rd.fail(line_no, "top level", "key outside of any section");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const std::size_t column = static_cast<std::size_t>(value.data() - raw.data());
    auto &sec = sections[current];
    if (sec.count(key))
      rd.fail(line_no, "[" + current + "] " + key, "duplicate key");
    sec[key] = Entry{std::string(value), line_no, column};
  }

  RunConfig cfg;
  cfg.source = source;
  auto take = [&](const std::string &section, const std::set<std::string> &plain,
                  const std::vector<std::string> &indexed_prefixes) -> std::map<std::string, Entry> {
    auto it = sections.find(section);
    if (it == sections.end())
      return {};
    for (const auto &[key, e] : it->second) {
      bool ok = plain.count(key) > 0;
      for (const auto &p : indexed_prefixes)
        ok = ok || key.rfind(p + ".", 0) == 0;
      if (!ok)
        rd.fail(section, key, e, "unknown key");
    }
    return it->second;
  };

  if (auto sys = take("system", {"interval"}, {"map", "potential", "stretch"}); !sys.empty()) {
    if (auto it = sys.find("interval"); it != sys.end()) {
      const auto parts = split_list(it->second.value);
      if (parts.size() != 2)
        rd.fail("system", "interval", it->second, "expected 'lo, hi'");
      cfg.domain = Interval{rd.real_token("system", "interval", it->second, parts[0]),
                            rd.real_token("system", "interval", it->second, parts[1])};
      if (!(cfg.domain.lo < cfg.domain.hi))
        rd.fail("system", "interval", it->second, "need lo < hi");
    }
    auto expr = [&](const std::string &key, const Entry &e) { return rd.expression("system", key, e); };
    for (auto &m : indexed<RealFunction>(rd, "system", sys, "map", expr))
      cfg.maps.push_back(*m);
    for (auto &p : indexed<RealFunction>(rd, "system", sys, "potential", expr))
      cfg.potentials.push_back(*p);
    cfg.stretches = indexed<RealFunction>(rd, "system", sys, "stretch", expr);
    if (cfg.maps.empty())
      throw ConfigError(source + ": [system] needs at least one map.N entry");
    if (cfg.potentials.size() != cfg.maps.size())
      throw ConfigError(source + ": [system] has " + std::to_string(cfg.maps.size()) + " maps but " +
                        std::to_string(cfg.potentials.size()) + " potentials");
    if (cfg.stretches.size() > cfg.maps.size())
      throw ConfigError(source + ": [system] has more stretch.N entries than maps");
    cfg.stretches.resize(cfg.maps.size());
  }

  if (auto ex = take("example", {"p1"}, {}); !ex.empty()) {
    if (!cfg.maps.empty())
      throw ConfigError(source + ": use either [system] or [example], not both");
    if (auto it = ex.find("p1"); it != ex.end())
      cfg.example_p1 = rd.expression("example", "p1", it->second);
  }

  constexpr std::size_t kBig = std::size_t{1} << 40;
  if (auto g = take("grid", {"nodes"}, {}); g.count("nodes"))
    cfg.grid_nodes = rd.count("grid", "nodes", g["nodes"], 2, std::size_t{1} << 24);

  auto at = take("attractor", {"depth", "resolution", "orbit_depth"}, {});
  if (at.count("depth"))
    cfg.attractor_depth = rd.count("attractor", "depth", at["depth"], 1, 200);
  if (at.count("orbit_depth"))
    cfg.orbit_depth = rd.count("attractor", "orbit_depth", at["orbit_depth"], 0, 200);
  if (at.count("resolution")) {
    cfg.resolution = rd.real("attractor", "resolution", at["resolution"]);
    if (!(cfg.resolution > 0.0))
      rd.fail("attractor", "resolution", at["resolution"], "must be positive");
  }

  auto ra = take("radius", {"iterations", "sandwich"}, {});
  if (ra.count("iterations"))
    cfg.radius_iterations = rd.count("radius", "iterations", ra["iterations"], 10, kBig);
  if (ra.count("sandwich")) {
    cfg.sandwich_steps.clear();
    for (auto tok : split_list(ra["sandwich"].value))
      cfg.sandwich_steps.push_back(rd.count_token("radius", "sandwich", ra["sandwich"], tok, 0, 100000));
  }

  auto ch = take("check", {"depth_k", "dini_theta", "dini_depth"}, {});
  if (ch.count("depth_k"))
    cfg.depth_k = rd.count("check", "depth_k", ch["depth_k"], 1, 16);
  if (ch.count("dini_theta")) {
    cfg.dini_theta = rd.real("check", "dini_theta", ch["dini_theta"]);
    if (!(cfg.dini_theta > 0.0 && cfg.dini_theta < 1.0))
      rd.fail("check", "dini_theta", ch["dini_theta"], "must lie in (0, 1)");
  }
  if (ch.count("dini_depth"))
    cfg.dini_depth = rd.count("check", "dini_depth", ch["dini_depth"], 1, 1000);

  auto ei = take("eigen", {"tolerance", "iterations", "measure_tolerance", "measure_iterations"}, {});
  auto positive = [&](const std::string &section, const std::string &key, std::map<std::string, Entry> &m,
                      double &dst) {
    if (!m.count(key))
      return;
    dst = rd.real(section, key, m[key]);
    if (!(dst > 0.0))
      rd.fail(section, key, m[key], "must be positive");
  };
  positive("eigen", "tolerance", ei, cfg.eigen_tolerance);
  positive("eigen", "measure_tolerance", ei, cfg.measure_tolerance);
  if (ei.count("iterations"))
    cfg.eigen_iterations = rd.count("eigen", "iterations", ei["iterations"], 1, kBig);
  if (ei.count("measure_iterations"))
    cfg.measure_iterations = rd.count("eigen", "measure_iterations", ei["measure_iterations"], 1, kBig);

  auto co = take("converge", {"iterations"}, {"f"});
  if (co.count("iterations"))
    cfg.converge_iterations = rd.count("converge", "iterations", co["iterations"], 1, 100000);
  auto fexpr = [&](const std::string &key, const Entry &e) {
    return NamedFunction{e.value, rd.expression("converge", key, e)};
  };
  for (auto &f : indexed<NamedFunction>(rd, "converge", co, "f", fexpr))
    cfg.test_functions.push_back(*f);
  if (cfg.test_functions.empty())
    cfg.test_functions.push_back({"x", RealFunction::parse("x")});

  auto run = take("run", {"seed", "commands", "format"}, {});
  if (run.count("seed"))
    cfg.seed = rd.count("run", "seed", run["seed"], 0, std::numeric_limits<std::uint64_t>::max());
  if (run.count("commands"))
    for (auto tok : split_list(run["commands"].value))
      if (!tok.empty())
        cfg.commands.emplace_back(tok);
  if (run.count("format")) {
    try {
      cfg.format = parse_format(run["format"].value);
    } catch (const ConfigError &e) {
      rd.fail("run", "format", run["format"], e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

IfsSystem build_system(const RunConfig &config) {
  if (config.example_p1)
    return build_indifferent_example(*config.example_p1, config.grid_nodes).system;
  if (config.maps.empty())
    throw ConfigError(config.source + ": no system described; add a [system] or [example] section");
  return IfsSystem(config.domain, config.maps, config.potentials, config.stretches);
}

} // namespace ruelle
