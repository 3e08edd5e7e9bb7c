#include "ruelle/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

namespace ruelle {

namespace {

Document series(const std::vector<double> &v) {
  Document a = Document::array();
  for (double x : v)
    a.push_back(x);
  return a;
}

} // namespace

Document to_document(const AttractorMesh &mesh, bool include_points) {
  Document d;
  d["size"] = mesh.points.size();
  d["hull"] = {mesh.hull.lo, mesh.hull.hi};
  d["resolution"] = mesh.resolution;
  d["origin"] = mesh.origin;
  d["depth"] = mesh.depth;
  d["chaos_game"] = mesh.chaos_game;
  d["unique"] = mesh.unique;
  if (include_points)
    d["points"] = series(mesh.points);
  return d;
}

Document to_document(const OrbitCoverage &c) {
  Document d;
  d["fraction"] = c.fraction;
  d["cells_hit"] = c.cells_hit;
  d["cells_total"] = c.cells_total;
  d["orbit_points"] = c.orbit_points;
  d["sampled"] = c.sampled;
  return d;
}

Document to_document(const ModulusTable &t) {
  Document d;
  d["classification"] = to_string(t.classification);
  d["samples_used"] = t.samples_used;
  d["lower_bound"] = t.sampled;
  d["scale"] = series(t.scales);
  d["alpha"] = series(t.values);
  return d;
}

Document to_document(const DiniReport &r) {
  Document d;
  d["label"] = r.label;
  d["theta"] = r.theta;
  d["diameter"] = r.diameter;
  d["sum"] = r.sum;
  d["last_term"] = r.last_term;
  d["verdict"] = to_string(r.verdict);
  d["term"] = series(r.terms);
  d["partial_sum"] = series(r.partial_sums);
  return d;
}

Document to_document(const SpectralEstimate &e) {
  Document d;
  d["rho"] = e.rho;
  d["lower_bound"] = e.lower_bound;
  d["bracket"] = {e.bracket_lower, e.bracket_upper};
  d["collatz"] = {e.collatz_lower, e.collatz_upper};
  d["spread"] = e.spread;
  d["conclusive"] = e.conclusive;
  d["iterations"] = e.iterations;
  d["gelfand"] = series(e.gelfand);
  d["ratio"] = series(e.ratio);
  return d;
}

Document to_document(const SandwichReport &r) {
  Document d;
  d["rho"] = r.rho;
  d["pass"] = r.pass;
  Document n = Document::array(), lo = Document::array(), hi = Document::array(), eps = Document::array(),
           ok = Document::array();
  for (const auto &row : r.rows) {
    n.push_back(row.n);
    lo.push_back(row.min);
    hi.push_back(row.max);
    eps.push_back(row.epsilon);
    ok.push_back(row.pass);
  }
  d["n"] = n;
  d["min"] = lo;
  d["max"] = hi;
  d["epsilon"] = eps;
  d["row_pass"] = ok;
  return d;
}

Document to_document(const ConditionReport &r) {
  Document d;
  d["s"] = r.s;
  d["comparator"] = r.comparator;
  d["margin"] = r.margin;
  d["width"] = r.width;
  d["verdict"] = to_string(r.verdict);
  d["method"] = r.method;
  d["certified"] = r.certified;
  d["grid_nodes"] = r.grid_nodes;
  d["depth"] = r.depth;
  return d;
}

Document to_document(const GridFunction &f) {
  Document d;
  d["hull"] = {f.hull().lo, f.hull().hi};
  d["nodes"] = f.size();
  d["min"] = f.min_value();
  d["max"] = f.max_value();
  std::vector<double> v(f.values().begin(), f.values().end());
  d["values"] = series(v);
  return d;
}

Document to_document(const EigenPair &p) {
  Document d;
  d["rho"] = p.rho;
  d["residual"] = p.residual;
  d["iterations"] = p.iterations;
  d["converged"] = p.converged;
  d["positive"] = p.positive;
  d["h"] = to_document(p.h);
  return d;
}

Document to_document(const EigenMeasure &m) {
  Document d;
  d["rho"] = m.rho;
  d["distance"] = m.distance;
  d["iterations"] = m.iterations;
  d["converged"] = m.converged;
  d["atoms"] = m.mu.size();
  d["resolution"] = m.mu.resolution();
  Document pos = Document::array(), mass = Document::array();
  for (const auto &a : m.mu.atoms()) {
    pos.push_back(a.position);
    mass.push_back(a.mass);
  }
  d["position"] = pos;
  d["mass"] = mass;
  return d;
}

std::string format_double(double x) {
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos)
    return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + '"';
}

std::string scalar_text(const Document &v) {
  switch (v.type()) {
  case Document::value_t::number_float: return format_double(v.get<double>());
  case Document::value_t::number_integer: return std::to_string(v.get<std::int64_t>());
  case Document::value_t::number_unsigned: return std::to_string(v.get<std::uint64_t>());
  case Document::value_t::boolean: return v.get<bool>() ? "true" : "false";
  case Document::value_t::string: return v.get<std::string>();
  case Document::value_t::null: return "";
  default: return v.dump();
  }
}

void flatten(const Document &v, const std::string &section, const std::string &quantity, const std::string &index,
             std::string &out) {
  if (v.is_object()) {
    for (const auto &[k, child] : v.items())
      flatten(child, section, quantity.empty() ? k : quantity + "." + k, index, out);
  } else if (v.is_array()) {
    std::size_t i = 0;
    for (const auto &child : v)
      flatten(child, section, quantity, index.empty() ? std::to_string(i++) : index + "/" + std::to_string(i++), out);
  } else {
    out += csv_field(section);
    out += ',';
    out += csv_field(quantity);
    out += ',';
    out += index;
    out += ',';
    out += csv_field(scalar_text(v));
    out += '\n';
  }
}

} // namespace

std::string render_tabular(const Document &doc) {
  std::string out = "section,quantity,index,value\n";
  if (doc.is_object()) {
    for (const auto &[k, child] : doc.items())
      flatten(child, k, "", "", out);
  } else {
    flatten(doc, "", "", "", out);
  }
  return out;
}

std::string render(const Document &doc, OutputFormat format) {
  if (format == OutputFormat::Tabular)
    return render_tabular(doc);
  return doc.dump(2) + "\n";
}

std::filesystem::path write_report(const Document &doc, const std::filesystem::path &dir, std::string_view command,
                                   OutputFormat format) {
  namespace fs = std::filesystem;
  if (doc.empty())
    throw std::invalid_argument("write_report: empty report");
  fs::create_directories(dir);
  const fs::path target = dir / (std::string(command) + "." + std::string(extension(format)));
  const fs::path temp = dir / ("." + target.filename().string() + ".tmp");
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot open '" + temp.string() + "' for writing");
    const std::string text = render(doc, format);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out)
      throw std::runtime_error("write to '" + temp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp);
    throw std::runtime_error("cannot move report into '" + target.string() + "': " + ec.message());
  }
  return target;
}

} // namespace ruelle
