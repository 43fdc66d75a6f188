#include "bvloc/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bvloc {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

ordered_json locus_json(const LocusReport& l) {
  ordered_json j;
  j["id"] = l.id;
  j["chart"] = l.chart;
  j["value"] = l.value;
  j["weight_product"] = l.weight_product;
  j["weights_abs"] = l.weight_abs;
  j["rank"] = l.rank;
  j["sym_residual"] = l.sym_residual;
  return j;
}

std::string kv(const std::string& key, const std::string& val) {
  std::string line = key;
  line.resize(key.size() < 14 ? 14 : key.size(), ' ');
  return line + val + "\n";
}

}  // namespace

std::string localization_json(const LocalizationReport& r) {
  ordered_json j;
  j["schema"] = 1;
  j["kind"] = "localization";
  j["entry"] = r.entry;
  j["evaluator"] = r.evaluator;
  j["speed"] = r.speed;
  j["phi"] = r.phi;
  j["order"] = r.order;
  j["direct"] = r.direct;
  j["localized"] = r.localized;
  j["abs_residual"] = r.abs_residual;
  j["rel_residual"] = r.rel_residual;
  j["closedness"] = r.closedness;
  j["closed"] = r.closed;
  j["loci"] = ordered_json::array();
  for (const LocusReport& l : r.loci) j["loci"].push_back(locus_json(l));
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

std::string localization_table(const LocalizationReport& r) {
  std::string out;
  out += kv("entry", r.entry);
  out += kv("evaluator", r.evaluator);
  out += kv("speed", format_double(r.speed));
  out += kv("phi", format_double(r.phi));
  out += kv("order", std::to_string(r.order));
  out += kv("direct", format_double(r.direct));
  out += kv("localized", format_double(r.localized));
  out += kv("abs_residual", format_double(r.abs_residual));
  out += kv("rel_residual", format_double(r.rel_residual));
  out += kv("closedness", format_double(r.closedness));
  out += kv("closed", r.closed ? "yes" : "no");
  for (const LocusReport& l : r.loci) {
    out += "locus " + l.id + "\n";
    out += kv("  chart", std::to_string(l.chart));
    out += kv("  value", format_double(l.value));
    out += kv("  weights", [&] {
      std::string w = format_double(l.weight_product) + " from [";
      for (std::size_t i = 0; i < l.weight_abs.size(); ++i)
        w += (i ? " " : "") + format_double(l.weight_abs[i]);
      return w + "]";
    }());
    out += kv("  rank", std::to_string(l.rank));
    out += kv("  sym_residual", format_double(l.sym_residual));
  }
  for (const std::string& w : r.warnings) out += "warning       " + w + "\n";
  return out;
}

std::string sweep_json(const SweepResult& s) {
  ordered_json j;
  j["schema"] = 1;
  j["kind"] = "sweep";
  j["entry"] = s.entry;
  j["phi"] = s.phi;
  j["order"] = s.order;
  j["max_rel_dev"] = s.max_rel_dev;
  j["flat"] = s.flat;
  j["points"] = ordered_json::array();
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    ordered_json p;
    p["t"] = s.t[i];
    p["re_z"] = s.z[i].real();
    p["im_z"] = s.z[i].imag();
    j["points"].push_back(p);
  }
  return j.dump(2) + "\n";
}

std::string sweep_csv(const SweepResult& s) {
  std::string out = "t,re_z,im_z\n";
  for (std::size_t i = 0; i < s.t.size(); ++i)
    out += format_double(s.t[i]) + "," + format_double(s.z[i].real()) + "," +
           format_double(s.z[i].imag()) + "\n";
  return out;
}

std::string sweep_table(const SweepResult& s) {
  std::string out;
  out += kv("entry", s.entry);
  out += kv("phi", format_double(s.phi));
  out += kv("order", std::to_string(s.order));
  out += kv("max_rel_dev", format_double(s.max_rel_dev));
  out += kv("flat", s.flat ? "yes" : "no");
  out += "t  re_z  im_z\n";
  for (std::size_t i = 0; i < s.t.size(); ++i)
    out += format_double(s.t[i]) + "  " + format_double(s.z[i].real()) +
           "  " + format_double(s.z[i].imag()) + "\n";
  return out;
}

std::string sweep_svg(const SweepResult& s) {
  const double W = 640, H = 360, ml = 54, mr = 16, mt = 16, mb = 36;
  double tmin = s.t.front(), tmax = s.t.back();
  double vmin = 0, vmax = 0;
  for (std::size_t i = 0; i < s.z.size(); ++i) {
    vmin = std::min({vmin, s.z[i].real(), s.z[i].imag()});
    vmax = std::max({vmax, s.z[i].real(), s.z[i].imag()});
  }
  double tspan = tmax - tmin > 0 ? tmax - tmin : 1.0;
  double vspan = vmax - vmin > 0 ? vmax - vmin : 1.0;
  auto px = [&](double t) { return ml + (t - tmin) / tspan * (W - ml - mr); };
  auto py = [&](double v) {
    return H - mb - (v - vmin) / vspan * (H - mt - mb);
  };
  auto poly = [&](bool im, const char* color) {
    std::string p = "  <polyline fill=\"none\" stroke=\"";
    p += color;
    p += "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      double v = im ? s.z[i].imag() : s.z[i].real();
      if (i) p += " ";
      p += format_double(px(s.t[i])) + "," + format_double(py(v));
    }
    return p + "\"/>\n";
  };
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
         "height=\"360\" viewBox=\"0 0 640 360\">\n";
  out += "  <rect width=\"640\" height=\"360\" fill=\"white\"/>\n";
  out += "  <line x1=\"" + format_double(ml) + "\" y1=\"" +
         format_double(H - mb) + "\" x2=\"" + format_double(W - mr) +
         "\" y2=\"" + format_double(H - mb) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out += "  <line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(mt) +
         "\" x2=\"" + format_double(ml) + "\" y2=\"" + format_double(H - mb) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out += poly(false, "#1a6fb4");
  out += poly(true, "#c23b21");
  out += "  <text x=\"" + format_double(W - mr) + "\" y=\"" +
         format_double(H - 12) +
         "\" text-anchor=\"end\" font-size=\"12\">t = " + format_double(tmax) +
         "</text>\n";
  out += "  <text x=\"" + format_double(ml) + "\" y=\"" +
         format_double(H - 12) + "\" font-size=\"12\">t = " +
         format_double(tmin) + "</text>\n";
  out += "  <text x=\"6\" y=\"" + format_double(py(vmax)) +
         "\" font-size=\"12\">" + format_double(vmax) + "</text>\n";
  out += "  <text x=\"6\" y=\"" + format_double(py(vmin)) +
         "\" font-size=\"12\">" + format_double(vmin) + "</text>\n";
  out += "  <text x=\"" + format_double(W - mr) + "\" y=\"" +
         format_double(mt + 10) + "\" text-anchor=\"end\" font-size=\"12\">" +
         s.entry + " (re blue, im red)</text>\n";
  out += "</svg>\n";
  return out;
}

std::string phase_json(const std::string& entry,
                       const std::vector<PhasePoint>& pts) {
  ordered_json j;
  j["schema"] = 1;
  j["kind"] = "phase";
  j["entry"] = entry;
  j["points"] = ordered_json::array();
  for (const PhasePoint& p : pts) {
    ordered_json q;
    q["t"] = p.t;
    q["direct_re"] = p.direct.real();
    q["direct_im"] = p.direct.imag();
    q["estimate_re"] = p.estimate.real();
    q["estimate_im"] = p.estimate.imag();
    q["rel_err"] = p.rel_err;
    j["points"].push_back(q);
  }
  return j.dump(2) + "\n";
}

std::string phase_table(const std::string& entry,
                        const std::vector<PhasePoint>& pts) {
  std::string out = kv("entry", entry);
  out += "t  direct  estimate  rel_err\n";
  for (const PhasePoint& p : pts) {
    out += format_double(p.t) + "  (" + format_double(p.direct.real()) + ", " +
           format_double(p.direct.imag()) + ")  (" +
           format_double(p.estimate.real()) + ", " +
           format_double(p.estimate.imag()) + ")  " +
           format_double(p.rel_err) + "\n";
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IOError("cannot write '" + path + "'");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw IOError("write failed for '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IOError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace bvloc
