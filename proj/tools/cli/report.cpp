#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace finsler::cli {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void emit(const nlohmann::json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad + nlohmann::json(it.key()).dump() + (indent > 0 ? ": " : ":");
        emit(it.value(), indent, depth + 1, out);
      }
      out += nl + close + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      out += nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        emit(v, indent, depth + 1, out);
      }
      out += nl + close + "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

nlohmann::json params_json(const ParamMap& p) {
  nlohmann::json o = nlohmann::json::object();
  for (const auto& [k, v] : p) o[k] = v;
  return o;
}

template <class T>
nlohmann::json opt_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string dump_json(const nlohmann::json& j, int indent) {
  std::string out;
  emit(j, indent, 0, out);
  out += "\n";
  return out;
}

nlohmann::json catalog_json(const std::vector<CatalogInfo>& entries) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json params = nlohmann::json::array();
    for (const auto& p : e.params) {
      params.push_back({{"name", p.name},
                        {"default", p.default_value},
                        {"min", p.min},
                        {"max", p.max},
                        {"integer", p.integer},
                        {"description", p.description}});
    }
    list.push_back({{"name", e.name},
                    {"description", e.description},
                    {"dim", e.dim},
                    {"kind", to_string(e.kind)},
                    {"K_formula", e.K_formula},
                    {"K_default", e.K_default},
                    {"aliases", e.aliases},
                    {"params", params}});
  }
  return {{"schema", kReportSchema}, {"command", "catalog"}, {"entries", list}};
}

nlohmann::json report_json(const VerificationReport& r) {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["command"] = "verify";
  j["solution"] = r.solution;
  j["params"] = params_json(r.params);
  j["kind"] = r.kind;
  j["K_formula"] = r.K_formula;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["tol"] = r.tol;
  j["K_expected"] = r.K_expected;
  j["estimated_K"] = {{"mean", r.K_mean}, {"spread", r.K_spread}};
  j["max_residual"] = r.max_residual;
  j["pass"] = r.pass;
  if (r.b_min) {
    j["b"] = {{"min", *r.b_min}, {"max", *r.b_max}};
    j["indicatrix_kinds"] = r.indicatrix_kinds;
  }
  if (r.characterization_pass) {
    j["characterization"] = {{"max_residual", opt_json(r.max_characterization_residual)},
                             {"c_mean", opt_json(r.c_mean)},
                             {"c_spread", opt_json(r.c_spread)},
                             {"pass", *r.characterization_pass}};
  }
  j["timing"] = {{"timestamp", r.timestamp}, {"wall_time_seconds", r.wall_time_seconds}};
  return j;
}

std::string report_csv(const VerificationReport& r) {
  std::ostringstream os;
  const Eigen::Index n = r.records.empty() ? 0 : r.records.front().x.size();
  os << "index";
  for (Eigen::Index i = 0; i < n; ++i) os << ",x" << i;
  for (Eigen::Index i = 0; i < n; ++i) os << ",y" << i;
  os << ",F,alpha,b,residual,K_estimate,characterization,c,indicatrix\n";
  for (const auto& s : r.records) {
    os << s.index;
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << format_double(s.x(i));
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << format_double(s.y(i));
    os << ',' << format_double(s.F) << ',' << format_double(s.alpha) << ',' << format_double(s.b) << ','
       << format_double(s.residual) << ',' << format_double(s.K_estimate) << ','
       << (s.characterization ? format_double(*s.characterization) : "") << ','
       << (s.c ? format_double(*s.c) : "") << ',' << s.indicatrix.value_or("") << '\n';
  }
  return os.str();
}

std::string report_text(const VerificationReport& r) {
  std::ostringstream os;
  os << "solution      " << r.solution << '\n';
  os << "params       ";
  for (const auto& [k, v] : r.params) os << ' ' << k << '=' << format_double(v);
  os << '\n';
  os << "kind          " << r.kind << "  (K = " << r.K_formula << ")\n";
  os << "samples       " << r.samples << "  seed " << r.seed << '\n';
  os << "K expected    " << format_double(r.K_expected) << '\n';
  os << "K estimated   " << format_double(r.K_mean) << "  +- " << format_double(r.K_spread) << '\n';
  os << "max residual  " << format_double(r.max_residual) << "  (tol " << format_double(r.tol) << ")\n";
  if (r.b_min) os << "b range       [" << format_double(*r.b_min) << ", " << format_double(*r.b_max) << "]\n";
  if (r.characterization_pass) {
    os << "characterization  max " << format_double(r.max_characterization_residual.value_or(0.0));
    if (r.c_mean) os << "  c " << format_double(*r.c_mean) << " +- " << format_double(*r.c_spread);
    os << "  " << (*r.characterization_pass ? "pass" : "FAIL") << '\n';
  }
  os << "result        " << (r.pass ? "PASS" : "FAIL") << '\n';
  return os.str();
}

std::string catalog_text(const std::vector<CatalogInfo>& entries) {
  std::ostringstream os;
  for (const auto& e : entries) {
    os << e.name << "  (n=" << e.dim << ", " << to_string(e.kind) << ", K = " << e.K_formula << ")\n";
    os << "    " << e.description << '\n';
    for (const auto& p : e.params) {
      os << "    " << p.name << " = " << format_double(p.default_value) << "  in [" << format_double(p.min) << ", "
         << format_double(p.max) << "]" << (p.integer ? " integer" : "") << "  " << p.description << '\n';
    }
    if (!e.aliases.empty()) {
      os << "    aliases:";
      for (const auto& a : e.aliases) os << ' ' << a;
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace finsler::cli
