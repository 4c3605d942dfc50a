#include "prcsync/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "prcsync/errors.hpp"

namespace prcsync {

using nlohmann::json;

json prc_to_json(const Prc& prc) {
  const auto c = prc.cos_coeffs();
  const auto s = prc.sin_coeffs();
  return json{{"cos", std::vector<double>(c.begin(), c.end())},
              {"sin", std::vector<double>(s.begin(), s.end())}};
}

Prc prc_from_json(const json& j) {
  if (!j.is_object() || !j.contains("cos") || !j.contains("sin")) {
    throw InvalidArgument("PRC JSON needs \"cos\" and \"sin\" arrays");
  }
  try {
    const auto c = j.at("cos").get<std::vector<double>>();
    const auto s = j.at("sin").get<std::vector<double>>();
    return Prc::from_fourier(c, s);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed PRC JSON: ") + e.what());
  }
}

Prc load_prc_file(const std::filesystem::path& path) { return prc_from_json(read_json(path)); }

json solution_to_json(const BvpSolution& sol) {
  json j = prc_to_json(sol.delta);
  j["nu1"] = sol.nu1;
  j["sigma"] = sol.sigma;
  j["residuals"] = {{"ode", sol.residuals.ode},
                    {"constraint", sol.residuals.constraint},
                    {"periodicity", sol.residuals.periodicity}};
  j["iterations"] = sol.iterations;
  return j;
}

void to_json(json& j, const RunConfig& cfg) {
  j = json{{"command", cfg.command},   {"a", cfg.a},
           {"b", cfg.b},               {"c", cfg.c},
           {"sigma", cfg.sigma},       {"sigmas", cfg.sigmas},
           {"prc", cfg.prc},           {"prc_coeffs", cfg.prc_coeffs},
           {"method", cfg.method},     {"methods", cfg.methods},
           {"order", cfg.order},       {"grid", cfg.grid},
           {"bins", cfg.bins},         {"modes", cfg.modes},
           {"dt", cfg.dt},             {"T", cfg.duration},
           {"burn_in", cfg.burn_in},   {"theta0", cfg.theta0},
           {"realizations", cfg.realizations},
           {"oscillators", cfg.oscillators},
           {"record_every", cfg.record_every},
           {"seed", cfg.seed},         {"out", cfg.out},
           {"format", cfg.format}};
}

void from_json(const json& j, RunConfig& cfg) {
  RunConfig d;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key) && !j.at(key).is_null()) j.at(key).get_to(field);
  };
  get("command", d.command);
  get("a", d.a);
  get("b", d.b);
  get("c", d.c);
  get("sigma", d.sigma);
  get("sigmas", d.sigmas);
  get("prc", d.prc);
  if (j.contains("prc_coeffs")) d.prc_coeffs = j.at("prc_coeffs");
  get("method", d.method);
  get("methods", d.methods);
  get("order", d.order);
  get("grid", d.grid);
  get("bins", d.bins);
  get("modes", d.modes);
  get("dt", d.dt);
  get("T", d.duration);
  get("burn_in", d.burn_in);
  get("theta0", d.theta0);
  get("realizations", d.realizations);
  get("oscillators", d.oscillators);
  get("record_every", d.record_every);
  get("seed", d.seed);
  get("out", d.out);
  get("format", d.format);
  cfg = std::move(d);
}

namespace {

void write_any(const std::filesystem::path& path, const std::string& format,
               const std::string* label_header, const std::vector<std::string>* labels,
               const std::vector<std::string>& headers,
               const std::vector<std::vector<double>>& columns) {
  if (headers.size() != columns.size()) throw InvalidArgument("header/column count mismatch");
  const std::size_t rows =
      labels ? labels->size() : (columns.empty() ? 0 : columns.front().size());
  for (const auto& col : columns) {
    if (col.size() != rows) throw InvalidArgument("table columns differ in length");
  }
  if (format == "json") {
    json j = json::object();
    if (labels) j[*label_header] = *labels;
    for (std::size_t i = 0; i < headers.size(); ++i) {
      json arr = json::array();
      // JSON has no NaN; missing values become null.
      for (double v : columns[i]) arr.push_back(std::isfinite(v) ? json(v) : json(nullptr));
      j[headers[i]] = std::move(arr);
    }
    write_json(path, j);
    return;
  }
  if (format != "csv") throw InvalidArgument("output format must be csv or json");
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  if (labels) os << *label_header << (headers.empty() ? "" : ",");
  for (std::size_t i = 0; i < headers.size(); ++i) os << (i ? "," : "") << headers[i];
  os << '\n';
  char buf[32];
  for (std::size_t r = 0; r < rows; ++r) {
    if (labels) os << (*labels)[r] << (columns.empty() ? "" : ",");
    for (std::size_t i = 0; i < columns.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", columns[i][r]);
      os << (i ? "," : "") << buf;
    }
    os << '\n';
  }
  if (!os) throw Error("write to " + path.string() + " failed");
}

}  // namespace

void write_table(const std::filesystem::path& path, const std::string& format,
                 const std::vector<std::string>& headers,
                 const std::vector<std::vector<double>>& columns) {
  write_any(path, format, nullptr, nullptr, headers, columns);
}

void write_labelled_table(const std::filesystem::path& path, const std::string& format,
                          const std::string& label_header, const std::vector<std::string>& labels,
                          const std::vector<std::string>& headers,
                          const std::vector<std::vector<double>>& columns) {
  write_any(path, format, &label_header, &labels, headers, columns);
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
  if (!os) throw Error("write to " + path.string() + " failed");
}

json read_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot open " + path.string());
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("invalid JSON in " + path.string() + ": " + e.what());
  }
}

json make_sidecar(const RunConfig& cfg, const json& timings, const json& results) {
  return json{{"config", cfg}, {"version", kVersion}, {"timings", timings}, {"results", results}};
}

}  // namespace prcsync
