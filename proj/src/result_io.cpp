#include "spinmf/error.hpp"
#include "spinmf/pipeline.hpp"
#include "spinmf/text_io.hpp"

#include <sstream>

namespace spinmf {

namespace {

using nlohmann::json;

json fit_to_json(const FitDiagnostics& f) {
  return {{"slope_stderr", json_number(f.slope_stderr)},
          {"r2", json_number(f.r2)},
          {"eps_lo", json_number(f.eps_lo)},
          {"eps_hi", json_number(f.eps_hi)},
          {"points", f.points}};
}

const json& field(const json& j, const char* name, const std::string& where = "result") {
  auto it = j.find(name);
  if (it == j.end()) fail(ErrorKind::Parse, "missing field '" + std::string(name) + "' in " + where);
  return *it;
}

template <class Fn>
auto read_field(const json& j, const char* name, Fn&& fn, const std::string& where = "result") {
  const json& value = field(j, name, where);
  try {
    return fn(value);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Parse) throw;
    fail(ErrorKind::Parse, "field '" + std::string(name) + "' in " + where + ": " + e.what());
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, "field '" + std::string(name) + "' in " + where + ": " + e.what());
  }
}

std::vector<double> read_doubles(const json& j, const char* name) {
  return read_field(j, name, [](const json& v) {
    if (!v.is_array()) fail(ErrorKind::Parse, "expected an array");
    return doubles_from_json(v);
  });
}

double read_double(const json& j, const char* name, const std::string& where = "result") {
  return read_field(j, name, [](const json& v) { return double_from_json(v); }, where);
}

FitDiagnostics fit_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) fail(ErrorKind::Parse, where + " must be an object");
  FitDiagnostics f;
  f.slope_stderr = read_double(j, "slope_stderr", where);
  f.r2 = read_double(j, "r2", where);
  f.eps_lo = read_double(j, "eps_lo", where);
  f.eps_hi = read_double(j, "eps_hi", where);
  f.points = read_field(j, "points", [](const json& v) { return v.get<std::size_t>(); }, where);
  return f;
}

void write_columns(std::ostream& out, const char* header, const std::vector<double>& x,
                   const std::vector<double>& y) {
  out << header << '\n';
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
    out << format_double(x[i]) << ',' << format_double(y[i]) << '\n';
}

}  // namespace

json result_to_json(const MfaResult& r) {
  json fits = json::array();
  for (const auto& f : r.fits) fits.push_back(fit_to_json(f));
  json log_z = json::array();
  for (const auto& row : r.log_z) log_z.push_back(json_array(row));
  return {
      {"schema_version", kResultSchemaVersion},
      {"q", json_array(r.q)},
      {"tau", json_array(r.tau)},
      {"hurst", json_array(r.hurst)},
      {"dims", json_array(r.dims)},
      {"alpha", json_array(r.alpha)},
      {"f", json_array(r.f)},
      {"heat_q", json_array(r.heat_q)},
      {"heat", json_array(r.heat)},
      {"d0", json_number(r.d0)},
      {"d1", json_number(r.d1)},
      {"tau_q1", json_number(r.tau_q1)},
      {"fits", fits},
      {"d0_fit", fit_to_json(r.d0_fit)},
      {"d1_fit", fit_to_json(r.d1_fit)},
      {"node_count", r.node_count},
      {"log_eps", json_array(r.log_eps)},
      {"box_counts", r.box_counts},
      {"log_z", log_z},
      {"fit_indices", r.fit_indices},
      {"warnings", r.warnings},
      {"provenance", r.provenance},
  };
}

MfaResult result_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorKind::Parse, "result must be a JSON object");
  const int version = read_field(j, "schema_version", [](const json& v) { return v.get<int>(); });
  if (version > kResultSchemaVersion)
    fail(ErrorKind::SchemaVersion, "result schema_version " + std::to_string(version) +
                                       " is newer than supported version " +
                                       std::to_string(kResultSchemaVersion));
  if (version < 1) fail(ErrorKind::Parse, "invalid schema_version " + std::to_string(version));

  MfaResult r;
  r.q = read_doubles(j, "q");
  r.tau = read_doubles(j, "tau");
  r.hurst = read_doubles(j, "hurst");
  r.dims = read_doubles(j, "dims");
  r.alpha = read_doubles(j, "alpha");
  r.f = read_doubles(j, "f");
  r.heat_q = read_doubles(j, "heat_q");
  r.heat = read_doubles(j, "heat");
  r.d0 = read_double(j, "d0");
  r.d1 = read_double(j, "d1");
  r.tau_q1 = read_double(j, "tau_q1");
  r.fits = read_field(j, "fits", [](const json& v) {
    if (!v.is_array()) fail(ErrorKind::Parse, "expected an array");
    std::vector<FitDiagnostics> fits;
    for (std::size_t i = 0; i < v.size(); ++i) fits.push_back(fit_from_json(v[i], "fits[" + std::to_string(i) + "]"));
    return fits;
  });
  r.d0_fit = fit_from_json(field(j, "d0_fit"), "d0_fit");
  r.d1_fit = fit_from_json(field(j, "d1_fit"), "d1_fit");
  r.node_count = read_field(j, "node_count", [](const json& v) { return v.get<int>(); });
  r.log_eps = read_doubles(j, "log_eps");
  r.box_counts = read_field(j, "box_counts", [](const json& v) { return v.get<std::vector<std::size_t>>(); });
  r.log_z = read_field(j, "log_z", [](const json& v) {
    if (!v.is_array()) fail(ErrorKind::Parse, "expected an array");
    std::vector<std::vector<double>> rows;
    for (const auto& row : v) rows.push_back(doubles_from_json(row));
    return rows;
  });
  r.fit_indices = read_field(j, "fit_indices", [](const json& v) { return v.get<std::vector<std::size_t>>(); });
  r.warnings = read_field(j, "warnings", [](const json& v) { return v.get<std::vector<std::string>>(); });
  r.provenance = field(j, "provenance");

  const std::size_t nq = r.q.size();
  if (r.tau.size() != nq || r.hurst.size() != nq || r.dims.size() != nq || r.alpha.size() != nq ||
      r.f.size() != nq || r.fits.size() != nq || r.log_z.size() != nq)
    fail(ErrorKind::Parse, "per-q arrays in result disagree in length");
  if (r.heat_q.size() != r.heat.size()) fail(ErrorKind::Parse, "field 'heat' does not match 'heat_q'");
  if (r.box_counts.size() != r.log_eps.size()) fail(ErrorKind::Parse, "field 'box_counts' does not match 'log_eps'");
  return r;
}

std::string result_json_text(const MfaResult& result) { return result_to_json(result).dump(2) + "\n"; }

void write_result(const MfaResult& result, const std::filesystem::path& path) {
  write_text_file(path, result_json_text(result));
}

MfaResult read_result(const std::filesystem::path& path) {
  return result_from_json(parse_json(read_text_file(path), path.string()));
}

void write_hurst_csv(const MfaResult& r, std::ostream& out) { write_columns(out, "q,H", r.q, r.hurst); }

void write_spectrum_csv(const MfaResult& r, std::ostream& out) {
  LegendreSpectrum spectrum{r.alpha, r.f};
  out << "alpha,f\n";
  for (std::size_t i : spectrum.order_by_alpha())
    out << format_double(r.alpha[i]) << ',' << format_double(r.f[i]) << '\n';
}

void write_heat_csv(const MfaResult& r, std::ostream& out) { write_columns(out, "q,C", r.heat_q, r.heat); }

void write_dims_csv(const MfaResult& r, std::ostream& out) { write_columns(out, "q,D", r.q, r.dims); }

void write_scaling_csv(const MfaResult& r, std::ostream& out) {
  out << "log_eps,box_count";
  for (double q : r.q) out << ",log_Z_q" << format_double(q);
  out << '\n';
  for (std::size_t k = 0; k < r.log_eps.size(); ++k) {
    out << format_double(r.log_eps[k]) << ',' << r.box_counts[k];
    for (const auto& row : r.log_z) out << ',' << format_double(row[k]);
    out << '\n';
  }
}

void write_result_directory(const MfaResult& result, const std::filesystem::path& dir) {
  ensure_writable_directory(dir);
  write_result(result, dir / "result.json");
  const std::pair<const char*, void (*)(const MfaResult&, std::ostream&)> files[] = {
      {"hurst.csv", write_hurst_csv}, {"spectrum.csv", write_spectrum_csv}, {"heat.csv", write_heat_csv},
      {"dims.csv", write_dims_csv},   {"scaling.csv", write_scaling_csv},
  };
  for (const auto& [name, writer] : files) {
    std::ostringstream text;
    writer(result, text);
    write_text_file(dir / name, text.str());
  }
}

}  // namespace spinmf
