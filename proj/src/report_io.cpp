#include "reckern/report_io.hpp"

#include "reckern/errors.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace reckern {

namespace {

std::string
optional_text(const std::optional<double>& value)
{
  return value ? format_double(*value) : "NA";
}

void
write_x_header(std::ostream& out, std::size_t dim)
{
  if (dim == 1) {
    out << "x";
    return;
  }
  for (std::size_t j = 0; j < dim; ++j)
    out << (j ? "," : "") << "x_" << j + 1;
}

void
write_point(std::ostream& out, const Point& x)
{
  for (std::size_t j = 0; j < x.size(); ++j)
    out << (j ? "," : "") << format_double(x[j]);
}

nlohmann::json
json_number(double value)
{
  // NaN/inf have no JSON representation
  if (!std::isfinite(value))
    return nullptr;
  return value;
}

nlohmann::json
ks_json(const std::optional<stats::KsResult>& ks)
{
  if (!ks)
    return nullptr;
  return { { "d_stat", ks->d_stat },
           { "n_eff", ks->n_eff },
           { "critical_01", ks->critical_01 },
           { "pass", ks->pass } };
}

std::vector<std::string>
split_line(const std::string& line)
{
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ','))
    fields.push_back(field);
  if (!line.empty() && line.back() == ',')
    fields.emplace_back();
  for (auto& f : fields) {
    const auto first = f.find_first_not_of(" \t\r");
    const auto last = f.find_last_not_of(" \t\r");
    f = first == std::string::npos ? "" : f.substr(first, last - first + 1);
  }
  return fields;
}

} // namespace

void
write_replicates_csv(const McReport& report, std::ostream& out)
{
  out << "replicate,";
  write_x_header(out, report.dim);
  out << ",f_hat,phi_hat,r_hat,T_oracle,T_plugin\n";
  for (const auto& rec : report.records) {
    out << rec.replicate << ",";
    write_point(out, report.points[rec.grid_index].x);
    out << "," << format_double(rec.f_hat) << "," << format_double(rec.phi_hat) << ","
        << optional_text(rec.r_hat) << "," << optional_text(rec.t_oracle) << ","
        << optional_text(rec.t_plugin) << "\n";
  }
}

nlohmann::json
summary_json(const McReport& report, const std::vector<CheckResult>& checks)
{
  nlohmann::json root;
  std::vector<std::string> statistic_names;
  for (auto s : report.statistics.members())
    statistic_names.push_back(to_string(s));
  root["plan"] = { { "n", report.n },
                   { "replicates", report.replicates },
                   { "seed", report.seed },
                   { "ell", report.ell },
                   { "nu", report.nu },
                   { "c", report.c },
                   { "dim", report.dim },
                   { "truncation", report.truncation },
                   { "bias_term", report.bias == BiasTerm::include ? "include" : "cancel" },
                   { "statistics", statistic_names } };
  root["exceedance_total"] = report.exceedance_total;

  auto& points = root["points"] = nlohmann::json::array();
  for (const auto& p : report.points) {
    const auto& t = p.theory;
    nlohmann::json point;
    point["x"] = p.x;
    point["theory"] = { { "f", t.f },
                        { "r", t.r },
                        { "phi", t.phi },
                        { "V", t.v },
                        { "b_f", t.b_f },
                        { "b_phi", t.b_phi },
                        { "h_n", t.h_n },
                        { "bias_ratio", t.bias_ratio },
                        { "expected_bias_f", t.expected_bias_f },
                        { "expected_bias_phi", t.expected_bias_phi },
                        { "sigma_sq", t.clt.sigma_sq },
                        { "var_phi_limit", t.var_phi_limit },
                        { "cov_limit", t.cov_limit },
                        { "bias_bn", t.clt.bias_bn },
                        { "sd_limit", t.clt.sd_limit },
                        { "scale", t.clt.scale } };
    point["empirical"] = { { "mean_f", json_number(p.mean_f) },
                           { "var_f", json_number(p.var_f) },
                           { "mean_phi", json_number(p.mean_phi) },
                           { "var_phi", json_number(p.var_phi) },
                           { "mean_phi_tilde", json_number(p.mean_phi_tilde) },
                           { "var_phi_tilde", json_number(p.var_phi_tilde) },
                           { "cov_f_phi_tilde", json_number(p.cov_f_phi_tilde) },
                           { "mean_r", json_number(p.mean_r) },
                           { "var_r", json_number(p.var_r) },
                           { "scaled_var_f", json_number(p.scaled_var_f) },
                           { "scaled_var_phi_tilde", json_number(p.scaled_var_phi_tilde) },
                           { "scaled_cov", json_number(p.scaled_cov) },
                           { "undefined_count", p.undefined_count },
                           { "max_truncation_gap", p.max_truncation_gap } };
    point["ks"] = { { "clt_oracle", ks_json(p.ks_oracle) },
                    { "clt_plugin", ks_json(p.ks_plugin) } };
    points.push_back(std::move(point));
  }

  auto& out = root["checks"] = nlohmann::json::array();
  bool all_pass = true;
  for (const auto& c : checks) {
    out.push_back({ { "name", c.name },
                    { "x", c.x },
                    { "observed", json_number(c.observed) },
                    { "expected", json_number(c.expected) },
                    { "tolerance", json_number(c.tolerance) },
                    { "pass", c.pass },
                    { "detail", c.detail } });
    all_pass = all_pass && c.pass;
  }
  root["all_checks_pass"] = all_pass;
  return root;
}

void
write_snapshot_csv(const RecursiveEstimator& estimator, std::ostream& out)
{
  const auto& grid = estimator.config().grid;
  write_x_header(out, estimator.config().dim());
  out << ",f_hat,r_hat,phi_hat,n\n";
  for (std::size_t g = 0; g < grid.size(); ++g) {
    write_point(out, grid[g]);
    out << "," << format_double(estimator.f_hat(g)) << ","
        << optional_text(estimator.r_hat(g)) << "," << format_double(estimator.phi_hat(g))
        << "," << estimator.n() << "\n";
  }
}

std::vector<DataRow>
read_observations_csv(std::istream& in, std::size_t dim)
{
  std::string line;
  if (!std::getline(in, line))
    throw IoError("no observations: data file is empty");
  const auto header = split_line(line);

  for (std::size_t j = 0; j < dim; ++j) {
    const std::string expected = "x_" + std::to_string(j + 1);
    const bool alias = dim == 1 && j < header.size() && header[j] == "x";
    if (j >= header.size() || (header[j] != expected && !alias))
      throw IoError("missing column '" + expected + "' at position " +
                    std::to_string(j + 1));
  }
  std::size_t y_count = header.size() - std::min(header.size(), dim);
  if (y_count == 0)
    throw IoError("missing column 'y'");
  for (std::size_t k = 0; k < y_count; ++k) {
    const auto& name = header[dim + k];
    const bool ok = (y_count == 1 && name == "y") || name == "y_" + std::to_string(k + 1);
    if (!ok)
      throw IoError("unexpected column '" + name + "' (expected " +
                    (y_count == 1 ? std::string("y") : "y_" + std::to_string(k + 1)) + ")");
  }

  std::vector<DataRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    const auto fields = split_line(line);
    if (fields.size() != header.size())
      throw IoError("line " + std::to_string(line_no) + ": expected " +
                    std::to_string(header.size()) + " fields, got " +
                    std::to_string(fields.size()));
    DataRow row;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      double value = 0.0;
      const auto& f = fields[k];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (ec != std::errc() || ptr != f.data() + f.size())
        throw IoError("line " + std::to_string(line_no) + ": column '" + header[k] +
                      "' is not a number: '" + f + "'");
      (k < dim ? row.x : row.y).push_back(value);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw IoError("no observations");
  return rows;
}

} // namespace reckern
