#include "reckern/config.hpp"

#include "reckern/errors.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace reckern {

namespace {

struct Entry
{
  std::string value;
  std::size_t line;
};

const std::set<std::string, std::less<>> known_keys = {
  "model.dim",          "kernel",           "estimator.ell",    "estimator.grid",
  "estimator.transform", "bandwidth.c",     "bandwidth.nu",     "truncation.delta",
  "truncation.theta",   "model.name",       "model.rho_ar",     "model.noise_sd",
  "model.regression",   "seed",             "experiment.n",     "experiment.replicates",
  "experiment.statistics", "experiment.bias", "output.dir",
};

std::string_view
trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double
to_double(std::string_view text, const std::string& what, std::size_t line)
{
  text = trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ParseError(what + ": expected a number, got '" + std::string(text) + "'", line);
  return value;
}

std::uint64_t
to_unsigned(std::string_view text, const std::string& what, std::size_t line)
{
  text = trim(text);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    // allow integral values written in floating notation, e.g. 1e4
    const double d = to_double(text, what, line);
    if (!(d >= 0.0) || d != static_cast<double>(static_cast<std::uint64_t>(d)))
      throw ParseError(what + ": expected a nonnegative integer, got '" +
                         std::string(text) + "'",
                       line);
    return static_cast<std::uint64_t>(d);
  }
  return value;
}

class Entries
{
public:
  explicit Entries(std::map<std::string, Entry> entries)
    : entries_(std::move(entries))
  {}

  const Entry* find(const std::string& key) const
  {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  const Entry& require(const std::string& key) const
  {
    if (const auto* e = find(key))
      return *e;
    throw ParseError("missing required key '" + key + "'");
  }

  double number(const std::string& key) const
  {
    const auto& e = require(key);
    return to_double(e.value, key, e.line);
  }
  double number(const std::string& key, double fallback) const
  {
    const auto* e = find(key);
    return e ? to_double(e->value, key, e->line) : fallback;
  }
  std::uint64_t integer(const std::string& key) const
  {
    const auto& e = require(key);
    return to_unsigned(e.value, key, e.line);
  }
  std::uint64_t integer(const std::string& key, std::uint64_t fallback) const
  {
    const auto* e = find(key);
    return e ? to_unsigned(e->value, key, e->line) : fallback;
  }
  std::string text(const std::string& key, std::string fallback) const
  {
    const auto* e = find(key);
    return e ? e->value : fallback;
  }

private:
  std::map<std::string, Entry> entries_;
};

template<typename Fn>
auto
at_line(const Entries& entries, const std::string& key, Fn&& fn)
{
  const auto* e = entries.find(key);
  try {
    return fn();
  } catch (const ArgumentError& err) {
    throw ParseError(key + ": " + err.what(), e ? e->line : 0);
  }
}

} // namespace

Point
parse_point(std::string_view text, std::size_t dim)
{
  Point p;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos)
      end = text.size();
    p.push_back(to_double(text.substr(start, end - start), "coordinate", 0));
    start = end + 1;
  }
  if (p.size() != dim)
    throw ArgumentError("point '" + std::string(trim(text)) + "' has dimension " +
                        std::to_string(p.size()) + ", expected " + std::to_string(dim));
  return p;
}

Config
parse_config(std::string_view text)
{
  std::map<std::string, Entry> raw;
  std::istringstream stream{ std::string(text) };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos)
      view = view.substr(0, hash);
    view = trim(view);
    if (view.empty())
      continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("expected 'key = value', got '" + std::string(view) + "'", line_no);
    const std::string key(trim(view.substr(0, eq)));
    const std::string value(trim(view.substr(eq + 1)));
    if (key.empty())
      throw ParseError("empty key", line_no);
    if (!known_keys.contains(key))
      throw ParseError("unknown key '" + key + "'", line_no);
    if (raw.contains(key))
      throw ParseError("duplicate key '" + key + "' (first set on line " +
                         std::to_string(raw[key].line) + ")",
                       line_no);
    if (value.empty())
      throw ParseError("key '" + key + "' has an empty value", line_no);
    raw[key] = { value, line_no };
  }

  const Entries entries(std::move(raw));
  Config cfg;
  cfg.dim = entries.integer("model.dim", 1);
  if (cfg.dim == 0)
    throw ParseError("model.dim must be >= 1", entries.find("model.dim")->line);
  cfg.kernel = entries.text("kernel", cfg.kernel);
  at_line(entries, "kernel", [&] { return kernel_family_from_name(cfg.kernel); });
  cfg.ell = entries.number("estimator.ell");
  cfg.c = entries.number("bandwidth.c");
  cfg.nu = entries.number("bandwidth.nu");

  const auto& grid = entries.require("estimator.grid");
  {
    std::string_view list(grid.value);
    std::size_t start = 0;
    while (start <= list.size()) {
      auto end = list.find(';', start);
      if (end == std::string_view::npos)
        end = list.size();
      const auto item = trim(list.substr(start, end - start));
      if (!item.empty()) {
        try {
          cfg.grid.push_back(parse_point(item, cfg.dim));
        } catch (const ArgumentError& err) {
          throw ParseError(std::string("estimator.grid: ") + err.what(), grid.line);
        } catch (const ParseError& err) {
          throw ParseError(std::string("estimator.grid: ") + err.what(), grid.line);
        }
      }
      start = end + 1;
    }
    if (cfg.grid.empty())
      throw ParseError("estimator.grid: no points", grid.line);
  }

  cfg.transform = entries.text("estimator.transform", cfg.transform);
  at_line(entries, "estimator.transform",
          [&] { return ResponseTransform::by_name(cfg.transform); });

  const auto* delta = entries.find("truncation.delta");
  const auto* theta = entries.find("truncation.theta");
  if (delta || theta) {
    if (!delta)
      throw ParseError("missing required key 'truncation.delta' (truncation.theta is set)");
    if (!theta)
      throw ParseError("missing required key 'truncation.theta' (truncation.delta is set)");
    cfg.truncation = Truncation{ entries.number("truncation.delta"),
                                 entries.number("truncation.theta") };
  }

  cfg.model_name = entries.text("model.name", cfg.model_name);
  if (cfg.model_name != "ar1")
    throw ParseError("model.name: unknown model '" + cfg.model_name + "' (expected ar1)",
                     entries.find("model.name")->line);
  cfg.rho_ar = entries.number("model.rho_ar");
  cfg.noise_sd = entries.number("model.noise_sd");
  const auto& regression = entries.require("model.regression");
  cfg.regression = at_line(entries, "model.regression",
                           [&] { return regression_shape_from_name(regression.value); });

  cfg.seed = entries.integer("seed", cfg.seed);
  cfg.n = entries.integer("experiment.n");
  cfg.replicates = entries.integer("experiment.replicates");
  if (const auto* s = entries.find("experiment.statistics"))
    cfg.statistics = at_line(entries, "experiment.statistics",
                             [&] { return StatisticSet::parse(s->value); });
  const auto bias = entries.text("experiment.bias", "include");
  if (bias == "include")
    cfg.bias = BiasTerm::include;
  else if (bias == "cancel")
    cfg.bias = BiasTerm::cancel;
  else
    throw ParseError("experiment.bias: expected include | cancel, got '" + bias + "'",
                     entries.find("experiment.bias")->line);
  cfg.output_dir = entries.text("output.dir", cfg.output_dir);
  return cfg;
}

Config
load_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot read config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str());
  } catch (const ParseError& err) {
    throw ParseError(path.string() + ": " + err.what());
  }
}

EstimatorConfig
Config::estimator_config() const
{
  try {
    EstimatorConfig cfg{ Kernel::from_name(kernel, dim),
                         BandwidthSchedule(c, nu, dim, ell),
                         grid,
                         truncation,
                         ResponseTransform::by_name(transform) };
    cfg.validate();
    return cfg;
  } catch (const ArgumentError& err) {
    throw ConfigError(err.what());
  }
}

ModelTruth
Config::model() const
{
  try {
    return make_ar1_model(rho_ar, noise_sd, regression, dim);
  } catch (const ArgumentError& err) {
    throw ConfigError(err.what());
  }
}

ExperimentPlan
Config::plan() const
{
  ExperimentPlan p{ model(), estimator_config(), n, replicates, seed, statistics, bias, 0 };
  return p;
}

} // namespace reckern
