#include "tiletopo/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <sstream>

namespace tiletopo {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ',' || std::isspace(static_cast<unsigned char>(s[i])))) ++i;
    const std::size_t j = i;
    while (i < s.size() && s[i] != ',' && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > j) out.push_back(s.substr(j, i - j));
  }
  return out;
}

template <class T>
T parse_integer(std::string_view text, int line, std::string_view key) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(line, std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

Rational parse_q(std::string_view text, int line, std::string_view key) {
  try {
    return parse_rational(text);
  } catch (const Error& e) {
    throw ConfigError(line, std::string(key) + ": " + e.what());
  }
}

std::vector<Rational> parse_q_list(std::string_view text, int line, std::string_view key) {
  std::vector<Rational> v;
  for (auto item : split_list(text)) v.push_back(parse_q(item, line, key));
  if (v.empty()) throw ConfigError(line, std::string(key) + ": empty list");
  return v;
}

std::size_t parse_count(std::string_view text, int line, std::string_view key) {
  return parse_integer<std::size_t>(trim(text), line, key);
}

double parse_real(std::string_view text, int line, std::string_view key) {
  return to_double(parse_q(trim(text), line, key));
}

// "a3" / "u3" -> 3
std::size_t indexed_key(std::string_view key, char letter, int line) {
  if (key.size() < 2 || key.front() != letter) throw ConfigError(line, "unknown key '" + std::string(key) + "'");
  return parse_integer<std::size_t>(key.substr(1), line, key);
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ' ';
    if constexpr (std::is_same_v<T, Rational>) {
      os << to_string(v[i]);
    } else {
      os << v[i];
    }
  }
  return os.str();
}

std::string join(const QVec& v) { return join(v.data()); }

std::string real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void RunConfig::set(std::string_view section, std::string_view key, std::string_view value, int line) {
  value = trim(value);
  const std::string where = std::string(section) + "." + std::string(key);
  if (section == "pair") {
    if (key == "p") {
      p.clear();
      for (auto item : split_list(value)) p.push_back(parse_integer<int>(item, line, where));
      if (p.size() < 2) throw ConfigError(line, "pair.p needs at least two entries (d >= 2)");
    } else if (key == "s") {
      s = parse_q_list(value, line, where);
    } else if (key == "digits") {
      if (value == "standard") {
        digits = DigitKind::standard;
      } else if (value == "layered") {
        digits = DigitKind::layered;
      } else {
        throw ConfigError(line, "pair.digits must be 'standard' or 'layered', got '" + std::string(value) + "'");
      }
    } else {
      throw ConfigError(line, "unknown key '" + where + "'");
    }
  } else if (section == "offsets") {
    const std::size_t k = indexed_key(key, 'a', line);
    if (offsets.size() <= k) offsets.resize(k + 1);
    offsets[k] = QVec(parse_q_list(value, line, where));
  } else if (section == "profile") {
    if (key == "b") {
      b = parse_q(value, line, where);
    } else if (key == "epsilon") {
      epsilon = parse_q(value, line, where);
    } else {
      const std::size_t k = indexed_key(key, 'u', line);
      if (k < 1) throw ConfigError(line, "profile offsets are numbered from u1");
      if (u.size() < k) u.resize(k);
      u[k - 1] = QVec(parse_q_list(value, line, where));
    }
  } else if (section == "run") {
    if (key == "level") {
      level = parse_integer<int>(value, line, where);
    } else if (key == "depth") {
      depth = parse_integer<int>(value, line, where);
    } else if (key == "pairs") {
      pairs = parse_count(value, line, where);
    } else if (key == "delta") {
      delta = parse_real(value, line, where);
    } else if (key == "tolerance") {
      tolerance = parse_real(value, line, where);
    } else if (key == "stabilization_limit") {
      stabilization_limit = parse_integer<int>(value, line, where);
    } else if (key == "height_depth") {
      height_depth = parse_integer<int>(value, line, where);
    } else if (key == "height_samples") {
      height_samples = parse_count(value, line, where);
    } else if (key == "grid") {
      grid = parse_count(value, line, where);
    } else if (key == "layers_grid") {
      layers_grid = parse_count(value, line, where);
    } else if (key == "resolution") {
      resolution = parse_count(value, line, where);
    } else if (key == "raster") {
      raster = parse_count(value, line, where);
    } else if (key == "budget") {
      budget = parse_count(value, line, where);
    } else if (key == "seed") {
      seed = parse_integer<std::uint64_t>(value, line, where);
    } else if (key == "checks") {
      checks.clear();
      for (auto item : split_list(value)) {
        if (item != "injectivity" && item != "height" && item != "convergence") {
          throw ConfigError(line, "unknown check '" + std::string(item) + "'");
        }
        checks.emplace_back(item);
      }
    } else {
      throw ConfigError(line, "unknown key '" + where + "'");
    }
  } else {
    throw ConfigError(line, "unknown section '" + std::string(section) + "'");
  }
}

RunConfig parse_config(std::istream& is) {
  RunConfig cfg;
  std::string raw, section;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "unterminated section header");
      section = std::string(trim(s.substr(1, s.size() - 2)));
      if (section != "pair" && section != "offsets" && section != "profile" && section != "run") {
        throw ConfigError(line, "unknown section '" + section + "'");
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line, "expected 'key = value'");
    if (section.empty()) throw ConfigError(line, "key outside of any section");
    cfg.set(section, trim(s.substr(0, eq)), s.substr(eq + 1), line);
  }
  if (cfg.p.empty()) throw ConfigError(0, "missing pair.p");
  return cfg;
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
    throw ConfigError(0, "override must look like section.key=value, got '" + std::string(assignment) + "'");
  }
  cfg.set(trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)), assignment.substr(eq + 1), 0);
}

SelfAffinePair RunConfig::pair() const {
  if (p.size() < 2) throw ConfigError(0, "pair.p needs at least two entries (d >= 2)");
  if (s.size() != p.size() - 1) {
    throw ConfigError(0, "pair.s needs d - 1 = " + std::to_string(p.size() - 1) + " entries, got " +
                             std::to_string(s.size()));
  }
  if (digits == DigitKind::standard) {
    if (!offsets.empty()) throw ConfigError(0, "[offsets] given but pair.digits is standard");
    return SelfAffinePair::standard(p, s);
  }
  const auto r = static_cast<std::size_t>(std::abs(p.back()));
  if (offsets.size() != r) {
    throw ConfigError(0, "layered digits need offsets a0..a" + std::to_string(r - 1));
  }
  std::vector<QVec> a;
  for (std::size_t k = 0; k < r; ++k) {
    if (!offsets[k]) throw ConfigError(0, "missing offsets.a" + std::to_string(k));
    a.push_back(*offsets[k]);
  }
  return SelfAffinePair::layered(p, s, std::move(a));
}

PathProfile<double> RunConfig::profile(const SelfAffinePair& pair) const {
  const int r = std::abs(pair.vertical_scale());
  const double bb = b ? to_double(*b) : 1.0;
  const double eps = epsilon ? to_double(*epsilon) : bb / (4.0 * r);
  std::vector<Vec> offs;
  if (u.empty()) {
    offs = default_profile(pair).offsets();
  } else {
    if (u.size() != static_cast<std::size_t>(r - 1)) {
      throw ConfigError(0, "profile needs u1..u" + std::to_string(r - 1));
    }
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (!u[k]) throw ConfigError(0, "missing profile.u" + std::to_string(k + 1));
      offs.push_back(to_double(*u[k]));
    }
  }
  return PathProfile<double>(r, bb, eps, std::move(offs));
}

std::vector<std::string> RunConfig::echo() const {
  std::vector<std::string> e;
  e.push_back("pair.p=" + join(p));
  e.push_back("pair.s=" + join(s));
  e.push_back(std::string("pair.digits=") + (digits == DigitKind::standard ? "standard" : "layered"));
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    if (offsets[k]) e.push_back("offsets.a" + std::to_string(k) + "=" + join(*offsets[k]));
  }
  e.push_back("profile.b=" + (b ? to_string(*b) : std::string("1")));
  e.push_back("profile.epsilon=" + (epsilon ? to_string(*epsilon) : std::string("b/(4r)")));
  if (u.empty()) e.push_back("profile.u=tile");
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k]) e.push_back("profile.u" + std::to_string(k + 1) + "=" + join(*u[k]));
  }
  e.push_back("run.level=" + std::to_string(level));
  e.push_back("run.depth=" + std::to_string(depth));
  e.push_back("run.pairs=" + std::to_string(pairs));
  e.push_back("run.delta=" + real(delta));
  e.push_back("run.tolerance=" + real(tolerance));
  e.push_back("run.stabilization_limit=" + std::to_string(stabilization_limit));
  e.push_back("run.height_depth=" + std::to_string(height_depth));
  e.push_back("run.height_samples=" + std::to_string(height_samples));
  e.push_back("run.grid=" + std::to_string(grid));
  e.push_back("run.layers_grid=" + std::to_string(layers_grid));
  e.push_back("run.resolution=" + std::to_string(resolution));
  e.push_back("run.raster=" + std::to_string(raster));
  e.push_back("run.budget=" + std::to_string(budget));
  e.push_back("run.checks=" + join(checks));
  e.push_back("run.seed=" + std::to_string(seed));
  return e;
}

}  // namespace tiletopo
