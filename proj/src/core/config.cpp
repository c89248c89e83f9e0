// Copyright 2026 The sitsmon authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/common.hpp"

namespace sitsmon {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Removes a trailing comment, respecting double-quoted strings.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    else if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string unquote(const std::string& raw) {
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
    return raw.substr(1, raw.size() - 2);
  return raw;
}

long long parse_int_value(const std::string& key, const std::string& raw) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(raw, &pos);
  } catch (const std::exception&) {
    throw InvalidArgument("config: expected integer for " + key + ", got '" + raw + "'");
  }
  if (pos != raw.size())
    throw InvalidArgument("config: expected integer for " + key + ", got '" + raw + "'");
  return v;
}

double parse_double_value(const std::string& key, const std::string& raw) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(raw, &pos);
  } catch (const std::exception&) {
    throw InvalidArgument("config: expected number for " + key + ", got '" + raw + "'");
  }
  if (pos != raw.size())
    throw InvalidArgument("config: expected number for " + key + ", got '" + raw + "'");
  return v;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ConfigMap ConfigMap::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

ConfigMap ConfigMap::parse_text(const std::string& text) {
  ConfigMap map;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw InvalidArgument("config: malformed section header at line " +
                              std::to_string(line_no));
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw InvalidArgument("config: empty section name at line " +
                              std::to_string(line_no));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config: expected key = value at line " +
                            std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw InvalidArgument("config: empty key or value at line " +
                            std::to_string(line_no));
    map.entries_[section.empty() ? key : section + "." + key] = value;
  }
  return map;
}

void ConfigMap::set_override(const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw InvalidArgument("override must be key=value: " + assignment);
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  if (value.empty()) throw InvalidArgument("override has empty value: " + assignment);
  entries_[key] = value;
}

bool ConfigMap::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

std::string ConfigMap::get_string(const std::string& key,
                                  const std::string& fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  return unquote(it->second);
}

long long ConfigMap::get_int(const std::string& key, long long fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  return parse_int_value(key, it->second);
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  return parse_double_value(key, it->second);
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (it->second == "true") return true;
  if (it->second == "false") return false;
  throw InvalidArgument("config: expected true/false for " + key + ", got '" +
                        it->second + "'");
}

std::vector<long long> ConfigMap::get_int_list(
    const std::string& key, const std::vector<long long>& fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const std::string& raw = it->second;
  if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']')
    throw InvalidArgument("config: expected [list] for " + key + ", got '" + raw + "'");
  std::vector<long long> out;
  std::string body = raw.substr(1, raw.size() - 2);
  std::istringstream in(body);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_int_value(key, item));
  }
  return out;
}

RunConfig RunConfig::from_map(const ConfigMap& m) {
  RunConfig c;
  c.data_dir = m.get_string("paths.data_dir", c.data_dir);
  c.artifact_dir = m.get_string("paths.artifact_dir", c.artifact_dir);

  c.channels = static_cast<int>(m.get_int("data.channels", c.channels));
  c.patch = static_cast<int>(m.get_int("data.patch", c.patch));
  c.per_channel_norm = m.get_bool("data.per_channel_norm", c.per_channel_norm);
  for (long long b : m.get_int_list("data.band_order", {}))
    c.band_order.push_back(static_cast<int>(b));
  c.val_fraction = m.get_double("data.val_fraction", c.val_fraction);

  std::vector<long long> widths_default(c.widths.begin(), c.widths.end());
  c.widths.clear();
  for (long long w : m.get_int_list("train.widths", widths_default))
    c.widths.push_back(static_cast<int>(w));
  c.train.epochs = static_cast<int>(m.get_int("train.epochs", c.train.epochs));
  c.train.batch_size = static_cast<int>(m.get_int("train.batch_size", c.train.batch_size));
  c.train.lr_init = m.get_double("train.lr_init", c.train.lr_init);
  c.train.lr_factor = m.get_double("train.lr_factor", c.train.lr_factor);
  c.train.lr_patience = static_cast<int>(m.get_int("train.lr_patience", c.train.lr_patience));
  c.train.lr_min = m.get_double("train.lr_min", c.train.lr_min);
  c.train.seed = static_cast<std::uint64_t>(m.get_int("seed", 42));

  c.ssim.window = static_cast<int>(m.get_int("ssim.window", c.ssim.window));
  c.ssim.gaussian_sigma = m.get_double("ssim.sigma", c.ssim.gaussian_sigma);
  c.ssim.k1 = m.get_double("ssim.k1", c.ssim.k1);
  c.ssim.k2 = m.get_double("ssim.k2", c.ssim.k2);
  c.ssim.dynamic_range = m.get_double("ssim.dynamic_range", c.ssim.dynamic_range);
  c.ssim.raw_k_constants = m.get_bool("ssim.raw_k_constants", c.ssim.raw_k_constants);

  c.threshold_multiplier = m.get_double("threshold.multiplier", c.threshold_multiplier);

  c.no_position = m.get_bool("ablation.no_position", c.no_position);
  c.linear_time = m.get_bool("ablation.linear_time", c.linear_time);
  c.mae_score = m.get_bool("ablation.mae_score", c.mae_score);
  c.flat_threshold = m.get_bool("ablation.flat_threshold", c.flat_threshold);

  c.synth.height = static_cast<int>(m.get_int("synth.height", c.synth.height));
  c.synth.width = static_cast<int>(m.get_int("synth.width", c.synth.width));
  c.synth.channels = c.channels;
  c.synth.n_land_classes =
      static_cast<int>(m.get_int("synth.land_classes", c.synth.n_land_classes));
  c.synth.seasonal_amp = m.get_double("synth.seasonal_amp", c.synth.seasonal_amp);
  c.synth.noise_sigma = m.get_double("synth.noise_sigma", c.synth.noise_sigma);
  c.synth.noise_seasonal = m.get_double("synth.noise_seasonal", c.synth.noise_seasonal);
  c.synth.cadence_days = static_cast<int>(m.get_int("synth.cadence_days", c.synth.cadence_days));
  c.synth.train_years = static_cast<int>(m.get_int("synth.train_years", c.synth.train_years));
  c.synth.test_years = static_cast<int>(m.get_int("synth.test_years", c.synth.test_years));
  c.synth.start_year = static_cast<int>(m.get_int("synth.start_year", c.synth.start_year));
  c.synth.patch = c.patch;
  c.synth.seed = c.train.seed;
  c.synth_hazards = m.get_string("synth.hazards", c.synth_hazards);

  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::string& path,
                          const std::vector<std::string>& overrides) {
  ConfigMap map = path.empty() ? ConfigMap::parse_text("")
                               : ConfigMap::parse_file(path);
  for (const std::string& o : overrides) map.set_override(o);
  return from_map(map);
}

void RunConfig::validate() const {
  if (channels < 1) throw InvalidArgument("config: data.channels must be >= 1");
  if (patch < 4) throw InvalidArgument("config: data.patch must be >= 4");
  if (!(val_fraction > 0.0 && val_fraction < 1.0))
    throw InvalidArgument("config: data.val_fraction must be in (0, 1)");
  if (widths.size() != 3)
    throw InvalidArgument("config: train.widths must have 3 entries");
  for (int w : widths)
    if (w < 1) throw InvalidArgument("config: train.widths must be positive");
  if (!(threshold_multiplier > 0.0))
    throw InvalidArgument("config: threshold.multiplier must be positive");
  if (synth_hazards != "default" && synth_hazards != "none")
    throw InvalidArgument("config: synth.hazards must be 'default' or 'none'");
  train.validate();
  ssim.validate();
}

EncodingMode RunConfig::encoding_mode() const {
  return encoding_mode_from_flags(no_position, linear_time);
}

std::string RunConfig::to_toml() const {
  std::ostringstream out;
  out << "seed = " << train.seed << "\n\n";
  out << "[paths]\n";
  out << "data_dir = \"" << data_dir << "\"\n";
  out << "artifact_dir = \"" << artifact_dir << "\"\n\n";
  out << "[data]\n";
  out << "channels = " << channels << "\n";
  out << "patch = " << patch << "\n";
  out << "per_channel_norm = " << (per_channel_norm ? "true" : "false") << "\n";
  if (!band_order.empty()) {
    out << "band_order = [";
    for (std::size_t i = 0; i < band_order.size(); ++i)
      out << (i ? ", " : "") << band_order[i];
    out << "]\n";
  }
  out << "val_fraction = " << format_double(val_fraction) << "\n\n";
  out << "[train]\n";
  out << "widths = [" << widths[0] << ", " << widths[1] << ", " << widths[2] << "]\n";
  out << "epochs = " << train.epochs << "\n";
  out << "batch_size = " << train.batch_size << "\n";
  out << "lr_init = " << format_double(train.lr_init) << "\n";
  out << "lr_factor = " << format_double(train.lr_factor) << "\n";
  out << "lr_patience = " << train.lr_patience << "\n";
  out << "lr_min = " << format_double(train.lr_min) << "\n\n";
  out << "[ssim]\n";
  out << "window = " << ssim.window << "\n";
  out << "sigma = " << format_double(ssim.gaussian_sigma) << "\n";
  out << "k1 = " << format_double(ssim.k1) << "\n";
  out << "k2 = " << format_double(ssim.k2) << "\n";
  out << "dynamic_range = " << format_double(ssim.dynamic_range) << "\n";
  out << "raw_k_constants = " << (ssim.raw_k_constants ? "true" : "false") << "\n\n";
  out << "[threshold]\n";
  out << "multiplier = " << format_double(threshold_multiplier) << "\n\n";
  out << "[ablation]\n";
  out << "no_position = " << (no_position ? "true" : "false") << "\n";
  out << "linear_time = " << (linear_time ? "true" : "false") << "\n";
  out << "mae_score = " << (mae_score ? "true" : "false") << "\n";
  out << "flat_threshold = " << (flat_threshold ? "true" : "false") << "\n\n";
  out << "[synth]\n";
  out << "height = " << synth.height << "\n";
  out << "width = " << synth.width << "\n";
  out << "land_classes = " << synth.n_land_classes << "\n";
  out << "seasonal_amp = " << format_double(synth.seasonal_amp) << "\n";
  out << "noise_sigma = " << format_double(synth.noise_sigma) << "\n";
  out << "noise_seasonal = " << format_double(synth.noise_seasonal) << "\n";
  out << "cadence_days = " << synth.cadence_days << "\n";
  out << "train_years = " << synth.train_years << "\n";
  out << "test_years = " << synth.test_years << "\n";
  out << "start_year = " << synth.start_year << "\n";
  out << "hazards = \"" << synth_hazards << "\"\n";
  return out.str();
}

}  // namespace sitsmon
