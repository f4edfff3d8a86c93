// Copyright 2026 The plmc-lab Authors
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

#include "config.hpp"

#include <cmath>
#include <iterator>
#include <limits>
#include <sstream>
#include <vector>

namespace plmc::config {

namespace {

std::string location(int line, const std::string& field) {
  std::ostringstream os;
  os << "config";
  if (line > 0) os << ":" << line;
  if (!field.empty()) os << ": field '" << field << "'";
  return os.str();
}

// Character iterator that counts the newlines it has stepped over, so the
// SAX callbacks can ask which line the parser is on.
class LineCountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  LineCountingIterator(const char* p, int* line) : p_(p), line_(line) {}
  reference operator*() const { return *p_; }
  LineCountingIterator& operator++() {
    if (*p_ == '\n') ++*line_;
    ++p_;
    return *this;
  }
  LineCountingIterator operator++(int) {
    auto copy = *this;
    ++*this;
    return copy;
  }
  bool operator==(const LineCountingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const LineCountingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_;
  int* line_;
};

std::string escape_token(const std::string& key) {
  std::string out;
  for (char ch : key) {
    if (ch == '~') {
      out += "~0";
    } else if (ch == '/') {
      out += "~1";
    } else {
      out += ch;
    }
  }
  return out;
}

// Records the line of every object key and array element, keyed by JSON
// pointer. The DOM itself is built by a separate ordinary parse.
class LineRecorder : public nlohmann::json_sax<Json> {
 public:
  explicit LineRecorder(const int* line) : line_(line) {}

  std::map<std::string, int> lines;

  bool null() override { return value(); }
  bool boolean(bool) override { return value(); }
  bool number_integer(number_integer_t) override { return value(); }
  bool number_unsigned(number_unsigned_t) override { return value(); }
  bool number_float(number_float_t, const string_t&) override { return value(); }
  bool string(string_t&) override { return value(); }
  bool binary(binary_t&) override { return value(); }
  bool start_object(std::size_t) override {
    enter_value();
    frames_.push_back({false, 0, path(), ""});
    return true;
  }
  bool key(string_t& k) override {
    auto& f = frames_.back();
    f.current = f.base + "/" + escape_token(k);
    lines.emplace(f.current, *line_);
    return true;
  }
  bool end_object() override {
    frames_.pop_back();
    return true;
  }
  bool start_array(std::size_t) override {
    enter_value();
    frames_.push_back({true, 0, path(), ""});
    return true;
  }
  bool end_array() override {
    frames_.pop_back();
    return true;
  }
  bool parse_error(std::size_t, const std::string&,
                   const nlohmann::detail::exception&) override {
    return false;
  }

 private:
  struct Frame {
    bool array;
    long next_index;
    std::string base;
    std::string current;
  };

  std::string path() const { return frames_.empty() ? "" : frames_.back().current; }

  void enter_value() {
    if (frames_.empty() || !frames_.back().array) return;
    auto& f = frames_.back();
    f.current = f.base + "/" + std::to_string(f.next_index++);
    lines.emplace(f.current, *line_);
  }
  bool value() {
    enter_value();
    return true;
  }

  const int* line_;
  std::vector<Frame> frames_;
};

std::string type_name(const Json& j) { return j.type_name(); }

}  // namespace

ConfigError::ConfigError(int line, const std::string& field,
                         const std::string& message)
    : Error(ErrorCode::Config, location(line, field) + ": " + message),
      line_(line),
      field_(field) {}

std::string dotted(const std::string& pointer) {
  std::string out;
  for (std::size_t i = 0; i < pointer.size(); ++i) {
    if (pointer[i] == '/') {
      if (i != 0) out += '.';
    } else {
      out += pointer[i];
    }
  }
  return out;
}

Config Config::parse(const std::string& text) {
  Config cfg;
  try {
    cfg.root_ = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Recover the line from the byte offset.
    const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
    int line = 1;
    for (std::size_t i = 0; i + 1 < pos; ++i) line += text[i] == '\n';
    std::string what = e.what();
    const auto colon = what.rfind(": ");
    if (colon != std::string::npos) what = what.substr(colon + 2);
    throw ConfigError(line, "", "malformed JSON: " + what);
  }
  if (!cfg.root_.is_object()) {
    throw ConfigError(1, "", "the document must be a JSON object");
  }
  int line = 1;
  LineRecorder recorder(&line);
  LineCountingIterator first(text.data(), &line);
  LineCountingIterator last(text.data() + text.size(), &line);
  Json::sax_parse(first, last, &recorder);
  cfg.key_lines_ = std::move(recorder.lines);
  return cfg;
}

void Config::set_scalar(const std::string& dotted_path, const std::string& value) {
  if (dotted_path.empty()) throw ConfigError(0, "", "empty override path");
  std::string pointer;
  std::stringstream ss(dotted_path);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ConfigError(0, dotted_path, "malformed override path");
    pointer += "/" + escape_token(part);
  }
  const Json::json_pointer ptr(pointer);
  if (root_.contains(ptr) && root_[ptr].is_structured()) {
    throw ConfigError(line_of(pointer), dotted_path,
                      "only scalar fields can be overridden from the command line");
  }
  Json parsed;
  try {
    parsed = Json::parse(value);
  } catch (const nlohmann::json::parse_error&) {
    parsed = value;  // bare word: treat as a string
  }
  if (parsed.is_structured()) {
    throw ConfigError(0, dotted_path, "override value must be a scalar");
  }
  try {
    root_[ptr] = parsed;
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(0, dotted_path, "override path crosses a non-object value");
  }
  overridden_.insert(pointer);
}

bool Config::has(const std::string& pointer) const {
  return root_.contains(Json::json_pointer(pointer));
}

int Config::line_of(const std::string& pointer) const {
  // Fall back to the closest ancestor that appears in the text.
  std::string p = pointer;
  while (!p.empty()) {
    if (auto it = key_lines_.find(p); it != key_lines_.end()) return it->second;
    p = p.substr(0, p.rfind('/'));
  }
  return 0;
}

void Config::fail(const std::string& pointer, const std::string& message) const {
  std::string msg = message;
  if (overridden_.count(pointer)) msg += " (set on the command line)";
  if (!has(pointer)) {
    const auto parent = pointer.substr(0, pointer.rfind('/'));
    throw ConfigError(line_of(parent), dotted(pointer), msg);
  }
  throw ConfigError(line_of(pointer), dotted(pointer), msg);
}

const Json& Config::at(const std::string& pointer) const {
  if (!has(pointer)) fail(pointer, "required field is missing");
  return root_.at(Json::json_pointer(pointer));
}

double Config::number(const std::string& pointer) const {
  const Json& j = at(pointer);
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  }
  fail(pointer, "expected a number, got " + type_name(j));
}

double Config::number_or(const std::string& pointer, double fallback) const {
  return has(pointer) ? number(pointer) : fallback;
}

std::optional<double> Config::optional_number(const std::string& pointer) const {
  if (!has(pointer) || at(pointer).is_null()) return std::nullopt;
  return number(pointer);
}

double Config::positive(const std::string& pointer) const {
  const double v = number(pointer);
  if (!(v > 0.0)) fail(pointer, "must be positive");
  return v;
}

long Config::integer(const std::string& pointer) const {
  const Json& j = at(pointer);
  if (j.is_number_integer()) return j.get<long>();
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 9e15) return long(d);
  }
  fail(pointer, "expected an integer, got " + type_name(j));
}

long Config::integer_or(const std::string& pointer, long fallback) const {
  return has(pointer) ? integer(pointer) : fallback;
}

std::uint64_t Config::seed(const std::string& pointer, std::uint64_t fallback) const {
  if (!has(pointer)) return fallback;
  const Json& j = at(pointer);
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) fail(pointer, "seed must be non-negative");
  fail(pointer, "expected an unsigned 64-bit integer");
}

std::string Config::string_or(const std::string& pointer,
                              const std::string& fallback) const {
  if (!has(pointer)) return fallback;
  const Json& j = at(pointer);
  if (!j.is_string()) fail(pointer, "expected a string, got " + type_name(j));
  return j.get<std::string>();
}

std::vector<double> Config::number_list(const std::string& pointer) const {
  const Json& j = at(pointer);
  if (!j.is_array()) fail(pointer, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(pointer + "/" + std::to_string(i)));
  }
  return out;
}

Vector Config::vector(const std::string& pointer) const {
  const auto v = number_list(pointer);
  if (v.empty()) fail(pointer, "vector must be non-empty");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) fail(pointer + "/" + std::to_string(i), "must be finite");
    out[static_cast<Eigen::Index>(i)] = v[i];
  }
  return out;
}

geometry::ConvexBody Config::body(const std::string& pointer) const {
  const auto type_ptr = pointer + "/type";
  const auto type = string_or(type_ptr, "");
  if (type.empty()) fail(type_ptr, "body needs a \"type\"");
  // Library errors become config errors pinned to the body record.
  auto guarded = [&](auto&& build) {
    try {
      return build();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      fail(pointer, e.what());
    }
  };
  if (type == "whole_space") {
    const long dim = integer(pointer + "/dimension");
    if (dim < 1) fail(pointer + "/dimension", "must be >= 1");
    return geometry::ConvexBody::whole_space(int(dim));
  }
  if (type == "ball") {
    Vector center;
    if (has(pointer + "/center")) {
      center = vector(pointer + "/center");
    } else {
      const long dim = integer(pointer + "/dimension");
      if (dim < 1) fail(pointer + "/dimension", "must be >= 1");
      center = Vector::Zero(dim);
    }
    const double radius = positive(pointer + "/radius");
    return guarded([&] { return geometry::ConvexBody::ball(center, radius); });
  }
  if (type == "box") {
    const Vector lower = vector(pointer + "/lower");
    const Vector upper = vector(pointer + "/upper");
    if (lower.size() != upper.size()) {
      fail(pointer + "/upper", "must have the same length as lower");
    }
    return guarded([&] { return geometry::ConvexBody::box(lower, upper); });
  }
  if (type == "halfspaces") {
    const auto cptr = pointer + "/constraints";
    const Json& list = at(cptr);
    if (!list.is_array() || list.empty()) fail(cptr, "expected a non-empty array");
    std::vector<geometry::Halfspace> hs;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto item = cptr + "/" + std::to_string(i);
      hs.push_back({vector(item + "/normal"), number(item + "/offset")});
    }
    const Vector interior = vector(pointer + "/interior_point");
    return guarded([&] { return geometry::ConvexBody::polytope(hs, interior); });
  }
  fail(type_ptr, "unknown body type '" + type +
                     "' (expected whole_space, ball, box or halfspaces)");
}

potentials::Potential Config::potential(int dim, const std::string& pointer) const {
  using potentials::Potential;
  const auto type_ptr = pointer + "/type";
  const auto type = string_or(type_ptr, "");
  if (type.empty()) fail(type_ptr, "potential needs a \"type\"");
  auto check_dim = [&](const std::string& ptr, Eigen::Index got) {
    if (got != dim) {
      fail(ptr, "has length " + std::to_string(got) + " but the body has dimension " +
                    std::to_string(dim));
    }
  };
  std::optional<Potential> p;
  if (type == "zero") {
    p = Potential::zero(dim);
  } else if (type == "linear") {
    const Vector c = vector(pointer + "/c");
    check_dim(pointer + "/c", c.size());
    p = Potential::linear(c);
  } else if (type == "affine_max") {
    const auto pptr = pointer + "/pieces";
    const Json& list = at(pptr);
    if (!list.is_array() || list.empty()) fail(pptr, "expected a non-empty array");
    std::vector<potentials::AffinePiece> pieces;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto item = pptr + "/" + std::to_string(i);
      const Vector a = vector(item + "/a");
      check_dim(item + "/a", a.size());
      pieces.push_back({a, number_or(item + "/b", 0.0)});
    }
    p = Potential::affine_max(pieces);
  } else if (type == "scaled_norm") {
    Vector center = has(pointer + "/center") ? vector(pointer + "/center")
                                             : Vector(Vector::Zero(dim));
    check_dim(pointer + "/center", center.size());
    const double slope = number(pointer + "/slope");
    if (!(slope >= 0.0)) fail(pointer + "/slope", "must be non-negative");
    p = Potential::scaled_norm(center, slope);
  } else if (type == "quadratic") {
    const double alpha = number(pointer + "/alpha");
    if (!(alpha >= 0.0)) fail(pointer + "/alpha", "must be non-negative");
    p = Potential::quadratic(dim, alpha);
  } else {
    fail(type_ptr, "unknown potential type '" + type +
                       "' (expected zero, linear, affine_max, scaled_norm or quadratic)");
  }
  if (auto inf = optional_number(pointer + "/known_infimum")) {
    p = p->with_known_infimum(*inf);
  }
  return *p;
}

}  // namespace plmc::config
