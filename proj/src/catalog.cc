// Copyright 2026 The dqbench Authors.
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

#include "dqbench/catalog.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "dqbench/errors.h"
#include "dqbench/kv_text.h"

namespace dqbench {

std::string_view to_string(Shape s) {
  switch (s) {
    case Shape::kSphere: return "sphere";
    case Shape::kBox: return "box";
    case Shape::kCylinder: return "cylinder";
  }
  return "?";
}

std::string_view to_string(Split s) {
  return s == Split::kSeen ? "seen" : "unseen";
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::kBall: return "ball";
    case Category::kLongBox: return "long_box";
    case Category::kSquareBox: return "square_box";
    case Category::kBottle: return "bottle";
    case Category::kCup: return "cup";
    case Category::kElongated: return "elongated";
  }
  return "?";
}

Split parse_split(std::string_view s) {
  if (s == "seen") return Split::kSeen;
  if (s == "unseen") return Split::kUnseen;
  throw InvalidArgument("unknown split '" + std::string(s) + "'");
}

namespace {

Shape parse_shape(std::string_view s) {
  if (s == "sphere") return Shape::kSphere;
  if (s == "box") return Shape::kBox;
  if (s == "cylinder") return Shape::kCylinder;
  throw InvalidArgument("unknown shape '" + std::string(s) + "'");
}

Category parse_category(std::string_view s) {
  for (Category c : {Category::kBall, Category::kLongBox, Category::kSquareBox,
                     Category::kBottle, Category::kCup, Category::kElongated}) {
    if (to_string(c) == s) return c;
  }
  throw InvalidArgument("unknown category '" + std::string(s) + "'");
}

size_t expected_dims(Shape s) {
  switch (s) {
    case Shape::kSphere: return 1;
    case Shape::kBox: return 3;
    case Shape::kCylinder: return 2;
  }
  return 0;
}

}  // namespace

Vec3 half_extents(const ObjectSpec& spec) {
  const auto& d = spec.dims;
  switch (spec.shape) {
    case Shape::kSphere: return Vec3::Constant(d[0]);
    case Shape::kBox: return 0.5 * Vec3(d[0], d[1], d[2]);
    case Shape::kCylinder: return Vec3(d[0], d[0], 0.5 * d[1]);
  }
  return Vec3::Zero();
}

double bounding_radius(const ObjectSpec& spec) {
  const auto& d = spec.dims;
  switch (spec.shape) {
    case Shape::kSphere: return d[0];
    case Shape::kBox: return half_extents(spec).norm();
    case Shape::kCylinder: return std::hypot(d[0], 0.5 * d[1]);
  }
  return 0.0;
}

double volume(const ObjectSpec& spec) {
  constexpr double pi = std::numbers::pi;
  const auto& d = spec.dims;
  switch (spec.shape) {
    case Shape::kSphere: return 4.0 / 3.0 * pi * d[0] * d[0] * d[0];
    case Shape::kBox: return d[0] * d[1] * d[2];
    case Shape::kCylinder: return pi * d[0] * d[0] * d[1];
  }
  return 0.0;
}

double surface_area(const ObjectSpec& spec) {
  constexpr double pi = std::numbers::pi;
  const auto& d = spec.dims;
  switch (spec.shape) {
    case Shape::kSphere: return 4.0 * pi * d[0] * d[0];
    case Shape::kBox: return 2.0 * (d[0] * d[1] + d[1] * d[2] + d[0] * d[2]);
    case Shape::kCylinder: return 2.0 * pi * d[0] * (d[0] + d[1]);
  }
  return 0.0;
}

bool is_tall_slender(const ObjectSpec& spec) {
  Vec3 h = half_extents(spec);
  return h.z() >= 2.0 * std::max(h.x(), h.y());
}

bool is_short_compact(const ObjectSpec& spec) {
  Vec3 h = half_extents(spec);
  return 2.0 * h.maxCoeff() <= 0.1 && h.z() <= std::max(h.x(), h.y());
}

std::vector<ObjectSpec> parse_catalog_records(std::string_view text) {
  std::vector<ObjectSpec> out;
  std::set<std::string> ids;
  int lineno = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    ++lineno;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    std::string where = "line " + std::to_string(lineno);
    std::vector<std::pair<std::string, std::string>> fields;
    try {
      fields = parse_record(line);
    } catch (const Error& e) {
      throw InvalidCatalog(where + ": " + e.what());
    }
    if (fields.empty()) continue;

    ObjectSpec spec;
    bool has_id = false, has_shape = false, has_dims = false, has_mass = false,
         has_split = false, has_category = false;
    std::vector<double> dims;
    try {
      for (const auto& [key, value] : fields) {
        if (key == "id") {
          spec.id = value;
          has_id = true;
          where += " (" + value + ")";
        } else if (key == "shape") {
          spec.shape = parse_shape(value);
          has_shape = true;
        } else if (key == "dims") {
          dims = parse_double_list(value, "dims");
          has_dims = true;
        } else if (key == "mass") {
          spec.mass = parse_double(value, "mass");
          has_mass = true;
        } else if (key == "split") {
          spec.split = parse_split(value);
          has_split = true;
        } else if (key == "category") {
          spec.category = parse_category(value);
          has_category = true;
        } else {
          throw InvalidArgument("unknown field '" + key + "'");
        }
      }
    } catch (const InvalidArgument& e) {
      throw InvalidCatalog(where + ": " + e.what());
    }
    if (!(has_id && has_shape && has_dims && has_mass && has_split &&
          has_category)) {
      throw InvalidCatalog(where + ": missing required field");
    }
    if (dims.size() != expected_dims(spec.shape)) {
      throw InvalidCatalog(where + ": wrong number of dims for shape " +
                           std::string(to_string(spec.shape)));
    }
    for (double d : dims) {
      if (!(d > 0.0) || !std::isfinite(d)) {
        throw InvalidCatalog(where + ": dims must be positive");
      }
    }
    if (!(spec.mass > 0.0) || !std::isfinite(spec.mass)) {
      throw InvalidCatalog(where + ": mass must be positive");
    }
    if (!ids.insert(spec.id).second) {
      throw InvalidCatalog(where + ": duplicate id");
    }
    spec.dims = std::move(dims);
    out.push_back(std::move(spec));
  }
  return out;
}

std::vector<ObjectSpec> parse_catalog(std::string_view text) {
  std::vector<ObjectSpec> specs = parse_catalog_records(text);
  if (specs.size() != static_cast<size_t>(kCatalogSize)) {
    throw InvalidCatalog("expected " + std::to_string(kCatalogSize) +
                         " objects, found " + std::to_string(specs.size()));
  }
  auto seen = std::count_if(specs.begin(), specs.end(), [](const auto& s) {
    return s.split == Split::kSeen;
  });
  if (seen != kCatalogSeen) {
    throw InvalidCatalog("expected " + std::to_string(kCatalogSeen) +
                         " seen objects, found " + std::to_string(seen));
  }
  for (Split split : {Split::kSeen, Split::kUnseen}) {
    bool compact = false, slender = false;
    for (const auto& s : specs) {
      if (s.split != split) continue;
      compact |= is_short_compact(s);
      slender |= is_tall_slender(s);
    }
    if (!compact || !slender) {
      throw InvalidCatalog(std::string(to_string(split)) +
                           " split needs a short/compact and a tall/slender "
                           "object");
    }
  }
  return specs;
}

std::vector<ObjectSpec> load_catalog(const std::string& path) {
  return parse_catalog(read_text_file(path));
}

const std::vector<ObjectSpec>& default_catalog() {
  static const std::vector<ObjectSpec> catalog =
      parse_catalog(default_catalog_text());
  return catalog;
}

const ObjectSpec& find_object(const std::vector<ObjectSpec>& catalog,
                              std::string_view id) {
  for (const auto& s : catalog) {
    if (s.id == id) return s;
  }
  throw NotFound("unknown object id '" + std::string(id) + "'");
}

}  // namespace dqbench
