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

// Object catalog: primitive proxies for the graspable objects.
//
// File format, one record per line, whitespace-separated key=value tokens:
//
//   id=tennis_ball shape=sphere dims=0.033 mass=0.058 split=seen category=ball
//
//   id        unique identifier, no whitespace
//   shape     sphere | box | cylinder
//   dims      metres, comma separated: sphere "r", box "x,y,z" (full
//             extents), cylinder "r,h" (axis along local z)
//   mass      kg
//   split     seen | unseen
//   category  ball | long_box | square_box | bottle | cup | elongated
//
// '#' starts a comment. Unknown keys and unknown shapes are rejected.

#ifndef DQBENCH_CATALOG_H_
#define DQBENCH_CATALOG_H_

#include <string>
#include <string_view>
#include <vector>

#include "dqbench/se3.h"

namespace dqbench {

enum class Shape { kSphere, kBox, kCylinder };
enum class Split { kSeen, kUnseen };
enum class Category { kBall, kLongBox, kSquareBox, kBottle, kCup, kElongated };

struct ObjectSpec {
  std::string id;
  Shape shape = Shape::kSphere;
  std::vector<double> dims;
  double mass = 0.0;
  Split split = Split::kSeen;
  Category category = Category::kBall;

  bool operator==(const ObjectSpec&) const = default;
};

inline constexpr int kCatalogSize = 43;
inline constexpr int kCatalogSeen = 30;
inline constexpr int kCatalogUnseen = 13;

std::string_view to_string(Shape s);
std::string_view to_string(Split s);
std::string_view to_string(Category c);
Split parse_split(std::string_view s);

// Half extents of the axis-aligned box bounding the object in its own frame.
Vec3 half_extents(const ObjectSpec& spec);
double bounding_radius(const ObjectSpec& spec);
double volume(const ObjectSpec& spec);
double surface_area(const ObjectSpec& spec);

// Height at least twice the largest horizontal extent.
bool is_tall_slender(const ObjectSpec& spec);
// Every extent at most 10 cm and height no more than the horizontal extent.
bool is_short_compact(const ObjectSpec& spec);

// Parses records without checking catalog-level counts.
std::vector<ObjectSpec> parse_catalog_records(std::string_view text);

// Parses and validates a full catalog (43 entries, 30 seen / 13 unseen,
// both splits with a short/compact and a tall/slender object). Throws
// InvalidCatalog naming the offending entry.
std::vector<ObjectSpec> parse_catalog(std::string_view text);
std::vector<ObjectSpec> load_catalog(const std::string& path);

// The bundled catalog (same content as data/catalog.txt).
const std::vector<ObjectSpec>& default_catalog();
std::string_view default_catalog_text();

const ObjectSpec& find_object(const std::vector<ObjectSpec>& catalog,
                              std::string_view id);

}  // namespace dqbench

#endif  // DQBENCH_CATALOG_H_
