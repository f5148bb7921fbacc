#pragma once

#include <compare>
#include <string>

#include "vsearch/embedding.hpp"
#include "vsearch/mln.hpp"
#include "vsearch/world.hpp"

namespace vsearch {

inline constexpr double kImageWidth = 640.0;
inline constexpr double kImageHeight = 480.0;

/// Box in the virtual image plane, pixels.
struct BBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double area() const { return (x_max - x_min) * (y_max - y_min); }
  bool valid() const {
    return 0.0 <= x_min && x_min < x_max && x_max <= kImageWidth && 0.0 <= y_min && y_min < y_max &&
           y_max <= kImageHeight;
  }
  friend bool operator==(const BBox&, const BBox&) = default;
};

/// Known class index in [0, K) or the open-set Unknown label.
class ClassLabel {
 public:
  static ClassLabel known(int index) { return ClassLabel(index); }
  static ClassLabel unknown() { return ClassLabel(-1); }
  bool is_unknown() const { return index_ < 0; }
  int index() const { return index_; }
  friend auto operator<=>(const ClassLabel&, const ClassLabel&) = default;

 private:
  explicit ClassLabel(int index) : index_(index) {}
  int index_ = -1;
};

/// Returns Unknown when the calibrated CDF of total_uncert exceeds 0.9,
/// otherwise label unchanged.
ClassLabel relabel_unknown(ClassLabel label, double total_uncert, const UncertaintyStats& stats);

struct DetectionRecord {
  std::string source_object;  // ground truth id; "" for clutter. Not for planner use.
  ClassLabel label = ClassLabel::unknown();
  BBox bbox;
  EmbeddingVector patch_embedding;
  MixtureOutput mixture;
  double range = 0.0;
  double bearing = 0.0;  // relative to the camera heading
};

}  // namespace vsearch
