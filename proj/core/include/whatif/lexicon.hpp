#pragma once

// Fixed vocabulary shared by the action parser, the text generator, the
// describer and the object-mention detector.

#include "whatif/types.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace whatif::lexicon {

/// Name used in generated sentences ("screw driver", "chocolate box", ...).
std::string_view display_name(ObjectClass c);

/// Every accepted surface form for a class, display name first. Multi-word
/// entries are space separated and already lowercase.
std::span<const std::string_view> synonyms(ObjectClass c);

/// Per-class collision primitive, mass and resting orientation.
struct ClassGeometry {
  Shape shape;
  double mass;
  Mat3 base_rotation;  // applied before the random yaw
};
const ClassGeometry& geometry(ObjectClass c);

/// A class mention found in a token sequence: tokens [begin, end).
struct Mention {
  ObjectClass cls;
  std::size_t begin;
  std::size_t end;
};

/// Longest-match, left-to-right, non-overlapping scan for class names.
std::vector<Mention> find_mentions(std::span<const std::string> tokens, std::size_t from = 0);

/// Compass word or phrase with its world-frame angle.
struct DirectionWord {
  std::string_view phrase;  // space separated tokens
  double angle;
};
std::span<const DirectionWord> direction_words();

/// Phrases meaning "towards the middle of the table".
std::span<const std::string_view> center_phrases();

/// One of eight compass buckets: 0 = east/right, counting counter-clockwise in
/// steps of pi/4. Bucket boundaries sit at odd multiples of pi/8.
int direction_bucket(double angle);
double bucket_angle(int bucket);
std::string_view bucket_name(int bucket);

}  // namespace whatif::lexicon
