#include "whatif/lexicon.hpp"

#include <array>
#include <cmath>

namespace whatif::lexicon {
namespace {

using namespace std::string_view_literals;

constexpr std::array<std::string_view, kNumClasses> kDisplay = {
    "foam"sv, "cheese box"sv, "chocolate box"sv, "mustard container"sv,
    "banana"sv, "baseball"sv, "coffee can"sv, "screw driver"sv,
};

// The display name comes first in every list.
constexpr std::array kFoam = {"foam"sv, "foam brick"sv, "brick"sv, "sponge"sv, "foam block"sv};
constexpr std::array kCheezit = {"cheese box"sv, "cheez-it box"sv, "cheezit box"sv, "cheez-it"sv,
                                 "cheezit"sv,    "cracker box"sv,  "cereal box"sv};
constexpr std::array kPudding = {"chocolate box"sv, "pudding box"sv, "chocolate pudding box"sv,
                                 "pudding"sv, "jello box"sv};
constexpr std::array kMustard = {"mustard container"sv, "mustard bottle"sv, "mustard"sv,
                                 "yellow bottle"sv, "bottle"sv};
constexpr std::array kBanana = {"banana"sv};
constexpr std::array kSoftball = {"baseball"sv, "softball"sv, "ball"sv};
constexpr std::array kCoffee = {"coffee can"sv, "coffee tin"sv, "coffee"sv, "tin"sv};
constexpr std::array kScrewdriver = {"screw driver"sv, "screwdriver"sv, "driver"sv};

std::array<std::vector<std::vector<std::string>>, kNumClasses> build_split_synonyms() {
  std::array<std::vector<std::vector<std::string>>, kNumClasses> out;
  for (ObjectClass c : kAllClasses) {
    for (std::string_view syn : synonyms(c)) {
      std::vector<std::string> words;
      std::size_t start = 0;
      while (start <= syn.size()) {
        const std::size_t space = syn.find(' ', start);
        const std::size_t end = space == std::string_view::npos ? syn.size() : space;
        words.emplace_back(syn.substr(start, end - start));
        start = end + 1;
      }
      out[class_index(c)].push_back(std::move(words));
    }
  }
  return out;
}

const double kPi = std::acos(-1.0);

}  // namespace

std::string_view display_name(ObjectClass c) { return kDisplay[class_index(c)]; }

std::span<const std::string_view> synonyms(ObjectClass c) {
  switch (c) {
    case ObjectClass::FoamBrick: return kFoam;
    case ObjectClass::CheezitBox: return kCheezit;
    case ObjectClass::PuddingBox: return kPudding;
    case ObjectClass::MustardBottle: return kMustard;
    case ObjectClass::Banana: return kBanana;
    case ObjectClass::Softball: return kSoftball;
    case ObjectClass::CoffeeCan: return kCoffee;
    case ObjectClass::Screwdriver: return kScrewdriver;
  }
  return {};
}

const ClassGeometry& geometry(ObjectClass c) {
  static const std::array<ClassGeometry, kNumClasses> table = [] {
    const Mat3 lying = Eigen::AngleAxisd(kPi / 2.0, Vec3::UnitY()).toRotationMatrix();
    const Mat3 upright = Mat3::Identity();
    return std::array<ClassGeometry, kNumClasses>{{
        {Box{Vec3(0.05, 0.075, 0.025)}, 0.05, upright},
        {Box{Vec3(0.08, 0.105, 0.03)}, 0.41, upright},
        {Box{Vec3(0.045, 0.055, 0.0175)}, 0.19, upright},
        {Cylinder{0.035, 0.19}, 0.43, upright},
        {Box{Vec3(0.09, 0.018, 0.018)}, 0.066, upright},
        {Sphere{0.048}, 0.18, upright},
        {Cylinder{0.051, 0.176}, 0.41, upright},
        {Cylinder{0.012, 0.20}, 0.10, lying},
    }};
  }();
  return table[class_index(c)];
}

std::vector<Mention> find_mentions(std::span<const std::string> tokens, std::size_t from) {
  static const auto split = build_split_synonyms();
  std::vector<Mention> found;
  std::size_t i = from;
  while (i < tokens.size()) {
    std::size_t best_len = 0;
    ObjectClass best_cls = ObjectClass::FoamBrick;
    for (ObjectClass c : kAllClasses) {
      for (const auto& words : split[class_index(c)]) {
        if (words.size() <= best_len || i + words.size() > tokens.size()) continue;
        bool match = true;
        for (std::size_t k = 0; k < words.size() && match; ++k) match = tokens[i + k] == words[k];
        if (match) {
          best_len = words.size();
          best_cls = c;
        }
      }
    }
    if (best_len > 0) {
      found.push_back({best_cls, i, i + best_len});
      i += best_len;
    } else {
      ++i;
    }
  }
  return found;
}

std::span<const DirectionWord> direction_words() {
  static const std::array<DirectionWord, 36> words = {{
      {"left", kPi},
      {"right", 0.0},
      {"west", kPi},
      {"east", 0.0},
      {"north", kPi / 2},
      {"south", -kPi / 2},
      {"up", kPi / 2},
      {"down", -kPi / 2},
      {"forward", kPi / 2},
      {"forwards", kPi / 2},
      {"backward", -kPi / 2},
      {"backwards", -kPi / 2},
      {"top", kPi / 2},
      {"bottom", -kPi / 2},
      {"north-west", 3 * kPi / 4},
      {"northwest", 3 * kPi / 4},
      {"north west", 3 * kPi / 4},
      {"top-left", 3 * kPi / 4},
      {"top left", 3 * kPi / 4},
      {"north-east", kPi / 4},
      {"northeast", kPi / 4},
      {"north east", kPi / 4},
      {"top-right", kPi / 4},
      {"top right", kPi / 4},
      {"south-west", -3 * kPi / 4},
      {"southwest", -3 * kPi / 4},
      {"south west", -3 * kPi / 4},
      {"bottom-left", -3 * kPi / 4},
      {"bottom left", -3 * kPi / 4},
      {"south-east", -kPi / 4},
      {"southeast", -kPi / 4},
      {"south east", -kPi / 4},
      {"bottom-right", -kPi / 4},
      {"bottom right", -kPi / 4},
      {"upper-left", 3 * kPi / 4},
      {"upper-right", kPi / 4},
  }};
  return words;
}

std::span<const std::string_view> center_phrases() {
  static constexpr std::array phrases = {"middle of the table"sv, "center of the table"sv,
                                         "centre of the table"sv, "middle"sv, "center"sv, "centre"sv};
  return phrases;
}

int direction_bucket(double angle) {
  const double step = kPi / 4.0;
  long k = std::lround(angle / step);
  k %= 8;
  if (k < 0) k += 8;
  return static_cast<int>(k);
}

double bucket_angle(int bucket) {
  const int b = ((bucket % 8) + 8) % 8;
  return b <= 4 ? b * kPi / 4.0 : (b - 8) * kPi / 4.0;
}

std::string_view bucket_name(int bucket) {
  static constexpr std::array names = {"east"sv,  "north-east"sv, "north"sv, "north-west"sv,
                                       "west"sv,  "south-west"sv, "south"sv, "south-east"sv};
  return names[((bucket % 8) + 8) % 8];
}

}  // namespace whatif::lexicon
