#include "whatif/datagen.hpp"

#include "whatif/describer.hpp"
#include "whatif/effects.hpp"
#include "whatif/error.hpp"
#include "whatif/geometry.hpp"
#include "whatif/lexicon.hpp"
#include "whatif/physics.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

namespace whatif::datagen {
namespace {

using namespace std::string_view_literals;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Portable draws: the standard distributions differ between libraries.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[pick(rng, v.size())];
}

SceneObject place(ObjectClass c, double x, double y, double yaw) {
  const auto& g = lexicon::geometry(c);
  SceneObject o{c, g.shape, g.mass, Pose{}};
  o.pose.rotation = Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix() * g.base_rotation;
  o.pose.translation = Vec3(x, y, 0.0);
  o.pose.translation.z() = -geometry::lowest_z(o.shape, o.pose);
  return o;
}

// Horizontal reach of the shape around its center.
double footprint_radius(const SceneObject& o) {
  return std::visit(
      [](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Box>) return std::hypot(s.half_extents.x(), s.half_extents.y());
        else if constexpr (std::is_same_v<S, Sphere>) return s.radius;
        else return std::hypot(s.radius, 0.5 * s.height);
      },
      o.shape);
}

const std::vector<std::vector<std::string_view>>& direction_phrases() {
  static const std::vector<std::vector<std::string_view>> phrases = {
      {"right"sv, "east"sv},
      {"north-east"sv, "northeast"sv, "top right"sv, "top-right"sv, "upper-right"sv},
      {"north"sv, "top"sv},
      {"north-west"sv, "northwest"sv, "top left"sv, "top-left"sv, "upper-left"sv},
      {"left"sv, "west"sv},
      {"south-west"sv, "southwest"sv, "bottom left"sv, "bottom-left"sv},
      {"south"sv, "bottom"sv},
      {"south-east"sv, "southeast"sv, "bottom right"sv, "bottom-right"sv},
  };
  return phrases;
}

std::string name_of(std::mt19937_64& rng, ObjectClass c) {
  const auto syn = lexicon::synonyms(c);
  return std::string(syn[pick(rng, syn.size())]);
}

std::string file_name(int batch, int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "b%02d_e%03d.json", batch, index);
  return buf;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix(splitmix(splitmix(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

Scene sample_scene(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Table table;
  int rejections = 0;
  while (true) {
    std::vector<ObjectClass> classes(kAllClasses.begin(), kAllClasses.end());
    for (std::size_t i = classes.size(); i > 1; --i) std::swap(classes[i - 1], classes[pick(rng, i)]);
    classes.resize(kObjectsPerScene);

    Scene scene;
    char id[32];
    std::snprintf(id, sizeof id, "scene-%016llx", static_cast<unsigned long long>(seed));
    scene.id = id;
    for (ObjectClass c : classes) {
      while (true) {
        const SceneObject o = place(c, uniform(rng, -kPlacementHalfWidth, kPlacementHalfWidth),
                                    uniform(rng, -kPlacementHalfWidth, kPlacementHalfWidth), uniform(rng, -M_PI, M_PI));
        bool ok = std::abs(o.pose.translation.x()) + footprint_radius(o) < table.half_extents.x() &&
                  std::abs(o.pose.translation.y()) + footprint_radius(o) < table.half_extents.y();
        for (const auto& other : scene.objects) {
          if (!ok) break;
          ok = geometry::penetration_depth(o.shape, o.pose, other.shape, other.pose) == 0.0;
        }
        if (ok) {
          scene.objects.push_back(o);
          break;
        }
        if (++rejections > kMaxRejections) throw DataError("cannot place scene");
      }
    }
    scene = physics::settle(scene, seed);
    if (validate_scene(scene).empty()) return scene;
    if (++rejections > kMaxRejections) throw DataError("cannot place scene");
  }
}

Action sample_action(const Scene& scene, ActionKind kind, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (scene.objects.size() < 2) throw DataError("scene needs at least two objects");
  const std::size_t ti = pick(rng, scene.objects.size());
  const ObjectClass target = scene.objects[ti].cls;
  switch (kind) {
    case ActionKind::Push: return Action::push(target, lexicon::bucket_angle(static_cast<int>(pick(rng, 8))));
    case ActionKind::Rotate: return Action::rotate(target, pick(rng, 2) == 0 ? RotationSense::CW : RotationSense::CCW);
    case ActionKind::Remove: return Action::remove(target);
    case ActionKind::Drop: {
      std::size_t oi = pick(rng, scene.objects.size() - 1);
      if (oi >= ti) ++oi;
      return Action::drop(target, scene.objects[oi].cls);
    }
  }
  return Action::remove(target);
}

std::string gen_action_text(const Action& action, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::string obj = name_of(rng, action.target);
  switch (action.kind) {
    case ActionKind::Push: {
      const double angle = std::get<PushParams>(action.params).direction_angle;
      const int bucket = lexicon::direction_bucket(angle);
      if (lexicon::bucket_angle(bucket) != angle)
        throw DataError("push direction is not one of the eight compass angles");
      const std::string dir(direction_phrases()[bucket][pick(rng, direction_phrases()[bucket].size())]);
      static const std::vector<std::string_view> verbs = {"pushes"sv, "shoves"sv, "rolls"sv};
      const std::string verb(pick(rng, verbs));
      switch (pick(rng, 3)) {
        case 0: return "the robot " + verb + " the " + obj + " to the " + dir;
        case 1: return "the robot " + verb + " the " + obj + " towards the " + dir + " of the table";
        default: return "the robot " + verb + " the " + obj + " to the " + dir + " side of the table";
      }
    }
    case ActionKind::Rotate: {
      const bool cw = std::get<RotateParams>(action.params).sense == RotationSense::CW;
      static const std::vector<std::string_view> ccw = {"anti-clockwise"sv, "anticlockwise"sv, "counter-clockwise"sv};
      const std::string sense = cw ? "clockwise" : std::string(pick(rng, ccw));
      static const std::vector<std::string_view> verbs = {"spins"sv, "rotates"sv, "turns"sv};
      const std::string verb(pick(rng, verbs));
      switch (pick(rng, 3)) {
        case 0: return "the robot " + verb + " the " + obj + " " + sense;
        case 1: return "the robot " + verb + " the " + obj + " in " + sense + " direction";
        default: return "the robot " + verb + " the " + obj + " " + sense + " in place";
      }
    }
    case ActionKind::Remove:
      switch (pick(rng, 3)) {
        case 0: return "the robot removes the " + obj;
        case 1: return "the robot removes the " + obj + " from the table";
        default: return "the robot takes the " + obj + " away";
      }
    case ActionKind::Drop: {
      const std::string onto = name_of(rng, std::get<DropParams>(action.params).onto);
      static const std::vector<std::string_view> verbs = {"drops"sv, "places"sv};
      const std::string verb(pick(rng, verbs));
      switch (pick(rng, 3)) {
        case 0: return "the robot " + verb + " the " + obj + " on the " + onto;
        case 1: return "the robot " + verb + " the " + obj + " onto the " + onto;
        default: return "the robot " + verb + " the " + obj + " on top of the " + onto;
      }
    }
  }
  return {};
}

std::uint64_t batch_seed(std::uint64_t master_seed, int batch) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(batch));
}

Example make_example(int batch, int index, ActionKind kind, std::uint64_t bseed) {
  const auto idx = static_cast<std::uint64_t>(index);
  Example e;
  e.batch = batch;
  e.index = index;
  e.scene = sample_scene(derive_seed(bseed, idx, 0));
  char id[32];
  std::snprintf(id, sizeof id, "b%02d-e%03d", batch, index);
  e.scene.id = id;
  e.action = sample_action(e.scene, kind, derive_seed(bseed, idx, 1));
  e.action_text = gen_action_text(e.action, derive_seed(bseed, idx, 2));
  const auto result = physics::simulate(e.scene, e.action, derive_seed(bseed, idx, 3));
  for (const auto& t : result.trajectories)
    if (!t.removed && t.cls != e.action.target) e.affected_labels[t.cls] = effects::ground_truth_affected(t);
  for (const auto& [cls, d] : describer::describe_all(result, e.action, describer::by_labels(e.affected_labels), e.scene.table))
    e.gt_descriptions[cls] = d.text;
  return e;
}

std::vector<Example> gen_batch(int batch_index, std::uint64_t master_seed) {
  const std::uint64_t bseed = batch_seed(master_seed, batch_index);
  std::vector<Example> out;
  out.reserve(kExamplesPerBatch);
  for (int i = 0; i < kExamplesPerBatch; ++i)
    out.push_back(make_example(batch_index, i, kAllActionKinds[i / kExamplesPerKind], bseed));
  return out;
}

Dataset generate(int n_batches, std::uint64_t master_seed, unsigned threads) {
  if (n_batches <= 0) throw DataError("batch count must be positive");
  std::vector<std::vector<Example>> batches(static_cast<std::size_t>(n_batches));
  detail::parallel_for(batches.size(), threads,
                       [&](std::size_t b) { batches[b] = gen_batch(static_cast<int>(b), master_seed); });

  Dataset d{master_seed, n_batches, {}};
  for (auto& b : batches)
    for (auto& e : b) d.examples.push_back(std::move(e));
  return d;
}

Split split(const Dataset& dataset, int min_batches) {
  if (dataset.n_batches < min_batches)
    throw DataError("split needs at least " + std::to_string(min_batches) + " batches, got " +
                    std::to_string(dataset.n_batches));
  if (dataset.n_batches <= kTestBatches) throw DataError("split needs more batches than the test split");
  const int first_test = dataset.n_batches - kTestBatches;
  Split s;
  for (const auto& e : dataset.examples) (e.batch >= first_test ? s.test : s.train).push_back(&e);
  return s;
}

void write_dataset(const std::string& dir, const Dataset& dataset) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create '" + dir + "': " + ec.message());
  io::Json batches = io::Json::array();
  std::size_t descriptions = 0;
  for (int b = 0; b < dataset.n_batches; ++b) {
    io::Json files = io::Json::array();
    for (const auto& e : dataset.examples)
      if (e.batch == b) files.push_back(file_name(e.batch, e.index));
    batches.push_back({{"batch", b}, {"seed", batch_seed(dataset.master_seed, b)}, {"files", files}});
  }
  for (const auto& e : dataset.examples) {
    descriptions += e.gt_descriptions.size();
    io::write_file((fs::path(dir) / file_name(e.batch, e.index)).string(), io::encode(e));
  }
  io::Json test = io::Json::array();
  for (int b = std::max(0, dataset.n_batches - kTestBatches); b < dataset.n_batches; ++b) test.push_back(b);
  const io::Json manifest = {{"format", "whatif-dataset/1"},
                             {"master_seed", dataset.master_seed},
                             {"n_batches", dataset.n_batches},
                             {"n_examples", dataset.examples.size()},
                             {"n_descriptions", descriptions},
                             {"test_batches", test},
                             {"batches", batches}};
  io::write_file((fs::path(dir) / "manifest.json").string(), manifest.dump(2));
}

Dataset read_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  const std::string mpath = (fs::path(dir) / "manifest.json").string();
  const io::Json m = io::parse_document(io::read_file(mpath));
  Dataset d;
  const io::Json& seed = io::field(m, "master_seed", "");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) throw SchemaError(".master_seed", "expected an integer");
  d.master_seed = seed.get<std::uint64_t>();
  d.n_batches = static_cast<int>(io::integer(io::field(m, "n_batches", ""), ".n_batches"));
  const io::Json& batches = io::array(io::field(m, "batches", ""), ".batches");
  for (std::size_t b = 0; b < batches.size(); ++b) {
    const std::string bp = ".batches[" + std::to_string(b) + "]";
    const io::Json& files = io::array(io::field(batches[b], "files", bp), bp + ".files");
    for (std::size_t f = 0; f < files.size(); ++f) {
      const std::string name = io::string(files[f], bp + ".files[" + std::to_string(f) + "]");
      const std::string path = (fs::path(dir) / name).string();
      try {
        d.examples.push_back(io::decode_example(io::read_file(path)));
      } catch (const SchemaError& e) {
        throw SchemaError(name + ":" + e.path(), e.what());
      }
    }
  }
  const long declared = io::integer(io::field(m, "n_examples", ""), ".n_examples");
  if (declared != static_cast<long>(d.examples.size()))
    throw SchemaError(".n_examples", "manifest declares " + std::to_string(declared) + " examples, found " +
                                         std::to_string(d.examples.size()));
  return d;
}

}  // namespace whatif::datagen
