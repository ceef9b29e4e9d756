#include "whatif/parser.hpp"

#include "whatif/error.hpp"
#include "whatif/lexicon.hpp"
#include "whatif/serialization.hpp"
#include "whatif/text.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace whatif::parser {
namespace {

using Json = nlohmann::json;

struct VerbEntry {
  std::string_view word;
  ActionKind kind;
};

constexpr VerbEntry kVerbs[] = {
    {"push", ActionKind::Push},     {"pushes", ActionKind::Push},     {"pushed", ActionKind::Push},
    {"pushing", ActionKind::Push},  {"shove", ActionKind::Push},      {"shoves", ActionKind::Push},
    {"shoved", ActionKind::Push},   {"shoving", ActionKind::Push},    {"roll", ActionKind::Push},
    {"rolls", ActionKind::Push},    {"rolled", ActionKind::Push},     {"rolling", ActionKind::Push},
    {"spin", ActionKind::Rotate},   {"spins", ActionKind::Rotate},    {"spun", ActionKind::Rotate},
    {"spinning", ActionKind::Rotate}, {"rotate", ActionKind::Rotate}, {"rotates", ActionKind::Rotate},
    {"rotated", ActionKind::Rotate}, {"rotating", ActionKind::Rotate}, {"turn", ActionKind::Rotate},
    {"turns", ActionKind::Rotate},  {"turned", ActionKind::Rotate},   {"turning", ActionKind::Rotate},
    {"remove", ActionKind::Remove}, {"removes", ActionKind::Remove},  {"removed", ActionKind::Remove},
    {"removing", ActionKind::Remove}, {"take", ActionKind::Remove},   {"takes", ActionKind::Remove},
    {"took", ActionKind::Remove},   {"taking", ActionKind::Remove},   {"drop", ActionKind::Drop},
    {"drops", ActionKind::Drop},    {"dropped", ActionKind::Drop},    {"dropping", ActionKind::Drop},
    {"place", ActionKind::Drop},    {"places", ActionKind::Drop},     {"placed", ActionKind::Drop},
    {"placing", ActionKind::Drop},
};

std::vector<std::string> split_phrase(std::string_view phrase) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= phrase.size()) {
    std::size_t end = phrase.find(' ', start);
    if (end == std::string_view::npos) end = phrase.size();
    out.emplace_back(phrase.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::size_t match_len(const std::vector<std::string>& tokens, std::size_t at, const std::vector<std::string>& phrase) {
  if (at + phrase.size() > tokens.size()) return 0;
  for (std::size_t k = 0; k < phrase.size(); ++k)
    if (tokens[at + k] != phrase[k]) return 0;
  return phrase.size();
}

std::vector<double> one_hot(std::size_t n, std::size_t hot) {
  std::vector<double> v(n, 0.0);
  v[hot] = 1.0;
  return v;
}

std::vector<double> softmax(const std::vector<double>& s) {
  const double m = *std::max_element(s.begin(), s.end());
  std::vector<double> p(s.size());
  double z = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) z += (p[i] = std::exp(s[i] - m));
  for (double& v : p) v /= z;
  return p;
}

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

/// Multiclass averaged perceptron over sparse count vectors.
LinearHead train_head(const std::vector<CountVector>& xs, const std::vector<std::size_t>& ys,
                      std::vector<std::string> classes, std::size_t dim, const TrainOptions& opt, std::uint64_t salt) {
  const std::size_t k = classes.size();
  std::vector<std::vector<double>> w(k, std::vector<double>(dim, 0.0)), u = w;
  std::vector<double> b(k, 0.0), ub(k, 0.0);
  LinearHead head{std::move(classes), {}, {}};
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(opt.seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
  double c = 1.0;
  for (int epoch = 0; epoch < opt.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[draw(rng, i)]);
    for (std::size_t idx : order) {
      const CountVector& x = xs[idx];
      std::size_t best = 0;
      double best_score = -INFINITY;
      for (std::size_t cl = 0; cl < k; ++cl) {
        double s = opt.use_bias ? b[cl] : 0.0;
        for (const auto& [f, v] : x) s += w[cl][f] * v;
        if (s > best_score) {
          best_score = s;
          best = cl;
        }
      }
      const std::size_t y = ys[idx];
      if (best != y) {
        for (const auto& [f, v] : x) {
          w[y][f] += v;
          u[y][f] += c * v;
          w[best][f] -= v;
          u[best][f] -= c * v;
        }
        if (opt.use_bias) {
          b[y] += 1.0;
          ub[y] += c;
          b[best] -= 1.0;
          ub[best] -= c;
        }
      }
      c += 1.0;
    }
  }
  head.w.assign(k, std::vector<double>(dim, 0.0));
  head.b.assign(k, 0.0);
  for (std::size_t cl = 0; cl < k; ++cl) {
    for (std::size_t f = 0; f < dim; ++f) head.w[cl][f] = w[cl][f] - u[cl][f] / c;
    head.b[cl] = b[cl] - ub[cl] / c;
  }
  return head;
}

std::vector<std::string> class_ids() {
  std::vector<std::string> out;
  for (ObjectClass c : kAllClasses) out.emplace_back(class_id(c));
  return out;
}

std::vector<std::string> kind_ids() {
  std::vector<std::string> out;
  for (ActionKind k : kAllActionKinds) out.emplace_back(action_kind_id(k));
  return out;
}

Json head_json(const LinearHead& h) { return {{"classes", h.classes}, {"w", h.w}, {"b", h.b}}; }

LinearHead head_from_json(const Json& j, const std::string& path, std::size_t dim, const std::vector<std::string>& expected) {
  LinearHead h;
  const Json& classes = io::array(io::field(j, "classes", path), path + ".classes");
  for (std::size_t i = 0; i < classes.size(); ++i) h.classes.push_back(io::string(classes[i], path + ".classes[" + std::to_string(i) + "]"));
  if (h.classes != expected) throw SchemaError(path + ".classes", "unexpected class list");
  const Json& w = io::array(io::field(j, "w", path), path + ".w", h.classes.size());
  for (std::size_t r = 0; r < w.size(); ++r) {
    const std::string rp = path + ".w[" + std::to_string(r) + "]";
    const Json& row = io::array(w[r], rp, dim == 0 ? 0 : dim);
    if (row.size() != dim) throw SchemaError(rp, "expected " + std::to_string(dim) + " elements");
    std::vector<double> vals;
    vals.reserve(dim);
    for (std::size_t f = 0; f < row.size(); ++f) vals.push_back(io::number(row[f], rp + "[" + std::to_string(f) + "]"));
    h.w.push_back(std::move(vals));
  }
  const Json& b = io::array(io::field(j, "b", path), path + ".b", h.classes.size());
  for (std::size_t i = 0; i < b.size(); ++i) h.b.push_back(io::number(b[i], path + ".b[" + std::to_string(i) + "]"));
  return h;
}

std::pair<double, double> push_output(const LinearModel& m, const CountVector& x) {
  double out[2];
  for (int r = 0; r < 2; ++r) {
    double s = m.push_b[r];
    for (const auto& [f, v] : x) s += m.push_w[r][f] * v;
    out[r] = std::tanh(s);
  }
  return {out[0], out[1]};
}

}  // namespace

std::string_view backend_id(Backend b) { return b == Backend::Rules ? "rules" : "linear"; }

std::optional<Backend> backend_from_id(std::string_view id) {
  if (id == "rules") return Backend::Rules;
  if (id == "linear") return Backend::Linear;
  return std::nullopt;
}

ParseOutcome parse_rules(std::string_view text, const Scene* scene) {
  const std::vector<std::string> tokens = text::tokenize(text);

  std::size_t verb_at = tokens.size();
  ActionKind kind = ActionKind::Push;
  for (std::size_t i = 0; i < tokens.size() && verb_at == tokens.size(); ++i)
    for (const auto& v : kVerbs)
      if (tokens[i] == v.word) {
        verb_at = i;
        kind = v.kind;
        break;
      }
  if (verb_at == tokens.size()) throw ParseError("unparseable action");

  const auto mentions = lexicon::find_mentions(tokens, verb_at + 1);
  if (mentions.empty()) throw ParseError("unknown target");
  const lexicon::Mention target = mentions.front();

  ParseOutcome out{Action{kind, target.cls, std::monostate{}}, {}, Backend::Rules};
  out.confidences[std::string(kActionTypeHead)] = one_hot(kNumActionKinds, static_cast<std::size_t>(kind));
  out.confidences[std::string(kObjectHead)] = one_hot(kNumClasses, class_index(target.cls));

  switch (kind) {
    case ActionKind::Push: {
      static const auto directions = [] {
        std::vector<std::pair<std::vector<std::string>, double>> d;
        for (const auto& w : lexicon::direction_words()) d.emplace_back(split_phrase(w.phrase), w.angle);
        return d;
      }();
      static const auto centers = [] {
        std::vector<std::vector<std::string>> c;
        for (auto p : lexicon::center_phrases()) c.push_back(split_phrase(p));
        return c;
      }();
      std::optional<double> angle;
      bool center = false;
      for (std::size_t i = target.end; i < tokens.size() && !angle && !center; ++i) {
        std::size_t best = 0;
        for (const auto& [phrase, a] : directions)
          if (std::size_t n = match_len(tokens, i, phrase); n > best) {
            best = n;
            angle = a;
          }
        for (const auto& phrase : centers)
          if (std::size_t n = match_len(tokens, i, phrase); n > best) {
            best = n;
            angle.reset();
            center = true;
          }
      }
      if (center) {
        if (!scene) throw ParseError("\"middle of the table\" needs a scene");
        const SceneObject* obj = scene->find(target.cls);
        if (!obj) throw ParseError("unknown target");
        const Vec3& p = obj->pose.translation;
        try {
          angle = angle_from_xy(-p.x(), -p.y());
        } catch (const DataError&) {
          throw ParseError("object already at the middle of the table");
        }
      }
      if (!angle) throw ParseError("missing push direction");
      out.action.params = PushParams{*angle};
      out.confidences[std::string(kPushHead)] = {1.0};
      break;
    }
    case ActionKind::Rotate: {
      std::optional<RotationSense> sense;
      for (std::size_t i = verb_at + 1; i < tokens.size() && !sense; ++i) {
        const std::string& t = tokens[i];
        if (t == "anti-clockwise" || t == "anticlockwise" || t == "counter-clockwise" || t == "counterclockwise")
          sense = RotationSense::CCW;
        else if ((t == "anti" || t == "counter") && i + 1 < tokens.size() && tokens[i + 1] == "clockwise")
          sense = RotationSense::CCW;
        else if (t == "clockwise")
          sense = RotationSense::CW;
      }
      if (!sense) throw ParseError("missing rotation sense");
      out.action.params = RotateParams{*sense};
      out.confidences[std::string(kSenseHead)] = one_hot(2, *sense == RotationSense::CW ? 0 : 1);
      break;
    }
    case ActionKind::Remove:
      break;
    case ActionKind::Drop: {
      std::optional<ObjectClass> onto;
      for (std::size_t i = target.end; i < tokens.size() && !onto; ++i) {
        if (tokens[i] != "on" && tokens[i] != "onto") continue;
        for (const auto& m : lexicon::find_mentions(tokens, i + 1))
          if (m.cls != target.cls) {
            onto = m.cls;
            break;
          }
      }
      if (!onto) throw ParseError("missing drop target");
      out.action.params = DropParams{*onto};
      out.confidences[std::string(kOntoHead)] = one_hot(kNumClasses, class_index(*onto));
      break;
    }
  }
  return out;
}

std::vector<std::string> features(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  bool after_on = false;
  for (const auto& t : tokens) {
    out.push_back(t);
    if (after_on) out.push_back("on:" + t);
    if (t == "on" || t == "onto") after_on = true;
  }
  return out;
}

std::optional<std::size_t> Vocabulary::index(std::string_view w) const {
  auto it = std::lower_bound(words.begin(), words.end(), w);
  if (it == words.end() || *it != w) return std::nullopt;
  return static_cast<std::size_t>(it - words.begin());
}

CountVector count_vector(const Vocabulary& vocab, std::string_view text) {
  CountVector x;
  for (const auto& f : features(text::tokenize(text)))
    if (auto i = vocab.index(f)) x[*i] += 1.0;
  return x;
}

std::vector<double> LinearHead::scores(const CountVector& x) const {
  std::vector<double> s(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    double v = b[c];
    for (const auto& [f, n] : x) v += w[c][f] * n;
    s[c] = v;
  }
  return s;
}

std::size_t LinearHead::predict(const CountVector& x, std::optional<std::size_t> exclude) const {
  const auto s = scores(x);
  std::size_t best = s.size();
  for (std::size_t c = 0; c < s.size(); ++c) {
    if (exclude && *exclude == c) continue;
    if (best == s.size() || s[c] > s[best]) best = c;
  }
  return best;
}

bool LinearModel::operator==(const LinearModel& o) const {
  auto same = [](const LinearHead& a, const LinearHead& b) { return a.classes == b.classes && a.w == b.w && a.b == b.b; };
  return vocab.words == o.vocab.words && use_bias == o.use_bias && same(action_type, o.action_type) &&
         same(object, o.object) && same(sense, o.sense) && same(onto, o.onto) && push_w == o.push_w &&
         push_b == o.push_b;
}

LinearModel train_linear(const std::vector<std::pair<std::string, Action>>& corpus, const TrainOptions& options) {
  std::set<ActionKind> kinds;
  std::set<ObjectClass> targets;
  for (const auto& [text, a] : corpus) {
    kinds.insert(a.kind);
    targets.insert(a.target);
  }
  for (ActionKind k : kAllActionKinds)
    if (!kinds.count(k)) throw DataError("insufficient class coverage: " + std::string(action_kind_id(k)));
  for (ObjectClass c : kAllClasses)
    if (!targets.count(c)) throw DataError("insufficient class coverage: " + std::string(class_id(c)));

  LinearModel m;
  m.use_bias = options.use_bias;
  std::vector<std::vector<std::string>> feats;
  std::set<std::string> vocab;
  for (const auto& [text, a] : corpus) {
    feats.push_back(features(text::tokenize(text)));
    vocab.insert(feats.back().begin(), feats.back().end());
  }
  m.vocab.words.assign(vocab.begin(), vocab.end());
  const std::size_t dim = m.vocab.size();

  std::vector<CountVector> xs;
  for (const auto& f : feats) {
    CountVector x;
    for (const auto& w : f) x[*m.vocab.index(w)] += 1.0;
    xs.push_back(std::move(x));
  }

  std::vector<std::size_t> kind_y, obj_y;
  for (const auto& [text, a] : corpus) {
    kind_y.push_back(static_cast<std::size_t>(a.kind));
    obj_y.push_back(class_index(a.target));
  }
  m.action_type = train_head(xs, kind_y, kind_ids(), dim, options, 0);
  m.object = train_head(xs, obj_y, class_ids(), dim, options, 1);

  std::vector<CountVector> sx, ox, px;
  std::vector<std::size_t> sy, oy;
  std::vector<std::pair<double, double>> py;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Action& a = corpus[i].second;
    if (const auto* r = std::get_if<RotateParams>(&a.params)) {
      sx.push_back(xs[i]);
      sy.push_back(r->sense == RotationSense::CW ? 0 : 1);
    } else if (const auto* d = std::get_if<DropParams>(&a.params)) {
      ox.push_back(xs[i]);
      oy.push_back(class_index(d->onto));
    } else if (const auto* p = std::get_if<PushParams>(&a.params)) {
      px.push_back(xs[i]);
      py.emplace_back(std::cos(p->direction_angle), std::sin(p->direction_angle));
    }
  }
  m.sense = train_head(sx, sy, {"cw", "ccw"}, dim, options, 2);
  m.onto = train_head(ox, oy, class_ids(), dim, options, 3);

  // Ridge regression on atanh-mapped targets; tanh at prediction time keeps
  // outputs in [-1, 1].
  const std::size_t cols = dim + (options.use_bias ? 1 : 0);
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(cols), static_cast<Eigen::Index>(cols)) * options.ridge;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cols), 2);
  for (std::size_t i = 0; i < px.size(); ++i) {
    std::vector<std::pair<Eigen::Index, double>> row;
    for (const auto& [f, v] : px[i]) row.emplace_back(static_cast<Eigen::Index>(f), v);
    if (options.use_bias) row.emplace_back(static_cast<Eigen::Index>(dim), 1.0);
    const double tx = std::atanh(0.95 * py[i].first), ty = std::atanh(0.95 * py[i].second);
    for (const auto& [r, vr] : row) {
      for (const auto& [c, vc] : row) A(r, c) += vr * vc;
      rhs(r, 0) += vr * tx;
      rhs(r, 1) += vr * ty;
    }
  }
  const Eigen::MatrixXd sol = A.ldlt().solve(rhs);
  m.push_w.assign(2, std::vector<double>(dim, 0.0));
  m.push_b.assign(2, 0.0);
  for (int r = 0; r < 2; ++r) {
    for (std::size_t f = 0; f < dim; ++f) m.push_w[r][f] = sol(static_cast<Eigen::Index>(f), r);
    if (options.use_bias) m.push_b[r] = sol(static_cast<Eigen::Index>(dim), r);
  }
  return m;
}

ActionParams predict_params(const LinearModel& model, std::string_view text, ActionKind kind, ObjectClass target) {
  const CountVector x = count_vector(model.vocab, text);
  switch (kind) {
    case ActionKind::Push: {
      const auto [px, py] = push_output(model, x);
      return PushParams{px == 0.0 && py == 0.0 ? 0.0 : std::atan2(py, px)};
    }
    case ActionKind::Rotate:
      return RotateParams{model.sense.predict(x) == 0 ? RotationSense::CW : RotationSense::CCW};
    case ActionKind::Remove:
      return std::monostate{};
    case ActionKind::Drop:
      return DropParams{kAllClasses[model.onto.predict(x, static_cast<std::size_t>(class_index(target)))]};
  }
  return std::monostate{};
}

ParseOutcome parse_linear(const LinearModel& model, std::string_view text, std::optional<ActionKind> forced_kind) {
  const CountVector x = count_vector(model.vocab, text);
  ParseOutcome out{Action{}, {}, Backend::Linear};
  const auto kind_scores = model.action_type.scores(x);
  out.confidences[std::string(kActionTypeHead)] = softmax(kind_scores);
  const ActionKind kind = forced_kind ? *forced_kind : kAllActionKinds[model.action_type.predict(x)];
  out.confidences[std::string(kObjectHead)] = softmax(model.object.scores(x));
  const ObjectClass target = kAllClasses[model.object.predict(x)];
  out.action = Action{kind, target, predict_params(model, text, kind, target)};
  switch (kind) {
    case ActionKind::Push: {
      const auto [px, py] = push_output(model, x);
      out.confidences[std::string(kPushHead)] = {std::min(1.0, std::hypot(px, py))};
      break;
    }
    case ActionKind::Rotate:
      out.confidences[std::string(kSenseHead)] = softmax(model.sense.scores(x));
      break;
    case ActionKind::Remove:
      break;
    case ActionKind::Drop: {
      auto s = model.onto.scores(x);
      s[class_index(target)] = -INFINITY;
      out.confidences[std::string(kOntoHead)] = softmax(s);
      break;
    }
  }
  return out;
}

nlohmann::json to_json(const LinearModel& m) {
  return {{"format", "whatif-linear-parser/1"},
          {"vocabulary", m.vocab.words},
          {"use_bias", m.use_bias},
          {"heads",
           {{std::string(kActionTypeHead), head_json(m.action_type)},
            {std::string(kObjectHead), head_json(m.object)},
            {std::string(kSenseHead), head_json(m.sense)},
            {std::string(kOntoHead), head_json(m.onto)},
            {std::string(kPushHead), {{"w", m.push_w}, {"b", m.push_b}}}}}};
}

LinearModel linear_model_from_json(const nlohmann::json& j, const std::string& path) {
  LinearModel m;
  const Json& vocab = io::array(io::field(j, "vocabulary", path), path + ".vocabulary");
  for (std::size_t i = 0; i < vocab.size(); ++i)
    m.vocab.words.push_back(io::string(vocab[i], path + ".vocabulary[" + std::to_string(i) + "]"));
  if (!std::is_sorted(m.vocab.words.begin(), m.vocab.words.end()))
    throw SchemaError(path + ".vocabulary", "vocabulary must be sorted");
  m.use_bias = io::boolean(io::field(j, "use_bias", path), path + ".use_bias");
  const std::string hp = path + ".heads";
  const Json& heads = io::field(j, "heads", path);
  const std::size_t dim = m.vocab.size();
  m.action_type = head_from_json(io::field(heads, kActionTypeHead, hp), hp + ".action_type", dim, kind_ids());
  m.object = head_from_json(io::field(heads, kObjectHead, hp), hp + ".object", dim, class_ids());
  m.sense = head_from_json(io::field(heads, kSenseHead, hp), hp + ".sense", dim, {"cw", "ccw"});
  m.onto = head_from_json(io::field(heads, kOntoHead, hp), hp + ".onto", dim, class_ids());
  const std::string pp = hp + ".push";
  const Json& push = io::field(heads, kPushHead, hp);
  const Json& w = io::array(io::field(push, "w", pp), pp + ".w", 2);
  for (std::size_t r = 0; r < 2; ++r) {
    const std::string rp = pp + ".w[" + std::to_string(r) + "]";
    const Json& row = io::array(w[r], rp);
    if (row.size() != dim) throw SchemaError(rp, "expected " + std::to_string(dim) + " elements");
    std::vector<double> vals;
    for (std::size_t f = 0; f < dim; ++f) vals.push_back(io::number(row[f], rp + "[" + std::to_string(f) + "]"));
    m.push_w.push_back(std::move(vals));
  }
  const Json& b = io::array(io::field(push, "b", pp), pp + ".b", 2);
  for (std::size_t r = 0; r < 2; ++r) m.push_b.push_back(io::number(b[r], pp + ".b[" + std::to_string(r) + "]"));
  return m;
}

}  // namespace whatif::parser
