#include "config.hpp"

#include <fstream>
#include <set>
#include <type_traits>

#include "linattn/error.hpp"
#include "linattn/malleability.hpp"

namespace linattn::cli {

namespace {

template <class T>
struct is_vector : std::false_type {};
template <class U>
struct is_vector<std::vector<U>> : std::true_type {};

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  fail(ErrorCode::ConfigError, where + ": " + what);
}

template <class T>
T convert(const json& v, const std::string& where) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) bad(where, "expected a boolean");
    return v.get<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) bad(where, "expected an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.is_number_unsigned()) return v.get<T>();
      if (v.get<std::int64_t>() < 0) bad(where, "expected a non-negative integer");
    }
    return v.get<T>();
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) bad(where, "expected a number");
    return v.get<T>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) bad(where, "expected a string");
    return v.get<std::string>();
  } else if constexpr (is_vector<T>::value) {
    if (!v.is_array()) bad(where, "expected an array");
    T out;
    for (std::size_t i = 0; i < v.size(); ++i)
      out.push_back(convert<typename T::value_type>(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
  }
}

// Reads the keys of one JSON object and rejects whatever is left over.
class Section {
 public:
  Section(json j, std::string path) : j_(std::move(j)), path_(std::move(path)) {
    if (j_.is_null()) j_ = json::object();
    if (!j_.is_object()) bad(path_.empty() ? "config" : path_, "expected an object");
  }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it != j_.end()) out = convert<T>(*it, where(key));
  }

  template <class T>
  void get(const std::string& key, std::optional<T>& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it != j_.end() && !it->is_null()) out = convert<T>(*it, where(key));
  }

  template <class Parse, class T>
  void get_enum(const std::string& key, T& out, Parse parse) {
    std::string name;
    get(key, name);
    if (name.empty()) return;
    try {
      out = parse(name);
    } catch (const Error& e) {
      bad(where(key), e.what());
    }
  }

  Section sub(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return Section(it == j_.end() ? json::object() : *it, where(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) bad(where(it.key()), "unknown key");
  }

 private:
  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  json j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_synthetic(Section& s, SyntheticSpec& spec) {
  s.get("kind", spec.kind);
  s.get("n_train", spec.n_train);
  s.get("n_test", spec.n_test);
  s.get("d", spec.d);
  s.get("classes", spec.num_classes);
  s.get("s_max", spec.s_max);
  s.get("s_min", spec.s_min);
  s.get("lead_energy", spec.lead_energy);
  s.get("normalize", spec.normalize);
}

void read_train(Section s, TrainConfig& t) {
  s.get("learning_rate", t.learning_rate);
  s.get("epochs", t.epochs);
  s.get("batch_size", t.batch_size);
  s.get("l2_lambda", t.l2_lambda);
  s.get_enum("optimizer", t.optimizer, parse_optimizer);
  s.get("plateau_tol", t.plateau_tol);
  s.finish();
}

void read_attack(Section s, AttackConfig& a) {
  s.get_enum("kind", a.kind, parse_attack_kind);
  s.get("eps", a.eps);
  s.get("alpha", a.alpha);
  s.get("iters", a.iters);
  s.get("decay", a.decay);
  s.finish();
}

json synthetic_json(const SyntheticSpec& s) {
  return {{"kind", s.kind},       {"n_train", s.n_train}, {"n_test", s.n_test},
          {"d", s.d},             {"classes", s.num_classes}, {"s_max", s.s_max},
          {"s_min", s.s_min},     {"lead_energy", s.lead_energy}, {"normalize", s.normalize}};
}

json train_json(const TrainConfig& t) {
  return {{"learning_rate", t.learning_rate}, {"epochs", t.epochs},
          {"batch_size", t.batch_size},       {"l2_lambda", t.l2_lambda},
          {"optimizer", std::string(to_string(t.optimizer))}, {"plateau_tol", t.plateau_tol}};
}

json attack_json(const AttackConfig& a) {
  return {{"kind", std::string(to_string(a.kind))}, {"eps", a.eps}, {"alpha", a.alpha},
          {"iters", a.iters}, {"decay", a.decay}};
}

void check(bool ok, const std::string& where, const std::string& what) {
  if (!ok) bad(where, what);
}

void validate_synthetic(const SyntheticSpec& s, const std::string& source) {
  check(s.kind == "spectrum" || s.kind == "sphere", "dataset.kind", "must be spectrum or sphere");
  check(s.n_train >= 2, "dataset.n_train", "must be at least 2");
  check(s.n_test >= 1, "dataset.n_test", "must be at least 1");
  check(s.d >= 1, "dataset.d", "must be positive");
  check(s.num_classes >= 2, "dataset.classes", "must be at least 2");
  if (source == "orthonormal")
    check(s.n_train + s.n_test <= s.d, "dataset.d", "orthonormal rows need n_train + n_test <= d");
  if (source == "synthetic" && s.kind == "spectrum") {
    check(s.n_train + s.n_test <= s.d, "dataset.d", "a prescribed spectrum needs n_train + n_test <= d");
    check(s.s_max > 0 && s.s_min > 0 && s.s_min <= s.s_max, "dataset.s_min", "need 0 < s_min <= s_max");
  }
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  Section root(j, "");
  {
    Section d = root.sub("dataset");
    d.get("source", c.dataset.source);
    read_synthetic(d, c.dataset.synthetic);
    d.get("path", c.dataset.path);
    d.get("labels_path", c.dataset.labels_path);
    d.get("class_filter", c.dataset.class_filter);
    d.get("max_per_class", c.dataset.max_per_class);
    d.get("standardize", c.dataset.standardize);
    d.get("mean", c.dataset.mean);
    d.get("std", c.dataset.std);
    d.finish();
  }
  root.get_enum("arch", c.arch, [](const std::string& s) { return parse_arch(s); });
  root.get("widths", c.widths);
  root.get("width", c.width);
  root.get("init_scale", c.init_scale);
  root.get("lambda", c.lambda);
  read_train(root.sub("train"), c.train);
  read_attack(root.sub("attack"), c.attack);
  root.get("adversarial_training", c.adversarial_training);
  {
    Section m = root.sub("malleability");
    m.get("tau", c.malleability.tau);
    m.get("topk", c.malleability.topk);
    m.get("max_test_points", c.malleability.max_test_points);
    m.get("mu_eps", c.malleability.mu_eps);
    m.get("mu_trials", c.malleability.mu_trials);
    m.get("intervention", c.malleability.intervention);
    m.finish();
  }
  {
    Section k = root.sub("kernel");
    k.get("type", c.kernel.type);
    k.get("degree", c.kernel.degree);
    k.finish();
  }
  {
    Section s = root.sub("spectral");
    s.get("layers", c.spectral.layers);
    s.get("eps", c.spectral.eps);
    s.finish();
  }
  {
    Section l = root.sub("landscape");
    l.get("radius", c.landscape.radius);
    l.get("grid", c.landscape.grid);
    l.finish();
  }
  root.get("seeds", c.seeds);
  root.get("threads", c.threads);
  root.get("out", c.out);
  root.finish();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

void validate(const ExperimentConfig& c) {
  const auto& src = c.dataset.source;
  check(src == "synthetic" || src == "orthonormal" || src == "csv" || src == "idx", "dataset.source",
        "must be synthetic, orthonormal, csv or idx");
  validate_synthetic(c.dataset.synthetic, src);
  if (src == "csv" || src == "idx") check(!c.dataset.path.empty(), "dataset.path", "required for file sources");
  if (src == "idx") check(!c.dataset.labels_path.empty(), "dataset.labels_path", "required for idx");
  const auto& st = c.dataset.standardize;
  check(st == "none" || st == "scalar" || st == "per_feature", "dataset.standardize",
        "must be none, scalar or per_feature");
  check(c.dataset.std > 0, "dataset.std", "must be positive");
  check(!c.widths.empty(), "widths", "must not be empty");
  for (std::size_t i = 0; i < c.widths.size(); ++i) {
    check(c.widths[i] >= 1, "widths", "must be positive");
    if (i > 0) check(c.widths[i] > c.widths[i - 1], "widths", "must be strictly increasing");
  }
  check(c.width >= 1, "width", "must be positive");
  check(c.init_scale > 0, "init_scale", "must be positive");
  check(c.lambda > 0, "lambda", "must be positive");
  try {
    linattn::validate(c.train);
    linattn::validate(c.attack);
    parse_intervention(c.malleability.intervention);
  } catch (const Error& e) {
    bad("config", e.what());
  }
  check(c.malleability.tau > 0 && c.malleability.tau < 1, "malleability.tau", "must lie in (0, 1)");
  check(c.malleability.topk >= 1, "malleability.topk", "must be positive");
  check(c.malleability.max_test_points >= 0, "malleability.max_test_points", "must be non-negative");
  check(c.malleability.mu_eps >= 0, "malleability.mu_eps", "must be non-negative");
  check(c.malleability.mu_trials >= 1, "malleability.mu_trials", "must be positive");
  const auto& kt = c.kernel.type;
  check(kt == "gram" || kt == "attention" || kt == "polynomial" || kt == "ntk" || kt == "sequential_ntk",
        "kernel.type", "must be gram, attention, polynomial, ntk or sequential_ntk");
  check(c.kernel.degree >= 1, "kernel.degree", "must be positive");
  check(c.spectral.layers >= 1 && c.spectral.layers <= 3, "spectral.layers", "must be 1, 2 or 3");
  check(c.spectral.eps > 0, "spectral.eps", "must be positive");
  check(c.landscape.radius > 0, "landscape.radius", "must be positive");
  check(c.landscape.grid >= 3 && c.landscape.grid % 2 == 1, "landscape.grid", "must be odd and at least 3");
  check(!c.seeds.empty(), "seeds", "must not be empty");
  check(c.threads >= 1, "threads", "must be positive");
}

json to_json(const ExperimentConfig& c) {
  json d = synthetic_json(c.dataset.synthetic);
  d["source"] = c.dataset.source;
  d["path"] = c.dataset.path;
  d["labels_path"] = c.dataset.labels_path;
  d["class_filter"] = c.dataset.class_filter ? json(*c.dataset.class_filter) : json(nullptr);
  d["max_per_class"] = c.dataset.max_per_class ? json(*c.dataset.max_per_class) : json(nullptr);
  d["standardize"] = c.dataset.standardize;
  d["mean"] = c.dataset.mean;
  d["std"] = c.dataset.std;
  return {{"dataset", d},
          {"arch", std::string(to_string(c.arch))},
          {"widths", c.widths},
          {"width", c.width},
          {"init_scale", c.init_scale},
          {"lambda", c.lambda},
          {"train", train_json(c.train)},
          {"attack", attack_json(c.attack)},
          {"adversarial_training", c.adversarial_training},
          {"malleability",
           {{"tau", c.malleability.tau},
            {"topk", c.malleability.topk},
            {"max_test_points", c.malleability.max_test_points},
            {"mu_eps", c.malleability.mu_eps},
            {"mu_trials", c.malleability.mu_trials},
            {"intervention", c.malleability.intervention}}},
          {"kernel", {{"type", c.kernel.type}, {"degree", c.kernel.degree}}},
          {"spectral", {{"layers", c.spectral.layers}, {"eps", c.spectral.eps}}},
          {"landscape", {{"radius", c.landscape.radius}, {"grid", c.landscape.grid}}},
          {"seeds", c.seeds},
          {"threads", c.threads},
          {"out", c.out}};
}

json to_json(const Fig1Config& c) {
  return {{"relu_data", synthetic_json(c.relu_data)},
          {"attn_data", synthetic_json(c.attn_data)},
          {"widths", c.widths},
          {"train", train_json(c.train)},
          {"lambda", c.lambda},
          {"init_scale", c.init_scale},
          {"seeds", c.seeds}};
}

json to_json(const FlipConfig& c) {
  return {{"data", synthetic_json(c.data)},
          {"width", c.width},
          {"init_scale", c.init_scale},
          {"train", train_json(c.train)},
          {"attack", attack_json(c.attack)},
          {"tau", c.tau},
          {"lambda", c.lambda},
          {"topk", c.topk},
          {"seeds", c.seeds},
          {"max_test_points", c.max_test_points}};
}

}  // namespace linattn::cli
