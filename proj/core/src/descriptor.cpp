// Copyright 2026 The rtv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

#include "rtv/descriptor.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <utility>

#include "rtv/error.hpp"

namespace rtv {

namespace {

using json = nlohmann::ordered_json;

constexpr std::array<std::pair<InputKind, std::string_view>, 6> kInputKinds = {{
    {InputKind::Signal, "signal"},
    {InputKind::Statistic, "statistic"},
    {InputKind::Qos, "qos"},
    {InputKind::Sla, "sla"},
    {InputKind::State, "state"},
    {InputKind::Functional, "functional"},
}};

constexpr std::array<std::pair<OutputKind, std::string_view>, 4> kOutputKinds = {{
    {OutputKind::Physical, "physical"},
    {OutputKind::Qos, "qos"},
    {OutputKind::Computational, "computational"},
    {OutputKind::External, "external"},
}};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ParseError, path + ": " + what);
}

const json& member(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

bool get_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) fail(path, "expected true or false");
  return v.get<bool>();
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

const json& get_array(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  return v;
}

const json& get_object(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  return v;
}

bool present(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it != obj.end() && !it->is_null();
}

template <typename Kind, std::size_t N>
Kind parse_kind(const std::array<std::pair<Kind, std::string_view>, N>& table, const json& v,
                const std::string& path) {
  const std::string text = get_string(v, path);
  for (const auto& [kind, name] : table) {
    if (name == text) return kind;
  }
  fail(path, "unknown kind '" + text + "'");
}

template <typename Kind, std::size_t N>
std::string_view kind_name(const std::array<std::pair<Kind, std::string_view>, N>& table,
                           Kind kind) {
  for (const auto& [k, name] : table) {
    if (k == kind) return name;
  }
  return "unknown";
}

Bound parse_bound(const json& v, const std::string& path) {
  get_object(v, path);
  Bound b;
  b.output = get_string(member(v, path, "output"), path + ".output");
  if (present(v, "lower")) b.lower = get_number(v["lower"], path + ".lower");
  if (present(v, "upper")) b.upper = get_number(v["upper"], path + ".upper");
  if (!b.lower && !b.upper) fail(path, "bound needs 'lower' or 'upper'");
  return b;
}

json bound_json(const Bound& b) {
  json out;
  out["output"] = b.output;
  if (b.lower) out["lower"] = *b.lower;
  if (b.upper) out["upper"] = *b.upper;
  return out;
}

SurrogateMeasure parse_surrogate(const json& v, const std::string& path) {
  get_object(v, path);
  SurrogateMeasure s;
  s.estimator_name = get_string(member(v, path, "estimator_name"), path + ".estimator_name");
  const auto& inputs = get_array(member(v, path, "inputs"), path + ".inputs");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    s.inputs.push_back(get_string(inputs[i], path + ".inputs[" + std::to_string(i) + "]"));
  }
  if (present(v, "params")) {
    const auto& params = get_object(v["params"], path + ".params");
    for (const auto& [key, value] : params.items()) {
      const std::string item_path = path + ".params." + key;
      if (value.is_number()) {
        s.params.emplace(key, value.get<double>());
      } else if (value.is_string()) {
        s.params.emplace(key, value.get<std::string>());
      } else {
        fail(item_path, "expected a number or a string");
      }
    }
  }
  return s;
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

void check_references(const MonitorDescriptor& d) {
  std::set<std::string> declared;
  for (const auto& in : d.reference_inputs) declared.insert(in.name);
  for (const auto& out : d.observed_outputs) declared.insert(out.name);
  auto require = [&](const std::string& name, const std::string& where) {
    if (!declared.contains(name)) {
      throw Error(ErrorKind::DanglingReference,
                  where + " refers to undeclared signal '" + name + "'");
    }
  };
  for (const auto& spec : d.specifications) {
    if (spec.surrogate) {
      for (const auto& input : spec.surrogate->inputs) {
        require(input, "surrogate of '" + spec.name + "'");
      }
    }
    if (spec.bound) require(spec.bound->output, "bound of '" + spec.name + "'");
    if (spec.falsification && spec.falsification->bound) {
      require(spec.falsification->bound->output, "falsification of '" + spec.name + "'");
    }
  }
}

const ParamValue* find_param(const ParamMap& params, const char* key) {
  auto it = params.find(key);
  return it == params.end() ? nullptr : &it->second;
}

double number_param(const ParamMap& params, const char* key, double fallback,
                    const std::string& spec_name) {
  const ParamValue* v = find_param(params, key);
  if (!v) return fallback;
  if (const double* d = std::get_if<double>(v)) return *d;
  throw Error(ErrorKind::InvalidConfig,
              "parameter '" + std::string(key) + "' of '" + spec_name + "' must be a number");
}

std::string string_param(const ParamMap& params, const char* key, const std::string& fallback,
                         const std::string& spec_name) {
  const ParamValue* v = find_param(params, key);
  if (!v) return fallback;
  if (const auto* s = std::get_if<std::string>(v)) return *s;
  throw Error(ErrorKind::InvalidConfig,
              "parameter '" + std::string(key) + "' of '" + spec_name + "' must be a string");
}

MarkovBinding bind_markov(const Specification& spec) {
  static const std::set<std::string> kKnown = {
      "t_fp",  "c1",          "z_mode",    "z_default",          "sigma",
      "window", "gate_sigmas", "calibration_residuals", "sigma_interpretation"};
  const ParamMap& params = spec.surrogate->params;
  for (const auto& [key, value] : params) {
    if (!kKnown.contains(key)) {
      throw Error(ErrorKind::InvalidConfig,
                  "unknown parameter '" + key + "' for estimator fp_rate_markov");
    }
  }

  MarkovBinding binding;
  binding.specification = spec.name;
  MonitorSpec& ms = binding.spec;
  ms.t_fp = number_param(params, "t_fp", ms.t_fp, spec.name);
  ms.c1 = number_param(params, "c1", ms.c1, spec.name);
  ms.z_default = number_param(params, "z_default", ms.z_default, spec.name);

  const std::string z_mode = string_param(params, "z_mode", "unit_peak", spec.name);
  if (z_mode == "unit_peak") {
    ms.z_mode = ZMode::UnitPeak;
  } else if (z_mode == "literal_density") {
    ms.z_mode = ZMode::LiteralDensity;
  } else {
    throw Error(ErrorKind::InvalidConfig, "unknown z_mode '" + z_mode + "'");
  }

  const double window = number_param(params, "window", 8.0, spec.name);
  if (!(window >= 2.0) || window != std::floor(window)) {
    throw Error(ErrorKind::InvalidConfig, "window must be an integer >= 2");
  }
  ms.predictor_window = static_cast<std::size_t>(window);

  if (const ParamValue* gate = find_param(params, "gate_sigmas")) {
    if (const auto* s = std::get_if<std::string>(gate); s && *s == "off") {
      ms.gate_sigmas.reset();
    } else {
      ms.gate_sigmas = number_param(params, "gate_sigmas", 3.0, spec.name);
    }
  }

  const ParamValue* sigma = find_param(params, "sigma");
  if (!sigma) {
    binding.sigma_from_oracle = true;
  } else if (const double* fixed = std::get_if<double>(sigma)) {
    ms.sigma = FixedSigma{*fixed};
  } else if (const auto& mode = std::get<std::string>(*sigma); mode == "oracle") {
    binding.sigma_from_oracle = true;
  } else if (mode == "calibrate") {
    CalibratedSigma cal;
    const double count = number_param(params, "calibration_residuals", 30.0, spec.name);
    if (!(count >= 2.0) || count != std::floor(count)) {
      throw Error(ErrorKind::InvalidConfig, "calibration_residuals must be an integer >= 2");
    }
    cal.residuals = static_cast<std::size_t>(count);
    const std::string interp =
        string_param(params, "sigma_interpretation", "std_is_sigma", spec.name);
    if (interp == "std_is_sigma") {
      cal.interpretation = SigmaInterpretation::StdIsSigma;
    } else if (interp == "std_is_variance") {
      cal.interpretation = SigmaInterpretation::StdIsVariance;
    } else {
      throw Error(ErrorKind::InvalidConfig, "unknown sigma_interpretation '" + interp + "'");
    }
    ms.sigma = cal;
  } else {
    throw Error(ErrorKind::InvalidConfig, "sigma must be a number, 'oracle' or 'calibrate'");
  }

  ms.validate();
  return binding;
}

}  // namespace

std::string_view to_string(InputKind kind) noexcept { return kind_name(kInputKinds, kind); }
std::string_view to_string(OutputKind kind) noexcept { return kind_name(kOutputKinds, kind); }

std::string_view to_string(Strategy strategy) noexcept {
  switch (strategy) {
    case Strategy::Direct: return "direct";
    case Strategy::Surrogate: return "surrogate";
    case Strategy::Falsification: return "falsification";
  }
  return "unknown";
}

Strategy StrategyAssignment::at(const std::string& specification) const {
  auto it = by_specification.find(specification);
  if (it == by_specification.end()) {
    throw Error(ErrorKind::InvalidArgument, "no strategy for '" + specification + "'");
  }
  return it->second;
}

StrategyAssignment validate_descriptor(const MonitorDescriptor& descriptor) {
  if (descriptor.specifications.empty()) {
    throw Error(ErrorKind::ParseError, "descriptor declares no specifications");
  }
  check_references(descriptor);
  StrategyAssignment out;
  for (const auto& spec : descriptor.specifications) {
    Strategy s;
    if (spec.directly_observable) {
      s = Strategy::Direct;
    } else if (spec.surrogate) {
      s = Strategy::Surrogate;
    } else if (spec.falsification) {
      s = Strategy::Falsification;
    } else {
      throw Error(ErrorKind::NotObservable,
                  "specification '" + spec.name +
                      "' is neither observable, estimable by a surrogate, nor falsifiable; "
                      "expose more inputs or outputs to the monitor");
    }
    out.by_specification.emplace(spec.name, s);
  }
  return out;
}

MonitorDescriptor parse_descriptor(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError,
                line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": malformed JSON");
  }
  get_object(root, "$");

  MonitorDescriptor d;
  d.goal = get_string(member(root, "$", "goal"), "goal");

  if (present(root, "reference_inputs")) {
    const auto& items = get_array(root["reference_inputs"], "reference_inputs");
    for (std::size_t i = 0; i < items.size(); ++i) {
      const std::string path = "reference_inputs[" + std::to_string(i) + "]";
      get_object(items[i], path);
      ReferenceInput in;
      in.name = get_string(member(items[i], path, "name"), path + ".name");
      in.kind = parse_kind(kInputKinds, member(items[i], path, "kind"), path + ".kind");
      if (present(items[i], "bounds")) in.bounds = get_string(items[i]["bounds"], path + ".bounds");
      d.reference_inputs.push_back(std::move(in));
    }
  }

  if (present(root, "observed_outputs")) {
    const auto& items = get_array(root["observed_outputs"], "observed_outputs");
    for (std::size_t i = 0; i < items.size(); ++i) {
      const std::string path = "observed_outputs[" + std::to_string(i) + "]";
      get_object(items[i], path);
      ObservedOutput out;
      out.name = get_string(member(items[i], path, "name"), path + ".name");
      out.kind = parse_kind(kOutputKinds, member(items[i], path, "kind"), path + ".kind");
      d.observed_outputs.push_back(std::move(out));
    }
  }

  const auto& specs = get_array(member(root, "$", "specifications"), "specifications");
  if (specs.empty()) fail("specifications", "at least one specification is required");
  std::set<std::string> names;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const std::string path = "specifications[" + std::to_string(i) + "]";
    const json& item = get_object(specs[i], path);
    Specification s;
    s.name = get_string(member(item, path, "name"), path + ".name");
    if (!names.insert(s.name).second) fail(path + ".name", "duplicate name '" + s.name + "'");
    if (present(item, "formal_text")) {
      s.formal_text = get_string(item["formal_text"], path + ".formal_text");
    }
    s.directly_observable =
        get_bool(member(item, path, "directly_observable"), path + ".directly_observable");
    if (present(item, "bound")) s.bound = parse_bound(item["bound"], path + ".bound");
    if (present(item, "surrogate")) {
      s.surrogate = parse_surrogate(item["surrogate"], path + ".surrogate");
    }
    if (present(item, "falsification")) {
      const std::string fpath = path + ".falsification";
      const json& f = get_object(item["falsification"], fpath);
      FalsificationRule rule;
      rule.condition_text = get_string(member(f, fpath, "condition_text"), fpath + ".condition_text");
      if (present(f, "bound")) rule.bound = parse_bound(f["bound"], fpath + ".bound");
      s.falsification = std::move(rule);
    }
    d.specifications.push_back(std::move(s));
  }

  if (present(root, "posthoc_traces")) {
    const auto& items = get_array(root["posthoc_traces"], "posthoc_traces");
    for (std::size_t i = 0; i < items.size(); ++i) {
      d.posthoc_traces.push_back(
          get_string(items[i], "posthoc_traces[" + std::to_string(i) + "]"));
    }
  }

  if (present(root, "operator_notify")) {
    const json& n = get_object(root["operator_notify"], "operator_notify");
    d.operator_notify.enabled =
        get_bool(member(n, "operator_notify", "enabled"), "operator_notify.enabled");
    if (present(n, "channel")) {
      d.operator_notify.channel = get_string(n["channel"], "operator_notify.channel");
    }
  }

  check_references(d);
  return d;
}

MonitorDescriptor load_descriptor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open descriptor " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_descriptor(buffer.str());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ParseError) throw;
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.message());
  }
}

std::string serialize_descriptor(const MonitorDescriptor& d) {
  json root;
  root["goal"] = d.goal;

  json inputs = json::array();
  for (const auto& in : d.reference_inputs) {
    inputs.push_back(json{{"name", in.name}, {"kind", to_string(in.kind)}, {"bounds", in.bounds}});
  }
  root["reference_inputs"] = std::move(inputs);

  json outputs = json::array();
  for (const auto& out : d.observed_outputs) {
    outputs.push_back(json{{"name", out.name}, {"kind", to_string(out.kind)}});
  }
  root["observed_outputs"] = std::move(outputs);

  json specs = json::array();
  for (const auto& s : d.specifications) {
    json item;
    item["name"] = s.name;
    item["formal_text"] = s.formal_text;
    item["directly_observable"] = s.directly_observable;
    if (s.bound) item["bound"] = bound_json(*s.bound);
    if (s.surrogate) {
      json sur;
      sur["estimator_name"] = s.surrogate->estimator_name;
      sur["inputs"] = s.surrogate->inputs;
      json params = json::object();
      for (const auto& [key, value] : s.surrogate->params) {
        std::visit([&](const auto& v) { params[key] = v; }, value);
      }
      sur["params"] = std::move(params);
      item["surrogate"] = std::move(sur);
    }
    if (s.falsification) {
      json f;
      f["condition_text"] = s.falsification->condition_text;
      if (s.falsification->bound) f["bound"] = bound_json(*s.falsification->bound);
      item["falsification"] = std::move(f);
    }
    specs.push_back(std::move(item));
  }
  root["specifications"] = std::move(specs);
  root["posthoc_traces"] = d.posthoc_traces;
  root["operator_notify"] =
      json{{"enabled", d.operator_notify.enabled}, {"channel", d.operator_notify.channel}};
  return root.dump(2) + "\n";
}

std::vector<MonitorBinding> bind_monitor(const MonitorDescriptor& descriptor,
                                         const StrategyAssignment& assignment) {
  std::vector<MonitorBinding> out;
  for (const auto& spec : descriptor.specifications) {
    switch (assignment.at(spec.name)) {
      case Strategy::Surrogate: {
        if (!spec.surrogate) {
          throw Error(ErrorKind::InvalidConfig, "'" + spec.name + "' has no surrogate measure");
        }
        if (spec.surrogate->estimator_name != kMarkovEstimator) {
          throw Error(ErrorKind::UnknownEstimator,
                      "estimator '" + spec.surrogate->estimator_name + "' of '" + spec.name +
                          "' is not available");
        }
        out.emplace_back(bind_markov(spec));
        break;
      }
      case Strategy::Direct: {
        if (!spec.bound) {
          throw Error(ErrorKind::InvalidConfig,
                      "directly observable '" + spec.name + "' needs a bound");
        }
        out.emplace_back(ThresholdConfig{spec.name, Strategy::Direct, *spec.bound});
        break;
      }
      case Strategy::Falsification: {
        if (!spec.falsification || !spec.falsification->bound) {
          throw Error(ErrorKind::InvalidConfig,
                      "falsification of '" + spec.name + "' needs a bound");
        }
        out.emplace_back(
            ThresholdConfig{spec.name, Strategy::Falsification, *spec.falsification->bound});
        break;
      }
    }
  }
  return out;
}

ThresholdMonitor::ThresholdMonitor(ThresholdConfig config) : config_(std::move(config)) {
  const auto& b = config_.bound;
  if (!b.lower && !b.upper) throw Error(ErrorKind::InvalidConfig, "bound has no limits");
  if (b.lower && b.upper && *b.lower > *b.upper) {
    throw Error(ErrorKind::InvalidConfig, "bound lower limit exceeds upper limit");
  }
}

Status ThresholdMonitor::check(double value) const {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::NonFiniteInput, "value of '" + config_.bound.output + "' is not finite");
  }
  const auto& b = config_.bound;
  if (b.lower && value < *b.lower) return Status::Violation;
  if (b.upper && value > *b.upper) return Status::Violation;
  return Status::Accept;
}

}  // namespace rtv
