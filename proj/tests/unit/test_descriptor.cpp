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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "rtv/descriptor.hpp"
#include "rtv/error.hpp"

namespace rtv {
namespace {

const std::string kFixtures = RTV_SOURCE_DIR "/tests/fixtures/";
const std::string kStudyCase = RTV_SOURCE_DIR "/descriptors/detector_fp.descriptor";

template <typename F>
ErrorKind error_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::IoError;
}

TEST(StudyCase, LoadsAsSurrogate) {
  const MonitorDescriptor d = load_descriptor(kStudyCase);
  EXPECT_EQ(d.goal, "The detector should not exceed a maximum level of false positives.");
  ASSERT_EQ(d.reference_inputs.size(), 1u);
  EXPECT_EQ(d.reference_inputs[0].kind, InputKind::Signal);
  ASSERT_EQ(d.observed_outputs.size(), 2u);
  ASSERT_EQ(d.specifications.size(), 1u);
  const auto& spec = d.specifications[0];
  EXPECT_FALSE(spec.directly_observable);
  ASSERT_TRUE(spec.surrogate);
  EXPECT_EQ(spec.surrogate->estimator_name, "fp_rate_markov");
  EXPECT_EQ(spec.surrogate->inputs, (std::vector<std::string>{"detections", "residuals"}));
  EXPECT_TRUE(d.operator_notify.enabled);

  const StrategyAssignment a = validate_descriptor(d);
  EXPECT_EQ(a.at("false_positive_rate"), Strategy::Surrogate);
}

TEST(StudyCase, BindsStudyCaseThresholds) {
  const MonitorDescriptor d = load_descriptor(kStudyCase);
  const auto bindings = bind_monitor(d, validate_descriptor(d));
  ASSERT_EQ(bindings.size(), 1u);
  const auto* markov = std::get_if<MarkovBinding>(&bindings[0]);
  ASSERT_NE(markov, nullptr);
  EXPECT_DOUBLE_EQ(markov->spec.t_fp, 0.018);
  EXPECT_DOUBLE_EQ(markov->spec.c1, 0.95);
  EXPECT_EQ(markov->spec.z_mode, ZMode::UnitPeak);
  EXPECT_TRUE(markov->sigma_from_oracle);
}

TEST(DirectStrategy, TemperatureThreshold) {
  const MonitorDescriptor d = load_descriptor(kFixtures + "direct_temperature.descriptor");
  const auto a = validate_descriptor(d);
  EXPECT_EQ(a.at("max_temperature"), Strategy::Direct);
  const auto bindings = bind_monitor(d, a);
  ASSERT_EQ(bindings.size(), 1u);
  const auto* cfg = std::get_if<ThresholdConfig>(&bindings[0]);
  ASSERT_NE(cfg, nullptr);
  EXPECT_EQ(cfg->strategy, Strategy::Direct);
  EXPECT_EQ(cfg->bound.output, "temp");
  EXPECT_EQ(cfg->bound.upper, 80.0);
  EXPECT_FALSE(cfg->bound.lower);

  const ThresholdMonitor monitor(*cfg);
  EXPECT_EQ(monitor.check(79.5), Status::Accept);
  EXPECT_EQ(monitor.check(80.0), Status::Accept);
  EXPECT_EQ(monitor.check(80.5), Status::Violation);
  EXPECT_EQ(error_kind([&] { monitor.check(NAN); }), ErrorKind::NonFiniteInput);
}

TEST(Validate, NotObservable) {
  const MonitorDescriptor d = load_descriptor(kFixtures + "not_observable.descriptor");
  try {
    validate_descriptor(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotObservable);
    EXPECT_NE(std::string(e.what()).find("false_positive_rate"), std::string::npos);
  }
}

TEST(Validate, FalsificationWhenOnlyFailureSignatureIsKnown) {
  MonitorDescriptor d = load_descriptor(kFixtures + "not_observable.descriptor");
  d.specifications[0].falsification =
      FalsificationRule{"detections appear where no target is present",
                        Bound{"detections", std::nullopt, 5.0}};
  EXPECT_EQ(validate_descriptor(d).at("false_positive_rate"), Strategy::Falsification);
}

TEST(Parse, EmptySpecifications) {
  EXPECT_EQ(error_kind([] { load_descriptor(kFixtures + "empty_specs.descriptor"); }),
            ErrorKind::ParseError);
  MonitorDescriptor d;
  EXPECT_EQ(error_kind([&] { validate_descriptor(d); }), ErrorKind::ParseError);
}

TEST(Parse, DanglingReference) {
  try {
    load_descriptor(kFixtures + "dangling_reference.descriptor");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DanglingReference);
    EXPECT_NE(std::string(e.what()).find("'foo'"), std::string::npos);
  }
}

TEST(Parse, DanglingBoundOutput) {
  MonitorDescriptor d = load_descriptor(kFixtures + "direct_temperature.descriptor");
  d.specifications[0].bound->output = "pressure";
  EXPECT_EQ(error_kind([&] { validate_descriptor(d); }), ErrorKind::DanglingReference);
}

TEST(Parse, MissingFile) {
  EXPECT_EQ(error_kind([] { load_descriptor(kFixtures + "does_not_exist.descriptor"); }),
            ErrorKind::ParseError);
}

TEST(Parse, MalformedJsonReportsLine) {
  try {
    parse_descriptor("{\n  \"goal\": \"x\",\n  \"specifications\": [\n}\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST(Parse, WrongTypesAndKinds) {
  EXPECT_EQ(error_kind([] { parse_descriptor(R"({"goal": 3, "specifications": []})"); }),
            ErrorKind::ParseError);
  EXPECT_EQ(error_kind([] {
              parse_descriptor(R"({"goal": "g", "observed_outputs": [{"name": "a", "kind": "x"}],
                                   "specifications": [{"name": "s", "directly_observable": true}]})");
            }),
            ErrorKind::ParseError);
  EXPECT_EQ(error_kind([] {
              parse_descriptor(R"({"goal": "g", "specifications": [
                                     {"name": "s", "directly_observable": true},
                                     {"name": "s", "directly_observable": true}]})");
            }),
            ErrorKind::ParseError);
}

TEST(Bind, UnknownEstimator) {
  const MonitorDescriptor d = load_descriptor(kFixtures + "unknown_estimator.descriptor");
  const auto a = validate_descriptor(d);
  EXPECT_EQ(error_kind([&] { bind_monitor(d, a); }), ErrorKind::UnknownEstimator);
}

TEST(Bind, RejectsUnknownParameter) {
  MonitorDescriptor d = load_descriptor(kStudyCase);
  d.specifications[0].surrogate->params["tfp"] = 0.01;
  EXPECT_EQ(error_kind([&] { bind_monitor(d, validate_descriptor(d)); }),
            ErrorKind::InvalidConfig);
}

TEST(Bind, ParameterVariants) {
  MonitorDescriptor d = load_descriptor(kStudyCase);
  auto& params = d.specifications[0].surrogate->params;
  params["sigma"] = 0.7;
  params["gate_sigmas"] = std::string("off");
  params["z_mode"] = std::string("literal_density");
  auto m = std::get<MarkovBinding>(bind_monitor(d, validate_descriptor(d))[0]);
  EXPECT_FALSE(m.sigma_from_oracle);
  EXPECT_EQ(m.spec.sigma, SigmaConfig{FixedSigma{0.7}});
  EXPECT_FALSE(m.spec.gate_sigmas);
  EXPECT_EQ(m.spec.z_mode, ZMode::LiteralDensity);

  params["sigma"] = std::string("calibrate");
  params["calibration_residuals"] = 12.0;
  params["sigma_interpretation"] = std::string("std_is_variance");
  m = std::get<MarkovBinding>(bind_monitor(d, validate_descriptor(d))[0]);
  EXPECT_EQ(m.spec.sigma, SigmaConfig{(CalibratedSigma{12, SigmaInterpretation::StdIsVariance})});

  params["c1"] = 1.5;
  EXPECT_EQ(error_kind([&] { bind_monitor(d, validate_descriptor(d)); }),
            ErrorKind::InvalidConfig);
}

TEST(RoundTrip, FixturesReparseIdentically) {
  for (const char* name : {"direct_temperature.descriptor", "detector_fp_c99.descriptor"}) {
    const MonitorDescriptor d = load_descriptor(kFixtures + name);
    const std::string text = serialize_descriptor(d);
    EXPECT_EQ(parse_descriptor(text), d) << name;
    EXPECT_EQ(serialize_descriptor(parse_descriptor(text)), text) << name;
  }
  const MonitorDescriptor study = load_descriptor(kStudyCase);
  EXPECT_EQ(parse_descriptor(serialize_descriptor(study)), study);
}

TEST(RoundTrip, OptionalFieldsSurvive) {
  MonitorDescriptor d = load_descriptor(kFixtures + "direct_temperature.descriptor");
  Specification extra;
  extra.name = "overheat_signature";
  extra.falsification = FalsificationRule{"temp rises by more than 5 C in 1 s",
                                          Bound{"temp", -40.0, std::nullopt}};
  d.specifications.push_back(extra);
  d.specifications[0].surrogate = SurrogateMeasure{"moving_average", {"ambient"}, {{"w", 3.0}}};
  EXPECT_EQ(parse_descriptor(serialize_descriptor(d)), d);
}

TEST(StrategyAssignment, IndependentOfListingOrder) {
  MonitorDescriptor d = load_descriptor(kFixtures + "direct_temperature.descriptor");
  const MonitorDescriptor study = load_descriptor(kStudyCase);
  d.reference_inputs.insert(d.reference_inputs.end(), study.reference_inputs.begin(),
                            study.reference_inputs.end());
  d.observed_outputs.insert(d.observed_outputs.end(), study.observed_outputs.begin(),
                            study.observed_outputs.end());
  d.specifications.push_back(study.specifications[0]);
  Specification falsified;
  falsified.name = "ghost_tracks";
  falsified.falsification = FalsificationRule{"track with no reference echo", std::nullopt};
  d.specifications.push_back(falsified);

  const StrategyAssignment reference = validate_descriptor(d);
  EXPECT_EQ(reference.at("max_temperature"), Strategy::Direct);
  EXPECT_EQ(reference.at("false_positive_rate"), Strategy::Surrogate);
  EXPECT_EQ(reference.at("ghost_tracks"), Strategy::Falsification);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(d.specifications.begin(), d.specifications.end(), rng);
    EXPECT_EQ(validate_descriptor(d), reference);
  }
}

}  // namespace
}  // namespace rtv
