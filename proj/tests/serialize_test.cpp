#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "blowup/error.hpp"
#include "blowup/serialize.hpp"
#include "json.hpp"

namespace blowup {
namespace {

using nlohmann::json;

std::string schema_message(std::string_view text) {
  try {
    parse_spec(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SchemaViolation);
    return e.what();
  }
  ADD_FAILURE() << "accepted: " << text;
  return {};
}

TEST(SpecDocument, BuiltinDocument) {
  const PotentialSpec s = parse_spec(R"js({"beta": -1, "builtin": "isosceles", "params": {"alpha": 1}})js");
  const Potential p = compile(s);
  EXPECT_EQ(p.beta(), -1);
  EXPECT_EQ(p.eval(0.0).value, -5);
}

TEST(SpecDocument, ExpressionDocument) {
  const Potential a = compile(parse_spec(
      R"js({"beta": 4, "expr": "-(cos(theta)^4+sin(theta)^4)/4 - (e/2)*cos(theta)^2*sin(theta)^2", "params": {"e": 4}})js"));
  const Potential b = compile(PotentialSpec::from_builtin("yoshida_g", {{"epsilon", 4}}));
  for (int k = 0; k < 1000; ++k) {
    const double th = 2 * M_PI * k / 1000;
    EXPECT_NEAR(a.eval(th).value, b.eval(th).value, 1e-12);
  }
}

TEST(SpecDocument, DomainField) {
  const PotentialSpec s = parse_spec(R"js({"beta": 1, "expr": "cos(theta)", "domain": [-1, 1]})js");
  ASSERT_TRUE(s.domain);
  EXPECT_EQ(s.domain->first, -1);
  EXPECT_FALSE(compile(s).domain().periodic);
}

TEST(SpecDocument, SchemaViolationsNameTheField) {
  EXPECT_NE(schema_message(R"js({"builtin": "isosceles", "params": {"alpha": 1}})js").find("$.beta"),
            std::string::npos);
  EXPECT_NE(schema_message(R"js({"beta": -1, "builtin": "isosceles", "params": {"alpha": "x"}})js")
                .find("$.params.alpha"),
            std::string::npos);
  EXPECT_NE(schema_message(R"js({"beta": 1, "expr": "1", "colour": 2})js").find("$.colour"), std::string::npos);
  schema_message(R"js({"beta": 1, "expr": "1", "builtin": "isosceles"})js");
  schema_message(R"js({"beta": 1})js");
  schema_message(R"js({"beta": 1, "expr": 3})js");
  schema_message(R"js({"beta": 1, "expr": "1", "domain": [1]})js");
  schema_message("[1, 2]");
  schema_message("{not json");
}

TEST(SpecDocument, LoadMissingFile) {
  try {
    load_spec("/nonexistent/spec.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

TEST(SpecDocument, Overrides) {
  PotentialSpec s = PotentialSpec::from_builtin("isosceles", {{"alpha", 1}});
  apply_override(s, "alpha=13.5");
  EXPECT_EQ(s.params.at("alpha"), 13.5);
  apply_override(s, "alpha=-2e-3");
  EXPECT_EQ(s.params.at("alpha"), -2e-3);
  EXPECT_THROW(apply_override(s, "alpha"), Error);
  EXPECT_THROW(apply_override(s, "=3"), Error);
  EXPECT_THROW(apply_override(s, "alpha=3x"), Error);
  EXPECT_THROW(apply_override(s, "alpha=inf"), Error);
}

TEST(Json, CertificateFields) {
  const Potential p = compile(PotentialSpec::from_builtin("isosceles", {{"alpha", 13}}));
  const std::string text = to_json(certify(p));
  EXPECT_EQ(text.rfind("{\n  \"conclusion\"", 0), 0u);
  const json j = json::parse(text);
  EXPECT_EQ(j["conclusion"], "NonIntegrable");
  EXPECT_EQ(j["kind"], "direct");
  EXPECT_EQ(j["beta"], -1);
  ASSERT_EQ(j["triple"].size(), 3u);
  ASSERT_EQ(j["assumptions"].size(), 6u);
  for (const auto& a : j["assumptions"]) {
    EXPECT_TRUE(a.contains("index") && a.contains("satisfied") && a.contains("margin") && a.contains("detail"));
  }
  EXPECT_EQ(j["potential"]["builtin"], "isosceles");
  EXPECT_EQ(j["potential"]["params"]["alpha"], 13);
  EXPECT_FALSE(j.contains("complex_analyticity_asserted"));
}

TEST(Json, SeventeenDigitsAndDeterminism) {
  const Potential p = compile(PotentialSpec::from_builtin("isosceles", {{"alpha", 13}}));
  const std::string a = to_json(certify(p));
  EXPECT_EQ(a, to_json(certify(p)));
  const double margin = certify(p).assumption6_margin();
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", margin);
  EXPECT_NE(a.find(buf), std::string::npos);
}

TEST(Json, NonFiniteBecomesNull) {
  PotentialSpec s = PotentialSpec::from_builtin("isosceles", {{"alpha", std::nan("")}});
  EXPECT_NE(to_json(s).find("\"alpha\": null"), std::string::npos);
}

TEST(Json, SweepRows) {
  SweepResult r;
  r.param = "alpha";
  r.grid.push_back({1.0, Conclusion::NonIntegrable, CertificateKind::Complexified, ""});
  r.grid.push_back({2.0, Conclusion::Inconclusive, CertificateKind::Complexified, ""});
  r.grid.push_back({3.0, std::nullopt, std::nullopt, "PoleEncountered: x"});
  r.thresholds.push_back({1.5, 1.25, 1.75});
  const json j = json::parse(to_json(r));
  EXPECT_EQ(j["grid"][0], json::parse(R"js([1, "NonIntegrable", "complexified"])js"));
  EXPECT_EQ(j["grid"][1], json::parse(R"js([2, "Inconclusive"])js"));
  EXPECT_EQ(j["grid"][2][1], nullptr);
  EXPECT_EQ(j["thresholds"], json::parse("[1.5]"));
  EXPECT_EQ(j["brackets"][0], json::parse("[1.25, 1.75]"));
}

TEST(Json, Equilibria) {
  const Potential p = compile(PotentialSpec::from_builtin("isosceles", {{"alpha", 1}}));
  const json j = json::parse(to_json(find_equilibria(p)));
  ASSERT_EQ(j["equilibria"].size(), 6u);
  const json& e = j["equilibria"][2];
  EXPECT_EQ(e["sign"], "-");
  EXPECT_NEAR(e["v_star"].get<double>(), -std::sqrt(10.0), 1e-14);
  EXPECT_EQ(e["type"], "unstable_focus");
}

TEST(Json, CompareMr) {
  const Potential p = compile(PotentialSpec::from_builtin("isosceles", {{"alpha", 1}}));
  const json j = json::parse(to_json(compare_morales(p)));
  const json& mid = j["critical_points"][1];
  EXPECT_NEAR(mid["lambda"].get<double>(), 2.4, 1e-10);
  EXPECT_EQ(mid["necessary_inequality"]["satisfied"], false);
  EXPECT_EQ(mid["mr_beta_minus1_member"], false);
  EXPECT_TRUE(mid.contains("darboux_scale"));
}

TEST(Csv, Trajectory) {
  Trajectory t;
  t.samples.push_back({0.0, 0.0, 1.0, 0.1, 0.2, 0.3, 0.4, 0.5});
  t.samples.push_back({0.5, std::nan(""), std::nan(""), 0.1, 0.2, 0.3, 0.4, std::nan("")});
  std::ostringstream os;
  write_trajectory_csv(os, t);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "tau,t,r,theta,v,w,z,h");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0,1,0.10000000000000001,0.20000000000000001,0.29999999999999999,0.40000000000000002,0.5");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 11), "0.5,nan,nan");
}

}  // namespace
}  // namespace blowup
