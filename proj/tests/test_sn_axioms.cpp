#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include <kdof/kdof.hpp>

namespace {

using kdof::AxiomReport;
using kdof::AxiomSuiteResult;
using kdof::AxiomVerdict;
using kdof::make_norm;
using kdof::make_operator;
using kdof::NormKind;
using kdof::Operator;
using kdof::Rng;

Eigen::MatrixXd random_orthogonal(Rng& rng, int n) {
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd d = qr.matrixQR().diagonal();
  for (int i = 0; i < n; ++i)
    if (d(i) < 0) q.col(i) *= -1.0;
  return q;
}

Operator p2_op(const Eigen::MatrixXd& m) {
  return make_operator(m, make_norm(NormKind::p2), make_norm(NormKind::p2));
}

bool is_hex16(const std::string& s) {
  if (s.size() != 16) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); });
}

TEST(Sn1, MonotoneWithSharpNormAgreement) {
  Eigen::VectorXd d(5);
  d << 5.0, 4.0, 3.0, 2.0, 1.0;
  Operator op = p2_op(Eigen::MatrixXd(d.asDiagonal()));
  AxiomReport rep = kdof::check_sn1(op, 5);
  EXPECT_EQ(rep.axiom, "SN1");
  EXPECT_EQ(rep.verdict, AxiomVerdict::Pass);
  EXPECT_TRUE(rep.passed);
  // d_1 equals the norm exactly here, so the binding slack is zero
  EXPECT_NEAR(rep.slack, 0.0, 1e-10);
  EXPECT_GT(rep.tol, 0.0);
  EXPECT_TRUE(is_hex16(rep.digest));

  EXPECT_THROW(kdof::check_sn1(op, 0), std::invalid_argument);
}

TEST(Sn2, AdditivityTightAtDiagonalShift) {
  Eigen::VectorXd d(3);
  d << 3.0, 2.0, 1.0;
  Operator s = p2_op(Eigen::MatrixXd(d.asDiagonal()));
  Operator t = p2_op(Eigen::MatrixXd::Identity(3, 3) * 0.5);
  AxiomReport rep = kdof::check_sn2(s, t, 2);
  EXPECT_EQ(rep.axiom, "SN2");
  EXPECT_EQ(rep.verdict, AxiomVerdict::Pass);
  // d_2(S + I/2) = 2.5 = d_2(S) + 1/2 exactly
  EXPECT_NEAR(rep.slack, 0.0, 1e-10);

  Operator wide = p2_op(Eigen::MatrixXd::Ones(3, 4));
  EXPECT_THROW(kdof::check_sn2(s, wide, 1), std::invalid_argument);
  EXPECT_THROW(kdof::check_sn2(s, t, 0), std::invalid_argument);
}

TEST(Sn3, CompositionTightForScaledRotations) {
  Rng rng(808);
  Eigen::VectorXd d(3);
  d << 3.0, 2.0, 1.0;
  Operator a = p2_op(0.5 * random_orthogonal(rng, 3));
  Operator t = p2_op(Eigen::MatrixXd(d.asDiagonal()));
  Operator b = p2_op(2.0 * random_orthogonal(rng, 3));
  AxiomReport rep = kdof::check_sn3(a, t, b, 2);
  EXPECT_EQ(rep.axiom, "SN3");
  EXPECT_EQ(rep.verdict, AxiomVerdict::Pass);
  // scaled rotations compose the widths exactly: d_2 = 2 * 0.5 * 2
  EXPECT_NEAR(rep.slack, 0.0, 1e-10);

  Operator tall = p2_op(Eigen::MatrixXd::Ones(4, 3));
  EXPECT_THROW(kdof::check_sn3(tall, t, b, 1), std::invalid_argument);
  Operator p1_side = make_operator(Eigen::MatrixXd::Identity(3, 3), make_norm(NormKind::p2),
                                   make_norm(NormKind::p1));
  EXPECT_THROW(kdof::check_sn3(p1_side, t, b, 1), std::invalid_argument);
  EXPECT_THROW(kdof::check_sn3(a, t, b, 0), std::invalid_argument);
}

TEST(Sn4, IdentityNormalizationAndScope) {
  AxiomReport rep = kdof::check_sn4_finite(4, 2);
  EXPECT_EQ(rep.axiom, "SN4");
  EXPECT_EQ(rep.verdict, AxiomVerdict::Pass);
  EXPECT_NEAR(rep.slack, 0.0, 1e-10);

  AxiomReport scope = kdof::check_sn4_finite(3, 5);
  EXPECT_EQ(scope.verdict, AxiomVerdict::OutOfAxiomScope);
  EXPECT_TRUE(scope.passed);
  EXPECT_EQ(scope.slack, 0.0);
  EXPECT_EQ(std::string(kdof::to_string(scope.verdict)), "out-of-scope");

  EXPECT_THROW(kdof::check_sn4_finite(0, 1), std::invalid_argument);
  EXPECT_THROW(kdof::check_sn4_finite(1, 0), std::invalid_argument);
}

TEST(Sn5, RankDeficiencyAndScope) {
  Rng rng(809);
  Eigen::VectorXd u(4), v(4);
  for (int i = 0; i < 4; ++i) {
    u(i) = rng.normal();
    v(i) = rng.normal();
  }
  Operator lowrank = p2_op(u * v.transpose());
  AxiomReport rep = kdof::check_sn5(lowrank, 2);
  EXPECT_EQ(rep.axiom, "SN5");
  EXPECT_EQ(rep.verdict, AxiomVerdict::Pass);
  EXPECT_NEAR(rep.slack, 0.0, 1e-10);

  // the same bound holds through the equivalence bracket on mixed norms
  Operator mixed = make_operator(u * v.transpose(), make_norm(NormKind::p1),
                                 make_norm(NormKind::pInf));
  AxiomReport mrep = kdof::check_sn5(mixed, 2);
  EXPECT_EQ(mrep.verdict, AxiomVerdict::Pass);
  EXPECT_NEAR(mrep.slack, 0.0, 1e-10);

  Operator full = p2_op(Eigen::MatrixXd::Identity(3, 3));
  AxiomReport scope = kdof::check_sn5(full, 2);
  EXPECT_EQ(scope.verdict, AxiomVerdict::OutOfAxiomScope);
  EXPECT_TRUE(scope.passed);

  EXPECT_THROW(kdof::check_sn5(lowrank, 0), std::invalid_argument);
}

TEST(Suite, HilbertInstancesAllCertify) {
  AxiomSuiteResult res = kdof::run_axiom_suite(2024, 50, 0);
  EXPECT_EQ(res.reports.size(), 250u);
  EXPECT_EQ(res.fail, 0);
  EXPECT_EQ(res.inconclusive, 0);
  EXPECT_EQ(res.pass + res.out_of_scope, 250);
  for (const AxiomReport& rep : res.reports) {
    EXPECT_GE(rep.slack, -1e-8) << rep.axiom << " " << rep.digest;
    EXPECT_TRUE(rep.passed) << rep.axiom << " " << rep.digest;
    EXPECT_TRUE(is_hex16(rep.digest));
  }
}

TEST(Suite, MixedInstancesNeverCertifiedFail) {
  AxiomSuiteResult res = kdof::run_axiom_suite(7, 0, 20);
  EXPECT_EQ(res.reports.size(), 60u);
  EXPECT_EQ(res.fail, 0);
  for (const AxiomReport& rep : res.reports)
    EXPECT_NE(rep.verdict, AxiomVerdict::Fail) << rep.axiom << " " << rep.digest;
}

TEST(Suite, DigestsAreDeterministicPerSeed) {
  AxiomSuiteResult a = kdof::run_axiom_suite(11, 3, 2);
  AxiomSuiteResult b = kdof::run_axiom_suite(11, 3, 2);
  AxiomSuiteResult c = kdof::run_axiom_suite(12, 3, 2);
  ASSERT_EQ(a.reports.size(), b.reports.size());
  bool any_diff = false;
  for (size_t i = 0; i < a.reports.size(); ++i) {
    EXPECT_EQ(a.reports[i].digest, b.reports[i].digest);
    EXPECT_EQ(a.reports[i].verdict, b.reports[i].verdict);
    EXPECT_EQ(a.reports[i].slack, b.reports[i].slack);
    if (a.reports[i].digest != c.reports[i].digest) any_diff = true;
  }
  EXPECT_TRUE(any_diff);
}

TEST(Verdict, StringNames) {
  EXPECT_EQ(std::string(kdof::to_string(AxiomVerdict::Pass)), "pass");
  EXPECT_EQ(std::string(kdof::to_string(AxiomVerdict::Fail)), "fail");
  EXPECT_EQ(std::string(kdof::to_string(AxiomVerdict::Inconclusive)), "inconclusive");
  EXPECT_EQ(std::string(kdof::to_string(AxiomVerdict::OutOfAxiomScope)), "out-of-scope");
}

}  // namespace
