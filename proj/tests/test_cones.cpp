#include <cmath>

#include <gtest/gtest.h>

#include "unclab/cones.hpp"
#include "unclab/dilation.hpp"

using namespace unclab;

namespace {

Matrix scalar(cplx z) {
  Matrix m(1, 1);
  m(0, 0) = z;
  return m;
}

// n = 2, p = 1: A11 = 1 and coefficient −2.5 on the (1,3)/(3,1) pair.
VnElement hand_element() {
  VnElement x = VnElement::scalar(2, Matrix::identity(1));
  x.set_hermitian_pair(1, 3, scalar(-2.5));
  return x;
}

SolverConfig quick_config() {
  SolverConfig cfg;
  cfg.starts = 8;
  cfg.r_max = 3;
  return cfg;
}

}  // namespace

TEST(MaxMembership, OrderUnitHasBlockIdentityCompletion) {
  const VnElement x = VnElement::scalar(2, Matrix::identity(2));
  const auto cert = max_membership(x, 0.0, 100);
  ASSERT_TRUE(cert.has_value());
  EXPECT_LE(max_abs_diff(cert->r, Matrix::identity(8)), 1e-12);
  EXPECT_TRUE(verify_completion(x, *cert).ok());
}

TEST(MaxMembership, ZeroTraceWithNonzeroCornerHasNoCompletion) {
  VnElement x(2, 1);
  x.set_hermitian_pair(1, 3, scalar(1.0));
  EXPECT_FALSE(max_membership(x, 0.0, 2000).has_value());
}

TEST(MaxMembership, CompletionElementsCertify) {
  Rng rng(10);
  for (std::size_t p = 1; p <= 3; ++p) {
    for (int trial = 0; trial < 5; ++trial) {
      const VnElement x = random_completion_element(2, p, rng);
      const auto cert = max_membership(x, 0.0, 50000);
      ASSERT_TRUE(cert.has_value()) << "p=" << p;
      EXPECT_TRUE(verify_completion(x, *cert).ok());
    }
  }
}

TEST(MaxMembership, MonotoneInEps) {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const VnElement x = random_completion_element(2, 2, rng);
    bool previous = false;
    for (double eps : {0.0, 1e-6, 1e-3}) {
      const auto cert = max_membership(x, eps, 50000);
      if (previous) EXPECT_TRUE(cert.has_value()) << "eps=" << eps;
      previous = cert.has_value();
      if (cert) EXPECT_TRUE(verify_completion(x, *cert).ok());
    }
    EXPECT_TRUE(previous);
  }
}

TEST(MaxMembership, RejectsNonHermitian) {
  VnElement x(2, 1);
  x.at(1, 3) = scalar(1.0);
  EXPECT_THROW(max_membership(x, 0.0, 10), InvalidInput);
}

TEST(LambdaMinGradient, MatchesFiniteDifferences) {
  // dλ along D is Re tr(G* D) at a simple eigenvalue.
  Rng rng(12);
  for (std::size_t p = 1; p <= 2; ++p) {
    const VnElement x = random_hermitian_element(2, p, rng);
    for (std::size_t r = 1; r <= 2; ++r) {
      const Matrix c = random_contraction(2, r, rng) * cplx(0.8);
      const auto g = lambda_min_gradient(c, x);
      const Matrix d = ginibre(2 * r, 2 * r, rng);
      const double h = 1e-6;
      const double fd = (lambda_min(universal_ucp_eval(c + d * cplx(h), x)) -
                         lambda_min(universal_ucp_eval(c - d * cplx(h), x))) /
                        (2 * h);
      const double analytic = trace(g.gradient.adjoint() * d).real();
      EXPECT_NEAR(fd, analytic, 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(ProjectToUnitBall, ClipsOnlyWhenNeeded) {
  Rng rng(13);
  const Matrix inside = random_contraction(2, 2, rng) * cplx(0.5);
  EXPECT_EQ(project_to_unit_ball(inside), inside);
  const Matrix outside = ginibre(4, 4, rng) * cplx(5.0);
  EXPECT_NEAR(operator_norm(project_to_unit_ball(outside)), 1.0, 1e-12);
}

TEST(MinViolation, NegativeOrderUnitIsViolatedEverywhere) {
  Rng rng(14);
  const VnElement x = VnElement::scalar(2, Matrix::identity(2) * cplx(-1.0));
  const auto v = min_violation_search(x, 2, 2, rng);
  ASSERT_TRUE(v.has_value());
  EXPECT_NEAR(v->lambda_min, -1.0, 1e-12);
}

TEST(MinViolation, HandCheckableElement) {
  const VnElement x = hand_element();
  // F(C, x) at C = E11 is 1 + (1/4)(−2.5)(2) = −0.25.
  Matrix c(2, 2);
  c(0, 0) = 1.0;
  EXPECT_NEAR(lambda_min(universal_ucp_eval(c, x)), -0.25, 1e-15);

  Rng rng(15);
  const auto v = min_violation_search(x, 4, 16, rng);
  ASSERT_TRUE(v.has_value());
  EXPECT_LE(v->lambda_min, -0.24);
  EXPECT_TRUE(verify_violation(x, *v).ok(v->lambda_min));
}

TEST(MinViolation, CompletionElementsAreNotViolated) {
  Rng rng(16);
  for (std::size_t p = 1; p <= 2; ++p) {
    for (int trial = 0; trial < 3; ++trial) {
      const VnElement x = random_completion_element(2, p, rng);
      EXPECT_FALSE(min_violation_search(x, 4, 8, rng).has_value());
    }
  }
}

TEST(Classify, Examples) {
  Rng rng(17);
  const SolverConfig cfg = quick_config();
  EXPECT_EQ(classify(VnElement::scalar(2, Matrix::identity(2)), cfg, rng).status,
            ConeStatus::InMax);
  EXPECT_EQ(classify(hand_element(), cfg, rng).status, ConeStatus::ViolatedMin);
  EXPECT_EQ(classify(random_completion_element(2, 2, rng), cfg, rng).status, ConeStatus::InMax);
  EXPECT_EQ(classify(VnElement::scalar(2, Matrix::identity(2) * cplx(-1.0)), cfg, rng).status,
            ConeStatus::ViolatedMin);
}

TEST(Classify, ZeroElementCompletesToZero) {
  Rng rng(18);
  SolverConfig cfg = quick_config();
  cfg.eps = 0.0;
  const ConeVerdict v = classify(VnElement(2, 1), cfg, rng);
  ASSERT_EQ(v.status, ConeStatus::InMax);
  EXPECT_LE(frobenius_norm(v.completion->r), 1e-12);
}

TEST(Classify, CertificatesAreExclusiveAndSound) {
  Rng rng(19);
  const SolverConfig cfg = quick_config();
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t p = 1 + trial % 2;
    const VnElement x = random_hermitian_element(2, p, rng);
    const ConeVerdict v = classify(x, cfg, rng);
    EXPECT_FALSE(v.completion && v.violation);
    if (v.status == ConeStatus::InMax) {
      ASSERT_TRUE(v.completion.has_value());
      EXPECT_TRUE(verify_completion(x, *v.completion).ok());
    } else if (v.status == ConeStatus::ViolatedMin) {
      ASSERT_TRUE(v.violation.has_value());
      EXPECT_TRUE(verify_violation(x, *v.violation).ok(v.violation->lambda_min));
    }
  }
}

TEST(Classify, ScalingCovariance) {
  Rng rng(20);
  const SolverConfig cfg = quick_config();
  std::vector<VnElement> elements{hand_element(), random_completion_element(2, 1, rng)};
  for (int k = 0; k < 4; ++k) elements.push_back(random_hermitian_element(2, 1, rng));
  for (const VnElement& x : elements) {
    Rng base_rng(21);
    const ConeStatus base = classify(x, cfg, base_rng).status;
    if (base == ConeStatus::Undetermined) continue;
    for (double t : {0.1, 10.0}) {
      Rng scaled_rng(21);
      SolverConfig scaled_cfg = cfg;
      // eps slack and the violation threshold scale with the element.
      scaled_cfg.eps = cfg.eps * t;
      scaled_cfg.tol_violation = cfg.tol_violation * t;
      EXPECT_EQ(classify(x.scaled(t), scaled_cfg, scaled_rng).status, base) << "t=" << t;
    }
  }
}

TEST(NegativeWitness, FunctionalIsNegative) {
  Rng rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix s = ginibre(2, 2, rng);
    s *= 1.5 / operator_norm(s);
    const VnElement x = negative_witness_element(s);
    // s(x) = A11 + (1/2n) Σ (S_ab a_ab + conj(S_ab) conj(a_ab)).
    cplx value = x.a11()(0, 0);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) {
        value += s(a, b) * x.at(a + 1, 3 + b)(0, 0) / 4.0;
        value += std::conj(s(a, b)) * x.at(3 + b, a + 1)(0, 0) / 4.0;
      }
    EXPECT_NEAR(value.real(), (1.0 - 1.5) / 2.0, 1e-12);
    // The element is positive: it admits a completion.
    EXPECT_TRUE(max_membership(x, 1e-6, 50000).has_value());
  }
}

TEST(Crosscheck, SmallRunIsConsistent) {
  Rng rng(1);
  SolverConfig cfg = quick_config();
  const CrosscheckReport rep = crosscheck_cones(2, 1, 10, rng, cfg);
  EXPECT_EQ(rep.inconsistencies, 0u);
  EXPECT_EQ(rep.soundness_failures, 0u);
  EXPECT_EQ(rep.completion_recertified, 10u);
  EXPECT_EQ(rep.in_max + rep.violated_min + rep.undetermined, 20u);
}

TEST(Crosscheck, EmptyRun) {
  Rng rng(1);
  const CrosscheckReport rep = crosscheck_cones(2, 2, 0, rng);
  EXPECT_EQ(rep.in_max + rep.violated_min + rep.undetermined, 0u);
}
