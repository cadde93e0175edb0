#include "loewner/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace loewner {

namespace {

void require_omd_pos(const ScalarFunctionSpec& f, const char* role) {
  if (f.declared_class() != FunctionClass::OMDPos)
    throw ClassViolationError(std::string(role) +
                              " must be operator monotone decreasing "
                              "positive, got " +
                              f.render());
}

void require_om(const ScalarFunctionSpec& g, const char* role) {
  if (g.declared_class() != FunctionClass::OM)
    throw ClassViolationError(std::string(role) +
                              " must be operator monotone, got " + g.render());
}

void require_strict(const PositiveMapSpec& phi, const char* what) {
  if (!phi.strictly_positive())
    throw NotStrictlyPositiveError(std::string(what) +
                                   " requires a strictly positive map");
}

/// g(Phi(f(.))) evaluated at a positive definite point.
HermitianMatrix transform(const ScalarFunctionSpec& g,
                          const PositiveMapSpec& phi,
                          const ScalarFunctionSpec& f,
                          const PositiveDefiniteMatrix& x) {
  return apply(g, apply_map_pd(phi, apply_pd(f, x)));
}

HermitianMatrix half_sum(const HermitianMatrix& a, const HermitianMatrix& b) {
  return symmetrize((a.entries() + b.entries()) / 2.0);
}

CheckOutcome le_outcome(std::string check_id, std::uint64_t seed,
                        const HermitianMatrix& lhs, const HermitianMatrix& rhs,
                        double tol, std::string instance,
                        std::vector<std::pair<std::string, double>> details = {}) {
  const DirectedMargin dm = le_margin(lhs, rhs);
  return outcome_from_margin(std::move(check_id), seed, dm.margin, dm.scale,
                             tol, std::move(instance), std::move(details));
}

/// Square root of a positive semidefinite Hermitian matrix; negative
/// eigenvalues within the rounding band are clamped to zero.
ComplexMatrix psd_sqrt(const HermitianMatrix& h) {
  const SpectralDecomposition sd = spectral_decompose(h);
  const double floor = -kDefaultLoewnerTol *
                       std::max(std::abs(sd.eigenvalues.minCoeff()),
                                std::abs(sd.eigenvalues.maxCoeff()));
  RealVector mapped(sd.eigenvalues.size());
  for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
    const double w = sd.eigenvalues[i];
    if (w < floor)
      throw NotPositiveDefiniteError("psd_sqrt: eigenvalue " +
                                     std::to_string(w) + " is negative");
    mapped[i] = std::sqrt(std::max(w, 0.0));
  }
  return sd.eigenvectors *
         mapped.asDiagonal().toDenseMatrix().cast<Complex>() *
         sd.eigenvectors.adjoint();
}

/// Convexity margins of a scalar functional along the segment [p0, p1]:
/// min over t in {0.1, ..., 0.9} of (1-t) F(p0) + t F(p1) - F(interp).
/// Returns (margin, scale, midpoint margin).
struct SegmentConvexity {
  double margin;
  double scale;
  double midpoint_margin;
};

SegmentConvexity scalar_segment_convexity(
    const std::function<double(const PositiveDefiniteMatrix&)>& value,
    const PositiveDefiniteMatrix& p0, const PositiveDefiniteMatrix& p1) {
  const double f0 = value(p0);
  const double f1 = value(p1);
  double margin = std::numeric_limits<double>::infinity();
  double midpoint_margin = 0.0;
  double scale = std::max(std::abs(f0), std::abs(f1));
  for (int i = 1; i <= 9; ++i) {
    const double t = 0.1 * i;
    const PositiveDefiniteMatrix point(symmetrize(
        (1.0 - t) * p0.entries() + t * p1.entries()));
    const double ft = value(point);
    scale = std::max(scale, std::abs(ft));
    const double m = (1.0 - t) * f0 + t * f1 - ft;
    margin = std::min(margin, m);
    if (i == 5) midpoint_margin = m;
  }
  return {margin, scale, midpoint_margin};
}

}  // namespace

CheckOutcome check_main_convexity(const ScalarFunctionSpec& g,
                                  const ScalarFunctionSpec& f,
                                  const PositiveMapSpec& phi,
                                  const PositiveDefiniteMatrix& x,
                                  const PositiveDefiniteMatrix& y,
                                  double tol, std::uint64_t seed) {
  require_omd_pos(f, "f");
  require_om(g, "g");
  require_strict(phi, "check_main_convexity");
  if (x.dim() != y.dim() || x.dim() != phi.in_dim())
    throw DimensionMismatchError("check_main_convexity: dims inconsistent");

  const HermitianMatrix lhs = transform(g, phi, f, arithmetic_mean(x, y));
  const HermitianMatrix rhs =
      half_sum(transform(g, phi, f, x), transform(g, phi, f, y));
  return le_outcome("main_convexity", seed, lhs, rhs, tol,
                    "f=" + f.render() + " g=" + g.render() +
                        " dim=" + std::to_string(x.dim()));
}

std::array<CheckOutcome, 3> check_proof_chain(const ScalarFunctionSpec& g,
                                              const ScalarFunctionSpec& f,
                                              const PositiveMapSpec& phi,
                                              const PositiveDefiniteMatrix& x,
                                              const PositiveDefiniteMatrix& y,
                                              double tol, std::uint64_t seed) {
  require_omd_pos(f, "f");
  require_om(g, "g");
  require_strict(phi, "check_proof_chain");
  if (x.dim() != y.dim() || x.dim() != phi.in_dim())
    throw DimensionMismatchError("check_proof_chain: dims inconsistent");

  const std::string instance = "f=" + f.render() + " g=" + g.render() +
                               " dim=" + std::to_string(x.dim());

  const PositiveDefiniteMatrix fx = apply_pd(f, x);
  const PositiveDefiniteMatrix fy = apply_pd(f, y);
  const PositiveDefiniteMatrix f_avg = apply_pd(f, arithmetic_mean(x, y));
  const PositiveDefiniteMatrix f_harm = harmonic_mean(fx, fy);

  const PositiveDefiniteMatrix phi_fx = apply_map_pd(phi, fx);
  const PositiveDefiniteMatrix phi_fy = apply_map_pd(phi, fy);

  const HermitianMatrix level0 = apply(g, apply_map_pd(phi, f_avg));
  const HermitianMatrix level1 = apply(g, apply_map_pd(phi, f_harm));
  const HermitianMatrix level2 =
      apply(g, harmonic_mean(phi_fx, phi_fy));
  const HermitianMatrix level3 = half_sum(apply(g, phi_fx), apply(g, phi_fy));

  // Diagnostic: the geometric-mean path dominates the harmonic one, since
  // A ! B <= A # B and g is monotone.
  std::vector<std::pair<std::string, double>> step2_details;
  try {
    const HermitianMatrix geo_path =
        apply(g, geometric_mean(phi_fx, phi_fy));
    step2_details.emplace_back("geometric_path_margin",
                               le_margin(level1, geo_path).margin);
    step2_details.emplace_back("geometric_path_ok", 1.0);
  } catch (const Error&) {
    step2_details.emplace_back("geometric_path_ok", 0.0);
  }

  return {le_outcome("proof_chain:step1", seed, level0, level1, tol, instance),
          le_outcome("proof_chain:step2", seed, level1, level2, tol, instance,
                     std::move(step2_details)),
          le_outcome("proof_chain:step3", seed, level2, level3, tol, instance)};
}

std::pair<CheckOutcome, CheckOutcome> check_harmonic_subadditivity(
    const PositiveMapSpec& phi, const PositiveDefiniteMatrix& x,
    const PositiveDefiniteMatrix& y, double tol, std::uint64_t seed) {
  require_strict(phi, "check_harmonic_subadditivity");
  if (x.dim() != y.dim() || x.dim() != phi.in_dim())
    throw DimensionMismatchError("check_harmonic_subadditivity: dims");
  const std::string instance = "dim=" + std::to_string(x.dim());

  const PositiveDefiniteMatrix phi_x = apply_map_pd(phi, x);
  const PositiveDefiniteMatrix phi_y = apply_map_pd(phi, y);
  CheckOutcome outer = le_outcome("harmonic_subadditivity:outer", seed,
                                  apply_map(phi, harmonic_mean(x, y).base()),
                                  harmonic_mean(phi_x, phi_y).base(), tol,
                                  instance);

  // Inner Schwarz-type step: Phi(X (X+Y)^{-1} X) >= Phi(X) Phi(X+Y)^{-1} Phi(X).
  const ComplexMatrix w = (x.entries() + y.entries()).llt().solve(x.entries());
  const HermitianMatrix lhs_inner =
      apply_map(phi, symmetrize(x.entries() * w));
  const ComplexMatrix w2 =
      (phi_x.entries() + phi_y.entries()).llt().solve(phi_x.entries());
  const HermitianMatrix rhs_inner = symmetrize(phi_x.entries() * w2);
  CheckOutcome inner = le_outcome("harmonic_subadditivity:inner", seed,
                                  rhs_inner, lhs_inner, tol, instance);
  return {std::move(outer), std::move(inner)};
}

CheckOutcome check_f_mean_inequality(const ScalarFunctionSpec& f,
                                     const PositiveDefiniteMatrix& x,
                                     const PositiveDefiniteMatrix& y,
                                     double tol, std::uint64_t seed) {
  require_omd_pos(f, "f");
  if (x.dim() != y.dim())
    throw DimensionMismatchError("check_f_mean_inequality: dims");
  const HermitianMatrix lhs = apply(f, arithmetic_mean(x, y));
  const HermitianMatrix rhs =
      harmonic_mean(apply_pd(f, x), apply_pd(f, y)).base();
  return le_outcome("f_mean_inequality", seed, lhs, rhs, tol,
                    "f=" + f.render() + " dim=" + std::to_string(x.dim()));
}

CheckOutcome check_mean_subadditivity(MeanKind kind, const PositiveMapSpec& phi,
                                      const PositiveDefiniteMatrix& x,
                                      const PositiveDefiniteMatrix& y,
                                      double tol, std::uint64_t seed) {
  require_strict(phi, "check_mean_subadditivity");
  if (x.dim() != y.dim() || x.dim() != phi.in_dim())
    throw DimensionMismatchError("check_mean_subadditivity: dims");
  const HermitianMatrix lhs = apply_map(phi, mean(kind, x, y).base());
  const HermitianMatrix rhs =
      mean(kind, apply_map_pd(phi, x), apply_map_pd(phi, y)).base();
  return le_outcome(
      "mean_subadditivity:" + std::string(mean_name(kind)), seed, lhs, rhs,
      tol, "dim=" + std::to_string(x.dim()));
}

CheckOutcome check_jensen_inverse(const PositiveMapSpec& unital_phi,
                                  const PositiveDefiniteMatrix& x,
                                  double tol, std::uint64_t seed) {
  const Eigen::Index d = unital_phi.in_dim();
  const ComplexMatrix on_id =
      apply_linear(unital_phi, ComplexMatrix::Identity(d, d));
  const Eigen::Index k = unital_phi.out_dim();
  if ((on_id - ComplexMatrix::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-8)
    throw DomainViolationError("check_jensen_inverse: map is not unital");
  if (x.dim() != d)
    throw DimensionMismatchError("check_jensen_inverse: dims");

  const ScalarFunctionSpec inv = ScalarFunctionSpec::power(-1.0);
  const HermitianMatrix lhs = apply(inv, apply_map_pd(unital_phi, x));
  const HermitianMatrix rhs = apply_map(unital_phi, apply(inv, x));
  return le_outcome("jensen_inequality", seed, lhs, rhs, tol,
                    "dim=" + std::to_string(d));
}

CheckOutcome check_kadison(const PositiveMapSpec& unital_phi,
                           const HermitianMatrix& b, double tol,
                           std::uint64_t seed) {
  const Eigen::Index d = unital_phi.in_dim();
  const ComplexMatrix on_id =
      apply_linear(unital_phi, ComplexMatrix::Identity(d, d));
  const Eigen::Index k = unital_phi.out_dim();
  if ((on_id - ComplexMatrix::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-8)
    throw DomainViolationError("check_kadison: map is not unital");
  if (b.dim() != d) throw DimensionMismatchError("check_kadison: dims");

  const HermitianMatrix b_sq = symmetrize(b.entries() * b.entries());
  const HermitianMatrix rhs = apply_map(unital_phi, b_sq);
  const HermitianMatrix phi_b = apply_map(unital_phi, b);
  const HermitianMatrix lhs =
      symmetrize(phi_b.entries() * phi_b.entries());
  return le_outcome("kadison_inequality", seed, lhs, rhs, tol,
                    "dim=" + std::to_string(d));
}

CounterexampleResult reproduce_counterexample() {
  // The published 2x2 matrices and digits.
  Eigen::Matrix2cd s_raw, t_raw, geo_ref;
  s_raw << 1.1, 0.0, 0.0, 0.1;
  t_raw << 7.17, -4.41, -4.41, 3.13;
  geo_ref << 1.85834, -0.63486, -0.63486, 0.52569;
  constexpr double kLambda1Ref = 0.5786;
  constexpr double kLambda2Ref = -0.0159;

  CounterexampleResult out{
      symmetrize(s_raw),      symmetrize(t_raw),
      HermitianMatrix::zero(2),   HermitianMatrix::zero(2),
      0.0,                        0.0,
      0.0,                        false,
      false};

  const PositiveDefiniteMatrix s(out.s);
  const PositiveDefiniteMatrix t(out.t);
  const PositiveDefiniteMatrix geo = geometric_mean(s, t);
  out.geo_mean = geo.base();

  const ScalarFunctionSpec sqrt = ScalarFunctionSpec::power(0.5);
  const ComplexMatrix diff = (apply_pd(sqrt, s).entries() +
                              apply_pd(sqrt, t).entries()) / 2.0 -
                             apply_pd(sqrt, geo).entries();
  out.difference = symmetrize(diff);

  const SpectralDecomposition sd = spectral_decompose(out.difference);
  out.lambda2 = sd.eigenvalues[0];
  out.lambda1 = sd.eigenvalues[1];
  out.max_entry_error =
      (out.geo_mean.entries() - ComplexMatrix(geo_ref)).cwiseAbs().maxCoeff();
  out.lambda2_negative = out.lambda2 < 0.0;
  out.matches_reference =
      out.max_entry_error <= kCounterexampleEntryTol &&
      std::abs(out.lambda1 - kLambda1Ref) <= kCounterexampleEigTol &&
      std::abs(out.lambda2 - kLambda2Ref) <= kCounterexampleEigTol;
  return out;
}

CheckOutcome check_separate_convexity(
    const ScalarFunctionSpec& f1, const ScalarFunctionSpec& f2,
    const ScalarFunctionSpec& g, const PositiveMapSpec& phi,
    const PositiveMapSpec& psi, FixedVariable fixed,
    const PositiveDefiniteMatrix& fixed_point,
    const PositiveDefiniteMatrix& p0, const PositiveDefiniteMatrix& p1,
    double tol, std::uint64_t seed) {
  require_omd_pos(f1, "f1");
  require_omd_pos(f2, "f2");
  require_om(g, "g");
  require_strict(phi, "check_separate_convexity");
  require_strict(psi, "check_separate_convexity");
  if (phi.out_dim() != psi.out_dim())
    throw DimensionMismatchError("check_separate_convexity: output dims");
  if (p0.dim() != p1.dim())
    throw DimensionMismatchError("check_separate_convexity: segment dims");

  // Freeze the fixed variable; the remaining functional is
  // T -> Tr g(frozen(f_free(T))) by Theorem-style reduction.
  const bool first_fixed = fixed == FixedVariable::First;
  const ScalarFunctionSpec& f_fixed = first_fixed ? f1 : f2;
  const ScalarFunctionSpec& f_free = first_fixed ? f2 : f1;
  const PositiveMapSpec& m_fixed = first_fixed ? phi : psi;
  const PositiveMapSpec& m_free = first_fixed ? psi : phi;
  if (fixed_point.dim() != m_fixed.in_dim())
    throw DimensionMismatchError("check_separate_convexity: fixed point dim");
  if (p0.dim() != m_free.in_dim())
    throw DimensionMismatchError("check_separate_convexity: free point dim");

  const PositiveMapSpec frozen =
      two_var_freeze(m_fixed, apply_pd(f_fixed, fixed_point), m_free);

  const auto value = [&](const PositiveDefiniteMatrix& p) {
    const PositiveDefiniteMatrix inner(
        apply_map(frozen, apply_pd(f_free, p).base()));
    return apply(g, inner).trace();
  };
  const SegmentConvexity conv = scalar_segment_convexity(value, p0, p1);
  return outcome_from_margin(
      "separate_convexity", seed, conv.margin, conv.scale, tol,
      "f1=" + f1.render() + " f2=" + f2.render() + " g=" + g.render() +
          (first_fixed ? " fixed=first" : " fixed=second"),
      {{"midpoint_margin", conv.midpoint_margin}});
}

CheckOutcome check_trace_switch(const PositiveDefiniteMatrix& p,
                                const PositiveDefiniteMatrix& q,
                                const ScalarFunctionSpec& h, double tol,
                                std::uint64_t seed) {
  if (p.dim() != q.dim())
    throw DimensionMismatchError("check_trace_switch: dims");
  const ScalarFunctionSpec sqrt = ScalarFunctionSpec::power(0.5);

  const auto switched_trace = [&](const PositiveDefiniteMatrix& a,
                                  const PositiveDefiniteMatrix& b) {
    const ComplexMatrix ah = apply_pd(sqrt, a).entries();
    const PositiveDefiniteMatrix prod(
        symmetrize(ah * b.entries() * ah));
    return apply(h, prod).trace();
  };

  const double t1 = switched_trace(p, q);
  const double t2 = switched_trace(q, p);
  const double scale = std::max({std::abs(t1), std::abs(t2), 1e-300});
  const double margin = kTraceSwitchTol * scale - std::abs(t1 - t2);
  return outcome_from_margin("trace_switch", seed, margin, scale, tol,
                             "h=" + h.render() + " dim=" + std::to_string(p.dim()),
                             {{"trace_pq", t1}, {"trace_qp", t2}});
}

CheckOutcome check_lieb_convexity(const ScalarFunctionSpec& f1,
                                  const ScalarFunctionSpec& f2,
                                  const PositiveMapSpec& phi,
                                  const TracialFunctional& tau,
                                  const ComplexMatrix& k,
                                  const PositiveDefiniteMatrix& x,
                                  const HermitianMatrix& y, double tol,
                                  std::uint64_t seed) {
  const auto* r1 = std::get_if<ResolventForm>(&f1.form());
  const auto* r2 = std::get_if<ResolventForm>(&f2.form());
  if (!r1 || !r2)
    throw ClassViolationError(
        "check_lieb_convexity requires resolvent-form f1 and f2");
  if (x.dim() != phi.in_dim() || y.dim() != x.dim())
    throw DimensionMismatchError("check_lieb_convexity: input dims");
  if (k.rows() != phi.out_dim() || k.cols() != phi.out_dim())
    throw DimensionMismatchError("check_lieb_convexity: K must be " +
                                 std::to_string(phi.out_dim()) + " square");

  const auto functional = [&](const PositiveDefiniteMatrix& p) {
    const ComplexMatrix a = apply_map(phi, apply_pd(f1, p).base()).entries();
    const ComplexMatrix b = apply_map(phi, apply_pd(f2, p).base()).entries();
    return tau.value(a * k.adjoint() * b * k);
  };

  // Analytic second derivative at t = 0 along Y, from the resolvent
  // derivative formulas.
  const HermitianMatrix a0 = apply(f1, x);
  const HermitianMatrix b0 = apply(f2, x);
  const HermitianMatrix a1 = resolvent_first_derivative(r1->lambda, x, y);
  const HermitianMatrix b1 = resolvent_first_derivative(r2->lambda, x, y);
  const HermitianMatrix a2 = resolvent_second_derivative(r1->lambda, x, y);
  const HermitianMatrix b2 = resolvent_second_derivative(r2->lambda, x, y);

  const auto pair_term = [&](const HermitianMatrix& left,
                             const HermitianMatrix& right) {
    return tau.value(apply_map(phi, left).entries() * k.adjoint() *
                     apply_map(phi, right).entries() * k);
  };
  const double term1 = pair_term(a2, b0);
  const double term2 = 2.0 * pair_term(a1, b1);
  const double term3 = pair_term(a0, b2);
  const double h2_analytic = term1 + term2 + term3;
  const double h0 = pair_term(a0, b0);
  const double h_scale = std::max(
      {std::abs(term1), std::abs(term2), std::abs(term3), std::abs(h0)});

  // Finite-difference cross-check. Step chosen so X +- tY stays positive.
  const double y_norm = y.operator_norm();
  const double t_fd =
      std::min(1e-4, y_norm > 0.0 ? 0.1 * x.min_eigenvalue() / y_norm : 1e-4);
  double fd = 0.0;
  double fd_rel_err = 0.0;
  if (y_norm > 0.0) {
    const PositiveDefiniteMatrix x_plus(
        symmetrize(x.entries() + t_fd * y.entries()));
    const PositiveDefiniteMatrix x_minus(
        symmetrize(x.entries() - t_fd * y.entries()));
    fd = (functional(x_plus) - 2.0 * h0 + functional(x_minus)) / (t_fd * t_fd);
    fd_rel_err = std::abs(h2_analytic - fd) /
                 std::max({std::abs(h2_analytic), std::abs(fd), std::abs(h0),
                           1e-300});
  }

  // Midpoint convexity along [X - sY, X + sY].
  double segment_margin = 0.0;
  double segment_scale = std::abs(h0);
  double midpoint_margin = 0.0;
  if (y_norm > 0.0) {
    const double s = 0.5 * x.min_eigenvalue() / y_norm;
    const PositiveDefiniteMatrix lo(
        symmetrize(x.entries() - s * y.entries()));
    const PositiveDefiniteMatrix hi(
        symmetrize(x.entries() + s * y.entries()));
    const SegmentConvexity conv = scalar_segment_convexity(functional, lo, hi);
    segment_margin = conv.margin;
    segment_scale = conv.scale;
    midpoint_margin = conv.midpoint_margin;
  }

  // Combine sub-margins on a common relative footing.
  const double h2_rel = h_scale > 0.0 ? h2_analytic / h_scale : 0.0;
  const double seg_rel = segment_scale > 0.0 ? segment_margin / segment_scale : 0.0;
  const double margin = std::min(h2_rel, seg_rel);

  CheckOutcome out = outcome_from_margin(
      "lieb_convexity", seed, margin, 1.0, tol,
      "f1=" + f1.render() + " f2=" + f2.render() +
          " dim=" + std::to_string(x.dim()),
      {{"h2_analytic", h2_analytic},
       {"h2_fd", fd},
       {"fd_rel_err", fd_rel_err},
       {"fd_step", t_fd},
       {"h0", h0},
       {"midpoint_margin", midpoint_margin}});
  if (fd_rel_err > kLiebFdAgreement) out.verdict = Verdict::Fail;
  return out;
}

CheckOutcome check_joint_convexity(
    const ScalarFunctionSpec& f1, const ScalarFunctionSpec& f2,
    const PositiveMapSpec& phi, const PositiveMapSpec& psi,
    const TracialFunctional& tau, const PositiveDefiniteMatrix& x1,
    const PositiveDefiniteMatrix& y1, const PositiveDefiniteMatrix& x2,
    const PositiveDefiniteMatrix& y2, double tol, std::uint64_t seed) {
  require_omd_pos(f1, "f1");
  require_omd_pos(f2, "f2");
  if (phi.out_dim() != psi.out_dim())
    throw DimensionMismatchError("check_joint_convexity: output dims");
  if (x1.dim() != x2.dim() || y1.dim() != y2.dim() ||
      x1.dim() != phi.in_dim() || y1.dim() != psi.in_dim())
    throw DimensionMismatchError("check_joint_convexity: input dims");

  // Direct route: tau( P^{1/2} Q P^{1/2} ).
  const auto direct = [&](const PositiveDefiniteMatrix& x,
                          const PositiveDefiniteMatrix& y) {
    const ComplexMatrix ph = psd_sqrt(apply_map(phi, apply_pd(f1, x).base()));
    const ComplexMatrix q = apply_map(psi, apply_pd(f2, y).base()).entries();
    return tau.value(ph * q * ph);
  };

  // Embedded route: block direct sum with K the lower-left block identity.
  const PositiveMapSpec big = direct_sum_map(phi, psi);
  const Eigen::Index kd = phi.out_dim();
  ComplexMatrix kmat = ComplexMatrix::Zero(2 * kd, 2 * kd);
  kmat.block(kd, 0, kd, kd) = ComplexMatrix::Identity(kd, kd);
  const Eigen::Index m = phi.in_dim();
  const Eigen::Index n = psi.in_dim();
  const auto embedded = [&](const PositiveDefiniteMatrix& x,
                            const PositiveDefiniteMatrix& y) {
    ComplexMatrix z = ComplexMatrix::Zero(m + n, m + n);
    z.topLeftCorner(m, m) = x.entries();
    z.bottomRightCorner(n, n) = y.entries();
    const PositiveDefiniteMatrix zz(symmetrize(z));
    const ComplexMatrix d1 = apply_map(big, apply_pd(f1, zz).base()).entries();
    const ComplexMatrix d2 = apply_map(big, apply_pd(f2, zz).base()).entries();
    return tau.value(d1 * kmat.adjoint() * d2 * kmat);
  };

  const PositiveDefiniteMatrix xm = arithmetic_mean(x1, x2);
  const PositiveDefiniteMatrix ym = arithmetic_mean(y1, y2);

  const double g1_direct = direct(x1, y1);
  const double g2_direct = direct(x2, y2);
  const double gm_direct = direct(xm, ym);
  const double margin_direct = (g1_direct + g2_direct) / 2.0 - gm_direct;

  const double g1_embed = embedded(x1, y1);
  const double g2_embed = embedded(x2, y2);
  const double gm_embed = embedded(xm, ym);
  const double margin_embed = (g1_embed + g2_embed) / 2.0 - gm_embed;

  double scale = std::max({std::abs(g1_direct), std::abs(g2_direct),
                           std::abs(gm_direct), 1e-300});

  // Grid along the joint segment, direct route.
  double grid_margin = std::min(margin_direct, margin_embed);
  for (int i = 1; i <= 9; ++i) {
    const double t = 0.1 * i;
    const PositiveDefiniteMatrix xt(symmetrize(
        (1.0 - t) * x1.entries() + t * x2.entries()));
    const PositiveDefiniteMatrix yt(symmetrize(
        (1.0 - t) * y1.entries() + t * y2.entries()));
    const double gt = direct(xt, yt);
    scale = std::max(scale, std::abs(gt));
    grid_margin =
        std::min(grid_margin, (1.0 - t) * g1_direct + t * g2_direct - gt);
  }

  const double route_gap = std::abs(margin_direct - margin_embed);
  const double agreement_band = kJointRouteAgreement * std::max(1.0, scale);

  CheckOutcome out = outcome_from_margin(
      "joint_convexity", seed, grid_margin, scale, tol,
      "f1=" + f1.render() + " f2=" + f2.render() +
          " dims=" + std::to_string(m) + "," + std::to_string(n),
      {{"margin_direct", margin_direct},
       {"margin_embedded", margin_embed},
       {"route_gap", route_gap}});
  if (route_gap > agreement_band) out.verdict = Verdict::Fail;
  return out;
}

}  // namespace loewner
