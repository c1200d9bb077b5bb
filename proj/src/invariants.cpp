#include "nclc/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nclc {

namespace {

double rel(double diff, double scale) { return diff / std::max(1.0, scale); }

OneForm random_one_form(int n, const Backend& b, std::mt19937_64& rng, int radius) {
  OneForm w{{}};
  for (int i = 0; i < n; ++i) w.c.push_back(random_element(b, rng, radius));
  return w;
}

TensorSquare random_square(int n, const Backend& b, std::mt19937_64& rng, int radius) {
  TensorSquare t = TensorSquare::zero(n, b);
  for (auto& x : t.c) x = random_element(b, rng, radius);
  return t;
}

// Largest support radius the metric and its inverse occupy.
int metric_spread(const MetricSpec& g) {
  int r = 0;
  for (const auto& x : g.components()) r = std::max(r, x.support_radius());
  for (const auto& x : g.inverse_components()) r = std::max(r, x.support_radius());
  return r;
}

}  // namespace

CheckResult make_check(std::string module, std::string name, double value, double tolerance) {
  return {std::move(module), std::move(name), value, tolerance, std::isfinite(value) && value <= tolerance};
}

CheckResult make_lower_bound(std::string module, std::string name, double value, double threshold) {
  return {std::move(module), std::move(name), value, threshold, std::isfinite(value) && value > threshold};
}

Eigen::MatrixXd random_skew(int n, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      t(i, j) = u(rng);
      t(j, i) = -t(i, j);
    }
  return t;
}

std::vector<CheckResult> algebra_checks(const CalculusSpec& spec, std::mt19937_64& rng, int trials) {
  const Backend w = work_backend(spec.backend);
  double assoc = 0.0, star_law = 0.0, involution = 0.0, tracial = 0.0, leibniz = 0.0;
  for (int t = 0; t < trials; ++t) {
    const AlgebraElement a = random_element(w, rng, 1);
    const AlgebraElement b = random_element(w, rng, 1);
    const AlgebraElement c = random_element(w, rng, 1);
    const AlgebraElement abc = (a * b) * c;
    assoc = std::max(assoc, rel((abc - a * (b * c)).norm(), abc.norm()));
    const AlgebraElement ab = a * b;
    star_law = std::max(star_law, rel((ab.star() - b.star() * a.star()).norm(), ab.norm()));
    involution = std::max(involution, (a.star().star() - a).norm());
    tracial = std::max(tracial, rel(std::abs(ab.trace() - (b * a).trace()), std::abs(ab.trace())));
    for (const auto& d : spec.derivations) {
      const AlgebraElement lhs = d.apply(ab);
      leibniz = std::max(leibniz, rel((lhs - d.apply(a) * b - a * d.apply(b)).norm(), lhs.norm()));
    }
  }
  return {make_check("algebra", "associativity", assoc, 1e-12),
          make_check("algebra", "star_antihomomorphism", star_law, 1e-12),
          make_check("algebra", "star_involution", involution, 0.0),
          make_check("algebra", "trace_cyclic", tracial, 1e-12),
          make_check("algebra", "derivation_leibniz", leibniz, 1e-11)};
}

std::vector<CheckResult> forms_checks(const CalculusSpec& spec, std::mt19937_64& rng, int trials) {
  const int n = spec.rank;
  const Backend w = work_backend(spec.backend);
  double sigma2 = 0.0, idem = 0.0, kills = 0.0, dd = 0.0, leib = 0.0, section = 0.0;
  for (int t = 0; t < trials; ++t) {
    const TensorSquare x = random_square(n, w, rng, 1);
    sigma2 = std::max(sigma2, (sigma(sigma(x)) - x).norm());
    const TensorSquare px = p_sym(x);
    idem = std::max(idem, (p_sym(px) - px).norm());
    kills = std::max(kills, wedge(spec, px).norm());

    // x = P_sym x + section(wedge x)
    const TensorSquare split = px + wedge_section(spec, wedge(spec, x));
    section = std::max(section, rel((split - x).norm(), x.norm()));

    const OneForm omega = random_one_form(n, w, rng, 1);
    const AlgebraElement b = random_element(w, rng, 1);
    const TwoForm lhs = d1(spec, omega.right_mul(b));
    const TwoForm rhs = d1(spec, omega).right_mul(b) - wedge(spec, tensor(omega, d0(spec, b)));
    leib = std::max(leib, rel((lhs - rhs).norm(), lhs.norm()));
  }
  for (const auto& g : spec.generators) {
    const OneForm da = d0(spec, g);
    dd = std::max(dd, rel(d1(spec, da).norm(), da.norm()));
  }
  const BraidReport br = braid_check(spec);
  return {make_check("forms", "sigma_squared_identity", sigma2, 0.0),
          make_check("forms", "p_sym_idempotent", idem, 1e-14),
          make_check("forms", "wedge_kills_p_sym", kills, 1e-12),
          make_check("forms", "wedge_section_splitting", section, 1e-12),
          make_check("forms", "d_squared_on_generators", dd, 1e-10),
          make_check("forms", "d1_leibniz", leib, 1e-11),
          make_check("forms", "braid_identity", br.braid_residual, 1e-14),
          make_check("forms", "p12_on_ran_p23_bijective",
                     br.bijective ? 0.0 : std::abs(br.rank_p12_on_ran_p23 - br.dim_ran_p23) + 1.0, 0.0)};
}

std::vector<CheckResult> metric_checks(const CalculusSpec& spec, const MetricSpec& g, std::mt19937_64& rng,
                                       int trials) {
  const int n = g.rank();
  double sym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sym = std::max(sym, (to_work(g.at(i, j)) - to_work(g.at(j, i))).norm());

  double central = 0.0;
  for (const auto& x : g.components())
    for (const auto& gen : spec.generators) central = std::max(central, commutator(to_work(x), to_work(gen)).norm());

  const Backend& b = g.backend();
  const int radius = b->kind() == BackendKind::Graded ? std::max(0, b->radius() - metric_spread(g)) : 0;
  double round = 0.0;
  for (int t = 0; t < trials; ++t) {
    const OneForm omega = random_one_form(n, b, rng, radius);
    round = std::max(round, rel((v_g_inverse(g, v_g(g, omega)) - omega).norm(), omega.norm()));
  }

  const VG2Report r = v_g2_check(g);
  return {make_check("metric", "symmetric", sym, 1e-12),
          make_check("metric", "central_components", central, 1e-10),
          make_lower_bound("metric", "invertibility_ratio", g.condition_ratio(), kInvertibilityRatio),
          make_check("metric", "v_g_roundtrip", round, 1e-10),
          make_check("metric", "v_g2_inverse", r.inverse_residual, 1e-10),
          make_check("metric", "v_g2_sigma", r.sigma_residual, 1e-12),
          make_check("metric", "v_g2_symmetric_rank_defect",
                     static_cast<double>(r.symmetric_dim - r.symmetric_rank), 0.0)};
}

std::vector<CheckResult> levi_civita_checks(const CalculusSpec& spec, const MetricSpec& g, std::mt19937_64& rng,
                                            int trials) {
  const int n = g.rank();
  const Backend& b = g.backend();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double round = 0.0;
  for (int t = 0; t < trials; ++t) {
    LinearMapE l = ConnectionCoeffs::zero(n, b);
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
          l.at(a, j, k) = AlgebraElement::scalar(b, cplx(u(rng), u(rng)));
          l.at(a, k, j) = l.at(a, j, k);
        }
    const LinearMapE back = phi_g_invert(g, phi_g_apply(g, l));
    round = std::max(round, (back - l).norm());
  }

  std::vector<CheckResult> out{make_check("levi_civita", "phi_g_roundtrip", round, 1e-10)};
  const LeviCivitaResult r = levi_civita(spec, g, Route::Both);
  out.push_back(make_check("levi_civita", "torsion_residual", r.torsion_residual, 1e-10));
  out.push_back(make_check("levi_civita", "compatibility_residual", r.compat_residual, 1e-10));
  out.push_back(make_lower_bound("levi_civita", "uniqueness_singular_value", r.min_singular_value, 1e-8));
  out.push_back(make_check("levi_civita", "route_agreement", r.route_difference, 1e-9));
  out.push_back(make_check("levi_civita", "independent_torsion", torsion_norm(spec, r.gamma), 1e-10));
  out.push_back(make_check("levi_civita", "independent_compatibility", compat_residual(spec, g, r.gamma).max_norm,
                           1e-10));
  return out;
}

std::vector<CheckResult> deformation_checks(const Model& model, const Eigen::MatrixXd& theta, std::mt19937_64& rng,
                                            int trials) {
  require(model.action.has_value(), ErrorKind::InvalidArgument, "deformation checks need a torus action");
  const TorusAction& action = *model.action;
  const Backend base = work_backend(model.spec.backend);
  require(base->kind() == BackendKind::Graded, ErrorKind::InvalidArgument, "deformation checks need a graded model");
  const int t = action.circles;
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(t, t);

  auto times = [&](const AlgebraElement& a, const AlgebraElement& b, const Eigen::MatrixXd& th) {
    return retag(deform_product(a, b, th, action), a.backend());
  };

  double assoc = 0.0, identity = 0.0, center = 0.0;
  for (int q = 0; q < trials; ++q) {
    const AlgebraElement a = random_element(base, rng, 1);
    const AlgebraElement b = random_element(base, rng, 1);
    const AlgebraElement c = random_element(base, rng, 1);
    const AlgebraElement left = times(times(a, b, theta), c, theta);
    assoc = std::max(assoc, rel((left - times(a, times(b, c, theta), theta)).norm(), left.norm()));
    identity = std::max(identity, (times(a, b, zero) - a * b).norm());

    // grade-0 part of a is central for the deformed product
    AlgebraElement e = AlgebraElement::zero(base);
    for (const auto& [k, x] : a.modes())
      if (action.grade_of(k) == Mode(static_cast<size_t>(t), 0)) e += AlgebraElement::monomial(base, k, x);
    center = std::max(center, (times(e, b, theta) - times(b, e, theta)).norm());
  }

  double phase = 0.0;
  for (int i = 0; i < t; ++i)
    for (int j = i + 1; j < t; ++j) {
      Mode ki(static_cast<size_t>(base->dims()), 0), kj = ki;
      ki[static_cast<size_t>(action.coordinates[i])] = 1;
      kj[static_cast<size_t>(action.coordinates[j])] = 1;
      const AlgebraElement ui = AlgebraElement::monomial(base, ki);
      const AlgebraElement uj = AlgebraElement::monomial(base, kj);
      Mode kij = ki;
      for (size_t s = 0; s < kij.size(); ++s) kij[s] += kj[s];
      const cplx lhs = times(ui, uj, theta).coefficient(kij);
      const cplx rhs = times(uj, ui, theta).coefficient(kij);
      const double total = theta(i, j) + base->twist()(action.coordinates[i], action.coordinates[j]);
      const cplx expected = std::exp(cplx(0.0, 2.0 * std::numbers::pi * total));
      phase = std::max(phase, std::abs(lhs - expected * rhs));
    }

  // U^{-m} x U^m = 1 for every grade within the truncation.
  double witness = 0.0;
  const int r = model.spec.backend->radius();
  for (const Mode& m : mode_box(base->dims(), r, action.coordinates)) {
    Mode neg = m;
    for (auto& x : neg) x = -x;
    witness = std::max(witness, (times(AlgebraElement::monomial(base, neg), AlgebraElement::monomial(base, m), theta) -
                                 AlgebraElement::unit(base))
                                    .norm());
  }

  // deform(deform(., theta1), theta2) = deform(., theta1 + theta2) on single modes.
  double iterate = 0.0;
  {
    const Eigen::MatrixXd t1 = random_skew(t, rng);
    const Backend mid = work_backend(deformed_backend(model.spec.backend, t1, action));
    for (int q = 0; q < 10; ++q) {
      const AlgebraElement x = random_element(base, rng, 1);
      const AlgebraElement y = random_element(base, rng, 1);
      for (const auto& [k, xk] : x.modes()) {
        const Mode& l = y.modes().begin()->first;
        const AlgebraElement uk = AlgebraElement::monomial(base, k, xk);
        const AlgebraElement ul = AlgebraElement::monomial(base, l);
        const AlgebraElement twice = deform_product(retag(uk, mid), retag(ul, mid), theta, action);
        const AlgebraElement once = deform_product(uk, ul, t1 + theta, action);
        iterate = std::max(iterate, (twice - retag(once, twice.backend())).norm());
      }
    }
  }

  // sigma and P_sym are grade-0 maps; they deform to themselves.
  const int n = model.spec.rank;
  Eigen::MatrixXcd flip = Eigen::MatrixXcd::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) flip(j * n + i, i * n + j) = 1.0;
  const Eigen::MatrixXcd psym = 0.5 * (Eigen::MatrixXcd::Identity(n * n, n * n) + flip);
  const ModuleMap sig = deform_map(ModuleMap::from_scalar(model.spec.backend, flip), theta, action);
  const ModuleMap ps = deform_map(ModuleMap::from_scalar(model.spec.backend, psym), theta, action);
  double sigma_can = 0.0, idem = 0.0;
  for (int r0 = 0; r0 < n * n; ++r0)
    for (int c0 = 0; c0 < n * n; ++c0) {
      sigma_can = std::max(sigma_can, std::abs(sig.at(r0, c0).trace() - flip(r0, c0)) +
                                          (sig.at(r0, c0) - AlgebraElement::scalar(sig.at(r0, c0).backend(),
                                                                                   sig.at(r0, c0).trace()))
                                              .norm());
      AlgebraElement sq = AlgebraElement::zero(ps.at(0, 0).backend());
      for (int m = 0; m < n * n; ++m) sq += ps.at(r0, m) * ps.at(m, c0);
      idem = std::max(idem, (sq - ps.at(r0, c0)).norm());
    }

  return {make_check("deformation", "associativity", assoc, 1e-12),
          make_check("deformation", "theta_zero_identity", identity, 1e-14),
          make_check("deformation", "commutation_phase", phase, 1e-14),
          make_check("deformation", "grade_zero_central", center, 1e-12),
          make_check("deformation", "spectral_witness", witness, 1e-14),
          make_check("deformation", "iterated_deformation", iterate, 1e-14),
          make_check("deformation", "sigma_theta_canonical", sigma_can, 0.0),
          make_check("deformation", "p_sym_theta_idempotent", idem, 1e-14)};
}

std::vector<CheckResult> model_suite(const Model& model, const MetricSpec& g, const Eigen::MatrixXd& theta,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CheckResult> out;
  auto append = [&](std::vector<CheckResult> v) { out.insert(out.end(), v.begin(), v.end()); };
  append(algebra_checks(model.spec, rng));
  append(forms_checks(model.spec, rng));
  append(metric_checks(model.spec, g, rng));
  append(levi_civita_checks(model.spec, g, rng));
  if (model.action && model.spec.backend->kind() == BackendKind::Graded && model.action->circles >= 1) {
    append(deformation_checks(model, theta, rng));
    const CalculusSpec deformed = deform_calculus(model.spec, theta, *model.action);
    const LeviCivitaResult base = levi_civita(model.spec, g, Route::Direct);
    const auto [pushed, g_theta] = deform_connection(base.gamma, g, deformed, *model.action);
    const LeviCivitaResult direct = levi_civita(deformed, g_theta, Route::Direct);
    out.push_back(make_check("deformation", "levi_civita_commutes", (direct.gamma - pushed).norm(), 1e-8));
  }
  return out;
}

}  // namespace nclc
