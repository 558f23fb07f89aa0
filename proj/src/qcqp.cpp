// SPDX-License-Identifier: Apache-2.0
#include "dfrc/qcqp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dfrc::qcqp {

namespace {

// f(x) = 0.5 x^T H x + g^T x + c over the real embedding x = [Re z; Im z; y].
struct RealForm {
  RMat hess;
  RVec grad_lin;
  double constant = 0.0;
  bool quadratic = false;

  double value(const RVec& x) const {
    double v = grad_lin.dot(x) + constant;
    if (quadratic) v += 0.5 * x.dot(hess * x);
    return v;
  }
  RVec gradient(const RVec& x) const {
    if (quadratic) return hess * x + grad_lin;
    return grad_lin;
  }
};

RealForm embed(const QuadraticForm& form, Index nc, Index nr) {
  const Index n = 2 * nc + nr;
  RealForm out;
  out.hess = RMat::Zero(n, n);
  out.grad_lin = RVec::Zero(n);
  out.constant = form.constant;
  if (form.quad.size() > 0 && nc > 0) {
    const RMat re = form.quad.real();
    const RMat im = form.quad.imag();
    out.hess.block(0, 0, nc, nc) = 2.0 * re;
    out.hess.block(0, nc, nc, nc) = -2.0 * im;
    out.hess.block(nc, 0, nc, nc) = 2.0 * im;
    out.hess.block(nc, nc, nc, nc) = 2.0 * re;
    out.quadratic = out.hess.cwiseAbs().maxCoeff() > 0.0;
  }
  if (form.lin.size() > 0 && nc > 0) {
    out.grad_lin.head(nc) = 2.0 * form.lin.real();
    out.grad_lin.segment(nc, nc) = 2.0 * form.lin.imag();
  }
  if (form.lin_real.size() > 0 && nr > 0) out.grad_lin.tail(nr) = form.lin_real;
  return out;
}

RVec to_real(const CVec& z, const RVec& y) {
  RVec x(2 * z.size() + y.size());
  x << z.real(), z.imag(), y;
  return x;
}

struct PdResult {
  RVec x;
  RVec z;
  RVec s;
  Status status = Status::MaxIter;
  int iterations = 0;
  double kkt = std::numeric_limits<double>::infinity();
  std::vector<double> trace;
};

double max_step(const RVec& v, const RVec& dv) {
  double alpha = 1.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
  }
  return alpha;
}

RVec constraint_values(const std::vector<RealForm>& cons, const RVec& x) {
  RVec f(static_cast<Index>(cons.size()));
  for (std::size_t i = 0; i < cons.size(); ++i) f(static_cast<Index>(i)) = cons[i].value(x);
  return f;
}

PdResult primal_dual(const RealForm& obj, const std::vector<RealForm>& cons, RVec x, double tol,
                     int max_iter) {
  const Index n = x.size();
  const Index m = static_cast<Index>(cons.size());
  PdResult res;

  if (m == 0) {
    // Unconstrained convex quadratic: one Newton step is exact.
    const RVec g = obj.gradient(x);
    if (obj.quadratic) {
      Eigen::LDLT<RMat> ldlt(obj.hess);
      x -= ldlt.solve(g);
    }
    res.x = x;
    res.z = RVec(0);
    res.s = RVec(0);
    const RVec g_end = obj.gradient(x);
    res.kkt = g_end.lpNorm<Eigen::Infinity>() / (1.0 + obj.grad_lin.lpNorm<Eigen::Infinity>());
    res.status = res.kkt <= tol ? Status::Optimal : Status::MaxIter;
    res.iterations = 1;
    res.trace.push_back(obj.value(x));
    return res;
  }

  // Slacks are free variables tied to the constraints through f(x) + s = 0,
  // so the start only needs s, z > 0.
  RVec s = (-constraint_values(cons, x)).cwiseMax(1.0);
  RVec z = RVec::Ones(m);
  RMat df(m, n);
  double best_primal = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter <= max_iter; ++iter) {
    res.iterations = iter;
    const RVec grad0 = obj.gradient(x);
    const RVec fx = constraint_values(cons, x);
    for (Index i = 0; i < m; ++i) df.row(i) = cons[static_cast<std::size_t>(i)].gradient(x).transpose();
    const RVec r_dual = grad0 + df.transpose() * z;
    const RVec r_pri = fx + s;
    const double gap = s.dot(z);
    const double mu = gap / static_cast<double>(m);
    const double dual_res = r_dual.lpNorm<Eigen::Infinity>() / (1.0 + grad0.lpNorm<Eigen::Infinity>());
    const double pri_res = fx.cwiseMax(0.0).lpNorm<Eigen::Infinity>();
    best_primal = std::min(best_primal, r_pri.lpNorm<Eigen::Infinity>());
    res.kkt = std::max({dual_res, pri_res, r_pri.lpNorm<Eigen::Infinity>(), gap / (1.0 + std::abs(obj.value(x)))});
    if (res.kkt <= tol) {
      res.status = Status::Optimal;
      break;
    }
    if (iter == max_iter) break;

    RMat kkt_mat = obj.quadratic ? obj.hess : RMat::Zero(n, n);
    for (Index i = 0; i < m; ++i) {
      const auto& c = cons[static_cast<std::size_t>(i)];
      if (c.quadratic) kkt_mat.noalias() += z(i) * c.hess;
    }
    const RVec w = z.cwiseQuotient(s);
    kkt_mat.noalias() += df.transpose() * w.asDiagonal() * df;
    // Tiny diagonal keeps the factorisation definite when a variable only
    // enters linearly and its bound is inactive.
    const double reg = 1e-13 * (1.0 + kkt_mat.diagonal().cwiseAbs().maxCoeff());
    kkt_mat.diagonal().array() += reg;
    Eigen::LDLT<RMat> ldlt(kkt_mat);

    // Newton step on r_dual = 0, f(x) + s = 0, s.z = target (+ corrector).
    auto direction = [&](double target, const RVec& corr, RVec& dx, RVec& ds, RVec& dz) {
      const RVec r_cent = (z.cwiseProduct(s).array() - target + corr.array()).matrix();
      const RVec tmp = (z.cwiseProduct(r_pri) - r_cent).cwiseQuotient(s);
      dx = ldlt.solve(-r_dual - df.transpose() * tmp);
      ds = -r_pri - df * dx;
      dz = (-r_cent - z.cwiseProduct(ds)).cwiseQuotient(s);
    };

    RVec dx, ds, dz;
    direction(0.0, RVec::Zero(m), dx, ds, dz);
    const double a_aff = std::min(max_step(s, ds), max_step(z, dz));
    const double mu_aff = (s + a_aff * ds).dot(z + a_aff * dz) / static_cast<double>(m);
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);
    direction(sigma * mu, ds.cwiseProduct(dz), dx, ds, dz);

    const double alpha = std::min(1.0, 0.99 * std::min(max_step(s, ds), max_step(z, dz)));
    x += alpha * dx;
    s += alpha * ds;
    z += alpha * dz;
    s = s.cwiseMax(1e-300);
    z = z.cwiseMax(1e-300);
    res.trace.push_back(obj.value(x));
  }
  // A primal residual that never came down signals an empty feasible set.
  if (res.status != Status::Optimal && best_primal > std::sqrt(tol))
    res.status = Status::Infeasible;
  res.x = x;
  res.z = z;
  res.s = s;
  return res;
}

}  // namespace

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal:
      return "optimal";
    case Status::MaxIter:
      return "max_iter";
    case Status::Infeasible:
      return "infeasible";
  }
  return "unknown";
}

double QuadraticForm::value(const CVec& z, const RVec& y) const {
  double v = constant;
  if (quad.size() > 0) v += (z.adjoint() * quad * z)(0).real();
  if (lin.size() > 0) v += 2.0 * lin.dot(z).real();
  if (lin_real.size() > 0) v += lin_real.dot(y);
  return v;
}

void ConvexQcqp::validate() const {
  auto check = [&](const QuadraticForm& f, const char* what) {
    if (f.quad.size() > 0) {
      if (f.quad.rows() != n_complex || f.quad.cols() != n_complex)
        throw DimensionError(std::string("qcqp: quadratic term size mismatch in ") + what);
      if (!f.quad.isApprox(f.quad.adjoint(), 1e-10))
        throw DimensionError(std::string("qcqp: quadratic term not Hermitian in ") + what);
      Eigen::SelfAdjointEigenSolver<CMat> es(f.quad, Eigen::EigenvaluesOnly);
      const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
      if (es.eigenvalues().minCoeff() < -1e-9 * scale)
        throw Error(std::string("qcqp: quadratic term is not positive semidefinite in ") + what);
    }
    if (f.lin.size() > 0 && f.lin.size() != n_complex)
      throw DimensionError(std::string("qcqp: complex linear term size mismatch in ") + what);
    if (f.lin_real.size() > 0 && f.lin_real.size() != n_real)
      throw DimensionError(std::string("qcqp: real linear term size mismatch in ") + what);
  };
  check(objective, "objective");
  for (const auto& c : constraints) check(c, "constraint");
  if (!nonnegative.empty() && static_cast<Index>(nonnegative.size()) != n_real)
    throw DimensionError("qcqp: nonnegativity mask size mismatch");
}

Solution solve(const ConvexQcqp& problem, const Options& options) {
  problem.validate();
  const Index nc = problem.n_complex;
  const Index nr = problem.n_real;
  const Index n = 2 * nc + nr;

  const RealForm obj = embed(problem.objective, nc, nr);
  std::vector<RealForm> cons;
  std::vector<double> scale;
  cons.reserve(problem.constraints.size() + static_cast<std::size_t>(nr));
  // Each constraint is divided by max(1, |constant|) so that tolerances mean
  // the same thing for a power budget of 100 and a rate constraint of 1.
  for (const auto& c : problem.constraints) {
    RealForm f = embed(c, nc, nr);
    const double k = std::max(1.0, std::abs(f.constant));
    f.hess /= k;
    f.grad_lin /= k;
    f.constant /= k;
    cons.push_back(std::move(f));
    scale.push_back(k);
  }
  for (Index j = 0; j < nr; ++j) {
    if (problem.nonnegative.empty() || !problem.nonnegative[static_cast<std::size_t>(j)]) continue;
    RealForm b;
    b.hess = RMat::Zero(n, n);
    b.grad_lin = RVec::Zero(n);
    b.grad_lin(2 * nc + j) = -1.0;
    cons.push_back(std::move(b));
    scale.push_back(1.0);
  }

  RVec x0 = RVec::Zero(n);
  if (options.hint_z && options.hint_z->size() == nc) x0.head(2 * nc) = to_real(*options.hint_z, RVec(0));
  if (options.hint_y && options.hint_y->size() == nr) x0.tail(nr) = *options.hint_y;

  PdResult pd = primal_dual(obj, cons, x0, options.tol, options.max_iter);
  Solution out;
  out.z = CVec(nc);
  out.z.real() = pd.x.head(nc);
  out.z.imag() = pd.x.segment(nc, nc);
  out.y = pd.x.segment(2 * nc, nr);
  out.objective_value = obj.value(pd.x);
  out.kkt_residual = pd.kkt;
  out.status = pd.status;
  out.iterations = pd.iterations;
  out.multipliers = pd.z;
  out.slacks = pd.s;
  for (std::size_t i = 0; i < scale.size() && static_cast<Index>(i) < pd.z.size(); ++i) {
    out.multipliers(static_cast<Index>(i)) /= scale[i];
    out.slacks(static_cast<Index>(i)) = -cons[i].value(pd.x) * scale[i];
  }
  out.objective_trace = std::move(pd.trace);
  return out;
}

}  // namespace dfrc::qcqp
