#include "scone/scone_member.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include <Eigen/Dense>

#include "scone/dual_cone.hpp"
#include "scone/faces.hpp"

namespace scone {

namespace {

// SAGE reduction: one coefficient per exponent of A u B, s = c - |d|.
struct Reduced {
  std::vector<Exponent> U;
  std::vector<Scalar> s;
  std::vector<int> ia, ib;  // indices into the support lists, -1 when absent
};

Reduced sage_reduce(const SFunction& f) {
  std::map<Exponent, std::pair<int, int>> idx;
  for (std::size_t i = 0; i < f.support.even.size(); ++i) idx[f.support.even[i]] = {static_cast<int>(i), -1};
  for (std::size_t i = 0; i < f.support.odd.size(); ++i) {
    auto it = idx.find(f.support.odd[i]);
    if (it == idx.end())
      idx[f.support.odd[i]] = {-1, static_cast<int>(i)};
    else
      it->second.second = static_cast<int>(i);
  }
  Reduced r;
  for (const auto& [e, ab] : idx) {
    r.U.push_back(e);
    r.ia.push_back(ab.first);
    r.ib.push_back(ab.second);
    Scalar s(0);
    if (ab.first >= 0) s += f.c[ab.first];
    if (ab.second >= 0) s -= f.d[ab.second].abs();
    r.s.push_back(s);
  }
  return r;
}

std::optional<PointRefutation> sample_negative(const SFunction& f, const MembershipOptions& opt) {
  const std::size_t n = f.n();
  const double thr = -1e-9 * f.scale();
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gy(0.0, 1.5);
  std::bernoulli_distribution coin(0.5);
  std::optional<PointRefutation> best;
  auto consider = [&](const std::vector<double>& x) {
    double v = evaluate(f, x);
    if (std::isfinite(v) && v < thr && (!best || v < best->value)) best = PointRefutation{x, v};
  };
  if (opt.samples > 0 && n <= 10)
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j) x[j] = (mask >> j) & 1 ? -1.0 : 1.0;
      consider(x);
    }
  for (int k = 0; k < opt.samples; ++k) {
    std::vector<double> x(n);
    for (auto& xj : x) xj = std::exp(gy(rng)) * (coin(rng) ? -1.0 : 1.0);
    consider(x);
  }
  return best;
}

Scalar maybe_exact(double v, bool exact) { return exact ? Scalar(rational_from_double(v)) : Scalar(v); }

// Affine piece of log v: u -> log(w) + (u - g)^T y.
struct Piece {
  double logw = 0.0;
  Exponent g;
  std::vector<double> y;
};

double piece_at(const Piece& p, const Exponent& u) {
  double r = p.logw;
  for (std::size_t j = 0; j < u.size(); ++j) r += Rational(u[j] - p.g[j]).get_d() * p.y[j];
  return r;
}

// Dual vector whose logarithm is a maximum of affine pieces plus a small
// strictly convex term, so it is rational-safe for the exact dual check.
std::optional<DualRefutation> dual_from_pieces(const SFunction& f, const Reduced& red, const std::vector<Piece>& pieces) {
  const std::size_t m = red.U.size();
  std::vector<double> phi(m, -std::numeric_limits<double>::infinity());
  for (std::size_t u = 0; u < m; ++u)
    for (const auto& p : pieces) phi[u] = std::max(phi[u], piece_at(p, red.U[u]));
  double top = *std::max_element(phi.begin(), phi.end());
  std::vector<double> sq(m, 0.0);
  double sqmax = 1.0;
  for (std::size_t u = 0; u < m; ++u) {
    phi[u] = std::max(phi[u] - top, -700.0);
    for (const auto& x : red.U[u]) sq[u] += x.get_d() * x.get_d();
    sqmax = std::max(sqmax, sq[u]);
  }
  double pairing = 0.0, spread = 0.0;
  for (std::size_t u = 0; u < m; ++u) {
    double v = std::exp(phi[u]);
    pairing += v * red.s[u].value();
    spread += v * std::abs(red.s[u].value()) * sq[u];
  }
  if (!(pairing < 0)) return std::nullopt;
  double eps = std::min(1e-4 / sqmax, 0.1 * -pairing / std::max(spread, 1e-300));
  const bool exact = f.all_exact();
  const Support& s = f.support;
  std::vector<Scalar> v(s.even.size()), w(s.odd.size());
  for (std::size_t u = 0; u < m; ++u) {
    double val = std::exp(phi[u] + eps * sq[u]);
    if (red.ia[u] >= 0) v[red.ia[u]] = maybe_exact(val, exact);
    if (red.ib[u] >= 0) {
      int sg = f.d[red.ib[u]].sign();
      w[red.ib[u]] = sg == 0 ? Scalar(0) : maybe_exact(sg > 0 ? -val : val, exact);
    }
  }
  DualRefutation ref{DualVector(s, v, w), Scalar(0)};
  ref.pairing = pair(ref.u, f);
  double mag = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) mag += std::abs(v[i].value() * f.c[i].value());
  for (std::size_t i = 0; i < w.size(); ++i) mag += std::abs(w[i].value() * f.d[i].value());
  bool negative = ref.pairing.is_exact() ? ref.pairing.sign() < 0 : ref.pairing.value() < -1e-12 * mag;
  if (!negative) return std::nullopt;
  if (!dual_membership(ref.u, DualMode::Reduced).member) return std::nullopt;
  return ref;
}

struct Block {
  std::size_t g = 0;                // index of gamma in U
  std::vector<std::size_t> face;    // indices into U
  std::vector<double> lam0;
  Eigen::MatrixXd K;                // kernel of the moment map on the face
  std::vector<double> tau;          // exposing direction of the face within P
  double logs = 0.0;
  std::size_t zoff = 0, woff = 0;
};

struct Problem {
  const Reduced* red = nullptr;
  std::vector<std::size_t> P;
  std::vector<Block> blocks;
  std::vector<double> sval;         // s as double, indexed by U
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> uses;  // per U index: (block, face slot)
  std::size_t nvar = 0;
  std::size_t nbarrier = 0;
};

struct Eval {
  double phi = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

bool barrier_eval(const Problem& pb, const Eigen::VectorXd& x, double T, Eval* out, bool derivs) {
  const double t = x[0];
  double phi = T * t;
  if (derivs) {
    out->grad = Eigen::VectorXd::Zero(pb.nvar);
    out->hess = Eigen::MatrixXd::Zero(pb.nvar, pb.nvar);
    out->grad[0] = T;
  }
  for (const auto& b : pb.blocks) {
    const std::size_t m = b.face.size(), k = b.K.cols();
    Eigen::VectorXd lam = Eigen::Map<const Eigen::VectorXd>(b.lam0.data(), m);
    if (k) lam += b.K * x.segment(b.zoff, k);
    Eigen::VectorXd W = x.segment(b.woff, m);
    if (lam.minCoeff() <= 0 || W.minCoeff() <= 0) return false;
    Eigen::VectorXd lw = W.array().log(), ll = lam.array().log();
    double psi = lam.dot(lw - ll);
    double q = psi - b.logs - t;
    if (q <= 0) return false;
    phi += ll.sum() + lw.sum() + std::log(q);
    if (!derivs) continue;
    // log lambda and log W barriers
    Eigen::VectorXd il = lam.cwiseInverse(), iw = W.cwiseInverse();
    if (k) {
      out->grad.segment(b.zoff, k) += b.K.transpose() * il;
      out->hess.block(b.zoff, b.zoff, k, k) -= b.K.transpose() * il.array().square().matrix().asDiagonal() * b.K;
    }
    out->grad.segment(b.woff, m) += iw;
    out->hess.block(b.woff, b.woff, m, m).diagonal() -= iw.array().square().matrix();
    // log q
    const std::size_t dim = 1 + k + m;
    Eigen::VectorXd gq(dim);
    gq[0] = -1.0;
    if (k) gq.segment(1, k) = b.K.transpose() * (lw - ll);
    gq.segment(1 + k, m) = lam.cwiseProduct(iw);
    Eigen::MatrixXd Hq = Eigen::MatrixXd::Zero(dim, dim);
    if (k) {
      Hq.block(1, 1, k, k) = -b.K.transpose() * il.asDiagonal() * b.K;
      Eigen::MatrixXd zw = b.K.transpose() * iw.asDiagonal();
      Hq.block(1, 1 + k, k, m) = zw;
      Hq.block(1 + k, 1, m, k) = zw.transpose();
    }
    Hq.block(1 + k, 1 + k, m, m).diagonal() = -(lam.array() * iw.array().square()).matrix();
    Eigen::MatrixXd Hl = Hq / q - gq * gq.transpose() / (q * q);
    Eigen::VectorXd gl = gq / q;
    std::vector<std::size_t> map(dim);
    map[0] = 0;
    for (std::size_t i = 0; i < k; ++i) map[1 + i] = b.zoff + i;
    for (std::size_t i = 0; i < m; ++i) map[1 + k + i] = b.woff + i;
    for (std::size_t i = 0; i < dim; ++i) {
      out->grad[map[i]] += gl[i];
      for (std::size_t j = 0; j < dim; ++j) out->hess(map[i], map[j]) += Hl(i, j);
    }
  }
  for (std::size_t p : pb.P) {
    if (pb.uses[p].empty()) continue;
    double r = pb.sval[p];
    for (auto [bi, slot] : pb.uses[p]) r -= x[pb.blocks[bi].woff + slot];
    if (r <= 0) return false;
    phi += std::log(r);
    if (!derivs) continue;
    for (auto [bi, slot] : pb.uses[p]) {
      std::size_t i = pb.blocks[bi].woff + slot;
      out->grad[i] -= 1.0 / r;
      for (auto [bj, slot2] : pb.uses[p]) out->hess(i, pb.blocks[bj].woff + slot2) -= 1.0 / (r * r);
    }
  }
  if (out) out->phi = phi;
  return true;
}

double block_psi(const Block& b, const Eigen::VectorXd& x, Eigen::VectorXd* lam_out = nullptr) {
  const std::size_t m = b.face.size(), k = b.K.cols();
  Eigen::VectorXd lam = Eigen::Map<const Eigen::VectorXd>(b.lam0.data(), m);
  if (k) lam += b.K * x.segment(b.zoff, k);
  Eigen::VectorXd W = x.segment(b.woff, m);
  if (lam_out) *lam_out = lam;
  return lam.dot((W.array().log() - lam.array().log()).matrix());
}

struct IpmOutcome {
  Eigen::VectorXd x;
  double T = 1.0;
  double t = 0.0;
  double gap = 0.0;
  int steps = 0;
};

IpmOutcome run_ipm(const Problem& pb, Eigen::VectorXd x, int max_steps) {
  IpmOutcome res;
  double T = 1.0;
  const double m = static_cast<double>(pb.nbarrier);
  Eval ev, trial;
  for (;;) {
    for (int inner = 0; inner < 100 && res.steps < max_steps; ++inner) {
      barrier_eval(pb, x, T, &ev, true);
      Eigen::MatrixXd H = -ev.hess;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
      Eigen::VectorXd dx = ldlt.solve(ev.grad);
      if (!dx.allFinite()) break;
      double dec = ev.grad.dot(dx);
      ++res.steps;
      if (dec < 1e-10) break;
      double a = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls, a *= 0.5) {
        Eigen::VectorXd xn = x + a * dx;
        if (barrier_eval(pb, xn, T, &trial, false) && trial.phi >= ev.phi + 0.25 * a * dec) {
          x = xn;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    res.t = x[0];
    res.gap = m / T;
    if (res.t > 1e-7 || res.t + res.gap < -1e-9 || res.gap < 1e-11 || res.steps >= max_steps) break;
    T *= 8.0;
  }
  res.x = x;
  res.T = T;
  return res;
}

std::optional<AGDecomposition> build_decomposition(const SFunction& f, const Reduced& red,
                                                   const std::vector<Block>& blocks,
                                                   const std::vector<std::vector<Scalar>>& W, bool exact) {
  const std::size_t m = red.U.size();
  AGDecomposition dec;
  dec.support = f.support;
  auto sc = [&](const Scalar& x) { return exact ? x : x.inexact(); };
  // W as scalars, shrunk slightly so the exact capacities are respected.
  std::vector<std::vector<Scalar>> Ws(blocks.size());
  std::vector<Scalar> used(m, Scalar(0));
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (std::size_t i = 0; i < blocks[b].face.size(); ++i) {
      Scalar v;
      if (W[b][i].is_exact() && exact) {
        v = W[b][i];
      } else {
        double w = std::max(W[b][i].value(), 0.0);
        v = exact ? Scalar(rational_from_double(w * (1.0 - std::ldexp(1.0, -40)))) : Scalar(w);
      }
      Ws[b].push_back(v);
      used[blocks[b].face[i]] += v;
    }
  if (exact)
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (std::size_t i = 0; i < blocks[b].face.size(); ++i) {
        std::size_t p = blocks[b].face[i];
        if (used[p] > red.s[p]) Ws[b][i] = Ws[b][i] * red.s[p] / used[p];
      }
  if (exact) {
    std::fill(used.begin(), used.end(), Scalar(0));
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (std::size_t i = 0; i < blocks[b].face.size(); ++i) used[blocks[b].face[i]] += Ws[b][i];
  }

  auto add_part = [&](Parity par, std::vector<Exponent> outer, std::vector<Scalar> c, const Exponent& inner,
                      const Scalar& d) {
    AGFunction g;
    g.n = f.n();
    g.parity = par;
    g.outer = std::move(outer);
    g.c = std::move(c);
    g.inner = inner;
    g.d = d;
    dec.parts.push_back({g, {}});
  };

  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::size_t g = blocks[b].g;
    std::vector<Exponent> outer;
    for (auto p : blocks[b].face) outer.push_back(red.U[p]);
    Scalar c = red.ia[g] >= 0 ? sc(f.c[red.ia[g]]) : Scalar(0);
    Scalar d = red.ib[g] >= 0 ? sc(f.d[red.ib[g]]) : Scalar(0);
    if (red.ib[g] < 0) {
      add_part(Parity::Even, outer, Ws[b], red.U[g], c);
    } else if (red.ia[g] < 0) {
      add_part(Parity::Odd, outer, Ws[b], red.U[g], d);
    } else if (c.sign() >= 0) {
      auto o2 = outer;
      auto c2 = Ws[b];
      if (c.sign() > 0) {
        o2.push_back(red.U[g]);
        c2.push_back(c);
      }
      add_part(Parity::Odd, o2, c2, red.U[g], d);
    } else {
      Scalar tot = c.abs() + d.abs();
      std::vector<Scalar> ce, co;
      for (const auto& w : Ws[b]) {
        ce.push_back(w * c.abs() / tot);
        co.push_back(w * d.abs() / tot);
      }
      add_part(Parity::Even, outer, ce, red.U[g], c);
      if (d.sign() != 0) add_part(Parity::Odd, outer, co, red.U[g], d);
    }
  }
  std::vector<bool> is_block(m, false);
  for (const auto& b : blocks) is_block[b.g] = true;
  for (std::size_t u = 0; u < m; ++u) {
    if (is_block[u]) continue;
    if (red.ia[u] >= 0 && red.ib[u] >= 0 && f.d[red.ib[u]].sign() != 0) {
      Scalar d = sc(f.d[red.ib[u]]);
      add_part(Parity::Odd, {red.U[u]}, {d.abs()}, red.U[u], d);
    }
    if (red.ia[u] < 0) continue;
    Scalar left = sc(red.s[u]) - used[u];
    if (left.sign() < 0) {
      if (exact || left.value() < -1e-9 * f.scale()) return std::nullopt;
      continue;
    }
    if (left.sign() > 0) dec.monomials.push_back({red.U[u], left});
  }
  for (auto& part : dec.parts) {
    auto r = ag_nonneg_decide(part.f);
    if (r.verdict != Verdict::Certified) return std::nullopt;
    part.witness = r.witness;
  }
  return dec;
}

std::optional<AGDecomposition> certify(const SFunction& f, const Reduced& red, const std::vector<Block>& blocks,
                                       const std::vector<std::vector<Scalar>>& W) {
  if (f.all_exact())
    if (auto d = build_decomposition(f, red, blocks, W, true)) return d;
  return build_decomposition(f, red, blocks, W, false);
}

std::vector<double> least_squares_y(const Reduced& red, const Block& b, const Eigen::VectorXd& lam,
                                    const std::vector<double>& W) {
  const std::size_t m = b.face.size();
  const std::size_t n = red.U[b.g].size();
  Eigen::MatrixXd M(m, n + 1);
  Eigen::VectorXd rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& a = red.U[b.face[i]];
    for (std::size_t j = 0; j < n; ++j) M(i, j) = Rational(a[j] - red.U[b.g][j]).get_d();
    M(i, n) = 1.0;
    rhs[i] = std::log(lam[i] / W[i]);
  }
  Eigen::VectorXd sol = M.completeOrthogonalDecomposition().solve(rhs);
  std::vector<double> y(n);
  for (std::size_t j = 0; j < n; ++j) y[j] = sol[j] + 30.0 * b.tau[j];
  return y;
}

Piece piece_for(const Reduced& red, const Block& b, const std::vector<double>& y, const std::vector<double>& W,
                double omega) {
  double G = 0.0;
  for (std::size_t i = 0; i < b.face.size(); ++i) {
    double e = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) e += Rational(red.U[b.face[i]][j] - red.U[b.g][j]).get_d() * y[j];
    G += W[i] * std::exp(e);
  }
  return Piece{std::log(omega) - std::log(G), red.U[b.g], y};
}

}  // namespace

const char* certificate_kind(const Certificate& c) {
  switch (c.index()) {
    case 0: return "ag-decomposition";
    case 1: return "circuit-decomposition";
    case 2: return "dual-refutation";
    default: return "point-refutation";
  }
}

MembershipResult scone_membership(const SFunction& f, const MembershipOptions& opt) {
  MembershipResult res;
  const std::size_t n = f.n();
  if (auto pt = sample_negative(f, opt)) {
    res.verdict = Verdict::Refuted;
    res.cert = *pt;
    res.note = "negative value found by sampling";
    return res;
  }
  Reduced red = sage_reduce(f);
  const std::size_t m = red.U.size();
  Problem pb;
  pb.red = &red;
  pb.uses.resize(m);
  std::vector<std::size_t> N;
  for (std::size_t u = 0; u < m; ++u) {
    pb.sval.push_back(red.s[u].value());
    int sg = red.s[u].sign();
    if (sg < 0) N.push_back(u);
    if (sg <= 0) continue;
    if (opt.outer && std::find(opt.outer->begin(), opt.outer->end(), red.U[u]) == opt.outer->end()) continue;
    pb.P.push_back(u);
  }
  std::vector<Exponent> Pexp;
  for (auto p : pb.P) Pexp.push_back(red.U[p]);

  auto refute_with = [&](const std::vector<Piece>& pieces, const char* note) {
    if (auto ref = dual_from_pieces(f, red, pieces)) {
      res.verdict = Verdict::Refuted;
      res.cert = *ref;
      res.note = note;
    } else {
      res.verdict = Verdict::Indeterminate;
      res.note = std::string(note) + "; no checkable dual vector";
    }
    return res;
  };

  // Faces of Lambda(P, gamma).
  std::size_t off = 1;
  for (auto g : N) {
    Block b;
    b.g = g;
    b.logs = std::log(std::abs(pb.sval[g]));
    auto lf = Pexp.empty() ? std::nullopt : lambda_face(Pexp, red.U[g]);
    if (!lf) {
      std::vector<double> y(n, 0.0);
      double K = 0.0;
      if (!Pexp.empty()) {
        auto tau = exposing_direction(Pexp, red.U[g], {});
        double sp = 0.0;
        for (auto p : pb.P) sp += pb.sval[p];
        K = std::max(1.0, std::log(2.0 * sp / std::abs(pb.sval[g])) + 1.0);
        for (std::size_t j = 0; j < n; ++j) y[j] = K * tau[j].get_d();
      }
      return refute_with({Piece{0.0, red.U[g], y}}, "negative term outside the hull of the positive terms");
    }
    std::vector<std::size_t> face_local = lf->face;
    for (auto i : face_local) b.face.push_back(pb.P[i]);
    for (auto i : face_local) b.lam0.push_back(lf->interior[i].get_d());
    {
      std::vector<std::vector<double>> pts;
      std::vector<Exponent> fe;
      for (auto i : face_local) fe.push_back(Pexp[i]);
      auto ker = kernel(lifted_columns(fe, n), fe.size());
      b.K = Eigen::MatrixXd::Zero(fe.size(), ker.size());
      for (std::size_t c = 0; c < ker.size(); ++c) {
        Eigen::VectorXd col(fe.size());
        for (std::size_t i = 0; i < fe.size(); ++i) col[i] = ker[c][i].get_d();
        col.normalize();
        b.K.col(c) = col;
      }
    }
    b.tau.assign(n, 0.0);
    if (face_local.size() < Pexp.size()) {
      auto tau = exposing_direction(Pexp, red.U[g], face_local);
      for (std::size_t j = 0; j < n; ++j) b.tau[j] = tau[j].get_d();
    }
    pb.blocks.push_back(std::move(b));
  }

  if (N.empty()) {
    auto dec = certify(f, red, {}, {});
    if (dec) {
      res.verdict = Verdict::Certified;
      res.cert = *dec;
      res.note = "no negative terms";
    } else {
      res.note = "decomposition failed";
    }
    return res;
  }

  if (N.size() == 1) {
    // The whole positive part serves the single negative term.
    const Block& b = pb.blocks[0];
    AGFunction age;
    age.n = n;
    age.parity = Parity::Even;
    age.inner = red.U[b.g];
    age.d = red.s[b.g];
    std::vector<Scalar> W;
    for (auto p : b.face) W.push_back(red.s[p]);
    for (auto p : pb.P) {
      age.outer.push_back(red.U[p]);
      age.c.push_back(red.s[p]);
    }
    auto r = ag_nonneg_decide(age, AGOptions{opt.tol, 200});
    res.margin = r.threshold > 0 ? std::log(std::max(r.g_star, 1e-300) / r.threshold) : 0.0;
    if (r.verdict == Verdict::Certified) {
      if (auto dec = certify(f, red, pb.blocks, {W})) {
        res.verdict = Verdict::Certified;
        res.cert = *dec;
        return res;
      }
      res.note = "AG part certified but the decomposition failed";
      return res;
    }
    if (r.verdict == Verdict::Refuted) {
      std::vector<double> y(n);
      for (std::size_t j = 0; j < n; ++j) y[j] = std::log(std::abs(r.point[j]));
      return refute_with({Piece{0.0, red.U[b.g], y}}, "single negative term exceeds the AM-GM bound");
    }
    res.note = "AG decision inconclusive";
    return res;
  }

  // Barrier method over (t, lambda, W).
  for (auto& b : pb.blocks) {
    b.zoff = off;
    off += b.K.cols();
  }
  for (std::size_t bi = 0; bi < pb.blocks.size(); ++bi) {
    auto& b = pb.blocks[bi];
    b.woff = off;
    off += b.face.size();
    for (std::size_t i = 0; i < b.face.size(); ++i) pb.uses[b.face[i]].push_back({bi, i});
  }
  pb.nvar = off;
  pb.nbarrier = 0;
  for (const auto& b : pb.blocks) pb.nbarrier += 2 * b.face.size() + 1;
  for (auto p : pb.P)
    if (!pb.uses[p].empty()) ++pb.nbarrier;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(pb.nvar);
  for (const auto& b : pb.blocks)
    for (std::size_t i = 0; i < b.face.size(); ++i)
      x[b.woff + i] = pb.sval[b.face[i]] / (2.0 * pb.uses[b.face[i]].size());
  double t0 = std::numeric_limits<double>::infinity();
  for (const auto& b : pb.blocks) t0 = std::min(t0, block_psi(b, x) - b.logs);
  x[0] = t0 - 1.0;

  auto out = run_ipm(pb, x, opt.max_iters);
  res.margin = out.t;
  std::vector<std::vector<double>> W;
  for (const auto& b : pb.blocks) {
    std::vector<double> w(b.face.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = out.x[b.woff + i];
    W.push_back(w);
  }
  if (out.t > -1e-9) {
    std::vector<std::vector<Scalar>> Ws;
    for (const auto& w : W) Ws.emplace_back(w.begin(), w.end());
    if (auto dec = certify(f, red, pb.blocks, Ws)) {
      res.verdict = Verdict::Certified;
      res.cert = *dec;
      return res;
    }
  }
  if (out.t + out.gap < -1e-9) {
    std::vector<Piece> pieces;
    double tot = 0.0;
    std::vector<double> om;
    for (const auto& b : pb.blocks) {
      double q = block_psi(b, out.x) - b.logs - out.t;
      om.push_back(1.0 / (out.T * q));
      tot += om.back();
    }
    for (std::size_t bi = 0; bi < pb.blocks.size(); ++bi) {
      const auto& b = pb.blocks[bi];
      Eigen::VectorXd lam;
      block_psi(b, out.x, &lam);
      auto y = least_squares_y(red, b, lam, W[bi]);
      pieces.push_back(piece_for(red, b, y, W[bi], om[bi] / tot));
    }
    return refute_with(pieces, "SAGE program infeasible");
  }
  res.note = "solver did not separate the margin from zero";
  return res;
}

SFunction trim_support(const SFunction& f) {
  std::vector<std::pair<Exponent, Scalar>> even, odd;
  for (std::size_t i = 0; i < f.c.size(); ++i)
    if (!f.c[i].is_zero()) even.emplace_back(f.support.even[i], f.c[i]);
  for (std::size_t i = 0; i < f.d.size(); ++i)
    if (!f.d[i].is_zero()) odd.emplace_back(f.support.odd[i], f.d[i]);
  return SFunction::from_terms(f.n(), even, odd);
}

MembershipResult restrict_support(const SFunction& f, const AGDecomposition& larger, const MembershipOptions& opt) {
  SFunction g = trim_support(f);
  for (const auto& e : g.support.even)
    if (!larger.support.even_index(e)) throw Error("function support is not contained in the certificate support");
  for (const auto& e : g.support.odd)
    if (!larger.support.odd_index(e)) throw Error("function support is not contained in the certificate support");
  if (larger.support == g.support) {
    MembershipResult r;
    r.verdict = Verdict::Certified;
    r.cert = larger;
    r.note = "certificate already on the support";
    return r;
  }
  if (g.support.even.empty() && g.support.odd.empty()) {
    MembershipResult r;
    r.verdict = Verdict::Certified;
    r.cert = AGDecomposition{g.support, {}, {}};
    return r;
  }
  return scone_membership(g, opt);
}

const char* simplex_status_name(SimplexStatus s) {
  switch (s) {
    case SimplexStatus::Certified: return "Certified";
    case SimplexStatus::Refuted: return "Refuted";
    case SimplexStatus::NotApplicable: return "NotApplicable";
    case SimplexStatus::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

namespace {

// Local descent of f(e^y) / sum |coeff| e^{u^T y} on the positive orthant.
std::optional<PointRefutation> positive_descent(const SFunction& f, std::vector<double> y) {
  const std::size_t n = f.n();
  std::vector<std::pair<std::vector<double>, double>> terms;
  for (std::size_t i = 0; i < f.c.size(); ++i)
    if (!f.c[i].is_zero()) terms.emplace_back(to_double(f.support.even[i]), f.c[i].value());
  for (std::size_t i = 0; i < f.d.size(); ++i)
    if (!f.d[i].is_zero()) terms.emplace_back(to_double(f.support.odd[i]), f.d[i].value());
  auto ratio = [&](const std::vector<double>& z, std::vector<double>* g) {
    std::vector<double> e(terms.size());
    double mx = -1e300;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      e[k] = 0.0;
      for (std::size_t j = 0; j < n; ++j) e[k] += terms[k].first[j] * z[j];
      mx = std::max(mx, e[k]);
    }
    double N = 0.0, D = 0.0;
    std::vector<double> gN(n, 0.0), gD(n, 0.0);
    for (std::size_t k = 0; k < terms.size(); ++k) {
      double w = std::exp(e[k] - mx);
      N += terms[k].second * w;
      D += std::abs(terms[k].second) * w;
      for (std::size_t j = 0; j < n; ++j) {
        gN[j] += terms[k].second * w * terms[k].first[j];
        gD[j] += std::abs(terms[k].second) * w * terms[k].first[j];
      }
    }
    double R = N / D;
    if (g)
      for (std::size_t j = 0; j < n; ++j) (*g)[j] = (gN[j] - R * gD[j]) / D;
    return R;
  };
  std::vector<double> g(n);
  double R = ratio(y, &g);
  for (int it = 0; it < 2000 && R >= -1e-12; ++it) {
    double gn = 0.0;
    for (double v : g) gn += v * v;
    if (gn < 1e-30) break;
    double a = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 50; ++ls, a *= 0.5) {
      std::vector<double> z(n);
      for (std::size_t j = 0; j < n; ++j) z[j] = y[j] - a * g[j];
      double Rz = ratio(z, nullptr);
      if (Rz < R - 1e-4 * a * gn) {
        y = z;
        moved = true;
        break;
      }
    }
    if (!moved) break;
    R = ratio(y, &g);
  }
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = std::exp(y[j]);
  double v = evaluate(f, x);
  if (std::isfinite(v) && v < -1e-12 * f.scale()) return PointRefutation{x, v};
  return std::nullopt;
}

}  // namespace

SimplexResult simplex_fast_path(const SFunction& f0, const MembershipOptions& opt) {
  SimplexResult res;
  SFunction f = trim_support(f0);
  const auto& A = f.support.even;
  const std::size_t n = f.n();
  if (A.empty()) {
    res.reason = "no even terms";
    return res;
  }
  std::vector<Exponent> V;
  for (std::size_t i = 0; i < A.size(); ++i) {
    std::vector<Exponent> rest;
    for (std::size_t k = 0; k < A.size(); ++k)
      if (k != i) rest.push_back(A[k]);
    if (rest.empty() || !lambda_face(rest, A[i])) V.push_back(A[i]);
  }
  if (!affinely_independent_exps(V)) {
    res.reason = "conv(A) is not a simplex";
    return res;
  }
  for (const auto& b : f.support.odd)
    if (!lambda_face(A, b)) {
      res.reason = "odd exponent " + format_exponent(b) + " lies outside conv(A)";
      return res;
    }
  for (std::size_t i = 0; i < A.size(); ++i)
    if (std::find(V.begin(), V.end(), A[i]) == V.end() && f.c[i].sign() > 0) {
      res.reason = "positive coefficient at non-vertex " + format_exponent(A[i]);
      return res;
    }
  for (std::size_t i = 0; i < f.d.size(); ++i)
    if (f.d[i].sign() > 0) {
      res.reason = "positive odd coefficient at " + format_exponent(f.support.odd[i]);
      return res;
    }
  MembershipOptions o = opt;
  o.outer = V;
  auto r = scone_membership(f, o);
  if (r.verdict == Verdict::Certified) {
    res.status = SimplexStatus::Certified;
    res.cert = decompose_to_circuits(std::get<AGDecomposition>(*r.cert), false);
    return res;
  }
  if (r.verdict == Verdict::Refuted && std::holds_alternative<PointRefutation>(*r.cert)) {
    res.status = SimplexStatus::Refuted;
    res.cert = r.cert;
    return res;
  }
  // Point from the dual vector: fit log v on the vertices, then descend.
  std::vector<std::vector<double>> starts{std::vector<double>(n, 0.0)};
  if (r.verdict == Verdict::Refuted) {
    const auto& u = std::get<DualRefutation>(*r.cert).u;
    Eigen::MatrixXd M(V.size(), n + 1);
    Eigen::VectorXd rhs(V.size());
    for (std::size_t i = 0; i < V.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) M(i, j) = V[i][j].get_d();
      M(i, n) = 1.0;
      rhs[i] = std::log(u.v[*f.support.even_index(V[i])].value());
    }
    Eigen::VectorXd sol = M.completeOrthogonalDecomposition().solve(rhs);
    starts.insert(starts.begin(), std::vector<double>(sol.data(), sol.data() + n));
  }
  for (const auto& y : starts)
    if (auto pt = positive_descent(f, y)) {
      res.status = SimplexStatus::Refuted;
      res.cert = *pt;
      return res;
    }
  res.status = SimplexStatus::Indeterminate;
  res.reason = r.verdict == Verdict::Refuted ? "dual refutation found but no negative point" : r.note;
  if (r.verdict == Verdict::Refuted) res.cert = r.cert;
  return res;
}

LowerBound sonc_lower_bound(const SFunction& f, const BoundOptions& opt) {
  const std::size_t n = f.n();
  const Exponent zero(n, Rational(0));
  const bool exact = f.all_exact();
  auto shifted = [&](double gamma) {
    std::vector<std::pair<Exponent, Scalar>> even, odd;
    for (std::size_t i = 0; i < f.c.size(); ++i) even.emplace_back(f.support.even[i], f.c[i]);
    for (std::size_t i = 0; i < f.d.size(); ++i) odd.emplace_back(f.support.odd[i], f.d[i]);
    even.emplace_back(zero, exact ? Scalar(-rational_from_double(gamma)) : Scalar(-gamma));
    return SFunction::from_terms(n, even, odd);
  };
  LowerBound out;
  auto query = [&](double gamma) -> std::optional<Certificate> {
    ++out.queries;
    auto r = scone_membership(shifted(gamma), opt.membership);
    if (r.verdict == Verdict::Certified) return r.cert;
    return std::nullopt;
  };

  // Upper end: smallest sampled value.
  std::mt19937_64 rng(opt.membership.seed);
  std::normal_distribution<double> gy(0.0, 1.5);
  std::bernoulli_distribution coin(0.5);
  double hi = evaluate(f, std::vector<double>(n, 0.0));
  if (!std::isfinite(hi)) hi = evaluate(f, std::vector<double>(n, 1.0));
  for (int k = 0; k < 4 * opt.membership.samples; ++k) {
    std::vector<double> x(n);
    for (auto& xj : x) xj = std::exp(gy(rng)) * (coin(rng) ? -1.0 : 1.0);
    double v = evaluate(f, x);
    if (std::isfinite(v)) hi = std::min(hi, v);
  }
  if (auto c = query(hi)) {
    out.gamma = hi;
    out.cert = *c;
    return out;
  }
  double width = 1.0, lo = hi - width;
  std::optional<Certificate> cert;
  for (int k = 0;; ++k) {
    cert = query(lo);
    if (cert) break;
    if (k >= opt.max_doublings) throw Error("no lower bound found: bracket exhausted");
    width *= 4.0;
    lo = hi - width;
  }
  while (hi - lo > opt.gamma_tol) {
    double mid = 0.5 * (lo + hi);
    if (auto c = query(mid)) {
      lo = mid;
      cert = c;
    } else {
      hi = mid;
    }
  }
  out.gamma = lo;
  out.cert = *cert;
  return out;
}

}  // namespace scone
