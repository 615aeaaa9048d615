#include "wittlab/points.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace wittlab {

int quadratic_roots(const FieldCtx& f, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                    std::array<std::uint32_t, 2>& out) {
  if (a == 0) {
    if (b == 0) return c == 0 ? -1 : 0;
    out[0] = f.div(c, b);
    return 1;
  }
  if (b == 0) {
    out[0] = f.sqrt(f.div(c, a));
    return 1;
  }
  // w = (b/a) z turns the equation into z^2 + z = a c / b^2.
  const auto scale = f.div(b, a);
  const auto rhs = f.div(f.mul(a, c), f.sqr(b));
  const auto z = f.artin_schreier_root(rhs);
  if (!z) return 0;
  const auto w0 = f.mul(scale, *z);
  const auto w1 = w0 ^ scale;
  out[0] = std::min(w0, w1);
  out[1] = std::max(w0, w1);
  return 2;
}

int quadratic_root_count(const FieldCtx& f, std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  if (a == 0) {
    if (b == 0) return c == 0 ? -1 : 0;
    return 1;
  }
  if (b == 0) return 1;
  return f.trace(f.div(f.mul(a, c), f.sqr(b))) == 0 ? 2 : 0;
}

namespace {

int idx(Var i, Var j) { return QForm::index(i, j); }

bool is_cone(const QForm& q) {
  for (int i = 0; i < QForm::kTerms; ++i) {
    const bool want = i == idx(Var::X, Var::X) || i == idx(Var::Y, Var::Z);
    if (want ? q.raw(i) != q.raw(idx(Var::X, Var::X)) || q.raw(i) == 0 : q.raw(i) != 0) return false;
  }
  return true;
}

bool u_free(const QForm& q) {
  for (Var v : {Var::X, Var::Y, Var::Z, Var::T, Var::U}) {
    if (q.raw(QForm::index(v, Var::U)) != 0) return false;
  }
  return true;
}

}  // namespace

ConeEnumerator::ConeEnumerator(const CurveModel& c, int m)
    : field_(nullptr), q2_(c.ctx()), q3_(c.ctx()) {
  if (m < 1) throw ValidationError("extension degree must be positive");
  const long degree = static_cast<long>(c.ctx().degree()) * m;
  if (degree > kMaxFieldDegree) {
    throw FieldCapError("GF(2^" + std::to_string(degree) + ") exceeds the field cap");
  }
  field_ = &FieldCtx::get(static_cast<int>(degree));

  // Rewrite the span as X^2 + YZ, a quadric without U^2, and one with U^2 = 1.
  const auto& f = c.ctx();
  QForm cone = cone_quadric(f);
  std::vector<QForm> rest;
  bool has_cone = false;
  for (const auto& q : c.quadrics()) {
    if (!has_cone && is_cone(q)) {
      has_cone = true;
    } else {
      rest.push_back(q);
    }
  }
  if (!has_cone) {
    // Accept any basis whose span contains the cone.
    if (!same_span(c.quadrics(), {cone, c.q2(), c.q3()}) &&
        !same_span(c.quadrics(), {c.q1(), cone, c.q3()}) &&
        !same_span(c.quadrics(), {c.q1(), c.q2(), cone})) {
      throw ValidationError("curve does not lie on the cone X^2+YZ");
    }
    rest.clear();
    const std::array<QForm, 3> qs = c.quadrics();
    for (int drop = 0; drop < 3 && rest.empty(); ++drop) {
      std::array<QForm, 3> trial = qs;
      trial[static_cast<std::size_t>(drop)] = cone;
      if (same_span(trial, qs)) {
        for (int i = 0; i < 3; ++i) {
          if (i != drop) rest.push_back(qs[static_cast<std::size_t>(i)]);
        }
      }
    }
  }
  QForm p = rest[0];
  QForm r = rest[1];
  const int uu = idx(Var::U, Var::U);
  if (r.raw(uu) == 0) std::swap(p, r);
  if (r.raw(uu) == 0) throw ValidationError("no quadric in the span has a U^2 term");
  r = f(f.inv(r.raw(uu))) * r;
  p = p + f(p.raw(uu)) * r;
  q2_ = p.embed(*field_);
  q3_ = r.embed(*field_);
  q2_u_free_ = u_free(q2_);
}

template <typename Sink>
bool ConeEnumerator::run_slice(std::uint32_t x_lo, std::uint32_t x_hi, Sink& sink) const {
  const auto& f = *field_;
  const auto& c2 = q2_.raw_coeffs();
  const auto& c3 = q3_.raw_coeffs();
  auto at = [](const std::array<std::uint32_t, QForm::kTerms>& c, Var i, Var j) {
    return c[static_cast<std::size_t>(QForm::index(i, j))];
  };
  const std::uint32_t size = f.size();
  std::array<std::uint32_t, 2> ts{};
  std::array<std::uint32_t, 2> us{};

  // q3 restricted to U: U^2 + beta U + gamma.
  auto handle_t = [&](std::uint32_t x, std::uint32_t y, std::uint32_t t) -> bool {
    const auto beta = f.mul(at(c3, Var::X, Var::U), x) ^ f.mul(at(c3, Var::Y, Var::U), y) ^
                      at(c3, Var::Z, Var::U) ^ f.mul(at(c3, Var::T, Var::U), t);
    const auto gamma = q3_.eval_raw({x, y, 1, t, 0});
    if constexpr (Sink::kCountOnly) {
      sink.add(static_cast<std::uint64_t>(quadratic_root_count(f, 1, beta, gamma)));
      return true;
    } else {
      const int n = quadratic_roots(f, 1, beta, gamma, us);
      for (int i = 0; i < n; ++i) {
        if (!sink.point({x, y, 1, t, us[static_cast<std::size_t>(i)]})) return false;
      }
      return true;
    }
  };

  for (std::uint32_t x = x_lo; x < x_hi; ++x) {
    const auto y = f.sqr(x);
    if (q2_u_free_) {
      const auto a = at(c2, Var::T, Var::T);
      const auto b = f.mul(at(c2, Var::X, Var::T), x) ^ f.mul(at(c2, Var::Y, Var::T), y) ^ at(c2, Var::Z, Var::T);
      const auto c = q2_.eval_raw({x, y, 1, 0, 0});
      const int n = quadratic_roots(f, a, b, c, ts);
      if (n < 0) {
        for (std::uint32_t t = 0; t < size; ++t) {
          if (!handle_t(x, y, t)) return false;
        }
      } else {
        for (int i = 0; i < n; ++i) {
          if (!handle_t(x, y, ts[static_cast<std::size_t>(i)])) return false;
        }
      }
      continue;
    }
    for (std::uint32_t t = 0; t < size; ++t) {
      // q2 is linear in U here: beta2 U + gamma2.
      const auto beta2 = f.mul(at(c2, Var::X, Var::U), x) ^ f.mul(at(c2, Var::Y, Var::U), y) ^
                         at(c2, Var::Z, Var::U) ^ f.mul(at(c2, Var::T, Var::U), t);
      const auto gamma2 = q2_.eval_raw({x, y, 1, t, 0});
      if (beta2 != 0) {
        const auto u = f.div(gamma2, beta2);
        if (q3_.eval_raw({x, y, 1, t, u}) == 0) {
          if constexpr (Sink::kCountOnly) {
            sink.add(1);
          } else if (!sink.point({x, y, 1, t, u})) {
            return false;
          }
        }
      } else if (gamma2 == 0) {
        if (!handle_t(x, y, t)) return false;
      }
    }
  }
  return true;
}

template <typename Sink>
bool ConeEnumerator::run_z0(Sink& sink) const {
  const auto& f = *field_;
  auto on_curve = [&](const RawPoint& p) { return q2_.eval_raw(p) == 0 && q3_.eval_raw(p) == 0; };
  auto emit = [&](const RawPoint& p) -> bool {
    if (!on_curve(p)) return true;
    if constexpr (Sink::kCountOnly) {
      sink.add(1);
      return true;
    } else {
      return sink.point(p);
    }
  };
  std::array<std::uint32_t, 2> us{};
  const auto& c3 = q3_.raw_coeffs();
  for (std::uint32_t t = 0; t < f.size(); ++t) {
    // (0 : 1 : 0 : t : U)
    const auto beta = c3[static_cast<std::size_t>(idx(Var::Y, Var::U))] ^
                      f.mul(c3[static_cast<std::size_t>(idx(Var::T, Var::U))], t);
    const auto gamma = q3_.eval_raw({0, 1, 0, t, 0});
    const int n = quadratic_roots(f, 1, beta, gamma, us);
    for (int i = 0; i < n; ++i) {
      if (!emit({0, 1, 0, t, us[static_cast<std::size_t>(i)]})) return false;
    }
  }
  for (std::uint32_t u = 0; u < f.size(); ++u) {
    if (!emit({0, 0, 0, 1, u})) return false;
  }
  return emit({0, 0, 0, 0, 1});
}

namespace {

struct CountSink {
  static constexpr bool kCountOnly = true;
  std::uint64_t total = 0;
  void add(std::uint64_t n) { total += n; }
};

struct VisitSink {
  static constexpr bool kCountOnly = false;
  const std::function<bool(const RawPoint&)>* visitor;
  bool point(const RawPoint& p) { return (*visitor)(p); }
};

struct FindSink {
  static constexpr bool kCountOnly = false;
  const std::function<bool(const RawPoint&)>* pred;
  std::optional<RawPoint> hit;
  bool point(const RawPoint& p) {
    if ((*pred)(p)) {
      hit = p;
      return false;
    }
    return true;
  }
};

int clamp_workers(int workers) { return std::max(1, std::min(workers, 64)); }

}  // namespace

std::uint64_t ConeEnumerator::count(int workers) const {
  const std::uint32_t size = field_->size();
  workers = clamp_workers(workers);
  CountSink z0;
  run_z0(z0);
  if (workers == 1 || size < 1024) {
    CountSink s;
    run_slice(0, size, s);
    return s.total + z0.total;
  }
  const std::uint32_t chunks = static_cast<std::uint32_t>(workers) * 8;
  const std::uint32_t step = (size + chunks - 1) / chunks;
  std::atomic<std::uint32_t> next{0};
  std::vector<std::uint64_t> partial(static_cast<std::size_t>(workers), 0);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      CountSink s;
      for (std::uint32_t i = next++; i < chunks; i = next++) {
        const std::uint32_t lo = i * step;
        run_slice(lo, std::min(size, lo + step), s);
      }
      partial[static_cast<std::size_t>(w)] = s.total;
    });
  }
  for (auto& t : pool) t.join();
  std::uint64_t total = z0.total;
  for (auto p : partial) total += p;
  return total;
}

bool ConeEnumerator::visit(const std::function<bool(const RawPoint&)>& visitor) const {
  VisitSink s{&visitor};
  if (!run_slice(0, field_->size(), s)) return false;
  return run_z0(s);
}

std::optional<RawPoint> ConeEnumerator::find_first(const std::function<bool(const RawPoint&)>& pred,
                                                   int workers) const {
  const std::uint32_t size = field_->size();
  workers = clamp_workers(workers);
  const std::uint32_t chunks = workers == 1 ? 1 : static_cast<std::uint32_t>(workers) * 8;
  const std::uint32_t step = (size + chunks - 1) / chunks;
  std::vector<std::optional<RawPoint>> hits(chunks);
  std::atomic<std::uint32_t> next{0};
  std::atomic<std::uint32_t> best{chunks};
  auto work = [&] {
    for (std::uint32_t i = next++; i < chunks; i = next++) {
      if (i > best.load()) continue;
      FindSink s{&pred, std::nullopt};
      const std::uint32_t lo = i * step;
      run_slice(lo, std::min(size, lo + step), s);
      if (s.hit) {
        hits[i] = s.hit;
        std::uint32_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& h : hits) {
    if (h) return h;
  }
  FindSink s{&pred, std::nullopt};
  run_z0(s);
  return s.hit;
}

}  // namespace wittlab
