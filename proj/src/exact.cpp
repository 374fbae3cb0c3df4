#include "gasket/exact.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "gasket/eraser.hpp"
#include "gasket/error.hpp"

namespace gasket {

// ---------------------------------------------------------------------------
// Level-1 crossing chain

namespace {

enum class Phase { before_corner = 0, after_corner = 1 };

enum class Outcome { keep_walking, reach_corner, success, failure };

// What happens when the walk (in `phase`) steps onto u.
Outcome classify_step(Crossing variant, Phase phase, Coord u) {
  const Coord a1 = apex(1);
  const Coord b1 = base_corner(1);
  if (phase == Phase::before_corner) {
    if (u == origin || !on_level_grid(u, 1)) return Outcome::keep_walking;
    if (u == a1) return variant == Crossing::direct ? Outcome::success : Outcome::failure;
    if (u == b1) return variant == Crossing::via_corner ? Outcome::reach_corner : Outcome::failure;
    return Outcome::failure;
  }
  if (u == b1 || !on_level_grid(u, 1)) return Outcome::keep_walking;
  return u == a1 ? Outcome::success : Outcome::failure;
}

// Running chronological loop erasure: append u, or cut back to its earlier visit.
Path extend_erased(const Path& p, Coord u) {
  const auto it = std::find(p.begin(), p.end(), u);
  if (it != p.end()) return Path(p.begin(), it + 1);
  Path q = p;
  q.push_back(u);
  return q;
}

// Normalisers of the two events: by the symmetry of the four G_1 vertices
// around O, each is hit first with probability 1/4; from b_1, likewise.
Rational event_probability(Crossing variant) {
  return variant == Crossing::direct ? Rational(1, 4) : Rational(1, 16);
}

struct State {
  Path path;
  Phase phase;
  auto operator<=>(const State&) const = default;
};

struct Row {
  std::map<std::size_t, Rational> coef;
  std::map<std::size_t, Rational> rhs;  // outcome index -> constant
};

}  // namespace

ShapeLaw solve_shape_distribution(Crossing variant) {
  std::map<State, std::size_t> index;
  std::vector<State> states;
  std::map<Path, std::size_t> outcome_index;
  std::vector<Path> outcomes;
  std::vector<Row> rows;

  const auto state_id = [&](const State& s) {
    auto [it, inserted] = index.try_emplace(s, states.size());
    if (inserted) {
      states.push_back(s);
      rows.emplace_back();
    }
    return it->second;
  };
  const auto outcome_id = [&](const Path& p) {
    auto [it, inserted] = outcome_index.try_emplace(p, outcomes.size());
    if (inserted) outcomes.push_back(p);
    return it->second;
  };

  const Rational quarter(1, 4);
  state_id({Path{origin}, Phase::before_corner});
  for (std::size_t s = 0; s < states.size(); ++s) {
    const State cur = states[s];
    for (const Coord u : neighbors(cur.path.back())) {
      const Path next = extend_erased(cur.path, u);
      switch (classify_step(variant, cur.phase, u)) {
        case Outcome::failure: break;
        case Outcome::success: rows[s].rhs[outcome_id(next)] += quarter; break;
        case Outcome::keep_walking: {
          const std::size_t t = state_id({next, cur.phase});
          rows[s].coef[t] += quarter;
          break;
        }
        case Outcome::reach_corner: {
          const std::size_t t = state_id({next, Phase::after_corner});
          rows[s].coef[t] += quarter;
          break;
        }
      }
    }
  }

  // h = C h + R. Eliminate later phases and longer erased paths first; they only
  // feed into prefixes, which keeps the fill-in small.
  const std::size_t n = states.size();
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto key = [&](std::size_t s) {
      return std::make_tuple(-static_cast<int>(states[s].phase), -static_cast<long>(states[s].path.size()), s);
    };
    return key(a) < key(b);
  });

  std::vector<std::set<std::size_t>> users(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (const auto& [t, c] : rows[r].coef) {
      if (t != r) users[t].insert(r);
    }
  }
  std::vector<bool> eliminated(n, false);
  for (const std::size_t s : order) {
    Row& row = rows[s];
    Rational pivot(1);
    if (auto it = row.coef.find(s); it != row.coef.end()) {
      pivot -= it->second;
      row.coef.erase(it);
    }
    if (pivot == 0) throw error(errc::singular_system, "zero pivot while solving the crossing chain");
    for (auto& [t, c] : row.coef) c /= pivot;
    for (auto& [o, c] : row.rhs) c /= pivot;
    for (const std::size_t r : users[s]) {
      if (eliminated[r]) continue;
      Row& target = rows[r];
      const auto it = target.coef.find(s);
      if (it == target.coef.end()) continue;
      const Rational factor = it->second;
      target.coef.erase(it);
      for (const auto& [t, c] : row.coef) {
        target.coef[t] += factor * c;
        if (t != r) users[t].insert(r);
      }
      for (const auto& [o, c] : row.rhs) target.rhs[o] += factor * c;
    }
    eliminated[s] = true;
  }

  // Back-substitution in reverse elimination order.
  std::vector<std::map<std::size_t, Rational>> solution(n);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t s = *it;
    std::map<std::size_t, Rational> h = rows[s].rhs;
    for (const auto& [t, c] : rows[s].coef) {
      for (const auto& [o, v] : solution[t]) h[o] += c * v;
    }
    solution[s] = std::move(h);
  }

  ShapeLaw law;
  law.variant = variant;
  law.states = n;
  Rational total(0);
  for (const auto& [o, v] : solution[0]) {
    if (v == 0) continue;
    law.mass[outcomes[o]] = v;
    total += v;
  }
  law.event_probability = total;
  for (auto& [p, v] : law.mass) v /= total;
  return law;
}

ShapeTable build_shape_table() {
  const ShapeLaw direct = solve_shape_distribution(Crossing::direct);
  const ShapeLaw via = solve_shape_distribution(Crossing::via_corner);
  std::map<Path, ShapeRecord> merged;
  for (const auto& [p, v] : direct.mass) merged[p].p_direct = v;
  for (const auto& [p, v] : via.mass) merged[p].p_via = v;

  ShapeTable table;
  for (auto& [p, rec] : merged) {
    rec.path = p;
    const Skeleton sk = skeleton(p, 0);
    rec.s1 = sk.count(CellKind::type1);
    rec.s2 = sk.count(CellKind::type2);
    table.shapes.push_back(rec);
  }
  std::sort(table.shapes.begin(), table.shapes.end(), [](const ShapeRecord& a, const ShapeRecord& b) {
    return std::make_tuple(a.p_direct == 0, a.path.size(), a.path) <
           std::make_tuple(b.p_direct == 0, b.path.size(), b.path);
  });
  for (std::size_t k = 0; k < table.shapes.size(); ++k) table.shapes[k].id = "w" + std::to_string(k + 1);
  return table;
}

const ShapeTable& standard_shape_table() {
  static const ShapeTable table = build_shape_table();
  return table;
}

std::map<Path, Rational> crossing_path_law(Crossing variant, int max_steps) {
  if (max_steps < 1) throw error(errc::invalid_argument, "max_steps must be positive");
  std::map<Path, Rational> law;
  const Rational norm = event_probability(variant);
  Path w{origin};
  std::function<void(Phase, Rational)> walk = [&](Phase phase, Rational mass) {
    if (static_cast<int>(w.size()) - 1 == max_steps) return;
    const Rational next_mass = mass / 4;
    for (const Coord u : neighbors(w.back())) {
      w.push_back(u);
      switch (classify_step(variant, phase, u)) {
        case Outcome::failure: break;
        case Outcome::success: law[w] += next_mass / norm; break;
        case Outcome::keep_walking: walk(phase, next_mass); break;
        case Outcome::reach_corner: walk(Phase::after_corner, next_mass); break;
      }
      w.pop_back();
    }
  };
  walk(Phase::before_corner, Rational(1));
  return law;
}

// ---------------------------------------------------------------------------
// Polynomials

BivariatePoly BivariatePoly::constant(const Rational& c) {
  BivariatePoly p;
  p.add_term(0, 0, c);
  return p;
}

BivariatePoly BivariatePoly::x() {
  BivariatePoly p;
  p.add_term(1, 0, Rational(1));
  return p;
}

BivariatePoly BivariatePoly::y() {
  BivariatePoly p;
  p.add_term(0, 1, Rational(1));
  return p;
}

void BivariatePoly::add_term(int dx, int dy, const Rational& c) {
  if (dx < 0 || dy < 0) throw error(errc::invalid_argument, "negative exponent");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace({dx, dy}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational BivariatePoly::coefficient(int dx, int dy) const {
  const auto it = terms_.find({dx, dy});
  return it == terms_.end() ? Rational(0) : it->second;
}

int BivariatePoly::total_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.first + m.second);
  return d;
}

BivariatePoly BivariatePoly::operator+(const BivariatePoly& o) const {
  BivariatePoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m.first, m.second, c);
  return r;
}

namespace {

using boost::multiprecision::mpz_int;

// Coefficients scaled to integers by the lcm of their denominators.
struct IntegerForm {
  mpz_int scale{1};
  std::vector<std::pair<BivariatePoly::Monomial, mpz_int>> terms;
  int max_x = 0;
  int max_y = 0;
};

IntegerForm integer_form(const std::map<BivariatePoly::Monomial, Rational>& terms) {
  IntegerForm f;
  for (const auto& [m, c] : terms) {
    f.scale = boost::multiprecision::lcm(f.scale, mpz_int(boost::multiprecision::denominator(c)));
    f.max_x = std::max(f.max_x, m.first);
    f.max_y = std::max(f.max_y, m.second);
  }
  for (const auto& [m, c] : terms) {
    f.terms.emplace_back(m, mpz_int(boost::multiprecision::numerator(c)) *
                                (f.scale / mpz_int(boost::multiprecision::denominator(c))));
  }
  return f;
}

}  // namespace

BivariatePoly BivariatePoly::operator*(const BivariatePoly& o) const {
  // Integer accumulation on a dense grid avoids a gcd per partial product.
  const IntegerForm a = integer_form(terms_);
  const IntegerForm b = integer_form(o.terms_);
  const int width = a.max_y + b.max_y + 1;
  std::vector<mpz_int> acc(static_cast<std::size_t>((a.max_x + b.max_x + 1) * width));
  for (const auto& [m1, c1] : a.terms) {
    for (const auto& [m2, c2] : b.terms) {
      acc[static_cast<std::size_t>((m1.first + m2.first) * width + m1.second + m2.second)] += c1 * c2;
    }
  }
  const mpz_int scale = a.scale * b.scale;
  BivariatePoly r;
  for (std::size_t k = 0; k < acc.size(); ++k) {
    if (acc[k] == 0) continue;
    r.terms_.emplace_hint(r.terms_.end(), Monomial{static_cast<int>(k) / width, static_cast<int>(k) % width},
                          Rational(acc[k], scale));
  }
  return r;
}

BivariatePoly BivariatePoly::operator*(const Rational& c) const {
  BivariatePoly r;
  for (const auto& [m, v] : terms_) r.add_term(m.first, m.second, v * c);
  return r;
}

BivariatePoly BivariatePoly::pow(int e) const {
  if (e < 0) throw error(errc::invalid_argument, "negative power");
  BivariatePoly result = constant(Rational(1));
  BivariatePoly base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

BivariatePoly BivariatePoly::compose(const BivariatePoly& X, const BivariatePoly& Y) const {
  int max_x = 0;
  int max_y = 0;
  for (const auto& [m, c] : terms_) {
    max_x = std::max(max_x, m.first);
    max_y = std::max(max_y, m.second);
  }
  std::vector<BivariatePoly> xp{constant(Rational(1))};
  std::vector<BivariatePoly> yp{constant(Rational(1))};
  for (int k = 1; k <= max_x; ++k) xp.push_back(xp.back() * X);
  for (int k = 1; k <= max_y; ++k) yp.push_back(yp.back() * Y);
  BivariatePoly r;
  for (const auto& [m, c] : terms_) r = r + (xp[m.first] * yp[m.second]) * c;
  return r;
}

Rational BivariatePoly::evaluate(const Rational& x, const Rational& y) const {
  Rational s(0);
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (int k = 0; k < m.first; ++k) t *= x;
    for (int k = 0; k < m.second; ++k) t *= y;
    s += t;
  }
  return s;
}

Real BivariatePoly::evaluate(const Real& x, const Real& y) const {
  Real s = 0;
  for (const auto& [m, c] : terms_) s += to_real(c) * boost::multiprecision::pow(x, m.first) *
                                         boost::multiprecision::pow(y, m.second);
  return s;
}

Rational BivariatePoly::dx_at_one() const {
  Rational s(0);
  for (const auto& [m, c] : terms_) s += c * m.first;
  return s;
}

Rational BivariatePoly::dy_at_one() const {
  Rational s(0);
  for (const auto& [m, c] : terms_) s += c * m.second;
  return s;
}

std::string BivariatePoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << gasket::to_string(c);
    if (m.first > 0) os << "*x" << (m.first > 1 ? "^" + std::to_string(m.first) : "");
    if (m.second > 0) os << "*y" << (m.second > 1 ? "^" + std::to_string(m.second) : "");
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Offspring laws

OffspringLaws reference_offspring_laws() {
  OffspringLaws r;
  const Rational p(1, 30);
  r.phi.add_term(2, 0, 15 * p);
  r.phi.add_term(1, 1, 8 * p);
  r.phi.add_term(0, 2, 1 * p);
  r.phi.add_term(2, 1, 2 * p);
  r.phi.add_term(3, 0, 4 * p);
  const Rational q(1, 45);
  r.theta.add_term(2, 0, 5 * q);
  r.theta.add_term(1, 1, 11 * q);
  r.theta.add_term(0, 2, 2 * q);
  r.theta.add_term(2, 1, 14 * q);
  r.theta.add_term(3, 0, 8 * q);
  r.theta.add_term(1, 2, 5 * q);
  return r;
}

OffspringLaws build_phi_theta(const ShapeTable& table, bool check) {
  OffspringLaws laws;
  for (const ShapeRecord& r : table.shapes) {
    laws.phi.add_term(r.s1, r.s2, r.p_direct);
    laws.theta.add_term(r.s1, r.s2, r.p_via);
  }
  if (check) {
    const OffspringLaws ref = reference_offspring_laws();
    if (!(laws.phi == ref.phi)) {
      throw error(errc::mismatch_with_reference, "direct offspring law " + laws.phi.to_string() +
                                                     " differs from reference " + ref.phi.to_string());
    }
    if (!(laws.theta == ref.theta)) {
      throw error(errc::mismatch_with_reference, "via-corner offspring law " + laws.theta.to_string() +
                                                     " differs from reference " + ref.theta.to_string());
    }
  }
  return laws;
}

OffspringLaws compose_level(const OffspringLaws& base, int n, int cap) {
  if (n < 1) throw error(errc::invalid_argument, "compose_level needs n >= 1");
  if (n > cap) {
    throw error(errc::cap_exceeded,
                "composition to level " + std::to_string(n) + " exceeds the cap of " + std::to_string(cap));
  }
  OffspringLaws cur = base;
  for (int k = 1; k < n; ++k) {
    cur = OffspringLaws{base.phi.compose(cur.phi, cur.theta), base.theta.compose(cur.phi, cur.theta)};
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Mean matrix and spectrum

Matrix2 Matrix2::operator*(const Matrix2& o) const {
  Matrix2 r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) r.a[i][j] = a[i][0] * o.a[0][j] + a[i][1] * o.a[1][j];
  }
  return r;
}

Matrix2 Matrix2::pow(int e) const {
  if (e < 0) throw error(errc::invalid_argument, "negative matrix power");
  Matrix2 result{{{{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}}};
  Matrix2 base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

Matrix2 mean_matrix(const OffspringLaws& laws) {
  return Matrix2{{{{laws.phi.dx_at_one(), laws.phi.dy_at_one()}, {laws.theta.dx_at_one(), laws.theta.dy_at_one()}}}};
}

EigenData eigen_data(const Matrix2& m) {
  const Real tr = to_real(m.trace());
  const Real det = to_real(m.det());
  const Real disc = tr * tr - 4 * det;
  if (disc < 0) throw error(errc::invalid_argument, "mean matrix has complex eigenvalues");
  const Real root = sqrt(disc);
  EigenData e;
  e.lambda = (tr + root) / 2;
  e.lambda_minor = (tr - root) / 2;
  const Real m11 = to_real(m.a[0][0]);
  // (M - lambda) u = 0 from the first row; v (M - lambda) = 0 from the first column
  std::array<Real, 2> u{to_real(m.a[0][1]), e.lambda - m11};
  std::array<Real, 2> v{to_real(m.a[1][0]), e.lambda - m11};
  const Real nu = sqrt(u[0] * u[0] + u[1] * u[1]);
  const Real nv = sqrt(v[0] * v[0] + v[1] * v[1]);
  e.u = {u[0] / nu, u[1] / nu};
  e.v = {v[0] / nv, v[1] / nv};
  e.dimension = log(e.lambda) / log(Real(2));
  return e;
}

// ---------------------------------------------------------------------------
// Moments

namespace {

using Series = std::vector<Real>;

Series series_mul(const Series& a, const Series& b, std::size_t order) {
  Series r(order + 1, Real(0));
  for (std::size_t i = 0; i < a.size() && i <= order; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size() && i + j <= order; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

Series series_pow(const Series& a, int e, std::size_t order) {
  Series r(order + 1, Real(0));
  r[0] = 1;
  for (int k = 0; k < e; ++k) r = series_mul(r, a, order);
  return r;
}

// F(psi_1, psi_2) as a truncated series.
Series compose_series(const BivariatePoly& f, const Series& s1, const Series& s2, std::size_t order) {
  Series r(order + 1, Real(0));
  for (const auto& [m, c] : f.terms()) {
    const Series t = series_mul(series_pow(s1, m.first, order), series_pow(s2, m.second, order), order);
    const Real cr = to_real(c);
    for (std::size_t k = 0; k <= order; ++k) r[k] += cr * t[k];
  }
  return r;
}

}  // namespace

MomentTable moment_table(int order, const OffspringLaws& laws, const EigenData& eig) {
  if (order < 1) throw error(errc::invalid_argument, "moment order must be at least 1");
  const Matrix2 mm = mean_matrix(laws);
  const std::array<std::array<Real, 2>, 2> m{{{to_real(mm.a[0][0]), to_real(mm.a[0][1])},
                                              {to_real(mm.a[1][0]), to_real(mm.a[1][1])}}};
  const std::size_t k_max = static_cast<std::size_t>(order);
  // a[i][k] = E[B_i^k] / k!
  std::array<Series, 2> a{Series(k_max + 1, Real(0)), Series(k_max + 1, Real(0))};
  a[0][0] = a[1][0] = 1;
  const Real vu = eig.v[0] * eig.u[0] + eig.v[1] * eig.u[1];
  a[0][1] = eig.u[0] / vu;
  a[1][1] = eig.u[1] / vu;

  Real lambda_k = eig.lambda;
  for (std::size_t k = 2; k <= k_max; ++k) {
    lambda_k *= eig.lambda;
    // with a_k still zero, the t^k coefficient of F(psi) is the forcing term r_k
    const Series f1 = compose_series(laws.phi, a[0], a[1], k);
    const Series f2 = compose_series(laws.theta, a[0], a[1], k);
    const Real r1 = f1[k];
    const Real r2 = f2[k];
    const Real b11 = lambda_k - m[0][0];
    const Real b12 = -m[0][1];
    const Real b21 = -m[1][0];
    const Real b22 = lambda_k - m[1][1];
    const Real det = b11 * b22 - b12 * b21;
    const Real scale = abs(b11 * b22) + abs(b12 * b21);
    if (abs(det) <= scale * Real("1e-40")) {
      throw error(errc::ill_conditioned_system, "moment system of order " + std::to_string(k) + " is singular");
    }
    a[0][k] = (r1 * b22 - b12 * r2) / det;
    a[1][k] = (b11 * r2 - b21 * r1) / det;
  }

  MomentTable table;
  table.lambda = eig.lambda;
  Real factorial = 1;
  for (std::size_t k = 0; k <= k_max; ++k) {
    if (k > 0) factorial *= static_cast<unsigned>(k);
    table.moments.push_back({a[0][k] * factorial, a[1][k] * factorial});
  }
  return table;
}

Real MomentTable::mgf(int i, const Real& t) const {
  if (i < 0 || i > 1) throw error(errc::invalid_argument, "component must be 0 or 1");
  Real sum = 0;
  Real power = 1;
  Real factorial = 1;
  for (std::size_t k = 0; k < moments.size(); ++k) {
    if (k > 0) {
      power *= t;
      factorial *= static_cast<unsigned>(k);
    }
    sum += moments[k][static_cast<std::size_t>(i)] * power / factorial;
  }
  return sum;
}

Real MomentTable::functional_residual(int i, const Real& t, const OffspringLaws& laws) const {
  const Real lhs = mgf(i, lambda * t);
  const BivariatePoly& f = i == 0 ? laws.phi : laws.theta;
  const Real rhs = f.evaluate(mgf(0, t), mgf(1, t));
  return abs(lhs - rhs);
}

}  // namespace gasket
