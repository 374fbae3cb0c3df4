#pragma once

// Exact laws of the loop-erased level-1 crossings and everything derived from
// them: the offspring generating functions, their iterates, the mean matrix,
// its Perron data, and the moments of the limiting length variables.

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gasket/lattice.hpp"
#include "gasket/rational.hpp"
#include "gasket/shape_table.hpp"
#include "gasket/walker.hpp"

namespace gasket {

struct ShapeLaw {
  Crossing variant = Crossing::direct;
  /// Probability that an unconditioned walk from O realises the crossing event.
  Rational event_probability;
  /// Law of the loop-erased crossing, conditioned on the event.
  std::map<Path, Rational> mass;
  /// Number of transient states of the chain that was solved.
  std::size_t states = 0;
};

/// Solve the walk-with-running-loop-erasure chain exactly.
/// Throws error(singular_system) if elimination meets a zero pivot.
ShapeLaw solve_shape_distribution(Crossing variant);

/// Both laws merged, with ids w1, w2, ... in canonical order: shapes of L X_1
/// first, then those reachable only through b_1; by length, then by vertex sequence.
ShapeTable build_shape_table();

/// The table built once per process.
const ShapeTable& standard_shape_table();

/// Law of the level-1 crossing itself (not erased), restricted to paths of at most
/// `max_steps` steps. Exact; the missing mass is that of longer paths.
std::map<Path, Rational> crossing_path_law(Crossing variant, int max_steps);

class BivariatePoly {
 public:
  using Monomial = std::pair<int, int>;

  BivariatePoly() = default;
  static BivariatePoly constant(const Rational& c);
  static BivariatePoly x();
  static BivariatePoly y();

  void add_term(int dx, int dy, const Rational& c);
  Rational coefficient(int dx, int dy) const;
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  int total_degree() const;

  BivariatePoly operator+(const BivariatePoly& o) const;
  BivariatePoly operator*(const BivariatePoly& o) const;
  BivariatePoly operator*(const Rational& c) const;
  BivariatePoly pow(int e) const;
  /// this(X, Y).
  BivariatePoly compose(const BivariatePoly& X, const BivariatePoly& Y) const;
  Rational evaluate(const Rational& x, const Rational& y) const;
  Real evaluate(const Real& x, const Real& y) const;
  /// Partial derivatives at (1, 1).
  Rational dx_at_one() const;
  Rational dy_at_one() const;

  friend bool operator==(const BivariatePoly&, const BivariatePoly&) = default;
  std::string to_string() const;

 private:
  std::map<Monomial, Rational> terms_;
};

/// Generating functions of the skeleton counts (s1, s2) of L X_1 and L X'_1.
struct OffspringLaws {
  BivariatePoly phi;
  BivariatePoly theta;
};

/// Hand-entered reference laws used to cross-check the solver.
OffspringLaws reference_offspring_laws();

/// Read the offspring laws off a shape table. Unless `check` is false, throws
/// error(mismatch_with_reference) if they differ from reference_offspring_laws().
OffspringLaws build_phi_theta(const ShapeTable& table, bool check = true);

/// Laws of the unit-skeleton counts of L X_n and L X'_n (n = 1 gives `base`).
/// Throws error(cap_exceeded) if n > cap.
OffspringLaws compose_level(const OffspringLaws& base, int n, int cap = 4);

struct Matrix2 {
  std::array<std::array<Rational, 2>, 2> a;

  Matrix2 operator*(const Matrix2& o) const;
  Matrix2 pow(int e) const;
  Rational trace() const { return a[0][0] + a[1][1]; }
  Rational det() const { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }
  friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

/// Mean offspring matrix: rows (dPhi/dx, dPhi/dy), (dTheta/dx, dTheta/dy) at (1, 1).
Matrix2 mean_matrix(const OffspringLaws& laws);

struct EigenData {
  Real lambda;
  Real lambda_minor;
  /// Right and left Perron eigenvectors, positive, unit Euclidean norm.
  std::array<Real, 2> u;
  std::array<Real, 2> v;
  /// log(lambda) / log(2).
  Real dimension;
};

EigenData eigen_data(const Matrix2& m);

/// Moments of the limit lengths: moments[k][i] = E[B_i^k], B_1 of the direct and
/// B_2 of the via-corner crossing, normalised so that (E B_1, E B_2) = u / (v . u).
struct MomentTable {
  std::vector<std::array<Real, 2>> moments;
  Real lambda;

  int order() const { return static_cast<int>(moments.size()) - 1; }
  /// Truncated series sum_k m_k t^k / k! for component i (0 or 1).
  Real mgf(int i, const Real& t) const;
  /// |psi_i(lambda t) - F_i(psi_1(t), psi_2(t))| with the truncated series.
  Real functional_residual(int i, const Real& t, const OffspringLaws& laws) const;
};

/// Throws error(ill_conditioned_system) if a moment system is numerically singular.
MomentTable moment_table(int order, const OffspringLaws& laws, const EigenData& eig);

}  // namespace gasket
