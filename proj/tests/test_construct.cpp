// Orbit incidence systems, guided design search, verification and induced
// matrices.
#include <algorithm>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "qdes/construct.hpp"

using namespace qdes;

namespace {

MatrixGroup c3_group() {
  FieldSpec f(2, 4);
  return close_group(f, {fixtures::c3_generator()});
}

MatrixGroup c31_group() {
  FieldSpec f(2, 6);
  return close_group(f, {fixtures::c31_generator()});
}

std::vector<Subspace> hyperplanes_gf2_4() {
  FieldSpec f(2, 4);
  return enumerate_subspaces(f, 3);
}

}  // namespace

TEST_CASE("orbit incidence system under the trivial group") {
  FieldSpec f(2, 4);
  MatrixGroup g = close_group(f, {Mat::identity(4)});
  DesignParams p = derive_params(4, 3, 3, 2);
  KramerMesnerSystem km = build_km_system(g, p);

  CHECK(km.two_spaces.count() == 35);
  CHECK(km.blocks.count() == 15);
  for (int t = 0; t < 35; ++t) {
    std::int64_t row_sum = 0;
    for (int k = 0; k < 15; ++k) {
      CHECK((km.inc[t][k] == 0 || km.inc[t][k] == 1));
      row_sum += km.inc[t][k];
    }
    // Each 2-space lies in [v-2 k-2]_q = 3 of all the 3-spaces.
    CHECK(row_sum == gauss_binomial(2, 1, 2));
  }
  // Singleton orbits: the column is the containment indicator of the block.
  for (int k = 0; k < 15; ++k) {
    const Subspace& blk = km.blocks.representative(k);
    for (int i = 0; i < km.points.count(); ++i) {
      bool in = contains(f, blk, km.points.representative(i));
      CHECK(km.columns[k][i] == (in ? 1 : 0));
    }
  }
}

TEST_CASE("orbit incidence system of the order-31 group") {
  MatrixGroup g = c31_group();
  DesignParams p = derive_params(6, 3, 6, 2);
  KramerMesnerSystem km = build_km_system(g, p);

  CHECK(km.two_spaces.count() == 21);
  CHECK(km.blocks.count() == 45);
  for (int t = 0; t < 21; ++t) {
    std::int64_t row_sum = 0;
    for (int k = 0; k < 45; ++k) row_sum += km.inc[t][k];
    CHECK(row_sum == gauss_binomial(4, 1, 2));  // 15 blocks over a 2-space
  }
  // Every point lies in [5 2]_2 = 155 of the 1395 blocks.
  for (int i = 0; i < km.points.count(); ++i) {
    std::int64_t total = 0;
    for (int k = 0; k < 45; ++k) total += km.columns[k][i];
    CHECK(total == gauss_binomial(5, 2, 2));
  }
}

TEST_CASE("orbit rho-columns are representative independent") {
  MatrixGroup g = c3_group();
  DesignParams p = derive_params(4, 3, 3, 2);
  KramerMesnerSystem km = build_km_system(g, p);
  for (int k = 0; k < km.blocks.count(); ++k) {
    auto checked = orbit_rho_column(km.points, km.blocks, k, true);
    CHECK(checked == km.columns[k]);
  }

  // The five block-orbit columns are exactly the columns of the surviving
  // candidate matrix.
  TacticalMatrix good = fixtures::to_matrix(
      km.points, fixtures::c3_point_reps(), fixtures::c3_matrix_good(), 3);
  std::multiset<std::vector<std::int64_t>> from_orbits(km.columns.begin(),
                                                       km.columns.end());
  std::multiset<std::vector<std::int64_t>> from_matrix;
  for (int j = 0; j < good.n(); ++j) from_matrix.insert(good.rho_column(j));
  CHECK(from_orbits == from_matrix);
}

TEST_CASE("guided search finds the hyperplane design") {
  MatrixGroup g = c3_group();
  PointOrbitPartition part = point_orbits(g);
  DesignParams p = derive_params(4, 3, 3, 2);
  KramerMesnerSystem km = build_km_system(g, p);
  auto reps = fixtures::c3_point_reps();

  TacticalMatrix good =
      fixtures::to_matrix(part, reps, fixtures::c3_matrix_good(), 3);
  auto designs = search_designs(km, good);
  REQUIRE(designs.size() == 1);
  CHECK(designs[0].blocks == hyperplanes_gf2_4());
  CHECK(verify_design(p, designs[0].blocks).valid);

  // The eliminated candidate admits no design: its columns do not occur.
  TacticalMatrix rej =
      fixtures::to_matrix(part, reps, fixtures::c3_matrix_rejected(), 3);
  CHECK(search_designs(km, rej).empty());

  // An equation-violating candidate is refused outright.
  TacticalMatrix broken = good;
  broken.rho[0] += 1;
  CHECK_THROWS_AS(search_designs(km, broken), InputError);
}

TEST_CASE("verify_design accepts the reference designs") {
  DesignParams p4 = derive_params(4, 3, 3, 2);
  CHECK(verify_design(p4, hyperplanes_gf2_4()).valid);

  // The complete design: every 3-space of GF(2)^6, a 2-(6,3,15;2) design.
  FieldSpec f6(2, 6);
  DesignParams p6 = derive_params(6, 3, 15, 2);
  CHECK(p6.b == 1395);
  CHECK(verify_design(p6, enumerate_subspaces(f6, 3)).valid);
}

TEST_CASE("verify_design reports deficient 2-spaces after removing a block") {
  DesignParams p = derive_params(4, 3, 3, 2);
  auto blocks = hyperplanes_gf2_4();
  blocks.pop_back();
  VerifyReport rep = verify_design(p, blocks);
  CHECK(!rep.valid);
  bool count_hit = false, coverage_hit = false;
  for (const auto& v : rep.violations) {
    if (v.what == "block count") count_hit = true;
    if (v.what == "2-space coverage") {
      coverage_hit = true;
      CHECK(v.expected == 3);
      CHECK(v.actual == 2);
    }
  }
  CHECK(count_hit);
  CHECK(coverage_hit);

  auto dup = hyperplanes_gf2_4();
  dup[0] = dup[1];
  CHECK(!verify_design(p, dup).valid);
}

TEST_CASE("induced matrix of the hyperplane design under the order-3 group") {
  MatrixGroup g = c3_group();
  PointOrbitPartition part = point_orbits(g);
  DesignParams p = derive_params(4, 3, 3, 2);

  TacticalMatrix induced = induced_matrix(g, part, hyperplanes_gf2_4());
  CHECK(check_equations(p, induced).empty());

  TacticalMatrix good = fixtures::to_matrix(
      part, fixtures::c3_point_reps(), fixtures::c3_matrix_good(), 3);
  CHECK(canonical_columns(induced) == canonical_columns(good));

  // Necessary conditions never reject a matrix realized by a design.
  ThirdPointTable t = third_point_table(part);
  FilterReport rep = filter_matrices({induced}, p, part.sizes(), t);
  CHECK(rep.accepted.size() == 1);
}

TEST_CASE("induced matrix under the trivial group is the incidence matrix") {
  FieldSpec f(2, 4);
  MatrixGroup g = close_group(f, {Mat::identity(4)});
  PointOrbitPartition part = point_orbits(g);
  auto blocks = hyperplanes_gf2_4();

  TacticalMatrix induced = induced_matrix(g, part, blocks);
  CHECK(induced.m() == 15);
  CHECK(induced.n() == 15);
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j) {
      // Column order follows canonical block order.
      bool in = contains(f, blocks[j], part.representative(i));
      CHECK(induced.rho_at(i, j) == (in ? 1 : 0));
      CHECK(induced.kappa_at(i, j) == induced.rho_at(i, j));
    }
}

TEST_CASE("induced matrix rejects a non-invariant block set") {
  MatrixGroup g = c3_group();
  PointOrbitPartition part = point_orbits(g);
  auto blocks = hyperplanes_gf2_4();
  blocks.pop_back();  // no longer closed under the group
  CHECK_THROWS_AS(induced_matrix(g, part, blocks), InputError);
}

TEST_CASE("order-31 guided search round trip") {
  MatrixGroup g = c31_group();
  DesignParams p = derive_params(6, 3, 6, 2);
  KramerMesnerSystem km = build_km_system(g, p);
  PointOrbitPartition part = km.points;

  TacticalMatrix target = fixtures::to_matrix(
      part, fixtures::c31_point_reps(), fixtures::c31_matrix_constructible(),
      31);

  auto designs = search_designs(km, target, 2);
  REQUIRE(designs.size() == 2);
  for (const auto& d : designs) {
    CHECK(d.blocks.size() == 558);
    CHECK(verify_design(p, d.blocks).valid);
    TacticalMatrix induced = induced_matrix(g, part, d.blocks);
    CHECK(canonical_columns(induced) == canonical_columns(target));
    CHECK(check_equations(p, induced).empty());

    // The block set is a union of orbits: group elements permute it.
    std::set<Subspace> set(d.blocks.begin(), d.blocks.end());
    for (const auto& el : g.elements)
      for (const auto& blk : d.blocks)
        CHECK(set.contains(apply(g.spec, blk, el)));
  }
  CHECK(designs[0].selected_orbits != designs[1].selected_orbits);

  auto one = search_designs(km, target, 1);
  CHECK(one.size() == 1);
}

TEST_CASE("duality holds with counts taken directly from a design") {
  MatrixGroup g = c3_group();
  PointOrbitPartition part = point_orbits(g);
  auto blocks = hyperplanes_gf2_4();
  TacticalMatrix induced = induced_matrix(g, part, blocks);
  for (int i = 0; i < induced.m(); ++i)
    for (int j = 0; j < induced.n(); ++j)
      CHECK(induced.sizes[i] * induced.rho_at(i, j) ==
            induced.lengths[j] * induced.kappa_at(i, j));
}
