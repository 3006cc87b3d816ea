#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pird/errors.hpp"
#include "pird/lattice.hpp"

using namespace pird;

namespace {

Atom atom(std::vector<std::vector<int>> groups, int n = 3) {
  return Atom::from_nested(groups, n);
}

std::set<std::vector<std::uint32_t>> as_masks(const RedundancyLattice& lat) {
  std::set<std::vector<std::uint32_t>> out;
  for (const auto& a : lat.atoms()) {
    std::vector<std::uint32_t> masks;
    for (auto g : a.groups()) masks.push_back(g.mask());
    std::sort(masks.begin(), masks.end());
    out.insert(masks);
  }
  return out;
}

}  // namespace

TEST_CASE("two sources give the four classical atoms in canonical order") {
  const auto lat = enumerate_atoms(2);
  REQUIRE(lat.size() == 4);
  CHECK(lat.atom(0).to_nested() == std::vector<std::vector<int>>{{1}, {2}});
  CHECK(lat.atom(1).to_nested() == std::vector<std::vector<int>>{{1}});
  CHECK(lat.atom(2).to_nested() == std::vector<std::vector<int>>{{2}});
  CHECK(lat.atom(3).to_nested() == std::vector<std::vector<int>>{{1, 2}});
  CHECK(lat.atom(0).to_string() == "{1}{2}");
  CHECK(lat.singleton(1) == 1);
  CHECK(lat.singleton(2) == 2);
}

TEST_CASE("single source lattice has one atom") {
  const auto lat = enumerate_atoms(1);
  REQUIRE(lat.size() == 1);
  CHECK(lat.atom(0).to_nested() == std::vector<std::vector<int>>{{1}});
  CHECK(lat.bottom() == lat.top());
}

TEST_CASE("atom counts match brute-force antichain enumeration") {
  for (int n = 1; n <= 4; ++n) {
    CAPTURE(n);
    const auto lat = enumerate_atoms(n);
    const auto expected = oracle::brute_force_antichains(n);
    CHECK(lat.size() == expected.size());
    CHECK(as_masks(lat) == expected);
  }
  CHECK(enumerate_atoms(3).size() == 18);
  CHECK(enumerate_atoms(4).size() == 166);
}

TEST_CASE("source count bounds") {
  CHECK_THROWS_AS(enumerate_atoms(0), SizeError);
  CHECK_THROWS_AS(enumerate_atoms(5), SizeError);
  CHECK(enumerate_atoms(5, 5).size() == 7579);
  CHECK_THROWS_AS(enumerate_atoms(6, 10), SizeError);
}

TEST_CASE("every enumerated atom is an antichain") {
  const auto lat = enumerate_atoms(4);
  for (const auto& a : lat.atoms()) {
    const auto& g = a.groups();
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (i != j) CHECK_FALSE(g[i].is_subset_of(g[j]));
      }
    }
  }
}

TEST_CASE("precedes examples") {
  CHECK(precedes(atom({{1}, {2}}), atom({{1}})));
  CHECK_FALSE(precedes(atom({{1}}), atom({{2}})));
  CHECK_FALSE(precedes(atom({{2}}), atom({{1}})));
  CHECK(precedes(atom({{1}}), atom({{1, 2}})));
  CHECK_FALSE(precedes(atom({{1, 2}}), atom({{1}})));
  CHECK(precedes(atom({{1}, {2, 3}}), atom({{1}})));
  CHECK(precedes(atom({{1}, {2, 3}}), atom({{2, 3}})));
}

TEST_CASE("precedes is a partial order and the index order extends it") {
  for (int n = 1; n <= 3; ++n) {
    const auto lat = enumerate_atoms(n);
    const std::size_t s = lat.size();
    for (std::size_t a = 0; a < s; ++a) {
      CHECK(lat.precedes(a, a));
      for (std::size_t b = 0; b < s; ++b) {
        CHECK(lat.precedes(a, b) == precedes(lat.atom(a), lat.atom(b)));
        if (a != b && lat.precedes(a, b)) {
          CHECK_FALSE(lat.precedes(b, a));
          CHECK(a < b);
        }
        for (std::size_t c = 0; c < s; ++c) {
          if (lat.precedes(a, b) && lat.precedes(b, c)) CHECK(lat.precedes(a, c));
        }
      }
    }
  }
}

TEST_CASE("bottom precedes everything, everything precedes top") {
  for (int n = 1; n <= 4; ++n) {
    const auto lat = enumerate_atoms(n);
    CHECK(lat.atom(lat.bottom()).groups().size() == static_cast<std::size_t>(n));
    CHECK(lat.atom(lat.top()).groups().size() == 1);
    CHECK(lat.atom(lat.top()).groups()[0].size() == n);
    for (std::size_t a = 0; a < lat.size(); ++a) {
      CHECK(lat.precedes(lat.bottom(), a));
      CHECK(lat.precedes(a, lat.top()));
    }
  }
}

TEST_CASE("down sets agree with the order") {
  const auto lat = enumerate_atoms(3);
  for (std::size_t b = 0; b < lat.size(); ++b) {
    std::size_t count = 0;
    for (std::size_t a = 0; a < lat.size(); ++a) {
      if (a != b && lat.precedes(a, b)) ++count;
    }
    CHECK(lat.strict_down_set(b).size() == count);
    for (auto a : lat.strict_down_set(b)) CHECK(lat.precedes(a, b));
  }
}

TEST_CASE("Moebius inversion examples") {
  const auto lat = enumerate_atoms(2);
  SUBCASE("fully redundant") {
    const std::vector<double> cum(4, 0.7);
    const auto partial = moebius_invert(lat, cum);
    CHECK(partial[0] == doctest::Approx(0.7));
    for (int i = 1; i < 4; ++i) CHECK(partial[i] == doctest::Approx(0.0));
  }
  SUBCASE("hand-inverted chain") {
    const std::vector<double> cum{0.1, 0.3, 0.1, 0.5};
    const auto partial = moebius_invert(lat, cum);
    CHECK(partial[0] == doctest::Approx(0.1));
    CHECK(partial[1] == doctest::Approx(0.2));
    CHECK(partial[2] == doctest::Approx(0.0));
    CHECK(partial[3] == doctest::Approx(0.2));
  }
  SUBCASE("map input") {
    std::map<Atom, double> cum{{atom({{1}, {2}}, 2), 0.1},
                               {atom({{1}}, 2), 0.3},
                               {atom({{2}}, 2), 0.1},
                               {atom({{1, 2}}, 2), 0.5}};
    const auto partial = moebius_invert(lat, cum);
    CHECK(partial[3] == doctest::Approx(0.2));
    cum.erase(atom({{2}}, 2));
    CHECK_THROWS_AS(moebius_invert(lat, cum), IncompleteInputError);
  }
  SUBCASE("incomplete vectors") {
    const std::vector<double> short_input{0.1, 0.2};
    CHECK_THROWS_AS(moebius_invert(lat, short_input), IncompleteInputError);
    const std::vector<double> with_nan{0.1, std::nan(""), 0.1, 0.5};
    CHECK_THROWS_AS(moebius_invert(lat, with_nan), IncompleteInputError);
  }
}

TEST_CASE("Moebius inversion round trips") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 1; n <= 4; ++n) {
    const auto lat = enumerate_atoms(n);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> v(lat.size());
      for (auto& x : v) x = u(rng);
      const auto back = accumulate(lat, moebius_invert(lat, v));
      const auto forth = moebius_invert(lat, accumulate(lat, v));
      for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(std::abs(back[i] - v[i]) < 1e-12);
        CHECK(std::abs(forth[i] - v[i]) < 1e-12);
      }
    }
  }
}

TEST_CASE("source sets and atoms validate their input") {
  const int dup[] = {1, 1};
  const int out_of_range[] = {4};
  CHECK_THROWS_AS(SourceSet::from_members(dup, 3), SizeError);
  CHECK_THROWS_AS(SourceSet::from_members(out_of_range, 3), SizeError);
  CHECK_THROWS_AS(SourceSet::from_members({}, 3), SizeError);
  CHECK_THROWS_AS(atom({{1}, {1, 2}}), SizeError);
  CHECK_THROWS_AS(Atom(std::vector<SourceSet>{}), SizeError);
  CHECK_THROWS_AS(enumerate_atoms(2).index_of(atom({{3}})), IncompleteInputError);
}

TEST_CASE("source sets order lexicographically") {
  auto s = [](std::vector<int> m) { return SourceSet::from_members(m, 4); };
  CHECK(s({1}) < s({1, 2}));
  CHECK(s({1, 2}) < s({1, 3}));
  CHECK(s({1, 2, 4}) < s({1, 3}));
  CHECK(s({1, 3}) < s({2}));
  CHECK(s({2}) < s({2, 3}));
  CHECK_FALSE(s({2, 3}) < s({2}));
  CHECK(atom({{2}, {1}}).to_nested() == std::vector<std::vector<int>>{{1}, {2}});
}
