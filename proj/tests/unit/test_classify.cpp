#include <doctest.h>

#include <set>

#include "dagiso/classify.hpp"
#include "support/fixtures.hpp"

using namespace dagiso;
using namespace dagiso::testing;

TEST_CASE("tree enumeration counts") {
  CHECK(tree_dag_count(1) == 1);
  CHECK(tree_dag_count(2) == 2);
  CHECK(tree_dag_count(3) == 12);
  CHECK(tree_dag_count(4) == 128);
  for (int n = 1; n <= 5; ++n) {
    std::uint64_t seen = 0;
    std::set<std::vector<Edge>> distinct;
    for_each_tree_dag(n, [&](const Dag& g) {
      ++seen;
      CHECK(g.edge_count() == static_cast<std::size_t>(n - 1));
      CHECK(is_forest(g));
      distinct.emplace(g.edges().begin(), g.edges().end());
    });
    CHECK(seen == tree_dag_count(n));
    CHECK(distinct.size() == seen);
  }
  CHECK_THROWS_AS(for_each_tree_dag(kMaxTreeNodes + 1, [](const Dag&) {}), SizeGuardError);
}

TEST_CASE("pruefer_decode") {
  using Pairs = std::vector<std::pair<Node, Node>>;
  const std::vector<Node> star{0, 0}, path{1, 2};
  CHECK(pruefer_decode(4, star) == Pairs{{0, 1}, {0, 2}, {0, 3}});
  CHECK(pruefer_decode(4, path) == Pairs{{0, 1}, {1, 2}, {2, 3}});
  CHECK(pruefer_decode(2, {}) == Pairs{{0, 1}});
}

TEST_CASE("canonical_pattern separates exactly the isomorphism classes (all DAGs, n <= 4)") {
  CHECK(canonical_pattern(chain3()) == canonical_pattern(fork3()));
  CHECK(canonical_pattern(chain3()) != canonical_pattern(collider3()));
  for (int n = 1; n <= 4; ++n) {
    const auto dags = enumerate_all_dags(n);
    std::vector<std::string> canon;
    std::vector<Pattern> pats;
    for (const Dag& g : dags) {
      canon.push_back(canonical_pattern(g));
      pats.push_back(pattern(g));
    }
    const std::size_t step = n == 4 ? 3 : 1;
    for (std::size_t a = 0; a < dags.size(); ++a)
      for (std::size_t b = a % step; b < dags.size(); b += step)
        REQUIRE((canon[a] == canon[b]) == pattern_isomorphic(pats[a], pats[b]).has_value());
  }
}

TEST_CASE("classify_trees counts for small n in every mode") {
  const std::vector<std::size_t> expected{1, 1, 2, 5, 14};
  for (int n = 1; n <= 5; ++n)
    for (ClassifyMode mode : {ClassifyMode::kOracle, ClassifyMode::kRandomized, ClassifyMode::kCrossCheck}) {
      const ClassReport r = classify_trees(n, mode);
      CHECK(r.class_count == expected[static_cast<std::size_t>(n - 1)]);
      CHECK(r.representatives.size() == r.class_count);
      std::uint64_t sum = 0;
      for (auto s : r.class_sizes) sum += s;
      CHECK(sum == tree_dag_count(n));
      CHECK(r.total == tree_dag_count(n));
      if (mode == ClassifyMode::kOracle) CHECK(r.isodag_calls == 0);
    }
}

TEST_CASE("three-node classes are the collider and the non-collider") {
  const ClassReport r = classify_trees(3, ClassifyMode::kRandomized, {5, kMersenne31, 7});
  REQUIRE(r.class_count == 2);
  std::multiset<std::uint64_t> sizes(r.class_sizes.begin(), r.class_sizes.end());
  CHECK(sizes == std::multiset<std::uint64_t>{3, 9});
  int with_immorality = 0;
  for (const Dag& g : r.representatives) with_immorality += pattern(g).immoralities.empty() ? 0 : 1;
  CHECK(with_immorality == 1);
}

TEST_CASE("representatives are pairwise non-isomorphic trees") {
  const ClassReport r = classify_trees(6, ClassifyMode::kOracle);
  CHECK(r.class_count == 42);
  for (std::size_t a = 0; a < r.representatives.size(); ++a) {
    CHECK(is_forest(r.representatives[a]));
    for (std::size_t b = a + 1; b < r.representatives.size(); ++b)
      CHECK_FALSE(pattern_isomorphic(pattern(r.representatives[a]), pattern(r.representatives[b])).has_value());
  }
}
