#include <doctest.h>

#include <cmath>

#include "lrd/edf.hpp"

using namespace lrd;

TEST_CASE("sort_sample orders values and keeps the index map") {
  const SortedSample s = sort_sample({3.0, 1.0, 2.0});
  CHECK(s.values == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(s.sort_index == std::vector<int>{1, 2, 0});
}

TEST_CASE("sort_sample is stable for ties") {
  const SortedSample s = sort_sample({1.0, 1.0, 2.0});
  CHECK(s.sort_index == std::vector<int>{0, 1, 2});
}

TEST_CASE("sort_sample single element and validation") {
  CHECK(sort_sample({5.0}).n() == 1);
  CHECK_THROWS_AS(sort_sample({}), InvalidInput);
  CHECK_THROWS_AS(sort_sample(std::vector<double>{1.0, std::nan("")}), InvalidInput);
  CHECK_THROWS_AS(sort_sample({1.0, 2.0}, std::vector<double>{1.0}), InvalidInput);
}

TEST_CASE("EDF at sample points") {
  const EdfValues f = edf_at_points(sort_sample({1.0, 2.0, 3.0}));
  CHECK(f.values[0] == doctest::Approx(1.0 / 3));
  CHECK(f.values[1] == doctest::Approx(2.0 / 3));
  CHECK(f.values[2] == doctest::Approx(1.0));
}

TEST_CASE("EDF counts ties inclusively") {
  const EdfValues f = edf_at_points(sort_sample({1.0, 1.0, 2.0}));
  CHECK(f.values[0] == doctest::Approx(2.0 / 3));
  CHECK(f.values[1] == doctest::Approx(2.0 / 3));
  CHECK(f.values[2] == doctest::Approx(1.0));
}

TEST_CASE("weighted EDF matches the weighted-sum definition") {
  const EdfValues f = edf_at_points(sort_sample({1.0, 2.0}, std::vector<double>{2.0, 0.0}));
  CHECK(f.values[0] == doctest::Approx(1.0));
  CHECK(f.values[1] == doctest::Approx(1.0));
}

TEST_CASE("edf_eval is the right-continuous step function") {
  const SortedSample s = sort_sample({1.0, 2.0, 3.0});
  CHECK(edf_eval(s, 2.5) == doctest::Approx(2.0 / 3));
  CHECK(edf_eval(s, 0.0) == 0.0);
  CHECK(edf_eval(s, 3.0) == doctest::Approx(1.0));
  CHECK(edf_eval(s, 2.0) == doctest::Approx(2.0 / 3));  // right-continuity at a jump
}

TEST_CASE("edf_eval agrees with edf_at_points at sample points") {
  const SortedSample s = sort_sample({0.4, -1.0, 0.4, 2.2, 1.7});
  const EdfValues f = edf_at_points(s);
  for (int i = 0; i < s.n(); ++i)
    CHECK(edf_eval(s, s.values[i]) == doctest::Approx(f.values[i]));
}

TEST_CASE("unit weights reproduce the unweighted EDF exactly") {
  const std::vector<double> x = {0.3, -0.2, 1.5, 0.3, 0.9};
  const EdfValues a = edf_at_points(sort_sample(x));
  const EdfValues b = edf_at_points(sort_sample(x, std::vector<double>(x.size(), 1.0)));
  CHECK(a.values == b.values);
}
