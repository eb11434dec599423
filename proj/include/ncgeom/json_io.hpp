#pragma once

// JSON form of matrix tuples: {"d":..,"n":..,"entries":[coord, ...]} where
// each coord is a row-major list of [re, im] pairs. Doubles round-trip
// bit-exactly through nlohmann's shortest representation.

#include <json.hpp>

#include <string>

#include "ncgeom/core.hpp"

namespace ncgeom {

using json = nlohmann::json;

template <class Real>
json to_json(const MatrixTuple<Real>& x) {
  json entries = json::array();
  for (const auto& m : x.coords()) {
    json coord = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        coord.push_back({static_cast<double>(m(i, j).real()), static_cast<double>(m(i, j).imag())});
    entries.push_back(std::move(coord));
  }
  return json{{"d", x.dim()}, {"n", x.level()}, {"entries", std::move(entries)}};
}

template <class Real = double>
MatrixTuple<Real> tuple_from_json(const json& j) {
  try {
    const int d = j.at("d").get<int>();
    const long n = j.at("n").get<long>();
    if (d < 1 || n < 1) throw invalid_input("tuple JSON: d and n must be positive");
    const json& entries = j.at("entries");
    if (!entries.is_array() || static_cast<int>(entries.size()) != d)
      throw invalid_input("tuple JSON: entries must hold d coordinates");
    std::vector<CMatrix<Real>> c;
    for (const auto& coord : entries) {
      if (!coord.is_array() || static_cast<long>(coord.size()) != n * n)
        throw invalid_input("tuple JSON: each coordinate needs n*n entries");
      CMatrix<Real> m(n, n);
      for (long k = 0; k < n * n; ++k) {
        const json& e = coord[static_cast<std::size_t>(k)];
        if (!e.is_array() || e.size() != 2) throw invalid_input("tuple JSON: entries are [re, im] pairs");
        m(k / n, k % n) = Complex<Real>(Real(e[0].get<double>()), Real(e[1].get<double>()));
      }
      c.push_back(std::move(m));
    }
    return MatrixTuple<Real>(std::move(c));
  } catch (const json::exception& e) {
    throw invalid_input(std::string("tuple JSON: ") + e.what());
  }
}

}  // namespace ncgeom
