// JSON state files: {"dims": [..], "matrix": [[[re, im], ...], ...]}
// with the matrix stored row major. Doubles survive a round trip
// bit-exactly (shortest-representation serialization).

#pragma once

#include <fstream>
#include <json.hpp>

#include "catlab/states.hpp"

namespace catlab {

using json = nlohmann::json;

inline json state_to_json(const DensityOperator& rho) {
    json dims = json::array();
    for (int d : rho.dims) dims.push_back(d);
    json matrix = json::array();
    for (Eigen::Index i = 0; i < rho.mat.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < rho.mat.cols(); ++j)
            row.push_back(json::array({rho.mat(i, j).real(), rho.mat(i, j).imag()}));
        matrix.push_back(std::move(row));
    }
    return json{{"dims", std::move(dims)}, {"matrix", std::move(matrix)}};
}

inline DensityOperator state_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dims") || !j.contains("matrix"))
        throw std::invalid_argument("state file: expected an object with 'dims' and 'matrix'");
    Dims dims;
    for (const auto& d : j.at("dims")) {
        if (!d.is_number_integer() || d.get<int>() < 1)
            throw std::invalid_argument("state file: 'dims' must hold positive integers");
        dims.push_back(d.get<int>());
    }
    const Eigen::Index n = total_dim(dims);
    const auto& rows = j.at("matrix");
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n)
        throw std::invalid_argument("state file: 'matrix' row count does not match dims");
    ComplexMatrix mat(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows.at(i);
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            throw std::invalid_argument("state file: 'matrix' must be square");
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto& cell = row.at(k);
            if (!cell.is_array() || cell.size() != 2)
                throw std::invalid_argument("state file: entries must be [re, im] pairs");
            mat(i, k) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
        }
    }
    return DensityOperator(std::move(mat), std::move(dims));
}

inline DensityOperator read_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("state file: cannot open '" + path + "'");
    json j;
    in >> j;
    return state_from_json(j);
}

inline void write_state_file(const std::string& path, const DensityOperator& rho) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("state file: cannot write '" + path + "'");
    out << state_to_json(rho).dump(2) << "\n";
}

}  // namespace catlab
